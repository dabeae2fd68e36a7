//! Robust Soliton degree distribution.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Tabulated Robust Soliton distribution `mu(d)` for `d = 1..=k`.
///
/// `pmf[d - 1]` and `cdf[d - 1]` hold the probability mass and cumulative
/// mass of degree `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    k: usize,
    c: f64,
    delta: f64,
    r: f64,
    spike: Option<usize>,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl DegreeDistribution {
    /// Builds the Robust Soliton distribution for `k` message symbols.
    ///
    /// The spike at `k/R` is rounded to the nearest integer in `1..=k`.
    /// When `R > k` the correction term vanishes and the Ideal Soliton is
    /// returned. A negative spike mass (possible when `R < delta`) is
    /// clamped to zero.
    pub fn robust_soliton(k: usize, c: f64, delta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }

        let kf = k as f64;
        let r = c * (kf / delta).ln() * kf.sqrt();

        let mut mass = vec![0.0; k];
        mass[0] = 1.0 / kf;
        for d in 2..=k {
            mass[d - 1] = 1.0 / (d as f64 * (d as f64 - 1.0));
        }

        let spike = if r > kf {
            None
        } else {
            let spike = ((kf / r).round() as usize).clamp(1, k);
            for d in 1..spike {
                mass[d - 1] += r / (d as f64 * kf);
            }
            mass[spike - 1] += (r * (r / delta).ln() / kf).max(0.0);
            Some(spike)
        };

        let beta: f64 = mass.iter().sum();
        let pmf: Vec<f64> = mass.iter().map(|m| m / beta).collect();
        let mut cdf: Vec<f64> = pmf
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        cdf[k - 1] = 1.0;

        Ok(Self {
            k,
            c,
            delta,
            r,
            spike,
            pmf,
            cdf,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `R = c * ln(k / delta) * sqrt(k)`.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Degree carrying the extra spike mass, `None` when the correction term
    /// was dropped.
    pub fn spike(&self) -> Option<usize> {
        self.spike
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Probability of degree `d` (zero outside `1..=k`).
    pub fn prob(&self, d: usize) -> f64 {
        if d == 0 || d > self.k {
            0.0
        } else {
            self.pmf[d - 1]
        }
    }

    /// Inverts the cdf at `u` in `[0, 1)`: the smallest `d` with `cdf(d) > u`.
    pub fn degree_for_uniform(&self, u: f64) -> usize {
        (self.cdf.partition_point(|&c| c <= u) + 1).min(self.k)
    }

    pub fn sample(&self, rng: &mut SplitMix64) -> usize {
        self.degree_for_uniform(rng.next_f64())
    }

    /// Mean degree under the distribution.
    pub fn mean_degree(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }
}
