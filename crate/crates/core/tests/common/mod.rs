//! Reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;

/// Gaussian elimination over GF(2) for `k <= 64`.
///
/// Each equation is a neighbour set and a 32-bit payload. Returns the rank
/// and, when the rank is `k`, the unique solution.
pub fn gf2_solve(k: usize, equations: &[(Vec<u32>, u32)]) -> (usize, Option<Vec<u32>>) {
    assert!(k <= 64);
    let mut rows: Vec<(u64, u32)> = equations
        .iter()
        .map(|(nbrs, p)| (nbrs.iter().fold(0u64, |m, &i| m ^ (1u64 << i)), *p))
        .collect();
    let mut rank = 0;
    let mut pivot_row = vec![usize::MAX; k];
    for col in 0..k {
        let bit = 1u64 << col;
        let Some(r) = (rank..rows.len()).find(|&r| rows[r].0 & bit != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let (pm, pp) = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.0 & bit != 0 {
                row.0 ^= pm;
                row.1 ^= pp;
            }
        }
        pivot_row[col] = rank;
        rank += 1;
    }
    if rank < k {
        return (rank, None);
    }
    let solution = (0..k).map(|c| rows[pivot_row[c]].1).collect();
    (rank, Some(solution))
}

/// Robust Soliton pmf `mu(1..=k)` evaluated term by term from the closed
/// form, without sharing code with the library.
pub fn robust_soliton_scalar(k: usize, c: f64, delta: f64) -> Vec<f64> {
    let kf = k as f64;
    let r = c * (kf / delta).ln() * kf.sqrt();
    let spike = if r > kf {
        None
    } else {
        Some(((kf / r + 0.5).floor() as usize).clamp(1, k))
    };
    let rho = |d: usize| if d == 1 { 1.0 / kf } else { 1.0 / (d as f64 * (d as f64 - 1.0)) };
    let tau = |d: usize| match spike {
        Some(s) if d < s => r / (d as f64 * kf),
        Some(s) if d == s => (r * (r / delta).ln() / kf).max(0.0),
        _ => 0.0,
    };
    let beta: f64 = (1..=k).map(|d| rho(d) + tau(d)).sum();
    (1..=k).map(|d| (rho(d) + tau(d)) / beta).collect()
}

/// Loads a one-value-per-line table with `#` comments.
pub fn load_table(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.trim().parse().expect("number"))
        .collect()
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Standard normal upper tail via erfc from the Abramowitz-Stegun 7.1.26
/// rational approximation (absolute error below 1.5e-7).
pub fn q_function(x: f64) -> f64 {
    let z = x / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.327_591_1 * z.abs());
    let poly = t * (0.254_829_592
        + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    let erfc = poly * (-z * z).exp();
    let erfc = if z >= 0.0 { erfc } else { 2.0 - erfc };
    0.5 * erfc
}
