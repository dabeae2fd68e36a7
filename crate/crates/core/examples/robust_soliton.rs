//! Robust Soliton degree distribution: parameters, spike and sampling.
//!
//! ```bash
//! cargo run --release --example robust_soliton -- [k] [c] [delta]
//! ```

use fountain_gprs::lt::DegreeDistribution;
use fountain_gprs::rng::SplitMix64;

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let c: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let delta: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.5);

    let dist = DegreeDistribution::robust_soliton(k, c, delta)?;
    println!("k = {k}, c = {c}, delta = {delta}");
    println!("R = {:.4}, spike at {:?}, mean degree {:.3}", dist.r(), dist.spike(), dist.mean_degree());

    let n = 200_000;
    let mut counts = vec![0usize; k + 1];
    let mut rng = SplitMix64::new(1);
    for _ in 0..n {
        counts[dist.sample(&mut rng)] += 1;
    }
    println!("{:>6} {:>10} {:>10}", "degree", "mu(d)", "sampled");
    let mut shown: Vec<usize> = (1..=k.min(10)).collect();
    shown.extend(dist.spike().filter(|&s| s > 10));
    for d in shown {
        println!("{d:>6} {:>10.6} {:>10.6}", dist.prob(d), counts[d] as f64 / n as f64);
    }
    Ok(())
}
