//! Recovery curve of a lossless LT session: almost nothing is recovered
//! until late, then most symbols resolve at once.
//!
//! ```bash
//! cargo run --release --example chain_reaction -- [k] [seed]
//! ```

use fountain_gprs::lt::{decode_lossless, DegreeDistribution};
use fountain_gprs::rng::SplitMix64;

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    let dist = DegreeDistribution::robust_soliton(k, 0.1, 0.5)?;
    let mut rng = SplitMix64::new(seed);
    let message: Vec<u32> = (0..k).map(|_| rng.next_u32()).collect();
    let (dec, jumps) = decode_lossless(&message, &dist, seed, 3 * k);

    let step = (k / 20).max(1);
    let mut recovered = 0;
    println!("{:>9} {:>10}", "received", "recovered");
    for (i, j) in jumps.iter().enumerate() {
        recovered += j;
        if (i + 1) % step == 0 || i + 1 == jumps.len() {
            let bar = "#".repeat(50 * recovered / k);
            println!("{:>9} {:>10} {bar}", i + 1, recovered);
        }
    }
    let (at, biggest) = jumps.iter().enumerate().max_by_key(|(_, &j)| j).unwrap();
    println!(
        "largest single-symbol jump: {biggest} at symbol {}; inefficiency {:.3}",
        at + 1,
        dec.progress().inefficiency.unwrap_or(f64::NAN)
    );
    Ok(())
}
