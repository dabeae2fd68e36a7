//! Encode a message into LT symbols, serialize them, and decode from a
//! shuffled subset with duplicates.
//!
//! ```bash
//! cargo run --release --example lt_roundtrip -- [k] [overhead]
//! ```

use fountain_gprs::lt::{DegreeDistribution, EncodedSymbol, LtEncoder, PeelingDecoder};
use fountain_gprs::rng::SplitMix64;

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let overhead: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.4);

    let dist = DegreeDistribution::robust_soliton(k, 0.1, 0.5)?;
    let mut rng = SplitMix64::new(7);
    let message: Vec<u32> = (0..k).map(|_| rng.next_u32()).collect();
    let n = (k as f64 * (1.0 + overhead)) as usize;
    let wire: Vec<[u8; 12]> = LtEncoder::new(message.clone(), dist.clone(), 1000)?
        .take(n)
        .map(|s| s.to_wire())
        .collect();

    // receiver sees records in random order, some of them twice
    let mut order: Vec<usize> = (0..n).chain((0..n / 10).map(|i| i * 7 % n)).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.below(i as u64 + 1) as usize);
    }
    let mut dec = PeelingDecoder::new(k);
    for &i in &order {
        dec.ingest(&EncodedSymbol::from_wire(&wire[i], &dist)?, &dist)?;
        if dec.is_complete() {
            break;
        }
    }
    let p = dec.progress();
    println!("{} of {k} recovered after {} records", p.recovered, p.consumed);
    match dec.message() {
        Some(m) => println!("message intact: {}, inefficiency {:.3}", m == message, p.inefficiency.unwrap()),
        None => println!("incomplete; raise the overhead"),
    }
    Ok(())
}
