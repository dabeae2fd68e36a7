//! LT fountain codec: Robust Soliton degrees, seeded symbol generation and
//! peeling decoding.

mod decoder;
mod distribution;
mod symbol;

pub use decoder::{PeelingDecoder, Progress};
pub use distribution::DegreeDistribution;
pub use symbol::{encode_symbol, neighbors, EncodedSymbol, LtEncoder, MessageSymbol, WIRE_LEN};

/// Feeds symbols with seeds `base_seed, base_seed + 1, ...` into a fresh
/// decoder until it completes or `limit` symbols were consumed. Returns the
/// decoder and the per-symbol count of newly recovered indices.
pub fn decode_lossless(
    message: &[u32],
    dist: &DegreeDistribution,
    base_seed: u64,
    limit: usize,
) -> (PeelingDecoder, Vec<usize>) {
    let mut dec = PeelingDecoder::new(dist.k());
    let mut jumps = Vec::new();
    let mut seed = base_seed;
    while !dec.is_complete() && dec.consumed() < limit {
        let sym = encode_symbol(message, dist, seed);
        jumps.push(dec.ingest(&sym, dist).expect("same distribution"));
        seed = seed.wrapping_add(1);
    }
    (dec, jumps)
}
