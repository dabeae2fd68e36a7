mod common;

use fountain_gprs::channel::{hard_decision, ChannelModel};
use fountain_gprs::rng::SplitMix64;

use common::q_function;

const BLOCK: usize = 456;

/// Hard-decision bit errors over `blocks` random blocks.
fn bit_errors(channel: &ChannelModel, blocks: u64) -> (u64, u64) {
    let mut rng = SplitMix64::new(channel.rng_seed ^ 0x5EED);
    let mut errors = 0;
    for b in 0..blocks {
        let bits: Vec<u8> = (0..BLOCK).map(|_| (rng.next_u64() & 1) as u8).collect();
        let rx = hard_decision(&channel.transmit(&bits, b).unwrap().values);
        errors += bits.iter().zip(&rx).filter(|(a, b)| a != b).count() as u64;
    }
    (errors, blocks * BLOCK as u64)
}

fn within_3_sigma(errors: u64, n: u64, p: f64) -> bool {
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    (errors as f64 - n as f64 * p).abs() <= 3.0 * sigma
}

#[test]
fn awgn_0db_matches_q_function() {
    let (errors, n) = bit_errors(&ChannelModel::awgn(0.0, 1).unwrap(), 2200);
    let p = q_function(2f64.sqrt());
    assert!(within_3_sigma(errors, n, p), "{errors}/{n} vs {p}");
}

#[test]
fn awgn_ber_vanishes_at_high_sir() {
    let mut last = 1.0;
    for sir in [-3.0, 0.0, 3.0, 6.0, 9.0] {
        let (e, n) = bit_errors(&ChannelModel::awgn(sir, 2).unwrap(), 500);
        let ber = e as f64 / n as f64;
        assert!(ber < last, "{sir} dB: {ber}");
        last = ber;
    }
    assert_eq!(bit_errors(&ChannelModel::awgn(20.0, 2).unwrap(), 500).0, 0);
}

#[test]
fn independent_fading_matches_rayleigh_bpsk() {
    for sir in [0.0, 5.0, 10.0] {
        let (errors, n) = bit_errors(&ChannelModel::fading(sir, 1, 3).unwrap(), 2200);
        let g = 10f64.powf(sir / 10.0);
        let p = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
        assert!(within_3_sigma(errors, n, p), "{sir} dB: {errors}/{n} vs {p}");
    }
}

#[test]
fn burst_fading_has_same_mean_ber_but_clustered_errors() {
    let sir = 5.0;
    let g = 10f64.powf(sir / 10.0);
    let p = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
    let (errors, n) = bit_errors(&ChannelModel::fading(sir, 114, 4).unwrap(), 4000);
    let ber = errors as f64 / n as f64;
    // 4 independent gains per block, so use a loose band
    assert!((ber - p).abs() < 0.15 * p, "{ber} vs {p}");
}

#[test]
fn bsc_flip_frequency() {
    let p = 0.03;
    let (errors, n) = bit_errors(
        &ChannelModel::new(fountain_gprs::channel::ChannelKind::Bsc { p }, 5).unwrap(),
        2200,
    );
    assert!(within_3_sigma(errors, n, p), "{errors}/{n}");
}
