//! Raw bit error rate of the channel models against SIR.
//!
//! ```bash
//! cargo run --release --example channel_models
//! ```

use fountain_gprs::channel::{hard_decision, ChannelKind, ChannelModel};
use fountain_gprs::rng::SplitMix64;

fn ber(channel: &ChannelModel, blocks: u64) -> fountain_gprs::Result<f64> {
    let mut rng = SplitMix64::new(1);
    let mut errors = 0;
    for b in 0..blocks {
        let bits: Vec<u8> = (0..456).map(|_| (rng.next_u64() & 1) as u8).collect();
        let rx = hard_decision(&channel.transmit(&bits, b)?.values);
        errors += bits.iter().zip(&rx).filter(|(a, b)| a != b).count();
    }
    Ok(errors as f64 / (blocks * 456) as f64)
}

fn main() -> fountain_gprs::Result<()> {
    println!("{:>7} {:>10} {:>10} {:>12}", "SIR dB", "awgn", "fading", "fading/burst");
    for sir in [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 20.0, 30.0] {
        println!(
            "{sir:>7.1} {:>10.2e} {:>10.2e} {:>12.2e}",
            ber(&ChannelModel::awgn(sir, 2)?, 500)?,
            ber(&ChannelModel::fading(sir, 1, 2)?, 500)?,
            ber(&ChannelModel::fading(sir, 114, 2)?, 500)?,
        );
    }
    let bsc = ChannelModel::new(ChannelKind::Bsc { p: 0.01 }, 2)?;
    println!("BSC p = 0.01: {:.4}", ber(&bsc, 500)?);
    Ok(())
}
