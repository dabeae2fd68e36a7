//! Block error rate of every transport over a proxy SIR sweep.
//!
//! ```bash
//! cargo run --release --example block_error_rates -- [awgn|fading] [blocks]
//! ```

use fountain_gprs::channel::ChannelModel;
use fountain_gprs::coding::Scheme;
use fountain_gprs::lt::encode_symbol;
use fountain_gprs::pipeline::{Link, PipelineConfig, RawDetection, Transport};

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let model = args.next().unwrap_or_else(|| "fading".into());
    let blocks: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);

    let mut transports = vec![Transport::Raw];
    transports.extend(Scheme::ALL.map(Transport::Coded));

    print!("{:>7}", "SIR dB");
    for t in &transports {
        print!("{:>9}", t.name());
    }
    println!();
    for sir in [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 20.0, 25.0, 30.0] {
        let channel = match model.as_str() {
            "awgn" => ChannelModel::awgn(sir, 11)?,
            _ => ChannelModel::fading(sir, 114, 11)?,
        };
        print!("{sir:>7.1}");
        for &transport in &transports {
            let link = Link::new(PipelineConfig {
                transport,
                channel: channel.clone(),
                k: 64,
                c: 0.1,
                delta: 0.5,
                seed: 1,
                raw_detection: RawDetection::Genie,
            })?;
            let msg = link.message();
            let spb = link.config().symbols_per_block() as u64;
            let mut lost = 0;
            for b in 0..blocks {
                let syms: Vec<_> = (0..spb)
                    .map(|s| encode_symbol(&msg, link.distribution(), b * spb + s))
                    .collect();
                lost += usize::from(!link.send_block(&syms, b)?.delivered);
            }
            print!("{:>9.4}", lost as f64 / blocks as f64);
        }
        println!();
    }
    Ok(())
}
