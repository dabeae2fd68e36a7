//! One LT session per transport over the fading proxy, printing how many
//! blocks each needed.
//!
//! ```bash
//! cargo run --release --example rlc_session -- [sir_db] [k]
//! ```

use fountain_gprs::channel::ChannelModel;
use fountain_gprs::pipeline::{Link, PipelineConfig, RawDetection, Transport};

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let sir: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(12.0);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);

    println!("{:>5} {:>7} {:>8} {:>8} {:>10} {:>10}", "", "blocks", "tx", "rx", "eps %", "total %");
    for transport in Transport::SWEEP_ORDER {
        let link = Link::new(PipelineConfig {
            transport,
            channel: ChannelModel::fading(sir, 114, 5)?,
            k,
            c: 0.1,
            delta: 0.5,
            seed: 9,
            raw_detection: RawDetection::Genie,
        })?;
        let trace = link.run_session(0.45)?;
        let pct = |x: Option<f64>| x.map_or("failed".to_string(), |v| format!("{:.2}", 100.0 * v));
        println!(
            "{:>5} {:>7} {:>8} {:>8} {:>10} {:>10}",
            transport.name(),
            trace.blocks_sent(),
            trace.tx_symbols(),
            trace.rx_symbols(),
            pct(trace.eps()),
            pct(trace.total_overhead())
        );
    }
    Ok(())
}
