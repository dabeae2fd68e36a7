//! Fountain and total overhead for RAW, CS-3, CS-2 and CS-1 over a proxy SIR
//! sweep, printed as tables.
//!
//! ```bash
//! cargo run --release --example overhead_sweep -- [trials] [k] [max_overhead]
//! ```

use fountain_gprs::experiment::{run_sweep, SweepConfig};

fn main() -> fountain_gprs::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let k = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let max_overhead = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.45);

    let cfg = SweepConfig {
        trials,
        k,
        max_overhead,
        ..SweepConfig::default()
    };
    let result = run_sweep(&cfg)?;

    println!("% fountain overhead (k = {k}, {trials} trials, budget {:.0}%)", 100.0 * max_overhead);
    print!("{}", result.fountain_table());
    println!("\n% total overhead");
    print!("{}", result.total_table());
    println!("\nsuccess rate");
    for p in &result.points {
        println!(
            "{:>6} {:>4} {:.3}  eps sem {:.4}",
            p.sir_db,
            p.transport.name(),
            p.success_rate(),
            p.eps.map_or(f64::NAN, |m| m.sem())
        );
    }
    Ok(())
}
