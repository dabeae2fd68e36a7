//! Total overhead implied by a fountain overhead for each transport: the
//! channel bits spent per message bit.
//!
//! ```bash
//! cargo run --release --example total_overhead -- [k]
//! ```

use fountain_gprs::experiment::total_overhead;
use fountain_gprs::pipeline::{RawDetection, Transport};

fn main() {
    let k: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    print!("{:>7}", "eps %");
    for t in Transport::SWEEP_ORDER {
        print!("{:>9}", t.name());
    }
    println!();
    for eps in [0.0, 0.05, 0.1, 0.2, 0.3, 0.45] {
        print!("{:>7.1}", 100.0 * eps);
        for t in Transport::SWEEP_ORDER {
            print!("{:>9.2}", 100.0 * total_overhead(eps, t, k, RawDetection::Genie));
        }
        println!();
    }
}
