//! Print the frozen coding tables and verify the shipped fixture files.
//!
//! ```bash
//! cargo run --example fixture_tables
//! ```

use fountain_gprs::coding::{max_deinterleaved_run, Interleaver, PuncturePattern, BURST_BITS};
use fountain_gprs::fixtures;

fn main() -> fountain_gprs::Result<()> {
    let cs2 = PuncturePattern::gsm_cs2();
    let cs3 = PuncturePattern::gsm_cs3();
    println!("CS-2 removes {} of {} bits, first {:?}", cs2.removed_count(), cs2.coded_len(), &cs2.positions()[..8]);
    println!("CS-3 removes {} of {} bits, first {:?}", cs3.removed_count(), cs3.coded_len(), &cs3.positions()[..8]);
    let il = Interleaver::gsm();
    println!("interleaver first entries {:?}", &il.table()[..8]);
    let worst = (0..456 - BURST_BITS / 2)
        .map(|s| max_deinterleaved_run(&il, s, BURST_BITS / 2))
        .max()
        .unwrap();
    println!("longest de-interleaved run from any 57-bit channel burst: {worst}");
    for st in fixtures::verify_dir(&fixtures::default_dir())? {
        println!("{} {}: {}", if st.ok() { "ok  " } else { "FAIL" }, st.file, st.detail);
    }
    Ok(())
}
