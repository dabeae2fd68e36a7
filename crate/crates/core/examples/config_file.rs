//! Load a flat run config, apply overrides and print the resolved settings.
//!
//! ```bash
//! cargo run --example config_file -- crates/core/configs/full_grid.toml
//! ```

use fountain_gprs::config::RunSettings;

fn main() -> fountain_gprs::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/full_grid.toml").into());
    let mut settings = RunSettings::default().merge_file(&std::fs::read_to_string(&path)?)?;
    settings.trials = 10;
    print!("{}", settings.render());
    let sweep = settings.sweep_config()?;
    println!("# {} grid points x {} trials", sweep.sir_points.len() * sweep.transports.len(), sweep.trials);
    Ok(())
}
