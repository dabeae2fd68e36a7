use std::fs;
use std::path::Path;
use std::process::Command;

use fountain_gprs::cli::{run, EXIT_CONFIG, EXIT_DECODE, EXIT_PARSE, HEADER_LEN};
use fountain_gprs::lt::WIRE_LEN;
use fountain_gprs::rng::SplitMix64;

fn cli(args: &[&str]) -> i32 {
    let mut full = vec!["fountain-gprs"];
    full.extend_from_slice(args);
    run(full)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_file(path: &Path, len: usize, seed: u64) -> Vec<u8> {
    let mut rng = SplitMix64::new(seed);
    let bytes: Vec<u8> = (0..len).map(|_| rng.next_u32() as u8).collect();
    fs::write(path, &bytes).unwrap();
    bytes
}

#[test]
fn encode_counts_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let stream = dir.path().join("in.lt");
    random_file(&input, 4000, 1);
    assert_eq!(cli(&["encode", s(&input), "-o", s(&stream), "--seed", "1", "--count", "1100"]), 0);
    assert_eq!(fs::metadata(&stream).unwrap().len() as usize, HEADER_LEN + 1100 * WIRE_LEN);
    let bytes = fs::read(&stream).unwrap();
    assert_eq!(u32::from_be_bytes(bytes[4..8].try_into().unwrap()), 1000);
    assert!(dir.path().join("in.lt.config.toml").exists());
}

#[test]
fn empty_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    fs::write(&input, b"").unwrap();
    let out = dir.path().join("e.lt");
    assert_eq!(cli(&["encode", s(&input), "-o", s(&out), "--seed", "1"]), EXIT_CONFIG);
}

#[test]
fn round_trip_duplicates_and_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let stream = dir.path().join("s.lt");
    let original = random_file(&input, 4001, 2);
    assert_eq!(cli(&["encode", s(&input), "-o", s(&stream), "--seed", "7", "--overhead", "0.6"]), 0);

    let out = dir.path().join("out.bin");
    assert_eq!(cli(&["decode", s(&stream), "-o", s(&out)]), 0);
    assert_eq!(fs::read(&out).unwrap(), original);

    let bytes = fs::read(&stream).unwrap();
    let (header, body) = bytes.split_at(HEADER_LEN);
    let mut dup = header.to_vec();
    for rec in body.chunks(WIRE_LEN) {
        dup.extend_from_slice(rec);
        dup.extend_from_slice(rec);
    }
    let dup_stream = dir.path().join("dup.lt");
    fs::write(&dup_stream, dup).unwrap();
    let out2 = dir.path().join("out2.bin");
    assert_eq!(cli(&["decode", s(&dup_stream), "-o", s(&out2)]), 0);
    assert_eq!(fs::read(&out2).unwrap(), original);

    let k = 1001;
    let short = dir.path().join("short.lt");
    fs::write(&short, &bytes[..HEADER_LEN + k * WIRE_LEN]).unwrap();
    assert_eq!(cli(&["decode", s(&short), "-o", s(&dir.path().join("x"))]), EXIT_DECODE);

    let ragged = dir.path().join("ragged.lt");
    fs::write(&ragged, &bytes[..HEADER_LEN + 5]).unwrap();
    assert_eq!(cli(&["decode", s(&ragged), "-o", s(&dir.path().join("y"))]), EXIT_PARSE);

    let mut bad = bytes.clone();
    bad[1] ^= 0xFF;
    let bad_stream = dir.path().join("bad.lt");
    fs::write(&bad_stream, bad).unwrap();
    assert_eq!(cli(&["decode", s(&bad_stream), "-o", s(&dir.path().join("z"))]), EXIT_PARSE);
}

#[test]
fn unknown_config_keys_fail() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "k = 100\nwidth = 3\n").unwrap();
    assert_eq!(cli(&["sweep", "--config", s(&cfg), "--out", s(dir.path())]), EXIT_CONFIG);
}

#[test]
fn sample_config_runs_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/full_grid.toml");
    let out = dir.path().join("grid");
    assert_eq!(
        cli(&["sweep", "--config", s(&cfg), "--trials", "2", "--k", "200", "--out", s(&out)]),
        0
    );
    let csv = fs::read_to_string(out.join("overheads.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 4);
    let resolved = fs::read_to_string(out.join("resolved_config.toml")).unwrap();
    assert!(resolved.contains("trials = 2") && resolved.contains("k = 200"));
    assert!(resolved.contains("max_overhead = 0.45"));
    assert!(out.join("trajectory.csv").exists());
    assert!(out.join("plot/eps_CS1.dat").exists());
}

#[test]
fn single_point_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = |name: &str| {
        let out = dir.path().join(name);
        let code = cli(&[
            "sweep", "--k", "150", "--trials", "1", "--sir", "12", "--scheme", "CS2", "--seed", "0x2a", "--out",
            s(&out),
        ]);
        assert_eq!(code, 0);
        (
            fs::read(out.join("overheads.csv")).unwrap(),
            fs::read(out.join("trajectory.csv")).unwrap(),
        )
    };
    let a = sweep("a");
    assert_eq!(String::from_utf8_lossy(&a.0).lines().count(), 2);
    assert_eq!(a, sweep("b"));
}

#[test]
fn session_writes_trace_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sess");
    let code = cli(&["session", "--k", "200", "--scheme", "CS1", "--sir", "20", "--seed", "3", "--out", s(&out)]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.join("session.csv")).unwrap();
    assert!(csv.starts_with("block_no,tx_symbols,rx_symbols,recovered,complete"));
    assert!(csv.trim_end().ends_with("true"));
    assert!(out.join("resolved_config.toml").exists());

    let fail = dir.path().join("fail");
    let code = cli(&[
        "session", "--k", "200", "--scheme", "RAW", "--sir", "0", "--seed", "3", "--max-overhead", "0.3", "--out",
        s(&fail),
    ]);
    assert_eq!(code, EXIT_DECODE);
    assert!(fail.join("session.csv").exists());
}

#[test]
fn bad_flags_are_config_errors() {
    assert_eq!(cli(&["sweep", "--trials", "many"]), EXIT_CONFIG);
    assert_eq!(cli(&["sweep", "--scheme", "CS7", "--out", "/nonexistent/x"]), EXIT_CONFIG);
    assert_eq!(cli(&["fixtures", "verify"]), 0);
}

#[test]
fn environment_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env");
    let status = Command::new(env!("CARGO_BIN_EXE_fountain-gprs"))
        .args(["sweep", "--sir", "20", "--scheme", "CS3"])
        .env("FGPRS_K", "120")
        .env("FGPRS_TRIALS", "3")
        .env("FGPRS_SEED", "9")
        .env("FGPRS_OUT", &out)
        .env("FGPRS_JOBS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let resolved = fs::read_to_string(out.join("resolved_config.toml")).unwrap();
    assert!(resolved.contains("k = 120") && resolved.contains("trials = 3") && resolved.contains("seed = 9"));
}
