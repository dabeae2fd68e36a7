//! Frozen coding tables and test vectors.
//!
//! The fixture directory holds plain-text files, one value per line, `#`
//! starting a comment:
//!
//! * `puncture_cs2.txt`, `puncture_cs3.txt`: removed coded-bit positions
//! * `interleaver.txt`: line `k` is the channel position of coded bit `k`
//! * `check_vectors.txt`: `check nbits input_hex remainder_hex`, input packed
//!   MSB first with zero padding after `nbits`
//! * `prng_vectors.txt`: `seed out0 out1 out2` in hex
//!
//! Each file's SHA-256 is pinned in [`PINNED`]. Verification checks the hash
//! and that the tables match what the library computes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::coding::{CyclicCheck, Interleaver, PuncturePattern, CRC16, FIRE40};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const PINNED: [(&str, &str); 5] = [
    ("puncture_cs2.txt", "56fab65a2b0ada450741acc7897a45e2ecda0aeafe3a1369393d9f9b3721cd54"),
    ("puncture_cs3.txt", "2705154bbf9661ca4b113cb1205e14e9f76f03cb7a386094df7be49229116dbf"),
    ("interleaver.txt", "858a39df28cd36771913f83f33d8dd4f97cfd854428cbd416ef781c2cce8d87f"),
    ("check_vectors.txt", "bbfe1e85acc0b32c916d8037fb3e2bc7a750fd2488164f3a762629f20a9ecc87"),
    ("prng_vectors.txt", "96e388b32c88c94f875cccac9ca97cfb63c5d0cf35bc474d00128af490472b8d"),
];

const PRNG_SEEDS: [u64; 4] = [0, 1, 0x0123_4567_89AB_CDEF, u64::MAX];

/// Directory shipped with the crate.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}

fn render_positions(header: &str, values: &[usize]) -> String {
    let mut s = format!("# {header}\n");
    for v in values {
        writeln!(s, "{v}").unwrap();
    }
    s
}

/// Renders the generated fixtures (everything but `check_vectors.txt`,
/// which is maintained by hand).
pub fn render_generated() -> Vec<(&'static str, String)> {
    let mut prng = String::from("# SplitMix64: seed, first three outputs\n");
    for seed in PRNG_SEEDS {
        let mut rng = SplitMix64::new(seed);
        writeln!(
            prng,
            "{seed:016x} {:016x} {:016x} {:016x}",
            rng.next_u64(),
            rng.next_u64(),
            rng.next_u64()
        )
        .unwrap();
    }
    vec![
        (
            "puncture_cs2.txt",
            render_positions(
                "CS-2 punctured positions of the 588 coded bits",
                &PuncturePattern::gsm_cs2().positions(),
            ),
        ),
        (
            "puncture_cs3.txt",
            render_positions(
                "CS-3 punctured positions of the 676 coded bits",
                &PuncturePattern::gsm_cs3().positions(),
            ),
        ),
        (
            "interleaver.txt",
            render_positions(
                "channel position of coded bit k (line k)",
                Interleaver::gsm().table(),
            ),
        ),
        ("prng_vectors.txt", prng),
    ]
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a one-index-per-line table.
pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    data_lines(text)
        .map(|l| {
            l.parse()
                .map_err(|_| Error::Parse(format!("bad index line '{l}'")))
        })
        .collect()
}

pub fn load_puncture(path: impl AsRef<Path>, coded_len: usize) -> Result<PuncturePattern> {
    PuncturePattern::from_positions(coded_len, &parse_indices(&fs::read_to_string(path)?)?)
}

pub fn load_interleaver(path: impl AsRef<Path>) -> Result<Interleaver> {
    Interleaver::from_table(parse_indices(&fs::read_to_string(path)?)?)
}

fn unpack_bits(hex: &str, nbits: usize) -> Result<Vec<u8>> {
    if hex.len() % 2 != 0 || hex.len() * 4 < nbits {
        return Err(Error::Parse(format!("input '{hex}' too short for {nbits} bits")));
    }
    let bytes = (0..hex.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
        .collect::<std::result::Result<Vec<u8>, _>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(crate::coding::bytes_to_bits(&bytes)[..nbits].to_vec())
}

/// Checks every vector in `check_vectors.txt` text; returns the count.
pub fn verify_check_vectors(text: &str) -> Result<usize> {
    let mut n = 0;
    for line in data_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [name, nbits, input, expected] = f[..] else {
            return Err(Error::Parse(format!("bad vector line '{line}'")));
        };
        let check: CyclicCheck = match name {
            "crc16" => CRC16,
            "fire40" => FIRE40,
            other => return Err(Error::Parse(format!("unknown check '{other}'"))),
        };
        let nbits: usize = nbits
            .parse()
            .map_err(|_| Error::Parse(format!("bad bit count in '{line}'")))?;
        let bits = unpack_bits(input, nbits)?;
        let expected = u64::from_str_radix(expected, 16)
            .map_err(|_| Error::Parse(format!("bad remainder in '{line}'")))?;
        let got = check.remainder(&bits);
        if got != expected {
            return Err(Error::Parse(format!(
                "{name} over {nbits} bits: expected {expected:x}, computed {got:x}"
            )));
        }
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureStatus {
    pub file: &'static str,
    pub hash_ok: bool,
    pub content_ok: bool,
    pub detail: String,
}

impl FixtureStatus {
    pub fn ok(&self) -> bool {
        self.hash_ok && self.content_ok
    }
}

pub fn verify_dir(dir: &Path) -> Result<Vec<FixtureStatus>> {
    let generated = render_generated();
    let mut out = Vec::new();
    for (file, pinned) in PINNED {
        let text = fs::read_to_string(dir.join(file))?;
        let hash = sha256_hex(text.as_bytes());
        let hash_ok = hash == pinned;
        let (content_ok, detail) = if file == "check_vectors.txt" {
            match verify_check_vectors(&text) {
                Ok(n) => (true, format!("{n} vectors")),
                Err(e) => (false, e.to_string()),
            }
        } else {
            let expected = &generated.iter().find(|(f, _)| *f == file).unwrap().1;
            if *expected == text {
                (true, format!("{} entries", data_lines(&text).count()))
            } else {
                (false, "content differs from computed table".to_string())
            }
        };
        let detail = if hash_ok {
            detail
        } else {
            format!("{detail}; sha256 {hash} != pinned {pinned}")
        };
        out.push(FixtureStatus {
            file,
            hash_ok,
            content_ok,
            detail,
        });
    }
    Ok(out)
}

/// Writes the generated fixtures into `dir`.
pub fn write_generated(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (file, text) in render_generated() {
        fs::write(dir.join(file), text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixtures_verify() {
        for status in verify_dir(&default_dir()).unwrap() {
            assert!(status.ok(), "{}: {}", status.file, status.detail);
        }
    }

    #[test]
    fn shipped_tables_load() {
        let dir = default_dir();
        assert_eq!(load_puncture(dir.join("puncture_cs2.txt"), 588).unwrap(), PuncturePattern::gsm_cs2());
        assert_eq!(load_puncture(dir.join("puncture_cs3.txt"), 676).unwrap(), PuncturePattern::gsm_cs3());
        assert_eq!(load_interleaver(dir.join("interleaver.txt")).unwrap(), Interleaver::gsm());
    }

    #[test]
    fn tampered_vector_is_reported() {
        assert!(verify_check_vectors("crc16 72 313233343536373839 31c3\n").is_ok());
        assert!(verify_check_vectors("crc16 72 313233343536373839 31c4\n").is_err());
        assert!(verify_check_vectors("crc16 72 3132\n").is_err());
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
