//! Puncturing patterns.
//!
//! Defaults follow the GSM 05.03 PDTCH patterns:
//!
//! * CS-2 removes `C(4i + 3)` for `i = 3..=146`, except `i = 9, 21, ..., 141`
//!   (132 positions out of 588).
//! * CS-3 removes `C(6i + 3)` and `C(6i + 5)` for `i = 2..=111` (220 positions
//!   out of 676).
//!
//! Frozen copies live in `fixtures/puncture_cs2.txt` and
//! `fixtures/puncture_cs3.txt`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturePattern {
    coded_len: usize,
    removed: Vec<bool>,
    removed_count: usize,
}

impl PuncturePattern {
    pub fn from_positions(coded_len: usize, positions: &[usize]) -> Result<Self> {
        let mut removed = vec![false; coded_len];
        for &p in positions {
            if p >= coded_len {
                return Err(Error::InvalidParameter(format!(
                    "puncture position {p} outside {coded_len}-bit block"
                )));
            }
            if removed[p] {
                return Err(Error::InvalidParameter(format!("puncture position {p} repeated")));
            }
            removed[p] = true;
        }
        Ok(Self {
            coded_len,
            removed,
            removed_count: positions.len(),
        })
    }

    /// No positions removed.
    pub fn none(coded_len: usize) -> Self {
        Self {
            coded_len,
            removed: vec![false; coded_len],
            removed_count: 0,
        }
    }

    pub fn gsm_cs2() -> Self {
        let positions: Vec<usize> = (3..=146)
            .filter(|i| i % 12 != 9)
            .map(|i| 4 * i + 3)
            .collect();
        Self::from_positions(588, &positions).expect("static pattern")
    }

    pub fn gsm_cs3() -> Self {
        let positions: Vec<usize> = (2..=111).flat_map(|i| [6 * i + 3, 6 * i + 5]).collect();
        let mut positions = positions;
        positions.sort_unstable();
        Self::from_positions(676, &positions).expect("static pattern")
    }

    pub fn coded_len(&self) -> usize {
        self.coded_len
    }

    pub fn punctured_len(&self) -> usize {
        self.coded_len - self.removed_count
    }

    pub fn removed_count(&self) -> usize {
        self.removed_count
    }

    /// Removed positions in ascending order.
    pub fn positions(&self) -> Vec<usize> {
        self.removed
            .iter()
            .enumerate()
            .filter_map(|(i, &r)| r.then_some(i))
            .collect()
    }

    pub fn puncture<T: Copy>(&self, coded: &[T]) -> Result<Vec<T>> {
        if coded.len() != self.coded_len {
            return Err(Error::LengthMismatch {
                expected: self.coded_len,
                actual: coded.len(),
            });
        }
        Ok(coded
            .iter()
            .zip(&self.removed)
            .filter_map(|(&c, &r)| (!r).then_some(c))
            .collect())
    }

    /// Reinserts erasures (0.0) at the removed positions.
    pub fn depuncture(&self, soft: &[f64]) -> Result<Vec<f64>> {
        if soft.len() != self.punctured_len() {
            return Err(Error::LengthMismatch {
                expected: self.punctured_len(),
                actual: soft.len(),
            });
        }
        let mut it = soft.iter();
        Ok(self
            .removed
            .iter()
            .map(|&r| if r { 0.0 } else { *it.next().unwrap() })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cs2_counts() {
        let p = PuncturePattern::gsm_cs2();
        assert_eq!(p.removed_count(), 132);
        assert_eq!(p.punctured_len(), 456);
        let coded: Vec<u8> = (0..588).map(|i| (i % 2) as u8).collect();
        assert_eq!(p.puncture(&coded).unwrap().len(), 456);
        let soft = p.depuncture(&vec![1.0; 456]).unwrap();
        assert_eq!(soft.len(), 588);
        assert_eq!(soft.iter().filter(|&&v| v == 0.0).count(), 132);
        for pos in p.positions() {
            assert_eq!(soft[pos], 0.0);
        }
    }

    #[test]
    fn cs3_counts() {
        let p = PuncturePattern::gsm_cs3();
        assert_eq!(p.removed_count(), 220);
        assert_eq!(p.punctured_len(), 456);
        assert_eq!(p.puncture(&vec![0u8; 676]).unwrap().len(), 456);
    }

    #[test]
    fn round_trip_keeps_survivors() {
        let p = PuncturePattern::gsm_cs3();
        let original: Vec<f64> = (0..676).map(|i| i as f64 + 1.0).collect();
        let restored = p.depuncture(&p.puncture(&original).unwrap()).unwrap();
        let removed = p.positions();
        for (i, (a, b)) in original.iter().zip(&restored).enumerate() {
            if removed.binary_search(&i).is_ok() {
                assert_eq!(*b, 0.0);
            } else {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn length_mismatch() {
        let p = PuncturePattern::gsm_cs2();
        assert!(matches!(
            p.puncture(&[0u8; 587]),
            Err(Error::LengthMismatch { expected: 588, actual: 587 })
        ));
        assert!(p.depuncture(&[0.0; 455]).is_err());
    }

    #[test]
    fn rejects_bad_positions() {
        assert!(PuncturePattern::from_positions(10, &[10]).is_err());
        assert!(PuncturePattern::from_positions(10, &[3, 3]).is_err());
    }
}
