//! Rate 1/2, constraint length 5 convolutional code and its soft-decision
//! Viterbi decoder.
//!
//! Generators: `G0 = 1 + D^3 + D^4`, `G1 = 1 + D + D^3 + D^4`. Output bits are
//! emitted as `G0, G1` per input bit. The impulse response is
//! `11 01 00 11 11`.

/// Encoder memory in bits.
pub const MEMORY: usize = 4;
const STATES: usize = 1 << MEMORY;

// state: bit0 = u[t-1], bit1 = u[t-2], bit2 = u[t-3], bit3 = u[t-4]
#[inline]
fn outputs(state: usize, input: u8) -> (u8, u8) {
    let u = input & 1;
    let s1 = (state & 1) as u8;
    let s3 = ((state >> 2) & 1) as u8;
    let s4 = ((state >> 3) & 1) as u8;
    (u ^ s3 ^ s4, u ^ s1 ^ s3 ^ s4)
}

#[inline]
fn next_state(state: usize, input: u8) -> usize {
    ((state << 1) | (input as usize & 1)) & (STATES - 1)
}

pub fn conv_encode(info: &[u8]) -> Vec<u8> {
    let mut state = 0;
    let mut out = Vec::with_capacity(2 * info.len());
    for &u in info {
        let (c0, c1) = outputs(state, u);
        out.push(c0);
        out.push(c1);
        state = next_state(state, u);
    }
    out
}

#[inline]
fn bipolar(bit: u8) -> f64 {
    if bit == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Maximum-likelihood decoding under the correlation metric
/// `sum(soft * bipolar(code bit))`. Positive soft values favour a one, zero
/// is an erasure. With `terminated` the survivor ending in the zero state is
/// chosen.
pub fn viterbi_decode(soft: &[f64], terminated: bool) -> Vec<u8> {
    let n = soft.len() / 2;
    let mut metric = [f64::NEG_INFINITY; STATES];
    metric[0] = 0.0;
    // branch tables: for each next state and predecessor choice b, the
    // expected bipolar pair
    let mut branch = [[(0.0f64, 0.0f64); 2]; STATES];
    for (ns, row) in branch.iter_mut().enumerate() {
        let u = (ns & 1) as u8;
        for (b, slot) in row.iter_mut().enumerate() {
            let prev = (ns >> 1) | (b << (MEMORY - 1));
            let (c0, c1) = outputs(prev, u);
            *slot = (bipolar(c0), bipolar(c1));
        }
    }

    let mut decisions: Vec<u16> = Vec::with_capacity(n);
    for t in 0..n {
        let (r0, r1) = (soft[2 * t], soft[2 * t + 1]);
        let mut next = [f64::NEG_INFINITY; STATES];
        let mut word = 0u16;
        for ns in 0..STATES {
            let p0 = ns >> 1;
            let p1 = p0 | (1 << (MEMORY - 1));
            let (a0, a1) = branch[ns][0];
            let (b0, b1) = branch[ns][1];
            let m0 = metric[p0] + r0 * a0 + r1 * a1;
            let m1 = metric[p1] + r0 * b0 + r1 * b1;
            if m1 > m0 {
                next[ns] = m1;
                word |= 1 << ns;
            } else {
                next[ns] = m0;
            }
        }
        metric = next;
        decisions.push(word);
    }

    let mut state = if terminated {
        0
    } else {
        (0..STATES)
            .max_by(|&a, &b| metric[a].total_cmp(&metric[b]).then(b.cmp(&a)))
            .unwrap_or(0)
    };
    let mut bits = vec![0u8; n];
    for t in (0..n).rev() {
        bits[t] = (state & 1) as u8;
        let b = ((decisions[t] >> state) & 1) as usize;
        state = (state >> 1) | (b << (MEMORY - 1));
    }
    bits
}
