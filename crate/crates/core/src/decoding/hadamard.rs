//! Brute-force Hadamard list decoding via the Walsh–Hadamard transform.

use crate::error::{Error, Result};

/// Largest message length handled by the exhaustive decoder.
pub const MAX_ELL: u32 = 24;

/// Agreement counts: entry `z` is `#{r : h(r) = <z, r>}` where `values[r]`
/// holds `h(r)` in {0, 1}. `values.len()` must be a power of two.
pub fn agreements(values: &[u8]) -> Vec<u32> {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    let mut w: Vec<i32> = values.iter().map(|&b| if b & 1 == 0 { 1 } else { -1 }).collect();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (w[j], w[j + h]);
                w[j] = a + b;
                w[j + h] = a - b;
            }
        }
        h *= 2;
    }
    w.into_iter().map(|c| ((n as i32 + c) / 2) as u32).collect()
}

/// All `z ∈ {0,1}^ell` with `Pr_r[h(r) = <z, r>] >= 1/2 + gamma/2`, in
/// increasing order.
pub fn hadamard_list_decode(ell: u32, gamma: f64, h: impl Fn(u64) -> u8) -> Result<Vec<u64>> {
    if ell > MAX_ELL {
        return Err(Error::Precondition(format!("message length {ell} exceeds {MAX_ELL}")));
    }
    let n = 1usize << ell;
    let values: Vec<u8> = (0..n as u64).map(&h).collect();
    Ok(decode_values(&values, gamma))
}

/// [`hadamard_list_decode`] on a precomputed table of predictions.
pub fn decode_values(values: &[u8], gamma: f64) -> Vec<u64> {
    let n = values.len() as f64;
    let need = (0.5 + gamma / 2.0) * n;
    agreements(values)
        .into_iter()
        .enumerate()
        .filter(|&(_, a)| a as f64 >= need - 1e-9)
        .map(|(z, _)| z as u64)
        .collect()
}
