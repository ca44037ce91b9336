//! Sampling test for closeness of an evaluator to a reference oracle.

use rand::Rng;

use crate::algebra::{Fe, Field};

/// Number of sample points used for confidence `delta`.
pub fn isclose_samples(delta: f64) -> usize {
    (3.0 * (1.0 / delta).log2()).ceil().max(1.0) as usize
}

/// Accepts iff `b` and `p_oracle` agree on `3·log2(1/delta)` uniform points
/// of F_p^m.
pub fn is_close<R: Rng + ?Sized>(
    f: &Field,
    m: usize,
    b: &mut dyn FnMut(&[Fe]) -> Fe,
    delta: f64,
    p_oracle: &mut dyn FnMut(&[Fe]) -> Fe,
    rng: &mut R,
) -> bool {
    for _ in 0..isclose_samples(delta) {
        let x: Vec<Fe> = (0..m).map(|_| f.random(rng)).collect();
        if b(&x) != p_oracle(&x) {
            return false;
        }
    }
    true
}
