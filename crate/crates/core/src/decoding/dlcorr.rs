//! Worst-case to average-case reduction for discrete logarithms in the
//! orbit of a generator matrix.

use rand::Rng;

use crate::algebra::{Fe, Field, Matrix, PowerLadder};

/// Outcome of [`dlcorr`]. `Failure` is out of band: it is never confused
/// with an exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlResult {
    Found(u64),
    Failure,
}

impl DlResult {
    pub fn found(self) -> Option<u64> {
        match self {
            DlResult::Found(l) => Some(l),
            DlResult::Failure => None,
        }
    }
}

/// Number of random shifts tried for success rate `epsilon`.
pub fn dlcorr_samples(epsilon: f64) -> usize {
    (3.0 / epsilon).ceil().max(1.0) as usize
}

/// Finds `ℓ ∈ [1, p^m − 1]` with `A^ℓ · 1 = u` using an oracle `g` that is
/// right on an `epsilon` fraction of nonzero inputs. Every accepted answer
/// is verified by direct exponentiation.
pub fn dlcorr<R: Rng + ?Sized>(
    f: &Field,
    a: &PowerLadder,
    g: &dyn Fn(&[Fe]) -> Option<u64>,
    u: &[Fe],
    epsilon: f64,
    rng: &mut R,
) -> DlResult {
    let order = (f.size() as u64).pow(a.dim() as u32) - 1;
    let shifts = (0..dlcorr_samples(epsilon)).map(|_| {
        let j = rng.gen_range(1..=order);
        (j, a.apply(f, j, u))
    });
    search(f, a, g, u, shifts)
}

fn search(
    f: &Field,
    a: &PowerLadder,
    g: &dyn Fn(&[Fe]) -> Option<u64>,
    u: &[Fe],
    shifts: impl Iterator<Item = (u64, Vec<Fe>)>,
) -> DlResult {
    let m = a.dim();
    let order = (f.size() as u64).pow(m as u32) - 1;
    let ones = vec![Fe::ONE; m];
    if u.iter().all(|c| c.is_zero()) {
        return DlResult::Failure;
    }
    for (j, v) in shifts {
        let Some(i) = g(&v) else { continue };
        if i == 0 || i > order {
            continue;
        }
        let l = exponent_difference(i, j, order);
        if a.apply(f, l, &ones) == u {
            return DlResult::Found(l);
        }
    }
    DlResult::Failure
}

/// [`dlcorr`] with its shifts fixed once and shared by every query, the
/// matrices `A^j` precomputed.
#[derive(Clone, Debug)]
pub struct FixedDlcorr {
    shifts: Vec<(u64, Matrix)>,
}

impl FixedDlcorr {
    pub fn new<R: Rng + ?Sized>(f: &Field, a: &PowerLadder, reps: usize, rng: &mut R) -> Self {
        let order = (f.size() as u64).pow(a.dim() as u32) - 1;
        let shifts = (0..reps.max(1))
            .map(|_| {
                let j = rng.gen_range(1..=order);
                let mut aj = Matrix::identity(a.dim());
                for (b, sq) in a.squares().iter().enumerate() {
                    if j >> b & 1 == 1 {
                        aj = sq.mul(f, &aj);
                    }
                }
                (j, aj)
            })
            .collect();
        FixedDlcorr { shifts }
    }

    pub fn eval(&self, f: &Field, a: &PowerLadder, g: &dyn Fn(&[Fe]) -> Option<u64>, u: &[Fe]) -> DlResult {
        search(f, a, g, u, self.shifts.iter().map(|(j, aj)| (*j, aj.mul_vec(f, u))))
    }
}

/// Given `A^i·1 = A^j·u`, the exponent `ℓ ∈ [1, order]` with `A^ℓ·1 = u`.
pub fn exponent_difference(i: u64, j: u64, order: u64) -> u64 {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Greater => i - j,
        Equal => order,
        Less => order - (j - i),
    }
}
