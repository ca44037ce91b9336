//! Self-correction of low-degree polynomials along random lines.

use rand::Rng;

use super::fit::{fit_nonzero_at_zero, fits_full};
use super::sudan::{agreement, sudan_list_decode, unique_decode_units, AgreementThreshold};
use crate::algebra::matrix::{lex_index, lex_point};
use crate::algebra::{Fe, Field};

/// One self-correction call: restrict `g` to a random line through `x`,
/// list-decode the `p − 1` off-point values at degree `delta`, and read the
/// decoded polynomial at the point itself. With no candidate the raw
/// value `g(x)` is returned; with several, the best-agreeing one is used.
pub fn pcorr<R: Rng + ?Sized>(f: &Field, delta: usize, g: &dyn Fn(&[Fe]) -> Fe, x: &[Fe], rng: &mut R) -> Fe {
    let dir = random_direction(f, x.len(), rng);
    pcorr_along(f, delta, g, x, &dir)
}

/// A uniformly random nonzero direction in F_p^m.
pub fn random_direction<R: Rng + ?Sized>(f: &Field, m: usize, rng: &mut R) -> Vec<Fe> {
    loop {
        let y: Vec<Fe> = (0..m).map(|_| f.random(rng)).collect();
        if y.iter().any(|c| !c.is_zero()) {
            return y;
        }
    }
}

/// [`pcorr`] with the line direction given.
pub fn pcorr_along(f: &Field, delta: usize, g: &dyn Fn(&[Fe]) -> Fe, x: &[Fe], dir: &[Fe]) -> Fe {
    let m = x.len();
    let mut point = vec![Fe::ZERO; m];
    let ys: Vec<Fe> = f
        .elements()
        .skip(1)
        .map(|t| {
            for i in 0..m {
                point[i] = x[i] + f.mul(t, dir[i]);
            }
            g(&point)
        })
        .collect();
    decode_at_zero(f, delta, &ys).unwrap_or_else(|| g(x))
}

/// The value at `t = 0` of the best degree-`delta` fit to `ys[t−1]`,
/// `t = 1..p−1`; `None` when the list is empty.
fn decode_at_zero(f: &Field, delta: usize, ys: &[Fe]) -> Option<Fe> {
    if let Some(v) = fit_nonzero_at_zero(f, delta, ys) {
        return Some(v);
    }
    let pairs: Vec<(Fe, Fe)> = f.elements().skip(1).zip(ys.iter().copied()).collect();
    let th = AgreementThreshold::minimal(pairs.len(), delta);
    // a listed polynomial this close is the best-agreeing one
    if let Some(g) = unique_decode_units(f, ys, delta).filter(|g| agreement(f, g, &pairs) >= th.a) {
        return Some(g.coeff(0));
    }
    let list = sudan_list_decode(f, &pairs, delta, th.a).unwrap_or_default();
    let best = list.iter().max_by_key(|q| (agreement(f, q, &pairs), std::cmp::Reverse((*q).clone())))?;
    Some(best.coeff(0))
}

fn plurality(values: impl Iterator<Item = Fe>) -> Fe {
    let mut tally: Vec<(Fe, usize)> = Vec::new();
    for v in values {
        match tally.iter_mut().find(|(w, _)| *w == v) {
            Some(e) => e.1 += 1,
            None => tally.push((v, 1)),
        }
    }
    tally.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    tally[0].0
}

/// Majority self-correction with its randomness fixed once: vote `k` uses
/// the direction `dirs[k]` at every point. This makes the corrected
/// function deterministic, and lets a whole table be corrected one line at
/// a time, since the lines with a common direction partition F_p^m.
#[derive(Clone, Debug)]
pub struct FixedPcorr {
    pub delta: usize,
    pub dirs: Vec<Vec<Fe>>,
}

impl FixedPcorr {
    pub fn new<R: Rng + ?Sized>(f: &Field, m: usize, delta: usize, votes: usize, rng: &mut R) -> Self {
        FixedPcorr { delta, dirs: (0..votes.max(1)).map(|_| random_direction(f, m, rng)).collect() }
    }

    pub fn eval(&self, f: &Field, g: &dyn Fn(&[Fe]) -> Fe, x: &[Fe]) -> Fe {
        plurality(self.dirs.iter().map(|d| pcorr_along(f, self.delta, g, x, d)))
    }

    /// `eval` at every point, for `g` given as a lexicographic table.
    pub fn tabulate(&self, f: &Field, m: usize, table: &[Fe]) -> Vec<Fe> {
        let p = f.size();
        let n = table.len();
        debug_assert_eq!(n, p.pow(m as u32));
        let votes: Vec<Vec<Fe>> = self.dirs.iter().map(|d| self.correct_lines(f, m, table, d)).collect();
        (0..n).map(|i| plurality(votes.iter().map(|v| v[i]))).collect()
    }

    fn correct_lines(&self, f: &Field, m: usize, table: &[Fe], dir: &[Fe]) -> Vec<Fe> {
        let p = f.size();
        let mut out = vec![Fe::ZERO; table.len()];
        let mut done = vec![false; table.len()];
        let mut idx = vec![0usize; p];
        let mut vals = vec![Fe::ZERO; p];
        let mut ys = vec![Fe::ZERO; p - 1];
        for start in 0..table.len() {
            if done[start] {
                continue;
            }
            let x = lex_point(p, m, start);
            let mut point = vec![Fe::ZERO; m];
            for t in f.elements() {
                for i in 0..m {
                    point[i] = x[i] + f.mul(t, dir[i]);
                }
                let j = lex_index(p, &point);
                idx[t.0 as usize] = j;
                vals[t.0 as usize] = table[j];
                done[j] = true;
            }
            if fits_full(f, self.delta, &vals) {
                for t in 0..p {
                    out[idx[t]] = vals[t];
                }
                continue;
            }
            // the point x + s·dir sees the line through it at parameter s + t
            for s in 0..p {
                for t in 1..p {
                    ys[t - 1] = vals[s ^ t];
                }
                out[idx[s]] = decode_at_zero(f, self.delta, &ys).unwrap_or(vals[s]);
            }
        }
        out
    }
}

/// Plurality vote over `votes` independent [`pcorr`] calls; ties go to the
/// smallest value.
pub fn pcorr_majority<R: Rng + ?Sized>(
    f: &Field,
    delta: usize,
    g: &dyn Fn(&[Fe]) -> Fe,
    x: &[Fe],
    votes: usize,
    rng: &mut R,
) -> Fe {
    let calls: Vec<Fe> = (0..votes.max(1)).map(|_| pcorr(f, delta, g, x, rng)).collect();
    plurality(calls.into_iter())
}
