//! Reed–Solomon list decoding by bivariate interpolation and root finding.

use std::collections::BTreeSet;

use crate::algebra::matrix::nullspace_vector;
use crate::algebra::{Fe, Field, UniPoly};
use crate::error::{Error, Result};

/// Parameters of one decoding problem: `b` pairs, agreement `a`, degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgreementThreshold {
    pub b: usize,
    pub a: usize,
    pub d: usize,
}

impl AgreementThreshold {
    /// Checks `a > sqrt(2·d·b)`.
    pub fn new(b: usize, a: usize, d: usize) -> Result<Self> {
        if (a as u128) * (a as u128) <= 2 * (d as u128) * (b as u128) {
            return Err(Error::Precondition(format!("agreement {a} not above sqrt(2·{d}·{b})")));
        }
        Ok(AgreementThreshold { b, a, d })
    }

    /// The smallest admissible agreement for `b` pairs and degree `d`.
    pub fn minimal(b: usize, d: usize) -> Self {
        let bound = 2 * (d as u128) * (b as u128);
        let mut a = (bound as f64).sqrt() as u128;
        while a * a > bound {
            a -= 1;
        }
        while a * a <= bound {
            a += 1;
        }
        AgreementThreshold { b, a: a as usize, d }
    }
}

/// Number of pairs `(x_i, y_i)` with `g(x_i) = y_i`.
pub fn agreement(f: &Field, g: &UniPoly, pairs: &[(Fe, Fe)]) -> usize {
    pairs.iter().filter(|&&(x, y)| g.eval(f, x) == y).count()
}

/// All polynomials of degree `<= d` agreeing with at least `a` of the
/// pairs. Requires `a > sqrt(2·d·b)` and distinct pairs. The result is
/// sorted by coefficient vector.
pub fn sudan_list_decode(f: &Field, pairs: &[(Fe, Fe)], d: usize, a: usize) -> Result<Vec<UniPoly>> {
    let b = pairs.len();
    AgreementThreshold::new(b, a, d)?;
    // a polynomial agrees with at most one pair per abscissa
    let mut xs: Vec<Fe> = pairs.iter().map(|p| p.0).collect();
    xs.sort_unstable();
    xs.dedup();
    if a > xs.len() {
        return Ok(Vec::new());
    }
    if let Some(g) = single_interpolant(f, pairs, d) {
        return Ok(vec![g]);
    }
    if d == 0 {
        return Ok(constants_with_agreement(f, pairs, a));
    }
    let candidates = match interpolate_bivariate(f, pairs, d, a - 1) {
        Some(q) => {
            let mut out = BTreeSet::new();
            roth_ruckenstein(f, q, d, 0, &mut Vec::with_capacity(d + 1), &mut out);
            out
        }
        None if f.size() <= 16 => return Ok(brute_force_decode(f, pairs, d, a)),
        None => return Err(Error::Construction("bivariate interpolation found no nonzero solution".into())),
    };
    let mut out: Vec<UniPoly> =
        candidates.into_iter().map(UniPoly::from_coeffs).filter(|g| agreement(f, g, pairs) >= a).collect();
    out.sort();
    Ok(out)
}

/// If all pairs lie on one polynomial of degree `<= d`, return it.
fn single_interpolant(f: &Field, pairs: &[(Fe, Fe)], d: usize) -> Option<UniPoly> {
    if pairs.is_empty() {
        return None;
    }
    let n = (d + 1).min(pairs.len());
    let base = &pairs[..n];
    for i in 0..n {
        for j in 0..i {
            if base[i].0 == base[j].0 {
                return None;
            }
        }
    }
    let g = UniPoly::interpolate_unchecked(f, base);
    if pairs[n..].iter().all(|&(x, y)| g.eval(f, x) == y) {
        Some(g)
    } else {
        None
    }
}

fn constants_with_agreement(f: &Field, pairs: &[(Fe, Fe)], a: usize) -> Vec<UniPoly> {
    let mut counts = vec![0usize; f.size()];
    for &(_, y) in pairs {
        counts[y.0 as usize] += 1;
    }
    let mut out: Vec<UniPoly> =
        (0..f.size()).filter(|&c| counts[c] >= a).map(|c| UniPoly::constant(Fe(c as u32))).collect();
    out.sort();
    out
}

/// Nonzero `Q(x, y) = Σ_j Q_j(x) y^j` with `(1, d)`-weighted degree at
/// most `big_d` vanishing on every pair. Returned as the `Q_j`.
fn interpolate_bivariate(f: &Field, pairs: &[(Fe, Fe)], d: usize, big_d: usize) -> Option<Vec<UniPoly>> {
    let mut monos: Vec<(usize, usize)> = Vec::new();
    for j in 0..=big_d / d {
        for i in 0..=big_d - d * j {
            monos.push((i, j));
        }
    }
    let ncols = monos.len();
    let rows: Vec<Vec<Fe>> = pairs
        .iter()
        .map(|&(x, y)| monos.iter().map(|&(i, j)| f.mul(f.pow(x, i as u64), f.pow(y, j as u64))).collect())
        .collect();
    let z = nullspace_vector(f, rows, ncols)?;
    let jmax = big_d / d;
    let mut q = vec![vec![Fe::ZERO; big_d + 1]; jmax + 1];
    for (&(i, j), &c) in monos.iter().zip(&z) {
        q[j][i] = c;
    }
    let mut q: Vec<UniPoly> = q.into_iter().map(UniPoly::from_coeffs).collect();
    while q.last().is_some_and(|p| p.is_zero()) {
        q.pop();
    }
    Some(q)
}

/// Roth–Ruckenstein search for the roots `y = g(x)` of `Q` with
/// `deg g <= d`. Collects candidate coefficient vectors.
fn roth_ruckenstein(f: &Field, q: Vec<UniPoly>, d: usize, depth: usize, prefix: &mut Vec<Fe>, out: &mut BTreeSet<Vec<Fe>>) {
    // strip the largest common power of x
    let shift = q.iter().filter_map(|p| p.coeffs().iter().position(|c| !c.is_zero())).min();
    let Some(shift) = shift else {
        // Q is identically zero: every continuation is a root; record the
        // zero continuation, the post-filter decides.
        let mut g = prefix.clone();
        g.resize(d + 1, Fe::ZERO);
        out.insert(g);
        return;
    };
    let q: Vec<UniPoly> = q.iter().map(|p| UniPoly::from_coeffs(p.coeffs().get(shift..).unwrap_or(&[]).to_vec())).collect();
    // roots of Q(0, y)
    let at0: Vec<Fe> = q.iter().map(|p| p.coeff(0)).collect();
    let h = UniPoly::from_coeffs(at0);
    if h.degree().unwrap_or(0) == 0 {
        return;
    }
    for gamma in f.elements() {
        if !h.eval(f, gamma).is_zero() {
            continue;
        }
        prefix.push(gamma);
        if depth == d {
            out.insert(prefix.clone());
        } else {
            let next = substitute(f, &q, gamma);
            roth_ruckenstein(f, next, d, depth + 1, prefix, out);
        }
        prefix.pop();
    }
}

/// `Q(x, x·y + γ)`.
fn substitute(f: &Field, q: &[UniPoly], gamma: Fe) -> Vec<UniPoly> {
    let n = q.len();
    let mut shifted = vec![UniPoly::zero(); n];
    // (y + γ)^j = Σ_k C(j, k) γ^(j−k) y^k, C(j, k) odd iff k ⊆ j bitwise.
    for (j, qj) in q.iter().enumerate() {
        if qj.is_zero() {
            continue;
        }
        for (k, slot) in shifted.iter_mut().enumerate().take(j + 1) {
            if k & j == k {
                let c = f.pow(gamma, (j - k) as u64);
                *slot = slot.add(&qj.scale(f, c));
            }
        }
    }
    shifted
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            let mut c = vec![Fe::ZERO; k];
            c.extend_from_slice(p.coeffs());
            UniPoly::from_coeffs(c)
        })
        .collect()
}

/// Berlekamp–Welch: the polynomial of degree `<= d` that agrees with all
/// but at most `(b − d − 1)/2` of the `b` pairs, if there is one. Such a
/// polynomial is the unique best-agreeing one. Fields of characteristic 2
/// only, where subtraction is addition.
pub fn unique_decode(f: &Field, pairs: &[(Fe, Fe)], d: usize) -> Option<UniPoly> {
    let b = pairs.len();
    if b < d + 1 {
        return None;
    }
    let e = (b - d - 1) / 2;
    let nq = e + d + 1;
    // Q(x_i) + y_i·E(x_i) = 0 with deg Q <= e + d, deg E <= e
    let rows = pairs
        .iter()
        .map(|&(x, y)| {
            let mut row = Vec::with_capacity(nq + e + 1);
            let mut pw = Fe::ONE;
            for _ in 0..nq {
                row.push(pw);
                pw = f.mul(pw, x);
            }
            for k in 0..=e {
                row.push(f.mul(row[k], y));
            }
            row
        })
        .collect();
    let z = nullspace_vector(f, rows, nq + e + 1)?;
    let q = UniPoly::from_coeffs(z[..nq].to_vec());
    let err = UniPoly::from_coeffs(z[nq..].to_vec());
    if err.is_zero() {
        return None;
    }
    let (g, r) = q.divrem(f, &err);
    if !r.is_zero() || g.degree().is_some_and(|k| k > d) {
        return None;
    }
    (agreement(f, &g, pairs) >= b - e).then_some(g)
}

/// [`unique_decode`] for the pairs `(t, ys[t−1])`, `t = 1..p−1`. These form a
/// cyclic Reed–Solomon word, so the errors are located from syndromes by
/// Berlekamp–Massey instead of solving the key equation as a linear system.
pub fn unique_decode_units(f: &Field, ys: &[Fe], d: usize) -> Option<UniPoly> {
    let b = ys.len();
    debug_assert_eq!(b, f.size() - 1);
    if b < d + 1 {
        return None;
    }
    let e = (b - d - 1) / 2;
    // S_j = Σ_t ys[t−1]·t^j vanishes for j = 1..b−d−1 on a codeword
    let mut syn = vec![Fe::ZERO; 2 * e];
    for (t, &y) in f.elements().skip(1).zip(ys) {
        let mut w = f.mul(y, t);
        for s in syn.iter_mut() {
            *s = *s + w;
            w = f.mul(w, t);
        }
    }
    let lambda = berlekamp_massey(f, &syn);
    let nu = lambda.len() - 1;
    if nu > e {
        return None;
    }
    // an error at t is a root of Λ at 1/t
    let bad: Vec<bool> = f
        .elements()
        .skip(1)
        .map(|t| {
            let z = f.inv(t).unwrap_or(Fe::ZERO);
            lambda.iter().rev().fold(Fe::ZERO, |acc, &c| f.mul(acc, z) + c).is_zero()
        })
        .collect();
    if bad.iter().filter(|&&x| x).count() != nu {
        return None;
    }
    let good: Vec<(Fe, Fe)> =
        f.elements().skip(1).zip(ys).zip(&bad).filter(|(_, &x)| !x).map(|((t, &y), _)| (t, y)).take(d + 1).collect();
    let g = UniPoly::interpolate_unchecked(f, &good);
    let pairs: Vec<(Fe, Fe)> = f.elements().skip(1).zip(ys.iter().copied()).collect();
    (agreement(f, &g, &pairs) >= b - e).then_some(g)
}

/// The shortest connection polynomial `Λ` (with `Λ_0 = 1`) generating `s`.
fn berlekamp_massey(f: &Field, s: &[Fe]) -> Vec<Fe> {
    let mut c = vec![Fe::ONE];
    let mut prev = vec![Fe::ONE];
    let mut l = 0;
    let mut shift = 1;
    let mut last = Fe::ONE;
    for n in 0..s.len() {
        let disc = (1..=l).fold(s[n], |acc, i| acc + f.mul(c.get(i).copied().unwrap_or(Fe::ZERO), s[n - i]));
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f.div(disc, last);
        let old = c.clone();
        if c.len() < prev.len() + shift {
            c.resize(prev.len() + shift, Fe::ZERO);
        }
        for (i, &q) in prev.iter().enumerate() {
            c[i + shift] = c[i + shift] + f.mul(coef, q);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            prev = old;
            last = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, Fe::ZERO);
    c
}

/// Exhaustive decoder over all `p^(d+1)` polynomials. Test oracle and
/// small-field fallback.
pub fn brute_force_decode(f: &Field, pairs: &[(Fe, Fe)], d: usize, a: usize) -> Vec<UniPoly> {
    let p = f.size();
    let total = p.pow(d as u32 + 1);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut n = idx;
        let coeffs: Vec<Fe> = (0..=d)
            .map(|_| {
                let c = Fe((n % p) as u32);
                n /= p;
                c
            })
            .collect();
        let g = UniPoly::from_coeffs(coeffs);
        if agreement(f, &g, pairs) >= a {
            out.push(g);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn unique_decoding_within_half_the_distance() {
        let f = Field::gf(4).unwrap();
        let mut r = rng::stream(7, "welch", 0);
        for _ in 0..300 {
            let d = r.gen_range(0..4);
            let g = UniPoly::random(&f, d, &mut r);
            let errors = r.gen_range(0..=8);
            let pairs: Vec<(Fe, Fe)> = f
                .elements()
                .skip(1)
                .map(|x| (x, if (x.0 as usize) <= errors { g.eval(&f, x) + Fe::ONE } else { g.eval(&f, x) }))
                .collect();
            let got = unique_decode(&f, &pairs, d);
            let best = brute_force_decode(&f, &pairs, d, 15 - (14 - d) / 2);
            assert_eq!(got.clone().into_iter().collect::<Vec<_>>(), best);
            if errors <= (14 - d) / 2 {
                assert_eq!(got, Some(g));
            }
        }
    }

    #[test]
    fn syndrome_decoding_matches_the_linear_system() {
        for k in [3, 4, 5] {
            let f = Field::gf(k).unwrap();
            let b = f.size() - 1;
            let mut r = rng::stream(8, "syndromes", k as u64);
            for _ in 0..400 {
                let d = r.gen_range(0..6);
                let g = UniPoly::random(&f, d, &mut r);
                let errors = r.gen_range(0..=(b - d) / 2 + 2);
                let mut ys: Vec<Fe> = f.elements().skip(1).map(|t| g.eval(&f, t)).collect();
                for _ in 0..errors {
                    let i = r.gen_range(0..b);
                    ys[i] = f.random(&mut r);
                }
                let pairs: Vec<(Fe, Fe)> = f.elements().skip(1).zip(ys.iter().copied()).collect();
                assert_eq!(unique_decode_units(&f, &ys, d), unique_decode(&f, &pairs, d));
            }
        }
    }

    #[test]
    fn minimal_threshold() {
        let t = AgreementThreshold::minimal(15, 3);
        assert_eq!(t.a, 10);
        assert!(AgreementThreshold::new(8, 5, 1).is_ok());
        assert!(AgreementThreshold::new(8, 4, 1).is_err());
    }

    #[test]
    fn substitute_matches_direct_evaluation() {
        let f = Field::gf(4).unwrap();
        let mut r = rng::stream(9, "rr", 0);
        let q: Vec<UniPoly> = (0..4).map(|_| UniPoly::random(&f, 3, &mut r)).collect();
        let gamma = f.random(&mut r);
        let s = substitute(&f, &q, gamma);
        let eval = |q: &[UniPoly], x: Fe, y: Fe| {
            q.iter().enumerate().fold(Fe::ZERO, |acc, (j, p)| acc + f.mul(p.eval(&f, x), f.pow(y, j as u64)))
        };
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(eval(&s, x, y), eval(&q, x, f.mul(x, y) + gamma));
            }
        }
    }

    #[test]
    fn noisy_pairs_match_brute_force() {
        let f = Field::gf(3).unwrap();
        let mut r = rng::stream(10, "sudan", 0);
        for _ in 0..100 {
            let g = UniPoly::random(&f, 1, &mut r);
            let pairs: Vec<(Fe, Fe)> = f
                .elements()
                .map(|x| if rand::Rng::gen_bool(&mut r, 0.3) { (x, f.random(&mut r)) } else { (x, g.eval(&f, x)) })
                .collect();
            assert_eq!(sudan_list_decode(&f, &pairs, 1, 5).unwrap(), brute_force_decode(&f, &pairs, 1, 5));
        }
    }
}
