//! Univariate and sparse multivariate polynomials over a binary field.

use rand::Rng;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients in increasing degree. Trailing
/// zeros are always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct UniPoly {
    coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Uniformly random polynomial of degree at most `d`.
    pub fn random<R: Rng + ?Sized>(f: &Field, d: usize, rng: &mut R) -> Self {
        Self::from_coeffs((0..=d).map(|_| f.random(rng)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn eval(&self, f: &Field, t: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.mul(acc, t) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, f: &Field, c: Fe) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        Self::from_coeffs(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, f: &Field, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.coeffs[dd]).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[i - dd] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] += f.mul(q, b);
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// The composition `self(inner(t))`.
    pub fn compose(&self, f: &Field, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(f, inner).add(&UniPoly::constant(c));
        }
        acc
    }

    /// Unique polynomial of degree `< points.len()` through the given
    /// points (Newton form, O(n^2)).
    pub fn interpolate(f: &Field, points: &[(Fe, Fe)]) -> Result<UniPoly> {
        let n = points.len();
        for i in 0..n {
            for j in 0..i {
                if points[i].0 == points[j].0 {
                    return Err(Error::Usage("repeated abscissa in interpolation".into()));
                }
            }
        }
        Ok(Self::interpolate_unchecked(f, points))
    }

    /// [`interpolate`](Self::interpolate) without the distinctness scan;
    /// the caller guarantees distinct abscissae.
    pub fn interpolate_unchecked(f: &Field, points: &[(Fe, Fe)]) -> UniPoly {
        let n = points.len();
        if n == 0 {
            return UniPoly::zero();
        }
        // divided differences
        let mut dd: Vec<Fe> = points.iter().map(|p| p.1).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i] + dd[i - 1];
                let den = points[i].0 + points[i - level].0;
                dd[i] = f.div(num, den);
            }
        }
        // expand Newton form by Horner from the top
        let mut coeffs = vec![Fe::ZERO; n];
        coeffs[0] = dd[n - 1];
        let mut len = 1;
        for i in (0..n - 1).rev() {
            let xi = points[i].0;
            // coeffs = coeffs * (x - xi) + dd[i]
            coeffs[len] = Fe::ZERO;
            for j in (1..=len).rev() {
                coeffs[j] = coeffs[j - 1] + f.mul(xi, coeffs[j]);
            }
            len += 1;
            coeffs[0] = f.mul(coeffs[0], xi) + dd[i];
        }
        Self::from_coeffs(coeffs)
    }
}

/// Monomial exponent vectors of total degree at most `d` in `m` variables,
/// in graded order.
pub fn monomials(m: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(m: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e as u32);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, d, &mut Vec::with_capacity(m), &mut out);
    out.sort_by_key(|e| e.iter().sum::<u32>());
    out
}

/// Sparse multivariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub m: usize,
    pub terms: Vec<(Vec<u32>, Fe)>,
}

impl MultiPoly {
    /// Random polynomial with every monomial of total degree `<= d` given a
    /// uniform coefficient.
    pub fn random<R: Rng + ?Sized>(f: &Field, m: usize, d: usize, rng: &mut R) -> Self {
        let terms = monomials(m, d).into_iter().map(|e| (e, f.random(rng))).collect();
        MultiPoly { m, terms }
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
    }

    pub fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
        let mut acc = Fe::ZERO;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &ei) in x.iter().zip(e) {
                t = f.mul(t, f.pow(*xi, ei as u64));
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn lagrange_eval(f: &Field, pts: &[(Fe, Fe)], t: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        for (i, &(xi, yi)) in pts.iter().enumerate() {
            let mut num = Fe::ONE;
            let mut den = Fe::ONE;
            for (j, &(xj, _)) in pts.iter().enumerate() {
                if i != j {
                    num = f.mul(num, t + xj);
                    den = f.mul(den, xi + xj);
                }
            }
            acc += f.mul(yi, f.div(num, den));
        }
        acc
    }

    #[test]
    fn interpolation_matches_lagrange() {
        let f = Field::gf(5).unwrap();
        let mut r = rng::stream(1, "poly", 0);
        for n in 1..12 {
            let mut xs: Vec<Fe> = f.elements().collect();
            use rand::seq::SliceRandom;
            xs.shuffle(&mut r);
            let pts: Vec<(Fe, Fe)> = xs[..n].iter().map(|&x| (x, f.random(&mut r))).collect();
            let p = UniPoly::interpolate(&f, &pts).unwrap();
            assert!(p.degree().map_or(true, |d| d < n));
            for t in f.elements() {
                assert_eq!(p.eval(&f, t), lagrange_eval(&f, &pts, t));
            }
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let f = Field::gf(4).unwrap();
        let mut r = rng::stream(2, "poly", 0);
        for _ in 0..50 {
            let a = UniPoly::random(&f, 9, &mut r);
            let mut b = UniPoly::random(&f, 3, &mut r);
            if b.is_zero() {
                b = UniPoly::constant(Fe::ONE);
            }
            let (q, rem) = a.divrem(&f, &b);
            assert_eq!(q.mul(&f, &b).add(&rem), a);
            assert!(rem.degree().map_or(true, |d| d < b.degree().unwrap().max(1)));
        }
    }

    #[test]
    fn monomial_count() {
        // C(m + d, d)
        assert_eq!(monomials(2, 3).len(), 10);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(1, 4).len(), 5);
    }
}
