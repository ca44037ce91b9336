//! Generator matrices for F_p^m and the candidate set that is guaranteed
//! to contain one.
//!
//! Two constructions of F_(p^m) are supported. When `p` has a nice degree
//! and `m` is a power of three, F_(p^m) is the nice field of degree
//! `k·m`, and a vector coordinate `j` collects the bits `i·m + j` of an
//! element (the substitution `x^m ↦ y`). Otherwise F_(p^m) is built as
//! `F_p[z]/(g)` for the first monic irreducible `g` of degree `m`, with
//! basis `1, z, …, z^(m−1)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::matrix::{pack, unpack};
use crate::algebra::{Fe, Field, Matrix, UniPoly};
use crate::error::{Error, Result};

/// Largest `p^m` for which orbits are enumerated.
pub const MAX_ORBIT: u64 = 1 << 20;

/// A matrix with a record of whether its orbit check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    pub a: Matrix,
    pub verified: bool,
}

/// `p^m − 1`.
pub fn orbit_len(f: &Field, m: usize) -> u64 {
    (f.size() as u64).pow(m as u32) - 1
}

/// True iff the orbit `A^i · 1`, `1 <= i < p^m`, covers F_p^m \ {0}.
pub fn is_generator_matrix(f: &Field, a: &Matrix) -> Result<bool> {
    let m = a.dim();
    let n = orbit_len(f, m);
    if n + 1 > MAX_ORBIT {
        return Err(Error::Resource(format!("orbit of size {n} exceeds the enumeration cap")));
    }
    let ones = vec![Fe::ONE; m];
    let mut w = ones.clone();
    let mut next = vec![Fe::ZERO; m];
    for i in 1..=n {
        a.mul_vec_into(f, &w, &mut next);
        std::mem::swap(&mut w, &mut next);
        if w.iter().all(|c| c.is_zero()) {
            return Ok(false);
        }
        if w == ones {
            return Ok(i == n);
        }
    }
    Ok(false)
}

/// The field F_(p^m) viewed as F_p^m.
#[derive(Clone, Debug)]
pub enum ExtensionField {
    /// Nice tower: the big field has degree `k·m`.
    Nice { base: Arc<Field>, big: Arc<Field>, m: usize },
    /// `F_p[z]/(g)`, `g` monic of degree `m` given by its low coefficients.
    Quotient { base: Arc<Field>, m: usize, modulus: Vec<Fe> },
}

fn is_power_of_three(m: usize) -> bool {
    let mut t = m;
    while t > 1 && t % 3 == 0 {
        t /= 3;
    }
    t == 1
}

impl ExtensionField {
    /// The tower construction; requires a nice `p` and `m = 3^β`.
    pub fn nice(base: &Arc<Field>, m: usize) -> Result<Self> {
        if !base.is_nice() || !is_power_of_three(m) {
            return Err(Error::Precondition(format!(
                "nice tower needs a nice field and m a power of 3 (k = {}, m = {m})",
                base.k()
            )));
        }
        let big = Field::gf(base.k() * m as u32)?;
        Ok(ExtensionField::Nice { base: base.clone(), big, m })
    }

    /// Quotient-ring construction for any `p` and `m`.
    pub fn quotient(base: &Arc<Field>, m: usize) -> Result<Self> {
        let modulus = first_irreducible(base, m)?;
        Ok(ExtensionField::Quotient { base: base.clone(), m, modulus })
    }

    /// Nice tower when it applies, quotient ring otherwise.
    pub fn for_params(base: &Arc<Field>, m: usize) -> Result<Self> {
        Self::nice(base, m).or_else(|_| Self::quotient(base, m))
    }

    pub fn base(&self) -> &Arc<Field> {
        match self {
            ExtensionField::Nice { base, .. } | ExtensionField::Quotient { base, .. } => base,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            ExtensionField::Nice { m, .. } | ExtensionField::Quotient { m, .. } => *m,
        }
    }

    /// The `n`-th element in the canonical enumeration (`n = 2` is the
    /// generator of the extension as an algebra, `x` resp. `z`).
    pub fn element(&self, n: u64) -> Vec<Fe> {
        match self {
            ExtensionField::Nice { base, m, .. } => self.to_vector(n, base.k(), *m),
            ExtensionField::Quotient { base, m, .. } => {
                // n's base-p digits, lowest first, are the coefficients of z^j
                let p = base.size() as u64;
                let mut n = n;
                (0..*m)
                    .map(|_| {
                        let c = Fe((n % p) as u32);
                        n /= p;
                        c
                    })
                    .collect()
            }
        }
    }

    fn to_vector(&self, v: u64, k: u32, m: usize) -> Vec<Fe> {
        (0..m)
            .map(|j| {
                let mut c = 0u32;
                for i in 0..k as usize {
                    c |= (((v >> (i * m + j)) & 1) as u32) << i;
                }
                Fe(c)
            })
            .collect()
    }

    fn from_vector(&self, x: &[Fe], k: u32, m: usize) -> u64 {
        let mut v = 0u64;
        for (j, c) in x.iter().enumerate() {
            for i in 0..k as usize {
                v |= (((c.0 >> i) & 1) as u64) << (i * m + j);
            }
        }
        v
    }

    /// Start of the candidate enumeration: the element `x` (resp. `z`), so
    /// that candidates run `x, x+1, …` in canonical order.
    pub fn first_candidate(&self) -> u64 {
        match self {
            ExtensionField::Nice { .. } => 2,
            ExtensionField::Quotient { base, m, .. } => {
                if *m == 1 {
                    2
                } else {
                    base.size() as u64
                }
            }
        }
    }

    /// Product of two elements given as vectors.
    pub fn mul(&self, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        match self {
            ExtensionField::Nice { base, big, m } => {
                let k = base.k();
                let va = self.from_vector(a, k, *m);
                let vb = self.from_vector(b, k, *m);
                let prod = big.mul(Fe(va as u32), Fe(vb as u32));
                self.to_vector(prod.0 as u64, k, *m)
            }
            ExtensionField::Quotient { base, m, modulus } => {
                let f = &**base;
                let pa = UniPoly::from_coeffs(a.to_vec());
                let pb = UniPoly::from_coeffs(b.to_vec());
                let mut g = modulus.clone();
                g.push(Fe::ONE);
                let (_, r) = pa.mul(f, &pb).divrem(f, &UniPoly::from_coeffs(g));
                (0..*m).map(|i| r.coeff(i)).collect()
            }
        }
    }

    /// The matrix of multiplication by `g`.
    pub fn mult_matrix(&self, g: &[Fe]) -> Matrix {
        let m = self.m();
        let mut a = Matrix::zero(m);
        for j in 0..m {
            let mut e = vec![Fe::ZERO; m];
            e[j] = Fe::ONE;
            let col = self.mul(g, &e);
            for (i, &c) in col.iter().enumerate() {
                a.set(i, j, c);
            }
        }
        a
    }
}

/// First monic irreducible polynomial of degree `m` over `f`, in the order
/// of the base-p integer formed by its low coefficients (constant term
/// lowest). Returned without the leading 1.
fn first_irreducible(f: &Arc<Field>, m: usize) -> Result<Vec<Fe>> {
    if m == 1 {
        return Ok(vec![Fe::ZERO]);
    }
    let p = f.size() as u64;
    let total = p.checked_pow(m as u32).filter(|&t| t <= MAX_ORBIT * 64).ok_or_else(|| {
        Error::Resource(format!("searching degree-{m} polynomials over GF({p}) is too large"))
    })?;
    for n in 0..total {
        let mut low = Vec::with_capacity(m);
        let mut t = n;
        for _ in 0..m {
            low.push(Fe((t % p) as u32));
            t /= p;
        }
        let mut g = low.clone();
        g.push(Fe::ONE);
        if is_irreducible_over(f, &UniPoly::from_coeffs(g)) {
            return Ok(low);
        }
    }
    Err(Error::Construction(format!("no irreducible polynomial of degree {m} found")))
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible_over(f: &Field, g: &UniPoly) -> bool {
    let Some(n) = g.degree() else { return false };
    if n == 0 {
        return false;
    }
    let p = f.size() as u64;
    for d in 1..=n / 2 {
        for t in 0..p.pow(d as u32) {
            let mut c = Vec::with_capacity(d + 1);
            let mut x = t;
            for _ in 0..d {
                c.push(Fe((x % p) as u32));
                x /= p;
            }
            c.push(Fe::ONE);
            let (_, r) = g.divrem(f, &UniPoly::from_coeffs(c));
            if r.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The matrix of multiplication by `g` in the nice tower. Errors unless `p`
/// is nice and `m` is a power of three.
pub fn mult_to_matrix(base: &Arc<Field>, m: usize, g: &[Fe]) -> Result<Matrix> {
    Ok(ExtensionField::nice(base, m)?.mult_matrix(g))
}

/// Candidate matrices `A_g` for `g = x, x+1, …` in canonical order, ending
/// with the first one whose orbit check passes.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub p: usize,
    pub m: usize,
    pub matrices: Vec<GenMatrix>,
}

impl CandidateSet {
    /// First verified generator in the set.
    pub fn first_generator(&self) -> Option<&GenMatrix> {
        self.matrices.iter().find(|g| g.verified)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// Enumeration cap `4·m·log2 p`.
pub fn candidate_cap(f: &Field, m: usize) -> usize {
    4 * m * f.k() as usize
}

/// Builds the candidate set, using the nice tower when it applies.
pub fn build_candidate_set(f: &Arc<Field>, m: usize) -> Result<CandidateSet> {
    build_candidate_set_with(&ExtensionField::for_params(f, m)?, candidate_cap(f, m), true)
}

/// Candidate set over an explicit extension. With `stop_at_generator` the
/// enumeration ends at the first verified generator; otherwise exactly
/// `count` candidates are returned (still requiring one generator).
pub fn build_candidate_set_with(ext: &ExtensionField, count: usize, stop_at_generator: bool) -> Result<CandidateSet> {
    let f = ext.base();
    let m = ext.m();
    let top = orbit_len(f, m) + 1;
    let mut matrices = Vec::new();
    let mut any = false;
    let first = ext.first_candidate();
    for n in first..(first + count as u64).min(top) {
        let a = ext.mult_matrix(&ext.element(n));
        let verified = is_generator_matrix(f, &a)?;
        any |= verified;
        matrices.push(GenMatrix { a, verified });
        if verified && stop_at_generator {
            break;
        }
    }
    if !any {
        return Err(Error::Construction(format!(
            "no generator among the first {} candidates for p = {}, m = {m}",
            matrices.len(),
            f.size()
        )));
    }
    Ok(CandidateSet { p: f.size(), m, matrices })
}

/// Orbit tables of a matrix: `forward[i] = pack(A^i · 1)` for
/// `0 <= i <= p^m − 1`, and the discrete logarithm of every packed vector
/// reached (the value `p^m − 1` is used for the all-ones vector).
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub forward: Vec<u64>,
    pub dlog: HashMap<u64, u64>,
}

impl OrbitTable {
    pub fn new(f: &Field, a: &Matrix) -> Result<Self> {
        let m = a.dim();
        let n = orbit_len(f, m);
        if n + 1 > MAX_ORBIT {
            return Err(Error::Resource(format!("orbit of size {n} exceeds the enumeration cap")));
        }
        let k = f.k();
        let mut forward = Vec::with_capacity(n as usize + 1);
        let mut dlog = HashMap::with_capacity(n as usize);
        let mut w = vec![Fe::ONE; m];
        let mut next = vec![Fe::ZERO; m];
        forward.push(pack(k, &w));
        for i in 1..=n {
            a.mul_vec_into(f, &w, &mut next);
            std::mem::swap(&mut w, &mut next);
            let key = pack(k, &w);
            forward.push(key);
            dlog.entry(key).or_insert(i);
        }
        Ok(OrbitTable { forward, dlog })
    }

    /// `A^e · 1` as a vector.
    pub fn power_of_ones(&self, f: &Field, m: usize, e: u64) -> Vec<Fe> {
        let n = self.forward.len() as u64 - 1;
        unpack(f.k(), m, self.forward[(e % n) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_and_nice_agree_on_generator_existence() {
        let f = Field::gf(2).unwrap();
        let nice = ExtensionField::nice(&f, 3).unwrap();
        let quo = ExtensionField::quotient(&f, 3).unwrap();
        for ext in [nice, quo] {
            let set = build_candidate_set_with(&ext, 12, true).unwrap();
            assert!(set.first_generator().is_some());
        }
    }

    #[test]
    fn irreducible_search() {
        let f = Field::gf(4).unwrap();
        let g = first_irreducible(&f, 2).unwrap();
        let mut c = g.clone();
        c.push(Fe::ONE);
        let poly = UniPoly::from_coeffs(c);
        // no roots in F_16
        assert!(f.elements().all(|t| !poly.eval(&f, t).is_zero()));
    }
}
