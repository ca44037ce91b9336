//! The permutation `f_A`, the generator built from it by hard-core bits,
//! and inversion from a distinguisher.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::matrix::{ip2, pack, unpack};
use crate::algebra::{mat_pow_vec, Fe, Field, Matrix};
use crate::decoding::hadamard::{agreements, MAX_ELL};
use crate::error::{Error, Result};
use crate::genmatrix::{OrbitTable, MAX_ORBIT};
use crate::hitting::HittingSet;
use crate::oracle::Distinguisher;

/// `f_A(0) = 0`, `f_A(i) = A^i · 1` on `s = m·log p` bit strings, with
/// integers and vectors identified through `pack`.
#[derive(Clone, Debug)]
pub struct IndexPermutation {
    field: Arc<Field>,
    a: Matrix,
    s: u32,
    orbit: Option<OrbitTable>,
}

impl IndexPermutation {
    pub fn new(field: &Arc<Field>, a: &Matrix) -> Result<Self> {
        let s = field.k() * a.dim() as u32;
        if s > 60 {
            return Err(Error::Precondition(format!("s = {s} bits is too wide")));
        }
        let orbit = if 1u64 << s <= MAX_ORBIT { Some(OrbitTable::new(field, a)?) } else { None };
        Ok(IndexPermutation { field: field.clone(), a: a.clone(), s, orbit })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn apply(&self, x: u64) -> u64 {
        if x == 0 {
            return 0;
        }
        match &self.orbit {
            Some(o) => o.forward[x as usize],
            None => {
                let ones = vec![Fe::ONE; self.a.dim()];
                pack(self.field.k(), &mat_pow_vec(&self.field, &self.a, x, &ones).expect("dimensions agree"))
            }
        }
    }

    /// `f^{-1}` from the orbit table; available only when the table was
    /// built and `A` is a generator matrix. Test fixture.
    pub fn inverse(&self, y: u64) -> Option<u64> {
        if y == 0 {
            return Some(0);
        }
        self.orbit.as_ref()?.dlog.get(&y).copied()
    }

    /// Discrete log of a vector, `A^i · 1 = x`.
    pub fn dlog_vec(&self, x: &[Fe]) -> Option<u64> {
        self.inverse(pack(self.field.k(), x)).filter(|&i| i != 0)
    }

    /// `A^i · 1` as a vector (zero vector for `i = 0`).
    pub fn power_vec(&self, i: u64) -> Vec<Fe> {
        unpack(self.field.k(), self.a.dim(), self.apply(i))
    }

    /// True iff `apply` is a bijection of `{0,1}^s` (exhaustive).
    pub fn is_bijection(&self) -> bool {
        let n = 1usize << self.s;
        let mut seen = vec![false; n];
        for x in 0..n as u64 {
            let y = self.apply(x) as usize;
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }
}

pub fn f_apply(perm: &IndexPermutation, x: u64) -> u64 {
    perm.apply(x)
}

/// The `2^(2s)` strings `(<x,r>, <f(x),r>, …, <f^(M−1)(x),r>)`, entry
/// `x·2^s + r`.
#[derive(Clone, Debug)]
pub struct CryptoG {
    perm: Arc<IndexPermutation>,
    big_m: usize,
}

impl CryptoG {
    pub fn new(perm: &Arc<IndexPermutation>, big_m: usize) -> Result<Self> {
        if big_m == 0 || big_m > 64 {
            return Err(Error::Usage(format!("M = {big_m} outside 1..=64")));
        }
        if 2 * perm.s() > 62 {
            return Err(Error::Precondition("2s exceeds the index width".into()));
        }
        Ok(CryptoG { perm: perm.clone(), big_m })
    }

    pub fn string(&self, x: u64, r: u64) -> u64 {
        let mut w = 0u64;
        let mut z = x;
        for q in 0..self.big_m {
            w |= (ip2(z, r) as u64) << q;
            z = self.perm.apply(z);
        }
        w
    }

    pub fn perm(&self) -> &Arc<IndexPermutation> {
        &self.perm
    }
}

impl HittingSet for CryptoG {
    fn bits(&self) -> usize {
        self.big_m
    }

    fn count(&self) -> u64 {
        1u64 << (2 * self.perm.s())
    }

    fn get(&self, idx: u64) -> u64 {
        let s = self.perm.s();
        self.string(idx >> s, idx & ((1u64 << s) - 1))
    }
}

pub fn crypto_g(perm: &Arc<IndexPermutation>, big_m: usize) -> Result<CryptoG> {
    CryptoG::new(perm, big_m)
}

/// Predicts the hard-core bit `<f^{-1}(y), r>` for every `r ∈ {0,1}^s`.
/// One call is one instance of the predictor with its own randomness.
pub trait HardcorePredictor {
    fn predictions(&self, y: u64, rng: &mut dyn rand::RngCore) -> Vec<u8>;
}

/// Exact predictor read off an inverse table. Test fixture.
pub struct ExactPredictor<'a> {
    pub perm: &'a IndexPermutation,
}

impl HardcorePredictor for ExactPredictor<'_> {
    fn predictions(&self, y: u64, _: &mut dyn rand::RngCore) -> Vec<u8> {
        let z = self.perm.inverse(y).unwrap_or(0);
        (0..1u64 << self.perm.s()).map(|r| ip2(z, r)).collect()
    }
}

/// Which side of the distinguisher is the pseudorandom one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `D` accepts generator outputs more often than uniform strings.
    Pseudo,
    /// `D` accepts uniform strings more often (an avoider).
    Uniform,
}

/// The hybrid-argument predictor. An instance samples a position
/// `i ∈ [1, M]`; for each `r` it fills positions `1..i` with random bits,
/// guesses position `i` with a random bit `b`, sets positions `i+1..M` to
/// `<f^q(y), r>` for `q = 0, 1, …`, and keeps or flips `b` according to
/// `D` and the sign.
pub struct HybridPredictor<'a> {
    pub perm: &'a IndexPermutation,
    pub d: &'a dyn Distinguisher,
    pub big_m: usize,
    pub sign: Sign,
}

impl HardcorePredictor for HybridPredictor<'_> {
    fn predictions(&self, y: u64, rng: &mut dyn rand::RngCore) -> Vec<u8> {
        let m = self.big_m;
        let i = rng.gen_range(1..=m);
        let mut chain = Vec::with_capacity(m - i);
        let mut z = y;
        for _ in i..m {
            chain.push(z);
            z = self.perm.apply(z);
        }
        let prefix_mask = (1u64 << (i - 1)) - 1;
        (0..1u64 << self.perm.s())
            .map(|r| {
                let b = rng.gen::<bool>() as u64;
                let mut w = (rng.gen::<u64>() & prefix_mask) | (b << (i - 1));
                for (q, &c) in chain.iter().enumerate() {
                    w |= (ip2(c, r) as u64) << (i + q);
                }
                let keep = match self.sign {
                    Sign::Pseudo => self.d.accepts(w),
                    Sign::Uniform => !self.d.accepts(w),
                };
                if keep {
                    b as u8
                } else {
                    1 - b as u8
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct InvertConfig {
    /// Decoding advantage: candidates need agreement `>= 1/2 + gamma/2`.
    pub gamma: f64,
    /// Independent predictor instances tried.
    pub repetitions: usize,
}

impl InvertConfig {
    /// `gamma = epsilon / M`, one instance per position on average.
    pub fn for_advantage(epsilon: f64, big_m: usize) -> Self {
        InvertConfig { gamma: epsilon / big_m as f64, repetitions: big_m }
    }
}

/// Tries to find `f^{-1}(y)`. Every returned value satisfies `f(z) = y`;
/// `None` is the failure sentinel.
pub fn invert(
    perm: &IndexPermutation,
    predictor: &dyn HardcorePredictor,
    y: u64,
    cfg: &InvertConfig,
    rng: &mut dyn rand::RngCore,
) -> Result<Option<u64>> {
    if perm.s() > MAX_ELL {
        return Err(Error::Precondition(format!("s = {} exceeds the decoder limit", perm.s())));
    }
    let n = (1u64 << perm.s()) as f64;
    let need = (0.5 + cfg.gamma / 2.0) * n - 1e-9;
    for _ in 0..cfg.repetitions.max(1) {
        let preds = predictor.predictions(y, rng);
        let mut cands: Vec<(u32, u64)> = agreements(&preds)
            .into_iter()
            .enumerate()
            .filter(|&(_, a)| a as f64 >= need)
            .map(|(z, a)| (a, z as u64))
            .collect();
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        if let Some(&(_, z)) = cands.iter().find(|&&(_, z)| perm.apply(z) == y) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// The distinguisher maximizing `Pr[D(U)=1] − Pr[D(G)=1]`: accept exactly
/// the strings that are rarer in the generator output than under the
/// uniform distribution. Returns it with its advantage.
pub fn max_advantage_avoider(g: &CryptoG) -> (Vec<bool>, f64) {
    let m = g.bits();
    let size = 1usize << m;
    let mut counts = vec![0u64; size];
    for idx in 0..g.count() {
        counts[g.get(idx) as usize] += 1;
    }
    let total = g.count() as f64;
    let mut accept = vec![false; size];
    let mut adv = 0.0;
    for w in 0..size {
        let diff = 1.0 / size as f64 - counts[w] as f64 / total;
        if diff > 0.0 {
            accept[w] = true;
            adv += diff;
        }
    }
    (accept, adv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::parse_bits;
    use crate::rng;

    fn gf4_x() -> (Arc<Field>, Matrix) {
        let f = Field::gf(2).unwrap();
        let a = Matrix::from_rows(vec![vec![f.x()]]).unwrap();
        (f, a)
    }

    #[test]
    fn gf4_examples() {
        let (f, a) = gf4_x();
        let perm = Arc::new(IndexPermutation::new(&f, &a).unwrap());
        assert_eq!(perm.apply(0), 0);
        assert_eq!(perm.apply(1), parse_bits("01").unwrap());
        let g = crypto_g(&perm, 2).unwrap();
        assert_eq!(g.count(), 16);
        assert_eq!(g.string(parse_bits("10").unwrap(), parse_bits("11").unwrap()), parse_bits("11").unwrap());
        assert_eq!(g.string(3, 0), 0);
    }

    #[test]
    fn exact_predictor_inverts() {
        let (f, a) = gf4_x();
        let perm = IndexPermutation::new(&f, &a).unwrap();
        let pred = ExactPredictor { perm: &perm };
        let cfg = InvertConfig { gamma: 0.5, repetitions: 1 };
        let mut r = rng::stream(1, "inv", 0);
        for y in 0..4 {
            let z = invert(&perm, &pred, y, &cfg, &mut r).unwrap().unwrap();
            assert_eq!(perm.apply(z), y);
        }
    }
}
