//! Dense easy properties, the brute-force selector, the length schedule of
//! the recursion, and the win-win algorithm at desk scale.
//!
//! An `n`-bit string is a `u64` whose bit `q` holds position `q + 1`.
//! Lexicographic order and the number a string encodes both read position 1
//! as the most significant bit, so `number(w)` is `w` bit-reversed.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::Field;
use crate::chen_tell::{ct_reconstruct, CtConfig, CtParams, LayeredCircuit, PolyLadder, Wire};
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::su_hsg::SuParams;
use crate::su_modified::{Avoider, SuContext};

/// The number encoded by an `n`-bit string.
pub fn number(w: u64, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    w.reverse_bits() >> (64 - n)
}

/// Inverse of [`number`].
pub fn from_number(x: u64, n: usize) -> u64 {
    number(x, n)
}

/// `"1000"` style rendering, position 1 first.
pub fn bit_string(w: u64, n: usize) -> String {
    (0..n).map(|q| if w >> q & 1 == 1 { '1' } else { '0' }).collect()
}

/// A property decidable in polynomial time that contains at least an
/// `n^(−rho)` fraction of the `n`-bit strings.
pub trait DenseProperty {
    fn name(&self) -> String;
    fn contains(&self, n: usize, w: u64) -> bool;
    fn rho(&self) -> f64;
}

/// Position 1 is set.
#[derive(Clone, Copy, Debug)]
pub struct LeadingBit;

impl DenseProperty for LeadingBit {
    fn name(&self) -> String {
        "leading-bit".into()
    }

    fn contains(&self, n: usize, w: u64) -> bool {
        n > 0 && w & 1 == 1
    }

    fn rho(&self) -> f64 {
        1.0
    }
}

/// An odd number of ones.
#[derive(Clone, Copy, Debug)]
pub struct Parity;

impl DenseProperty for Parity {
    fn name(&self) -> String {
        "parity".into()
    }

    fn contains(&self, n: usize, w: u64) -> bool {
        (w & mask(n)).count_ones() % 2 == 1
    }

    fn rho(&self) -> f64 {
        1.0
    }
}

/// `n`-bit primes: leading bit set and the encoded number prime.
#[derive(Clone, Copy, Debug)]
pub struct Primality;

impl DenseProperty for Primality {
    fn name(&self) -> String {
        "primality".into()
    }

    fn contains(&self, n: usize, w: u64) -> bool {
        n > 0 && w & 1 == 1 && is_prime(number(w, n))
    }

    fn rho(&self) -> f64 {
        1.0
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Fraction of `samples` uniform `n`-bit strings in `q`.
pub fn sampled_density<R: Rng + ?Sized>(q: &dyn DenseProperty, n: usize, samples: usize, rng: &mut R) -> f64 {
    let hits = (0..samples).filter(|_| q.contains(n, rng.gen::<u64>() & mask(n))).count();
    hits as f64 / samples.max(1) as f64
}

/// `{0,1}^n` in lexicographic order.
#[derive(Clone, Copy, Debug)]
pub struct AllStrings {
    pub n: usize,
}

impl HittingSet for AllStrings {
    fn bits(&self) -> usize {
        self.n
    }

    fn count(&self) -> u64 {
        1u64 << self.n
    }

    fn get(&self, idx: u64) -> u64 {
        from_number(idx, self.n)
    }
}

/// First entry of `h` in `q`.
pub fn brute_force_select(h: &dyn HittingSet, q: &dyn DenseProperty) -> Option<u64> {
    let n = h.bits();
    (0..h.count()).map(|i| h.get(i)).find(|&w| q.contains(n, w))
}

/// Lengths and costs of one ladder, all as base-2 logarithms.
#[derive(Clone, Debug, Serialize)]
pub struct Schedule {
    pub n0: u64,
    pub alpha: u32,
    pub beta: u32,
    pub c: f64,
    pub rho: f64,
    /// `log n_i` for `i = 0..=t+1`.
    pub log_n: Vec<f64>,
    /// `log T_i` for `i = 0..=t`.
    pub log_t: Vec<f64>,
    /// Upper bounds on `log d_i` for `i = 0..=t`: `d_0 = 2n_0`,
    /// `d_i <= 2n_i^c`.
    pub log_d: Vec<f64>,
    pub t: usize,
}

/// `n_i = n_0^(beta^i)`, `T_0 = 2^(2n_0)`, `T_(i+1) = T_i^alpha`, and `t`
/// the first index with `n_(t+1) > T_t^(1/(c·rho))`.
pub fn schedule_compute(n0: u64, alpha: u32, beta: u32, c: f64, rho: f64) -> Result<Schedule> {
    if n0 < 2 || alpha == 0 || beta < 2 * alpha {
        return Err(Error::Precondition(format!("need n_0 >= 2 and beta >= 2·alpha, got {n0}, {alpha}, {beta}")));
    }
    if !(c * rho > 0.0) {
        return Err(Error::Precondition("c·rho must be positive".into()));
    }
    let ln0 = (n0 as f64).log2();
    let log_n = |i: usize| (beta as f64).powi(i as i32) * ln0;
    let log_t = |i: usize| (alpha as f64).powi(i as i32) * 2.0 * n0 as f64;
    let mut t = 0;
    while log_n(t + 1) <= log_t(t) / (c * rho) {
        t += 1;
        if t > 64 {
            return Err(Error::Construction("schedule does not cross over".into()));
        }
    }
    if t as f64 > ln0 {
        return Err(Error::Construction(format!("t = {t} exceeds log n_0 = {ln0}")));
    }
    let s = Schedule {
        n0,
        alpha,
        beta,
        c,
        rho,
        log_n: (0..=t + 1).map(log_n).collect(),
        log_t: (0..=t).map(log_t).collect(),
        log_d: (0..=t).map(|i| if i == 0 { (2.0 * n0 as f64).log2() } else { 1.0 + c * log_n(i) }).collect(),
        t,
    };
    let ratios: Vec<f64> = (0..=t).map(|i| s.log_t[i] / s.log_n[i]).collect();
    if ratios.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Construction("log T_i / log n_i is not decreasing".into()));
    }
    Ok(s)
}

/// Lengths `n_i^(ℓ)`: `n_0^(0) = base`, `n_0^(ℓ) = 2^(2^(n_0^(ℓ−1)))`,
/// `n_(i+1)^(ℓ) = (n_i^(ℓ))^beta`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LengthLadder {
    pub base: u64,
    pub beta: u32,
}

impl LengthLadder {
    /// `n_0^(ℓ)`, or `None` beyond 64 bits.
    pub fn start(&self, level: usize) -> Option<u64> {
        let mut n = self.base;
        for _ in 0..level {
            let e = 1u64.checked_shl(u32::try_from(n).ok()?)?;
            n = 1u64.checked_shl(u32::try_from(e).ok()?)?;
        }
        Some(n)
    }

    /// `(ℓ, i)` with `n_i^(ℓ) = n`, found as the largest `ℓ` with
    /// `n_0^(ℓ) <= n` and then the largest `i` with `n_i^(ℓ) <= n`.
    pub fn position(&self, n: u64) -> Option<(usize, usize)> {
        let mut level = None;
        for l in 0.. {
            match self.start(l) {
                Some(s) if s <= n => level = Some((l, s)),
                _ => break,
            }
            if self.start(l + 1) == self.start(l) {
                break;
            }
        }
        let (l, mut cur) = level?;
        let mut i = 0;
        while let Some(next) = cur.checked_pow(self.beta) {
            if next > n || next == cur {
                break;
            }
            cur = next;
            i += 1;
        }
        (cur == n).then_some((l, i))
    }
}

/// A constant circuit of width 2 and depth 1 on the input `1`: layer 0
/// holds `1, 0`, and output `j` is `NAND(0, 0) = 1` or `NAND(1, 1) = 0`.
pub fn constant_block(bits: &[bool]) -> Result<LayeredCircuit> {
    if bits.is_empty() || bits.len() > 2 {
        return Err(Error::Usage("a block holds one or two bits".into()));
    }
    let wires = bits
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let g = if b { 2 } else { 1 };
            Wire { layer: 1, w: j + 1, u: g, v: g }
        })
        .collect();
    LayeredCircuit::new(2, 1, 1, bits.len(), wires)
}

/// Reconstruction of `BF_i` through the targeted generator. The circuit is
/// split into two-output blocks, one polynomial ladder each.
pub struct CaseOne {
    pub field: Arc<Field>,
    pub blocks: Vec<PolyLadder>,
    pub ctx: SuContext,
    pub layer: SuParams,
    pub cfg: CtConfig,
    /// Output length `M` of the generator, the length `Q` is queried at.
    pub big_m: usize,
}

impl CaseOne {
    /// Toy parameters `p = 32`, `h = 2`, `m = 1`, `M = 4` for the constant
    /// circuit printing `value`.
    pub fn toy(value: &[bool]) -> Result<Self> {
        let (h, p, m, big_m) = (2, 32, 1, 4);
        let field = Field::of_size(p as u64)?;
        let params = CtParams::toy(h, p, m, big_m);
        let layer = params.layer_params()?;
        let blocks = value
            .chunks(2)
            .map(|c| PolyLadder::new(&field, h, m, constant_block(c)?, &[true]))
            .collect::<Result<Vec<_>>>()?;
        let ctx = SuContext::new(&field, 3 * m)?;
        let cfg = CtConfig::for_params(&blocks[0], &layer);
        Ok(CaseOne { field, blocks, ctx, layer, cfg, big_m })
    }
}

pub enum Stage {
    /// `n_(i+1) <= T_i^(1/(c·rho))`: reconstruct `BF_i`. `None` when `BF_i`
    /// is `⊥`.
    CaseOne(Option<CaseOne>),
    /// Brute force over the materialized `H_i`.
    CaseTwo(Box<dyn HittingSet + Send + Sync>),
}

pub struct Level {
    pub n: usize,
    pub stage: Stage,
}

/// The materialized levels of one ladder for one property.
pub struct Registry {
    pub ladder: LengthLadder,
    pub property: Arc<dyn DenseProperty + Send + Sync>,
    pub levels: Vec<Level>,
}

impl Registry {
    pub fn new(ladder: LengthLadder, property: Arc<dyn DenseProperty + Send + Sync>) -> Self {
        Registry { ladder, property, levels: Vec::new() }
    }

    /// Adds length `n` with `H = {0,1}^n` brute-forced directly.
    pub fn push_case_two(&mut self, n: usize) -> Result<()> {
        if n == 0 || n > 32 {
            return Err(Error::Resource(format!("{{0,1}}^{n} is too large to materialize")));
        }
        self.check_length(n)?;
        self.levels.push(Level { n, stage: Stage::CaseTwo(Box::new(AllStrings { n })) });
        Ok(())
    }

    /// Adds length `n` with `H = {0,1}^n` and `BF` reconstructed from the
    /// toy targeted generator.
    pub fn push_case_one(&mut self, n: usize) -> Result<()> {
        if n == 0 || n > 16 {
            return Err(Error::Resource(format!("a constant circuit of {n} outputs is too large")));
        }
        self.check_length(n)?;
        let bf = brute_force_select(&AllStrings { n }, &*self.property);
        let stage = match bf {
            Some(w) => {
                let bits: Vec<bool> = (0..n).map(|q| w >> q & 1 == 1).collect();
                Some(CaseOne::toy(&bits)?)
            }
            None => None,
        };
        self.levels.push(Level { n, stage: Stage::CaseOne(stage) });
        Ok(())
    }

    fn check_length(&self, n: usize) -> Result<()> {
        if self.ladder.position(n as u64).is_none() {
            return Err(Error::Usage(format!("{n} is not on the length ladder")));
        }
        Ok(())
    }
}

/// Which distinguisher Case I hands to the reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseOneOracle {
    /// Membership in `Q` at the generator's output length.
    Property,
    /// The planted avoider fixture.
    Planted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    One,
    Two,
}

#[derive(Clone, Debug, Serialize)]
pub struct BOutcome {
    pub n: usize,
    pub case: Option<Case>,
    pub output: Option<u64>,
    pub reason: Option<String>,
}

/// The algorithm on input length `n`. Outputs are always in `Q`.
pub fn algorithm_b<R: Rng + ?Sized>(n: usize, registry: &Registry, oracle: CaseOneOracle, rng: &mut R) -> Result<BOutcome> {
    let bot = |case, reason: &str| BOutcome { n, case, output: None, reason: Some(reason.to_string()) };
    if registry.ladder.position(n as u64).is_none() {
        return Ok(bot(None, "length is not on the ladder"));
    }
    let Some(level) = registry.levels.iter().find(|l| l.n == n) else {
        return Ok(bot(None, "level is not materialized"));
    };
    let q = &*registry.property;
    let (case, z) = match &level.stage {
        Stage::CaseTwo(h) => (Case::Two, brute_force_select(&**h, q)),
        Stage::CaseOne(None) => return Ok(bot(Some(Case::One), "BF is ⊥")),
        Stage::CaseOne(Some(one)) => {
            let big_m = one.big_m;
            let d = move |w: u64| q.contains(big_m, w);
            let avoider = match oracle {
                CaseOneOracle::Property => Avoider::Genuine(&d),
                CaseOneOracle::Planted => Avoider::Planted,
            };
            let mut w = 0u64;
            let mut pos = 0;
            for block in &one.blocks {
                let out = ct_reconstruct(block, &one.ctx, avoider, &one.layer, &one.cfg, rng)?;
                let Some(bits) = out.output else {
                    return Ok(bot(Some(Case::One), out.reason.as_deref().unwrap_or("reconstruction failed")));
                };
                for b in bits {
                    w |= (b as u64) << pos;
                    pos += 1;
                }
            }
            (Case::One, Some(w))
        }
    };
    match z {
        Some(w) if q.contains(n, w) => Ok(BOutcome { n, case: Some(case), output: Some(w), reason: None }),
        Some(_) => Ok(bot(Some(case), "output fails Q")),
        None => Ok(bot(Some(case), "no element of H is in Q")),
    }
}

/// Ladder `4, 16, 256, …`: length 4 in Case I, length 16 in Case II.
pub fn desk_registry(property: Arc<dyn DenseProperty + Send + Sync>) -> Result<Registry> {
    let mut r = Registry::new(LengthLadder { base: 4, beta: 2 }, property);
    r.push_case_one(4)?;
    r.push_case_two(16)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        assert_eq!(bit_string(from_number(8, 4), 4), "1000");
        assert_eq!(number(from_number(32771, 16), 16), 32771);
        assert!(LeadingBit.contains(4, from_number(8, 4)));
        assert!(!LeadingBit.contains(4, from_number(7, 4)));
    }

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn ladder_positions() {
        let l = LengthLadder { base: 4, beta: 2 };
        assert_eq!(l.position(4), Some((0, 0)));
        assert_eq!(l.position(16), Some((0, 1)));
        assert_eq!(l.position(256), Some((0, 2)));
        assert_eq!(l.position(65536), Some((1, 0)));
        assert_eq!(l.position(5), None);
        assert_eq!(l.position(3), None);
    }

    #[test]
    fn constant_blocks() {
        for bits in [[true, false], [false, true], [true, true], [false, false]] {
            assert_eq!(constant_block(&bits).unwrap().output(&[true]), bits.to_vec());
        }
    }
}
