//! Binary extension fields GF(2^k) for k <= 24.
//!
//! An element is stored as a `u32` whose bit `i` is the coefficient of
//! `x^i`. The external string form follows the same order: the first
//! character is the constant coefficient, so in GF(4) the string `"01"`
//! is `x` and `"10"` is `1`.
//!
//! Fields whose degree is `2·3^λ` use the modulus `x^k + x^(k/2) + 1`;
//! every other degree takes its modulus from a fixed table.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_K: u32 = 24;

/// Degrees up to this bound get log/antilog tables.
const TABLE_K: u32 = 16;

/// Irreducible moduli (with the leading `x^k` term) for k = 1..=24. The
/// entries for 2, 6 and 18 are the trinomials `x^k + x^(k/2) + 1`.
const MODULI: [u32; 25] = [
    0,
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x49,
    0x83,
    0x11d,
    0x211,
    0x409,
    0x805,
    0x1053,
    0x201b,
    0x4443,
    0x8003,
    0x1_002d,
    0x2_0009,
    0x4_0201,
    0x8_0027,
    0x10_0009,
    0x20_0005,
    0x40_0003,
    0x80_0021,
    0x100_001b,
];

/// A field element. Addition is XOR and needs no field context;
/// multiplication goes through [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl Sub for Fe {
    type Output = Fe;
    #[inline]
    fn sub(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl AddAssign for Fe {
    #[inline]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

/// Defining data of a field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct FieldParams {
    pub k: u32,
    /// Modulus including the leading `x^k` bit.
    pub modulus: u32,
    /// True iff `k = 2·3^λ`.
    pub nice: bool,
}

/// True iff `k = 2·3^λ` for some λ >= 0.
pub fn is_nice_degree(k: u32) -> bool {
    if k < 2 || k % 2 != 0 {
        return false;
    }
    let mut t = k / 2;
    while t % 3 == 0 {
        t /= 3;
    }
    t == 1
}

/// Carry-less product of two bit polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

/// Remainder of bit polynomial `a` modulo `m` (m != 0).
pub fn bitpoly_rem(mut a: u128, m: u128) -> u128 {
    let dm = deg(m);
    while a != 0 && deg(a) >= dm {
        a ^= m << (deg(a) - dm);
    }
    a
}

/// Trial-division irreducibility test over F_2. Practical for degree <= 32.
pub fn is_irreducible_bitpoly(f: u64) -> bool {
    let n = deg(f as u128);
    if n < 1 {
        return false;
    }
    for d in 1..=n / 2 {
        for g in (1u64 << d)..(1u64 << (d + 1)) {
            if bitpoly_rem(f as u128, g as u128) == 0 {
                return false;
            }
        }
    }
    true
}

/// GF(2^k) with precomputed tables for small k.
pub struct Field {
    params: FieldParams,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.params.k, self.params.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}
impl Eq for Field {}

fn registry() -> &'static Mutex<HashMap<FieldParams, Arc<Field>>> {
    static REG: OnceLock<Mutex<HashMap<FieldParams, Arc<Field>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The field of degree `k` with its default modulus.
    pub fn gf(k: u32) -> Result<Arc<Field>> {
        if k == 0 || k > MAX_K {
            return Err(Error::Usage(format!("extension degree {k} outside 1..={MAX_K}")));
        }
        Self::with_modulus(k, MODULI[k as usize])
    }

    /// The field with `p` elements; `p` must be a power of two.
    pub fn of_size(p: u64) -> Result<Arc<Field>> {
        if p < 2 || !p.is_power_of_two() {
            return Err(Error::Usage(format!("field size {p} is not a power of two")));
        }
        Self::gf(p.trailing_zeros())
    }

    /// The field of degree `k` over an explicit modulus. Fields are cached,
    /// so repeated calls share one table.
    pub fn with_modulus(k: u32, modulus: u32) -> Result<Arc<Field>> {
        if k == 0 || k > MAX_K {
            return Err(Error::Usage(format!("extension degree {k} outside 1..={MAX_K}")));
        }
        if deg(modulus as u128) != k as i32 {
            return Err(Error::Usage(format!("modulus {modulus:#x} does not have degree {k}")));
        }
        let params = FieldParams { k, modulus, nice: is_nice_degree(k) };
        if let Some(f) = registry().lock().unwrap().get(&params) {
            return Ok(f.clone());
        }
        if !is_irreducible_bitpoly(modulus as u64) {
            return Err(Error::Usage(format!("modulus {modulus:#x} is reducible")));
        }
        let field = Arc::new(Self::build(params));
        registry().lock().unwrap().insert(params, field.clone());
        Ok(field)
    }

    fn build(params: FieldParams) -> Field {
        let size = 1u32 << params.k;
        let mut field = Field { params, size, exp: Vec::new(), log: Vec::new() };
        if params.k > TABLE_K || params.k == 1 {
            return field;
        }
        let order = size - 1;
        let mut g = 2u32;
        loop {
            let mut exp = Vec::with_capacity(2 * order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = field.mul_slow(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; size as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                let head: Vec<u32> = exp.clone();
                exp.extend_from_slice(&head);
                field.exp = exp;
                field.log = log;
                return field;
            }
            g += 1;
        }
    }

    #[inline]
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        bitpoly_rem(clmul(a as u64, b as u64), self.params.modulus as u128) as u32
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    /// Bits per element.
    pub fn k(&self) -> u32 {
        self.params.k
    }

    /// Number of elements `p = 2^k`.
    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn is_nice(&self) -> bool {
        self.params.nice
    }

    /// The element `x` (the field variable), or 1 in GF(2).
    pub fn x(&self) -> Fe {
        if self.params.k == 1 {
            Fe::ONE
        } else {
            Fe(2)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.log.is_empty() {
            return Fe(self.mul_slow(a.0, b.0));
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        if self.log.is_empty() {
            return Some(self.pow(a, self.size as u64 - 2));
        }
        let order = self.size - 1;
        Some(Fe(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    /// `a / b`; panics if `b` is zero.
    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b).expect("division by zero field element"))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.size))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.size))
    }

    /// All elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    /// Element from its κ string (first character = constant coefficient).
    pub fn from_bits(&self, s: &str) -> Result<Fe> {
        if s.len() != self.params.k as usize {
            return Err(Error::Parse(format!("expected {} bits, got {:?}", self.params.k, s)));
        }
        let mut v = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << i,
                _ => return Err(Error::Parse(format!("not a bit string: {s:?}"))),
            }
        }
        Ok(Fe(v))
    }

    /// κ string of an element.
    pub fn to_bits(&self, a: Fe) -> String {
        (0..self.params.k).map(|i| if (a.0 >> i) & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// Inverse by the extended Euclidean algorithm on bit polynomials.
    /// Independent of the tables; used to cross-check them.
    pub fn inv_euclid(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.params.modulus as u128, a.0 as u128);
        let (mut s0, mut s1) = (0u128, 1u128);
        while r1 != 0 {
            let mut q = 0u128;
            let mut r = r0;
            while r != 0 && deg(r) >= deg(r1) {
                let sh = deg(r) - deg(r1);
                q ^= 1 << sh;
                r ^= r1 << sh;
            }
            let s = s0 ^ clmul_u128(q, s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        Some(Fe(bitpoly_rem(s0, self.params.modulus as u128) as u32))
    }
}

fn clmul_u128(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

/// An element tied to its field, for checked arithmetic at API boundaries.
#[derive(Clone)]
pub struct FieldElem {
    value: Fe,
    field: Arc<Field>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.to_bits(self.value))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.params == other.field.params
    }
}
impl Eq for FieldElem {}

impl FieldElem {
    pub fn new(field: &Arc<Field>, value: Fe) -> Result<Self> {
        if value.0 >= field.size {
            return Err(Error::Domain(format!("value {} exceeds field size", value.0)));
        }
        Ok(FieldElem { value, field: field.clone() })
    }

    pub fn from_bits(field: &Arc<Field>, s: &str) -> Result<Self> {
        Ok(FieldElem { value: field.from_bits(s)?, field: field.clone() })
    }

    pub fn bits(&self) -> String {
        self.field.to_bits(self.value)
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field.params != other.field.params {
            return Err(Error::ParamsMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem { value: self.value + other.value, field: self.field.clone() })
    }
}

/// Product of two elements of the same field.
pub fn fe_mul(a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
    a.check(b)?;
    Ok(FieldElem { value: a.field.mul(a.value, b.value), field: a.field.clone() })
}

/// Multiplicative inverse; zero is a domain error.
pub fn fe_inv(a: &FieldElem) -> Result<FieldElem> {
    let v = a.field.inv(a.value).ok_or_else(|| Error::Domain("zero has no inverse".into()))?;
    Ok(FieldElem { value: v, field: a.field.clone() })
}
