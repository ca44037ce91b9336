//! Distinguishers on M-bit strings.
//!
//! Strings are `u64` values: bit `q` holds position `q + 1`.

use std::collections::HashSet;

use crate::rng::keyed_hash;

pub trait Distinguisher {
    fn accepts(&self, w: u64) -> bool;
}

impl<F: Fn(u64) -> bool> Distinguisher for F {
    fn accepts(&self, w: u64) -> bool {
        self(w)
    }
}

/// Accepts everything or nothing.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub bool);

impl Distinguisher for Constant {
    fn accepts(&self, _: u64) -> bool {
        self.0
    }
}

/// A pseudo-random predicate accepting roughly a `density` fraction of
/// strings, fixed by `key`.
#[derive(Clone, Copy, Debug)]
pub struct KeyedRandom {
    pub key: u64,
    pub density: f64,
}

impl Distinguisher for KeyedRandom {
    fn accepts(&self, w: u64) -> bool {
        let h = keyed_hash(self.key, w);
        (h as f64) < self.density * (u64::MAX as f64)
    }
}

/// Accepts exactly the strings outside a given set.
#[derive(Clone, Debug, Default)]
pub struct Complement {
    set: HashSet<u64>,
}

impl Complement {
    pub fn new(strings: impl IntoIterator<Item = u64>) -> Self {
        Complement { set: strings.into_iter().collect() }
    }
}

impl Distinguisher for Complement {
    fn accepts(&self, w: u64) -> bool {
        !self.set.contains(&w)
    }
}

/// Exact acceptance probability over uniform `bits`-bit strings.
pub fn acceptance_rate(d: &dyn Distinguisher, bits: usize) -> f64 {
    assert!(bits <= 24, "exact acceptance rate limited to 24 bits");
    let n = 1u64 << bits;
    (0..n).filter(|&w| d.accepts(w)).count() as f64 / n as f64
}
