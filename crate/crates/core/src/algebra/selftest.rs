//! Randomized axiom checks for a field, with table multiplication compared
//! against carry-less multiplication.

use rand::Rng;
use serde::Serialize;

use super::field::{bitpoly_rem, clmul, is_irreducible_bitpoly, Fe, Field};

#[derive(Clone, Debug, Default, Serialize)]
pub struct SelfTest {
    pub k: u32,
    pub modulus: u32,
    pub modulus_irreducible: bool,
    pub checks: usize,
    pub failures: usize,
    /// Names of the identities that failed at least once.
    pub failed: Vec<String>,
}

/// Runs `rounds` rounds of checks on random triples.
pub fn field_selftest<R: Rng + ?Sized>(f: &Field, rounds: usize, rng: &mut R) -> SelfTest {
    let params = f.params();
    let m = params.modulus as u128;
    let slow = |a: Fe, b: Fe| Fe(bitpoly_rem(clmul(a.0 as u64, b.0 as u64), m) as u32);
    let mut t = SelfTest {
        k: params.k,
        modulus: params.modulus,
        modulus_irreducible: is_irreducible_bitpoly(m as u64),
        ..Default::default()
    };
    let check = |name: &str, ok: bool, t: &mut SelfTest| {
        t.checks += 1;
        if !ok {
            t.failures += 1;
            if !t.failed.iter().any(|n| n == name) {
                t.failed.push(name.to_string());
            }
        }
    };
    let q = f.size() as u64;
    for _ in 0..rounds {
        let (a, b, c) = (f.random(rng), f.random(rng), f.random(rng));
        check("add commutes", a + b == b + a, &mut t);
        check("add associates", (a + b) + c == a + (b + c), &mut t);
        check("char 2", a + a == Fe::ZERO && a + Fe::ZERO == a, &mut t);
        check("mul commutes", f.mul(a, b) == f.mul(b, a), &mut t);
        check("mul associates", f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), &mut t);
        check("distributes", f.mul(a, b + c) == f.mul(a, b) + f.mul(a, c), &mut t);
        check("unit", f.mul(a, Fe::ONE) == a, &mut t);
        check("carry-less product", f.mul(a, b) == slow(a, b), &mut t);
        check("square", f.square(a) == f.mul(a, a), &mut t);
        if a != Fe::ZERO {
            let inv = f.inv(a);
            check("inverse", inv.is_some_and(|i| f.mul(a, i) == Fe::ONE), &mut t);
            check("euclid inverse", f.inv_euclid(a) == inv, &mut t);
            check("Fermat", f.pow(a, q - 1) == Fe::ONE, &mut t);
        } else {
            check("zero has no inverse", f.inv(a).is_none(), &mut t);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn small_fields_pass() {
        let mut r = rng::stream(0, "selftest", 0);
        for k in 1..=8 {
            let t = field_selftest(&Field::gf(k).unwrap(), 200, &mut r);
            assert!(t.modulus_irreducible);
            assert_eq!(t.failures, 0, "{:?}", t.failed);
        }
    }
}
