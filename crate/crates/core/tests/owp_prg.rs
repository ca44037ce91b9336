use std::collections::HashSet;
use std::sync::Arc;

use hsgen::algebra::matrix::parse_bits;
use hsgen::algebra::{Field, Matrix};
use hsgen::genmatrix::build_candidate_set;
use hsgen::hitting::HittingSet;
use hsgen::owp_prg::*;
use hsgen::rng;
use rand::Rng;

fn inner(a: u64, b: u64) -> u64 {
    ((a & b).count_ones() & 1) as u64
}

fn gf4_x() -> Arc<IndexPermutation> {
    let f = Field::gf(2).unwrap();
    Arc::new(IndexPermutation::new(&f, &Matrix::from_rows(vec![vec![f.x()]]).unwrap()).unwrap())
}

fn gf4_cube() -> Arc<IndexPermutation> {
    let f = Field::gf(2).unwrap();
    let set = build_candidate_set(&f, 3).unwrap();
    Arc::new(IndexPermutation::new(&f, &set.first_generator().unwrap().a).unwrap())
}

#[test]
fn small_permutation() {
    let perm = gf4_x();
    assert_eq!(f_apply(&perm, 0), 0);
    assert_eq!(f_apply(&perm, parse_bits("10").unwrap()), parse_bits("01").unwrap());
    let perm = gf4_cube();
    assert_eq!(perm.s(), 6);
    let images: HashSet<u64> = (0..64).map(|x| perm.apply(x)).collect();
    assert_eq!(images.len(), 64);
    assert!(perm.is_bijection());
}

#[test]
fn generator_strings() {
    let perm = gf4_x();
    let g = crypto_g(&perm, 2).unwrap();
    assert_eq!(g.count(), 16);
    assert_eq!(g.string(parse_bits("10").unwrap(), parse_bits("11").unwrap()), parse_bits("11").unwrap());
    let perm = gf4_cube();
    let g = crypto_g(&perm, 5).unwrap();
    for x in 0..64 {
        assert_eq!(g.get(x << 6), 0);
        for r in 0..64 {
            let mut z = x;
            let mut want = 0;
            for q in 0..5 {
                want |= inner(z, r) << q;
                z = perm.apply(z);
            }
            assert_eq!(g.get(x << 6 | r), want);
        }
    }
}

#[test]
fn exact_predictor_inverts_everything() {
    let perm = gf4_cube();
    let pred = ExactPredictor { perm: &perm };
    let cfg = InvertConfig { gamma: 0.5, repetitions: 1 };
    let mut r = rng::stream(1, "exact-invert", 0);
    for y in 0..64 {
        let z = invert(&perm, &pred, y, &cfg, &mut r).unwrap().unwrap();
        assert_eq!(perm.apply(z), y);
    }
}

#[test]
fn constant_distinguisher_never_misinverts() {
    let perm = gf4_cube();
    let accept = |_: u64| true;
    let pred = HybridPredictor { perm: &perm, d: &accept, big_m: 4, sign: Sign::Uniform };
    let cfg = InvertConfig::for_advantage(0.25, 4);
    let mut r = rng::stream(2, "const-invert", 0);
    for y in 0..64 {
        if let Some(z) = invert(&perm, &pred, y, &cfg, &mut r).unwrap() {
            assert_eq!(perm.apply(z), y);
        }
    }
}

#[test]
fn optimal_avoider_inverts_sometimes() {
    let perm = gf4_cube();
    let g = crypto_g(&perm, 4).unwrap();
    let (accept, adv) = max_advantage_avoider(&g);
    let counts = {
        let mut c = vec![0u64; 16];
        (0..g.count()).for_each(|i| c[g.get(i) as usize] += 1);
        c
    };
    let direct: f64 = (0..16).map(|w| (1.0 / 16.0 - counts[w] as f64 / g.count() as f64).max(0.0)).sum();
    assert!((adv - direct).abs() < 1e-12);
    let d = |w: u64| accept[w as usize];
    let pred = HybridPredictor { perm: &perm, d: &d, big_m: 4, sign: Sign::Uniform };
    let cfg = InvertConfig::for_advantage(adv, 4);
    let mut r = rng::stream(3, "avoider-invert", 0);
    let trials = 2000;
    let mut hits = 0;
    for _ in 0..trials {
        let y = r.gen_range(0..64);
        if let Some(z) = invert(&perm, &pred, y, &cfg, &mut r).unwrap() {
            assert_eq!(perm.apply(z), y);
            hits += 1;
        }
    }
    assert!(hits as f64 / trials as f64 >= adv / (64.0 * 16.0));
}
