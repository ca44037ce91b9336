use std::sync::Arc;

use hsgen::algebra::matrix::parse_bits;
use hsgen::algebra::{Curve, Fe, Field, Matrix, MultiPoly, TruthTable};
use hsgen::genmatrix::OrbitTable;
use hsgen::genmatrix::build_candidate_set;
use hsgen::hitting::HittingSet;
use hsgen::rng;
use hsgen::su_hsg::*;
use rand::Rng;

fn gf4_x() -> (Arc<Field>, Matrix) {
    let f = Field::gf(2).unwrap();
    let a = Matrix::from_rows(vec![vec![f.x()]]).unwrap();
    (f, a)
}

fn random_table(f: &Arc<Field>, m: usize, delta: usize, seed: u64) -> Arc<TruthTable> {
    let mut r = rng::stream(seed, "su-poly", 0);
    let p = MultiPoly::random(f, m, delta, &mut r);
    Arc::new(TruthTable::from_fn(f, m, Some(delta), |x| p.eval(f, x)))
}

#[test]
fn p_ary_generator() {
    let (f, a) = gf4_x();
    let c = TruthTable::from_fn(&f, 1, Some(0), |_| Fe(2));
    assert_eq!(p_ary_prg(&c, &a, 0, &[Fe(3)], 5), vec![Fe(2); 5]);
    let id = TruthTable::from_fn(&f, 1, Some(1), |x| x[0]);
    assert_eq!(p_ary_prg(&id, &a, 0, &[Fe::ONE], 2), vec![f.x(), f.x() + Fe::ONE]);

    let f = Field::gf(3).unwrap();
    let a = build_candidate_set(&f, 2).unwrap().first_generator().unwrap().a.clone();
    let t = random_table(&f, 2, 3, 1);
    let mut r = rng::stream(1, "prg-naive", 0);
    for _ in 0..100 {
        let x = vec![f.random(&mut r), f.random(&mut r)];
        let j = r.gen_range(0..2);
        let mut w = x.clone();
        let mut naive = Vec::new();
        for _ in 0..6 {
            for _ in 0..8u64.pow(j as u32) {
                w = a.mul_vec(&f, &w);
            }
            naive.push(t.eval(&w));
        }
        assert_eq!(p_ary_prg(&t, &a, j, &x, 6), naive);
    }
}

#[test]
fn hsu_entries() {
    let (f, a) = gf4_x();
    let t = Arc::new(TruthTable::from_fn(&f, 1, Some(1), |x| x[0]));
    let params = SuParams::new(4, 1, 2, 1).unwrap();
    let h = hsu_generate(&t, &a, &params).unwrap();
    assert_eq!(h.count(), 16);
    assert_eq!(h.count(), params.hsu_count());
    assert!((0..4).all(|x| h.get(x * 4) == 0));
    assert_eq!(h.entry(0, &[Fe::ONE], parse_bits("10").unwrap()), parse_bits("01").unwrap());
}

#[test]
fn list_sizes() {
    let p = SuParams::new(16, 1, 4, 2).unwrap().with_rho(0.5);
    assert_eq!(p.list_size(), 4);
    let p = SuParams::new(16, 1, 4, 2).unwrap().with_rho(1.0);
    assert_eq!(p.list_size(), 1);
}

struct Garbage;

impl ElementPredictor for Garbage {
    fn predict(&self, _: usize, _: &[Fe], target: &[Fe], out: &mut Vec<Fe>) {
        out.push(target[0] + Fe(7));
    }
}

#[test]
fn learning_a_curve() {
    let f = Field::gf(4).unwrap();
    let params = SuParams::relaxed(16, 1, 4, 2).unwrap();
    let t = random_table(&f, 1, 2, 2);
    let oracle = table_oracle(&t);
    let mut r = rng::stream(2, "learn", 0);
    let c = Curve::random(&f, 1, params.v, &mut r);
    let direct: EvalTable = f.elements().map(|s| t.eval(&c.eval(&f, s))).collect();
    let refs: Vec<(Fe, Fe)> = (0..params.r as u32).map(|i| (Fe(i), direct[i as usize])).collect();
    let points = |s: Fe, out: &mut [Fe]| out.copy_from_slice(&c.eval(&f, s));
    let dummy = vec![Fe::ZERO; 16];
    let inputs: Vec<&EvalTable> = vec![&dummy; 3];
    let planted = PlantedPredictor { oracle: &oracle };
    let first = learn_next_curve(&f, &params, 0, &inputs, &refs, &points, &planted);
    assert_eq!(first.as_ref(), Some(&direct));
    assert_eq!(learn_next_curve(&f, &params, 0, &inputs, &refs, &points, &planted), first);
    assert_eq!(learn_next_curve(&f, &params, 0, &inputs, &refs, &points, &Garbage), None);
    let mut bad = refs.clone();
    bad[0].1 = bad[0].1 + Fe::ONE;
    if let Some(tab) = learn_next_curve(&f, &params, 0, &inputs, &bad, &points, &planted) {
        assert!(bad.iter().all(|&(s, y)| tab[s.0 as usize] == y));
    }
}

#[test]
fn good_curves() {
    let f = Field::gf(4).unwrap();
    let a = build_candidate_set(&f, 1).unwrap().first_generator().unwrap().a.clone();
    let params = SuParams::relaxed(16, 1, 4, 2).unwrap();
    for seed in 0..10 {
        let pair = sample_good_curves(&f, &a, &params, 64, &mut rng::stream(seed, "curves", 0)).unwrap();
        assert!(pair.c1.eval(&f, Fe::ONE).iter().any(|c| !c.is_zero()));
        let again = sample_good_curves(&f, &a, &params, 64, &mut rng::stream(seed, "curves", 0)).unwrap();
        assert_eq!(pair, again);
        for i in [0u64, 1, 7, 14] {
            let (shifted, same) = audit_intersections(&f, &a, &pair, i, 0);
            assert!(shifted >= params.r && same >= params.r);
        }
    }
}

#[test]
fn planted_reconstruction_is_exact() {
    let f = Field::gf(4).unwrap();
    let a = build_candidate_set(&f, 1).unwrap().first_generator().unwrap().a.clone();
    let orbit = Arc::new(OrbitTable::new(&f, &a).unwrap());
    let params = SuParams::relaxed(16, 1, 4, 2).unwrap();
    let mut built = 0;
    for seed in 0..5 {
        let t = random_table(&f, 1, 2, 10 + seed);
        let oracle = table_oracle(&t);
        let mut r = rng::stream(seed, "rsu", 0);
        let pred = Box::new(PlantedPredictor { oracle: &oracle });
        let Some(c) = rsu_reconstruct(&f, &oracle, pred, &a, &orbit, &params, &RsuConfig::default(), &mut r).unwrap()
        else {
            continue;
        };
        assert!(c.v.iter().any(|x| !x.is_zero()));
        let mut w = c.v.clone();
        for i in 1..=15u64 {
            w = a.mul_vec(&f, &w);
            assert_eq!(c.eval(i), Some(t.eval(&w)), "index {i}");
        }
        built += 1;
    }
    assert!(built >= 3, "{built} of 5");
}
