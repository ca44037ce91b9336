use std::collections::HashSet;
use std::sync::Arc;

use hsgen::algebra::{Fe, Field, MultiPoly, TruthTable};
use hsgen::genmatrix::build_candidate_set;
use hsgen::hitting::HittingSet;
use hsgen::oracle::Constant;
use hsgen::rng;
use hsgen::su_hsg::{hsu_generate, table_oracle, SuParams};
use hsgen::su_modified::*;

fn random_table(f: &Arc<Field>, m: usize, delta: usize, seed: u64) -> Arc<TruthTable> {
    let mut r = rng::stream(seed, "modified-poly", 0);
    let p = MultiPoly::random(f, m, delta, &mut r);
    Arc::new(TruthTable::from_fn(f, m, Some(delta), |x| p.eval(f, x)))
}

#[test]
fn combined_set_counts_and_membership() {
    let f = Field::gf(2).unwrap();
    let params = SuParams::new(4, 1, 3, 2).unwrap();
    let t = random_table(&f, 1, 2, 1);
    let h = modified_generate(&t, &params).unwrap();
    let s = build_candidate_set(&f, 1).unwrap();
    let each = 4u64.pow(2) + (1 << 4);
    assert_eq!(h.count(), s.len() as u64 * each);
    let all: HashSet<u64> = (0..h.count()).map(|i| h.get(i)).collect();
    let su = hsu_generate(&t, &s.matrices[0].a, &params).unwrap();
    assert!((0..su.count()).all(|i| all.contains(&su.get(i))));
    let again = modified_generate(&t, &params).unwrap();
    assert!((0..h.count()).all(|i| h.get(i) == again.get(i)));
}

#[test]
fn exponent_shifts() {
    let order = 3;
    let logs = |x: &[Fe]| match x[0].0 {
        1 => Some(3),
        2 => Some(1),
        3 => Some(2),
        _ => None,
    };
    let (x, x1) = (vec![Fe(2)], vec![Fe(3)]);
    assert_eq!(exponent_shift(&logs, &x, &x, order), Some(3));
    assert_eq!(exponent_shift(&logs, &x, &x1, order), Some(1));
    assert_eq!(exponent_shift(&logs, &x1, &x, order), Some(2));
    assert_eq!(exponent_shift(&logs, &[Fe(0)], &x, order), None);
}

#[test]
fn planted_avoider_gives_exact_tables() {
    let f = Field::gf(4).unwrap();
    let params = SuParams::relaxed(16, 1, 4, 2).unwrap();
    let ctx = SuContext::new(&f, 1).unwrap();
    let mut cfg = ModifiedConfig::for_params(&params);
    cfg.tabulate = true;
    let mut exact = 0;
    for seed in 0..10 {
        let t = random_table(&f, 1, 2, 100 + seed);
        let oracle = table_oracle(&t);
        let mut r = rng::stream(seed, "modified-planted", 0);
        let out = modified_reconstruct(&ctx, &oracle, Avoider::Planted, &params, &cfg, &mut r).unwrap();
        if let Some(c) = out.circuit {
            assert_eq!(c.tabulate(), t.values());
            exact += 1;
        }
    }
    assert!(exact >= 5, "{exact} of 10");
}

#[test]
fn constant_distinguisher_is_never_silently_wrong() {
    let f = Field::gf(4).unwrap();
    let params = SuParams::relaxed(16, 1, 4, 2).unwrap();
    let ctx = SuContext::new(&f, 1).unwrap();
    let mut cfg = ModifiedConfig::for_params(&params);
    cfg.tabulate = true;
    for seed in 0..5 {
        let t = random_table(&f, 1, 2, 200 + seed);
        let oracle = table_oracle(&t);
        let mut r = rng::stream(seed, "modified-constant", 0);
        let out = modified_reconstruct(&ctx, &oracle, Avoider::Genuine(&Constant(false)), &params, &cfg, &mut r).unwrap();
        if let Some(c) = out.circuit {
            assert_eq!(c.tabulate(), t.values());
        }
    }
}
