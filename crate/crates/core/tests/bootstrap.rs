use std::sync::Arc;

use hsgen::bootstrap::*;
use hsgen::rng;

fn sieve(limit: usize) -> Vec<bool> {
    let mut prime = vec![true; limit + 1];
    prime[0] = false;
    prime[1] = false;
    let mut i = 2;
    while i * i <= limit {
        if prime[i] {
            (i * i..=limit).step_by(i).for_each(|j| prime[j] = false);
        }
        i += 1;
    }
    prime
}

#[test]
fn miller_rabin_matches_a_sieve() {
    let primes = sieve(1 << 20);
    for (n, &p) in primes.iter().enumerate() {
        assert_eq!(is_prime(n as u64), p, "{n}");
    }
}

#[test]
fn brute_force_over_all_strings() {
    assert_eq!(brute_force_select(&AllStrings { n: 4 }, &LeadingBit).map(|w| bit_string(w, 4)), Some("1000".into()));
    struct Empty;
    impl DenseProperty for Empty {
        fn name(&self) -> String {
            "empty".into()
        }
        fn contains(&self, _: usize, _: u64) -> bool {
            false
        }
        fn rho(&self) -> f64 {
            1.0
        }
    }
    assert_eq!(brute_force_select(&AllStrings { n: 4 }, &Empty), None);
    let primes = sieve(1 << 16);
    let want = (1 << 15..1 << 16).find(|&x| primes[x]).unwrap() as u64;
    let got = brute_force_select(&AllStrings { n: 16 }, &Primality).unwrap();
    assert_eq!(number(got, 16), want);
    assert_eq!(bit_string(got, 16), format!("{want:016b}"));
}

#[test]
fn schedule_grid() {
    let s = schedule_compute(16, 2, 4, 1.0, 1.0).unwrap();
    let log_n0 = 4.0;
    for i in 0..=s.t + 1 {
        assert!((s.log_n[i] - 4f64.powi(i as i32) * log_n0).abs() < 1e-9);
    }
    for i in 0..=s.t {
        assert!(s.log_t[i] <= 2f64.powi(i as i32) * 32.0 + 1e-9);
    }
    let t = (0..).find(|&i| 4f64.powi(i + 1) * log_n0 > 2f64.powi(i) * 32.0).unwrap() as usize;
    assert_eq!(s.t, t);
    assert!(s.t as f64 <= log_n0);
    for w in s.log_t.windows(2).zip(s.log_n.windows(2)) {
        assert!(w.0[1] / w.1[1] < w.0[0] / w.1[0]);
    }
    assert!(schedule_compute(16, 2, 3, 1.0, 1.0).is_err());
    for (alpha, beta) in [(1, 2), (1, 3), (2, 5), (3, 6)] {
        let s = schedule_compute(16, alpha, beta, 1.0, 1.0).unwrap();
        assert!(s.t as f64 <= log_n0);
    }
}

#[test]
fn ladder_of_lengths() {
    let ladder = LengthLadder { base: 4, beta: 2 };
    assert_eq!(ladder.position(4), Some((0, 0)));
    assert_eq!(ladder.position(16), Some((0, 1)));
    assert_eq!(ladder.position(5), None);
}

#[test]
fn lengths_off_the_ladder_abort() {
    let registry = desk_registry(Arc::new(LeadingBit)).unwrap();
    let mut r = rng::stream(1, "abort", 0);
    for n in [3, 5, 7, 12] {
        let out = algorithm_b(n, &registry, CaseOneOracle::Property, &mut r).unwrap();
        assert_eq!(out.output, None);
    }
}

#[test]
fn case_two_matches_brute_force() {
    let mut registry = Registry::new(LengthLadder { base: 12, beta: 2 }, Arc::new(Primality));
    registry.push_case_two(12).unwrap();
    let want = brute_force_select(&AllStrings { n: 12 }, &Primality);
    for seed in 0..3 {
        let out = algorithm_b(12, &registry, CaseOneOracle::Property, &mut rng::stream(seed, "case-two", 0)).unwrap();
        assert_eq!(out.case, Some(Case::Two));
        assert_eq!(out.output, want);
    }
}

#[test]
fn case_one_outputs_are_the_brute_force_string() {
    let registry = desk_registry(Arc::new(LeadingBit)).unwrap();
    let want = brute_force_select(&AllStrings { n: 4 }, &LeadingBit).unwrap();
    for seed in 0..50 {
        let out = algorithm_b(4, &registry, CaseOneOracle::Property, &mut rng::stream(seed, "case-one", 0)).unwrap();
        if let Some(w) = out.output {
            assert_eq!(w, want);
            assert!(LeadingBit.contains(4, w));
        }
    }
    let out = algorithm_b(4, &registry, CaseOneOracle::Planted, &mut rng::stream(0, "case-one-planted", 0)).unwrap();
    assert_eq!(out.output, Some(want));
}
