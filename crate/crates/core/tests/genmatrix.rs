use hsgen::algebra::{Fe, Field, Matrix, UniPoly};
use hsgen::genmatrix::*;
use hsgen::rng;

#[test]
fn multiplication_matrices() {
    let f = Field::gf(2).unwrap();
    assert_eq!(mult_to_matrix(&f, 3, &[Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap(), Matrix::identity(3));
    assert_eq!(mult_to_matrix(&f, 3, &[Fe::ZERO; 3]).unwrap(), Matrix::zero(3));
    let ext = ExtensionField::for_params(&f, 3).unwrap();
    let mut r = rng::stream(1, "mult", 0);
    for _ in 0..200 {
        let g: Vec<Fe> = (0..3).map(|_| f.random(&mut r)).collect();
        let v: Vec<Fe> = (0..3).map(|_| f.random(&mut r)).collect();
        assert_eq!(mult_to_matrix(&f, 3, &g).unwrap().mul_vec(&f, &v), ext.mul(&g, &v));
    }
}

#[test]
fn generator_checks() {
    let f = Field::gf(2).unwrap();
    assert!(!is_generator_matrix(&f, &Matrix::identity(1)).unwrap());
    assert!(is_generator_matrix(&f, &Matrix::from_rows(vec![vec![f.x()]]).unwrap()).unwrap());
}

/// The companion matrix of a monic cubic over GF(4) generates the orbit of
/// the all-ones vector exactly when the cubic is primitive.
#[test]
fn companion_of_primitive_cubic() {
    let f = Field::gf(2).unwrap();
    let companion = |c: &[Fe; 3]| {
        let mut a = Matrix::zero(3);
        a.set(1, 0, Fe::ONE);
        a.set(2, 1, Fe::ONE);
        for i in 0..3 {
            a.set(i, 2, c[i]);
        }
        a
    };
    let order = |a: &Matrix| {
        let mut x = vec![Fe::ONE; 3];
        let start = x.clone();
        for e in 1..=63u64 {
            x = a.mul_vec(&f, &x);
            if x == start {
                return e;
            }
        }
        0
    };
    let mut found = 0;
    for c0 in 1..4 {
        for c1 in 0..4 {
            for c2 in 0..4 {
                let c = [Fe(c0), Fe(c1), Fe(c2)];
                let poly = UniPoly::from_coeffs(vec![c[0], c[1], c[2], Fe::ONE]);
                if !is_irreducible_over(&f, &poly) {
                    continue;
                }
                let a = companion(&c);
                assert_eq!(is_generator_matrix(&f, &a).unwrap(), order(&a) == 63);
                found += (order(&a) == 63) as usize;
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn candidate_sets_hold_generators() {
    for (p, m) in [(4u64, 1), (4, 3), (64, 1)] {
        let f = Field::of_size(p).unwrap();
        let set = build_candidate_set(&f, m).unwrap();
        let g = set.first_generator().expect("a generator");
        assert!(is_generator_matrix(&f, &g.a).unwrap());
    }
    let f = Field::gf(2).unwrap();
    let set = build_candidate_set(&f, 1).unwrap();
    assert!(set.matrices.iter().any(|g| g.a == Matrix::from_rows(vec![vec![f.x()]]).unwrap() && g.verified));
}

#[test]
fn homomorphism() {
    let f = Field::gf(2).unwrap();
    let ext = ExtensionField::for_params(&f, 3).unwrap();
    let mut r = rng::stream(2, "hom", 0);
    for _ in 0..200 {
        let g: Vec<Fe> = (0..3).map(|_| f.random(&mut r)).collect();
        let h: Vec<Fe> = (0..3).map(|_| f.random(&mut r)).collect();
        let lhs = mult_to_matrix(&f, 3, &ext.mul(&g, &h)).unwrap();
        let rhs = mult_to_matrix(&f, 3, &g).unwrap().mul(&f, &mult_to_matrix(&f, 3, &h).unwrap());
        assert_eq!(lhs, rhs);
    }
}
