//! Curves F_p → F_p^m given by one univariate polynomial per coordinate.

use rand::Rng;

use super::field::{Fe, Field};
use super::matrix::Matrix;
use super::poly::UniPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    comps: Vec<UniPoly>,
}

impl Curve {
    pub fn new(comps: Vec<UniPoly>) -> Self {
        Curve { comps }
    }

    pub fn constant(point: &[Fe]) -> Self {
        Curve { comps: point.iter().map(|&c| UniPoly::constant(c)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, m: usize, v: usize, rng: &mut R) -> Self {
        Curve { comps: (0..m).map(|_| UniPoly::random(f, v, rng)).collect() }
    }

    /// The curve of degree `< points.len()` through `(t_i, y_i)`; abscissae
    /// must be distinct.
    pub fn interpolate(f: &Field, m: usize, points: &[(Fe, Vec<Fe>)]) -> Self {
        let comps = (0..m)
            .map(|j| {
                let pts: Vec<(Fe, Fe)> = points.iter().map(|(t, y)| (*t, y[j])).collect();
                UniPoly::interpolate_unchecked(f, &pts)
            })
            .collect();
        Curve { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[UniPoly] {
        &self.comps
    }

    pub fn degree(&self) -> Option<usize> {
        self.comps.iter().filter_map(|c| c.degree()).max()
    }

    pub fn eval(&self, f: &Field, t: Fe) -> Vec<Fe> {
        self.comps.iter().map(|c| c.eval(f, t)).collect()
    }

    /// The curve `t ↦ A·C(t)`.
    pub fn apply_matrix(&self, f: &Field, a: &Matrix) -> Curve {
        let m = self.comps.len();
        let comps = (0..m)
            .map(|i| {
                (0..m).fold(UniPoly::zero(), |acc, j| acc.add(&self.comps[j].scale(f, a.get(i, j))))
            })
            .collect();
        Curve { comps }
    }
}

pub fn curve_eval(f: &Field, c: &Curve, t: Fe) -> Vec<Fe> {
    c.eval(f, t)
}

pub fn curve_apply_matrix(f: &Field, a: &Matrix, c: &Curve) -> Curve {
    c.apply_matrix(f, a)
}
