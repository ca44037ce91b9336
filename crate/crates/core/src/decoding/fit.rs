//! Exact fitting of value vectors on fixed node sets.
//!
//! When a decoder receives exactly one value per node of a fixed set (all
//! of F_p, or F_p without 0), whether the values lie on one polynomial of
//! degree `<= d` is a linear check against precomputed Lagrange weights.
//! This is the common case in curve learning and self-correction, so the
//! weights are cached per thread.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::algebra::{Fe, Field};

/// Lagrange weights from the first `d + 1` nodes to the remaining nodes
/// and to the extra targets.
struct Extension {
    base: usize,
    /// One row per extended node (remaining nodes first, then targets).
    rows: Vec<Vec<Fe>>,
}

impl Extension {
    fn new(f: &Field, nodes: &[Fe], d: usize, targets: &[Fe]) -> Self {
        let base = (d + 1).min(nodes.len());
        let xs = &nodes[..base];
        let weights = |x: Fe| -> Vec<Fe> {
            (0..base)
                .map(|i| {
                    let mut num = Fe::ONE;
                    let mut den = Fe::ONE;
                    for j in 0..base {
                        if j != i {
                            num = f.mul(num, x + xs[j]);
                            den = f.mul(den, xs[i] + xs[j]);
                        }
                    }
                    f.div(num, den)
                })
                .collect()
        };
        let rows = nodes[base..].iter().chain(targets).map(|&x| weights(x)).collect();
        Extension { base, rows }
    }

    #[inline]
    fn apply(f: &Field, row: &[Fe], ys: &[Fe]) -> Fe {
        row.iter().zip(ys).fold(Fe::ZERO, |acc, (&w, &y)| acc + f.mul(w, y))
    }
}

type Key = (u32, usize, bool);

thread_local! {
    static CACHE: RefCell<HashMap<Key, Rc<Extension>>> = RefCell::new(HashMap::new());
}

fn extension(f: &Field, d: usize, skip_zero: bool) -> Rc<Extension> {
    let key = (f.params().modulus, d, skip_zero);
    CACHE.with(|c| {
        c.borrow_mut()
            .entry(key)
            .or_insert_with(|| {
                let nodes: Vec<Fe> = f.elements().skip(skip_zero as usize).collect();
                let targets: Vec<Fe> = if skip_zero { vec![Fe::ZERO] } else { Vec::new() };
                Rc::new(Extension::new(f, &nodes, d, &targets))
            })
            .clone()
    })
}

/// True iff `ys[t]` (one value per field element, in order) agrees with a
/// polynomial of degree `<= d`.
pub fn fits_full(f: &Field, d: usize, ys: &[Fe]) -> bool {
    debug_assert_eq!(ys.len(), f.size());
    let ext = extension(f, d, false);
    let (head, tail) = ys.split_at(ext.base);
    ext.rows.iter().zip(tail).all(|(row, &y)| Extension::apply(f, row, head) == y)
}

/// If `ys[t−1]` for `t = 1..p−1` agrees with a polynomial `Q` of degree
/// `<= d`, returns `Q(0)`.
pub fn fit_nonzero_at_zero(f: &Field, d: usize, ys: &[Fe]) -> Option<Fe> {
    debug_assert_eq!(ys.len(), f.size() - 1);
    let ext = extension(f, d, true);
    let (head, tail) = ys.split_at(ext.base.min(ys.len()));
    let (checks, at_zero) = ext.rows.split_at(ext.rows.len() - 1);
    if checks.iter().zip(tail).all(|(row, &y)| Extension::apply(f, row, head) == y) {
        Some(Extension::apply(f, &at_zero[0], head))
    } else {
        None
    }
}
