//! Truth tables of functions F_p^m → F_p.

use std::fmt::Write as _;
use std::sync::Arc;

use super::field::{Fe, Field};
use super::matrix::{lex_index, lex_point, row_reduce};
use crate::error::{Error, Result};

/// The `p^m` evaluations of a function on F_p^m, in lexicographic order of
/// the inputs.
#[derive(Clone, Debug)]
pub struct TruthTable {
    field: Arc<Field>,
    m: usize,
    degree_bound: Option<usize>,
    values: Vec<Fe>,
}

impl PartialEq for TruthTable {
    fn eq(&self, other: &Self) -> bool {
        self.field.params() == other.field.params()
            && self.m == other.m
            && self.degree_bound == other.degree_bound
            && self.values == other.values
    }
}

impl TruthTable {
    pub fn new(field: &Arc<Field>, m: usize, degree_bound: Option<usize>, values: Vec<Fe>) -> Result<Self> {
        let p = field.size();
        let expected = p.checked_pow(m as u32).ok_or_else(|| Error::Resource("p^m overflows".into()))?;
        if values.len() != expected {
            return Err(Error::Usage(format!("truth table needs {expected} values, got {}", values.len())));
        }
        if values.iter().any(|v| v.0 as usize >= p) {
            return Err(Error::Usage("truth table value outside the field".into()));
        }
        Ok(TruthTable { field: field.clone(), m, degree_bound, values })
    }

    /// Tabulates `g` over F_p^m.
    pub fn from_fn(field: &Arc<Field>, m: usize, degree_bound: Option<usize>, mut g: impl FnMut(&[Fe]) -> Fe) -> Self {
        let p = field.size();
        let n = p.pow(m as u32);
        let values = (0..n).map(|i| g(&lex_point(p, m, i))).collect();
        TruthTable { field: field.clone(), m, degree_bound, values }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.field.size()
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    #[inline]
    pub fn eval(&self, x: &[Fe]) -> Fe {
        self.values[lex_index(self.field.size(), x)]
    }

    #[inline]
    pub fn at_index(&self, idx: usize) -> Fe {
        self.values[idx]
    }

    /// Exact total degree of the unique reduced polynomial (individual
    /// degrees `< p`) agreeing with the table; `None` for the zero table.
    pub fn total_degree(&self) -> Option<usize> {
        let f = &*self.field;
        let p = f.size();
        let vinv = inverse_vandermonde(f);
        let mut coeffs = self.values.clone();
        let mut buf = vec![Fe::ZERO; p];
        // Convert one axis at a time from values to coefficients.
        for axis in 0..self.m {
            let stride = p.pow((self.m - 1 - axis) as u32);
            let block = stride * p;
            for base in (0..coeffs.len()).step_by(block) {
                for off in 0..stride {
                    for (e, b) in buf.iter_mut().enumerate() {
                        let mut acc = Fe::ZERO;
                        for a in 0..p {
                            acc += f.mul(vinv[e * p + a], coeffs[base + off + a * stride]);
                        }
                        *b = acc;
                    }
                    for (e, &b) in buf.iter().enumerate() {
                        coeffs[base + off + e * stride] = b;
                    }
                }
            }
        }
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| lex_point(p, self.m, i).iter().map(|e| e.0 as usize).sum())
            .max()
    }

    /// True iff the table is consistent with a polynomial of total degree
    /// at most `d`.
    pub fn has_degree_at_most(&self, d: usize) -> bool {
        self.total_degree().map_or(true, |t| t <= d)
    }

    /// Serializes as `"p m degree_bound"` followed by one hex value per
    /// line. An absent bound is written as `-`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.values.len() * 4 + 32);
        let bound = self.degree_bound.map_or("-".to_string(), |d| d.to_string());
        writeln!(s, "{} {} {}", self.p(), self.m, bound).unwrap();
        for v in &self.values {
            writeln!(s, "{:x}", v.0).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty truth table".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let p: u64 = parts[0].parse().map_err(|_| Error::Parse("bad p".into()))?;
        let m: usize = parts[1].parse().map_err(|_| Error::Parse("bad m".into()))?;
        let bound = match parts[2] {
            "-" => None,
            s => Some(s.parse().map_err(|_| Error::Parse("bad degree bound".into()))?),
        };
        let field = Field::of_size(p)?;
        let values = lines
            .map(|l| u32::from_str_radix(l.trim(), 16).map(Fe).map_err(|_| Error::Parse(format!("bad hex {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&field, m, bound, values)
    }
}

/// Row-major `p × p` matrix mapping the values of a univariate function at
/// the nodes 0, 1, …, p−1 to its coefficients.
pub fn inverse_vandermonde(f: &Field) -> Vec<Fe> {
    let p = f.size();
    let mut rows: Vec<Vec<Fe>> = (0..p)
        .map(|a| {
            let mut row: Vec<Fe> = (0..p).map(|e| f.pow(Fe(a as u32), e as u64)).collect();
            row.extend((0..p).map(|j| if j == a { Fe::ONE } else { Fe::ZERO }));
            row
        })
        .collect();
    let piv = row_reduce(f, &mut rows, p);
    debug_assert_eq!(piv.len(), p);
    rows.into_iter().flat_map(|r| r[p..].to_vec()).collect()
}

/// Evaluate a table at a point given as any iterable of coordinates.
pub fn tt_eval(table: &TruthTable, x: &[Fe]) -> Fe {
    table.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::MultiPoly;
    use crate::rng;

    #[test]
    fn degree_recovered_exactly() {
        let f = Field::gf(3).unwrap();
        let mut r = rng::stream(5, "tt", 0);
        for d in 0..6 {
            let poly = MultiPoly::random(&f, 2, d, &mut r);
            let t = TruthTable::from_fn(&f, 2, Some(d), |x| poly.eval(&f, x));
            assert_eq!(t.total_degree(), poly.total_degree());
        }
    }

    #[test]
    fn text_roundtrip() {
        let f = Field::gf(2).unwrap();
        let t = TruthTable::from_fn(&f, 2, Some(1), |x| x[0] + x[1]);
        let back = TruthTable::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(t.to_text().starts_with("4 2 1\n0\n1\n2\n3\n1\n"));
    }
}
