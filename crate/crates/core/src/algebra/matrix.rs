//! Square matrices over F_p, vectors in F_p^m, and Gaussian elimination.

use rand::Rng;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// Row-major `m × m` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    m: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zero(m: usize) -> Self {
        Matrix { m, data: vec![Fe::ZERO; m * m] }
    }

    pub fn identity(m: usize) -> Self {
        let mut a = Self::zero(m);
        for i in 0..m {
            a.set(i, i, Fe::ONE);
        }
        a
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Usage("matrix rows must have length m".into()));
        }
        Ok(Matrix { m, data: rows.into_iter().flatten().collect() })
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, m: usize, rng: &mut R) -> Self {
        Matrix { m, data: (0..m * m).map(|_| f.random(rng)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.m + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.m + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Fe>> {
        self.data.chunks(self.m).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        let m = self.m;
        let mut out = Matrix::zero(m);
        for i in 0..m {
            for k in 0..m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    out.data[i * m + j] += f.mul(a, other.get(k, j));
                }
            }
        }
        out
    }

    #[inline]
    pub fn mul_vec(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.m];
        self.mul_vec_into(f, v, &mut out);
        out
    }

    #[inline]
    pub fn mul_vec_into(&self, f: &Field, v: &[Fe], out: &mut [Fe]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = Fe::ZERO;
            for (j, &x) in v.iter().enumerate() {
                acc += f.mul(self.data[i * self.m + j], x);
            }
            *o = acc;
        }
    }

    /// `A^e` by repeated squaring.
    pub fn pow(&self, f: &Field, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Inverse, or `None` if singular.
    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let m = self.m;
        let mut aug: Vec<Vec<Fe>> = (0..m)
            .map(|i| {
                let mut row = self.data[i * m..(i + 1) * m].to_vec();
                row.extend((0..m).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
                row
            })
            .collect();
        let pivots = row_reduce(f, &mut aug, m);
        if pivots.len() < m {
            return None;
        }
        Matrix::from_rows(aug.into_iter().map(|r| r[m..].to_vec()).collect()).ok()
    }
}

/// `A^e · v` in O(m^3 log e) field operations.
pub fn mat_pow_vec(f: &Field, a: &Matrix, e: u64, v: &[Fe]) -> Result<Vec<Fe>> {
    if v.len() != a.dim() {
        return Err(Error::Usage(format!("vector length {} does not match matrix dimension {}", v.len(), a.dim())));
    }
    Ok(a.pow(f, e).mul_vec(f, v))
}

/// Reduced row echelon form over the first `ncols` columns, in place.
/// Returns the pivot columns.
pub fn row_reduce(f: &Field, rows: &mut [Vec<Fe>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).unwrap();
        if inv != Fe::ONE {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor.is_zero() {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x += f.mul(factor, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A nonzero solution of `rows · z = 0`, if one exists.
pub fn nullspace_vector(f: &Field, mut rows: Vec<Vec<Fe>>, ncols: usize) -> Option<Vec<Fe>> {
    let pivots = row_reduce(f, &mut rows, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut z = vec![Fe::ZERO; ncols];
    z[free] = Fe::ONE;
    for (r, &pc) in pivots.iter().enumerate() {
        z[pc] = rows[r][free];
    }
    Some(z)
}

/// The squares `A, A^2, A^4, …`, for applying `A^e` to vectors with one
/// matrix-vector product per set bit of `e`.
#[derive(Clone, Debug)]
pub struct PowerLadder {
    squares: Vec<Matrix>,
}

impl PowerLadder {
    /// Supports exponents below `2^bits`.
    pub fn new(f: &Field, a: &Matrix, bits: u32) -> Self {
        let mut squares = Vec::with_capacity(bits as usize);
        let mut cur = a.clone();
        for _ in 0..bits.max(1) {
            let next = cur.mul(f, &cur);
            squares.push(cur);
            cur = next;
        }
        PowerLadder { squares }
    }

    /// Ladder for exponents up to `p^m − 1`.
    pub fn for_order(f: &Field, a: &Matrix) -> Self {
        Self::new(f, a, f.k() * a.dim() as u32)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.squares[0]
    }

    pub fn dim(&self) -> usize {
        self.squares[0].dim()
    }

    pub fn squares(&self) -> &[Matrix] {
        &self.squares
    }

    /// `A^e · v`. Panics if `e` needs more bits than the ladder holds.
    pub fn apply(&self, f: &Field, e: u64, v: &[Fe]) -> Vec<Fe> {
        assert!(self.squares.len() >= 64 || e >> self.squares.len() == 0, "exponent too large for ladder");
        let mut w = v.to_vec();
        let mut tmp = vec![Fe::ZERO; w.len()];
        let mut e = e;
        let mut b = 0;
        while e > 0 {
            if e & 1 == 1 {
                self.squares[b].mul_vec_into(f, &w, &mut tmp);
                std::mem::swap(&mut w, &mut tmp);
            }
            e >>= 1;
            b += 1;
        }
        w
    }
}

/// Packs a vector into an `m·k`-bit integer: coordinate 1 occupies the low
/// `k` bits, so the bit string of the integer (least significant first) is
/// the concatenation of the coordinates' κ strings.
#[inline]
pub fn pack(k: u32, v: &[Fe]) -> u64 {
    v.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((x.0 as u64) << (k as usize * i)))
}

/// Inverse of [`pack`].
#[inline]
pub fn unpack(k: u32, m: usize, x: u64) -> Vec<Fe> {
    let mask = (1u64 << k) - 1;
    (0..m).map(|i| Fe(((x >> (k as usize * i)) & mask) as u32)).collect()
}

/// Position of `x` in the lexicographic order of F_p^m: the first
/// coordinate is most significant, elements ordered by integer value.
#[inline]
pub fn lex_index(p: usize, x: &[Fe]) -> usize {
    x.iter().fold(0usize, |acc, c| acc * p + c.0 as usize)
}

/// Inverse of [`lex_index`].
pub fn lex_point(p: usize, m: usize, mut idx: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; m];
    for j in (0..m).rev() {
        out[j] = Fe((idx % p) as u32);
        idx /= p;
    }
    out
}

/// Bit string of a packed `bits`-bit value, least significant bit first.
pub fn bits_string(x: u64, bits: usize) -> String {
    (0..bits).map(|i| if (x >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a bit string (least significant bit first).
pub fn parse_bits(s: &str) -> Result<u64> {
    if s.len() > 64 {
        return Err(Error::Parse("bit string longer than 64".into()));
    }
    let mut x = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => x |= 1 << i,
            _ => return Err(Error::Parse(format!("not a bit string: {s:?}"))),
        }
    }
    Ok(x)
}

/// Inner product mod 2 of two packed bit strings.
#[inline]
pub fn ip2(a: u64, b: u64) -> u8 {
    ((a & b).count_ones() & 1) as u8
}
