//! Finite fields, polynomials, matrices, curves and truth tables.

pub mod curve;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod selftest;
pub mod table;

pub use curve::{curve_apply_matrix, curve_eval, Curve};
pub use field::{fe_inv, fe_mul, Fe, Field, FieldElem, FieldParams};
pub use matrix::{lex_index, lex_point, mat_pow_vec, pack, unpack, Matrix, PowerLadder};
pub use poly::{MultiPoly, UniPoly};
pub use table::{tt_eval, TruthTable};

/// Interpolates the unique polynomial through distinct-abscissa points.
pub fn uni_interpolate(f: &Field, points: &[(Fe, Fe)]) -> crate::error::Result<UniPoly> {
    UniPoly::interpolate(f, points)
}
