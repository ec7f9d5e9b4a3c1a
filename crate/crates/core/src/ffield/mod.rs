//! Arithmetic in GF(2^e) for e <= 16: field tables, dense matrices,
//! polynomials and the FFMX interchange format.

mod echelon;
mod ffmx;
mod field;
mod matrix;
mod poly;

pub use echelon::Echelon;
pub use ffmx::{read_ffmx, write_ffmx};
pub use field::{is_irreducible_gf2, Fe, Field, MAX_DEGREE};
pub use matrix::FieldMatrix;
pub use poly::{char_poly, primary_idempotents, Poly};
