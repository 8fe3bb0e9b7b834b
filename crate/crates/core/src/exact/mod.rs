//! Exact arithmetic: rationals, the cyclotomic-Kummer tower Q(ζ₁₂, ∛2),
//! finite fields, polynomials and integer matrices.

pub mod decimal;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod finite;
pub mod rational;
pub mod tower;

pub use field::{Field, Rationals};
pub use finite::{FiniteField, FqElem, TowerEmbedding};
pub use rational::{int, rat, Rational};
pub use tower::{Tower, TowerElement};
pub use matrix::{kernel_mod_p, lattice_basis, smith_normal_form, IntMatrix, RowSpace, Smith};
pub use poly::{Poly, PolyRing};
