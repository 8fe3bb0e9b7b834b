//! Local fields: p-adic numbers, completions of Q(√−3), Hilbert and cubic
//! norm-residue symbols, and local solubility of the sextic surfaces.

pub mod cover;
pub mod local;
pub mod padic;
pub mod symbols;

pub use cover::{
    adaptive_cover, local_points_exists, residue_class_cover, Ball, CoverConfig, CoverResult, IntSurface, LocalPoint,
    Solubility,
};
pub use local::{is_cube_local, KPlace, LocalFieldElement, Residue};
pub use padic::{hensel_lift, PadicNumber};
pub use symbols::{cubic_symbol, hilbert2, InvariantValue, Place};
