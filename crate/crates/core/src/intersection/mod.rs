//! Intersection pairing on the reference surface and the lattices it defines.

pub mod engine;
pub mod gram;
pub mod saturation;

pub use engine::Engine;
pub use gram::{discriminant_group, gram_matrix, nikulin_two_generator_test, GramMatrix};
pub use saturation::{s_rp, saturation_kernel_candidates, Supersingular, SublatticeModR};
