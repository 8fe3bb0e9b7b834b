//! The order-864 Galois group, its action on the Picard lattice and cohomology.

pub mod catalogue;
pub mod cohomology;
pub mod group;
pub mod subgroup;

pub use catalogue::{ActionMatrices, Catalogue};
pub use group::{all_elements, GaloisElement, GROUP_ORDER};
pub use subgroup::{index2_subgroups, mod2_stabilizer, stabilizer, subgroup_for_surface, Subgroup};
pub use cohomology::{h1, h1_two_torsion, CocycleSpace, CohomologyResult, NormKernel};
