//! Finitely generated abelian groups: normal forms from relations, duals,
//! Hom and bicharacter groups, tensor products by explicit presentation,
//! Garling's transpose, and quasi-convex polars.

mod bichar;
mod group;
mod polar;
mod tensor;

pub use bichar::{enumerate_bicharacters, garling_transpose, verify_garling, Bicharacter, GarlingReport};
pub use group::{
    character_of, dual_group, enumerate_homs, group_from_relations, hom_group, FgAbelianGroup, GroupElement,
    GroupHom,
};
pub use polar::{polar, prepolar, quasiconvex_hull, Subset};
pub use tensor::{
    tensor_construct, verify_dual_of_tensor, verify_universal_property, DualTensorReport, TensorProduct,
    UniversalReport, Verification, DEFAULT_GUARD,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FgError {
    #[error("group is not finite")]
    NotFinite,
    #[error("enumeration size {size} exceeds the guard {guard}")]
    TooLarge { size: u64, guard: u64 },
    #[error("bicharacter value at ({row}, {col}) is not killed by both generator orders")]
    IllFormedBicharacter { row: usize, col: usize },
    #[error("invariant factors {0:?} must be >= 2 and form a divisibility chain")]
    InvalidFactors(Vec<u64>),
    #[error("homomorphism is not well defined on source generator {column}")]
    NotWellDefined { column: usize },
    #[error("element {0} does not belong to the group")]
    NotAnElement(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
