//! Finitely presented infinite sequences over `N`: eventually periodic index
//! sets, piecewise rational-function sequences, finite-support vectors, and
//! the pairings between them.

mod index_set;
mod piecewise;
mod poly;
mod profile;
mod sequences;
mod values;

pub use index_set::IndexSet;
pub(crate) use index_set::common_frame;
pub use piecewise::{Cell, CellValue, Piecewise};
pub use poly::{Poly, RatFunc};
pub use profile::{denominator_profile, DenominatorProfile};
pub use sequences::{char_eval, pair, restrict_character, CharacterPresentation, FinSupportVector, IntSeq, RatSeq};
pub use values::TorusFn;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("cells do not partition N: index {index} is covered {covering} times")]
    PresentationInvalid { index: u64, covering: usize },
    #[error("denominator of cell {cell} vanishes on its support")]
    ZeroDenominator { cell: usize },
    #[error("cell {cell} is not integer-valued at index {index}")]
    NotIntegerValued { cell: usize, index: u64 },
    #[error("cell {cell} of an integer sequence has a non-constant denominator")]
    NotPolynomial { cell: usize },
}
