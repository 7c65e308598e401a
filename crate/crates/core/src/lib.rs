//! Ramification filtrations of elementary abelian p-extensions of p-adic
//! fields, computed through the unit filtration and local class field theory.

pub mod atlas;
pub mod classify;
pub mod construct;
pub mod error;
pub mod fields;
pub mod fp_linalg;
pub mod mult_group;
pub mod padic;
pub mod ramification;
pub mod residue;
pub mod units;

pub use construct::ExtensionWitness;
pub use error::{Error, Result};
pub use fp_linalg::{CoordVector, FpMatrix, Subspace};
pub use mult_group::{BasisLabel, KModP};
pub use padic::{ElementRepr, FieldSpec, FieldSpecFile, RingElement};
pub use ramification::JumpSequence;
pub use residue::{ResidueElement, ResidueField};
