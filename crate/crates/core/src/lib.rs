//! Exact homological invariants of bound quiver algebras: syzygies,
//! projective dimension, torsion radicals and radical layer length, proof
//! constructions for Igusa-Todorov certificates, and derived-dimension bounds.

pub mod algebra;
pub mod bounds;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod field;
pub mod homology;
pub mod linalg;
pub mod modfile;
pub mod parse;
pub mod random;
pub mod rep;
pub mod torsion;

pub use algebra::{Algebra, Arrow, PathWord, Quiver, Relation};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use homology::PdResult;
pub use linalg::{EchelonSpan, Matrix, Subspace};
pub use parse::parse_algebra;
pub use rep::{ModuleMap, Representation, ShortExactSequence};
pub use torsion::SimpleSet;
