//! Exact linear algebra over `Q` and `F_p`.

pub mod field;
pub mod matrix;
pub mod modular;
pub mod subspace;

pub use field::{Field, FieldDescriptor, FieldScalar, PrimeField, Rationals};
pub use matrix::DenseMatrix;
pub use subspace::{Echelon, Subspace};
