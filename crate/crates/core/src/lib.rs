//! Quantum families of maps on finite quantum spaces.
//!
//! Finite-dimensional C*-algebras are modelled concretely as direct sums of
//! matrix blocks. On top of that the crate builds *-homomorphisms, quantum
//! families `Ψ: B → C ⊗ A`, their composition, quantum semigroups and their
//! actions, matrix representations and magic unitaries, and reports every
//! algebraic identity as a numeric defect.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod families;
pub mod linalg;
pub mod morphisms;
pub mod random;
pub mod representations;
pub mod semigroups;

pub use algebra::{AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
pub use error::{Error, Result};
pub use families::QuantumFamily;
pub use morphisms::{Character, StarMorphism};
pub use representations::{MagicUnitary, Representation};
pub use semigroups::QuantumSemigroup;
