//! Exact combinatorial invariants of plane foliation germs.
//!
//! A germ is described by the blow-up program of a reduction of
//! singularities, the marking of invariant and dicritical components, and
//! the attachment vectors of its separatrices. Everything is computed over
//! exact integers and rationals; the matrix layer is generic over
//! [`Scalar`] so other exact types can be plugged in.

pub mod divisor;
pub mod error;
pub mod exact;
pub mod foliation;
pub mod hypotheses;
pub mod invariants;
pub mod matrix;
pub mod pencil;
pub mod program;
pub mod scalar;
pub mod serde_int;

pub use divisor::{BranchAttachment, InvariantMarking, SeparatrixDivisor};
pub use error::{Error, Result};
pub use exact::Exact;
pub use foliation::Foliation;
pub use hypotheses::{Hypothesis, HypothesisLedger, HypothesisStatus};
pub use invariants::Engine;
pub use matrix::Matrix;
pub use pencil::PencilModel;
pub use program::{BlowUpProgram, CholeskyMatrix, IntersectionMatrix};
pub use scalar::{Field, Scalar};

pub type Int = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type IntMatrix = Matrix<Int>;
pub type RationalMatrix = Matrix<Rational>;
