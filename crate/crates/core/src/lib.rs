//! Exact symbolic engine for the quantum double of a Reflection Equation
//! algebra and its algebra of derivatives, with a verifier for the matrix
//! Capelli identities.
//!
//! Everything is generic over [`Scalar`]; the aliases below fix the two
//! backends.

pub mod capelli;
pub mod error;
pub mod ncalg;
pub mod qlinalg;
pub mod rcatalog;
pub mod rewrite;
pub mod scalar;

pub use capelli::{verify, verify_with, Engine, IdentityId, IdentitySpec, Mode, Options, Outcome, VerificationReport};
pub use error::{Error, Result};
pub use ncalg::{Gen, Kind, NCMatrix, NCPoly, Word};
pub use qlinalg::QMatrix;
pub use rcatalog::HeckeSymmetry;
pub use rewrite::{DoubleAlgebra, Strategy};
pub use scalar::{QConfig, QContext, RatFunc, Scalar};

/// Exact rationals, the fixed-`q` backend.
pub type Rational = num_rational::BigRational;

pub type FixedMatrix = QMatrix<Rational>;
pub type SymbolicMatrix = QMatrix<RatFunc>;
pub type FixedPoly = NCPoly<Rational>;
pub type SymbolicPoly = NCPoly<RatFunc>;
pub type FixedHecke = HeckeSymmetry<Rational>;
pub type SymbolicHecke = HeckeSymmetry<RatFunc>;
pub type FixedEngine = Engine<Rational>;
pub type SymbolicEngine = Engine<RatFunc>;
