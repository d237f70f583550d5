//! Shuffle algebras, iterated integrals and hyperlogarithms on `P¹ ∖ S`.
pub mod connection;
pub mod curve;
pub mod error;
pub mod hyperlog;
pub mod io;
pub mod iterint;
pub mod kz;
pub mod local_expansion;
pub mod monodromy;
pub mod par;
pub mod random;
pub mod reduce;
pub mod scalar;
pub mod selftest;
pub mod shuffle;

pub use curve::{ClassLetter, Curve, DeRhamClass, Differential, FormLetter, RationalFunction, Section};
pub use error::{Error, ParseError, Result};
pub use scalar::Scalar;
pub use shuffle::{AlphabetId, ShuffleTensor, Word};
