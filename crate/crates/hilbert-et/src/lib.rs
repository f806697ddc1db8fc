//! Numerical machinery for the angular discrepancy of polynomial zeros and
//! the compact-support Hilbert-transform extremal problem that yields the
//! sharp 4/√π discrepancy constant.
//!
//! The crate has two halves that meet in the middle:
//!
//! * the number-theory side: complex polynomials, root extraction, height
//!   functionals, and exact arc discrepancy ([`polynomial`], [`heights`],
//!   [`discrepancy`]);
//! * the analysis side: Hilbert transforms of compactly supported functions
//!   on the line and the circle, the δ-rescaling family, and the extremal
//!   functional C(F) ([`hilbert`], [`extremal`]).
//!
//! Every named constant is derived from series in [`constants`]; nothing is
//! retyped from tables. The [`verify`] module packages the whole pipeline as
//! a pass/fail certification suite, also exposed as `hilbert-et verify-paper`.

pub mod constants;
pub mod discrepancy;
pub mod error;
pub mod extremal;
pub mod heights;
pub mod hilbert;
pub mod polynomial;
pub(crate) mod quad;
pub(crate) mod special;

pub use error::{Error, Result};
