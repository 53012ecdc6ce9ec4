//! Exact enumeration and analysis of integral fusion rings and Drinfeld rings.

pub mod enumerate;
pub mod error;
pub mod format;
pub mod grouptheory;
pub mod induction;
pub mod linalg;
pub mod ring;
pub mod spectra;

pub use error::{Axiom, Error, Result};
pub use ring::{FpDims, FusionData, RingSummary, TypeVector};
