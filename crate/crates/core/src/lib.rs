//! Approximate functional equations for derivatives `F^{(m)}(s)` of
//! Selberg-class functions inside the critical strip.

pub mod afe;
pub mod calibration;
pub mod chi;
pub mod contour;
pub mod datum;
pub mod oracle;
pub mod error;
pub mod quadrature;
pub mod smoothing;
pub mod special;
pub mod sum;

pub use datum::{CoefficientKind, CoefficientSource, DerivedConstants, Descriptor, SelbergDatum};
pub use error::{AfeError, Result};
pub use smoothing::SmoothingFunction;
pub use special::ComplexPoint;
