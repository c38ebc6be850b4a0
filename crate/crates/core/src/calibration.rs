//! Measured constants for the error budgets.
//!
//! The budgets carry unspecified O-constants. They are measured on ζ against
//! the Euler–Maclaurin oracle on a grid disjoint from the verification grid
//! and stored in `calibration.toml`, which is compiled in.

use serde::{Deserialize, Serialize};

use crate::error::{AfeError, Result};

const EMBEDDED: &str = include_str!("../calibration.toml");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    /// The ε in the sharp budget exponents.
    pub epsilon: f64,
    pub c_sharp: f64,
    pub c_smoothed: f64,
}

impl Calibration {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| AfeError::Parse(e.to_string().replace('\n', " ")))?;
        if !(c.epsilon >= 0.0 && c.c_sharp > 0.0 && c.c_smoothed > 0.0) {
            return Err(AfeError::Parse(format!("calibration constants must be positive: {c:?}")));
        }
        Ok(c)
    }

    /// The checked-in constants.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded calibration.toml is valid")
    }

    pub fn to_toml(&self) -> String {
        format!(
            "# Measured O-constants for the error budgets.\n\
             # Regenerate with `afe verify --calibrate --output crates/core/calibration.toml`.\n\
             epsilon = {}\nc_sharp = {:.6e}\nc_smoothed = {:.6e}\n",
            self.epsilon, self.c_sharp, self.c_smoothed
        )
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Self::embedded()
    }
}
