use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every rank, kernel and predicate test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Absolute floor for "zero" and for partial-isometry distances.
    pub abs: f64,
    /// Rank cut-off relative to the largest singular value.
    pub rank_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rank_rel: 1e-9,
        }
    }
}

impl Tolerance {
    /// Largest absolute tolerance accepted from user input.
    pub const MAX_ABS: f64 = 1e-4;

    /// Tolerance with a user-chosen absolute floor, validated as the CLI does.
    pub fn with_abs(abs: f64) -> Result<Self> {
        if !(abs > 0.0 && abs <= Self::MAX_ABS) {
            return Err(Error::BadParameters(format!(
                "tolerance must lie in (0, {:e}], got {abs:e}",
                Self::MAX_ABS
            )));
        }
        Ok(Self {
            abs,
            ..Self::default()
        })
    }

    /// Singular values above this count towards the rank.
    pub fn rank_threshold(&self, sigma_max: f64) -> f64 {
        (self.rank_rel * sigma_max).max(self.abs)
    }
}
