//! Numerical thresholds shared by every engine.

use serde::{Deserialize, Serialize};

/// Label-wise amplitude comparison and norm checks.
pub const AMPLITUDE_TOL: f64 = 1e-9;

/// Amplitudes below this modulus are dropped from sparse storage; probabilities
/// below it count as impossible.
pub const PRUNE_TOL: f64 = 1e-12;

/// Slack applied to `(Δt)² − (Δz)²` and to time comparisons, in c = 1 units.
pub const GEOM_EPS: f64 = 1e-9;

/// A probability is "certain" when it is within this distance of 1.
pub const CERTAINTY_TOL: f64 = 1e-9;

/// Overridable thresholds for the geometry and element-of-reality engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub amplitude: f64,
    pub geometry: f64,
    pub certainty: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            amplitude: AMPLITUDE_TOL,
            geometry: GEOM_EPS,
            certainty: CERTAINTY_TOL,
        }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.amplitude, self.geometry, self.certainty]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}
