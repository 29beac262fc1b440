use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used by the resolution-indexed verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A sampled symbol is invertible at resolution iff `min |f| >= delta`.
    pub delta: f64,
    /// Singular values below `eps` count as kernel directions.
    pub kernel_eps: f64,
    /// Fixed radii at which every winding number is recomputed.
    pub stability_radii: Vec<f64>,
    /// Largest admissible argument increment between adjacent samples.
    pub max_phase_increment: f64,
    /// Centered phase sup below which a phase is reported bounded.
    pub bounded_sup_limit: f64,
    /// Minimal relative sup growth per decade of truncation order for an
    /// `unbounded_trend` verdict.
    pub unbounded_growth_per_decade: f64,
    /// Bandwidth multiplier applied by `Exp`/`ExpI` symbol nodes.
    pub exp_bandwidth_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            delta: 1e-6,
            kernel_eps: 1e-6,
            stability_radii: vec![0.9, 0.99],
            max_phase_increment: 0.75 * std::f64::consts::PI,
            bounded_sup_limit: 50.0,
            unbounded_growth_per_decade: 0.02,
            exp_bandwidth_factor: 8.0,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("delta", self.delta),
            ("kernel_eps", self.kernel_eps),
            ("max_phase_increment", self.max_phase_increment),
            ("bounded_sup_limit", self.bounded_sup_limit),
            ("unbounded_growth_per_decade", self.unbounded_growth_per_decade),
            ("exp_bandwidth_factor", self.exp_bandwidth_factor),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::validation("config", format!("{name} must be positive, got {value}")));
            }
        }
        if self.max_phase_increment >= std::f64::consts::PI {
            return Err(Error::validation("config", "max_phase_increment must be below pi"));
        }
        for &r in &self.stability_radii {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::validation("config", format!("stability radius {r} outside (0,1)")));
            }
        }
        Ok(())
    }
}
