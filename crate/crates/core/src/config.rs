use serde::{Deserialize, Serialize};

use crate::error::{Result, TetraError};

/// Numerical tolerances shared by every engine.
///
/// `geom_tol` is the slack for predicates and is relative to the scale of
/// the tetrahedron where it is compared to lengths. `opt_tol` is the relative
/// convergence target of the optimizers. `quality_floor` bounds
/// `volume / longest_edge³` from below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub geom_tol: f64,
    pub opt_tol: f64,
    pub quality_floor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            geom_tol: 1e-9,
            opt_tol: 1e-6,
            quality_floor: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.geom_tol, self.opt_tol, self.quality_floor]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(TetraError::InvalidConfig(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.geom_tol > self.opt_tol {
            return Err(TetraError::InvalidConfig(
                "geom_tol must not exceed opt_tol".into(),
            ));
        }
        Ok(())
    }
}

/// Full engine configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub tolerances: ToleranceConfig,
    /// Longest face sequence the geodesic search may unfold.
    pub max_faces: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerances: ToleranceConfig::default(),
            max_faces: 16,
        }
    }
}

impl Config {
    pub fn with_opt_tol(mut self, opt_tol: f64) -> Self {
        self.tolerances.opt_tol = opt_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.max_faces < 2 {
            return Err(TetraError::InvalidConfig("max_faces must be >= 2".into()));
        }
        Ok(())
    }
}
