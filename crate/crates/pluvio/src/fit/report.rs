//! Fit results in a family-independent shape.

use serde::Serialize;

use crate::dist::{GammaParams, NegBinParams, ParetoGpdParams};
use crate::error::{Error, Result};

/// One estimated parameter with its observed-information standard error.
#[derive(Debug, Clone, Serialize)]
pub struct ParamEstimate {
    pub name: String,
    pub value: f64,
    /// Standard error; 0 for parameters held fixed, NaN when the observed
    /// information was not positive definite.
    pub std_error: f64,
}

/// A starting value handed to the optimizer.
#[derive(Debug, Clone, Serialize)]
pub struct ParamInit {
    pub name: String,
    pub value: f64,
}

/// Maximum-likelihood fit summary.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// `negbin`, `gpd`, or `gamma`.
    pub family: String,
    pub estimates: Vec<ParamEstimate>,
    pub log_likelihood: f64,
    /// Sample size.
    pub n: usize,
    pub converged: bool,
    /// Optimizer iterations.
    pub iterations: usize,
    /// Initializer values (moment/PWM estimates).
    pub initializer: Vec<ParamInit>,
    /// Modelling conventions in force, e.g. the duration shift.
    pub note: String,
    /// Non-fatal diagnostics (fallbacks, constraint violations).
    pub flags: Vec<String>,
}

impl FitReport {
    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.estimates.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.estimates
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.std_error)
    }

    fn require(&self, name: &str) -> Result<f64> {
        self.estimate(name).ok_or_else(|| {
            Error::Domain(format!(
                "fit report for family {:?} has no estimate named {name:?}",
                self.family
            ))
        })
    }

    /// The fitted negative binomial parameters, when this is a duration fit.
    pub fn negbin_params(&self) -> Result<NegBinParams> {
        NegBinParams::new(self.require("r")?, self.require("p")?)
    }

    /// The fitted generalized Pareto parameters, when this is a volume fit.
    pub fn gpd_params(&self) -> Result<ParetoGpdParams> {
        ParetoGpdParams::new(
            self.require("xi")?,
            self.require("sigma")?,
            self.require("mu")?,
        )
    }

    /// The fitted gamma parameters.
    pub fn gamma_params(&self) -> Result<GammaParams> {
        GammaParams::new(self.require("shape")?, self.require("rate")?)
    }
}
