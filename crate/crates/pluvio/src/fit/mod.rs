//! Maximum-likelihood fitting of the duration and volume models.
//!
//! Three fitters, one report shape:
//!
//! - [`fit_negbin_durations`] — shifted negative binomial for wet-spell
//!   durations, by profile likelihood over the shape.
//! - [`fit_gpd_volumes`] — generalized Pareto for daily volumes above the
//!   wet threshold, PWM-initialized with simplex refinement.
//! - [`fit_gamma`] — gamma law for positive samples (e.g. simulated
//!   intensities), by the shape equation.
//!
//! All standard errors come from central-difference observed information;
//! every fitter is deterministic given its input sample.

mod gamma;
mod gpd;
mod negbin;
mod optim;
mod report;

pub use gamma::fit_gamma;
pub use gpd::fit_gpd_volumes;
pub use negbin::fit_negbin_durations;
pub use report::{FitReport, ParamEstimate, ParamInit};
