//! Gamma maximum likelihood via the shape equation.

use super::optim::{hessian_central, se_from_neg_hessian_2x2, DIFF_STEP};
use super::report::{FitReport, ParamEstimate, ParamInit};
use crate::error::{Error, Result};
use crate::special::{digamma_raw, ln_gamma_raw, trigamma_raw};

/// Fits a gamma law by maximum likelihood.
///
/// The MLE solves `ln α − ψ(α) = ln x̄ − mean(ln x)` for the shape, with
/// `rate = α̂/x̄`. The root is found by Newton steps safeguarded with
/// bisection (the left side is strictly decreasing in α), starting from the
/// standard closed-form approximation.
pub fn fit_gamma(sample: &[f64]) -> Result<FitReport> {
    let n = sample.len();
    if n < 30 {
        return Err(Error::InsufficientData(format!(
            "gamma fit needs n >= 30 observations, got {n}"
        )));
    }
    if let Some(&bad) = sample.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain(format!(
            "gamma fit requires positive observations, got {bad}"
        )));
    }

    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let mean_ln = sample.iter().map(|&x| x.ln()).sum::<f64>() / nf;
    let s_stat = mean.ln() - mean_ln; // > 0 unless the sample is constant

    if !(s_stat > 1e-14) {
        return Err(Error::DegenerateSample(
            "sample variance is zero; the gamma shape is unidentified".into(),
        ));
    }

    // Closed-form starting point.
    let shape_init = (3.0 - s_stat + ((s_stat - 3.0).powi(2) + 24.0 * s_stat).sqrt())
        / (12.0 * s_stat);

    // g(α) = ln α − ψ(α) − s is strictly decreasing with a unique root.
    let g = |a: f64| a.ln() - digamma_raw(a) - s_stat;
    let (mut lo, mut hi) = (shape_init, shape_init);
    while g(lo) < 0.0 && lo > 1e-10 {
        lo /= 4.0;
    }
    while g(hi) > 0.0 && hi < 1e10 {
        hi *= 4.0;
    }

    let mut shape = shape_init.clamp(lo, hi);
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..100 {
        iterations += 1;
        let gv = g(shape);
        if gv > 0.0 {
            lo = shape;
        } else {
            hi = shape;
        }
        let deriv = 1.0 / shape - trigamma_raw(shape);
        let mut next = shape - gv / deriv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let delta = (next - shape).abs();
        shape = next;
        if gv.abs() < 1e-13 || delta < 1e-13 * shape {
            converged = true;
            break;
        }
    }

    let rate = shape / mean;
    let sum_x: f64 = sample.iter().sum();
    let sum_ln: f64 = mean_ln * nf;
    let loglik = |v: &[f64]| -> f64 {
        let (a, b) = (v[0], v[1]);
        if !(a > 0.0 && b > 0.0) {
            return f64::NEG_INFINITY;
        }
        nf * a * b.ln() + (a - 1.0) * sum_ln - b * sum_x - nf * ln_gamma_raw(a)
    };

    let steps = [DIFF_STEP * shape.max(1e-3), DIFF_STEP * rate.max(1e-3)];
    let hessian = hessian_central(&loglik, &[shape, rate], &steps);
    let mut flags = Vec::new();
    let se = match se_from_neg_hessian_2x2(&hessian) {
        Some(se) => se,
        None => {
            flags.push("observed_information_not_positive_definite".to_string());
            [f64::NAN, f64::NAN]
        }
    };
    if !converged {
        flags.push("shape_equation_newton_not_converged".to_string());
    }

    Ok(FitReport {
        family: "gamma".to_string(),
        estimates: vec![
            ParamEstimate {
                name: "shape".into(),
                value: shape,
                std_error: se[0],
            },
            ParamEstimate {
                name: "rate".into(),
                value: rate,
                std_error: se[1],
            },
        ],
        log_likelihood: loglik(&[shape, rate]),
        n,
        converged,
        iterations,
        initializer: vec![
            ParamInit {
                name: "shape".into(),
                value: shape_init,
            },
            ParamInit {
                name: "rate".into(),
                value: shape_init / mean,
            },
        ],
        note: "maximum likelihood via the shape equation ln a - psi(a) = ln mean - mean(ln x)"
            .to_string(),
        flags,
    })
}
