//! Adaptive quadrature on finite and semi-infinite intervals.
//!
//! One engine serves every mixture-identity verification in this crate: a
//! globally adaptive bisection scheme with a nested Gauss(7)/Kronrod(15)
//! rule per subinterval, the QUADPACK `qk15` error estimate, and a
//! worst-interval-first refinement queue. Semi-infinite integrals are mapped
//! onto (0, 1) by `x = lower + t/(1 − t)`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureSpec {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target; the run stops when the estimated error drops
    /// below `max(abs_tol, rel_tol * |integral|)`.
    pub rel_tol: f64,
    /// Maximum number of bisections before giving up.
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidParam(format!(
                "quadrature tolerances must be positive, got abs={abs_tol}, rel={rel_tol}"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::InvalidParam(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Same tolerances with the absolute cutoff rescaled to a target
    /// magnitude, so integrals of tiny quantities (far-tail probabilities)
    /// are still resolved to full relative accuracy.
    pub(crate) fn scaled_to(&self, magnitude: f64) -> Self {
        let floor = (magnitude.abs() * self.rel_tol * 1e-2).max(1e-300);
        Self {
            abs_tol: self.abs_tol.min(floor).max(1e-300),
            ..*self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

/// Outcome of a converged integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae (positive half, descending); every second one
// is a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);

    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    let mut resabs = result_kronrod.abs();
    let mut fv_lo = [0.0_f64; 7];
    let mut fv_hi = [0.0_f64; 7];

    for j in 0..3 {
        let idx = 2 * j + 1;
        let offset = half * XGK[idx];
        let f1 = f(center - offset);
        let f2 = f(center + offset);
        fv_lo[idx] = f1;
        fv_hi[idx] = f2;
        result_gauss += WG[j] * (f1 + f2);
        result_kronrod += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let offset = half * XGK[idx];
        let f1 = f(center - offset);
        let f2 = f(center + offset);
        fv_lo[idx] = f1;
        fv_hi[idx] = f2;
        result_kronrod += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * result_kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv_lo[j] - mean).abs() + (fv_hi[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * 1.0_f64.min((200.0 * err / resasc).powf(1.5));
    }
    let round = 50.0 * f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / round {
        err = err.max(round * resabs);
    }
    (value, err)
}

/// One non-adaptive Kronrod panel; used where many small smooth panels are
/// accumulated (CDF tabulation) and adaptivity per panel would be waste.
pub(crate) fn panel_estimate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    qk15(f, a, b)
}

#[derive(Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!(
            "integration interval must be finite with a < b, got [{a}, {b}]"
        )));
    }

    // An initial uniform partition keeps a sharply peaked integrand from
    // fooling the first error estimate.
    const INITIAL_PANELS: usize = 8;
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let width = (b - a) / INITIAL_PANELS as f64;
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { a + width * (i + 1) as f64 };
        let (value, error) = qk15(&f, lo, hi);
        total += value;
        total_err += error;
        heap.push(Segment { lo, hi, value, error });
    }

    let mut subdivisions = 0;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            return Ok(QuadResult {
                value: total,
                error_estimate: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.lo + worst.hi);
        let too_narrow = !(mid > worst.lo && mid < worst.hi);
        if subdivisions >= spec.max_subdivisions || too_narrow {
            return Err(Error::QuadratureNonConvergence {
                requested: target,
                achieved: total_err,
                lo: worst.lo,
                hi: worst.hi,
                subdivisions,
            });
        }
        subdivisions += 1;
        let (v1, e1) = qk15(&f, worst.lo, mid);
        let (v2, e2) = qk15(&f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
}

/// Integrates `f` over `[lower, ∞)` via the rational map `x = lower + t/(1−t)`.
///
/// The Jacobian `1/(1−t)²` diverges as `t → 1`, so the mapped integrand is
/// evaluated as 0 whenever `f(x) = 0`; integrands must decay at infinity.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !lower.is_finite() {
        return Err(Error::Domain(format!(
            "lower integration bound must be finite, got {lower}"
        )));
    }
    let mapped = move |t: f64| {
        let one_minus = 1.0 - t;
        let x = lower + t / one_minus;
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx / (one_minus * one_minus)
        }
    };
    integrate(mapped, 0.0, 1.0, spec)
}
