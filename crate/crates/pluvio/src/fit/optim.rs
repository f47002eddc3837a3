//! Small optimization kernels shared by the fitters: golden-section search,
//! Nelder–Mead, and finite-difference Hessians.

/// Cube root of machine epsilon, the usual central-difference step factor.
pub(crate) const DIFF_STEP: f64 = 6.055_454_452_393_343e-6;

pub(crate) struct GoldenResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    pub at_edge: bool,
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`,
/// run until the bracket is narrower than `tol`.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> GoldenResult {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a) > tol && iterations < max_iter {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc >= fd { (c, fc) } else { (d, fd) };
    let edge_band = 1e-6 * (hi - lo);
    GoldenResult {
        x,
        fx,
        iterations,
        at_edge: (x - lo) < edge_band || (hi - x) < edge_band,
    }
}

pub(crate) struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead maximization. `step` sets the initial simplex spread around
/// `x0`; convergence when the simplex function values agree within `ftol`.
pub(crate) fn nelder_mead_max<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: &[f64],
    ftol: f64,
    max_iter: usize,
) -> NelderMeadResult {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let converged = loop {
        if iterations >= max_iter {
            break false;
        }
        iterations += 1;

        // order best → worst (maximizing)
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if (values[best] - values[worst]).abs()
            <= ftol * (1.0 + values[best].abs().max(values[worst].abs()))
        {
            break true;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; dim];
        for (i, v) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for (c, &vi) in centroid.iter_mut().zip(v) {
                *c += vi / dim as f64;
            }
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(&c, &w)| c + (c - w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect > values[best] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(&c, &w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = f(&expand);
            if f_expand > f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
        } else if f_reflect > values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(&c, &w)| c + 0.5 * (w - c))
                .collect();
            let f_contract = f(&contract);
            if f_contract > values[worst] {
                simplex[worst] = contract;
                values[worst] = f_contract;
            } else {
                // shrink toward the best
                let best_point = simplex[best].clone();
                for (i, v) in simplex.iter_mut().enumerate() {
                    if i == best {
                        continue;
                    }
                    for (vi, &bi) in v.iter_mut().zip(&best_point) {
                        *vi = bi + 0.5 * (*vi - bi);
                    }
                    values[i] = f(v);
                }
            }
        }
    };

    let mut best_idx = 0;
    for i in 1..values.len() {
        if values[i] > values[best_idx] {
            best_idx = i;
        }
    }
    NelderMeadResult {
        x: simplex[best_idx].clone(),
        fx: values[best_idx],
        iterations,
        converged,
    }
}

/// Central-difference Hessian of `f` at `x` with per-coordinate steps.
pub(crate) fn hessian_central<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &[f64],
    steps: &[f64],
) -> Vec<Vec<f64>> {
    let dim = x.len();
    let mut h = vec![vec![0.0; dim]; dim];
    let f0 = f(x);
    for i in 0..dim {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += steps[i];
        xm[i] -= steps[i];
        h[i][i] = (f(&xp) - 2.0 * f0 + f(&xm)) / (steps[i] * steps[i]);
        for j in (i + 1)..dim {
            let mut xpp = x.to_vec();
            let mut xpm = x.to_vec();
            let mut xmp = x.to_vec();
            let mut xmm = x.to_vec();
            xpp[i] += steps[i];
            xpp[j] += steps[j];
            xpm[i] += steps[i];
            xpm[j] -= steps[j];
            xmp[i] -= steps[i];
            xmp[j] += steps[j];
            xmm[i] -= steps[i];
            xmm[j] -= steps[j];
            let v = (f(&xpp) - f(&xpm) - f(&xmp) + f(&xmm)) / (4.0 * steps[i] * steps[j]);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

/// Standard errors from the observed information `I = −H` of a 2-parameter
/// log-likelihood; `None` when `I` is not positive definite.
pub(crate) fn se_from_neg_hessian_2x2(h: &[Vec<f64>]) -> Option<[f64; 2]> {
    let i00 = -h[0][0];
    let i11 = -h[1][1];
    let i01 = -h[0][1];
    let det = i00 * i11 - i01 * i01;
    if !(i00 > 0.0 && det > 0.0) {
        return None;
    }
    let var0 = i11 / det;
    let var1 = i00 / det;
    if var0 < 0.0 || var1 < 0.0 {
        return None;
    }
    Some([var0.sqrt(), var1.sqrt()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_quadratic_peak() {
        let r = golden_section_max(|x| -(x - 2.5) * (x - 2.5), 0.0, 10.0, 1e-12, 500);
        assert!((r.x - 2.5).abs() < 1e-9, "x {}", r.x);
        assert!(!r.at_edge);
    }

    #[test]
    fn golden_flags_edge_maximum() {
        let r = golden_section_max(|x| x, 0.0, 1.0, 1e-12, 500);
        assert!(r.at_edge);
    }

    #[test]
    fn nelder_mead_on_rosenbrock_bowl() {
        // maximize the negative Rosenbrock function; optimum at (1, 1)
        let f = |v: &[f64]| {
            let (x, y) = (v[0], v[1]);
            -((1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2))
        };
        let r = nelder_mead_max(f, &[-1.2, 1.0], &[0.5, 0.5], 1e-14, 5000);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4,
                "x {:?}", r.x);
    }

    #[test]
    fn hessian_of_known_quadratic() {
        // f = −(x² + 3y² + xy): H = [[−2, −1], [−1, −6]]
        let f = |v: &[f64]| -(v[0] * v[0] + 3.0 * v[1] * v[1] + v[0] * v[1]);
        let h = hessian_central(f, &[0.3, -0.2], &[1e-5, 1e-5]);
        assert!((h[0][0] + 2.0).abs() < 1e-6);
        assert!((h[1][1] + 6.0).abs() < 1e-6);
        assert!((h[0][1] + 1.0).abs() < 1e-6);
        let se = se_from_neg_hessian_2x2(&h).unwrap();
        assert!(se[0] > 0.0 && se[1] > 0.0);
    }
}
