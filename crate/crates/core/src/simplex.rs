//! Box-constrained Nelder-Mead in the plane.
//!
//! Vertices are clamped to `[lo, hi]` after every move. `+inf` objective
//! values rank below every finite value, so a simplex can straddle an
//! infeasible region and still contract out of it.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub lo: f64,
    pub hi: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions { lo: 1e-12, hi: 1.0 - 1e-12, diameter_tol: 1e-10, max_iter: 500, initial_step: 0.05 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadResult {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn cmp_values(a: f64, b: f64) -> Ordering {
    // NaN never reaches here; +inf sorts last like any large value.
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

fn diameter(simplex: &[([f64; 2], f64); 3]) -> f64 {
    let best = simplex[0].0;
    simplex[1..].iter().map(|(p, _)| (p[0] - best[0]).abs().max((p[1] - best[1]).abs())).fold(0.0, f64::max)
}

pub fn minimize<F>(f: F, start: [f64; 2], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: Fn([f64; 2]) -> f64,
{
    let clamp = |p: [f64; 2]| [p[0].clamp(opts.lo, opts.hi), p[1].clamp(opts.lo, opts.hi)];
    let eval = |p: [f64; 2]| {
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let x0 = clamp(start);
    // Step inward when the start sits on the upper edge of the box.
    let step = |c: f64| if c + opts.initial_step <= opts.hi { opts.initial_step } else { -opts.initial_step };
    let x1 = clamp([x0[0] + step(x0[0]), x0[1]]);
    let x2 = clamp([x0[0], x0[1] + step(x0[1])]);
    let mut simplex = [(x0, eval(x0)), (x1, eval(x1)), (x2, eval(x2))];

    let mut iterations = 0;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| cmp_values(a.1, b.1));
        if diameter(&simplex) < opts.diameter_tol {
            break;
        }
        iterations += 1;

        let (best, worst) = (simplex[0], simplex[2]);
        let second = simplex[1];
        let centroid = [(best.0[0] + second.0[0]) / 2.0, (best.0[1] + second.0[1]) / 2.0];
        let along = |coef: f64| {
            clamp([centroid[0] + coef * (centroid[0] - worst.0[0]), centroid[1] + coef * (centroid[1] - worst.0[1])])
        };

        let xr = along(REFLECT);
        let fr = eval(xr);
        if fr < best.1 {
            let xe = along(EXPAND);
            let fe = eval(xe);
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second.1 {
            simplex[2] = (xr, fr);
            continue;
        }
        let accepted = if fr < worst.1 {
            let xc = along(CONTRACT);
            let fc = eval(xc);
            (fc <= fr).then_some((xc, fc))
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(xc);
            (fc < worst.1).then_some((xc, fc))
        };
        if let Some(vertex) = accepted {
            simplex[2] = vertex;
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let p =
                clamp([best.0[0] + SHRINK * (vertex.0[0] - best.0[0]), best.0[1] + SHRINK * (vertex.0[1] - best.0[1])]);
            *vertex = (p, eval(p));
        }
    }
    simplex.sort_by(|a, b| cmp_values(a.1, b.1));
    NelderMeadResult { x: simplex[0].0, value: simplex[0].1, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_quadratic_minimum() {
        let f = |p: [f64; 2]| (p[0] - 0.3).powi(2) + 2.0 * (p[1] - 0.6).powi(2) + 1.0;
        let res = minimize(f, [0.9, 0.1], &NelderMeadOptions::default());
        assert!((res.x[0] - 0.3).abs() < 1e-8 && (res.x[1] - 0.6).abs() < 1e-8, "{res:?}");
        assert!((res.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn respects_box_and_reaches_boundary() {
        let f = |p: [f64; 2]| -p[0] + (p[1] - 0.5).powi(2);
        let opts = NelderMeadOptions::default();
        let res = minimize(f, [0.5, 0.5], &opts);
        assert!(res.x[0] <= opts.hi && res.x[0] > opts.hi - 1e-9, "{res:?}");
    }

    #[test]
    fn infinite_region_is_avoided() {
        let f = |p: [f64; 2]| if p[0] > 0.7 { f64::INFINITY } else { (p[0] - 0.69).powi(2) + p[1] * p[1] };
        let res = minimize(f, [0.2, 0.3], &NelderMeadOptions::default());
        assert!(res.value.is_finite());
        assert!((res.x[0] - 0.69).abs() < 1e-6, "{res:?}");
    }
}
