//! Numeric linear bounds over the binary triangle, polygonal-chain convex
//! bounds, and the smoothing transform.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{self, Analytic, PiecewiseBound};
use crate::catalog::{xi_value, BinaryPair, DivergenceSpec};
use crate::error::{domain, Error, Result};
use crate::simplex::{self, NelderMeadOptions};

/// Multi-start settings for the inner minimization.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Points per side of the seeding grid over `0 <= s <= r <= 1`.
    pub seed_grid: usize,
    /// Best grid points started from, on top of the grid's local minima.
    pub best_starts: usize,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { seed_grid: 21, best_starts: 4, nelder_mead: NelderMeadOptions::default() }
    }
}

/// Minimum of `D_bin(r || s) - lambda (r - s)` and a pair attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub pair: BinaryPair,
}

/// Snap distance: coordinates this close to 0 or 1 are also tried exactly on
/// the edge, which the clamped simplex cannot reach.
const SNAP: f64 = 1e-8;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || lambda.is_infinite() {
        return domain(format!("lambda must be a finite nonnegative number, got {lambda}"));
    }
    Ok(())
}

/// `L_D(lambda)` by multi-start Nelder-Mead, with default options.
pub fn linear_bound_numeric(spec: &DivergenceSpec, lambda: f64) -> Result<Minimum> {
    linear_bound_numeric_with(spec, lambda, None, &SolverOptions::default())
}

/// `L_D(lambda)` by multi-start Nelder-Mead over the unit square, folded into
/// `s <= r` by the mirror symmetry `(r, s) -> (1 - r, 1 - s)`. `warm` adds one
/// more starting point.
pub fn linear_bound_numeric_with(
    spec: &DivergenceSpec,
    lambda: f64,
    warm: Option<BinaryPair>,
    opts: &SolverOptions,
) -> Result<Minimum> {
    spec.validate()?;
    check_lambda(lambda)?;
    let diagonal = Minimum { value: 0.0, pair: BinaryPair::new_unchecked(0.5, 0.5) };
    if lambda == 0.0 {
        return Ok(diagonal);
    }
    let f = |p: [f64; 2]| xi_value(spec, lambda, p[0], p[1]);

    let n = opts.seed_grid.max(2);
    let step = 1.0 / (n - 1) as f64;
    let mut grid = vec![f64::INFINITY; n * n];
    for i in 0..n {
        for j in 0..i {
            grid[i * n + j] = f([i as f64 * step, j as f64 * step]);
        }
    }
    let mut starts: Vec<(f64, [f64; 2])> = Vec::new();
    let mut ranked: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let v = grid[i * n + j];
            if !v.is_finite() {
                continue;
            }
            ranked.push((v, i, j));
            let neighbors_ok = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= n as i64 || b >= a {
                        return true;
                    }
                    v <= grid[a as usize * n + b as usize]
                })
            });
            if neighbors_ok && v < 0.0 {
                starts.push((v, [i as f64 * step, j as f64 * step]));
            }
        }
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.extend(ranked.iter().take(opts.best_starts).map(|&(v, i, j)| (v, [i as f64 * step, j as f64 * step])));
    if let Some(w) = warm {
        let v = f([w.r(), w.s()]);
        if v.is_finite() {
            starts.push((v, [w.r(), w.s()]));
        }
    }
    starts.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]).then(a.1[1].total_cmp(&b.1[1])));
    starts.dedup_by(|a, b| a.1 == b.1);

    let mut best = diagonal;
    let mut consider = |value: f64, p: [f64; 2]| {
        if value < best.value {
            best = Minimum { value, pair: fold(p) };
        }
    };
    for &(_, x0) in &starts {
        let res = simplex::minimize(f, x0, &opts.nelder_mead);
        let polished = polish(&f, res.x, res.value, &opts.nelder_mead);
        consider(polished.0, polished.1);
    }
    Ok(best)
}

/// Restart once from the result with a small simplex, then try the exact
/// edges for coordinates sitting against the clamp.
fn polish<F: Fn([f64; 2]) -> f64>(f: &F, x: [f64; 2], value: f64, nm: &NelderMeadOptions) -> (f64, [f64; 2]) {
    let small = NelderMeadOptions { initial_step: 1e-4, ..*nm };
    let again = simplex::minimize(f, x, &small);
    let (mut value, mut x) = if again.value < value { (again.value, again.x) } else { (value, x) };
    // Minima a few 1e-5 from an edge are invisible at the box scale; search
    // again in logit coordinates where distance to the edge is relative.
    let logit = |c: f64| {
        let c = c.clamp(nm.lo, nm.hi);
        (c / (1.0 - c)).ln()
    };
    let sigmoid = |z: f64| if z >= 0.0 { 1.0 / (1.0 + (-z).exp()) } else { z.exp() / (1.0 + z.exp()) };
    let (zlo, zhi) = (logit(nm.lo), logit(nm.hi));
    let in_logit = NelderMeadOptions { lo: zlo, hi: zhi, initial_step: 0.5, ..*nm };
    let g = |z: [f64; 2]| f([sigmoid(z[0]), sigmoid(z[1])]);
    let z = simplex::minimize(g, [logit(x[0]), logit(x[1])], &in_logit);
    if z.value < value {
        value = z.value;
        x = [sigmoid(z.x[0]), sigmoid(z.x[1])];
    }
    let snaps = |c: f64| -> Vec<f64> {
        let mut out = vec![c];
        if c < SNAP {
            out.push(0.0);
        }
        if c > 1.0 - SNAP {
            out.push(1.0);
        }
        out
    };
    for r in snaps(x[0]) {
        for s in snaps(x[1]) {
            let v = f([r, s]);
            if v < value {
                value = v;
                x = [r, s];
            }
        }
    }
    (value, x)
}

fn fold(p: [f64; 2]) -> BinaryPair {
    let (r, s) = if p[0] >= p[1] { (p[0], p[1]) } else { (1.0 - p[0], 1.0 - p[1]) };
    BinaryPair::new_unchecked(r.clamp(0.0, 1.0), s.clamp(0.0, 1.0))
}

/// Slope grid for tangent construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LambdaGrid {
    /// `0` followed by `n` geometrically spaced points from `min` to `max`.
    Geometric { min: f64, max: f64, n: usize },
    /// Explicit points; must be strictly increasing and start at 0.
    Explicit { points: Vec<f64> },
}

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid::Geometric { min: 1e-3, max: 1e4, n: 400 }
    }
}

impl LambdaGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match self {
            LambdaGrid::Geometric { min, max, n } => {
                if !(*min > 0.0 && max > min && max.is_finite() && *n >= 2) {
                    return Err(Error::InvalidGrid(format!(
                        "geometric grid needs 0 < min < max and n >= 2, got min={min}, max={max}, n={n}"
                    )));
                }
                let ratio = (max / min).ln() / (*n - 1) as f64;
                std::iter::once(0.0)
                    .chain((0..*n).map(|k| if k + 1 == *n { *max } else { min * (ratio * k as f64).exp() }))
                    .collect()
            }
            LambdaGrid::Explicit { points } => points.clone(),
        };
        validate_grid(&pts)?;
        Ok(pts)
    }
}

fn validate_grid(points: &[f64]) -> Result<()> {
    if points.first() != Some(&0.0) {
        return Err(Error::InvalidGrid("lambda grid must start at 0".into()));
    }
    if points.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidGrid("lambda grid must be finite".into()));
    }
    if points.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("lambda grid must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Numeric,
    Analytic,
}

/// Sampled `lambda -> L_D(lambda)` with the binary pair attaining each value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearBound {
    pub spec: DivergenceSpec,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub minimizers: Vec<BinaryPair>,
    pub source: Source,
}

impl LinearBound {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Touch point `T* = r* - s*` of each tangent.
    pub fn touch_points(&self) -> Vec<f64> {
        self.minimizers.iter().map(|p| p.r() - p.s()).collect()
    }

    pub fn tangents(&self) -> Vec<Tangent> {
        self.lambdas.iter().zip(&self.values).map(|(&slope, &intercept)| Tangent { slope, intercept }).collect()
    }
}

/// Sequential warm-started solves over the grid.
pub fn build_linear_bound(spec: &DivergenceSpec, grid: &LambdaGrid) -> Result<LinearBound> {
    build_linear_bound_with(spec, grid, &SolverOptions::default())
}

pub fn build_linear_bound_with(spec: &DivergenceSpec, grid: &LambdaGrid, opts: &SolverOptions) -> Result<LinearBound> {
    spec.validate()?;
    let lambdas = grid.points()?;
    let mut values = Vec::with_capacity(lambdas.len());
    let mut minimizers = Vec::with_capacity(lambdas.len());
    let mut warm = None;
    for &lambda in &lambdas {
        let m = linear_bound_numeric_with(spec, lambda, warm, opts)?;
        warm = Some(m.pair);
        values.push(m.value);
        minimizers.push(m.pair);
    }
    Ok(LinearBound { spec: *spec, lambdas, values, minimizers, source: Source::Numeric })
}

/// Independent cold solves in parallel; same result layout as
/// [`build_linear_bound`].
pub fn build_linear_bound_parallel(spec: &DivergenceSpec, grid: &LambdaGrid) -> Result<LinearBound> {
    spec.validate()?;
    let lambdas = grid.points()?;
    let opts = SolverOptions::default();
    let solved: Vec<Minimum> =
        lambdas.par_iter().map(|&l| linear_bound_numeric_with(spec, l, None, &opts)).collect::<Result<_>>()?;
    Ok(LinearBound {
        spec: *spec,
        lambdas,
        values: solved.iter().map(|m| m.value).collect(),
        minimizers: solved.iter().map(|m| m.pair).collect(),
        source: Source::Numeric,
    })
}

/// Closed-form linear bound on a grid; fails if any grid point has no closed
/// form or no closed-form minimizer.
pub fn build_linear_bound_analytic(spec: &DivergenceSpec, grid: &LambdaGrid) -> Result<LinearBound> {
    let lambdas = grid.points()?;
    let mut values = Vec::with_capacity(lambdas.len());
    let mut minimizers = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        match analytic::linear_bound_analytic(spec, lambda)? {
            Analytic::Value(p) => {
                values.push(p.value);
                minimizers.push(p.minimizer.unwrap_or(BinaryPair::new_unchecked(0.5, 0.5)));
            }
            Analytic::NotAvailable => {
                return Err(Error::Unsupported(format!("closed-form linear bound at lambda = {lambda}")));
            }
        }
    }
    Ok(LinearBound { spec: *spec, lambdas, values, minimizers, source: Source::Analytic })
}

/// Upper bound on `B - chain` between consecutive touch points `i` and
/// `i + 1`: the chord through the two attained points minus the larger tangent
/// at their crossing.
fn certified_gap(lb: &LinearBound, touch: &[f64], i: usize) -> f64 {
    let (t0, t1) = (touch[i], touch[i + 1]);
    if t1 <= t0 {
        return 0.0;
    }
    let (l0, l1) = (lb.lambdas[i], lb.lambdas[i + 1]);
    let (c0, c1) = (lb.values[i], lb.values[i + 1]);
    let (d0, d1) = (c0 + l0 * t0, c1 + l1 * t1);
    let x = if l1 > l0 { ((c0 - c1) / (l1 - l0)).clamp(t0, t1) } else { t0 };
    let chord = d0 + (d1 - d0) * (x - t0) / (t1 - t0);
    let envelope = (c0 + l0 * x).max(c1 + l1 * x);
    (chord - envelope).max(0.0)
}

/// Inserts slopes between neighbours whose certified gap exceeds `tol`, until
/// every gap is within `tol` or the bound has `max_points` slopes.
pub fn refine_linear_bound(lb: &LinearBound, tol: f64, max_points: usize) -> Result<LinearBound> {
    if lb.source != Source::Numeric {
        return Ok(lb.clone());
    }
    let opts = SolverOptions::default();
    let mut lb = lb.clone();
    loop {
        let touch = lb.touch_points();
        let inserts: Vec<(usize, f64)> = (0..lb.len().saturating_sub(1))
            .filter(|&i| certified_gap(&lb, &touch, i) > tol)
            .map(|i| {
                let (a, b) = (lb.lambdas[i], lb.lambdas[i + 1]);
                let mid = if a > 0.0 { (a * b).sqrt() } else { 0.5 * b };
                (i, mid)
            })
            .filter(|&(i, mid)| mid > lb.lambdas[i] && mid < lb.lambdas[i + 1])
            .collect();
        if inserts.is_empty() || lb.len() >= max_points {
            return Ok(lb);
        }
        let room = max_points - lb.len();
        let inserts = &inserts[..inserts.len().min(room)];
        let spec = lb.spec;
        let solved: Vec<Minimum> = inserts
            .par_iter()
            .map(|&(i, mid)| linear_bound_numeric_with(&spec, mid, Some(lb.minimizers[i]), &opts))
            .collect::<Result<_>>()?;
        let mut next = LinearBound {
            spec,
            lambdas: Vec::with_capacity(lb.len() + inserts.len()),
            values: Vec::with_capacity(lb.len() + inserts.len()),
            minimizers: Vec::with_capacity(lb.len() + inserts.len()),
            source: Source::Numeric,
        };
        let mut pending = inserts.iter().zip(&solved).peekable();
        for k in 0..lb.len() {
            next.lambdas.push(lb.lambdas[k]);
            next.values.push(lb.values[k]);
            next.minimizers.push(lb.minimizers[k]);
            if let Some((&(i, mid), m)) = pending.peek() {
                if i == k {
                    next.lambdas.push(mid);
                    next.values.push(m.value);
                    next.minimizers.push(m.pair);
                    pending.next();
                }
            }
        }
        lb = next;
    }
}

/// `max over grid points of L(lambda) + lambda t`.
pub fn legendre_transform(lb: &LinearBound, t: f64) -> f64 {
    lb.lambdas.iter().zip(&lb.values).map(|(l, v)| v + l * t).fold(f64::NEG_INFINITY, f64::max)
}

/// The line `intercept + slope * T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tangent {
    pub slope: f64,
    pub intercept: f64,
}

impl Tangent {
    pub fn at(&self, t: f64) -> f64 {
        self.intercept + self.slope * t
    }
}

/// Upper envelope of tangents on `[0, 1]`, kept as the tangents that appear
/// on it, in increasing slope, and the crossing points between neighbours.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chain {
    tangents: Vec<Tangent>,
    breaks: Vec<f64>,
}

impl Chain {
    pub fn from_tangents(mut lines: Vec<Tangent>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::InvalidGrid("a chain needs at least one tangent".into()));
        }
        if lines.iter().any(|l| !l.slope.is_finite() || !l.intercept.is_finite()) {
            return Err(Error::InvalidGrid("tangents must be finite".into()));
        }
        lines.sort_by(|a, b| a.slope.total_cmp(&b.slope).then(b.intercept.total_cmp(&a.intercept)));
        lines.dedup_by(|later, earlier| later.slope == earlier.slope);
        let cross = |a: &Tangent, b: &Tangent| (a.intercept - b.intercept) / (b.slope - a.slope);

        let mut hull: Vec<Tangent> = Vec::with_capacity(lines.len());
        for line in lines {
            while let Some(&last) = hull.last() {
                // `last` never wins on [0, 1] past the new line's start.
                if cross(&last, &line) <= 0.0 {
                    hull.pop();
                    continue;
                }
                if hull.len() >= 2 && cross(&hull[hull.len() - 2], &line) <= cross(&hull[hull.len() - 2], &last) {
                    hull.pop();
                    continue;
                }
                break;
            }
            if hull.last().is_none_or(|last| cross(last, &line) < 1.0) {
                hull.push(line);
            }
        }
        let breaks = hull.windows(2).map(|w| cross(&w[0], &w[1])).collect();
        Ok(Chain { tangents: hull, breaks })
    }

    pub fn tangents(&self) -> &[Tangent] {
        &self.tangents
    }

    pub fn len(&self) -> usize {
        self.tangents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangents.is_empty()
    }

    fn active(&self, t: f64) -> &Tangent {
        let k = self.breaks.partition_point(|&b| b < t);
        &self.tangents[k]
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.active(t).at(t)
    }

    /// Right derivative.
    pub fn slope(&self, t: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= t);
        self.tangents[k].slope
    }

    /// Vertices of the chain on `[0, 1]`: both ends and every crossing.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        std::iter::once(0.0)
            .chain(self.breaks.iter().copied())
            .chain(std::iter::once(1.0))
            .map(|t| (t, self.eval(t)))
            .collect()
    }

    /// `min over vertices of B(T) - lambda T`, the linear bound recovered from
    /// the chain.
    pub fn conjugate(&self, lambda: f64) -> f64 {
        self.vertices().into_iter().map(|(t, b)| b - lambda * t).fold(f64::INFINITY, f64::min)
    }
}

/// A convex lower bound `T -> B(T)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvexBound {
    /// Closed form over the whole range.
    ClosedForm { spec: DivergenceSpec },
    /// Polygonal chain of numeric tangents. Its value at `T = 1` is finite and
    /// only a lower bound there.
    Chain { spec: DivergenceSpec, chain: Chain },
    /// `0` on `[0, eps]`, `inner(T - eps)` beyond.
    Shifted { inner: Box<ConvexBound>, epsilon: f64 },
}

/// Step of the centered finite difference used where no closed-form slope
/// exists.
pub const SLOPE_STEP: f64 = 1e-6;

impl ConvexBound {
    /// Closed form if the family has one on all of `[0, 1]`.
    pub fn closed_form(spec: &DivergenceSpec) -> Result<Self> {
        if !PiecewiseBound::for_spec(spec)?.is_complete() {
            return Err(Error::Unsupported(format!("closed-form convex bound for {spec} on [0, 1]")));
        }
        Ok(ConvexBound::ClosedForm { spec: *spec })
    }

    pub fn spec(&self) -> DivergenceSpec {
        match self {
            ConvexBound::ClosedForm { spec } | ConvexBound::Chain { spec, .. } => *spec,
            ConvexBound::Shifted { inner, epsilon } => match inner.spec() {
                DivergenceSpec::Max => DivergenceSpec::SmoothedMax { epsilon: *epsilon },
                other => other,
            },
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ConvexBound::ClosedForm { spec } => {
                PiecewiseBound::for_spec(spec).ok().and_then(|p| p.eval(t).value()).unwrap_or(f64::NAN)
            }
            ConvexBound::Chain { chain, .. } => chain.eval(t),
            ConvexBound::Shifted { inner, epsilon } => smooth_convex(inner, *epsilon, t),
        }
    }

    /// `dB/dT`: closed form when available, else a centered difference.
    pub fn slope(&self, t: f64) -> f64 {
        match self {
            ConvexBound::ClosedForm { spec } => {
                PiecewiseBound::for_spec(spec).ok().and_then(|p| p.slope(t).value()).unwrap_or(f64::NAN)
            }
            ConvexBound::Chain { .. } => {
                let h = SLOPE_STEP;
                (self.eval(t + h) - self.eval(t - h)) / (2.0 * h)
            }
            ConvexBound::Shifted { inner, epsilon } => {
                if t <= *epsilon {
                    0.0
                } else {
                    inner.slope(t - epsilon)
                }
            }
        }
    }

    /// `L(lambda) = inf_T B(T) - lambda T`.
    pub fn intercept(&self, lambda: f64) -> Result<f64> {
        match self {
            ConvexBound::ClosedForm { spec } => match analytic::linear_bound_analytic(spec, lambda)? {
                Analytic::Value(p) => Ok(p.value),
                Analytic::NotAvailable => Err(Error::Unsupported(format!("closed-form linear bound of {spec}"))),
            },
            ConvexBound::Chain { chain, .. } => Ok(chain.conjugate(lambda)),
            ConvexBound::Shifted { inner, epsilon } => Ok(inner.intercept(lambda)? - lambda * epsilon),
        }
    }
}

/// Chain of the tangents of `lb`, dominated tangents pruned.
pub fn build_chain(lb: &LinearBound) -> Result<ConvexBound> {
    Ok(ConvexBound::Chain { spec: lb.spec, chain: Chain::from_tangents(lb.tangents())? })
}

/// Gap tolerance used when refining numeric chains.
pub const CHAIN_TOL: f64 = 1e-5;
/// Upper limit on slopes in a refined chain.
pub const CHAIN_MAX_POINTS: usize = 20_000;

/// Numeric chain on the default grid, refined to [`CHAIN_TOL`]. The smoothed
/// max divergence is the shifted chain of the max divergence.
pub fn numeric_convex_bound(spec: &DivergenceSpec) -> Result<ConvexBound> {
    numeric_convex_bound_with(spec, &LambdaGrid::default(), CHAIN_TOL)
}

pub fn numeric_convex_bound_with(spec: &DivergenceSpec, grid: &LambdaGrid, tol: f64) -> Result<ConvexBound> {
    spec.validate()?;
    if let DivergenceSpec::SmoothedMax { epsilon } = *spec {
        if epsilon > 0.0 {
            let inner = numeric_convex_bound_with(&DivergenceSpec::Max, grid, tol)?;
            return Ok(ConvexBound::Shifted { inner: Box::new(inner), epsilon });
        }
    }
    let lb = build_linear_bound_parallel(spec, grid)?;
    build_chain(&refine_linear_bound(&lb, tol, CHAIN_MAX_POINTS)?)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    Ok(())
}

/// `lambda_eps = B'(eps)` and `lambda_max = B'(1 - eps)` of the unsmoothed
/// bound.
pub fn smoothing_slopes(base: &ConvexBound, epsilon: f64) -> Result<(f64, f64)> {
    check_epsilon(epsilon)?;
    Ok((base.slope(epsilon), base.slope(1.0 - epsilon)))
}

/// Smoothed linear bound in the piecewise form: `0` up to `lambda_eps`,
/// `L(lambda) - lambda eps` up to `lambda_max`, undefined beyond.
///
/// The zero branch is not the intercept of the smoothed convex bound: the
/// tangent of slope `lambda` to `smooth_convex` passes through `(eps, 0)` and
/// has intercept `-lambda eps`. See [`smooth_linear_conjugate`].
pub fn smooth_linear(base: &ConvexBound, epsilon: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (lambda_eps, lambda_max) = smoothing_slopes(base, epsilon)?;
    if lambda > lambda_max {
        return Err(Error::OutOfDomain { lambda, lambda_max });
    }
    if lambda <= lambda_eps {
        return Ok(0.0);
    }
    Ok(base.intercept(lambda)? - lambda * epsilon)
}

/// `inf_T smooth_convex(T) - lambda T = L(lambda) - lambda eps`, defined for
/// every `lambda >= 0`.
pub fn smooth_linear_conjugate(base: &ConvexBound, epsilon: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_epsilon(epsilon)?;
    Ok(base.intercept(lambda)? - lambda * epsilon)
}

/// `0` for `t <= eps`, `base(t - eps)` beyond.
pub fn smooth_convex(base: &ConvexBound, epsilon: f64, t: f64) -> f64 {
    if t <= epsilon {
        0.0
    } else {
        base.eval(t - epsilon)
    }
}

/// `B(T)` at a single point by golden-section search over `lambda` of the
/// concave `L(lambda) + lambda T`, each `L` solved numerically. Returns `+inf`
/// at `T = 1` when the objective keeps increasing.
pub fn pointwise_bound(spec: &DivergenceSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("trace distance must lie in [0, 1], got {t}"));
    }
    if let DivergenceSpec::SmoothedMax { epsilon } = *spec {
        if epsilon > 0.0 {
            return if t <= epsilon { Ok(0.0) } else { pointwise_bound(&DivergenceSpec::Max, t - epsilon) };
        }
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let opts = SolverOptions::default();
    let g =
        |lambda: f64| -> Result<f64> { Ok(linear_bound_numeric_with(spec, lambda, None, &opts)?.value + lambda * t) };

    const LAMBDA_CAP: f64 = 1e12;
    let (mut a, mut b) = (0.0, 0.01);
    let mut gb = g(b)?;
    let mut c = 2.0 * b;
    let mut gc = g(c)?;
    while gc >= gb {
        if c >= LAMBDA_CAP {
            return Ok(if t >= 1.0 { f64::INFINITY } else { gc });
        }
        a = b;
        b = c;
        gb = gc;
        c *= 2.0;
        gc = g(c)?;
    }
    // Maximum lies in [a, c].
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, c);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1)?, g(x2)?);
    let mut best = gb.max(g1).max(g2);
    while hi - lo > 1e-10 * hi.max(1.0) {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1)?;
        }
        best = best.max(g1).max(g2);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn zero_slope_is_trivial() {
        for spec in [DivergenceSpec::Umegaki, DivergenceSpec::Max, DivergenceSpec::NeymanChi2] {
            let m = linear_bound_numeric(&spec, 0.0).unwrap();
            assert_eq!(m.value, 0.0);
            assert_eq!(m.pair.r(), m.pair.s());
        }
    }

    #[test]
    fn numeric_examples() {
        let m = linear_bound_numeric(&DivergenceSpec::Max, 1.0 / LN_2).unwrap();
        assert_abs_diff_eq!(m.value, 0.0, epsilon = 1e-12);
        let c = linear_bound_numeric(&DivergenceSpec::Collision, 2.0 / LN_2).unwrap();
        assert_abs_diff_eq!(c.pair.r(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(c.pair.s(), 0.5, epsilon = 1e-6);
        let u = linear_bound_numeric(&DivergenceSpec::Umegaki, 1.0).unwrap();
        let closed = analytic::linear_bound_analytic(&DivergenceSpec::Umegaki, 1.0).unwrap().value().unwrap();
        assert_abs_diff_eq!(u.value, closed.value, epsilon = 1e-12);
        assert_abs_diff_eq!(u.pair.r(), 2.0 * (1.0 - LN_2), epsilon = 1e-6);
        assert_abs_diff_eq!(u.pair.s(), 1.0 / LN_2 - 1.0, epsilon = 1e-6);
    }

    #[test]
    fn build_examples() {
        let grid = LambdaGrid::Explicit { points: vec![0.0, 1.0 / LN_2, 2.0 / LN_2] };
        let lb = build_linear_bound(&DivergenceSpec::Max, &grid).unwrap();
        let expected = [0.0, 0.0, 1.0 - 1.0 / LN_2];
        for (v, e) in lb.values.iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        let grid = LambdaGrid::Explicit { points: vec![0.0, 2.0, 4.0, 6.0] };
        let chi = build_linear_bound(&DivergenceSpec::NeymanChi2, &grid).unwrap();
        assert_abs_diff_eq!(chi.values[2], -1.0, epsilon = 1e-12);
        let single =
            build_linear_bound(&DivergenceSpec::Fidelity, &LambdaGrid::Explicit { points: vec![0.0] }).unwrap();
        assert_eq!(single.values, vec![0.0]);
        assert!(LambdaGrid::Explicit { points: vec![1.0, 2.0] }.points().is_err());
        assert!(LambdaGrid::Explicit { points: vec![0.0, 2.0, 2.0] }.points().is_err());
    }

    #[test]
    fn chain_pruning() {
        let zero = Chain::from_tangents(vec![Tangent { slope: 0.0, intercept: 0.0 }]).unwrap();
        assert_eq!(zero.eval(0.7), 0.0);
        let two =
            Chain::from_tangents(vec![Tangent { slope: 1.0, intercept: 0.0 }, Tangent { slope: 0.5, intercept: -1.0 }])
                .unwrap();
        assert_eq!(two.len(), 1);
        let three = Chain::from_tangents(vec![
            Tangent { slope: 0.0, intercept: 0.0 },
            Tangent { slope: 2.0, intercept: -0.5 },
            Tangent { slope: 1.0, intercept: -0.3 },
            Tangent { slope: 4.0, intercept: -2.0 },
        ])
        .unwrap();
        // slope 1 crosses 0 at 0.3, slope 2 crosses slope 1 at 0.2 < 0.3: slope 1 is dominated.
        assert_eq!(three.len(), 3);
        assert_abs_diff_eq!(three.eval(0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(three.eval(0.9), 1.6, epsilon = 1e-15);
        assert_abs_diff_eq!(three.conjugate(2.0), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn legendre_on_max_grid() {
        let grid = LambdaGrid::Geometric { min: 1e-2, max: 1e3, n: 200 };
        let lb = build_linear_bound_analytic(&DivergenceSpec::Max, &grid).unwrap();
        assert_eq!(legendre_transform(&lb, 0.0), 0.0);
        assert!((legendre_transform(&lb, 0.5) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn smoothing_examples() {
        let base = ConvexBound::closed_form(&DivergenceSpec::Max).unwrap();
        assert_eq!(smooth_linear(&base, 0.2, 1.0).unwrap(), 0.0);
        let v = smooth_linear(&base, 0.2, 2.0).unwrap();
        assert_abs_diff_eq!(v, 1.0 / LN_2 - 2.0 + (2.0 * LN_2).log2() - 0.4, epsilon = 1e-14);
        assert_eq!(smooth_linear(&base, 0.2, 0.0).unwrap(), 0.0);
        assert!(matches!(smooth_linear(&base, 0.2, 10.0), Err(Error::OutOfDomain { .. })));
        let (le, lm) = smoothing_slopes(&base, 0.2).unwrap();
        assert_abs_diff_eq!(le, 1.0 / (LN_2 * 0.8), epsilon = 1e-12);
        assert_abs_diff_eq!(lm, 1.0 / (LN_2 * 0.2), epsilon = 1e-12);
        assert_eq!(smooth_convex(&base, 0.2, 0.15), 0.0);
        assert_abs_diff_eq!(smooth_convex(&base, 0.2, 0.7), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(smooth_convex(&base, 0.2, 1.0), 5f64.log2(), epsilon = 1e-14);
        assert_abs_diff_eq!(smooth_linear_conjugate(&base, 0.2, 1.0).unwrap(), -0.2, epsilon = 1e-15);
    }

    #[test]
    fn pointwise_matches_closed_forms() {
        let v = pointwise_bound(&DivergenceSpec::Max, 0.5).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
        let c = pointwise_bound(&DivergenceSpec::Collision, 0.25).unwrap();
        assert_abs_diff_eq!(c, 1.25f64.log2(), epsilon = 1e-10);
        assert!(pointwise_bound(&DivergenceSpec::Max, 1.0).unwrap().is_infinite());
    }
}
