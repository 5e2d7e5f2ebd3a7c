//! Closed-form linear and convex bounds, their breakpoints, and the
//! parametrized relative-entropy curve.
//!
//! Everything is in bits except the Hellinger family, whose values are plain
//! (dimensionless) numbers; the Hellinger `alpha = 1` limit is the relative
//! entropy in nats.

use std::f64::consts::{LN_2, LOG2_E};

use serde::Serialize;

use crate::catalog::{BinaryPair, DivergenceSpec};
use crate::error::{Error, Result};

/// A closed-form result, or a marker that the family has no closed form at
/// this argument and a numeric solve is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Analytic<T> {
    Value(T),
    NotAvailable,
}

impl<T> Analytic<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Analytic::Value(v) => Some(v),
            Analytic::NotAvailable => None,
        }
    }

    pub fn is_available(&self) -> bool {
        matches!(self, Analytic::Value(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Analytic<U> {
        match self {
            Analytic::Value(v) => Analytic::Value(f(v)),
            Analytic::NotAvailable => Analytic::NotAvailable,
        }
    }
}

/// Value of the optimal linear bound at one slope, with the binary pair that
/// attains it when that pair is known in closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPoint {
    pub value: f64,
    pub minimizer: Option<BinaryPair>,
}

/// One closed-form expression of a convex bound in the trace distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Formula {
    /// No closed form; evaluate numerically.
    Numeric,
    Zero,
    /// `4 T^2`
    Chi2Quadratic,
    /// `T / (1 - T)`
    Chi2Odds,
    /// `(1 - (1 - T)^(1 - alpha)) / (1 - alpha)`
    HellingerRight {
        alpha: f64,
    },
    /// `log(1 / (1 - T))`
    LogInverseGap,
    /// `log(1 / (1 - T^2))`
    FidelityLog,
    /// `log(1 + 4 T^2)`
    CollisionLeft,
    /// `log(1 / (1 - (T - eps)))`
    ShiftedLogInverseGap {
        epsilon: f64,
    },
    /// Parametrized relative-entropy curve, inverted numerically, times `scale`.
    RelativeEntropyCurve {
        scale: f64,
    },
}

impl Formula {
    pub fn value(self, t: f64) -> Analytic<f64> {
        let v = match self {
            Formula::Numeric => return Analytic::NotAvailable,
            Formula::Zero => 0.0,
            Formula::Chi2Quadratic => 4.0 * t * t,
            Formula::Chi2Odds => {
                if t >= 1.0 {
                    f64::INFINITY
                } else {
                    t / (1.0 - t)
                }
            }
            Formula::HellingerRight { alpha } => {
                if t >= 1.0 {
                    f64::INFINITY
                } else {
                    (1.0 - (1.0 - t).powf(1.0 - alpha)) / (1.0 - alpha)
                }
            }
            Formula::LogInverseGap => {
                if t >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-t).ln_1p() * LOG2_E
                }
            }
            Formula::FidelityLog => {
                if t >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-t * t).ln_1p() * LOG2_E
                }
            }
            Formula::CollisionLeft => (4.0 * t * t).ln_1p() * LOG2_E,
            Formula::ShiftedLogInverseGap { epsilon } => -(epsilon - t).ln_1p() * LOG2_E,
            Formula::RelativeEntropyCurve { scale } => scale * umegaki_convex_bound(t),
        };
        Analytic::Value(v)
    }

    /// Derivative in `T`.
    pub fn slope(self, t: f64) -> Analytic<f64> {
        let v = match self {
            Formula::Numeric => return Analytic::NotAvailable,
            Formula::Zero => 0.0,
            Formula::Chi2Quadratic => 8.0 * t,
            Formula::Chi2Odds => (1.0 - t).powi(-2),
            Formula::HellingerRight { alpha } => (1.0 - t).powf(-alpha),
            Formula::LogInverseGap => 1.0 / ((1.0 - t) * LN_2),
            Formula::FidelityLog => 2.0 * t / ((1.0 - t * t) * LN_2),
            Formula::CollisionLeft => 8.0 * t / ((1.0 + 4.0 * t * t) * LN_2),
            Formula::ShiftedLogInverseGap { epsilon } => 1.0 / ((1.0 - t + epsilon) * LN_2),
            // Along the curve the tangent slope is the parameter itself.
            Formula::RelativeEntropyCurve { scale } => scale * umegaki_invert(t),
        };
        Analytic::Value(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub formula: Formula,
}

/// Convex bound as consecutive pieces covering `[0, 1]`. At a shared
/// endpoint the right-hand piece is used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseBound {
    pub spec: DivergenceSpec,
    pub pieces: Vec<Piece>,
}

impl PiecewiseBound {
    pub fn for_spec(spec: &DivergenceSpec) -> Result<Self> {
        spec.validate()?;
        let spec = *spec;
        let whole = |formula| vec![Piece { lo: 0.0, hi: 1.0, formula }];
        let split = |at: f64, left, right| {
            vec![Piece { lo: 0.0, hi: at, formula: left }, Piece { lo: at, hi: 1.0, formula: right }]
        };
        let pieces = match spec.canonical() {
            DivergenceSpec::Hellinger { alpha: 1.0 } => whole(Formula::RelativeEntropyCurve { scale: LN_2 }),
            DivergenceSpec::Hellinger { alpha } => {
                split(1.0 / alpha, Formula::Numeric, Formula::HellingerRight { alpha })
            }
            DivergenceSpec::NeymanChi2 | DivergenceSpec::PearsonChi2 => {
                split(0.5, Formula::Chi2Quadratic, Formula::Chi2Odds)
            }
            DivergenceSpec::Renyi { alpha } if alpha > 1.0 => {
                split(1.0 / alpha, Formula::Numeric, Formula::LogInverseGap)
            }
            DivergenceSpec::Renyi { .. } => whole(Formula::Numeric),
            DivergenceSpec::Fidelity => whole(Formula::FidelityLog),
            DivergenceSpec::Umegaki => whole(Formula::RelativeEntropyCurve { scale: 1.0 }),
            DivergenceSpec::Collision => split(0.5, Formula::CollisionLeft, Formula::LogInverseGap),
            DivergenceSpec::Max => whole(Formula::LogInverseGap),
            DivergenceSpec::SmoothedMax { epsilon } => {
                split(epsilon, Formula::Zero, Formula::ShiftedLogInverseGap { epsilon })
            }
        };
        Ok(PiecewiseBound { spec, pieces })
    }

    fn piece(&self, t: f64) -> &Piece {
        self.pieces.iter().rev().find(|p| t >= p.lo).unwrap_or(&self.pieces[0])
    }

    pub fn eval(&self, t: f64) -> Analytic<f64> {
        self.piece(t).formula.value(t)
    }

    /// Derivative in `T`; at a breakpoint this is the right derivative.
    pub fn slope(&self, t: f64) -> Analytic<f64> {
        self.piece(t).formula.slope(t)
    }

    /// Interior `T` breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.lo).collect()
    }

    /// Whether a closed form covers the whole range `[0, 1]`.
    pub fn is_complete(&self) -> bool {
        self.pieces.iter().all(|p| p.formula != Formula::Numeric)
    }

    /// Subrange of `[0, 1]` with a closed form, if any.
    pub fn validity_range(&self) -> Option<(f64, f64)> {
        let covered: Vec<&Piece> = self.pieces.iter().filter(|p| p.formula != Formula::Numeric).collect();
        Some((covered.first()?.lo, covered.last()?.hi))
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterDomain(format!("trace distance must lie in [0, 1], got {t}")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) {
        return Err(Error::ParameterDomain(format!("lambda must be nonnegative, got {lambda}")));
    }
    Ok(())
}

/// Closed-form convex bound `B(T)`. Returns `+inf` where it diverges at
/// `T = 1`.
pub fn convex_bound_analytic(spec: &DivergenceSpec, t: f64) -> Result<Analytic<f64>> {
    check_t(t)?;
    Ok(PiecewiseBound::for_spec(spec)?.eval(t))
}

/// Closed-form derivative `B'(T)`.
pub fn convex_bound_slope_analytic(spec: &DivergenceSpec, t: f64) -> Result<Analytic<f64>> {
    check_t(t)?;
    Ok(PiecewiseBound::for_spec(spec)?.slope(t))
}

/// `lambda_crit` where the minimizer of the linear problem reaches the
/// `r = 1` edge, for families with a boundary piece.
pub fn critical_lambda(spec: &DivergenceSpec) -> Option<f64> {
    match spec.canonical() {
        DivergenceSpec::Hellinger { alpha } if alpha > 1.0 => Some((alpha / (alpha - 1.0)).powf(alpha)),
        DivergenceSpec::NeymanChi2 | DivergenceSpec::PearsonChi2 => Some(4.0),
        DivergenceSpec::Renyi { alpha } if alpha > 1.0 => Some(alpha / ((alpha - 1.0) * LN_2)),
        DivergenceSpec::Collision => Some(2.0 / LN_2),
        _ => None,
    }
}

/// `1/ln2 - lambda + log(lambda ln 2)`, the boundary solution shared by the
/// Rényi family; zero below `1/ln 2`, where `r = s` is optimal.
fn max_linear(lambda: f64) -> LinearPoint {
    if lambda * LN_2 <= 1.0 {
        return LinearPoint { value: 0.0, minimizer: Some(BinaryPair::new_unchecked(0.5, 0.5)) };
    }
    LinearPoint {
        value: 1.0 / LN_2 - lambda + (lambda * LN_2).log2(),
        minimizer: Some(BinaryPair::new_unchecked(1.0, 1.0 / (lambda * LN_2))),
    }
}

fn umegaki_linear(lambda: f64) -> LinearPoint {
    if lambda == 0.0 {
        return LinearPoint { value: 0.0, minimizer: Some(BinaryPair::new_unchecked(0.5, 0.5)) };
    }
    let c = curve_point(lambda);
    LinearPoint { value: c.d - lambda * c.t_dist, minimizer: Some(BinaryPair::new_unchecked(c.r_star, c.s_star)) }
}

/// Closed-form optimal linear bound `L(lambda)`, with `NotAvailable` on the
/// ranges that need a numeric solve. For the smoothed max divergence this is
/// the shifted formula, defined only up to `lambda_max = 1/(eps ln 2)`.
pub fn linear_bound_analytic(spec: &DivergenceSpec, lambda: f64) -> Result<Analytic<LinearPoint>> {
    spec.validate()?;
    check_lambda(lambda)?;
    let crit = critical_lambda(spec);
    let point = match spec.canonical() {
        DivergenceSpec::Hellinger { alpha: 1.0 } => {
            let p = umegaki_linear(lambda / LN_2);
            LinearPoint { value: LN_2 * p.value, minimizer: p.minimizer }
        }
        DivergenceSpec::Hellinger { alpha } => {
            if lambda < crit.unwrap_or(f64::INFINITY) {
                return Ok(Analytic::NotAvailable);
            }
            LinearPoint {
                value: (1.0 + lambda * (alpha - 1.0 - alpha * lambda.powf(-1.0 / alpha))) / (1.0 - alpha),
                minimizer: Some(BinaryPair::new_unchecked(1.0, lambda.powf(-1.0 / alpha))),
            }
        }
        s @ (DivergenceSpec::NeymanChi2 | DivergenceSpec::PearsonChi2) => {
            let (value, r, q) = if lambda <= 4.0 {
                (-lambda * lambda / 16.0, 0.5 + lambda / 8.0, 0.5)
            } else {
                (-(lambda.sqrt() - 1.0).powi(2), 1.0, 1.0 / lambda.sqrt())
            };
            // Pearson is Neyman with the arguments swapped; mirror back into s <= r.
            let pair = if s == DivergenceSpec::NeymanChi2 {
                BinaryPair::new_unchecked(r, q)
            } else {
                BinaryPair::new_unchecked(1.0 - q, 1.0 - r)
            };
            LinearPoint { value, minimizer: Some(pair) }
        }
        DivergenceSpec::Renyi { alpha } if alpha > 1.0 => {
            if lambda < crit.unwrap_or(f64::INFINITY) {
                return Ok(Analytic::NotAvailable);
            }
            max_linear(lambda)
        }
        DivergenceSpec::Renyi { .. } => return Ok(Analytic::NotAvailable),
        DivergenceSpec::Fidelity => {
            let x = lambda * LN_2;
            let w = x.hypot(1.0);
            let t = if x == 0.0 { 0.0 } else { x / (1.0 + w) };
            LinearPoint {
                value: (1.0 - w + ((1.0 + w) / 2.0).ln()) / LN_2,
                minimizer: Some(BinaryPair::new_unchecked((1.0 + t) / 2.0, (1.0 - t) / 2.0)),
            }
        }
        DivergenceSpec::Umegaki => umegaki_linear(lambda),
        DivergenceSpec::Collision => {
            let x = lambda * LN_2;
            if x < 2.0 {
                let w = (4.0 - x * x).sqrt();
                let r = if x == 0.0 { 0.5 } else { (2.0 + x - w) / (2.0 * x) };
                LinearPoint {
                    value: (-2.0 + w - 2.0 * ((2.0 + w) / 4.0).ln()) / (2.0 * LN_2),
                    minimizer: Some(BinaryPair::new_unchecked(r.min(1.0), 0.5)),
                }
            } else {
                max_linear(lambda)
            }
        }
        DivergenceSpec::Max => max_linear(lambda),
        DivergenceSpec::SmoothedMax { epsilon } => {
            let lambda_eps = 1.0 / (LN_2 * (1.0 - epsilon));
            let lambda_max = 1.0 / (LN_2 * epsilon);
            if lambda > lambda_max {
                return Err(Error::OutOfDomain { lambda, lambda_max });
            }
            if lambda <= lambda_eps {
                LinearPoint { value: 0.0, minimizer: None }
            } else {
                LinearPoint { value: max_linear(lambda).value - lambda * epsilon, minimizer: None }
            }
        }
    };
    Ok(Analytic::Value(point))
}

/// Slope and `T` breakpoints of a family's closed forms.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Breakpoints {
    /// Slopes where the linear bound changes formula (`lambda_crit`, or
    /// `lambda_eps` and `lambda_max` for the smoothed max divergence).
    pub lambdas: Vec<f64>,
    /// Trace distances where the convex bound changes formula.
    pub ts: Vec<f64>,
}

pub fn breakpoints(spec: &DivergenceSpec) -> Result<Breakpoints> {
    spec.validate()?;
    let ts = PiecewiseBound::for_spec(spec)?.breakpoints();
    let lambdas = match spec.canonical() {
        DivergenceSpec::SmoothedMax { epsilon } => {
            vec![1.0 / (LN_2 * (1.0 - epsilon)), 1.0 / (LN_2 * epsilon)]
        }
        _ => critical_lambda(spec).into_iter().collect(),
    };
    Ok(Breakpoints { lambdas, ts })
}

/// A point of the parametrized relative-entropy bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParametrizedPoint {
    /// Curve parameter; equals the tangent slope at this point.
    pub t: f64,
    /// Trace distance `T(t)`.
    #[serde(rename = "T")]
    pub t_dist: f64,
    /// Bound value `D(t)` in bits.
    #[serde(rename = "D")]
    pub d: f64,
}

struct CurvePoint {
    t_dist: f64,
    d: f64,
    r_star: f64,
    s_star: f64,
}

/// Below this value of `u = t ln 2` the curve is evaluated by its series.
const SERIES_CUTOFF: f64 = 0.05;

fn curve_point(t: f64) -> CurvePoint {
    if t * LN_2 < SERIES_CUTOFF {
        curve_series(t)
    } else {
        curve_direct(t)
    }
}

fn curve_series(t: f64) -> CurvePoint {
    let u = t * LN_2;
    {
        let u2 = u * u;
        let t_dist = u * (0.25 + u2 * (-1.0 / 144.0 + u2 * (1.0 / 4320.0 - u2 / 134_400.0)));
        let d = u2 * (0.125 + u2 * (-1.0 / 192.0 + u2 * (1.0 / 5184.0 - u2 / 153_600.0))) * LOG2_E;
        let r_star = 0.5 + u * (1.0 / 6.0 + u2 * (-1.0 / 180.0 + u2 * (1.0 / 5040.0 - u2 / 151_200.0)));
        CurvePoint { t_dist, d, r_star, s_star: r_star - t_dist }
    }
}

fn curve_direct(t: f64) -> CurvePoint {
    let u = t * LN_2;
    // Written with e = 2^-t and m = 1 - e so nothing overflows for large t.
    let e = (-u).exp();
    let m = -(-u).exp_m1();
    let a = m - u * e; // (2^t - 1 - u) 2^-t
    let b = u - m; // (u 2^t - 2^t + 1) 2^-t
    let t_dist = a * b / (u * m * m);
    let one_minus_r = b * e / (m * m);
    let r_star = 1.0 - one_minus_r;
    let s_star = a / (u * m);
    let d = -t * one_minus_r + (u / m).log2();
    CurvePoint { t_dist, d, r_star, s_star }
}

/// The parametrized relative-entropy bound `(T(t), D(t))`; `t = 0` gives the
/// limit point `(0, 0)`. Negative or non-finite `t` is clamped into
/// `[0, inf)`.
pub fn umegaki_parametrized(t: f64) -> ParametrizedPoint {
    let t = if t.is_nan() { 0.0 } else { t.max(0.0) };
    if t == 0.0 {
        return ParametrizedPoint { t, t_dist: 0.0, d: 0.0 };
    }
    if t.is_infinite() {
        return ParametrizedPoint { t, t_dist: 1.0, d: f64::INFINITY };
    }
    let c = curve_point(t);
    ParametrizedPoint { t, t_dist: c.t_dist, d: c.d }
}

/// Curve parameter `t` with `T(t) = t_dist`, by bisection. Returns `inf` for
/// `t_dist >= 1`.
pub fn umegaki_invert(t_dist: f64) -> f64 {
    if !(t_dist > 0.0) {
        return 0.0;
    }
    if t_dist >= 1.0 {
        return f64::INFINITY;
    }
    let mut lo = 1e-9;
    if curve_point(lo).t_dist >= t_dist {
        // Below the bracket T is linear in t to machine precision.
        return t_dist * 4.0 / LN_2;
    }
    let mut hi = 1.0;
    while curve_point(hi).t_dist < t_dist {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if curve_point(mid).t_dist < t_dist {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Optimal convex bound of the relative entropy (bits) at trace distance
/// `t_dist`, from the inverted parametrized curve.
pub fn umegaki_convex_bound(t_dist: f64) -> f64 {
    if !(t_dist > 0.0) {
        return 0.0;
    }
    if t_dist >= 1.0 {
        return f64::INFINITY;
    }
    umegaki_parametrized(umegaki_invert(t_dist)).d
}

/// Pinsker's bound `(2 / ln 2) T^2` in bits.
pub fn pinsker(t_dist: f64) -> f64 {
    2.0 / LN_2 * t_dist * t_dist
}
