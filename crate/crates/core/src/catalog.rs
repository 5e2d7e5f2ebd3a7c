//! Divergence families and their binary (two-outcome classical) versions.
//!
//! A binary pair `(r, s)` stands for the diagonal qubit states
//! `diag(r, 1 - r)` and `diag(s, 1 - s)`. Every formula here uses base-2
//! logarithms, with the conventions `0 log(0 / x) = 0` and `0^0 = 1`.
//! A failed support condition yields `+inf` rather than an error.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{domain, Result};

/// Nonnegative extended real: a finite value or `+inf`, never NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XReal(f64);

impl XReal {
    pub const ZERO: XReal = XReal(0.0);
    pub const INFINITY: XReal = XReal(f64::INFINITY);

    /// Wraps `v`, clamping round-off negatives to zero. Returns `None` for NaN
    /// and `-inf`.
    pub fn new(v: f64) -> Option<XReal> {
        if v.is_nan() || v == f64::NEG_INFINITY {
            None
        } else {
            Some(XReal(v.max(0.0)))
        }
    }

    pub(crate) fn from_raw(v: f64) -> XReal {
        debug_assert!(!v.is_nan(), "divergence evaluated to NaN");
        XReal(if v > 0.0 { v } else { 0.0 })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl Eq for XReal {}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl Serialize for XReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawXReal {
    Number(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for XReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = match RawXReal::deserialize(deserializer)? {
            RawXReal::Number(v) => v,
            RawXReal::Text(t) if t == "inf" => f64::INFINITY,
            RawXReal::Text(t) => {
                return Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}")))
            }
        };
        XReal::new(v).ok_or_else(|| serde::de::Error::custom(format!("{v} is not a divergence value")))
    }
}

#[derive(Deserialize)]
struct RawPair {
    r: f64,
    s: f64,
}

impl TryFrom<RawPair> for BinaryPair {
    type Error = crate::error::Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        BinaryPair::new(raw.r, raw.s)
    }
}

/// A point of the unit square. The ordering `s <= r` is not required here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct BinaryPair {
    r: f64,
    s: f64,
}

impl BinaryPair {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&s) {
            return domain(format!("binary pair ({r}, {s}) outside the unit square"));
        }
        Ok(BinaryPair { r, s })
    }

    pub(crate) fn new_unchecked(r: f64, s: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&s));
        BinaryPair { r, s }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Trace distance of the two diagonal states, `|r - s|`.
    pub fn trace_distance(&self) -> f64 {
        (self.r - self.s).abs()
    }

    /// Image under `(r, s) -> (1 - r, 1 - s)`, which leaves every catalog
    /// divergence unchanged.
    pub fn mirrored(&self) -> Self {
        BinaryPair { r: 1.0 - self.r, s: 1.0 - self.s }
    }
}

/// Divergence family without parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    HellingerAlpha,
    NeymanChi2,
    PearsonChi2,
    RenyiAlpha,
    Fidelity,
    Umegaki,
    Collision,
    Max,
    SmoothedMax,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::HellingerAlpha,
        Family::NeymanChi2,
        Family::PearsonChi2,
        Family::RenyiAlpha,
        Family::Fidelity,
        Family::Umegaki,
        Family::Collision,
        Family::Max,
        Family::SmoothedMax,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Family::HellingerAlpha => "hellinger",
            Family::NeymanChi2 => "neyman-chi2",
            Family::PearsonChi2 => "pearson-chi2",
            Family::RenyiAlpha => "renyi",
            Family::Fidelity => "fidelity",
            Family::Umegaki => "umegaki",
            Family::Collision => "collision",
            Family::Max => "max",
            Family::SmoothedMax => "smoothed-max",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        let lowered = name.trim().to_ascii_lowercase().replace('_', "-");
        let family = match lowered.as_str() {
            "hellinger" | "hellinger-alpha" => Family::HellingerAlpha,
            "neyman-chi2" | "neyman" | "chi2" | "chi2-neyman" => Family::NeymanChi2,
            "pearson-chi2" | "pearson" | "chi2-pearson" => Family::PearsonChi2,
            "renyi" | "renyi-alpha" | "rényi" => Family::RenyiAlpha,
            "fidelity" => Family::Fidelity,
            "umegaki" | "relative-entropy" | "kl" => Family::Umegaki,
            "collision" => Family::Collision,
            "max" => Family::Max,
            "smoothed-max" | "smooth-max" => Family::SmoothedMax,
            _ => return None,
        };
        Some(family)
    }
}

/// A divergence family together with its parameters.
///
/// `Renyi { alpha }` covers `alpha` in `[1/2, inf]`; `alpha = 1` evaluates the
/// Umegaki formula and `alpha = inf` the max-divergence formula.
/// `Hellinger { alpha }` covers `alpha > 1` and the limit `alpha = 1`, which is
/// the relative entropy in nats.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DivergenceSpec {
    Hellinger { alpha: f64 },
    NeymanChi2,
    PearsonChi2,
    Renyi { alpha: f64 },
    Fidelity,
    Umegaki,
    Collision,
    Max,
    SmoothedMax { epsilon: f64 },
}

impl DivergenceSpec {
    pub fn hellinger(alpha: f64) -> Result<Self> {
        let spec = DivergenceSpec::Hellinger { alpha };
        spec.validate().map(|_| spec)
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        let spec = DivergenceSpec::Renyi { alpha };
        spec.validate().map(|_| spec)
    }

    pub fn smoothed_max(epsilon: f64) -> Result<Self> {
        let spec = DivergenceSpec::SmoothedMax { epsilon };
        spec.validate().map(|_| spec)
    }

    /// Builds a spec from a family and optional parameters, rejecting
    /// parameters the family does not take.
    pub fn from_parts(family: Family, alpha: Option<f64>, epsilon: Option<f64>) -> Result<Self> {
        let needs_alpha = matches!(family, Family::HellingerAlpha | Family::RenyiAlpha);
        let needs_epsilon = family == Family::SmoothedMax;
        if alpha.is_some() && !needs_alpha {
            return domain(format!("{} takes no alpha parameter", family.name()));
        }
        if epsilon.is_some() && !needs_epsilon {
            return domain(format!("{} takes no epsilon parameter", family.name()));
        }
        let spec = match family {
            Family::HellingerAlpha => {
                DivergenceSpec::Hellinger { alpha: alpha.ok_or_else(|| missing("hellinger", "alpha"))? }
            }
            Family::RenyiAlpha => DivergenceSpec::Renyi { alpha: alpha.ok_or_else(|| missing("renyi", "alpha"))? },
            Family::SmoothedMax => {
                DivergenceSpec::SmoothedMax { epsilon: epsilon.ok_or_else(|| missing("smoothed-max", "epsilon"))? }
            }
            Family::NeymanChi2 => DivergenceSpec::NeymanChi2,
            Family::PearsonChi2 => DivergenceSpec::PearsonChi2,
            Family::Fidelity => DivergenceSpec::Fidelity,
            Family::Umegaki => DivergenceSpec::Umegaki,
            Family::Collision => DivergenceSpec::Collision,
            Family::Max => DivergenceSpec::Max,
        };
        spec.validate().map(|_| spec)
    }

    pub fn family(&self) -> Family {
        match self {
            DivergenceSpec::Hellinger { .. } => Family::HellingerAlpha,
            DivergenceSpec::NeymanChi2 => Family::NeymanChi2,
            DivergenceSpec::PearsonChi2 => Family::PearsonChi2,
            DivergenceSpec::Renyi { .. } => Family::RenyiAlpha,
            DivergenceSpec::Fidelity => Family::Fidelity,
            DivergenceSpec::Umegaki => Family::Umegaki,
            DivergenceSpec::Collision => Family::Collision,
            DivergenceSpec::Max => Family::Max,
            DivergenceSpec::SmoothedMax { .. } => Family::SmoothedMax,
        }
    }

    /// Order parameter, including the fixed orders of the special Rényi cases.
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            DivergenceSpec::Hellinger { alpha } | DivergenceSpec::Renyi { alpha } => Some(alpha),
            DivergenceSpec::Fidelity => Some(0.5),
            DivergenceSpec::Umegaki => Some(1.0),
            DivergenceSpec::Collision => Some(2.0),
            DivergenceSpec::Max | DivergenceSpec::SmoothedMax { .. } => Some(f64::INFINITY),
            DivergenceSpec::NeymanChi2 | DivergenceSpec::PearsonChi2 => None,
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match *self {
            DivergenceSpec::SmoothedMax { epsilon } => Some(epsilon),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DivergenceSpec::Hellinger { alpha } => {
                if !(alpha == 1.0 || (alpha > 1.0 && alpha.is_finite())) {
                    return domain(format!("hellinger alpha must be 1 or a finite value > 1, got {alpha}"));
                }
            }
            DivergenceSpec::Renyi { alpha } => {
                if alpha.is_nan() || alpha < 0.5 {
                    return domain(format!("renyi alpha must lie in [1/2, inf], got {alpha}"));
                }
            }
            DivergenceSpec::SmoothedMax { epsilon } if !(0.0..1.0).contains(&epsilon) => {
                return domain(format!("epsilon must lie in [0, 1), got {epsilon}"));
            }
            _ => {}
        }
        Ok(())
    }

    /// The representative used for closed-form dispatch: Rényi orders 1/2, 1,
    /// 2 and inf map to Fidelity, Umegaki, Collision and Max; Hellinger order 2
    /// maps to Neyman chi-squared; smoothing with `epsilon = 0` maps to Max.
    pub fn canonical(&self) -> DivergenceSpec {
        match *self {
            DivergenceSpec::Renyi { alpha: 0.5 } => DivergenceSpec::Fidelity,
            DivergenceSpec::Renyi { alpha: 1.0 } => DivergenceSpec::Umegaki,
            DivergenceSpec::Renyi { alpha: 2.0 } => DivergenceSpec::Collision,
            DivergenceSpec::Renyi { alpha } if alpha.is_infinite() => DivergenceSpec::Max,
            DivergenceSpec::Hellinger { alpha: 2.0 } => DivergenceSpec::NeymanChi2,
            DivergenceSpec::SmoothedMax { epsilon: 0.0 } => DivergenceSpec::Max,
            other => other,
        }
    }

    /// Whether the divergence is a Rényi-type quantity whose quantum version
    /// depends on the Petz/sandwiched choice.
    pub fn has_quantum_variants(&self) -> bool {
        matches!(self.canonical(), DivergenceSpec::Renyi { .. } | DivergenceSpec::Fidelity | DivergenceSpec::Collision)
    }

    pub fn label(&self) -> String {
        match *self {
            DivergenceSpec::Hellinger { alpha } => format!("hellinger(alpha={})", fmt_alpha(alpha)),
            DivergenceSpec::Renyi { alpha } => format!("renyi(alpha={})", fmt_alpha(alpha)),
            DivergenceSpec::SmoothedMax { epsilon } => format!("smoothed-max(epsilon={epsilon})"),
            other => other.family().name().to_string(),
        }
    }
}

impl fmt::Display for DivergenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn fmt_alpha(alpha: f64) -> String {
    if alpha.is_infinite() {
        "inf".to_string()
    } else {
        format!("{alpha}")
    }
}

fn missing(family: &str, param: &str) -> crate::error::Error {
    crate::error::Error::ParameterDomain(format!("{family} requires --{param}"))
}

/// `x^alpha * y^(1 - alpha)` with the support conventions of the binary
/// formulas.
pub(crate) fn power_term(x: f64, y: f64, alpha: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return if alpha > 1.0 {
            f64::INFINITY
        } else if alpha < 1.0 {
            0.0
        } else {
            x
        };
    }
    (alpha * x.ln() + (1.0 - alpha) * y.ln()).exp()
}

/// `x log2(x / y)` with `0 log(0 / y) = 0`.
fn kl_term(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if y <= 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).log2()
    }
}

/// `log2(x / y)` with `0 / 0` read as 1.
fn log_ratio(x: f64, y: f64) -> f64 {
    if y <= 0.0 {
        if x <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        (x / y).log2()
    }
}

fn quadratic(diff: f64, weight: f64) -> f64 {
    if weight <= 0.0 {
        f64::INFINITY
    } else {
        diff * diff / weight
    }
}

/// `ln(x^alpha * y^(1 - alpha))`, `-inf` for a vanishing term.
fn log_power_term(x: f64, y: f64, alpha: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return power_term(x, y, alpha).ln();
    }
    alpha * x.ln() + (1.0 - alpha) * y.ln()
}

/// Summed in the log domain so large orders neither overflow nor underflow.
fn renyi_value(r: f64, s: f64, alpha: f64) -> f64 {
    let (a, b) = (log_power_term(r, s, alpha), log_power_term(1.0 - r, 1.0 - s, alpha));
    let m = a.max(b);
    if m.is_infinite() {
        return f64::INFINITY;
    }
    let log_q = m + ((a - m).exp() + (b - m).exp()).ln();
    log_q / LN_2 / (alpha - 1.0)
}

fn max_value(r: f64, s: f64) -> f64 {
    if r <= s {
        log_ratio(1.0 - r, 1.0 - s)
    } else {
        log_ratio(r, s)
    }
}

/// Unchecked binary evaluation; `spec` must already be valid. Returns an
/// `f64` in `[0, inf]`.
pub(crate) fn binary_value(spec: &DivergenceSpec, r: f64, s: f64) -> f64 {
    if r == s {
        return 0.0;
    }
    let value = match *spec {
        DivergenceSpec::Hellinger { alpha: 1.0 } => (kl_term(r, s) + kl_term(1.0 - r, 1.0 - s)) * LN_2,
        DivergenceSpec::Hellinger { alpha } => {
            let q = power_term(r, s, alpha) + power_term(1.0 - r, 1.0 - s, alpha);
            (q - 1.0) / (alpha - 1.0)
        }
        DivergenceSpec::NeymanChi2 => quadratic(r - s, s * (1.0 - s)),
        DivergenceSpec::PearsonChi2 => quadratic(r - s, r * (1.0 - r)),
        DivergenceSpec::Renyi { alpha: 1.0 } => kl_term(r, s) + kl_term(1.0 - r, 1.0 - s),
        DivergenceSpec::Renyi { alpha } if alpha.is_infinite() => max_value(r, s),
        DivergenceSpec::Renyi { alpha } => renyi_value(r, s, alpha),
        DivergenceSpec::Fidelity => {
            let overlap = (r * s).sqrt() + ((1.0 - r) * (1.0 - s)).sqrt();
            if overlap <= 0.0 {
                f64::INFINITY
            } else {
                -2.0 * overlap.log2()
            }
        }
        DivergenceSpec::Umegaki => kl_term(r, s) + kl_term(1.0 - r, 1.0 - s),
        DivergenceSpec::Collision => renyi_value(r, s, 2.0),
        DivergenceSpec::Max => max_value(r, s),
        DivergenceSpec::SmoothedMax { epsilon } => {
            if r + epsilon <= s {
                log_ratio(1.0 - r - epsilon, 1.0 - s)
            } else if s < r - epsilon {
                log_ratio(r - epsilon, s)
            } else {
                0.0
            }
        }
    };
    if value > 0.0 {
        value
    } else {
        0.0
    }
}

/// `D_bin(r || s)` for the given family.
pub fn eval_binary(spec: &DivergenceSpec, pair: BinaryPair) -> Result<XReal> {
    spec.validate()?;
    Ok(XReal::from_raw(binary_value(spec, pair.r, pair.s)))
}

pub(crate) fn xi_value(spec: &DivergenceSpec, lambda: f64, r: f64, s: f64) -> f64 {
    let d = binary_value(spec, r, s);
    if d.is_infinite() {
        d
    } else {
        d - lambda * (r - s).abs()
    }
}

/// Objective of the linear-bound minimization, `D_bin(r || s) - lambda |r - s|`.
/// `+inf` propagates.
pub fn objective_xi(spec: &DivergenceSpec, lambda: f64, pair: BinaryPair) -> Result<f64> {
    spec.validate()?;
    if !(lambda >= 0.0) {
        return domain(format!("lambda must be nonnegative, got {lambda}"));
    }
    Ok(xi_value(spec, lambda, pair.r, pair.s))
}

/// How much of a family's convex bound has a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticCoverage {
    /// Closed form on the whole range `0 <= T <= 1`.
    Full,
    /// Closed form only for `T >= 1/alpha`; numeric elsewhere.
    RightOfInverseAlpha,
    /// Given as a parametrized curve `(T(t), D(t))`, inverted numerically.
    Parametrized,
    /// Closed form derived from the unsmoothed max divergence by a shift.
    Shifted,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub name: &'static str,
    pub title: &'static str,
    pub parameters: &'static [&'static str],
    pub parameter_range: &'static str,
    pub analytic: AnalyticCoverage,
    pub note: &'static str,
    /// Representative instance used by default suites.
    pub example: DivergenceSpec,
}

/// Every supported family with its parameter requirements.
pub fn catalog_list() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            family: Family::HellingerAlpha,
            name: "hellinger",
            title: "Hellinger-alpha divergence",
            parameters: &["alpha"],
            parameter_range: "alpha in (1, inf), plus the limit alpha = 1",
            analytic: AnalyticCoverage::RightOfInverseAlpha,
            note: "analytic only for T >= 1/alpha; alpha = 2 coincides with Neyman chi2",
            example: DivergenceSpec::Hellinger { alpha: 1.5 },
        },
        CatalogEntry {
            family: Family::NeymanChi2,
            name: "neyman-chi2",
            title: "Neyman chi-squared divergence",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Full,
            note: "same bound as Pearson chi2",
            example: DivergenceSpec::NeymanChi2,
        },
        CatalogEntry {
            family: Family::PearsonChi2,
            name: "pearson-chi2",
            title: "Pearson chi-squared divergence",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Full,
            note: "same bound as Neyman chi2",
            example: DivergenceSpec::PearsonChi2,
        },
        CatalogEntry {
            family: Family::RenyiAlpha,
            name: "renyi",
            title: "Renyi-alpha divergence (Petz or sandwiched)",
            parameters: &["alpha"],
            parameter_range: "alpha in [1/2, inf]",
            analytic: AnalyticCoverage::RightOfInverseAlpha,
            note: "analytic only for T >= 1/alpha; alpha in {1/2, 1, 2, inf} dispatch to the special rows",
            example: DivergenceSpec::Renyi { alpha: 4.0 / 3.0 },
        },
        CatalogEntry {
            family: Family::Fidelity,
            name: "fidelity",
            title: "Fidelity divergence (Renyi alpha = 1/2)",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Full,
            note: "bound is log(1/(1-T^2)), the Bretagnolle-Huber form",
            example: DivergenceSpec::Fidelity,
        },
        CatalogEntry {
            family: Family::Umegaki,
            name: "umegaki",
            title: "Umegaki relative entropy (Renyi alpha = 1)",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Parametrized,
            note: "linear bound closed form; convex bound as a parametrized curve",
            example: DivergenceSpec::Umegaki,
        },
        CatalogEntry {
            family: Family::Collision,
            name: "collision",
            title: "Collision divergence (Renyi alpha = 2)",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Full,
            note: "two pieces meeting at T = 1/2",
            example: DivergenceSpec::Collision,
        },
        CatalogEntry {
            family: Family::Max,
            name: "max",
            title: "Max divergence (Renyi alpha = inf)",
            parameters: &[],
            parameter_range: "",
            analytic: AnalyticCoverage::Full,
            note: "bound is log(1/(1-T)) on the whole range",
            example: DivergenceSpec::Max,
        },
        CatalogEntry {
            family: Family::SmoothedMax,
            name: "smoothed-max",
            title: "epsilon-smoothed max divergence",
            parameters: &["epsilon"],
            parameter_range: "epsilon in [0, 1)",
            analytic: AnalyticCoverage::Shifted,
            note: "requires epsilon; bound is the max-divergence bound shifted right by epsilon",
            example: DivergenceSpec::SmoothedMax { epsilon: 0.2 },
        },
    ]
}
