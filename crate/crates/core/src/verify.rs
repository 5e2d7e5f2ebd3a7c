//! Property suites: bound dominance on sampled states, data processing through
//! the classicalization channel, closed-form against numeric agreement, and the
//! smoothing transform.
//!
//! Every check is a list of items evaluated at probes. A probe is either a
//! reproducible state pair (seed, dimension, index) or a point `T` or
//! `lambda`, so any failure can be re-run on its own with [`replay`].

use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::analytic::{self, Formula, PiecewiseBound};
use crate::catalog::{eval_binary, BinaryPair, DivergenceSpec, XReal};
use crate::engine::{self, ConvexBound, LambdaGrid, LinearBound, CHAIN_MAX_POINTS, CHAIN_TOL};
use crate::error::{domain, Error, Result};
use crate::quantum::{
    self, classicalize, eval_quantum, trace_distance, CMatrix, DensityMatrix, RenyiVariant, StatePair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Scatter,
    Dpi,
    Consistency,
    Smoothing,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Scatter, Check::Dpi, Check::Consistency, Check::Smoothing];

    pub fn name(self) -> &'static str {
        match self {
            Check::Scatter => "scatter",
            Check::Dpi => "dpi",
            Check::Consistency => "consistency",
            Check::Smoothing => "smoothing",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Named tolerances. An item passes when its margin is at least `-tol`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Sampled divergence against a bound.
    pub dominance: f64,
    /// Numeric chain against a closed form.
    pub tightness: f64,
    /// Algebraic identities and chain-below-closed-form.
    pub identity: f64,
    /// `r - s` against the trace distance after classicalization.
    pub trace: f64,
    /// Quantum against binary value on commuting pairs.
    pub commuting: f64,
    /// Sandwiched below Petz.
    pub ordering: f64,
    /// Linear bound re-derived from the chain.
    pub legendre: f64,
    /// One-sided slopes at breakpoints.
    pub slope: f64,
    /// Smoothing with a vanishing epsilon.
    pub smoothing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            dominance: 1e-7,
            tightness: 1e-4,
            identity: 1e-9,
            trace: 1e-10,
            commuting: 1e-10,
            ordering: 1e-10,
            legendre: 1e-6,
            slope: 1e-3,
            smoothing: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            dominance: tol,
            tightness: tol,
            identity: tol,
            trace: tol,
            commuting: tol,
            ordering: tol,
            legendre: tol,
            slope: tol,
            smoothing: tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub families: Vec<DivergenceSpec>,
    pub dims: Vec<usize>,
    pub pairs_per_dim: usize,
    pub t_grid_size: usize,
    pub lambda_grid: LambdaGrid,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub checks: Vec<Check>,
    /// Smoothing parameters tried when the max divergence itself is listed.
    pub epsilons: Vec<f64>,
}

/// Every family, with the Rényi orders 1/2, 1, 4/3, 2 and infinity, Hellinger
/// orders 10/9, 3/2 and 2, and smoothing parameters 0.05 and 0.2.
pub fn default_families() -> Vec<DivergenceSpec> {
    use DivergenceSpec as S;
    vec![
        S::Fidelity,
        S::Umegaki,
        S::Renyi { alpha: 4.0 / 3.0 },
        S::Collision,
        S::Max,
        S::Hellinger { alpha: 10.0 / 9.0 },
        S::Hellinger { alpha: 1.5 },
        S::Hellinger { alpha: 2.0 },
        S::NeymanChi2,
        S::PearsonChi2,
        S::SmoothedMax { epsilon: 0.05 },
        S::SmoothedMax { epsilon: 0.2 },
    ]
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            families: default_families(),
            dims: vec![2, 3, 4, 5],
            pairs_per_dim: 2500,
            t_grid_size: 99,
            lambda_grid: LambdaGrid::default(),
            seed: 0,
            tolerances: Tolerances::default(),
            checks: Check::ALL.to_vec(),
            epsilons: vec![0.05, 0.2],
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pairs_per_dim == 0 {
            return domain("pairs_per_dim must be at least 1");
        }
        if let Some(d) = self.dims.iter().find(|d| !(2..=16).contains(*d)) {
            return domain(format!("dimensions must lie in [2, 16], got {d}"));
        }
        if self.t_grid_size < 2 {
            return domain("t_grid_size must be at least 2");
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return domain(format!("epsilon must lie in (0, 1), got {e}"));
        }
        self.families.iter().try_for_each(|f| f.validate())?;
        self.lambda_grid.points()?;
        Ok(())
    }

    fn runs(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

/// What an item is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Probe {
    /// Ginibre pair `index` of the stream `(seed, dim)`.
    Ginibre {
        dim: usize,
        index: u64,
    },
    /// Jointly diagonal pair `index` of the stream `(seed, dim)`.
    Diagonal {
        dim: usize,
        index: u64,
    },
    /// `(rho, rho)` with `rho` drawn from the stream `(seed, dim)`.
    Identical {
        dim: usize,
        index: u64,
    },
    /// `rho = I/2`, `sigma = |0><0|`.
    OffSupport,
    /// Uniform binary pair `index`.
    Binary {
        index: u64,
    },
    Point {
        t: f64,
    },
    Slope {
        lambda: f64,
    },
    Tangent {
        lambda: f64,
        t: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemKind {
    Dominance,
    Pinsker,
    BoundAbovePinsker,
    ClassicalDpi,
    ClassicalBound,
    TraceConservation,
    Commuting,
    SandwichedBelowPetz,
    ChainBelowClosed,
    ChainTight,
    BreakpointValue,
    BreakpointSlope,
    LegendreRoundTrip,
    RenyiOrdering,
    RenyiOrderingNumeric,
    Chi2Equality,
    CurveMonotone,
    CurveRoundTrip,
    CurvePinsker,
    ZeroRegion,
    ShiftIdentity,
    ShiftedChain,
    LinearShift,
    OutOfDomain,
    TangentValidity,
    BinaryDominance,
    VanishingEpsilon,
}

impl ItemKind {
    pub fn name(self) -> &'static str {
        use ItemKind::*;
        match self {
            Dominance => "dominance",
            Pinsker => "pinsker",
            BoundAbovePinsker => "bound-above-pinsker",
            ClassicalDpi => "classical-dpi",
            ClassicalBound => "classical-bound",
            TraceConservation => "trace-conservation",
            Commuting => "commuting",
            SandwichedBelowPetz => "sandwiched-below-petz",
            ChainBelowClosed => "chain-below-closed",
            ChainTight => "chain-tight",
            BreakpointValue => "breakpoint-value",
            BreakpointSlope => "breakpoint-slope",
            LegendreRoundTrip => "legendre-round-trip",
            RenyiOrdering => "renyi-ordering",
            RenyiOrderingNumeric => "renyi-ordering-numeric",
            Chi2Equality => "chi2-equality",
            CurveMonotone => "curve-monotone",
            CurveRoundTrip => "curve-round-trip",
            CurvePinsker => "curve-pinsker",
            ZeroRegion => "zero-region",
            ShiftIdentity => "shift-identity",
            ShiftedChain => "shifted-chain",
            LinearShift => "linear-shift",
            OutOfDomain => "out-of-domain",
            TangentValidity => "tangent-validity",
            BinaryDominance => "binary-dominance",
            VanishingEpsilon => "vanishing-epsilon",
        }
    }
}

/// One property, for one family and quantum variant where relevant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Item {
    pub check: Check,
    pub kind: ItemKind,
    pub spec: Option<DivergenceSpec>,
    pub variant: Option<RenyiVariant>,
    pub tolerance: f64,
}

impl Item {
    pub fn label(&self) -> String {
        let mut s = self.kind.name().to_string();
        if let Some(spec) = self.spec {
            let _ = write!(s, " {spec}");
        }
        if let Some(v) = self.variant {
            let _ = write!(s, " [{}]", variant_name(v));
        }
        s
    }
}

fn variant_name(v: RenyiVariant) -> &'static str {
    match v {
        RenyiVariant::Petz => "petz",
        RenyiVariant::Sandwiched => "sandwiched",
    }
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

/// Complex entries as `[re, im]`, row by row.
pub type MatrixDump = Vec<Vec<[f64; 2]>>;

fn dump(m: &CMatrix) -> MatrixDump {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Everything needed to reproduce a failing item at a single probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub item: Item,
    pub seed: u64,
    pub probe: Probe,
    #[serde(serialize_with = "ser_f64")]
    pub margin: f64,
    pub rho: Option<MatrixDump>,
    pub sigma: Option<MatrixDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemReport {
    pub item: Item,
    pub label: String,
    pub evaluated: usize,
    /// Probes where the divergence was `+inf`; they pass dominance trivially.
    pub infinite: usize,
    pub violations: usize,
    /// Smallest margin seen; the item fails when it is below `-tolerance`.
    #[serde(serialize_with = "ser_f64")]
    pub worst_margin: f64,
    pub worst_probe: Option<Probe>,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub check: Check,
    pub passed: bool,
    pub items: Vec<ItemReport>,
    pub wall_clock_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: bool,
    pub sections: Vec<SectionReport>,
    pub wall_clock_ms: u128,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &ItemReport> {
        self.sections.iter().flat_map(|s| s.items.iter()).filter(|i| !i.passed)
    }

    /// The report with every wall-clock field zeroed.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        r.wall_clock_ms = 0;
        r.sections.iter_mut().for_each(|s| s.wall_clock_ms = 0);
        r
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let status = if s.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{status}] {} ({} items, {} ms)", s.check.name(), s.items.len(), s.wall_clock_ms);
            for i in &s.items {
                let status = if i.passed { "ok  " } else { "FAIL" };
                let _ = write!(
                    out,
                    "  {status} {:<48} n={:<6} worst={:+.3e} tol={:.0e}",
                    i.label, i.evaluated, i.worst_margin, i.item.tolerance
                );
                if i.infinite > 0 {
                    let _ = write!(out, " inf={}", i.infinite);
                }
                out.push('\n');
                if let Some(cx) = &i.counterexample {
                    let _ = writeln!(
                        out,
                        "       counterexample: seed={} probe={:?} margin={:+.6e}",
                        cx.seed, cx.probe, cx.margin
                    );
                }
            }
        }
        let status = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}: {} failing items, {} ms", self.failures().count(), self.wall_clock_ms);
        out
    }
}

/// Best available convex bound for one family: the closed form where it
/// exists, the refined numeric chain elsewhere.
#[derive(Clone, Debug)]
pub struct Reference {
    pub spec: DivergenceSpec,
    pub piecewise: PiecewiseBound,
    /// Tangents of the chain; for the smoothed max divergence those of the max
    /// divergence.
    pub linear: LinearBound,
    pub numeric: ConvexBound,
}

impl Reference {
    pub fn new(spec: &DivergenceSpec, grid: &LambdaGrid) -> Result<Self> {
        let spec = spec.canonical();
        let (base, epsilon) = match spec {
            DivergenceSpec::SmoothedMax { epsilon } => (DivergenceSpec::Max, Some(epsilon)),
            other => (other, None),
        };
        let lb = engine::refine_linear_bound(
            &engine::build_linear_bound_parallel(&base, grid)?,
            CHAIN_TOL,
            CHAIN_MAX_POINTS,
        )?;
        let chain = engine::build_chain(&lb)?;
        Self::assemble(spec, lb, chain, epsilon)
    }

    fn assemble(spec: DivergenceSpec, linear: LinearBound, chain: ConvexBound, epsilon: Option<f64>) -> Result<Self> {
        let numeric = match epsilon {
            Some(epsilon) => ConvexBound::Shifted { inner: Box::new(chain), epsilon },
            None => chain,
        };
        Ok(Reference { spec, piecewise: PiecewiseBound::for_spec(&spec)?, linear, numeric })
    }

    pub fn is_analytic(&self, t: f64) -> bool {
        self.piecewise.eval(t).is_available()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.piecewise.eval(t).value().unwrap_or_else(|| self.numeric.eval(t))
    }
}

struct Context {
    seed: u64,
    refs: Vec<Reference>,
}

impl Context {
    fn build(seed: u64, specs: &[DivergenceSpec], grid: &LambdaGrid) -> Result<Self> {
        let mut unique: Vec<DivergenceSpec> = Vec::new();
        for s in specs.iter().map(|s| s.canonical()) {
            if !unique.contains(&s) {
                unique.push(s);
            }
        }
        let needs_max = unique.iter().any(|s| matches!(s, DivergenceSpec::SmoothedMax { .. }));
        let mut bases: Vec<DivergenceSpec> =
            unique.iter().copied().filter(|s| !matches!(s, DivergenceSpec::SmoothedMax { .. })).collect();
        if needs_max && !bases.contains(&DivergenceSpec::Max) {
            bases.push(DivergenceSpec::Max);
        }
        let built: Vec<Reference> = bases.par_iter().map(|s| Reference::new(s, grid)).collect::<Result<_>>()?;
        let mut refs = Vec::with_capacity(unique.len());
        for spec in unique {
            match spec {
                DivergenceSpec::SmoothedMax { epsilon } => {
                    let max = built.iter().find(|r| r.spec == DivergenceSpec::Max).expect("max reference built");
                    let ConvexBound::Chain { .. } = &max.numeric else { unreachable!("max reference is a chain") };
                    refs.push(Reference::assemble(spec, max.linear.clone(), max.numeric.clone(), Some(epsilon))?);
                }
                other => refs.push(built.iter().find(|r| r.spec == other).expect("reference built").clone()),
            }
        }
        Ok(Context { seed, refs })
    }

    fn reference(&self, spec: &DivergenceSpec) -> Result<&Reference> {
        let spec = spec.canonical();
        self.refs
            .iter()
            .find(|r| r.spec == spec)
            .ok_or_else(|| Error::Unsupported(format!("verification without a reference bound for {spec}")))
    }
}

/// Signed distance from failing: the item passes at a probe when
/// `margin >= -tolerance`.
#[derive(Clone, Copy, Debug)]
struct Obs {
    margin: f64,
    infinite: bool,
}

impl Obs {
    fn of(margin: f64) -> Obs {
        Obs { margin, infinite: false }
    }

    /// `lhs >= rhs`; an infinite left side always holds.
    fn geq(lhs: XReal, rhs: f64) -> Obs {
        if lhs.is_infinite() {
            Obs { margin: f64::INFINITY, infinite: true }
        } else {
            Obs::of(lhs.value() - rhs)
        }
    }

    /// `|a - b| = 0`, with equal infinities counted as equal.
    fn eq(a: f64, b: f64) -> Obs {
        if a.is_infinite() && a == b {
            Obs { margin: 0.0, infinite: true }
        } else {
            Obs::of(-(a - b).abs())
        }
    }
}

fn passes(margin: f64, tol: f64) -> bool {
    margin >= -tol
}

const IDENTICAL_SALT: u64 = 0x1DE7_0000_0000_0000;
const BINARY_SALT: u64 = 0xB1A7_0000_0000_0000;
const SLOPE_H: f64 = 1e-6;

fn pair_for(probe: &Probe, seed: u64) -> Result<Option<StatePair>> {
    Ok(Some(match *probe {
        Probe::Ginibre { dim, index } => quantum::sample_pair(seed, dim, index)?,
        Probe::Diagonal { dim, index } => quantum::sample_diagonal_pair(seed, dim, index)?,
        Probe::Identical { dim, index } => {
            let mut rng = quantum::sample_rng(seed ^ IDENTICAL_SALT, dim, index);
            let rho = quantum::sample_state(dim, &mut rng)?;
            StatePair::new(rho.clone(), rho)?
        }
        Probe::OffSupport => StatePair::new(
            DensityMatrix::from_real_diagonal(&[0.5, 0.5])?,
            DensityMatrix::from_real_diagonal(&[1.0, 0.0])?,
        )?,
        _ => return Ok(None),
    }))
}

fn binary_probe(seed: u64, index: u64) -> BinaryPair {
    let mut rng = quantum::sample_rng(seed ^ BINARY_SALT, 2, index);
    BinaryPair::new_unchecked(rng.random(), rng.random())
}

/// Binary value of the diagonals of a qubit pair.
fn diagonal_binary(pair: &StatePair) -> BinaryPair {
    let r = pair.rho.matrix()[(0, 0)].re.clamp(0.0, 1.0);
    let s = pair.sigma.matrix()[(0, 0)].re.clamp(0.0, 1.0);
    BinaryPair::new_unchecked(r, s)
}

/// Orders whose Petz-type quantity is monotone under channels.
fn petz_monotone(spec: &DivergenceSpec) -> bool {
    match spec.canonical() {
        DivergenceSpec::Renyi { alpha } | DivergenceSpec::Hellinger { alpha } => alpha <= 2.0,
        _ => true,
    }
}

/// Orders compared in the Rényi ordering check, smallest first.
fn renyi_chain() -> [DivergenceSpec; 5] {
    [
        DivergenceSpec::Fidelity,
        DivergenceSpec::Umegaki,
        DivergenceSpec::Renyi { alpha: 4.0 / 3.0 },
        DivergenceSpec::Collision,
        DivergenceSpec::Max,
    ]
}

fn max_closed() -> ConvexBound {
    ConvexBound::ClosedForm { spec: DivergenceSpec::Max }
}

fn shifted_max(epsilon: f64, t: f64) -> f64 {
    if t <= epsilon {
        0.0
    } else {
        (1.0 / (1.0 - (t - epsilon))).log2()
    }
}

/// `L(lambda)`: closed form where available, numeric elsewhere.
fn linear_value(spec: &DivergenceSpec, lambda: f64) -> Result<f64> {
    match analytic::linear_bound_analytic(spec, lambda)?.value() {
        Some(p) => Ok(p.value),
        None => Ok(engine::linear_bound_numeric(spec, lambda)?.value),
    }
}

/// Value of one piece of a piecewise bound, solving numerically where the
/// piece has no closed form.
fn piece_value(spec: &DivergenceSpec, formula: Formula, t: f64) -> Result<f64> {
    match formula.value(t).value() {
        Some(v) => Ok(v),
        None => engine::pointwise_bound(spec, t),
    }
}

/// Value gap and one-sided slope gap at a breakpoint.
fn breakpoint_gaps(spec: &DivergenceSpec, probe: &Probe) -> Result<Option<(f64, f64)>> {
    let h = SLOPE_H;
    match *probe {
        Probe::Point { t } => {
            let pw = PiecewiseBound::for_spec(spec)?;
            let Some(k) = pw.pieces.iter().position(|p| p.lo == t && p.lo > 0.0) else { return Ok(None) };
            let (left, right) = (pw.pieces[k - 1].formula, pw.pieces[k].formula);
            let (l0, r0) = (piece_value(spec, left, t)?, piece_value(spec, right, t)?);
            let l_slope = (l0 - piece_value(spec, left, t - h)?) / h;
            let r_slope = (piece_value(spec, right, t + h)? - r0) / h;
            Ok(Some(((l0 - r0).abs(), (l_slope - r_slope).abs())))
        }
        Probe::Slope { lambda } => {
            let at = linear_value(spec, lambda)?;
            let numeric = engine::linear_bound_numeric(spec, lambda)?.value;
            let l_slope = (at - linear_value(spec, lambda - h)?) / h;
            let r_slope = (linear_value(spec, lambda + h)? - at) / h;
            Ok(Some(((at - numeric).abs(), (l_slope - r_slope).abs())))
        }
        _ => Ok(None),
    }
}

fn observe(item: &Item, probe: &Probe, pair: Option<&StatePair>, ctx: &Context) -> Result<Option<Obs>> {
    use ItemKind::*;
    let variant = item.variant.unwrap_or(RenyiVariant::Petz);
    let spec = item.spec.unwrap_or(DivergenceSpec::Max);
    let t_of = |p: &Probe| match *p {
        Probe::Point { t } => Some(t),
        _ => None,
    };
    let obs = match item.kind {
        Dominance | Pinsker | BoundAbovePinsker | ClassicalDpi | ClassicalBound | TraceConservation | Commuting
        | SandwichedBelowPetz => {
            let Some(pair) = pair else { return Ok(None) };
            let diagonal = matches!(probe, Probe::Diagonal { .. });
            let t = trace_distance(pair);
            match item.kind {
                Dominance => Obs::geq(eval_quantum(&spec, pair, variant)?, ctx.reference(&spec)?.eval(t)),
                Pinsker => Obs::geq(eval_quantum(&spec, pair, variant)?, analytic::pinsker(t)),
                BoundAbovePinsker => Obs::of(ctx.reference(&spec)?.eval(t) - analytic::pinsker(t)),
                ClassicalDpi => {
                    let q = eval_quantum(&spec, pair, variant)?;
                    let c = eval_binary(&spec, classicalize(pair))?;
                    if q.is_infinite() {
                        Obs { margin: f64::INFINITY, infinite: true }
                    } else {
                        Obs::of(q.value() - c.value())
                    }
                }
                ClassicalBound => Obs::geq(eval_binary(&spec, classicalize(pair))?, ctx.reference(&spec)?.eval(t)),
                TraceConservation => Obs::of(-(classicalize(pair).trace_distance() - t).abs()),
                Commuting => {
                    if !diagonal || pair.dim() != 2 {
                        return Ok(None);
                    }
                    let q = eval_quantum(&spec, pair, variant)?;
                    let b = eval_binary(&spec, diagonal_binary(pair))?;
                    Obs::eq(q.value(), b.value())
                }
                SandwichedBelowPetz => {
                    let petz = eval_quantum(&spec, pair, RenyiVariant::Petz)?;
                    let sandwiched = eval_quantum(&spec, pair, RenyiVariant::Sandwiched)?;
                    Obs::geq(petz, sandwiched.value())
                }
                _ => unreachable!(),
            }
        }
        ChainBelowClosed | ChainTight => {
            let Some(t) = t_of(probe) else { return Ok(None) };
            let r = ctx.reference(&spec)?;
            let Some(closed) = r.piecewise.eval(t).value() else { return Ok(None) };
            let chain = r.numeric.eval(t);
            Obs::of(if item.kind == ChainBelowClosed { closed - chain } else { chain - closed })
        }
        BreakpointValue | BreakpointSlope => match breakpoint_gaps(&spec, probe)? {
            Some((value, slope)) => Obs::of(-if item.kind == BreakpointValue { value } else { slope }),
            None => return Ok(None),
        },
        LegendreRoundTrip => {
            let Probe::Slope { lambda } = *probe else { return Ok(None) };
            let r = ctx.reference(&spec)?;
            let k = r.linear.lambdas.partition_point(|&l| l < lambda);
            if r.linear.lambdas.get(k) != Some(&lambda) {
                return Err(Error::InvalidGrid(format!("slope {lambda} is not a grid point of {spec}")));
            }
            let shift = spec.epsilon().filter(|e| *e > 0.0).map_or(0.0, |e| lambda * e);
            Obs::of(-(r.numeric.intercept(lambda)? - (r.linear.values[k] - shift)).abs())
        }
        RenyiOrdering | RenyiOrderingNumeric => {
            let Some(t) = t_of(probe) else { return Ok(None) };
            let refs = renyi_chain().iter().map(|s| ctx.reference(s)).collect::<Result<Vec<_>>>()?;
            let want_numeric = item.kind == RenyiOrderingNumeric;
            let margins: Vec<f64> = refs
                .windows(2)
                .filter(|w| (w[0].is_analytic(t) && w[1].is_analytic(t)) != want_numeric)
                .map(|w| w[1].eval(t) - w[0].eval(t))
                .collect();
            if margins.is_empty() {
                return Ok(None);
            }
            Obs::of(margins.into_iter().fold(f64::INFINITY, nan_min))
        }
        Chi2Equality => {
            let Some(t) = t_of(probe) else { return Ok(None) };
            let n = analytic::convex_bound_analytic(&DivergenceSpec::NeymanChi2, t)?.value().unwrap_or(f64::NAN);
            let p = analytic::convex_bound_analytic(&DivergenceSpec::PearsonChi2, t)?.value().unwrap_or(f64::NAN);
            Obs::eq(n, p)
        }
        CurveMonotone | CurveRoundTrip | CurvePinsker => {
            let Some(t) = t_of(probe) else { return Ok(None) };
            let p = analytic::umegaki_parametrized(t);
            match item.kind {
                CurveMonotone => {
                    let next = analytic::umegaki_parametrized(t * CURVE_RATIO);
                    let step = next.t_dist - p.t_dist;
                    Obs::of(if step > 0.0 { step } else { f64::NEG_INFINITY })
                }
                CurveRoundTrip => {
                    let back = analytic::umegaki_parametrized(analytic::umegaki_invert(p.t_dist));
                    Obs::eq(back.t_dist, p.t_dist)
                }
                _ => Obs::of(p.d - analytic::pinsker(p.t_dist)),
            }
        }
        ZeroRegion | ShiftIdentity | ShiftedChain | VanishingEpsilon => {
            let Some(t) = t_of(probe) else { return Ok(None) };
            let epsilon = spec.epsilon().unwrap_or(0.0);
            match item.kind {
                ZeroRegion => Obs::eq(engine::smooth_convex(&max_closed(), epsilon, t), 0.0),
                ShiftIdentity => Obs::eq(engine::smooth_convex(&max_closed(), epsilon, t), shifted_max(epsilon, t)),
                ShiftedChain => Obs::eq(ctx.reference(&spec)?.numeric.eval(t), shifted_max(epsilon, t)),
                _ => Obs::eq(engine::smooth_convex(&max_closed(), VANISHING_EPSILON, t), max_closed().eval(t)),
            }
        }
        LinearShift | OutOfDomain => {
            let Probe::Slope { lambda } = *probe else { return Ok(None) };
            let epsilon = spec.epsilon().unwrap_or(0.0);
            let got = engine::smooth_linear(&max_closed(), epsilon, lambda);
            if item.kind == OutOfDomain {
                Obs::of(if matches!(got, Err(Error::OutOfDomain { .. })) { 0.0 } else { f64::NEG_INFINITY })
            } else {
                let max_l = 1.0 / LN_2 - lambda + (lambda * LN_2).log2();
                Obs::eq(got?, max_l - lambda * epsilon)
            }
        }
        TangentValidity => {
            let Probe::Tangent { lambda, t } = *probe else { return Ok(None) };
            let epsilon = spec.epsilon().unwrap_or(0.0);
            let line = engine::smooth_linear_conjugate(&max_closed(), epsilon, lambda)? + lambda * t;
            Obs::of(shifted_max(epsilon, t) - line)
        }
        BinaryDominance => {
            let Probe::Binary { index } = *probe else { return Ok(None) };
            let p = binary_probe(ctx.seed, index);
            Obs::geq(eval_binary(&spec, p)?, ctx.reference(&spec)?.eval(p.trace_distance()))
        }
    };
    Ok(Some(obs))
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

const CURVE_RATIO: f64 = 1.05;
const VANISHING_EPSILON: f64 = 1e-9;

/// A probe shared by the listed items.
struct Group {
    probe: Probe,
    items: Vec<usize>,
}

struct Tally {
    evaluated: usize,
    infinite: usize,
    violations: usize,
    worst: f64,
    worst_probe: Option<Probe>,
}

fn run_section(check: Check, items: Vec<Item>, groups: Vec<Group>, ctx: &Context) -> Result<SectionReport> {
    let start = Instant::now();
    let observed: Vec<Vec<(usize, Option<Obs>)>> = groups
        .par_iter()
        .map(|g| -> Result<Vec<(usize, Option<Obs>)>> {
            let pair = pair_for(&g.probe, ctx.seed)?;
            g.items.iter().map(|&k| Ok((k, observe(&items[k], &g.probe, pair.as_ref(), ctx)?))).collect()
        })
        .collect::<Result<_>>()?;

    let mut tallies: Vec<Tally> = items
        .iter()
        .map(|_| Tally { evaluated: 0, infinite: 0, violations: 0, worst: f64::INFINITY, worst_probe: None })
        .collect();
    for (g, obs) in groups.iter().zip(&observed) {
        for &(k, o) in obs {
            let Some(o) = o else { continue };
            let t = &mut tallies[k];
            t.evaluated += 1;
            t.infinite += o.infinite as usize;
            if !passes(o.margin, items[k].tolerance) {
                t.violations += 1;
            }
            if !t.worst.is_nan() && (o.margin.is_nan() || o.margin < t.worst) {
                t.worst = o.margin;
                t.worst_probe = Some(g.probe);
            }
        }
    }

    let reports = items
        .iter()
        .zip(tallies)
        .map(|(item, t)| -> Result<ItemReport> {
            let passed = t.violations == 0;
            let counterexample = match (passed, t.worst_probe) {
                (false, Some(probe)) => Some(counterexample(item, probe, t.worst, ctx.seed)?),
                _ => None,
            };
            Ok(ItemReport {
                item: *item,
                label: item.label(),
                evaluated: t.evaluated,
                infinite: t.infinite,
                violations: t.violations,
                worst_margin: t.worst,
                worst_probe: t.worst_probe,
                passed,
                counterexample,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectionReport {
        check,
        passed: reports.iter().all(|r| r.passed),
        items: reports,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

fn counterexample(item: &Item, probe: Probe, margin: f64, seed: u64) -> Result<Counterexample> {
    let pair = pair_for(&probe, seed)?;
    Ok(Counterexample {
        item: *item,
        seed,
        probe,
        margin,
        rho: pair.as_ref().map(|p| dump(p.rho.matrix())),
        sigma: pair.as_ref().map(|p| dump(p.sigma.matrix())),
    })
}

fn shared(probes: Vec<Probe>, n_items: usize) -> Vec<Group> {
    probes.into_iter().map(|probe| Group { probe, items: (0..n_items).collect() }).collect()
}

fn separate(per_item: &[Vec<Probe>]) -> Vec<Group> {
    per_item
        .iter()
        .enumerate()
        .flat_map(|(k, probes)| probes.iter().map(move |&probe| Group { probe, items: vec![k] }))
        .collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect()
}

/// `k / (n + 1)` for `k = 1..=n`; 99 points give `0.01, ..., 0.99`.
fn t_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

fn points(ts: impl IntoIterator<Item = f64>) -> Vec<Probe> {
    ts.into_iter().map(|t| Probe::Point { t }).collect()
}

fn quantum_families(cfg: &SuiteConfig) -> Vec<DivergenceSpec> {
    let mut out: Vec<DivergenceSpec> = Vec::new();
    for s in cfg.families.iter().map(|s| s.canonical()) {
        if !matches!(s, DivergenceSpec::SmoothedMax { .. }) && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn variants(spec: &DivergenceSpec) -> Vec<Option<RenyiVariant>> {
    if spec.has_quantum_variants() {
        RenyiVariant::BOTH.iter().copied().map(Some).collect()
    } else {
        vec![None]
    }
}

fn ginibre_probes(cfg: &SuiteConfig) -> Vec<Probe> {
    cfg.dims
        .iter()
        .flat_map(|&dim| (0..cfg.pairs_per_dim as u64).map(move |index| Probe::Ginibre { dim, index }))
        .collect()
}

fn item(
    check: Check,
    kind: ItemKind,
    spec: Option<DivergenceSpec>,
    variant: Option<RenyiVariant>,
    tolerance: f64,
) -> Item {
    Item { check, kind, spec, variant, tolerance }
}

fn scatter_plan(cfg: &SuiteConfig) -> (Vec<Item>, Vec<Group>) {
    let tol = &cfg.tolerances;
    let mut items = Vec::new();
    for spec in quantum_families(cfg) {
        for v in variants(&spec) {
            items.push(item(Check::Scatter, ItemKind::Dominance, Some(spec), v, tol.dominance));
            if spec == DivergenceSpec::Umegaki {
                items.push(item(Check::Scatter, ItemKind::Pinsker, Some(spec), v, tol.dominance));
            }
        }
        if spec == DivergenceSpec::Umegaki {
            items.push(item(Check::Scatter, ItemKind::BoundAbovePinsker, Some(spec), None, tol.dominance));
        }
    }
    let mut probes = ginibre_probes(cfg);
    probes.extend(cfg.dims.iter().map(|&dim| Probe::Identical { dim, index: 0 }));
    probes.push(Probe::OffSupport);
    let n = items.len();
    (items, shared(probes, n))
}

fn dpi_plan(cfg: &SuiteConfig) -> (Vec<Item>, Vec<Group>) {
    let tol = &cfg.tolerances;
    let mut items = vec![item(Check::Dpi, ItemKind::TraceConservation, None, None, tol.trace)];
    for spec in quantum_families(cfg) {
        items.push(item(Check::Dpi, ItemKind::ClassicalBound, Some(spec), None, tol.dominance));
        for v in variants(&spec) {
            let petz_type = v != Some(RenyiVariant::Sandwiched);
            if !petz_type || petz_monotone(&spec) {
                items.push(item(Check::Dpi, ItemKind::ClassicalDpi, Some(spec), v, tol.dominance));
            }
            items.push(item(Check::Dpi, ItemKind::Commuting, Some(spec), v, tol.commuting));
        }
        if spec.has_quantum_variants() && spec.alpha().is_some_and(|a| a > 1.0) {
            items.push(item(Check::Dpi, ItemKind::SandwichedBelowPetz, Some(spec), None, tol.ordering));
        }
    }
    let mut probes = ginibre_probes(cfg);
    probes.extend((0..cfg.pairs_per_dim as u64).map(|index| Probe::Diagonal { dim: 2, index }));
    let n = items.len();
    (items, shared(probes, n))
}

fn consistency_plan(cfg: &SuiteConfig, ctx: &Context) -> Result<(Vec<Item>, Vec<Group>)> {
    let tol = &cfg.tolerances;
    let c = Check::Consistency;
    let mut items = Vec::new();
    let mut probes: Vec<Vec<Probe>> = Vec::new();
    let mut families: Vec<DivergenceSpec> = Vec::new();
    for s in cfg.families.iter().map(|s| s.canonical()) {
        if !families.contains(&s) {
            families.push(s);
        }
    }
    for spec in &families {
        let r = ctx.reference(spec)?;
        if let Some((lo, hi)) = r.piecewise.validity_range() {
            let grid = linspace(lo, hi.min(0.99), cfg.t_grid_size);
            items.push(item(c, ItemKind::ChainBelowClosed, Some(*spec), None, tol.identity));
            probes.push(points(grid.iter().copied()));
            items.push(item(c, ItemKind::ChainTight, Some(*spec), None, tol.tightness));
            probes.push(points(grid));
        }
        // The smoothed bound has a kink at T = eps by construction.
        if !matches!(spec, DivergenceSpec::SmoothedMax { .. }) {
            let bp = analytic::breakpoints(spec)?;
            let mut at: Vec<Probe> = points(bp.ts.iter().copied());
            at.extend(bp.lambdas.iter().map(|&lambda| Probe::Slope { lambda }));
            if !at.is_empty() {
                items.push(item(c, ItemKind::BreakpointValue, Some(*spec), None, tol.identity));
                probes.push(at.clone());
                items.push(item(c, ItemKind::BreakpointSlope, Some(*spec), None, tol.slope));
                probes.push(at);
            }
        }
        items.push(item(c, ItemKind::LegendreRoundTrip, Some(*spec), None, tol.legendre));
        probes.push(r.linear.lambdas.iter().map(|&lambda| Probe::Slope { lambda }).collect());
    }
    let ts = t_grid(cfg.t_grid_size);
    if renyi_chain().iter().any(|s| families.contains(s)) {
        items.push(item(c, ItemKind::RenyiOrdering, None, None, tol.identity));
        probes.push(points(ts.iter().copied()));
        items.push(item(c, ItemKind::RenyiOrderingNumeric, None, None, tol.tightness));
        probes.push(points(ts.iter().copied()));
    }
    if families.iter().any(|s| matches!(s, DivergenceSpec::NeymanChi2 | DivergenceSpec::PearsonChi2)) {
        items.push(item(c, ItemKind::Chi2Equality, None, None, tol.identity));
        probes.push(points(ts.iter().copied()));
    }
    if families.contains(&DivergenceSpec::Umegaki) {
        let spec = Some(DivergenceSpec::Umegaki);
        let curve: Vec<f64> = curve_grid();
        for (kind, tolerance) in [
            (ItemKind::CurveMonotone, 0.0),
            (ItemKind::CurveRoundTrip, tol.identity),
            (ItemKind::CurvePinsker, tol.identity),
        ] {
            items.push(item(c, kind, spec, None, tolerance));
            probes.push(points(curve.iter().copied()));
        }
    }
    let groups = separate(&probes);
    Ok((items, groups))
}

/// Log grid of the curve parameter from `1e-4` to `50`, successive points a
/// factor [`CURVE_RATIO`] apart.
fn curve_grid() -> Vec<f64> {
    let n = ((50.0f64 / 1e-4).ln() / CURVE_RATIO.ln()).ceil() as usize;
    (0..=n).map(|k| (1e-4 * CURVE_RATIO.powi(k as i32)).min(50.0)).collect()
}

fn smoothing_epsilons(cfg: &SuiteConfig) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for s in &cfg.families {
        match s.canonical() {
            DivergenceSpec::SmoothedMax { epsilon } => out.push(epsilon),
            DivergenceSpec::Max => out.extend(cfg.epsilons.iter().copied()),
            _ => {}
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn smoothing_plan(cfg: &SuiteConfig) -> (Vec<Item>, Vec<Group>) {
    let tol = &cfg.tolerances;
    let c = Check::Smoothing;
    let mut items = Vec::new();
    let mut probes: Vec<Vec<Probe>> = Vec::new();
    let ts = t_grid(cfg.t_grid_size);
    for epsilon in smoothing_epsilons(cfg) {
        let spec = Some(DivergenceSpec::SmoothedMax { epsilon });
        let (lambda_eps, lambda_max) = engine::smoothing_slopes(&max_closed(), epsilon).expect("epsilon validated");
        let mut with_one = ts.clone();
        with_one.push(1.0);

        items.push(item(c, ItemKind::ZeroRegion, spec, None, tol.identity));
        probes.push(points(linspace(0.0, epsilon, 21)));
        items.push(item(c, ItemKind::ShiftIdentity, spec, None, tol.identity));
        probes.push(points(with_one.iter().copied()));
        items.push(item(c, ItemKind::ShiftedChain, spec, None, tol.tightness));
        probes.push(points(with_one.iter().copied()));
        items.push(item(c, ItemKind::LinearShift, spec, None, tol.identity));
        probes.push(
            linspace(lambda_eps, lambda_max, 51).into_iter().skip(1).map(|lambda| Probe::Slope { lambda }).collect(),
        );
        items.push(item(c, ItemKind::OutOfDomain, spec, None, 0.0));
        probes.push(vec![Probe::Slope { lambda: lambda_max * 1.01 }, Probe::Slope { lambda: lambda_max * 10.0 }]);
        items.push(item(c, ItemKind::TangentValidity, spec, None, tol.identity));
        let slopes = linspace(0.0, lambda_max, 21);
        probes.push(
            slopes
                .iter()
                .flat_map(|&lambda| linspace(0.0, 1.0, 21).into_iter().map(move |t| Probe::Tangent { lambda, t }))
                .collect(),
        );
        items.push(item(c, ItemKind::BinaryDominance, spec, None, tol.dominance));
        probes.push((0..cfg.pairs_per_dim as u64).map(|index| Probe::Binary { index }).collect());
    }
    if cfg.families.iter().any(|s| matches!(s.canonical(), DivergenceSpec::Max | DivergenceSpec::SmoothedMax { .. })) {
        items.push(item(c, ItemKind::VanishingEpsilon, Some(DivergenceSpec::Max), None, tol.smoothing));
        probes.push(points(linspace(0.01, 0.99, cfg.t_grid_size)));
    }
    let groups = separate(&probes);
    (items, groups)
}

fn context_specs(cfg: &SuiteConfig) -> Vec<DivergenceSpec> {
    let mut specs = cfg.families.clone();
    if cfg.runs(Check::Consistency) && renyi_chain().iter().any(|s| cfg.families.iter().any(|f| f.canonical() == *s)) {
        specs.extend(renyi_chain());
    }
    if cfg.runs(Check::Smoothing) {
        specs.extend(smoothing_epsilons(cfg).into_iter().map(|epsilon| DivergenceSpec::SmoothedMax { epsilon }));
    }
    specs
}

fn section(cfg: &SuiteConfig, check: Check, ctx: &Context) -> Result<SectionReport> {
    let (items, groups) = match check {
        Check::Scatter => scatter_plan(cfg),
        Check::Dpi => dpi_plan(cfg),
        Check::Consistency => consistency_plan(cfg, ctx)?,
        Check::Smoothing => smoothing_plan(cfg),
    };
    run_section(check, items, groups, ctx)
}

fn run_single(cfg: &SuiteConfig, check: Check) -> Result<SectionReport> {
    cfg.validate()?;
    let only = SuiteConfig { checks: vec![check], ..cfg.clone() };
    let ctx = Context::build(cfg.seed, &context_specs(&only), &cfg.lambda_grid)?;
    section(&only, check, &ctx)
}

/// Sampled divergences dominate the bound; for the relative entropy also the
/// Pinsker parabola.
pub fn run_scatter_check(cfg: &SuiteConfig) -> Result<SectionReport> {
    run_single(cfg, Check::Scatter)
}

/// `D(rho || sigma) >= D_bin(classicalized) >= B(T)`, trace distance kept by
/// classicalization, and equality on commuting qubit pairs.
pub fn run_dpi_check(cfg: &SuiteConfig) -> Result<SectionReport> {
    run_single(cfg, Check::Dpi)
}

/// Chains against closed forms, breakpoints, the linear bound round trip,
/// Rényi ordering and the parametrized curve.
pub fn run_consistency_check(cfg: &SuiteConfig) -> Result<SectionReport> {
    run_single(cfg, Check::Consistency)
}

/// The smoothing transform of the max divergence.
pub fn run_smoothing_check(cfg: &SuiteConfig) -> Result<SectionReport> {
    run_single(cfg, Check::Smoothing)
}

/// Runs the configured checks in the order of [`Check::ALL`].
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = Context::build(cfg.seed, &context_specs(cfg), &cfg.lambda_grid)?;
    let sections =
        Check::ALL.into_iter().filter(|c| cfg.runs(*c)).map(|c| section(cfg, c, &ctx)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        config: cfg.clone(),
        passed: sections.iter().all(|s| s.passed),
        sections,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

/// Re-evaluates a counterexample in isolation. Returns its margin, and whether
/// it still fails at the recorded tolerance.
pub fn replay(cx: &Counterexample, lambda_grid: &LambdaGrid) -> Result<(f64, bool)> {
    let mut specs: Vec<DivergenceSpec> = cx.item.spec.into_iter().collect();
    if matches!(cx.item.kind, ItemKind::RenyiOrdering | ItemKind::RenyiOrderingNumeric) {
        specs.extend(renyi_chain());
    }
    let ctx = Context::build(cx.seed, &specs, lambda_grid)?;
    let pair = pair_for(&cx.probe, cx.seed)?;
    let obs = observe(&cx.item, &cx.probe, pair.as_ref(), &ctx)?
        .ok_or_else(|| Error::Unsupported(format!("probe {:?} for {}", cx.probe, cx.item.label())))?;
    Ok((obs.margin, !passes(obs.margin, cx.item.tolerance)))
}

/// Rebuilds a state from a counterexample dump.
pub fn undump(m: &MatrixDump) -> Result<DensityMatrix> {
    let n = m.len();
    let flat: Vec<quantum::C64> = m.iter().flatten().map(|&[re, im]| quantum::C64::new(re, im)).collect();
    if flat.len() != n * n {
        return Err(Error::InvalidState("matrix dump is not square".into()));
    }
    DensityMatrix::new(CMatrix::from_row_slice(n, n, &flat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(checks: Vec<Check>, families: Vec<DivergenceSpec>) -> SuiteConfig {
        SuiteConfig {
            families,
            dims: vec![2, 3],
            pairs_per_dim: 40,
            t_grid_size: 21,
            lambda_grid: LambdaGrid::Geometric { min: 1e-3, max: 1e4, n: 120 },
            checks,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let cfg =
            small(Check::ALL.to_vec(), vec![DivergenceSpec::Umegaki, DivergenceSpec::Collision, DivergenceSpec::Max]);
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_text());
    }

    #[test]
    fn zero_tolerance_fails_with_replayable_counterexample() {
        let mut cfg = small(vec![Check::Dpi], vec![DivergenceSpec::Umegaki]);
        cfg.tolerances = Tolerances::uniform(0.0);
        let report = run_suite(&cfg).unwrap();
        assert!(!report.passed);
        let failing = report.failures().next().unwrap();
        let cx = failing.counterexample.as_ref().unwrap();
        let (margin, fails) = replay(cx, &cfg.lambda_grid).unwrap();
        assert!(fails);
        assert_eq!(margin, cx.margin);
        if let Some(rho) = &cx.rho {
            assert!(undump(rho).is_ok());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small(vec![Check::Scatter, Check::Dpi], vec![DivergenceSpec::Fidelity, DivergenceSpec::NeymanChi2]);
        let a = run_suite(&cfg).unwrap().without_timing();
        let b = run_suite(&cfg).unwrap().without_timing();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn smoothing_filter_runs_only_smoothing_items() {
        let cfg = small(vec![Check::Smoothing], vec![DivergenceSpec::Max]);
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.sections.len(), 1);
        assert!(report.sections[0].items.iter().all(|i| i.item.check == Check::Smoothing));
        assert!(report.passed, "{}", report.to_text());
    }

    #[test]
    fn off_support_sample_is_infinite_for_max() {
        let cfg = small(vec![Check::Scatter], vec![DivergenceSpec::Max]);
        let section = run_scatter_check(&cfg).unwrap();
        let dom = &section.items[0];
        assert_eq!(dom.item.kind, ItemKind::Dominance);
        assert!(dom.infinite >= 1);
        assert!(dom.passed);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = SuiteConfig { dims: vec![1], ..SuiteConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = SuiteConfig { dims: vec![2], pairs_per_dim: 0, ..SuiteConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
