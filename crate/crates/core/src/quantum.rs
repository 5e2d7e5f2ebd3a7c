//! Small dense density matrices: trace distance, quantum divergences, the
//! classicalization and z-pinching channels, and Ginibre sampling.

use std::f64::consts::LN_2;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{BinaryPair, DivergenceSpec, XReal};
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Entrywise Hermiticity, trace and eigenvalue tolerance of [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues at or below this count as zero in support decisions.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Weight `tr((I - P_sigma) rho)` allowed outside the support of `sigma`.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix with a cached
/// eigendecomposition. Eigenvalues in `[-1e-12, 0)` are stored as 0.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::InvalidState(format!("matrix is {}x{}, not square", n, matrix.ncols())));
        }
        if n < 2 {
            return Err(Error::InvalidState("dimension must be at least 2".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        for i in 0..n {
            for j in i..n {
                let gap = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if gap > STATE_TOL {
                    return Err(Error::InvalidState(format!(
                        "not Hermitian: entry ({i},{j}) differs from its conjugate transpose by {gap:e}"
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let hermitian = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let eig = hermitian.clone().symmetric_eigen();
        if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
            if min < -STATE_TOL {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(DensityMatrix {
            matrix: hermitian,
            eigenvalues: eig.eigenvalues.map(|v| v.max(0.0)),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `diag(p_1, ..., p_n)`.
    pub fn from_real_diagonal(diagonal: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(diagonal.len(), diagonal.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&v))
    }

    /// `diag(r, 1 - r)`.
    pub fn binary(r: f64) -> Result<Self> {
        Self::from_real_diagonal(&[r, 1.0 - r])
    }

    /// The projector onto the normalized vector `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let v = v.unscale(norm);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::from_real_diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() == 0.0))
    }

    /// `rho^p` on the support of `rho` (eigenvalues above the cutoff); negative
    /// powers act as the pseudo-inverse power.
    pub fn power(&self, p: f64) -> CMatrix {
        spectral_apply(&self.eigenvalues, &self.eigenvectors, |v| (v > SUPPORT_CUTOFF).then(|| v.powf(p)))
    }

    fn support_projector(&self) -> CMatrix {
        spectral_apply(&self.eigenvalues, &self.eigenvectors, |v| (v > SUPPORT_CUTOFF).then_some(1.0))
    }

    /// Weight of `other` outside the support of `self`, `tr((I - P) other)`.
    fn weight_outside_support(&self, other: &DensityMatrix) -> f64 {
        let inside = (self.support_projector() * &other.matrix).trace().re;
        (1.0 - inside).max(0.0)
    }
}

fn spectral_apply(values: &DVector<f64>, vectors: &CMatrix, f: impl Fn(f64) -> Option<f64>) -> CMatrix {
    let n = vectors.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        if let Some(w) = f(v) {
            let col = vectors.column(k);
            out += (col * col.adjoint()) * C64::new(w, 0.0);
        }
    }
    out
}

/// Two states of equal dimension.
#[derive(Clone, Debug)]
pub struct StatePair {
    pub rho: DensityMatrix,
    pub sigma: DensityMatrix,
}

impl StatePair {
    pub fn new(rho: DensityMatrix, sigma: DensityMatrix) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
        }
        Ok(StatePair { rho, sigma })
    }

    /// The diagonal pair `diag(r, 1 - r)`, `diag(s, 1 - s)`.
    pub fn binary(pair: BinaryPair) -> Result<Self> {
        Self::new(DensityMatrix::binary(pair.r())?, DensityMatrix::binary(pair.s())?)
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn swapped(&self) -> Self {
        StatePair { rho: self.sigma.clone(), sigma: self.rho.clone() }
    }

    /// `rho << sigma`, decided on the eigenvalue cutoff of `sigma`.
    pub fn rho_in_support(&self) -> bool {
        self.sigma.weight_outside_support(&self.rho) <= SUPPORT_TOL
    }

    fn difference(&self) -> nalgebra::linalg::SymmetricEigen<C64, nalgebra::Dyn> {
        let d = self.rho.matrix() - self.sigma.matrix();
        ((&d + d.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen()
    }
}

/// A point `(T, D)` of a sampled state pair, with the indices needed to
/// regenerate the pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatterSample {
    pub t: f64,
    pub d: XReal,
    pub dim: usize,
    pub seed: u64,
    pub index: u64,
}

/// Quantum extension used for Rényi-type families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenyiVariant {
    Petz,
    Sandwiched,
}

impl RenyiVariant {
    pub const BOTH: [RenyiVariant; 2] = [RenyiVariant::Petz, RenyiVariant::Sandwiched];
}

/// `T(rho, sigma) = 1/2 sum |eig(rho - sigma)|`.
pub fn trace_distance(pair: &StatePair) -> f64 {
    let eig = pair.difference();
    (0.5 * eig.eigenvalues.iter().map(|v| v.abs()).sum::<f64>()).clamp(0.0, 1.0)
}

/// Projects both states onto the nonnegative and negative eigenspaces of
/// `rho - sigma`. Zero eigenvalues go to the nonnegative part.
pub fn classicalize(pair: &StatePair) -> BinaryPair {
    let eig = pair.difference();
    let (mut r, mut s) = (0.0, 0.0);
    for (k, &v) in eig.eigenvalues.iter().enumerate() {
        if v >= -SUPPORT_CUTOFF {
            let col = eig.eigenvectors.column(k);
            r += (col.adjoint() * pair.rho.matrix() * col)[(0, 0)].re;
            s += (col.adjoint() * pair.sigma.matrix() * col)[(0, 0)].re;
        }
    }
    let r = r.clamp(0.0, 1.0);
    let s = s.clamp(0.0, r);
    BinaryPair::new_unchecked(r, s)
}

/// Deletes the off-diagonal entries of a qubit state.
pub fn z_pinch(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(rho.dim(), 2));
    }
    let m = rho.matrix();
    DensityMatrix::from_real_diagonal(&[m[(0, 0)].re, m[(1, 1)].re])
}

/// `sum_ij p_i^alpha q_j^(1 - alpha) |<u_i|v_j>|^2`, the Petz quasi-entropy.
fn petz_q(pair: &StatePair, alpha: f64) -> f64 {
    let (p, u) = (pair.rho.eigenvalues(), pair.rho.eigenvectors());
    let (q, v) = (pair.sigma.eigenvalues(), pair.sigma.eigenvectors());
    let overlaps = u.adjoint() * v;
    let mut total = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= SUPPORT_CUTOFF {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            if qj <= SUPPORT_CUTOFF {
                continue;
            }
            let w = overlaps[(i, j)].norm_sqr();
            total += w * (alpha * pi.ln() + (1.0 - alpha) * qj.ln()).exp();
        }
    }
    total
}

/// `tr((sigma^g rho sigma^g)^alpha)` with `g = (1 - alpha) / (2 alpha)`.
fn sandwiched_q(pair: &StatePair, alpha: f64) -> f64 {
    let g = (1.0 - alpha) / (2.0 * alpha);
    let side = pair.sigma.power(g);
    let m = &side * pair.rho.matrix() * &side;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    m.symmetric_eigen().eigenvalues.iter().filter(|&&v| v > 0.0).map(|v| v.powf(alpha)).sum()
}

fn relative_entropy_bits(pair: &StatePair) -> f64 {
    let (p, u) = (pair.rho.eigenvalues(), pair.rho.eigenvectors());
    let (q, v) = (pair.sigma.eigenvalues(), pair.sigma.eigenvectors());
    let overlaps = u.adjoint() * v;
    let mut total = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        total += pi * pi.log2();
        for (j, &qj) in q.iter().enumerate() {
            if qj > SUPPORT_CUTOFF {
                total -= pi * overlaps[(i, j)].norm_sqr() * qj.log2();
            }
        }
    }
    total
}

fn max_divergence(pair: &StatePair) -> f64 {
    let inv_sqrt = pair.sigma.power(-0.5);
    let m = &inv_sqrt * pair.rho.matrix() * &inv_sqrt;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let top = m.symmetric_eigen().eigenvalues.iter().copied().fold(0.0, f64::max);
    top.log2()
}

/// `tr((rho - sigma) w^-1 (rho - sigma))` with `w` the weighting state.
fn chi2(pair: &StatePair, weight: &DensityMatrix) -> f64 {
    let d = pair.rho.matrix() - pair.sigma.matrix();
    (&d * weight.power(-1.0) * &d).trace().re
}

fn renyi_from_q(q: f64, alpha: f64) -> f64 {
    if q <= 0.0 {
        f64::INFINITY
    } else {
        q.log2() / (alpha - 1.0)
    }
}

/// Quantum divergence by spectral decomposition. `variant` only matters for
/// Rényi-type families; Hellinger and chi-squared use the Petz-type trace
/// forms. Support failures give `+inf`.
pub fn eval_quantum(spec: &DivergenceSpec, pair: &StatePair, variant: RenyiVariant) -> Result<XReal> {
    spec.validate()?;
    let spec = spec.canonical();
    let in_support = || pair.rho_in_support();
    let value = match spec {
        DivergenceSpec::SmoothedMax { .. } => {
            return Err(Error::Unsupported("quantum evaluation of the smoothed max divergence".into()))
        }
        DivergenceSpec::Umegaki => {
            if in_support() {
                relative_entropy_bits(pair)
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::Hellinger { alpha: 1.0 } => {
            if in_support() {
                relative_entropy_bits(pair) * LN_2
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::Hellinger { alpha } => {
            if in_support() {
                (petz_q(pair, alpha) - 1.0) / (alpha - 1.0)
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::NeymanChi2 => {
            if in_support() {
                chi2(pair, &pair.sigma)
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::PearsonChi2 => {
            if pair.swapped().rho_in_support() {
                chi2(pair, &pair.rho)
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::Max => {
            if in_support() {
                max_divergence(pair)
            } else {
                f64::INFINITY
            }
        }
        DivergenceSpec::Fidelity | DivergenceSpec::Collision | DivergenceSpec::Renyi { .. } => {
            let alpha = spec.alpha().expect("renyi-type spec has an order");
            if alpha > 1.0 && !in_support() {
                f64::INFINITY
            } else {
                let q = match variant {
                    RenyiVariant::Petz => petz_q(pair, alpha),
                    RenyiVariant::Sandwiched => sandwiched_q(pair, alpha),
                };
                renyi_from_q(q, alpha)
            }
        }
    };
    Ok(XReal::from_raw(value))
}

/// Ginibre state `G G^dagger / tr(G G^dagger)` with standard complex Gaussian
/// entries.
pub fn sample_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::ParameterDomain(format!("dimension must be at least 2, got {dim}")));
    }
    let g = CMatrix::from_fn(dim, dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let w = &g * g.adjoint();
    let trace = w.trace().re;
    DensityMatrix::new(w.unscale(trace))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for sample `index` of the stream `(seed, dim)`. Any sample can be
/// regenerated on its own from these three numbers.
pub fn sample_rng(seed: u64, dim: usize, index: u64) -> ChaCha8Rng {
    let key = splitmix(splitmix(splitmix(seed) ^ dim as u64) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

/// Ginibre pair number `index` of the stream `(seed, dim)`.
pub fn sample_pair(seed: u64, dim: usize, index: u64) -> Result<StatePair> {
    let mut rng = sample_rng(seed, dim, index);
    let rho = sample_state(dim, &mut rng)?;
    let sigma = sample_state(dim, &mut rng)?;
    StatePair::new(rho, sigma)
}

/// Jointly diagonal pair with Dirichlet(1, ..., 1) diagonals.
pub fn sample_diagonal_pair(seed: u64, dim: usize, index: u64) -> Result<StatePair> {
    let mut rng = sample_rng(seed ^ 0xD1A6_0000_0000_0000, dim, index);
    let mut simplex = || -> Vec<f64> {
        let w: Vec<f64> = (0..dim).map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
        let total: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.into_iter().map(|x| x / total).collect();
        // Close the trace exactly, so a qubit diagonal is `(r, 1 - r)`.
        let head: f64 = p[..dim - 1].iter().sum();
        p[dim - 1] = (1.0 - head).max(0.0);
        p
    };
    let (p, q) = (simplex(), simplex());
    StatePair::new(DensityMatrix::from_real_diagonal(&p)?, DensityMatrix::from_real_diagonal(&q)?)
}

/// `(T, D)` for pairs `0..n` of the stream `(seed, dim)`, Ginibre or jointly
/// diagonal.
pub fn scatter(
    spec: &DivergenceSpec,
    variant: RenyiVariant,
    dim: usize,
    n: usize,
    seed: u64,
    diagonal: bool,
) -> Result<Vec<ScatterSample>> {
    spec.validate()?;
    (0..n as u64)
        .into_par_iter()
        .map(|index| {
            let pair = if diagonal { sample_diagonal_pair(seed, dim, index)? } else { sample_pair(seed, dim, index)? };
            Ok(ScatterSample { t: trace_distance(&pair), d: eval_quantum(spec, &pair, variant)?, dim, seed, index })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_list, eval_binary};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket0() -> DensityMatrix {
        DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap()
    }

    fn ket_plus() -> DensityMatrix {
        DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap()
    }

    fn pair(r: &[f64], s: &[f64]) -> StatePair {
        StatePair::new(DensityMatrix::from_real_diagonal(r).unwrap(), DensityMatrix::from_real_diagonal(s).unwrap())
            .unwrap()
    }

    #[test]
    fn trace_distance_examples() {
        let p = pair(&[1.0, 0.0], &[0.5, 0.5]);
        assert_abs_diff_eq!(trace_distance(&p), 0.5, epsilon = 1e-15);
        let same = StatePair::new(ket_plus(), ket_plus()).unwrap();
        assert_abs_diff_eq!(trace_distance(&same), 0.0, epsilon = 1e-15);
        let q = StatePair::new(ket0(), ket_plus()).unwrap();
        assert_abs_diff_eq!(trace_distance(&q), FRAC_1_SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn quantum_examples() {
        let p = pair(&[1.0, 0.0], &[0.5, 0.5]);
        let v = eval_quantum(&DivergenceSpec::Max, &p, RenyiVariant::Petz).unwrap();
        assert_abs_diff_eq!(v.value(), 1.0, epsilon = 1e-14);
        let q = StatePair::new(ket0(), ket_plus()).unwrap();
        let sandwiched = eval_quantum(&DivergenceSpec::Fidelity, &q, RenyiVariant::Sandwiched).unwrap();
        assert_abs_diff_eq!(sandwiched.value(), 1.0, epsilon = 1e-12);
        // tr(sqrt(rho) sqrt(sigma)) = |<0|+>|^2 = 1/2 for pure states.
        let petz = eval_quantum(&DivergenceSpec::Fidelity, &q, RenyiVariant::Petz).unwrap();
        assert_abs_diff_eq!(petz.value(), 2.0, epsilon = 1e-12);
        assert!(eval_quantum(&DivergenceSpec::Umegaki, &q, RenyiVariant::Petz).unwrap().is_infinite());
        let same = StatePair::new(ket_plus(), ket_plus()).unwrap();
        assert_eq!(eval_quantum(&DivergenceSpec::Umegaki, &same, RenyiVariant::Petz).unwrap().value(), 0.0);
        assert!(eval_quantum(&DivergenceSpec::SmoothedMax { epsilon: 0.1 }, &p, RenyiVariant::Petz).is_err());
    }

    #[test]
    fn commuting_pairs_reduce_to_binary() {
        let families: Vec<DivergenceSpec> = catalog_list()
            .into_iter()
            .map(|e| e.example)
            .filter(|s| s.family() != crate::catalog::Family::SmoothedMax)
            .chain([DivergenceSpec::Hellinger { alpha: 1.0 }, DivergenceSpec::Renyi { alpha: 3.0 }])
            .collect();
        for (r, s) in [(0.3, 0.8), (0.9, 0.1), (0.55, 0.5)] {
            let bp = BinaryPair::new(r, s).unwrap();
            let qp = StatePair::binary(bp).unwrap();
            for spec in &families {
                for variant in RenyiVariant::BOTH {
                    let q = eval_quantum(spec, &qp, variant).unwrap().value();
                    let b = eval_binary(spec, bp).unwrap().value();
                    assert!((q - b).abs() <= 1e-10 * b.max(1.0), "{spec} {variant:?} {q} {b}");
                }
            }
        }
    }

    #[test]
    fn classicalize_examples() {
        let p = pair(&[1.0, 0.0], &[0.5, 0.5]);
        let c = classicalize(&p);
        assert_abs_diff_eq!(c.r(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.s(), 0.5, epsilon = 1e-15);
        let q = StatePair::new(ket0(), ket_plus()).unwrap();
        let c = classicalize(&q);
        assert_abs_diff_eq!(c.r() - c.s(), FRAC_1_SQRT_2, epsilon = 1e-12);
        let same = StatePair::new(ket_plus(), ket_plus()).unwrap();
        let c = classicalize(&same);
        assert_eq!(c.r() - c.s(), 0.0);
    }

    #[test]
    fn z_pinch_examples() {
        let plus = z_pinch(&ket_plus()).unwrap();
        assert_abs_diff_eq!(plus.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_eq!(plus.matrix()[(0, 1)].norm(), 0.0);
        let d = DensityMatrix::binary(0.3).unwrap();
        assert_eq!(z_pinch(&d).unwrap().matrix(), d.matrix());
        let big = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(z_pinch(&big).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let a = sample_pair(7, 2, 3).unwrap();
        let b = sample_pair(7, 2, 3).unwrap();
        assert_eq!(a.rho.matrix(), b.rho.matrix());
        let c = sample_pair(7, 2, 4).unwrap();
        assert_ne!(a.rho.matrix(), c.rho.matrix());
        let s = sample_state(4, &mut sample_rng(1, 4, 0)).unwrap();
        assert_abs_diff_eq!(s.eigenvalues().sum(), 1.0, epsilon = 1e-12);
        assert!(s.eigenvalues().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn ginibre_mean_is_maximally_mixed() {
        let mut mean = CMatrix::zeros(3, 3);
        for seed in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            mean += sample_state(3, &mut rng).unwrap().matrix();
        }
        mean /= C64::new(1000.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert!((mean[(i, j)] - C64::new(expected, 0.0)).norm() < 0.05);
            }
        }
    }

    #[test]
    fn invalid_states_rejected() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.5, 0.0), C64::new(0.1, 0.0), C64::new(0.2, 0.0), C64::new(0.5, 0.0)],
        );
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::from_real_diagonal(&[0.7, 0.7]).is_err());
        assert!(DensityMatrix::from_real_diagonal(&[1.5, -0.5]).is_err());
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(StatePair::new(a, b), Err(Error::DimensionMismatch(2, 3))));
    }
}
