use approx::assert_relative_eq;
use pinsker::analytic::{self, umegaki_convex_bound};
use pinsker::catalog::{eval_binary, objective_xi, BinaryPair, DivergenceSpec};
use pinsker::engine::{self, ConvexBound, LambdaGrid, SolverOptions};
use pinsker::quantum::{
    classicalize, eval_quantum, sample_diagonal_pair, sample_pair, sample_rng, sample_state, trace_distance, z_pinch,
    RenyiVariant, StatePair,
};
use proptest::prelude::*;

fn all_specs() -> Vec<DivergenceSpec> {
    vec![
        DivergenceSpec::Fidelity,
        DivergenceSpec::Umegaki,
        DivergenceSpec::Renyi { alpha: 4.0 / 3.0 },
        DivergenceSpec::Renyi { alpha: 0.7 },
        DivergenceSpec::Renyi { alpha: 3.0 },
        DivergenceSpec::Collision,
        DivergenceSpec::Max,
        DivergenceSpec::Hellinger { alpha: 10.0 / 9.0 },
        DivergenceSpec::Hellinger { alpha: 1.5 },
        DivergenceSpec::NeymanChi2,
        DivergenceSpec::PearsonChi2,
        DivergenceSpec::SmoothedMax { epsilon: 0.2 },
    ]
}

fn bin(spec: &DivergenceSpec, r: f64, s: f64) -> f64 {
    eval_binary(spec, BinaryPair::new(r, s).unwrap()).unwrap().value()
}

fn interior() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

proptest! {
    #[test]
    fn faithful_on_the_diagonal(r in 0.0f64..=1.0) {
        for spec in all_specs() {
            prop_assert_eq!(bin(&spec, r, r), 0.0, "{}", spec);
        }
    }

    #[test]
    fn mirror_symmetry(r in interior(), s in interior()) {
        for spec in all_specs() {
            let (a, b) = (bin(&spec, r, s), bin(&spec, 1.0 - r, 1.0 - s));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn chi2_swap(r in 0.0f64..=1.0, s in 0.0f64..=1.0) {
        prop_assert_eq!(bin(&DivergenceSpec::NeymanChi2, r, s), bin(&DivergenceSpec::PearsonChi2, s, r));
    }

    #[test]
    fn renyi_from_hellinger(r in interior(), s in interior(), alpha in 1.05f64..4.0) {
        let renyi = bin(&DivergenceSpec::Renyi { alpha }, r, s);
        let hellinger = bin(&DivergenceSpec::Hellinger { alpha }, r, s);
        let linked = (1.0 + (alpha - 1.0) * hellinger).log2() / (alpha - 1.0);
        prop_assert!((renyi - linked).abs() <= 1e-10 * renyi.max(1.0), "{renyi} vs {linked}");
    }

    #[test]
    fn renyi_limits(r in interior(), s in interior()) {
        let renyi = |alpha: f64| bin(&DivergenceSpec::renyi(alpha).unwrap(), r, s);
        prop_assert!((renyi(1.0) - bin(&DivergenceSpec::Umegaki, r, s)).abs() <= 1e-10);
        prop_assert!((renyi(2.0) - bin(&DivergenceSpec::Collision, r, s)).abs() <= 1e-10);
        let large = bin(&DivergenceSpec::Renyi { alpha: 1e6 }, r, s);
        prop_assert!((large - bin(&DivergenceSpec::Max, r, s)).abs() <= 1e-4, "{large}");
    }

    #[test]
    fn renyi_monotone_in_order(r in interior(), s in interior()) {
        let chain = [
            DivergenceSpec::Fidelity,
            DivergenceSpec::Umegaki,
            DivergenceSpec::Renyi { alpha: 4.0 / 3.0 },
            DivergenceSpec::Collision,
            DivergenceSpec::Max,
        ];
        let values: Vec<f64> = chain.iter().map(|c| bin(c, r, s)).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "{values:?}");
        }
    }

    #[test]
    fn convex_bounds_below_binary_values(r in 0.0f64..=1.0, s in 0.0f64..=1.0) {
        let t = (r - s).abs();
        for spec in all_specs() {
            if let Some(b) = analytic::convex_bound_analytic(&spec, t).unwrap().value() {
                prop_assert!(bin(&spec, r, s) >= b - 1e-9, "{spec} at ({r}, {s})");
            }
        }
    }

    #[test]
    fn pinsker_dominance(t in 0.0f64..1.0) {
        prop_assert!(umegaki_convex_bound(t) >= analytic::pinsker(t) * (1.0 - 1e-12));
    }

    #[test]
    fn fidelity_is_bretagnolle_huber_and_smallest(t in 0.0f64..0.999) {
        let fidelity = analytic::convex_bound_analytic(&DivergenceSpec::Fidelity, t).unwrap().value().unwrap();
        assert_relative_eq!(fidelity, (1.0 / (1.0 - t * t)).log2(), max_relative = 1e-12, epsilon = 1e-15);
        for spec in [DivergenceSpec::Umegaki, DivergenceSpec::Collision, DivergenceSpec::Max] {
            let b = analytic::convex_bound_analytic(&spec, t).unwrap().value().unwrap();
            prop_assert!(b >= fidelity - 1e-12);
        }
    }

    #[test]
    fn chi2_closed_forms_coincide(t in 0.0f64..1.0) {
        let n = analytic::convex_bound_analytic(&DivergenceSpec::NeymanChi2, t).unwrap();
        let p = analytic::convex_bound_analytic(&DivergenceSpec::PearsonChi2, t).unwrap();
        let h = analytic::convex_bound_analytic(&DivergenceSpec::Hellinger { alpha: 2.0 }, t).unwrap();
        prop_assert_eq!(n, p);
        prop_assert_eq!(n, h);
    }

    #[test]
    fn vanishing_smoothing(t in 0.01f64..0.99) {
        let base = ConvexBound::closed_form(&DivergenceSpec::Max).unwrap();
        prop_assert!((engine::smooth_convex(&base, 1e-9, t) - base.eval(t)).abs() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classicalization_keeps_trace_distance_and_lowers_divergence(seed in any::<u64>(), dim in 2usize..=5) {
        let pair = sample_pair(seed, dim, 0).unwrap();
        let t = trace_distance(&pair);
        let binary = classicalize(&pair);
        prop_assert!((binary.trace_distance() - t).abs() <= 1e-10);
        for spec in all_specs().into_iter().filter(|s| !matches!(s, DivergenceSpec::SmoothedMax { .. })) {
            let c = eval_binary(&spec, binary).unwrap().value();
            for v in RenyiVariant::BOTH {
                // Petz-type orders above 2 are not monotone.
                if v == RenyiVariant::Petz && spec.alpha().is_some_and(|a| a > 2.0) && spec.has_quantum_variants() {
                    continue;
                }
                let q = eval_quantum(&spec, &pair, v).unwrap().value();
                prop_assert!(q >= c - 1e-9 * q.abs().max(1.0), "{spec} {v:?}: {q} < {c}");
            }
        }
    }

    #[test]
    fn commuting_pairs_are_classical(seed in any::<u64>()) {
        let pair = sample_diagonal_pair(seed, 2, 0).unwrap();
        let (r, s) = (pair.rho.matrix()[(0, 0)].re, pair.sigma.matrix()[(0, 0)].re);
        let b = BinaryPair::new(r, s).unwrap();
        for spec in all_specs().into_iter().filter(|s| !matches!(s, DivergenceSpec::SmoothedMax { .. })) {
            let c = eval_binary(&spec, b).unwrap().value();
            for v in RenyiVariant::BOTH {
                let q = eval_quantum(&spec, &pair, v).unwrap().value();
                prop_assert!((q - c).abs() <= 1e-10 * c.abs().max(1.0), "{spec} {v:?}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn sandwiched_below_petz(seed in any::<u64>(), dim in 2usize..=4, alpha in 1.01f64..4.0) {
        let pair = sample_pair(seed, dim, 0).unwrap();
        let spec = DivergenceSpec::Renyi { alpha };
        let petz = eval_quantum(&spec, &pair, RenyiVariant::Petz).unwrap().value();
        let sandwiched = eval_quantum(&spec, &pair, RenyiVariant::Sandwiched).unwrap().value();
        prop_assert!(sandwiched <= petz + 1e-10 * petz.max(1.0));
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = sample_rng(seed, dim, 0);
        let [a, b, c] = [(); 3].map(|_| sample_state(dim, &mut rng).unwrap());
        let d = |x: &pinsker::DensityMatrix, y: &pinsker::DensityMatrix| {
            trace_distance(&StatePair::new(x.clone(), y.clone()).unwrap())
        };
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-10);
    }

    #[test]
    fn z_pinch_is_idempotent_and_contracts(seed in any::<u64>()) {
        let pair = sample_pair(seed, 2, 0).unwrap();
        let (rho, sigma) = (z_pinch(&pair.rho).unwrap(), z_pinch(&pair.sigma).unwrap());
        let twice = z_pinch(&rho).unwrap();
        prop_assert!((twice.matrix() - rho.matrix()).norm() <= 1e-15);
        let before = eval_quantum(&DivergenceSpec::Umegaki, &pair, RenyiVariant::Petz).unwrap().value();
        let after = eval_quantum(&DivergenceSpec::Umegaki, &StatePair::new(rho, sigma).unwrap(), RenyiVariant::Petz)
            .unwrap()
            .value();
        prop_assert!(after <= before + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tangent_lines_hold_on_the_triangle(lambda in 0.0f64..20.0, k in 0usize..4) {
        let spec = [DivergenceSpec::Umegaki, DivergenceSpec::Collision, DivergenceSpec::Hellinger { alpha: 1.5 }, DivergenceSpec::Max][k];
        let l = engine::linear_bound_numeric(&spec, lambda).unwrap().value;
        let n = 60;
        for i in 0..=n {
            for j in 0..=i {
                let p = BinaryPair::new(i as f64 / n as f64, j as f64 / n as f64).unwrap();
                let xi = objective_xi(&spec, lambda, p).unwrap();
                prop_assert!(xi >= l - 1e-9, "{spec} lambda={lambda}: xi({p:?}) = {xi} < {l}");
            }
        }
    }

    #[test]
    fn warm_and_cold_starts_agree(lambda in 0.0f64..30.0, k in 0usize..4) {
        let spec = [DivergenceSpec::Umegaki, DivergenceSpec::Renyi { alpha: 4.0 / 3.0 }, DivergenceSpec::NeymanChi2, DivergenceSpec::Max][k];
        let opts = SolverOptions::default();
        let cold = engine::linear_bound_numeric_with(&spec, lambda, None, &opts).unwrap();
        let warm_from = engine::linear_bound_numeric(&spec, lambda * 1.01 + 0.01).unwrap().pair;
        let warm = engine::linear_bound_numeric_with(&spec, lambda, Some(warm_from), &opts).unwrap();
        prop_assert!((cold.value - warm.value).abs() <= 1e-8, "{} vs {}", cold.value, warm.value);
    }
}

#[test]
fn linear_bound_is_concave_and_chain_convex_increasing() {
    let grid = LambdaGrid::Geometric { min: 1e-2, max: 50.0, n: 80 };
    for spec in [DivergenceSpec::Umegaki, DivergenceSpec::Collision, DivergenceSpec::Renyi { alpha: 4.0 / 3.0 }] {
        let lb = engine::build_linear_bound(&spec, &grid).unwrap();
        for w in lb.lambdas.windows(3).zip(lb.values.windows(3)) {
            let ([a, b, c], [fa, fb, fc]) = (w.0, w.1) else { unreachable!() };
            let interp = fa + (fc - fa) * (b - a) / (c - a);
            assert!(*fb >= interp - 1e-9, "{spec}: concavity fails at {b}");
        }
        let chain = engine::build_chain(&lb).unwrap();
        let ts: Vec<f64> = (0..=98).map(|k| k as f64 / 99.0).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| chain.eval(t)).collect();
        for w in vals.windows(3) {
            assert!(w[1] >= w[0] - 1e-12, "{spec}: chain decreases");
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9, "{spec}: chain not convex");
        }
    }
}

#[test]
fn renyi_near_one_approaches_relative_entropy() {
    let spec = DivergenceSpec::Renyi { alpha: 1.0 + 1e-6 };
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let numeric = engine::pointwise_bound(&spec, t).unwrap();
        assert!((numeric - umegaki_convex_bound(t)).abs() <= 1e-4, "T={t}: {numeric}");
    }
}
