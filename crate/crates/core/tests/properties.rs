use approx::assert_relative_eq;
use proptest::prelude::*;

use kaehler_core::connection::{
    connection_closed_form, curvature_closed_form, holomorphic_sectional_curvature, koszul_connection,
};
use kaehler_core::cotangent::EnergyDensity;
use kaehler_core::jet::{fd_gradient, jet_eval};
use kaehler_core::kaehler::{almost_complex_j, hermitian_residual, j_squared_residual, metric_g};
use kaehler_core::linalg::Mat;
use kaehler_core::report::{run_verification, to_sci_json, ModelKind, RunConfig};
use kaehler_core::sampling::{sample_point_and_direction, sample_points};
use kaehler_core::space_form::ConformalFactor;
use kaehler_core::{LiftParameters, SpaceFormModel, VMode};

fn model_strategy() -> impl Strategy<Value = (SpaceFormModel, f64)> {
    (2usize..=4, -2.0f64..2.0, 0.5f64..3.0).prop_map(|(n, c, a)| (SpaceFormModel::new(n, c).unwrap(), a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jet_gradient_matches_central_differences((m, a) in model_strategy(), seed in any::<u64>()) {
        let l = LiftParameters::integrable(a).unwrap();
        let pt = &sample_points(&m, &l, 1, seed)[0];
        let h = 1e-5;
        let lam = jet_eval(&ConformalFactor(m.clone()), &pt.q, 1).unwrap();
        let fd = fd_gradient(&ConformalFactor(m.clone()), &pt.q, h).unwrap();
        for (x, y) in lam.partials.iter().zip(&fd) {
            prop_assert!((x - y).abs() < 1e-6 * (1.0 + x.abs()), "{x} vs {y}");
        }
        let z = pt.coords();
        let t = jet_eval(&EnergyDensity(m.clone()), &z, 1).unwrap();
        let fd = fd_gradient(&EnergyDensity(m.clone()), &z, h).unwrap();
        for (x, y) in t.partials.iter().zip(&fd) {
            prop_assert!((x - y).abs() < 1e-5 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn spd_inverse_is_two_sided(entries in prop::collection::vec(-1.0f64..1.0, 16), shift in 0.1f64..5.0) {
        let b = Mat::from_fn(4, |i, j| entries[4 * i + j]);
        let spd = b.transpose().mul(&b).add(&Mat::identity(4).scale(shift));
        let inv = spd.inverse_spd().unwrap();
        prop_assert!(spd.mul(&inv).sub(&Mat::identity(4)).max_abs() < 1e-9);
        prop_assert!(inv.mul(&spd).sub(&Mat::identity(4)).max_abs() < 1e-9);
    }

    #[test]
    fn almost_hermitian_for_any_v((m, a) in model_strategy(), v in -0.2f64..2.0, seed in any::<u64>()) {
        for l in [LiftParameters::integrable(a).unwrap(), LiftParameters::new(a, VMode::Override(v)).unwrap()] {
            for pt in sample_points(&m, &l, 3, seed) {
                prop_assert!(j_squared_residual(&m, &l, &pt).unwrap() < 1e-9);
                prop_assert!(hermitian_residual(&m, &l, &pt).unwrap() < 1e-9);
                let g = metric_g(&m, &l, &pt).unwrap();
                prop_assert!(g.is_positive_definite());
                prop_assert!(g.sub(&g.transpose()).max_abs() == 0.0);
            }
        }
    }

    #[test]
    fn levi_civita_oracles_agree_for_any_v((m, a) in model_strategy(), v in -0.2f64..2.0, seed in any::<u64>()) {
        let l = LiftParameters::new(a, VMode::Override(v)).unwrap();
        let pt = &sample_points(&m, &l, 1, seed)[0];
        let k = koszul_connection(&m, &l, pt).unwrap().coefficients;
        let c = connection_closed_form(&m, &l, pt).unwrap().coefficients;
        prop_assert!(k.max_abs_diff(&c).unwrap() < 1e-8);
    }

    #[test]
    fn lowered_curvature_symmetries((m, a) in model_strategy(), seed in any::<u64>()) {
        let l = LiftParameters::integrable(a).unwrap();
        let pt = &sample_points(&m, &l, 1, seed)[0];
        let k = curvature_closed_form(&m, &l, pt).unwrap().curvature;
        let g = metric_g(&m, &l, pt).unwrap();
        let dim = g.size();
        // R(a, b, c, e) = G(K(E_a, E_b) E_c, E_e)
        let r = |a: usize, b: usize, c: usize, e: usize| (0..dim).map(|d| k.get(&[d, a, b, c]) * g[(d, e)]).sum::<f64>();
        let mut worst = 0.0f64;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for e in 0..dim {
                        let x = r(a, b, c, e);
                        worst = worst
                            .max((x + r(b, a, c, e)).abs())
                            .max((x + r(a, b, e, c)).abs())
                            .max((x - r(c, e, a, b)).abs())
                            .max((x + r(b, c, a, e) + r(c, a, b, e)).abs());
                    }
                }
            }
        }
        prop_assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn holomorphic_curvature_is_j_invariant((m, a) in model_strategy(), seed in any::<u64>(), index in 0u64..1000) {
        let l = LiftParameters::integrable(a).unwrap();
        let (pt, x) = sample_point_and_direction(&m, &l, seed, index);
        let h = holomorphic_sectional_curvature(&m, &l, &pt, &x).unwrap();
        let jx = almost_complex_j(&m, &l, &pt).unwrap().mul_vec(&x);
        let hj = holomorphic_sectional_curvature(&m, &l, &pt, &jx).unwrap();
        assert_relative_eq!(h, hj, epsilon = 1e-9, max_relative = 1e-9);
    }
}

#[test]
fn report_json_round_trips_exactly() {
    let mut cfg = RunConfig::new(ModelKind::Hyperbolic, -0.7, 1.3, 3);
    cfg.samples = 4;
    let report = run_verification(&cfg).unwrap();
    let text = report.to_json();
    assert_eq!(text, to_sci_json(&report));
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    for (rec, json) in report.checks.iter().zip(parsed["checks"].as_array().unwrap()) {
        assert_eq!(json["max_abs_residual"].as_f64().unwrap(), rec.max_abs_residual);
    }
    let h = report.holomorphic.as_ref().unwrap();
    let back = parsed["holomorphic"]["samples"].as_array().unwrap();
    for (s, j) in h.samples.iter().zip(back) {
        assert_eq!(j["value"].as_f64().unwrap(), s.value);
    }
}
