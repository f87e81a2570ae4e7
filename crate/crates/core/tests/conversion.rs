mod common;

use common::{rel, seeded_uniform};
use proptest::prelude::*;
use qfc::conversion::*;

const LENGTH_M: f64 = 0.01997;

fn sfg_fixed() -> FixedParameters {
    let overlap = beam_overlap_fraction(&BeamGeometry::new(43.2, 63.3).unwrap());
    FixedParameters::new(LENGTH_M, overlap, 1.0).unwrap()
}

fn synthetic(model: &ConversionModel, powers: &[f64]) -> Vec<EfficiencyPoint> {
    powers
        .iter()
        .map(|&p| EfficiencyPoint {
            pump_w: p,
            eta_ext: model.efficiency(p).unwrap(),
        })
        .collect()
}

#[test]
fn single_point_fit_predicts_lower_power() {
    let fixed = FixedParameters::new(LENGTH_M, 0.466, 1.0).unwrap();
    let fit = fit_normalized_efficiency(
        &[EfficiencyPoint {
            pump_w: 0.180,
            eta_ext: 0.094,
        }],
        fixed,
    )
    .unwrap();
    assert!((fit.model.efficiency(0.180).unwrap() - 0.094).abs() < 1e-9);
    let at_120 = fit.model.efficiency(0.120).unwrap();
    assert!((at_120 - 0.063).abs() <= 0.005, "{at_120}");
    // Above the linear estimate: sin²(a·sqrt(P)) is concave in P.
    assert!(at_120 > 0.094 * 120.0 / 180.0);
}

#[test]
fn zero_noise_recovery() {
    let fixed = sfg_fixed();
    let truth = ConversionModel::new(2.3e3, LENGTH_M, 1.0, fixed.overlap).unwrap();
    let points = synthetic(&truth, &[0.0, 0.03, 0.06, 0.09, 0.12, 0.15, 0.18]);
    let fit = fit_normalized_efficiency(&points, fixed).unwrap();
    assert!(
        rel(fit.model.eta_nor, truth.eta_nor) < 1e-6,
        "{}",
        fit.model.eta_nor
    );
    assert_eq!(fit.points_used, 6);
    assert!(fit.residual < 1e-9);
}

#[test]
fn noisy_recovery_within_five_percent() {
    let fixed = sfg_fixed();
    let truth = ConversionModel::new(2.3e3, LENGTH_M, 1.0, fixed.overlap).unwrap();
    let powers: Vec<f64> = (1..=12).map(|i| 0.015 * i as f64).collect();
    let jitter = seeded_uniform(7, powers.len(), -0.01, 0.01);
    let points: Vec<_> = synthetic(&truth, &powers)
        .into_iter()
        .zip(jitter)
        .map(|(p, j)| EfficiencyPoint {
            eta_ext: p.eta_ext * (1.0 + j),
            ..p
        })
        .collect();
    let fit = fit_normalized_efficiency(&points, fixed).unwrap();
    assert!(rel(fit.model.eta_nor, truth.eta_nor) < 0.05);
    assert!(fit.residual > 0.0 && fit.residual.is_finite());
}

#[test]
fn fit_is_idempotent() {
    let fixed = sfg_fixed();
    let measured = [
        EfficiencyPoint {
            pump_w: 0.06,
            eta_ext: 0.031,
        },
        EfficiencyPoint {
            pump_w: 0.12,
            eta_ext: 0.060,
        },
        EfficiencyPoint {
            pump_w: 0.18,
            eta_ext: 0.094,
        },
    ];
    let first = fit_normalized_efficiency(&measured, fixed).unwrap();
    let regenerated = synthetic(&first.model, &[0.06, 0.12, 0.18]);
    let second = fit_normalized_efficiency(&regenerated, fixed).unwrap();
    assert!(rel(second.model.eta_nor, first.model.eta_nor) < 1e-9);
}

#[test]
fn fit_is_deterministic() {
    let fixed = sfg_fixed();
    let pts = [
        EfficiencyPoint {
            pump_w: 0.1,
            eta_ext: 0.05,
        },
        EfficiencyPoint {
            pump_w: 0.2,
            eta_ext: 0.09,
        },
    ];
    let a = fit_normalized_efficiency(&pts, fixed).unwrap();
    let b = fit_normalized_efficiency(&pts, fixed).unwrap();
    assert_eq!(a, b);
}

#[test]
fn monotone_and_bounded_to_first_peak() {
    let m = ConversionModel::new(2.3e3, LENGTH_M, 0.9, 0.466).unwrap();
    let p_peak = m.first_peak_power_w();
    let mut last = -1.0;
    for i in 0..=1000 {
        let eta = m.efficiency(p_peak * i as f64 / 1000.0).unwrap();
        assert!(eta >= last);
        assert!(eta <= m.ceiling() + 1e-15);
        last = eta;
    }
    assert!(rel(last, m.ceiling()) < 1e-12);
}

#[test]
fn small_signal_linearity() {
    let m = ConversionModel::new(2.3e3, LENGTH_M, 1.0, 0.466).unwrap();
    // L·sqrt(eta_nor·P) = 0.1 defines the edge of the small-signal region.
    let p_edge = (0.1 / LENGTH_M).powi(2) / m.eta_nor;
    let slope = |p: f64| m.efficiency(p).unwrap() / p;
    let reference = slope(p_edge * 1e-6);
    for f in [0.01, 0.1, 0.5, 1.0] {
        assert!(rel(slope(p_edge * f), reference) < 5e-3);
    }
    // Finite-difference slope agrees with the secant slope at the edge.
    let h = p_edge * 1e-4;
    let fd = (m.efficiency(p_edge + h).unwrap() - m.efficiency(p_edge - h).unwrap()) / (2.0 * h);
    assert!(rel(fd, reference) < 1e-2);
}

proptest! {
    #[test]
    fn efficiency_within_ceiling(eta_nor in 1.0f64..1e5, p in 0.0f64..5.0, ov in 0.0f64..=1.0, emax in 0.01f64..=1.0) {
        let m = ConversionModel::new(eta_nor, LENGTH_M, emax, ov).unwrap();
        let e = m.efficiency(p).unwrap();
        prop_assert!(e >= 0.0 && e <= m.ceiling() + 1e-15);
    }

    #[test]
    fn overlap_is_a_fraction(wp in 1.0f64..500.0, wi in 1.0f64..500.0) {
        let f = BeamGeometry::new(wp, wi).unwrap().overlap_fraction();
        prop_assert!((0.0..=1.0).contains(&f));
    }
}
