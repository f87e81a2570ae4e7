mod common;

use std::f64::consts::PI;

use common::{constant_model, design_crystal, rel, sfg_triple, shipped_model, CRYSTAL_LENGTH_MM};
use proptest::prelude::*;
use qfc::dispersion::{DispersionModel, Extrapolation};
use qfc::phasematching::*;
use qfc::Error;

/// Δk_eff composed directly from refractive indices, without the library's
/// wave-number helpers.
fn oracle_mismatch(
    model: &DispersionModel,
    lambda_in_nm: f64,
    pump_nm: f64,
    t: f64,
    period_um: f64,
) -> f64 {
    let out_nm = 1.0 / (1.0 / lambda_in_nm + 1.0 / pump_nm);
    let k = |l_nm: f64| {
        let n = model
            .refractive_index(l_nm / 1000.0, t, Extrapolation::Allow)
            .unwrap();
        2.0 * PI * n / (l_nm * 1e-9)
    };
    k(out_nm) - k(lambda_in_nm) - k(pump_nm) - 2.0 * PI / (period_um * 1e-6)
}

#[test]
fn design_period_near_fabricated_grating() {
    let period = qpm_period(&sfg_triple(), &shipped_model(), 160.0, Extrapolation::Allow).unwrap();
    assert!((period - 3.75).abs() <= 0.5);
    assert!((period - 3.752_813).abs() < 1e-5, "{period}");
}

#[test]
fn design_period_requires_extrapolation_flag() {
    assert!(matches!(
        qpm_period(
            &sfg_triple(),
            &shipped_model(),
            160.0,
            Extrapolation::Forbid
        ),
        Err(Error::OutOfValidity { .. })
    ));
}

#[test]
fn design_round_trip() {
    let crystal = design_crystal();
    let dk = phase_mismatch(&sfg_triple(), &crystal).unwrap();
    assert!(dk.abs() < 1e-6, "{dk}");
}

#[test]
fn mismatch_at_another_grating_matches_composed_indices() {
    let crystal = CrystalSpec::new(
        CRYSTAL_LENGTH_MM,
        4.15,
        160.0,
        shipped_model(),
        Extrapolation::Allow,
    )
    .unwrap();
    let dk = phase_mismatch(&sfg_triple(), &crystal).unwrap();
    let oracle = oracle_mismatch(&shipped_model(), 1547.6, 579.6, 160.0, 4.15);
    assert!(dk.abs() > 1e5);
    assert!(rel(dk, oracle) < 1e-9, "{dk} vs {oracle}");
}

#[test]
fn constant_index_mismatch() {
    let crystal =
        CrystalSpec::new(10.0, 3.75, 20.0, constant_model(), Extrapolation::Forbid).unwrap();
    let p = ProcessSpec::new(ProcessKind::Sfg, 1300.0, 1300.0).unwrap();
    let dk = phase_mismatch(&p, &crystal).unwrap();
    assert!(rel(dk, -2.0 * PI / 3.75e-6) < 1e-12);
    assert!(matches!(
        qpm_period(&p, &constant_model(), 20.0, Extrapolation::Forbid),
        Err(Error::NoFirstOrderQpm { .. })
    ));
}

#[test]
fn phase_matched_input_recovers_design_wavelength() {
    let root =
        phasematched_input_wavelength(&design_crystal(), 579.6, ProcessKind::Sfg, (1500.0, 1600.0))
            .unwrap();
    assert!((root - 1547.6).abs() < 0.1);
    assert!((root - 1547.6).abs() < 2e-4);
}

#[test]
fn one_kelvin_warmer_shifts_root_red() {
    let crystal = design_crystal();
    let at_160 =
        phasematched_input_wavelength(&crystal, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    let at_161 = phasematched_input_wavelength(
        &crystal.with_temperature(161.0),
        579.6,
        ProcessKind::Sfg,
        (1500.0, 1600.0),
    )
    .unwrap();
    let shift = at_161 - at_160;
    assert!((0.2..=0.6).contains(&shift), "{shift}");
}

#[test]
fn bracket_without_root_is_an_error() {
    let r =
        phasematched_input_wavelength(&design_crystal(), 579.6, ProcessKind::Sfg, (400.0, 450.0));
    assert!(matches!(r, Err(Error::NoSignChange { .. })), "{r:?}");
}

#[test]
fn invalid_bracket_rejected() {
    let r =
        phasematched_input_wavelength(&design_crystal(), 579.6, ProcessKind::Sfg, (1600.0, 1500.0));
    assert!(matches!(r, Err(Error::InvalidInterval { .. })));
}

#[test]
fn wide_bracket_has_single_root() {
    let root =
        phasematched_input_wavelength(&design_crystal(), 579.6, ProcessKind::Sfg, (1100.0, 2500.0))
            .unwrap();
    assert!((root - 1547.6).abs() < 2e-4);
}

#[test]
fn tuning_slopes_match_measurement_scale() {
    let s = tuning_slopes(
        &design_crystal(),
        579.6,
        ProcessKind::Sfg,
        1.0,
        (1500.0, 1600.0),
    )
    .unwrap();
    assert!((s.dlambda_in_dt - 0.4).abs() <= 0.2, "{}", s.dlambda_in_dt);
    assert!(
        (s.dlambda_out_dt - 0.0297).abs() <= 0.5 * 0.0297,
        "{}",
        s.dlambda_out_dt
    );
    assert!(rel(s.finite_difference_ratio, s.analytic_ratio) < 1e-6);
    let measured_ratio = (421.7f64 / 1547.6).powi(2);
    assert!((measured_ratio - 0.07425).abs() < 5e-6);
}

#[test]
fn tuning_slopes_reject_bad_step() {
    assert!(tuning_slopes(
        &design_crystal(),
        579.6,
        ProcessKind::Sfg,
        0.0,
        (1500.0, 1600.0)
    )
    .is_err());
}

#[test]
fn constant_model_slopes_propagate_solver_error() {
    let crystal = CrystalSpec::new(
        CRYSTAL_LENGTH_MM,
        3.75,
        160.0,
        constant_model(),
        Extrapolation::Forbid,
    )
    .unwrap();
    assert!(tuning_slopes(&crystal, 579.6, ProcessKind::Sfg, 1.0, (1500.0, 1600.0)).is_err());
}

#[test]
fn dfg_design_uses_same_grating_scale() {
    let p = ProcessSpec::new(ProcessKind::Dfg, 425.5, 585.0).unwrap();
    assert!((p.lambda_out_nm - 1560.6).abs() < 0.05);
    let period = qpm_period(&p, &shipped_model(), 226.4, Extrapolation::Allow).unwrap();
    assert!((period - 3.75).abs() < 0.5, "{period}");
}

#[test]
fn curve_peak_and_bounds() {
    let crystal = design_crystal();
    let grid = WavelengthGrid::new(1546.0, 1549.2, 0.01).unwrap();
    let curve = phasematch_curve(&crystal, 579.6, ProcessKind::Sfg, &grid).unwrap();
    assert_eq!(curve.len(), grid.len());
    assert!(curve
        .iter()
        .all(|p| (0.0..=1.0).contains(&p.relative_efficiency)));
    let peak = curve
        .iter()
        .max_by(|a, b| a.relative_efficiency.total_cmp(&b.relative_efficiency))
        .unwrap();
    assert!((peak.lambda_in_nm - 1547.6).abs() < 0.006);

    let root =
        phasematched_input_wavelength(&crystal, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    let at_root = phasematch_curve(
        &crystal,
        579.6,
        ProcessKind::Sfg,
        &WavelengthGrid::new(root, root, 1.0).unwrap(),
    )
    .unwrap();
    // The root is located to 1e-4 nm, which leaves sinc² short of 1 by ~1e-7.
    assert!((at_root[0].relative_efficiency - 1.0).abs() < 1e-6);
}

#[test]
fn curve_vanishes_at_first_nulls() {
    let crystal = design_crystal();
    let w = first_null_width(&crystal, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    for l in [w.lower_null_nm, w.upper_null_nm] {
        let dk = mismatch_at_input(&crystal, 579.6, ProcessKind::Sfg, l).unwrap();
        assert!(rel((dk * crystal.length_m() / 2.0).abs(), PI) < 1e-9);
        assert!(sinc2_response(dk, crystal.length_m()) < 1e-16);
    }
}

/// Scans |Δk_eff|·L/2 − π outward from the peak on a fine grid, composing
/// Δk from refractive indices, and interpolates the crossings.
fn brute_force_null_width(
    model: &DispersionModel,
    period_um: f64,
    length_m: f64,
    peak_nm: f64,
) -> f64 {
    let h = 1e-4;
    let g =
        |l: f64| (oracle_mismatch(model, l, 579.6, 160.0, period_um) * length_m / 2.0).abs() - PI;
    let crossing = |dir: f64| {
        let mut x = peak_nm;
        let mut gx = g(x);
        loop {
            let y = x + dir * h;
            let gy = g(y);
            if gy >= 0.0 {
                return x + (y - x) * (-gx) / (gy - gx);
            }
            x = y;
            gx = gy;
        }
    };
    crossing(1.0) - crossing(-1.0)
}

#[test]
fn null_width_agrees_with_brute_force_scan() {
    let crystal = design_crystal();
    let w = first_null_width(&crystal, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    let oracle = brute_force_null_width(
        &crystal.model,
        crystal.poling_period_um,
        crystal.length_m(),
        1547.6,
    );
    assert!(
        (w.width_nm - oracle).abs() < 1e-6,
        "{} vs {oracle}",
        w.width_nm
    );
    assert!((w.width_nm - 0.4292).abs() < 1e-3);
}

#[test]
fn doubling_length_halves_null_width() {
    let short = design_crystal();
    let long = short.with_length_mm(2.0 * CRYSTAL_LENGTH_MM).unwrap();
    let ws = first_null_width(&short, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    let wl = first_null_width(&long, 579.6, ProcessKind::Sfg, (1500.0, 1600.0)).unwrap();
    assert!(rel(ws.delta_k_width, 2.0 * wl.delta_k_width) < 1e-9);
    // In wavelength the halving is exact only to second order in dispersion curvature.
    assert!(rel(ws.width_nm, 2.0 * wl.width_nm) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slope_ratio_is_dispersion_free(pump in 560.0f64..600.0, t in 60.0f64..190.0, dt in 0.25f64..2.0) {
        let model = shipped_model();
        let p = ProcessSpec::new(ProcessKind::Sfg, 1547.6, pump).unwrap();
        let period = qpm_period(&p, &model, t, Extrapolation::Allow).unwrap();
        let crystal = CrystalSpec::new(CRYSTAL_LENGTH_MM, period, t, model, Extrapolation::Allow).unwrap();
        let s = tuning_slopes(&crystal, pump, ProcessKind::Sfg, dt, (1450.0, 1650.0)).unwrap();
        prop_assert!(rel(s.finite_difference_ratio, s.analytic_ratio) < 1e-6);
    }

    #[test]
    fn sinc2_is_even_and_bounded(dk in -1e5f64..1e5, l in 1e-3f64..0.1) {
        let a = sinc2_response(dk, l);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(a, sinc2_response(-dk, l));
    }

    #[test]
    fn energy_conservation_holds(lin in 300.0f64..3000.0, lp in 300.0f64..3000.0) {
        let p = ProcessSpec::new(ProcessKind::Sfg, lin, lp).unwrap();
        prop_assert!(rel(1.0 / p.lambda_out_nm, 1.0 / lin + 1.0 / lp) < 1e-9);
        if lin < lp {
            let d = ProcessSpec::new(ProcessKind::Dfg, lin, lp).unwrap();
            prop_assert!(rel(1.0 / d.lambda_out_nm, 1.0 / lin - 1.0 / lp) < 1e-9);
        }
    }
}
