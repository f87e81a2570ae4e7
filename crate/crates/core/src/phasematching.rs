//! Energy conservation, quasi-phase-matching design and phase-matching curves.
//!
//! Wavelengths are vacuum wavelengths in nm at this module's boundary,
//! wave numbers are in rad/m, poling periods in µm. Only first-order QPM
//! with a plane-wave sinc² response is modelled.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionModel, Extrapolation};
use crate::error::{Error, Result};
use crate::numeric::{bisect, sign_change_brackets};

/// Sum- or difference-frequency generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Sfg,
    Dfg,
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessKind::Sfg => "SFG",
            ProcessKind::Dfg => "DFG",
        })
    }
}

/// Output wavelength (nm) conserving photon energy.
///
/// SFG: `1/λ_out = 1/λ_in + 1/λ_pump`. DFG: `1/λ_out = 1/λ_in − 1/λ_pump`,
/// which requires `ω_in > ω_pump`.
pub fn energy_match(kind: ProcessKind, lambda_in_nm: f64, lambda_pump_nm: f64) -> Result<f64> {
    if !(lambda_in_nm > 0.0 && lambda_pump_nm > 0.0)
        || !lambda_in_nm.is_finite()
        || !lambda_pump_nm.is_finite()
    {
        return Err(Error::InvalidParameter(format!(
            "wavelengths must be positive, got in = {lambda_in_nm} nm, pump = {lambda_pump_nm} nm"
        )));
    }
    let inv_in = 1.0 / lambda_in_nm;
    let inv_pump = 1.0 / lambda_pump_nm;
    match kind {
        ProcessKind::Sfg => Ok(1.0 / (inv_in + inv_pump)),
        ProcessKind::Dfg => {
            if inv_in <= inv_pump {
                return Err(Error::NonPhysicalDfg);
            }
            Ok(1.0 / (inv_in - inv_pump))
        }
    }
}

/// A three-wave-mixing wavelength triple with energy conservation enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub lambda_in_nm: f64,
    pub lambda_pump_nm: f64,
    pub lambda_out_nm: f64,
}

impl ProcessSpec {
    /// Builds the triple from input and pump, deriving the output.
    pub fn new(kind: ProcessKind, lambda_in_nm: f64, lambda_pump_nm: f64) -> Result<Self> {
        let lambda_out_nm = energy_match(kind, lambda_in_nm, lambda_pump_nm)?;
        Ok(ProcessSpec {
            kind,
            lambda_in_nm,
            lambda_pump_nm,
            lambda_out_nm,
        })
    }

    /// Validates an explicit triple against energy conservation (1e−9 relative).
    pub fn from_triple(
        kind: ProcessKind,
        lambda_in_nm: f64,
        lambda_pump_nm: f64,
        lambda_out_nm: f64,
    ) -> Result<Self> {
        let expected = energy_match(kind, lambda_in_nm, lambda_pump_nm)?;
        if !(lambda_out_nm > 0.0) || ((lambda_out_nm - expected) / expected).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "{kind} triple violates energy conservation: λ_out = {lambda_out_nm} nm, expected {expected} nm"
            )));
        }
        Ok(ProcessSpec {
            kind,
            lambda_in_nm,
            lambda_pump_nm,
            lambda_out_nm,
        })
    }

    /// The highest-frequency wave and the two lower-frequency waves it splits into.
    fn high_and_lows(&self) -> (f64, f64, f64) {
        match self.kind {
            ProcessKind::Sfg => (self.lambda_out_nm, self.lambda_in_nm, self.lambda_pump_nm),
            ProcessKind::Dfg => (self.lambda_in_nm, self.lambda_out_nm, self.lambda_pump_nm),
        }
    }
}

/// A periodically poled crystal at a fixed operating temperature.
#[derive(Debug, Clone)]
pub struct CrystalSpec {
    pub length_mm: f64,
    pub poling_period_um: f64,
    pub temperature_c: f64,
    pub model: Arc<DispersionModel>,
    pub extrapolation: Extrapolation,
}

impl CrystalSpec {
    pub fn new(
        length_mm: f64,
        poling_period_um: f64,
        temperature_c: f64,
        model: Arc<DispersionModel>,
        extrapolation: Extrapolation,
    ) -> Result<Self> {
        if !(length_mm > 0.0 && length_mm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "crystal length must be positive, got {length_mm} mm"
            )));
        }
        if !(poling_period_um > 0.0 && poling_period_um.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "poling period must be positive, got {poling_period_um} µm"
            )));
        }
        Ok(CrystalSpec {
            length_mm,
            poling_period_um,
            temperature_c,
            model,
            extrapolation,
        })
    }

    pub fn with_temperature(&self, temperature_c: f64) -> Self {
        CrystalSpec {
            temperature_c,
            ..self.clone()
        }
    }

    pub fn with_length_mm(&self, length_mm: f64) -> Result<Self> {
        CrystalSpec::new(
            length_mm,
            self.poling_period_um,
            self.temperature_c,
            Arc::clone(&self.model),
            self.extrapolation,
        )
    }

    pub fn length_m(&self) -> f64 {
        self.length_mm * 1e-3
    }

    /// Grating wave number 2π/Λ in rad/m.
    pub fn grating_wavenumber(&self) -> f64 {
        2.0 * PI / (self.poling_period_um * 1e-6)
    }
}

/// Wave number `k = 2π n(λ, T)/λ` in rad/m for a vacuum wavelength in nm.
pub fn wavenumber(
    model: &DispersionModel,
    lambda_nm: f64,
    temperature_c: f64,
    extrapolation: Extrapolation,
) -> Result<f64> {
    let n = model.refractive_index(lambda_nm * 1e-3, temperature_c, extrapolation)?;
    Ok(2.0 * PI * n / (lambda_nm * 1e-9))
}

/// Bulk mismatch `k_high − k_low1 − k_low2` (rad/m) before the grating term.
///
/// For SFG this is `k_out − k_in − k_pump`; for DFG the input is the
/// highest-frequency wave and the mismatch is `k_in − k_out − k_pump`.
pub fn bulk_mismatch(
    process: &ProcessSpec,
    model: &DispersionModel,
    temperature_c: f64,
    extrapolation: Extrapolation,
) -> Result<f64> {
    let (high, low_a, low_b) = process.high_and_lows();
    let k = |l| wavenumber(model, l, temperature_c, extrapolation);
    Ok(k(high)? - k(low_a)? - k(low_b)?)
}

/// Residual phase mismatch `Δk − 2π/Λ` in rad/m; zero at perfect QPM.
pub fn phase_mismatch(process: &ProcessSpec, crystal: &CrystalSpec) -> Result<f64> {
    let bulk = bulk_mismatch(
        process,
        &crystal.model,
        crystal.temperature_c,
        crystal.extrapolation,
    )?;
    Ok(bulk - crystal.grating_wavenumber())
}

/// First-order poling period Λ = 2π/Δk in µm.
pub fn qpm_period(
    process: &ProcessSpec,
    model: &DispersionModel,
    temperature_c: f64,
    extrapolation: Extrapolation,
) -> Result<f64> {
    let delta_k = bulk_mismatch(process, model, temperature_c, extrapolation)?;
    // Tolerate rounding noise around an exactly dispersion-free model.
    let scale = 2.0 * PI / (process.lambda_out_nm.min(process.lambda_in_nm) * 1e-9);
    if !(delta_k > 1e-12 * scale) {
        return Err(Error::NoFirstOrderQpm { delta_k });
    }
    Ok(2.0 * PI / delta_k * 1e6)
}

/// Root-search settings for [`phasematched_input_wavelength_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Final bracket width in nm.
    pub tolerance_nm: f64,
    /// Coarse samples used to detect multiple roots.
    pub prescan_samples: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tolerance_nm: 1e-4,
            prescan_samples: 200,
        }
    }
}

fn check_bracket(bracket_nm: (f64, f64)) -> Result<()> {
    let (lo, hi) = bracket_nm;
    if lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidInterval {
            what: "wavelength bracket",
            lo,
            hi,
        })
    }
}

/// Δk_eff (rad/m) as a function of the input wavelength at fixed pump.
pub fn mismatch_at_input(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    lambda_in_nm: f64,
) -> Result<f64> {
    let process = ProcessSpec::new(kind, lambda_in_nm, lambda_pump_nm)?;
    phase_mismatch(&process, crystal)
}

/// Input wavelength (nm) at which the crystal is perfectly phase-matched,
/// using the default 1e−4 nm tolerance and a 200-sample pre-scan.
pub fn phasematched_input_wavelength(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    bracket_nm: (f64, f64),
) -> Result<f64> {
    phasematched_input_wavelength_with(
        crystal,
        lambda_pump_nm,
        kind,
        bracket_nm,
        RootOptions::default(),
    )
}

pub fn phasematched_input_wavelength_with(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    bracket_nm: (f64, f64),
    options: RootOptions,
) -> Result<f64> {
    check_bracket(bracket_nm)?;
    let (lo, hi) = bracket_nm;

    // Evaluate once up front so dispersion errors surface as themselves
    // rather than as a missing sign change.
    mismatch_at_input(crystal, lambda_pump_nm, kind, lo)?;
    mismatch_at_input(crystal, lambda_pump_nm, kind, hi)?;

    let failure = RefCell::new(None);
    let g = |x: f64| match mismatch_at_input(crystal, lambda_pump_nm, kind, x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let brackets = sign_change_brackets(g, lo, hi, options.prescan_samples);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    match brackets.as_slice() {
        [] => Err(Error::NoSignChange {
            lo_nm: lo,
            hi_nm: hi,
        }),
        [(a, b)] => {
            let root = bisect(g, *a, *b, options.tolerance_nm);
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            root.ok_or(Error::NoSignChange {
                lo_nm: lo,
                hi_nm: hi,
            })
        }
        many => Err(Error::MultipleRoots {
            count: many.len(),
            lo_nm: lo,
            hi_nm: hi,
        }),
    }
}

/// Temperature tuning of the phase-matched wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuningSlopes {
    /// Phase-matched input wavelength at the crystal temperature (nm).
    pub lambda_in_nm: f64,
    /// Corresponding output wavelength (nm).
    pub lambda_out_nm: f64,
    /// Central-difference dλ_in/dT (nm/K).
    pub dlambda_in_dt: f64,
    /// Central-difference dλ_out/dT (nm/K).
    pub dlambda_out_dt: f64,
    /// Finite-difference ratio dλ_out/dλ_in.
    pub finite_difference_ratio: f64,
    /// Energy-conservation ratio (λ_out/λ_in)² at the midpoint of the
    /// two finite-difference input wavelengths.
    pub analytic_ratio: f64,
    /// Temperature step used (K).
    pub dt_k: f64,
}

/// Central-difference temperature slopes of the phase-matched input and
/// output wavelengths. `dt_k` is the half-step; 1 K is the usual choice.
pub fn tuning_slopes(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    dt_k: f64,
    bracket_nm: (f64, f64),
) -> Result<TuningSlopes> {
    if !(dt_k > 0.0 && dt_k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature step must be positive, got {dt_k} K"
        )));
    }
    let options = RootOptions {
        tolerance_nm: 1e-9,
        ..RootOptions::default()
    };
    let solve = |t: f64| {
        phasematched_input_wavelength_with(
            &crystal.with_temperature(t),
            lambda_pump_nm,
            kind,
            bracket_nm,
            options,
        )
    };
    let t0 = crystal.temperature_c;
    let centre = solve(t0)?;
    let below = solve(t0 - dt_k)?;
    let above = solve(t0 + dt_k)?;
    let out = |l| energy_match(kind, l, lambda_pump_nm);
    let centre_out = out(centre)?;
    let below_out = out(below)?;
    let above_out = out(above)?;

    let d_in = above - below;
    let d_out = above_out - below_out;
    let mid_in = 0.5 * (above + below);
    let mid_out = out(mid_in)?;
    Ok(TuningSlopes {
        lambda_in_nm: centre,
        lambda_out_nm: centre_out,
        dlambda_in_dt: d_in / (2.0 * dt_k),
        dlambda_out_dt: d_out / (2.0 * dt_k),
        finite_difference_ratio: d_out / d_in,
        analytic_ratio: (mid_out / mid_in).powi(2),
        dt_k,
    })
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Plane-wave phase-matching response `sinc²(Δk_eff·L/2)`.
pub fn sinc2_response(delta_k_eff: f64, length_m: f64) -> f64 {
    let s = sinc(0.5 * delta_k_eff * length_m);
    s * s
}

/// Evenly spaced wavelength grid, endpoints inclusive when they fall on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavelengthGrid {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub step_nm: f64,
}

impl WavelengthGrid {
    pub fn new(start_nm: f64, stop_nm: f64, step_nm: f64) -> Result<Self> {
        if !(start_nm > 0.0 && stop_nm >= start_nm && step_nm > 0.0)
            || !start_nm.is_finite()
            || !stop_nm.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "invalid wavelength grid {start_nm}..{stop_nm} step {step_nm} nm"
            )));
        }
        Ok(WavelengthGrid {
            start_nm,
            stop_nm,
            step_nm,
        })
    }

    /// `floor((stop − start)/step) + 1`, with a small allowance for rounding.
    pub fn len(&self) -> usize {
        ((self.stop_nm - self.start_nm) / self.step_nm + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.start_nm + i as f64 * self.step_nm)
    }
}

/// One sample of a phase-matching curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub lambda_in_nm: f64,
    pub delta_k_eff: f64,
    pub relative_efficiency: f64,
}

/// Relative conversion efficiency over a grid of input wavelengths.
pub fn phasematch_curve(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    grid: &WavelengthGrid,
) -> Result<Vec<CurvePoint>> {
    let length_m = crystal.length_m();
    grid.points()
        .map(|lambda_in_nm| {
            let delta_k_eff = mismatch_at_input(crystal, lambda_pump_nm, kind, lambda_in_nm)?;
            Ok(CurvePoint {
                lambda_in_nm,
                delta_k_eff,
                relative_efficiency: sinc2_response(delta_k_eff, length_m),
            })
        })
        .collect()
}

/// Positions of the first zeros either side of the phase-matching peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullWidth {
    pub peak_nm: f64,
    pub lower_null_nm: f64,
    pub upper_null_nm: f64,
    /// Full width between the first nulls in wavelength (nm).
    pub width_nm: f64,
    /// Full width between the first nulls in phase mismatch (rad/m).
    pub delta_k_width: f64,
}

/// Locates the first nulls of the sinc² curve, where `Δk_eff·L/2 = ±π`,
/// around the phase-matched input wavelength inside `bracket_nm`.
pub fn first_null_width(
    crystal: &CrystalSpec,
    lambda_pump_nm: f64,
    kind: ProcessKind,
    bracket_nm: (f64, f64),
) -> Result<NullWidth> {
    let options = RootOptions {
        tolerance_nm: 0.0,
        ..RootOptions::default()
    };
    let peak =
        phasematched_input_wavelength_with(crystal, lambda_pump_nm, kind, bracket_nm, options)?;
    let half_length = 0.5 * crystal.length_m();
    let dk = |x: f64| mismatch_at_input(crystal, lambda_pump_nm, kind, x);

    // Local slope sets the initial outward step.
    let h = 1e-3;
    let slope = (dk(peak + h)? - dk(peak - h)?) / (2.0 * h);
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::InvalidParameter(
            "phase mismatch has no wavelength dependence at the peak".into(),
        ));
    }
    let step = 0.25 * PI / (half_length * slope.abs());

    let find_null = |direction: f64| -> Result<f64> {
        let excess = |x: f64| dk(x).map(|v| (v * half_length).abs() - PI);
        let mut inner = peak;
        for _ in 0..10_000 {
            let outer = inner + direction * step;
            if outer <= 0.0 {
                break;
            }
            if excess(outer)? >= 0.0 {
                let mut failure = None;
                let root = bisect(
                    |x| match excess(x) {
                        Ok(v) => v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            f64::NAN
                        }
                    },
                    inner.min(outer),
                    inner.max(outer),
                    0.0,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                return root.ok_or(Error::NoSignChange {
                    lo_nm: inner.min(outer),
                    hi_nm: inner.max(outer),
                });
            }
            inner = outer;
        }
        Err(Error::NoSignChange {
            lo_nm: peak,
            hi_nm: inner,
        })
    };

    let lower = find_null(-1.0)?;
    let upper = find_null(1.0)?;
    Ok(NullWidth {
        peak_nm: peak,
        lower_null_nm: lower,
        upper_null_nm: upper,
        width_nm: upper - lower,
        delta_k_width: (dk(lower)? - dk(upper)?).abs(),
    })
}
