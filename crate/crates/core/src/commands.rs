//! Report builders behind the `qfc` subcommands.
//!
//! Each function takes a loaded [`RunConfig`] and returns a serializable
//! report; writing files is left to the caller.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{read_counts_csv, read_efficiency_csv, RunConfig};
use crate::conversion::{
    beam_overlap_fraction, fit_normalized_efficiency, BeamGeometry, EfficiencyPoint,
    FixedParameters,
};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::netlink::{crossover_distance, improvement_orders, scenario_sweep, SweepRow, Topology};
use crate::phasematching::{
    phasematch_curve, qpm_period, tuning_slopes, CurvePoint, ProcessKind, ProcessSpec, TuningSlopes,
};
use crate::photonstats::{
    chain_loss, external_efficiency, mean_input_photon_rate, mu1, photons_per_pulse, snr,
    CountRecord, Snr,
};

#[derive(Debug, Clone, Serialize)]
pub struct Triple {
    pub kind: ProcessKind,
    pub lambda_in_nm: f64,
    pub lambda_pump_nm: f64,
    pub lambda_out_nm: f64,
}

impl From<&ProcessSpec> for Triple {
    fn from(p: &ProcessSpec) -> Self {
        Triple {
            kind: p.kind,
            lambda_in_nm: p.lambda_in_nm,
            lambda_pump_nm: p.lambda_pump_nm,
            lambda_out_nm: p.lambda_out_nm,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub model: String,
    /// True when any evaluated wavelength/temperature lies outside the
    /// model's validity box.
    pub extrapolated: bool,
    pub temperature_c: f64,
    pub triple: Triple,
    /// First-order period that phase-matches the triple at `temperature_c`.
    pub lambda_poling_um: f64,
    /// Period used for the tuning slopes (configured grating or the design period).
    pub grating_um: f64,
    pub slopes: TuningSlopes,
}

fn any_outside(model: &DispersionModel, wavelengths_nm: &[f64], temperatures_c: &[f64]) -> bool {
    wavelengths_nm
        .iter()
        .any(|&l| temperatures_c.iter().any(|&t| !model.contains(l * 1e-3, t)))
}

/// Poling-period design and temperature tuning for the configured process.
pub fn design(cfg: &RunConfig) -> Result<DesignReport> {
    let model = cfg.load_model()?;
    let process = cfg.process()?;
    let crystal_cfg = cfg.crystal_section()?;
    let t = crystal_cfg.temperature_c;
    let period = qpm_period(&process, &model, t, cfg.extrapolation())?;
    let grating = crystal_cfg.poling_period_um.unwrap_or(period);
    let crystal = cfg.crystal(model.clone(), grating)?;
    let dt = cfg.design().dt_k;
    let slopes = tuning_slopes(
        &crystal,
        process.lambda_pump_nm,
        process.kind,
        dt,
        cfg.bracket_nm()?,
    )?;
    let extrapolated = any_outside(
        &model,
        &[
            process.lambda_in_nm,
            process.lambda_pump_nm,
            process.lambda_out_nm,
            slopes.lambda_out_nm,
        ],
        &[t - dt, t, t + dt],
    );
    Ok(DesignReport {
        model: model.name().to_string(),
        extrapolated,
        temperature_c: t,
        triple: Triple::from(&process),
        lambda_poling_um: period,
        grating_um: grating,
        slopes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub model: String,
    pub extrapolated: bool,
    pub grating_um: f64,
    pub temperature_c: f64,
    pub length_mm: f64,
    pub points: Vec<CurvePoint>,
}

/// Phase-matching curve over the configured input-wavelength grid.
pub fn curve(cfg: &RunConfig) -> Result<CurveReport> {
    let model = cfg.load_model()?;
    let process = cfg.process()?;
    let crystal_cfg = cfg.crystal_section()?;
    let grating = match crystal_cfg.poling_period_um {
        Some(p) => p,
        None => qpm_period(
            &process,
            &model,
            crystal_cfg.temperature_c,
            cfg.extrapolation(),
        )?,
    };
    let crystal = cfg.crystal(model.clone(), grating)?;
    let grid = cfg.curve_grid()?;
    let points = phasematch_curve(&crystal, process.lambda_pump_nm, process.kind, &grid)?;
    let mut wavelengths: Vec<f64> = vec![grid.start_nm, grid.stop_nm, process.lambda_pump_nm];
    for l in [grid.start_nm, grid.stop_nm] {
        wavelengths.push(ProcessSpec::new(process.kind, l, process.lambda_pump_nm)?.lambda_out_nm);
    }
    Ok(CurveReport {
        model: model.name().to_string(),
        extrapolated: any_outside(&model, &wavelengths, &[crystal_cfg.temperature_c]),
        grating_um: grating,
        temperature_c: crystal_cfg.temperature_c,
        length_mm: crystal_cfg.length_mm,
        points,
    })
}

/// Writes `lambda_in_nm,relative_efficiency`.
pub fn write_curve_csv<W: Write>(points: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::InvalidParameter(format!("CSV write failed: {e}"));
    w.write_record(["lambda_in_nm", "relative_efficiency"])
        .map_err(err)?;
    for p in points {
        w.write_record([
            p.lambda_in_nm.to_string(),
            p.relative_efficiency.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("CSV write failed: {e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub pump_mw: f64,
    pub eta_ext: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub eta_nor: f64,
    pub residual: f64,
    pub points_used: usize,
    pub overlap: f64,
    pub length_m: f64,
    pub eta_max: f64,
    pub first_peak_pump_w: f64,
    pub predictions: Vec<Prediction>,
}

/// Fits the normalized efficiency to measured points and predicts the
/// efficiency at the configured pump powers.
pub fn efficiency(cfg: &RunConfig, points_csv: Option<&Path>) -> Result<EfficiencyReport> {
    let section = cfg.efficiency()?;
    let path = match points_csv {
        Some(p) => p.to_path_buf(),
        None => cfg.resolve(
            section
                .points_csv
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("no efficiency points CSV given".into()))?,
        ),
    };
    let points = read_efficiency_csv(&path)?;
    efficiency_from_points(cfg, &points)
}

pub fn efficiency_from_points(
    cfg: &RunConfig,
    points: &[EfficiencyPoint],
) -> Result<EfficiencyReport> {
    let section = cfg.efficiency()?;
    let length_m = cfg.crystal_section()?.length_mm * 1e-3;
    let geometry = BeamGeometry::new(section.waist_pump_um, section.waist_input_um)?;
    let overlap = beam_overlap_fraction(&geometry);
    let fixed = FixedParameters::new(length_m, overlap, section.eta_max)?;
    let fit = fit_normalized_efficiency(points, fixed)?;
    let predictions = section
        .predict_pump_mw
        .iter()
        .map(|&mw| {
            Ok(Prediction {
                pump_mw: mw,
                eta_ext: fit.model.efficiency(mw * 1e-3)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EfficiencyReport {
        eta_nor: fit.model.eta_nor,
        residual: fit.residual,
        points_used: fit.points_used,
        overlap,
        length_m,
        eta_max: section.eta_max,
        first_peak_pump_w: fit.model.first_peak_power_w(),
        predictions,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetRow {
    pub integration_s: f64,
    #[serde(rename = "S")]
    pub signal_hz: f64,
    #[serde(rename = "N")]
    pub noise_hz: f64,
    pub eta_ext: f64,
    #[serde(rename = "SNR")]
    pub snr: Snr,
    pub mu1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    #[serde(rename = "D")]
    pub duty_cycle: f64,
    pub n_per_pulse: f64,
    pub input_rate_hz: f64,
    pub eta_loss: f64,
    /// Dead-time corrected signal rate of the pooled counts (1/s).
    #[serde(rename = "S")]
    pub signal_hz: f64,
    /// Dead-time corrected noise rate of the pooled counts (1/s).
    #[serde(rename = "N")]
    pub noise_hz: f64,
    pub eta_ext: f64,
    #[serde(rename = "SNR")]
    pub snr: Snr,
    pub mu1: f64,
    pub rows: Vec<BudgetRow>,
}

struct BudgetContext {
    n_per_pulse: f64,
    input_rate: f64,
    eta_loss: f64,
    dead_time: f64,
}

impl BudgetContext {
    fn evaluate(&self, counts: &CountRecord) -> Result<(f64, f64, f64, Snr, f64)> {
        let (s, n) = counts.corrected(self.dead_time)?;
        let eta = external_efficiency(counts, self.dead_time, self.input_rate, self.eta_loss)?;
        let ratio = snr(counts, self.dead_time)?;
        let mu = match ratio {
            Snr::Finite(v) => mu1(self.n_per_pulse, v)?,
            Snr::Infinite => 0.0,
        };
        Ok((s, n, eta, ratio, mu))
    }
}

/// Photon budget from count series: efficiency, SNR and μ₁.
pub fn budget(cfg: &RunConfig, counts_csv: Option<&Path>) -> Result<BudgetReport> {
    let section = cfg.budget()?;
    let path = match counts_csv {
        Some(p) => p.to_path_buf(),
        None => cfg.resolve(
            section
                .counts_csv
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("no counts CSV given".into()))?,
        ),
    };
    let rows = read_counts_csv(&path)?;

    let train = cfg.pulse_train()?;
    let chain = cfg.detection_chain()?;
    let process = cfg.process()?;
    let duty = train.duty_cycle();
    let input_rate =
        mean_input_photon_rate(section.input_power_nw * 1e-9, duty, process.lambda_in_nm)?;
    let ctx = BudgetContext {
        n_per_pulse: photons_per_pulse(input_rate, train.rep_rate_hz)?,
        input_rate,
        eta_loss: chain_loss(&chain),
        dead_time: chain.dead_time_s,
    };

    let mut per_row = Vec::with_capacity(rows.len());
    let (mut time, mut signal, mut noise) = (0.0, 0.0, 0.0);
    for r in &rows {
        let counts = CountRecord::new(
            r.signal_counts / r.integration_s,
            r.noise_counts / r.integration_s,
        )?;
        let (s, n, eta, ratio, mu) = ctx.evaluate(&counts)?;
        per_row.push(BudgetRow {
            integration_s: r.integration_s,
            signal_hz: s,
            noise_hz: n,
            eta_ext: eta,
            snr: ratio,
            mu1: mu,
        });
        time += r.integration_s;
        signal += r.signal_counts;
        noise += r.noise_counts;
    }
    let pooled = CountRecord::new(signal / time, noise / time)?;
    let (s, n, eta, ratio, mu) = ctx.evaluate(&pooled)?;
    Ok(BudgetReport {
        duty_cycle: duty,
        n_per_pulse: ctx.n_per_pulse,
        input_rate_hz: input_rate,
        eta_loss: ctx.eta_loss,
        signal_hz: s,
        noise_hz: n,
        eta_ext: eta,
        snr: ratio,
        mu1: mu,
        rows: per_row,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkSummary {
    pub improvement_orders_at_10km: f64,
    pub crossover_km: f64,
    pub eta_down: f64,
    pub eta_up: f64,
    pub alpha_blue_db_per_km: f64,
    pub alpha_ir_db_per_km: f64,
}

#[derive(Debug, Clone)]
pub struct LinkReport {
    pub rows: Vec<SweepRow>,
    pub summary: LinkSummary,
}

/// Distance sweep over the three topologies plus the headline figures.
pub fn link(cfg: &RunConfig, distances_override: Option<&[f64]>) -> Result<LinkReport> {
    let section = cfg.link()?;
    let template = section.template()?;
    let distances = match distances_override {
        Some(d) => d.to_vec(),
        None => section.distances()?,
    };
    if distances.is_empty() {
        return Err(Error::Empty("distance grid".into()));
    }
    let rows = scenario_sweep(&template, &distances)?;
    let at_10 = template.with_distance(10.0)?;
    let summary = LinkSummary {
        improvement_orders_at_10km: improvement_orders(
            &at_10.with_topology(Topology::A),
            &at_10.with_topology(Topology::C),
        )?,
        crossover_km: crossover_distance(&template)?,
        eta_down: template.eta_down,
        eta_up: template.eta_up,
        alpha_blue_db_per_km: template.alpha_blue_db_per_km,
        alpha_ir_db_per_km: template.alpha_ir_db_per_km,
    };
    Ok(LinkReport { rows, summary })
}
