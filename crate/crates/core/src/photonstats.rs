//! Single-photon-level metrology: duty cycle, photon numbers, dead-time
//! correction, external efficiency, SNR and μ₁.
//!
//! All rates are per second. Per-pulse quantities are derived through the
//! pump repetition rate only. Dead time follows the non-paralyzable model.

use serde::{Deserialize, Serialize};

use crate::constants::{PLANCK, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Temporal character of the input light.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputRegime {
    Cw,
    Pulsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseTrain {
    pub tau_pump_s: f64,
    pub rep_rate_hz: f64,
    pub tau_input_s: Option<f64>,
    pub input_regime: InputRegime,
}

impl PulseTrain {
    pub fn cw(tau_pump_s: f64, rep_rate_hz: f64) -> Result<Self> {
        PulseTrain {
            tau_pump_s,
            rep_rate_hz,
            tau_input_s: None,
            input_regime: InputRegime::Cw,
        }
        .validated()
    }

    pub fn pulsed(tau_pump_s: f64, rep_rate_hz: f64, tau_input_s: f64) -> Result<Self> {
        PulseTrain {
            tau_pump_s,
            rep_rate_hz,
            tau_input_s: Some(tau_input_s),
            input_regime: InputRegime::Pulsed,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.tau_pump_s > 0.0 && self.rep_rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump pulse duration and repetition rate must be positive, got {} s and {} Hz",
                self.tau_pump_s, self.rep_rate_hz
            )));
        }
        if self.tau_pump_s * self.rep_rate_hz > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "pump pulses overlap: τ·R_p = {}",
                self.tau_pump_s * self.rep_rate_hz
            )));
        }
        if self.input_regime == InputRegime::Pulsed {
            match self.tau_input_s {
                Some(t) if t >= self.tau_pump_s => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "pulsed input needs an input duration of at least the pump duration, got {other:?}"
                    )))
                }
            }
        }
        Ok(self)
    }

    /// Fraction of input light temporally overlapped with the pump.
    pub fn duty_cycle(&self) -> f64 {
        match (self.input_regime, self.tau_input_s) {
            (InputRegime::Pulsed, Some(tau_input)) => self.tau_pump_s / tau_input,
            _ => self.tau_pump_s * self.rep_rate_hz,
        }
    }
}

/// `τ_pump·R_p` for CW input, `τ_pump/τ_input` for pulsed input.
pub fn duty_cycle(train: &PulseTrain) -> f64 {
    train.duty_cycle()
}

/// Photon energy `hc/λ` in joules.
pub fn photon_energy_j(lambda_nm: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / (lambda_nm * 1e-9)
}

/// Input photons per second overlapped with the pump, `P·D/(ħω)`.
pub fn mean_input_photon_rate(power_w: f64, duty: f64, lambda_in_nm: f64) -> Result<f64> {
    if !(power_w >= 0.0 && duty >= 0.0 && lambda_in_nm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need P ≥ 0, D ≥ 0, λ > 0; got {power_w} W, {duty}, {lambda_in_nm} nm"
        )));
    }
    Ok(power_w * duty / photon_energy_j(lambda_in_nm))
}

/// Mean photons per pump pulse.
pub fn photons_per_pulse(rate_hz: f64, rep_rate_hz: f64) -> Result<f64> {
    if !(rep_rate_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "repetition rate must be positive, got {rep_rate_hz} Hz"
        )));
    }
    Ok(rate_hz / rep_rate_hz)
}

/// Non-paralyzable dead-time correction `raw/(1 − raw·T_D)`.
pub fn dead_time_correct(raw_hz: f64, dead_time_s: f64) -> Result<f64> {
    if !(raw_hz >= 0.0 && dead_time_s >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rates and dead time must be non-negative, got {raw_hz} Hz, {dead_time_s} s"
        )));
    }
    let product = raw_hz * dead_time_s;
    if product >= 1.0 {
        return Err(Error::Saturation { product });
    }
    Ok(raw_hz / (1.0 - product))
}

/// Observed rate of a non-paralyzable detector given the true rate, `r/(1 + r·T_D)`.
pub fn observed_rate(true_hz: f64, dead_time_s: f64) -> f64 {
    true_hz / (1.0 + true_hz * dead_time_s)
}

/// Detection path from crystal to detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionChain {
    pub component_transmissions: Vec<f64>,
    pub detector_efficiency: f64,
    pub dead_time_s: f64,
}

impl DetectionChain {
    pub fn new(
        component_transmissions: Vec<f64>,
        detector_efficiency: f64,
        dead_time_s: f64,
    ) -> Result<Self> {
        let in_unit = |x: f64| x > 0.0 && x <= 1.0;
        if let Some(t) = component_transmissions.iter().find(|t| !in_unit(**t)) {
            return Err(Error::InvalidParameter(format!(
                "component transmission {t} outside (0, 1]"
            )));
        }
        if !in_unit(detector_efficiency) {
            return Err(Error::InvalidParameter(format!(
                "detector efficiency {detector_efficiency} outside (0, 1]"
            )));
        }
        if !(dead_time_s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dead time must be non-negative, got {dead_time_s} s"
            )));
        }
        Ok(DetectionChain {
            component_transmissions,
            detector_efficiency,
            dead_time_s,
        })
    }

    /// Product of the detector efficiency and every component transmission.
    pub fn loss(&self) -> f64 {
        self.component_transmissions
            .iter()
            .fold(self.detector_efficiency, |acc, t| acc * t)
    }
}

pub fn chain_loss(chain: &DetectionChain) -> f64 {
    chain.loss()
}

/// Raw signal and noise count rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub s_raw_hz: f64,
    pub n_raw_hz: f64,
}

impl CountRecord {
    pub fn new(s_raw_hz: f64, n_raw_hz: f64) -> Result<Self> {
        if !(s_raw_hz >= 0.0 && n_raw_hz >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "count rates must be non-negative, got S = {s_raw_hz}, N = {n_raw_hz}"
            )));
        }
        Ok(CountRecord { s_raw_hz, n_raw_hz })
    }

    /// Dead-time corrected `(S, N)`.
    pub fn corrected(&self, dead_time_s: f64) -> Result<(f64, f64)> {
        Ok((
            dead_time_correct(self.s_raw_hz, dead_time_s)?,
            dead_time_correct(self.n_raw_hz, dead_time_s)?,
        ))
    }
}

/// `η_ext = (S − N)/(⟨n⟩_in·η_loss)` on dead-time corrected rates.
pub fn external_efficiency(
    counts: &CountRecord,
    dead_time_s: f64,
    input_rate_hz: f64,
    eta_loss: f64,
) -> Result<f64> {
    if !(input_rate_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "input photon rate must be positive, got {input_rate_hz}"
        )));
    }
    if !(eta_loss > 0.0 && eta_loss <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "η_loss {eta_loss} outside (0, 1]"
        )));
    }
    let (s, n) = counts.corrected(dead_time_s)?;
    if s < n {
        return Err(Error::SignalBelowNoise {
            signal: s,
            noise: n,
        });
    }
    Ok((s - n) / (input_rate_hz * eta_loss))
}

/// Signal-to-noise ratio of corrected rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Finite(f64),
    /// Corrected noise rate is zero.
    Infinite,
}

impl Snr {
    pub fn value(self) -> f64 {
        match self {
            Snr::Finite(v) => v,
            Snr::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Snr {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Snr::Finite(v) => serializer.serialize_f64(*v),
            Snr::Infinite => serializer.serialize_str("inf"),
        }
    }
}

pub fn snr(counts: &CountRecord, dead_time_s: f64) -> Result<Snr> {
    let (s, n) = counts.corrected(dead_time_s)?;
    if n == 0.0 {
        return Ok(Snr::Infinite);
    }
    Ok(Snr::Finite(s / n))
}

/// Mean input photon number per pulse giving SNR = 1, assuming the signal
/// scales linearly with input photon number.
pub fn mu1(n_per_pulse: f64, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "SNR must be positive, got {snr}"
        )));
    }
    Ok(n_per_pulse / snr)
}

/// Optical bandwidth in Hz for a filter of width `delta_lambda_nm` centred
/// at `center_lambda_nm`, `c·Δλ/λ²`.
pub fn bandwidth_nm_to_hz(delta_lambda_nm: f64, center_lambda_nm: f64) -> Result<f64> {
    if !(delta_lambda_nm >= 0.0 && center_lambda_nm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need Δλ ≥ 0 and λ > 0, got {delta_lambda_nm} nm at {center_lambda_nm} nm"
        )));
    }
    let lambda = center_lambda_nm * 1e-9;
    Ok(SPEED_OF_LIGHT * delta_lambda_nm * 1e-9 / (lambda * lambda))
}

/// Broadband noise per pulse after changing pulse duration and filter
/// bandwidth; noise is linear in both.
pub fn noise_rescale(
    noise_per_pulse: f64,
    tau_old_s: f64,
    tau_new_s: f64,
    bw_old_hz: f64,
    bw_new_hz: f64,
) -> Result<f64> {
    if !(tau_old_s > 0.0 && tau_new_s > 0.0 && bw_old_hz > 0.0 && bw_new_hz > 0.0)
        || noise_per_pulse < 0.0
    {
        return Err(Error::InvalidParameter(
            "noise rescaling needs positive durations and bandwidths".into(),
        ));
    }
    Ok(noise_per_pulse * (tau_new_s / tau_old_s) * (bw_new_hz / bw_old_hz))
}
