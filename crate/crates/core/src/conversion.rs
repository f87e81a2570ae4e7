//! Conversion efficiency versus pump power.
//!
//! The beam-splitter Hamiltonian `iħκA_pump(a†_out a_in − h.c.)` transfers
//! population as `sin²(κ|A_pump|·t)`. Here `κ²|A_pump|²` is carried by a single
//! phenomenological normalized efficiency `eta_nor` (1/(W·m²)) so that the
//! external efficiency is
//!
//! `η(P) = eta_max · overlap · sin²(L·sqrt(eta_nor·P))`.
//!
//! Pump-induced heating and photorefractive drift are not modelled; fitted
//! values of `eta_nor` absorb them and are device-specific.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::golden_section_min;

/// Pump and input beam waists (1/e² radius).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGeometry {
    pub waist_pump_um: f64,
    pub waist_input_um: f64,
}

impl BeamGeometry {
    pub fn new(waist_pump_um: f64, waist_input_um: f64) -> Result<Self> {
        if !(waist_pump_um > 0.0 && waist_input_um > 0.0)
            || !waist_pump_um.is_finite()
            || !waist_input_um.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "beam waists must be positive, got pump {waist_pump_um} µm, input {waist_input_um} µm"
            )));
        }
        Ok(BeamGeometry {
            waist_pump_um,
            waist_input_um,
        })
    }

    /// Largest fraction of the input beam area covered by the pump,
    /// `min(1, (w_pump/w_input)²)`.
    pub fn overlap_fraction(&self) -> f64 {
        (self.waist_pump_um / self.waist_input_um).powi(2).min(1.0)
    }
}

/// Area-ratio overlap estimate for two Gaussian waists.
pub fn beam_overlap_fraction(geometry: &BeamGeometry) -> f64 {
    geometry.overlap_fraction()
}

/// Parameters of the sin² efficiency model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionModel {
    /// Normalized efficiency, 1/(W·m²).
    pub eta_nor: f64,
    /// Interaction length, m.
    pub length_m: f64,
    /// Saturation ceiling in (0, 1].
    pub eta_max: f64,
    /// Spatial overlap fraction in [0, 1].
    pub overlap: f64,
}

impl ConversionModel {
    pub fn new(eta_nor: f64, length_m: f64, eta_max: f64, overlap: f64) -> Result<Self> {
        let fixed = FixedParameters::new(length_m, overlap, eta_max)?;
        if !(eta_nor >= 0.0 && eta_nor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "normalized efficiency must be non-negative, got {eta_nor}"
            )));
        }
        Ok(fixed.with_eta_nor(eta_nor))
    }

    /// External efficiency at average pump power `pump_w` (W).
    pub fn efficiency(&self, pump_w: f64) -> Result<f64> {
        if !(pump_w >= 0.0) || !pump_w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pump power must be non-negative, got {pump_w} W"
            )));
        }
        Ok(self.efficiency_unchecked(pump_w))
    }

    fn efficiency_unchecked(&self, pump_w: f64) -> f64 {
        let s = (self.length_m * (self.eta_nor * pump_w).sqrt()).sin();
        self.eta_max * self.overlap * s * s
    }

    /// Highest attainable efficiency, `eta_max · overlap`.
    pub fn ceiling(&self) -> f64 {
        self.eta_max * self.overlap
    }

    /// Pump power of the first conversion maximum, where `L·sqrt(eta_nor·P) = π/2`.
    pub fn first_peak_power_w(&self) -> f64 {
        (FRAC_PI_2 / self.length_m).powi(2) / self.eta_nor
    }
}

/// External efficiency `eta_max · overlap · sin²(L·sqrt(eta_nor·P))`.
pub fn efficiency_vs_power(model: &ConversionModel, pump_w: f64) -> Result<f64> {
    model.efficiency(pump_w)
}

/// Quantities held fixed during a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedParameters {
    pub length_m: f64,
    pub overlap: f64,
    pub eta_max: f64,
}

impl FixedParameters {
    pub fn new(length_m: f64, overlap: f64, eta_max: f64) -> Result<Self> {
        if !(length_m > 0.0 && length_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "interaction length must be positive, got {length_m} m"
            )));
        }
        if !(0.0..=1.0).contains(&overlap) {
            return Err(Error::InvalidParameter(format!(
                "overlap must lie in [0, 1], got {overlap}"
            )));
        }
        if !(eta_max > 0.0 && eta_max <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "saturation ceiling must lie in (0, 1], got {eta_max}"
            )));
        }
        Ok(FixedParameters {
            length_m,
            overlap,
            eta_max,
        })
    }

    fn with_eta_nor(self, eta_nor: f64) -> ConversionModel {
        ConversionModel {
            eta_nor,
            length_m: self.length_m,
            eta_max: self.eta_max,
            overlap: self.overlap,
        }
    }
}

/// A measured `(pump power, external efficiency)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyPoint {
    #[serde(rename = "P_pump_W")]
    pub pump_w: f64,
    #[serde(rename = "eta_ext")]
    pub eta_ext: f64,
}

/// Result of [`fit_normalized_efficiency`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub model: ConversionModel,
    /// Euclidean norm of the efficiency residuals.
    pub residual: f64,
    pub points_used: usize,
}

const FIT_SCAN_SAMPLES: usize = 256;

/// Least-squares fit of `eta_nor` to measured points.
///
/// Points at zero pump power carry no information and are skipped. The
/// search runs over `[0, π²/(4 L² P_min)]`: a coarse scan picks the best
/// sample, then golden-section search refines it between its neighbours.
pub fn fit_normalized_efficiency(
    points: &[EfficiencyPoint],
    fixed: FixedParameters,
) -> Result<FitReport> {
    let ceiling = fixed.eta_max * fixed.overlap;
    let mut used = Vec::with_capacity(points.len());
    for p in points {
        if !(p.pump_w >= 0.0) || !p.pump_w.is_finite() || !p.eta_ext.is_finite() {
            return Err(Error::Unfittable(format!(
                "invalid point ({} W, {})",
                p.pump_w, p.eta_ext
            )));
        }
        if p.eta_ext < 0.0 || p.eta_ext >= ceiling {
            return Err(Error::Unfittable(format!(
                "efficiency {} outside [0, {ceiling}) set by eta_max × overlap",
                p.eta_ext
            )));
        }
        if p.pump_w > 0.0 {
            used.push(*p);
        }
    }
    if used.is_empty() {
        return Err(Error::Unfittable(
            "no point with positive pump power".into(),
        ));
    }

    let p_min = used.iter().map(|p| p.pump_w).fold(f64::INFINITY, f64::min);
    let upper = (FRAC_PI_2 / fixed.length_m).powi(2) / p_min;

    let residual_norm = |eta_nor: f64| {
        let model = fixed.with_eta_nor(eta_nor);
        used.iter()
            .map(|p| {
                let r = model.efficiency_unchecked(p.pump_w) - p.eta_ext;
                r * r
            })
            .sum::<f64>()
            .sqrt()
    };

    let step = upper / (FIT_SCAN_SAMPLES - 1) as f64;
    let best = (0..FIT_SCAN_SAMPLES)
        .map(|i| (i, residual_norm(i as f64 * step)))
        .fold(
            (0, f64::INFINITY),
            |acc, (i, r)| if r < acc.1 { (i, r) } else { acc },
        )
        .0;
    let lo = best.saturating_sub(1) as f64 * step;
    let hi = ((best + 1).min(FIT_SCAN_SAMPLES - 1)) as f64 * step;
    let eta_nor = golden_section_min(residual_norm, lo, hi, 1e-15);

    Ok(FitReport {
        model: fixed.with_eta_nor(eta_nor),
        residual: residual_norm(eta_nor),
        points_used: used.len(),
    })
}
