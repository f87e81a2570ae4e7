//! Temperature-dependent refractive indices of poled nonlinear crystals.
//!
//! Coefficient sets are loaded from TOML files so that the index model can be
//! swapped without recompiling. A file looks like:
//!
//! ```toml
//! name = "MgO:LiNbO3 extraordinary (Gayer 2008)"
//! form = "jundt_thermal"
//! coefficients = [5.756, 0.0983, 0.2020, 189.32, 12.52, 1.32e-2,
//!                 2.860e-6, 4.700e-8, 6.113e-8, 1.516e-4]
//! validity_wavelength_um = [0.5, 4.0]
//! validity_temperature_C = [20.0, 200.0]
//! axis = "extraordinary"
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Functional form of a dispersion model. Wavelength is in µm, temperature in °C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionForm {
    /// Jundt-type temperature-dependent Sellmeier equation.
    ///
    /// `n² = a1 + b1·f + (a2 + b2·f)/(λ² − (a3 + b3·f)²) + (a4 + b4·f)/(λ² − a5²) − a6·λ²`
    /// with `f = (T − 24.5)(T + 570.82)`.
    ///
    /// Coefficients: `[a1, a2, a3, a4, a5, a6, b1, b2, b3, b4]`.
    JundtThermal,
    /// Single-pole Sellmeier with an infrared correction and a linear
    /// thermo-optic term.
    ///
    /// `n = sqrt(A + B/(λ² − C) − D·λ²) + dn/dT · (T − T_ref)`
    ///
    /// Coefficients: `[A, B, C, D, dn/dT, T_ref]`.
    SellmeierLinearDndt,
}

impl DispersionForm {
    pub const fn arity(self) -> usize {
        match self {
            DispersionForm::JundtThermal => 10,
            DispersionForm::SellmeierLinearDndt => 6,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            DispersionForm::JundtThermal => "jundt_thermal",
            DispersionForm::SellmeierLinearDndt => "sellmeier_linear_dndt",
        }
    }

    fn evaluate(self, c: &[f64], lambda_um: f64, temperature_c: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        match self {
            DispersionForm::JundtThermal => {
                let f = (temperature_c - 24.5) * (temperature_c + 570.82);
                let pole_uv = c[2] + c[8] * f;
                let n2 = c[0]
                    + c[6] * f
                    + (c[1] + c[7] * f) / (l2 - pole_uv * pole_uv)
                    + (c[3] + c[9] * f) / (l2 - c[4] * c[4])
                    - c[5] * l2;
                n2.sqrt()
            }
            DispersionForm::SellmeierLinearDndt => {
                let n2 = c[0] + c[1] / (l2 - c[2]) - c[3] * l2;
                n2.sqrt() + c[4] * (temperature_c - c[5])
            }
        }
    }
}

impl fmt::Display for DispersionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Polarization axis the coefficients describe. Type-0 QPM uses the
/// extraordinary axis only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    #[serde(alias = "e")]
    Extraordinary,
}

/// Whether evaluation outside the validity box is permitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    #[default]
    Forbid,
    Allow,
}

impl Extrapolation {
    pub fn from_flag(allow: bool) -> Self {
        if allow {
            Extrapolation::Allow
        } else {
            Extrapolation::Forbid
        }
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn validate(&self, what: &'static str) -> Result<()> {
        if self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi {
            Ok(())
        } else {
            Err(Error::InvalidInterval {
                what,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

impl From<[f64; 2]> for Interval {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Interval { lo, hi }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    form: DispersionForm,
    coefficients: Vec<f64>,
    validity_wavelength_um: Interval,
    #[serde(rename = "validity_temperature_C")]
    validity_temperature_c: Interval,
    axis: Axis,
}

/// A validated, immutable refractive-index model.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionModel {
    name: String,
    form: DispersionForm,
    coefficients: Vec<f64>,
    validity_wavelength_um: Interval,
    validity_temperature_c: Interval,
    axis: Axis,
}

impl DispersionModel {
    pub fn new(
        name: impl Into<String>,
        form: DispersionForm,
        coefficients: Vec<f64>,
        validity_wavelength_um: Interval,
        validity_temperature_c: Interval,
        axis: Axis,
    ) -> Result<Self> {
        if coefficients.len() != form.arity() {
            return Err(Error::Arity {
                form: form.name(),
                expected: form.arity(),
                found: coefficients.len(),
            });
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite dispersion coefficient {bad}"
            )));
        }
        validity_wavelength_um.validate("validity wavelength")?;
        validity_temperature_c.validate("validity temperature")?;
        if validity_wavelength_um.lo <= 0.0 {
            return Err(Error::InvalidInterval {
                what: "validity wavelength",
                lo: validity_wavelength_um.lo,
                hi: validity_wavelength_um.hi,
            });
        }
        Ok(DispersionModel {
            name: name.into(),
            form,
            coefficients,
            validity_wavelength_um,
            validity_temperature_c,
            axis,
        })
    }

    /// Reads and validates a coefficient file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> DispersionForm {
        self.form
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn validity_wavelength_um(&self) -> Interval {
        self.validity_wavelength_um
    }

    pub fn validity_temperature_c(&self) -> Interval {
        self.validity_temperature_c
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// True when `(lambda_um, temperature_c)` lies inside the validity box.
    pub fn contains(&self, lambda_um: f64, temperature_c: f64) -> bool {
        self.validity_wavelength_um.contains(lambda_um)
            && self.validity_temperature_c.contains(temperature_c)
    }

    /// Extraordinary refractive index at vacuum wavelength `lambda_um` (µm)
    /// and temperature `temperature_c` (°C).
    pub fn refractive_index(
        &self,
        lambda_um: f64,
        temperature_c: f64,
        extrapolation: Extrapolation,
    ) -> Result<f64> {
        if extrapolation == Extrapolation::Forbid && !self.contains(lambda_um, temperature_c) {
            return Err(Error::OutOfValidity {
                model: self.name.clone(),
                lambda_um,
                temperature_c,
            });
        }
        let n = self
            .form
            .evaluate(&self.coefficients, lambda_um, temperature_c);
        if !n.is_finite() || n <= 1.0 {
            return Err(Error::NonPhysicalIndex {
                model: self.name.clone(),
                n,
                lambda_um,
                temperature_c,
            });
        }
        Ok(n)
    }
}

impl FromStr for DispersionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let file: ModelFile = toml::from_str(s).map_err(|e| Error::Parse {
            path: "<memory>".into(),
            message: e.message().to_string(),
        })?;
        DispersionModel::new(
            file.name,
            file.form,
            file.coefficients,
            file.validity_wavelength_um,
            file.validity_temperature_c,
            file.axis,
        )
    }
}
