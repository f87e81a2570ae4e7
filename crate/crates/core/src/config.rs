//! Run configuration shared by the command-line front end and the examples.
//!
//! Keys carry their unit as a suffix (`_nm`, `_um`, `_mm`, `_ps`, `_ns`,
//! `_mw`, `_nw`, `_mhz`, `_db_per_km`, `_c` for °C, `_k` for kelvin steps).
//! Relative paths are resolved against the directory holding the config
//! file; a model path that is not found there is looked up in the directory
//! named by `QFC_MODEL_DIR`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::conversion::{BeamGeometry, EfficiencyPoint};
use crate::dispersion::{DispersionModel, Extrapolation};
use crate::error::{Error, Result};
use crate::netlink::{
    LinkScenario, Topology, DEFAULT_ALPHA_BLUE_DB_PER_KM, DEFAULT_ALPHA_IR_DB_PER_KM,
};
use crate::phasematching::{CrystalSpec, ProcessKind, ProcessSpec, WavelengthGrid};
use crate::photonstats::{DetectionChain, InputRegime, PulseTrain};

/// Environment variable naming the fallback directory for dispersion models.
pub const MODEL_DIR_ENV: &str = "QFC_MODEL_DIR";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub path: PathBuf,
    #[serde(default)]
    pub allow_extrapolation: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    pub kind: ProcessKind,
    pub lambda_in_nm: f64,
    pub lambda_pump_nm: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSection {
    pub length_mm: f64,
    pub temperature_c: f64,
    /// Fabricated grating; the design period is used when absent.
    pub poling_period_um: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    #[serde(default = "default_dt_k")]
    pub dt_k: f64,
    pub bracket_lo_nm: Option<f64>,
    pub bracket_hi_nm: Option<f64>,
}

fn default_dt_k() -> f64 {
    1.0
}

impl Default for DesignSection {
    fn default() -> Self {
        DesignSection {
            dt_k: default_dt_k(),
            bracket_lo_nm: None,
            bracket_hi_nm: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub step_nm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencySection {
    pub waist_pump_um: f64,
    pub waist_input_um: f64,
    #[serde(default = "default_eta_max")]
    pub eta_max: f64,
    /// CSV with header `P_pump_W,eta_ext`.
    pub points_csv: Option<PathBuf>,
    #[serde(default)]
    pub predict_pump_mw: Vec<f64>,
}

fn default_eta_max() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub regime: InputRegime,
    pub tau_pump_ps: f64,
    pub rep_rate_mhz: f64,
    pub tau_input_ps: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionSection {
    pub component_transmissions: Vec<f64>,
    pub detector_efficiency: f64,
    pub dead_time_ns: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub input_power_nw: f64,
    /// CSV with header `integration_s,signal_counts,noise_counts`.
    pub counts_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceGrid {
    pub start_km: f64,
    pub stop_km: f64,
    pub step_km: f64,
}

impl DistanceGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.start_km >= 0.0 && self.stop_km >= self.start_km && self.step_km > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "invalid distance grid {}..{} step {} km",
                self.start_km, self.stop_km, self.step_km
            )));
        }
        let n = ((self.stop_km - self.start_km) / self.step_km + 1e-9).floor() as usize + 1;
        Ok((0..n)
            .map(|i| self.start_km + i as f64 * self.step_km)
            .collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    #[serde(default = "default_alpha_blue")]
    pub alpha_blue_db_per_km: f64,
    #[serde(default = "default_alpha_ir")]
    pub alpha_ir_db_per_km: f64,
    pub eta_down: f64,
    pub eta_up: f64,
    #[serde(default)]
    pub distances_km: Vec<f64>,
    pub grid: Option<DistanceGrid>,
}

fn default_alpha_blue() -> f64 {
    DEFAULT_ALPHA_BLUE_DB_PER_KM
}

fn default_alpha_ir() -> f64 {
    DEFAULT_ALPHA_IR_DB_PER_KM
}

impl LinkSection {
    pub fn template(&self) -> Result<LinkScenario> {
        LinkScenario::new(
            Topology::A,
            0.0,
            self.alpha_blue_db_per_km,
            self.alpha_ir_db_per_km,
            self.eta_down,
            self.eta_up,
        )
    }

    /// Explicit distances win over the grid.
    pub fn distances(&self) -> Result<Vec<f64>> {
        if !self.distances_km.is_empty() {
            return Ok(self.distances_km.clone());
        }
        match &self.grid {
            Some(g) => g.points(),
            None => Err(Error::InvalidParameter(
                "[link] needs `distances_km` or a `[link.grid]`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelSection>,
    pub process: Option<ProcessSection>,
    pub crystal: Option<CrystalSection>,
    pub design: Option<DesignSection>,
    pub curve: Option<CurveSection>,
    pub efficiency: Option<EfficiencySection>,
    pub pulse: Option<PulseSection>,
    pub detection: Option<DetectionSection>,
    pub budget: Option<BudgetSection>,
    pub link: Option<LinkSection>,
    /// Directory relative paths resolve against; set by [`RunConfig::load`].
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn missing(section: &str) -> Error {
    Error::InvalidParameter(format!("config has no [{section}] section"))
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: "<memory>".into(),
            message: e.message().to_string(),
        })?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-checks every embedded domain invariant.
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.process {
            ProcessSpec::new(p.kind, p.lambda_in_nm, p.lambda_pump_nm)?;
        }
        if let Some(c) = &self.crystal {
            if !(c.length_mm > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "crystal length must be positive, got {} mm",
                    c.length_mm
                )));
            }
            if let Some(p) = c.poling_period_um {
                if !(p > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "poling period must be positive, got {p} µm"
                    )));
                }
            }
        }
        if let Some(c) = &self.curve {
            WavelengthGrid::new(c.start_nm, c.stop_nm, c.step_nm)?;
        }
        if let Some(e) = &self.efficiency {
            BeamGeometry::new(e.waist_pump_um, e.waist_input_um)?;
        }
        if self.pulse.is_some() {
            self.pulse_train()?;
        }
        if self.detection.is_some() {
            self.detection_chain()?;
        }
        if let Some(l) = &self.link {
            l.template()?;
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn model_path(&self) -> Result<PathBuf> {
        let section = self.model.as_ref().ok_or_else(|| missing("model"))?;
        let local = self.resolve(&section.path);
        if local.exists() || section.path.is_absolute() {
            return Ok(local);
        }
        if let Some(dir) = std::env::var_os(MODEL_DIR_ENV) {
            let candidate = PathBuf::from(dir).join(&section.path);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
        Ok(local)
    }

    pub fn load_model(&self) -> Result<Arc<DispersionModel>> {
        Ok(Arc::new(DispersionModel::load(self.model_path()?)?))
    }

    pub fn extrapolation(&self) -> Extrapolation {
        Extrapolation::from_flag(self.model.as_ref().is_some_and(|m| m.allow_extrapolation))
    }

    pub fn set_allow_extrapolation(&mut self, allow: bool) {
        if let Some(m) = self.model.as_mut() {
            m.allow_extrapolation = allow;
        }
    }

    pub fn process(&self) -> Result<ProcessSpec> {
        let p = self.process.ok_or_else(|| missing("process"))?;
        ProcessSpec::new(p.kind, p.lambda_in_nm, p.lambda_pump_nm)
    }

    pub fn crystal_section(&self) -> Result<CrystalSection> {
        self.crystal.ok_or_else(|| missing("crystal"))
    }

    pub fn crystal(
        &self,
        model: Arc<DispersionModel>,
        poling_period_um: f64,
    ) -> Result<CrystalSpec> {
        let c = self.crystal_section()?;
        CrystalSpec::new(
            c.length_mm,
            poling_period_um,
            c.temperature_c,
            model,
            self.extrapolation(),
        )
    }

    pub fn design(&self) -> DesignSection {
        self.design.unwrap_or_default()
    }

    /// Input-wavelength bracket for root searches, ±5 % around the nominal input by default.
    pub fn bracket_nm(&self) -> Result<(f64, f64)> {
        let p = self.process.ok_or_else(|| missing("process"))?;
        let d = self.design();
        Ok((
            d.bracket_lo_nm.unwrap_or(0.95 * p.lambda_in_nm),
            d.bracket_hi_nm.unwrap_or(1.05 * p.lambda_in_nm),
        ))
    }

    pub fn curve_grid(&self) -> Result<WavelengthGrid> {
        let c = self.curve.ok_or_else(|| missing("curve"))?;
        WavelengthGrid::new(c.start_nm, c.stop_nm, c.step_nm)
    }

    pub fn pulse_train(&self) -> Result<PulseTrain> {
        let p = self.pulse.ok_or_else(|| missing("pulse"))?;
        let tau = p.tau_pump_ps * 1e-12;
        let rep = p.rep_rate_mhz * 1e6;
        match p.regime {
            InputRegime::Cw => PulseTrain::cw(tau, rep),
            InputRegime::Pulsed => {
                let tau_in = p.tau_input_ps.ok_or_else(|| {
                    Error::InvalidParameter("pulsed regime needs `tau_input_ps`".into())
                })?;
                PulseTrain::pulsed(tau, rep, tau_in * 1e-12)
            }
        }
    }

    pub fn detection_chain(&self) -> Result<DetectionChain> {
        let d = self
            .detection
            .as_ref()
            .ok_or_else(|| missing("detection"))?;
        DetectionChain::new(
            d.component_transmissions.clone(),
            d.detector_efficiency,
            d.dead_time_ns * 1e-9,
        )
    }

    pub fn budget(&self) -> Result<&BudgetSection> {
        self.budget.as_ref().ok_or_else(|| missing("budget"))
    }

    pub fn efficiency(&self) -> Result<&EfficiencySection> {
        self.efficiency
            .as_ref()
            .ok_or_else(|| missing("efficiency"))
    }

    pub fn link(&self) -> Result<&LinkSection> {
        self.link.as_ref().ok_or_else(|| missing("link"))
    }
}

/// One row of a counts CSV.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountRow {
    pub integration_s: f64,
    pub signal_counts: f64,
    pub noise_counts: f64,
}

fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Reads a counts CSV (`integration_s,signal_counts,noise_counts`).
pub fn read_counts_csv(path: impl AsRef<Path>) -> Result<Vec<CountRow>> {
    let path = path.as_ref();
    let rows: Vec<CountRow> = read_csv(path)?;
    if rows.is_empty() {
        return Err(Error::Empty(format!(
            "{} has no count rows",
            path.display()
        )));
    }
    for r in &rows {
        if !(r.integration_s > 0.0 && r.signal_counts >= 0.0 && r.noise_counts >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bad count row in {}: {r:?}",
                path.display()
            )));
        }
    }
    Ok(rows)
}

/// Reads an efficiency CSV (`P_pump_W,eta_ext`).
pub fn read_efficiency_csv(path: impl AsRef<Path>) -> Result<Vec<EfficiencyPoint>> {
    let path = path.as_ref();
    let rows: Vec<EfficiencyPoint> = read_csv(path)?;
    if rows.is_empty() {
        return Err(Error::Empty(format!("{} has no points", path.display())));
    }
    Ok(rows)
}
