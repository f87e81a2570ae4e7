use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("dispersion form `{form}` takes {expected} coefficients, got {found}")]
    Arity {
        form: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid {what} interval [{lo}, {hi}]")]
    InvalidInterval {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error(
        "({lambda_um} µm, {temperature_c} °C) lies outside the validity box of model `{model}`; \
         pass the extrapolation flag to evaluate anyway"
    )]
    OutOfValidity {
        model: String,
        lambda_um: f64,
        temperature_c: f64,
    },

    #[error(
        "model `{model}` gives a non-physical index {n} at ({lambda_um} µm, {temperature_c} °C)"
    )]
    NonPhysicalIndex {
        model: String,
        n: f64,
        lambda_um: f64,
        temperature_c: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("difference-frequency generation needs the input frequency above the pump frequency")]
    NonPhysicalDfg,

    #[error(
        "no first-order quasi-phase-matching: bulk mismatch Δk = {delta_k} rad/m is not positive"
    )]
    NoFirstOrderQpm { delta_k: f64 },

    #[error("phase mismatch does not change sign over [{lo_nm}, {hi_nm}] nm")]
    NoSignChange { lo_nm: f64, hi_nm: f64 },

    #[error("{count} phase-matching roots found in [{lo_nm}, {hi_nm}] nm; narrow the bracket")]
    MultipleRoots {
        count: usize,
        lo_nm: f64,
        hi_nm: f64,
    },

    #[error("unfittable data: {0}")]
    Unfittable(String),

    #[error("detector saturated: raw rate × dead time = {product} ≥ 1")]
    Saturation { product: f64 },

    #[error("corrected signal rate {signal} is below corrected noise rate {noise}")]
    SignalBelowNoise { signal: f64, noise: f64 },

    #[error("no crossover: blue attenuation {alpha_blue} dB/km does not exceed IR attenuation {alpha_ir} dB/km")]
    NoCrossover { alpha_blue: f64, alpha_ir: f64 },

    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
