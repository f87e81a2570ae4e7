//! Design and analysis toolkit for bi-directional quantum frequency conversion
//! between short-wavelength ion transitions and the telecom C-band.
//!
//! | module | what it does |
//! |---|---|
//! | [`dispersion`] | temperature-dependent extraordinary indices from coefficient files |
//! | [`phasematching`] | energy conservation, QPM period, phase-matched wavelength, tuning slopes, sinc² curves |
//! | [`conversion`] | sin² efficiency vs pump power, beam overlap, normalized-efficiency fit |
//! | [`photonstats`] | duty cycle, photon numbers, dead-time correction, η_ext, SNR, μ₁, noise rescaling |
//! | [`netlink`] | two-photon fiber link probabilities for three topologies, in log10 form |
//! | [`config`], [`commands`] | TOML run configuration and the reports behind the `qfc` binary |
//!
//! Runnable walkthroughs live in `examples/`; see the crate README.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod constants;
pub mod conversion;
pub mod dispersion;
pub mod error;
pub mod netlink;
mod numeric;
pub mod phasematching;
pub mod photonstats;

pub use error::{Error, Result};

/// Directory holding the dispersion models shipped with the crate.
pub fn shipped_data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}
