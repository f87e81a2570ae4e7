#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use qfc::dispersion::{DispersionModel, Extrapolation};
use qfc::phasematching::{qpm_period, CrystalSpec, ProcessKind, ProcessSpec};

pub const CRYSTAL_LENGTH_MM: f64 = 19.97;

pub fn data_path(name: &str) -> PathBuf {
    qfc::shipped_data_dir().join(name)
}

pub fn example_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join("data")
        .join(name)
}

pub fn shipped_model() -> Arc<DispersionModel> {
    Arc::new(DispersionModel::load(data_path("mgo_ln_e_gayer2008.toml")).unwrap())
}

pub fn constant_model() -> Arc<DispersionModel> {
    Arc::new(DispersionModel::load(data_path("constant_n2.toml")).unwrap())
}

pub fn sfg_triple() -> ProcessSpec {
    ProcessSpec::new(ProcessKind::Sfg, 1547.6, 579.6).unwrap()
}

/// The SFG crystal at 160 °C with its grating set to the design period.
pub fn design_crystal() -> CrystalSpec {
    let model = shipped_model();
    let period = qpm_period(&sfg_triple(), &model, 160.0, Extrapolation::Allow).unwrap();
    CrystalSpec::new(
        CRYSTAL_LENGTH_MM,
        period,
        160.0,
        model,
        Extrapolation::Allow,
    )
    .unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Event-by-event non-paralyzable detector: Poisson arrivals at `true_rate_hz`,
/// each click blinds the detector for `dead_time_s`. Returns registered clicks
/// over `duration_s`.
pub fn simulate_dead_time_counts(
    true_rate_hz: f64,
    dead_time_s: f64,
    duration_s: f64,
    seed: u64,
) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = Exp::new(true_rate_hz).unwrap();
    let mut t = 0.0;
    let mut blind_until = f64::NEG_INFINITY;
    let mut clicks = 0u64;
    loop {
        t += gap.sample(&mut rng);
        if t >= duration_s {
            break;
        }
        if t >= blind_until {
            clicks += 1;
            blind_until = t + dead_time_s;
        }
    }
    clicks
}

/// Uniform draw used to jitter synthetic data.
pub fn seeded_uniform(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}
