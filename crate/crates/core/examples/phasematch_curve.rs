//! Normalized sinc² acceptance curve and its first-null width.
//!
//! Writes `phasematch_curve.csv` in the working directory.
//!
//! ```text
//! cargo run --example phasematch_curve
//! ```

use std::fs::File;
use std::path::PathBuf;

use qfc::commands::{self, write_curve_csv};
use qfc::config::RunConfig;
use qfc::phasematching::{first_null_width, ProcessKind};

fn main() -> qfc::Result<()> {
    let cfg = RunConfig::load(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/sfg_upconversion.toml"),
    )?;
    let report = commands::curve(&cfg)?;

    let peak = report
        .points
        .iter()
        .max_by(|a, b| a.relative_efficiency.total_cmp(&b.relative_efficiency))
        .expect("non-empty grid");
    println!(
        "{} points, peak {:.6} at {:.3} nm",
        report.points.len(),
        peak.relative_efficiency,
        peak.lambda_in_nm
    );

    let out = "phasematch_curve.csv";
    let file = File::create(out).map_err(|source| qfc::Error::Io {
        path: out.into(),
        source,
    })?;
    write_curve_csv(&report.points, file)?;
    println!("wrote {out}");

    let crystal = cfg.crystal(cfg.load_model()?, report.grating_um)?;
    let bracket = cfg.bracket_nm()?;
    for length_mm in [10.0, 19.97, 40.0] {
        let w = first_null_width(
            &crystal.with_length_mm(length_mm)?,
            579.6,
            ProcessKind::Sfg,
            bracket,
        )?;
        println!(
            "L = {length_mm:>5.2} mm: nulls at {:.4} / {:.4} nm, width {:.4} nm",
            w.lower_null_nm, w.upper_null_nm, w.width_nm
        );
    }
    Ok(())
}
