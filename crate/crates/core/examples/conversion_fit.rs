//! Fit the sin² efficiency model to measured points and extrapolate.
//!
//! ```text
//! cargo run --example conversion_fit
//! ```

use std::path::PathBuf;

use qfc::commands;
use qfc::config::RunConfig;
use qfc::conversion::{
    fit_normalized_efficiency, ConversionModel, EfficiencyPoint, FixedParameters,
};

fn main() -> qfc::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    for name in ["sfg_upconversion.toml", "dfg_downconversion.toml"] {
        let cfg = RunConfig::load(dir.join(name))?;
        let r = commands::efficiency(&cfg, None)?;
        println!("{name}");
        println!(
            "  overlap ceiling      {:.2}%",
            100.0 * r.overlap * r.eta_max
        );
        println!("  eta_nor              {:.4e} /(W·m²)", r.eta_nor);
        println!("  first maximum at     {:.2} W", r.first_peak_pump_w);
        for p in &r.predictions {
            println!("  {:>6.1} mW -> {:.2}%", p.pump_mw, 100.0 * p.eta_ext);
        }
    }

    // Recovering a known model from a noiseless power scan.
    let fixed = FixedParameters::new(0.01997, 0.466, 1.0)?;
    let truth = ConversionModel::new(2.0e3, fixed.length_m, fixed.eta_max, fixed.overlap)?;
    let scan: Vec<EfficiencyPoint> = (1..=8)
        .map(|i| {
            let pump_w = 0.025 * i as f64;
            Ok(EfficiencyPoint {
                pump_w,
                eta_ext: truth.efficiency(pump_w)?,
            })
        })
        .collect::<qfc::Result<_>>()?;
    let fit = fit_normalized_efficiency(&scan, fixed)?;
    println!(
        "\nsynthetic scan: true eta_nor {:.1}, fitted {:.6}, residual {:.1e}",
        truth.eta_nor, fit.model.eta_nor, fit.residual
    );
    Ok(())
}
