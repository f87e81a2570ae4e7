//! Poling period and temperature tuning for both conversion directions.
//!
//! ```text
//! cargo run --example design_grating
//! ```

use std::path::PathBuf;

use qfc::commands;
use qfc::config::RunConfig;

fn main() -> qfc::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    for name in ["sfg_upconversion.toml", "dfg_downconversion.toml"] {
        let cfg = RunConfig::load(dir.join(name))?;
        let r = commands::design(&cfg)?;
        let t = &r.triple;
        println!("{name}");
        println!(
            "  {:?}: {:.2} nm with {:.2} nm pump -> {:.3} nm at {} °C",
            t.kind, t.lambda_in_nm, t.lambda_pump_nm, t.lambda_out_nm, r.temperature_c
        );
        println!("  poling period        {:.4} µm", r.lambda_poling_um);
        println!("  dλ_in/dT             {:.4} nm/K", r.slopes.dlambda_in_dt);
        println!("  dλ_out/dT            {:.4} nm/K", r.slopes.dlambda_out_dt);
        println!(
            "  slope ratio          {:.7} (finite difference) vs {:.7} (energy conservation)",
            r.slopes.finite_difference_ratio, r.slopes.analytic_ratio
        );
        if r.extrapolated {
            println!("  note: dispersion evaluated outside the model's validity box");
        }
    }
    Ok(())
}
