//! Two-photon transmission between remote ion nodes, with and without conversion.
//!
//! ```text
//! cargo run --example network_link
//! ```

use std::path::PathBuf;

use qfc::commands;
use qfc::config::RunConfig;

fn main() -> qfc::Result<()> {
    let cfg = RunConfig::load(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/network_link.toml"),
    )?;
    let report = commands::link(&cfg, Some(&[0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0]))?;

    println!(
        "{:>8} {:>14} {:>14} {:>14}",
        "km", "A (1 link)", "B (midpoint)", "C (422 nm)"
    );
    for row in &report.rows {
        println!(
            "{:>8.1} {:>14} {:>14} {:>14}",
            row.distance_km,
            row.case_a.to_scientific(3),
            row.case_b.to_scientific(3),
            row.case_c.to_scientific(3)
        );
    }
    let s = &report.summary;
    println!(
        "\nimprovement at 10 km: {:.2} orders of magnitude",
        s.improvement_orders_at_10km
    );
    println!("conversion pays off beyond {:.3} km", s.crossover_km);
    Ok(())
}
