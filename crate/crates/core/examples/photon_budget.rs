//! Single-photon budget from recorded counts, plus the long-pulse noise projection.
//!
//! ```text
//! cargo run --example photon_budget
//! ```

use std::path::PathBuf;

use qfc::commands;
use qfc::config::RunConfig;
use qfc::photonstats::{bandwidth_nm_to_hz, noise_rescale};

fn main() -> qfc::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    for name in ["sfg_upconversion.toml", "dfg_downconversion.toml"] {
        let r = commands::budget(&RunConfig::load(dir.join(name))?, None)?;
        println!("{name}");
        println!("  duty cycle           {:.4}", r.duty_cycle);
        println!("  photons per pulse    {:.3}", r.n_per_pulse);
        println!("  η_loss               {:.5}", r.eta_loss);
        println!(
            "  S, N (corrected)     {:.4e} /s, {:.4e} /s",
            r.signal_hz, r.noise_hz
        );
        println!("  η_ext                {:.3}%", 100.0 * r.eta_ext);
        println!("  SNR                  {:.1}", r.snr.value());
        println!("  μ₁                   {:.4}", r.mu1);
    }

    // Stretching the pump to 1 µs and narrowing the filter to 200 MHz.
    let wide = bandwidth_nm_to_hz(8.9, 1570.0)?;
    let projected = noise_rescale(3.9e-6, 300e-12, 1e-6, wide, 200e6)?;
    println!(
        "\nnoise per pulse: 3.9e-6 (300 ps, {:.3e} Hz) -> {projected:.2e} (1 µs, 200 MHz)",
        wide
    );
    Ok(())
}
