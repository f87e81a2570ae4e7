//! Extraordinary index of MgO:LiNbO3 across wavelength and temperature.
//!
//! ```text
//! cargo run --example dispersion_lookup
//! ```

use qfc::dispersion::{DispersionModel, Extrapolation};

fn main() -> qfc::Result<()> {
    let model = DispersionModel::load(qfc::shipped_data_dir().join("mgo_ln_e_gayer2008.toml"))?;
    println!("{} ({:?} form)", model.name(), model.form());

    let temps = [25.0, 100.0, 160.0, 200.0];
    print!("{:>10}", "λ (nm)");
    for t in temps {
        print!("{:>12}", format!("{t} °C"));
    }
    println!();
    for lambda_nm in [421.7, 425.5, 579.6, 585.0, 1547.6, 1560.6] {
        print!("{lambda_nm:>10.1}");
        for t in temps {
            // The violet wavelengths sit just below the fitted range.
            let n = model.refractive_index(lambda_nm / 1000.0, t, Extrapolation::Allow)?;
            print!("{n:>12.6}");
        }
        println!();
    }

    let dn_dt = |l_um: f64| {
        let hi = model.refractive_index(l_um, 160.5, Extrapolation::Forbid)?;
        let lo = model.refractive_index(l_um, 159.5, Extrapolation::Forbid)?;
        Ok::<_, qfc::Error>(hi - lo)
    };
    println!(
        "\ndn/dT at 160 °C: {:.3e} /K (1547.6 nm), {:.3e} /K (579.6 nm)",
        dn_dt(1.5476)?,
        dn_dt(0.5796)?
    );

    match model.refractive_index(0.4217, 160.0, Extrapolation::Forbid) {
        Err(e) => println!("without extrapolation: {e}"),
        Ok(n) => println!("n = {n}"),
    }
    Ok(())
}
