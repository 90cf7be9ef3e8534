//! Designs monomial perturbations whose Melnikov function vanishes at
//! prescribed energies, on the harmonic model and on the Ostrovsky model.

use tws_persist::catalog::{make_ostrovsky, Forcing};
use tws_persist::designer::{place_zeros, DesignOptions};
use tws_persist::model::{harmonic, PlanarModel};

fn show(name: &str, model: &PlanarModel, exponents: &[(u32, u32)], targets: &[f64]) -> tws_persist::Result<()> {
    let d = place_zeros(model, exponents, targets, &DesignOptions::default())?;
    println!("{name}: targets {targets:?}");
    for (t, (q, p)) in d.perturbation.terms.iter().zip(exponents) {
        println!("    {:+.10e} x^{} y^{}", t.d, 2 * q, 2 * p - 1);
    }
    println!("    condition number {:.3e}", d.condition);
    for (z, e) in d.verification.simple_zeros().iter().zip(&d.placement_errors) {
        println!("    zero at {z:.12}  (relative error {e:.1e})");
    }
    Ok(())
}

fn main() -> tws_persist::Result<()> {
    show("harmonic", &harmonic(), &[(0, 1), (0, 2), (0, 3), (0, 4)], &[0.5, 1.0, 1.5])?;
    let ost = make_ostrovsky(1.0, Forcing::Zero)?;
    show("ostrovsky", &ost.model, &[(0, 1), (1, 1), (0, 3)], &[0.03, 0.12])?;
    Ok(())
}
