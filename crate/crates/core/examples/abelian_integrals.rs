//! Abelian integrals on the harmonic oscillator and the sine-Gordon
//! pendulum, checked against the small-energy asymptotics.

use std::f64::consts::PI;

use tws_persist::abelian::{abelian_j, j_asymptotic_leading, k_closed_form, monomial_j, default_options};
use tws_persist::catalog::{make_sine_gordon, Forcing};
use tws_persist::model::{harmonic, ScalarField1D};

fn main() -> tws_persist::Result<()> {
    let m = harmonic();
    let opts = default_options();
    println!("harmonic: ∮ y dx = 2πh and ∮ x²y dx = πh²");
    for h in [0.1, 1.0, 10.0] {
        let area = abelian_j(&m, &ScalarField1D::constant(1.0), 1, h)?;
        let second = abelian_j(&m, &ScalarField1D::power(0.0, 2), 1, h)?;
        println!("  h = {h:>5}: {area:.15} vs {:.15}   {second:.15} vs {:.15}", 2.0 * PI * h, PI * h * h);
    }

    println!("\nK(p, n) closed forms");
    for p in 1..=3 {
        let row: Vec<String> = (0..=3).map(|n| format!("{:.6e}", k_closed_form(p, n).unwrap())).collect();
        println!("  p = {p}: {}", row.join("  "));
    }

    let sg = make_sine_gordon(2f64.sqrt(), Forcing::Zero)?;
    let sep = sg.model.separable().expect("sine-Gordon is separable");
    let (coef, e) = j_asymptotic_leading(sep, 1.0, 0, 1);
    println!("\nsine-Gordon J₁(h) / (c h^{e}) → 1 as h → 0 (c = {coef:.6})");
    for h in [1e-1, 1e-2, 1e-3, 1e-4] {
        let j = monomial_j(&sg.model, 0, 1, h, &opts)?.value;
        println!("  h = {h:e}: {:.10}", j / (coef * h.powi(e as i32)));
    }
    Ok(())
}
