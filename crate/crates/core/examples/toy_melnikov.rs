//! The Melnikov function of the toy model with `g_c = y³ − y` and its
//! single simple zero at `h = 2/3`.

use tws_persist::abelian::{default_options, log_grid, melnikov_curve};
use tws_persist::catalog::{make_toy, Forcing, ToyParams};
use tws_persist::zerofind::find_zeros;

fn main() -> tws_persist::Result<()> {
    let toy = make_toy(
        &ToyParams { a: 1.0, b: 0.0, d: 0.0, c: 0.0 },
        Forcing::reduced_polynomial(vec![(0, 3, 1.0), (0, 1, -1.0)]),
    )?;
    let opts = default_options();
    let curve = melnikov_curve(&toy.model, &toy.pert, &log_grid(0.05, 3.0, 24), &opts)?;
    for s in &curve.samples {
        println!("{:>10.5}  {:>+14.8e}", s.h, s.m);
    }
    let report = find_zeros(&curve, &toy.model, &toy.pert, &opts)?;
    for z in &report.zeros {
        println!("zero at h = {:.12} (expected 2/3), M'(h*) ≈ {:.6}", z.h_star, z.derivative_estimate);
    }
    Ok(())
}
