//! Integrates the perturbed toy flow and locates its limit cycles as
//! fixed points of the return map, comparing them with the Melnikov zeros
//! as ε shrinks.

use tws_persist::catalog::{make_toy, Forcing, ToyParams};
use tws_persist::dynamics::{calibrate, detect_limit_cycles_with, VerifyOptions};

fn main() -> tws_persist::Result<()> {
    let toy = make_toy(
        &ToyParams { a: 1.0, b: 0.0, d: 0.0, c: 0.0 },
        Forcing::pde(|_, ux, _| ux * ux * ux - ux),
    )?;
    let opts = VerifyOptions { n_seeds: 48, h_bounds: Some((0.05, 3.0)), ..VerifyOptions::default() };

    println!("one revolution: ΔH / (ε M) → 1");
    for c in calibrate(&toy, &[0.3, 1.0, 2.0], 1e-4, &opts)? {
        println!("    h = {:.2}: ratio {:.6}", c.h, c.ratio);
    }

    for eps in [1e-2, 1e-3, 1e-4] {
        let r = detect_limit_cycles_with(&toy, eps, &opts)?;
        for (fp, m) in r.fixed_points.iter().zip(&r.matched_zeros) {
            println!(
                "ε = {eps:e}: cycle at h = {:.10} ({:?}), Melnikov zero {:.10}, gap {:.2e}",
                fp.h_equiv, fp.stability, m.zero_h, m.relative_gap
            );
        }
    }
    Ok(())
}
