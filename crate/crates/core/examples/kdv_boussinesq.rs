//! The KdV traveling-wave reduction and a Boussinesq equation with matched
//! coefficients reduce to the same planar system and the same Melnikov
//! function.

use std::collections::BTreeMap;

use tws_persist::abelian::{default_options, log_grid, melnikov_at};
use tws_persist::catalog::{build, Family, Forcing};

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn main() -> tws_persist::Result<()> {
    let g = |u: f64, ux: f64, _ut: f64| ux - 3.0 * u * ux;
    let c = 1.0;
    let kdv = build(
        Family::GenKdv,
        &params(&[("a", 0.0), ("b", -6.0), ("p", 1.0), ("c", c)]),
        None,
        Forcing::pde(g),
    )?;
    let bq = build(
        Family::Boussinesq,
        &params(&[("a", -1.0), ("d", 0.0), ("e", -3.0), ("p", 1.0), ("c", c)]),
        None,
        Forcing::reduced(move |x, y| g(x, y, -c * y)),
    )?;
    println!("h̄: kdv {:e}, boussinesq {:e}", kdv.model.h_ceiling(), bq.model.h_ceiling());
    let opts = default_options();
    for h in log_grid(1e-3 * kdv.model.h_ceiling(), 0.99 * kdv.model.h_ceiling(), 8) {
        let a = melnikov_at(&kdv.model, &kdv.pert, h, &opts)?.value;
        let b = melnikov_at(&bq.model, &bq.pert, h, &opts)?.value;
        println!("h = {h:.4e}: {a:+.12e} {b:+.12e}");
    }
    Ok(())
}
