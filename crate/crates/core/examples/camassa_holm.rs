//! Camassa–Holm, Degasperis–Procesi and Constantin–Lannes waves: the
//! reduced system has a non-constant integrating factor and a potential
//! known only through quadrature.

use std::collections::BTreeMap;

use tws_persist::abelian::{default_grid, default_options, melnikov_curve, PerturbationSpec, MonomialPerturbation};
use tws_persist::catalog::{build, Family, Forcing};
use tws_persist::dynamics::wave_profile;

fn main() -> tws_persist::Result<()> {
    for (variant, c) in [("camassa_holm", 3.0), ("degasperis_procesi", 2.0), ("constantin_lannes", 2.0)] {
        let mut p = BTreeMap::new();
        p.insert("c".to_string(), c);
        let inst = build(Family::CamassaHolmClass, &p, Some(variant), Forcing::Zero)?;
        let m = &inst.model;
        println!("{variant} (c = {c}): center {:.6}, h̄ = {:e}", m.center_x(), m.h_ceiling());

        let prof = wave_profile(&inst, 0.5 * m.h_ceiling(), 8)?;
        println!("    profile at h̄/2: period {:.6}, U ∈ [{:.6}, {:.6}]", prof.period_s, prof.u_min, prof.u_max);

        let pert = PerturbationSpec::Monomials(MonomialPerturbation::from_parts(&[(0, 1), (0, 2)], &[1.0, -1.0])?);
        let curve = melnikov_curve(m, &pert, &default_grid(m, 6, 4.0), &default_options())?;
        for s in &curve.samples {
            println!("    M({:.3e}) = {:+.6e}", s.h, s.m);
        }
    }
    Ok(())
}
