//! Periodic traveling-wave profiles `U(s)` of the Ostrovsky equation at
//! several energies, approaching the limiting wave as `h → h̄`.

use tws_persist::catalog::{make_ostrovsky, Forcing};
use tws_persist::dynamics::wave_profile;

fn main() -> tws_persist::Result<()> {
    let ost = make_ostrovsky(1.0, Forcing::Zero)?;
    let hb = ost.model.h_ceiling();
    for frac in [0.1, 0.5, 0.9, 0.99] {
        let p = wave_profile(&ost, frac * hb, 16)?;
        println!(
            "h = {:.3}·h̄: period {:.6} (linear {:.6}), U ∈ [{:.6}, {:.6}]",
            frac, p.period_s, p.linear_period_s, p.u_min, p.u_max
        );
        for w in &p.warnings {
            println!("    warning: {w}");
        }
    }
    let p = wave_profile(&ost, 0.5 * hb, 24)?;
    for s in &p.samples {
        println!("{:>10.5} {:>+10.6}", s.s, s.u);
    }
    Ok(())
}
