//! Builds every family at its preset parameters and prints the reduced
//! planar system: center, energy ceiling and the constants of the reduction.

use tws_persist::catalog::presets;

fn main() -> tws_persist::Result<()> {
    for inst in presets()? {
        let m = &inst.model;
        let kind = m.classify_equilibrium(m.center_x())?;
        println!("{:<20} center x = {:>10.6}  ({kind:?})  h̄ = {:e}", inst.family.to_string(), m.center_x(), m.h_ceiling());
        for (k, v) in &inst.symbols {
            println!("    {k:<10} {v:e}");
        }
    }
    Ok(())
}
