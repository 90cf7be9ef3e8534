//! Rosenau–Hyman family `u_t + a (uⁿ)_x + (uⁿ)_xxx + ε (g)_x = 0`.

use std::sync::Arc;

use super::{symbols, Family, FamilyInstance, Forcing};
use crate::abelian::log_grid;
use crate::error::{Error, Result};
use crate::model::{Domain, ModelParts, PlanarModel, ScalarField1D, SeparableHamiltonian};
use crate::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosenauHymanParams {
    pub a: f64,
    pub n: u32,
    pub c: f64,
    pub k: f64,
}

/// Reduction on `x > 0`.
///
/// One integration gives
/// `−cU + aUⁿ + n(n−1)U^{n−2}U'² + nU^{n−1}U'' + ε g = k`, so
/// `f = (k + cx − axⁿ − n(n−1)x^{n−2}y²)/(n x^{n−1})`,
/// `s = x^{2(1−n)}/n`, `g_c = −g(U, U', −cU')` and the Melnikov integrand
/// is `x^{n−1} g_c`. The center is the smallest positive root of
/// `k + cx − axⁿ` at which `c − n a x^{n−1} < 0`.
pub fn make_rosenau_hyman(p: &RosenauHymanParams, forcing: Forcing) -> Result<FamilyInstance> {
    let RosenauHymanParams { a, n, c, k } = *p;
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
    }
    if a == 0.0 {
        return Err(Error::InvalidParams("a must be nonzero".into()));
    }
    let ni = n as i32;
    let nf = n as f64;
    let phi = move |x: f64| k + c * x - a * x.powi(ni);
    let dphi = move |x: f64| c - nf * a * x.powi(ni - 1);
    let center = positive_center(phi, dphi)?;

    let a_field = ScalarField1D::new(
        move |x| 0.5 * nf * x.powi(2 * ni - 2),
        move |x| nf * (nf - 1.0) * x.powi(2 * ni - 3),
        move |x| nf * (nf - 1.0) * (2.0 * nf - 3.0) * x.powi(2 * ni - 4),
    );
    let raw_b = move |x: f64| {
        -k / nf * x.powi(ni) - c / (nf + 1.0) * x.powi(ni + 1) + a / (2.0 * nf) * x.powi(2 * ni)
    };
    let b0 = raw_b(center);
    let b_field = ScalarField1D::new(
        move |x| raw_b(x) - b0,
        move |x| -k * x.powi(ni - 1) - c * x.powi(ni) + a * x.powi(2 * ni - 1),
        move |x| {
            -k * (nf - 1.0) * x.powi(ni - 2) - c * nf * x.powi(ni - 1)
                + a * (2.0 * nf - 1.0) * x.powi(2 * ni - 2)
        },
    );
    let sep = SeparableHamiltonian::new(a_field, b_field, center)?;
    let model = PlanarModel::new(ModelParts {
        name: "rosenau_hyman".into(),
        hamiltonian: Arc::new(move |x, y| 0.5 * nf * x.powi(2 * ni - 2) * y * y + raw_b(x) - b0),
        s_factor: Arc::new(move |x, _| x.powi(2 - 2 * ni) / nf),
        restoring: Arc::new(move |x, y| {
            (phi(x) - nf * (nf - 1.0) * x.powi(ni - 2) * y * y) / (nf * x.powi(ni - 1))
        }),
        force: Some(Arc::new(move |x, y| {
            x.powi(ni - 1) * phi(x) - nf * (nf - 1.0) * x.powi(2 * ni - 3) * y * y
        })),
        center_x: center,
        domain: Domain::x_between(0.0, f64::INFINITY),
        separable: Some(sep),
    })?;
    let pert = forcing.integrand(
        c,
        move |x, _, g| -x.powi(ni - 1) * g,
        move |x, _, gc| x.powi(ni - 1) * gc,
    );
    Ok(FamilyInstance {
        family: Family::RosenauHyman,
        params: Default::default(),
        symbols: symbols(&[("x_star", center), ("B0", b0)]),
        model,
        pert,
        c,
    })
}

fn positive_center<F, D>(phi: F, dphi: D) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let grid = log_grid(1e-8, 1e8, 1601);
    let mut prev = (grid[0], phi(grid[0]));
    for &x in &grid[1..] {
        let v = phi(x);
        if prev.1 == 0.0 || prev.1.signum() != v.signum() {
            let root = if prev.1 == 0.0 {
                prev.0
            } else {
                brent(&phi, prev.0, x, prev.1, v, 1e-15 * x)?
            };
            if dphi(root) < 0.0 {
                return Ok(root);
            }
        }
        prev = (x, v);
    }
    Err(Error::NoCenter(
        "no positive equilibrium with x*^(n−2)(a(2n−1)x*ⁿ − c n x* − k(n−1)) > 0".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EquilibriumKind;

    #[test]
    fn preset_center_and_constants() {
        let inst = make_rosenau_hyman(
            &RosenauHymanParams { a: 1.0, n: 2, c: 1.0, k: 0.0 },
            Forcing::Zero,
        )
        .unwrap();
        let m = &inst.model;
        assert!((m.center_x() - 1.0).abs() < 1e-14);
        assert_eq!(m.classify_equilibrium(1.0).unwrap(), EquilibriumKind::Center);
        // H_xx(1, 0) = c²/a = 1
        let sep = m.separable().unwrap();
        assert!((sep.b().second_derivative(1.0) - 1.0).abs() < 1e-14);
        assert!((sep.a_const() - 1.0).abs() < 1e-14);
        assert!((sep.b_const() - 2f64.sqrt()).abs() < 1e-14);
        assert!((m.h_ceiling() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn negative_a_has_no_center() {
        let e = make_rosenau_hyman(
            &RosenauHymanParams { a: -1.0, n: 2, c: 1.0, k: 0.0 },
            Forcing::Zero,
        );
        assert!(matches!(e, Err(Error::NoCenter(_))));
    }

    #[test]
    fn cubic_case_constructs() {
        let inst = make_rosenau_hyman(
            &RosenauHymanParams { a: 1.0, n: 3, c: 1.0, k: 0.0 },
            Forcing::Zero,
        )
        .unwrap();
        assert!((inst.model.center_x() - 1.0).abs() < 1e-13);
    }
}
