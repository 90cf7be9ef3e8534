//! Second order families: the toy equation, reduced Ostrovsky,
//! Klein–Gordon and sine–Gordon.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{symbols, Family, FamilyInstance, Forcing};
use crate::abelian::double_factorial_odd;
use crate::error::{Error, Result};
use crate::model::{Domain, ModelParts, PlanarModel, ScalarField1D, SeparableHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub c: f64,
}

/// `u + a u_xx + b u_xt + d u_tt + ε g(u_x, u_t) = 0`.
///
/// Along `u = U(x − ct)` this is `U + C² U'' + ε g(U', −cU') = 0` with
/// `C² = a − bc + dc²`, so `f = −x/C²`, `s ≡ 1`, and
/// `g_c = −g(U', −cU')/C²`. `Forcing::Pde` closures receive `u` as well and
/// may ignore it.
pub fn make_toy(p: &ToyParams, forcing: Forcing) -> Result<FamilyInstance> {
    let c2 = p.a - p.b * p.c + p.d * p.c * p.c;
    if !(c2 > 0.0) {
        return Err(Error::InvalidSpeed(format!("C² = a − bc + dc² = {c2} must be positive")));
    }
    let inv = 1.0 / c2;
    let sep = SeparableHamiltonian::new(
        ScalarField1D::constant(0.5),
        ScalarField1D::new(move |x| 0.5 * inv * x * x, move |x| inv * x, move |_| inv),
        0.0,
    )?;
    let model = PlanarModel::new(ModelParts {
        name: "toy".into(),
        hamiltonian: Arc::new(move |x, y| 0.5 * inv * x * x + 0.5 * y * y),
        s_factor: Arc::new(|_, _| 1.0),
        restoring: Arc::new(move |x, _| -inv * x),
        force: None,
        center_x: 0.0,
        domain: Domain::plane(),
        separable: Some(sep),
    })?;
    let pert = forcing.integrand(p.c, move |_, _, g| -g * inv, |_, _, gc| gc);
    Ok(FamilyInstance {
        family: Family::Toy,
        params: Default::default(),
        symbols: symbols(&[("C", c2.sqrt()), ("C2", c2)]),
        model,
        pert,
        c: p.c,
    })
}

/// `I_{2n} = ∫₀^{2π} sin^{2n} θ dθ = 2π (2n−1)!! / (2n)!!`.
pub fn sin_power_integral(n: u32) -> f64 {
    let even = (1..=n).fold(1.0, |acc, i| acc * (2 * i) as f64);
    2.0 * PI * double_factorial_odd(n) / even
}

/// Clockwise Melnikov function of the toy model for
/// `g_c(y) = Σ_j g[j] y^j`:
/// `M(h) = 2 C h Σ_i g_{2i+1} 2^i I_{2i+2} h^i`.
pub fn toy_reference_melnikov(c_const: f64, g: &[f64], h: f64) -> f64 {
    let mut sum = 0.0;
    let mut i = 0usize;
    while 2 * i + 1 < g.len() {
        sum += g[2 * i + 1] * 2f64.powi(i as i32) * sin_power_integral(i as u32 + 1) * h.powi(i as i32);
        i += 1;
    }
    2.0 * c_const * h * sum
}

/// `(u_t + u u_x)_x − u + ε g(u, u_x, u_t) = 0`, `c > 0`.
///
/// The wave ODE `(U − c)U'' + U'² − U + ε g = 0` gives
/// `f = (x − y²)/(x − c)`, `s = (x − c)⁻²` on `x < c`, and
/// `g_c = −g(U, U', −cU')/(U − c)`; the Melnikov integrand is `(x − c)² g_c`.
/// The saddle sits on the domain edge `x = c`, where
/// `h̄ = H(c, 0) = c³/6`.
pub fn make_ostrovsky(c: f64, forcing: Forcing) -> Result<FamilyInstance> {
    if !(c > 0.0) {
        return Err(Error::InvalidSpeed(format!("c = {c} must be positive")));
    }
    let sep = SeparableHamiltonian::new(
        ScalarField1D::new(
            move |x| 0.5 * (x - c) * (x - c),
            move |x| x - c,
            |_| 1.0,
        ),
        ScalarField1D::new(
            move |x| 0.5 * c * x * x - x * x * x / 3.0,
            move |x| c * x - x * x,
            move |x| c - 2.0 * x,
        ),
        0.0,
    )?;
    let model = PlanarModel::new(ModelParts {
        name: "ostrovsky".into(),
        hamiltonian: Arc::new(move |x, y| 0.5 * (x - c) * (x - c) * y * y + 0.5 * c * x * x - x * x * x / 3.0),
        s_factor: Arc::new(move |x, _| 1.0 / ((x - c) * (x - c))),
        restoring: Arc::new(move |x, y| (x - y * y) / (x - c)),
        force: Some(Arc::new(move |x, y| (x - y * y) * (x - c))),
        center_x: 0.0,
        domain: Domain::x_between(f64::NEG_INFINITY, c),
        separable: Some(sep),
    })?;
    let pert = forcing.integrand(
        c,
        move |x, _, g| -(x - c) * g,
        move |x, _, gc| (x - c) * (x - c) * gc,
    );
    Ok(FamilyInstance {
        family: Family::Ostrovsky,
        params: Default::default(),
        symbols: symbols(&[("h_bar", model.h_ceiling())]),
        model,
        pert,
        c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinGordonParams {
    pub lambda: f64,
    pub p: u32,
    pub c: f64,
}

/// `u_tt − u_xx + λ u^p + ε g = 0`, `p` odd, `c² > 1`.
///
/// `(c² − 1)U'' + λU^p + ε g = 0` gives `f = −C x^p`, `C = λ/(c² − 1)`,
/// `s ≡ 1` and `g_c = −g(U, U', −cU')/(c² − 1)`. For `p ≥ 3` the center is
/// degenerate (`f_x = 0`) and the model carries no separable view.
pub fn make_klein_gordon(kp: &KleinGordonParams, forcing: Forcing) -> Result<FamilyInstance> {
    let KleinGordonParams { lambda, p, c } = *kp;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParams(format!("λ = {lambda} must be positive")));
    }
    if p % 2 == 0 {
        return Err(Error::InvalidParams(format!("p = {p} must be odd")));
    }
    let denom = c * c - 1.0;
    if !(denom > 0.0) {
        return Err(Error::InvalidParams(format!("c² = {} must exceed 1", c * c)));
    }
    let cc = lambda / denom;
    let pi = p as i32;
    let pf = p as f64;
    let sep = if p == 1 {
        Some(SeparableHamiltonian::new(
            ScalarField1D::constant(0.5),
            ScalarField1D::new(move |x| 0.5 * cc * x * x, move |x| cc * x, move |_| cc),
            0.0,
        )?)
    } else {
        None
    };
    let model = PlanarModel::new(ModelParts {
        name: "klein_gordon".into(),
        hamiltonian: Arc::new(move |x, y| cc * x.powi(pi + 1) / (pf + 1.0) + 0.5 * y * y),
        s_factor: Arc::new(|_, _| 1.0),
        restoring: Arc::new(move |x, _| -cc * x.powi(pi)),
        force: None,
        center_x: 0.0,
        domain: Domain::plane(),
        separable: sep,
    })?;
    let pert = forcing.integrand(c, move |_, _, g| -g / denom, |_, _, gc| gc);
    Ok(FamilyInstance {
        family: Family::KleinGordon,
        params: Default::default(),
        symbols: symbols(&[("C", cc)]),
        model,
        pert,
        c,
    })
}

/// `u_tt − u_xx + sin u + ε g = 0`, `c > 1`.
///
/// `f = −C sin x`, `C = 1/(c² − 1)`, `s ≡ 1`, `g_c = g(U, U', −cU')/(1 − c²)`;
/// saddles at `±π` bound the annulus at `h̄ = 2C`.
pub fn make_sine_gordon(c: f64, forcing: Forcing) -> Result<FamilyInstance> {
    if !(c > 1.0) {
        return Err(Error::InvalidSpeed(format!("c = {c} must exceed 1")));
    }
    let denom = c * c - 1.0;
    let cc = 1.0 / denom;
    let sep = SeparableHamiltonian::new(
        ScalarField1D::constant(0.5),
        ScalarField1D::new(
            move |x| cc * (1.0 - x.cos()),
            move |x| cc * x.sin(),
            move |x| cc * x.cos(),
        ),
        0.0,
    )?;
    let model = PlanarModel::new(ModelParts {
        name: "sine_gordon".into(),
        hamiltonian: Arc::new(move |x, y| cc * (1.0 - x.cos()) + 0.5 * y * y),
        s_factor: Arc::new(|_, _| 1.0),
        restoring: Arc::new(move |x, _| -cc * x.sin()),
        force: None,
        center_x: 0.0,
        domain: Domain::plane(),
        separable: Some(sep),
    })?;
    let pert = forcing.integrand(c, move |_, _, g| -g / denom, |_, _, gc| gc);
    Ok(FamilyInstance {
        family: Family::SineGordon,
        params: Default::default(),
        symbols: symbols(&[("C", cc)]),
        model,
        pert,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{default_options, melnikov_at, Oval, integrate_oval};
    use crate::model::EquilibriumKind;

    #[test]
    fn toy_preset_is_harmonic() {
        let t = make_toy(&ToyParams { a: 1.0, b: 0.0, d: 0.0, c: 0.0 }, Forcing::Zero).unwrap();
        assert_eq!(t.symbols["C"], 1.0);
        assert!(t.model.h_ceiling().is_infinite());
    }

    #[test]
    fn toy_boundary_speed_rejected() {
        let e = make_toy(&ToyParams { a: 1.0, b: 2.0, d: 1.0, c: 1.0 }, Forcing::Zero);
        assert!(matches!(e, Err(Error::InvalidSpeed(_))));
    }

    #[test]
    fn toy_reference_zero() {
        let g = [0.0, -1.0, 0.0, 1.0];
        assert!(toy_reference_melnikov(1.0, &g, 2.0 / 3.0).abs() < 1e-14);
        assert!(toy_reference_melnikov(1.0, &g, 0.5) < 0.0);
        assert!(toy_reference_melnikov(1.0, &g, 1.0) > 0.0);
        assert!((sin_power_integral(1) - PI).abs() < 1e-15);
        assert!((sin_power_integral(2) - 0.75 * PI).abs() < 1e-15);
    }

    #[test]
    fn toy_pde_forcing_sign() {
        // g(u_x, u_t) = −u_x C² ⇒ g_c = y, M = area
        let t = make_toy(
            &ToyParams { a: 1.0, b: 0.0, d: 0.0, c: 0.0 },
            Forcing::pde(|_, ux, _| -ux),
        )
        .unwrap();
        let m = melnikov_at(&t.model, &t.pert, 0.5, &default_options()).unwrap();
        assert!((m.value - PI).abs() < 1e-12);
    }

    #[test]
    fn ostrovsky_center_saddle_and_ceiling() {
        let o = make_ostrovsky(1.0, Forcing::Zero).unwrap();
        assert_eq!(o.model.classify_equilibrium(0.0).unwrap(), EquilibriumKind::Center);
        assert_eq!(o.model.classify_equilibrium(1.0).unwrap(), EquilibriumKind::Saddle);
        assert!((o.model.h_ceiling() - 1.0 / 6.0).abs() < 1e-15);
        let h = 0.5 * o.model.h_ceiling();
        let oval = Oval::new(&o.model, h).unwrap();
        let r = integrate_oval(&oval, |_, y| y, &default_options()).unwrap();
        assert!(r.value > 0.0);
    }

    #[test]
    fn ostrovsky_rejects_nonpositive_speed() {
        assert!(matches!(make_ostrovsky(0.0, Forcing::Zero), Err(Error::InvalidSpeed(_))));
    }

    #[test]
    fn klein_gordon_quartic_turning_points() {
        // c² − 1 = 1 ⇒ C = 1; x⁴/4 = 1 ⇒ x = ±√2
        let kg = make_klein_gordon(
            &KleinGordonParams { lambda: 1.0, p: 3, c: 2f64.sqrt() },
            Forcing::Zero,
        )
        .unwrap();
        assert_eq!(kg.model.classify_equilibrium(0.0).unwrap(), EquilibriumKind::Degenerate);
        assert!(kg.model.h_ceiling().is_infinite());
        let (lo, hi) = kg.model.turning_points(1.0).unwrap();
        assert!((hi - 2f64.sqrt()).abs() < 1e-12 && (lo + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn klein_gordon_boundary() {
        let e = make_klein_gordon(&KleinGordonParams { lambda: 1.0, p: 1, c: 1.0 }, Forcing::Zero);
        assert!(matches!(e, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn sine_gordon_ceiling() {
        let sg = make_sine_gordon(2f64.sqrt(), Forcing::Zero).unwrap();
        let cc = sg.symbols["C"];
        assert!((sg.model.h_ceiling() - 2.0 * cc).abs() <= 4.0 * f64::EPSILON * 2.0 * cc);
        let (lo, hi) = sg.model.turning_points(1.0 * cc).unwrap();
        assert!((hi - PI / 2.0).abs() < 1e-12 && (lo + PI / 2.0).abs() < 1e-12);
        assert!(matches!(make_sine_gordon(1.0, Forcing::Zero), Err(Error::InvalidSpeed(_))));
    }
}
