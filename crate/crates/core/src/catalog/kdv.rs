//! Families whose wave ODE integrates once to `U'' = α + βU + γU²`:
//! the generalized KdV family and Boussinesq-type equations.

use std::sync::Arc;

use super::{symbols, Family, FamilyInstance, Forcing};
use crate::error::{Error, Result};
use crate::model::{Domain, ModelParts, PlanarModel, ScalarField1D, SeparableHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenKdvParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub c: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoussinesqParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub f: f64,
    pub c: f64,
    pub k: f64,
}

/// Planar model of `x'' = α + βx + γx²` centered at the root where
/// `β + 2γx < 0`. Returns the model and the saddle abscissa.
fn quadratic_model(name: &str, alpha: f64, beta: f64, gamma: f64) -> Result<(PlanarModel, f64)> {
    if gamma == 0.0 {
        return Err(Error::NoPeriodAnnulus(
            "α + βx + γx² has γ = 0: at most one equilibrium".into(),
        ));
    }
    let disc = beta * beta - 4.0 * alpha * gamma;
    if !(disc > 0.0) {
        return Err(Error::NoPeriodAnnulus(format!(
            "α + βx + γx² = 0 has no two distinct real roots (discriminant {disc:e})"
        )));
    }
    // roots without cancellation
    let sgn = if beta >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (beta + sgn * disc.sqrt());
    let r1 = q / gamma;
    let r2 = if q != 0.0 { alpha / q } else { -beta / gamma };
    let slope = |x: f64| beta + 2.0 * gamma * x;
    let (center, saddle) = if slope(r1) < 0.0 { (r1, r2) } else { (r2, r1) };

    // −αx − βx²/2 − γx³/3 shifted to vanish at the center, expanded about it
    let bfun = move |x: f64| {
        let t = x - center;
        let b1 = -(alpha + beta * center + gamma * center * center);
        let b2 = -(beta + 2.0 * gamma * center);
        b1 * t + 0.5 * b2 * t * t - gamma * t * t * t / 3.0
    };
    let sep = SeparableHamiltonian::new(
        ScalarField1D::constant(0.5),
        ScalarField1D::new(
            bfun,
            move |x| -(alpha + beta * x + gamma * x * x),
            move |x| -(beta + 2.0 * gamma * x),
        ),
        center,
    )?;
    let model = PlanarModel::new(ModelParts {
        name: name.into(),
        hamiltonian: Arc::new(move |x, y| bfun(x) + 0.5 * y * y),
        s_factor: Arc::new(|_, _| 1.0),
        restoring: Arc::new(move |x, _| alpha + beta * x + gamma * x * x),
        force: None,
        center_x: center,
        domain: Domain::plane(),
        separable: Some(sep),
    })?;
    Ok((model, saddle))
}

/// `u_t + a u_x + b u u_x + d u u_t + p u_xxx + q u_xxt + r u_xtt + s u_ttt
///  + ε ∇g · (u_x, u_xx, u_xt, 0) = 0`.
///
/// One integration of the wave ODE gives
/// `(a − c)U + (b − dc)U²/2 + C U'' + ε g(U, U', −cU') = k`,
/// `C = p − qc + rc² − sc³`, hence `U'' = α + βU + γU² − ε g/C` with
/// `α = k/C`, `β = (c − a)/C`, `γ = (dc − b)/(2C)`, `s ≡ 1` and
/// `g_c = −g(U, U', −cU')/C`.
pub fn make_gen_kdv(p: &GenKdvParams, forcing: Forcing) -> Result<FamilyInstance> {
    let cc = p.p - p.q * p.c + p.r * p.c * p.c - p.s * p.c.powi(3);
    if cc == 0.0 {
        return Err(Error::ZeroDispersion("C = p − qc + rc² − sc³ vanishes".into()));
    }
    let alpha = p.k / cc;
    let beta = (p.c - p.a) / cc;
    let gamma = (p.d * p.c - p.b) / (2.0 * cc);
    let (model, saddle) = quadratic_model("gen_kdv", alpha, beta, gamma)?;
    let pert = forcing.integrand(p.c, move |_, _, g| -g / cc, |_, _, gc| gc);
    Ok(FamilyInstance {
        family: Family::GenKdv,
        params: Default::default(),
        symbols: symbols(&[
            ("C", cc),
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("saddle_x", saddle),
        ]),
        model,
        pert,
        c: p.c,
    })
}

/// `a u_xx + b u_xt + d u_tt + 2e(u u_xx + u_x²) + p u_xxxx + q u_xxxt
///  + r u_xxtt + s u_xttt + f u_tttt + ε G = 0` with `G = (g_c(U, U'))''`
/// along the wave.
///
/// Two integrations (dropping the linear-in-`s` branch) give
/// `C U + e U² + D U'' + ε g_c = k` with `C = a − bc + dc²` and
/// `D = p − qc + rc² − sc³ + fc⁴`, the same ODE as the generalized KdV
/// family with `α = k/D`, `β = −C/D`, `γ = −e/D` and integrand `−g_c/D`.
/// A `Forcing::Pde` closure `g(u, u_x, u_t)` is read as
/// `g_c(U, U') = g(U, U', −cU')`.
pub fn make_boussinesq(p: &BoussinesqParams, forcing: Forcing) -> Result<FamilyInstance> {
    let dd = p.p - p.q * p.c + p.r * p.c * p.c - p.s * p.c.powi(3) + p.f * p.c.powi(4);
    if dd == 0.0 {
        return Err(Error::ZeroDispersion("D = p − qc + rc² − sc³ + fc⁴ vanishes".into()));
    }
    if p.e == 0.0 {
        return Err(Error::NoPeriodAnnulus("e = 0 leaves a linear equation".into()));
    }
    let cc = p.a - p.b * p.c + p.d * p.c * p.c;
    let alpha = p.k / dd;
    let beta = -cc / dd;
    let gamma = -p.e / dd;
    let (model, saddle) = quadratic_model("boussinesq", alpha, beta, gamma)?;
    let pert = forcing.integrand(p.c, move |_, _, g| -g / dd, move |_, _, gc| -gc / dd);
    Ok(FamilyInstance {
        family: Family::Boussinesq,
        params: Default::default(),
        symbols: symbols(&[
            ("C", cc),
            ("D", dd),
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("saddle_x", saddle),
        ]),
        model,
        pert,
        c: p.c,
    })
}
