//! Numerical confirmation of persistence: the Poincaré return map of the
//! perturbed flow on the section `{y = 0, x > x_c}`, its fixed points, and
//! wave profiles in the original traveling coordinate.
//!
//! The perturbed system in the reparameterized time is
//! `ẋ = y/s`, `ẏ = force + ε·integrand`, so along any orbit
//! `dH/dτ = ε·integrand·ẋ` and one clockwise revolution changes `H` by
//! `ε M(h) + O(ε²)`. The displacement `P(x) − x` therefore carries the
//! sign of `εM` on the section, where `H` increases with `x`.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{default_grid, log_grid, melnikov_at, melnikov_curve, oval_period, PerturbationSpec};
use crate::catalog::FamilyInstance;
use crate::error::{Error, Result};
use crate::model::PlanarModel;
use crate::ode::{Dop853, OdeOptions};
use crate::quadrature::QuadOptions;
use crate::roots::brent;
use crate::zerofind::find_zeros;

/// Largest `|ε|` accepted without an explicit override.
pub const EPSILON_CAP: f64 = 1e-2;
pub const DEFAULT_SEEDS: usize = 128;
/// Escape when one revolution takes longer than this multiple of the
/// unperturbed period.
pub const PERIOD_FACTOR: f64 = 10.0;
/// Profiles whose period exceeds this multiple of the linearized period
/// carry a `PeriodOverflow` warning.
pub const PERIOD_OVERFLOW_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub ode: OdeOptions,
    /// Localization tolerance of section crossings and fixed points.
    pub section_tol: f64,
    pub n_seeds: usize,
    /// Upper energy of the seed grid when the annulus is unbounded.
    pub cap: f64,
    pub epsilon_cap: f64,
    pub quad: QuadOptions,
    /// Energy range of the seeds; the abelian default grid when unset.
    pub h_bounds: Option<(f64, f64)>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            ode: OdeOptions { rtol: 1e-13, atol: 1e-15, ..OdeOptions::default() },
            section_tol: 1e-12,
            n_seeds: DEFAULT_SEEDS,
            cap: 4.0,
            epsilon_cap: EPSILON_CAP,
            quad: crate::abelian::default_options(),
            h_bounds: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub x_section: f64,
    pub h_equiv: f64,
    pub stability: Stability,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroMatch {
    pub zero_h: f64,
    pub cycle_h: f64,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedWarning {
    pub x0: f64,
    pub h0: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleReport {
    pub epsilon: f64,
    pub fixed_points: Vec<FixedPoint>,
    pub matched_zeros: Vec<ZeroMatch>,
    /// Simple zeros of `M` on the seed grid.
    pub melnikov_zeros: Vec<f64>,
    /// Every seed returned to itself: `ε = 0` or a vanishing perturbation.
    pub degenerate_continuum: bool,
    pub warnings: Vec<SeedWarning>,
}

/// One revolution of the perturbed flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revolution {
    pub x_return: f64,
    pub time: f64,
    pub h_start: f64,
    pub h_end: f64,
}

fn check_epsilon(epsilon: f64, cap: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon.abs() > cap {
        return Err(Error::InvalidParams(format!("|ε| = {epsilon} exceeds the cap {cap}")));
    }
    Ok(())
}

fn section_energy(model: &PlanarModel, x0: f64) -> Result<f64> {
    if !(x0 > model.center_x()) {
        return Err(Error::InvalidParams(format!(
            "section point x = {x0} is not right of the center {}",
            model.center_x()
        )));
    }
    let h = model.hamiltonian(x0, 0.0);
    if !(h > 0.0 && h < model.h_ceiling()) || x0 > model.annulus_extent().1 {
        return Err(Error::EscapedAnnulus(format!(
            "(x = {x0}, 0) lies outside the period annulus (H = {h}, ceiling {})",
            model.h_ceiling()
        )));
    }
    Ok(h)
}

/// Integrates from `(x0, 0)` to the next falling crossing of the section.
pub fn revolve(
    model: &PlanarModel,
    pert: &PerturbationSpec,
    epsilon: f64,
    x0: f64,
    opts: &VerifyOptions,
) -> Result<Revolution> {
    let h0 = section_energy(model, x0)?;
    let t_budget = PERIOD_FACTOR * oval_period(model, h0)?;
    let ceiling = model.h_ceiling();
    let domain = model.domain();
    let field = |u: &[f64; 2]| {
        let (x, y) = (u[0], u[1]);
        let mut fy = model.force(x, y);
        if epsilon != 0.0 {
            fy += epsilon * pert.eval(x, y);
        }
        [y / model.s_factor(x, y), fy]
    };
    let mut ode = Dop853::new(field, 0.0, [x0, 0.0], opts.ode)?;
    let xc = model.center_x();
    loop {
        let y_old = ode.y()[1];
        ode.step()?;
        let [x, y] = *ode.y();
        if !domain.contains(x, y) || !(model.hamiltonian(x, y) < ceiling) {
            return Err(Error::EscapedAnnulus(format!(
                "trajectory from x = {x0} left the annulus at ({x}, {y})"
            )));
        }
        if ode.t() > t_budget {
            return Err(Error::EscapedAnnulus(format!(
                "no return from x = {x0} within {PERIOD_FACTOR}× the unperturbed period"
            )));
        }
        if y_old > 0.0 && y <= 0.0 && x > xc {
            let (ta, tb) = (ode.t_prev(), ode.t());
            let t_star = if y == 0.0 {
                tb
            } else {
                let g = |t: f64| ode.dense(t)[1];
                let xtol = opts.section_tol.max(4.0 * f64::EPSILON * tb.abs());
                brent(g, ta, tb, y_old, y, xtol)?
            };
            let x_return = ode.dense(t_star)[0];
            return Ok(Revolution {
                x_return,
                time: t_star,
                h_start: h0,
                h_end: model.hamiltonian(x_return, 0.0),
            });
        }
    }
}

/// `P_ε(x0)`: the next falling crossing of `{y = 0, x > x_c}`.
pub fn return_map(instance: &FamilyInstance, epsilon: f64, x0: f64) -> Result<f64> {
    return_map_with(instance, epsilon, x0, &VerifyOptions::default())
}

pub fn return_map_with(
    instance: &FamilyInstance,
    epsilon: f64,
    x0: f64,
    opts: &VerifyOptions,
) -> Result<f64> {
    check_epsilon(epsilon, opts.epsilon_cap)?;
    revolve(&instance.model, &instance.pert, epsilon, x0, opts).map(|r| r.x_return)
}

/// Energy change over one revolution against `εM(h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub h: f64,
    pub x0: f64,
    pub epsilon: f64,
    pub displacement: f64,
    pub delta_h: f64,
    pub melnikov: f64,
    /// `ΔH / (εM)`, which tends to 1 as `ε → 0`.
    pub ratio: f64,
}

/// Runs one revolution at each energy and compares it with `εM(h)`.
pub fn calibrate(
    instance: &FamilyInstance,
    energies: &[f64],
    epsilon: f64,
    opts: &VerifyOptions,
) -> Result<Vec<Calibration>> {
    check_epsilon(epsilon, opts.epsilon_cap)?;
    let model = &instance.model;
    energies
        .par_iter()
        .map(|&h| {
            let x0 = model.turning_points(h)?.1;
            let rev = revolve(model, &instance.pert, epsilon, x0, opts)?;
            let m = melnikov_at(model, &instance.pert, h, &opts.quad)?.value;
            let delta_h = rev.h_end - rev.h_start;
            Ok(Calibration {
                h,
                x0,
                epsilon,
                displacement: rev.x_return - x0,
                delta_h,
                melnikov: m,
                ratio: delta_h / (epsilon * m),
            })
        })
        .collect()
}

/// Scans the section, brackets sign changes of `P_ε(x) − x`, refines each
/// fixed point and pairs it with the nearest simple zero of `M`.
pub fn detect_limit_cycles(
    instance: &FamilyInstance,
    epsilon: f64,
    n_seeds: usize,
) -> Result<LimitCycleReport> {
    let opts = VerifyOptions { n_seeds, ..VerifyOptions::default() };
    detect_limit_cycles_with(instance, epsilon, &opts)
}

pub fn detect_limit_cycles_with(
    instance: &FamilyInstance,
    epsilon: f64,
    opts: &VerifyOptions,
) -> Result<LimitCycleReport> {
    check_epsilon(epsilon, opts.epsilon_cap)?;
    if opts.n_seeds < 2 {
        return Err(Error::InvalidParams("at least two seeds are needed".into()));
    }
    let model = &instance.model;
    let pert = &instance.pert;
    let grid = match opts.h_bounds {
        Some((lo, hi)) => log_grid(lo, hi, opts.n_seeds),
        None => default_grid(model, opts.n_seeds, opts.cap),
    };

    let curve = melnikov_curve(model, pert, &grid, &opts.quad)?;
    let melnikov_zeros = find_zeros(&curve, model, pert, &opts.quad)?.simple_zeros();

    let seeds: Vec<(f64, f64, Result<f64>)> = grid
        .par_iter()
        .map(|&h| match model.turning_points(h) {
            Ok((_, x0)) => {
                let d = revolve(model, pert, epsilon, x0, opts).map(|r| r.x_return - x0);
                (h, x0, d)
            }
            Err(e) => (h, f64::NAN, Err(e)),
        })
        .collect();

    let mut warnings = Vec::new();
    let mut samples = Vec::new();
    for (h, x0, d) in seeds {
        match d {
            Ok(d) => samples.push((x0, d)),
            Err(e) => warnings.push(SeedWarning { x0, h0: h, message: e.to_string() }),
        }
    }

    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.0.abs())).max(1.0);
    let noise = 1e3 * opts.ode.rtol * scale;
    let degenerate = epsilon == 0.0
        || pert.is_zero()
        || (!samples.is_empty() && samples.iter().all(|s| s.1.abs() <= noise));
    if degenerate {
        return Ok(LimitCycleReport {
            epsilon,
            fixed_points: Vec::new(),
            matched_zeros: Vec::new(),
            melnikov_zeros,
            degenerate_continuum: true,
            warnings,
        });
    }

    let brackets: Vec<((f64, f64), (f64, f64))> = samples
        .windows(2)
        .filter(|w| w[0].1 != 0.0 && w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0], w[1]))
        .collect();
    let exact: Vec<(f64, f64)> = samples.iter().copied().filter(|s| s.1 == 0.0).collect();

    let refined: Vec<Result<FixedPoint>> = brackets
        .par_iter()
        .map(|&((xa, da), (xb, db))| refine_fixed_point(model, pert, epsilon, xa, da, xb, db, opts))
        .collect();
    let mut fixed_points = Vec::new();
    for r in refined {
        match r {
            Ok(fp) => fixed_points.push(fp),
            Err(e) => warnings.push(SeedWarning { x0: f64::NAN, h0: f64::NAN, message: e.to_string() }),
        }
    }
    for (x, _) in exact {
        let slope_side = samples.iter().find(|s| s.0 > x).map(|s| s.1).unwrap_or(0.0);
        fixed_points.push(FixedPoint {
            x_section: x,
            h_equiv: model.hamiltonian(x, 0.0),
            stability: if slope_side < 0.0 { Stability::Attracting } else { Stability::Repelling },
            residual: 0.0,
        });
    }
    fixed_points.sort_by(|a, b| a.x_section.total_cmp(&b.x_section));

    let matched_zeros = fixed_points
        .iter()
        .filter_map(|fp| {
            melnikov_zeros
                .iter()
                .copied()
                .min_by(|a, b| (a - fp.h_equiv).abs().total_cmp(&(b - fp.h_equiv).abs()))
                .map(|z| ZeroMatch {
                    zero_h: z,
                    cycle_h: fp.h_equiv,
                    relative_gap: (fp.h_equiv - z).abs() / z.abs(),
                })
        })
        .collect();

    Ok(LimitCycleReport {
        epsilon,
        fixed_points,
        matched_zeros,
        melnikov_zeros,
        degenerate_continuum: false,
        warnings,
    })
}

#[allow(clippy::too_many_arguments)]
fn refine_fixed_point(
    model: &PlanarModel,
    pert: &PerturbationSpec,
    epsilon: f64,
    xa: f64,
    da: f64,
    xb: f64,
    db: f64,
    opts: &VerifyOptions,
) -> Result<FixedPoint> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let disp = |x: f64| match revolve(model, pert, epsilon, x, opts) {
        Ok(r) => r.x_return - x,
        Err(e) => {
            let prev = failure.take();
            failure.set(prev.or(Some(e)));
            f64::NAN
        }
    };
    let xtol = opts.section_tol.max(4.0 * f64::EPSILON * xb.abs());
    let root = brent(&disp, xa, xb, da, db, xtol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let x = root?;
    let residual = disp(x).abs();
    Ok(FixedPoint {
        x_section: x,
        h_equiv: model.hamiltonian(x, 0.0),
        stability: if da > 0.0 && db < 0.0 { Stability::Attracting } else { Stability::Repelling },
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    #[serde(rename = "U")]
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub samples: Vec<ProfileSample>,
    pub period_s: f64,
    pub h: f64,
    pub c: f64,
    /// Extrema of `U`, located as section crossings of the orbit.
    pub u_min: f64,
    pub u_max: f64,
    /// Period of the linearization at the center, in `s`.
    pub linear_period_s: f64,
    pub warnings: Vec<String>,
}

/// Periodic wave `U(s)` on the oval `H = h`, sampled at `n_samples`
/// equally spaced points of `[0, period_s]`, starting at the maximum.
pub fn wave_profile(instance: &FamilyInstance, h: f64, n_samples: usize) -> Result<WaveProfile> {
    wave_profile_with(instance, h, n_samples, &OdeOptions::default())
}

pub fn wave_profile_with(
    instance: &FamilyInstance,
    h: f64,
    n_samples: usize,
    ode_opts: &OdeOptions,
) -> Result<WaveProfile> {
    let model = &instance.model;
    if n_samples < 2 {
        return Err(Error::InvalidParams("a profile needs at least two samples".into()));
    }
    let (x_minus, x_plus) = model.turning_points(h)?;
    let xc = model.center_x();
    let field = |u: &[f64; 3]| {
        let (x, y) = (u[0], u[1]);
        let s = model.s_factor(x, y);
        [y / s, model.force(x, y), 1.0 / s]
    };
    let opts = OdeOptions { max_steps: 2_000_000, ..*ode_opts };

    // first pass: period in s and the minimum of U
    let mut ode = Dop853::new(field, 0.0, [x_plus, 0.0, 0.0], opts)?;
    let mut u_min = f64::NAN;
    let t_end;
    loop {
        let y_old = ode.y()[1];
        ode.step()?;
        let y = ode.y()[1];
        let (ta, tb) = (ode.t_prev(), ode.t());
        if y_old < 0.0 && y >= 0.0 {
            let t = brent(|t| ode.dense(t)[1], ta, tb, y_old, y, 1e-14 * tb.max(1.0))?;
            u_min = ode.dense(t)[0];
        }
        if y_old > 0.0 && y <= 0.0 && ode.y()[0] > xc {
            t_end = brent(|t| ode.dense(t)[1], ta, tb, y_old, y, 1e-14 * tb.max(1.0))?;
            break;
        }
    }
    let end = ode.dense(t_end);
    let period_s = end[2];
    let u_max = end[0].max(x_plus);

    // second pass: U at equally spaced s
    let targets: Vec<f64> =
        (0..n_samples).map(|j| period_s * j as f64 / (n_samples - 1) as f64).collect();
    let mut samples = Vec::with_capacity(n_samples);
    samples.push(ProfileSample { s: 0.0, u: x_plus });
    let mut ode = Dop853::new(field, 0.0, [x_plus, 0.0, 0.0], opts)?;
    let mut next = 1;
    while next < n_samples - 1 {
        let sigma_old = ode.y()[2];
        ode.step()?;
        let sigma = ode.y()[2];
        let (ta, tb) = (ode.t_prev(), ode.t());
        while next < n_samples - 1 && targets[next] <= sigma {
            let s = targets[next];
            let t = brent(
                |t| ode.dense(t)[2] - s,
                ta,
                tb,
                sigma_old - s,
                sigma - s,
                1e-14 * tb.max(1.0),
            )?;
            samples.push(ProfileSample { s, u: ode.dense(t)[0] });
            next += 1;
        }
    }
    samples.push(ProfileSample { s: period_s, u: end[0] });

    let s0 = model.s_factor(xc, 0.0);
    let dfdx = {
        let d = 1e-5 * xc.abs().max(1.0);
        (model.force(xc + d, 0.0) - model.force(xc - d, 0.0)) / (2.0 * d)
    };
    let omega = (-dfdx / s0).sqrt();
    let linear_period_s = 2.0 * std::f64::consts::PI / (omega * s0);
    let mut warnings = Vec::new();
    if period_s > PERIOD_OVERFLOW_FACTOR * linear_period_s {
        warnings.push(format!(
            "PeriodOverflow: period {period_s} exceeds {PERIOD_OVERFLOW_FACTOR}× the linear period {linear_period_s}"
        ));
    }
    let u_min = if u_min.is_nan() { x_minus } else { u_min };
    Ok(WaveProfile { samples, period_s, h, c: instance.c, u_min, u_max, linear_period_s, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, make_toy, Family, Forcing, ToyParams};
    use std::collections::BTreeMap;

    fn toy(forcing: Forcing) -> FamilyInstance {
        make_toy(&ToyParams { a: 1.0, b: 0.0, d: 0.0, c: 0.0 }, forcing).unwrap()
    }

    #[test]
    fn closed_orbits_at_zero_epsilon() {
        let inst = toy(Forcing::pde(|_, ux, _| ux * ux * ux - ux));
        for x0 in [0.3, 1.0, 2.0] {
            let x = return_map(&inst, 0.0, x0).unwrap();
            assert!((x - x0).abs() < 1e-9, "{x} vs {x0}");
            let r = revolve(&inst.model, &inst.pert, 0.0, x0, &VerifyOptions::default()).unwrap();
            assert!((r.h_end - r.h_start).abs() < 1e-10);
        }
    }

    #[test]
    fn displacement_follows_melnikov_sign() {
        let inst = toy(Forcing::pde(|_, ux, _| ux * ux * ux - ux));
        let cal = calibrate(&inst, &[0.2, 0.5, 1.0, 1.5], 1e-3, &VerifyOptions::default()).unwrap();
        for c in cal {
            assert!(c.displacement.signum() == (1e-3 * c.melnikov).signum());
            assert!((c.ratio - 1.0).abs() < 0.05, "{c:?}");
        }
    }

    #[test]
    fn beyond_saddle_escapes() {
        let inst = build(Family::SineGordon, &BTreeMap::new(), None, Forcing::Zero).unwrap();
        let e = return_map(&inst, 0.0, 3.5);
        assert!(matches!(e, Err(Error::EscapedAnnulus(_))), "{e:?}");
    }

    #[test]
    fn epsilon_cap_enforced() {
        let inst = toy(Forcing::Zero);
        assert!(matches!(return_map(&inst, 0.5, 1.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn zero_epsilon_is_a_continuum() {
        let inst = toy(Forcing::pde(|_, ux, _| ux * ux * ux - ux));
        let r = detect_limit_cycles(&inst, 0.0, 8).unwrap();
        assert!(r.degenerate_continuum);
        assert!(r.fixed_points.is_empty());
    }

    #[test]
    fn toy_single_cycle() {
        let inst = toy(Forcing::pde(|_, ux, _| ux * ux * ux - ux));
        let r = detect_limit_cycles(&inst, 1e-3, 32).unwrap();
        assert_eq!(r.fixed_points.len(), 1, "{r:?}");
        assert!(r.matched_zeros[0].relative_gap < 5e-2);
    }

    #[test]
    fn harmonic_profile_is_cosine() {
        let inst = toy(Forcing::Zero);
        let p = wave_profile(&inst, 0.5, 65).unwrap();
        assert!((p.period_s - 2.0 * std::f64::consts::PI).abs() < 1e-8);
        for s in &p.samples {
            assert!((s.u - s.s.cos()).abs() < 1e-8);
        }
        assert!(p.warnings.is_empty());
    }
}
