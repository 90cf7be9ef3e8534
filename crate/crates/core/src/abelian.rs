//! Abelian integrals and Melnikov functions along the ovals of a period
//! annulus.
//!
//! Every line integral is taken clockwise, so `∮ y dx` is the enclosed
//! area. The closed curve is split into its upper and lower branches and
//! the integral is written as
//!
//! ```text
//! ∮ F(x, y) dx = ∫_{x₋}^{x₊} [F(x, y₊(x)) − F(x, y₋(x))] dx.
//! ```
//!
//! With the substitution `x = m + w sin θ` (`m`, `w` the midpoint and half
//! width of `[x₋, x₊]`) the square-root behavior of the branches at the
//! turning points becomes analytic in `θ`, and Gauss–Legendre doubling
//! converges geometrically. Near a separatrix the integrand develops steep
//! layers; tanh–sinh in `θ` takes over when the ladder is exhausted.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Field2, PlanarModel, ScalarField1D, SeparableHamiltonian};
use crate::quadrature::{gauss_ladder, tanh_sinh, QuadOptions, QuadResult};
use crate::roots::brent;

/// Default absolute tolerance of oval quadrature.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Relative floor that keeps large integrals from chasing roundoff.
pub const DEFAULT_REL_TOL: f64 = 1e-13;
/// Default number of points of an energy grid.
pub const DEFAULT_GRID_POINTS: usize = 64;

const TANH_SINH_LEVELS: u32 = 12;

pub fn default_options() -> QuadOptions {
    QuadOptions { abs_tol: DEFAULT_ABS_TOL, rel_tol: DEFAULT_REL_TOL }
}

/// One closed level curve `H = h` of a model.
#[derive(Debug, Clone, Copy)]
pub struct Oval<'a> {
    pub h: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    model: &'a PlanarModel,
}

impl<'a> Oval<'a> {
    pub fn new(model: &'a PlanarModel, h: f64) -> Result<Self> {
        let (x_minus, x_plus) = model.turning_points(h)?;
        Ok(Self { h, x_minus, x_plus, model })
    }

    pub fn model(&self) -> &'a PlanarModel {
        self.model
    }

    /// `(y₋(x), y₊(x))` on the oval.
    pub fn branches(&self, x: f64) -> Result<(f64, f64)> {
        branches(self.model, x, self.h)
    }
}

/// Upper branch `y₊(x) ≥ 0` of `H(x, y) = h`.
pub fn upper_branch(model: &PlanarModel, x: f64, h: f64) -> Result<f64> {
    match model.separable() {
        Some(sep) => separable_branch(sep, x, h),
        None => solve_branch(model, x, h, 1.0),
    }
}

/// `(y₋(x), y₊(x))`; symmetric for separable models.
pub fn branches(model: &PlanarModel, x: f64, h: f64) -> Result<(f64, f64)> {
    match model.separable() {
        Some(sep) => {
            let y = separable_branch(sep, x, h)?;
            Ok((-y, y))
        }
        None => Ok((solve_branch(model, x, h, -1.0)?, solve_branch(model, x, h, 1.0)?)),
    }
}

fn separable_branch(sep: &SeparableHamiltonian, x: f64, h: f64) -> Result<f64> {
    sep.upper_branch(x, h).ok_or(Error::BranchSolveFailure { x, h })
}

/// Solves `H(x, σ y) = h` for `y ≥ 0` by bracketing outward and Brent
/// refinement; `H` is increasing in `|y|` on the annulus since `H_y = y/s`.
fn solve_branch(model: &PlanarModel, x: f64, h: f64, sign: f64) -> Result<f64> {
    let g = |y: f64| model.hamiltonian(x, sign * y) - h;
    let g0 = g(0.0);
    if !g0.is_finite() || g0 > 1e-9 * h.abs().max(1e-300) {
        return Err(Error::BranchSolveFailure { x, h });
    }
    if g0 >= 0.0 {
        return Ok(0.0);
    }
    let s0 = model.s_factor(x, 0.0);
    let mut hi = (2.0 * s0 * (-g0)).sqrt().max(1e-300);
    let mut lo = 0.0;
    let mut g_lo = g0;
    let mut g_hi = g(hi);
    let mut tries = 0;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = g(hi);
        tries += 1;
        if tries > 200 || !model.domain().contains(x, sign * hi) && g_hi < 0.0 {
            return Err(Error::BranchSolveFailure { x, h });
        }
    }
    if !g_hi.is_finite() {
        return Err(Error::BranchSolveFailure { x, h });
    }
    let y = brent(g, lo, hi, g_lo, g_hi, 4.0 * f64::EPSILON * hi)
        .map_err(|_| Error::BranchSolveFailure { x, h })?;
    Ok(sign * y)
}

/// Clockwise `∮ integrand dx` over the oval, with its error estimate.
pub fn integrate_oval<F>(oval: &Oval<'_>, integrand: F, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    branch_difference(oval, opts, |x, y_lo, y_hi| integrand(x, y_hi) - integrand(x, y_lo))
}

/// Integrates `G(x, y₋, y₊)` over `[x₋, x₊]` in the angle variable.
fn branch_difference<G>(oval: &Oval<'_>, opts: &QuadOptions, g: G) -> Result<QuadResult>
where
    G: Fn(f64, f64, f64) -> f64,
{
    let mid = 0.5 * (oval.x_minus + oval.x_plus);
    let half = 0.5 * (oval.x_plus - oval.x_minus);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let body = |theta: f64| -> f64 {
        let x = mid + half * theta.sin();
        match oval.branches(x) {
            Ok((lo, hi)) => g(x, lo, hi) * half * theta.cos(),
            Err(e) => {
                let prev = failure.take();
                failure.set(prev.or(Some(e)));
                0.0
            }
        }
    };
    let (res, ok) = gauss_ladder(-FRAC_PI_2, FRAC_PI_2, opts, body);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    if ok {
        return Ok(res);
    }
    let (ts, ts_ok) = tanh_sinh(-FRAC_PI_2, FRAC_PI_2, opts, TANH_SINH_LEVELS, body);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let best = if ts.error < res.error { ts } else { res };
    if ts_ok {
        return Ok(ts);
    }
    Err(Error::ToleranceNotMet { estimate: best.error, tolerance: opts.target(best.value) })
}

/// `∮ dτ = ∮ s/y dx`, the period of the oval in the reparameterized time.
pub fn oval_period(model: &PlanarModel, h: f64) -> Result<f64> {
    let oval = Oval::new(model, h)?;
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-9 };
    let r = branch_difference(&oval, &opts, |x, lo, hi| {
        model.s_factor(x, hi) / hi - model.s_factor(x, lo) / lo
    })
    .map_err(|e| e.at(h))?;
    Ok(r.value)
}

/// `Σ d x^{2q} y^{2p−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialPerturbation {
    pub terms: Vec<MonomialTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub q: u32,
    pub p: u32,
    pub d: f64,
}

impl MonomialPerturbation {
    pub fn new(terms: Vec<MonomialTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.p == 0 {
                return Err(Error::InvalidParams("monomial exponent p must be positive".into()));
            }
            if terms[..i].iter().any(|u| u.q == t.q && u.p == t.p) {
                return Err(Error::InvalidParams(format!(
                    "exponent pair (q={}, p={}) appears twice",
                    t.q, t.p
                )));
            }
        }
        Ok(Self { terms })
    }

    pub fn from_parts(exponents: &[(u32, u32)], coefficients: &[f64]) -> Result<Self> {
        if exponents.len() != coefficients.len() {
            return Err(Error::InvalidParams("exponent and coefficient counts differ".into()));
        }
        Self::new(
            exponents
                .iter()
                .zip(coefficients)
                .map(|(&(q, p), &d)| MonomialTerm { q, p, d })
                .collect(),
        )
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.d * x.powi(2 * t.q as i32) * y.powi(2 * t.p as i32 - 1))
            .sum()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.d).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|t| MonomialTerm { d: t.d * factor, ..*t }).collect(),
        }
    }
}

/// The integrand `g(x, y, 0) / s(x, y)` of a Melnikov function.
#[derive(Clone)]
pub enum PerturbationSpec {
    Zero,
    Monomials(MonomialPerturbation),
    Integrand(Field2),
}

impl std::fmt::Debug for PerturbationSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::Monomials(m) => f.debug_tuple("Monomials").field(m).finish(),
            Self::Integrand(_) => write!(f, "Integrand(..)"),
        }
    }
}

impl PerturbationSpec {
    pub fn integrand<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::Integrand(std::sync::Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Monomials(m) => m.eval(x, y),
            Self::Integrand(f) => f(x, y),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Monomials(m) => m.terms.iter().all(|t| t.d == 0.0),
            Self::Integrand(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MelnikovSample {
    pub h: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub quad_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelnikovCurve {
    pub samples: Vec<MelnikovSample>,
    pub h_range: (f64, f64),
}

impl MelnikovCurve {
    pub fn hs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.h).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.m).collect()
    }

    pub fn max_error(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.quad_error))
    }
}

/// `M(h)` at one energy.
pub fn melnikov_at(
    model: &PlanarModel,
    pert: &PerturbationSpec,
    h: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let oval = Oval::new(model, h).map_err(|e| e.at(h))?;
    if pert.is_zero() {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    integrate_oval(&oval, |x, y| pert.eval(x, y), opts).map_err(|e| e.at(h))
}

/// Samples `M` on a strictly increasing grid, in parallel, keeping grid order.
pub fn melnikov_curve(
    model: &PlanarModel,
    pert: &PerturbationSpec,
    h_grid: &[f64],
    opts: &QuadOptions,
) -> Result<MelnikovCurve> {
    check_grid(model, h_grid)?;
    let samples = h_grid
        .par_iter()
        .map(|&h| {
            melnikov_at(model, pert, h, opts).map(|r| MelnikovSample {
                h,
                m: r.value,
                quad_error: r.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MelnikovCurve {
        h_range: (h_grid[0], h_grid[h_grid.len() - 1]),
        samples,
    })
}

pub(crate) fn check_grid(model: &PlanarModel, h_grid: &[f64]) -> Result<()> {
    if h_grid.is_empty() {
        return Err(Error::InvalidParams("empty energy grid".into()));
    }
    if h_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("energy grid must be strictly increasing".into()));
    }
    let ceiling = model.h_ceiling();
    if let Some(&h) = h_grid.iter().find(|&&h| !(h > 0.0 && h < ceiling)) {
        return Err(Error::EnergyOutOfRange { h, ceiling });
    }
    Ok(())
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Default grid: log-spaced in `(1e-4 h̄, 0.999 h̄)`, or from `1e-4` to
/// `cap` when the annulus is unbounded.
pub fn default_grid(model: &PlanarModel, n: usize, cap: f64) -> Vec<f64> {
    let hb = model.h_ceiling();
    if hb.is_finite() {
        log_grid(1e-4 * hb, 0.999 * hb, n)
    } else {
        log_grid(1e-4, cap, n)
    }
}

/// `J_p(h) = ∮ D(x) y^p dx`; zero without quadrature when `p` is even.
pub fn abelian_j(model: &PlanarModel, d: &ScalarField1D, p: u32, h: f64) -> Result<f64> {
    abelian_j_with(model, d, p, h, &default_options())
}

pub fn abelian_j_with(
    model: &PlanarModel,
    d: &ScalarField1D,
    p: u32,
    h: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidParams("J_p needs p ≥ 1".into()));
    }
    let oval = Oval::new(model, h).map_err(|e| e.at(h))?;
    if p % 2 == 0 {
        return Ok(0.0);
    }
    integrate_oval(&oval, |x, y| d.value(x) * y.powi(p as i32), opts)
        .map(|r| r.value)
        .map_err(|e| e.at(h))
}

/// `J_{q,p}(h) = ∮ x^{2q} y^{2p−1} dx`.
pub fn monomial_j(model: &PlanarModel, q: u32, p: u32, h: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if p == 0 {
        return Err(Error::InvalidParams("J_{q,p} needs p ≥ 1".into()));
    }
    let oval = Oval::new(model, h).map_err(|e| e.at(h))?;
    integrate_oval(&oval, |x, y| x.powi(2 * q as i32) * y.powi(2 * p as i32 - 1), opts)
        .map_err(|e| e.at(h))
}

/// `(2k−1)!!` with `(−1)!! = 1`.
pub fn double_factorial_odd(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (2 * i - 1) as f64)
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `K(p, n) = ∫₀¹ (z(1−z))^{(2p−1)/2} (z − 1/2)^{2n} dz
///          = (2p−1)!! (2n−1)!! π / (8^{p+n} (p+n)!)`.
pub fn k_closed_form(p: u32, n: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidParams("K(p, n) needs p ≥ 1".into()));
    }
    if p + n > 20 {
        return Err(Error::Overflow(p + n));
    }
    let m = p + n;
    Ok(double_factorial_odd(p) * double_factorial_odd(n) * PI
        / (8f64.powi(m as i32) * factorial(m)))
}

/// Leading term `coefficient · h^exponent` of `J_p` at `h = 0⁺` when
/// `D(x) = (x − x_c)^{2n} (d + O(x − x_c))`.
pub fn j_asymptotic_leading(sep: &SeparableHamiltonian, d: f64, n: u32, p: u32) -> (f64, u32) {
    let a = sep.a_const();
    let b = sep.b_const();
    let m = p + n;
    let coefficient = 2.0 * d * b.powi(2 * n as i32 + 1) / a.powi(2 * p as i32 - 1)
        * double_factorial_odd(p)
        * double_factorial_odd(n)
        * PI
        / (2f64.powi(m as i32) * factorial(m));
    (coefficient, m)
}
