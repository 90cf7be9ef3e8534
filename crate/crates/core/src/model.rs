//! Planar near-Hamiltonian models, equilibrium classification and the
//! period annulus around a center.
//!
//! A model carries the unperturbed Hamiltonian `H`, the positive integrating
//! factor `s`, the restoring term `f` of the reduced second order ODE
//! `U'' = f(U, U')`, and the rescaled field `force = f / s = -H_x` that drives
//! the time-reparameterized system
//!
//! ```text
//! dx/dτ =  H_y = y / s(x, y)
//! dy/dτ = -H_x = f(x, y) / s(x, y)
//! ```
//!
//! `H` is always stored shifted so that it vanishes at the center; the
//! period annulus is then `0 < h < h_ceiling`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::roots::brent;

pub type Field1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Field2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Tolerance on `|∂f/∂x|` below which an equilibrium is reported degenerate.
pub const DEGENERATE_TOL: f64 = 1e-8;
/// Residual allowed in `f(x*, 0) = 0` when classifying.
pub const EQUILIBRIUM_TOL: f64 = 1e-9;
/// Relative tolerance of the finite-difference gradient probes.
pub const CONSISTENCY_TOL: f64 = 1e-6;

const SCAN_FIRST_STEP: f64 = 1e-3;
const SCAN_GROWTH: f64 = 1.02;
const SCAN_REACH: f64 = 1e6;

/// A real function of one variable with its first two derivatives.
#[derive(Clone)]
pub struct ScalarField1D {
    value: Field1,
    derivative: Field1,
    second_derivative: Field1,
    domain: (f64, f64),
}

impl fmt::Debug for ScalarField1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField1D").field("domain", &self.domain).finish()
    }
}

impl ScalarField1D {
    pub fn new<V, D, DD>(value: V, derivative: D, second_derivative: DD) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        DD: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            second_derivative: Arc::new(second_derivative),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn from_arcs(value: Field1, derivative: Field1, second_derivative: Field1) -> Self {
        Self {
            value,
            derivative,
            second_derivative,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, |_| 0.0, |_| 0.0)
    }

    /// `x ↦ (x - x0)^n`.
    pub fn power(x0: f64, n: i32) -> Self {
        let nf = n as f64;
        Self::new(
            move |x| (x - x0).powi(n),
            move |x| if n == 0 { 0.0 } else { nf * (x - x0).powi(n - 1) },
            move |x| if n < 2 { 0.0 } else { nf * (nf - 1.0) * (x - x0).powi(n - 2) },
        )
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    #[inline]
    pub fn second_derivative(&self, x: f64) -> f64 {
        (self.second_derivative)(x)
    }

    /// Checks both derivatives against central differences at the probe
    /// points. Errors are measured relative to the largest derivative
    /// magnitude seen on the probe set, so isolated zeros of a derivative do
    /// not produce spurious failures.
    pub fn check_derivatives(&self, probes: &[f64], rel_tol: f64) -> Result<()> {
        let pts: Vec<f64> = probes
            .iter()
            .copied()
            .filter(|&x| x > self.domain.0 && x < self.domain.1)
            .collect();
        let d1: Vec<f64> = pts.iter().map(|&x| self.derivative(x)).collect();
        let d2: Vec<f64> = pts.iter().map(|&x| self.second_derivative(x)).collect();
        let s1 = d1.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let s2 = d2.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for (i, &x) in pts.iter().enumerate() {
            let fd1 = central_difference(|t| self.value(t), x);
            let fd2 = central_difference(|t| self.derivative(t), x);
            let e1 = (fd1 - d1[i]).abs() / d1[i].abs().max(1e-3 * s1);
            let e2 = (fd2 - d2[i]).abs() / d2[i].abs().max(1e-3 * s2);
            if e1 > rel_tol || e2 > rel_tol {
                return Err(Error::Inconsistent(format!(
                    "derivative mismatch at x = {x}: rel. errors {e1:e}, {e2:e}"
                )));
            }
        }
        Ok(())
    }
}

/// Fourth-order central difference with a step scaled to `|x|`.
pub(crate) fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let d = 1e-4 * x.abs().max(1.0);
    (-f(x + 2.0 * d) + 8.0 * f(x + d) - 8.0 * f(x - d) + f(x - 2.0 * d)) / (12.0 * d)
}

/// Open rectangle of the phase plane on which a model is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    pub fn plane() -> Self {
        Self {
            x_min: f64::NEG_INFINITY,
            x_max: f64::INFINITY,
            y_min: f64::NEG_INFINITY,
            y_max: f64::INFINITY,
        }
    }

    pub fn x_between(x_min: f64, x_max: f64) -> Self {
        Self { x_min, x_max, ..Self::plane() }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x_min && x < self.x_max && y > self.y_min && y < self.y_max
    }
}

/// `H(x, y) = A(x) y² + B(x)` with a nondegenerate minimum of `B` at the
/// center, where `A(x_c) = a²` and `B''(x_c) = 2 / b²`.
#[derive(Clone, Debug)]
pub struct SeparableHamiltonian {
    a: ScalarField1D,
    b: ScalarField1D,
    center_x: f64,
    a_const: f64,
    b_const: f64,
}

impl SeparableHamiltonian {
    pub fn new(a: ScalarField1D, b: ScalarField1D, center_x: f64) -> Result<Self> {
        let a0 = a.value(center_x);
        if !(a0 > 0.0) {
            return Err(Error::Inconsistent(format!("A(x_c) = {a0} must be positive")));
        }
        let b0 = b.value(center_x);
        let b2 = b.second_derivative(center_x);
        let b1 = b.derivative(center_x);
        let scale = b2.abs().max(1.0);
        if b0.abs() > 1e-12 * scale.max(b.value(center_x + 1.0).abs().min(1e12)) && b0.abs() > 1e-14 {
            return Err(Error::Inconsistent(format!(
                "B(x_c) = {b0:e}; the Hamiltonian must be stored pre-shifted"
            )));
        }
        if b1.abs() > 1e-8 * scale {
            return Err(Error::Inconsistent(format!("B'(x_c) = {b1:e} is not zero")));
        }
        if !(b2 > 0.0) {
            return Err(Error::NoCenter(format!("B''(x_c) = {b2} is not positive")));
        }
        Ok(Self {
            a,
            b,
            center_x,
            a_const: a0.sqrt(),
            b_const: (2.0 / b2).sqrt(),
        })
    }

    pub fn a(&self) -> &ScalarField1D {
        &self.a
    }

    pub fn b(&self) -> &ScalarField1D {
        &self.b
    }

    pub fn center_x(&self) -> f64 {
        self.center_x
    }

    /// `a` with `A(x_c) = a²`.
    pub fn a_const(&self) -> f64 {
        self.a_const
    }

    /// `b` with `B(x) = (x - x_c)² / b² + O((x - x_c)³)`.
    pub fn b_const(&self) -> f64 {
        self.b_const
    }

    pub fn hamiltonian(&self, x: f64, y: f64) -> f64 {
        self.a.value(x) * y * y + self.b.value(x)
    }

    /// Upper branch `y₊(x) = √((h − B(x)) / A(x))` of the level set.
    pub fn upper_branch(&self, x: f64, h: f64) -> Option<f64> {
        let num = h - self.b.value(x);
        let den = self.a.value(x);
        if !(den > 0.0) || num.is_nan() {
            return None;
        }
        // tiny negative values are rounding at the turning points
        let r = num.max(0.0) / den;
        if num < -1e-9 * h.abs().max(1e-300) {
            return None;
        }
        Some(r.sqrt())
    }
}

/// Classification of an equilibrium `(x*, 0)` by the sign of `∂f/∂x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EquilibriumKind {
    Center,
    Saddle,
    Degenerate,
}

/// Components used to assemble a [`PlanarModel`].
pub struct ModelParts {
    pub name: String,
    pub hamiltonian: Field2,
    pub s_factor: Field2,
    pub restoring: Field2,
    /// `f / s`; derived from `restoring` and `s_factor` when absent. Supply it
    /// explicitly when `s` blows up at a domain edge that hosts a saddle.
    pub force: Option<Field2>,
    pub center_x: f64,
    pub domain: Domain,
    pub separable: Option<SeparableHamiltonian>,
}

#[derive(Clone)]
pub struct PlanarModel {
    name: String,
    hamiltonian: Field2,
    s_factor: Field2,
    restoring: Field2,
    force: Field2,
    center_x: f64,
    h_ceiling: f64,
    /// x-extent of the closure of the period annulus on the section y = 0.
    annulus: (f64, f64),
    domain: Domain,
    separable: Option<SeparableHamiltonian>,
}

impl fmt::Debug for PlanarModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarModel")
            .field("name", &self.name)
            .field("center_x", &self.center_x)
            .field("h_ceiling", &self.h_ceiling)
            .field("annulus", &self.annulus)
            .field("domain", &self.domain)
            .field("separable", &self.separable.is_some())
            .finish()
    }
}

impl PlanarModel {
    /// Validates the parts and locates the period annulus.
    ///
    /// Rejects a Hamiltonian that does not vanish at the center, a
    /// nonpositive integrating factor, an equilibrium that is not a
    /// (possibly degenerate) minimum of `H`, and gradients that disagree
    /// with `(y/s, f/s)` on the probe grid.
    pub fn new(parts: ModelParts) -> Result<Self> {
        let ModelParts {
            name,
            hamiltonian,
            s_factor,
            restoring,
            force,
            center_x,
            domain,
            separable,
        } = parts;
        let force = force.unwrap_or_else(|| {
            let f = restoring.clone();
            let s = s_factor.clone();
            Arc::new(move |x, y| f(x, y) / s(x, y))
        });

        if !domain.contains(center_x, 0.0) {
            return Err(Error::DomainViolation(format!(
                "center x = {center_x} lies outside the model domain"
            )));
        }
        let h0 = hamiltonian(center_x, 0.0);
        if h0.abs() > 1e-12 {
            return Err(Error::Inconsistent(format!(
                "H(x_c, 0) = {h0:e}; the Hamiltonian must be stored pre-shifted"
            )));
        }
        let s0 = s_factor(center_x, 0.0);
        if !(s0 > 0.0) {
            return Err(Error::Inconsistent(format!("s(x_c, 0) = {s0} must be positive")));
        }

        let mut model = Self {
            name,
            hamiltonian,
            s_factor,
            restoring,
            force,
            center_x,
            h_ceiling: f64::NAN,
            annulus: (center_x, center_x),
            domain,
            separable,
        };
        let (h_bar, annulus) = model.scan_annulus()?;
        model.h_ceiling = h_bar;
        model.annulus = annulus;
        model.check_consistency(CONSISTENCY_TOL)?;
        Ok(model)
    }

    /// Builds a model from a separable Hamiltonian, deriving `s = 1/(2A)`,
    /// `force = -H_x` and `f = force · s`.
    pub fn from_separable(
        name: impl Into<String>,
        sep: SeparableHamiltonian,
        domain: Domain,
    ) -> Result<Self> {
        let (s, f, force) = separable_fields(&sep);
        let h = {
            let sep = sep.clone();
            Arc::new(move |x: f64, y: f64| sep.hamiltonian(x, y)) as Field2
        };
        Self::new(ModelParts {
            name: name.into(),
            hamiltonian: h,
            s_factor: s,
            restoring: f,
            force: Some(force),
            center_x: sep.center_x(),
            domain,
            separable: Some(sep),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn hamiltonian(&self, x: f64, y: f64) -> f64 {
        (self.hamiltonian)(x, y)
    }

    #[inline]
    pub fn s_factor(&self, x: f64, y: f64) -> f64 {
        (self.s_factor)(x, y)
    }

    #[inline]
    pub fn restoring(&self, x: f64, y: f64) -> f64 {
        (self.restoring)(x, y)
    }

    /// `f / s = -∂H/∂x`.
    #[inline]
    pub fn force(&self, x: f64, y: f64) -> f64 {
        (self.force)(x, y)
    }

    /// Unperturbed field in the reparameterized time.
    #[inline]
    pub fn velocity(&self, x: f64, y: f64) -> (f64, f64) {
        (y / self.s_factor(x, y), self.force(x, y))
    }

    pub fn center_x(&self) -> f64 {
        self.center_x
    }

    pub fn h_ceiling(&self) -> f64 {
        self.h_ceiling
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn annulus_extent(&self) -> (f64, f64) {
        self.annulus
    }

    pub fn separable(&self) -> Option<&SeparableHamiltonian> {
        self.separable.as_ref()
    }

    /// Classifies `(x_star, 0)` by the sign of `∂f/∂x`, evaluated on the
    /// rescaled field `f/s` (same sign because `s > 0`; the rescaled field
    /// stays finite at saddles sitting on a domain edge).
    pub fn classify_equilibrium(&self, x_star: f64) -> Result<EquilibriumKind> {
        classify(&*self.force, x_star)
    }

    /// Supremum of the energies whose level set is a closed oval around the
    /// center. Recomputed from scratch; the cached value is [`h_ceiling`].
    ///
    /// [`h_ceiling`]: PlanarModel::h_ceiling
    pub fn energy_ceiling(&self) -> Result<f64> {
        self.scan_annulus().map(|(h, _)| h)
    }

    /// Intersections `x₋ < x_c < x₊` of the oval `H = h` with `y = 0`.
    pub fn turning_points(&self, h: f64) -> Result<(f64, f64)> {
        if !(h > 0.0 && h < self.h_ceiling) {
            return Err(Error::EnergyOutOfRange { h, ceiling: self.h_ceiling });
        }
        let lo = self.turning_point(h, -1.0)?;
        let hi = self.turning_point(h, 1.0)?;
        Ok((lo, hi))
    }

    fn turning_point(&self, h: f64, dir: f64) -> Result<f64> {
        let xc = self.center_x;
        let limit = if dir > 0.0 { self.annulus.1 } else { self.annulus.0 };
        let g = |x: f64| self.hamiltonian(x, 0.0) - h;

        let mut reach = match &self.separable {
            Some(sep) => sep.b_const() * h.sqrt(),
            None => SCAN_FIRST_STEP * xc.abs().max(1.0),
        };
        let mut inner = xc;
        let mut g_inner = -h;
        loop {
            let mut x = xc + dir * reach;
            let mut at_limit = false;
            if limit.is_finite() && (x - limit) * dir >= 0.0 {
                x = limit;
                at_limit = true;
            }
            let mut gx = g(x);
            if at_limit && !gx.is_finite() {
                x = limit - dir * 1e-12 * limit.abs().max(1.0);
                gx = g(x);
            }
            if !(gx < 0.0) {
                if !gx.is_finite() {
                    return Err(Error::BracketFailure(format!(
                        "H is not finite at x = {x} while bracketing h = {h}"
                    )));
                }
                let xtol = 1e-13f64.max(4.0 * f64::EPSILON * x.abs());
                return brent(g, inner, x, g_inner, gx, xtol);
            }
            if at_limit || (x - xc).abs() > SCAN_REACH * xc.abs().max(1.0) {
                return Err(Error::BracketFailure(format!(
                    "edge of the annulus reached before H = {h}"
                )));
            }
            inner = x;
            g_inner = gx;
            reach *= 1.5;
        }
    }

    /// Walks outward from the center on `y = 0` in both directions until the
    /// field stops pointing back toward the center (a saddle) or the domain
    /// edge is reached.
    fn scan_annulus(&self) -> Result<(f64, (f64, f64))> {
        let xc = self.center_x;
        match self.classify_equilibrium(xc)? {
            EquilibriumKind::Center => {}
            EquilibriumKind::Saddle => {
                return Err(Error::NoCenter(format!("(x = {xc}, 0) is a saddle")));
            }
            EquilibriumKind::Degenerate => {
                // accepted only as a strict minimum of H(·, 0)
                let d = 1e-3 * xc.abs().max(1.0);
                let l = self.hamiltonian(xc - d, 0.0);
                let r = self.hamiltonian(xc + d, 0.0);
                if !(l > 0.0 && r > 0.0) {
                    return Err(Error::NoCenter(format!(
                        "degenerate equilibrium at x = {xc} is not a minimum of H"
                    )));
                }
            }
        }
        let (hl, xl) = self.scan_side(-1.0)?;
        let (hr, xr) = self.scan_side(1.0)?;
        let h_bar = hl.min(hr);
        if !(h_bar > 0.0) {
            return Err(Error::NoPeriodAnnulus(format!("energy ceiling {h_bar} is not positive")));
        }
        Ok((h_bar, (xl, xr)))
    }

    fn scan_side(&self, dir: f64) -> Result<(f64, f64)> {
        let xc = self.center_x;
        let scale = xc.abs().max(1.0);
        let edge = if dir > 0.0 { self.domain.x_max } else { self.domain.x_min };
        let restoring = |x: f64| self.force(x, 0.0) * dir < 0.0;
        let fx = |x: f64| self.force(x, 0.0);

        let mut step = SCAN_FIRST_STEP * scale;
        let mut prev = xc;
        loop {
            let x = prev + dir * step;
            if edge.is_finite() && (x - edge) * dir >= 0.0 {
                let inside = edge - dir * 1e-12 * edge.abs().max(1.0);
                if !restoring(inside) {
                    return self.saddle_between(prev, inside);
                }
                let at_edge = self.hamiltonian(edge, 0.0);
                let value = if at_edge.is_finite() {
                    at_edge
                } else {
                    let v = self.hamiltonian(inside, 0.0);
                    if v.is_nan() {
                        f64::INFINITY
                    } else {
                        v
                    }
                };
                return Ok((value, edge));
            }
            let f = fx(x);
            if f.is_nan() {
                return Err(Error::DomainViolation(format!("field undefined at x = {x}")));
            }
            if !restoring(x) {
                return self.saddle_between(prev, x);
            }
            if (x - xc).abs() > SCAN_REACH * scale {
                let far = self.hamiltonian(x, 0.0);
                let nearer = self.hamiltonian(xc + 0.5 * (x - xc), 0.0);
                let growing = far - nearer > 1e-6 * far.abs();
                let extent = dir * f64::INFINITY;
                return Ok((if growing || !far.is_finite() { f64::INFINITY } else { far }, extent));
            }
            prev = x;
            step *= SCAN_GROWTH;
        }
    }

    fn saddle_between(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        let f = |x: f64| self.force(x, 0.0);
        let fa = f(a);
        let fb = f(b);
        let xtol = 1e-14f64.max(4.0 * f64::EPSILON * b.abs());
        let xs = brent(f, a, b, fa, fb, xtol)?;
        Ok((self.hamiltonian(xs, 0.0), xs))
    }

    /// Probes `∂H/∂y = y/s` and `∂H/∂x = -f/s` by finite differences of `H`
    /// on 100 points spread over five ovals of the annulus.
    pub fn check_consistency(&self, rel_tol: f64) -> Result<()> {
        for (x, y) in self.probe_points()? {
            let fd_x = central_difference(|t| self.hamiltonian(t, y), x);
            let fd_y = central_difference(|t| self.hamiltonian(x, t), y);
            let an_x = -self.force(x, y);
            let an_y = y / self.s_factor(x, y);
            let via_f = -self.restoring(x, y) / self.s_factor(x, y);
            let norm = an_x.hypot(an_y);
            let err = (fd_x - an_x).abs().max((fd_y - an_y).abs()).max((via_f - an_x).abs());
            if !(err <= rel_tol * norm) {
                return Err(Error::Inconsistent(format!(
                    "{}: gradient of H disagrees with (f/s, y/s) at ({x}, {y}): error {err:e}, |∇H| {norm:e}",
                    self.name
                )));
            }
            if !(self.s_factor(x, y) > 0.0) {
                return Err(Error::Inconsistent(format!("s({x}, {y}) is not positive")));
            }
        }
        Ok(())
    }

    /// Points on ovals at five energy levels: 10 abscissae per oval, each
    /// paired with one height on the upper and one on the lower branch.
    pub fn probe_points(&self) -> Result<Vec<(f64, f64)>> {
        let levels: Vec<f64> = if self.h_ceiling.is_finite() {
            [0.05, 0.2, 0.4, 0.6, 0.8].iter().map(|f| f * self.h_ceiling).collect()
        } else {
            vec![0.01, 0.1, 0.5, 1.0, 2.0]
        };
        let mut pts = Vec::with_capacity(100);
        for h in levels {
            let (lo, hi) = self.turning_points(h)?;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for k in 0..10 {
                let theta = -1.4 + 2.8 * (k as f64) / 9.0;
                let x = mid + half * theta.sin();
                let y = crate::abelian::upper_branch(self, x, h)?;
                pts.push((x, 0.6 * y));
                pts.push((x, -0.9 * y));
            }
        }
        Ok(pts)
    }
}

fn separable_fields(sep: &SeparableHamiltonian) -> (Field2, Field2, Field2) {
    let a = sep.a().clone();
    let s: Field2 = Arc::new(move |x, _y| 0.5 / a.value(x));
    let sa = sep.clone();
    let force: Field2 = Arc::new(move |x, y| {
        -(sa.a().derivative(x) * y * y + sa.b().derivative(x))
    });
    let sf = sep.clone();
    let f: Field2 = Arc::new(move |x, y| {
        -(sf.a().derivative(x) * y * y + sf.b().derivative(x)) / (2.0 * sf.a().value(x))
    });
    (s, f, force)
}

fn classify(force: &(dyn Fn(f64, f64) -> f64 + Send + Sync), x_star: f64) -> Result<EquilibriumKind> {
    let residual = force(x_star, 0.0).abs();
    if !(residual <= EQUILIBRIUM_TOL) {
        return Err(Error::NotAnEquilibrium { x: x_star, residual });
    }
    let slope = richardson_slope(|x| force(x, 0.0), x_star);
    Ok(if slope < -DEGENERATE_TOL {
        EquilibriumKind::Center
    } else if slope > DEGENERATE_TOL {
        EquilibriumKind::Saddle
    } else {
        EquilibriumKind::Degenerate
    })
}

/// Central difference with one Richardson extrapolation step.
fn richardson_slope<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let d = 1e-3 * x.abs().max(1.0);
    let c = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * c(0.5 * d) - c(d)) / 3.0
}

/// Classifies `(x_star, 0)` for any model; see [`PlanarModel::classify_equilibrium`].
pub fn classify_equilibrium(model: &PlanarModel, x_star: f64) -> Result<EquilibriumKind> {
    model.classify_equilibrium(x_star)
}

pub fn energy_ceiling(model: &PlanarModel) -> Result<f64> {
    model.energy_ceiling()
}

pub fn turning_points(model: &PlanarModel, h: f64) -> Result<(f64, f64)> {
    model.turning_points(h)
}

/// `H = x²/2 + y²/2`, the reference model with `s ≡ 1`, `f = -x`.
pub fn harmonic() -> PlanarModel {
    let sep = SeparableHamiltonian::new(
        ScalarField1D::constant(0.5),
        ScalarField1D::new(|x| 0.5 * x * x, |x| x, |_| 1.0),
        0.0,
    )
    .expect("harmonic separable form");
    PlanarModel::from_separable("harmonic", sep, Domain::plane()).expect("harmonic model")
}
