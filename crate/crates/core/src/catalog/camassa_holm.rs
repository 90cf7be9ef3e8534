//! Camassa–Holm-type equations
//! `u_t + A'(u)u_x + b u_x u_xx + d u u_xxx + p u_xxx + q u_xxt + r u_xtt
//!  + s u_ttt + ε (g)_x = 0`.
//!
//! One integration gives `A_c(U) + βU'² + (C + dU)U'' + ε g = k` with
//! `A_c = A − cU`, `β = (b − d)/2` and `C = p − qc + rc² − sc³`. With
//! `s_c = (C + dx)^{−2β/d}` (or `e^{−2βx/C}` when `d = 0`) the system is
//! Hamiltonian for
//! `H = y²/(2s_c) + ∫_{x*}^x (A_c(w) − k) W(w) dw`, `W = 1/((C + dw) s_c)`,
//! and the Melnikov integrand is `g_c W` with `g_c = −g(U, U', −cU')`.
//!
//! The potential has no closed form in general. It is tabulated once as
//! cumulative panel integrals around the center and completed by a
//! 12-point Gauss–Legendre rule from the nearest node.

use std::sync::Arc;

use super::{symbols, Family, FamilyInstance, Forcing};
use crate::error::{Error, Result};
use crate::model::{Domain, Field1, ModelParts, PlanarModel, ScalarField1D, SeparableHamiltonian};
use crate::quadrature::panel_rule;
use crate::roots::brent;

const TABLE_PANELS: usize = 1024;
const ADAPTIVE_DEPTH: u32 = 40;
const MAX_PANELS: usize = 4096;

/// Members of the class. `Custom` takes any smooth `A` with `A(0) = 0`.
#[derive(Debug, Clone)]
pub enum ChVariant {
    /// `A'(u) = 2κ + 3u`, `b = −2`, `d = 1`, `q = −1`.
    CamassaHolm { kappa: f64 },
    /// `A'(u) = 4u`, `b = −3`, `d = −1`, `q = −1`.
    DegasperisProcesi,
    /// `A'(u) = 1 + 6u − 6u² + 12u³`, `b = 28`, `d = 14`, `p = 1`, `q = −1`.
    ConstantinLannes,
    /// `A(u) = A1 u + A2 u² + A3 u³ + A4 u⁴` with `[b, d, p, q, r, s]`.
    Polynomial { a: [f64; 4], coeffs: [f64; 6] },
    Custom { a: ScalarField1D, coeffs: [f64; 6] },
}

impl ChVariant {
    pub fn polynomial(a: [f64; 4], coeffs: [f64; 6]) -> Self {
        ChVariant::Polynomial { a, coeffs }
    }

    pub fn key(&self) -> &'static str {
        match self {
            ChVariant::CamassaHolm { .. } => "camassa_holm",
            ChVariant::DegasperisProcesi => "degasperis_procesi",
            ChVariant::ConstantinLannes => "constantin_lannes",
            ChVariant::Polynomial { .. } => "polynomial",
            ChVariant::Custom { .. } => "custom",
        }
    }

    fn parts(&self) -> (ScalarField1D, [f64; 6]) {
        match self {
            ChVariant::CamassaHolm { kappa } => {
                (polynomial_field([2.0 * kappa, 1.5, 0.0, 0.0]), [-2.0, 1.0, 0.0, -1.0, 0.0, 0.0])
            }
            ChVariant::DegasperisProcesi => {
                (polynomial_field([0.0, 2.0, 0.0, 0.0]), [-3.0, -1.0, 0.0, -1.0, 0.0, 0.0])
            }
            ChVariant::ConstantinLannes => {
                (polynomial_field([1.0, 3.0, -2.0, 3.0]), [28.0, 14.0, 1.0, -1.0, 0.0, 0.0])
            }
            ChVariant::Polynomial { a, coeffs } => (polynomial_field(*a), *coeffs),
            ChVariant::Custom { a, coeffs } => (a.clone(), *coeffs),
        }
    }
}

fn polynomial_field(a: [f64; 4]) -> ScalarField1D {
    ScalarField1D::new(
        move |u| u * (a[0] + u * (a[1] + u * (a[2] + u * a[3]))),
        move |u| a[0] + u * (2.0 * a[1] + u * (3.0 * a[2] + u * 4.0 * a[3])),
        move |u| 2.0 * a[1] + u * (6.0 * a[2] + u * 12.0 * a[3]),
    )
}

/// `x ↦ ∫_{anchor}^x φ`, tabulated on uniform panels on each side of the
/// anchor and evaluated adaptively beyond the table.
struct Potential {
    phi: Field1,
    anchor: f64,
    left: Side,
    right: Side,
}

struct Side {
    step: f64,
    cum: Vec<f64>,
}

impl Potential {
    fn new(phi: Field1, anchor: f64, lo: f64, hi: f64) -> Self {
        let left = Self::tabulate(&phi, anchor, lo);
        let right = Self::tabulate(&phi, anchor, hi);
        Self { phi, anchor, left, right }
    }

    fn tabulate(phi: &Field1, anchor: f64, end: f64) -> Side {
        let step = (end - anchor) / TABLE_PANELS as f64;
        let rule = panel_rule();
        let mut cum = Vec::with_capacity(TABLE_PANELS + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for j in 0..TABLE_PANELS {
            let a = anchor + j as f64 * step;
            acc += rule.integrate(a, a + step, |w| phi(w));
            cum.push(acc);
        }
        Side { step, cum }
    }

    fn value(&self, x: f64) -> f64 {
        let side = if x >= self.anchor { &self.right } else { &self.left };
        if side.step == 0.0 {
            return self.adaptive(self.anchor, x);
        }
        let t = (x - self.anchor) / side.step;
        let last = TABLE_PANELS as f64;
        if t <= last {
            let j = t.round().clamp(0.0, last) as usize;
            let node = self.anchor + j as f64 * side.step;
            side.cum[j] + panel_rule().integrate(node, x, |w| (self.phi)(w))
        } else {
            let end = self.anchor + last * side.step;
            side.cum[TABLE_PANELS] + self.adaptive(end, x)
        }
    }

    fn panel(&self, a: f64, b: f64) -> (f64, f64) {
        let rule = panel_rule();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (mut sum, mut abs) = (0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = w * (self.phi)(mid + half * x);
            sum += v;
            abs += v.abs();
        }
        (sum * half, abs * half.abs())
    }

    /// Bisection with a rounding floor on each panel and a cap on the
    /// number of panels.
    fn adaptive(&self, a: f64, b: f64) -> f64 {
        let (whole, scale) = self.panel(a, b);
        let tol = 1e-15 * scale.max(f64::MIN_POSITIVE);
        let mut stack = vec![(a, b, whole, 0u32)];
        let mut total = 0.0;
        let mut budget = MAX_PANELS;
        while let Some((a, b, whole, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let (l, la) = self.panel(a, m);
            let (r, ra) = self.panel(m, b);
            let floor = 16.0 * f64::EPSILON * (la + ra);
            let done = (l + r - whole).abs() <= tol.max(floor)
                || depth >= ADAPTIVE_DEPTH
                || budget == 0
                || !(l + r).is_finite();
            if done {
                total += l + r;
            } else {
                budget -= 1;
                stack.push((a, m, l, depth + 1));
                stack.push((m, b, r, depth + 1));
            }
        }
        total
    }
}

/// Weight `W = 1/((C + dw) s_c(w))`, its derivative, and the `y²`
/// coefficient `1/(2 s_c)` with two derivatives.
#[derive(Clone, Copy)]
struct Weights {
    cc: f64,
    d: f64,
    beta: f64,
}

impl Weights {
    fn s(&self, x: f64) -> f64 {
        if self.d == 0.0 {
            (-2.0 * self.beta * x / self.cc).exp()
        } else {
            base_pow(self.cc, self.d, x, -2.0 * self.beta / self.d)
        }
    }

    fn w(&self, x: f64) -> f64 {
        if self.d == 0.0 {
            (2.0 * self.beta * x / self.cc).exp() / self.cc
        } else {
            base_pow(self.cc, self.d, x, 2.0 * self.beta / self.d - 1.0)
        }
    }

    fn dw(&self, x: f64) -> f64 {
        if self.d == 0.0 {
            2.0 * self.beta / self.cc * self.w(x)
        } else {
            (2.0 * self.beta - self.d) * base_pow(self.cc, self.d, x, 2.0 * self.beta / self.d - 2.0)
        }
    }

    fn a_y(&self) -> ScalarField1D {
        let Weights { cc, d, beta } = *self;
        if d == 0.0 {
            let e = move |x: f64| (2.0 * beta * x / cc).exp();
            ScalarField1D::new(
                move |x| 0.5 * e(x),
                move |x| beta / cc * e(x),
                move |x| 2.0 * beta * beta / (cc * cc) * e(x),
            )
        } else {
            let m = 2.0 * beta / d;
            ScalarField1D::new(
                move |x| 0.5 * base_pow(cc, d, x, m),
                move |x| beta * base_pow(cc, d, x, m - 1.0),
                move |x| beta * (2.0 * beta - d) * base_pow(cc, d, x, m - 2.0),
            )
        }
    }
}

/// `(C + dx)^m`, through `ln_1p` when `C > 0` so that large exponents with
/// small `d` keep full relative accuracy.
fn base_pow(cc: f64, d: f64, x: f64, m: f64) -> f64 {
    if cc > 0.0 && d * x / cc > -1.0 {
        (m * (cc.ln() + (d * x / cc).ln_1p())).exp()
    } else {
        (cc + d * x).powf(m)
    }
}

/// Reduces a member of the class at speed `c` and integration constant `k`.
///
/// The center is the root of `A_c(x) = k` closest to zero at which
/// `A_c' > 0`, which is where `H_xx = A_c' W` is positive.
pub fn make_camassa_holm_class(
    variant: &ChVariant,
    c: f64,
    k: f64,
    forcing: Forcing,
) -> Result<FamilyInstance> {
    let (a_fn, [b, d, p, q, r, s]) = variant.parts();
    if a_fn.value(0.0) != 0.0 {
        return Err(Error::InvalidParams(format!("A(0) = {} must vanish", a_fn.value(0.0))));
    }
    let cc = p - q * c + r * c * c - s * c.powi(3);
    if cc == 0.0 {
        return Err(Error::ZeroDispersion("C = p − qc + rc² − sc³ vanishes".into()));
    }
    let beta = 0.5 * (b - d);
    let wt = Weights { cc, d, beta };
    let edge = if d == 0.0 { f64::NAN } else { -cc / d };
    let domain = if d > 0.0 {
        Domain::x_between(edge, f64::INFINITY)
    } else if d < 0.0 {
        Domain::x_between(f64::NEG_INFINITY, edge)
    } else if cc > 0.0 {
        Domain::plane()
    } else {
        return Err(Error::DomainViolation("d = 0 requires C > 0".into()));
    };

    let ac = {
        let a = a_fn.clone();
        move |x: f64| a.value(x) - c * x
    };
    let dac = {
        let a = a_fn.clone();
        move |x: f64| a.derivative(x) - c
    };
    let center = locate_center(&ac, &dac, k, &domain)?;

    let phi: Field1 = {
        let ac = ac.clone();
        Arc::new(move |w| (ac(w) - k) * wt.w(w))
    };
    let dphi = {
        let ac = ac.clone();
        let dac = dac.clone();
        move |w: f64| dac(w) * wt.w(w) + (ac(w) - k) * wt.dw(w)
    };
    let scale = 8.0 * center.abs().max(1.0);
    let (mut lo, mut hi) = (center - scale, center + scale);
    if domain.x_min.is_finite() {
        lo = lo.max(domain.x_min + 0.05 * (center - domain.x_min));
    }
    if domain.x_max.is_finite() {
        hi = hi.min(domain.x_max - 0.05 * (domain.x_max - center));
    }
    let pot = Arc::new(Potential::new(phi.clone(), center, lo, hi));
    let b_field = {
        let pot = pot.clone();
        let phi = phi.clone();
        ScalarField1D::new(move |x| pot.value(x), move |x| phi(x), dphi)
            .with_domain(domain.x_min, domain.x_max)
    };
    let a_y = wt.a_y().with_domain(domain.x_min, domain.x_max);
    let sep = SeparableHamiltonian::new(a_y.clone(), b_field, center)?;

    let model = PlanarModel::new(ModelParts {
        name: format!("camassa_holm_class/{}", variant.key()),
        hamiltonian: {
            let pot = pot.clone();
            let a_y = a_y.clone();
            Arc::new(move |x, y| a_y.value(x) * y * y + pot.value(x))
        },
        s_factor: Arc::new(move |x, _| wt.s(x)),
        restoring: {
            let ac = ac.clone();
            Arc::new(move |x, y| (k - ac(x) - beta * y * y) / (cc + d * x))
        },
        force: Some({
            let ac = ac.clone();
            Arc::new(move |x, y| (k - ac(x) - beta * y * y) * wt.w(x))
        }),
        center_x: center,
        domain,
        separable: Some(sep),
    })?;
    let pert = forcing.integrand(
        c,
        move |x, _, g| -g * wt.w(x),
        move |x, _, gc| gc * wt.w(x),
    );
    Ok(FamilyInstance {
        family: Family::CamassaHolmClass,
        params: Default::default(),
        symbols: symbols(&[("C", cc), ("beta", beta), ("x_star", center), ("edge", edge)]),
        model,
        pert,
        c,
    })
}

fn locate_center<F, D>(ac: F, dac: D, k: f64, domain: &Domain) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let g = |x: f64| ac(x) - k;
    let mut grid: Vec<f64> = (0..=1400).map(|i| -(10f64.powf(6.0 - i as f64 * 0.01))).collect();
    grid.push(0.0);
    grid.extend((0..=1400).map(|i| 10f64.powf(-8.0 + i as f64 * 0.01)));
    let vals: Vec<f64> = grid.iter().map(|&x| g(x)).collect();

    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if vals[i] == 0.0 {
            roots.push(grid[i]);
        } else if i + 1 < grid.len()
            && vals[i + 1] != 0.0
            && vals[i].is_finite()
            && vals[i + 1].is_finite()
            && vals[i].signum() != vals[i + 1].signum()
        {
            let xtol = 1e-15f64.max(4.0 * f64::EPSILON * grid[i].abs());
            roots.push(brent(g, grid[i], grid[i + 1], vals[i], vals[i + 1], xtol)?);
        }
    }
    let mut centers: Vec<f64> = roots.into_iter().filter(|&x| dac(x) > 0.0).collect();
    if centers.is_empty() {
        return Err(Error::NoCenter("A_c(x) = k has no root with A_c'(x) > 0".into()));
    }
    centers.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    centers
        .iter()
        .copied()
        .find(|&x| domain.contains(x, 0.0))
        .ok_or_else(|| {
            Error::DomainViolation(format!(
                "candidate center x = {} has C + dx ≤ 0",
                centers[0]
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{melnikov_at, default_options};
    use crate::model::EquilibriumKind;

    #[test]
    fn camassa_holm_preset() {
        let inst =
            make_camassa_holm_class(&ChVariant::CamassaHolm { kappa: 1.0 }, 3.0, 0.0, Forcing::Zero)
                .unwrap();
        let m = &inst.model;
        assert!((m.center_x() - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(m.classify_equilibrium(0.0).unwrap(), EquilibriumKind::Saddle);
        // H(0) from the polynomial antiderivative of (1.5w² − w)(3 + w)^{-4}
        let anti = |w: f64| {
            let u = 3.0 + w;
            // 1.5w² − w = 1.5u² − 10u + 16.5
            -1.5 / u + 5.0 / (u * u) - 5.5 / (u * u * u)
        };
        let expected = anti(0.0) - anti(2.0 / 3.0);
        assert!((m.h_ceiling() - expected).abs() < 1e-14, "{} vs {}", m.h_ceiling(), expected);
    }

    #[test]
    fn degasperis_procesi_center() {
        let inst =
            make_camassa_holm_class(&ChVariant::DegasperisProcesi, 2.0, 0.0, Forcing::Zero).unwrap();
        assert!((inst.model.center_x() - 1.0).abs() < 1e-14);
        assert_eq!(inst.model.domain().x_max, 2.0);
    }

    #[test]
    fn constantin_lannes_center() {
        let inst =
            make_camassa_holm_class(&ChVariant::ConstantinLannes, 2.0, 0.0, Forcing::Zero).unwrap();
        let x = inst.model.center_x();
        assert!((3.0 * x.powi(3) - 2.0 * x * x + 3.0 * x - 1.0).abs() < 1e-13);
        assert!((x - 0.374).abs() < 1e-3);
    }

    #[test]
    fn integrating_factor_limits() {
        // b = d
        let v = ChVariant::polynomial([0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let inst = make_camassa_holm_class(&v, 1.0, 0.0, Forcing::Zero).unwrap();
        for x in [0.3, 0.5, 0.9] {
            assert_eq!(inst.model.s_factor(x, 0.0), 1.0);
        }
        let v0 = ChVariant::polynomial([0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let d0 = make_camassa_holm_class(&v0, 1.0, 0.0, Forcing::Zero).unwrap();
        let v1 = ChVariant::polynomial([0.0, 1.0, 0.0, 0.0], [1.0 + 1e-9, 1e-9, 1.0, 0.0, 0.0, 0.0]);
        let d1 = make_camassa_holm_class(&v1, 1.0, 0.0, Forcing::Zero).unwrap();
        assert!((d0.model.s_factor(0.7, 0.0) - d1.model.s_factor(0.7, 0.0)).abs() < 1e-6);
    }

    #[test]
    fn area_forcing_is_positive() {
        // g_c = (C + dx) s_c(x) y gives M(h) = oval area
        let wt = Weights { cc: 3.0, d: 1.0, beta: -1.5 };
        let inst = make_camassa_holm_class(
            &ChVariant::CamassaHolm { kappa: 1.0 },
            3.0,
            0.0,
            Forcing::reduced(move |x, y| y / wt.w(x)),
        )
        .unwrap();
        let hbar = inst.model.h_ceiling();
        for f in [0.1, 0.5, 0.9] {
            let m = melnikov_at(&inst.model, &inst.pert, f * hbar, &default_options()).unwrap();
            assert!(m.value > 0.0);
        }
    }

    #[test]
    fn no_center_reported() {
        let v = ChVariant::polynomial([0.0, 0.0, 0.0, 0.0], [-2.0, 1.0, 0.0, -1.0, 0.0, 0.0]);
        let e = make_camassa_holm_class(&v, 3.0, 0.0, Forcing::Zero);
        assert!(matches!(e, Err(Error::NoCenter(_))));
    }
}
