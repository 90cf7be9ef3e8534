//! Quadrature rules: Gauss–Legendre ladders and tanh–sinh.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Node counts of the Gauss–Legendre ladder used for doubling error estimates.
pub const LADDER: [usize; 7] = [24, 48, 96, 192, 384, 768, 1536];

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on [-1, 1] by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, pm1) = legendre_pair(n, x);
                dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, pm1) = legendre_pair(n, x);
            if p != 0.0 || dp == 0.0 {
                dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Cached rules for every rung of [`LADDER`].
pub fn ladder() -> &'static [GaussLegendre] {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    RULES.get_or_init(|| LADDER.iter().map(|&n| GaussLegendre::new(n)).collect())
}

/// Short fixed rule used for panel integration.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(12))
}

/// Tolerances for adaptive quadrature. Convergence is declared when the
/// error estimate drops below `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 0.0 }
    }
}

impl QuadOptions {
    pub fn absolute(abs_tol: f64) -> Self {
        Self { abs_tol, rel_tol: 0.0 }
    }

    pub fn relative(rel_tol: f64) -> Self {
        Self { abs_tol: 0.0, rel_tol }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre doubling over the ladder. Returns the finest estimate
/// reached and whether it met the tolerance.
pub fn gauss_ladder<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    opts: &QuadOptions,
    mut f: F,
) -> (QuadResult, bool) {
    let rules = ladder();
    let mut prev = rules[0].integrate(a, b, &mut f);
    let mut last = QuadResult { value: prev, error: f64::INFINITY };
    for rule in &rules[1..] {
        let cur = rule.integrate(a, b, &mut f);
        let err = (cur - prev).abs();
        last = QuadResult { value: cur, error: err };
        if err <= opts.target(cur) {
            return (last, true);
        }
        prev = cur;
    }
    (last, false)
}

/// Double-exponential (tanh–sinh) quadrature on `[a, b]` with step halving.
///
/// Nodes near the ends are formed from the distance to the end point, so
/// integrable algebraic endpoint singularities are handled.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    opts: &QuadOptions,
    max_level: u32,
    mut f: F,
) -> (QuadResult, bool) {
    let half = 0.5 * (b - a);
    let u_max = 4.5;

    let mut eval = |u: f64| -> f64 {
        let s = FRAC_PI_2 * u.sinh();
        let cs = s.cosh();
        let w = FRAC_PI_2 * u.cosh() / (cs * cs);
        // distance from the nearer end, computed without cancellation
        let dist = (b - a) / ((2.0 * s.abs()).exp() + 1.0);
        let x = if s >= 0.0 { b - dist } else { a + dist };
        if x <= a || x >= b || w == 0.0 {
            return 0.0;
        }
        let v = f(x);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };

    let mut step = 1.0;
    let mut sum = eval(0.0);
    let mut j = 1;
    while j as f64 * step <= u_max {
        let u = j as f64 * step;
        sum += eval(u) + eval(-u);
        j += 1;
    }
    let mut prev = sum * step * half;
    let mut last = QuadResult { value: prev, error: f64::INFINITY };

    for _ in 1..=max_level {
        step *= 0.5;
        let mut k = 1;
        while k as f64 * step <= u_max {
            let u = k as f64 * step;
            sum += eval(u) + eval(-u);
            k += 2;
        }
        let cur = sum * step * half;
        let err = (cur - prev).abs();
        last = QuadResult { value: cur, error: err };
        if err <= opts.target(cur) {
            return (last, true);
        }
        prev = cur;
    }
    (last, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the highest exact degree for 5 nodes
        let v = rule.integrate(-1.0, 1.0, |x| x.powi(8) + x.powi(9));
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        let w: f64 = rule.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ladder_rules_are_symmetric() {
        for rule in ladder() {
            let n = rule.nodes.len();
            for i in 0..n {
                assert_eq!(rule.nodes[i], -rule.nodes[n - 1 - i]);
            }
        }
    }

    #[test]
    fn tanh_sinh_handles_sqrt_endpoints() {
        // ∫₀¹ √(x(1−x)) dx = π/8
        let (r, ok) = tanh_sinh(0.0, 1.0, &QuadOptions::absolute(1e-14), 12, |x| {
            (x * (1.0 - x)).sqrt()
        });
        assert!(ok);
        assert!((r.value - PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_inverse_sqrt() {
        // ∫₀¹ x^{-1/2} dx = 2
        let (r, _) = tanh_sinh(0.0, 1.0, &QuadOptions::absolute(1e-12), 12, |x| x.powf(-0.5));
        assert!((r.value - 2.0).abs() < 1e-10);
    }
}
