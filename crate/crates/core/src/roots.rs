//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// `fa` and `fb` are the function values at the ends; they must have
/// opposite signs (or one of them be zero). Terminates when the bracket
/// is narrower than `xtol` or an exact zero is hit.
pub fn brent<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{a}, {b}] (f = {fa:e}, {fb:e})"
        )));
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::BracketFailure(format!("non-finite value at x = {b}")));
        }
    }
    Ok(b)
}

/// Plain bisection to a bracket of width `xtol`; returns the final bracket.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return (m, m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| x * x * x - 2.0 * x - 5.0;
        let r = brent(f, 2.0, 3.0, f(2.0), f(3.0), 1e-14).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_same_sign() {
        let f = |x: f64| x * x + 1.0;
        assert!(matches!(
            brent(f, -1.0, 1.0, 2.0, 2.0, 1e-12),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn bisect_shrinks_bracket() {
        let f = |x: f64| x.cos();
        let (a, b) = bisect(f, 0.0, 3.0, 1.0, 1e-12);
        assert!((b - a).abs() <= 1e-12);
        assert!((0.5 * (a + b) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
