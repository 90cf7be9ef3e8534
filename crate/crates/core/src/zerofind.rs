//! Zeros of sampled Melnikov curves.
//!
//! A sample is *significant* when `|M| > 3 · quad_error`. Sign changes are
//! read off between consecutive significant samples, refined by Brent's
//! method on fresh evaluations of `M`, and certified simple when the
//! derivative estimate clears a noise-derived floor.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{melnikov_at, MelnikovCurve, PerturbationSpec};
use crate::error::{Error, Result};
use crate::model::PlanarModel;
use crate::quadrature::QuadOptions;
use crate::roots::brent;

const SIGNIFICANCE: f64 = 3.0;
const REFINE_REL: f64 = 1e-9;
const DERIVATIVE_STEP_REL: f64 = 1e-5;
const TANGENCY_REL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub h_star: f64,
    pub bracket: (f64, f64),
    pub derivative_estimate: f64,
    pub simple: bool,
    pub refinement_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroWarning {
    pub h: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ZeroReport {
    pub zeros: Vec<ZeroRecord>,
    pub warnings: Vec<ZeroWarning>,
}

impl ZeroReport {
    pub fn simple_zeros(&self) -> Vec<f64> {
        self.zeros.iter().filter(|z| z.simple).map(|z| z.h_star).collect()
    }
}

/// Sign-changing brackets between significant samples; also collects
/// tangency warnings.
fn scan(curve: &MelnikovCurve) -> Result<(Vec<(usize, usize)>, Vec<ZeroWarning>)> {
    let s = &curve.samples;
    let significant: Vec<usize> = (0..s.len())
        .filter(|&i| s[i].m.abs() > SIGNIFICANCE * s[i].quad_error && s[i].m != 0.0)
        .collect();
    let peak = s.iter().fold(0.0f64, |m, v| m.max(v.m.abs()));
    let mut brackets = Vec::new();
    let mut warnings = Vec::new();

    for w in significant.windows(2) {
        let (i, j) = (w[0], w[1]);
        let (mi, mj) = (s[i].m, s[j].m);
        let between = &s[i + 1..j];
        if mi.signum() != mj.signum() {
            let swing = (mj - mi).abs();
            let noisy = between.iter().any(|v| v.quad_error >= 0.5 * swing);
            let flips = between
                .windows(2)
                .filter(|p| p[0].m.signum() != p[1].m.signum() && p[0].m != 0.0 && p[1].m != 0.0)
                .count();
            if noisy || flips > 1 {
                return Err(Error::AmbiguousSignChange { h_left: s[i].h, h_right: s[j].h });
            }
            brackets.push((i, j));
        } else if !between.is_empty() {
            let h = between[between.len() / 2].h;
            warnings.push(ZeroWarning {
                h,
                message: format!(
                    "M touches zero without changing sign in ({}, {}); possible tangential zero",
                    s[i].h, s[j].h
                ),
            });
        }
    }

    // interior local minima of |M| that nearly vanish without a sign change
    for k in 1..s.len().saturating_sub(1) {
        let (a, b, c) = (s[k - 1].m, s[k].m, s[k + 1].m);
        if a.signum() == b.signum()
            && b.signum() == c.signum()
            && b.abs() < a.abs()
            && b.abs() < c.abs()
            && b.abs() < TANGENCY_REL * peak
            && b.abs() > SIGNIFICANCE * s[k].quad_error
        {
            warnings.push(ZeroWarning {
                h: s[k].h,
                message: format!(
                    "|M| has a near-zero local minimum {:e} at h = {}; possible tangential zero",
                    b.abs(),
                    s[k].h
                ),
            });
        }
    }
    Ok((brackets, warnings))
}

/// Locates and certifies the zeros of `M` bracketed by the samples.
///
/// Each sign change yields one record, refined to a bracket narrower than
/// `1e-9 · h̄` (or `1e-9` times the grid's upper end for an unbounded
/// annulus) unless quadrature noise forces a wider certified bracket.
/// Tangential zeros only produce warnings.
pub fn find_zeros(
    curve: &MelnikovCurve,
    model: &PlanarModel,
    pert: &PerturbationSpec,
    opts: &QuadOptions,
) -> Result<ZeroReport> {
    let (brackets, warnings) = scan(curve)?;
    let scale = if model.h_ceiling().is_finite() {
        model.h_ceiling()
    } else {
        curve.h_range.1
    };
    let zeros = brackets
        .par_iter()
        .map(|&(i, j)| refine(curve, i, j, model, pert, opts, scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZeroReport { zeros, warnings })
}

fn refine(
    curve: &MelnikovCurve,
    i: usize,
    j: usize,
    model: &PlanarModel,
    pert: &PerturbationSpec,
    opts: &QuadOptions,
    scale: f64,
) -> Result<ZeroRecord> {
    let (lo, hi) = (curve.samples[i], curve.samples[j]);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let eval = |h: f64| -> f64 {
        match melnikov_at(model, pert, h, opts) {
            Ok(r) => r.value,
            Err(e) => {
                let prev = failure.take();
                failure.set(prev.or(Some(e)));
                f64::NAN
            }
        }
    };
    let tol = REFINE_REL * scale;
    let root = brent(eval, lo.h, hi.h, lo.m, hi.m, 0.5 * tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let h_star = root?;

    // certify a sign change around h_star, widening until both ends are
    // significant
    let mut half = 0.5 * tol;
    let (mut left, mut right);
    let mut noise;
    loop {
        let a = (h_star - half).max(lo.h);
        let b = (h_star + half).min(hi.h);
        let ra = melnikov_at(model, pert, a, opts)?;
        let rb = melnikov_at(model, pert, b, opts)?;
        left = (a, ra);
        right = (b, rb);
        noise = ra.error.max(rb.error);
        let certified = ra.value.signum() != rb.value.signum()
            && ra.value.abs() > SIGNIFICANCE * ra.error
            && rb.value.abs() > SIGNIFICANCE * rb.error;
        if certified {
            break;
        }
        if a <= lo.h && b >= hi.h {
            return Err(Error::AmbiguousSignChange { h_left: lo.h, h_right: hi.h });
        }
        half *= 4.0;
    }

    let step = DERIVATIVE_STEP_REL * h_star;
    let dp = melnikov_at(model, pert, h_star + step, opts)?;
    let dm = melnikov_at(model, pert, h_star - step, opts)?;
    let derivative = (dp.value - dm.value) / (2.0 * step);
    let propagated = (dp.error + dm.error) / (2.0 * step);
    let noise = noise.max(lo.quad_error).max(hi.quad_error).max(propagated * step);
    let floor = 1e-8f64.max(10.0 * noise / (hi.h - lo.h));

    Ok(ZeroRecord {
        h_star,
        bracket: (left.0, right.0),
        derivative_estimate: derivative,
        simple: derivative.abs() > floor,
        refinement_error: 0.5 * (right.0 - left.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{default_options, log_grid, melnikov_curve, MonomialPerturbation};
    use crate::model::harmonic;

    #[test]
    fn harmonic_combination_zero() {
        // M(h) = −J_{0,1} + J_{0,2} = −2πh + 3πh² vanishes at h = 2/3
        let m = harmonic();
        let pert = PerturbationSpec::Monomials(
            MonomialPerturbation::from_parts(&[(0, 1), (0, 2)], &[-1.0, 1.0]).unwrap(),
        );
        let grid = log_grid(0.05, 3.0, 32);
        let curve = melnikov_curve(&m, &pert, &grid, &default_options()).unwrap();
        let report = find_zeros(&curve, &m, &pert, &default_options()).unwrap();
        assert_eq!(report.zeros.len(), 1);
        let z = report.zeros[0];
        assert!(z.simple);
        assert!((z.h_star - 2.0 / 3.0).abs() < 1e-8, "{}", z.h_star);
        assert!(z.bracket.0 < z.h_star && z.h_star < z.bracket.1);
    }

    #[test]
    fn zero_perturbation_has_no_zeros() {
        let m = harmonic();
        let grid = log_grid(0.05, 3.0, 8);
        let curve = melnikov_curve(&m, &PerturbationSpec::Zero, &grid, &default_options()).unwrap();
        let report = find_zeros(&curve, &m, &PerturbationSpec::Zero, &default_options()).unwrap();
        assert!(report.zeros.is_empty());
    }

    #[test]
    fn tangential_zero_is_only_a_warning() {
        // J_{0,1} = 2πh, J_{0,2} = 3πh², J_{0,3} = 5πh³, so M = πh(1 − h)²
        let m = harmonic();
        let d = [1.0 / (2.0), -2.0 / 3.0, 1.0 / 5.0];
        let pert = PerturbationSpec::Monomials(
            MonomialPerturbation::from_parts(&[(0, 1), (0, 2), (0, 3)], &d).unwrap(),
        );
        let grid = log_grid(0.05, 3.0, 41);
        let curve = melnikov_curve(&m, &pert, &grid, &default_options()).unwrap();
        let report = find_zeros(&curve, &m, &pert, &default_options()).unwrap();
        assert!(report.zeros.is_empty());
        assert!(!report.warnings.is_empty());
    }
}
