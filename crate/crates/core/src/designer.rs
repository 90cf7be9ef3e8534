//! Perturbations with prescribed Melnikov zeros.
//!
//! Given `ℓ + 1` monomial exponents `(q_j, p_j)` with distinct weights
//! `m_j = q_j + p_j`, the basis integrals `J_j(h) = ∮ x^{2q_j} y^{2p_j−1} dx`
//! are positive and linearly independent. Requiring `Σ d_j J_j(h_i) = 0` at
//! `ℓ` targets gives an `ℓ × (ℓ + 1)` collocation system whose null space
//! fixes the coefficients up to scale.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{
    check_grid, default_options, log_grid, melnikov_curve, monomial_j, MelnikovCurve,
    MelnikovSample, MonomialPerturbation, PerturbationSpec,
};
use crate::error::{Error, Result};
use crate::model::PlanarModel;
use crate::quadrature::QuadOptions;
use crate::zerofind::{find_zeros, ZeroReport};

pub const MAX_CONDITION: f64 = 1e12;
pub const TARGET_MARGIN: f64 = 0.01;
pub const PLACEMENT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    pub quad: QuadOptions,
    /// Points of the verification grid.
    pub grid_points: usize,
    /// Upper end of the verification grid when the annulus is unbounded;
    /// defaults to twice the largest target.
    pub cap: Option<f64>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self { quad: default_options(), grid_points: 64, cap: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub perturbation: MonomialPerturbation,
    pub targets: Vec<f64>,
    /// Column-equilibrated collocation matrix, row per target.
    pub collocation: Vec<Vec<f64>>,
    pub condition: f64,
    pub verification: ZeroReport,
    /// `|h*_i − target_i| / target_i` per recovered zero.
    pub placement_errors: Vec<f64>,
    pub verification_grid: Vec<f64>,
}

fn check_weights(exponents: &[(u32, u32)]) -> Result<()> {
    for (i, &(q, p)) in exponents.iter().enumerate() {
        if p == 0 {
            return Err(Error::InvalidParams("exponent p must be positive".into()));
        }
        if exponents[..i].iter().any(|&(q2, p2)| q2 + p2 == q + p) {
            return Err(Error::DuplicateWeight(q + p));
        }
    }
    Ok(())
}

/// Samples `J_{q,p}` for every exponent pair, checking positivity.
pub fn basis_curves(
    model: &PlanarModel,
    exponents: &[(u32, u32)],
    h_grid: &[f64],
    opts: &QuadOptions,
) -> Result<Vec<MelnikovCurve>> {
    check_weights(exponents)?;
    check_grid(model, h_grid)?;
    exponents
        .iter()
        .map(|&(q, p)| {
            let samples = h_grid
                .par_iter()
                .map(|&h| {
                    let r = monomial_j(model, q, p, h, opts)?;
                    if !(r.value > 0.0) {
                        return Err(Error::BasisSignViolation { q, p, h });
                    }
                    Ok(MelnikovSample { h, m: r.value, quad_error: r.error })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MelnikovCurve { samples, h_range: (h_grid[0], h_grid[h_grid.len() - 1]) })
        })
        .collect()
}

/// Coefficients `d_j` (largest `|d_j| = 1`) whose combination vanishes at
/// each target, verified by locating the zeros of the resulting `M`.
pub fn place_zeros(
    model: &PlanarModel,
    exponents: &[(u32, u32)],
    targets: &[f64],
    opts: &DesignOptions,
) -> Result<Design> {
    check_weights(exponents)?;
    let ell = targets.len();
    if exponents.len() != ell + 1 {
        return Err(Error::InvalidParams(format!(
            "{} targets need {} exponent pairs, got {}",
            ell,
            ell + 1,
            exponents.len()
        )));
    }
    check_targets(model, targets)?;

    if ell == 0 {
        return Ok(Design {
            perturbation: MonomialPerturbation::from_parts(exponents, &[1.0])?,
            targets: vec![],
            collocation: vec![],
            condition: 1.0,
            verification: ZeroReport::default(),
            placement_errors: vec![],
            verification_grid: vec![],
        });
    }

    let rows: Vec<Vec<f64>> = targets
        .par_iter()
        .map(|&h| {
            exponents
                .iter()
                .map(|&(q, p)| {
                    let r = monomial_j(model, q, p, h, &opts.quad)?;
                    if !(r.value > 0.0) {
                        return Err(Error::BasisSignViolation { q, p, h });
                    }
                    Ok(r.value)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let n = ell + 1;
    let mut scale = vec![0.0f64; n];
    for row in &rows {
        for (j, v) in row.iter().enumerate() {
            scale[j] = scale[j].max(v.abs());
        }
    }
    let equilibrated: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&scale).map(|(v, s)| v / s).collect())
        .collect();

    let condition = condition_number(&equilibrated);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            condition,
            detail: format!("collocation matrix {equilibrated:?}"),
        });
    }

    let z = null_vector(&equilibrated).ok_or_else(|| Error::IllConditioned {
        condition,
        detail: format!("collocation matrix {equilibrated:?} is rank deficient"),
    })?;
    let mut d: Vec<f64> = z.iter().zip(&scale).map(|(v, s)| v / s).collect();
    let dmax = d.iter().fold(0.0f64, |b, &v| if v.abs() > b.abs() { v } else { b });
    for v in d.iter_mut() {
        *v /= dmax;
    }
    let perturbation = MonomialPerturbation::from_parts(exponents, &d)?;

    let grid = verification_grid(model, targets, opts);
    let pert = PerturbationSpec::Monomials(perturbation.clone());
    let curve = melnikov_curve(model, &pert, &grid, &opts.quad)?;
    let verification = find_zeros(&curve, model, &pert, &opts.quad)?;
    let found = verification.simple_zeros();

    let placement_errors: Vec<f64> = found
        .iter()
        .zip(targets)
        .map(|(h, t)| (h - t).abs() / t)
        .collect();
    let ok = found.len() == ell
        && verification.zeros.len() == ell
        && placement_errors.iter().all(|&e| e <= PLACEMENT_TOL);
    if !ok {
        return Err(Error::IllConditioned {
            condition,
            detail: format!(
                "verification recovered simple zeros {found:?} for targets {targets:?} \
                 (relative residuals {placement_errors:?}); collocation matrix {equilibrated:?}"
            ),
        });
    }

    Ok(Design {
        perturbation,
        targets: targets.to_vec(),
        collocation: equilibrated,
        condition,
        verification,
        placement_errors,
        verification_grid: grid,
    })
}

fn check_targets(model: &PlanarModel, targets: &[f64]) -> Result<()> {
    if targets.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("targets must be strictly increasing".into()));
    }
    let hb = model.h_ceiling();
    for &t in targets {
        let inside = if hb.is_finite() {
            t > TARGET_MARGIN * hb && t < (1.0 - TARGET_MARGIN) * hb
        } else {
            t > 0.0 && t.is_finite()
        };
        if !inside {
            return Err(Error::InvalidParams(format!(
                "target h = {t} is not inside the admissible range (1% margin) of the annulus (0, {hb})"
            )));
        }
    }
    Ok(())
}

/// Grid on which a design is verified.
pub fn verification_grid(model: &PlanarModel, targets: &[f64], opts: &DesignOptions) -> Vec<f64> {
    let hb = model.h_ceiling();
    let t_max = targets.iter().fold(0.0f64, |m, &t| m.max(t));
    if hb.is_finite() {
        log_grid(1e-4 * hb, 0.999 * hb, opts.grid_points)
    } else {
        let hi = opts.cap.unwrap_or(2.0 * t_max).max(1.01 * t_max);
        log_grid(1e-4 * hi, hi, opts.grid_points)
    }
}

/// `σ_max / σ_min` over the nonzero-rank singular values.
pub fn condition_number(rows: &[Vec<f64>]) -> f64 {
    let r = rows.len();
    let c = rows.first().map_or(0, |v| v.len());
    let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Null vector of an `ℓ × (ℓ+1)` matrix of full row rank, by Gaussian
/// elimination with complete pivoting.
pub fn null_vector(rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let r = rows.len();
    let n = r + 1;
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut cols: Vec<usize> = (0..n).collect();
    let peak = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for k in 0..r {
        let (mut pi, mut pj, mut pv) = (k, k, 0.0f64);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.abs() > pv {
                    (pi, pj, pv) = (i, j, v.abs());
                }
            }
        }
        if pv <= 1e-14 * peak {
            return None;
        }
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        cols.swap(k, pj);
        for i in 0..r {
            if i != k {
                let factor = a[i][k] / a[k][k];
                if factor != 0.0 {
                    for j in k..n {
                        a[i][j] -= factor * a[k][j];
                    }
                }
            }
        }
    }
    // a is now [diag | last column]; free variable is the last column
    let mut z = vec![0.0; n];
    z[cols[r]] = 1.0;
    for k in 0..r {
        z[cols[k]] = -a[k][r] / a[k][k];
    }
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::harmonic;

    #[test]
    fn duplicate_weights_rejected() {
        let m = harmonic();
        let err = basis_curves(&m, &[(0, 1), (0, 2), (1, 1)], &[0.5], &default_options());
        assert!(matches!(err, Err(Error::DuplicateWeight(2))));
    }

    #[test]
    fn single_exponent_no_targets() {
        let m = harmonic();
        let d = place_zeros(&m, &[(0, 1)], &[], &DesignOptions::default()).unwrap();
        assert_eq!(d.perturbation.coefficients(), vec![1.0]);
        assert!(d.verification.zeros.is_empty());
    }

    #[test]
    fn two_by_two_design() {
        // d ∝ (J₂(1), −J₁(1)) = (3π, −2π)
        let m = harmonic();
        let d = place_zeros(&m, &[(0, 1), (0, 2)], &[1.0], &DesignOptions::default()).unwrap();
        let c = d.perturbation.coefficients();
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert!((c[1] + 2.0 / 3.0).abs() < 1e-10);
        assert!((d.verification.zeros[0].h_star - 1.0).abs() < 1e-8);
    }

    #[test]
    fn null_vector_of_known_matrix() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0]];
        let z = null_vector(&rows).unwrap();
        for r in &rows {
            let dot: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-14);
        }
    }

    #[test]
    fn target_near_ceiling_rejected() {
        let m = crate::model::harmonic();
        let err = place_zeros(&m, &[(0, 1), (0, 2)], &[-1.0], &DesignOptions::default());
        assert!(matches!(err, Err(Error::InvalidParams(_))));
    }
}
