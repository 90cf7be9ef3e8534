//! JSON scenario documents (schema version `"1"`).
//!
//! ```json
//! {
//!   "schema": "1",
//!   "family": "toy",
//!   "params": { "a": 1.0 },
//!   "perturbation": { "kind": "pde", "g_coeffs": [ { "i": 0, "j": 3, "k": 0, "c": 1.0 },
//!                                                  { "i": 0, "j": 1, "k": 0, "c": -1.0 } ] },
//!   "grid": { "n": 64, "lo_frac": 1e-4, "hi_frac": 0.999 },
//!   "epsilons": [1e-3]
//! }
//! ```
//!
//! Perturbation kinds:
//! * `monomials`: `terms: [{q, p, d}]`, the Melnikov integrand
//!   `Σ d x^{2q} y^{2p−1}` used as is;
//! * `family_gc`: `expr_coeffs: [{i, j, c}]`, the reduced `g_c = Σ c x^i y^j`
//!   run through the family's own reduction;
//! * `pde`: `g_coeffs: [{i, j, k, c}]`, the PDE-level
//!   `g = Σ c u^i u_x^j u_t^k`;
//! * `zero`.
//!
//! Without a perturbation but with `targets`, the perturbation is designed
//! to vanish at the targets using `exponents` (default `(0,1) … (0,ℓ+1)`).
//!
//! Grid energies run log-spaced from `lo_frac·h̄` to `hi_frac·h̄`, with
//! `cap` standing in for `h̄` when the annulus is unbounded.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abelian::{log_grid, MonomialPerturbation, MonomialTerm, PerturbationSpec};
use crate::catalog::{build, Family, FamilyInstance, Forcing};
use crate::designer::{place_zeros, Design, DesignOptions};
use crate::error::{Error, Result};
use crate::model::PlanarModel;
use crate::quadrature::QuadOptions;

pub const SCHEMA_VERSION: &str = "1";
pub const DEFAULT_CAP: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationDoc>,
    #[serde(default)]
    pub grid: GridDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<(u32, u32)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilons: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationDoc {
    Monomials { terms: Vec<MonomialTerm> },
    FamilyGc { expr_coeffs: Vec<Coeff2> },
    Pde { g_coeffs: Vec<Coeff3> },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coeff2 {
    pub i: u32,
    pub j: u32,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coeff3 {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridDoc {
    pub n: usize,
    pub lo_frac: f64,
    pub hi_frac: f64,
    pub cap: Option<f64>,
}

impl Default for GridDoc {
    fn default() -> Self {
        Self { n: 64, lo_frac: 1e-4, hi_frac: 0.999, cap: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub h: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
}

fn default_samples() -> usize {
    256
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let sc: Scenario =
            serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Scenario(m) => Error::Scenario(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "field `schema`: unsupported version \"{}\" (expected \"{SCHEMA_VERSION}\")",
                self.schema
            )));
        }
        self.family_kind()?;
        let g = &self.grid;
        if g.n < 2 {
            return Err(Error::Scenario("field `grid.n`: at least 2 points are needed".into()));
        }
        if !(g.lo_frac > 0.0 && g.lo_frac < g.hi_frac && g.hi_frac < 1.0) {
            return Err(Error::Scenario(
                "fields `grid.lo_frac`, `grid.hi_frac`: need 0 < lo_frac < hi_frac < 1".into(),
            ));
        }
        if let Some(cap) = g.cap {
            if !(cap > 0.0 && cap.is_finite()) {
                return Err(Error::Scenario("field `grid.cap`: must be positive".into()));
            }
        }
        if let Some(p) = &self.profile {
            if p.n_samples < 2 {
                return Err(Error::Scenario("field `profile.n_samples`: at least 2".into()));
            }
        }
        Ok(())
    }

    pub fn family_kind(&self) -> Result<Family> {
        Family::from_key(&self.family).ok_or_else(|| {
            let keys: Vec<&str> = Family::ALL.iter().map(|f| f.key()).collect();
            Error::Scenario(format!(
                "field `family`: unknown family `{}` (expected one of {})",
                self.family,
                keys.join(", ")
            ))
        })
    }

    fn forcing(&self) -> Forcing {
        match &self.perturbation {
            Some(PerturbationDoc::FamilyGc { expr_coeffs }) => Forcing::reduced_polynomial(
                expr_coeffs.iter().map(|c| (c.i, c.j, c.c)).collect(),
            ),
            Some(PerturbationDoc::Pde { g_coeffs }) => {
                let coeffs = g_coeffs.clone();
                Forcing::pde(move |u, ux, ut| {
                    coeffs
                        .iter()
                        .map(|c| c.c * u.powi(c.i as i32) * ux.powi(c.j as i32) * ut.powi(c.k as i32))
                        .sum()
                })
            }
            _ => Forcing::Zero,
        }
    }

    /// The family instance with the scenario's explicit perturbation.
    pub fn instance(&self) -> Result<FamilyInstance> {
        let inst = build(self.family_kind()?, &self.params, self.variant.as_deref(), self.forcing())?;
        Ok(match &self.perturbation {
            Some(PerturbationDoc::Monomials { terms }) => inst.with_perturbation(
                PerturbationSpec::Monomials(MonomialPerturbation::new(terms.clone())?),
            ),
            _ => inst,
        })
    }

    /// Upper end used in place of `h̄` for an unbounded annulus.
    pub fn cap(&self) -> f64 {
        self.grid.cap.unwrap_or_else(|| {
            self.targets.iter().fold(0.0f64, |m, &t| m.max(2.0 * t)).max(DEFAULT_CAP)
        })
    }

    pub fn h_bounds(&self, model: &PlanarModel) -> (f64, f64) {
        let hb = model.h_ceiling();
        let top = if hb.is_finite() { hb } else { self.cap() };
        (self.grid.lo_frac * top, self.grid.hi_frac * top)
    }

    pub fn grid(&self, model: &PlanarModel) -> Vec<f64> {
        let (lo, hi) = self.h_bounds(model);
        log_grid(lo, hi, self.grid.n)
    }

    pub fn exponents(&self) -> Vec<(u32, u32)> {
        self.exponents
            .clone()
            .unwrap_or_else(|| (1..=self.targets.len() as u32 + 1).map(|p| (0, p)).collect())
    }

    pub fn design_options(&self, quad: QuadOptions) -> DesignOptions {
        DesignOptions { quad, grid_points: self.grid.n, cap: Some(self.cap()) }
    }

    /// Places zeros at `targets` on the scenario's model.
    pub fn design(&self, model: &PlanarModel, quad: QuadOptions) -> Result<Design> {
        if self.targets.is_empty() {
            return Err(Error::Scenario("field `targets`: no targets to place".into()));
        }
        place_zeros(model, &self.exponents(), &self.targets, &self.design_options(quad))
    }

    /// The instance whose perturbation drives the dynamics: the explicit
    /// perturbation if one is given, otherwise the designed one.
    pub fn resolved(&self, quad: QuadOptions) -> Result<(FamilyInstance, Option<Design>)> {
        let inst = self.instance()?;
        if self.perturbation.is_none() && !self.targets.is_empty() {
            let design = self.design(&inst.model, quad)?;
            let pert = PerturbationSpec::Monomials(design.perturbation.clone());
            return Ok((inst.with_perturbation(pert), Some(design)));
        }
        Ok((inst, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "schema": "1",
        "family": "toy",
        "params": {"a": 1.0},
        "perturbation": {"kind": "pde", "g_coeffs": [
            {"i": 0, "j": 3, "k": 0, "c": 1.0}, {"i": 0, "j": 1, "k": 0, "c": -1.0}]},
        "grid": {"n": 16},
        "epsilons": [0.001]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let sc = Scenario::parse(TOY).unwrap();
        assert_eq!(sc.grid.n, 16);
        assert_eq!(sc.grid.lo_frac, 1e-4);
        let again = Scenario::parse(&sc.to_json()).unwrap();
        assert_eq!(sc, again);
        let inst = sc.instance().unwrap();
        assert!((inst.pert.eval(0.3, 0.5) - (0.5 - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn unknown_fields_are_located() {
        let bad = TOY.replace("\"grid\"", "\"grdi\"");
        match Scenario::parse(&bad) {
            Err(Error::Scenario(m)) => assert!(m.contains("grdi") && m.contains("line"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_family_is_rejected() {
        let bad = TOY.replace("\"toy\"", "\"tyo\"");
        match Scenario::parse(&bad) {
            Err(e @ Error::Scenario(_)) => assert!(e.is_input_error()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn targets_without_perturbation_design_one() {
        let doc = r#"{"schema": "1", "family": "toy", "targets": [0.5, 1.5]}"#;
        let sc = Scenario::parse(doc).unwrap();
        let (inst, design) = sc.resolved(crate::abelian::default_options()).unwrap();
        let d = design.unwrap();
        assert_eq!(d.perturbation.terms.len(), 3);
        assert!(matches!(inst.pert, PerturbationSpec::Monomials(_)));
        assert_eq!(sc.cap(), 4.0);
    }
}
