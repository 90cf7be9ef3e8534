//! Traveling-wave reductions of perturbed PDE families.
//!
//! Each constructor substitutes `u = U(x − ct)`, integrates the resulting
//! ODE where the family allows it (introducing the constant `k`), and
//! writes it as a planar system `x = U, y = U'`. The returned
//! [`FamilyInstance`] carries the [`PlanarModel`] and the Melnikov
//! integrand `g_c / s_c` built from the `ε = 0` slice of the perturbation.
//!
//! Perturbations are passed as a [`Forcing`]: either the PDE-level `g(u,
//! u_x, u_t)`, evaluated along the wave as `g(x, y, −c y)` and run through
//! the family's own algebra, or a reduced `g_c(x, y)` that is used as the
//! family's `g_c` verbatim.

mod camassa_holm;
mod kdv;
mod rosenau_hyman;
mod second_order;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use camassa_holm::{make_camassa_holm_class, ChVariant};
pub use kdv::{make_boussinesq, make_gen_kdv, BoussinesqParams, GenKdvParams};
pub use rosenau_hyman::{make_rosenau_hyman, RosenauHymanParams};
pub use second_order::{
    make_klein_gordon, make_ostrovsky, make_sine_gordon, make_toy, sin_power_integral,
    toy_reference_melnikov, KleinGordonParams, ToyParams,
};

use crate::abelian::PerturbationSpec;
use crate::error::{Error, Result};
use crate::model::{Field2, PlanarModel};

pub type PdeForcing = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// The `ε = 0` slice of a perturbation.
#[derive(Clone, Default)]
pub enum Forcing {
    #[default]
    Zero,
    /// `g(u, u_x, u_t)` of the PDE.
    Pde(PdeForcing),
    /// The family's reduced `g_c(x, y)`.
    Reduced(Field2),
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Pde(_) => write!(f, "Pde(..)"),
            Forcing::Reduced(_) => write!(f, "Reduced(..)"),
        }
    }
}

impl Forcing {
    pub fn pde<F>(g: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Forcing::Pde(Arc::new(g))
    }

    pub fn reduced<F>(g: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Forcing::Reduced(Arc::new(g))
    }

    /// `Σ c_ij x^i y^j` as a reduced forcing.
    pub fn reduced_polynomial(coeffs: Vec<(u32, u32, f64)>) -> Self {
        Forcing::reduced(move |x, y| {
            coeffs
                .iter()
                .map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32))
                .sum()
        })
    }

    /// Builds the Melnikov integrand. `from_pde` maps `(x, y, g(x, y, −cy))`
    /// to the integrand, `from_reduced` maps `(x, y, g_c(x, y))`.
    pub(crate) fn integrand<P, R>(&self, c: f64, from_pde: P, from_reduced: R) -> PerturbationSpec
    where
        P: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        R: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        match self {
            Forcing::Zero => PerturbationSpec::Zero,
            Forcing::Pde(g) => {
                let g = g.clone();
                PerturbationSpec::integrand(move |x, y| from_pde(x, y, g(x, y, -c * y)))
            }
            Forcing::Reduced(gc) => {
                let gc = gc.clone();
                PerturbationSpec::integrand(move |x, y| from_reduced(x, y, gc(x, y)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Toy,
    Ostrovsky,
    KleinGordon,
    SineGordon,
    GenKdv,
    RosenauHyman,
    CamassaHolmClass,
    Boussinesq,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Toy,
        Family::Ostrovsky,
        Family::KleinGordon,
        Family::SineGordon,
        Family::GenKdv,
        Family::RosenauHyman,
        Family::CamassaHolmClass,
        Family::Boussinesq,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Family::Toy => "toy",
            Family::Ostrovsky => "ostrovsky",
            Family::KleinGordon => "klein_gordon",
            Family::SineGordon => "sine_gordon",
            Family::GenKdv => "gen_kdv",
            Family::RosenauHyman => "rosenau_hyman",
            Family::CamassaHolmClass => "camassa_holm_class",
            Family::Boussinesq => "boussinesq",
        }
    }

    pub fn from_key(key: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.key() == key)
    }

    pub fn info(self) -> FamilyInfo {
        let p = |name: &'static str, default: f64, doc: &'static str| ParamInfo { name, default, doc };
        match self {
            Family::Toy => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u + a u_xx + b u_xt + d u_tt + ε g(u_x, u_t) = 0",
                params: vec![
                    p("a", 1.0, "coefficient of u_xx"),
                    p("b", 0.0, "coefficient of u_xt"),
                    p("d", 0.0, "coefficient of u_tt"),
                    p("c", 0.0, "wave speed"),
                ],
                validity: "C² = a − b c + d c² > 0",
                hamiltonian: "H = x²/(2C²) + y²/2, s = 1, h̄ = ∞",
            },
            Family::Ostrovsky => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "(u_t + u u_x)_x − u + ε g(u, u_x, u_t) = 0",
                params: vec![p("c", 1.0, "wave speed")],
                validity: "c > 0; domain x < c",
                hamiltonian: "H = (x−c)² y²/2 + c x²/2 − x³/3, s = (x−c)⁻², h̄ = c³/6",
            },
            Family::KleinGordon => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u_tt − u_xx + λ u^p + ε g(u, u_x, u_t) = 0",
                params: vec![
                    p("lambda", 1.0, "λ > 0"),
                    p("p", 1.0, "odd exponent"),
                    p("c", 2.0, "wave speed"),
                ],
                validity: "λ > 0, p odd, c² > 1",
                hamiltonian: "H = C x^(p+1)/(p+1) + y²/2, C = λ/(c²−1), h̄ = ∞",
            },
            Family::SineGordon => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u_tt − u_xx + sin u + ε g(u, u_x, u_t) = 0",
                params: vec![p("c", std::f64::consts::SQRT_2, "wave speed")],
                validity: "c > 1",
                hamiltonian: "H = C(1 − cos x) + y²/2, C = 1/(c²−1), h̄ = 2C",
            },
            Family::GenKdv => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u_t + a u_x + b u u_x + d u u_t + p u_xxx + q u_xxt + r u_xtt + s u_ttt + ε (g)_x = 0",
                params: vec![
                    p("a", 0.0, "coefficient of u_x"),
                    p("b", -6.0, "coefficient of u u_x"),
                    p("d", 0.0, "coefficient of u u_t"),
                    p("p", 1.0, "coefficient of u_xxx"),
                    p("q", 0.0, "coefficient of u_xxt"),
                    p("r", 0.0, "coefficient of u_xtt"),
                    p("s", 0.0, "coefficient of u_ttt"),
                    p("c", 1.0, "wave speed"),
                    p("k", 0.0, "integration constant"),
                ],
                validity: "C = p − qc + rc² − sc³ ≠ 0; α + βx + γx² = 0 has two distinct real roots",
                hamiltonian: "H = −αx − βx²/2 − γx³/3 + y²/2, α = k/C, β = (c−a)/C, γ = (dc−b)/(2C)",
            },
            Family::RosenauHyman => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u_t + a (uⁿ)_x + (uⁿ)_xxx + ε (g)_x = 0",
                params: vec![
                    p("a", 1.0, "coefficient of (uⁿ)_x, nonzero"),
                    p("n", 2.0, "integer exponent ≥ 2"),
                    p("c", 1.0, "wave speed"),
                    p("k", 0.0, "integration constant"),
                ],
                validity: "n ≥ 2, a ≠ 0, an equilibrium x* > 0 with x*^(n−2)(a(2n−1)x*ⁿ − c n x* − k(n−1)) > 0",
                hamiltonian: "H = (n/2)x^(2n−2) y² − (k/n)xⁿ − c x^(n+1)/(n+1) + a x^(2n)/(2n), s = x^(2−2n)/n",
            },
            Family::CamassaHolmClass => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "u_t + A'(u) u_x + b u_x u_xx + d u u_xxx + p u_xxx + q u_xxt + r u_xtt + s u_ttt + ε (g)_x = 0",
                params: vec![
                    p("kappa", 1.0, "Camassa–Holm κ (variant camassa_holm)"),
                    p("c", 3.0, "wave speed"),
                    p("k", 0.0, "integration constant"),
                    p("b", -2.0, "coefficient of u_x u_xx (variant polynomial)"),
                    p("d", 1.0, "coefficient of u u_xxx (variant polynomial)"),
                    p("p", 0.0, "coefficient of u_xxx (variant polynomial)"),
                    p("q", -1.0, "coefficient of u_xxt (variant polynomial)"),
                    p("r", 0.0, "coefficient of u_xtt (variant polynomial)"),
                    p("s", 0.0, "coefficient of u_ttt (variant polynomial)"),
                    p("A1", 2.0, "A(u) = A1 u + A2 u² + A3 u³ + A4 u⁴ (variant polynomial)"),
                    p("A2", 1.5, "see A1"),
                    p("A3", 0.0, "see A1"),
                    p("A4", 0.0, "see A1"),
                ],
                validity: "C + d x > 0 at the center; variants camassa_holm, degasperis_procesi, constantin_lannes, polynomial",
                hamiltonian: "H = y²/(2 s_c) + ∫ (A_c − k)/((C + d w) s_c) dw, s_c = (C + dx)^(−2β/d), β = (b−d)/2",
            },
            Family::Boussinesq => FamilyInfo {
                family: self,
                key: self.key(),
                equation: "a u_xx + b u_xt + d u_tt + 2e(u u_xx + u_x²) + p u_xxxx + q u_xxxt + r u_xxtt + s u_xttt + f u_tttt + ε (g_c)'' = 0",
                params: vec![
                    p("a", -1.0, "coefficient of u_xx"),
                    p("b", 0.0, "coefficient of u_xt"),
                    p("d", 1.0, "coefficient of u_tt"),
                    p("e", 0.5, "nonlinear coefficient"),
                    p("p", -1.0, "coefficient of u_xxxx"),
                    p("q", 0.0, "coefficient of u_xxxt"),
                    p("r", 0.0, "coefficient of u_xxtt"),
                    p("s", 0.0, "coefficient of u_xttt"),
                    p("f", 0.0, "coefficient of u_tttt"),
                    p("c", 2.0, "wave speed"),
                    p("k", 0.0, "integration constant"),
                ],
                validity: "D = p − qc + rc² − sc³ + fc⁴ ≠ 0, e ≠ 0, C x + e x² = k has two distinct real roots",
                hamiltonian: "as gen_kdv with α = k/D, β = −C/D, γ = −e/D, C = a − bc + dc²",
            },
        }
    }

    pub fn defaults(self) -> BTreeMap<String, f64> {
        self.info().params.iter().map(|p| (p.name.to_string(), p.default)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: f64,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub family: Family,
    pub key: &'static str,
    pub equation: &'static str,
    pub params: Vec<ParamInfo>,
    pub validity: &'static str,
    pub hamiltonian: &'static str,
}

/// A reduced family member: the planar model plus its Melnikov integrand.
#[derive(Clone)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    /// Derived constants of the reduction (`C`, `D`, `alpha`, `beta`, …).
    pub symbols: BTreeMap<String, f64>,
    pub model: PlanarModel,
    pub pert: PerturbationSpec,
    pub c: f64,
}

impl fmt::Debug for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyInstance")
            .field("family", &self.family)
            .field("params", &self.params)
            .field("symbols", &self.symbols)
            .field("model", &self.model)
            .field("pert", &self.pert)
            .finish()
    }
}

impl FamilyInstance {
    /// Same model with a different Melnikov integrand.
    pub fn with_perturbation(mut self, pert: PerturbationSpec) -> Self {
        self.pert = pert;
        self
    }
}

/// Reads a parameter map, filling defaults and rejecting unknown names.
pub(crate) struct ParamReader<'a> {
    family: Family,
    given: &'a BTreeMap<String, f64>,
    defaults: BTreeMap<String, f64>,
}

impl<'a> ParamReader<'a> {
    pub(crate) fn new(family: Family, given: &'a BTreeMap<String, f64>) -> Result<Self> {
        let defaults = family.defaults();
        for (k, v) in given {
            if !defaults.contains_key(k) {
                return Err(Error::InvalidParams(format!(
                    "unknown parameter `{k}` for family {family}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("parameter `{k}` is not finite")));
            }
        }
        Ok(Self { family, given, defaults })
    }

    pub(crate) fn get(&self, name: &str) -> f64 {
        self.given
            .get(name)
            .or_else(|| self.defaults.get(name))
            .copied()
            .unwrap_or_else(|| panic!("{} has no parameter {name}", self.family))
    }

    pub(crate) fn integer(&self, name: &str) -> Result<i64> {
        let v = self.get(name);
        if v.fract() != 0.0 {
            return Err(Error::InvalidParams(format!("parameter `{name}` = {v} must be an integer")));
        }
        Ok(v as i64)
    }

    pub(crate) fn resolved(&self) -> BTreeMap<String, f64> {
        let mut all = self.defaults.clone();
        for (k, v) in self.given {
            all.insert(k.clone(), *v);
        }
        all
    }
}

/// Builds any family from a parameter map (missing entries take the preset
/// values listed by [`Family::info`]).
pub fn build(
    family: Family,
    params: &BTreeMap<String, f64>,
    variant: Option<&str>,
    forcing: Forcing,
) -> Result<FamilyInstance> {
    let r = ParamReader::new(family, params)?;
    let mut inst = match family {
        Family::Toy => make_toy(
            &ToyParams { a: r.get("a"), b: r.get("b"), d: r.get("d"), c: r.get("c") },
            forcing,
        ),
        Family::Ostrovsky => make_ostrovsky(r.get("c"), forcing),
        Family::KleinGordon => {
            let p = r.integer("p")?;
            if p < 1 {
                return Err(Error::InvalidParams("p must be a positive odd integer".into()));
            }
            make_klein_gordon(
                &KleinGordonParams { lambda: r.get("lambda"), p: p as u32, c: r.get("c") },
                forcing,
            )
        }
        Family::SineGordon => make_sine_gordon(r.get("c"), forcing),
        Family::GenKdv => make_gen_kdv(
            &GenKdvParams {
                a: r.get("a"),
                b: r.get("b"),
                d: r.get("d"),
                p: r.get("p"),
                q: r.get("q"),
                r: r.get("r"),
                s: r.get("s"),
                c: r.get("c"),
                k: r.get("k"),
            },
            forcing,
        ),
        Family::RosenauHyman => {
            let n = r.integer("n")?;
            if n < 2 {
                return Err(Error::InvalidParams("n must be an integer ≥ 2".into()));
            }
            make_rosenau_hyman(
                &RosenauHymanParams { a: r.get("a"), n: n as u32, c: r.get("c"), k: r.get("k") },
                forcing,
            )
        }
        Family::CamassaHolmClass => {
            let v = match variant.unwrap_or("camassa_holm") {
                "camassa_holm" => ChVariant::CamassaHolm { kappa: r.get("kappa") },
                "degasperis_procesi" => ChVariant::DegasperisProcesi,
                "constantin_lannes" => ChVariant::ConstantinLannes,
                "polynomial" => ChVariant::polynomial(
                    [r.get("A1"), r.get("A2"), r.get("A3"), r.get("A4")],
                    [r.get("b"), r.get("d"), r.get("p"), r.get("q"), r.get("r"), r.get("s")],
                ),
                other => {
                    return Err(Error::InvalidParams(format!(
                        "unknown camassa_holm_class variant `{other}`"
                    )))
                }
            };
            make_camassa_holm_class(&v, r.get("c"), r.get("k"), forcing)
        }
        Family::Boussinesq => make_boussinesq(
            &BoussinesqParams {
                a: r.get("a"),
                b: r.get("b"),
                d: r.get("d"),
                e: r.get("e"),
                p: r.get("p"),
                q: r.get("q"),
                r: r.get("r"),
                s: r.get("s"),
                f: r.get("f"),
                c: r.get("c"),
                k: r.get("k"),
            },
            forcing,
        ),
    }?;
    if family != Family::CamassaHolmClass || variant.unwrap_or("camassa_holm") == "polynomial" {
        inst.params = r.resolved();
    } else {
        let mut shown = r.resolved();
        shown.retain(|k, _| matches!(k.as_str(), "kappa" | "c" | "k"));
        inst.params = shown;
    }
    Ok(inst)
}

/// Every family at its preset parameters, with zero forcing.
pub fn presets() -> Result<Vec<FamilyInstance>> {
    Family::ALL
        .iter()
        .map(|&f| build(f, &BTreeMap::new(), None, Forcing::Zero))
        .collect()
}

pub(crate) fn symbols(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EquilibriumKind;

    #[test]
    fn every_preset_has_a_center() {
        for inst in presets().unwrap() {
            let m = &inst.model;
            assert_eq!(
                m.classify_equilibrium(m.center_x()).unwrap_or(EquilibriumKind::Saddle),
                EquilibriumKind::Center,
                "{}",
                inst.family
            );
            m.check_consistency(1e-6).unwrap();
        }
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let mut p = BTreeMap::new();
        p.insert("zeta".to_string(), 1.0);
        assert!(matches!(
            build(Family::Toy, &p, None, Forcing::Zero),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn keys_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_key(f.key()), Some(f));
        }
    }
}
