use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use tws_persist::abelian::{
    abelian_j_with, default_grid, default_options, j_asymptotic_leading, k_closed_form, log_grid,
    melnikov_at, melnikov_curve, monomial_j, PerturbationSpec,
};
use tws_persist::catalog::{build, make_toy, presets, Family, FamilyInstance, Forcing, ToyParams};
use tws_persist::designer::{place_zeros, DesignOptions};
use tws_persist::dynamics::{detect_limit_cycles_with, wave_profile, VerifyOptions};
use tws_persist::model::{harmonic, EquilibriumKind, PlanarModel, ScalarField1D};
use tws_persist::quadrature::{tanh_sinh, QuadOptions};
use tws_persist::zerofind::find_zeros;
use tws_persist::Result;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn tight() -> QuadOptions {
    QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13 }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn toy(a: f64, forcing: Forcing) -> Result<FamilyInstance> {
    make_toy(&ToyParams { a, b: 0.0, d: 0.0, c: 0.0 }, forcing)
}

/// `K(p, n) = ∫₀¹ (z(1−z))^{p−½} (z−½)^{2n} dz` by tanh–sinh on the raw
/// integrand.
fn a1() -> Outcome {
    let mut worst = 0.0f64;
    for p in 1..=5u32 {
        for n in 0..=5u32 {
            let (r, ok) = tanh_sinh(0.0, 1.0, &QuadOptions::absolute(1e-17), 12, |z| {
                (z * (1.0 - z)).powf(p as f64 - 0.5) * (z - 0.5).powi(2 * n as i32)
            });
            if !ok {
                return Ok((false, format!("quadrature did not converge at p={p} n={n}")));
            }
            worst = worst.max((r.value - k_closed_form(p, n)?).abs());
        }
    }
    Ok((worst < 1e-10, format!("max |numeric − closed| = {worst:.2e}")))
}

fn a2() -> Outcome {
    let m = harmonic();
    let mut worst = 0.0f64;
    for h in [0.1, 1.0, 10.0] {
        let j01 = abelian_j_with(&m, &ScalarField1D::constant(1.0), 1, h, &tight())?;
        let j21 = abelian_j_with(&m, &ScalarField1D::power(0.0, 2), 1, h, &tight())?;
        worst = worst.max(((j01 - 2.0 * PI * h) / (2.0 * PI * h)).abs());
        worst = worst.max(((j21 - PI * h * h) / (PI * h * h)).abs());
    }
    Ok((worst < 1e-9, format!("max relative error = {worst:.2e}")))
}

fn a3() -> Outcome {
    let opts = default_options();
    let one = ScalarField1D::constant(1.0);

    let m = harmonic();
    let mut short_circuit = true;
    for p in [2u32, 4, 6] {
        for h in [0.1, 1.0] {
            short_circuit &= abelian_j_with(&m, &one, p, h, &opts)? == 0.0;
        }
    }

    let sg = build(Family::SineGordon, &BTreeMap::new(), None, Forcing::Zero)?;
    let kg = build(Family::KleinGordon, &BTreeMap::new(), None, Forcing::Zero)?;
    let even_models: Vec<(&str, PlanarModel)> =
        vec![("harmonic", harmonic()), ("sine_gordon", sg.model), ("klein_gordon", kg.model)];
    let mut odd_max = 0.0f64;
    for (_, model) in &even_models {
        for h in default_grid(model, 8, 4.0) {
            for q in [1, 3] {
                for p in [1u32, 3] {
                    let d = ScalarField1D::power(0.0, q);
                    odd_max = odd_max.max(abelian_j_with(model, &d, p, h, &opts)?.abs());
                }
            }
        }
    }

    let mut models: Vec<PlanarModel> = presets()?.into_iter().map(|i| i.model).collect();
    models.push(harmonic());
    let mut positive = true;
    let mut checked = 0usize;
    for model in &models {
        for h in default_grid(model, 16, 4.0) {
            for q in 0..=2u32 {
                for p in 1..=3u32 {
                    positive &= monomial_j(model, q, p, h, &opts)?.value > 0.0;
                    checked += 1;
                }
            }
        }
    }
    Ok((
        short_circuit && odd_max < 1e-10 && positive,
        format!(
            "even-p short-circuit {short_circuit}, max odd integral {odd_max:.2e}, \
             {checked} monomial integrals positive: {positive}"
        ),
    ))
}

fn a4() -> Outcome {
    let rh = build(
        Family::RosenauHyman,
        &params(&[("a", 1.0), ("n", 2.0), ("c", 1.0), ("k", 0.0)]),
        None,
        Forcing::Zero,
    )?;
    let opts = QuadOptions::relative(1e-10);
    let mut worst_exp = 0.0f64;
    let mut worst_coef = 0.0f64;
    for (name, model) in [("harmonic", harmonic()), ("rosenau_hyman", rh.model)] {
        let hb = model.h_ceiling();
        let h = if hb.is_finite() { 1e-6 * hb } else { 1e-6 };
        let sep = model.separable().expect("separable catalog model");
        let xc = model.center_x();
        for (p, n) in [(1u32, 0u32), (1, 1), (2, 0)] {
            let d = ScalarField1D::power(xc, 2 * n as i32);
            let j1 = abelian_j_with(&model, &d, 2 * p - 1, h, &opts)?;
            let j2 = abelian_j_with(&model, &d, 2 * p - 1, 2.0 * h, &opts)?;
            let fitted = (j2 / j1).ln() / 2f64.ln();
            let (coef, e) = j_asymptotic_leading(sep, 1.0, n, p);
            let exp_err = (fitted - e as f64).abs() / e as f64;
            let coef_err = (j1 / h.powi(e as i32) - coef).abs() / coef.abs();
            if exp_err > 0.01 || coef_err > 0.01 {
                eprintln!("  {name} (p={p}, n={n}): exponent {fitted} vs {e}, coefficient error {coef_err:.2e}");
            }
            worst_exp = worst_exp.max(exp_err);
            worst_coef = worst_coef.max(coef_err);
        }
    }
    Ok((
        worst_exp < 0.01 && worst_coef < 0.01,
        format!("max exponent error {worst_exp:.2e}, max coefficient error {worst_coef:.2e}"),
    ))
}

fn sin_power(n: u32) -> f64 {
    (1..=n).fold(2.0 * PI, |acc, i| acc * (2 * i - 1) as f64 / (2 * i) as f64)
}

/// Clockwise toy Melnikov function for `g_c(y) = Σ g[j] y^j`:
/// `2 C h Σ_i g_{2i+1} 2^i I_{2i+2} h^i` with `I_{2n} = ∫₀^{2π} sin^{2n}`.
fn toy_closed_form(c_const: f64, g: &[f64], h: f64) -> f64 {
    let sum: f64 = (0..)
        .take_while(|i| 2 * i + 1 < g.len())
        .map(|i| g[2 * i + 1] * 2f64.powi(i as i32) * sin_power(i as u32 + 1) * h.powi(i as i32))
        .sum();
    2.0 * c_const * h * sum
}

fn a5() -> Outcome {
    let inst = toy(1.0, Forcing::reduced_polynomial(vec![(0, 3, 1.0), (0, 1, -1.0)]))?;
    let c_const = inst.symbols["C"];
    let g = [0.0, -1.0, 0.0, 1.0];
    let grid = log_grid(0.05, 3.0, 16);
    let curve = melnikov_curve(&inst.model, &inst.pert, &grid, &tight())?;
    let dev = curve
        .samples
        .iter()
        .map(|s| (s.m - toy_closed_form(c_const, &g, s.h)).abs())
        .fold(0.0, f64::max);
    let zeros = find_zeros(&curve, &inst.model, &inst.pert, &tight())?.simple_zeros();
    let zero_ok = zeros.len() == 1 && (zeros[0] - 2.0 / 3.0).abs() < 1e-6;
    Ok((
        dev < 1e-8 && zero_ok,
        format!("max |M − closed form| = {dev:.2e}, zeros {zeros:?}"),
    ))
}

fn design_case(
    model: &PlanarModel,
    exponents: &[(u32, u32)],
    targets: &[f64],
) -> Result<(bool, String)> {
    let mut counts = Vec::new();
    let mut worst = 0.0f64;
    for n in [64, 128] {
        let opts = DesignOptions { grid_points: n, ..DesignOptions::default() };
        let d = place_zeros(model, exponents, targets, &opts)?;
        let zeros = d.verification.simple_zeros();
        counts.push(zeros.len());
        for t in targets {
            let nearest = zeros.iter().map(|z| (z - t).abs() / t).fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
    }
    let ok = counts.iter().all(|&c| c == targets.len()) && worst < 1e-3;
    Ok((ok, format!("counts {counts:?}, max relative error {worst:.2e}")))
}

fn a6() -> Outcome {
    let (ok_h, msg_h) = design_case(&harmonic(), &[(0, 1), (0, 2), (0, 3), (0, 4)], &[0.5, 1.0, 1.5])?;
    let t = toy(2.0, Forcing::Zero)?;
    let (ok_t, msg_t) = design_case(&t.model, &[(0, 1), (0, 2), (0, 3)], &[0.4, 1.2])?;
    Ok((ok_h && ok_t, format!("harmonic ℓ=3: {msg_h}; toy ℓ=2: {msg_t}")))
}

fn persistence(inst: &FamilyInstance, ell: usize, label: &str) -> Result<(bool, String)> {
    let opts = VerifyOptions {
        n_seeds: 64,
        h_bounds: Some((1e-2, 3.9)),
        ..VerifyOptions::default()
    };
    let mut gaps = Vec::new();
    let mut count_ok = true;
    for eps in [1e-2, 1e-3, 1e-4] {
        let r = detect_limit_cycles_with(inst, eps, &opts)?;
        let gap = r.matched_zeros.iter().map(|z| z.relative_gap).fold(0.0, f64::max);
        if eps == 1e-3 {
            count_ok = r.fixed_points.len() == ell && r.matched_zeros.len() == ell && gap < 5e-2;
        }
        gaps.push(gap);
    }
    let shrink = gaps[0] / gaps[2];
    Ok((
        count_ok && shrink >= 5.0,
        format!(
            "{label}: gaps {:.1e}/{:.1e}/{:.1e} at ε=1e-2/1e-3/1e-4, shrink {shrink:.0}×",
            gaps[0], gaps[1], gaps[2]
        ),
    ))
}

fn a7() -> Outcome {
    let single = toy(1.0, Forcing::pde(|_, ux, _| ux * ux * ux - ux))?;
    let (ok1, msg1) = persistence(&single, 1, "toy ℓ=1")?;
    let base = toy(1.0, Forcing::Zero)?;
    let design = place_zeros(
        &base.model,
        &[(0, 1), (0, 2), (0, 3), (0, 4)],
        &[0.5, 1.0, 1.5],
        &DesignOptions::default(),
    )?;
    let designed = base.with_perturbation(PerturbationSpec::Monomials(design.perturbation));
    let (ok3, msg3) = persistence(&designed, 3, "designed ℓ=3")?;
    Ok((ok1 && ok3, format!("{msg1}; {msg3}")))
}

fn a8() -> Outcome {
    let mut failures = Vec::new();
    for inst in presets()? {
        let m = &inst.model;
        if let Err(e) = m.check_consistency(1e-6) {
            failures.push(format!("{}: {e}", inst.family));
        }
        if m.classify_equilibrium(m.center_x())? != EquilibriumKind::Center {
            failures.push(format!("{}: center not classified as Center", inst.family));
        }
    }
    let constructed = Family::ALL.len();

    let sg = build(Family::SineGordon, &BTreeMap::new(), None, Forcing::Zero)?;
    let cc = sg.symbols["C"];
    let sg_err = (sg.model.h_ceiling() - 2.0 * cc).abs() / (2.0 * cc);
    if sg_err > 4.0 * f64::EPSILON {
        failures.push(format!("sine_gordon h̄ relative error {sg_err:.1e}"));
    }

    let g = |u: f64, ux: f64, ut: f64| ux - 0.5 * u * ux + 0.25 * ut * ut * ux + ux * ux * ux;
    let kdv = build(
        Family::GenKdv,
        &params(&[("a", 0.0), ("b", -6.0), ("p", 1.0), ("c", 1.0)]),
        None,
        Forcing::pde(g),
    )?;
    let c = 1.0;
    let bq = build(
        Family::Boussinesq,
        &params(&[("a", -1.0), ("d", 0.0), ("e", -3.0), ("p", 1.0), ("c", c)]),
        None,
        Forcing::reduced(move |x, y| g(x, y, -c * y)),
    )?;
    let hb = kdv.model.h_ceiling();
    let grid = log_grid(1e-3 * hb, 0.99 * hb, 16);
    let mut match_err = 0.0f64;
    for &h in &grid {
        let a = melnikov_at(&kdv.model, &kdv.pert, h, &tight())?.value;
        let b = melnikov_at(&bq.model, &bq.pert, h, &tight())?.value;
        match_err = match_err.max((a - b).abs());
    }
    if match_err > 1e-10 {
        failures.push(format!("gen_kdv vs boussinesq curves differ by {match_err:.2e}"));
    }
    Ok((
        failures.is_empty(),
        format!(
            "{constructed} presets, sine_gordon h̄ error {sg_err:.1e}, gen_kdv ≡ boussinesq to {match_err:.1e}{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    ))
}

fn a9() -> Outcome {
    let h0 = toy(1.0, Forcing::Zero)?;
    let prof = wave_profile(&h0, 0.5, 257)?;
    let cos_err = prof.samples.iter().map(|s| (s.u - s.s.cos()).abs()).fold(0.0, f64::max);
    let period_err = (prof.period_s - 2.0 * PI).abs();

    let ost = build(Family::Ostrovsky, &BTreeMap::new(), None, Forcing::Zero)?;
    let mut ext_err = 0.0f64;
    for frac in [0.1, 0.5, 0.9] {
        let h = frac * ost.model.h_ceiling();
        let p = wave_profile(&ost, h, 64)?;
        let (lo, hi) = ost.model.turning_points(h)?;
        ext_err = ext_err.max((p.u_min - lo).abs()).max((p.u_max - hi).abs());
    }
    Ok((
        cos_err < 1e-8 && period_err < 1e-8 && ext_err < 1e-8,
        format!(
            "harmonic sup |U − cos| = {cos_err:.2e}, period error {period_err:.1e}, \
             ostrovsky extrema error {ext_err:.2e}"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("A1", "K(p,n) closed form vs quadrature", a1),
        ("A2", "harmonic exactness", a2),
        ("A3", "parity suite", a3),
        ("A4", "small-h asymptotics", a4),
        ("A5", "toy closed form and zero", a5),
        ("A6", "zero placement", a6),
        ("A7", "persistence of limit cycles", a7),
        ("A8", "catalog integrity", a8),
        ("A9", "profile correctness", a9),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{id} {} {title}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
