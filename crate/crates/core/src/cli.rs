//! The `tws` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a numerical failure, 2 on an input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::abelian::{default_options, melnikov_curve, MelnikovCurve};
use crate::catalog::{Family, FamilyInfo};
use crate::dynamics::{detect_limit_cycles_with, wave_profile, LimitCycleReport, VerifyOptions};
use crate::error::{Error, Result};
use crate::quadrature::QuadOptions;
use crate::scenario::{Scenario, SCHEMA_VERSION};
use crate::zerofind::{find_zeros, ZeroReport};

#[derive(Debug, Parser)]
#[command(name = "tws", version, about = "Melnikov analysis of perturbed traveling waves")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the PDE families with their parameters and validity conditions.
    Catalog {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Sample M(h) on the scenario grid and certify its zeros.
    Melnikov(RunArgs),
    /// Design a perturbation with zeros at the scenario targets.
    Design(RunArgs),
    /// Detect limit cycles of the perturbed flow for each ε.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Perturbation sizes, overriding the scenario's `epsilons`.
        #[arg(long = "epsilon", allow_negative_numbers = true)]
        epsilons: Vec<f64>,
        /// Seeds on the section (default: the scenario grid size).
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Reconstruct the wave profile U(s) on one oval.
    Profile {
        #[command(flatten)]
        run: RunArgs,
        /// Energy level, overriding the scenario's `profile.h`.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario JSON file.
    pub scenario: PathBuf,
    /// Output directory.
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
    /// Also write gnuplot-ready `.dat` files.
    #[arg(long)]
    pub plot_data: bool,
}

/// Parses the arguments, runs the command, and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

/// Runs a parsed command and returns its stdout text.
pub fn run(cli: &Cli) -> Result<String> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParams("--threads must be positive".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut quad = default_options();
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams("--tol must be positive".into()));
        }
        quad.abs_tol = t;
    }
    match &cli.command {
        Command::Catalog { family, json } => cmd_catalog(family.as_deref(), *json),
        Command::Melnikov(args) => cmd_melnikov(args, quad),
        Command::Design(args) => cmd_design(args, quad),
        Command::Verify { run, epsilons, seeds } => cmd_verify(run, epsilons, *seeds, quad),
        Command::Profile { run, h, samples } => cmd_profile(run, *h, *samples),
    }
}

pub fn cmd_catalog(family: Option<&str>, json: bool) -> Result<String> {
    let infos: Vec<FamilyInfo> = match family {
        Some(key) => vec![Family::from_key(key)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family `{key}`")))?
            .info()],
        None => Family::ALL.iter().map(|f| f.info()).collect(),
    };
    if json {
        return Ok(to_json(&infos) + "\n");
    }
    let mut out = String::new();
    for info in &infos {
        let _ = writeln!(out, "{}", info.key);
        let _ = writeln!(out, "  equation:    {}", info.equation);
        let _ = writeln!(out, "  hamiltonian: {}", info.hamiltonian);
        let _ = writeln!(out, "  validity:    {}", info.validity);
        let _ = writeln!(out, "  parameters:");
        for p in &info.params {
            let _ = writeln!(out, "    {:<6} = {:<10} {}", p.name, fmt_num(p.default), p.doc);
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct ZerosDoc<'a> {
    schema: &'static str,
    family: &'a str,
    h_range: (f64, f64),
    zeros: &'a ZeroReport,
}

pub fn cmd_melnikov(args: &RunArgs, quad: QuadOptions) -> Result<String> {
    let sc = Scenario::load(&args.scenario)?;
    let (inst, _) = sc.resolved(quad)?;
    let grid = sc.grid(&inst.model);
    let curve = melnikov_curve(&inst.model, &inst.pert, &grid, &quad)?;
    let zeros = find_zeros(&curve, &inst.model, &inst.pert, &quad)?;
    ensure_dir(&args.out)?;
    write(&args.out.join("melnikov.csv"), &curve_csv(&curve))?;
    let doc = ZerosDoc { schema: SCHEMA_VERSION, family: &sc.family, h_range: curve.h_range, zeros: &zeros };
    write(&args.out.join("zeros.json"), &(to_json(&doc) + "\n"))?;
    if args.plot_data {
        write(&args.out.join("melnikov.dat"), &curve_dat(&curve))?;
    }
    let mut out = format!(
        "{}: {} samples on [{:e}, {:e}], {} simple zero(s)\n",
        sc.family,
        curve.samples.len(),
        curve.h_range.0,
        curve.h_range.1,
        zeros.simple_zeros().len()
    );
    for z in &zeros.zeros {
        let _ = writeln!(out, "  h* = {:e}  M'(h*) ≈ {:e}  simple = {}", z.h_star, z.derivative_estimate, z.simple);
    }
    for w in &zeros.warnings {
        let _ = writeln!(out, "  warning at h = {:e}: {}", w.h, w.message);
    }
    Ok(out)
}

#[derive(Serialize)]
struct DesignDoc<'a> {
    schema: &'static str,
    family: &'a str,
    exponents: Vec<(u32, u32)>,
    coefficients: Vec<f64>,
    targets: &'a [f64],
    condition: f64,
    placement_errors: &'a [f64],
    verification: &'a ZeroReport,
}

pub fn cmd_design(args: &RunArgs, quad: QuadOptions) -> Result<String> {
    let sc = Scenario::load(&args.scenario)?;
    let inst = sc.instance()?;
    let design = sc.design(&inst.model, quad)?;
    ensure_dir(&args.out)?;
    let doc = DesignDoc {
        schema: SCHEMA_VERSION,
        family: &sc.family,
        exponents: design.perturbation.terms.iter().map(|t| (t.q, t.p)).collect(),
        coefficients: design.perturbation.coefficients(),
        targets: &design.targets,
        condition: design.condition,
        placement_errors: &design.placement_errors,
        verification: &design.verification,
    };
    write(&args.out.join("coefficients.json"), &(to_json(&doc) + "\n"))?;
    if args.plot_data && !design.verification_grid.is_empty() {
        let pert = crate::abelian::PerturbationSpec::Monomials(design.perturbation.clone());
        let curve = melnikov_curve(&inst.model, &pert, &design.verification_grid, &quad)?;
        write(&args.out.join("design.dat"), &curve_dat(&curve))?;
    }
    let mut out = format!(
        "{}: {} coefficient(s), condition number {:e}\n",
        sc.family,
        doc.coefficients.len(),
        design.condition
    );
    for (t, (q, p)) in doc.exponents.iter().enumerate().map(|(i, e)| (doc.coefficients[i], e)) {
        let _ = writeln!(out, "  d = {:e}  x^{} y^{}", t, 2 * q, 2 * p - 1);
    }
    for (z, e) in design.verification.simple_zeros().iter().zip(&design.placement_errors) {
        let _ = writeln!(out, "  zero at h = {z:e} (relative placement error {e:e})");
    }
    Ok(out)
}

#[derive(Serialize)]
struct ConvergenceRow {
    epsilon: f64,
    cycles: usize,
    max_relative_gap: f64,
    skipped_seeds: usize,
}

pub fn cmd_verify(
    args: &RunArgs,
    epsilons: &[f64],
    seeds: Option<usize>,
    quad: QuadOptions,
) -> Result<String> {
    let sc = Scenario::load(&args.scenario)?;
    let eps: Vec<f64> = if epsilons.is_empty() { sc.epsilons.clone() } else { epsilons.to_vec() };
    if eps.is_empty() {
        return Err(Error::Scenario("field `epsilons`: no ε given".into()));
    }
    let (inst, _) = sc.resolved(quad)?;
    let opts = VerifyOptions {
        n_seeds: seeds.unwrap_or(sc.grid.n),
        quad,
        cap: sc.cap(),
        h_bounds: Some(sc.h_bounds(&inst.model)),
        ..VerifyOptions::default()
    };
    let reports: Vec<LimitCycleReport> = eps
        .iter()
        .map(|&e| detect_limit_cycles_with(&inst, e, &opts))
        .collect::<Result<_>>()?;

    ensure_dir(&args.out)?;
    let mut table = String::from("epsilon,cycles,max_relative_gap,skipped_seeds\n");
    let mut out = format!("{}: limit cycles of the perturbed flow\n", sc.family);
    let _ = writeln!(out, "  {:>12} {:>7} {:>16} {:>8}", "epsilon", "cycles", "max rel. gap", "skipped");
    for (i, r) in reports.iter().enumerate() {
        write(&args.out.join(format!("cycles_{i}.json")), &(to_json(r) + "\n"))?;
        let row = ConvergenceRow {
            epsilon: r.epsilon,
            cycles: r.fixed_points.len(),
            max_relative_gap: r.matched_zeros.iter().fold(0.0f64, |m, z| m.max(z.relative_gap)),
            skipped_seeds: r.warnings.len(),
        };
        let _ = writeln!(
            table,
            "{:e},{},{:e},{}",
            row.epsilon, row.cycles, row.max_relative_gap, row.skipped_seeds
        );
        let flag = if r.degenerate_continuum { "  (degenerate continuum)" } else { "" };
        let _ = writeln!(
            out,
            "  {:>12e} {:>7} {:>16e} {:>8}{flag}",
            row.epsilon, row.cycles, row.max_relative_gap, row.skipped_seeds
        );
    }
    write(&args.out.join("convergence.csv"), &table)?;
    Ok(out)
}

pub fn cmd_profile(args: &RunArgs, h: Option<f64>, samples: Option<usize>) -> Result<String> {
    let sc = Scenario::load(&args.scenario)?;
    let h = h
        .or(sc.profile.map(|p| p.h))
        .ok_or_else(|| Error::Scenario("field `profile.h`: no energy given".into()))?;
    let n = samples.or(sc.profile.map(|p| p.n_samples)).unwrap_or(256);
    let inst = sc.instance()?;
    let prof = wave_profile(&inst, h, n)?;
    ensure_dir(&args.out)?;
    let mut csv = String::from("s,U\n");
    let mut dat = String::from("# s U\n");
    for p in &prof.samples {
        let _ = writeln!(csv, "{:e},{:e}", p.s, p.u);
        let _ = writeln!(dat, "{:e} {:e}", p.s, p.u);
    }
    write(&args.out.join("profile.csv"), &csv)?;
    write(&args.out.join("profile.json"), &(to_json(&prof) + "\n"))?;
    if args.plot_data {
        write(&args.out.join("profile.dat"), &dat)?;
    }
    let mut out = format!(
        "{}: h = {h:e}, period_s = {:e}, U in [{:e}, {:e}]\n",
        sc.family, prof.period_s, prof.u_min, prof.u_max
    );
    for w in &prof.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    Ok(out)
}

pub fn curve_csv(curve: &MelnikovCurve) -> String {
    let mut s = String::from("h,M,quad_error\n");
    for p in &curve.samples {
        let _ = writeln!(s, "{:e},{:e},{:e}", p.h, p.m, p.quad_error);
    }
    s
}

fn curve_dat(curve: &MelnikovCurve) -> String {
    let mut s = String::from("# h M quad_error\n");
    for p in &curve.samples {
        let _ = writeln!(s, "{:e} {:e} {:e}", p.h, p.m, p.quad_error);
    }
    s
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e6 {
        format!("{v:.0}")
    } else {
        format!("{v:.6}")
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Scenario(format!("{}: {e}", dir.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))
}
