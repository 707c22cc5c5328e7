//! `gardner`: run, scan, stability and table commands for the Gardner
//! collocation solver.
//!
//! Exit status is 0 on success, 1 for usage and configuration errors and 2
//! when the numerical pipeline fails or a stability sweep does not pass.

mod tables;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gardner_core::basis::Derivative;
use gardner_core::export::{
    profile_rows, write_diagnostics_csv, write_profile_csv, write_scan_csv, write_stability_csv,
};
use gardner_core::lambda_opt::scan_with;
use gardner_core::problems::preset_of;
use gardner_core::stability::{verify_stability_with, StabilitySweep, STABILITY_TOL};
use gardner_core::{
    nodal_weights, ExperimentPreset, PhiReflection, PhysicsParams, PresetName, Quadrature,
    RunOptions, ScanSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "gardner",
    version,
    about = "Extended cubic B-spline solver for the Gardner equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one experiment and write profiles, diagnostics and a summary.
    Run(RunArgs),
    /// Search the extension parameter for the smallest final error.
    Scan(ScanArgs),
    /// Sweep the von Neumann amplification factors.
    Stability(StabilityArgs),
    /// Recompute one of the reference tables (1 to 5).
    Table(TableArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PresetArg {
    Pulse,
    Kink,
    Generation,
}

impl From<PresetArg> for PresetName {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Pulse => PresetName::Pulse,
            PresetArg::Kink => PresetName::Kink,
            PresetArg::Generation => PresetName::Generation,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
enum ClosureArg {
    #[default]
    Odd,
    Even,
}

impl From<ClosureArg> for PhiReflection {
    fn from(c: ClosureArg) -> Self {
        match c {
            ClosureArg::Odd => PhiReflection::Odd,
            ClosureArg::Even => PhiReflection::Even,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
enum QuadratureArg {
    #[default]
    Nodal,
    Simpson,
}

impl From<QuadratureArg> for Quadrature {
    fn from(q: QuadratureArg) -> Self {
        match q {
            QuadratureArg::Nodal => Quadrature::NodalSum,
            QuadratureArg::Simpson => Quadrature::Simpson,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Problem selection shared by `run` and `scan`. Explicit flags override the
/// preset.
#[derive(Args, Debug)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    preset: PresetArg,
    /// Number of grid intervals.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// Constant forcing of the perturbed equation.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Reflection of the `v` coefficients at the boundary.
    #[arg(long = "phi-closure", value_enum, default_value_t)]
    phi_closure: ClosureArg,
}

impl ProblemArgs {
    fn build(&self) -> Result<ExperimentPreset> {
        let mut p = preset_of(self.preset.into());
        if let Some(n) = self.n {
            p = p.with_n(n)?;
        }
        if let Some(dt) = self.dt {
            p = p.with_dt(dt);
        }
        if let Some(eps) = self.epsilon {
            p = p.with_epsilon(eps);
        }
        if let Some(t) = self.t_end {
            p = p.with_t_end(t);
        }
        Ok(p)
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Extension parameter of the basis.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Comma-separated snapshot times (default: the preset's report times).
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    #[arg(long = "diagnostics-every", default_value_t = 1)]
    diagnostics_every: usize,
    #[arg(long, value_enum, default_value_t)]
    quadrature: QuadratureArg,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long = "coarse-step", default_value_t = 0.1)]
    coarse_step: f64,
    #[arg(long = "refine-rounds", default_value_t = 5)]
    refine_rounds: usize,
    /// Time at which the error is minimised (default: the final time).
    #[arg(long = "objective-time")]
    objective_time: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[arg(long, value_enum)]
    preset: PresetArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    mu1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu3: Option<f64>,
    /// Lower end of the frozen-nonlinearity range (default: preset).
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Upper end of the frozen-nonlinearity range (default: preset).
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 720)]
    modes: usize,
    #[arg(long = "n-eps", default_value_t = 16)]
    n_eps: usize,
    /// Weight of the frozen nonlinearity.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    weight: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    id: u8,
    #[arg(long, value_enum, default_value_t)]
    quadrature: QuadratureArg,
    #[arg(long = "phi-closure", value_enum, default_value_t)]
    phi_closure: ClosureArg,
    /// Also write the table to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Scan(a) => cmd_scan(&a),
        Command::Stability(a) => cmd_stability(&a),
        Command::Table(a) => tables::cmd_table(
            a.id,
            a.quadrature.into(),
            a.phi_closure.into(),
            a.out.as_deref(),
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<gardner_core::Error>() {
        Some(core) if core.is_numerical() => 2,
        _ => 1,
    }
}

fn create_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    use std::io::Write;
    writeln!(w)?;
    Ok(())
}

fn params_json(p: &PhysicsParams) -> serde_json::Value {
    json!({
        "mu1": p.mu1,
        "mu2": p.mu2,
        "mu3": p.mu3,
        "epsilon": p.epsilon,
        "lambda": p.lambda,
    })
}

fn preset_json(p: &ExperimentPreset) -> serde_json::Value {
    json!({
        "preset": p.name.as_str(),
        "a": p.grid.a(),
        "b": p.grid.b(),
        "n": p.grid.n(),
        "h": p.grid.h(),
        "dt": p.dt,
        "t_end": p.t_end,
        "params": params_json(&p.params),
    })
}

fn closure_name(r: PhiReflection) -> &'static str {
    match r {
        PhiReflection::Odd => "odd",
        PhiReflection::Even => "even",
    }
}

fn cmd_run(args: &RunArgs) -> Result<u8> {
    let started = Instant::now();
    let preset = args.problem.build()?.with_lambda(args.lambda);
    let reflection: PhiReflection = args.problem.phi_closure.into();
    let quadrature: Quadrature = args.quadrature.into();
    let snapshots = args
        .snapshots
        .clone()
        .unwrap_or_else(|| preset.report_times.clone());
    let options = RunOptions {
        reflection,
        quadrature,
        snapshot_times: snapshots.clone(),
        diagnostics_every: args.diagnostics_every,
    };
    create_out_dir(&args.out)?;
    let output = gardner_core::run(&preset, &options)?;

    for state in &output.snapshots {
        let path = args
            .out
            .join(format!("profile_t{}.{}", state.time, args.format.ext()));
        match args.format {
            Format::Csv => write_profile_csv(create_file(&path)?, state, &preset)?,
            Format::Json => write_json(
                &path,
                &json!({ "t": state.time, "rows": profile_rows(state, &preset)? }),
            )?,
        }
    }
    let diag_path = args.out.join(format!("diagnostics.{}", args.format.ext()));
    match args.format {
        Format::Csv => write_diagnostics_csv(create_file(&diag_path)?, &output.diagnostics)?,
        Format::Json => write_json(&diag_path, &output.diagnostics)?,
    }

    let first = output.diagnostics[0];
    let last = *output.final_record();
    // Second derivatives at the ends are not constrained by the closure.
    let weights = nodal_weights(preset.params.lambda, preset.grid.h())?;
    let uxx = output.final_state.u_nodes(&weights, Derivative::Second);
    let summary = json!({
        "command": "run",
        "config": {
            "problem": preset_json(&preset),
            "phi_closure": closure_name(reflection),
            "quadrature": quadrature.to_string(),
            "snapshots": snapshots,
            "diagnostics_every": args.diagnostics_every,
            "format": args.format.ext(),
        },
        "steps": output.steps,
        "initial": { "M": first.m, "E": first.e, "H": first.h_quantity },
        "final": {
            "t": last.time,
            "linf": last.linf,
            "M": last.m,
            "E": last.e,
            "H": last.h_quantity,
            "C_M": last.c_m,
            "C_E": last.c_e,
            "C_H": last.c_h,
            "u_xx_ends": [uxx[0], uxx[uxx.len() - 1]],
        },
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    write_json(&args.out.join("summary.json"), &summary)?;

    println!(
        "{} N={} dt={} lambda={} t={}",
        preset.name,
        preset.grid.n(),
        preset.dt,
        preset.params.lambda,
        last.time
    );
    if let Some(linf) = last.linf {
        println!("  L_inf = {linf:.6e}");
    }
    println!(
        "  M0 = {:.6}  E0 = {:.6}  H0 = {:.6}",
        first.m, first.e, first.h_quantity
    );
    println!(
        "  C(M) = {:.4e}  C(E) = {:.4e}  C(H) = {:.4e}",
        last.c_m, last.c_e, last.c_h
    );
    println!("  output written to {}", args.out.display());
    Ok(0)
}

fn cmd_scan(args: &ScanArgs) -> Result<u8> {
    let started = Instant::now();
    let preset = args.problem.build()?;
    let reflection: PhiReflection = args.problem.phi_closure.into();
    let spec = ScanSpec {
        lo: args.lo,
        hi: args.hi,
        coarse_step: args.coarse_step,
        refine_rounds: args.refine_rounds,
        objective_time: args.objective_time.unwrap_or(preset.t_end),
    };
    create_out_dir(&args.out)?;
    let result = scan_with(&preset, &spec, reflection)?;

    let trace_path = args.out.join(format!("scan_trace.{}", args.format.ext()));
    match args.format {
        Format::Csv => write_scan_csv(create_file(&trace_path)?, &result.trace)?,
        Format::Json => write_json(
            &trace_path,
            &result
                .trace
                .iter()
                .map(|&(lambda, linf)| json!({ "lambda": lambda, "linf": linf }))
                .collect::<Vec<_>>(),
        )?,
    }
    let summary = json!({
        "command": "scan",
        "config": {
            "problem": preset_json(&preset),
            "phi_closure": closure_name(reflection),
            "scan": spec,
        },
        "lambda_star": result.lambda_star,
        "linf_star": result.linf_star,
        "linf_at_zero": result.linf_at_zero,
        "evaluations": result.trace.len(),
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    write_json(&args.out.join("scan_summary.json"), &summary)?;

    println!(
        "{} N={} objective t={}: lambda* = {}  L_inf* = {:.6e}",
        preset.name,
        preset.grid.n(),
        spec.objective_time,
        result.lambda_star,
        result.linf_star
    );
    if let Some(zero) = result.linf_at_zero {
        println!(
            "  L_inf(lambda=0) = {zero:.6e}  ratio = {:.4}",
            result.linf_star / zero
        );
    }
    println!(
        "  {} candidates, trace written to {}",
        result.trace.len(),
        trace_path.display()
    );
    Ok(0)
}

fn cmd_stability(args: &StabilityArgs) -> Result<u8> {
    let mut preset = preset_of(args.preset.into()).with_lambda(args.lambda);
    if let Some(n) = args.n {
        preset = preset.with_n(n)?;
    }
    let dt = args.dt.unwrap_or(preset.dt);
    let mut params = preset.params;
    params.mu1 = args.mu1.unwrap_or(params.mu1);
    params.mu2 = args.mu2.unwrap_or(params.mu2);
    params.mu3 = args.mu3.unwrap_or(params.mu3);
    let eps_range = (
        args.lo.unwrap_or(preset.stability_eps_range.0),
        args.hi.unwrap_or(preset.stability_eps_range.1),
    );
    let sweep = StabilitySweep {
        n_modes: args.modes,
        n_eps: args.n_eps,
        eps_range,
        linearization_weight: args.weight,
    };
    let h = preset.grid.h();
    create_out_dir(&args.out)?;
    let report = verify_stability_with(params, h, dt, &sweep)?;

    let path = args.out.join(format!("stability.{}", args.format.ext()));
    match args.format {
        Format::Csv => write_stability_csv(create_file(&path)?, &report.samples)?,
        Format::Json => write_json(&path, &report.samples)?,
    }
    let summary = json!({
        "command": "stability",
        "config": {
            "params": params_json(&params),
            "h": h,
            "dt": dt,
            "sweep": sweep,
        },
        "max_abs_rho1": report.max_abs_rho1,
        "argmax_rho1": { "phi": report.argmax_rho1.0, "eps_local": report.argmax_rho1.1 },
        "max_abs_rho2": report.max_abs_rho2,
        "argmax_rho2": { "phi": report.argmax_rho2.0, "eps_local": report.argmax_rho2.1 },
        "tolerance": STABILITY_TOL,
        "passed": report.passed,
    });
    write_json(&args.out.join("stability_summary.json"), &summary)?;

    println!(
        "max |rho1| = {:.17}  (phi = {:.6}, eps = {:.6})",
        report.max_abs_rho1, report.argmax_rho1.0, report.argmax_rho1.1
    );
    println!(
        "max |rho2| = {:.17}  (phi = {:.6}, eps = {:.6})",
        report.max_abs_rho2, report.argmax_rho2.0, report.argmax_rho2.1
    );
    println!(
        "{} against 1 + {STABILITY_TOL:e} over {} modes x {} eps values",
        if report.passed { "PASS" } else { "FAIL" },
        sweep.n_modes,
        sweep.n_eps
    );
    Ok(if report.passed { 0 } else { 2 })
}
