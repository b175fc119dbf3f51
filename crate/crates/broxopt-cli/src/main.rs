//! Command-line front end: run the solvers on JSON-described problems,
//! query the ball envelope over a grid, check recorded traces against the
//! named convergence guarantees, and reproduce the sweep experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use broxopt::envelope::EnvelopeHandle;
use broxopt::experiments::{experiment_camel, experiment_fig1, find_escape_threshold};
use broxopt::methods::{
    run_abpm, run_bpm, run_bregbpm, run_normalized_gd, run_ppm, run_sbpm, GammaSchedule,
    IterateTrace, OracleChoice, RadiusSchedule, SbpmVariant, StopRule,
};
use broxopt::oracles::OracleBudget;
use broxopt::problems::{PiecewiseLinear1D, Problem, ProblemFile};
use broxopt::theory::{verify_trace, TheoremId, Verdict, VerifyParams};

#[derive(Parser)]
#[command(name = "broxopt", about = "ball-proximal optimization toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver described by a JSON config and write its trace CSV.
    Solve(SolveArgs),
    /// Tabulate envelope values and gradient norms over a grid.
    Envelope(EnvelopeArgs),
    /// Check a recorded trace against a named guarantee.
    Verify(VerifyArgs),
    /// Radius sweep on a two-well piecewise-linear problem.
    Fig1(Fig1Args),
    /// Seeded multi-start experiment on the six-hump camel function.
    Camel(CamelArgs),
    /// Bisect the smallest radius that escapes to the global minimizer.
    Threshold(ThresholdArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// JSON run configuration (see docs/problem_schema.md).
    #[arg(long)]
    config: PathBuf,
    /// Override: constant radius.
    #[arg(long)]
    t: Option<f64>,
    /// Override: starting point, comma-separated.
    #[arg(long)]
    x0: Option<String>,
    /// Override: base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override: number of replicate runs (seeds derived as seed + index).
    #[arg(long)]
    replicates: Option<u32>,
    /// Override: output trace path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Problem JSON.
    #[arg(long)]
    problem: PathBuf,
    /// Envelope radius.
    #[arg(long)]
    t: f64,
    /// Grid bounds, comma-separated: lo,hi (applied per dimension).
    #[arg(long, default_value = "-5,5", allow_hyphen_values = true)]
    range: String,
    /// Grid points per dimension.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Output CSV (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Trace CSV produced by `solve`.
    #[arg(long)]
    trace: PathBuf,
    /// Problem JSON the trace was produced on.
    #[arg(long)]
    problem: PathBuf,
    /// Guarantee to check (e.g. CONV_LIN_II).
    #[arg(long)]
    theorem: String,
    /// Proximal order for the order-fit check.
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Args)]
struct Fig1Args {
    /// Optional problem JSON; defaults to the built-in asymmetric two-well.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Radii to sweep, comma-separated.
    #[arg(long, default_value = "0.5,1,2,3,3.5")]
    t: String,
    /// Starting point.
    #[arg(long, default_value_t = 5.0)]
    x0: f64,
    /// Directory for per-radius trace CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CamelArgs {
    /// Radii to sweep, comma-separated.
    #[arg(long, default_value = "0.2,0.5,1,1.5,2")]
    t: String,
    /// Number of uniformly sampled starts in the radius-4 disk.
    #[arg(long, default_value_t = 1000)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV of per-radius success counts.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Optional problem JSON; defaults to the built-in asymmetric two-well.
    #[arg(long)]
    problem: Option<PathBuf>,
    #[arg(long, default_value_t = 5.0)]
    x0: f64,
    #[arg(long, default_value_t = 0.25)]
    t_lo: f64,
    #[arg(long, default_value_t = 4.0)]
    t_hi: f64,
}

/// JSON run configuration for `solve`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    /// Path to the problem JSON, relative to the config file.
    problem: PathBuf,
    /// One of: bpm, ngd, abpm, ppm, sbpm, bregbpm, gd_envelope.
    method: String,
    #[serde(default)]
    schedule: Option<RadiusSchedule>,
    #[serde(default)]
    gamma_schedule: Option<GammaSchedule>,
    #[serde(default)]
    stop: Option<StopRule>,
    x0: Vec<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    replicates: Option<u32>,
    #[serde(default)]
    out: Option<PathBuf>,
    /// Force the multi-start iterative oracle.
    #[serde(default)]
    blackbox_oracle: bool,
    #[serde(default)]
    budget: Option<OracleBudget>,
    /// "projected" or "adversarial" (stochastic method only).
    #[serde(default)]
    sbpm_variant: Option<String>,
    /// Guarantees to check right after solving.
    #[serde(default)]
    verify: Vec<String>,
    /// Proximal order passed through to the order-fit check.
    #[serde(default)]
    p: Option<u32>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("BROXOPT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Envelope(args) => cmd_envelope(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => cmd_verify(args),
        Command::Fig1(args) => cmd_fig1(args).map(|()| ExitCode::SUCCESS),
        Command::Camel(args) => cmd_camel(args).map(|()| ExitCode::SUCCESS),
        Command::Threshold(args) => cmd_threshold(args).map(|()| ExitCode::SUCCESS),
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("bad number {s:?}: {e}")))
        .collect()
}

fn load_problem(path: &Path) -> Result<(Problem, Option<broxopt::problems::BregmanGenerator>)> {
    let file = ProblemFile::load(path)
        .with_context(|| format!("reading problem spec {}", path.display()))?;
    Ok(file.build()?)
}

fn load_pwl(path: Option<&PathBuf>) -> Result<PiecewiseLinear1D> {
    match path {
        None => Ok(PiecewiseLinear1D::two_well()),
        Some(p) => {
            let (problem, _) = load_problem(p)?;
            problem
                .as_pwl1d()
                .cloned()
                .ok_or_else(|| anyhow!("{} is not a 1-D piecewise-linear problem", p.display()))
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading config {}", args.config.display()))?;
    let mut cfg: SolveConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", args.config.display()))?;

    if let Some(t) = args.t {
        cfg.schedule = Some(RadiusSchedule::Constant { t });
    }
    if let Some(x0) = &args.x0 {
        cfg.x0 = parse_floats(x0)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(r) = args.replicates {
        cfg.replicates = Some(r);
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }

    let config_dir = args.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let relative_to_config = |p: &PathBuf| {
        if p.is_relative() {
            config_dir.join(p)
        } else {
            p.clone()
        }
    };
    let problem_path = relative_to_config(&cfg.problem);
    cfg.out = cfg.out.as_ref().map(&relative_to_config);
    let (problem, bregman) = load_problem(&problem_path)?;
    let stop = cfg.stop.clone().unwrap_or_default();
    let replicates = cfg.replicates.unwrap_or(1).max(1);
    let base_seed = cfg.seed.unwrap_or(0);

    let mut all_passed = true;
    for r in 0..replicates {
        let seed = base_seed + r as u64;
        let trace = run_one(&cfg, &problem, bregman.as_ref(), &stop, seed)?;
        let out_path = cfg.out.clone().map(|p| {
            if replicates == 1 {
                p
            } else {
                p.with_file_name(format!(
                    "{}_r{r}.csv",
                    p.file_stem().and_then(|s| s.to_str()).unwrap_or("trace")
                ))
            }
        });
        if let Some(p) = &out_path {
            trace.save(p)?;
        }
        println!(
            "replicate {r}: {} rows, terminated {:?}, final f = {}",
            trace.rows.len(),
            trace.terminated,
            trace.final_f()
        );
        for name in &cfg.verify {
            let id: TheoremId = name.parse().map_err(|e| anyhow!("{e}"))?;
            let params = VerifyParams { bregman: bregman.as_ref(), p: cfg.p };
            let report = verify_trace(&trace, &problem, id, &params);
            println!("{}", serde_json::to_string(&report)?);
            println!("{}", summarize(&report));
            if !report.passed() {
                all_passed = false;
            }
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run_one(
    cfg: &SolveConfig,
    problem: &Problem,
    bregman: Option<&broxopt::problems::BregmanGenerator>,
    stop: &StopRule,
    seed: u64,
) -> Result<IterateTrace> {
    let schedule = || {
        cfg.schedule
            .clone()
            .ok_or_else(|| anyhow!("method {:?} needs a radius schedule", cfg.method))
    };
    let trace = match cfg.method.as_str() {
        "bpm" => {
            let oracle = if cfg.blackbox_oracle {
                let mut b = cfg.budget.clone().unwrap_or_default();
                b.rng_seed = seed;
                OracleChoice::BlackBox(b)
            } else {
                OracleChoice::Auto
            };
            run_bpm(problem, &oracle, &cfg.x0, &schedule()?, stop)?
        }
        "ngd" => run_normalized_gd(problem, &cfg.x0, &schedule()?, stop)?,
        "abpm" => run_abpm(problem, &cfg.x0, stop)?,
        "ppm" => {
            let gamma = cfg
                .gamma_schedule
                .clone()
                .ok_or_else(|| anyhow!("ppm needs a gamma schedule"))?;
            run_ppm(problem, &cfg.x0, &gamma, stop)?
        }
        "sbpm" => {
            let variant = match cfg.sbpm_variant.as_deref() {
                None | Some("projected") => SbpmVariant::Projected,
                Some("adversarial") => SbpmVariant::AdversarialUnprojected,
                Some(other) => bail!("unknown sbpm variant {other:?}"),
            };
            run_sbpm(problem, &cfg.x0, &schedule()?, stop, variant, seed)?
        }
        "bregbpm" => {
            let h = bregman
                .ok_or_else(|| anyhow!("bregbpm needs a bregman generator in the problem file"))?;
            run_bregbpm(problem, h, &cfg.x0, &schedule()?, stop)?
        }
        "gd_envelope" => {
            let t = match schedule()? {
                RadiusSchedule::Constant { t } => t,
                _ => bail!("gd_envelope needs a constant radius schedule"),
            };
            EnvelopeHandle::new(problem.clone(), t)?.run_gd_on_envelope(&cfg.x0, stop)?
        }
        other => bail!("unknown method {other:?}"),
    };
    Ok(trace)
}

fn cmd_envelope(args: EnvelopeArgs) -> Result<()> {
    let (problem, _) = load_problem(&args.problem)?;
    let dim = problem.dim();
    if dim > 2 {
        bail!("envelope grids support 1-D and 2-D problems only");
    }
    let range = parse_floats(&args.range)?;
    if range.len() != 2 || range[0] >= range[1] || args.steps < 2 {
        bail!("range must be lo,hi with lo < hi and steps >= 2");
    }
    let env = EnvelopeHandle::new(problem, args.t)?;
    let axis: Vec<f64> = (0..args.steps)
        .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (args.steps - 1) as f64)
        .collect();
    let points: Vec<Vec<f64>> = if dim == 1 {
        axis.iter().map(|&x| vec![x]).collect()
    } else {
        axis.iter()
            .flat_map(|&x| axis.iter().map(move |&y| vec![x, y]))
            .collect()
    };

    let mut lines = String::new();
    lines.push_str(if dim == 1 { "x,envelope,grad_norm\n" } else { "x,y,envelope,grad_norm\n" });
    for p in &points {
        let v = env.value(p)?;
        let g = env
            .grad(p)
            .map(|g| format!("{}", g.iter().map(|v| v * v).sum::<f64>().sqrt()))
            .unwrap_or_default();
        let coords: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        lines.push_str(&format!("{},{v},{g}\n", coords.join(",")));
    }
    match &args.out {
        Some(path) => std::fs::write(path, lines)?,
        None => print!("{lines}"),
    }
    Ok(())
}

fn summarize(report: &broxopt::theory::TheoremReport) -> String {
    match &report.verdict {
        Verdict::Pass => format!(
            "{}: pass ({} inequalities, tolerance {:e})",
            report.theorem_id,
            report.per_step_slacks.len(),
            report.tolerance_used
        ),
        Verdict::Fail { first_violation } => {
            let slack = report
                .per_step_slacks
                .iter()
                .find(|(k, _)| k == first_violation)
                .map(|(_, s)| *s)
                .unwrap_or(f64::NAN);
            format!(
                "{}: FAIL at k = {first_violation} (slack {slack:e}, tolerance {:e})",
                report.theorem_id, report.tolerance_used
            )
        }
        Verdict::Skipped { reason } => format!("{}: skipped ({reason})", report.theorem_id),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let trace = IterateTrace::load(&args.trace)
        .with_context(|| format!("reading trace {}", args.trace.display()))?;
    let (problem, bregman) = load_problem(&args.problem)?;
    let id: TheoremId = args.theorem.parse().map_err(|e| anyhow!("{e}"))?;
    let params = VerifyParams { bregman: bregman.as_ref(), p: args.p };
    let report = verify_trace(&trace, &problem, id, &params);
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("{}", summarize(&report));
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_fig1(args: Fig1Args) -> Result<()> {
    let pwl = load_pwl(args.problem.as_ref())?;
    let ts = parse_floats(&args.t)?;
    let summary = experiment_fig1(&pwl, &ts, args.x0, args.out.as_deref())?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    for e in &summary.entries {
        println!(
            "t = {}: final x = {}, f = {}, {}",
            e.t,
            e.final_x,
            e.final_f,
            if e.reached_global { "reached the global minimizer" } else { "trapped" }
        );
    }
    Ok(())
}

fn cmd_camel(args: CamelArgs) -> Result<()> {
    let ts = parse_floats(&args.t)?;
    let budget = OracleBudget::default();
    let summary = experiment_camel(&ts, args.starts, args.seed, &budget, args.out.as_deref())?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    for c in &summary.counts {
        println!("t = {}: {}/{} runs reached the global optimum", c.t, c.successes, c.n_starts);
    }
    Ok(())
}

fn cmd_threshold(args: ThresholdArgs) -> Result<()> {
    let pwl = load_pwl(args.problem.as_ref())?;
    let t_star = find_escape_threshold(&pwl, args.x0, args.t_lo, args.t_hi)?;
    println!("{t_star}");
    Ok(())
}
