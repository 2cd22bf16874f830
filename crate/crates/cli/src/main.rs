use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kaehler_core::report::{
    holomorphic_samples, parse_check_list, run_verification, sample_variance, to_sci_json, tube_sweep, CheckMode,
    ConfigError, ModelKind, RunConfig,
};
use kaehler_core::{LiftParameters, SpaceFormModel, VerificationReport};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "kaehler",
    version,
    about = "Verify Kähler-Einstein lifts to the cotangent bundle of a space form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the residual checks over sampled points and report pass/fail.
    Verify(VerifyArgs),
    /// Walk toward the tube boundary 2ct = A² and report metric eigenvalues.
    SweepTube(SweepArgs),
    /// Sample holomorphic sectional curvature at random points and directions.
    Holcurv(HolcurvArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Flat,
    Sphere,
    Hyperbolic,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Flat => ModelKind::Flat,
            Model::Sphere => ModelKind::Sphere,
            Model::Hyperbolic => ModelKind::Hyperbolic,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Sectional curvature; defaults to 0, 1, or -1 by model.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long = "A", visible_alias = "a", default_value_t = 1.0)]
    a: f64,
    /// Base dimension n (2 to 4).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 25)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl ModelArgs {
    fn config(&self) -> RunConfig {
        let kind = ModelKind::from(self.model);
        let c = self.c.unwrap_or(match kind {
            ModelKind::Flat => 0.0,
            ModelKind::Sphere => 1.0,
            ModelKind::Hyperbolic => -1.0,
        });
        let mut cfg = RunConfig::new(kind, c, self.a, self.dim);
        cfg.samples = self.samples;
        cfg.seed = self.seed;
        cfg
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1e-8)]
    tol_first: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_second: f64,
    /// Use this v instead of -c/A (non-integrable control).
    #[arg(long, allow_negative_numbers = true)]
    v_override: Option<f64>,
    /// Comma-separated subset of checks; defaults to all applicable.
    #[arg(long)]
    checks: Option<String>,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long = "A", visible_alias = "a", default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Largest 2ct/A² visited; values above 1 step past the boundary.
    #[arg(long, default_value_t = 1.1)]
    max_fraction: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct HolcurvArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn emit_json(path: &Option<PathBuf>, body: &str) -> Result<bool, String> {
    match path {
        None => Ok(false),
        Some(p) if p.as_os_str() == "-" => {
            print!("{body}");
            Ok(true)
        }
        Some(p) => fs::write(p, body)
            .map(|_| false)
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"))
}

fn print_report(r: &VerificationReport) {
    let c = &r.config;
    println!(
        "model={} c={} A={} n={} samples={} seed={} v={}",
        c.model,
        c.c,
        c.a,
        c.n,
        c.samples,
        c.seed,
        c.v_override.map_or("integrable".into(), |v| v.to_string())
    );
    for chk in &r.checks {
        let cmp = match chk.mode {
            CheckMode::Standard => "<",
            CheckMode::NegativeControl => ">",
        };
        println!(
            "{:<5} {:<20} max|r|={:<13} {cmp} {:.1e}  ({} pts){}",
            if chk.pass { "PASS" } else { "FAIL" },
            chk.name.as_str(),
            fmt_opt(Some(chk.max_abs_residual).filter(|x| x.is_finite())),
            chk.tolerance,
            chk.points_evaluated,
            chk.detail.as_ref().map_or(String::new(), |d| format!("  {d}"))
        );
    }
    if let Some(e) = &r.simplified_families {
        println!(
            "simplified family readings: Q {:?} (printed {:.2e}, corrected {:.2e}); P {:?} (printed {:.2e}, corrected {:.2e})",
            e.q_matched,
            e.q_printed_residual,
            e.q_corrected_residual,
            e.p_matched,
            e.p_printed_residual,
            e.p_corrected_residual
        );
    }
    println!("{}", if r.passed() { "ALL PASS" } else { "FAILED" });
}

fn verify(args: &VerifyArgs) -> Result<u8, (u8, String)> {
    let mut cfg = args.model.config();
    cfg.tol_first = args.tol_first;
    cfg.tol_second = args.tol_second;
    cfg.v_override = args.v_override;
    if let Some(list) = &args.checks {
        cfg.checks = parse_check_list(list).map_err(config_err)?;
    }
    let report = run_verification(&cfg).map_err(config_err)?;
    let to_stdout = emit_json(&args.json, &report.to_json()).map_err(|e| (EXIT_CONFIG, e))?;
    if !to_stdout {
        print_report(&report);
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn sweep(args: &SweepArgs) -> Result<u8, (u8, String)> {
    let model = SpaceFormModel::new(args.dim, args.c).map_err(|e| config_err(e.into()))?;
    let lift = LiftParameters::integrable(args.a).map_err(|e| config_err(e.into()))?;
    let rows = tube_sweep(&model, &lift, args.steps, args.max_fraction).map_err(config_err)?;
    if !emit_json(&args.json, &to_sci_json(&rows)).map_err(|e| (EXIT_CONFIG, e))? {
        println!(
            "{:>9} {:>13} {:>14} {:>14} {:>14}  pd  tube",
            "2ct/A^2", "t", "min eig G_ij", "max eig H^ij", "min eig G"
        );
        for r in &rows {
            println!(
                "{:>9.4} {:>13.6e} {:>14} {:>14} {:>14}  {:<3} {}",
                r.fraction,
                r.t,
                fmt_opt(r.min_eig_horizontal),
                fmt_opt(r.max_eig_vertical),
                fmt_opt(r.min_eig_metric),
                if r.positive_definite { "yes" } else { "no" },
                if r.in_tube { "in" } else { "out" }
            );
        }
    }
    Ok(0)
}

fn holcurv(args: &HolcurvArgs) -> Result<u8, (u8, String)> {
    let cfg = args.model.config();
    let samples = holomorphic_samples(&cfg).map_err(config_err)?;
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    if !emit_json(&args.json, &to_sci_json(&samples)).map_err(|e| (EXIT_CONFIG, e))? {
        for (i, v) in values.iter().enumerate() {
            println!("{i:>5} {v:>24.16e}");
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "n={} min={min:.6e} max={max:.6e} variance={:.6e}",
            values.len(),
            sample_variance(&values)
        );
    }
    Ok(0)
}

fn config_err(e: ConfigError) -> (u8, String) {
    (EXIT_CONFIG, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::SweepTube(a) => sweep(a),
        Command::Holcurv(a) => holcurv(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
