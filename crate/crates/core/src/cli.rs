//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 runtime
//! error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::{
    concentration_test, curves_table, format_g, run_experiment, run_sweep, write_table, Checkpoints, ExperimentConfig,
    SweepConfig, Table,
};
use crate::policies::{PolicySpec, SetMode};
use crate::problem::{catalog, config::load_problem, ParameterSpace, StructuredBandit, Theta};
use crate::theory::{self, BoundInputs, EpsilonOutcome, ThetaClass};

#[derive(Parser, Debug)]
#[command(name = "sbandit", version, about = "Structured bandit simulations, bounds and classifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run replications of one policy at one parameter.
    Run(RunArgs),
    /// Terminal regret of several policies across a range of parameters.
    Sweep(SweepArgs),
    /// Label grid points as easy, ambiguous or hard.
    Classify(ClassifyArgs),
    /// Evaluate a regret upper bound.
    Bounds(BoundsArgs),
    /// Print omega(x), or omega2(x) with --two.
    Omega(OmegaArgs),
    /// Regenerate one of the experiment presets.
    Reproduce(ReproduceArgs),
    /// Empirical check of the Gaussian deviation bound.
    ConcentrationTest(ConcentrationArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Catalog name or path to a problem file.
    #[arg(long, default_value = "example-a")]
    problem: String,
    #[arg(long, default_value_t = 50_000)]
    horizon: u64,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// How interval confidence sets are computed.
    #[arg(long, default_value = "exact")]
    confidence: SetMode,
    /// Output table path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Parameter value, or a label for finite spaces.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value = "ucbs")]
    algo: String,
    /// Exploration parameter (policy default when omitted).
    #[arg(long)]
    alpha: Option<f64>,
    /// Record every this many steps instead of a geometric schedule.
    #[arg(long)]
    every: Option<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    theta_max: f64,
    #[arg(long, default_value_t = 41)]
    theta_steps: usize,
    /// Comma-separated policies, each `name` or `name:alpha`.
    #[arg(long, default_value = "ucbs,ucb")]
    algos: String,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value = "example-a")]
    problem: String,
    /// Number of grid points to label.
    #[arg(long, default_value_t = 21)]
    grid: usize,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    theorem: u8,
    #[arg(long, default_value = "example-a")]
    problem: String,
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value_t = 50_000)]
    horizon: u64,
    /// Exploration parameter of the logarithmic bound.
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    /// Margin for the finite bound (computed from the problem when omitted).
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug)]
struct OmegaArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long)]
    two: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    FigASweep,
    FigAHorizon,
    FigBSweep,
    FigCSweep,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::FigASweep => "fig-a-sweep",
            Preset::FigAHorizon => "fig-a-horizon",
            Preset::FigBSweep => "fig-b-sweep",
            Preset::FigCSweep => "fig-c-sweep",
        }
    }
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    preset: Preset,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output path (defaults to `<preset>.dat`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConcentrationArgs {
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 8)]
    n: u64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

/// Parses `argv` (including the program name) and runs the command,
/// printing to stdout and stderr.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(problem: &str) -> Result<StructuredBandit> {
    let path = Path::new(problem);
    if problem.ends_with(".toml") || path.is_file() {
        load_problem(path)
    } else {
        catalog::make_builtin(problem)
    }
}

fn parse_theta(bandit: &StructuredBandit, text: &str) -> std::result::Result<Theta, Failure> {
    if let Some(i) = bandit.space().label_index(text) {
        return Ok(Theta::Label(i));
    }
    text.parse::<f64>().map(Theta::Real).map_err(|_| Failure::Usage(format!("cannot read theta `{text}`")))
}

fn parse_policy(text: &str, alpha: Option<f64>, mode: SetMode) -> std::result::Result<PolicySpec, Failure> {
    let spec = PolicySpec::parse(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let spec = match alpha {
        Some(a) => spec.with_alpha(a).map_err(|e| Failure::Usage(e.to_string()))?,
        None => spec,
    };
    Ok(spec.with_mode(mode))
}

fn emit(table: &Table, path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => {
            write_table(table, p)?;
            writeln!(out, "wrote {} rows to {}", table.rows.len(), p.display())?;
        }
        None => write!(out, "{}", table.render())?,
    }
    Ok(())
}

fn meta(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn execute(cmd: Command, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Run(a) => {
            let spec = parse_policy(&a.algo, a.alpha, a.common.confidence)?;
            let bandit = load(&a.common.problem)?;
            let theta = parse_theta(&bandit, &a.theta)?;
            let checkpoints = match a.every {
                Some(k) => Checkpoints::Every(k),
                None => Checkpoints::default(),
            };
            let cfg = ExperimentConfig::new(bandit, spec, theta.clone(), a.common.horizon)
                .reps(a.common.reps)
                .seed(a.common.seed)
                .workers(a.common.workers)
                .checkpoints(checkpoints);
            let curve = run_experiment(&cfg)?;
            if let Some(p) = &a.common.out {
                let table = curves_table(
                    std::slice::from_ref(&curve),
                    meta(&[
                        ("problem", a.common.problem.clone()),
                        ("theta", theta.to_string()),
                        ("horizon", a.common.horizon.to_string()),
                        ("reps", a.common.reps.to_string()),
                        ("seed", a.common.seed.to_string()),
                    ]),
                )?;
                emit(&table, Some(p), out)?;
            }
            writeln!(out, "mean regret {}", format_g(curve.terminal_mean()))?;
            writeln!(out, "std error {}", format_g(curve.terminal_std_error()))?;
        }
        Command::Sweep(a) => {
            let policies = a
                .algos
                .split(',')
                .map(|p| parse_policy(p, None, a.common.confidence))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let bandit = load(&a.common.problem)?;
            let cfg = SweepConfig {
                bandit: Arc::new(bandit),
                policies,
                theta_min: a.theta_min,
                theta_max: a.theta_max,
                theta_steps: a.theta_steps,
                horizon: a.common.horizon,
                reps: a.common.reps,
                seed: a.common.seed,
                workers: a.common.workers,
            };
            let result = run_sweep(&cfg)?;
            let table = result.to_table(meta(&[
                ("problem", a.common.problem.clone()),
                ("horizon", a.common.horizon.to_string()),
                ("reps", a.common.reps.to_string()),
                ("seed", a.common.seed.to_string()),
            ]));
            emit(&table, a.common.out.as_deref(), out)?;
        }
        Command::Classify(a) => {
            let bandit = load(&a.problem)?;
            let points: Vec<Theta> = match bandit.space() {
                ParameterSpace::Interval { .. } => {
                    bandit.space().grid_with(a.grid)?.into_iter().map(Theta::Real).collect()
                }
                other => other.enumerate()?,
            };
            for th in points {
                let line = match theory::classify_parameter(&bandit, &th) {
                    Ok(ThetaClass::Easy { epsilon }) => format!("easy epsilon={}", format_g(epsilon)),
                    Ok(ThetaClass::Ambiguous) => "ambiguous".to_string(),
                    Ok(ThetaClass::Hard { witness }) => format!("hard witness={witness}"),
                    Err(Error::ZeroGap) => "degenerate".to_string(),
                    Err(e) => return Err(e.into()),
                };
                let label = match &th {
                    Theta::Real(x) => format_g(*x),
                    other => other.to_string(),
                };
                writeln!(out, "{label} {line}")?;
            }
        }
        Command::Bounds(a) => {
            let bandit = load(&a.problem)?;
            let theta = parse_theta(&bandit, &a.theta)?;
            let gaps = bandit.gap_profile(&theta)?;
            let value = if a.theorem == 1 {
                theory::theorem1_bound(&BoundInputs::new(gaps, a.horizon, a.alpha, bandit.sigma2()))?
            } else {
                let Some(delta_min) = gaps.delta_min else {
                    writeln!(out, "0")?;
                    return Ok(());
                };
                let epsilon = match a.epsilon {
                    Some(e) => e,
                    None => match theory::finite_regret_epsilon(&bandit, &theta, crate::problem::DEFAULT_RESOLUTION)? {
                        EpsilonOutcome::Found(e) => e,
                        _ => {
                            return Err(Failure::Runtime(Error::Unsupported(
                                "no finite-regret margin exists at this parameter".into(),
                            )))
                        }
                    },
                };
                let w = theory::omega_star(epsilon, delta_min, 4.0, bandit.arms(), bandit.sigma2())?;
                theory::theorem2_bound(&gaps, w, bandit.sigma2(), bandit.arms())
            };
            writeln!(out, "{}", format_g(value))?;
        }
        Command::Omega(a) => {
            let v = if a.two { theory::omega2(a.x) } else { theory::omega(a.x) }
                .map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out, "{v}")?;
        }
        Command::Reproduce(a) => {
            let path = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.dat", a.preset.name())));
            let table = reproduce(a.preset, a.reps, a.seed, a.workers)?;
            emit(&table, Some(&path), out)?;
        }
        Command::ConcentrationTest(a) => {
            let r = concentration_test(a.epsilon, a.n, a.sigma2, a.trials, a.seed, a.workers)?;
            writeln!(out, "frequency {}", format_g(r.frequency))?;
            writeln!(out, "bound {}", format_g(r.bound))?;
            writeln!(out, "ceiling {}", format_g(r.ceiling))?;
            writeln!(out, "{}", if r.holds() { "ok" } else { "violated" })?;
        }
    }
    Ok(())
}

/// Experiment presets: sweeps over `[-0.2, 0.2]` in 41 steps at horizon
/// 50 000 comparing UCB-S (alpha 4) with UCB (alpha 2), and the regret
/// curve of both at `theta = 0.04` up to 100 000.
fn reproduce(preset: Preset, reps: usize, seed: u64, workers: usize) -> Result<Table> {
    let policies = vec![PolicySpec::parse("ucbs:4")?, PolicySpec::parse("ucb:2")?];
    let problem = match preset {
        Preset::FigASweep | Preset::FigAHorizon => "example-a",
        Preset::FigBSweep => "example-b",
        Preset::FigCSweep => "example-c",
    };
    let bandit = catalog::make_builtin(problem)?;
    let header = |extra: Vec<(&str, String)>| {
        let mut m = vec![
            ("preset", preset.name().to_string()),
            ("problem", problem.to_string()),
            ("reps", reps.to_string()),
            ("seed", seed.to_string()),
        ];
        m.extend(extra);
        meta(&m)
    };
    match preset {
        Preset::FigAHorizon => {
            let horizon = 100_000;
            let curves = policies
                .iter()
                .map(|&p| {
                    run_experiment(
                        &ExperimentConfig::new(bandit.clone(), p, 0.04, horizon)
                            .reps(reps)
                            .seed(seed)
                            .workers(workers)
                            .checkpoints(Checkpoints::Every(5000)),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            curves_table(&curves, header(vec![("theta", "0.04".into()), ("horizon", horizon.to_string())]))
        }
        _ => {
            let horizon = 50_000;
            let cfg = SweepConfig {
                bandit: Arc::new(bandit),
                policies,
                theta_min: -0.2,
                theta_max: 0.2,
                theta_steps: 41,
                horizon,
                reps,
                seed,
                workers,
            };
            Ok(run_sweep(&cfg)?.to_table(header(vec![("horizon", horizon.to_string())])))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sbandit").chain(args.iter().copied());
        let code = dispatch_to(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn omega_command() {
        assert_eq!(run(&["omega", "--x", "10"]), (0, "36\n".into(), String::new()));
        assert_eq!(run(&["omega", "--x", "20", "--two"]).1, "23\n");
        assert_eq!(run(&["omega", "--x", "-1"]).0, 1);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["frobnicate"]).0, 1);
        assert_eq!(run(&["omega", "--y", "3"]).0, 1);
        assert_eq!(run(&["run", "--theta", "0", "--algo", "thompson"]).0, 1);
        assert_eq!(run(&["bounds", "--theorem", "3", "--theta", "0.1"]).0, 1);
    }

    #[test]
    fn runtime_errors() {
        assert_eq!(run(&["run", "--problem", "nope", "--theta", "0", "--horizon", "10", "--reps", "1"]).0, 2);
        assert_eq!(run(&["run", "--theta", "3", "--horizon", "10", "--reps", "1"]).0, 2);
        assert_eq!(run(&["run", "--problem", "example-f", "--theta", "1", "--algo", "phased", "--horizon", "10"]).0, 2);
    }

    #[test]
    fn help_lists_flags() {
        let (code, text, _) = run(&["sweep", "--help"]);
        assert_eq!(code, 0);
        for flag in ["--theta-min", "--theta-max", "--theta-steps", "--algos", "--workers", "--reps", "--seed", "--out"] {
            assert!(text.contains(flag), "{flag}");
        }
    }

    #[test]
    fn zero_gap_run_prints_zero() {
        let (code, text, _) = run(&[
            "run", "--problem", "example-a", "--theta", "0", "--algo", "ucbs", "--horizon", "1000", "--reps", "5", "--seed",
            "7",
        ]);
        assert_eq!(code, 0);
        assert!(text.starts_with("mean regret 0\n"), "{text}");
    }

    #[test]
    fn bounds_and_classify() {
        let (code, text, _) = run(&["bounds", "--theorem", "1", "--theta", "0.25", "--horizon", "1000", "--alpha", "3"]);
        assert_eq!(code, 0);
        assert_eq!(text, "336.072\n");
        let (code, text, _) = run(&["bounds", "--theorem", "2", "--problem", "example-b", "--theta", "-0.3"]);
        assert_eq!(code, 2, "{text}");
        let (code, text, _) = run(&["classify", "--problem", "ambiguous-a", "--grid", "5"]);
        assert_eq!(code, 0);
        assert_eq!(text, "-1 ambiguous\n-0.5 ambiguous\n0 ambiguous\n0.5 easy epsilon=1\n1 easy epsilon=1\n");
    }
}
