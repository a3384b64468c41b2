//! Command-line front end.
//!
//! Every command builds a [`Table`] and renders it either as CSV (a `#`
//! comment echoing the full configuration, a header row, LF endings) or as
//! an aligned text table. Numbers are printed with 12 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    asymptotics_report, comparison_table, curve_effectiveness, tradeoff_family_a,
    tradeoff_family_b, Curve, Effectiveness, SineVariant, TradeoffAngles, ASYMPTOTIC_LIMITS,
    DEFAULT_LAMBDA,
};
use crate::analytic::{evaluate, expected_time, Energy};
use crate::error::Error;
use crate::geometry::{Instance, Steps, Strategy};
use crate::optimize::{
    grid_refine_with_value, optimal_1rb, optimal_1rb2, optimal_inf, residuals_1rb2, residuals_inf,
    OptimumSource,
};
use crate::simulate::{
    agent_trajectory, exact_enumeration, monte_carlo, worst_case_time, TrajectoryMode,
    MAX_ENUMERATION_STEPS,
};

#[derive(Debug, Parser)]
#[command(
    name = "disk-rendezvous",
    version,
    about = "Symmetric rendezvous strategies in a disk"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; defaults to csv when --out is given, pretty otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the table to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Read every angle argument (alpha, beta, gamma) in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected time, competitive ratio and energy of one strategy.
    Eval {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Optimal angles of a strategy class.
    Optimize {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value = "unbounded")]
        class: StrategyClass,
        /// Also run the brute-force grid search and report its optimum.
        #[arg(long)]
        grid: bool,
    },
    /// Monte Carlo estimate next to the closed form.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = all cores). Does not change the output.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Largest rho at which each family stays within 4.25.
    Effectiveness,
    /// Scaled optimum of the unbounded strategy at large rho.
    Asymptotics {
        /// Probe values (each at least 1e3).
        #[arg(long = "rho-probe", num_args = 1.., default_values_t = [1e3, 1e4, 1e5])]
        rho_probe: Vec<f64>,
    },
    /// Time/energy tradeoff families.
    Tradeoff {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        epsilon: f64,
        /// Split parameter of the sine family.
        #[arg(long, conflicts_with = "equal")]
        lambda: Option<f64>,
        /// Sine family with equal sines.
        #[arg(long)]
        equal: bool,
        /// Instance for the exact evaluation (default rho = 1e4).
        #[command(flatten)]
        instance: OptionalInstanceArgs,
    },
    /// Competitive ratio curves of the compared strategies on a rho grid.
    Curves {
        #[arg(long = "rho-min")]
        rho_min: f64,
        #[arg(long = "rho-max")]
        rho_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Point list of one agent's path over failed rounds.
    Trajectory {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value = "spiral")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Step count (default inf).
        #[arg(long, default_value = "inf")]
        k: Steps,
        /// Defaults to the optimal unbounded angle.
        #[arg(long)]
        beta: Option<f64>,
        /// Defaults to the optimal unbounded angle.
        #[arg(long)]
        gamma: Option<f64>,
        /// Unbounded paths stop once the disk radius drops below this.
        #[arg(long = "min-radius", default_value_t = 1e-9)]
        min_radius: f64,
    },
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct InstanceArgs {
    /// Reference distance with the agents at distance 2.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Half arc distance on the unit disk.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = false, multiple = false)]
pub struct OptionalInstanceArgs {
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct StrategyArgs {
    /// Number of random rounds, or `inf`.
    #[arg(long, default_value = "inf")]
    pub k: Steps,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyClass {
    OneRb,
    OneStep,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Spiral,
    Random,
}

/// Failure of one CLI invocation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numeric(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_sig12(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Energy> for Cell {
    fn from(e: Energy) -> Self {
        match e {
            Energy::Finite(v) => Cell::Num(v),
            Energy::Infinite => Cell::Text("inf".into()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(config: String, header: &[&'static str]) -> Self {
        Table {
            comments: vec![config],
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_pretty(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "{c}");
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(s, "{}", line(self.header.clone()));
        for row in &rendered {
            let _ = writeln!(s, "{}", line(row.iter().map(String::as_str).collect()));
        }
        s
    }
}

/// `%.12g`: 12 significant digits, trailing zeros removed, exponent form
/// outside `[1e-5, 1e12)`.
pub fn format_sig12(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

struct Ctx {
    degrees: bool,
}

impl Ctx {
    fn angle(&self, v: f64) -> f64 {
        if self.degrees {
            v.to_radians()
        } else {
            v
        }
    }

    fn instance(&self, rho: Option<f64>, alpha: Option<f64>) -> Result<Instance, CliError> {
        match (rho, alpha) {
            (Some(r), None) => Ok(Instance::from_rho(r)?),
            (None, Some(a)) => Ok(Instance::from_alpha(self.angle(a))?),
            _ => Err(CliError::Usage(
                "exactly one of --rho and --alpha is required".into(),
            )),
        }
    }

    fn strategy(&self, s: &StrategyArgs) -> Strategy {
        Strategy::new(s.k, self.angle(s.beta), self.angle(s.gamma))
    }
}

fn instance_echo(instance: &Instance) -> String {
    format!(
        "rho={} alpha={}",
        format_sig12(instance.rho()),
        format_sig12(instance.alpha())
    )
}

fn strategy_echo(s: &Strategy) -> String {
    format!(
        "k={} beta={} gamma={}",
        s.steps,
        format_sig12(s.beta),
        format_sig12(s.gamma)
    )
}

/// Builds the output table of one command.
pub fn build_table(cli: &Cli) -> Result<Table, CliError> {
    let ctx = Ctx {
        degrees: cli.degrees,
    };
    match &cli.command {
        Command::Eval { instance, strategy } => {
            let inst = ctx.instance(instance.rho, instance.alpha)?;
            let strat = ctx.strategy(strategy);
            let r = evaluate(&inst, &strat)?;
            let mut t = Table::new(
                format!("eval {} {}", instance_echo(&inst), strategy_echo(&strat)),
                &[
                    "rho",
                    "alpha",
                    "k",
                    "beta",
                    "gamma",
                    "expected_time_alpha",
                    "competitive_ratio",
                    "energy_alpha",
                    "energy_rho",
                ],
            );
            t.push(vec![
                inst.rho().into(),
                inst.alpha().into(),
                strat.steps.to_string().into(),
                strat.beta.into(),
                strat.gamma.into(),
                r.expected_time_alpha.into(),
                r.competitive_ratio.into(),
                r.energy_alpha.into(),
                r.energy_rho().into(),
            ]);
            Ok(t)
        }
        Command::Optimize {
            instance,
            class,
            grid,
        } => {
            let inst = ctx.instance(instance.rho, instance.alpha)?;
            let class_name = class
                .to_possible_value()
                .expect("value")
                .get_name()
                .to_string();
            let (strategy, source, residuals) = match class {
                StrategyClass::OneRb => (optimal_1rb(&inst), "closed_form", None),
                StrategyClass::OneStep => {
                    let s = optimal_1rb2(&inst);
                    let res = (s.steps == Steps::Finite(1) && s.gamma > 0.0)
                        .then(|| residuals_1rb2(&inst, &s));
                    (s, "closed_form", res)
                }
                StrategyClass::Unbounded => {
                    let opt = optimal_inf(&inst)?;
                    let source = match opt.source {
                        OptimumSource::ClosedForm => "closed_form",
                        OptimumSource::GridFallback => "grid_fallback",
                    };
                    (
                        opt.strategy,
                        source,
                        Some(residuals_inf(&inst, &opt.strategy)),
                    )
                }
            };
            let mut t = Table::new(
                format!(
                    "optimize {} class={class_name} grid={grid}",
                    instance_echo(&inst)
                ),
                &[
                    "method",
                    "k",
                    "beta",
                    "gamma",
                    "competitive_ratio",
                    "energy_rho",
                    "residual_1",
                    "residual_2",
                ],
            );
            let row = |method: &str,
                       s: &Strategy,
                       res: Option<(f64, f64)>|
             -> Result<Vec<Cell>, CliError> {
                let r = evaluate(&inst, s)?;
                let (r1, r2) = match res {
                    Some((a, b)) => (Cell::Num(a), Cell::Num(b)),
                    None => (Cell::from("-"), Cell::from("-")),
                };
                Ok(vec![
                    method.into(),
                    s.steps.to_string().into(),
                    s.beta.into(),
                    s.gamma.into(),
                    r.competitive_ratio.into(),
                    r.energy_rho().into(),
                    r1,
                    r2,
                ])
            };
            t.push(row(source, &strategy, residuals)?);
            if *grid {
                let (g, _) = grid_refine_with_value(&inst, strategy.steps);
                t.push(row("grid", &g, None)?);
            }
            Ok(t)
        }
        Command::Simulate {
            instance,
            strategy,
            trials,
            seed,
            threads,
        } => {
            let inst = ctx.instance(instance.rho, instance.alpha)?;
            let strat = ctx.strategy(strategy);
            let analytic = expected_time(&inst, &strat)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*threads)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
            let summary = pool.install(|| monte_carlo(&inst, &strat, *trials, *seed))?;
            let exact = match strat.steps {
                Steps::Finite(k) if k <= MAX_ENUMERATION_STEPS => {
                    Cell::Num(exact_enumeration(&inst, &strat)?)
                }
                _ => Cell::from("-"),
            };
            let verdict = if summary.agrees_with(analytic, 3.0) {
                "PASS"
            } else {
                "FAIL"
            };
            let mut t = Table::new(
                format!(
                    "simulate {} {} trials={trials} seed={seed}",
                    instance_echo(&inst),
                    strategy_echo(&strat)
                ),
                &[
                    "trials",
                    "seed",
                    "mean_time",
                    "std_error",
                    "analytic",
                    "exact_enumeration",
                    "truncated",
                    "within_3_sigma",
                ],
            );
            t.push(vec![
                summary.trials.into(),
                summary.seed.into(),
                summary.mean_time.into(),
                summary.std_error.into(),
                analytic.into(),
                exact,
                summary.truncated.into(),
                verdict.into(),
            ]);
            Ok(t)
        }
        Command::Effectiveness => {
            let mut t = Table::new(
                "effectiveness threshold=4.25".into(),
                &["family", "effectiveness", "status"],
            );
            for curve in Curve::ALL {
                let e = curve_effectiveness(curve)?;
                let (value, status) = match e {
                    Effectiveness::Zero => (Cell::Num(0.0), "zero"),
                    Effectiveness::At(r) => (Cell::Num(r), "crossing"),
                    Effectiveness::Beyond => (Cell::from(e.to_string()), "beyond_range"),
                };
                t.push(vec![curve.name().into(), value, status.into()]);
            }
            Ok(t)
        }
        Command::Asymptotics { rho_probe } => {
            let probes: Vec<String> = rho_probe.iter().map(|&r| format_sig12(r)).collect();
            let mut t = Table::new(
                format!("asymptotics rho_probe={}", probes.join(";")),
                &[
                    "rho",
                    "beta_slope",
                    "gamma_slope",
                    "cr_gap_scaled",
                    "energy_scaled",
                ],
            );
            for &rho in rho_probe {
                let r = asymptotics_report(rho)?;
                t.push(vec![
                    r.rho.into(),
                    r.beta_slope.into(),
                    r.gamma_slope.into(),
                    r.cr_gap_scaled.into(),
                    r.energy_scaled.into(),
                ]);
            }
            let l = ASYMPTOTIC_LIMITS;
            t.push(vec![
                "limit".into(),
                l.beta_slope.into(),
                l.gamma_slope.into(),
                l.cr_gap_scaled.into(),
                l.energy_scaled.into(),
            ]);
            Ok(t)
        }
        Command::Tradeoff {
            family,
            epsilon,
            lambda,
            equal,
            instance,
        } => {
            let inst = match (instance.rho, instance.alpha) {
                (None, None) => Instance::from_rho(1e4)?,
                (r, a) => ctx.instance(r, a)?,
            };
            let (point, variant) = match family {
                Family::A => {
                    if lambda.is_some() || *equal {
                        return Err(CliError::Usage(
                            "--lambda and --equal apply to family b only".into(),
                        ));
                    }
                    (tradeoff_family_a(*epsilon)?, "linear".to_string())
                }
                Family::B if *equal => (
                    tradeoff_family_b(*epsilon, SineVariant::Equal)?,
                    "equal".to_string(),
                ),
                Family::B => {
                    let l = lambda.unwrap_or(DEFAULT_LAMBDA);
                    (
                        tradeoff_family_b(*epsilon, SineVariant::Lambda(l))?,
                        format!("lambda={}", format_sig12(l)),
                    )
                }
            };
            let ev = point.evaluate_at(&inst)?;
            let scaling = match point.scaling {
                crate::analysis::Scaling::EnergyOverRhoSquared => "energy_over_rho_squared",
                crate::analysis::Scaling::EnergyOverRho => "energy_over_rho",
            };
            let (p1, p2) = match point.angles {
                TradeoffAngles::Linear { k, m } => (k, m),
                TradeoffAngles::Sine { b, c } => (b, c),
            };
            let family_name = family
                .to_possible_value()
                .expect("value")
                .get_name()
                .to_string();
            let mut t = Table::new(
                format!(
                    "tradeoff family={family_name} epsilon={} {variant} {}",
                    format_sig12(*epsilon),
                    instance_echo(&inst)
                ),
                &[
                    "epsilon",
                    "param_1",
                    "param_2",
                    "scaling",
                    "limit_competitive_ratio",
                    "limit_scaled_energy",
                    "limit_cr_gap_scaled",
                    "rho",
                    "competitive_ratio",
                    "scaled_energy",
                    "cr_gap_scaled",
                ],
            );
            t.push(vec![
                (*epsilon).into(),
                p1.into(),
                p2.into(),
                scaling.into(),
                point.limit_competitive_ratio.into(),
                point.limit_scaled_energy.into(),
                point.limit_cr_gap_scaled.map_or(Cell::from("-"), Cell::Num),
                ev.rho.into(),
                ev.competitive_ratio.into(),
                ev.scaled_energy.into(),
                ev.cr_gap_scaled.map_or(Cell::from("-"), Cell::Num),
            ]);
            Ok(t)
        }
        Command::Curves {
            rho_min,
            rho_max,
            points,
        } => {
            if *points < 2 {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
            if !(rho_max > rho_min) {
                return Err(CliError::Usage("--rho-max must exceed --rho-min".into()));
            }
            let step = (rho_max - rho_min) / (*points - 1) as f64;
            let rhos: Vec<f64> = (0..*points).map(|i| rho_min + step * i as f64).collect();
            let rows = comparison_table(&rhos)?;
            let mut t = Table::new(
                format!(
                    "curves rho_min={} rho_max={} points={points}",
                    format_sig12(*rho_min),
                    format_sig12(*rho_max)
                ),
                &[
                    "rho",
                    "naive",
                    "one_rb",
                    "one_step",
                    "greedy_bisector",
                    "unbounded",
                ],
            );
            for r in rows {
                t.push(vec![
                    r.rho.into(),
                    r.naive.into(),
                    r.one_rb.into(),
                    r.one_step.into(),
                    r.greedy_bisector.into(),
                    r.unbounded.into(),
                ]);
            }
            Ok(t)
        }
        Command::Trajectory {
            instance,
            mode,
            seed,
            k,
            beta,
            gamma,
            min_radius,
        } => {
            let inst = ctx.instance(instance.rho, instance.alpha)?;
            let strat = match (beta, gamma) {
                (Some(b), Some(g)) => Strategy::new(*k, ctx.angle(*b), ctx.angle(*g)),
                (None, None) => Strategy {
                    steps: *k,
                    ..optimal_inf(&inst)?.strategy
                },
                _ => {
                    return Err(CliError::Usage(
                        "give both --beta and --gamma or neither".into(),
                    ))
                }
            };
            let traj_mode = match mode {
                Mode::Spiral => TrajectoryMode::Spiral,
                Mode::Random => TrajectoryMode::Random { seed: *seed },
            };
            let points = agent_trajectory(&inst, &strat, traj_mode, *min_radius)?;
            let mode_name = mode
                .to_possible_value()
                .expect("value")
                .get_name()
                .to_string();
            let mut t = Table::new(
                format!(
                    "trajectory {} {} mode={mode_name} seed={seed} min_radius={}",
                    instance_echo(&inst),
                    strategy_echo(&strat),
                    format_sig12(*min_radius)
                ),
                &["x", "y", "elapsed"],
            );
            if let Some(last) = points.last() {
                let mut summary = format!("path_length={}", format_sig12(last.elapsed));
                if *mode == Mode::Spiral {
                    let worst = worst_case_time(&inst, &strat)?;
                    let _ = write!(summary, " worst_case_time={}", Cell::from(worst).render());
                }
                t.comments.push(summary);
            }
            for p in points {
                t.push(vec![p.x.into(), p.y.into(), p.elapsed.into()]);
            }
            Ok(t)
        }
    }
}

/// Runs a parsed command, writing to `--out` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let table = build_table(cli)?;
    let format = cli.format.unwrap_or(if cli.out.is_some() {
        Format::Csv
    } else {
        Format::Pretty
    });
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Pretty => table.to_pretty(),
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
