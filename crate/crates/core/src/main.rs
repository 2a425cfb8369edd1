// SPDX-License-Identifier: Apache-2.0

//! `qcasim` command-line front end.
//!
//! Exit codes: 0 success, 1 truth-table failure, 2 usage/parse/validation
//! error, 3 relaxation did not converge.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcasim::clock::ClockConfig;
use qcasim::csv::{kink_report_csv, measurement_csv, sweep_csv, trace_csv};
use qcasim::engine::{measure, simulate, EngineError, InputSchedule, InputVector, RelaxOptions, SimOptions};
use qcasim::model::{GeometryParams, Layout, Polarity};
use qcasim::qcl::{energy, parse_qcl, serialize_qcl};
use qcasim::stdcells::{generate, StdCellKind};
use qcasim::sweep::{comparison_table, run_sweep};
use qcasim::truth::{truth_check, LogicFunction};
use qcasim::electrostatics::circuit_kink_energy;

#[derive(Parser)]
#[command(name = "qcasim", version, about = "QCA layout generator, kink-energy calculator and bistable simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct RelaxArgs {
    /// Stop relaxing a sample once max |dP| over a sweep is below this.
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    /// Maximum Gauss-Seidel sweeps per sample.
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Reset every cell to P = 0 at the start of each input vector.
    #[arg(long)]
    cold_start: bool,
}

impl RelaxArgs {
    fn options(self) -> SimOptions {
        SimOptions {
            relax: RelaxOptions {
                tolerance: self.tolerance,
                max_iters: self.max_iters,
            },
            warm_start: !self.cold_start,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a standard circuit as a canonical .qcl file.
    Gen {
        /// wire:N (N >= 2), majority, inverter:conventional, or inverter:K with K in 2..=6.
        kind: String,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Simulate a layout over an input schedule.
    Sim {
        qcl: PathBuf,
        /// `exhaustive`, or a file with one vector per line such as `a=+1 b=-1`.
        #[arg(long, default_value = "exhaustive")]
        vectors: String,
        /// Write the per-sample trace CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the per-output measurement CSV to stdout.
        #[arg(long)]
        measure: bool,
        #[command(flatten)]
        relax: RelaxArgs,
    },
    /// Compute pairwise and total kink energies.
    Kink {
        qcl: PathBuf,
        /// Charge model(s) whose totals are printed.
        #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
        model: ModelChoice,
        /// Write the pair CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kink energy and output polarization of the minimal inverter family.
    Sweep {
        /// Base circuit; only inverter3 is available.
        #[arg(long, default_value = "inverter3")]
        base: String,
        /// Inclusive range of extra output cells, e.g. 0..3.
        #[arg(long, default_value = "0..3")]
        extra: String,
        /// Write the sweep CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print a markdown table next to the published reference values.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        relax: RelaxArgs,
    },
    /// Check simulated outputs against a logic function.
    Truth {
        qcl: PathBuf,
        /// Expected function: not, maj or id.
        #[arg(long)]
        expect: LogicFunction,
        /// `exhaustive`, or a vector file as for `sim`.
        #[arg(long, default_value = "exhaustive")]
        vectors: String,
        #[command(flatten)]
        relax: RelaxArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelChoice {
    Bare,
    Neutralized,
    Both,
}

enum Failure {
    Input(String),
    Convergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Convergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Convergence(m) => m,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ConvergenceFailure { .. } => Failure::Convergence(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen { kind, out } => cmd_gen(&kind, out.as_deref()),
        Command::Sim {
            qcl,
            vectors,
            out,
            measure,
            relax,
        } => cmd_sim(&qcl, &vectors, out.as_deref(), measure, relax.options()),
        Command::Kink { qcl, model, out } => cmd_kink(&qcl, model, out.as_deref()),
        Command::Sweep {
            base,
            extra,
            out,
            compare,
            relax,
        } => cmd_sweep(&base, &extra, out.as_deref(), compare, relax.options()),
        Command::Truth {
            qcl,
            expect,
            vectors,
            relax,
        } => cmd_truth(&qcl, expect, &vectors, relax.options()),
    }
}

fn parse_kind(kind: &str) -> Result<StdCellKind, Failure> {
    let bad = || Failure::Input(format!("unknown circuit `{kind}`"));
    match kind.split_once(':') {
        None if kind == "majority" => Ok(StdCellKind::Majority),
        Some(("wire", n)) => match n.parse::<usize>() {
            Ok(n) if n >= 2 => Ok(StdCellKind::Wire(n)),
            _ => Err(Failure::Input(format!("wire length must be an integer >= 2, got `{n}`"))),
        },
        Some(("inverter", "conventional")) => Ok(StdCellKind::ConventionalInverter),
        Some(("inverter", k)) => match k.parse::<i32>() {
            Ok(k @ 2..=6) => Ok(StdCellKind::MinimalInverter(k - 3)),
            _ => Err(Failure::Input(format!("inverter size must be 2..=6 or conventional, got `{k}`"))),
        },
        _ => Err(bad()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Layout, Option<ClockConfig>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let (layout, clock) = parse_qcl(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let violations = layout.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Failure::Input(format!("invalid layout: {}", list.join("; "))));
    }
    Ok((layout, clock))
}

fn parse_vector_file(path: &Path) -> Result<Vec<InputVector>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut vectors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut vector = InputVector::new();
        for tok in content.split_whitespace() {
            let err = || Failure::Input(format!("{}:{}: bad assignment `{tok}`", path.display(), i + 1));
            let (label, value) = tok.split_once('=').ok_or_else(err)?;
            let p = match value {
                "+1" | "1" => Polarity::Plus,
                "-1" | "0" => Polarity::Minus,
                _ => return Err(err()),
            };
            vector.insert(label.to_string(), p);
        }
        vectors.push(vector);
    }
    Ok(vectors)
}

fn schedule(arg: &str) -> Result<InputSchedule, Failure> {
    if arg == "exhaustive" {
        Ok(InputSchedule::Exhaustive)
    } else {
        parse_vector_file(Path::new(arg)).map(InputSchedule::Explicit)
    }
}

fn describe(vector: &InputVector) -> String {
    let parts: Vec<String> = vector.iter().map(|(l, p)| format!("{l}={p}")).collect();
    parts.join(" ")
}

fn cmd_gen(kind: &str, out: Option<&Path>) -> Result<u8, Failure> {
    let kind = parse_kind(kind)?;
    let layout = generate(kind, GeometryParams::default()).map_err(|e| Failure::Input(e.to_string()))?;
    let text = serialize_qcl(&layout, None);
    match out {
        Some(path) => {
            write_file(path, &text)?;
            println!("{kind}: {} cells", layout.cells.len());
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_sim(path: &Path, vectors: &str, out: Option<&Path>, show_measure: bool, opts: SimOptions) -> Result<u8, Failure> {
    let (layout, clock) = load(path)?;
    let clock = clock.unwrap_or_default();
    let trace = simulate(&layout, &clock, &schedule(vectors)?, opts)?;
    if let Some(out) = out {
        write_file(out, &trace_csv(&trace))?;
    }
    match measure(&trace, &layout) {
        Ok(m) => {
            if show_measure {
                print!("{}", measurement_csv(&m));
            }
            for (v, vector) in m.vectors.iter().enumerate() {
                for o in &m.outputs {
                    let s = o.per_vector[v];
                    println!(
                        "vector {v} ({}): {} steady={:+.9} max_abs={:.9}",
                        describe(vector),
                        o.label,
                        s.steady,
                        s.max_abs
                    );
                }
            }
        }
        Err(EngineError::NoOutput) => println!("{} samples, no output cells", trace.rows.len()),
        Err(e) => return Err(e.into()),
    }
    Ok(0)
}

fn cmd_kink(path: &Path, model: ModelChoice, out: Option<&Path>) -> Result<u8, Failure> {
    let (layout, _) = load(path)?;
    let report = circuit_kink_energy(&layout).map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(out) = out {
        write_file(out, &kink_report_csv(&report))?;
    }
    let pairs = report.pairs.len();
    match model {
        ModelChoice::Bare => println!("pairs={pairs} total_bare={} J", energy(report.total_bare)),
        ModelChoice::Neutralized => println!("pairs={pairs} total_neutralized={} J", energy(report.total_neutralized)),
        ModelChoice::Both => println!(
            "pairs={pairs} total_bare={} J total_neutralized={} J",
            energy(report.total_bare),
            energy(report.total_neutralized)
        ),
    }
    Ok(0)
}

fn parse_range(arg: &str) -> Option<std::ops::RangeInclusive<i32>> {
    let (lo, hi) = match arg.split_once("..") {
        Some((lo, hi)) => (lo.parse().ok()?, hi.trim_start_matches('=').parse().ok()?),
        None => {
            let k = arg.parse().ok()?;
            (k, k)
        }
    };
    (lo >= -1 && lo <= hi).then_some(lo..=hi)
}

fn cmd_sweep(base: &str, extra: &str, out: Option<&Path>, compare: bool, opts: SimOptions) -> Result<u8, Failure> {
    if base != "inverter3" {
        return Err(Failure::Input(format!("unknown sweep base `{base}` (only inverter3)")));
    }
    let range = parse_range(extra)
        .ok_or_else(|| Failure::Input(format!("bad --extra `{extra}`: expected a nonempty range like 0..3 with start >= -1")))?;
    let rows = run_sweep(range, GeometryParams::default(), &ClockConfig::default(), opts)?;
    let csv = sweep_csv(&rows);
    if let Some(out) = out {
        write_file(out, &csv)?;
    }
    print!("{csv}");
    if compare {
        println!();
        print!("{}", comparison_table(&rows));
    }
    Ok(0)
}

fn cmd_truth(path: &Path, expect: LogicFunction, vectors: &str, opts: SimOptions) -> Result<u8, Failure> {
    let (layout, clock) = load(path)?;
    let inputs = layout.input_labels().len();
    if inputs != expect.arity() {
        return Err(Failure::Input(format!(
            "function expects {} inputs, layout has {inputs}",
            expect.arity()
        )));
    }
    let trace = simulate(&layout, &clock.unwrap_or_default(), &schedule(vectors)?, opts)?;
    let m = measure(&trace, &layout)?;
    let report = truth_check(&m, |v| expect.eval_vector(v));
    for verdict in &report.verdicts {
        println!("{verdict}");
    }
    if report.passed() {
        println!("PASS");
        Ok(0)
    } else {
        println!("FAIL");
        Ok(1)
    }
}
