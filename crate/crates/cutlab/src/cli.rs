//! The `cutlab` command line.
//!
//! Every subcommand prints one JSON document to standard output (or to the
//! `--output` file). Domain errors print `{"error": <kind>, "message": ...}`
//! to standard error and exit with 1; usage errors exit with 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cutlab_core::autgroup::{aut_order, predict, Prediction, PredictionRule};
use cutlab_core::graph::{apply_perturbation, Perturbation, PerturbationKind};
use cutlab_core::maxcut::{brute_force_maxcut, BRUTE_FORCE_CAP};
use cutlab_core::qaoa::{optimize, ratio, transfer_parameters, AngleSet, QaoaRun};
use cutlab_core::spectral::{
    char_poly, eigen_decomposition, maxcut_upper_bounds, run_check, SpectralCheck,
};
use cutlab_core::Graph;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, GraphSpec, OptimizerSettings};
use crate::error::{Error, Result};
use crate::experiment::{error_count, run_experiment};
use crate::graph_io::{graph_label, read_graph, read_text, to_json};
use crate::heuristics::heuristic_report;
use crate::record::load_csv;
use crate::report::{emit_report, write_plots};

pub const THREADS_ENV: &str = "CUTLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cutlab", version, about = "MaxCut, QAOA and graph perturbation toolkit")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to $CUTLAB_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the result here instead of standard output. For `experiment`,
    /// the output directory.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Human-readable output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Apply a perturbation to a graph.
    Perturb {
        /// Graph JSON file, or `-` for standard input.
        graph: PathBuf,
        /// `shadow:<s>`, `delete`, `delete:<u>-<v>`, `pendant` or `pendant:<u>`.
        #[arg(long)]
        kind: String,
    },
    /// Characteristic polynomial, eigenvalues, spectral radius and MaxCut
    /// bounds.
    Spectrum {
        graph: PathBuf,
        /// Verification to run: prop1, prop2, prop3, prop4, cor1, prop5 or
        /// cor2. Repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Automorphism group order.
    Aut {
        graph: PathBuf,
        /// Closed-form rule to compare with: prop7 to prop12.
        #[arg(long)]
        predict: Option<String>,
    },
    /// Exact MaxCut by exhaustive search.
    Maxcut { graph: PathBuf },
    /// Optimize QAOA angles.
    Qaoa(QaoaArgs),
    /// Run an experiment sweep.
    Experiment {
        /// TOML configuration; the built-in dataset when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Summarize an experiment CSV and draw its charts.
    Report {
        csv: PathBuf,
        /// Directory for the SVG charts.
        #[arg(long)]
        plots: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// complete, erdos_renyi, binary_tree, rary_tree, regular, path, cycle,
    /// star or empty.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for erdos_renyi.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub arity: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub leaves: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QaoaArgs {
    pub graph: PathBuf,
    /// Number of layers.
    #[arg(long)]
    pub p: usize,
    /// Random starting points.
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Output of an earlier `qaoa` run with p or p - 1 layers.
    #[arg(long)]
    pub warm_start: Option<PathBuf>,
    /// Also evaluate the optimal angles on this graph.
    #[arg(long)]
    pub transfer_to: Option<PathBuf>,
}

/// What a subcommand produced.
enum Output {
    Json(Value),
    Graph(Graph),
}

/// Domain failure with an exit code of 1.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    /// Output to print before failing, e.g. a report with a failed check.
    pub partial: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind().into(),
            message: e.to_string(),
            partial: None,
        }
    }
}

impl From<cutlab_core::Error> for Failure {
    fn from(e: cutlab_core::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: String) -> Failure {
    Failure {
        kind: "InvalidParameter".into(),
        message,
        partial: None,
    }
}

fn number(x: &cutlab_core::BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<Output, Failure> {
    let spec = GraphSpec {
        n: a.n,
        q: a.q,
        height: a.height,
        arity: a.arity,
        degree: a.degree,
        leaves: a.leaves,
        seed: Some(cli.seed),
        ..GraphSpec::new(&a.family)
    };
    Ok(Output::Graph(spec.build()?))
}

fn perturb(cli: &Cli, graph: &Path, kind: &str) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let kind: PerturbationKind = kind.parse()?;
    Ok(Output::Graph(apply_perturbation(
        &g,
        &Perturbation::new(kind, cli.seed),
    )?))
}

fn spectrum(graph: &Path, checks: &[String]) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let checks: Vec<SpectralCheck> = checks
        .iter()
        .map(|c| c.parse().map_err(|e: cutlab_core::Error| Failure::from(e)))
        .collect::<Result<_, _>>()?;
    let phi = char_poly(&g);
    let coefficients: Vec<Value> = phi
        .coeffs()
        .iter()
        .map(|c| match i64::try_from(c) {
            Ok(v) => json!(v),
            Err(_) => json!(c.to_string()),
        })
        .collect();
    let (eigenvalues, rho) = if g.n() == 0 {
        (Vec::new(), 0.0)
    } else {
        let spec = eigen_decomposition(&g)?;
        let rho = spec.spectral_radius();
        (spec.eigenvalues, rho)
    };
    let bounds = if g.n() <= BRUTE_FORCE_CAP {
        let b = maxcut_upper_bounds(&g)?;
        json!({
            "literal": b.literal,
            "sound": b.sound,
            "maxcut": b.maxcut,
            "literal_violated": b.literal_violated,
            "sound_violated": b.sound_violated,
        })
    } else {
        Value::Null
    };
    let mut failed = Vec::new();
    let mut reports = Vec::new();
    for check in checks {
        let r = run_check(&g, check)?;
        if !r.passed() {
            failed.push(check.token());
        }
        reports.push(json!({
            "check": check.token(),
            "passed": r.passed(),
            "items": r.items.iter().map(|i| json!({
                "label": i.label,
                "passed": i.passed,
                "discrepancy": i.discrepancy,
            })).collect::<Vec<_>>(),
        }));
    }
    let out = json!({
        "graph": graph_label(&g),
        "n": g.n(),
        "charpoly": {
            "ascending": coefficients,
            "text": phi.to_string(),
        },
        "eigenvalues": eigenvalues,
        "spectral_radius": rho,
        "bounds": bounds,
        "checks": reports,
    });
    if failed.is_empty() {
        Ok(Output::Json(out))
    } else {
        Err(Failure {
            kind: "CheckFailed".into(),
            message: format!("failed: {}", failed.join(", ")),
            partial: Some(out),
        })
    }
}

fn aut(graph: &Path, rule: Option<&str>) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let report = aut_order(&g)?;
    let mut out = json!({
        "graph": graph_label(&g),
        "order": number(&report.order),
        "generator_count": report.generators.len(),
        "generators": report.generators,
        "method": report.method.as_str(),
    });
    let Some(rule) = rule else {
        return Ok(Output::Json(out));
    };
    let rule: PredictionRule = rule.parse()?;
    let comparison = match predict(&g, rule)? {
        Prediction::Value(v) => json!({
            "rule": rule.token(),
            "applicable": true,
            "predicted": number(&v),
            "enumerated": number(&report.order),
            "matches": v == report.order,
        }),
        Prediction::NotApplicable(reason) => json!({
            "rule": rule.token(),
            "applicable": false,
            "reason": reason,
        }),
    };
    let mismatch = comparison["matches"] == json!(false);
    out["prediction"] = comparison;
    if mismatch {
        return Err(Failure {
            kind: "PredictionMismatch".into(),
            message: format!("{} disagrees with enumeration", rule.token()),
            partial: Some(out),
        });
    }
    Ok(Output::Json(out))
}

fn maxcut(graph: &Path) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let s = brute_force_maxcut(&g)?;
    Ok(Output::Json(json!({
        "graph": graph_label(&g),
        "value": s.value,
        "witness": s.witness,
        "degenerate_count": s.degenerate_count,
    })))
}

fn read_angles(path: &Path) -> Result<AngleSet, Failure> {
    let v: Value = serde_json::from_str(&read_text(path)?).map_err(Error::from)?;
    let list = |key: &str| -> Result<Vec<f64>, Failure> {
        v.get(key)
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(Value::as_f64).collect())
            .ok_or_else(|| usage(format!("{}: missing numeric array {key:?}", path.display())))
    };
    Ok(AngleSet::new(list("gamma")?, list("beta")?)?)
}

pub fn run_json(run: &QaoaRun, maxcut: usize) -> Value {
    json!({
        "graph_id": run.graph_id,
        "p": run.p,
        "gamma": run.angles.gamma(),
        "beta": run.angles.beta(),
        "f_star": run.f_star,
        "maxcut": maxcut,
        "ar": run.ar,
        "seed": run.seed,
        "restarts": run.restarts,
        "trace": {
            "best_start": run.trace.best_start,
            "iterations": run.trace.iterations,
            "converged": run.trace.converged,
            "starts": run.trace.starts.iter().map(|s| json!({
                "value": s.value,
                "iterations": s.iterations,
                "evaluations": s.evaluations,
                "converged": s.converged,
                "warm": s.warm,
            })).collect::<Vec<_>>(),
        },
    })
}

fn qaoa(cli: &Cli, a: &QaoaArgs) -> Result<Output, Failure> {
    let g = read_graph(&a.graph)?;
    let warm = a.warm_start.as_deref().map(read_angles).transpose()?;
    let config = OptimizerSettings::default().to_core();
    let mut run = optimize(&g, a.p, cli.seed, a.restarts, warm.as_ref(), &config)?;
    run.graph_id = graph_label(&g);
    let maxcut = brute_force_maxcut(&g)?.value;
    run.ar = match ratio(run.f_star, maxcut) {
        Ok(r) => Some(r),
        Err(cutlab_core::Error::ZeroCut) => None,
        Err(e) => return Err(e.into()),
    };
    let mut out = run_json(&run, maxcut);
    if let Some(target) = &a.transfer_to {
        let t = read_graph(target)?;
        let tr = transfer_parameters(&run, &t)?;
        out["transfer"] = json!({
            "graph_id": graph_label(&t),
            "expectation": tr.expectation,
            "ar": tr.ar,
        });
    }
    Ok(Output::Json(out))
}

fn experiment(cli: &Cli, config: Option<&Path>) -> Result<Output, Failure> {
    let cfg = match config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default_config(),
    };
    let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("results"));
    let records = run_experiment(&cfg)?;
    let emitted = emit_report(&records, &dir)?;
    let errors = error_count(&records);
    let out = json!({
        "rows": records.len(),
        "error_rows": errors,
        "csv": emitted.csv,
        "summary": emitted.summary,
        "plots": emitted.plots,
    });
    if errors > 0 {
        return Err(Failure {
            kind: "ErrorRows".into(),
            message: format!("{errors} of {} rows carry an error", records.len()),
            partial: Some(out),
        });
    }
    Ok(Output::Json(out))
}

fn report(csv: &Path, plots: &Path) -> Result<Output, Failure> {
    let records = load_csv(csv)?;
    write_plots(&records, plots)?;
    let summary = heuristic_report(&records)?;
    Ok(Output::Json(serde_json::to_value(summary).map_err(Error::from)?))
}

/// Indented `key: value` lines.
fn human(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object())) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    human(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                out.push_str(&format!("{pad}[{i}]\n"));
                human(x, indent + 1, out);
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(" "),
        x => x.to_string(),
    }
}

fn render(output: &Output, pretty: bool) -> String {
    match output {
        Output::Graph(g) => to_json(g, pretty) + "\n",
        Output::Json(v) if pretty => {
            let mut s = String::new();
            human(v, 0, &mut s);
            s
        }
        Output::Json(v) => v.to_string() + "\n",
    }
}

fn emit(cli: &Cli, output: &Output, to_file: bool) -> Result<(), Failure> {
    let text = render(output, cli.pretty);
    match (&cli.output, to_file) {
        (Some(path), true) => std::fs::write(path, text).map_err(|e| Error::io(path, e).into()),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}

fn threads(cli: &Cli) -> Result<Option<usize>, Failure> {
    if let Some(t) = cli.threads {
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{THREADS_ENV} must be a thread count, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    if let Some(t) = threads(cli)? {
        if t == 0 {
            return Err(usage("thread count must be >= 1".into()));
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Perturb { graph, kind } => perturb(cli, graph, kind),
        Command::Spectrum { graph, checks } => spectrum(graph, checks),
        Command::Aut { graph, predict } => aut(graph, predict.as_deref()),
        Command::Maxcut { graph } => maxcut(graph),
        Command::Qaoa(a) => qaoa(cli, a),
        Command::Experiment { config } => experiment(cli, config.as_deref()),
        Command::Report { csv, plots } => report(csv, plots),
    };
    // The experiment directory is not an output file.
    let to_file = !matches!(cli.command, Command::Experiment { .. });
    match result {
        Ok(output) => emit(cli, &output, to_file),
        Err(mut failure) => {
            if let Some(partial) = failure.partial.take() {
                emit(cli, &Output::Json(partial), to_file)?;
            }
            Err(failure)
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            1
        }
    }
}
