//! `gsqg` command-line driver.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gsqg_core::experiments::{
    run_convergence_study, run_dissipative_global_probe, run_logdiss_wellposedness_probe, run_losing_exponent_probe,
};
use gsqg_core::io::{parse_config, SimulationConfig};
use gsqg_core::oracles::{run_default, OracleReport, LEMMAS};
use gsqg_core::run::{parallel_map, run_to_dir, RunOutput};
use gsqg_core::Error;

#[derive(Parser)]
#[command(name = "gsqg", version, about = "Spectral solver and inequality oracles for SQG-type models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write its run directory.
    Run {
        config: PathBuf,
        /// Output directory; defaults to `runs/<config stem>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one configuration per value of a dotted config key.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rescaled-limit convergence study from the `[convergence]` section.
    Compare {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the inequality oracles.
    Verify {
        #[arg(long, default_value = "all")]
        lemma: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Probes: A (losing exponent), C (damped global bound), D (log damping).
    Probe {
        #[arg(value_enum, ignore_case = true)]
        kind: ProbeKind,
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the δ* ladder sweep of probe C.
        #[arg(long)]
        no_sweep: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProbeKind {
    A,
    C,
    D,
}

/// Failure surfaced to the user as a JSON object on stderr.
struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut body = json!({ "error": e.kind(), "message": e.to_string() });
        if let Error::Config { path, .. } = &e {
            body["path"] = json!(path);
        }
        Failure { code: 1, body }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Error::Io(e).into()
}

fn default_out(config: &Path, suffix: &str) -> PathBuf {
    let stem = config.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    PathBuf::from("runs").join(format!("{stem}{suffix}"))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::from(Error::Csv(e.to_string())))?;
    std::fs::write(path, text + "\n").map_err(io_failure)
}

fn summarize(dir: &Path, out: &RunOutput) -> Value {
    json!({
        "dir": dir.display().to_string(),
        "t": out.final_state.t,
        "steps": out.final_state.step_count,
        "records": out.records.len(),
        "checkpoints": out.checkpoints.len(),
        "status": if out.failure.is_some() { "blow_up" } else { "ok" },
    })
}

fn blow_up_failure(out: &RunOutput, summary: Value) -> Option<Failure> {
    out.failure.as_ref().map(|e| Failure {
        code: 3,
        body: json!({ "error": e.kind(), "message": e.to_string(), "run": summary }),
    })
}

fn cmd_run(config: &Path, out: Option<PathBuf>) -> Result<Value, Failure> {
    let cfg = parse_config(config)?;
    let dir = out.unwrap_or_else(|| default_out(config, ""));
    let result = run_to_dir(&cfg, &dir)?;
    let summary = summarize(&dir, &result);
    match blow_up_failure(&result, summary.clone()) {
        Some(f) => Err(f),
        None => Ok(summary),
    }
}

fn parse_scalar(text: &str) -> Value {
    if let Ok(i) = text.parse::<i64>() {
        json!(i)
    } else if let Ok(f) = text.parse::<f64>() {
        json!(f)
    } else if let Ok(b) = text.parse::<bool>() {
        json!(b)
    } else {
        json!(text)
    }
}

/// Returns `base` with the dotted key `param` replaced by `value`.
fn with_param(base: &SimulationConfig, param: &str, value: &str) -> Result<SimulationConfig, Failure> {
    let bad = |msg: String| Failure::from(Error::Config { path: param.to_owned(), message: msg });
    let mut tree = serde_json::to_value(base).map_err(|e| bad(e.to_string()))?;
    let mut node = &mut tree;
    let keys: Vec<&str> = param.split('.').collect();
    for key in &keys[..keys.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(|| bad(format!("`{key}` is not a table")))?;
        node = obj.entry(key.to_string()).or_insert_with(|| json!({}));
    }
    let obj = node.as_object_mut().ok_or_else(|| bad("parent is not a table".into()))?;
    obj.insert(keys[keys.len() - 1].to_owned(), parse_scalar(value));
    let cfg: SimulationConfig = serde_json::from_value(tree).map_err(|e| bad(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_sweep(config: &Path, param: &str, values: &[String], out: Option<PathBuf>) -> Result<Value, Failure> {
    let base = parse_config(config)?;
    let root = out.unwrap_or_else(|| default_out(config, "-sweep"));
    let variants = values
        .iter()
        .map(|v| Ok((root.join(format!("{param}={v}")), with_param(&base, param, v)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let results = parallel_map(&variants, |(dir, cfg)| run_to_dir(cfg, dir).map(|o| summarize(dir, &o)));
    let mut runs = Vec::new();
    let mut first_error = None;
    for r in results {
        match r {
            Ok(s) => runs.push(s),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if let Some(e) = first_error {
        return Err(e.into());
    }
    let summary = json!({ "param": param, "runs": runs });
    if runs.iter().any(|r| r["status"] != "ok") {
        return Err(Failure { code: 3, body: json!({ "error": "blow_up", "message": "at least one run blew up", "sweep": summary }) });
    }
    Ok(summary)
}

fn cmd_compare(config: &Path, out: Option<PathBuf>) -> Result<Value, Failure> {
    let cfg = parse_config(config)?;
    let dir = out.unwrap_or_else(|| default_out(config, "-compare"));
    let report = run_convergence_study(&cfg)?;
    std::fs::create_dir_all(&dir).map_err(io_failure)?;
    write_json(&dir.join("report.json"), &report)?;
    let mut csv = String::from("tau,s");
    for b in &report.branches {
        write!(csv, ",delta_{}", b.delta).expect("string write");
    }
    csv.push('\n');
    for (j, tau) in report.tau.iter().enumerate() {
        write!(csv, "{tau:.16e},{:.16e}", report.exponents[j]).expect("string write");
        for b in &report.branches {
            match b.errors.get(j) {
                Some(e) => write!(csv, ",{e:.16e}"),
                None => write!(csv, ","),
            }
            .expect("string write");
        }
        csv.push('\n');
    }
    std::fs::write(dir.join("errors.csv"), csv).map_err(io_failure)?;
    Ok(json!({
        "dir": dir.display().to_string(),
        "m_b": report.m_b,
        "sup_errors": report.branches.iter().map(|b| json!({ "delta": b.delta, "sup_error": b.sup_error })).collect::<Vec<_>>(),
        "orders": report.orders,
        "monotone": report.monotone,
        "pass": report.pass(),
    }))
}

fn report_rows_csv(reports: &[OracleReport]) -> String {
    let mut out = String::from("lemma,samples,skipped,worst_ratio,empirical_constant,ceiling,pass,build_breaking,seed,extras\n");
    for r in reports {
        let extras: Vec<String> = r.extras.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
        let ceiling = r.ceiling.map(|c| format!("{c:e}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.16e},{:.16e},{},{},{},{},{}",
            r.lemma,
            r.samples,
            r.skipped,
            r.worst_ratio,
            r.empirical_constant,
            ceiling,
            r.pass,
            r.build_breaking,
            r.seed,
            extras.join(";")
        )
        .expect("string write");
    }
    out
}

fn cmd_verify(lemma: &str, format: Format, samples: u64, seed: u64) -> Result<(String, bool), Failure> {
    let ids: Vec<&str> = if lemma == "all" { LEMMAS.to_vec() } else { vec![lemma] };
    let mut reports = Vec::new();
    for id in ids {
        reports.extend(run_default(id, samples, seed)?);
    }
    let breaking = reports.iter().any(|r| r.build_breaking);
    let text = match format {
        Format::Csv => report_rows_csv(&reports),
        Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
    };
    Ok((text, breaking))
}

fn trace_csv(times: &[f64], columns: &[(&str, &[f64])]) -> String {
    let mut out = String::from("t");
    for (name, _) in columns {
        write!(out, ",{name}").expect("string write");
    }
    out.push('\n');
    for (j, t) in times.iter().enumerate() {
        write!(out, "{t:.16e}").expect("string write");
        for (_, col) in columns {
            match col.get(j) {
                Some(v) => write!(out, ",{v:.16e}"),
                None => write!(out, ","),
            }
            .expect("string write");
        }
        out.push('\n');
    }
    out
}

fn cmd_probe(kind: ProbeKind, config: &Path, out: Option<PathBuf>, sweep: bool) -> Result<Value, Failure> {
    let cfg = parse_config(config)?;
    let dir = out.unwrap_or_else(|| default_out(config, &format!("-probe-{kind:?}")));
    std::fs::create_dir_all(&dir).map_err(io_failure)?;
    let summary = match kind {
        ProbeKind::A => {
            let r = run_losing_exponent_probe(&cfg)?;
            write_json(&dir.join("report.json"), &r)?;
            let csv = trace_csv(&r.times, &[("hs_decreasing", &r.trace), ("hs_fixed", &r.trace_fixed)]);
            std::fs::write(dir.join("trace.csv"), csv).map_err(io_failure)?;
            json!({ "found_m": r.found_m, "horizon_exceeded": r.horizon_exceeded, "pass": r.pass() })
        }
        ProbeKind::C => {
            let r = run_dissipative_global_probe(&cfg, sweep)?;
            write_json(&dir.join("report.json"), &r)?;
            std::fs::write(dir.join("trace.csv"), trace_csv(&r.trace.times, &[("hs", &r.trace.norms)])).map_err(io_failure)?;
            json!({
                "pass": r.pass,
                "sup_over_initial": r.trace.sup_norm / r.trace.initial_norm,
                "delta_star": r.sweep.as_ref().map(|s| s.delta_star.clone()),
            })
        }
        ProbeKind::D => {
            let r = run_logdiss_wellposedness_probe(&cfg)?;
            write_json(&dir.join("report.json"), &r)?;
            std::fs::write(dir.join("trace.csv"), trace_csv(&r.trace.times, &[("hs", &r.trace.norms)])).map_err(io_failure)?;
            json!({ "pass": r.pass, "outside_hypothesis": r.outside_hypothesis })
        }
    };
    let mut summary = summary;
    summary["dir"] = json!(dir.display().to_string());
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Sweep { config, param, values, out } => cmd_sweep(&config, &param, &values, out),
        Command::Compare { config, out } => cmd_compare(&config, out),
        Command::Probe { kind, config, out, no_sweep } => cmd_probe(kind, &config, out, !no_sweep),
        Command::Verify { lemma, format, samples, seed } => match cmd_verify(&lemma, format, samples, seed) {
            Ok((text, breaking)) => {
                print!("{text}");
                return if breaking { ExitCode::from(4) } else { ExitCode::SUCCESS };
            }
            Err(f) => Err(f),
        },
    };
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
