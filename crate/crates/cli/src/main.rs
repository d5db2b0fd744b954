//! `hcaa`: command-line front end.
//!
//! Every run prints one report with the command, a SHA-256 digest of the
//! input files, the results and a status. Exit status is 0 when every
//! check passed, 1 on a failed mathematical check or library error, 2 on
//! usage or parse errors.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use commands::{CmdError, CmdResult, ConnectionKind};
use input::{matrix_from_file, parse_time, structure_from_file, Digest256, InputError, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Parser)]
#[command(name = "hcaa", version, about = "Exact computations on hypercomplex almost abelian Lie algebras")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity, integrability, and flatness/parallelism of Obata.
    Verify {
        #[arg(long)]
        spec: String,
    },
    /// Chevalley–Eilenberg Betti numbers.
    Betti {
        /// A family tag such as `g3` or `g7(-3/4, 1)`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        spec: Option<String>,
        /// The solvable family of quaternionic dimension `2n + 1`.
        #[arg(long)]
        hyperbolic: Option<u64>,
    },
    /// Family of an 8-dimensional algebra.
    Classify8 {
        #[arg(long)]
        family: Option<String>,
        /// A block spec or `{"a": 7x7}`.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Lattice witnesses and abelianizations.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// The twelve flat hyper-Kähler lattices (same as `lattice census`).
    Census,
    /// Obata, Levi-Civita or Bismut connection of a spec with the standard metric.
    Connection {
        #[arg(value_enum)]
        kind: Option<ConnectionKind>,
        #[arg(long = "kind", value_enum)]
        kind_flag: Option<ConnectionKind>,
        #[arg(long)]
        spec: String,
        /// Which `J_α` the Bismut connection is taken for.
        #[arg(long, default_value_t = 1)]
        structure: usize,
    },
    /// Tangent lifts with Clifford structures, or the tangent bundle algebra.
    Lift {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[arg(long)]
        tangent_bundle: bool,
    },
}

#[derive(Subcommand)]
enum LatticeOp {
    Census,
    /// Checks that `exp(t A)` is conjugate to the integer matrix `E`.
    Verify {
        /// Action matrix; defaults to the flat hyper-Kähler one.
        #[arg(long)]
        a: Option<String>,
        /// `2pi/m`, `pi/k`, `hyperbolic:m`, a rational, or a JSON object.
        #[arg(long)]
        time: String,
        #[arg(long)]
        e: String,
    },
    Abelianization {
        #[arg(long)]
        e: String,
    },
    G3 {
        #[arg(long)]
        k: u64,
    },
    Ex62 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: i64,
    },
    Nonexistence {
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        #[arg(long, default_value_t = 12)]
        jmax: u32,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    input_digest: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    results: Value,
}

fn load(path: &str, digest: &mut Digest256) -> Result<Structure, CmdError> {
    Ok(structure_from_file(path, digest)??)
}

fn load_opt(path: Option<&str>, digest: &mut Digest256) -> Result<Option<Structure>, CmdError> {
    path.map(|p| load(p, digest)).transpose()
}

fn run(cmd: &Command, digest: &mut Digest256) -> CmdResult {
    match cmd {
        Command::Verify { spec } => commands::verify(&load(spec, digest)?),
        Command::Betti { family, spec, hyperbolic } => {
            let s = load_opt(spec.as_deref(), digest)?;
            commands::betti_cmd(family.as_deref(), s.as_ref(), *hyperbolic)
        }
        Command::Classify8 { family, spec } => {
            let s = load_opt(spec.as_deref(), digest)?;
            commands::classify_cmd(family.as_deref(), s.as_ref())
        }
        Command::Census | Command::Lattice { op: LatticeOp::Census } => commands::census(),
        Command::Lattice { op } => match op {
            LatticeOp::Census => unreachable!("handled above"),
            LatticeOp::Verify { a, time, e } => {
                let a = match a {
                    Some(p) => matrix_from_file(p, digest)?,
                    None => hcaa::lattices::flat_hk_a(),
                };
                digest.update("time", time.as_bytes());
                let t = parse_time(time)?;
                commands::lattice_verify(&a, &t, &matrix_from_file(e, digest)?)
            }
            LatticeOp::Abelianization { e } => commands::lattice_abelianization(&matrix_from_file(e, digest)?),
            LatticeOp::G3 { k } => commands::lattice_g3(*k),
            LatticeOp::Ex62 { n, m } => commands::lattice_ex62(*n, *m),
            LatticeOp::Nonexistence { kmax, jmax } => commands::lattice_nonexistence(*kmax, *jmax),
        },
        Command::Connection {
            kind,
            kind_flag,
            spec,
            structure,
        } => {
            let kind = match (kind, kind_flag) {
                (Some(k), None) | (None, Some(k)) => *k,
                (Some(a), Some(b)) if a == b => *a,
                _ => return Err(InputError("give the connection kind once: obata, lc or bismut".into()).into()),
            };
            commands::connection_cmd(kind, &load(spec, digest)?, *structure)
        }
        Command::Lift {
            spec,
            iterations,
            tangent_bundle,
        } => commands::lift_cmd(&load(spec, digest)?, *iterations, *tangent_bundle),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(report: &RunReport, format: OutputFormat) -> String {
    let v = serde_json::to_value(report).expect("report serializes");
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(&v).expect("report serializes") + "\n",
        OutputFormat::Table => {
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, val)| format!("{k:<width$}  {val}\n")).collect()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let mut digest = Digest256::default();
    let outcome = run(&cli.command, &mut digest);
    let (status, error, results, code) = match outcome {
        Ok(o) if o.passed => ("pass", None, o.results, 0),
        Ok(o) => ("fail", None, o.results, 1),
        Err(CmdError::Math(e)) => ("error", Some(e.to_string()), Value::Null, 1),
        Err(CmdError::Input(e)) => ("usage", Some(e.to_string()), Value::Null, 2),
    };
    let report = RunReport {
        command,
        input_digest: digest.hex(),
        status,
        error,
        results,
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(render(&report, cli.output).as_bytes());
    ExitCode::from(code)
}
