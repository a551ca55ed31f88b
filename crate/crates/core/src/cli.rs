//! The `lmtool` command line.
//!
//! Exit codes: 0 success with every verdict true, 1 a verdict failed (or the
//! computation produced a mathematically impossible value), 2 usage or input
//! error, 3 a sequence did not stabilize within `--kmax`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::error::{Error, Result};
use crate::invariants::{
    chern_n, dual_check, lm_invariant, relative_invariant, verify, Report, DEFAULT_WEIGHTS,
};
use crate::subspace::SubspaceSpec;
use crate::weyl::{dim_a, Weight};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_STABILIZED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "lmtool",
    version,
    about = "LM-invariants and Hilbert functions of Weyl algebra ideal classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// LM-invariant p_D at each requested weight.
    Invariant(Common),
    /// Second Chern class n from the Hilbert function of M.
    Chern(Common),
    /// Relative invariant p_12 of two specs (pass --spec twice).
    Relative(Common),
    /// Fitted constant of Hom(M, A) against n.
    Dual(Common),
    /// Full report: p_D = 2n, duality, weight independence, graded checks.
    Verify(Common),
    /// Print the built-in specs as spec documents.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Spec document path, or `builtin:NAME`. Repeatable; defaults to the whole catalog.
    #[arg(long = "spec", value_name = "PATH")]
    specs: Vec<String>,
    /// Weights as `w1,w2[;w1,w2...]`.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long, default_value_t = 12)]
    kmax: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Include elapsed_ms in reports (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

pub fn parse_weights(s: &str) -> Result<Vec<Weight>> {
    s.split(';')
        .map(|pair| {
            let bad = || Error::Parse(format!("bad weight {pair:?}; expected w1,w2"));
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            Weight::new(a, b)
        })
        .collect()
}

fn load_spec(arg: &str) -> Result<SubspaceSpec> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return catalog::lookup(name)
            .ok_or_else(|| Error::Parse(format!("no built-in spec named {name:?}")));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
    SubspaceSpec::parse(&text)
}

fn load_specs(args: &[String], stderr: &mut dyn Write) -> Result<Vec<SubspaceSpec>> {
    if args.is_empty() {
        return Ok(catalog::catalog());
    }
    let specs = args
        .iter()
        .map(|a| load_spec(a))
        .collect::<Result<Vec<_>>>()?;
    for s in &specs {
        for w in s.warnings() {
            let _ = writeln!(stderr, "lmtool: warning: {}: {w}", s.name());
        }
    }
    Ok(specs)
}

/// Rendered output of one command: a JSON value, a CSV table and text lines.
struct Output {
    json: Value,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    text: Vec<String>,
    /// Human-readable descriptions of failed verdicts.
    failures: Vec<String>,
}

impl Output {
    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                Ok(s.into_bytes())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(&self.csv_header).map_err(io)?;
                for r in &self.csv_rows {
                    w.write_record(r).map_err(io)?;
                }
                w.into_inner().map_err(|e| Error::Io(e.to_string()))
            }
            Format::Text => Ok(self
                .text
                .iter()
                .map(|l| format!("{l}\n"))
                .collect::<String>()
                .into_bytes()),
        }
    }
}

/// One item per spec; a single item is emitted bare, several as an array. CSV
/// tables of several specs get a leading `spec` column.
fn combine(items: Vec<(String, Output)>) -> Output {
    let multi = items.len() != 1;
    let mut out = Output {
        json: Value::Null,
        csv_header: Vec::new(),
        csv_rows: Vec::new(),
        text: Vec::new(),
        failures: Vec::new(),
    };
    let mut jsons = Vec::new();
    for (name, item) in items {
        if out.csv_header.is_empty() {
            out.csv_header = item.csv_header.clone();
            if multi {
                out.csv_header.insert(0, "spec");
            }
        }
        for mut row in item.csv_rows {
            if multi {
                row.insert(0, name.clone());
            }
            out.csv_rows.push(row);
        }
        out.text.extend(item.text);
        out.failures.extend(item.failures);
        jsons.push(item.json);
    }
    out.json = if multi {
        Value::Array(jsons)
    } else {
        jsons.pop().unwrap_or(Value::Null)
    };
    out
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn invariant_output(v: &SubspaceSpec, weights: &[Weight], kmax: i64) -> Result<Output> {
    let results = weights
        .par_iter()
        .map(|&w| lm_invariant(v, w, kmax))
        .collect::<Result<Vec<_>>>()?;
    let independent = results.windows(2).all(|p| p[0].p_d == p[1].p_d);
    let mut failures = Vec::new();
    if !independent {
        for r in &results {
            failures.push(format!(
                "{}: weight ({}) p(k) = {:?}",
                v.name(),
                r.weight,
                r.p_sequence
            ));
        }
    }
    let mut rows = Vec::new();
    for r in &results {
        for (k, (&d, &p)) in (0i64..).zip(r.hilbert_d.values.iter().zip(&r.p_sequence)) {
            rows.push(vec![
                r.weight.to_string(),
                k.to_string(),
                dim_a(r.weight, k).to_string(),
                d.to_string(),
                p.to_string(),
            ]);
        }
    }
    let text = results
        .iter()
        .map(|r| {
            format!(
                "{}: weight ({}) p_D = {} (stable from k = {})",
                v.name(),
                r.weight,
                r.p_d,
                r.stable_from
            )
        })
        .collect();
    Ok(Output {
        json: json!({
            "name": v.name(),
            "kmax": kmax,
            "weights": results.iter().map(|r| json!({
                "weight": [r.weight.w1, r.weight.w2],
                "p_D": r.p_d,
                "stable_from": r.stable_from,
                "hilbert_D": r.hilbert_d.values,
                "p_sequence": r.p_sequence,
            })).collect::<Vec<_>>(),
            "independent": independent,
        }),
        csv_header: vec!["weight", "k", "dim_A", "dim_D", "p_k"],
        csv_rows: rows,
        text,
        failures,
    })
}

fn chern_output(v: &SubspaceSpec, kmax: i64) -> Result<Output> {
    let c = chern_n(v, kmax)?;
    let rows = (0i64..)
        .zip(&c.hilbert_m.values)
        .map(|(k, m)| {
            vec![
                k.to_string(),
                dim_a(Weight::STANDARD, k).to_string(),
                m.to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: json!({
            "name": v.name(),
            "kmax": kmax,
            "hilbert_M": c.hilbert_m.values,
            "shift_a": c.shift,
            "n": c.n,
            "window": c.fit.window,
        }),
        csv_header: vec!["k", "dim_A", "dim_M"],
        csv_rows: rows,
        text: vec![format!(
            "{}: n = {} (shift {}, window {:?})",
            v.name(),
            c.n,
            c.shift,
            c.fit.window
        )],
        failures: Vec::new(),
    })
}

fn dual_output(v: &SubspaceSpec, kmax: i64) -> Result<Output> {
    let d = dual_check(v, kmax)?;
    let failures = if d.verdict {
        Vec::new()
    } else {
        vec![format!(
            "{}: dual constant {} != n = {}; Hom(M, A) = {:?}",
            v.name(),
            d.constant,
            d.n,
            d.hilbert_dual.values
        )]
    };
    let rows = (0i64..)
        .zip(&d.hilbert_dual.values)
        .map(|(k, m)| vec![k.to_string(), m.to_string()])
        .collect();
    Ok(Output {
        json: json!({
            "name": v.name(),
            "kmax": kmax,
            "hilbert_dual": d.hilbert_dual.values,
            "shift": d.shift,
            "constant": d.constant,
            "n": d.n,
            "ok": d.verdict,
        }),
        csv_header: vec!["k", "dim_dual"],
        csv_rows: rows,
        text: vec![format!(
            "{}: dual constant = {} (shift {}), n = {}: {}",
            v.name(),
            d.constant,
            d.shift,
            d.n,
            if d.verdict { "ok" } else { "FAILED" }
        )],
        failures,
    })
}

fn relative_output(v1: &SubspaceSpec, v2: &SubspaceSpec, kmax: i64) -> Result<Output> {
    let r = relative_invariant(v1, v2, kmax)?;
    let failures = if r.verdict {
        Vec::new()
    } else {
        vec![format!(
            "Hom({}, {}): p_12 = {} != n_1 + n_2 = {}; sequence {:?}",
            r.source,
            r.target,
            r.p_12,
            r.n_1 + r.n_2,
            r.hilbert_hom.values
        )]
    };
    let rows = (0i64..)
        .zip(&r.hilbert_hom.values)
        .map(|(k, m)| {
            vec![
                k.to_string(),
                dim_a(Weight::STANDARD, k).to_string(),
                m.to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: json!({
            "source": r.source,
            "target": r.target,
            "kmax": kmax,
            "hilbert_hom": r.hilbert_hom.values,
            "shift_b": r.shift,
            "p_12": r.p_12,
            "n_1": r.n_1,
            "n_2": r.n_2,
            "window": r.fit.window,
            "ok": r.verdict,
        }),
        csv_header: vec!["k", "dim_A", "dim_hom"],
        csv_rows: rows,
        text: vec![format!(
            "Hom({}, {}): p_12 = {} (shift {}), n_1 + n_2 = {}: {}",
            r.source,
            r.target,
            r.p_12,
            r.shift,
            r.n_1 + r.n_2,
            if r.verdict { "ok" } else { "FAILED" }
        )],
        failures,
    })
}

fn verify_output(v: &SubspaceSpec, weights: &[Weight], kmax: i64, timing: bool) -> Result<Output> {
    let mut report: Report = verify(v, kmax, weights)?;
    if !timing {
        report.elapsed_ms = None;
    }
    let mut failures = Vec::new();
    if !report.ok {
        failures.push(format!(
            "{}: verdicts {:?}; n = {}, p_D = {}, dual constant = {}; hilbert_M = {:?}; hilbert_D = {:?}; hilbert_dual = {:?}",
            report.name,
            report.verdicts,
            report.n,
            report.p_d,
            report.dual_constant,
            report.hilbert_m,
            report.hilbert_d,
            report.hilbert_dual
        ));
        for w in &report.weights {
            failures.push(format!(
                "{}: weight ({},{}) p_D = {}, p(k) = {:?}, gr-inclusion failures at k = {:?}",
                report.name, w.weight[0], w.weight[1], w.p_d, w.p_sequence, w.gr_inclusion_failures
            ));
        }
    }
    let rows = (0..=kmax)
        .map(|k| {
            let i = k as usize;
            let d = report.hilbert_d[i];
            let a = dim_a(Weight::STANDARD, k);
            vec![
                k.to_string(),
                a.to_string(),
                report.hilbert_m[i].to_string(),
                d.to_string(),
                (a as i64 - d as i64).to_string(),
            ]
        })
        .collect();
    let text = vec![format!(
        "{}: n = {} (shift {}), p_D = {}, p_D = 2n: {}, dual: {}, weights: {}, gr-inclusion: {}, telescoping: {}",
        report.name,
        report.n,
        report.shift_a,
        report.p_d,
        ok_word(report.verdicts.t2 && report.verdicts.d_fit),
        ok_word(report.verdicts.dual),
        ok_word(report.verdicts.weights),
        ok_word(report.verdicts.gr_inclusion),
        ok_word(report.verdicts.telescoping && report.verdicts.monotone),
    )];
    Ok(Output {
        json: to_json(&report),
        csv_header: vec!["k", "dim_A", "dim_M", "dim_D", "p_k"],
        csv_rows: rows,
        text,
        failures,
    })
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn catalog_output() -> Output {
    let specs = catalog::catalog();
    Output {
        json: Value::Array(specs.iter().map(|s| to_json(s.doc())).collect()),
        csv_header: vec!["name", "conditions", "conductor"],
        csv_rows: specs
            .iter()
            .map(|s| {
                vec![
                    s.name().to_owned(),
                    s.num_conditions().to_string(),
                    s.conductor().to_string(),
                ]
            })
            .collect(),
        text: specs
            .iter()
            .map(|s| {
                let fs: Vec<String> = s.functionals().map(ToString::to_string).collect();
                format!(
                    "{}: g = {}; conditions: {}",
                    s.name(),
                    s.conductor(),
                    fs.join(", ")
                )
            })
            .collect(),
        failures: Vec::new(),
    }
}

fn per_spec(
    specs: &[SubspaceSpec],
    f: impl Fn(&SubspaceSpec) -> Result<Output> + Sync,
) -> Result<Output> {
    let items = specs
        .par_iter()
        .map(|s| Ok((s.name().to_owned(), f(s)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(items))
}

fn execute(cli: Cli, stderr: &mut dyn Write) -> Result<(Output, Format, Option<PathBuf>)> {
    let (common, verb) = match cli.command {
        Command::Catalog(c) => return Ok((catalog_output(), c.format, c.out)),
        Command::Invariant(c) => (c, "invariant"),
        Command::Chern(c) => (c, "chern"),
        Command::Relative(c) => (c, "relative"),
        Command::Dual(c) => (c, "dual"),
        Command::Verify(c) => (c, "verify"),
    };
    if common.kmax < 4 {
        return Err(Error::Precondition(format!(
            "--kmax must be at least 4, got {}",
            common.kmax
        )));
    }
    let weights = match &common.weights {
        Some(s) => parse_weights(s)?,
        None if verb == "verify" => DEFAULT_WEIGHTS.to_vec(),
        None => vec![Weight::STANDARD],
    };
    let kmax = common.kmax;
    let out = match verb {
        "relative" => {
            if common.specs.len() != 2 {
                return Err(Error::Precondition(
                    "relative needs exactly two --spec arguments".into(),
                ));
            }
            let specs = load_specs(&common.specs, stderr)?;
            relative_output(&specs[0], &specs[1], kmax)?
        }
        _ => {
            let specs = load_specs(&common.specs, stderr)?;
            match verb {
                "invariant" => per_spec(&specs, |s| invariant_output(s, &weights, kmax))?,
                "chern" => per_spec(&specs, |s| chern_output(s, kmax))?,
                "dual" => per_spec(&specs, |s| dual_output(s, kmax))?,
                _ => per_spec(&specs, |s| verify_output(s, &weights, kmax, common.timing))?,
            }
        }
    };
    Ok((out, common.format, common.out))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStabilized { .. } => EXIT_NOT_STABILIZED,
        Error::NonPolynomial { .. } | Error::NegativeChern { .. } | Error::Mismatch(_) => {
            EXIT_VERDICT
        }
        _ => EXIT_USAGE,
    }
}

/// Runs the command line; all diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (out, format, path) = match execute(cli, stderr) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "lmtool: {e}");
            return exit_code(&e);
        }
    };
    let bytes = match out.render(format) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "lmtool: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &path {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "lmtool: {e}");
        return EXIT_USAGE;
    }
    if out.failures.is_empty() {
        EXIT_OK
    } else {
        for f in &out.failures {
            let _ = writeln!(stderr, "lmtool: identity violated: {f}");
        }
        EXIT_VERDICT
    }
}
