//! `nmorse`: command-line front end. Every command except `homology`,
//! `subdivide`, `export-dot`, `catalog` and `normalize` without `--out`
//! prints a JSON report on stdout; wall time goes to stderr.

mod dot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use nmorse::analysis::{
    critical_incidence_graph, hall_matching, morse_boundary, theorem_gap_certificate,
    MatchingCertificate,
};
use nmorse::catalog::{self, catalog};
use nmorse::homology::homology;
use nmorse::io::{parse_cplx, parse_field, write_cplx, write_field, write_mf};
use nmorse::search::{
    is_collapsible, min_critical_cells, nk, pl_probe, SearchConfig, Verdict, DEFAULT_BUDGET,
};
use nmorse::{nkf, normalize, DiscreteVectorField, Error, SimplicialComplex};

#[derive(Parser)]
#[command(
    name = "nmorse",
    version,
    about = "Normalized discrete Morse functions and the invariant 𝔑"
)]
struct Cli {
    /// Search nodes per query.
    #[arg(long, global = true, env = "MORSE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for the searches; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, dimension, Euler characteristic and cells.
    Info { complex: String },
    /// Integer homology as bare JSON.
    Homology { complex: String },
    /// Writes the normalized function of a field as `.mf`.
    Normalize {
        complex: String,
        field: PathBuf,
        /// Write the `.mf` here and print a report instead.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// 𝔑 of a field.
    Nkf { complex: String, field: PathBuf },
    /// Fewest critical cells over all gradient fields.
    Optimal { complex: String },
    /// Minimum of |𝔑| over optimal fields.
    Nk { complex: String },
    /// Collapse sequence or the reason none exists.
    Collapse { complex: String },
    /// Matches critical edges to critical triangles with growing h; uses the
    /// witness of `nk` when no field is given.
    Certify {
        complex: String,
        field: Option<PathBuf>,
    },
    /// Boundary matrices of the Morse chain complex.
    MorseComplex { complex: String, field: PathBuf },
    /// Critical incidence graph and a complete matching or a Hall violator.
    Hall { complex: String, field: PathBuf },
    /// 𝔑 of iterated barycentric subdivisions.
    Plprobe {
        complex: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Barycentric subdivision as `.cplx`.
    Subdivide {
        complex: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// DOT drawing of a field with its normalized values.
    ExportDot { complex: String, field: PathBuf },
    /// Lists catalog names, or prints one entry as `.cplx`.
    Catalog { name: Option<String> },
}

/// Exit status: 1 for obstructions, 2 for bad input, 3 for truncated searches.
enum Failure {
    Obstruction(String),
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotConnected
            | Error::NotCollapsible
            | Error::HypothesesFail(_)
            | Error::NoCollapsibilityObstruction
            | Error::HallViolation { .. }
            | Error::PathCap(_)
            | Error::Overflow(_)
            | Error::Internal(_) => Failure::Obstruction(msg),
            Error::BudgetExceeded(_) => Failure::Budget(msg),
            _ => Failure::Input(msg),
        }
    }
}

/// What a command prints and the status it exits with.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

struct Input {
    complex: SimplicialComplex,
    digest: Sha256,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A path, or `@name` for a catalog entry.
fn load(arg: &str) -> Result<Input, Failure> {
    let (complex, text) = match arg.strip_prefix('@') {
        Some(name) => {
            let k = catalog(name)?;
            let text = write_cplx(&k);
            (k, text)
        }
        None => {
            let text = read(&PathBuf::from(arg))?;
            let k = parse_cplx(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
            (k, text)
        }
    };
    let mut digest = Sha256::new();
    digest.update(text.as_bytes());
    digest.update([0u8]);
    Ok(Input { complex, digest })
}

impl Input {
    fn field<'a>(&'a mut self, path: &PathBuf) -> Result<DiscreteVectorField<'a>, Failure> {
        let text = read(path)?;
        self.digest.update(text.as_bytes());
        self.digest.update([0u8]);
        parse_field(&self.complex, &text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn hex(&self) -> String {
        hex::encode(self.digest.clone().finalize())
    }
}

fn pairs(v: &DiscreteVectorField<'_>) -> Vec<String> {
    write_field(v).lines().map(String::from).collect()
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn report(command: &str, input: &Input, exact: bool, result: Value, certificate: Value) -> String {
    json_text(&json!({
        "command": command,
        "input_digest": input.hex(),
        "exact": exact,
        "result": result,
        "certificate": certificate,
    }))
}

fn code(exact: bool) -> u8 {
    if exact {
        0
    } else {
        3
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let cfg = SearchConfig {
        budget: cli.budget,
        jobs: cli.jobs.max(1),
        ..SearchConfig::default()
    };
    match cli.command {
        Command::Info { complex } => {
            let input = load(&complex)?;
            let k = &input.complex;
            let result = json!({
                "complex": k.to_json(),
                "cells": k.num_cells(),
                "components": k.num_components(),
                "facets": k.facets().count(),
            });
            Ok(Output::ok(report(
                "info",
                &input,
                true,
                result,
                Value::Null,
            )))
        }
        Command::Homology { complex } => {
            let input = load(&complex)?;
            Ok(Output::ok(json_text(&homology(&input.complex).to_json())))
        }
        Command::Normalize {
            complex,
            field,
            out,
        } => {
            let mut input = load(&complex)?;
            let v = input.field(&field)?;
            let h = normalize(&v);
            let value = nkf(&v)?;
            let mf = write_mf(v.complex(), &h.to_morse_function());
            match out {
                None => Ok(Output::ok(format!("{mf}# nkf = {}\n", value.value))),
                Some(path) => {
                    fs::write(&path, &mf)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    let result =
                        json!({ "written": path.display().to_string(), "nkf": value.to_json(&h) });
                    let cert = json!({ "field": pairs(&v) });
                    drop(v);
                    Ok(Output::ok(report("normalize", &input, true, result, cert)))
                }
            }
        }
        Command::Nkf { complex, field } => {
            let mut input = load(&complex)?;
            let v = input.field(&field)?;
            let h = normalize(&v);
            let value = nkf(&v)?;
            let k = v.complex();
            let result = json!({
                "nkf": value.to_json(&h),
                "critical": v.critical_report().to_json(k),
            });
            let cert = json!({ "field": pairs(&v) });
            drop(v);
            Ok(Output::ok(report("nkf", &input, true, result, cert)))
        }
        Command::Optimal { complex } => {
            let input = load(&complex)?;
            let k = &input.complex;
            let r = min_critical_cells(k, &cfg)?;
            let result = json!({
                "vector": r.vector,
                "total": r.total(),
                "lower_bound": r.lower_bound,
                "refuted": r.refuted,
                "nodes": r.nodes,
            });
            let cert = json!({
                "witnesses": r.witnesses.iter().map(pairs).collect::<Vec<_>>(),
            });
            Ok(Output {
                text: report("optimal", &input, r.exact, result, cert),
                code: code(r.exact),
            })
        }
        Command::Nk { complex } => {
            let input = load(&complex)?;
            let k = &input.complex;
            let r = nk(k, &cfg)?;
            let h = normalize(&r.witness);
            let value = nkf(&r.witness)?;
            let result = json!({
                "value": r.value,
                "nkf": r.nkf,
                "vector": r.vector,
                "fields": r.fields,
                "nodes": r.nodes,
            });
            let cert = json!({
                "witness": pairs(&r.witness),
                "contributions": value.to_json(&h).contributions,
            });
            Ok(Output {
                text: report("nk", &input, r.exact, result, cert),
                code: code(r.exact),
            })
        }
        Command::Collapse { complex } => {
            let input = load(&complex)?;
            let k = &input.complex;
            let r = is_collapsible(k, &cfg)?;
            let status = match r.verdict {
                Verdict::Collapsible => 0,
                Verdict::NotCollapsible => 1,
                Verdict::Unknown => 3,
            };
            let result = json!({ "verdict": r.verdict, "note": r.note, "nodes": r.nodes });
            let cert = serde_json::to_value(r.to_json(k)).expect("serializable");
            Ok(Output {
                text: report("collapse", &input, r.exact, result, cert),
                code: status,
            })
        }
        Command::Certify { complex, field } => {
            let mut input = load(&complex)?;
            let (result, cert) = {
                let v = match &field {
                    Some(path) => input.field(path)?,
                    None => nk(&input.complex, &cfg)?.witness,
                };
                let k = v.complex();
                let gap = theorem_gap_certificate(&v)?;
                let result =
                    json!({ "nkf": gap.nkf, "gap_sum": gap.gap_sum(), "positive": gap.nkf > 0 });
                let cert = json!({ "field": pairs(&v), "gaps": gap.to_json(k) });
                (result, cert)
            };
            Ok(Output::ok(report("certify", &input, true, result, cert)))
        }
        Command::MorseComplex { complex, field } => {
            let mut input = load(&complex)?;
            let (result, cert) = {
                let v = input.field(&field)?;
                let k = v.complex();
                let m = morse_boundary(&v)?;
                let simplicial = homology(k);
                let result = json!({
                    "morse": m.to_json(k),
                    "simplicial_rational_betti": simplicial.betti,
                    "matches": m.matches_homology_of(k),
                });
                (result, json!({ "field": pairs(&v) }))
            };
            Ok(Output::ok(report(
                "morse-complex",
                &input,
                true,
                result,
                cert,
            )))
        }
        Command::Hall { complex, field } => {
            let mut input = load(&complex)?;
            let (result, cert, complete) = {
                let v = input.field(&field)?;
                let k = v.complex();
                let g = critical_incidence_graph(&v)?;
                let m = hall_matching(&g);
                let complete = matches!(m, MatchingCertificate::Complete { .. });
                let result = json!({ "graph": g.to_json(k), "complete": complete });
                let cert = json!({ "field": pairs(&v), "matching": m.to_json(k) });
                (result, cert, complete)
            };
            Ok(Output {
                text: report("hall", &input, true, result, cert),
                code: if complete { 0 } else { 1 },
            })
        }
        Command::Plprobe { complex, depth } => {
            let input = load(&complex)?;
            let p = pl_probe(&input.complex, depth, &cfg)?;
            let exact = p.levels.iter().all(|l| l.exact);
            let result = serde_json::to_value(&p).expect("serializable");
            Ok(Output {
                text: report("plprobe", &input, exact, result, Value::Null),
                code: code(exact),
            })
        }
        Command::Subdivide { complex, times } => {
            let input = load(&complex)?;
            let mut k = input.complex;
            for _ in 0..times {
                k = k.barycentric_subdivision();
            }
            Ok(Output::ok(write_cplx(&k)))
        }
        Command::ExportDot { complex, field } => {
            let mut input = load(&complex)?;
            let v = input.field(&field)?;
            Ok(Output::ok(dot::export_dot(&normalize(&v))))
        }
        Command::Catalog { name } => match name {
            None => Ok(Output::ok(json_text(&catalog::NAMES))),
            Some(name) => Ok(Output::ok(write_cplx(&catalog(&name)?))),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            let (msg, status) = match f {
                Failure::Obstruction(m) => (m, 1),
                Failure::Input(m) => (m, 2),
                Failure::Budget(m) => (m, 3),
            };
            eprintln!("error: {msg}");
            ExitCode::from(status)
        }
    }
}
