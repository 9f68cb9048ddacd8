//! Command-line front end.  One `run` call per invocation; all output goes
//! through the supplied writer so identical invocations are byte-identical.
//!
//! Exit codes: 0 success, 1 domain errors (bad input, non-morphism), 2
//! exhausted computation budgets, 64 usage errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{parse_rational, Prime, Rational};
use crate::error::Error;
use crate::forms::{canonical_coords, HomogeneousLift};
use crate::lattice::{adelic_factorize, glue_local, AdeleMatrix};
use crate::matrix::RatMatrix;
use crate::parse::{parse_map, render_map};
use crate::pipeline::{
    everywhere_good_reduction_model, global_minimal_model, reduction_report, EgrResult,
};
use crate::reduction::{bad_primes, minimize_local};
use crate::resultant::resultant;
use crate::Result;

#[derive(Parser)]
#[command(
    name = "projmin",
    version,
    about = "Exact resultants, reduction reports, and minimal models of \
             endomorphisms of projective space"
)]
struct Cli {
    /// Emit structured JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resultant of the map in FILE
    Res { file: PathBuf },
    /// Whether the map in FILE is a morphism (nonzero resultant)
    Morphism { file: PathBuf },
    /// Primes dividing the resultant of the content-normalized map
    Badprimes { file: PathBuf },
    /// Minimize ord_p of the resultant at one prime by bounded search
    Minimize {
        file: PathBuf,
        /// Prime to minimize at
        #[arg(short, long)]
        prime: String,
        /// Search radius in lattice-neighbor moves
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
    /// Global minimal model: minimize at every bad prime and glue
    Gmm {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        /// Print the resulting model as a re-parseable map file
        #[arg(long)]
        emit_map: bool,
    },
    /// Model with everywhere-unit resultant, when the search finds one
    Egr {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
    /// Per-prime reduction table for the map in FILE
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
    /// Glue prescribed local lattice generators into one global lattice
    Glue { file: PathBuf },
    /// Factor an adele matrix as C·B with C everywhere unimodular
    Factorize { file: PathBuf },
}

/// Parses `args` (without the binary name), runs the command, and writes all
/// output to `out`.  Returns the process exit code.
pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let mut argv = Vec::with_capacity(args.len() + 1);
    argv.push("projmin");
    argv.extend(args.iter().map(|s| s.as_str()));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            if e.is_budget() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Res { file } => {
            let r = resultant(&load_map(file)?)?;
            Ok(if cli.json {
                json_doc(serde_json::json!({ "resultant": r.to_string() }))
            } else {
                format!("{r}\n")
            })
        }
        Command::Morphism { file } => {
            let r = resultant(&load_map(file)?)?;
            let verdict = !r.is_zero();
            Ok(if cli.json {
                json_doc(serde_json::json!({
                    "morphism": verdict,
                    "resultant": r.to_string(),
                }))
            } else {
                format!("{verdict}\n")
            })
        }
        Command::Badprimes { file } => {
            let primes = bad_primes(&load_map(file)?)?;
            let names: Vec<String> = primes.iter().map(|p| p.value().to_string()).collect();
            Ok(if cli.json {
                json_doc(serde_json::json!({ "bad_primes": names }))
            } else if names.is_empty() {
                "(none)\n".to_string()
            } else {
                names.join(" ") + "\n"
            })
        }
        Command::Minimize {
            file,
            prime,
            radius,
        } => {
            let lift = load_map(file)?;
            let p = parse_prime(prime)?;
            let r = minimize_local(&lift, &p, *radius)?;
            Ok(if cli.json {
                json_doc(serde_json::json!({
                    "conjugator": matrix_json(r.model.conjugator()),
                    "forms": forms_json(r.model.lift()),
                    "radius_exhausted": r.radius_exhausted,
                    "scalar": r.model.scalar().to_string(),
                    "valuation": r.valuation,
                    "visited": r.visited,
                }))
            } else {
                format!(
                    "model: {}\nconjugator: {}\nscalar: {}\nvaluation: {}\nvisited: {}\nradius_exhausted: {}\n",
                    r.model.lift(),
                    matrix_text(r.model.conjugator()),
                    r.model.scalar(),
                    r.valuation,
                    r.visited,
                    yes_no(r.radius_exhausted),
                )
            })
        }
        Command::Gmm {
            file,
            radius,
            emit_map,
        } => {
            let lift = load_map(file)?;
            let (model, report) = global_minimal_model(&lift, *radius)?;
            if *emit_map {
                return Ok(render_map(model.lift()) + "\n");
            }
            let res = resultant(model.lift())?;
            Ok(if cli.json {
                json_doc(serde_json::json!({
                    "conjugator": matrix_json(model.conjugator()),
                    "forms": forms_json(model.lift()),
                    "report": report.to_json(),
                    "resultant": res.to_string(),
                    "scalar": model.scalar().to_string(),
                }))
            } else {
                format!(
                    "model: {}\nconjugator: {}\nscalar: {}\nresultant: {}\n{}",
                    model.lift(),
                    matrix_text(model.conjugator()),
                    model.scalar(),
                    res,
                    report.to_text(),
                )
            })
        }
        Command::Egr { file, radius } => {
            let lift = load_map(file)?;
            match everywhere_good_reduction_model(&lift, *radius)? {
                EgrResult::UnitModel(model) => {
                    let res = resultant(model.lift())?;
                    Ok(if cli.json {
                        json_doc(serde_json::json!({
                            "conjugator": matrix_json(model.conjugator()),
                            "forms": forms_json(model.lift()),
                            "resultant": res.to_string(),
                            "scalar": model.scalar().to_string(),
                            "unit_model": true,
                        }))
                    } else {
                        format!(
                            "model: {}\nconjugator: {}\nscalar: {}\nresultant: {}\n",
                            model.lift(),
                            matrix_text(model.conjugator()),
                            model.scalar(),
                            res,
                        )
                    })
                }
                EgrResult::NoUnitModelFound(report) => Ok(if cli.json {
                    json_doc(serde_json::json!({
                        "report": report.to_json(),
                        "unit_model": false,
                    }))
                } else {
                    format!(
                        "no unit-resultant model found within radius {}\n{}",
                        report.radius,
                        report.to_text(),
                    )
                }),
            }
        }
        Command::Report { file, radius } => {
            let report = reduction_report(&load_map(file)?, *radius)?;
            Ok(if cli.json {
                json_doc(report.to_json())
            } else {
                report.to_text()
            })
        }
        Command::Glue { file } => {
            let (n, data) = load_adele_data(file)?;
            let glued = glue_local(n, &data)?;
            Ok(if cli.json {
                json_doc(serde_json::json!({
                    "basis": matrix_json(&glued.rational_basis()),
                }))
            } else {
                format!("{glued}\n")
            })
        }
        Command::Factorize { file } => {
            let (n, data) = load_adele_data(file)?;
            let adele = AdeleMatrix::new(n, data)?;
            let (c, b) = adelic_factorize(&adele)?;
            Ok(if cli.json {
                let entries: Vec<serde_json::Value> = c
                    .entries()
                    .iter()
                    .map(|(p, m)| {
                        serde_json::json!({
                            "matrix": matrix_json(m),
                            "prime": p.value().to_string(),
                        })
                    })
                    .collect();
                json_doc(serde_json::json!({
                    "b": matrix_json(&b),
                    "c": { "entries": entries, "tail": matrix_json(c.tail()) },
                }))
            } else {
                let mut text = format!(
                    "b: {}\nc tail: {}\n",
                    matrix_text(&b),
                    matrix_text(c.tail())
                );
                for (p, m) in c.entries() {
                    text.push_str(&format!("c at {}: {}\n", p, matrix_text(m)));
                }
                text
            })
        }
    }
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn json_doc(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("JSON document");
    s.push('\n');
    s
}

/// Matrix entries as decimal/rational strings, row-major.
fn matrix_json(m: &RatMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.n_rows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.n_cols())
                        .map(|j| serde_json::Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn matrix_text(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.n_rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.n_cols()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn forms_json(lift: &HomogeneousLift) -> serde_json::Value {
    let coords = canonical_coords(lift.num_vars());
    serde_json::Value::Array(
        lift.render(&coords)
            .into_iter()
            .map(serde_json::Value::String)
            .collect(),
    )
}

fn load_map(path: &Path) -> Result<HomogeneousLift> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_map(&text)
}

fn parse_prime(text: &str) -> Result<Prime> {
    let value: BigUint = text
        .parse()
        .map_err(|_| Error::Parse(format!("not a prime: {text:?}")))?;
    Prime::new(value)
}

/// Adele data file: `{"n": 2, "entries": [{"prime": "2", "matrix": [["1/2",
/// "0"], ["0", "1"]]}]}`.  Primes and matrix entries may be JSON integers or
/// decimal/rational strings.
fn load_adele_data(path: &Path) -> Result<(usize, BTreeMap<Prime, RatMatrix>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bad adele file: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("adele file must be a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(|v| v.as_u64())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse("field \"n\" must be a positive integer".into()))?
        as usize;
    let rows_field = obj
        .get("entries")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("field \"entries\" must be an array".into()))?;
    let mut entries = BTreeMap::new();
    for item in rows_field {
        let entry = item
            .as_object()
            .filter(|e| e.contains_key("prime") && e.contains_key("matrix"))
            .ok_or_else(|| {
                Error::Parse("each entry must be an object with \"prime\" and \"matrix\"".into())
            })?;
        let prime = match &entry["prime"] {
            serde_json::Value::Number(x) if x.as_u64().is_some() => {
                Prime::new(BigUint::from(x.as_u64().unwrap()))?
            }
            serde_json::Value::String(s) => parse_prime(s)?,
            other => return Err(Error::Parse(format!("bad prime value {other}"))),
        };
        let rows = entry["matrix"]
            .as_array()
            .ok_or_else(|| Error::Parse("\"matrix\" must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?
                    .iter()
                    .map(value_to_rational)
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let matrix = RatMatrix::from_rows(rows)?;
        if entries.insert(prime.clone(), matrix).is_some() {
            return Err(Error::Parse(format!("duplicate entry for prime {prime}")));
        }
    }
    Ok((n, entries))
}

fn value_to_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(x) if x.is_i64() => {
            Ok(Rational::from_integer(x.as_i64().unwrap().into()))
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!(
            "matrix entries must be integers or rational strings, got {other}"
        ))),
    }
}
