//! Command-line front end.
//!
//! Every command renders into memory first and writes once, so a failing
//! command never leaves partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use crate::error::Error;
use crate::forest::{DotOptions, Forest};
use crate::mosaic::{Mosaic, DEFAULT_VERTEX_CAP};
use crate::probability::{asymptotic_distribution, distribution_error_report, exact_distribution};
use crate::quadratic::QuadraticNumber;
use crate::recurrence::{layer_counts, spectral_constants};
use crate::symbol::SchlafliSymbol;
use crate::verify::{verify_symbols, VerifyOptions, DEFAULT_SYMBOLS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable holding the default vertex cap.
pub const CAP_ENV: &str = "MOSAIC_TREES_VERTEX_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "mosaic-trees",
    version,
    about = "Layered tree forests on regular {p,q} mosaics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Digits after the decimal point.
    #[arg(long, global = true, default_value_t = 30)]
    pub precision: usize,
    /// Maximum number of mosaic vertices.
    #[arg(long, global = true, env = CAP_ENV, default_value_t = DEFAULT_VERTEX_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "markdown-table", alias = "markdown")]
    Markdown,
    Csv,
    #[value(name = "json-lines", alias = "jsonl")]
    JsonLines,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SymbolArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
}

impl SymbolArgs {
    fn symbol(self) -> Result<SchlafliSymbol, Error> {
        SchlafliSymbol::new(self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbMode {
    Asymptotic,
    Exact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Forest,
    Spanning,
    MosaicEdges,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of i, aᵢ, bᵢ, aᵢ+bᵢ.
    Counts {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// Eigenvalues, closed-form coefficients and the limits L, K, M.
    Constants {
        #[command(flatten)]
        symbol: SymbolArgs,
    },
    /// Root-level distribution of a layer vertex.
    Probs {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// The level i of the chosen vertex.
        #[arg(long, alias = "level")]
        levels: usize,
        #[arg(long, value_enum, default_value_t = ProbMode::Both)]
        mode: ProbMode,
    },
    /// Cross-check mosaic enumeration, recursion and closed form.
    Verify {
        /// Comma-separated p:q pairs.
        #[arg(long, value_delimiter = ',')]
        symbols: Vec<SchlafliSymbol>,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Levels on which the closed form is compared with the recursion.
        #[arg(long, default_value_t = 200)]
        closed_form_levels: usize,
        /// Delete one forest edge before checking (negative control).
        #[arg(long)]
        inject_fault: bool,
    },
    /// Graphviz forest, spanning tree, or plain mosaic edge list.
    Export {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, value_enum)]
        what: ExportKind,
        /// Group each layer in a rank=same subgraph.
        #[arg(long)]
        rank_by_layer: bool,
    },
}

/// Rendered output plus the exit status it should produce.
pub struct Rendered {
    pub text: String,
    pub code: u8,
}

/// Parses `args`, runs the command and writes its output.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(rendered) => match emit(&cli.output, &rendered.text) {
            Ok(()) => ExitCode::from(rendered.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn emit(output: &OutputArgs, text: &str) -> io::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

pub fn run(cli: &Cli) -> Result<Rendered, Error> {
    let out = &cli.output;
    if out.precision == 0 {
        return Err(Error::Precondition("--precision must be at least 1".into()));
    }
    let text = match &cli.command {
        Command::Counts { symbol, levels } => counts(symbol.symbol()?, *levels, out.format)?,
        Command::Constants { symbol } => constants(symbol.symbol()?, out)?,
        Command::Probs {
            symbol,
            levels,
            mode,
        } => probs(symbol.symbol()?, *levels, *mode, out)?,
        Command::Verify {
            symbols,
            levels,
            closed_form_levels,
            inject_fault,
        } => {
            let symbols = if symbols.is_empty() {
                DEFAULT_SYMBOLS
                    .iter()
                    .map(|&(p, q)| SchlafliSymbol::new(p, q))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                symbols.clone()
            };
            let options = VerifyOptions {
                levels: *levels,
                vertex_cap: out.cap,
                closed_form_levels: *closed_form_levels,
                inject_fault: *inject_fault,
            };
            return Ok(verify(&symbols, &options, out.format));
        }
        Command::Export {
            symbol,
            levels,
            what,
            rank_by_layer,
        } => export(symbol.symbol()?, *levels, *what, *rank_by_layer, out.cap)?,
    };
    Ok(Rendered {
        text,
        code: EXIT_OK,
    })
}

fn table(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    match format {
        Format::Markdown => {
            let _ = writeln!(s, "| {} |", header.join(" | "));
            let _ = writeln!(
                s,
                "|{}|",
                header
                    .iter()
                    .map(|h| "-".repeat(h.len() + 2))
                    .collect::<Vec<_>>()
                    .join("|")
            );
            for row in rows {
                let _ = writeln!(s, "| {} |", row.join(" | "));
            }
        }
        Format::Csv => {
            let _ = writeln!(s, "{}", header.join(","));
            for row in rows {
                let _ = writeln!(
                    s,
                    "{}",
                    row.iter()
                        .map(|c| csv_field(c))
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
        }
        Format::JsonLines => unreachable!("json-lines is rendered per command"),
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_lines(values: impl IntoIterator<Item = serde_json::Value>) -> String {
    let mut s = String::new();
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

fn rational_json(r: &BigRational) -> serde_json::Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn counts(pq: SchlafliSymbol, levels: usize, format: Format) -> Result<String, Error> {
    let counts = layer_counts(pq, levels)?;
    if format == Format::JsonLines {
        return Ok(json_lines(counts.iter().map(|c| {
            json!({
                "i": c.level,
                "a": c.a.to_string(),
                "b": c.b.to_string(),
                "total": c.total().to_string(),
            })
        })));
    }
    let rows: Vec<Vec<String>> = counts
        .iter()
        .map(|c| {
            vec![
                c.level.to_string(),
                c.a.to_string(),
                c.b.to_string(),
                c.total().to_string(),
            ]
        })
        .collect();
    let header = match format {
        Format::Csv => ["i", "a", "b", "total"],
        _ => ["i", "a_i", "b_i", "a_i+b_i"],
    };
    Ok(table(format, &header, &rows))
}

fn constants(pq: SchlafliSymbol, out: &OutputArgs) -> Result<String, Error> {
    let consts = spectral_constants(pq, out.precision)?;
    let mut named: Vec<(&str, String, String)> = vec![
        ("c", consts.c.to_string(), consts.c.to_string()),
        (
            "D",
            consts.radicand.to_string(),
            consts.radicand.to_string(),
        ),
    ];
    named.extend(consts.decimal_views());
    if out.format == Format::JsonLines {
        return Ok(json_lines(named.iter().map(|(name, exact, decimal)| {
            json!({ "symbol": pq.to_string(), "name": name, "exact": exact, "decimal": decimal })
        })));
    }
    let rows: Vec<Vec<String>> = named
        .into_iter()
        .map(|(n, e, d)| vec![n.to_string(), e, d])
        .collect();
    Ok(table(out.format, &["name", "exact", "decimal"], &rows))
}

fn probs(
    pq: SchlafliSymbol,
    level: usize,
    mode: ProbMode,
    out: &OutputArgs,
) -> Result<String, Error> {
    let digits = out.precision;
    let counts = layer_counts(pq, level)?;
    let exact = match mode {
        ProbMode::Asymptotic => None,
        _ => Some(exact_distribution(pq, level, &counts)?),
    };
    let asymptotic = match mode {
        ProbMode::Exact => None,
        _ => Some(asymptotic_distribution(
            &spectral_constants(pq, digits)?,
            level,
        )?),
    };
    let report = match (&asymptotic, &exact) {
        (Some(a), Some(e)) => Some(distribution_error_report(a, e)?),
        _ => None,
    };
    let decimal = |r: &BigRational| -> String {
        QuadraticNumber::from_rational(r.clone(), 2)
            .expect("2 is not a square")
            .to_decimal(digits)
    };

    let mut header = vec!["j"];
    if asymptotic.is_some() {
        header.push("asymptotic");
    }
    if exact.is_some() {
        header.extend(["exact", "exact_fraction"]);
    }
    if report.is_some() {
        header.extend(["abs_error", "order"]);
    }

    let mut rows = Vec::new();
    let mut records = Vec::new();
    for j in (0..=level).rev() {
        let mut row = vec![j.to_string()];
        let mut record = serde_json::Map::new();
        record.insert("symbol".into(), json!(pq.to_string()));
        record.insert("i".into(), json!(level));
        record.insert("j".into(), json!(j));
        if let Some(a) = &asymptotic {
            let v = a.point_mass(j).to_decimal(digits);
            record.insert("asymptotic".into(), json!(v));
            row.push(v);
        }
        if let Some(e) = &exact {
            let m = e.point_mass(j);
            row.push(decimal(m));
            row.push(m.to_string());
            record.insert("exact".into(), rational_json(m));
        }
        if let Some(r) = &report {
            let row_r = r.row(j);
            let err = row_r.abs_error.to_decimal(digits);
            let order = row_r.order.map_or("-".to_string(), |o| format!("1e{o}"));
            record.insert("abs_error".into(), json!(err));
            record.insert("order".into(), json!(row_r.order));
            row.push(err);
            row.push(order);
        }
        rows.push(row);
        records.push(serde_json::Value::Object(record));
    }

    if out.format == Format::JsonLines {
        return Ok(json_lines(records));
    }
    let mut s = table(out.format, &header, &rows);
    if let (Some(r), Format::Markdown) = (&report, out.format) {
        if let Some(order) = r.main_root_order() {
            let _ = writeln!(s, "\nerror at j=0 (main root) is of order 1e{order}");
        }
    }
    Ok(s)
}

fn verify(symbols: &[SchlafliSymbol], options: &VerifyOptions, format: Format) -> Rendered {
    let reports = verify_symbols(symbols, options);
    let all_passed = reports.iter().all(|r| r.passed());
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let text = if format == Format::JsonLines {
        json_lines(reports.iter().flat_map(|r| {
            r.checks.iter().map(move |c| {
                json!({
                    "symbol": r.symbol.to_string(),
                    "levels": r.levels,
                    "check": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })
            })
        }))
    } else {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .flat_map(|r| {
                r.checks.iter().map(move |c| {
                    vec![
                        r.symbol.to_string(),
                        c.name.to_string(),
                        status(c.passed).to_string(),
                        c.detail.clone(),
                    ]
                })
            })
            .collect();
        let mut s = table(format, &["symbol", "check", "result", "detail"], &rows);
        if format == Format::Markdown {
            let _ = writeln!(s, "\noverall: {}", status(all_passed));
        }
        s
    };
    Rendered {
        text,
        code: if all_passed {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
    }
}

fn export(
    pq: SchlafliSymbol,
    levels: usize,
    what: ExportKind,
    rank_by_layer: bool,
    cap: u64,
) -> Result<String, Error> {
    let mosaic = Mosaic::build_with_cap(pq, levels.max(1), cap)?;
    let options = DotOptions {
        graph_name: None,
        rank_by_layer,
    };
    Ok(match what {
        ExportKind::MosaicEdges => {
            let mut buf = Vec::new();
            mosaic.write_edge_list(&mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("ascii output")
        }
        ExportKind::Forest => Forest::grow(&mosaic, levels)?.to_dot(&options),
        ExportKind::Spanning => {
            let forest = Forest::grow(&mosaic, levels)?;
            let tree = forest.spanning_tree(&mosaic)?;
            tree.to_dot(
                &forest,
                &DotOptions {
                    graph_name: Some(format!("spanning_{}_{}", pq.p(), pq.q())),
                    rank_by_layer,
                },
            )
        }
    })
}
