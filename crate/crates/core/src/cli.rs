//! Command-line surface: argument parsing, job configuration and output.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Integer;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::extended::{representatives, ExtClassGroup, SubgroupT};
use crate::field::ImagQuadField;
use crate::forms::{QuadForm, Unimodular};
use crate::golden::{verify, Golden, Report};
use crate::modular::{class_polynomial_for_group, ClassPolynomial, Invariant, DEFAULT_PRECISION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "formclass",
    version,
    about = "Extended form class groups and class polynomials"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: OutputFormat,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GroupArgs {
    /// Fundamental discriminant d_K < 0.
    #[arg(long = "d", allow_hyphen_values = true)]
    pub d: String,

    /// Level N >= 1.
    #[arg(long = "N", default_value = "1")]
    pub n: String,

    /// Residue subgroup: full, one, or a list such as 1,5,7,11.
    #[arg(long = "T", default_value = "full")]
    pub t: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-reduce a form given as a,b,c.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Reduced forms of discriminant d and their composition table.
    Classgroup {
        #[arg(long = "d", allow_hyphen_values = true)]
        d: String,
    },
    /// Representatives and composition table of Q_N(d_K)/~_Gamma.
    Extgroup {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Class polynomial of the invariant over the extended class group.
    Classpoly {
        #[command(flatten)]
        group: GroupArgs,

        /// Working precision in bits.
        #[arg(long, env = "FORMCLASS_PRECISION", default_value_t = DEFAULT_PRECISION)]
        precision: u32,

        /// weber or siegel.
        #[arg(long, default_value = "weber")]
        invariant: String,
    },
    /// Check d_K = -20, N = 12 against the bundled reference data.
    VerifyExample {
        /// Residue subgroup to use instead of the reference one.
        #[arg(long = "T")]
        t: Option<String>,

        #[arg(long, env = "FORMCLASS_PRECISION", default_value_t = DEFAULT_PRECISION)]
        precision: u32,

        #[arg(long, default_value = "weber")]
        invariant: String,
    },
}

/// A fully validated job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub field: ImagQuadField,
    pub t: SubgroupT,
    pub precision_bits: u32,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl JobConfig {
    pub fn from_args(g: &GroupArgs, precision_bits: u32, cli: &Cli) -> Result<Self> {
        let d = parse_int(&g.d)?;
        let n = parse_int(&g.n)?;
        if precision_bits < 64 {
            return Err(Error::Parse(format!(
                "precision {precision_bits} is below 64 bits"
            )));
        }
        Ok(JobConfig {
            field: ImagQuadField::new(d)?,
            t: SubgroupT::parse(&g.t, n)?,
            precision_bits,
            output_format: cli.format,
            output_path: cli.out.clone(),
        })
    }
}

fn parse_int(s: &str) -> Result<Integer> {
    s.trim()
        .parse::<Integer>()
        .map_err(|e| Error::Parse(format!("{s:?} is not an integer: {e}")))
}

/// What a command produced: rendered output and the exit status it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        _ => EXIT_INVALID,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    let ok = |output: String| Outcome {
        output,
        exit_code: EXIT_OK,
    };
    match &cli.command {
        Command::Reduce { form } => {
            let q: QuadForm = form.parse()?;
            let (r, g) = q.reduce();
            Ok(ok(render_reduce(&q, &r, &g, fmt)))
        }
        Command::Classgroup { d } => {
            let field = ImagQuadField::new(parse_int(d)?)?;
            let g = ExtClassGroup::classical(&field)?;
            Ok(ok(render_group(&g, fmt)))
        }
        Command::Extgroup { group } => {
            let cfg = JobConfig::from_args(group, DEFAULT_PRECISION, cli)?;
            let g = representatives(&cfg.field, &cfg.t)?;
            Ok(ok(render_group(&g, fmt)))
        }
        Command::Classpoly {
            group,
            precision,
            invariant,
        } => {
            let cfg = JobConfig::from_args(group, *precision, cli)?;
            let inv: Invariant = invariant.parse()?;
            let g = representatives(&cfg.field, &cfg.t)?;
            let (poly, _) = class_polynomial_for_group(&g, &inv, cfg.precision_bits)?;
            Ok(ok(render_poly(&poly, fmt)))
        }
        Command::VerifyExample {
            t,
            precision,
            invariant,
        } => {
            let golden = Golden::example();
            let t = SubgroupT::parse(t.as_deref().unwrap_or(&golden.t), golden.n.clone())?;
            let inv: Invariant = invariant.parse()?;
            let report = verify(&golden, &t, &inv, *precision)?;
            let exit_code = if report.passed {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            Ok(Outcome {
                output: render_report(&report, fmt),
                exit_code,
            })
        }
    }
}

fn matrix_json(g: &Unimodular) -> serde_json::Value {
    let e = g.entries();
    json!([
        [e[0][0].to_string(), e[0][1].to_string()],
        [e[1][0].to_string(), e[1][1].to_string()]
    ])
}

fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn render_reduce(q: &QuadForm, r: &QuadForm, g: &Unimodular, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => to_json_string(&json!({
            "input": q,
            "reduced": r,
            "matrix": matrix_json(g),
        })),
        OutputFormat::Csv => csv_string(
            &["a", "b", "c", "p", "q", "r", "s"],
            &[vec![
                r.a.to_string(),
                r.b.to_string(),
                r.c.to_string(),
                g.p.to_string(),
                g.q.to_string(),
                g.r.to_string(),
                g.s.to_string(),
            ]],
        ),
        OutputFormat::Text => format!("{r}\n{g}\n"),
    }
}

pub fn render_group(g: &ExtClassGroup, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => to_json_string(&g.to_json()),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = g
                .reps
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    vec![
                        i.to_string(),
                        q.a.to_string(),
                        q.b.to_string(),
                        q.c.to_string(),
                        g.inverse_indices[i].to_string(),
                    ]
                })
                .collect();
            csv_string(&["index", "a", "b", "c", "inverse_index"], &rows)
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "d_K = {}, N = {}, T = {}", g.field.d, g.n, g.t);
            let _ = writeln!(s, "order {}", g.order());
            for (i, q) in g.reps.iter().enumerate() {
                let _ = writeln!(s, "{i:>4}  {q}");
            }
            let _ = writeln!(s, "identity {}", g.identity_index);
            for row in &g.table {
                let cells: Vec<String> = row.iter().map(|k| format!("{k:>3}")).collect();
                let _ = writeln!(s, "{}", cells.join(""));
            }
            s
        }
    }
}

pub fn render_poly(p: &ClassPolynomial, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => to_json_string(&p.to_json()),
        OutputFormat::Csv => {
            let deg = p.degree();
            let rows: Vec<Vec<String>> = p
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| vec![(deg - i).to_string(), c.to_string()])
                .collect();
            csv_string(&["exponent", "coefficient"], &rows)
        }
        OutputFormat::Text => format!("{}\n", p.pretty()),
    }
}

pub fn render_report(r: &Report, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => to_json_string(r),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = r
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                .collect();
            csv_string(&["check", "passed", "detail"], &rows)
        }
        OutputFormat::Text => r.text(),
    }
}
