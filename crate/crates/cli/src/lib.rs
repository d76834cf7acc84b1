//! Command-line front end for `rigidcalc`.
//!
//! Every subcommand produces a text rendering and a JSON document; `--format`
//! picks one. Commands that build a new tuple (`mc`, `twist`, `hypergeom`)
//! always print the tuple document so their output can be fed back in.
//!
//! Exit codes: 0 success or passing verdict, 1 well-formed input with a
//! failing verdict, 2 input error.

pub mod table1;

use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use rigidcalc::convolution::{katz_reduce, middle_convolution, tensor_rank_one, RankOneData};
use rigidcalc::field::{parse_rational, CycNumber, RootOfUnity};
use rigidcalc::hypergeometric::{from_multiplicity_function, hypergeometric_tuple};
use rigidcalc::json::{
    jordan_type_to_json, multiplicity_from_json, polynomial_from_json, to_canonical_string, Json,
};
use rigidcalc::monodromy::{
    centralizer_dim, certify_regular, is_absolutely_irreducible, jordan_type, rigidity_index,
    MonodromyTuple, Puncture,
};
use rigidcalc::purity::{
    functional_equation_check, parse_integer_poly, weil_check_with_precision, WeilPolynomial,
    DEFAULT_PRECISION_BITS, DEFAULT_TOLERANCE, MAX_PRECISION_BITS,
};
use rigidcalc::Error;
use serde_json::{json, Value};

pub const PRECISION_ENV: &str = "RIGIDCALC_PRECISION_BITS";

#[derive(Parser, Debug)]
#[command(
    name = "rigidcalc",
    version,
    about = "Exact computations with rigid local systems on the punctured sphere"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jordan types of the local monodromies.
    Jordan {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
        /// Restrict to one puncture (`0`, `1/2`, `inf`, ...).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Rigidity index `(2 - r') n^2 + sum dim Z(A_k)`.
    Rigidity {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
        /// Exit 1 unless the index equals 2.
        #[arg(long)]
        expect_rigid: bool,
    },
    /// Absolute irreducibility via the Burnside criterion.
    Irreducible {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Regularity certificate from somewhere maximal monodromy.
    Regular {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Middle convolution `MC_lambda`.
    Mc {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
        /// Root of unity (`-1`, `zeta3^2`), rational, or CycNumber JSON.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Tensor with a rank-one system given by its scalars at the finite punctures.
    Twist {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
        /// Comma-separated roots of unity, or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        scalars: String,
    },
    /// Reproduce the local monodromy table of the family `F_i`.
    Table1 {
        /// Largest index, at most 12.
        #[arg(long, default_value_t = 8)]
        max_i: usize,
    },
    /// Hypergeometric tuple from parameters or a multiplicity function.
    Hypergeom {
        /// Comma-separated roots of unity, e.g. `1,zeta3,-1`.
        #[arg(long, allow_hyphen_values = true, requires_all = ["b", "order"], conflicts_with = "m")]
        a: Option<String>,
        /// Same length as `--a`.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Order of the cyclotomic field.
        #[arg(long = "N", value_name = "N")]
        order: Option<u32>,
        /// Multiplicity function JSON (path or inline).
        #[arg(long)]
        m: Option<String>,
    },
    /// Katz reduction to rank one.
    KatzReduce {
        /// Tuple JSON: a file path, inline JSON, or `-` for stdin.
        #[arg(long)]
        input: String,
    },
    /// Weil-number check of a Frobenius characteristic polynomial.
    Weil {
        /// Polynomial JSON (path or inline) or an integer polynomial such as `X^2-3X+2`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Size of the residue field.
        #[arg(long)]
        q: u64,
        /// Weight.
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        /// Relative tolerance on `|alpha|^2 = q^w`.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

/// Result of a subcommand before rendering.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: 0,
        }
    }

    fn verdict(text: String, json: Value, pass: bool) -> Self {
        Report {
            text,
            json,
            code: if pass { 0 } else { 1 },
        }
    }

    fn tuple(t: &MonodromyTuple) -> Self {
        let json = t.to_json();
        Report {
            text: to_canonical_string(&json),
            json,
            code: 0,
        }
    }
}

/// A failure that ends the command with a nonzero exit code.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotRigid(_) | Error::NotIrreducible | Error::NoProgress(_) => 1,
            _ => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

/// Reads `arg` as inline JSON when it looks like a document, from standard
/// input for `-`, and as a file path otherwise.
pub fn load_json(arg: &str) -> Result<Value, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| input_error(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| input_error(format!("invalid JSON: {e}")))
}

fn load_tuple(arg: &str) -> Result<MonodromyTuple, Failure> {
    Ok(MonodromyTuple::from_json(&load_json(arg)?)?)
}

fn parse_roots(list: &str) -> Result<Vec<RootOfUnity>, Failure> {
    list.split(',')
        .map(|s| RootOfUnity::parse(s.trim()).map_err(Failure::from))
        .collect()
}

fn parse_scalar(s: &str) -> Result<CycNumber, Failure> {
    let t = s.trim();
    if t.starts_with('{') {
        return Ok(CycNumber::from_json(&load_json(t)?)?);
    }
    if let Ok(z) = RootOfUnity::parse(t) {
        return Ok(z.to_cyc(z.order()));
    }
    parse_rational(t)
        .map(|r| CycNumber::from_rational(r, 1))
        .map_err(|_| input_error(format!("cannot parse scalar {s:?}")))
}

fn precision_bits() -> Result<usize, Failure> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|b| (64..=MAX_PRECISION_BITS).contains(b))
            .ok_or_else(|| {
                input_error(format!(
                    "{PRECISION_ENV} must be an integer in 64..={MAX_PRECISION_BITS}"
                ))
            }),
    }
}

fn jordan(t: &MonodromyTuple, point: Option<&str>) -> Result<Report, Failure> {
    let points: Vec<Puncture> = match point {
        Some(p) => vec![p.parse::<Puncture>()?],
        None => t.punctures(),
    };
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for p in &points {
        let m = t.monodromy_at(p)?;
        let j = jordan_type(m, t.order())?;
        lines.push(if point.is_some() {
            j.to_string()
        } else {
            format!("{p}: {j}")
        });
        entries.push(json!({
            "puncture": p.to_string(),
            "jordan": jordan_type_to_json(&j, t.order()),
            "notation": j.to_string(),
        }));
    }
    let json = if point.is_some() {
        entries.remove(0)
    } else {
        Value::Array(entries)
    };
    Ok(Report::ok(lines.join("\n") + "\n", json))
}

fn rigidity(t: &MonodromyTuple, expect_rigid: bool) -> Report {
    let index = rigidity_index(t);
    let dims: Vec<(Puncture, usize)> = t
        .local_monodromies()
        .map(|(p, m)| (p, centralizer_dim(m)))
        .collect();
    let mut text = format!("rigidity index {index}\n");
    for (p, d) in &dims {
        text.push_str(&format!("dim Z at {p}: {d}\n"));
    }
    let json = json!({
        "rigidity_index": index,
        "rigid": index == 2,
        "centralizer_dims": dims.iter().map(|(p, d)| json!({"puncture": p.to_string(), "dim": d})).collect::<Vec<_>>(),
    });
    Report::verdict(text, json, !expect_rigid || index == 2)
}

fn hypergeom(
    a: Option<&str>,
    b: Option<&str>,
    order: Option<u32>,
    m: Option<&str>,
) -> Result<MonodromyTuple, Failure> {
    if let Some(m) = m {
        let (mf, order) = multiplicity_from_json(&load_json(m)?)?;
        return Ok(from_multiplicity_function(&mf, order)?);
    }
    let (Some(a), Some(b), Some(order)) = (a, b, order) else {
        return Err(input_error(
            "hypergeom needs either --a, --b and --N, or --m",
        ));
    };
    if order == 0 {
        return Err(Error::InvalidOrder.into());
    }
    let cyc = |list: &str| -> Result<Vec<CycNumber>, Failure> {
        let roots = parse_roots(list)?;
        if let Some(z) = roots.iter().find(|z| order % z.order() != 0) {
            return Err(Error::NotRootOfUnity(z.to_string()).into());
        }
        Ok(roots.iter().map(|z| z.to_cyc(order)).collect())
    };
    Ok(hypergeometric_tuple(&cyc(a)?, &cyc(b)?, order)?)
}

fn weil(poly: &str, q: u64, w: i64, tol: f64) -> Result<Report, Failure> {
    let coeffs = if poly.trim_start().starts_with('{') || Path::new(poly).is_file() {
        polynomial_from_json(&load_json(poly)?)?
    } else {
        parse_integer_poly(poly)?
            .into_iter()
            .map(|c| CycNumber::from_int(c, 1))
            .collect()
    };
    let p = WeilPolynomial::new(coeffs, q, w)?;
    let verdict = weil_check_with_precision(&p, tol, precision_bits()?)?;
    let text = format!("{verdict}\n");
    let json = json!({
        "verdict": verdict.to_string(),
        "functional_equation": functional_equation_check(&p),
        "q": q,
        "w": w,
        "tolerance": tol,
    });
    Ok(Report::verdict(text, json, verdict.is_pass()))
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Jordan { input, point } => jordan(&load_tuple(input)?, point.as_deref()),
        Command::Rigidity {
            input,
            expect_rigid,
        } => Ok(rigidity(&load_tuple(input)?, *expect_rigid)),
        Command::Irreducible { input } => {
            let irr = is_absolutely_irreducible(&load_tuple(input)?);
            Ok(Report::ok(
                format!("{irr}\n"),
                json!({ "irreducible": irr }),
            ))
        }
        Command::Regular { input } => {
            let cert = certify_regular(&load_tuple(input)?)?;
            Ok(Report::ok(
                format!("{cert}\n"),
                json!({ "certificate": cert.to_string() }),
            ))
        }
        Command::Mc { input, lambda } => {
            let t = load_tuple(input)?;
            Ok(Report::tuple(&middle_convolution(
                &t,
                &parse_scalar(lambda)?,
            )?))
        }
        Command::Twist { input, scalars } => {
            let t = load_tuple(input)?;
            let data = if scalars.trim_start().starts_with('[') {
                RankOneData::from_json(&load_json(scalars)?)?
            } else {
                RankOneData::new(
                    scalars
                        .split(',')
                        .map(parse_scalar)
                        .collect::<Result<Vec<_>, _>>()?,
                )?
            };
            Ok(Report::tuple(&tensor_rank_one(&t, &data)?))
        }
        Command::Table1 { max_i } => {
            if *max_i > table1::MAX_I {
                return Err(input_error(format!(
                    "--max-i must be in 0..={}",
                    table1::MAX_I
                )));
            }
            let report = table1::run_table1(*max_i)?;
            Ok(Report::verdict(
                report.to_text(),
                report.to_json(),
                report.all_match(),
            ))
        }
        Command::Hypergeom { a, b, order, m } => Ok(Report::tuple(&hypergeom(
            a.as_deref(),
            b.as_deref(),
            *order,
            m.as_deref(),
        )?)),
        Command::KatzReduce { input } => {
            let trace = katz_reduce(&load_tuple(input)?)?;
            let mut text = String::new();
            for (k, s) in trace.steps.iter().enumerate() {
                let twist: Vec<String> = s.twist.scalars().iter().map(|c| c.to_string()).collect();
                text.push_str(&format!(
                    "step {}: twist ({}), lambda {}, rank {}\n",
                    k + 1,
                    twist.join(", "),
                    s.lambda,
                    s.rank
                ));
            }
            Ok(Report::ok(text, trace.to_json()))
        }
        Command::Weil { poly, q, w, tol } => weil(poly, *q, *w, *tol),
    }
}

/// Executes `cli`, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => to_canonical_string(&report.json),
            };
            let _ = out.write_all(body.as_bytes());
            report.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
