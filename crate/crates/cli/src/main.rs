//! `binform`: invariants, stability, semistable models and heights of
//! binary forms from the command line.
//!
//! Forms are given by their degree and ascending coefficients
//! `a0,…,ad`, where `ai` multiplies `x^i y^(d-i)`. So `-d 4 -c 5,0,0,1,0`
//! is `x^3 y + 5 y^4`.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 domain failure
//! (globally unstable form, failed self-check).

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use binform_core::arith::{fmt_rat, parse_rat, Int, Rat};
use binform_core::form::BinaryForm;
use binform_core::invariants::{evaluate, expand_symbolic, system_for_degree};
use binform_core::stability::{self, global_semistable_model, local_semistable_model, ExtendedPoint, TwistDescriptor};
use binform_core::verify::{verify, Status};
use binform_core::weighted::{weighted_height, FactoredValue, HeightMode, ModuliPoint, WeightedPoint};
use binform_core::Error;

#[derive(Parser)]
#[command(name = "binform", version, about = "Invariants and GIT stability of binary forms over Q")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Digits shown for floating-point values.
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the generating invariants ξ(f).
    Invariants {
        #[command(flatten)]
        form: FormArgs,
        /// Report the canonical point, its normal form, or both.
        #[arg(long, value_enum, default_value_t = Which::Raw)]
        normalize: Which,
    },
    /// Stability class, bad primes and the global semistable model.
    Classify {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Semistable model at one prime or at all primes.
    Reduce {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        point: PointArgs,
        /// Degree of the form the point came from (with --point).
        #[arg(long)]
        degree: Option<u32>,
        /// Twist at this prime only.
        #[arg(long, conflicts_with = "global")]
        prime: Option<String>,
        /// Twist at every prime where the point is unstable.
        #[arg(long)]
        global: bool,
    },
    /// Weighted moduli height of a point or of ξ(f).
    Height {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        point: PointArgs,
        /// Places used for the height.
        #[arg(long, value_enum, default_value_t = Mode::Archimedean)]
        mode: Mode,
    },
    /// Symbolic expansion of ξi in a0..ad (degree at most 8).
    Expand {
        /// Degree of the form.
        #[arg(short, long)]
        degree: u32,
        /// Only this invariant.
        #[arg(short, long)]
        index: Option<usize>,
    },
    /// Print the transvectant table for a degree.
    Explain {
        /// Degree of the form.
        #[arg(short, long)]
        degree: u32,
    },
    /// Check the built-in tables against the classical values.
    #[command(name = "verify-paper")]
    VerifyTables,
}

#[derive(Args, Default)]
struct FormArgs {
    /// Degree of the form.
    #[arg(short = 'd', long = "deg")]
    deg: Option<u32>,
    /// Ascending coefficients a0,…,ad (integers or p/q).
    #[arg(short = 'c', long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Newline-delimited JSON forms `{"degree":d,"coeffs":[…]}` from a file or `-`.
    #[arg(long)]
    batch: Option<String>,
}

#[derive(Args, Default)]
struct PointArgs {
    /// Point coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Weights of the point, comma separated.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Raw,
    Normalized,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Literal,
    Archimedean,
}

impl From<Mode> for HeightMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Literal => HeightMode::Literal,
            Mode::Archimedean => HeightMode::Archimedean,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FormLine {
    degree: u32,
    coeffs: Vec<Value>,
}

/// Domain failure (exit 3) as opposed to invalid input.
#[derive(Debug)]
struct DomainFailure(String);

impl std::fmt::Display for DomainFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DomainFailure {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<DomainFailure>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::GloballyUnstable) => 3,
        _ => 2,
    }
}

fn parse_list<T>(src: &str, f: impl Fn(&str) -> anyhow::Result<T>) -> anyhow::Result<Vec<T>> {
    src.split(',').map(|s| f(s.trim())).collect()
}

fn parse_form(degree: u32, coeffs: Vec<Rat>) -> anyhow::Result<BinaryForm> {
    if coeffs.len() != degree as usize + 1 {
        bail!("degree {degree} needs {} coefficients, got {}", degree + 1, coeffs.len());
    }
    Ok(BinaryForm::new(coeffs)?)
}

impl FormArgs {
    fn single(&self) -> anyhow::Result<Option<BinaryForm>> {
        match (&self.deg, &self.coeffs) {
            (Some(d), Some(c)) => {
                let coeffs = parse_list(c, |s| Ok(parse_rat(s)?))?;
                Ok(Some(parse_form(*d, coeffs)?))
            }
            (None, None) => Ok(None),
            _ => bail!("a form needs both -d and -c"),
        }
    }

    fn batch(&self) -> anyhow::Result<Option<Vec<String>>> {
        let Some(src) = &self.batch else { return Ok(None) };
        let lines: Vec<String> = if src == "-" {
            io::stdin().lock().lines().collect::<io::Result<_>>()?
        } else {
            std::fs::read_to_string(src)
                .with_context(|| format!("reading {src}"))?
                .lines()
                .map(str::to_string)
                .collect()
        };
        Ok(Some(lines.into_iter().filter(|l| !l.trim().is_empty()).collect()))
    }
}

fn form_from_line(line: &str) -> anyhow::Result<BinaryForm> {
    let l: FormLine = serde_json::from_str(line).context("malformed form line")?;
    let coeffs = l
        .coeffs
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(parse_rat(s)?),
            Value::Number(n) => Ok(parse_rat(&n.to_string())?),
            _ => Err(anyhow!("coefficient {v} is neither a number nor a string")),
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    parse_form(l.degree, coeffs)
}

impl PointArgs {
    fn get(&self) -> anyhow::Result<Option<WeightedPoint>> {
        match (&self.point, &self.weights) {
            (Some(p), Some(w)) => {
                let coords = parse_list(p, |s| Ok(parse_rat(s)?))?;
                let weights = parse_list(w, |s| s.parse::<u32>().with_context(|| format!("bad weight `{s}`")))?;
                Ok(Some(WeightedPoint::new(weights, coords)?))
            }
            (None, None) => Ok(None),
            _ => bail!("a point needs both --point and --weights"),
        }
    }
}

struct Out {
    json: bool,
    precision: usize,
}

impl Out {
    fn emit(&self, value: &Value, text: &str) -> anyhow::Result<()> {
        let mut o = io::stdout().lock();
        if self.json {
            writeln!(o, "{}", serde_json::to_string(value)?)?;
        } else {
            writeln!(o, "{text}")?;
        }
        Ok(())
    }

    fn float(&self, x: f64) -> String {
        format!("{x:.*}", self.precision)
    }

    fn height(&self, h: &FactoredValue) -> String {
        format!("{h}  (log {})", self.float(h.log))
    }
}

fn invariants_value(f: &BinaryForm, which: Which) -> anyhow::Result<(Value, String)> {
    let raw = evaluate(f)?;
    let norm = || -> anyhow::Result<WeightedPoint> { Ok(raw.to_weighted()?.normalize()?) };
    Ok(match which {
        Which::Raw => (serde_json::to_value(&raw)?, format!("{raw}  weights {:?}", raw.weights())),
        Which::Normalized => {
            let n = norm()?;
            (serde_json::to_value(&n)?, format!("{n}  weights {:?}", n.weights()))
        }
        Which::Both => {
            let n = norm()?;
            (
                json!({ "raw": raw, "normalized": n }),
                format!("raw        {raw}\nnormalized {n}\nweights    {:?}", raw.weights()),
            )
        }
    })
}

fn classify_value(f: &BinaryForm) -> anyhow::Result<(Value, String)> {
    let r = stability::report(f)?;
    let mut text = format!(
        "{} (max root multiplicity {})\nxi = {}",
        r.class,
        r.max_multiplicity,
        r.moduli_point
    );
    if !r.moduli_point.is_zero() {
        let primes: Vec<String> = r.unstable_primes.iter().map(|p| p.to_string()).collect();
        text.push_str(&format!("\nunstable at primes: {}", if primes.is_empty() { "none".into() } else { primes.join(", ") }));
        for t in &r.twists {
            text.push_str(&format!("\ntwist {t}  ramification {}", t.ramification));
        }
        if let Some(m) = &r.model {
            text.push_str(&format!("\nsemistable model {m}"));
        }
    }
    Ok((serde_json::to_value(&r)?, text))
}

/// Runs `f` on every batch line in parallel, printing results in input order.
fn run_batch(lines: &[String], out: &Out, f: impl Fn(&BinaryForm) -> anyhow::Result<(Value, String)> + Sync) -> anyhow::Result<()> {
    let results: Vec<anyhow::Result<(Value, String)>> =
        lines.par_iter().map(|l| form_from_line(l).and_then(|form| f(&form))).collect();
    let mut o = io::stdout().lock();
    for (n, r) in results.into_iter().enumerate() {
        match r {
            Ok((v, t)) => {
                if out.json {
                    writeln!(o, "{}", serde_json::to_string(&v)?)?;
                } else {
                    writeln!(o, "{}: {}", n + 1, t.replace('\n', "\n   "))?;
                }
            }
            Err(e) => {
                if out.json {
                    writeln!(o, "{}", json!({ "line": n + 1, "error": e.to_string() }))?;
                } else {
                    writeln!(o, "{}: error: {e}", n + 1)?;
                }
            }
        }
    }
    Ok(())
}

fn with_form(
    form: &FormArgs,
    out: &Out,
    f: impl Fn(&BinaryForm) -> anyhow::Result<(Value, String)> + Sync,
) -> anyhow::Result<()> {
    if let Some(lines) = form.batch()? {
        return run_batch(&lines, out, f);
    }
    let form = form.single()?.ok_or_else(|| anyhow!("no form given (use -d and -c, or --batch)"))?;
    let (v, t) = f(&form)?;
    out.emit(&v, &t)
}

fn model_value(point: &ExtendedPoint, twists: &[TwistDescriptor], out: &Out) -> (Value, String) {
    let rational = point.to_rational();
    let floats: Vec<String> = point.to_f64().iter().map(|x| out.float(*x)).collect();
    let mut text = format!("semistable model {point}\n  ≈ [{}]", floats.join(" : "));
    if let Some(r) = &rational {
        text.push_str(&format!("\n  over Q: {r}"));
    }
    for t in twists {
        text.push_str(&format!("\ntwist {t}  r = {}  ramification {}", fmt_rat(&t.r), t.ramification));
    }
    if twists.is_empty() {
        text.push_str("\nno twist needed");
    }
    (json!({ "point": point, "rational": rational, "twists": twists }), text)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out = Out { json: cli.json, precision: cli.precision };
    match cli.cmd {
        Cmd::Invariants { form, normalize } => with_form(&form, &out, |f| invariants_value(f, normalize)),
        Cmd::Classify { form } => with_form(&form, &out, classify_value),
        Cmd::Reduce { form, point, degree, prime, global } => {
            let (xi, d) = match (form.single()?, point.get()?) {
                (Some(f), None) => (evaluate(&f)?, f.degree()),
                (None, Some(p)) => {
                    let d = degree.ok_or_else(|| anyhow!("--point needs --degree"))?;
                    (ModuliPoint::from(p), d)
                }
                _ => bail!("give exactly one of a form (-d, -c) or a point (--point, --weights)"),
            };
            if xi.is_zero() {
                return Err(Error::GloballyUnstable.into());
            }
            match (prime, global) {
                (Some(p), false) => {
                    let p: Int = p.parse().map_err(|_| anyhow!("bad prime `{p}`"))?;
                    match local_semistable_model(&p, &xi, d) {
                        Ok((e, t)) => {
                            let (v, text) = model_value(&e, std::slice::from_ref(&t), &out);
                            out.emit(&v, &text)
                        }
                        Err(Error::AlreadySemistable(p)) => out.emit(
                            &json!({ "alreadySemistable": p.to_string() }),
                            &format!("already semistable at {p}"),
                        ),
                        Err(e) => Err(e.into()),
                    }
                }
                (None, true) => {
                    let (e, ts) = global_semistable_model(&xi, d)?;
                    let (v, text) = model_value(&e, &ts, &out);
                    out.emit(&v, &text)
                }
                _ => bail!("give --prime <p> or --global"),
            }
        }
        Cmd::Height { form, point, mode } => {
            let p = match (form.single()?, point.get()?) {
                (Some(f), None) => evaluate(&f)?.to_weighted()?,
                (None, Some(p)) => p,
                _ => bail!("give exactly one of a form (-d, -c) or a point (--point, --weights)"),
            };
            let h = weighted_height(&p, mode.into())?;
            out.emit(&serde_json::to_value(&h)?, &out.height(&h))
        }
        Cmd::Expand { degree, index } => {
            let sys = system_for_degree(degree)?;
            let idx: Vec<usize> = match index {
                Some(i) => vec![i],
                None => (0..sys.invariants.len()).collect(),
            };
            let mut vals = Vec::new();
            let mut text = Vec::new();
            for i in idx {
                let p = expand_symbolic(degree, i)?;
                text.push(format!("xi_{i} (weight {}) = {p}", sys.invariants[i].weight));
                vals.push(json!({ "index": i, "weight": sys.invariants[i].weight, "terms": p.len(), "poly": p.to_string() }));
            }
            out.emit(&Value::Array(vals), &text.join("\n"))
        }
        Cmd::Explain { degree } => {
            let sys = system_for_degree(degree)?;
            let mut text = vec![format!("degree {degree}, weights {:?}", sys.weights())];
            for i in &sys.intermediates {
                text.push(format!("  {} = {}", i.name, i.expr));
            }
            for inv in &sys.invariants {
                let s = inv.scaling.as_ref().map(fmt_rat).unwrap_or_else(|| "1".into());
                text.push(format!("  xi_{} = {} · {}   weight {}", inv.index, s, inv.expr, inv.weight));
                for fl in &inv.flags {
                    text.push(format!("      note: {}", serde_json::to_value(fl)?["note"].as_str().unwrap_or("")));
                }
            }
            for fl in &sys.flags {
                text.push(format!("  note: {}", serde_json::to_value(fl)?["note"].as_str().unwrap_or("")));
            }
            out.emit(&serde_json::to_value(sys)?, &text.join("\n"))
        }
        Cmd::VerifyTables => {
            let r = verify();
            out.emit(&serde_json::to_value(&r)?, &r.to_string())?;
            if r.count(Status::Fail) > 0 {
                return Err(DomainFailure(format!("{} checks failed", r.count(Status::Fail))).into());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
