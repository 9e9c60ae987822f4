//! Command-line front end. Every subcommand is a thin shell over a library
//! operation; nothing is recomputed here.
//!
//! Exit codes: 0 success, 1 a sweep (or tableau check) found a violation,
//! 2 usage or parameter error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::base::Base;
use crate::digits;
use crate::tableau::{build_tableau, verify_tableau};
use crate::takagi::{self, BAdicRational, DEFAULT_DEPTH};
use crate::verifier::{self, SweepOptions, SweepSpec, TheoremId, DEFAULT_WITNESS_CAP};
use crate::{ExactRational, Int};

const MAX_PLOT_LEVEL: u32 = 12;

#[derive(Debug, Parser)]
#[command(name = "digitsum", version, about = "Exact digital sums, Takagi-like functions and inequality sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single function or slack.
    Eval(EvalArgs),
    /// Run an exhaustive sweep of one inequality.
    Verify(VerifyArgs),
    /// Build and check the b x k digit tableau.
    Tableau(TableauArgs),
    /// Tabulate the extremal family of the second-difference bound.
    Sharpness(SharpnessArgs),
    /// Emit CSV samples of g_b, h_b, omega_b or Delange's F.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_int(s: &str) -> Result<Int, String> {
    s.trim()
        .parse::<Int>()
        .map_err(|_| format!("`{s}` is not an integer"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalFn {
    /// base-b digits of n, least significant first
    Digits,
    /// digit sum s_b(n)
    #[value(name = "s")]
    DigitSum,
    /// cumulative digit sum S_b(n)
    #[value(name = "S")]
    Cumulative,
    /// S_b(n) by direct summation
    #[value(name = "S-naive")]
    CumulativeNaive,
    /// block sum over [m, n)
    Block,
    /// average digit sum over [m, n)
    Avg,
    /// digitwise dominance of n by m
    Dominates,
    /// g_b(k / b^level)
    G,
    /// h_b(k / b^level)
    H,
    /// phi_b(k / b^level)
    Phi,
    /// omega_b(k / b^level)
    Omega,
    /// Delange's F(k / b^level) with error bound
    #[value(name = "delange-f")]
    DelangeF,
    /// S_b(n) minus Delange's formula, with error bound
    Delange,
    Superadditivity,
    Ternary,
    #[value(name = "general-bound")]
    GeneralBound,
    #[value(name = "times-b")]
    TimesB,
    #[value(name = "approx-convexity")]
    ApproxConvexity,
    Lev,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(value_enum)]
    function: EvalFn,
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long, value_parser = parse_int)]
    n: Option<Int>,
    #[arg(long, value_parser = parse_int)]
    m: Option<Int>,
    #[arg(long, value_parser = parse_int)]
    k: Option<Int>,
    #[arg(long, value_parser = parse_int)]
    l: Option<Int>,
    #[arg(long)]
    level: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// superadditivity | ternary | general-bound | times-b | approx-convexity-h | lev
    theorem: String,
    /// Comma-separated list of bases (theorem default when omitted).
    #[arg(long, value_delimiter = ',')]
    base: Vec<u32>,
    #[arg(long)]
    max_m: Option<u64>,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    max_k: Option<u64>,
    /// Smallest k swept (general-bound only).
    #[arg(long)]
    min_k: Option<u64>,
    /// Largest grid level (approx-convexity-h and lev).
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
    witness_cap: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TableauArgs {
    #[arg(long)]
    base: u32,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SharpnessArgs {
    #[arg(long)]
    base: u32,
    /// A single n (overrides --max-n).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 8)]
    max_n: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotFn {
    G,
    H,
    Omega,
    /// Delange's periodic function, decimal columns
    #[value(name = "F")]
    DelangeF,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(value_enum)]
    function: PlotFn,
    #[arg(long)]
    base: u32,
    #[arg(long)]
    level: u32,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[command(flatten)]
    output: Output,
}

/// A failure mapped to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl From<crate::Error> for UsageError {
    fn from(e: crate::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(UsageError(msg.into()))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return 2;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Eval(args) => {
            let format = args.output.format.unwrap_or(Format::Text);
            let text = eval(&args, format)?;
            emit(&args.output, stdout, text.as_bytes())?;
            Ok(0)
        }
        Command::Verify(args) => verify(&args, stdout),
        Command::Tableau(args) => tableau(&args, stdout),
        Command::Sharpness(args) => {
            let text = sharpness(&args)?;
            emit(&args.output, stdout, text.as_bytes())?;
            Ok(0)
        }
        Command::Plot(args) => {
            let data = plot(&args)?;
            emit(&args.output, stdout, &data)?;
            Ok(0)
        }
    }
}

fn emit(output: &Output, stdout: &mut dyn Write, bytes: &[u8]) -> CliResult<()> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(bytes)
                .and_then(|_| w.flush())
                .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout
            .write_all(bytes)
            .map_err(|e| UsageError(format!("cannot write to stdout: {e}"))),
    }
}

fn base(b: u32) -> CliResult<Base> {
    Ok(Base::new(b)?)
}

fn need<'a>(value: &'a Option<Int>, flag: &str, what: EvalFn) -> CliResult<&'a Int> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("eval {what:?} requires --{flag}")),
    }
}

fn need_level(level: Option<u32>, what: EvalFn) -> CliResult<u32> {
    level.ok_or_else(|| UsageError(format!("eval {what:?} requires --level")))
}

enum Evaluated {
    Exact(String),
    Bounded { value: ExactRational, error_bound: ExactRational },
    Json(Value),
}

fn eval(args: &EvalArgs, format: Format) -> CliResult<String> {
    let b = base(args.base)?;
    let f = args.function;
    let point = |k: &Int, level: u32| -> CliResult<Ratio<Int>> {
        let scale: Int = num_traits::pow(Int::from(b.get()), level as usize);
        Ok(Ratio::new(k.clone(), scale))
    };
    let badic = |k: &Int, level: u32| -> CliResult<BAdicRational<Int>> { Ok(BAdicRational::new(k.clone(), level, b)?) };

    let result = match f {
        EvalFn::Digits => {
            let d = digits::digits(need(&args.n, "n", f)?, b)?;
            Evaluated::Json(json!(d.digits()))
        }
        EvalFn::DigitSum => Evaluated::Exact(digits::digit_sum(need(&args.n, "n", f)?, b)?.to_string()),
        EvalFn::Cumulative => Evaluated::Exact(digits::cumulative_digit_sum(need(&args.n, "n", f)?, b)?.to_string()),
        EvalFn::CumulativeNaive => {
            Evaluated::Exact(digits::cumulative_digit_sum_naive(need(&args.n, "n", f)?, b)?.to_string())
        }
        EvalFn::Block => {
            Evaluated::Exact(digits::block_sum(need(&args.m, "m", f)?, need(&args.n, "n", f)?, b)?.to_string())
        }
        EvalFn::Avg => Evaluated::Exact(
            digits::average_digit_sum(need(&args.m, "m", f)?, need(&args.n, "n", f)?, b)?.to_string(),
        ),
        EvalFn::Dominates => Evaluated::Json(json!(digits::digit_dominates(
            need(&args.n, "n", f)?,
            need(&args.m, "m", f)?,
            b
        )?)),
        EvalFn::G => {
            let x = point(need(&args.k, "k", f)?, need_level(args.level, f)?)?;
            Evaluated::Exact(takagi::g_exact(&x, b).to_string())
        }
        EvalFn::H => Evaluated::Exact(
            takagi::h_at_badic(&badic(need(&args.k, "k", f)?, need_level(args.level, f)?)?).to_string(),
        ),
        EvalFn::Phi => {
            let x = point(need(&args.k, "k", f)?, need_level(args.level, f)?)?;
            Evaluated::Exact(takagi::phi(&x, b).to_string())
        }
        EvalFn::Omega => Evaluated::Exact(
            takagi::omega_at_badic(&badic(need(&args.k, "k", f)?, need_level(args.level, f)?)?).to_string(),
        ),
        EvalFn::DelangeF => {
            let x = point(need(&args.k, "k", f)?, need_level(args.level, f)?)?;
            let t = takagi::delange_f(&x, b, args.depth)?;
            Evaluated::Bounded {
                value: t.value,
                error_bound: t.error_bound,
            }
        }
        EvalFn::Delange => {
            let t = takagi::delange_residual(need(&args.n, "n", f)?, b, args.depth)?;
            Evaluated::Bounded {
                value: t.value,
                error_bound: t.error_bound,
            }
        }
        EvalFn::Superadditivity => Evaluated::Exact(
            verifier::superadditivity_slack(need(&args.m, "m", f)?, need(&args.n, "n", f)?, b)?.to_string(),
        ),
        EvalFn::Ternary => Evaluated::Exact(
            verifier::ternary_slack(need(&args.k, "k", f)?, need(&args.l, "l", f)?, need(&args.m, "m", f)?)?
                .to_string(),
        ),
        EvalFn::GeneralBound => Evaluated::Exact(
            verifier::general_bound_slack(need(&args.m, "m", f)?, need(&args.k, "k", f)?, b)?.to_string(),
        ),
        EvalFn::TimesB => Evaluated::Exact(
            verifier::times_b_slack(need(&args.n, "n", f)?, need(&args.k, "k", f)?, b)?.to_string(),
        ),
        EvalFn::ApproxConvexity => Evaluated::Exact(
            verifier::approx_convexity_h_slack(
                need(&args.m, "m", f)?,
                need(&args.k, "k", f)?,
                need_level(args.level, f)?,
                b,
            )?
            .to_string(),
        ),
        EvalFn::Lev => Evaluated::Exact(
            verifier::lev_slack(
                need(&args.m, "m", f)?,
                need(&args.k, "k", f)?,
                need(&args.l, "l", f)?,
                need_level(args.level, f)?,
            )?
            .to_string(),
        ),
    };

    let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Ok(match (format, result) {
        (Format::Text, Evaluated::Exact(v)) => format!("{v}\n"),
        (Format::Text, Evaluated::Json(v)) => format!("{v}\n"),
        (Format::Text, Evaluated::Bounded { value, error_bound }) => {
            format!("{} +/- {:e}\n", decimal(&value), error_bound.to_f64().unwrap_or(f64::INFINITY))
        }
        (Format::Json, Evaluated::Exact(v)) => format!("{}\n", json!({"function": name, "base": b.get(), "value": v})),
        (Format::Json, Evaluated::Json(v)) => format!("{}\n", json!({"function": name, "base": b.get(), "value": v})),
        (Format::Json, Evaluated::Bounded { value, error_bound }) => format!(
            "{}\n",
            json!({
                "function": name,
                "base": b.get(),
                "value": value.to_string(),
                "value_decimal": value.to_f64(),
                "error_bound": error_bound.to_f64(),
            })
        ),
        (Format::Csv, Evaluated::Exact(v)) => format!("value\n{v}\n"),
        (Format::Csv, Evaluated::Json(v)) => format!("value\n\"{}\"\n", v.to_string().replace('"', "\"\"")),
        (Format::Csv, Evaluated::Bounded { value, error_bound }) => format!(
            "value,error_bound\n{},{:e}\n",
            decimal(&value),
            error_bound.to_f64().unwrap_or(f64::INFINITY)
        ),
    })
}

fn decimal(q: &ExactRational) -> String {
    let v = q.to_f64().unwrap_or(f64::NAN);
    format!("{v}")
}

fn build_spec(args: &VerifyArgs) -> CliResult<SweepSpec> {
    let id: TheoremId = args.theorem.parse()?;
    let mut spec = SweepSpec::default_for(id);
    let bases: Vec<Base> = args.base.iter().map(|&b| base(b)).collect::<CliResult<_>>()?;

    let reject = |flag: &str| -> CliResult<()> { usage(format!("--{flag} does not apply to `verify {id}`")) };
    let mut unused = Vec::new();
    if args.max_m.is_some() {
        unused.push("max-m");
    }
    if args.max_n.is_some() {
        unused.push("max-n");
    }
    if args.max_k.is_some() {
        unused.push("max-k");
    }
    if args.min_k.is_some() {
        unused.push("min-k");
    }
    if args.level.is_some() {
        unused.push("level");
    }
    let mut take = |flag: &str| unused.retain(|f| *f != flag);

    match &mut spec {
        SweepSpec::Superadditivity { bases: bs, max_m, max_n } => {
            if !bases.is_empty() {
                *bs = bases;
            }
            if let Some(v) = args.max_m {
                *max_m = v;
                take("max-m");
            }
            if let Some(v) = args.max_n {
                *max_n = v;
                take("max-n");
            }
        }
        SweepSpec::Ternary { max_m } => {
            if bases.iter().any(|b| b.get() != 3) {
                return usage("`verify ternary` is base 3 only");
            }
            if let Some(v) = args.max_m {
                *max_m = v;
                take("max-m");
            }
        }
        SweepSpec::GeneralBound { bases: bs, max_m, min_k } => {
            if !bases.is_empty() {
                *bs = bases;
            }
            if let Some(v) = args.max_m {
                *max_m = v;
                take("max-m");
            }
            if let Some(v) = args.min_k {
                *min_k = v;
                take("min-k");
            }
        }
        SweepSpec::TimesB { bases: bs, max_n, max_k } => {
            if !bases.is_empty() {
                *bs = bases;
            }
            if let Some(v) = args.max_n {
                *max_n = v;
                take("max-n");
            }
            if let Some(v) = args.max_k {
                *max_k = v;
                take("max-k");
            }
        }
        SweepSpec::ApproxConvexityH { bases: bs, max_level } => {
            if !bases.is_empty() {
                *bs = bases;
            }
            if let Some(v) = args.level {
                *max_level = v;
                take("level");
            }
        }
        SweepSpec::Lev { max_level } => {
            if bases.iter().any(|b| b.get() != 3) {
                return usage("`verify lev` is base 3 only");
            }
            if let Some(v) = args.level {
                *max_level = v;
                take("level");
            }
        }
    }
    if let Some(flag) = unused.first() {
        reject(flag)?;
    }
    spec.validate()?;
    Ok(spec)
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let spec = build_spec(args)?;
    if args.jobs == Some(0) {
        return usage("--jobs must be at least 1");
    }
    let opts = SweepOptions {
        witness_cap: args.witness_cap,
        jobs: args.jobs,
    };
    let report = verifier::sweep(&spec, &opts)?;
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Text => report.to_string(),
        Format::Csv => return usage("`verify` supports --format text or json"),
    };
    emit(&args.output, stdout, text.as_bytes())?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn tableau(args: &TableauArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let t = build_tableau(base(args.base)?, args.k)?;
    let report = verify_tableau(&t);
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => t.to_string(),
        Format::Json => format!("{}\n", t.to_json()),
        Format::Csv => {
            let lines: Vec<String> = t
                .rows()
                .iter()
                .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
                .collect();
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&args.output, stdout, text.as_bytes())?;
    if !report.passed() {
        let _ = writeln!(io::stderr(), "tableau check failed: {:?}", report.violations);
        return Ok(1);
    }
    Ok(0)
}

fn sharpness(args: &SharpnessArgs) -> CliResult<String> {
    let b = base(args.base)?;
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => (1..=args.max_n).collect(),
    };
    let mut rows = Vec::new();
    for n in ns {
        let ratio = verifier::sharpness_ratio::<Int>(b, n)?;
        let closed = verifier::sharpness_closed_form::<Int>(b, n)?;
        let deficit = verifier::sharpness_deficit::<Int>(b, n)?;
        rows.push((n, ratio, closed, deficit));
    }
    Ok(match args.output.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = format!("base {b}: limit [(b+1)/2] = {}\n", b.half_ceil());
            s.push_str("n\tratio\tclosed_form\tdeficit\tmatches\n");
            for (n, r, c, d) in &rows {
                s.push_str(&format!("{n}\t{r}\t{c}\t{d}\t{}\n", r == c));
            }
            s
        }
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(n, r, c, d)| {
                    json!({"n": n, "ratio": r.to_string(), "closed_form": c.to_string(),
                           "deficit": d.to_string(), "matches": r == c})
                })
                .collect();
            format!("{}\n", json!({"base": b.get(), "rows": v}))
        }
        Format::Csv => {
            let mut s = String::from("n,ratio,closed_form,deficit,matches\n");
            for (n, r, c, d) in &rows {
                s.push_str(&format!("{n},{r},{c},{d},{}\n", r == c));
            }
            s
        }
    })
}

fn plot(args: &PlotArgs) -> CliResult<Vec<u8>> {
    let b = base(args.base)?;
    if args.level > MAX_PLOT_LEVEL {
        return usage(format!("--level must be at most {MAX_PLOT_LEVEL}"));
    }
    if let Some(Format::Text | Format::Json) = args.output.format {
        return usage("`plot` emits CSV only");
    }
    let scale: Int = num_traits::pow(Int::from(b.get()), args.level as usize);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| UsageError(format!("csv: {e}"));
    if args.function == PlotFn::DelangeF {
        w.write_record(["x", "value"]).map_err(csv_err)?;
    } else {
        w.write_record(["x_num", "x_den", "y_num", "y_den"]).map_err(csv_err)?;
    }
    let mut k = Int::from(0);
    while k <= scale {
        let x = Ratio::new(k.clone(), scale.clone());
        match args.function {
            PlotFn::DelangeF => {
                // F is 1-periodic; sample [0, 1] with F(1) = F(0).
                let t = takagi::delange_f(&x, b, args.depth)?;
                w.write_record([decimal(&x), decimal(&t.value)]).map_err(csv_err)?;
            }
            func => {
                let y = match func {
                    PlotFn::G => takagi::g_exact(&x, b),
                    PlotFn::H => takagi::h_at_badic(&BAdicRational::new(k.clone(), args.level, b)?),
                    _ => takagi::omega_at_badic(&BAdicRational::new(k.clone(), args.level, b)?),
                };
                w.write_record([
                    x.numer().to_string(),
                    x.denom().to_string(),
                    y.numer().to_string(),
                    y.denom().to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        k += Int::one();
    }
    w.into_inner().map_err(|e| UsageError(format!("csv: {e}")))
}
