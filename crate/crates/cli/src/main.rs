use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stemsize_core::asymptotics::{
    bracketing_check, constants, parse_points, ratio_profile, BracketConfig, BracketModel, RatioProfile,
};
use stemsize_core::ehp::{a_series, enumerate_i, verify_ehp_recurrence};
use stemsize_core::torsion::{im_j_lower, stable_torsion_bound, VanishingCurve};
use stemsize_core::verify::{self, DEFAULT_SEED};
use stemsize_core::{
    hilbert, hilbert_cumulative, max_over_h, parse_spec, preset, AlgebraSpec, Error, PresetId, PresetParams,
};

#[derive(Parser)]
#[command(
    name = "stemsize",
    version,
    about = "Exact size bounds for homotopy groups of spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert series of an algebra given as a DSL file or a preset.
    Hilbert(HilbertArgs),
    /// Hilbert series of a catalog algebra, or its DSL text.
    Preset(HilbertArgs),
    /// Stable torsion-exponent bound from a vanishing curve.
    Torsion(TorsionArgs),
    /// Completely unadmissible sequences and A(n;t).
    Ehp(EhpArgs),
    /// Ratio profiles and bracketing checks.
    Asymptotics(AsymptoticsArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Dsl,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Refuse truncations above this degree.
    #[arg(long, default_value_t = 1 << 22)]
    max_truncation: u64,
}

#[derive(Args)]
struct AlgebraArgs {
    /// DSL source file.
    #[arg(long, conflicts_with = "name")]
    spec: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long)]
    h: Option<u32>,
    /// Lower index for s_k; defaults to --h.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    drop_q0: bool,
    #[arg(long)]
    simplify_odd: bool,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long)]
    max_degree: Option<u64>,
    #[arg(long)]
    cumulative: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TorsionArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u64,
    /// linear, sqrt, or table:<path> with one value per line.
    #[arg(long, default_value = "linear")]
    curve: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EhpArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    excess: u64,
    #[arg(long)]
    max_dim: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, default_value = "2^6..2^14")]
    points: String,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=3))]
    exponent: u32,
    /// Run a bracketing check (may_model, r_h_e2, r_h_einf) at scale --m instead of a profile.
    #[arg(long, requires = "m")]
    bracket: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::Invalid(msg.into()))
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn guard(n: u64, limit: u64) -> Result<(), Failure> {
    if n > limit {
        return Err(Failure::Core(Error::ResourceGuard(format!(
            "truncation {n} exceeds --max-truncation {limit}"
        ))));
    }
    Ok(())
}

fn params(a: &AlgebraArgs) -> PresetParams {
    PresetParams {
        p: a.p,
        h: a.h,
        k: a.k.or(a.h),
        drop_q0: a.drop_q0,
        simplify_odd: a.simplify_odd,
    }
}

fn load_algebra(a: &AlgebraArgs) -> Result<AlgebraSpec, Failure> {
    match (&a.spec, &a.name) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            let spec = parse_spec(&text).map_err(Error::from)?;
            Ok(spec.with_label(path.display().to_string()))
        }
        (None, Some(name)) => Ok(preset(name.parse()?, &params(a))?),
        (None, None) => Err(invalid("give --spec <path> or --name <preset>")),
    }
}

/// `r_h_e2` / `r_h_einf` without `--h` stand for the maximum over `h`.
fn is_max_over_h(a: &AlgebraArgs) -> Result<Option<PresetId>, Failure> {
    if a.spec.is_some() || a.h.is_some() {
        return Ok(None);
    }
    match a.name.as_deref().map(str::parse::<PresetId>).transpose()? {
        Some(id @ (PresetId::RHE2 | PresetId::RHEinf)) => Ok(Some(id)),
        _ => Ok(None),
    }
}

fn series_out(series: &stemsize_core::TruncatedSeries, o: &Output) -> Result<Vec<u8>, Failure> {
    Ok(match o.format {
        Format::Json => {
            let mut s = series.to_json()?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            buf
        }
        Format::Dsl => return Err(invalid("--format dsl only applies to an algebra, not a series")),
    })
}

fn run_hilbert(args: HilbertArgs, dsl_default: bool) -> Result<(), Failure> {
    let o = &args.output;
    if o.format == Format::Dsl || (dsl_default && args.max_degree.is_none()) {
        if is_max_over_h(&args.algebra)?.is_some() {
            return Err(invalid("the maximum over h is not a single algebra; pass --h"));
        }
        let spec = load_algebra(&args.algebra)?;
        return emit(&o.out, spec.to_dsl().as_bytes());
    }
    let n = args.max_degree.ok_or_else(|| invalid("--max-degree is required"))?;
    guard(n, o.max_truncation)?;
    let series = if let Some(id) = is_max_over_h(&args.algebra)? {
        if !args.cumulative {
            return Err(invalid(
                "the maximum over h is only defined for cumulative series; add --cumulative",
            ));
        }
        max_over_h(id, args.algebra.p, n)?.series
    } else {
        let spec = load_algebra(&args.algebra)?;
        if args.cumulative {
            hilbert_cumulative(&spec, n)?
        } else {
            hilbert(&spec, n)?
        }
    };
    emit(&o.out, &series_out(&series, o)?)
}

fn load_curve(text: &str) -> Result<VanishingCurve, Failure> {
    match text {
        "linear" => Ok(VanishingCurve::Linear),
        "sqrt" => Ok(VanishingCurve::sqrt()),
        _ => match text.strip_prefix("table:") {
            Some(path) => {
                let body = fs::read_to_string(path)?;
                let values = body
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(|l| {
                        l.parse::<u64>()
                            .map_err(|_| invalid(format!("bad table value `{l}` in {path}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let curve = VanishingCurve::Table { values };
                curve.validate()?;
                Ok(curve)
            }
            None => Err(invalid(format!(
                "unknown curve `{text}` (expected linear, sqrt or table:<path>)"
            ))),
        },
    }
}

fn run_torsion(args: TorsionArgs) -> Result<(), Failure> {
    let o = &args.output;
    let curve = load_curve(&args.curve)?;
    let r = stable_torsion_bound(args.p, args.n, &curve)?;
    let im_j = if args.p == 2 {
        None
    } else {
        Some(im_j_lower(args.p, args.n)?)
    };
    let bytes = match o.format {
        Format::Json => {
            let mut v = serde_json::to_value(&r).map_err(Error::from)?;
            v["im_j_lower"] = json!(im_j);
            format!("{v}\n").into_bytes()
        }
        Format::Csv => {
            #[derive(serde::Serialize)]
            struct Row {
                p: u64,
                n: u64,
                g: u64,
                exact_sum: u64,
                closed_form: f64,
                curve: String,
                im_j_lower: Option<u32>,
            }
            let mut w = csv_writer();
            w.serialize(Row {
                p: r.p,
                n: r.n,
                g: r.g,
                exact_sum: r.exact_sum,
                closed_form: r.closed_form,
                curve: r.curve.to_string(),
                im_j_lower: im_j,
            })
            .map_err(Error::from)?;
            w.into_inner().map_err(|e| invalid(e.to_string()))?
        }
        Format::Dsl => return Err(invalid("--format dsl does not apply to torsion")),
    };
    emit(&o.out, &bytes)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn run_ehp(args: EhpArgs) -> Result<(), Failure> {
    let o = &args.output;
    guard(args.max_dim, o.max_truncation)?;
    let seqs = enumerate_i(args.p, args.excess, args.max_dim)?;
    let bytes = match o.format {
        Format::Json => {
            let series = a_series(args.p, args.excess, args.max_dim)?;
            let recurrence = verify_ehp_recurrence(args.p, args.excess, args.max_dim)?;
            let v = json!({
                "p": args.p,
                "excess": args.excess,
                "max_dim": args.max_dim,
                "sequences": seqs,
                "a_series": series,
                "recurrence_holds": recurrence,
            });
            format!("{v}\n").into_bytes()
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["dim", "seq"]).map_err(Error::from)?;
            for s in &seqs {
                let seq: Vec<String> = s
                    .entries
                    .iter()
                    .map(|e| {
                        if args.p == 2 {
                            e.i.to_string()
                        } else {
                            format!("{}:{}", e.epsilon, e.i)
                        }
                    })
                    .collect();
                w.write_record([s.dim.to_string(), seq.join(" ")])
                    .map_err(Error::from)?;
            }
            w.into_inner().map_err(|e| invalid(e.to_string()))?
        }
        Format::Dsl => return Err(invalid("--format dsl does not apply to ehp")),
    };
    emit(&o.out, &bytes)
}

fn run_asymptotics(args: AsymptoticsArgs) -> Result<(), Failure> {
    let o = &args.output;
    let p = args.algebra.p;
    if let Some(model) = &args.bracket {
        let model: BracketModel = model.parse()?;
        let m = args.m.expect("clap enforces --m");
        let report = bracketing_check(p, m, model, &BracketConfig::default())?;
        let bytes = match o.format {
            Format::Json => format!("{}\n", serde_json::to_string(&report).map_err(Error::from)?).into_bytes(),
            Format::Csv => {
                let mut w = csv_writer();
                for c in &report.checks {
                    w.serialize(c).map_err(Error::from)?;
                }
                w.into_inner().map_err(|e| invalid(e.to_string()))?
            }
            Format::Dsl => return Err(invalid("--format dsl does not apply to asymptotics")),
        };
        emit(&o.out, &bytes)?;
        return if report.ok { Ok(()) } else { Err(Failure::Verify) };
    }
    let points = parse_points(&args.points)?;
    let top = *points.iter().max().expect("parse_points is nonempty");
    guard(top, o.max_truncation)?;
    let profile: RatioProfile = match is_max_over_h(&args.algebra)? {
        Some(id) => {
            let best = max_over_h(id, p, top)?;
            stemsize_core::asymptotics::ratio_profile_of_cumulative(
                format!("max_h {id}(p={p})"),
                &best.series,
                args.exponent,
                &points,
            )?
        }
        None => ratio_profile(&load_algebra(&args.algebra)?, args.exponent, &points)?,
    };
    let bytes = match o.format {
        Format::Json => {
            let v = json!({ "constants": constants(p)?, "profile": profile });
            format!("{v}\n").into_bytes()
        }
        Format::Csv => {
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            buf
        }
        Format::Dsl => return Err(invalid("--format dsl does not apply to asymptotics")),
    };
    emit(&o.out, &bytes)
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let suites = verify::parse_suites(&args.suite)?;
    let report = verify::run(&suites, args.seed);
    emit(&args.out, report.to_string().as_bytes())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Hilbert(a) => run_hilbert(a, false),
        Command::Preset(a) => run_hilbert(a, true),
        Command::Torsion(a) => run_torsion(a),
        Command::Ehp(a) => run_ehp(a),
        Command::Asymptotics(a) => run_asymptotics(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => {
            eprintln!("stemsize: verification failed");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("stemsize: {e}");
            ExitCode::from(if e.is_resource_guard() { 3 } else { 1 })
        }
    }
}
