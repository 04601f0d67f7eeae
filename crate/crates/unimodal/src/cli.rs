//! Subcommand dispatch for the `unimodal` binary.
//!
//! Every mathematical flag is parsed as an exact rational (`p/q`, integer,
//! or finite decimal). Exit codes: 0 on success, 2 on usage errors
//! (unknown subcommands, malformed flags), 1 on mathematical or I/O
//! failures. All outputs are deterministic; CSV files have a header row,
//! comma separators and `\n` line endings.

use std::fmt::Write as _;
use std::fs;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::analysis;
use crate::conjugacy::{self, ConjSystem};
use crate::exactnum::{format_decimal, parse_rat, rat, rat_to_f64, Rat};
use crate::format::{csv_rat, plot_points, read_plmap, svg_polyline, write_plmap};
use crate::itergroup;
use crate::plconj::{self, HalfMap};
use crate::plmap::PLMap;
use crate::semiconj;
use crate::{Error, Result};

fn rat_flag(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "unimodal",
    version,
    about = "Exact conjugacy toolkit for unimodal piecewise-linear interval maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugacy of the tent map with a skew tent map.
    Conj {
        #[command(subcommand)]
        action: ConjCommand,
    },
    /// Graph length of the conjugacy approximations.
    Length(LengthArgs),
    /// Derivative products, classification, and flattening statistics.
    Deriv(DerivArgs),
    /// The periodic factor of the conjugacy in logarithmic coordinates.
    Omega(OmegaArgs),
    /// Monotonicity diagnostics of the log-coordinate interpolants.
    Htilde(HtildeArgs),
    /// Constructive piecewise-linear conjugacy.
    Plconj {
        #[command(subcommand)]
        action: PlconjCommand,
    },
    /// Self-semiconjugations of the tent map.
    Semiconj {
        #[command(subcommand)]
        action: SemiconjCommand,
    },
    /// Maps whose iteration semigroup is a finite group.
    Itergroup {
        #[command(subcommand)]
        action: ItergroupCommand,
    },
    /// SVG plot of a map or a conjugacy approximation.
    Plot(PlotArgs),
}

#[derive(Subcommand)]
enum ConjCommand {
    /// Tabulate h on the grid A_n as CSV.
    Table(ConjTableArgs),
    /// Evaluate h at a rational point with a certified error bound.
    Eval(ConjEvalArgs),
}

#[derive(Args)]
struct ConjTableArgs {
    /// Skew parameter in (0,1).
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Grid level.
    #[arg(long)]
    n: u32,
    /// Print D-digit decimals instead of exact rationals.
    #[arg(long, conflicts_with = "exact")]
    digits: Option<usize>,
    /// Print exact rationals (the default).
    #[arg(long)]
    exact: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ConjEvalArgs {
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Evaluation point in [0,1].
    #[arg(long, value_parser = rat_flag)]
    x: Rat,
    /// Enclosure tolerance.
    #[arg(long, value_parser = rat_flag, default_value = "1/1000000")]
    tol: Rat,
    /// Print D-digit decimals instead of exact rationals.
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Args)]
struct LengthArgs {
    /// Skew parameter in (0,1).
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Level: `--formula` computes l_{n+1}, `--polyline` computes l_n.
    #[arg(long)]
    n: u64,
    /// Log-space closed form (the default).
    #[arg(long, conflicts_with = "polyline")]
    formula: bool,
    /// Exact polyline sum (desk-scale levels).
    #[arg(long)]
    polyline: bool,
}

#[derive(Args)]
struct DerivArgs {
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Classify h'(x) at this rational point and print the evidence.
    #[arg(long, value_parser = rat_flag, required_unless_present = "sample")]
    x: Option<Rat>,
    /// Difference-quotient depth.
    #[arg(long, default_value_t = 30)]
    depth: u32,
    /// Emit the quotient table as CSV.
    #[arg(long)]
    csv: bool,
    /// Instead: sample random digit strings and report the fraction of
    /// slope products below the threshold.
    #[arg(long)]
    sample: bool,
    /// Digit-string length for the sampler.
    #[arg(long, default_value_t = 200)]
    bits: u32,
    /// Number of sampled strings.
    #[arg(long, default_value_t = 10_000)]
    samples: u32,
    /// Sampler threshold.
    #[arg(long, default_value_t = 1e-3)]
    threshold: f64,
    /// Seed for the statistical sampler.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct OmegaArgs {
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Number of sample points across one period of log2 x.
    #[arg(long, default_value_t = 64)]
    samples: u32,
    #[arg(long, value_parser = rat_flag, default_value = "1/100000000")]
    tol: Rat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct HtildeArgs {
    #[arg(long, value_parser = rat_flag)]
    v: Rat,
    /// Grid level.
    #[arg(long)]
    n: u32,
    /// Interval index; all intervals when absent.
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum PlconjCommand {
    /// Extend a half map to a full conjugate of the tent map.
    Extend(PlconjExtendArgs),
    /// Build a map of prescribed linearity type with its conjugacy.
    Type(PlconjTypeArgs),
    /// Exact check of h∘f = g∘h.
    Check(PlconjCheckArgs),
    /// Non-conjugate perturbation of the tent map.
    Perturb(PlconjPerturbArgs),
}

#[derive(Args)]
struct PlconjExtendArgs {
    /// Which half the input file holds: left or right.
    #[arg(long)]
    side: String,
    /// Input half map (plmap format; domain [0,v] or [v,1]).
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    out_g: Option<String>,
    #[arg(long)]
    out_h: Option<String>,
}

#[derive(Args)]
struct PlconjTypeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    out_g: Option<String>,
    #[arg(long)]
    out_h: Option<String>,
}

#[derive(Args)]
struct PlconjCheckArgs {
    #[arg(long)]
    g: String,
    #[arg(long)]
    h: String,
}

#[derive(Args)]
struct PlconjPerturbArgs {
    #[arg(long, value_parser = rat_flag)]
    x0: Rat,
    #[arg(long, value_parser = rat_flag)]
    eps: Rat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum SemiconjCommand {
    /// Census of admissible (or continuable) grid semiconjugations.
    Census(SemiconjCensusArgs),
}

#[derive(Args)]
struct SemiconjCensusArgs {
    #[arg(long)]
    n: u32,
    /// Census the sawtooth restrictions instead of all admissible maps.
    #[arg(long)]
    continuable: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum ItergroupCommand {
    /// Classify the iteration semigroup of a map.
    Classify(ItergroupClassifyArgs),
    /// Decide conjugacy of two finite-group maps.
    Conjugate(ItergroupConjugateArgs),
}

#[derive(Args)]
struct ItergroupClassifyArgs {
    #[arg(long = "in")]
    input: String,
}

#[derive(Args)]
struct ItergroupConjugateArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct PlotArgs {
    /// What to plot: `hn` (conjugacy approximation) or `map` (plmap file).
    #[arg(long)]
    what: String,
    #[arg(long, value_parser = rat_flag)]
    v: Option<Rat>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

/// Runs the CLI on the given argv; returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn emit(out: &Option<String>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn load_map(path: &str) -> Result<PLMap> {
    read_plmap(&fs::read_to_string(path)?)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Conj { action } => match action {
            ConjCommand::Table(args) => conj_table(args),
            ConjCommand::Eval(args) => conj_eval(args),
        },
        Command::Length(args) => length(args),
        Command::Deriv(args) => deriv(args),
        Command::Omega(args) => omega(args),
        Command::Htilde(args) => htilde(args),
        Command::Plconj { action } => match action {
            PlconjCommand::Extend(args) => plconj_extend(args),
            PlconjCommand::Type(args) => plconj_type(args),
            PlconjCommand::Check(args) => plconj_check(args),
            PlconjCommand::Perturb(args) => plconj_perturb(args),
        },
        Command::Semiconj { action } => match action {
            SemiconjCommand::Census(args) => semiconj_census(args),
        },
        Command::Itergroup { action } => match action {
            ItergroupCommand::Classify(args) => itergroup_classify(args),
            ItergroupCommand::Conjugate(args) => itergroup_conjugate(args),
        },
        Command::Plot(args) => plot(args),
    }
}

fn fmt_value(r: &Rat, digits: Option<usize>) -> String {
    match digits {
        Some(d) => format_decimal(r, d),
        None => csv_rat(r),
    }
}

fn conj_table(args: ConjTableArgs) -> Result<()> {
    let sys = ConjSystem::new(args.v)?;
    let b = sys.level_b(args.n)?;
    let mut csv = String::from("x,h\n");
    let e = args.n - 1;
    for (k, h) in b.iter().enumerate() {
        let x = Rat::new((k as i64).into(), num_bigint::BigInt::from(1i64) << e);
        let _ = writeln!(
            csv,
            "{},{}",
            fmt_value(&x, args.digits),
            fmt_value(h, args.digits)
        );
    }
    emit(&args.out, &csv)
}

fn conj_eval(args: ConjEvalArgs) -> Result<()> {
    let sys = ConjSystem::new(args.v)?;
    let enc = sys.h_eval(&args.x, &args.tol)?;
    println!(
        "h({}) = {} +/- {}",
        csv_rat(&args.x),
        fmt_value(&enc.value, args.digits),
        fmt_value(&enc.error_bound, args.digits.map(|d| d + 2)),
    );
    Ok(())
}

fn length(args: LengthArgs) -> Result<()> {
    if args.polyline {
        let n = u32::try_from(args.n)
            .map_err(|_| Error::OutOfRange("polyline level too large".into()))?;
        println!("{}", analysis::graph_length_polyline(&args.v, n)?);
    } else {
        println!(
            "{}",
            analysis::graph_length_formula(rat_to_f64(&args.v), args.n)?
        );
    }
    Ok(())
}

fn deriv(args: DerivArgs) -> Result<()> {
    if args.sample {
        let frac = analysis::flattening_fraction(
            &args.v,
            args.bits,
            args.samples,
            args.threshold,
            args.seed,
        );
        println!(
            "flattened_fraction={frac} bits={} samples={} threshold={} seed={}",
            args.bits, args.samples, args.threshold, args.seed
        );
        return Ok(());
    }
    let x = args.x.expect("required unless --sample");
    let report = analysis::derivative_classify(&args.v, &x, args.depth)?;
    println!(
        "class={:?} trend_supports={} contradiction={}",
        report.class, report.trend_supports, report.contradiction
    );
    if args.csv {
        let mut csv = String::from("m,left,right\n");
        for s in &report.samples {
            let fmt = |v: Option<f64>| v.map(|q| q.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{},{},{}", s.m, fmt(s.left), fmt(s.right));
        }
        emit(&args.out, &csv)?;
    }
    Ok(())
}

fn omega(args: OmegaArgs) -> Result<()> {
    if args.samples == 0 {
        return Err(Error::OutOfRange("need at least one sample".into()));
    }
    // Sample x across [1/2, 1): log2 x then covers one period [-1, 0).
    let mut csv = String::from("x,omega1\n");
    for i in 0..args.samples {
        let x = rat(1, 2) + Rat::new(i.into(), (2 * args.samples).into());
        let w = analysis::omega1_extract(&args.v, &x, &args.tol)?;
        let _ = writeln!(csv, "{},{}", csv_rat(&x), w);
    }
    emit(&args.out, &csv)
}

fn htilde(args: HtildeArgs) -> Result<()> {
    let ks: Vec<u64> = match args.k {
        Some(k) => vec![k],
        None => (1..(1u64 << (args.n - 1))).collect(),
    };
    let mut csv = String::from("k,t_k,violation\n");
    for k in ks {
        match analysis::htilde_extremum(&args.v, args.n, k) {
            Ok((t, viol)) => {
                let _ = writeln!(csv, "{k},{t},{viol}");
            }
            // Constant interpolant: the piece is a pure power function,
            // monotone by itself; report it instead of aborting the sweep.
            Err(Error::Degenerate(_)) => {
                let _ = writeln!(csv, "{k},,false");
            }
            Err(e) => return Err(e),
        }
    }
    emit(&args.out, &csv)
}

fn plconj_extend(args: PlconjExtendArgs) -> Result<()> {
    let m = load_map_points(&args.input)?;
    let (g, h) = match args.side.as_str() {
        "left" => plconj::extend_left(&HalfMap::left(m)?)?,
        "right" => plconj::extend_right(&HalfMap::right(m)?)?,
        other => {
            return Err(Error::Validation(format!(
                "side must be `left` or `right`, got `{other}`"
            )))
        }
    };
    emit(&args.out_g, &write_plmap(&g))?;
    emit(&args.out_h, &write_plmap(&h))?;
    Ok(())
}

// Half maps are not total maps of [0,1]; read the raw point list.
fn load_map_points(path: &str) -> Result<Vec<(Rat, Rat)>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some("plmap 1") => {}
        _ => return Err(Error::InvalidMap("missing `plmap 1` header".into())),
    }
    let mut pts = Vec::new();
    for line in lines {
        let mut fields = line.split_whitespace();
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::InvalidMap(format!(
                "expected `x y` on line `{line}`"
            )));
        };
        pts.push((parse_rat(xs)?, parse_rat(ys)?));
    }
    Ok(pts)
}

fn plconj_type(args: PlconjTypeArgs) -> Result<()> {
    let (g, h) = plconj::construct_type(args.p, args.q)?;
    emit(&args.out_g, &write_plmap(&g))?;
    emit(&args.out_h, &write_plmap(&h))?;
    Ok(())
}

fn plconj_check(args: PlconjCheckArgs) -> Result<()> {
    let g = load_map(&args.g)?;
    let h = load_map(&args.h)?;
    println!("{}", plconj::check_conjugacy(&g, &h)?);
    Ok(())
}

fn plconj_perturb(args: PlconjPerturbArgs) -> Result<()> {
    let (g, cert) = plconj::perturb_non_conjugate(&args.x0, &args.eps)?;
    match &cert.peak {
        Some(peak) => println!("witness: peak {} < 1, so 1 has no preimage", csv_rat(peak)),
        None => {
            let (x_star, n, delta) = cert.periodic.as_ref().expect("one certificate");
            println!(
                "witness: g^{} is the identity on ({} - {d}, {} + {d}), f^{} is not",
                2 * n,
                csv_rat(x_star),
                csv_rat(x_star),
                2 * n,
                d = csv_rat(delta),
            );
        }
    }
    emit(&args.out, &write_plmap(&g))
}

fn semiconj_census(args: SemiconjCensusArgs) -> Result<()> {
    let mut csv = String::from("kind,values,witness_k,congruence_ok\n");
    if args.continuable {
        let census = semiconj::enumerate_continuable(args.n)?;
        for e in &census.entries {
            let values: Vec<String> = e.table.values.iter().map(csv_rat).collect();
            let _ = writeln!(
                csv,
                "continuable,{},{},{}",
                values.join(";"),
                e.witness_k,
                e.congruence_ok
            );
        }
        println!(
            "continuable count={} claimed_count={} matches_claimed={}",
            census.entries.len(),
            census.claimed_count,
            census.matches_claimed
        );
    } else {
        let census = semiconj::enumerate_admissible(args.n)?;
        for t in &census.tables {
            let values: Vec<String> = t.values.iter().map(csv_rat).collect();
            let _ = writeln!(csv, "admissible,{},,", values.join(";"));
        }
        println!(
            "admissible count={} claimed_formula={} matches_formula={}",
            census.tables.len(),
            census.formula_count,
            census.matches_formula
        );
    }
    emit(&args.out, &csv)
}

fn itergroup_classify(args: ItergroupClassifyArgs) -> Result<()> {
    let m = load_map(&args.input)?;
    match itergroup::classify_finite_group(&m) {
        itergroup::GroupClass::NotFinite => println!("NotFinite"),
        itergroup::GroupClass::Idempotent { a, b } => {
            println!("Idempotent {} {}", csv_rat(&a), csv_rat(&b))
        }
        itergroup::GroupClass::Order3 { a, b } => {
            println!("Order3 {} {}", csv_rat(&a), csv_rat(&b))
        }
    }
    Ok(())
}

fn itergroup_conjugate(args: ItergroupConjugateArgs) -> Result<()> {
    let a = load_map(&args.a)?;
    let b = load_map(&args.b)?;
    println!("{:?}", itergroup::conjugate_finite_group(&a, &b)?);
    Ok(())
}

fn plot(args: PlotArgs) -> Result<()> {
    let m = match args.what.as_str() {
        "hn" => {
            let v = args
                .v
                .ok_or_else(|| Error::Validation("--what hn needs --v".into()))?;
            let n = args
                .n
                .ok_or_else(|| Error::Validation("--what hn needs --n".into()))?;
            conjugacy::ConjSystem::new(v)?.h_n_approx(n)?
        }
        "map" => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| Error::Validation("--what map needs --in".into()))?;
            load_map(path)?
        }
        other => {
            return Err(Error::Validation(format!(
                "--what must be `hn` or `map`, got `{other}`"
            )))
        }
    };
    emit(&args.out, &svg_polyline(&plot_points(&m)))
}
