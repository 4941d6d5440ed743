//! `hpcc` — construct, verify, simulate, and compare secretive hotplug
//! coded-caching schemes.
//!
//! Exit codes: 0 success, 1 semantic failure (invalid parameters, failed
//! verification, decode failure, nonzero leakage), 2 I/O or parse failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hpcc_core::analysis::{
    admissible_multiplicities, baseline_curve, crossover, design_reference_comparison,
    envelope, format_decimal, lower_bound, thm1_points, thm2_points, AnalysisError,
    Envelope, Provenance, RatePoint, Rational,
};
use hpcc_core::design::{catalog, load_design, verify_design, DesignError, TDesign};
use hpcc_core::engine::{audit, run_once, trace_lines, EngineError};
use hpcc_core::gf::Field;
use hpcc_core::hppda::{man_hppda, tdesign_hppda, verify_hppda, HpPda, HpPdaError};
use hpcc_core::pda::{verify_pda, Pda};

#[derive(Parser)]
#[command(
    name = "hpcc",
    version,
    about = "Secretive hotplug coded caching: construction, simulation, analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an array or design file and print its parameters.
    Verify(VerifyArgs),
    /// Build an HpPDA and print it in the file format.
    Construct(SchemeArgs),
    /// Run one seeded placement + delivery round and audit it.
    Simulate(SimulateArgs),
    /// Write rate-memory curves and crossover reports as CSV.
    Curves(CurvesArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// What the file contains.
    #[arg(long, value_enum)]
    kind: FileKind,
    path: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileKind {
    Pda,
    Design,
    Hppda,
}

/// Scheme selection shared by `construct` and `simulate`: either the
/// subset scheme (--K/--Kp/--t) or a design scheme (--design/--a).
#[derive(Args)]
#[command(group = clap::ArgGroup::new("scheme").required(true).args(["k", "design"]))]
struct SchemeArgs {
    /// Total number of users K (subset scheme).
    #[arg(long = "K", value_name = "K", requires = "kp", requires = "t")]
    k: Option<usize>,
    /// Number of active users K'.
    #[arg(long = "Kp", value_name = "KP")]
    kp: Option<usize>,
    /// Placement parameter t in [0, K'-1].
    #[arg(long)]
    t: Option<usize>,
    /// Catalog name or file path of a t-design (design scheme).
    #[arg(long, requires = "a")]
    design: Option<String>,
    /// Multiplicities a_1,...,a_{t-1} for the design scheme.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<usize>>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Number of library files.
    #[arg(long = "N", value_name = "N")]
    n_files: usize,
    /// Active users, comma-separated.
    #[arg(long, value_delimiter = ',')]
    active: Vec<usize>,
    /// Demanded file of each active user, in the same order.
    #[arg(long, value_delimiter = ',')]
    demands: Vec<usize>,
    /// RNG seed; defaults to $HPCC_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Field width l for GF(2^l).
    #[arg(long, default_value_t = 8)]
    field_bits: u8,
    /// Field elements per share.
    #[arg(long, default_value_t = 1)]
    part_len: usize,
    /// Print the run structure; `--trace=full` adds payload bytes.
    #[arg(long, num_args = 0..=1, default_missing_value = "labels", value_parser = ["labels", "full"])]
    trace: Option<String>,
}

#[derive(Args)]
struct CurvesArgs {
    /// System triple K,Kp,N.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    system: Vec<usize>,
    /// Comma-separated schemes: man, baseline, bound,
    /// tdesign:<name|path>[:a1.a2+b1.b2] (omitted a-list = all admissible).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    schemes: Vec<String>,
    /// Output directory for points.csv, envelope.csv, crossover.csv.
    #[arg(long)]
    out: PathBuf,
}

/// Semantic failures exit 1, I/O and parse failures exit 2.
enum Failure {
    Semantic(String),
    Io(String),
}

impl Failure {
    fn semantic(e: impl std::fmt::Display) -> Failure {
        Failure::Semantic(e.to_string())
    }

    fn io(e: impl std::fmt::Display) -> Failure {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            // One write; a closed pipe (e.g. `hpcc ... | head`) is not an
            // error worth reporting.
            use std::io::Write;
            let _ = std::io::stdout().write_all(out.as_bytes());
            code
        }
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

type CmdOutput = (String, ExitCode);

fn run(cli: Cli) -> Result<CmdOutput, Failure> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Curves(args) => cmd_curves(args),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn cmd_verify(args: VerifyArgs) -> Result<CmdOutput, Failure> {
    let text = read_file(&args.path)?;
    let report = match args.kind {
        FileKind::Pda => {
            let pda = Pda::from_text(&text).map_err(Failure::io)?;
            match verify_pda(&pda) {
                Ok(p) => Ok(format!("PDA K={} F={} Z={} S={}", p.k, p.f, p.z, p.s)),
                Err(v) => Err(v.to_string()),
            }
        }
        FileKind::Design => {
            let design = match TDesign::from_text(&text) {
                Ok(d) => d,
                Err(e @ DesignError::Parse { .. }) => return Err(Failure::io(e)),
                Err(e) => return Err(Failure::semantic(e)),
            };
            match verify_design(&design) {
                Ok(()) => Ok(format!(
                    "design v={} k={} t={} lambda={} b={}",
                    design.v(),
                    design.k(),
                    design.t(),
                    design.lambda(),
                    design.b()
                )),
                Err(v) => Err(v.to_string()),
            }
        }
        FileKind::Hppda => {
            let hppda = match HpPda::from_text(&text) {
                Ok(h) => h,
                Err(e @ HpPdaError::Parse { .. }) => return Err(Failure::io(e)),
                Err(e) => return Err(Failure::semantic(e)),
            };
            match verify_hppda(&hppda) {
                Ok(()) => Ok(summary_line(&hppda)),
                Err(v) => Err(v.to_string()),
            }
        }
    };
    match report {
        Ok(line) => Ok((format!("{line}\n"), ExitCode::SUCCESS)),
        Err(witness) => Ok((format!("invalid: {witness}\n"), ExitCode::from(1))),
    }
}

fn summary_line(hppda: &HpPda) -> String {
    let p = hppda.params();
    format!(
        "HpPDA K={} Kp={} F={} Fp={} Z={} Zp={} S={}",
        p.k, p.kp, p.f, p.fp, p.z, p.zp, p.s
    )
}

impl SchemeArgs {
    fn build(&self) -> Result<HpPda, Failure> {
        match (self.k, &self.design) {
            (Some(k), None) => {
                // clap guarantees kp and t accompany --K.
                man_hppda(k, self.kp.unwrap(), self.t.unwrap()).map_err(Failure::semantic)
            }
            (None, Some(name)) => {
                let design = resolve_design(name)?;
                let a = self.a.clone().unwrap_or_default();
                tdesign_hppda(&design, &a).map_err(Failure::semantic)
            }
            _ => unreachable!("clap enforces exactly one scheme group"),
        }
    }
}

/// A design argument is a catalog name first, a file path second.
fn resolve_design(name: &str) -> Result<TDesign, Failure> {
    match catalog(name) {
        Ok(d) => Ok(d),
        Err(DesignError::UnknownDesign(_)) if Path::new(name).exists() => {
            match load_design(Path::new(name)) {
                Ok(d) => Ok(d),
                Err(e @ DesignError::Parse { .. }) => Err(Failure::io(e)),
                Err(e) => Err(Failure::semantic(e)),
            }
        }
        Err(e) => Err(Failure::semantic(e)),
    }
}

fn cmd_construct(args: SchemeArgs) -> Result<CmdOutput, Failure> {
    let hppda = args.build()?;
    let out = format!("# {}\n{}", summary_line(&hppda), hppda.to_text());
    Ok((out, ExitCode::SUCCESS))
}

fn engine_failure(e: EngineError) -> Failure {
    let label = match &e {
        EngineError::BadDemand { .. } => "BadDemand",
        EngineError::BadActiveSet(_) => "BadActiveSet",
        EngineError::DecodeFailed { .. } => "DecodeFailed",
        EngineError::HpPda(_) => "HpPda",
        EngineError::Sharing(_) => "Sharing",
    };
    Failure::Semantic(format!("{label}: {e}"))
}

fn cmd_simulate(args: SimulateArgs) -> Result<CmdOutput, Failure> {
    let hppda = args.scheme.build()?;
    let field = Field::with_width(args.field_bits).map_err(Failure::semantic)?;
    let seed = match args.seed {
        Some(s) => s,
        None => match std::env::var("HPCC_SEED") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|e| Failure::io(format!("HPCC_SEED {v:?}: {e}")))?,
            Err(_) => 0,
        },
    };
    let (p, d) = run_once(
        &hppda,
        args.n_files,
        &args.active,
        &args.demands,
        field,
        args.part_len,
        seed,
    )
    .map_err(engine_failure)?;
    let report = audit(&p, &d).map_err(engine_failure)?;
    let ok = report.decode_ok.iter().filter(|&&(_, ok)| ok).count();
    let joint_worst = report
        .views
        .iter()
        .map(|v| v.joint_non_demanded)
        .max()
        .unwrap_or(0);
    let leakage = report.worst_leakage().max(joint_worst);
    let mut out = format!(
        "M={} R={} decode={ok}/{} leakage={leakage}\n",
        report.memory,
        report.rate,
        report.decode_ok.len()
    );
    if let Some(mode) = &args.trace {
        for line in trace_lines(&p, &d, mode == "full") {
            let _ = writeln!(out, "{line}");
        }
    }
    let code = if ok == report.decode_ok.len() && leakage == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((out, code))
}

struct SchemeCurve {
    name: &'static str,
    points: Vec<RatePoint>,
    env: Envelope,
}

/// Number of samples for the lower-bound grid.
const BOUND_GRID: usize = 100;

fn parse_scheme(
    token: &str,
    k: usize,
    kp: usize,
    n: usize,
) -> Result<SchemeCurve, Failure> {
    let points = match token {
        "man" => thm1_points(k, kp, n).map_err(Failure::semantic)?,
        "baseline" => baseline_curve(k, n).map_err(Failure::semantic)?,
        "bound" => {
            let lo = Rational::new(1, 1);
            let hi = Rational::new((n * (kp - 1)) as i64, 1);
            (0..BOUND_GRID)
                .map(|i| {
                    let m = lo + (hi - lo) * Rational::new(i as i64, BOUND_GRID as i64 - 1);
                    Ok(RatePoint {
                        provenance: Provenance::Bound,
                        m,
                        r: lower_bound(n, kp, m).map_err(Failure::semantic)?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?
        }
        _ => {
            let rest = token
                .strip_prefix("tdesign:")
                .ok_or_else(|| Failure::Io(format!("unknown scheme {token:?}")))?;
            let (name, a_list) = match rest.split_once(':') {
                Some((name, spec)) => (name, Some(spec)),
                None => (rest, None),
            };
            let design = resolve_design(name)?;
            if design.v() != k || design.t() != kp {
                return Err(Failure::Semantic(format!(
                    "design {name} is a ({}, {}) system, the requested one is ({k}, {kp})",
                    design.v(),
                    design.t()
                )));
            }
            let vectors: Vec<Vec<usize>> = match a_list {
                Some(spec) => spec
                    .split('+')
                    .map(|v| {
                        v.split('.')
                            .map(|x| {
                                x.parse::<usize>().map_err(|e| {
                                    Failure::Io(format!("multiplicity {x:?} in {token:?}: {e}"))
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?,
                None => admissible_multiplicities(&design).map_err(Failure::semantic)?,
            };
            vectors
                .iter()
                .map(|a| thm2_points(&design, a, n).map_err(Failure::semantic))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let env = envelope(&points).map_err(Failure::semantic)?;
    let name = match token {
        "man" => "man",
        "baseline" => "baseline",
        "bound" => "bound",
        _ => "tdesign",
    };
    Ok(SchemeCurve { name, points, env })
}

fn cmd_curves(args: CurvesArgs) -> Result<CmdOutput, Failure> {
    let &[k, kp, n] = args.system.as_slice() else {
        return Err(Failure::Io(format!(
            "--system needs K,Kp,N, found {} values",
            args.system.len()
        )));
    };
    let curves: Vec<SchemeCurve> = args
        .schemes
        .iter()
        .map(|token| parse_scheme(token, k, kp, n))
        .collect::<Result<_, _>>()?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| Failure::io(format!("{}: {e}", args.out.display())))?;
    let open = |file: &str| {
        csv::Writer::from_path(args.out.join(file))
            .map_err(|e| Failure::io(format!("{file}: {e}")))
    };
    let fail = |e: csv::Error| Failure::io(e);

    let mut points = open("points.csv")?;
    points.write_record(["scheme", "param", "M", "R"]).map_err(fail)?;
    for curve in &curves {
        for p in &curve.points {
            points
                .write_record([
                    curve.name,
                    &p.provenance.param_label(),
                    &format_decimal(p.m, 6),
                    &format_decimal(p.r, 6),
                ])
                .map_err(fail)?;
        }
    }
    points.flush().map_err(Failure::io)?;

    let mut env = open("envelope.csv")?;
    env.write_record(["scheme", "M", "R"]).map_err(fail)?;
    for curve in &curves {
        for &(m, r) in curve.env.vertices() {
            env.write_record([curve.name, &format_decimal(m, 6), &format_decimal(r, 6)])
                .map_err(fail)?;
        }
    }
    env.flush().map_err(Failure::io)?;

    let mut summary = String::new();
    let mut cross = open("crossover.csv")?;
    cross
        .write_record(["schemeA", "schemeB", "M_from", "R_from", "M_to", "R_to"])
        .map_err(fail)?;
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            let row = match crossover(&a.env, &b.env, None) {
                Ok(row) => row,
                // Envelopes that never share an M window have no crossover.
                Err(AnalysisError::DisjointDomains) => None,
                Err(e) => return Err(Failure::semantic(e)),
            };
            match row {
                Some(c) => {
                    let fields = [
                        a.name.to_string(),
                        b.name.to_string(),
                        format_decimal(c.from.0, 2),
                        format_decimal(c.from.1, 2),
                        format_decimal(c.to.0, 2),
                        format_decimal(c.to.1, 2),
                    ];
                    cross.write_record(&fields).map_err(fail)?;
                    let _ = writeln!(summary, "crossover {}", fields.join(","));
                }
                None => {
                    let _ = writeln!(summary, "crossover {},{}: none", a.name, b.name);
                }
            }
        }
    }
    cross.flush().map_err(Failure::io)?;

    // The published table for the (8,3,8) design-vs-baseline comparison is
    // only partly reproducible; flag the deviation whenever that exact
    // configuration is requested.
    let table_one = (k, kp, n) == (8, 3, 8)
        && curves.iter().any(|c| c.name == "baseline")
        && args
            .schemes
            .iter()
            .any(|s| s == "tdesign:sqs-8-4-1:1.2+2.2");
    if table_one {
        let comparison = design_reference_comparison().map_err(Failure::semantic)?;
        for flag in &comparison.flags {
            let _ = writeln!(summary, "discrepancy: {flag}");
        }
    }
    Ok((summary, ExitCode::SUCCESS))
}
