//! `nt`: run verification suites, moment experiments and fixture upkeep.
//!
//! Exit codes: 0 all checks passed, 1 some check failed, 2 usage or runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use weylcheck::error::{Error, Result};
use weylcheck::fixtures;
use weylcheck::lfunc::moment::{default_alpha, fourth_moment_coset};
use weylcheck::report::{emit_report, Format, MomentReport};
use weylcheck::suites::{self, Suite, SuiteParams, MOMENT_CASES, MOMENT_STEP, MOMENT_T};

#[derive(Parser)]
#[command(name = "nt", version, about = "Character-sum and L-function verification suites")]
struct Cli {
    /// Same as `nt fixtures --refresh`.
    #[arg(long, global = true)]
    refresh_fixtures: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite and emit its report.
    Verify {
        /// postnikov, gsum, gauss, kl3, tchi, hhat, rho, quadgauss, stationary,
        /// ramanujan, exponents, lfe, moment, afe or partialsums
        suite: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fourth moment along cosets; the pinned cases unless --q and --d are given.
    Moment {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long = "T", default_value_t = MOMENT_T)]
        t_max: f64,
        #[arg(long, default_value_t = MOMENT_STEP)]
        step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the pinned fixtures, or regenerate them with --refresh.
    Fixtures {
        #[arg(long)]
        refresh: bool,
        /// Target directory for --refresh.
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))]
        dir: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    q_max: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    beta: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    /// Sample size when a sweep exceeds the exhaustive limit.
    #[arg(long)]
    sample: Option<usize>,
    /// Precision unit for finite sums; residual threshold for analytic suites.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "T")]
    t_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long = "cmax")]
    c_max: Option<u64>,
}

impl From<ParamArgs> for SuiteParams {
    fn from(a: ParamArgs) -> Self {
        SuiteParams {
            q_max: a.q_max,
            p: a.p,
            beta: a.beta,
            q: a.q,
            d: a.d,
            sample: a.sample,
            tol: a.tol,
            seed: a.seed,
            t_max: a.t_max,
            step: a.step,
            c_max: a.c_max,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// json or csv; moment tables default to csv.
    #[arg(long)]
    format: Option<Format>,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Record wall time in the report (makes the output nondeterministic).
    #[arg(long)]
    wall_time: bool,
}

fn verify(name: &str, params: SuiteParams, out: &OutputArgs) -> Result<bool> {
    let suite: Suite = name.parse()?;
    let start = Instant::now();
    let mut report = suites::run(suite, &params)?;
    if out.wall_time {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    emit_report(&report, out.format.unwrap_or(Format::Json), &out.out)?;
    if !report.passed() {
        eprintln!("{}: {} of {} checks failed (max deviation {:e})", report.suite, report.failed, report.checks, report.max_deviation);
    }
    Ok(report.passed())
}

fn moment(q: Option<u64>, d: Option<u64>, t_max: f64, step: f64, out: &OutputArgs) -> Result<bool> {
    let cases = match (q, d) {
        (Some(q), Some(d)) => vec![(q, d)],
        (None, None) => MOMENT_CASES.to_vec(),
        _ => return Err(Error::Param("--q and --d go together".into())),
    };
    let reports = cases
        .into_iter()
        .map(|(q, d)| fourth_moment_coset(q, d, &default_alpha(q)?, t_max, step))
        .collect::<Result<Vec<MomentReport>>>()?;
    emit_report(&reports, out.format.unwrap_or(Format::Csv), &out.out)?;
    Ok(true)
}

fn fixtures_cmd(refresh: bool, dir: &Path, out: &OutputArgs) -> Result<bool> {
    if refresh {
        for path in fixtures::refresh(dir)? {
            eprintln!("wrote {}", path.display());
        }
        return Ok(true);
    }
    let report = fixtures::verify_builtin()?;
    emit_report(&report, out.format.unwrap_or(Format::Json), &out.out)?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Some(Command::Verify { suite, params, output }) => verify(&suite, params.into(), &output),
        Some(Command::Moment { q, d, t_max, step, output }) => moment(q, d, t_max, step, &output),
        Some(Command::Fixtures { refresh, dir, output }) => fixtures_cmd(refresh || cli.refresh_fixtures, &dir, &output),
        None if cli.refresh_fixtures => {
            let dir = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"));
            fixtures_cmd(true, &dir, &OutputArgs { format: None, out: "-".into(), wall_time: false })
        }
        None => {
            eprintln!("nt: missing subcommand (try `nt --help`)");
            return ExitCode::from(2);
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nt: {e}");
            ExitCode::from(2)
        }
    }
}
