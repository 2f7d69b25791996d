//! Command-line front end.
//!
//! Exit codes: 0 ok, 2 parse / bad parameters, 3 invalid state,
//! 4 certification failed, 5 property suite failed, 1 anything else.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use lsd_core::coset::{coset_generate, random_params, CosetParams};
use lsd_core::io::{parse_state, state_to_json, LoadError};
use lsd_core::lsd::{ls_decompose, verify_optimality_with, LSDecomposition, Tolerances};
use lsd_core::qstate::{lambda_spectrum, DensityMatrix};
use lsd_core::report::{digest, AnalysisReport, LsdSummary};
use lsd_core::suite::{render_table, run_suite, SuiteKind, SuiteReport};
use lsd_core::wootters::EntropyBase;

#[derive(Parser)]
#[command(
    name = "lsd-toolkit",
    version,
    about = "Two-qubit entanglement toolkit"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Logarithm base for the entanglement of formation.
    #[arg(long, value_enum, default_value_t = Base::Bits, global = true)]
    entropy_base: Base,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    #[value(alias = "2")]
    Bits,
    #[value(alias = "e")]
    Nats,
}

impl From<Base> for EntropyBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Bits => EntropyBase::Bits,
            Base::Nats => EntropyBase::Nats,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, concurrence and entanglement of formation of a state.
    Analyze(InputArgs),
    /// Lewenstein–Sanpera decomposition, optionally certified.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        /// Run the optimality certificate.
        #[arg(long)]
        certify: bool,
        /// Single tolerance replacing the default ladder.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Generate a state from coset parameters.
    Generate(GenerateArgs),
    /// Run the random property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Random cases per suite.
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Base seed; each case derives its own.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Single tolerance replacing every property tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// State JSON file; stdin when absent or "-".
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// CosetParams JSON file.
    #[arg(long, conflicts_with_all = ["lambdas", "seed"])]
    params: Option<PathBuf>,
    /// Comma-separated λ1,λ2,λ3,λ4.
    #[arg(long, value_parser = floats::<4>, allow_hyphen_values = true)]
    lambdas: Option<[f64; 4]>,
    /// θ1,θ2 (default 0,0).
    #[arg(long, value_parser = floats::<2>, allow_hyphen_values = true)]
    theta: Option<[f64; 2]>,
    /// ξ1,ξ2 ≥ 0 (default 0,0).
    #[arg(long, value_parser = floats::<2>, allow_hyphen_values = true)]
    xi: Option<[f64; 2]>,
    /// φ1,φ2 (default 0,0).
    #[arg(long, value_parser = floats::<2>, allow_hyphen_values = true)]
    phi: Option<[f64; 2]>,
    /// Draw random parameters from this seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Wootters,
    Lsd,
    Coset,
    All,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(_) => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<lsd_core::Error> for Failure {
    fn from(e: lsd_core::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

/// Output text plus an optional non-zero exit after writing it.
struct Outcome {
    text: String,
    fail: Option<Failure>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LSD_TOOLKIT_LOG", "off"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        write_output(cli.output.as_ref(), &out.text)?;
        out.fail.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::new(1, format!("cannot write output: {e}")))
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::new(2, format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load(args: &InputArgs) -> Result<(DensityMatrix, String), Failure> {
    let text = read_input(args.input.as_ref())?;
    let rho = parse_state(&text)?;
    log::info!("loaded state ({} bytes)", text.len());
    Ok((rho, digest(text.as_bytes())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let base = EntropyBase::from(cli.entropy_base);
    match &cli.command {
        Command::Analyze(input) => {
            let (rho, dig) = load(input)?;
            let report = AnalysisReport::analyze(&rho, dig, base)?;
            let text = match cli.format {
                Format::Json => to_json(&report),
                Format::Text => report.render_text(),
            };
            Ok(Outcome { text, fail: None })
        }
        Command::Decompose {
            input,
            certify,
            tol,
        } => decompose(cli, input, *certify, *tol, base),
        Command::Generate(args) => generate(cli, args),
        Command::Verify {
            suite,
            n,
            seed,
            tol,
        } => verify(cli, *suite, *n, *seed, *tol),
    }
}

fn invariant_failures(rho: &DensityMatrix, d: &LSDecomposition, tol: &Tolerances) -> Vec<String> {
    let checks = [
        (
            "reconstruction",
            d.reconstruct().dist(rho.matrix()),
            tol.decomposition,
        ),
        ("z_sum", d.z_sum_residual(), tol.decomposition),
        ("z_concurrence", d.z_concurrence(), tol.decomposition),
        (
            "weight_identity",
            d.weight_identity_residual(),
            tol.construction,
        ),
    ];
    checks
        .iter()
        .filter(|(_, r, t)| r > t)
        .map(|(n, r, t)| format!("{n}: residual {r:.3e} > {t:.1e}"))
        .collect()
}

fn decompose(
    cli: &Cli,
    input: &InputArgs,
    certify: bool,
    tol: Option<f64>,
    base: EntropyBase,
) -> Result<Outcome, Failure> {
    let (rho, dig) = load(input)?;
    let tolerances = tol.map(Tolerances::uniform).unwrap_or_default();
    let mut report = AnalysisReport::analyze(&rho, dig, base)?;

    let start = Instant::now();
    let d = ls_decompose(&rho)?;
    report.timings.decomposition_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report.decomposition = Some(LsdSummary::new(&rho, &d));
    let mut failures = invariant_failures(&rho, &d, &tolerances);

    let optimality = if certify {
        let start = Instant::now();
        let cert = verify_optimality_with(&rho, &d, tolerances)?;
        report.timings.certification_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        report.optimality = Some((&cert).into());
        failures.extend(cert.failures());
        Some(cert)
    } else {
        None
    };
    log::info!("decomposition weight {} ({})", d.weight, d.rank_class);

    let text = match cli.format {
        Format::Json => to_json(&json!({
            "report": report,
            "decomposition": d,
            "optimality": optimality,
        })),
        Format::Text => report.render_text(),
    };
    let fail = (!failures.is_empty())
        .then(|| Failure::new(4, format!("certification failed: {}", failures.join("; "))));
    Ok(Outcome { text, fail })
}

fn floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} values, got {}", v.len()))
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Result<Outcome, Failure> {
    let params = if let Some(path) = &args.params {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str::<CosetParams>(&text)
            .map_err(|e| Failure::new(2, format!("parse error: {e}")))?
    } else if let Some(l) = &args.lambdas {
        CosetParams {
            lambdas: *l,
            theta: args.theta.unwrap_or_default(),
            xi: args.xi.unwrap_or_default(),
            phi: args.phi.unwrap_or_default(),
        }
    } else if let Some(seed) = args.seed {
        random_params(&mut ChaCha8Rng::seed_from_u64(seed))
    } else {
        return Err(Failure::new(2, "give --params, --lambdas or --seed"));
    };
    let g = coset_generate(&params).map_err(|e| Failure::new(2, e.to_string()))?;
    let spectrum = lambda_spectrum(&g.rho)?;
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "matrix": g.rho.matrix(),
            "params": params,
            "lambdas": spectrum,
            "trace_factor": g.trace_factor,
        })),
        Format::Text => {
            let l = spectrum.0;
            format!(
                "trace factor      {:.6}\nlambda spectrum   {:.6} {:.6} {:.6} {:.6}\nconcurrence       {:.6}\n{}\n",
                g.trace_factor,
                l[0],
                l[1],
                l[2],
                l[3],
                spectrum.concurrence(),
                state_to_json(&g.rho)
            )
        }
    };
    Ok(Outcome { text, fail: None })
}

fn verify(
    cli: &Cli,
    suite: SuiteArg,
    n: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<Outcome, Failure> {
    let kinds: Vec<SuiteKind> = match suite {
        SuiteArg::Wootters => vec![SuiteKind::Wootters],
        SuiteArg::Lsd => vec![SuiteKind::Lsd],
        SuiteArg::Coset => vec![SuiteKind::Coset],
        SuiteArg::All => SuiteKind::ALL.to_vec(),
    };
    let reports: Vec<SuiteReport> = kinds
        .into_iter()
        .map(|k| {
            log::info!("running {} suite, n = {n}", k.name());
            run_suite(k, n, seed, tol)
        })
        .collect();
    let text = match cli.format {
        Format::Json => to_json(&reports),
        Format::Text => render_table(&reports),
    };
    let fail = reports.iter().find_map(|r| {
        r.first_failure().map(|(p, f)| {
            Failure::new(
                5,
                format!(
                    "{} suite: property {} failed at case {} (seed {}), residual {:.3e} > {:.1e}",
                    r.suite.name(),
                    p.name,
                    f.case,
                    f.seed,
                    f.residual,
                    p.tol
                ),
            )
        })
    });
    Ok(Outcome { text, fail })
}
