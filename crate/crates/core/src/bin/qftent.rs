use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qftent::approx::{approx_g_periodic, approx_p_periodic, period_branch};
use qftent::experiments::{
    delta_g_periodic_average, delta_g_random, fig1_data, sweep_periods, write_fig1, write_records,
    RunConfig,
};
use qftent::groverian::{log_measure, p_max};
use qftent::qft::{inverse_qft, periodic_qft_amplitudes, qft};
use qftent::shorprep::shor_demo;
use qftent::states::{
    balanced_w, basis_state, es_state, ghz, periodic_state, phased_es, random_state, w, EsSpec,
    PeriodicSpec,
};
use qftent::{Error, StateVector};

#[derive(Parser)]
#[command(name = "qftent", version, about = "Groverian entanglement of periodic states and the QFT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a state vector as JSON.
    Gen(GenArgs),
    /// Apply the QFT (or its inverse) to a JSON state.
    Qft(QftArgs),
    /// Compute P_max and the Groverian measure of a JSON state.
    Gmeasure(GmeasureArgs),
    /// Approximate entanglement of a periodic state.
    Approx(PeriodicArgs),
    /// Factor N with simulated order finding.
    Shor(ShorArgs),
    /// Numeric vs. approximate G over odd periods.
    Sweep(SweepArgs),
    /// QFT-induced change of G for periodic or random states.
    DeltaG(DeltaGArgs),
    /// Amplitude profile of a periodic state before and after the QFT.
    Fig1(Fig1Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Periodic,
    Es,
    Ghz,
    W,
    BalancedW,
    Random,
    Basis,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Comma-separated basis indices for `es`; the index for `basis`.
    #[arg(long)]
    set: Option<String>,
    /// Phase parameter; turns `es`/`periodic` into the phased ES state.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QftArgs {
    /// JSON state file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    inverse: bool,
    /// Emit the closed-form spectrum of a periodic state, `periodic:q,r,l`.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct OptFlags {
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_pair_step: bool,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl OptFlags {
    fn run_config(&self, samples: Option<usize>, cap: Option<usize>) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(path) => RunConfig::from_toml(&read_text(path)?)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            restarts: self.restarts,
            sweeps: self.sweeps,
            tol: self.tol,
            seed: self.seed,
            no_pair_step: self.no_pair_step.then_some(true),
            samples,
            cap,
        };
        Ok(file.merged_with(&flags))
    }
}

#[derive(Args)]
struct GmeasureArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    opt: OptFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PeriodicArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    l: usize,
}

#[derive(Args)]
struct ShorArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    attempts: usize,
    /// Main register width; smallest q with 2^q >= N^2 by default.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    l: usize,
    #[command(flatten)]
    opt: OptFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeltaKind {
    Periodic,
    Random,
}

#[derive(Args)]
struct DeltaGArgs {
    #[arg(long, value_enum)]
    kind: DeltaKind,
    #[arg(long)]
    q: usize,
    /// Random states to draw (default 500).
    #[arg(long)]
    samples: Option<usize>,
    /// Largest number of periodic states, by stride subsampling.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    opt: OptFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Fig1Args {
    #[command(flatten)]
    spec: PeriodicArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn io_err(path: &Path, e: io::Error) -> Error {
    Error::InvalidParameter(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn read_state(input: Option<&PathBuf>) -> Result<StateVector, Error> {
    let text = match input {
        Some(path) => read_text(path)?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("bad state JSON: {e}")))
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| io_err(path, e)),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::InvalidParameter(e.to_string())),
    }
}

fn emit_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    emit(out, text.as_bytes())
}

fn emit_csv<F>(out: Option<&PathBuf>, write: F) -> Result<(), Error>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), Error>,
{
    let mut buf = Vec::new();
    write(&mut buf)?;
    emit(out, &buf)
}

fn parse_indices(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad index `{s}`")))
        })
        .collect()
}

fn missing(flag: &str) -> Error {
    Error::InvalidParameter(format!("--{flag} is required for this kind"))
}

fn generate(args: &GenArgs) -> Result<StateVector, Error> {
    let q = args.q;
    let with_phase = |spec: EsSpec| match args.p {
        Some(p) => phased_es(&spec, p),
        None => es_state(&spec),
    };
    match args.kind {
        Kind::Periodic => {
            let spec = PeriodicSpec::new(q, args.r.ok_or_else(|| missing("r"))?, args.l.unwrap_or(0))?;
            Ok(match args.p {
                Some(_) => with_phase(spec.to_es()),
                None => periodic_state(&spec),
            })
        }
        Kind::Es => {
            let set = parse_indices(args.set.as_deref().ok_or_else(|| missing("set"))?)?;
            Ok(with_phase(EsSpec::new(q, set)?))
        }
        Kind::Ghz => ghz(q),
        Kind::W => w(q),
        Kind::BalancedW => {
            if q % 2 != 0 {
                return Err(Error::InvalidParameter("balanced W needs an even --q".into()));
            }
            balanced_w(q / 2)
        }
        Kind::Random => random_state(q, &mut ChaCha8Rng::seed_from_u64(args.seed)),
        Kind::Basis => {
            let k = match &args.set {
                Some(s) => *parse_indices(s)?.first().ok_or_else(|| missing("set"))?,
                None => 0,
            };
            basis_state(q, k)
        }
    }
}

fn parse_oracle(text: &str) -> Result<PeriodicSpec, Error> {
    let body = text
        .strip_prefix("periodic:")
        .ok_or_else(|| Error::InvalidParameter("oracle must look like periodic:q,r,l".into()))?;
    let v = parse_indices(body)?;
    match v.as_slice() {
        [q, r, l] => PeriodicSpec::new(*q, *r, *l),
        _ => Err(Error::InvalidParameter("oracle needs exactly q,r,l".into())),
    }
}

#[derive(Serialize)]
struct NearestJson<'a> {
    x: &'a [f64],
    theta: &'a [f64],
}

#[derive(Serialize)]
struct GmeasureJson<'a> {
    p_max: f64,
    g: f64,
    nearest: NearestJson<'a>,
    sweeps: usize,
    restarts: usize,
    restart_index: usize,
}

#[derive(Serialize)]
struct ApproxJson {
    q: usize,
    r: usize,
    l: usize,
    #[serde(rename = "A")]
    terms: usize,
    p_accurate: f64,
    p_simple: f64,
    g_accurate: f64,
    g_simple: f64,
    branch: &'static str,
    branch_simple: &'static str,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen(args) => {
            let psi = generate(&args)?;
            let mut text = serde_json::to_string(&psi).expect("serializable");
            text.push('\n');
            emit(args.out.as_ref(), text.as_bytes())?;
        }
        Command::Qft(args) => {
            let psi = match &args.oracle {
                Some(text) => {
                    let spec = parse_oracle(text)?;
                    let amps: Vec<Complex64> = periodic_qft_amplitudes(&spec);
                    StateVector::from_amplitudes(amps)?
                }
                None => {
                    let psi = read_state(args.input.as_ref())?;
                    if args.inverse {
                        inverse_qft(&psi)
                    } else {
                        qft(&psi)
                    }
                }
            };
            let mut text = serde_json::to_string(&psi).expect("serializable");
            text.push('\n');
            emit(args.out.as_ref(), text.as_bytes())?;
        }
        Command::Gmeasure(args) => {
            let psi = read_state(args.input.as_ref())?;
            let cfg = args.opt.run_config(None, None)?.optimizer();
            let res = p_max(&psi, &cfg)?;
            emit_json(
                args.out.as_ref(),
                &GmeasureJson {
                    p_max: res.p_max,
                    g: res.g,
                    nearest: NearestJson {
                        x: res.nearest.x(),
                        theta: res.nearest.theta(),
                    },
                    sweeps: res.sweeps_used,
                    restarts: res.restarts,
                    restart_index: res.restart_index,
                },
            )?;
        }
        Command::Approx(args) => {
            let spec = PeriodicSpec::new(args.q, args.r, args.l)?;
            let (p, tag) = approx_p_periodic(&spec);
            let g_simple = approx_g_periodic(args.q, args.r)?;
            emit_json(
                None,
                &ApproxJson {
                    q: args.q,
                    r: args.r,
                    l: args.l,
                    terms: spec.terms(),
                    p_accurate: p,
                    p_simple: (-g_simple).exp(),
                    g_accurate: log_measure(p),
                    g_simple,
                    branch: tag.branch.as_str(),
                    branch_simple: period_branch(args.q, args.r).as_str(),
                },
            )?;
        }
        Command::Shor(args) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let report = shor_demo(args.n, args.q, &mut rng, args.attempts)?;
            emit_json(args.out.as_ref(), &report)?;
            if !report.succeeded() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Sweep(args) => {
            let cfg = args.opt.run_config(None, None)?.optimizer();
            let records = sweep_periods(args.q, args.l, &cfg)?;
            emit_csv(args.out.as_ref(), |buf| write_records(&records, buf))?;
        }
        Command::DeltaG(args) => {
            let rc = args.opt.run_config(args.samples, args.cap)?;
            let cfg = rc.optimizer();
            let summary = match args.kind {
                DeltaKind::Periodic => delta_g_periodic_average(args.q, &cfg, rc.cap)?,
                DeltaKind::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    delta_g_random(args.q, rc.samples.unwrap_or(500), &cfg, &mut rng)?
                }
            };
            emit_csv(args.out.as_ref(), |buf| write_records(&summary.records, buf))?;
            eprintln!(
                "mean|dG| = {:.6e}  max|dG| = {:.6e}  mean dG = {:.6e}  std = {:.6e}  states = {}/{}",
                summary.mean_abs, summary.max_abs, summary.mean, summary.std, summary.count, summary.population
            );
        }
        Command::Fig1(args) => {
            let spec = PeriodicSpec::new(args.spec.q, args.spec.r, args.spec.l)?;
            let data = fig1_data(&spec);
            emit_csv(args.out.as_ref(), |buf| write_fig1(&data, buf))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
