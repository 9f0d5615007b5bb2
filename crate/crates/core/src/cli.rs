//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 no certificate in the gray band,
//! 4 a certificate failed to re-verify.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomposability::certify;
use crate::error::{Error, Result};
use crate::geometry::{figure1_csv, scan_csv, torus_scan, ScanOptions};
use crate::io::{
    matrix_to_csv, record_from_json, record_to_json, CertificateJson, ClassificationJson, MatrixJson, ProfileJson,
};
use crate::orthogonal::{
    profile_from_orthogonal, random_orthogonal, verify_profile_positivity, witness_from_orthogonal_seed,
};
use crate::positivity::{classify, ClassifyOptions, SeeSawOptions};
use crate::tolerance::ToleranceConfig;
use crate::witness::{witness_from_torus, AlphaVector, NamedWitness, Provenance, WitnessRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GRAY_ZONE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "bwl",
    version,
    about = "Construct, classify and certify Bell-diagonal entanglement witnesses"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "BWL_SEED", default_value_t = 0)]
    pub seed: u64,

    /// JSON file overriding any subset of the numerical tolerances.
    #[arg(long, global = true, value_name = "FILE")]
    pub tolerances: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a witness record.
    Gen(GenArgs),
    /// Decide block-positivity, complete positivity and decomposability.
    Classify(ClassifyArgs),
    /// Emit a decomposition or a PPT certificate.
    Certify(CertifyArgs),
    /// Re-check a certificate file from its own contents.
    Verify(VerifyArgs),
    /// Classify a lattice of torus phases and write CSV.
    Scan(ScanArgs),
    /// Write the circle, ellipse and marked-point CSVs for n = 3.
    Figure1(Figure1Args),
    /// Stochastic profile of a Haar-random orthogonal matrix.
    Profile(ProfileArgs),
    /// Export the witness matrix of a record.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["alpha", "phases", "orthogonal_seed", "named"])))]
pub struct GenArgs {
    /// Dimension of each factor. Inferred from --alpha when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated coefficients alpha_0..alpha_{n-1}.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,
    /// Comma-separated torus phases, floor((n-1)/2) of them.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 0..)]
    pub phases: Option<Vec<f64>>,
    /// Sign of c_{n/2} for even n.
    #[arg(long, allow_negative_numbers = true, requires = "phases")]
    pub sign: Option<i8>,
    /// Seed for a member of the orthogonal family.
    #[arg(long)]
    pub orthogonal_seed: Option<u64>,
    /// reduction, choi-I, choi-II, wprime or non-torus:K.
    #[arg(long)]
    pub named: Option<String>,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeeSawArgs {
    /// See-saw restarts.
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    /// See-saw sweeps per restart.
    #[arg(long, default_value_t = 200)]
    pub iterations: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Witness record JSON.
    pub record: PathBuf,
    #[command(flatten)]
    pub see_saw: SeeSawArgs,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Witness record JSON.
    pub record: PathBuf,
    /// Index k with alpha_k != alpha_{n-k}.
    #[arg(long)]
    pub k: Option<usize>,
    /// Weight of the k block in the PPT operator.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate JSON written by `certify`.
    pub certificate: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Dimension of each factor.
    #[arg(long)]
    pub n: usize,
    /// Lattice points per phase.
    #[arg(long)]
    pub grid: usize,
    /// Torus class for even n; both classes when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i8>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Directory receiving circle.csv, ellipse.csv and marked.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Samples along the circle.
    #[arg(long, default_value_t = 360)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Dimension of each factor. The orthogonal matrix is (n-1)x(n-1).
    #[arg(long)]
    pub n: usize,
    /// Also check positivity of the induced map by see-saw.
    #[arg(long)]
    pub check: bool,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Witness record JSON.
    pub record: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Map a library error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GrayZone { .. } => EXIT_GRAY_ZONE,
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_INVALID,
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load_tolerances(path: Option<&Path>) -> Result<ToleranceConfig> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(ToleranceConfig::default()),
    }
}

fn load_record(path: &Path) -> Result<WitnessRecord> {
    record_from_json(&fs::read_to_string(path)?)
}

fn gen(args: &GenArgs, seed_tol: &ToleranceConfig) -> Result<WitnessRecord> {
    let need_n = || {
        args.n
            .ok_or_else(|| Error::Parse("--n is required for this source".into()))
    };
    if let Some(v) = &args.alpha {
        let a = AlphaVector::new(v.clone())?;
        if let Some(n) = args.n {
            if n != a.dim() {
                return Err(Error::Parse(format!("--n {n} disagrees with {} alpha values", a.dim())));
            }
        }
        return Ok(WitnessRecord::new(a, Provenance::FromAlpha));
    }
    if let Some(phases) = &args.phases {
        return witness_from_torus(need_n()?, phases, args.sign);
    }
    if let Some(seed) = args.orthogonal_seed {
        return witness_from_orthogonal_seed(need_n()?, seed, seed_tol);
    }
    if let Some(name) = &args.named {
        let named: NamedWitness = name.parse()?;
        return Ok(WitnessRecord::new(named.alpha(need_n()?)?, Provenance::Named));
    }
    Err(Error::Parse("no witness source given".into()))
}

fn run_command(cli: &Cli) -> Result<()> {
    let tol = load_tolerances(cli.tolerances.as_deref())?;
    match &cli.command {
        Command::Gen(args) => {
            let r = gen(args, &tol)?;
            emit(args.output.as_deref(), &(record_to_json(&r)? + "\n"))
        }
        Command::Classify(args) => {
            let r = load_record(&args.record)?;
            let opts = ClassifyOptions {
                tol,
                see_saw: SeeSawOptions {
                    restarts: args.see_saw.restarts,
                    iterations: args.see_saw.iterations,
                    seed: cli.seed,
                    ..Default::default()
                },
            };
            let verdict = classify(r.alpha(), &opts)?;
            emit(
                args.output.as_deref(),
                &json(&ClassificationJson::new(r.alpha(), verdict))?,
            )
        }
        Command::Certify(args) => {
            let r = load_record(&args.record)?;
            let cert = certify(r.alpha(), args.k, args.epsilon, &tol)?;
            let file = CertificateJson::new(&r, &cert)?;
            // never hand out a certificate that does not check
            file.verify(&tol)?;
            emit(args.output.as_deref(), &json(&file)?)
        }
        Command::Verify(args) => {
            let file: CertificateJson = serde_json::from_str(&fs::read_to_string(&args.certificate)?)?;
            file.verify(&tol)?;
            emit(None, "ok\n")
        }
        Command::Scan(args) => {
            let opts = ScanOptions {
                classify: ClassifyOptions {
                    tol,
                    see_saw: SeeSawOptions {
                        seed: cli.seed,
                        ..Default::default()
                    },
                },
                jobs: args.jobs,
            };
            let rows = torus_scan(args.n, args.grid, args.sign, &opts)?;
            emit(args.output.as_deref(), &scan_csv(args.n, &rows))
        }
        Command::Figure1(args) => {
            let (circle, ellipse, marked) = figure1_csv(args.count)?;
            fs::create_dir_all(&args.out_dir)?;
            fs::write(args.out_dir.join("circle.csv"), circle)?;
            fs::write(args.out_dir.join("ellipse.csv"), ellipse)?;
            fs::write(args.out_dir.join("marked.csv"), marked)?;
            Ok(())
        }
        Command::Profile(args) => {
            if args.n < 2 {
                return Err(Error::Dimension(args.n));
            }
            let r = random_orthogonal(args.n - 1, cli.seed)?;
            let p = profile_from_orthogonal(&r)?;
            if args.check {
                let opts = SeeSawOptions {
                    seed: cli.seed,
                    ..Default::default()
                };
                verify_profile_positivity(&p, &opts, &tol)?;
            }
            emit(args.output.as_deref(), &json(&ProfileJson::new(&p, &tol))?)
        }
        Command::Export(args) => {
            let r = load_record(&args.record)?;
            let m = r.matrix().matrix();
            let text = match args.format {
                Format::Json => json(&MatrixJson::from(m))?,
                Format::Csv => matrix_to_csv(m),
            };
            emit(args.output.as_deref(), &text)
        }
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run_command(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
