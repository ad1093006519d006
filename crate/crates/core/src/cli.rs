//! Batch commands behind the `bernpos` binary.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or precondition error,
//! 3 verification failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{density_demo, positivity_scan, verify_bound, Backend, VerifyConfig};
use crate::bernstein::TensorBernstein;
use crate::combinatorics::DegreeVector;
use crate::config::{parse_degree, RunConfig};
use crate::error::{Error, Result};
use crate::moments::{lemma1_check, moment_rows, LemmaCheckConfig, MomentRow};
use crate::operators::{bernstein_op, error_profile, lorentz_q};
use crate::scalar::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bernpos", version, about = "Bernstein approximation with positive coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    Float,
    Exact,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Float => Backend::Float,
            BackendArg::Exact => Backend::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum BoundArg {
    /// Bernstein operator, r in {0, 1}, explicit constant d+1.
    Bernstein,
    /// Corrected operator, r >= 2, fitted constant.
    Corrected,
}

#[derive(Debug, Args, Clone, Default)]
pub struct FuncArgs {
    /// Registry function name.
    #[arg(long)]
    pub func: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Degrees: comma-separated, each uniform (`16`) or per axis (`8x16`).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Evaluation grid spacing.
    #[arg(long)]
    pub grid: Option<f64>,
    /// Use `scale * f + shift` instead of `f`.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaled absolute moments and their bounds as CSV.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        /// Number of uniform grid points on [0, 1].
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the absolute-moment bounds and report violations as JSON.
    LemmaCheck {
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        s_max: usize,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Replace the fourth-order constant (negative controls).
        #[arg(long, hide = true)]
        a4: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Build B (r <= 1) or Q (r >= 2), write it and its error profile.
    Approx {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Compare observed errors with the non-uniform bound over several degrees.
    Verify {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, value_enum)]
        bound: Option<BoundArg>,
        /// Declared constant for the corrected bound.
        #[arg(long)]
        constant: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Find the degree after which Q keeps nonnegative coefficients.
    Positivity {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Normalize Q to a probability density and report boundary behaviour.
    DensityDemo {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Flags merged over the optional config file.
struct Resolved {
    cfg: RunConfig,
    out: Option<PathBuf>,
    backend: Option<Backend>,
    seed: Option<u64>,
}

fn resolve(func: &FuncArgs, common: &Common) -> std::result::Result<Resolved, Failure> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &func.func {
        cfg.func = Some(v.clone());
    }
    if let Some(v) = func.d {
        cfg.d = Some(v);
    }
    if let Some(v) = &func.n {
        cfg.n = v.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(v) = func.r {
        cfg.r = Some(v);
    }
    if let Some(v) = func.grid {
        cfg.grid = Some(v);
    }
    if let Some(v) = func.scale {
        cfg.scale = v;
    }
    if let Some(v) = func.shift {
        cfg.shift = v;
    }
    let out = common.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    let backend = common.backend.map(Backend::from).or(cfg.backend);
    let seed = common.seed.or(cfg.seed);
    Ok(Resolved { cfg, out, backend, seed })
}

impl Resolved {
    fn d(&self) -> usize {
        self.cfg.d.unwrap_or(1)
    }

    fn degrees(&self) -> std::result::Result<Vec<DegreeVector>, Failure> {
        if self.cfg.n.is_empty() {
            return Err(Failure::Usage("missing --n".into()));
        }
        Ok(self
            .cfg
            .n
            .iter()
            .map(|item| parse_degree(item, self.d()))
            .collect::<Result<_>>()?)
    }

    fn single_degree(&self) -> std::result::Result<DegreeVector, Failure> {
        let mut all = self.degrees()?;
        if all.len() != 1 {
            return Err(Failure::Usage("expected a single degree for --n".into()));
        }
        Ok(all.remove(0))
    }
}

#[derive(Serialize)]
struct ApproxSummary {
    func: String,
    d: usize,
    n: Vec<usize>,
    r: usize,
    backend: Backend,
    degree: Vec<usize>,
    coefficients: usize,
    sup_error: f64,
    sup_location: Vec<f64>,
    vertex_max_err: f64,
    min_coefficient: f64,
}

fn run_command(cmd: Command) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Moments { n, s_max, grid, common } => {
            let rows = moment_rows(n, s_max, grid)?;
            let mut csv = String::from(MomentRow::CSV_HEADER);
            csv.push('\n');
            for row in rows {
                csv.push_str(&row.to_csv());
                csv.push('\n');
            }
            emit(common.out.as_deref(), &csv)
        }
        Command::LemmaCheck { n_max, s_max, grid, a4, common } => {
            let mut cfg = LemmaCheckConfig { n_max, s_max, grid_size: grid, ..Default::default() };
            if let Some(a4) = a4 {
                cfg.constants[4] = a4;
            }
            let report = lemma1_check(&cfg)?;
            emit(common.out.as_deref(), &json(&report))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify(format!("{} moment-bound violations", report.violations.len())))
            }
        }
        Command::Approx { func, common } => {
            let res = resolve(&func, &common)?;
            let f = res.cfg.oracle(res.d())?;
            let n = res.single_degree()?;
            let r = res.cfg.r.unwrap_or(0);
            let backend = res.backend.unwrap_or(Backend::Float);
            let p: TensorBernstein<f64> = match backend {
                Backend::Float if r <= 1 => bernstein_op(&f, &n)?.elevate(&n.elevated(r))?,
                Backend::Float => lorentz_q(&f, &n, r)?,
                Backend::Exact => lorentz_q::<Rational>(&f, &n, r)?.to_f64(),
            };
            let grid = res.cfg.grid.unwrap_or(if res.d() == 1 { 0.005 } else { 0.05 });
            let profile = error_profile(&f, &p, grid)?;
            let summary = ApproxSummary {
                func: f.name().to_string(),
                d: res.d(),
                n: n.entries().to_vec(),
                r,
                backend,
                degree: p.degree().entries().to_vec(),
                coefficients: p.coeffs().len(),
                sup_error: profile.sup_error,
                sup_location: profile.sup_location.clone(),
                vertex_max_err: profile.vertex_max_error(),
                min_coefficient: p.min_coefficient().0,
            };
            if let Some(stem) = &res.out {
                write_atomic(&stem.with_extension("bern"), &p.to_text())?;
                write_atomic(&stem.with_extension("csv"), &profile.to_csv())?;
                write_atomic(&stem.with_extension("json"), &json(&summary))?;
            } else {
                print!("{}", json(&summary));
            }
            Ok(())
        }
        Command::Verify { func, bound, constant, common } => {
            let res = resolve(&func, &common)?;
            let f = res.cfg.oracle(res.d())?;
            let r = res.cfg.r.unwrap_or(0);
            let n_list = res.degrees()?;
            let bound = bound.unwrap_or(if r <= 1 { BoundArg::Bernstein } else { BoundArg::Corrected });
            let grid = res.cfg.grid.unwrap_or(if res.d() == 1 { 0.005 } else { 1.0 / 32.0 });
            let mut cfg = match bound {
                BoundArg::Bernstein => VerifyConfig::bernstein(r, n_list, grid),
                BoundArg::Corrected => VerifyConfig::lorentz(r, n_list, grid),
            };
            if constant.is_some() {
                cfg.declared_constant = constant;
            }
            if res.d() >= 3 {
                cfg.seed = res
                    .seed
                    .ok_or_else(|| Failure::Usage("Monte Carlo verification (d >= 3) needs --seed".into()))?;
            } else if let Some(seed) = res.seed {
                cfg.seed = seed;
            }
            let report = verify_bound(&f, &cfg)?;
            emit(res.out.as_deref(), &json(&report))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify(format!("{} bound violations", report.violations.len())))
            }
        }
        Command::Positivity { func, n_max, common } => {
            let res = resolve(&func, &common)?;
            let f = res.cfg.oracle(res.d())?;
            let r = res.cfg.r.unwrap_or(2);
            let report = positivity_scan(&f, r, n_max, res.backend.unwrap_or(Backend::Exact))?;
            emit(res.out.as_deref(), &json(&report))?;
            match report.threshold {
                Some(_) => Ok(()),
                None => Err(Failure::Verify(format!("no positivity threshold up to n = {n_max}"))),
            }
        }
        Command::DensityDemo { func, common } => {
            let res = resolve(&func, &common)?;
            let f = res.cfg.oracle(res.d())?;
            let n = res.single_degree()?;
            let r = res.cfg.r.unwrap_or(2);
            let grid = res.cfg.grid.unwrap_or(if res.d() == 1 { 0.005 } else { 0.05 });
            let demo = density_demo(&f, &n, r, grid)?;
            if let Some(stem) = &res.out {
                write_atomic(&stem.with_extension("bern"), &demo.density.to_text())?;
                write_atomic(&stem.with_extension("json"), &json(&demo))?;
            } else {
                print!("{}", json(&demo));
            }
            Ok(())
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            EXIT_IO
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_VERIFY
        }
    }
}
