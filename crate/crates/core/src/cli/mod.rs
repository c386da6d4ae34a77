//! `radial-eit` command-line front end.
//!
//! Exit codes: 0 success, 1 a numerical check failed, 2 usage or
//! configuration error, 3 unsupported capability (e.g. `verify` for `d >= 4`).

mod commands;
mod output;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

pub use output::{format_number, Cell, Report, Table};

use crate::dimension::Dimension;
use crate::radial::{Preset, ProfileDocument, RadialProfile};
use crate::spectral::RegularizationSettings;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Default relative tolerance for the series-vs-moment comparison.
pub const DEFAULT_TOL_DUAL: f64 = 1e-8;
/// Default absolute tolerance for basis checks.
pub const DEFAULT_TOL_BASIS: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "radial-eit",
    version,
    about = "Spectra of the linearized EIT operator for radial perturbations of the unit ball"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalues by the series and moment routes, with the decay bound.
    Eigvals,
    /// Orthonormality and monomial-expansion checks of the Jacobi basis.
    Basis,
    /// Brute-force quadrature cross-check (d = 2 or 3).
    Verify,
    /// Finite-rank truncation errors against the a-priori bound.
    Truncate,
    /// Recover Jacobi coefficients from a spectrum.
    Invert,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eigvals => "eigvals",
            Command::Basis => "basis",
            Command::Verify => "verify",
            Command::Truncate => "truncate",
            Command::Invert => "invert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(alias = "structured")]
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Spatial dimension d >= 2.
    #[arg(long = "dim", global = true)]
    pub dim: Option<u32>,

    /// Named profile, e.g. `constant:1`, `annulus:0.5,1,1`, `ramp:2`,
    /// `polynomial:1,0,-2`.
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// Profile file (TOML with `dimension`, `breakpoints`, `pieces`).
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,

    /// Two-column `ell,lambda` CSV for `invert`.
    #[arg(long, global = true)]
    pub spectrum: Option<PathBuf>,

    /// Maximum spherical-harmonic degree (`truncate` defaults to 2(N+1)).
    #[arg(long = "L", global = true)]
    pub max_degree: Option<usize>,

    /// Jacobi truncation degree (`eigvals`, `basis`) or number of unknowns
    /// (`invert`).
    #[arg(long = "K", global = true)]
    pub jacobi_degree: Option<usize>,

    /// Truncation degree for `truncate`.
    #[arg(long = "N", global = true)]
    pub truncation: Option<usize>,

    /// Relative singular-value cutoff for `invert`.
    #[arg(long, global = true)]
    pub tau: Option<f64>,

    /// Ridge weight for `invert`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Relative tolerance for the series-vs-moment comparison.
    #[arg(long = "tol-dual", global = true)]
    pub tol_dual: Option<f64>,

    /// Absolute tolerance for basis checks.
    #[arg(long = "tol-basis", global = true)]
    pub tol_basis: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Unsupported(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Unsupported(m) => m,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::UnsupportedDimension(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSource {
    Preset(Preset),
    File(PathBuf),
}

/// Validated command configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d: Dimension,
    pub profile: Option<(ProfileSource, RadialProfile)>,
    pub max_degree: Option<usize>,
    pub jacobi_degree: Option<usize>,
    pub truncation: Option<usize>,
    pub spectrum: Option<PathBuf>,
    pub regularization: RegularizationSettings,
    pub tol_dual: f64,
    pub tol_basis: f64,
    pub overrides: Map<String, Value>,
}

impl RunConfig {
    pub fn from_options(opts: &Options) -> Result<Self, CliError> {
        let (source, file_dim) = match (&opts.preset, &opts.profile) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "give exactly one of --preset and --profile".into(),
                ))
            }
            (Some(p), None) => {
                let preset: Preset = p.parse()?;
                let profile = preset.profile()?;
                (Some((ProfileSource::Preset(preset), profile)), None)
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read profile {}: {e}", path.display()))
                })?;
                let (d, profile) = ProfileDocument::parse(&text)?.into_parts()?;
                (Some((ProfileSource::File(path.clone()), profile)), Some(d))
            }
            (None, None) => (None, None),
        };

        let d = match (opts.dim, file_dim) {
            (Some(d), Some(fd)) if d != fd.get() => {
                return Err(CliError::Usage(format!(
                    "--dim {d} conflicts with dimension {fd} in the profile file"
                )))
            }
            (Some(d), _) => Dimension::new(d)?,
            (None, Some(fd)) => fd,
            (None, None) => return Err(CliError::Usage("--dim is required".into())),
        };

        if opts.max_degree == Some(0) {
            return Err(CliError::Usage("--L must be at least 1".into()));
        }
        if let (Some(n), Some(l)) = (opts.truncation, opts.max_degree) {
            if n > l {
                return Err(CliError::Usage(format!("--N {n} exceeds --L {l}")));
            }
        }

        let mut overrides = Map::new();
        let mut tolerance = |name: &str, value: Option<f64>, default: f64| match value {
            Some(v) if !v.is_finite() || v <= 0.0 => Err(CliError::Usage(format!(
                "--{name} must be a positive number"
            ))),
            Some(v) => {
                overrides.insert(name.to_string(), Value::from(v));
                Ok(v)
            }
            None => Ok(default),
        };
        let tol_dual = tolerance("tol-dual", opts.tol_dual, DEFAULT_TOL_DUAL)?;
        let tol_basis = tolerance("tol-basis", opts.tol_basis, DEFAULT_TOL_BASIS)?;

        let defaults = RegularizationSettings::default();
        let regularization = RegularizationSettings {
            tau: opts.tau.unwrap_or(defaults.tau),
            alpha: opts.alpha.unwrap_or(defaults.alpha),
        };
        if regularization.tau.is_nan()
            || regularization.tau < 0.0
            || regularization.alpha.is_nan()
            || regularization.alpha < 0.0
        {
            return Err(CliError::Usage(
                "--tau and --alpha must be non-negative".into(),
            ));
        }

        Ok(RunConfig {
            d,
            profile: source,
            max_degree: opts.max_degree,
            jacobi_degree: opts.jacobi_degree,
            truncation: opts.truncation,
            spectrum: opts.spectrum.clone(),
            regularization,
            tol_dual,
            tol_basis,
            overrides,
        })
    }

    pub(crate) fn require_profile(&self) -> Result<&RadialProfile, CliError> {
        self.profile
            .as_ref()
            .map(|(_, p)| p)
            .ok_or_else(|| CliError::Usage("a profile is required (--preset or --profile)".into()))
    }

    pub(crate) fn require_max_degree(&self) -> Result<usize, CliError> {
        self.max_degree
            .ok_or_else(|| CliError::Usage("--L is required".into()))
    }

    pub(crate) fn base_metadata(&self) -> Map<String, Value> {
        let mut meta = Map::new();
        meta.insert("d".into(), Value::from(self.d.get()));
        if let Some((source, _)) = &self.profile {
            let desc = match source {
                ProfileSource::Preset(p) => format!("preset:{p}"),
                ProfileSource::File(path) => format!("file:{}", path.display()),
            };
            meta.insert("profile".into(), Value::from(desc));
        }
        meta.insert("overrides".into(), Value::Object(self.overrides.clone()));
        meta
    }
}

/// Run a parsed command and produce its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let config = RunConfig::from_options(&cli.options)?;
    match cli.command {
        Command::Eigvals => commands::eigvals(&config),
        Command::Basis => commands::basis(&config),
        Command::Verify => commands::verify(&config),
        Command::Truncate => commands::truncate(&config),
        Command::Invert => commands::invert(&config),
    }
}

/// Captured result of a full CLI invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name), run, and render.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: e.code(),
                stdout: String::new(),
                stderr: format!("error: {}\n", e.message()),
            }
        }
    };
    let rendered = match cli.options.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    let verdict = format!(
        "{}: {}\n",
        report.command,
        if report.pass { "pass" } else { "FAIL" }
    );
    match &cli.options.out {
        Some(path) => match fs::write(path, rendered) {
            Ok(()) => Outcome {
                code: report.exit_code(),
                stdout: String::new(),
                stderr: verdict,
            },
            Err(e) => Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code: report.exit_code(),
            stdout: rendered,
            stderr: verdict,
        },
    }
}
