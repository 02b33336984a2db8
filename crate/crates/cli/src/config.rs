//! Run configuration: command-line flags layered over an optional flat
//! `key = value` configuration file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use salpeter_core::{BoundMode, MassConfig, PotentialSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Category, boundedness and origin behaviour of a Hellmann potential.
    Classify,
    /// Analytic lower bound on the spectrum.
    Bounds,
    /// Rayleigh–Ritz upper bounds with virial residuals.
    Solve,
    /// Binding energies and lower bounds for the three reference Hellmann potentials.
    Table1,
    /// Upper bound on the number of bound states.
    Count,
    /// Minimize one eigenvalue over the basis parameters mu and beta.
    Optimize,
    /// Samples (r, V(r)) of the potential.
    Profile,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Classify => "classify",
            Command::Bounds => "bounds",
            Command::Solve => "solve",
            Command::Table1 => "table1",
            Command::Count => "count",
            Command::Optimize => "optimize",
            Command::Profile => "profile",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected text or csv)")),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "salpeter", version, about = "Two-sided spectral bounds for the spinless Salpeter equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

/// Every flag is optional so that unset flags fall through to the config file.
#[derive(Debug, Default, Args)]
struct Flags {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Coulomb coupling of -kappa/r.
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Yukawa coupling of -upsilon e^{-br}/r.
    #[arg(long, global = true, allow_hyphen_values = true)]
    upsilon: Option<f64>,
    /// Potential slope.
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Depth of the exponential well -V0 e^{-br}; replaces the Hellmann potential.
    #[arg(long, global = true, allow_hyphen_values = true)]
    v0: Option<f64>,
    /// Common constituent mass.
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    m1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    m2: Option<f64>,
    /// Orbital angular momentum.
    #[arg(long, global = true)]
    ell: Option<u32>,
    /// Laguerre basis exponent parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Laguerre basis scale parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Trial-space dimension.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Number of states to report.
    #[arg(long, global = true)]
    states: Option<usize>,
    /// Lower-bound selection: paper or best.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Output format: text or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Radial excitation targeted by `optimize`.
    #[arg(long, global = true)]
    target: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta_max: Option<f64>,
    /// Profile range and sample count.
    #[arg(long, global = true, allow_hyphen_values = true)]
    r_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
}

/// Keys accepted in a configuration file (the long flag names, with `-` or `_`).
pub const CONFIG_KEYS: &[&str] = &[
    "kappa", "upsilon", "b", "v0", "m", "m1", "m2", "ell", "beta", "mu", "dim", "states", "mode", "format", "output",
    "target", "mu_min", "mu_max", "beta_min", "beta_max", "r_min", "r_max", "points",
];

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kappa: f64,
    pub upsilon: f64,
    pub b: f64,
    pub v0: Option<f64>,
    pub m1: f64,
    pub m2: f64,
    pub ell: u32,
    pub beta: f64,
    pub mu: f64,
    pub dim: usize,
    pub states: usize,
    pub mode: BoundMode,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub target: usize,
    pub mu_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub r_range: (f64, f64),
    pub points: usize,
}

impl RunConfig {
    /// Defaults for `command`: kappa = upsilon = 0, b = m = mu = beta = 1,
    /// dim = 32, one state, mode best, text output.
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            kappa: 0.0,
            upsilon: 0.0,
            b: 1.0,
            v0: None,
            m1: 1.0,
            m2: 1.0,
            ell: 0,
            beta: 1.0,
            mu: 1.0,
            dim: 32,
            states: 1,
            mode: BoundMode::Best,
            format: Format::Text,
            output: None,
            target: 0,
            mu_range: (0.1, 10.0),
            beta_range: (1.0, 1.0),
            r_range: (0.01, 10.0),
            points: 200,
        }
    }

    /// The exponential well when `v0` is set, the Hellmann potential otherwise.
    pub fn potential(&self) -> salpeter_core::Result<PotentialSpec> {
        match self.v0 {
            Some(depth) => PotentialSpec::exponential_well(depth, self.b),
            None => PotentialSpec::hellmann(self.kappa, self.upsilon, self.b),
        }
    }

    pub fn masses(&self) -> salpeter_core::Result<MassConfig> {
        MassConfig::new(self.m1, self.m2)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped;
/// unknown or repeated keys are usage errors.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`, got {raw:?}", i + 1)))?;
        let key = key.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(usage(format!("config line {}: key {key:?} given twice", i + 1)));
        }
    }
    Ok(out)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Resolves a value: flag first, then the config file, else `None`.
fn layered<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| usage(format!("config key {key}: invalid value {raw:?}: {e}"))),
    }
}

/// Builds a validated [`RunConfig`] from `argv` (program name first).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => {
            let text = e.to_string();
            CliError::Usage(text.trim_start_matches("error: ").trim_end().to_string())
        }
    })?;
    let file = match &cli.flags.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    resolve(cli.command, cli.flags, &file)
}

fn resolve(command: Command, f: Flags, file: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::defaults(command);
    macro_rules! set {
        ($field:ident, $key:literal) => {
            if let Some(v) = layered(f.$field, file, $key)? {
                c.$field = v;
            }
        };
    }
    set!(kappa, "kappa");
    set!(upsilon, "upsilon");
    set!(b, "b");
    set!(ell, "ell");
    set!(beta, "beta");
    set!(mu, "mu");
    set!(dim, "dim");
    set!(states, "states");
    set!(target, "target");
    set!(points, "points");
    c.v0 = layered(f.v0, file, "v0")?;
    c.output = layered(f.output, file, "output")?;

    let m: Option<f64> = layered(f.m, file, "m")?;
    c.m1 = layered(f.m1, file, "m1")?.or(m).unwrap_or(c.m1);
    c.m2 = layered(f.m2, file, "m2")?.or(m).unwrap_or(c.m2);

    if let Some(raw) = layered::<String>(f.mode, file, "mode")? {
        c.mode = raw.parse().map_err(|e| usage(format!("mode: {e}")))?;
    }
    if let Some(raw) = layered::<String>(f.format, file, "format")? {
        c.format = raw.parse().map_err(usage)?;
    }

    // Optimization ranges default to a decade around mu and a pinned beta.
    let mu_min = layered(f.mu_min, file, "mu_min")?;
    let mu_max = layered(f.mu_max, file, "mu_max")?;
    c.mu_range = (mu_min.unwrap_or(c.mu / 10.0), mu_max.unwrap_or(c.mu * 10.0));
    let beta_min = layered(f.beta_min, file, "beta_min")?;
    let beta_max = layered(f.beta_max, file, "beta_max")?;
    c.beta_range = (beta_min.unwrap_or(c.beta), beta_max.unwrap_or(c.beta));
    let r_min = layered(f.r_min, file, "r_min")?;
    let r_max = layered(f.r_max, file, "r_max")?;
    c.r_range = (r_min.unwrap_or(0.01 / c.b), r_max.unwrap_or(10.0 / c.b));

    validate(&c)?;
    Ok(c)
}

fn require(ok: bool, precondition: &str, got: impl fmt::Display) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(usage(format!("precondition violated: {precondition} (got {got})")))
    }
}

/// Checks the flag domains against the preconditions of the numerical modules.
pub fn validate(c: &RunConfig) -> Result<(), CliError> {
    let finite = |x: f64| x.is_finite();
    require(c.kappa >= 0.0 && finite(c.kappa), "kappa >= 0", c.kappa)?;
    require(finite(c.upsilon), "upsilon finite", c.upsilon)?;
    require(c.b > 0.0 && finite(c.b), "b > 0", c.b)?;
    if let Some(v0) = c.v0 {
        require(v0 > 0.0 && finite(v0), "V0 > 0", v0)?;
    }
    require(c.m1 >= 0.0 && finite(c.m1), "m1 >= 0", c.m1)?;
    require(c.m2 >= 0.0 && finite(c.m2), "m2 >= 0", c.m2)?;
    require(c.beta > -0.5 && finite(c.beta), "beta > -1/2", c.beta)?;
    require(c.mu > 0.0 && finite(c.mu), "mu > 0", c.mu)?;
    require(c.dim >= 1, "dim >= 1", c.dim)?;
    require(c.states >= 1, "states >= 1", c.states)?;

    match c.command {
        Command::Classify | Command::Bounds => {
            require(c.v0.is_none(), "Hellmann potential (no --v0)", "an exponential well")?;
        }
        Command::Solve => {
            require(c.states <= c.dim, "states <= dim", format!("states = {}, dim = {}", c.states, c.dim))?;
            check_coulomb_sector(c, c.beta)?;
        }
        Command::Table1 => {
            require(c.m1 > 0.0 && c.m1 == c.m2, "m1 = m2 = m > 0", format!("m1 = {}, m2 = {}", c.m1, c.m2))?;
            require(c.dim >= 3, "dim >= 3", c.dim)?;
        }
        Command::Optimize => {
            let (lo, hi) = c.mu_range;
            require(lo > 0.0 && hi >= lo && finite(hi), "0 < mu_min <= mu_max", format!("[{lo}, {hi}]"))?;
            let (lo, hi) = c.beta_range;
            require(lo > -0.5 && hi >= lo && finite(hi), "-1/2 < beta_min <= beta_max", format!("[{lo}, {hi}]"))?;
            require(c.target < c.dim, "target < dim", format!("target = {}, dim = {}", c.target, c.dim))?;
            check_coulomb_sector(c, lo)?;
        }
        Command::Profile => {
            let (lo, hi) = c.r_range;
            require(lo > 0.0 && hi > lo && finite(hi), "0 < r_min < r_max", format!("[{lo}, {hi}]"))?;
            require(c.points >= 2, "points >= 2", c.points)?;
        }
        Command::Count => {}
    }
    if c.command == Command::Bounds {
        require(c.m1 == c.m2, "m1 = m2 for lower bounds", format!("m1 = {}, m2 = {}", c.m1, c.m2))?;
    }
    Ok(())
}

/// 1/r matrix elements in the ell = 0 sector need beta > 1/2.
fn check_coulomb_sector(c: &RunConfig, beta: f64) -> Result<(), CliError> {
    let inverse_r = c.potential().map(|v| v.has_inverse_r()).unwrap_or(false);
    if c.ell == 0 && inverse_r {
        require(beta > 0.5, "beta > 1/2 for ell = 0 with a 1/r potential", beta)?;
    }
    Ok(())
}
