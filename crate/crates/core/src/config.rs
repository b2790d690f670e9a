//! Command-line and config-file handling.
//!
//! Config files are flat `key = value` text; `#` starts a comment. Keys are
//! the long flag names with either `-` or `_` separators. Flags take
//! precedence over the file, the file over `KINSTAB_THREADS`, and that over
//! the built-in defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::drift::{check_regularity, DriftKind, DriftSpec};
use crate::harness::{resolve_threads, ExperimentConfig};
use crate::kinetic::PhasePoint;
use crate::scheme::Quadrature;

pub const THREADS_ENV: &str = "KINSTAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "kinstab",
    version,
    about = "Strong convergence experiments for the shifted Euler scheme"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate strong errors over a list of coarse grids and fit the order.
    Rates(Flags),
    /// Write one coupled set of coarse and reference trajectories.
    Simulate(Flags),
    /// Distributional checks of the stable noise sampler.
    DiagnoseNoise(Flags),
    /// Boundedness and regularity checks of the configured drift.
    DiagnoseDrift(Flags),
}

impl Command {
    fn flags(&self) -> &Flags {
        match self {
            Command::Rates(f)
            | Command::Simulate(f)
            | Command::DiagnoseNoise(f)
            | Command::DiagnoseDrift(f) => f,
        }
    }

    fn kind(&self) -> SubcommandKind {
        match self {
            Command::Rates(_) => SubcommandKind::Rates,
            Command::Simulate(_) => SubcommandKind::Simulate,
            Command::DiagnoseNoise(_) => SubcommandKind::DiagnoseNoise,
            Command::DiagnoseDrift(_) => SubcommandKind::DiagnoseDrift,
        }
    }
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Stable index in (1, 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hoelder exponent of the drift.
    #[arg(long)]
    pub beta: Option<f64>,
    /// zero | constant | separable | multiscale
    #[arg(long)]
    pub drift: Option<String>,
    /// Drift amplitude A; a constant drift uses c = A in every coordinate.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Number of scales K of the multiscale drift.
    #[arg(long)]
    pub scales: Option<usize>,
    /// Comma-separated coarse step counts, e.g. 16,32,64.
    #[arg(long)]
    pub n_list: Option<String>,
    /// Steps of the reference grid, a power of two.
    #[arg(long)]
    pub n_fine: Option<usize>,
    /// Monte Carlo paths M.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Moment m of the strong error.
    #[arg(long)]
    pub moment: Option<f64>,
    /// In-step quadrature nodes; `aligned` uses n_fine / n.
    #[arg(long)]
    pub quad: Option<String>,
    /// Master seed; path p uses stream (seed, p).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads, 0 for all cores. Falls back to KINSTAB_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sample count for the diagnostics.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Dimension d of position and velocity.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Initial condition as 2d comma-separated values, positions first.
    #[arg(long)]
    pub z0: Option<String>,
    /// Seed of the multiscale phase offsets.
    #[arg(long)]
    pub phase_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcommandKind {
    Rates,
    Simulate,
    DiagnoseNoise,
    DiagnoseDrift,
}

impl SubcommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            SubcommandKind::Rates => "rates",
            SubcommandKind::Simulate => "simulate",
            SubcommandKind::DiagnoseNoise => "diagnose-noise",
            SubcommandKind::DiagnoseDrift => "diagnose-drift",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub subcommand: SubcommandKind,
    pub alpha: f64,
    pub beta: f64,
    pub drift_kind: DriftKind,
    pub amplitude: f64,
    pub scales: usize,
    pub n_list: Vec<usize>,
    pub n_fine: usize,
    pub paths: usize,
    pub moment: f64,
    pub quad: Quadrature,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub samples: usize,
    pub dim: usize,
    pub z0: PhasePoint,
    pub phase_seed: u64,
    drift: DriftSpec,
}

const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "drift",
    "amplitude",
    "scales",
    "n_list",
    "n_fine",
    "paths",
    "moment",
    "quad",
    "seed",
    "threads",
    "out",
    "samples",
    "dim",
    "z0",
    "phase_seed",
];

/// Parses `key = value` lines, rejecting unknown or repeated keys.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            ConfigError(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            ))
        })?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError(format!("unknown config key `{}`", k.trim())));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(ConfigError(format!("config key `{key}` given twice")));
        }
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse()
        .map_err(|_| ConfigError(format!("invalid value `{raw}` for `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, raw: &str) -> Result<Vec<T>, ConfigError> {
    raw.split(',').map(|s| parse_value(key, s.trim())).collect()
}

struct Layers<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layers<'_> {
    /// Flag value, else file value, else `default`.
    fn pick<T: std::str::FromStr + Clone>(
        &self,
        key: &str,
        flag: &Option<T>,
        default: T,
    ) -> Result<T, ConfigError> {
        match (flag, self.file.get(key)) {
            (Some(v), _) => Ok(v.clone()),
            (None, Some(raw)) => parse_value(key, raw),
            (None, None) => Ok(default),
        }
    }

    fn pick_raw(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }
}

/// Parses `argv` (including the program name) on top of an optional config
/// file text. The threads fallback is read from `KINSTAB_THREADS`.
pub fn parse_config(argv: &[String], file: Option<&str>) -> Result<CliConfig, ConfigError> {
    let env = std::env::var(THREADS_ENV).ok();
    parse_config_with_env(argv, file, env.as_deref())
}

pub fn parse_config_with_env(
    argv: &[String],
    file: Option<&str>,
    env_threads: Option<&str>,
) -> Result<CliConfig, ConfigError> {
    let cli = Cli::try_parse_from(argv)
        .map_err(|e| ConfigError(e.to_string().trim().replace('\n', " ")))?;
    resolve(&cli.command, file, env_threads)
}

pub fn resolve(
    command: &Command,
    file: Option<&str>,
    env_threads: Option<&str>,
) -> Result<CliConfig, ConfigError> {
    let f = command.flags();
    let subcommand = command.kind();
    let file_map = match file {
        Some(text) => parse_config_text(text)?,
        None => BTreeMap::new(),
    };
    let layers = Layers { file: &file_map };

    let alpha = layers.pick("alpha", &f.alpha, 1.5)?;
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(ConfigError(format!(
            "alpha = {alpha} is outside the stable range (1, 2)"
        )));
    }
    let beta = layers.pick("beta", &f.beta, 0.6)?;
    check_regularity(alpha, beta)?;

    let drift_kind: DriftKind = layers
        .pick_raw("drift", &f.drift)
        .as_deref()
        .unwrap_or("multiscale")
        .parse()?;
    let amplitude = layers.pick("amplitude", &f.amplitude, 1.0)?;
    let scales = layers.pick("scales", &f.scales, 12)?;
    let n_list = match layers.pick_raw("n_list", &f.n_list) {
        Some(raw) => parse_list("n_list", &raw)?,
        None => vec![16, 32, 64, 128, 256, 512],
    };
    let n_fine = layers.pick("n_fine", &f.n_fine, 8192)?;
    let paths = layers.pick("paths", &f.paths, 2000)?;
    let moment = layers.pick("moment", &f.moment, 2.0)?;
    let quad = match layers.pick_raw("quad", &f.quad).as_deref() {
        None | Some("aligned") => Quadrature::Aligned,
        Some(raw) => Quadrature::Fixed(parse_value("quad", raw)?),
    };
    let seed = layers.pick("seed", &f.seed, 42)?;
    let env = env_threads
        .map(|raw| parse_value::<usize>(THREADS_ENV, raw))
        .transpose()?;
    let threads = resolve_threads(layers.pick("threads", &f.threads, env.unwrap_or(0))?);
    let samples = layers.pick("samples", &f.samples, 100_000)?;
    let dim = layers.pick("dim", &f.dim, 1)?;
    if dim == 0 {
        return Err(ConfigError("dim must be at least 1".into()));
    }
    let z0 = match layers.pick_raw("z0", &f.z0) {
        Some(raw) => {
            let vals: Vec<f64> = parse_list("z0", &raw)?;
            if vals.len() != 2 * dim {
                return Err(ConfigError(format!(
                    "z0 needs 2*dim = {} values, got {}",
                    2 * dim,
                    vals.len()
                )));
            }
            PhasePoint::new(vals[..dim].to_vec(), vals[dim..].to_vec())?
        }
        None => PhasePoint::origin(dim),
    };
    let phase_seed = layers.pick("phase_seed", &f.phase_seed, 0)?;
    let out = match (&f.out, file_map.get("out")) {
        (Some(p), _) => p.clone(),
        (None, Some(raw)) => PathBuf::from(raw),
        (None, None) => match subcommand {
            SubcommandKind::DiagnoseNoise | SubcommandKind::DiagnoseDrift => PathBuf::from("."),
            _ => {
                return Err(ConfigError(format!(
                    "missing output path: `{}` requires --out",
                    subcommand.name()
                )))
            }
        },
    };
    if samples < 100 {
        return Err(ConfigError(format!(
            "samples = {samples} must be at least 100"
        )));
    }

    let drift = match drift_kind {
        DriftKind::Zero => DriftSpec::zero(dim),
        DriftKind::Constant => DriftSpec::constant(vec![amplitude; dim])?,
        DriftKind::SeparableHolder => DriftSpec::separable_holder(amplitude, alpha, beta, dim)?,
        DriftKind::Multiscale => {
            DriftSpec::multiscale(amplitude, alpha, beta, dim, scales, phase_seed)?
        }
    };

    let cfg = CliConfig {
        subcommand,
        alpha,
        beta,
        drift_kind,
        amplitude,
        scales,
        n_list,
        n_fine,
        paths,
        moment,
        quad,
        seed,
        threads,
        out,
        samples,
        dim,
        z0,
        phase_seed,
        drift,
    };
    if matches!(subcommand, SubcommandKind::Rates | SubcommandKind::Simulate) {
        cfg.experiment().validate()?;
    }
    Ok(cfg)
}

impl CliConfig {
    pub fn drift(&self) -> &DriftSpec {
        &self.drift
    }

    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            alpha: self.alpha,
            beta: self.beta,
            drift: self.drift.clone(),
            n_list: self.n_list.clone(),
            n_fine: self.n_fine,
            paths: self.paths,
            moment: self.moment,
            seed: self.seed,
            z0: self.z0.clone(),
            threads: self.threads,
            quad: self.quad,
        }
    }

    /// `key=value` echo of the resolved configuration.
    pub fn manifest(&self) -> String {
        let quad = match self.quad {
            Quadrature::Aligned => "aligned".to_string(),
            Quadrature::Fixed(m) => m.to_string(),
        };
        let list = |v: &[f64]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut z0 = self.z0.x.clone();
        z0.extend_from_slice(&self.z0.v);
        [
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("subcommand", self.subcommand.name().to_string()),
            ("alpha", self.alpha.to_string()),
            ("beta", self.beta.to_string()),
            ("drift", self.drift_kind.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("scales", self.scales.to_string()),
            ("phase_seed", self.phase_seed.to_string()),
            (
                "n_list",
                self.n_list
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("n_fine", self.n_fine.to_string()),
            ("paths", self.paths.to_string()),
            ("moment", self.moment.to_string()),
            ("quad", quad),
            ("seed", self.seed.to_string()),
            ("threads", self.threads.to_string()),
            ("samples", self.samples.to_string()),
            ("dim", self.dim.to_string()),
            ("z0", list(&z0)),
            ("out", self.out.display().to_string()),
        ]
        .iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("kinstab")
            .chain(s.split_whitespace())
            .map(String::from)
            .collect()
    }

    fn parse(s: &str, file: Option<&str>) -> Result<CliConfig, ConfigError> {
        parse_config_with_env(&argv(s), file, None)
    }

    #[test]
    fn happy_path() {
        let c = parse(
            "rates --alpha 1.5 --beta 0.6 --paths 2000 --n-fine 8192 \
             --n-list 16,32,64,128,256,512 --seed 42 --out results/",
            None,
        )
        .unwrap();
        assert_eq!(c.subcommand, SubcommandKind::Rates);
        assert_eq!(c.n_list, vec![16, 32, 64, 128, 256, 512]);
        assert_eq!(c.paths, 2000);
        assert_eq!(c.out, PathBuf::from("results/"));
        assert_eq!(c.drift_kind, DriftKind::Multiscale);
    }

    #[test]
    fn alpha_out_of_range_names_the_interval() {
        let e = parse("rates --alpha 2.5 --out r", None).unwrap_err();
        assert!(e.0.contains("(1, 2)"), "{e}");
    }

    #[test]
    fn beta_below_lower_bound() {
        let e = parse("rates --beta 0.2 --alpha 1.5 --out r", None).unwrap_err();
        assert!(e.0.contains("1 - alpha/2"), "{e}");
        assert!(e.0.contains("0.2500"), "{e}");
    }

    #[test]
    fn grid_must_divide_master() {
        let e = parse("rates --n-list 16,24 --n-fine 8192 --out r", None).unwrap_err();
        assert!(e.0.contains("does not divide"), "{e}");
    }

    #[test]
    fn missing_out_is_rejected_for_rates_only() {
        assert!(parse("rates", None).unwrap_err().0.contains("--out"));
        assert!(parse("simulate", None).is_err());
        assert_eq!(
            parse("diagnose-noise --alpha 1.5 --samples 100000 --seed 7", None)
                .unwrap()
                .out,
            PathBuf::from(".")
        );
    }

    #[test]
    fn flags_override_file() {
        let file =
            "alpha = 1.7\nbeta=0.5 # comment\nseed=3\nn-list = 8,16,32\nn_fine=1024\nout=dir\n";
        let c = parse("rates --seed 9", Some(file)).unwrap();
        assert_eq!(c.alpha, 1.7);
        assert_eq!(c.beta, 0.5);
        assert_eq!(c.seed, 9);
        assert_eq!(c.n_list, vec![8, 16, 32]);
        assert_eq!(c.out, PathBuf::from("dir"));
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse("rates --out r", Some("alpah = 1.5\n")).unwrap_err();
        assert!(e.0.contains("alpah"), "{e}");
        assert!(parse("rates --out r", Some("seed 4\n")).is_err());
        assert!(parse("rates --out r", Some("seed=4\nseed=5\n")).is_err());
    }

    #[test]
    fn threads_precedence() {
        let a = parse_config_with_env(
            &argv("rates --out r --threads 3"),
            Some("threads=5"),
            Some("7"),
        )
        .unwrap();
        assert_eq!(a.threads, 3);
        let b =
            parse_config_with_env(&argv("rates --out r"), Some("threads=5"), Some("7")).unwrap();
        assert_eq!(b.threads, 5);
        let c = parse_config_with_env(&argv("rates --out r"), None, Some("7")).unwrap();
        assert_eq!(c.threads, 7);
        assert!(parse_config_with_env(&argv("rates --out r"), None, Some("many")).is_err());
    }

    #[test]
    fn z0_and_quad() {
        let c = parse("simulate --out o --dim 2 --z0 1,2,3,4 --quad 3", None).unwrap();
        assert_eq!(c.z0.x, vec![1.0, 2.0]);
        assert_eq!(c.z0.v, vec![3.0, 4.0]);
        assert_eq!(c.quad, Quadrature::Fixed(3));
        assert!(parse("simulate --out o --dim 2 --z0 1,2,3", None).is_err());
    }

    #[test]
    fn manifest_is_stable() {
        let c = parse("rates --out r --threads 2", None).unwrap();
        let m = c.manifest();
        assert!(m.starts_with("version="));
        assert!(m.contains("\nalpha=1.5\n"));
        assert!(m.contains("\nn_list=16,32,64,128,256,512\n"));
        assert_eq!(m, c.manifest());
    }
}
