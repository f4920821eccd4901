//! Run configuration: built-in defaults, then a flat `key=value` file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use lgbounds_core::search::{Objective, SearchModel, SweepModel};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    SpinDemo,
    Sweep,
    Verify,
    Search,
    BlgDemo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Either evaluation path for the spin model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    SpinAnalytic,
    MatrixPath,
}

impl Model {
    pub fn sweep(self) -> SweepModel {
        match self {
            Model::SpinAnalytic => SweepModel::SpinAnalytic,
            Model::MatrixPath => SweepModel::MatrixPath,
        }
    }

    pub fn search(self) -> SearchModel {
        match self {
            Model::SpinAnalytic => SearchModel::SpinAnalytic,
            Model::MatrixPath => SearchModel::MatrixPath,
        }
    }
}

fn parse_model(s: &str) -> CliResult<Model> {
    match s.to_ascii_lowercase().replace('-', "_").as_str() {
        "spin_analytic" => Ok(Model::SpinAnalytic),
        "matrix_path" => Ok(Model::MatrixPath),
        _ => Err(CliError::Config(format!(
            "unknown model `{s}` (expected spin_analytic or matrix_path)"
        ))),
    }
}

fn parse_objective(s: &str) -> CliResult<Objective> {
    match s.to_ascii_lowercase().replace('-', "_").as_str() {
        "neg_margin_th1" => Ok(Objective::NegMarginTh1),
        "neg_margin_th2" => Ok(Objective::NegMarginTh2),
        "neg_margin_th4" => Ok(Objective::NegMarginTh4),
        "l_value" => Ok(Objective::LValue),
        _ => Err(CliError::Config(format!(
            "unknown objective `{s}` (expected neg_margin_th1, neg_margin_th2, \
             neg_margin_th4 or L_value)"
        ))),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lgbounds",
    version,
    about = "Temporal-correlation bounds toolkit"
)]
pub struct Cli {
    pub command: Command,
    #[command(flatten)]
    pub flags: Settings,
}

/// Every setting, each optional so that layers can be merged.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Settings {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub grid_steps: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub t_range: Option<Vec<f64>>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse `{value}` for `{key}`")))
}

impl Settings {
    /// Reads `key = value` lines; `#` starts a comment. Keys are the flag
    /// names, with `-` or `_`.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse_file(&text)
    }

    pub fn parse_file(text: &str) -> CliResult<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected key=value, got `{line}`",
                    n + 1
                )));
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "omega" => s.omega = Some(parse_value(&key, value)?),
                "grid-steps" => s.grid_steps = Some(parse_value(&key, value)?),
                "t-range" => {
                    let parts: Vec<&str> = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|p| !p.is_empty())
                        .collect();
                    if parts.len() != 2 {
                        return Err(CliError::Config(format!(
                            "`t-range` needs two values, got `{value}`"
                        )));
                    }
                    s.t_range = Some(vec![
                        parse_value(&key, parts[0])?,
                        parse_value(&key, parts[1])?,
                    ]);
                }
                "dim" => s.dim = Some(parse_value(&key, value)?),
                "samples" => s.samples = Some(parse_value(&key, value)?),
                "seed" => s.seed = Some(parse_value(&key, value)?),
                "tol" => s.tol = Some(parse_value(&key, value)?),
                "model" => s.model = Some(value.to_owned()),
                "objective" => s.objective = Some(value.to_owned()),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => {
                    s.format = Some(Format::from_str(value, true).map_err(|_| {
                        CliError::Config(format!("unknown format `{value}` (expected csv or json)"))
                    })?)
                }
                "config" => {
                    return Err(CliError::Config("config files cannot nest `config`".into()))
                }
                _ => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown key `{}`",
                        n + 1,
                        key
                    )))
                }
            }
        }
        Ok(s)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            omega: over.omega.or(self.omega),
            grid_steps: over.grid_steps.or(self.grid_steps),
            t_range: over.t_range.or(self.t_range),
            dim: over.dim.or(self.dim),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            tol: over.tol.or(self.tol),
            model: over.model.or(self.model),
            objective: over.objective.or(self.objective),
            config: over.config.or(self.config),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub omega: f64,
    pub grid_steps: usize,
    pub t_range: (f64, f64),
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub model: Model,
    pub objective: Objective,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Settings) -> CliResult<Self> {
        let settings = match &flags.config {
            Some(path) => Settings::from_file(path)?.overlay(flags),
            None => flags,
        };
        let t_range = match settings.t_range.as_deref() {
            None => (0.0, std::f64::consts::TAU),
            Some(&[lo, hi]) => (lo, hi),
            Some(_) => return Err(CliError::Config("`t-range` needs two values".into())),
        };
        let cfg = RunConfig {
            command,
            omega: settings.omega.unwrap_or(1.0),
            grid_steps: settings.grid_steps.unwrap_or(81),
            t_range,
            dim: settings.dim.unwrap_or(match command {
                Command::BlgDemo => 4,
                _ => 2,
            }),
            samples: settings.samples.unwrap_or(10_000),
            seed: settings.seed.unwrap_or(42),
            tol: settings.tol.unwrap_or(1e-9),
            model: settings
                .model
                .as_deref()
                .map(parse_model)
                .transpose()?
                .unwrap_or(Model::SpinAnalytic),
            objective: settings
                .objective
                .as_deref()
                .map(parse_objective)
                .transpose()?
                .unwrap_or(Objective::LValue),
            out: settings.out,
            format: settings.format.unwrap_or(match command {
                Command::SpinDemo => Format::Csv,
                _ => Format::Json,
            }),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if self.grid_steps == 0 {
            return Err(CliError::Config("grid steps must be at least 1".into()));
        }
        let (lo, hi) = self.t_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Config(format!(
                "time range needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(CliError::Config(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.command == Command::SpinDemo && self.format == Format::Json {
            return Err(CliError::Config("spin-demo writes CSV only".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Settings::parse_file("seed = 7\n# comment\ndim=3\nt_range = -1, 2\n").unwrap();
        let flags = Settings {
            seed: Some(9),
            ..Settings::default()
        };
        let s = file.overlay(flags);
        assert_eq!(s.seed, Some(9));
        assert_eq!(s.dim, Some(3));
        assert_eq!(s.t_range, Some(vec![-1.0, 2.0]));
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            Settings::parse_file("sedd = 1"),
            Err(CliError::Config(_))
        ));
        assert!(Settings::parse_file("no equals sign").is_err());
    }

    #[test]
    fn defaults_and_validation() {
        let cfg = RunConfig::resolve(Command::Verify, Settings::default()).unwrap();
        assert_eq!(
            (cfg.dim, cfg.samples, cfg.seed, cfg.grid_steps),
            (2, 10_000, 42, 81)
        );
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(
            RunConfig::resolve(Command::BlgDemo, Settings::default())
                .unwrap()
                .dim,
            4
        );

        let bad = |s: Settings| RunConfig::resolve(Command::Sweep, s).is_err();
        assert!(bad(Settings {
            grid_steps: Some(0),
            ..Settings::default()
        }));
        assert!(bad(Settings {
            t_range: Some(vec![1.0, 1.0]),
            ..Settings::default()
        }));
        assert!(bad(Settings {
            tol: Some(0.0),
            ..Settings::default()
        }));
        assert!(bad(Settings {
            model: Some("numeric".into()),
            ..Settings::default()
        }));
    }

    #[test]
    fn name_spellings() {
        assert_eq!(parse_objective("L_value").unwrap(), Objective::LValue);
        assert_eq!(
            parse_objective("neg-margin-th4").unwrap(),
            Objective::NegMarginTh4
        );
        assert_eq!(parse_model("matrix_path").unwrap(), Model::MatrixPath);
    }
}
