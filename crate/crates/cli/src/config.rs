//! Run configuration: command-line flags merged over an optional key=value file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use lipbound::{BoxDomain, Point};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bound,
    Estimate,
    Enclose,
    Verify,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "lipbound", version, about = "Certified bounds, range enclosure and Lipschitz branch and bound")]
pub struct Flags {
    #[arg(long, value_enum)]
    pub cmd: Option<Command>,
    /// Corpus entry name, `all` (verify only), or `expr:<expression in x1..xn>`.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Per-axis bounds, e.g. "-1:1,0:2".
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xa: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xb: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub budget: Option<usize>,
    /// CSV with rows `kappa,i,lo,hi` and `M,i,j,lo,hi` (1-based indices).
    #[arg(long)]
    pub constants: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Use constants estimated along each segment (or on each sub-box for minimize).
    #[arg(long)]
    pub local: bool,
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionChoice {
    Corpus(String),
    Expr(String),
    AllCorpus,
}

impl FunctionChoice {
    pub fn parse(s: &str) -> FunctionChoice {
        let s = s.trim();
        if let Some(src) = s.strip_prefix("expr:") {
            FunctionChoice::Expr(src.to_string())
        } else if s == "all" {
            FunctionChoice::AllCorpus
        } else {
            FunctionChoice::Corpus(s.to_string())
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionChoice::Corpus(n) => n.clone(),
            FunctionChoice::Expr(src) => format!("expr:{src}"),
            FunctionChoice::AllCorpus => "all".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub function: FunctionChoice,
    pub bx: Option<BoxDomain>,
    pub xa: Option<Point>,
    pub xb: Option<Point>,
    pub seed: u64,
    pub pairs: usize,
    pub tol: f64,
    pub budget: usize,
    pub constants: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub local: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_box(s: &str) -> CliResult<BoxDomain> {
    let bounds = s
        .split(',')
        .map(|axis| {
            let (lo, hi) = axis
                .split_once(':')
                .ok_or_else(|| usage(format!("malformed box axis '{axis}', expected lo:hi")))?;
            Ok((parse_num(lo, "box")?, parse_num(hi, "box")?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    BoxDomain::from_bounds(&bounds).map_err(|e| usage(format!("malformed box: {e}")))
}

pub fn parse_point(s: &str, what: &str) -> CliResult<Point> {
    let coords = s.split(',').map(|v| parse_num(v, what)).collect::<CliResult<Vec<_>>>()?;
    Point::new(coords).map_err(|e| usage(format!("malformed {what}: {e}")))
}

fn parse_num(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("malformed number '{}' in {what}", s.trim())))
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().map_err(|_| usage(format!("invalid value '{v}' for {key}")))
}

/// Reads a flat `key=value` file. Blank lines and lines starting with `#` are skipped.
pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl Flags {
    /// Fills every unset flag from the config file named by `--config`.
    fn merged(mut self) -> CliResult<Flags> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        for (k, v) in read_config_file(&path)? {
            let k = k.as_str();
            let v = v.as_str();
            match k {
                "cmd" => {
                    if self.cmd.is_none() {
                        self.cmd = Some(Command::from_str(v, true).map_err(|_| usage(format!("unknown cmd '{v}'")))?);
                    }
                }
                "format" => {
                    if self.format.is_none() {
                        self.format = Some(Format::from_str(v, true).map_err(|_| usage(format!("unknown format '{v}'")))?);
                    }
                }
                "fn" => {
                    self.function.get_or_insert_with(|| v.to_string());
                }
                "box" => {
                    self.bx.get_or_insert_with(|| v.to_string());
                }
                "xa" => {
                    self.xa.get_or_insert_with(|| v.to_string());
                }
                "xb" => {
                    self.xb.get_or_insert_with(|| v.to_string());
                }
                "seed" => {
                    if self.seed.is_none() {
                        self.seed = Some(parse_value(k, v)?);
                    }
                }
                "pairs" => {
                    if self.pairs.is_none() {
                        self.pairs = Some(parse_value(k, v)?);
                    }
                }
                "tol" => {
                    if self.tol.is_none() {
                        self.tol = Some(parse_value(k, v)?);
                    }
                }
                "budget" => {
                    if self.budget.is_none() {
                        self.budget = Some(parse_value(k, v)?);
                    }
                }
                "constants" => {
                    self.constants.get_or_insert_with(|| resolve(&path, v));
                }
                "out" => {
                    self.out.get_or_insert_with(|| resolve(&path, v));
                }
                "local" => self.local |= parse_value::<bool>(k, v)?,
                other => return Err(usage(format!("unknown config key '{other}'"))),
            }
        }
        Ok(self)
    }

    pub fn into_config(self) -> CliResult<RunConfig> {
        let f = self.merged()?;
        let command = f.cmd.ok_or_else(|| usage("--cmd is required"))?;
        let function = FunctionChoice::parse(&f.function.ok_or_else(|| usage("--fn is required"))?);
        let cfg = RunConfig {
            command,
            function,
            bx: f.bx.as_deref().map(parse_box).transpose()?,
            xa: f.xa.as_deref().map(|s| parse_point(s, "xa")).transpose()?,
            xb: f.xb.as_deref().map(|s| parse_point(s, "xb")).transpose()?,
            seed: f.seed.unwrap_or(42),
            pairs: f.pairs.unwrap_or(10_000),
            tol: f.tol.unwrap_or(1e-6),
            budget: f.budget.unwrap_or(1_000_000),
            constants: f.constants,
            out: f.out,
            format: f.format.unwrap_or_default(),
            local: f.local,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

// Relative paths inside a config file are taken relative to the file itself.
fn resolve(config: &Path, v: &str) -> PathBuf {
    let p = PathBuf::from(v);
    match config.parent() {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if matches!(self.function, FunctionChoice::Expr(_)) && self.bx.is_none() {
            return Err(usage("expression functions need --box"));
        }
        if self.function == FunctionChoice::AllCorpus {
            if self.command != Command::Verify {
                return Err(usage("--fn all is only accepted by verify"));
            }
            if self.bx.is_some() || self.constants.is_some() {
                return Err(usage("--fn all uses each entry's own box and oracle constants"));
            }
        }
        match self.command {
            Command::Bound => {
                let (Some(a), Some(b)) = (&self.xa, &self.xb) else {
                    return Err(usage("bound needs --xa and --xb"));
                };
                if a.dim() != b.dim() {
                    return Err(usage("--xa and --xb differ in dimension"));
                }
            }
            Command::Verify if self.pairs == 0 => return Err(usage("--pairs must be positive")),
            Command::Minimize if !(self.tol > 0.0 && self.tol.is_finite()) => {
                return Err(usage("--tol must be positive"));
            }
            _ => {}
        }
        Ok(())
    }
}
