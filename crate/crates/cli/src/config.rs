use std::path::{Path, PathBuf};

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use petal::config::Tolerances;
use petal::family::{FamilyId, FamilyMember};
use petal::rays::Combinatorics;
use petal::{Error, Result};

/// Options shared by every command. Anything given here overrides the
/// value read from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON run configuration
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts
    #[arg(long = "out", value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    /// normalized | quadratic | exponential
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as `re` or `re,im`
    #[arg(long = "param", visible_aliases = ["lambda", "c"], value_name = "A", allow_hyphen_values = true)]
    pub param: Option<String>,
    /// External angle `p/q` (quadratic rays)
    #[arg(long)]
    pub angle: Option<String>,
    /// External address, comma separated; the last entry repeats
    #[arg(long)]
    pub address: Option<String>,
    #[arg(long = "t-start", allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

/// The JSON run configuration; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub param: Option<[f64; 2]>,
    pub angle: Option<String>,
    pub address: Option<String>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub step: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub tolerances: Tolerances,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub family: FamilyId,
    pub param: Complex64,
    pub comb: Option<Combinatorics>,
    pub t_start: f64,
    pub t_end: f64,
    pub step: f64,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::InvalidInput(format!("malformed parameter '{text}', expected re or re,im"));
    let mut parts = text.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad()));
    let re = parts.next().ok_or_else(bad)??;
    let im = parts.next().transpose()?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))
}

impl RunConfig {
    /// Merges flags over the config file over built-in defaults.
    pub fn resolve(flags: &Common, default_family: &str) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let tolerances = file.tolerances.clone();
        tolerances.validate()?;
        let name = flags.family.clone().or(file.family).unwrap_or_else(|| default_family.to_string());
        let family = FamilyId::from_name(&name, 1)?;
        let param = match (&flags.param, file.param) {
            (Some(text), _) => parse_complex(text)?,
            (None, Some([re, im])) => Complex64::new(re, im),
            (None, None) => family.base_parameter(),
        };
        FamilyMember::new(family, param)?;
        let angle = flags.angle.clone().or(file.angle);
        let address = flags.address.clone().or(file.address);
        let comb = match (angle, address) {
            (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --angle or --address, not both".into())),
            (Some(a), None) => Some(Combinatorics::parse_angle(&a)?),
            (None, Some(s)) => Some(Combinatorics::parse_address(&s, tolerances.rays.max_address)?),
            (None, None) => match family {
                FamilyId::QuadraticC => Some(Combinatorics::angle(0, 1)?),
                FamilyId::ExponentialLambda => Some(Combinatorics::address(vec![0], tolerances.rays.max_address)?),
                FamilyId::NormalizedParabolic { .. } => None,
            },
        };
        let step = flags.step.or(file.step).unwrap_or(1.0);
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
        }
        Ok(Self {
            family,
            param,
            comb,
            t_start: flags.t_start.or(file.t_start).unwrap_or(1.0),
            t_end: flags.t_end.or(file.t_end).unwrap_or(-12.0),
            step,
            output_dir: flags.output_dir.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from("petal-out")),
            tolerances,
        })
    }

    pub fn member(&self) -> Result<FamilyMember> {
        Ok(FamilyMember::new(self.family, self.param)?.with_overflow_guard(self.tolerances.family.overflow_re))
    }

    pub fn comb(&self) -> Result<&Combinatorics> {
        self.comb
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("no ray combinatorics for the {} family", self.family)))
    }

    /// Potential range check for the trace commands.
    pub fn range(&self) -> Result<(f64, f64, f64)> {
        if !(self.t_start > self.t_end) {
            return Err(Error::InvalidInput(format!(
                "empty potential range: t-start {} must exceed t-end {}",
                self.t_start, self.t_end
            )));
        }
        Ok((self.t_start, self.t_end, self.step))
    }
}
