//! Run configuration: a TOML file plus command-line overrides (flags win).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quasirect::fock::TruncationPolicy;
use quasirect::observables::{PhaseSpaceGrid, PositionGrid};
use serde::Deserialize;

use crate::Cli;

/// Pulse-area base `τ`: `4e^{-r}`, `e^{-r}/2`, or a literal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauSpec {
    /// `τ = 4 e^{-r}`
    FourExpNegR,
    /// `τ = e^{-r}/2`
    HalfExpNegR,
    Literal(f64),
}

impl TauSpec {
    pub fn resolve(self, r: f64) -> f64 {
        match self {
            TauSpec::FourExpNegR => 4.0 * (-r).exp(),
            TauSpec::HalfExpNegR => 0.5 * (-r).exp(),
            TauSpec::Literal(t) => t,
        }
    }
}

impl FromStr for TauSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "4*exp(-r)" => Ok(TauSpec::FourExpNegR),
            "exp(-r)/2" => Ok(TauSpec::HalfExpNegR),
            other => other
                .parse::<f64>()
                .map(TauSpec::Literal)
                .map_err(|_| format!("unknown tau tag {s:?} (expected \"4*exp(-r)\", \"exp(-r)/2\" or a number)")),
        }
    }
}

impl fmt::Display for TauSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauSpec::FourExpNegR => f.write_str("4*exp(-r)"),
            TauSpec::HalfExpNegR => f.write_str("exp(-r)/2"),
            TauSpec::Literal(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TauInput {
    Number(f64),
    Text(String),
}

impl TauInput {
    fn parse(&self) -> Result<TauSpec, String> {
        match self {
            TauInput::Number(t) => Ok(TauSpec::Literal(*t)),
            TauInput::Text(s) => s.parse(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleFile {
    dim: Option<usize>,
    tail_mass_bound: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputFile {
    dir: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    #[serde(default)]
    r: Vec<f64>,
    #[serde(default)]
    tau: Vec<TauInput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    r: Option<f64>,
    tau: Option<TauInput>,
    pulses: Option<usize>,
    coverage: Option<f64>,
    position_grid: Option<PositionGrid>,
    phase_space_grid: Option<PhaseSpaceGrid>,
    #[serde(default)]
    oracle: OracleFile,
    #[serde(default)]
    output: OutputFile,
    sweep: Option<SweepFile>,
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub r: Vec<f64>,
    pub tau: Vec<TauSpec>,
    pub pulses: usize,
    pub coverage: f64,
    pub position_grid: Option<PositionGrid>,
    pub phase_space_grid: Option<PhaseSpaceGrid>,
    pub oracle: TruncationPolicy,
    pub out_dir: PathBuf,
    pub format: Format,
}

pub const DEFAULT_COVERAGE: f64 = 0.8;

fn read_file(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

impl RunConfig {
    /// Merge the optional config file with flags; `sweep` selects the list-valued fields.
    pub fn resolve(cli: &Cli, sweep: bool) -> Result<Self, String> {
        let file = match &cli.config {
            Some(p) => read_file(p)?,
            None => ConfigFile::default(),
        };
        let sweep_file = file.sweep.unwrap_or_default();

        let r: Vec<f64> = if !cli.r.is_empty() {
            cli.r.clone()
        } else if sweep && !sweep_file.r.is_empty() {
            sweep_file.r.clone()
        } else {
            file.r.into_iter().collect()
        };

        let tau: Vec<TauSpec> = if let Some(t) = cli.tau {
            vec![TauSpec::Literal(t)]
        } else if !cli.tau_tag.is_empty() {
            cli.tau_tag.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        } else if sweep && !sweep_file.tau.is_empty() {
            sweep_file.tau.iter().map(TauInput::parse).collect::<Result<_, _>>()?
        } else {
            file.tau.as_ref().map(TauInput::parse).transpose()?.into_iter().collect()
        };

        let pulses = cli.pulses.or(file.pulses).ok_or("missing pulse count (--pulses or `pulses`)")?;
        if pulses == 0 {
            return Err("empty schedule".into());
        }
        if r.is_empty() {
            return Err(if sweep { "empty r list".into() } else { "missing squeeze parameter (--r or `r`)".into() });
        }
        if tau.is_empty() {
            return Err("missing tau (--tau, --tau-tag or `tau`)".into());
        }
        if !sweep && (r.len() > 1 || tau.len() > 1) {
            return Err("lists of r or tau are only accepted by `sweep`".into());
        }
        if let Some(bad) = r.iter().find(|x| !x.is_finite()) {
            return Err(format!("squeeze parameter must be finite, got {bad}"));
        }
        for &x in &r {
            for t in &tau {
                let v = t.resolve(x);
                if !(v.is_finite() && v > 0.0) {
                    return Err(format!("tau {t} resolves to {v} at r={x}; must be > 0"));
                }
            }
        }

        let coverage = cli.coverage.or(file.coverage).unwrap_or(DEFAULT_COVERAGE);
        if !(coverage > 0.0 && coverage < 1.0) {
            return Err(format!("coverage {coverage} must lie in (0, 1)"));
        }

        let defaults = TruncationPolicy::default();
        let oracle = TruncationPolicy::new(
            cli.dim.or(file.oracle.dim).unwrap_or(defaults.dimension),
            file.oracle.tail_mass_bound.unwrap_or(defaults.tail_mass_bound),
        )
        .map_err(|e| e.to_string())?;

        if let Some(g) = &file.position_grid {
            g.validate().map_err(|e| e.to_string())?;
        }
        if let Some(g) = &file.phase_space_grid {
            g.validate().map_err(|e| e.to_string())?;
        }

        Ok(Self {
            r,
            tau,
            pulses,
            coverage,
            position_grid: file.position_grid,
            phase_space_grid: file.phase_space_grid,
            oracle,
            out_dir: cli.out.clone().or(file.output.dir).unwrap_or_else(|| PathBuf::from("out")),
            format: cli.format.or(file.output.format).unwrap_or(Format::Csv),
        })
    }

    /// The single `(r, τ)` point of a non-sweep run.
    pub fn point(&self) -> (f64, TauSpec) {
        (self.r[0], self.tau[0])
    }
}
