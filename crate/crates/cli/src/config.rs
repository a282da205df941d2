//! Experiment configuration: a flat `key = value` file.
//!
//! ```text
//! name = golden
//! system = rot:cf:[1*]
//! set = jn:0,8
//! set = jn:0,10
//! samples = 100000
//! seed = 7
//! cap_factor = 50
//! reference_law = cf-hitting:0.6180339887498949,0.6180339887498949
//! grid = 0,3,0.001
//! ftilde_mode = direct
//! outputs = out
//! ```
//!
//! `sets = a; b; c` is accepted as a shorthand for repeated `set` lines.

use std::path::PathBuf;

use hitlaw::distfn::LimitLaw;
use hitlaw::hitstat::{ReturnMode, DEFAULT_CAP_FACTOR};
use hitlaw::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        hitlaw::distfn::uniform_grid(self.start, self.stop, self.step)
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad grid `{s}`"))))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(Error::Parse(format!("grid needs start,stop,step, got `{s}`")));
        };
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Parse(format!("grid step must be positive, got {step}")));
        }
        if !(start.is_finite() && stop.is_finite() && stop >= start) {
            return Err(Error::Parse(format!("grid bounds {start}..{stop} are not an interval")));
        }
        Ok(Grid { start, stop, step })
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub system: String,
    pub sets: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub cap_factor: f64,
    pub reference_law: Option<LimitLaw>,
    pub grid: Grid,
    pub return_mode: ReturnMode,
    pub outputs: PathBuf,
}

/// Values given on the command line, which win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub cap_factor: Option<f64>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self> {
        let mut name = None;
        let mut system = None;
        let mut sets = Vec::new();
        let mut samples = 100_000usize;
        let mut seed = 0u64;
        let mut cap_factor = DEFAULT_CAP_FACTOR;
        let mut reference_law = None;
        let mut grid = "0,4,0.001".to_string();
        let mut return_mode = ReturnMode::Reuse;
        let mut outputs = PathBuf::from(".");

        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = Some(value.to_string()),
                "system" => system = Some(value.to_string()),
                "set" => sets.push(value.to_string()),
                "sets" => sets.extend(
                    value
                        .split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from),
                ),
                "samples" => samples = parse(key, value)?,
                "seed" => seed = parse(key, value)?,
                "cap_factor" => cap_factor = parse(key, value)?,
                "reference_law" => {
                    reference_law = match value {
                        "" | "none" => None,
                        v => Some(v.parse()?),
                    }
                }
                "grid" => grid = value.to_string(),
                "ftilde_mode" => {
                    return_mode = match value {
                        "reuse" => ReturnMode::Reuse,
                        "direct" => ReturnMode::Direct,
                        _ => return Err(Error::Parse(format!("ftilde_mode must be reuse or direct, got `{value}`"))),
                    }
                }
                "outputs" => outputs = PathBuf::from(value),
                _ => return Err(Error::Parse(format!("line {}: unknown key `{key}`", i + 1))),
            }
        }

        let seed = overrides.seed.unwrap_or(seed);
        let samples = overrides.samples.unwrap_or(samples);
        let cap_factor = overrides.cap_factor.unwrap_or(cap_factor);
        let grid: Grid = overrides.grid.as_deref().unwrap_or(&grid).parse()?;
        let outputs = overrides.out.clone().unwrap_or(outputs);

        let name = name.ok_or_else(|| Error::Parse("missing `name`".into()))?;
        if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
            return Err(Error::Parse(format!("`{name}` is not a usable experiment name")));
        }
        if sets.is_empty() {
            return Err(Error::Parse("at least one `set` is required".into()));
        }
        if samples == 0 {
            return Err(Error::Parse("samples must be at least 1".into()));
        }
        if !(cap_factor > 0.0 && cap_factor.is_finite()) {
            return Err(Error::Parse(format!("cap_factor must be positive, got {cap_factor}")));
        }
        Ok(ExperimentConfig {
            name,
            system: system.ok_or_else(|| Error::Parse("missing `system`".into()))?,
            sets,
            samples,
            seed,
            cap_factor,
            reference_law,
            grid,
            return_mode,
            outputs,
        })
    }
}
