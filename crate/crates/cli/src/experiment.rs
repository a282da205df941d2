//! The `run` subcommand: empirical laws for a shrinking family of sets.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use hitlaw::distfn::csv::{write_linear, write_step};
use hitlaw::distfn::{
    cf_hitting, cf_return, exponential_cdf, forward_transform, grid_distance, inverse_transform, ClosedForm,
    DistFn, LimitLaw, PiecewiseLinear,
};
use hitlaw::dynsys::{parse_set, parse_system};
use hitlaw::hitstat::{empirical_distributions, EmpiricalLaws, ReturnMode, SamplingPlan};
use hitlaw::Result;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::svg::{self, Curve};

pub const SUMMARY_HEADER: &str = "set,mu,kac,nothit,duality_dist,law_dist_F,law_dist_Ftilde";

/// Hitting and return forms of a reference law.
struct Reference {
    hitting: Box<dyn DistFn<f64>>,
    ret: Box<dyn DistFn<f64>>,
}

impl Reference {
    fn new(law: &LimitLaw) -> Result<Self> {
        Ok(match *law {
            LimitLaw::Exponential { .. } => Reference {
                hitting: Box::new(ClosedForm(exponential_cdf)),
                ret: Box::new(ClosedForm(exponential_cdf)),
            },
            LimitLaw::UniformHitting => {
                let f = PiecewiseLinear::min_t_one();
                Reference {
                    ret: Box::new(inverse_transform(&f)?),
                    hitting: Box::new(f),
                }
            }
            LimitLaw::CfHitting { theta, omega } | LimitLaw::CfReturn { theta, omega } => Reference {
                hitting: Box::new(cf_hitting(theta, omega)?),
                ret: Box::new(cf_return(theta, omega)?),
            },
        })
    }
}

#[derive(Debug)]
pub struct SetResult {
    pub spec: String,
    pub laws: EmpiricalLaws,
    pub duality_dist: f64,
    pub law_dist_f: Option<f64>,
    pub law_dist_ftilde: Option<f64>,
}

impl SetResult {
    /// One line of `summary.csv`, without the newline.
    pub fn summary_row(&self, index: usize) -> String {
        format!(
            "{index},{},{},{},{},{},{}",
            self.laws.mu_u,
            self.laws.kac,
            self.laws.nothit,
            self.duality_dist,
            opt(self.law_dist_f),
            opt(self.law_dist_ftilde),
        )
    }
}

#[derive(Debug)]
pub struct ExperimentResult {
    pub dir: PathBuf,
    pub sets: Vec<SetResult>,
    pub warnings: Vec<String>,
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write(&mut out)?;
    std::io::Write::flush(&mut out)?;
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let system = parse_system(&config.system)?;
    let targets = config
        .sets
        .iter()
        .map(|s| parse_set(s, &system))
        .collect::<Result<Vec<_>>>()?;
    let grid = config.grid.points()?;
    let reference = config.reference_law.as_ref().map(Reference::new).transpose()?;
    let mut warnings = system.warnings();

    let plan = SamplingPlan::new(config.samples, config.seed)
        .with_cap_factor(config.cap_factor)
        .with_return_mode(config.return_mode);
    let mut sets = Vec::with_capacity(targets.len());
    for (spec, u) in config.sets.iter().zip(&targets) {
        let laws = empirical_distributions(&system, u, &plan)?;
        if laws.extended_tail {
            warnings.push(format!("{spec}: orbits outlived the known bits of their start; random tail bits were used"));
        }
        if laws.nothit > 0.0 {
            warnings.push(format!("{spec}: {} of starts did not hit within the cap", laws.nothit));
        }
        let duality_dist = grid_distance(&forward_transform(&laws.ftilde), &laws.f, &grid)?;
        let (law_dist_f, law_dist_ftilde) = match &reference {
            Some(r) => (
                Some(grid_distance(&laws.f, r.hitting.as_ref(), &grid)?),
                Some(grid_distance(&laws.ftilde, r.ret.as_ref(), &grid)?),
            ),
            None => (None, None),
        };
        sets.push(SetResult {
            spec: spec.clone(),
            laws,
            duality_dist,
            law_dist_f,
            law_dist_ftilde,
        });
    }

    let dir = config.outputs.join(&config.name);
    fs::create_dir_all(&dir)?;
    let mut summary = format!("{SUMMARY_HEADER}\n");
    for (i, r) in sets.iter().enumerate() {
        let sub = dir.join((i + 1).to_string());
        fs::create_dir_all(&sub)?;
        write_file(&sub.join("F.csv"), |w| write_step(&r.laws.f, w))?;
        write_file(&sub.join("Ftilde.csv"), |w| write_step(&r.laws.ftilde, w))?;
        write_file(&sub.join("barF.csv"), |w| write_linear(&r.laws.bar_f, w))?;
        summary.push_str(&r.summary_row(i + 1));
        summary.push('\n');
    }
    fs::write(dir.join("summary.csv"), summary)?;
    fs::write(dir.join("plot.svg"), plot(config, &sets, reference.as_ref(), &grid))?;
    let manifest = manifest(config, &sets, &warnings);
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("json values serialize") + "\n",
    )?;
    Ok(ExperimentResult { dir, sets, warnings })
}

fn manifest(config: &ExperimentConfig, sets: &[SetResult], warnings: &[String]) -> serde_json::Value {
    let per_set: Vec<_> = sets
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "index": i + 1,
                "spec": r.spec,
                "mu": r.laws.mu_u,
                "cap": r.laws.cap,
                "kac": r.laws.kac,
                "nothit": r.laws.nothit,
                "conditional_samples": r.laws.conditional_samples,
                "conditional_nothit": r.laws.conditional_nothit,
                "extended_tail": r.laws.extended_tail,
                "duality_dist": r.duality_dist,
                "law_dist_F": r.law_dist_f,
                "law_dist_Ftilde": r.law_dist_ftilde,
                "files": [
                    format!("{}/F.csv", i + 1),
                    format!("{}/Ftilde.csv", i + 1),
                    format!("{}/barF.csv", i + 1),
                ],
            })
        })
        .collect();
    json!({
        "tool": concat!("hitlaw ", env!("CARGO_PKG_VERSION")),
        "name": config.name,
        "system": config.system,
        "samples": config.samples,
        "seed": config.seed,
        "cap_factor": config.cap_factor,
        "ftilde_mode": match config.return_mode {
            ReturnMode::Reuse => "reuse",
            ReturnMode::Direct => "direct",
        },
        "reference_law": config.reference_law.map(|l| l.to_string()),
        "grid": config.grid.to_string(),
        "sets": per_set,
        "summary": "summary.csv",
        "plot": "plot.svg",
        "warnings": warnings,
    })
}

fn sampled(f: &dyn DistFn<f64>, grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter().map(|t| (*t, f.eval_at(t))).collect()
}

fn plot(config: &ExperimentConfig, sets: &[SetResult], reference: Option<&Reference>, grid: &[f64]) -> String {
    let mut curves = Vec::new();
    for (i, r) in sets.iter().enumerate() {
        curves.push(Curve {
            label: format!("set {} F", i + 1),
            points: sampled(&r.laws.f, grid),
            color: svg::palette(i),
            dashed: false,
            width: 1.5,
        });
        curves.push(Curve {
            label: format!("set {} F~", i + 1),
            points: sampled(&r.laws.ftilde, grid),
            color: svg::palette(i),
            dashed: true,
            width: 1.5,
        });
    }
    if let (Some(r), Some(law)) = (reference, config.reference_law) {
        curves.push(Curve {
            label: "reference F".into(),
            points: sampled(r.hitting.as_ref(), grid),
            color: "black".into(),
            dashed: false,
            width: 2.0,
        });
        if !matches!(law, LimitLaw::Exponential { .. }) {
            curves.push(Curve {
                label: "reference F~".into(),
                points: sampled(r.ret.as_ref(), grid),
                color: "black".into(),
                dashed: true,
                width: 2.0,
            });
        }
    }
    svg::render(
        &format!("{}: {}", config.name, config.system),
        config.grid.start,
        config.grid.stop,
        &curves,
    )
}
