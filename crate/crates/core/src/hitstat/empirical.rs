//! Sampled hitting and return laws.
//!
//! Every start point gets its own random stream for doubling-map tail bits,
//! derived from the seed and the start index, and results are collected in
//! start order. Output is therefore identical for any degree of parallelism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::orbit::{hitting_time_extended, Hit};
use crate::distfn::{PiecewiseLinear, StepFn};
use crate::dynsys::{Point, System, TargetSet};
use crate::error::{Error, Result};

pub const DEFAULT_CAP_FACTOR: f64 = 50.0;

/// Maximum number of draws spent on rejection sampling inside a target set.
pub const REJECTION_BUDGET: u64 = 1_000_000_000;

const TAIL_STREAM_SALT: u64 = 0x7461_696c_6269_7473;
const DIRECT_SEED_SALT: u64 = 0x6469_7265_6374_2d55;

/// Where the starts for the return law come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnMode {
    /// The starts of the unconditional sample that fall in `U`.
    #[default]
    Reuse,
    /// A separate sample of the same size drawn inside `U`.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPlan {
    pub samples: usize,
    pub seed: u64,
    pub cap_factor: f64,
    pub return_mode: ReturnMode,
}

impl SamplingPlan {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplingPlan {
            samples,
            seed,
            cap_factor: DEFAULT_CAP_FACTOR,
            return_mode: ReturnMode::Reuse,
        }
    }

    pub fn with_cap_factor(mut self, cap_factor: f64) -> Self {
        self.cap_factor = cap_factor;
        self
    }

    pub fn with_return_mode(mut self, mode: ReturnMode) -> Self {
        self.return_mode = mode;
        self
    }

    /// `⌈cap_factor / μ(U)⌉`.
    pub fn cap_for(&self, mu: f64) -> u64 {
        (self.cap_factor / mu).ceil().max(1.0) as u64
    }
}

/// Hitting times of a batch of start points.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingSample {
    pub mu_u: f64,
    pub cap: u64,
    pub taus: Vec<Hit>,
    /// Whether each start lies in `U`, making its time a return time.
    pub in_u: Vec<bool>,
    /// Some doubling-map orbit outlived the 64 known bits of its start.
    pub extended_tail: bool,
}

impl HittingSample {
    pub fn not_hit_fraction(&self) -> f64 {
        let misses = self.taus.iter().filter(|h| **h == Hit::NotHit).count();
        misses as f64 / self.taus.len() as f64
    }

    /// Normalized times `μ(U) τ` of the starts selected by `keep`.
    fn normalized(&self, keep: impl Fn(usize) -> bool) -> (Vec<f64>, usize) {
        let mut out = Vec::new();
        let mut total = 0;
        for (i, h) in self.taus.iter().enumerate() {
            if keep(i) {
                total += 1;
                if let Hit::At(k) = h {
                    out.push(*k as f64 * self.mu_u);
                }
            }
        }
        (out, total)
    }
}

fn tail_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ TAIL_STREAM_SALT);
    rng.set_stream(index as u64);
    rng
}

fn scan_all(s: &System, u: &TargetSet, points: &[Point], cap: u64, seed: u64) -> Result<HittingSample> {
    let results: Vec<(Hit, bool)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &x)| hitting_time_extended(s, u, x, cap, &mut tail_rng(seed, i)))
        .collect::<Result<_>>()?;
    Ok(HittingSample {
        mu_u: u.measure(),
        cap,
        extended_tail: results.iter().any(|r| r.1),
        taus: results.into_iter().map(|r| r.0).collect(),
        in_u: points.iter().map(|&x| u.contains(x)).collect(),
    })
}

fn check_target(s: &System, u: &TargetSet, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    if !u.fits(s) {
        return Err(Error::InvalidArgument(format!("{u:?} does not live on {s:?}")));
    }
    Ok(())
}

/// Hitting times of `m` starts drawn by [`System::sample_points`].
pub fn sample_hitting_times(s: &System, u: &TargetSet, m: usize, seed: u64, cap: u64) -> Result<HittingSample> {
    check_target(s, u, m)?;
    let points = s.sample_points(m, seed);
    scan_all(s, u, &points, cap, seed)
}

/// Return law estimated from starts drawn inside `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectReturnSample {
    pub ftilde: StepFn<f64>,
    pub sample: HittingSample,
    /// Draws spent by rejection sampling; equal to the sample size for an
    /// exhaustive sweep of a finite target.
    pub draws: u64,
}

impl DirectReturnSample {
    pub fn acceptance_rate(&self) -> f64 {
        self.sample.taus.len() as f64 / self.draws as f64
    }
}

/// Return law from `m` starts inside `U`. Finite targets with at most `m`
/// points are swept exhaustively; otherwise starts are drawn from the
/// invariant measure and rejected until `m` fall in `U`.
pub fn direct_return_sample(s: &System, u: &TargetSet, m: usize, seed: u64, cap: u64) -> Result<DirectReturnSample> {
    direct_with_budget(s, u, m, seed, cap, REJECTION_BUDGET)
}

fn direct_with_budget(
    s: &System,
    u: &TargetSet,
    m: usize,
    seed: u64,
    cap: u64,
    budget: u64,
) -> Result<DirectReturnSample> {
    check_target(s, u, m)?;
    let (points, draws) = match u {
        TargetSet::Subset { residues, .. } if residues.len() <= m => {
            (residues.iter().map(|&r| Point::Residue(r)).collect::<Vec<_>>(), residues.len() as u64)
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ DIRECT_SEED_SALT);
            let mut points = Vec::with_capacity(m);
            let mut draws = 0u64;
            while points.len() < m {
                if draws == budget {
                    return Err(Error::RejectionBudget {
                        wanted: m,
                        accepted: points.len(),
                        draws,
                    });
                }
                draws += 1;
                let x = s.random_point(&mut rng);
                if u.contains(x) {
                    points.push(x);
                }
            }
            (points, draws)
        }
    };
    let sample = scan_all(s, u, &points, cap, seed ^ DIRECT_SEED_SALT)?;
    let (times, total) = sample.normalized(|_| true);
    Ok(DirectReturnSample {
        ftilde: StepFn::empirical(&times, total)?,
        sample,
        draws,
    })
}

/// Sampled `F_U`, `F̃_U` and `F̄_U` with their bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLaws {
    pub mu_u: f64,
    pub cap: u64,
    /// Empirical law of `μ(U) τ` over all starts.
    pub f: StepFn<f64>,
    /// Empirical law of `μ(U) τ` over starts in `U`.
    pub ftilde: StepFn<f64>,
    /// Interpolant of `f` through the nodes `k μ(U)`.
    pub bar_f: PiecewiseLinear<f64>,
    /// `(1/m_U) Σ μ(U) τ` over hit starts in `U`; close to 1 by Kac.
    pub kac: f64,
    /// Fraction of all starts not hitting `U` within the cap.
    pub nothit: f64,
    /// Number `m_U` of starts behind `ftilde`.
    pub conditional_samples: usize,
    pub conditional_nothit: f64,
    pub return_mode: ReturnMode,
    pub extended_tail: bool,
}

pub fn empirical_distributions(s: &System, u: &TargetSet, plan: &SamplingPlan) -> Result<EmpiricalLaws> {
    if !(plan.cap_factor > 0.0 && plan.cap_factor.is_finite()) {
        return Err(Error::InvalidArgument(format!("cap factor {} must be positive", plan.cap_factor)));
    }
    let mu = u.measure();
    let cap = plan.cap_for(mu);
    let sample = sample_hitting_times(s, u, plan.samples, plan.seed, cap)?;

    let (times, total) = sample.normalized(|_| true);
    let f = StepFn::empirical(&times, total)?;
    let bar_f = interpolate_nodes(&sample);

    let (conditional, extended) = match plan.return_mode {
        ReturnMode::Reuse => (sample.normalized(|i| sample.in_u[i]), sample.extended_tail),
        ReturnMode::Direct => {
            let direct = direct_return_sample(s, u, plan.samples, plan.seed, cap)?;
            let extended = sample.extended_tail || direct.sample.extended_tail;
            (direct.sample.normalized(|_| true), extended)
        }
    };
    let (ctimes, ctotal) = conditional;
    if ctotal == 0 {
        return Err(Error::EmptyConditionalSample);
    }
    let ftilde = StepFn::empirical(&ctimes, ctotal)?;
    let kac = ctimes.iter().sum::<f64>() / ctotal as f64;

    Ok(EmpiricalLaws {
        mu_u: mu,
        cap,
        f,
        ftilde,
        bar_f,
        kac,
        nothit: sample.not_hit_fraction(),
        conditional_samples: ctotal,
        conditional_nothit: (ctotal - ctimes.len()) as f64 / ctotal as f64,
        return_mode: plan.return_mode,
        extended_tail: extended,
    })
}

/// `F̄_U` from the histogram of hitting times: the knot at `k μ(U)` is kept
/// when the jumps of `F_U` at `k μ(U)` and `(k+1) μ(U)` differ.
fn interpolate_nodes(sample: &HittingSample) -> PiecewiseLinear<f64> {
    let mut counts: Vec<u64> = Vec::new();
    for k in sample.taus.iter().filter_map(|h| h.time()) {
        let k = k as usize;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    let m = sample.taus.len() as f64;
    let jump = |k: usize| counts.get(k).copied().unwrap_or(0);
    let mut knots = vec![(0.0, 0.0)];
    let mut cum = 0u64;
    for k in 1..counts.len() {
        cum += jump(k);
        if jump(k) != jump(k + 1) {
            knots.push((k as f64 * sample.mu_u, cum as f64 / m));
        }
    }
    PiecewiseLinear::new(knots).expect("nodes increase from the origin")
}

/// Uniform draw helper used by tests and callers wanting a seeded generic
/// point of the circle.
pub fn seeded_point(seed: u64) -> crate::dynsys::Frac64 {
    crate::dynsys::Frac64(ChaCha8Rng::seed_from_u64(seed).gen())
}
