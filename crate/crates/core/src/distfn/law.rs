//! Closed-form limit laws.

use std::fmt;
use std::str::FromStr;

use super::{inverse_transform, PiecewiseLinear, StepFn};
use crate::error::{Error, Result};

/// Default step and horizon for the discretized exponential law.
pub const DEFAULT_EXP_GRID: f64 = 1.0 / 1024.0;
pub const DEFAULT_EXP_HORIZON: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    /// `1 − e^{−t}`, the fixed point of the duality; represented as a step
    /// approximation of the return law.
    Exponential { grid: f64, horizon: f64 },
    /// `min(t, 1)`: hitting law of a deterministic unit return.
    UniformHitting,
    /// Three-piece hitting law of rigid rotations along renormalization arcs
    /// whose natural-extension parameters converge to `(theta, omega)`.
    CfHitting { theta: f64, omega: f64 },
    /// The two-jump return law dual to [`LimitLaw::CfHitting`].
    CfReturn { theta: f64, omega: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    Step(StepFn<f64>),
    Linear(PiecewiseLinear<f64>),
}

impl Law {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Law::Step(f) => f.eval(&t),
            Law::Linear(f) => f.eval(&t),
        }
    }
}

/// `1 − e^{−t}` for `t ≥ 0`, else 0.
pub fn exponential_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -(-t).exp_m1()
    }
}

/// Abscissae `((1+θ)ω/(1+θω), (1+θ)/(1+θω))` where the rotation laws change
/// regime.
pub fn cf_breakpoints(theta: f64, omega: f64) -> (f64, f64) {
    let den = 1.0 + theta * omega;
    ((1.0 + theta) * omega / den, (1.0 + theta) / den)
}

fn check_cf(theta: f64, omega: f64) -> Result<()> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidLaw(format!("theta must be positive, got {theta}")));
    }
    if !(0.0..1.0).contains(&omega) {
        return Err(Error::InvalidLaw(format!("omega must lie in [0, 1), got {omega}")));
    }
    Ok(())
}

/// Hitting law along renormalization arcs: slope 1 up to `t₁`, slope
/// `1/(1+θ)` up to `t₂`, where it reaches 1, then constant.
pub fn cf_hitting(theta: f64, omega: f64) -> Result<PiecewiseLinear<f64>> {
    check_cf(theta, omega)?;
    let (t1, t2) = cf_breakpoints(theta, omega);
    let mut knots = vec![(0.0, 0.0)];
    if t1 > 0.0 {
        knots.push((t1, t1));
    }
    knots.push((t2, 1.0));
    PiecewiseLinear::new(knots)
}

/// Return law: 0 before `t₁`, `θ/(1+θ)` on `[t₁, t₂)`, 1 from `t₂` on.
/// Computed as the inverse transform of [`cf_hitting`] so the two agree bit
/// for bit.
pub fn cf_return(theta: f64, omega: f64) -> Result<StepFn<f64>> {
    inverse_transform(&cf_hitting(theta, omega)?)
}

/// Step approximation of `1 − e^{−t}` from below: value `1 − e^{−kh}` on
/// `[kh, (k+1)h)` for `k = 1, …, round(horizon / h)`.
pub fn exponential_return(grid: f64, horizon: f64) -> Result<StepFn<f64>> {
    if !(grid > 0.0 && grid.is_finite()) || !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidLaw(format!(
            "exponential grid {grid} and horizon {horizon} must be positive"
        )));
    }
    let n = (horizon / grid).round() as usize;
    let (b, v): (Vec<f64>, Vec<f64>) = (1..=n)
        .map(|k| {
            let t = k as f64 * grid;
            (t, exponential_cdf(t))
        })
        .unzip();
    StepFn::new(b, v)
}

pub fn make_law(law: &LimitLaw) -> Result<Law> {
    match *law {
        LimitLaw::Exponential { grid, horizon } => exponential_return(grid, horizon).map(Law::Step),
        LimitLaw::UniformHitting => Ok(Law::Linear(PiecewiseLinear::min_t_one())),
        LimitLaw::CfHitting { theta, omega } => cf_hitting(theta, omega).map(Law::Linear),
        LimitLaw::CfReturn { theta, omega } => cf_return(theta, omega).map(Law::Step),
    }
}

impl LimitLaw {
    pub fn exponential() -> Self {
        LimitLaw::Exponential {
            grid: DEFAULT_EXP_GRID,
            horizon: DEFAULT_EXP_HORIZON,
        }
    }

    /// Exact value of the law at `t`; for the exponential law this is the
    /// continuous `1 − e^{−t}` rather than its step approximation.
    pub fn exact(&self, t: f64) -> f64 {
        match *self {
            LimitLaw::Exponential { .. } => exponential_cdf(t),
            LimitLaw::UniformHitting => t.clamp(0.0, 1.0),
            LimitLaw::CfHitting { theta, omega } => cf_hitting(theta, omega)
                .map(|f| f.eval(&t))
                .unwrap_or(f64::NAN),
            LimitLaw::CfReturn { theta, omega } => cf_return(theta, omega)
                .map(|f| f.eval(&t))
                .unwrap_or(f64::NAN),
        }
    }

    /// The law on the other side of the duality, when it is one of the
    /// closed forms. The exponential law is its own partner.
    pub fn partner(&self) -> Option<LimitLaw> {
        match *self {
            LimitLaw::Exponential { .. } => Some(*self),
            LimitLaw::UniformHitting => None,
            LimitLaw::CfHitting { theta, omega } => Some(LimitLaw::CfReturn { theta, omega }),
            LimitLaw::CfReturn { theta, omega } => Some(LimitLaw::CfHitting { theta, omega }),
        }
    }

    pub fn is_hitting_law(&self) -> bool {
        matches!(self, LimitLaw::UniformHitting | LimitLaw::CfHitting { .. })
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

fn parse_pair(args: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected `theta,omega`, got `{args}`")));
    }
    Ok((parse_num(parts[0], "theta")?, parse_num(parts[1], "omega")?))
}

impl FromStr for LimitLaw {
    type Err = Error;

    /// `exp[:grid=h,horizon=H]`, `uniform-hitting`, `cf-hitting:θ,ω`,
    /// `cf-return:θ,ω`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let law = match head {
            "exp" | "exponential" => {
                let mut grid = DEFAULT_EXP_GRID;
                let mut horizon = DEFAULT_EXP_HORIZON;
                for kv in args.into_iter().flat_map(|a| a.split(',')) {
                    match kv.split_once('=') {
                        Some(("grid", v)) => grid = parse_num(v, "grid")?,
                        Some(("horizon", v)) => horizon = parse_num(v, "horizon")?,
                        _ => return Err(Error::Parse(format!("bad exponential option `{kv}`"))),
                    }
                }
                LimitLaw::Exponential { grid, horizon }
            }
            "uniform-hitting" if args.is_none() => LimitLaw::UniformHitting,
            "cf-hitting" | "cf-return" => {
                let (theta, omega) =
                    parse_pair(args.ok_or_else(|| Error::Parse(format!("`{head}` needs theta,omega")))?)?;
                check_cf(theta, omega)?;
                if head == "cf-hitting" {
                    LimitLaw::CfHitting { theta, omega }
                } else {
                    LimitLaw::CfReturn { theta, omega }
                }
            }
            _ => return Err(Error::Parse(format!("unknown law `{s}`"))),
        };
        if let LimitLaw::Exponential { grid, horizon } = law {
            exponential_return(grid, horizon)?;
        }
        Ok(law)
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitLaw::Exponential { grid, horizon } => write!(f, "exp:grid={grid},horizon={horizon}"),
            LimitLaw::UniformHitting => write!(f, "uniform-hitting"),
            LimitLaw::CfHitting { theta, omega } => write!(f, "cf-hitting:{theta},{omega}"),
            LimitLaw::CfReturn { theta, omega } => write!(f, "cf-return:{theta},{omega}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::validate_class_f;

    const GOLDEN: f64 = 0.618_033_988_749_894_8;

    #[test]
    fn golden_breakpoints() {
        let (t1, t2) = cf_breakpoints(GOLDEN, GOLDEN);
        // (1+a)a = 1 turns these into 1/(1+a²) and (1+a)/(1+a²)
        assert!((t1 - 0.723_606_797_749_979).abs() < 1e-12);
        assert!((t2 - 1.170_820_393_249_937).abs() < 1e-12);
        let f = cf_hitting(GOLDEN, GOLDEN).unwrap();
        assert!((f.eval(&1.0) - 0.894_427_190_999_916).abs() < 1e-12);
        assert!((f.right_derivative(&1.0) - GOLDEN).abs() < 1e-12);
    }

    #[test]
    fn golden_return_law() {
        let g = cf_return(GOLDEN, GOLDEN).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g.breakpoints()[0] - 0.723_606_797_749_979).abs() < 1e-12);
        assert!((g.values()[0] - 0.381_966_011_250_105).abs() < 1e-12);
        assert!((g.breakpoints()[1] - 1.170_820_393_249_937).abs() < 1e-12);
        assert_eq!(g.values()[1], 1.0);
    }

    #[test]
    fn cf_hitting_is_in_class_for_a_parameter_grid() {
        for &theta in &[0.05, 0.3, GOLDEN, 0.9, 2.5] {
            for &omega in &[0.0, 0.1, 0.5, GOLDEN, 0.99] {
                let f = cf_hitting(theta, omega).unwrap();
                assert!(validate_class_f(&f).member(), "theta {theta} omega {omega}");
                let plateau = cf_return(theta, omega).unwrap().eval(&f.knots()[f.knots().len() - 1].0);
                assert_eq!(plateau, 1.0);
            }
        }
    }

    #[test]
    fn cf_parameters_are_checked() {
        assert!(cf_hitting(0.0, 0.5).is_err());
        assert!(cf_hitting(0.5, 1.0).is_err());
        assert!("cf-return:0.5,1.2".parse::<LimitLaw>().is_err());
    }

    #[test]
    fn uniform_hitting_is_min_t_one() {
        match make_law(&LimitLaw::UniformHitting).unwrap() {
            Law::Linear(f) => assert!(f.same_function(&PiecewiseLinear::min_t_one())),
            Law::Step(_) => panic!("expected a hitting law"),
        }
    }

    #[test]
    fn exponential_row_count() {
        let law: LimitLaw = "exp:grid=0.001,horizon=20".parse().unwrap();
        match make_law(&law).unwrap() {
            Law::Step(f) => assert_eq!(f.len(), 20_000),
            Law::Linear(_) => panic!("expected a step law"),
        }
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["uniform-hitting", "cf-hitting:0.5,0.25", "cf-return:0.5,0.25", "exp:grid=0.5,horizon=4"] {
            let law: LimitLaw = s.parse().unwrap();
            assert_eq!(law.to_string(), s);
        }
    }
}
