//! Membership checks for the two limit-law classes: hitting laws
//! (continuous, concave, nondecreasing, `F(t) ≤ t`, values in `[0, 1]`) and
//! return laws (nondecreasing, right-continuous, `∫₀^∞ (1 − F̃) ≤ 1`).

use super::{PiecewiseLinear, StepFn};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ZeroOnNegatives,
    Nondecreasing,
    Concave,
    BelowDiagonal,
    Range,
    ComplementIntegral,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::ZeroOnNegatives => "zero-on-negatives",
            Rule::Nondecreasing => "nondecreasing",
            Rule::Concave => "concave",
            Rule::BelowDiagonal => "below-diagonal",
            Rule::Range => "range",
            Rule::ComplementIntegral => "complement-integral",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T> {
    pub rule: Rule,
    /// Point at which the rule fails.
    pub witness: T,
    pub magnitude: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NotMember,
    /// The function does not saturate and no tail bound was supplied.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport<T> {
    pub verdict: Verdict,
    pub violations: Vec<Violation<T>>,
    /// `∫₀^∞ (1 − F̃)` when it could be determined; only set for return laws.
    pub complement_integral: Option<T>,
}

impl<T: Scalar> ClassReport<T> {
    pub fn member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    fn from_violations(violations: Vec<Violation<T>>) -> Self {
        let verdict = if violations.is_empty() {
            Verdict::Member
        } else {
            Verdict::NotMember
        };
        ClassReport {
            verdict,
            violations,
            complement_integral: None,
        }
    }
}

pub fn validate_class_f<T: Scalar>(f: &PiecewiseLinear<T>) -> ClassReport<T> {
    let tol = T::tie_tolerance();
    let mut violations = Vec::new();
    let knots = f.knots();
    let slopes = f.slopes();

    // the origin knot is structural, so only a negative start could break this
    let (t0, y0) = &knots[0];
    if !y0.is_zero() {
        violations.push(Violation {
            rule: Rule::ZeroOnNegatives,
            witness: t0.clone(),
            magnitude: y0.abs(),
        });
    }
    for (i, s) in slopes.iter().enumerate() {
        let at = knots[i].0.clone();
        if *s < -tol.clone() {
            violations.push(Violation {
                rule: Rule::Nondecreasing,
                witness: at.clone(),
                magnitude: -s.clone(),
            });
        }
        if i > 0 && *s > slopes[i - 1].clone() + tol.clone() {
            violations.push(Violation {
                rule: Rule::Concave,
                witness: at,
                magnitude: s.clone() - slopes[i - 1].clone(),
            });
        }
    }
    for (t, y) in knots {
        if *y > t.clone() + tol.clone() {
            violations.push(Violation {
                rule: Rule::BelowDiagonal,
                witness: t.clone(),
                magnitude: y.clone() - t.clone(),
            });
        }
        if *y < -tol.clone() {
            violations.push(Violation {
                rule: Rule::Range,
                witness: t.clone(),
                magnitude: -y.clone(),
            });
        } else if *y > T::one() + tol.clone() {
            violations.push(Violation {
                rule: Rule::Range,
                witness: t.clone(),
                magnitude: y.clone() - T::one(),
            });
        }
    }
    let (tl, yl) = f.last_knot();
    let tail = f.tail_slope().clone();
    if tail > tol && *yl <= T::one() {
        // a positive tail slope eventually leaves [0, 1]
        let crossing = tl.clone() + (T::one() - yl.clone()) / tail.clone();
        violations.push(Violation {
            rule: Rule::Range,
            witness: crossing,
            magnitude: tail,
        });
    }
    ClassReport::from_violations(violations)
}

/// `tail_bound`, when given, bounds `∫ (1 − F̃)` beyond the last breakpoint
/// and makes non-saturating functions decidable.
pub fn validate_class_ftilde<T: Scalar>(f: &StepFn<T>, tail_bound: Option<T>) -> ClassReport<T> {
    let tol = T::tie_tolerance();
    let mut violations = Vec::new();
    let mut prev = T::zero();
    for (t, v) in f.breakpoints().iter().zip(f.values()) {
        if *t < T::zero() && !v.is_zero() {
            violations.push(Violation {
                rule: Rule::ZeroOnNegatives,
                witness: t.clone(),
                magnitude: v.abs(),
            });
        }
        if *v < prev {
            violations.push(Violation {
                rule: Rule::Nondecreasing,
                witness: t.clone(),
                magnitude: prev.clone() - v.clone(),
            });
        }
        if *v < T::zero() || *v > T::one() {
            violations.push(Violation {
                rule: Rule::Range,
                witness: t.clone(),
                magnitude: v.clone(),
            });
        }
        prev = v.clone();
    }

    let last_t = f.breakpoints().last().cloned().unwrap_or_else(T::zero);
    let finite_part = f.complement_integral_to_last();
    let saturated = f.final_value() == T::one();
    let integral = if saturated {
        Some(finite_part.clone())
    } else {
        tail_bound.map(|b| finite_part.clone() + b)
    };
    let mut indeterminate = false;
    match &integral {
        Some(total) if *total > T::one() + tol.clone() => violations.push(Violation {
            rule: Rule::ComplementIntegral,
            witness: last_t,
            magnitude: total.clone() - T::one(),
        }),
        Some(_) => {}
        None if finite_part > T::one() + tol.clone() => violations.push(Violation {
            rule: Rule::ComplementIntegral,
            witness: last_t,
            magnitude: finite_part.clone() - T::one(),
        }),
        None => indeterminate = true,
    }

    let mut report = ClassReport::from_violations(violations);
    if report.violations.is_empty() && indeterminate {
        report.verdict = Verdict::Indeterminate;
    }
    report.complement_integral = integral;
    report
}
