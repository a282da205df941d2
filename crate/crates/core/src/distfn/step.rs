use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right-continuous nondecreasing step function on `[0, ∞)` with values in
/// `[0, 1]`; the value left of the first breakpoint is 0.
///
/// Return-time laws live here. Breakpoints whose value does not change the
/// function are dropped on construction, so two step functions that agree
/// everywhere have identical representations.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> StepFn<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut kept_b = Vec::with_capacity(breakpoints.len());
        let mut kept_v: Vec<T> = Vec::with_capacity(values.len());
        let mut prev_t: Option<&T> = None;
        for (t, v) in breakpoints.iter().zip(&values) {
            if *t < T::zero() {
                return Err(Error::InvalidFunction(format!("negative breakpoint {t:?}")));
            }
            if let Some(p) = prev_t {
                if t <= p {
                    return Err(Error::InvalidFunction(format!(
                        "breakpoints not strictly increasing at {t:?}"
                    )));
                }
            }
            prev_t = Some(t);
            if *v < T::zero() || *v > T::one() {
                return Err(Error::InvalidFunction(format!(
                    "value {v:?} at {t:?} outside [0, 1]"
                )));
            }
            let last = kept_v.last().cloned().unwrap_or_else(T::zero);
            if *v < last {
                return Err(Error::InvalidFunction(format!(
                    "values decrease at {t:?}: {last:?} -> {v:?}"
                )));
            }
            if *v > last {
                kept_b.push(t.clone());
                kept_v.push(v.clone());
            }
        }
        Ok(StepFn {
            breakpoints: kept_b,
            values: kept_v,
        })
    }

    /// Unit step at `t`.
    pub fn unit_step(t: T) -> Result<Self> {
        Self::new(vec![t], vec![T::one()])
    }

    /// The identically zero function.
    pub fn zero() -> Self {
        StepFn {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, t: &T) -> T {
        let idx = self.breakpoints.partition_point(|b| b <= t);
        if idx == 0 {
            T::zero()
        } else {
            self.values[idx - 1].clone()
        }
    }

    /// Limit from the left at `t`.
    pub fn left_limit(&self, t: &T) -> T {
        let idx = self.breakpoints.partition_point(|b| b < t);
        if idx == 0 {
            T::zero()
        } else {
            self.values[idx - 1].clone()
        }
    }

    /// Value held beyond the last breakpoint.
    pub fn final_value(&self) -> T {
        self.values.last().cloned().unwrap_or_else(T::zero)
    }

    /// `∫₀^b (1 − f)` where `b` is the last breakpoint.
    pub fn complement_integral_to_last(&self) -> T {
        let mut acc = T::zero();
        let mut prev_t = T::zero();
        let mut prev_v = T::zero();
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            acc = acc + (T::one() - prev_v.clone()) * (t.clone() - prev_t.clone());
            prev_t = t.clone();
            prev_v = v.clone();
        }
        acc
    }

    /// `∫₀^∞ (1 − f)`, or `None` when the function does not saturate at 1.
    pub fn complement_integral(&self) -> Option<T> {
        if self.final_value() == T::one() {
            Some(self.complement_integral_to_last())
        } else {
            None
        }
    }

    /// True when `self` and `other` agree at every real point.
    pub fn same_function(&self, other: &Self) -> bool {
        self == other
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<StepFn<U>> {
        StepFn::new(
            self.breakpoints.iter().map(&f).collect(),
            self.values.iter().map(&f).collect(),
        )
    }
}

impl StepFn<f64> {
    /// Empirical distribution function of `samples` where each sample carries
    /// mass `1 / total`. Samples beyond the slice (e.g. never-hit starts) are
    /// accounted for only through `total`, which leaves the deficit visible.
    pub fn empirical(samples: &[f64], total: usize) -> Result<Self> {
        if total == 0 {
            return Err(Error::InvalidArgument("empirical CDF of an empty sample".into()));
        }
        if samples.len() > total {
            return Err(Error::InvalidArgument(format!(
                "{} samples but total mass count {}",
                samples.len(),
                total
            )));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let mut b = Vec::new();
        let mut v = Vec::new();
        let mut count = 0usize;
        for (i, s) in sorted.iter().enumerate() {
            count += 1;
            if i + 1 == sorted.len() || sorted[i + 1] != *s {
                b.push(*s);
                v.push(count as f64 / total as f64);
            }
        }
        Self::new(b, v)
    }
}
