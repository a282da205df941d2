use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Continuous piecewise-linear function on `[0, ∞)`, zero on `(−∞, 0]`.
///
/// Hitting-time laws and their interpolants live here. The representation is
/// a list of knots starting at the origin plus the slope used beyond the last
/// knot (zero for a constant extension). Only the structure is enforced on
/// construction; monotonicity, concavity and the bound `F(t) ≤ t` are
/// properties checked by [`validate_class_f`](super::validate_class_f), since
/// empirical interpolants need not have them.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    knots: Vec<(T, T)>,
    tail_slope: T,
}

impl<T: Scalar> PiecewiseLinear<T> {
    pub fn new(knots: Vec<(T, T)>) -> Result<Self> {
        Self::with_tail_slope(knots, T::zero())
    }

    pub fn with_tail_slope(knots: Vec<(T, T)>, tail_slope: T) -> Result<Self> {
        match knots.first() {
            Some((t, y)) if t.is_zero() && y.is_zero() => {}
            Some(k) => {
                return Err(Error::InvalidFunction(format!(
                    "first knot must be (0, 0), got {k:?}"
                )))
            }
            None => return Err(Error::InvalidFunction("no knots".into())),
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidFunction(format!(
                    "knot abscissae not strictly increasing at {:?}",
                    w[1].0
                )));
            }
        }
        Ok(PiecewiseLinear { knots, tail_slope })
    }

    /// `min(t, 1)`.
    pub fn min_t_one() -> Self {
        PiecewiseLinear {
            knots: vec![(T::zero(), T::zero()), (T::one(), T::one())],
            tail_slope: T::zero(),
        }
    }

    pub fn knots(&self) -> &[(T, T)] {
        &self.knots
    }

    pub fn tail_slope(&self) -> &T {
        &self.tail_slope
    }

    pub fn last_knot(&self) -> &(T, T) {
        self.knots.last().expect("at least the origin")
    }

    /// Slopes of the segments between consecutive knots, followed by the tail
    /// slope.
    pub fn slopes(&self) -> Vec<T> {
        let mut s: Vec<T> = self
            .knots
            .windows(2)
            .map(|w| (w[1].1.clone() - w[0].1.clone()) / (w[1].0.clone() - w[0].0.clone()))
            .collect();
        s.push(self.tail_slope.clone());
        s
    }

    pub fn eval(&self, t: &T) -> T {
        if *t <= T::zero() {
            return T::zero();
        }
        let idx = self.knots.partition_point(|(k, _)| k <= t);
        let (t0, y0) = &self.knots[idx - 1];
        if idx == self.knots.len() {
            return y0.clone() + self.tail_slope.clone() * (t.clone() - t0.clone());
        }
        let (t1, y1) = &self.knots[idx];
        y0.clone() + (y1.clone() - y0.clone()) * (t.clone() - t0.clone()) / (t1.clone() - t0.clone())
    }

    /// Right derivative; zero on `(−∞, 0)`.
    pub fn right_derivative(&self, t: &T) -> T {
        if *t < T::zero() {
            return T::zero();
        }
        let idx = self.knots.partition_point(|(k, _)| k <= t);
        if idx == self.knots.len() {
            return self.tail_slope.clone();
        }
        let (t0, y0) = &self.knots[idx - 1];
        let (t1, y1) = &self.knots[idx];
        (y1.clone() - y0.clone()) / (t1.clone() - t0.clone())
    }

    /// Drops knots at which the slope does not change. Exact for rationals;
    /// for floats only bit-equal slopes are merged.
    pub fn simplified(&self) -> Self {
        let slopes = self.slopes();
        let mut knots = vec![self.knots[0].clone()];
        for i in 1..self.knots.len() {
            if slopes[i] != slopes[i - 1] {
                knots.push(self.knots[i].clone());
            }
        }
        PiecewiseLinear {
            knots,
            tail_slope: self.tail_slope.clone(),
        }
    }

    /// True when `self` and `other` agree at every real point.
    pub fn same_function(&self, other: &Self) -> bool {
        let mut ts: Vec<&T> = self.knots.iter().chain(&other.knots).map(|(t, _)| t).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).expect("comparable knots"));
        ts.iter().all(|t| self.eval(t) == other.eval(t)) && self.tail_slope == other.tail_slope
    }
}
