//! Sup-norm distances and derivative comparisons.

use super::{PiecewiseLinear, StepFn};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A distribution-like function that can be compared in the sup norm.
pub trait DistFn<T> {
    fn eval_at(&self, t: &T) -> T;

    fn left_limit_at(&self, t: &T) -> T {
        self.eval_at(t)
    }

    /// Points where the function changes form. Together with their left
    /// limits they carry the supremum between two finite representations.
    fn structural_points(&self) -> Vec<T> {
        Vec::new()
    }
}

impl<T: Scalar> DistFn<T> for StepFn<T> {
    fn eval_at(&self, t: &T) -> T {
        self.eval(t)
    }

    fn left_limit_at(&self, t: &T) -> T {
        self.left_limit(t)
    }

    fn structural_points(&self) -> Vec<T> {
        self.breakpoints().to_vec()
    }
}

impl<T: Scalar> DistFn<T> for PiecewiseLinear<T> {
    fn eval_at(&self, t: &T) -> T {
        self.eval(t)
    }

    fn structural_points(&self) -> Vec<T> {
        self.knots().iter().map(|(t, _)| t.clone()).collect()
    }
}

/// A function given by a closed form, such as `1 − e^{−t}`.
pub struct ClosedForm<F>(pub F);

impl<F: Fn(f64) -> f64> DistFn<f64> for ClosedForm<F> {
    fn eval_at(&self, t: &f64) -> f64 {
        (self.0)(*t)
    }
}

impl DistFn<f64> for super::Law {
    fn eval_at(&self, t: &f64) -> f64 {
        match self {
            super::Law::Step(f) => f.eval_at(t),
            super::Law::Linear(f) => f.eval_at(t),
        }
    }

    fn left_limit_at(&self, t: &f64) -> f64 {
        match self {
            super::Law::Step(f) => f.left_limit_at(t),
            super::Law::Linear(f) => f.left_limit_at(t),
        }
    }

    fn structural_points(&self) -> Vec<f64> {
        match self {
            super::Law::Step(f) => f.structural_points(),
            super::Law::Linear(f) => f.structural_points(),
        }
    }
}

/// `max |a(t) − b(t)|` over `grid`, the structural points of both functions
/// and the left limits there. For two finite representations the result is
/// the exact supremum over the real line; closed forms are only seen on the
/// grid.
pub fn sup_distance<T, A, B>(a: &A, b: &B, grid: &[T]) -> Result<T>
where
    T: Scalar,
    A: DistFn<T> + ?Sized,
    B: DistFn<T> + ?Sized,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty evaluation grid".into()));
    }
    let mut best = T::zero();
    for t in grid {
        best = T::max_of(best, (a.eval_at(t) - b.eval_at(t)).abs());
    }
    for t in a.structural_points().iter().chain(b.structural_points().iter()) {
        best = T::max_of(best, (a.eval_at(t) - b.eval_at(t)).abs());
        best = T::max_of(best, (a.left_limit_at(t) - b.left_limit_at(t)).abs());
    }
    Ok(best)
}

/// `max |a(t) − b(t)|` over `grid` alone. Used to compare step functions
/// away from jumps whose locations only converge.
pub fn grid_distance<T, A, B>(a: &A, b: &B, grid: &[T]) -> Result<T>
where
    T: Scalar,
    A: DistFn<T> + ?Sized,
    B: DistFn<T> + ?Sized,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty evaluation grid".into()));
    }
    Ok(grid
        .iter()
        .fold(T::zero(), |best, t| T::max_of(best, (a.eval_at(t) - b.eval_at(t)).abs())))
}

/// Evenly spaced points `start, start + step, …` up to and including `stop`
/// (within half a step).
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) || stop.partial_cmp(&start).is_none_or(|o| o.is_lt()) {
        return Err(Error::InvalidArgument(format!(
            "grid {start}..{stop} step {step} is empty"
        )));
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// `|f_n'⁺(t) − limit'⁺(t)|` for every member of `sequence` (outer index) and
/// every probe (inner index). Probes must avoid the knots of `limit`, where
/// derivatives of converging concave functions need not converge.
pub fn derivative_convergence_check(
    sequence: &[PiecewiseLinear<f64>],
    limit: &PiecewiseLinear<f64>,
    probes: &[f64],
) -> Result<Vec<Vec<f64>>> {
    for p in probes {
        if limit.knots().iter().any(|(t, _)| t == p) {
            return Err(Error::InvalidArgument(format!(
                "probe {p} sits on a knot of the limit"
            )));
        }
    }
    Ok(sequence
        .iter()
        .map(|f| {
            probes
                .iter()
                .map(|p| (f.right_derivative(p) - limit.right_derivative(p)).abs())
                .collect()
        })
        .collect())
}
