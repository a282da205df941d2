//! The duality `F(t) = ∫₀ᵗ (1 − F̃(s)) ds` between return laws and hitting
//! laws, in both directions.

use super::{PiecewiseLinear, StepFn};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Integrates `1 − f̃` exactly. Knots sit at the origin and at every
/// breakpoint of `f̃`; the slope after a breakpoint is one minus the value
/// there, and beyond the last breakpoint the slope is `1 − f̃(∞)`.
pub fn forward_transform<T: Scalar>(ftilde: &StepFn<T>) -> PiecewiseLinear<T> {
    let mut knots = vec![(T::zero(), T::zero())];
    let mut prev_t = T::zero();
    let mut prev_y = T::zero();
    let mut prev_v = T::zero();
    for (t, v) in ftilde.breakpoints().iter().zip(ftilde.values()) {
        if t.is_zero() {
            prev_v = v.clone();
            continue;
        }
        let y = prev_y + (T::one() - prev_v) * (t.clone() - prev_t);
        knots.push((t.clone(), y.clone()));
        prev_t = t.clone();
        prev_y = y;
        prev_v = v.clone();
    }
    PiecewiseLinear::with_tail_slope(knots, T::one() - prev_v)
        .expect("breakpoints are strictly increasing")
}

/// Recovers `f̃ = 1 − f'⁺`. Values at slope discontinuities follow
/// right-continuity. Fails when `f` is not concave, decreases, or has a slope
/// above one.
pub fn inverse_transform<T: Scalar>(f: &PiecewiseLinear<T>) -> Result<StepFn<T>> {
    let tol = T::tie_tolerance();
    let slopes = f.slopes();
    let knots = f.knots();
    let mut breakpoints = Vec::with_capacity(slopes.len());
    let mut values: Vec<T> = Vec::with_capacity(slopes.len());
    for (i, s) in slopes.iter().enumerate() {
        let at = &knots[i].0;
        if i > 0 && *s > slopes[i - 1].clone() + tol.clone() {
            return Err(Error::InvalidFunction(format!(
                "not concave: slope increases from {:?} to {s:?} at t = {at:?}",
                slopes[i - 1]
            )));
        }
        if *s < -tol.clone() {
            return Err(Error::InvalidFunction(format!(
                "decreasing: slope {s:?} at t = {at:?}"
            )));
        }
        if *s > T::one() + tol.clone() {
            return Err(Error::InvalidFunction(format!(
                "slope {s:?} above one at t = {at:?}"
            )));
        }
        let mut v = T::one() - s.clone();
        // absorb rounding within the tie tolerance
        if v < T::zero() {
            v = T::zero();
        }
        if v > T::one() {
            v = T::one();
        }
        if let Some(last) = values.last() {
            if v < *last {
                v = last.clone();
            }
        }
        breakpoints.push(at.clone());
        values.push(v);
    }
    StepFn::new(breakpoints, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn unit_step_maps_to_min_t_one() {
        let f = forward_transform(&StepFn::unit_step(1.0).unwrap());
        assert!(f.same_function(&PiecewiseLinear::min_t_one()));
        let back = inverse_transform(&f).unwrap();
        assert_eq!(back, StepFn::unit_step(1.0).unwrap());
    }

    #[test]
    fn z5_return_law_knots() {
        let ft = StepFn::new(vec![r(4, 5), r(6, 5)], vec![r(1, 2), r(1, 1)]).unwrap();
        let f = forward_transform(&ft);
        assert_eq!(
            f.knots(),
            &[(r(0, 1), r(0, 1)), (r(4, 5), r(4, 5)), (r(6, 5), r(1, 1))]
        );
        assert_eq!(*f.tail_slope(), r(0, 1));
        assert_eq!(inverse_transform(&f).unwrap(), ft);
    }

    #[test]
    fn jump_at_origin_lowers_initial_slope() {
        let ft = StepFn::new(vec![r(0, 1), r(2, 1)], vec![r(1, 2), r(1, 1)]).unwrap();
        let f = forward_transform(&ft);
        assert_eq!(f.eval(&r(2, 1)), r(1, 1));
        assert_eq!(f.right_derivative(&r(0, 1)), r(1, 2));
        assert_eq!(inverse_transform(&f).unwrap(), ft);
    }

    #[test]
    fn sub_probability_law_keeps_tail_slope() {
        let ft = StepFn::new(vec![r(1, 2)], vec![r(3, 4)]).unwrap();
        let f = forward_transform(&ft);
        assert_eq!(*f.tail_slope(), r(1, 4));
        assert_eq!(inverse_transform(&f).unwrap(), ft);
    }

    #[test]
    fn inverse_rejects_convex_input() {
        let f = PiecewiseLinear::new(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        assert!(inverse_transform(&f).is_err());
    }

    #[test]
    fn inverse_rejects_slope_above_one() {
        let f = PiecewiseLinear::new(vec![(0.0, 0.0), (0.5, 0.75), (1.0, 1.0)]).unwrap();
        assert!(inverse_transform(&f).is_err());
    }
}
