//! Continued-fraction machinery for rotation numbers: the Gauss map, digit
//! expansions, convergents, the natural extension and renormalization arcs.
//!
//! Indexing: digits are `a_0, a_1, …` with `α = 1/(a_0 + 1/(a_1 + …))` and
//! `a_k = ⌊1/Hᵏ(α)⌋`. Convergents are stored from `(p_0, q_0) = (1, 0)`,
//! `(p_1, q_1) = (0, 1)` and `q_{k+1} = a_{k−1} q_k + q_{k−1}`, so that the
//! denominators of the golden number run `0, 1, 1, 2, 3, 5, 8, …` and
//! `p_k/q_k` is the value of the first `k − 1` digits.

mod alpha;
mod arc;

use num_rational::BigRational;
use num_traits::Zero;

pub use alpha::{Alpha, Digits};
pub use arc::CircleArc;

use crate::dynsys::Frac64;
use crate::error::{Error, Result};

/// Fractional part of `1/x`, with `H(0) = 0`.
pub fn gauss_map(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (1.0 / x).fract()
    }
}

/// Exact Gauss map on rationals.
pub fn gauss_map_exact(x: &BigRational) -> BigRational {
    if x.is_zero() {
        x.clone()
    } else {
        x.recip().fract()
    }
}

/// First `order` digits of α and the convergents they generate.
#[derive(Debug, Clone)]
pub struct CfState {
    pub alpha: Alpha,
    pub digits: Vec<u64>,
    /// `(p_k, q_k)` for `k = 0, …, order + 1`.
    pub convergents: Vec<(u128, u128)>,
    pub order: usize,
}

impl CfState {
    pub fn p(&self, k: usize) -> u128 {
        self.convergents[k].0
    }

    pub fn q(&self, k: usize) -> u128 {
        self.convergents[k].1
    }

    /// `|q_k α − p_k|`, from the identity `|q_k α − p_k| = 1/(q_{k+1} + Hᵏ(α) q_k)`
    /// which avoids cancellation.
    pub fn approximation_error(&self, k: usize) -> f64 {
        assert!(k < self.convergents.len() - 1, "needs q_{{k+1}}");
        let theta = self.alpha.tail_f64(k);
        1.0 / (self.q(k + 1) as f64 + theta * self.q(k) as f64)
    }
}

/// Expands α to `order` digits.
///
/// Fails with [`Error::RationalDetected`] when `Hᵏ(α) = 0` for some
/// `k ≤ order`, and with [`Error::PrecisionExhausted`] when a convergent no
/// longer fits in 128 bits.
pub fn expand(alpha: &Alpha, order: usize) -> Result<CfState> {
    if order == 0 {
        return Err(Error::InvalidArgument("expansion order must be positive".into()));
    }
    let digits: Vec<u64> = alpha.digits().take(order + 1).collect();
    if digits.len() <= order {
        if let Alpha::Rational(x) = alpha {
            return Err(Error::RationalDetected {
                numer: x.numer().to_string(),
                denom: x.denom().to_string(),
                digits,
            });
        }
    }
    let digits = digits[..order].to_vec();
    let mut convergents: Vec<(u128, u128)> = vec![(1, 0), (0, 1)];
    for (k, &a) in digits.iter().enumerate() {
        let (p1, q1) = convergents[k + 1];
        let (p0, q0) = convergents[k];
        let step = |x1: u128, x0: u128| {
            (a as u128)
                .checked_mul(x1)
                .and_then(|v| v.checked_add(x0))
                .ok_or(Error::PrecisionExhausted { reached: k as u64 })
        };
        convergents.push((step(p1, p0)?, step(q1, q0)?));
    }
    Ok(CfState {
        alpha: alpha.clone(),
        digits,
        convergents,
        order,
    })
}

/// A point `Γⁿ(α, β) = (Hⁿ(α), [a_{n−1}, …, a_0, b_0, b_1, …])` of the natural
/// extension of the Gauss map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalExtensionPoint {
    pub theta: f64,
    pub omega: f64,
    pub order: usize,
}

/// Maximum number of digits of β appended after the reversed digits of α.
const BETA_DIGITS: usize = 64;

pub fn natural_extension(alpha: &Alpha, beta: f64, order: usize) -> Result<NaturalExtensionPoint> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta {beta} outside [0, 1]")));
    }
    let state = expand(alpha, order)?;
    let mut chain: Vec<u64> = state.digits.iter().rev().copied().collect();
    if beta > 0.0 {
        // β = 1 has the single digit 1; otherwise the exact dyadic digits
        let beta_digits: Vec<u64> = match Alpha::from_f64(beta) {
            Ok(b) => b.digits().take(BETA_DIGITS).collect(),
            Err(_) => vec![1],
        };
        chain.extend(beta_digits);
    }
    Ok(NaturalExtensionPoint {
        theta: alpha.tail_f64(order),
        omega: alpha::eval_cf(&chain),
        order,
    })
}

/// The closed arc with endpoints `z + q_{n−1}α` and `z + q_n α` that contains
/// `z`. Requires `n ≥ 2`: at `n = 1` the endpoint `z + q_0 α` is `z` itself.
pub fn renormalization_interval(alpha: &Alpha, z: Frac64, n: usize) -> Result<CircleArc> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "renormalization index must be at least 2, got {n}"
        )));
    }
    let state = expand(alpha, n)?;
    let a64 = alpha.to_frac64().0;
    let offset = |q: u128| -> Result<i64> {
        let q = u64::try_from(q).map_err(|_| Error::PrecisionExhausted { reached: n as u64 })?;
        Ok(q.wrapping_mul(a64) as i64)
    };
    if state.q(n - 1) == state.q(n) {
        return Err(Error::InvalidArgument(format!(
            "J_{n} is degenerate: q_{} = q_{n} because the first digit is 1",
            n - 1
        )));
    }
    let o1 = offset(state.q(n - 1))?;
    let o2 = offset(state.q(n))?;
    // the two returns land on opposite sides of z; rounding α to 64 bits can
    // break that only when q‖qα‖ is below the lattice resolution
    if o1.signum() * o2.signum() >= 0 {
        return Err(Error::PrecisionExhausted { reached: n as u64 });
    }
    let (lo, hi) = if o1 < o2 { (o1, o2) } else { (o2, o1) };
    Ok(CircleArc::new(
        Frac64(z.0.wrapping_add(lo as u64)),
        Frac64(z.0.wrapping_add(hi as u64)),
    ))
}

/// Natural-extension parameters governing the hitting law of the arc
/// `J_n`: the arc built from `q_{n−1}, q_n` pairs with `Γ^{n−1}`.
pub fn renormalization_parameters(alpha: &Alpha, n: usize) -> Result<NaturalExtensionPoint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "renormalization index must be at least 2, got {n}"
        )));
    }
    natural_extension(alpha, 0.0, n - 1)
}
