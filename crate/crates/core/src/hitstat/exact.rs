//! Exact return decomposition of finite rotations.
//!
//! For a target `U`, `V_k` is the part of `U` returning in exactly `k` steps
//! and `U_k` the part of the whole space first entering `U` at step `k`. The
//! masses satisfy `μ(U_k) = Σ_{j≥k} μ(V_j)`, `Σ_k μ(U_k) = 1` and Kac's
//! identity `Σ_k k μ(V_k) = 1`.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::distfn::{forward_transform, inverse_transform, sup_distance, PiecewiseLinear, StepFn};
use crate::dynsys::{System, TargetSet};
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnDecomposition {
    pub mu_u: Rational,
    /// `k ↦ μ(V_k)`, nonzero entries only.
    pub vk: BTreeMap<u64, Rational>,
    /// `k ↦ μ(U_k)`, nonzero entries only.
    pub uk: BTreeMap<u64, Rational>,
}

/// Enumerates every point of a finite rotation. The rotation is a single
/// cycle, so hitting times are distances to the next member of `U` along it.
pub fn decompose_exact(s: &System, u: &TargetSet) -> Result<ReturnDecomposition> {
    let System::FiniteRotation { modulus, shift } = *s else {
        return Err(Error::InvalidArgument("exact decomposition needs a finite rotation".into()));
    };
    let TargetSet::Subset { modulus: m, residues } = u else {
        return Err(Error::InvalidArgument("exact decomposition needs a subset target".into()));
    };
    if *m != modulus {
        return Err(Error::InvalidArgument(format!("subset of Z/{m} on Z/{modulus}")));
    }
    let n = modulus as usize;
    let denom = i64::try_from(modulus).map_err(|_| Error::InvalidArgument("modulus too large".into()))?;

    // in_u[j] tells whether the j-th point of the cycle 0, r, 2r, … lies in U
    let mut in_u = vec![false; n];
    let mut x = 0u64;
    for slot in in_u.iter_mut() {
        *slot = residues.binary_search(&x).is_ok();
        x = ((x as u128 + shift as u128) % modulus as u128) as u64;
    }
    let first = in_u.iter().position(|&b| b).expect("subset is nonempty");

    let mut v_counts: BTreeMap<u64, i64> = BTreeMap::new();
    let mut u_counts: BTreeMap<u64, i64> = BTreeMap::new();
    // walk backwards over two laps so every position sees its successor in U
    let mut next_hit = first + 2 * n;
    for j in (0..2 * n).rev() {
        if j < n {
            let tau = (next_hit - j) as u64;
            *u_counts.entry(tau).or_default() += 1;
            if in_u[j] {
                *v_counts.entry(tau).or_default() += 1;
            }
        }
        if in_u[j % n] {
            next_hit = j;
        }
    }
    let to_mass = |c: BTreeMap<u64, i64>| {
        c.into_iter()
            .map(|(k, c)| (k, Rational::new(c, denom)))
            .collect()
    };
    Ok(ReturnDecomposition {
        mu_u: Rational::new(residues.len() as i64, denom),
        vk: to_mass(v_counts),
        uk: to_mass(u_counts),
    })
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

impl ReturnDecomposition {
    pub fn v(&self, k: u64) -> Rational {
        self.vk.get(&k).copied().unwrap_or_else(zero)
    }

    pub fn u(&self, k: u64) -> Rational {
        self.uk.get(&k).copied().unwrap_or_else(zero)
    }

    /// Largest return time.
    pub fn max_time(&self) -> u64 {
        self.uk.keys().next_back().copied().unwrap_or(0)
    }

    /// `Σ_k k μ(V_k)`.
    pub fn kac_sum(&self) -> Rational {
        self.vk
            .iter()
            .map(|(k, v)| Rational::from_integer(*k as i64) * v)
            .sum()
    }

    /// Checks the four mass identities exactly; returns the failing one.
    pub fn check_identities(&self) -> std::result::Result<(), String> {
        let one = Rational::from_integer(1);
        let sum_v: Rational = self.vk.values().sum();
        if sum_v != self.mu_u {
            return Err(format!("Σ μ(V_k) = {sum_v} ≠ μ(U) = {}", self.mu_u));
        }
        let sum_u: Rational = self.uk.values().sum();
        if sum_u != one {
            return Err(format!("Σ μ(U_k) = {sum_u} ≠ 1"));
        }
        if self.kac_sum() != one {
            return Err(format!("Kac sum {} ≠ 1", self.kac_sum()));
        }
        let mut tail = zero();
        for k in (1..=self.max_time()).rev() {
            tail += self.v(k);
            if self.u(k) != tail {
                return Err(format!("μ(U_{k}) = {} ≠ Σ_(j≥{k}) μ(V_j) = {tail}", self.u(k)));
            }
        }
        Ok(())
    }

    fn node(&self, k: u64) -> Rational {
        Rational::from_integer(k as i64) * self.mu_u
    }

    /// `F_U`: jump `μ(U_k)` at `k μ(U)`.
    pub fn hitting_law(&self) -> StepFn<Rational> {
        let mut acc = zero();
        let (b, v) = self
            .uk
            .iter()
            .map(|(k, m)| {
                acc += m;
                (self.node(*k), acc)
            })
            .unzip();
        StepFn::new(b, v).expect("masses are nonnegative and sum to one")
    }

    /// `F̃_U`: jump `μ(V_k)/μ(U)` at `k μ(U)`.
    pub fn return_law(&self) -> StepFn<Rational> {
        let mut acc = zero();
        let (b, v) = self
            .vk
            .iter()
            .map(|(k, m)| {
                acc += m / self.mu_u;
                (self.node(*k), acc)
            })
            .unzip();
        StepFn::new(b, v).expect("conditional masses sum to one")
    }

    /// `F̄_U`: agrees with `F_U` at every node `k μ(U)` and is linear between
    /// consecutive nodes.
    pub fn interpolated_hitting_law(&self) -> PiecewiseLinear<Rational> {
        let f = self.hitting_law();
        let knots = (0..=self.max_time())
            .map(|k| {
                let t = self.node(k);
                let y = f.eval(&t);
                (t, y)
            })
            .collect();
        PiecewiseLinear::new(knots).expect("nodes are increasing from the origin")
    }
}

/// Exact check of the identities linking `F_U`, `F̃_U` and `F̄_U`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarReport {
    /// `max |F̄_U'⁺ − (1 − F̃_U)|` over the nodes.
    pub derivative_violation: Rational,
    /// `max |jump of F_U at kμ(U) − μ(U_k)|`.
    pub jump_violation: Rational,
    /// `max |F̄_U'⁺(kμ(U)) − μ(U_{k+1})/μ(U)|`.
    pub slope_violation: Rational,
    /// `sup |F_U − F̄_U|`.
    pub sup_gap: Rational,
    /// `μ(U)`, the bound on `sup_gap`.
    pub bound: Rational,
    /// `forward_transform(F̃_U) = F̄_U` as functions.
    pub forward_matches: bool,
    /// `inverse_transform(F̄_U) = F̃_U` as functions.
    pub inverse_matches: bool,
}

impl StarReport {
    pub fn holds(&self) -> bool {
        let z = zero();
        self.derivative_violation == z
            && self.jump_violation == z
            && self.slope_violation == z
            && self.sup_gap <= self.bound
            && self.forward_matches
            && self.inverse_matches
    }
}

pub fn verify_star_identities(d: &ReturnDecomposition) -> StarReport {
    let f = d.hitting_law();
    let ft = d.return_law();
    let bar = d.interpolated_hitting_law();
    let one = Rational::from_integer(1);
    let mut derivative_violation = zero();
    let mut jump_violation = zero();
    let mut slope_violation = zero();
    for k in 0..=d.max_time() {
        let t = d.node(k);
        let slope = bar.right_derivative(&t);
        derivative_violation = derivative_violation.max((slope - (one - ft.eval(&t))).abs());
        slope_violation = slope_violation.max((slope - d.u(k + 1) / d.mu_u).abs());
        if k >= 1 {
            let jump = f.eval(&t) - f.left_limit(&t);
            jump_violation = jump_violation.max((jump - d.u(k)).abs());
        }
    }
    let sup_gap = sup_distance(&f, &bar, &[zero()]).expect("grid is nonempty");
    let forward_matches = forward_transform(&ft).same_function(&bar);
    let inverse_matches = inverse_transform(&bar).is_ok_and(|g| g.same_function(&ft));
    StarReport {
        derivative_violation,
        jump_violation,
        slope_violation,
        sup_gap,
        bound: d.mu_u,
        forward_matches,
        inverse_matches,
    }
}
