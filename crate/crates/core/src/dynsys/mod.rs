//! Measure-preserving systems with exact orbit arithmetic.
//!
//! * `finite:N,r` is the rotation `x ↦ x + r mod N` with counting measure; it
//!   is ergodic when `gcd(r, N) = 1` and serves as an exact oracle.
//! * `rot:α` is the rigid rotation `x ↦ x + α mod 1` with Lebesgue measure,
//!   computed in 64-bit fixed point so that rotation is exact modular
//!   addition.
//! * `doubling` is `x ↦ 2x mod 1`, a one-bit shift of the fixed-point word.

mod spec;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfrac::{Alpha, CircleArc};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A point of the circle `R/Z` stored as `k / 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Frac64(pub u64);

const TWO_64: f64 = 18_446_744_073_709_551_616.0;

impl Frac64 {
    /// Nearest lattice point to `x mod 1`.
    pub fn from_f64(x: f64) -> Self {
        let x = x.rem_euclid(1.0);
        let scaled = (x * TWO_64).round();
        if scaled >= TWO_64 {
            Frac64(0)
        } else {
            Frac64(scaled as u64)
        }
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO_64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum System {
    FiniteRotation { modulus: u64, shift: u64 },
    CircleRotation { alpha: Frac64, source: Alpha },
    Doubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Residue(u64),
    Circle(Frac64),
}

/// A target set `U` of positive measure.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSet {
    /// Residues modulo `modulus`, sorted and distinct.
    Subset { modulus: u64, residues: Vec<u64> },
    Arc(CircleArc),
    /// The half-open cell `[index·2^{-depth}, (index+1)·2^{-depth})`.
    Dyadic { depth: u32, index: u64 },
}

/// Largest dyadic depth whose cells are resolved by a 64-bit point with room
/// to move.
pub const MAX_DYADIC_DEPTH: u32 = 63;

impl System {
    pub fn finite(modulus: u64, shift: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("finite rotation needs N ≥ 1".into()));
        }
        let shift = shift % modulus;
        if shift.gcd(&modulus) != 1 {
            return Err(Error::InvalidArgument(format!(
                "finite rotation by {shift} on Z/{modulus} is not ergodic (gcd ≠ 1)"
            )));
        }
        Ok(System::FiniteRotation { modulus, shift })
    }

    pub fn rotation(alpha: Alpha) -> Self {
        System::CircleRotation {
            alpha: alpha.to_frac64(),
            source: alpha,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, System::FiniteRotation { .. })
    }

    /// Cautions about the system that do not prevent its use.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if let System::CircleRotation { alpha, source } = self {
            if source.is_rational() {
                w.push(format!("rotation number {source} is rational; orbits are periodic"));
            } else if alpha.0.trailing_zeros() >= 32 {
                w.push("rotation number has a short dyadic fixed-point representation".into());
            }
        }
        w
    }

    pub fn step(&self, x: Point) -> Point {
        match (self, x) {
            (System::FiniteRotation { modulus, shift }, Point::Residue(v)) => {
                Point::Residue(((v as u128 + *shift as u128) % *modulus as u128) as u64)
            }
            (System::CircleRotation { alpha, .. }, Point::Circle(v)) => {
                Point::Circle(Frac64(v.0.wrapping_add(alpha.0)))
            }
            (System::Doubling, Point::Circle(v)) => Point::Circle(Frac64(v.0 << 1)),
            (s, p) => panic!("point {p:?} does not belong to {s:?}"),
        }
    }

    /// `Tⁿ x`. Rotations use a single widened multiply; the doubling map runs
    /// out of known bits at `n ≥ 64`.
    pub fn iterate_to(&self, x: Point, n: u64) -> Result<Point> {
        Ok(match (self, x) {
            (System::FiniteRotation { modulus, shift }, Point::Residue(v)) => {
                let m = *modulus as u128;
                Point::Residue(((v as u128 + (n as u128 % m) * *shift as u128) % m) as u64)
            }
            (System::CircleRotation { alpha, .. }, Point::Circle(v)) => {
                Point::Circle(Frac64(v.0.wrapping_add(n.wrapping_mul(alpha.0))))
            }
            (System::Doubling, Point::Circle(v)) => {
                if n >= 64 {
                    return Err(Error::PrecisionExhausted { reached: 63 });
                }
                Point::Circle(Frac64(v.0 << n))
            }
            (s, p) => {
                return Err(Error::InvalidArgument(format!(
                    "point {p:?} does not belong to {s:?}"
                )))
            }
        })
    }

    /// `m` points distributed by the invariant measure. Finite systems are
    /// swept exhaustively when `m ≥ N` and otherwise give the first `m`
    /// entries of a seeded shuffle; circle systems draw `m` independent
    /// uniform lattice points. Equal seeds give equal output.
    pub fn sample_points(&self, m: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            System::FiniteRotation { modulus, .. } => {
                let all = (0..*modulus).map(Point::Residue);
                if m as u64 >= *modulus {
                    all.collect()
                } else {
                    let mut pts: Vec<Point> = all.collect();
                    pts.shuffle(&mut rng);
                    pts.truncate(m);
                    pts
                }
            }
            System::CircleRotation { .. } | System::Doubling => {
                (0..m).map(|_| Point::Circle(Frac64(rng.gen()))).collect()
            }
        }
    }

    /// One point drawn from the invariant measure.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        match self {
            System::FiniteRotation { modulus, .. } => Point::Residue(rng.gen_range(0..*modulus)),
            _ => Point::Circle(Frac64(rng.gen())),
        }
    }
}

impl TargetSet {
    pub fn subset(modulus: u64, residues: &[u64]) -> Result<Self> {
        let mut r: Vec<u64> = residues.to_vec();
        if let Some(bad) = r.iter().find(|&&x| x >= modulus) {
            return Err(Error::InvalidArgument(format!("residue {bad} not below {modulus}")));
        }
        r.sort_unstable();
        r.dedup();
        if r.is_empty() {
            return Err(Error::InvalidArgument("empty subset has measure zero".into()));
        }
        Ok(TargetSet::Subset {
            modulus,
            residues: r,
        })
    }

    pub fn dyadic(depth: u32, index: u64) -> Result<Self> {
        if depth == 0 || depth > MAX_DYADIC_DEPTH {
            return Err(Error::InvalidArgument(format!(
                "dyadic depth {depth} outside 1..={MAX_DYADIC_DEPTH}"
            )));
        }
        if index >> depth != 0 {
            return Err(Error::InvalidArgument(format!(
                "dyadic index {index} not below 2^{depth}"
            )));
        }
        Ok(TargetSet::Dyadic { depth, index })
    }

    /// The dyadic cell of depth `depth` containing `x`.
    pub fn dyadic_around(depth: u32, x: Frac64) -> Result<Self> {
        if depth == 0 || depth > MAX_DYADIC_DEPTH {
            return Err(Error::InvalidArgument(format!("dyadic depth {depth} out of range")));
        }
        Self::dyadic(depth, x.0 >> (64 - depth))
    }

    pub fn measure(&self) -> f64 {
        match self {
            TargetSet::Subset { modulus, residues } => residues.len() as f64 / *modulus as f64,
            TargetSet::Arc(arc) => arc.length(),
            TargetSet::Dyadic { depth, .. } => (-(*depth as f64)).exp2(),
        }
    }

    /// Exact measure where it is a small rational.
    pub fn measure_exact(&self) -> Option<Rational> {
        match self {
            TargetSet::Subset { modulus, residues } => {
                Some(Rational::new(residues.len() as i64, i64::try_from(*modulus).ok()?))
            }
            TargetSet::Dyadic { depth, .. } if *depth <= 62 => Some(Rational::new(1, 1i64 << depth)),
            _ => None,
        }
    }

    /// Membership; arcs are closed and dyadic cells half-open.
    pub fn contains(&self, x: Point) -> bool {
        match (self, x) {
            (TargetSet::Subset { residues, .. }, Point::Residue(v)) => residues.binary_search(&v).is_ok(),
            (TargetSet::Arc(arc), Point::Circle(v)) => arc.contains(v),
            (TargetSet::Dyadic { depth, index }, Point::Circle(v)) => v.0 >> (64 - depth) == *index,
            _ => false,
        }
    }

    /// Whether this set lives on the phase space of `system`.
    pub fn fits(&self, system: &System) -> bool {
        match (self, system) {
            (TargetSet::Subset { modulus, .. }, System::FiniteRotation { modulus: n, .. }) => modulus == n,
            (TargetSet::Arc(_), System::CircleRotation { .. }) => true,
            (TargetSet::Dyadic { .. }, System::CircleRotation { .. } | System::Doubling) => true,
            _ => false,
        }
    }
}

pub use spec::{parse_set, parse_system};
