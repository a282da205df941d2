use rand::RngCore;

use crate::dynsys::{Point, System, TargetSet};
use crate::error::{Error, Result};

/// Outcome of an orbit scan: the first entrance time, or nothing up to the
/// cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hit {
    At(u64),
    NotHit,
}

impl Hit {
    pub fn time(self) -> Option<u64> {
        match self {
            Hit::At(k) => Some(k),
            Hit::NotHit => None,
        }
    }
}

fn check_args(s: &System, u: &TargetSet, cap: u64) -> Result<()> {
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    if !u.fits(s) {
        return Err(Error::InvalidArgument(format!("{u:?} does not live on {s:?}")));
    }
    Ok(())
}

/// Least `k` in `1..=cap` with `Tᵏx ∈ U`. The scan starts at `k = 1` even
/// when `x ∈ U`, so for such `x` this is the return time.
///
/// On the doubling map a point carries 64 known bits, so a dyadic cell of
/// depth `d` can be tested for `k ≤ 64 − d` only; a longer scan fails with
/// [`Error::PrecisionExhausted`] reporting the last step tested.
pub fn hitting_time(s: &System, u: &TargetSet, x: Point, cap: u64) -> Result<Hit> {
    check_args(s, u, cap)?;
    if let (System::Doubling, TargetSet::Dyadic { depth, .. }) = (s, u) {
        let usable = 64 - *depth as u64;
        let mut y = x;
        for k in 1..=cap {
            if k > usable {
                return Err(Error::PrecisionExhausted { reached: k - 1 });
            }
            y = s.step(y);
            if u.contains(y) {
                return Ok(Hit::At(k));
            }
        }
        return Ok(Hit::NotHit);
    }
    let mut y = x;
    for k in 1..=cap {
        y = s.step(y);
        if u.contains(y) {
            return Ok(Hit::At(k));
        }
    }
    Ok(Hit::NotHit)
}

/// Like [`hitting_time`], but on the doubling map the binary expansion of
/// `x` is continued with fresh uniform bits from `tail` once its 64 known
/// bits are used up, so the scan can run to any cap. The flag reports
/// whether the tail was needed.
pub fn hitting_time_extended<R: RngCore>(
    s: &System,
    u: &TargetSet,
    x: Point,
    cap: u64,
    tail: &mut R,
) -> Result<(Hit, bool)> {
    match (s, u, x) {
        (System::Doubling, TargetSet::Dyadic { depth, index }, Point::Circle(v)) => {
            check_args(s, u, cap)?;
            Ok(doubling_scan(*depth, *index, v.0, cap, tail))
        }
        _ => hitting_time(s, u, x, cap).map(|h| (h, false)),
    }
}

/// Bits `k+1, …, k+depth` of the expansion are the cell index of `Tᵏx`.
/// `reg` holds the next `valid` bits of the expansion, most significant
/// first; the rest of the register is zero.
fn doubling_scan<R: RngCore>(depth: u32, index: u64, x: u64, cap: u64, tail: &mut R) -> (Hit, bool) {
    let shift = 128 - depth;
    let target = index as u128;
    let mut reg: u128 = (x as u128) << 64;
    let mut valid = 64u32;
    let mut extended = false;
    for k in 1..=cap {
        reg <<= 1;
        valid -= 1;
        if valid < depth {
            reg |= (tail.next_u64() as u128) << (64 - valid);
            valid += 64;
            extended = true;
        }
        if reg >> shift == target {
            return (Hit::At(k), extended);
        }
    }
    (Hit::NotHit, extended)
}
