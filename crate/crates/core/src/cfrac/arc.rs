use crate::dynsys::Frac64;
use crate::error::{Error, Result};

/// Closed arc of the circle `R/Z` traversed counterclockwise from `start` to
/// `end`; it wraps when it passes through 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleArc {
    start: Frac64,
    end: Frac64,
}

impl CircleArc {
    pub(crate) fn new(start: Frac64, end: Frac64) -> Self {
        CircleArc { start, end }
    }

    /// Arc from `start` counterclockwise to `end`, both given in `[0, 1)`.
    pub fn from_endpoints(start: f64, end: f64) -> Result<Self> {
        for x in [start, end] {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::InvalidArgument(format!("arc endpoint {x} outside [0, 1)")));
            }
        }
        let arc = CircleArc::new(Frac64::from_f64(start), Frac64::from_f64(end));
        if arc.start == arc.end {
            return Err(Error::InvalidArgument("degenerate arc".into()));
        }
        Ok(arc)
    }

    pub fn start(&self) -> Frac64 {
        self.start
    }

    pub fn end(&self) -> Frac64 {
        self.end
    }

    pub fn wraps(&self) -> bool {
        self.start.0 > self.end.0
    }

    /// Length in units of `2^{-64}`.
    pub fn length_raw(&self) -> u64 {
        self.end.0.wrapping_sub(self.start.0)
    }

    pub fn length(&self) -> f64 {
        Frac64(self.length_raw()).to_f64()
    }

    pub fn contains(&self, x: Frac64) -> bool {
        x.0.wrapping_sub(self.start.0) <= self.length_raw()
    }
}
