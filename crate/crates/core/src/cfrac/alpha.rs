use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dynsys::Frac64;
use crate::error::{Error, Result};

/// A rotation number in `(0, 1)`, held exactly.
///
/// Decimal literals and binary floats are exact rationals, so their digit
/// expansions eventually terminate. Quadratic irrationals are given by their
/// eventually periodic digit sequence, which is exact to any depth.
#[derive(Debug, Clone, PartialEq)]
pub enum Alpha {
    Rational(BigRational),
    Periodic { prefix: Vec<u64>, period: Vec<u64> },
}

/// Evaluation depth for periodic tails in `f64`. Every digit is at least 1,
/// so the truncation error is below `φ^{-160}`.
const TAIL_DEPTH: usize = 80;

impl Alpha {
    /// `(√5 − 1)/2 = [1, 1, 1, …]`.
    pub fn golden() -> Self {
        Alpha::Periodic {
            prefix: Vec::new(),
            period: vec![1],
        }
    }

    pub fn periodic(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("empty period".into()));
        }
        if prefix.iter().chain(&period).any(|&d| d == 0) {
            return Err(Error::Parse("continued-fraction digits must be positive".into()));
        }
        Ok(Alpha::Periodic { prefix, period })
    }

    /// The exact value of a finite digit list.
    pub fn from_digits(digits: &[u64]) -> Result<Self> {
        if digits.is_empty() || digits.contains(&0) {
            return Err(Error::Parse("digits must be a nonempty list of positive integers".into()));
        }
        let mut x = BigRational::zero();
        for &d in digits.iter().rev() {
            x = (BigRational::from_integer(BigInt::from(d)) + x).recip();
        }
        Self::rational(x)
    }

    pub fn rational(x: BigRational) -> Result<Self> {
        if x <= BigRational::zero() || x >= BigRational::one() {
            return Err(Error::Parse(format!("rotation number {x} outside (0, 1)")));
        }
        Ok(Alpha::Rational(x))
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::Parse(format!("non-finite rotation number {x}")))?;
        Self::rational(r)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Alpha::Rational(_))
    }

    /// Digits `a_0, a_1, …` with `a_k = ⌊1/Hᵏ(α)⌋`; finite for rationals.
    pub fn digits(&self) -> Digits<'_> {
        match self {
            Alpha::Rational(x) => Digits::Euclid {
                num: x.numer().to_biguint().expect("positive"),
                den: x.denom().to_biguint().expect("positive"),
            },
            Alpha::Periodic { prefix, period } => Digits::Periodic {
                prefix,
                period,
                index: 0,
            },
        }
    }

    /// `Hᵏ(α)` exactly, or `None` for a periodic α (see [`Alpha::tail_f64`]).
    pub fn tail_exact(&self, k: usize) -> Option<BigRational> {
        let Alpha::Rational(x) = self else { return None };
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        for _ in 0..k {
            if num.is_zero() {
                break;
            }
            let r = den.mod_floor(&num);
            den = std::mem::replace(&mut num, r);
        }
        Some(BigRational::new(num, den))
    }

    /// `Hᵏ(α) = [a_k, a_{k+1}, …]` as a float.
    pub fn tail_f64(&self, k: usize) -> f64 {
        match self {
            Alpha::Rational(_) => ratio_to_f64(&self.tail_exact(k).expect("rational")),
            Alpha::Periodic { .. } => {
                let digits: Vec<u64> = self.digits().skip(k).take(TAIL_DEPTH).collect();
                eval_cf(&digits)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.tail_f64(0)
    }

    /// An exact rational within `2^{-80}` of α (α itself when rational).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Alpha::Rational(x) => x.clone(),
            Alpha::Periodic { .. } => {
                let bound = BigUint::one() << 40u32;
                let (mut p0, mut q0) = (BigUint::one(), BigUint::zero());
                let (mut p1, mut q1) = (BigUint::zero(), BigUint::one());
                for a in self.digits() {
                    let p2 = &p1 * a + &p0;
                    let q2 = &q1 * a + &q0;
                    p0 = std::mem::replace(&mut p1, p2);
                    q0 = std::mem::replace(&mut q1, q2);
                    if q0 > bound {
                        break;
                    }
                }
                BigRational::new(BigInt::from(p1), BigInt::from(q1))
            }
        }
    }

    /// α rounded to the nearest multiple of `2^{-64}`.
    pub fn to_frac64(&self) -> Frac64 {
        let x = self.to_rational();
        let num = x.numer().to_biguint().expect("positive");
        let den = x.denom().to_biguint().expect("positive");
        let scaled: BigUint = ((num << 65u32) / den + 1u32) >> 1u32;
        // α < 1, so only rounding up to exactly one can overflow
        Frac64(scaled.to_u64().unwrap_or(u64::MAX))
    }
}

pub(crate) fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Value of `[d_0, d_1, …, d_m]` evaluated from the innermost digit out.
pub(crate) fn eval_cf(digits: &[u64]) -> f64 {
    digits
        .iter()
        .rev()
        .fold(0.0, |acc, &d| 1.0 / (d as f64 + acc))
}

/// Digit stream of an [`Alpha`].
pub enum Digits<'a> {
    Euclid { num: BigUint, den: BigUint },
    Periodic {
        prefix: &'a [u64],
        period: &'a [u64],
        index: usize,
    },
}

impl Iterator for Digits<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            Digits::Euclid { num, den } => {
                if num.is_zero() {
                    return None;
                }
                let (a, r) = den.div_mod_floor(num);
                *den = std::mem::replace(num, r);
                // digits beyond u64 only arise for absurdly close rationals
                Some(a.to_u64().unwrap_or(u64::MAX))
            }
            Digits::Periodic {
                prefix,
                period,
                index,
            } => {
                let i = *index;
                *index += 1;
                Some(if i < prefix.len() {
                    prefix[i]
                } else {
                    period[(i - prefix.len()) % period.len()]
                })
            }
        }
    }
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad decimal `{s}`"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    Ok(BigRational::new(numer, denom))
}

fn parse_digit_list(body: &str) -> Result<Vec<u64>> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|d| {
            d.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad continued-fraction digit `{d}`")))
        })
        .collect()
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts a decimal literal (`0.414`), a fraction (`3/7`), or a digit
    /// list `cf:[a,b,…]`. A trailing `*` repeats the list forever; a `;`
    /// separates a non-repeating prefix from the repeating part, as in
    /// `cf:[2;1,3*]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("cf:") {
            let body = rest
                .trim()
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected cf:[...], got `{s}`")))?;
            let (body, periodic) = match body.trim_end().strip_suffix('*') {
                Some(b) => (b, true),
                None => (body, false),
            };
            let (prefix, repeat) = match body.split_once(';') {
                Some((p, r)) => (parse_digit_list(p)?, parse_digit_list(r)?),
                None => (Vec::new(), parse_digit_list(body)?),
            };
            if periodic {
                Alpha::periodic(prefix, repeat)
            } else {
                let mut all = prefix;
                all.extend(repeat);
                Alpha::from_digits(&all)
            }
        } else if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad fraction `{s}`")))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad fraction `{s}`")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Alpha::rational(BigRational::new(p, q))
        } else {
            Alpha::rational(parse_decimal(s)?)
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Rational(x) => write!(f, "{x}"),
            Alpha::Periodic { prefix, period } => {
                let join = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                if prefix.is_empty() {
                    write!(f, "cf:[{}*]", join(period))
                } else {
                    write!(f, "cf:[{};{}*]", join(prefix), join(period))
                }
            }
        }
    }
}
