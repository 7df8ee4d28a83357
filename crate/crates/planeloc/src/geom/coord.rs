use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integers with magnitude at most this bound take the machine-word path.
pub(crate) const SMALL_MAX: i64 = 1 << 31;

/// Exact rational coordinate.
///
/// Small integers are stored inline; everything else is a canonical
/// `BigRational`. The two representations never overlap, so structural
/// equality is value equality.
#[derive(Clone)]
pub struct Coord(pub(crate) Repr);

#[derive(Clone)]
pub(crate) enum Repr {
    Small(i64),
    Big(BigRational),
}

impl Coord {
    pub fn from_int(v: i64) -> Coord {
        if v.abs() <= SMALL_MAX {
            Coord(Repr::Small(v))
        } else {
            Coord(Repr::Big(BigRational::from_integer(BigInt::from(v))))
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Coord {
        assert!(den != 0, "zero denominator");
        Coord::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Coord {
        if r.denom().is_one() {
            if let Some(v) = r.numer().to_i64() {
                if v.abs() <= SMALL_MAX {
                    return Coord(Repr::Small(v));
                }
            }
        }
        Coord(Repr::Big(r))
    }

    pub fn zero() -> Coord {
        Coord(Repr::Small(0))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn small(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    /// Numerator and denominator as machine words, when they fit.
    pub(crate) fn small_ratio(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(v) => Some((*v, 1)),
            Repr::Big(r) => Some((r.numer().to_i64()?, r.denom().to_i64()?)),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.to_big().numer().clone()
    }

    pub fn denom(&self) -> BigInt {
        self.to_big().denom().clone()
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_) => true,
            Repr::Big(r) => r.denom().is_one(),
        }
    }

    pub fn signum(&self) -> Ordering {
        match &self.0 {
            Repr::Small(v) => v.cmp(&0),
            Repr::Big(r) => {
                if r.is_positive() {
                    Ordering::Greater
                } else if r.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Coord {
        Coord::from_int(v)
    }
}

impl From<i32> for Coord {
    fn from(v: i32) -> Coord {
        Coord::from_int(v as i64)
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Coord) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coord {}

impl Hash for Coord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(v) => {
                0u8.hash(state);
                v.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Coord) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => match (self.small_ratio(), other.small_ratio()) {
                (Some((a, b)), Some((c, d))) => (a as i128 * d as i128).cmp(&(c as i128 * b as i128)),
                _ => self.to_big().cmp(&other.to_big()),
            },
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Coord) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Coord> for &'a Coord {
            type Output = Coord;
            fn $m(self, rhs: &'a Coord) -> Coord {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Coord::from_int(v);
                    }
                }
                Coord::from_big(self.to_big().$m(rhs.to_big()))
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn div(self, rhs: &'a Coord) -> Coord {
        assert!(rhs.signum() != Ordering::Equal, "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if a % b == 0 {
                return Coord::from_int(a / b);
            }
        }
        Coord::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Coord> for Coord {
    type Output = Coord;
    fn div(self, rhs: Coord) -> Coord {
        &self / &rhs
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match &self.0 {
            Repr::Small(v) => Coord::from_int(-v),
            Repr::Big(r) => Coord::from_big(-r.clone()),
        }
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        -&self
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed coordinate `{0}`")]
pub struct ParseCoordError(pub String);

impl FromStr for Coord {
    type Err = ParseCoordError;

    /// Accepts `7`, `-3/4` and decimals such as `2.125`.
    fn from_str(s: &str) -> Result<Coord, ParseCoordError> {
        let err = || ParseCoordError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Coord::from_big(BigRational::new(n, d)));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let neg = ip.starts_with('-');
            let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
            let n: BigInt = digits.parse().map_err(|_| err())?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let r = BigRational::new(if neg { -n } else { n }, d);
            return Ok(Coord::from_big(r));
        }
        let n: BigInt = t.parse().map_err(|_| err())?;
        Ok(Coord::from_big(BigRational::from_integer(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_agree() {
        assert_eq!(Coord::from_ratio(6, 3), Coord::from_int(2));
        assert_eq!(Coord::from_ratio(-2, -4), Coord::from_ratio(1, 2));
        let big = Coord::from_int(1 << 40);
        assert_eq!(&big - &big, Coord::zero());
        assert!(Coord::from_int(SMALL_MAX + 1).small().is_none());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("2.125".parse::<Coord>().unwrap(), Coord::from_ratio(17, 8));
        assert_eq!("-0.5".parse::<Coord>().unwrap(), Coord::from_ratio(-1, 2));
        assert_eq!("-3/4".parse::<Coord>().unwrap().to_string(), "-3/4");
        assert_eq!("12".parse::<Coord>().unwrap().to_string(), "12");
        assert!("1/0".parse::<Coord>().is_err());
        assert!("x".parse::<Coord>().is_err());
    }

    #[test]
    fn arithmetic_overflow_promotes() {
        let a = Coord::from_int(SMALL_MAX);
        let p = &a * &a;
        assert_eq!(p.to_big(), BigRational::from_integer(BigInt::from(SMALL_MAX) * SMALL_MAX));
        assert_eq!(&p / &a, a);
        assert_eq!(&Coord::from_int(1) / &Coord::from_int(3), Coord::from_ratio(1, 3));
    }
}
