//! Exact arithmetic in the quadratic field Q(√2).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{GqsError, Result};

/// An element `rat + surd·√2` of Q(√2).
///
/// Both parts are kept as reduced big rationals, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    rat: BigRational,
    surd: BigRational,
}

impl ExactScalar {
    pub fn new(rat: BigRational, surd: BigRational) -> Self {
        ExactScalar { rat, surd }
    }

    pub fn from_ints(rat: i64, surd: i64) -> Self {
        ExactScalar::new(BigRational::from_integer(rat.into()), BigRational::from_integer(surd.into()))
    }

    /// `num/den + 0·√2`.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExactScalar::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn integer(v: i64) -> Self {
        ExactScalar::from_ints(v, 0)
    }

    pub fn sqrt2() -> Self {
        ExactScalar::from_ints(0, 1)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// The field norm `p² − 2q²`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(2)) * &self.surd * &self.surd
    }

    /// Galois conjugate `p − q√2`.
    pub fn conjugate(&self) -> Self {
        ExactScalar::new(self.rat.clone(), -self.surd.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GqsError::DivisionByZero);
        }
        let n = self.norm();
        Ok(ExactScalar::new(&self.rat / &n, -(&self.surd / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Signs as the `-1`/`+1` of a sign parameter.
    pub fn sign(positive: bool) -> Self {
        ExactScalar::integer(if positive { 1 } else { -1 })
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::integer(1)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::integer(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        ExactScalar::new(v, BigRational::zero())
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat + &o.rat, &self.surd + &o.surd)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat - &o.rat, &self.surd - &o.surd)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let two = BigRational::from_integer(BigInt::from(2));
        ExactScalar::new(
            &self.rat * &o.rat + two * &self.surd * &o.surd,
            &self.rat * &o.surd + &self.surd * &o.rat,
        )
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

/// Panics on a zero divisor; use [`ExactScalar::checked_div`] for the fallible form.
impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: ExactScalar) -> ExactScalar {
        self.checked_div(&o).expect("division by zero in Q(√2)")
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.rat, -self.surd)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.rat.clone(), -self.surd.clone())
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.rat += &o.rat;
        self.surd += &o.surd;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        self.rat -= &o.rat;
        self.surd -= &o.surd;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, o: &ExactScalar) {
        *self = &*self * o;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || GqsError::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(GqsError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Textual form: `p`, `q√2` or `p+q√2` (a negative surd prints as `p-q√2`).
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", fmt_rational(&self.rat));
        }
        let surd = if self.surd.is_one() {
            "√2".to_string()
        } else if (-self.surd.clone()).is_one() {
            "-√2".to_string()
        } else {
            format!("{}√2", fmt_rational(&self.surd))
        };
        if self.rat.is_zero() {
            write!(f, "{surd}")
        } else if self.surd.is_negative() {
            write!(f, "{}{}", fmt_rational(&self.rat), surd)
        } else {
            write!(f, "{}+{}", fmt_rational(&self.rat), surd)
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rational(&self.rat), fmt_rational(&self.surd))
    }
}

impl FromStr for ExactScalar {
    type Err = GqsError;

    /// Accepts the textual form produced by `Display`, also `sqrt2` in place of `√2`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.replace("sqrt2", "√2").chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(GqsError::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix("√2") else {
            return Ok(ExactScalar::from(parse_rational(&s)?));
        };
        // split "p±q" at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (rat, coeff) = match split {
            Some(i) => (parse_rational(&body[..i])?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let coeff = coeff.strip_prefix('+').unwrap_or(coeff);
        let surd = match coeff {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c)?,
        };
        Ok(ExactScalar::new(rat, surd))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("rat", &fmt_rational(&self.rat))?;
        map.serialize_entry("surd", &fmt_rational(&self.surd))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rat: String,
            surd: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let rat = parse_rational(&raw.rat).map_err(de::Error::custom)?;
        let surd = parse_rational(&raw.surd).map_err(de::Error::custom)?;
        Ok(ExactScalar::new(rat, surd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, s: i64) -> ExactScalar {
        ExactScalar::from_ints(p, s)
    }

    #[test]
    fn add_examples() {
        assert_eq!(q(1, 0) + q(0, 1), q(1, 1));
        let a = ExactScalar::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-1).into()));
        let b = ExactScalar::new(BigRational::new((-1).into(), 2.into()), BigRational::from_integer(1.into()));
        assert!((a + b).is_zero());
        let a = ExactScalar::new(BigRational::new(2.into(), 3.into()), BigRational::new(1.into(), 5.into()));
        let b = ExactScalar::new(BigRational::new(1.into(), 3.into()), BigRational::new(4.into(), 5.into()));
        assert_eq!(a + b, q(1, 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q(0, 1) * q(0, 1), q(2, 0));
        assert_eq!(q(1, 1) * q(-1, 1), q(1, 0));
        assert_eq!(q(1, 0) * q(7, -3), q(7, -3));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(q(1, 1).inv().unwrap(), q(-1, 1));
        assert_eq!(q(2, 0).inv().unwrap(), ExactScalar::ratio(1, 2));
        let half = ExactScalar::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
        assert_eq!(q(0, 1).inv().unwrap(), half);
        assert!(matches!(ExactScalar::zero().inv(), Err(GqsError::DivisionByZero)));
    }

    #[test]
    fn text_rendering() {
        assert_eq!(q(3, 0).to_string(), "3");
        assert_eq!(q(0, 2).to_string(), "2√2");
        assert_eq!(q(1, 1).to_string(), "1+√2");
        assert_eq!(q(1, -1).to_string(), "1-√2");
        assert_eq!(q(0, -1).to_string(), "-√2");
        assert_eq!(ExactScalar::ratio(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "3", "-1/2", "√2", "-√2", "2√2", "1+√2", "-1/3-5/7√2", "4-√2"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("1 + sqrt2".parse::<ExactScalar>().unwrap(), q(1, 1));
    }

    #[test]
    fn json_shape() {
        let v = ExactScalar::new(BigRational::new(3.into(), 4.into()), BigRational::from_integer((-2).into()));
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, r#"{"rat":"3/4","surd":"-2"}"#);
        let back: ExactScalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = ExactScalar::new(BigRational::new(2.into(), 4.into()), BigRational::new(3.into(), (-6).into()));
        assert_eq!(a.rat_part().denom(), &BigInt::from(2));
        assert_eq!(a.surd_part().numer(), &BigInt::from(-1));
        assert!(a.surd_part().denom().is_positive());
    }
}
