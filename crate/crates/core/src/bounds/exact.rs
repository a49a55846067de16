//! Exact big-integer routes: decimal exponents, integer powers with rational
//! exponents, and floors of g^e.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::interval::Interval;
use crate::error::{Error, Result};

/// Exact powers are attempted only while results stay below this many bits.
pub const EXACT_BIT_LIMIT: u64 = 1 << 22;

/// A non-negative exponent given as a decimal (`0.25`, `1`, `2.5e-1`) or a
/// fraction (`1/3`), kept as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    value: BigRational,
    text: String,
}

impl Alpha {
    pub fn from_rational(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {value}")));
        }
        let text = if value.is_integer() {
            value.numer().to_string()
        } else {
            format!("{}/{}", value.numer(), value.denom())
        };
        Ok(Alpha { value, text })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn interval(&self, prec: usize) -> Interval {
        Interval::from_rational(&self.value, prec)
    }

    /// 1 + alpha.
    pub fn one_plus(&self) -> BigRational {
        BigRational::one() + &self.value
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let neg = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['+', '-']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_digits.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad alpha {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad alpha {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("bad alpha {s:?}")));
            }
            BigRational::new(n, d)
        } else {
            parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad alpha {s:?}")))?
        };
        Alpha::from_rational(value)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// Parses a non-negative integer written plainly (`1000000`) or as a power
/// of ten (`1e6`, `10^6`).
pub fn parse_big_uint(s: &str) -> Result<BigUint> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad integer {s:?}"));
    let pow10 = |m: &str, e: &str| -> Result<BigUint> {
        let m: BigUint = m.parse().map_err(|_| err())?;
        let e: usize = e.parse().map_err(|_| err())?;
        Ok(m * num_traits::pow(BigUint::from(10u32), e))
    };
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        return pow10(m, e);
    }
    if let Some(e) = s.strip_prefix("10^") {
        return pow10("1", e);
    }
    s.parse().map_err(|_| err())
}

/// Serializes big integers as decimal strings.
pub fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(v))
}

pub fn rational_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn split_exponent(e: &BigRational) -> Option<(u64, u32)> {
    if e.is_negative() {
        return None;
    }
    Some((e.numer().to_u64()?, e.denom().to_u32()?))
}

fn bits_fit(base: &BigUint, times: u64) -> bool {
    base.bits().checked_mul(times).is_some_and(|b| b <= EXACT_BIT_LIMIT)
}

/// Exact comparison of `x` against `g^e` when the powers involved stay
/// below [`EXACT_BIT_LIMIT`] bits.
pub fn cmp_with_power(x: &BigUint, g: &BigUint, e: &BigRational) -> Option<Ordering> {
    let (a, b) = split_exponent(e)?;
    if !bits_fit(x, b as u64) || !bits_fit(g, a) {
        return None;
    }
    let lhs = num_traits::pow(x.clone(), b as usize);
    let rhs = num_traits::pow(g.clone(), a as usize);
    Some(lhs.cmp(&rhs))
}

/// Exact ⌊g^e⌋ when feasible.
pub fn floor_power_exact(g: &BigUint, e: &BigRational) -> Option<BigUint> {
    let (a, b) = split_exponent(e)?;
    if !bits_fit(g, a) {
        return None;
    }
    Some(num_traits::pow(g.clone(), a as usize).nth_root(b))
}

/// How a floor of a real power was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloorMethod {
    ExactRoot,
    Interval,
}

/// ⌊g^e⌋ together with how it was decided. `boundary` is set when the
/// enclosure of g^e straddles an integer and no exact route was available;
/// the value is then the floor of the lower end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerFloor {
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    pub method: FloorMethod,
    pub boundary: bool,
    pub precision_bits: usize,
}

pub fn floor_power(g: &BigUint, e: &BigRational, base_prec: usize) -> Result<PowerFloor> {
    if let Some(v) = floor_power_exact(g, e) {
        return Ok(PowerFloor {
            value: v,
            method: FloorMethod::ExactRoot,
            boundary: false,
            precision_bits: 0,
        });
    }
    let ef = e.to_f64().unwrap_or(f64::INFINITY);
    let magnitude_bits = (g.bits() as f64 * ef).ceil();
    if !magnitude_bits.is_finite() || magnitude_bits > (1u64 << 30) as f64 {
        return Err(Error::TooLarge(format!("g^{e} has more than 2^30 bits")));
    }
    let prec = base_prec + magnitude_bits as usize + 64;
    let t = Interval::from_rational(e, prec)
        .mul(&Interval::from_biguint(g, prec).ln()?)
        .exp()?;
    match t.floor() {
        Some(v) => Ok(PowerFloor {
            value: v.to_biguint().unwrap_or_default(),
            method: FloorMethod::Interval,
            boundary: false,
            precision_bits: prec,
        }),
        None => {
            let v = t
                .lo_floor()
                .and_then(|v| v.to_biguint())
                .ok_or_else(|| Error::Undecided("floor of g^e".into()))?;
            Ok(PowerFloor {
                value: v,
                method: FloorMethod::Interval,
                boundary: true,
                precision_bits: prec,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("0.25".parse::<Alpha>().unwrap().value(), &q(1, 4));
        assert_eq!("1".parse::<Alpha>().unwrap().value(), &q(1, 1));
        assert_eq!("2.5e-1".parse::<Alpha>().unwrap().value(), &q(1, 4));
        assert_eq!("1/3".parse::<Alpha>().unwrap().value(), &q(1, 3));
        assert_eq!(".5".parse::<Alpha>().unwrap().value(), &q(1, 2));
        assert!("-1".parse::<Alpha>().is_err());
        assert!("abc".parse::<Alpha>().is_err());
        assert!("1/0".parse::<Alpha>().is_err());
        assert_eq!("0.25".parse::<Alpha>().unwrap().to_string(), "1/4");
    }

    #[test]
    fn big_uint_parsing() {
        assert_eq!(parse_big_uint("1e6").unwrap(), BigUint::from(1_000_000u32));
        assert_eq!(parse_big_uint("10^3").unwrap(), BigUint::from(1000u32));
        assert_eq!(parse_big_uint("42").unwrap(), BigUint::from(42u32));
        assert!(parse_big_uint("4.2").is_err());
    }

    #[test]
    fn exact_floors() {
        let g = BigUint::from(100u32);
        assert_eq!(floor_power_exact(&g, &q(2, 1)), Some(BigUint::from(10_000u32)));
        // 100^(5/4) = 316.22...
        assert_eq!(floor_power_exact(&g, &q(5, 4)), Some(BigUint::from(316u32)));
        assert_eq!(cmp_with_power(&BigUint::from(316u32), &g, &q(5, 4)), Some(Ordering::Less));
        assert_eq!(cmp_with_power(&BigUint::from(10_000u32), &g, &q(2, 1)), Some(Ordering::Equal));
    }

    #[test]
    fn interval_floor_agrees_with_exact() {
        let g = BigUint::from(10u32).pow(7);
        let e = q(7, 4);
        let exact = floor_power_exact(&g, &e).unwrap();
        let e_big = BigRational::new(
            BigInt::from(7) * BigInt::from(10).pow(40) + 1,
            BigInt::from(4) * BigInt::from(10).pow(40),
        );
        // huge denominators force the interval route
        let f = floor_power(&g, &e_big, 128).unwrap();
        assert_eq!(f.method, FloorMethod::Interval);
        assert!(!f.boundary);
        assert!(f.value == exact || f.value == exact.clone() + 1u32);
    }
}
