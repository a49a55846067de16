//! Closed intervals of arbitrary-precision binary floats.
//!
//! Every operation rounds the lower end down and the upper end up, so an
//! interval always encloses the exact real it stands for. A comparison is
//! only reported as decided when it holds for every point of the enclosures.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Working precision in bits when nothing else is requested.
pub const DEFAULT_PRECISION: usize = 256;

const WORD_BITS: usize = Word::BITS as usize;

thread_local! {
    static REPORT_DIGITS: std::cell::Cell<usize> = const { std::cell::Cell::new(40) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn checked(x: BigFloat) -> Result<BigFloat> {
    if x.is_nan() {
        return Err(Error::Undecided(format!("arithmetic failure: {:?}", x.err())));
    }
    Ok(x)
}

fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(x) if x < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

fn min_f(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b) == Ordering::Greater { b } else { a }
}

fn max_f(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b) == Ordering::Less { b } else { a }
}

/// Exact integer value of an integral float.
fn integral_to_bigint(x: &BigFloat) -> BigInt {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if x.is_zero() {
        return BigInt::zero();
    }
    // words are little-endian
    let mantissa = words
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &w| (acc << WORD_BITS) | BigUint::from(w));
    let shift = exp as i64 - (words.len() * WORD_BITS) as i64;
    let magnitude = if shift >= 0 {
        mantissa << shift as usize
    } else {
        mantissa >> (-shift) as usize
    };
    let v = BigInt::from(magnitude);
    if sign == Sign::Neg { -v } else { v }
}

/// Rounds a decimal `d.ddd…e±x` string to `digits` significant digits,
/// towards +∞ when `up` and towards −∞ otherwise.
fn round_decimal(text: &str, digits: usize, up: bool) -> Option<String> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text),
    };
    let (mantissa, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: Vec<u8> = int.bytes().chain(frac.bytes()).map(|b| b - b'0').collect();
    let lead = all.iter().position(|&d| d != 0)?;
    // value = 0.d1d2… × 10^point
    let point = exp + int.len() as i64 - lead as i64;
    let sig = &all[lead..];
    let digits = digits.max(1);
    let mut keep: Vec<u8> = sig.iter().take(digits).copied().collect();
    let dropped = sig.iter().skip(digits).any(|&d| d != 0);
    let mut point = point;
    if dropped && (up != neg) {
        let mut i = keep.len();
        loop {
            if i == 0 {
                keep.insert(0, 1);
                keep.pop();
                point += 1;
                break;
            }
            i -= 1;
            if keep[i] == 9 {
                keep[i] = 0;
            } else {
                keep[i] += 1;
                break;
            }
        }
    }
    while keep.len() > 1 && keep.last() == Some(&0) {
        keep.pop();
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + keep[0]) as char);
    if keep.len() > 1 {
        out.push('.');
        out.extend(keep[1..].iter().map(|&d| (b'0' + d) as char));
    }
    let e = point - 1;
    out.push_str(&format!("e{}{}", if e < 0 { '-' } else { '+' }, e.abs()));
    Some(out)
}

#[derive(Debug, Clone)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

impl Interval {
    fn new(lo: BigFloat, hi: BigFloat, prec: usize) -> Result<Self> {
        let lo = checked(lo)?;
        let hi = checked(hi)?;
        debug_assert!(cmp(&lo, &hi) != Ordering::Greater);
        Ok(Interval { lo, hi, prec })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn zero(prec: usize) -> Self {
        Interval {
            lo: BigFloat::from_u8(0, prec),
            hi: BigFloat::from_u8(0, prec),
            prec,
        }
    }

    pub fn from_u64(v: u64, prec: usize) -> Self {
        Self::from_biguint(&BigUint::from(v), prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        let m = Self::from_u64(v.unsigned_abs(), prec);
        if v < 0 { m.neg() } else { m }
    }

    pub fn from_biguint(v: &BigUint, prec: usize) -> Self {
        if v.is_zero() {
            return Self::zero(prec);
        }
        let digits = v.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let exp = (words.len() * WORD_BITS) as i32;
        let exact = BigFloat::from_words(&words, Sign::Pos, exp);
        let mut lo = exact.clone();
        let mut hi = exact;
        lo.set_precision(prec, RoundingMode::Down).expect("precision");
        hi.set_precision(prec, RoundingMode::Up).expect("precision");
        Interval { lo, hi, prec }
    }

    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        let m = Self::from_biguint(v.magnitude(), prec);
        if v.is_negative() { m.neg() } else { m }
    }

    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        let num = Self::from_bigint(r.numer(), prec);
        let den = Self::from_bigint(r.denom(), prec);
        num.div(&den).expect("rational denominator is non-zero")
    }

    pub fn pi(prec: usize) -> Self {
        with_consts(|cc| Interval {
            lo: cc.pi(prec, RoundingMode::Down),
            hi: cc.pi(prec, RoundingMode::Up),
            prec,
        })
    }

    pub fn ln2(prec: usize) -> Self {
        with_consts(|cc| Interval {
            lo: cc.ln_2(prec, RoundingMode::Down),
            hi: cc.ln_2(prec, RoundingMode::Up),
            prec,
        })
    }

    fn p2(&self, other: &Self) -> usize {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Interval {
            lo: self.lo.add(&other.lo, p, RoundingMode::Down),
            hi: self.hi.add(&other.hi, p, RoundingMode::Up),
            prec: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Interval {
            lo: self.lo.sub(&other.hi, p, RoundingMode::Down),
            hi: self.hi.sub(&other.lo, p, RoundingMode::Up),
            prec: p,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p2(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.mul(b, p, RoundingMode::Down))
            .reduce(min_f)
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.mul(b, p, RoundingMode::Up))
            .reduce(max_f)
            .unwrap();
        Interval { lo, hi, prec: p }
    }

    pub fn mul_u64(&self, v: u64) -> Self {
        self.mul(&Self::from_u64(v, self.prec))
    }

    pub fn square(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = max_f(self.lo.abs(), self.hi.abs());
            return Interval {
                lo: BigFloat::from_u8(0, self.prec),
                hi: m.mul(&m, self.prec, RoundingMode::Up),
                prec: self.prec,
            };
        }
        self.mul(self)
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.is_positive() && !self.is_negative() {
            return Err(Error::Undecided("division by an interval containing zero".into()));
        }
        Self::new(
            self.hi.reciprocal(self.prec, RoundingMode::Down),
            self.lo.reciprocal(self.prec, RoundingMode::Up),
            self.prec,
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Undecided("logarithm of a non-positive interval".into()));
        }
        with_consts(|cc| {
            Self::new(
                self.lo.ln(self.prec, RoundingMode::Down, cc),
                self.hi.ln(self.prec, RoundingMode::Up, cc),
                self.prec,
            )
        })
    }

    pub fn exp(&self) -> Result<Self> {
        with_consts(|cc| {
            Self::new(
                self.lo.exp(self.prec, RoundingMode::Down, cc),
                self.hi.exp(self.prec, RoundingMode::Up, cc),
                self.prec,
            )
        })
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Undecided("square root of a negative interval".into()));
        }
        Self::new(
            self.lo.sqrt(self.prec, RoundingMode::Down),
            self.hi.sqrt(self.prec, RoundingMode::Up),
            self.prec,
        )
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative() && !self.hi.is_zero()
    }

    pub fn is_point(&self) -> bool {
        cmp(&self.lo, &self.hi) == Ordering::Equal
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        cmp(&self.hi, &other.lo) == Ordering::Less
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        cmp(&self.hi, &other.lo) != Ordering::Greater
    }

    /// `Some(true)` / `Some(false)` when `self ≤ other` is decided for all
    /// enclosed values, `None` when the enclosures overlap.
    pub fn decide_le(&self, other: &Self) -> Option<bool> {
        if self.certainly_le(other) {
            Some(true)
        } else if other.certainly_lt(self) {
            Some(false)
        } else {
            None
        }
    }

    pub fn decide_lt(&self, other: &Self) -> Option<bool> {
        if self.certainly_lt(other) {
            Some(true)
        } else if other.certainly_le(self) {
            Some(false)
        } else {
            None
        }
    }

    /// Sign of every enclosed value, if common.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// ⌊x⌋ when it is the same for every enclosed x.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        let b = self.hi.floor();
        if a.is_nan() || b.is_nan() || cmp(&a, &b) != Ordering::Equal {
            return None;
        }
        Some(integral_to_bigint(&a))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: min_f(self.lo.clone(), other.lo.clone()),
            hi: max_f(self.hi.clone(), other.hi.clone()),
            prec: self.p2(other),
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        cmp(&self.lo, &other.hi) != Ordering::Greater && cmp(&other.lo, &self.hi) != Ordering::Greater
    }

    pub fn width_f64(&self) -> f64 {
        let w = self.width();
        Interval { lo: w.clone(), hi: w, prec: self.prec }.approx_f64()
    }

    /// ⌊lo⌋.
    pub fn lo_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        if a.is_nan() {
            return None;
        }
        Some(integral_to_bigint(&a))
    }

    pub fn width(&self) -> BigFloat {
        self.hi.sub(&self.lo, self.prec, RoundingMode::Up)
    }

    fn format_end(x: &BigFloat, digits: usize, rm: RoundingMode) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 2;
        let mut y = x.clone();
        if y.set_precision(bits.max(WORD_BITS), rm).is_err() {
            return "nan".to_string();
        }
        let text = with_consts(|cc| y.format(Radix::Dec, rm, cc)).unwrap_or_else(|_| "nan".to_string());
        round_decimal(&text, digits, rm == RoundingMode::Up).unwrap_or(text)
    }

    /// Decimal lower end, rounded down to roughly `digits` significant digits.
    pub fn lo_string(&self, digits: usize) -> String {
        Self::format_end(&self.lo, digits, RoundingMode::Down)
    }

    pub fn hi_string(&self, digits: usize) -> String {
        Self::format_end(&self.hi, digits, RoundingMode::Up)
    }

    /// Midpoint as an f64 (±inf outside the f64 range), for plotting and
    /// reporting only.
    pub fn approx_f64(&self) -> f64 {
        let mid = self
            .lo
            .add(&self.hi, self.prec, RoundingMode::ToEven)
            .div(&BigFloat::from_u8(2, WORD_BITS), self.prec, RoundingMode::ToEven);
        let s = with_consts(|cc| mid.format(Radix::Dec, RoundingMode::ToEven, cc));
        s.ok().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN)
    }

    pub fn to_view(&self, digits: usize) -> IntervalView {
        IntervalView {
            lo: self.lo_string(digits),
            hi: self.hi_string(digits),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_string(20), self.hi_string(20))
    }
}

/// Decimal rendering of an interval for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct IntervalView {
    pub lo: String,
    pub hi: String,
}

/// Runs `f` with intervals serializing to `digits` significant digits
/// (40 outside such a scope).
pub fn with_digits<T>(digits: usize, f: impl FnOnce() -> T) -> T {
    let prev = REPORT_DIGITS.with(|d| d.replace(digits.max(1)));
    let out = f();
    REPORT_DIGITS.with(|d| d.set(prev));
    out
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = REPORT_DIGITS.with(|d| d.get());
        self.to_view(digits).serialize(s)
    }
}
