//! Central binomial coefficients: exact values, certified logarithms via a
//! Stirling series with an explicit remainder bound, and the exact check of
//! C(2k,k)·√k ≥ 7/(8√π)·4^k.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::interval::Interval;

/// Below this, ln n! is taken from the exact factorial.
const STIRLING_FROM: u64 = 64;

/// B_2, B_4, …, B_22.
const BERNOULLI: [(i64, i64); 11] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
];

pub fn central_binomial(k: u64) -> BigUint {
    let mut c = BigUint::one();
    for j in 0..k {
        // C(2(j+1), j+1) = C(2j, j)·2(2j+1)/(j+1)
        c = c * (2 * (2 * j + 1)) / (j + 1);
    }
    c
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// ln n!, enclosed. Large n use
/// ln n! = (n+½)ln n − n + ½ln 2π + Σ_{j≤10} B_{2j}/(2j(2j−1)n^{2j−1}) + R
/// with |R| no larger than the first omitted term.
pub fn ln_factorial(n: u64, prec: usize) -> Interval {
    if n < STIRLING_FROM {
        return Interval::from_biguint(&factorial(n), prec)
            .ln()
            .expect("n! >= 1");
    }
    let x = Interval::from_u64(n, prec);
    let ln_x = x.ln().expect("n > 0");
    let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()), prec);
    let two_pi = Interval::pi(prec).mul_u64(2);
    let mut s = x
        .add(&half)
        .mul(&ln_x)
        .sub(&x)
        .add(&half.mul(&two_pi.ln().expect("2π > 0")));
    let inv = x.recip().expect("n > 0");
    let inv_sq = inv.square();
    let mut power = inv.clone(); // n^{-(2j-1)}
    let terms = BERNOULLI.len() - 1;
    for (j, &(num, den)) in BERNOULLI.iter().enumerate().take(terms) {
        let m = 2 * (j as i64 + 1);
        let coef = BigRational::new(num.into(), (den * m * (m - 1)).into());
        s = s.add(&Interval::from_rational(&coef, prec).mul(&power));
        power = power.mul(&inv_sq);
    }
    let (num, den) = BERNOULLI[terms];
    let m = 2 * (terms as i64 + 1);
    let bound = Interval::from_rational(&BigRational::new(num.abs().into(), (den * m * (m - 1)).into()), prec)
        .mul(&power);
    s.sub(&bound).hull(&s.add(&bound))
}

/// ln C(2k,k) through log-gamma.
pub fn ln_central_binomial(k: u64, prec: usize) -> Interval {
    ln_factorial(2 * k, prec).sub(&ln_factorial(k, prec).mul_u64(2))
}

/// ln C(2k,k) from the exact coefficient.
pub fn ln_central_binomial_exact(k: u64, prec: usize) -> Interval {
    Interval::from_biguint(&central_binomial(k), prec)
        .ln()
        .expect("C(2k,k) >= 1")
}

/// Rational lower enclosure of π used by the exact constant check.
pub const PI_LO: (u64, u64) = (314_159_265, 100_000_000);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialConstantCheck {
    pub k_max: u64,
    pub all_pass: bool,
    pub failures: Vec<u64>,
    /// k where lhs/rhs of the integer inequality is smallest.
    pub tightest_k: u64,
    pub tightest_ratio: f64,
}

/// Checks 64·π_lo·k·C(2k,k)² ≥ 49·16^k for 1 ≤ k ≤ k_max with exact
/// integers; π_lo < π makes every pass sound for the real inequality.
pub fn binomial_constant_check(k_max: u64) -> BinomialConstantCheck {
    let (pi_num, pi_den) = PI_LO;
    let mut c = BigUint::one();
    let mut sixteen_k = BigUint::one();
    let mut failures = Vec::new();
    let mut tightest = (0, f64::INFINITY);
    for k in 1..=k_max {
        c = c * (2 * (2 * k - 1)) / k;
        sixteen_k *= 16u32;
        let lhs = BigUint::from(64 * pi_num) * k * &c * &c;
        let rhs = BigUint::from(49 * pi_den) * &sixteen_k;
        if lhs < rhs {
            failures.push(k);
        }
        let ratio = BigRational::new(lhs.into(), rhs.into()).to_f64().unwrap_or(f64::NAN);
        if ratio < tightest.1 {
            tightest = (k, ratio);
        }
    }
    BinomialConstantCheck {
        k_max,
        all_pass: failures.is_empty(),
        failures,
        tightest_k: tightest.0,
        tightest_ratio: tightest.1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let v: Vec<u64> = (0..6).map(|k| central_binomial(k).to_u64().unwrap()).collect();
        assert_eq!(v, vec![1, 2, 6, 20, 70, 252]);
    }

    #[test]
    fn constant_check_examples() {
        let r = binomial_constant_check(1);
        assert!(r.all_pass);
        // 64·3.14159265·4 = 804.24… against 784
        assert!((r.tightest_ratio - 804.2477184 / 784.0).abs() < 1e-9);
        assert!(binomial_constant_check(3).all_pass);
        assert!(binomial_constant_check(64).all_pass);
    }

    #[test]
    fn stirling_matches_exact_route() {
        for k in [32u64, 33, 50, 100, 257] {
            let a = ln_central_binomial(k, 256);
            let b = ln_central_binomial_exact(k, 256);
            assert!(a.overlaps(&b), "k={k}");
            assert!(a.width_f64() < 1e-30);
        }
    }

    #[test]
    fn small_k_uses_exact_factorials() {
        let a = ln_central_binomial(3, 256);
        assert!((a.approx_f64() - 20f64.ln()).abs() < 1e-14);
    }
}
