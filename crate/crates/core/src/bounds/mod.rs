//! Certified evaluation of the crossing-number inequalities.
//!
//! Everything that fits is decided with exact integers and rationals. The
//! rest is evaluated with [`Interval`] enclosures, and a check is reported
//! as passing only when it holds on the whole enclosure. Logarithms are
//! natural throughout.

pub mod binomial;
pub mod exact;
pub mod interval;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub use binomial::{
    binomial_constant_check, central_binomial, ln_central_binomial, ln_central_binomial_exact,
    BinomialConstantCheck,
};
pub use exact::{parse_big_uint, Alpha, FloorMethod, PowerFloor};
pub use interval::{Interval, DEFAULT_PRECISION};

use crate::error::{Error, Result};
use exact::{cmp_with_power, floor_power, ser_big, ser_bigint, ser_opt_big, ser_rational};

/// Precision is doubled up to this many bits while a decision is pending.
pub const MAX_PRECISION: usize = 1 << 20;

/// Largest k for which C(2k,k) is formed exactly in reports.
pub const EXACT_K_LIMIT: u64 = 100_000;

fn ser_opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&exact::rational_string(v)),
        None => s.serialize_none(),
    }
}

fn check_genus(g: &BigUint) -> Result<()> {
    if *g < BigUint::from(2u32) {
        return Err(Error::InvalidParameter(format!("genus must be >= 2, got {g}")));
    }
    Ok(())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ln_of(g: &BigUint, prec: usize) -> Interval {
    Interval::from_biguint(g, prec).ln().expect("positive integer")
}

/// Evaluates `f` at increasing precision until it returns a decision.
fn decide_adaptive<T>(start: usize, mut f: impl FnMut(usize) -> Result<Option<T>>) -> Result<(Option<T>, usize)> {
    let mut prec = start;
    loop {
        if let Some(v) = f(prec)? {
            return Ok((Some(v), prec));
        }
        if prec >= MAX_PRECISION {
            return Ok((None, prec));
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

// ---------------------------------------------------------------- theorem

#[derive(Debug, Clone, Serialize)]
pub struct TheoremBounds {
    /// α²·g^{1+2α}·(ln g)², shared by both sides.
    pub factor: Interval,
    pub lower: Interval,
    pub upper: Interval,
    #[serde(serialize_with = "ser_rational")]
    pub lower_coefficient: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper_coefficient: BigRational,
    /// upper/lower, exact; absent when both sides vanish (α = 0).
    #[serde(serialize_with = "ser_opt_rational")]
    pub ratio: Option<BigRational>,
}

pub fn theorem_lower_coefficient() -> BigRational {
    rat(1, 257)
}

pub fn theorem_upper_coefficient() -> BigRational {
    rat(9, 4)
}

/// Both sides of α²g^{1+2α}(ln g)²/257 ≤ Cr(g,⌊g^{1+α}⌋) ≤ (9/4)α²g^{1+2α}(ln g)².
pub fn theorem_bounds(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<TheoremBounds> {
    check_genus(g)?;
    let lo_c = theorem_lower_coefficient();
    let up_c = theorem_upper_coefficient();
    let factor = if alpha.is_zero() {
        Interval::zero(prec)
    } else {
        let ln_g = ln_of(g, prec);
        let a = alpha.interval(prec);
        let expo = Interval::from_rational(&(BigRational::one() + alpha.value() * BigInt::from(2)), prec);
        a.ln()?
            .mul_u64(2)
            .add(&expo.mul(&ln_g))
            .add(&ln_g.ln()?.mul_u64(2))
            .exp()?
    };
    let ratio = (!alpha.is_zero()).then(|| &up_c / &lo_c);
    Ok(TheoremBounds {
        lower: factor.mul(&Interval::from_rational(&lo_c, prec)),
        upper: factor.mul(&Interval::from_rational(&up_c, prec)),
        factor,
        lower_coefficient: lo_c,
        upper_coefficient: up_c,
        ratio,
    })
}

pub fn theorem_lower(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Interval> {
    Ok(theorem_bounds(g, alpha, prec)?.lower)
}

pub fn theorem_upper(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Interval> {
    Ok(theorem_bounds(g, alpha, prec)?.upper)
}

// ------------------------------------------------------- crossing lemma

#[derive(Debug, Clone, Serialize)]
pub struct HpLower {
    /// True unless m > (2g−1)e⁶ is certain.
    pub vacuous: bool,
    /// (2g−1)e⁶.
    pub threshold: Interval,
    pub value: Option<Interval>,
}

/// (1/(256(g−1)))·(m·ln(m/((2g−1)e⁶)))², reported vacuous when the
/// logarithm is not certainly positive.
pub fn hp_lower(g: &BigUint, m: &BigUint, prec: usize) -> Result<HpLower> {
    check_genus(g)?;
    let e6 = Interval::from_u64(6, prec).exp()?;
    let threshold = Interval::from_biguint(&(g * 2u32 - 1u32), prec).mul(&e6);
    let mi = Interval::from_biguint(m, prec);
    if !threshold.certainly_lt(&mi) {
        return Ok(HpLower {
            vacuous: true,
            threshold,
            value: None,
        });
    }
    let log = mi.div(&threshold)?.ln()?;
    let denom = Interval::from_biguint(&((g - 1u32) * 256u32), prec);
    let value = mi.mul(&log).square().div(&denom)?;
    Ok(HpLower {
        vacuous: false,
        threshold,
        value: Some(value),
    })
}

// ---------------------------------------------------------------- planner

/// value ∈ [lower, upper], each side decided on enclosures.
#[derive(Debug, Clone, Serialize)]
pub struct Window {
    pub lower_ok: Option<bool>,
    pub upper_ok: Option<bool>,
    /// value − lower.
    pub lower_margin: Interval,
    /// upper − value.
    pub upper_margin: Interval,
}

impl Window {
    fn new(value: &Interval, lower: &Interval, upper: &Interval) -> Self {
        Window {
            lower_ok: lower.decide_le(value),
            upper_ok: value.decide_le(upper),
            lower_margin: value.sub(lower),
            upper_margin: upper.sub(value),
        }
    }

    pub fn holds(&self) -> bool {
        self.lower_ok == Some(true) && self.upper_ok == Some(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiCheck {
    #[serde(serialize_with = "ser_bigint")]
    pub chi: BigInt,
    /// 2g − 2.
    #[serde(serialize_with = "ser_big")]
    pub limit: BigUint,
    /// |χ| ≤ 2g − 2.
    pub embeds: bool,
    /// 2g − 2 − |χ|.
    #[serde(serialize_with = "ser_bigint")]
    pub margin: BigInt,
    /// (p−1)(q−1).
    #[serde(serialize_with = "ser_big")]
    pub product_bound: BigUint,
    /// |χ| ≤ (p−1)(q−1).
    pub within_product_bound: bool,
}

pub fn chi_embedding_check(p: &BigUint, q: &BigUint, g: &BigUint) -> ChiCheck {
    let (pi, qi) = (BigInt::from(p.clone()), BigInt::from(q.clone()));
    let chi = &pi + &qi - &pi * &qi;
    let abs = chi.abs();
    let limit = if *g >= BigUint::one() { (g - 1u32) * 2u32 } else { BigUint::zero() };
    let limit_i = BigInt::from(limit.clone());
    let product_bound = if p.is_zero() || q.is_zero() {
        BigUint::zero()
    } else {
        (p - 1u32) * (q - 1u32)
    };
    ChiCheck {
        embeds: abs <= limit_i,
        margin: &limit_i - &abs,
        within_product_bound: abs <= BigInt::from(product_bound.clone()),
        chi,
        limit,
        product_bound,
    }
}

/// (4g/(3α ln g) + 1)(3α ln g/2 − 1) = 2g − 4g/(3α ln g) + 3α ln g/2 − 1,
/// the closed-form bound on (p−1)(q−1).
#[derive(Debug, Clone, Serialize)]
pub struct ChiEstimate {
    pub value: Interval,
    /// (p−1)(q−1) ≤ value.
    pub dominates_product: Option<bool>,
    /// value < 2g − 2.
    pub below_limit: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanDiagnostics {
    /// ¾·α·ln g.
    pub k_target: Interval,
    /// 4g/(3α ln g).
    pub p_target: Option<Interval>,
    /// ¾α ln g − 2 ≤ k ≤ ¾α ln g.
    pub k_window: Option<Window>,
    /// 4g/(3α ln g) + 1 ≤ p ≤ 4g/(3α ln g) + 2.
    pub p_window: Option<Window>,
    pub chi: Option<ChiCheck>,
    pub chi_estimate: Option<ChiEstimate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Plan {
    #[serde(serialize_with = "ser_big")]
    pub g: BigUint,
    pub alpha: Alpha,
    pub precision_bits: usize,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    pub k: Option<u64>,
    #[serde(serialize_with = "ser_opt_big")]
    pub p: Option<BigUint>,
    pub q: Option<u64>,
    /// ⌊g^{1+α}⌋.
    pub m_target: PowerFloor,
    pub diagnostics: PlanDiagnostics,
}

impl Plan {
    /// The valid plan's (k, p), if any.
    pub fn parameters(&self) -> Option<(u64, &BigUint)> {
        match (self.valid, self.k, &self.p) {
            (true, Some(k), Some(p)) => Some((k, p)),
            _ => None,
        }
    }

    /// Both estimate windows and the embedding check hold.
    pub fn windows_hold(&self) -> bool {
        let d = &self.diagnostics;
        d.k_window.as_ref().is_some_and(Window::holds)
            && d.p_window.as_ref().is_some_and(Window::holds)
            && d.chi.as_ref().is_some_and(|c| c.embeds)
    }
}

struct Choice {
    k: u64,
    p: BigUint,
    k_target: Interval,
    p_target: Interval,
}

enum Attempt {
    Invalid(Interval, String),
    Valid(Choice),
}

fn choose(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Option<Attempt>> {
    let ln_g = ln_of(g, prec);
    let k_target = Interval::from_rational(&(alpha.value() * rat(3, 4)), prec).mul(&ln_g);
    let one = Interval::from_u64(1, prec);
    match one.decide_le(&k_target) {
        None => return Ok(None),
        Some(false) => {
            return Ok(Some(Attempt::Invalid(
                k_target,
                "3/4·alpha·ln g < 1, so k would not be positive".into(),
            )))
        }
        Some(true) => {}
    }
    let half = Interval::from_rational(&rat(1, 2), prec);
    let Some(f) = k_target.sub(&one).mul(&half).floor() else {
        return Ok(None);
    };
    let p_target = Interval::from_biguint(g, prec).div(&k_target)?;
    let Some(pf) = p_target.floor() else {
        return Ok(None);
    };
    let k = f
        .to_u64()
        .and_then(|f| f.checked_mul(2))
        .map(|x| x + 1)
        .ok_or_else(|| Error::TooLarge("k exceeds u64".into()))?;
    let p = pf.to_biguint().expect("non-negative") + 2u32;
    Ok(Some(Attempt::Valid(Choice { k, p, k_target, p_target })))
}

/// k = 2⌊(¾α ln g − 1)/2⌋ + 1, p = ⌊4g/(3α ln g)⌋ + 2, q = 2k, with the
/// estimate windows and the embedding check.
pub fn plan_parameters(g: &BigUint, alpha: &Alpha, base_prec: usize) -> Result<Plan> {
    check_genus(g)?;
    let m_target = floor_power(g, &alpha.one_plus(), base_prec)?;
    let start = base_prec + g.bits() as usize + 64;
    let invalid = |reason: String, k_target: Interval, prec: usize, m_target: PowerFloor| Plan {
        g: g.clone(),
        alpha: alpha.clone(),
        precision_bits: prec,
        valid: false,
        invalid_reason: Some(reason),
        k: None,
        p: None,
        q: None,
        m_target,
        diagnostics: PlanDiagnostics {
            k_target,
            p_target: None,
            k_window: None,
            p_window: None,
            chi: None,
            chi_estimate: None,
        },
    };
    if alpha.is_zero() {
        return Ok(invalid(
            "alpha = 0 is the limit case; no curve system is planned".into(),
            Interval::zero(start),
            start,
            m_target,
        ));
    }
    let (attempt, prec) = decide_adaptive(start, |prec| choose(g, alpha, prec))?;
    let choice = match attempt {
        None => return Err(Error::Undecided(format!("planner floors for g={g}, alpha={alpha}"))),
        Some(Attempt::Invalid(k_target, reason)) => return Ok(invalid(reason, k_target, prec, m_target)),
        Some(Attempt::Valid(c)) => c,
    };
    let Choice { k, p, k_target, p_target } = choice;
    let q = 2 * k;
    let k_i = Interval::from_u64(k, prec);
    let two = Interval::from_u64(2, prec);
    let one = Interval::from_u64(1, prec);
    let k_window = Window::new(&k_i, &k_target.sub(&two), &k_target);
    let p_i = Interval::from_biguint(&p, prec);
    let p_window = Window::new(&p_i, &p_target.add(&one), &p_target.add(&two));
    let chi = chi_embedding_check(&p, &BigUint::from(q), g);
    // 2g − A + B − 1 with A = 4g/(3α ln g), B = 3α ln g/2 = 2·k_target
    let estimate = Interval::from_biguint(&(g * 2u32), prec)
        .sub(&p_target)
        .add(&k_target.mul_u64(2))
        .sub(&one);
    let product = Interval::from_biguint(&chi.product_bound, prec);
    let limit = Interval::from_biguint(&chi.limit, prec);
    let chi_estimate = ChiEstimate {
        dominates_product: product.decide_le(&estimate),
        below_limit: estimate.decide_lt(&limit),
        value: estimate,
    };
    Ok(Plan {
        g: g.clone(),
        alpha: alpha.clone(),
        precision_bits: prec,
        valid: true,
        invalid_reason: None,
        k: Some(k),
        p: Some(p),
        q: Some(q),
        m_target,
        diagnostics: PlanDiagnostics {
            k_target,
            p_target: Some(p_target),
            k_window: Some(k_window),
            p_window: Some(p_window),
            chi: Some(chi),
            chi_estimate: Some(chi_estimate),
        },
    })
}

// ----------------------------------------------------------------- growth

#[derive(Debug, Clone, Serialize)]
pub struct GrowthCheck {
    /// ln m(p,q) = ln(p−1) + ln C(2k,k).
    pub log_m_pq: Interval,
    /// (1+α)·ln g.
    pub log_target: Interval,
    /// log_m_pq − log_target.
    pub margin: Interval,
    /// m(p,q) > g^{1+α}, decided on enclosures.
    pub growth_ok: Option<bool>,
    /// Same comparison with exact integers, when feasible.
    pub growth_exact: Option<bool>,
    /// ln of (4c′/3)·g^{1+¾ln(4)α}/(α ln g)^{3/2}, c′ = 7/(64√(3π)).
    pub log_analytic_bound: Interval,
    /// log_analytic_bound ≤ log_m_pq.
    pub analytic_ok: Option<bool>,
}

/// m(p,q) = (p−1)·C(2k,k), exact, when k is small enough.
pub fn system_size_exact(p: &BigUint, k: u64) -> Option<BigUint> {
    (k <= EXACT_K_LIMIT && *p >= BigUint::one()).then(|| (p - 1u32) * central_binomial(k))
}

pub fn growth_check(g: &BigUint, alpha: &Alpha, plan: &Plan) -> Result<GrowthCheck> {
    let (k, p) = plan
        .parameters()
        .ok_or_else(|| Error::InvalidParameter("growth check needs a valid plan".into()))?;
    if *p < BigUint::from(2u32) {
        return Err(Error::InvalidParameter("p must be >= 2".into()));
    }
    let prec = plan.precision_bits;
    let ln_g = ln_of(g, prec);
    let log_m_pq = ln_of(&(p - 1u32), prec).add(&ln_central_binomial(k, prec));
    let log_target = Interval::from_rational(&alpha.one_plus(), prec).mul(&ln_g);
    let growth_exact = system_size_exact(p, k)
        .and_then(|m| cmp_with_power(&m, g, &alpha.one_plus()))
        .map(|o| o == Ordering::Greater);

    let a = alpha.interval(prec);
    let ln4 = Interval::ln2(prec).mul_u64(2);
    let three_quarters = Interval::from_rational(&rat(3, 4), prec);
    let three_pi = Interval::pi(prec).mul_u64(3);
    let log_const = Interval::from_u64(7, prec)
        .ln()?
        .sub(&Interval::from_u64(48, prec).ln()?)
        .sub(&three_pi.ln()?.mul(&Interval::from_rational(&rat(1, 2), prec)));
    let exponent = Interval::from_u64(1, prec).add(&three_quarters.mul(&ln4).mul(&a));
    let log_analytic_bound = log_const
        .add(&exponent.mul(&ln_g))
        .sub(&a.mul(&ln_g).ln()?.mul(&Interval::from_rational(&rat(3, 2), prec)));

    Ok(GrowthCheck {
        margin: log_m_pq.sub(&log_target),
        growth_ok: log_target.decide_lt(&log_m_pq),
        growth_exact,
        analytic_ok: log_analytic_bound.decide_le(&log_m_pq),
        log_analytic_bound,
        log_m_pq,
        log_target,
    })
}

// --------------------------------------------------- lower-bound chain

#[derive(Debug, Clone, Serialize)]
pub struct LowerChainCheck {
    /// ½·g^α − 1 > 0.
    pub hypothesis: bool,
    /// ln((g^{1+α}−1)/((2g−1)e⁶)) ≥ α ln g − ln(2e⁶).
    pub step_i: Option<bool>,
    /// lhs − rhs of step (i).
    pub step_i_margin: Option<Interval>,
    /// α ln g − ln(2e⁶).
    pub log_factor: Option<Interval>,
    /// (1/(256g))((g^{1+α}−1)(α ln g − ln 2e⁶))² ≥ α²g^{1+2α}(ln g)²/257,
    /// compared in log-space; false while the log factor is not positive.
    pub step_ii: Option<bool>,
    /// ln lhs − ln rhs of step (ii).
    pub step_ii_margin: Option<Interval>,
    pub precision_bits: usize,
}

fn lower_hypothesis(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<bool> {
    if let Some(o) = cmp_with_power(&BigUint::from(2u32), g, alpha.value()) {
        return Ok(o == Ordering::Less);
    }
    let (d, _) = decide_adaptive(prec, |p| {
        Ok(Interval::ln2(p).decide_lt(&alpha.interval(p).mul(&ln_of(g, p))))
    })?;
    d.ok_or_else(|| Error::Undecided("1/2 g^alpha > 1".into()))
}

/// ln(g^{1+α} − 1).
fn ln_power_minus_one(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Interval> {
    let t = Interval::from_rational(&alpha.one_plus(), prec)
        .mul(&ln_of(g, prec))
        .exp()?;
    t.sub(&Interval::from_u64(1, prec)).ln()
}

fn step_i_margin(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Interval> {
    let e6 = Interval::from_u64(6, prec).exp()?;
    let lhs = ln_power_minus_one(g, alpha, prec)?
        .sub(&Interval::from_biguint(&(g * 2u32 - 1u32), prec).mul(&e6).ln()?);
    let rhs = alpha
        .interval(prec)
        .mul(&ln_of(g, prec))
        .sub(&e6.mul_u64(2).ln()?);
    Ok(lhs.sub(&rhs))
}

fn log_factor(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Interval> {
    let two_e6 = Interval::from_u64(6, prec).exp()?.mul_u64(2);
    Ok(alpha.interval(prec).mul(&ln_of(g, prec)).sub(&two_e6.ln()?))
}

fn step_ii_margin(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<Option<Interval>> {
    let factor = log_factor(g, alpha, prec)?;
    if !factor.is_positive() {
        return Ok(None);
    }
    let ln_g = ln_of(g, prec);
    let lhs = ln_power_minus_one(g, alpha, prec)?
        .mul_u64(2)
        .add(&factor.ln()?.mul_u64(2))
        .sub(&Interval::from_u64(256, prec).ln()?)
        .sub(&ln_g);
    let two_alpha_plus_one = Interval::from_rational(&(BigRational::one() + alpha.value() * BigInt::from(2)), prec);
    let rhs = alpha
        .interval(prec)
        .ln()?
        .mul_u64(2)
        .add(&two_alpha_plus_one.mul(&ln_g))
        .add(&ln_g.ln()?.mul_u64(2))
        .sub(&Interval::from_u64(257, prec).ln()?);
    Ok(Some(lhs.sub(&rhs)))
}

/// Step (ii) certified: hypothesis holds, the log factor is positive and
/// the margin is non-negative, raising precision from `prec` until the sign
/// is decided. Still undecided at [`MAX_PRECISION`] counts as false.
fn step_ii_holds(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<bool> {
    if !lower_hypothesis(g, alpha, prec)? {
        return Ok(false);
    }
    let (d, _) = decide_adaptive(prec, |p| {
        Ok(match step_ii_margin(g, alpha, p)? {
            Some(m) => Interval::zero(p).decide_le(&m),
            None if log_factor(g, alpha, p)?.is_negative() => Some(false),
            None => None,
        })
    })?;
    Ok(d == Some(true))
}

pub fn lower_bound_chain_check(g: &BigUint, alpha: &Alpha, base_prec: usize) -> Result<LowerChainCheck> {
    check_genus(g)?;
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("lower-bound chain needs alpha > 0".into()));
    }
    let hypothesis = lower_hypothesis(g, alpha, base_prec)?;
    if !hypothesis {
        return Ok(LowerChainCheck {
            hypothesis,
            step_i: None,
            step_i_margin: None,
            log_factor: None,
            step_ii: None,
            step_ii_margin: None,
            precision_bits: base_prec,
        });
    }
    // the step (i) margin is about 1/(2g): precision must cover the bits of g
    let start = base_prec + g.bits() as usize + 64;
    let mut last = None;
    let (step_i, prec) = decide_adaptive(start, |p| {
        let m = step_i_margin(g, alpha, p)?;
        let d = Interval::zero(p).decide_le(&m);
        last = Some(m);
        Ok(d)
    })?;
    let factor = log_factor(g, alpha, prec)?;
    let step_ii = Some(step_ii_holds(g, alpha, prec)?);
    let margin_ii = step_ii_margin(g, alpha, prec)?;
    Ok(LowerChainCheck {
        hypothesis,
        step_i,
        step_i_margin: last,
        log_factor: Some(factor),
        step_ii,
        step_ii_margin: margin_ii,
        precision_bits: prec,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    pub alpha: Alpha,
    /// Largest g seen at which step (ii) fails.
    #[serde(serialize_with = "ser_opt_big")]
    pub below: Option<BigUint>,
    /// Smallest g seen at which step (ii) is certified; the crossover lies
    /// in (below, g].
    #[serde(serialize_with = "ser_opt_big")]
    pub g: Option<BigUint>,
    /// The search stops once g − below ≤ g / 2^resolution_bits.
    pub resolution_bits: u64,
    /// Bit length of g.
    pub bits: Option<u64>,
    pub ln_g: Option<Interval>,
    pub evaluations: usize,
    pub precision_bits: usize,
}

/// Binary search for the crossover of step (ii). The step (ii) margin is
/// increasing in g once the log factor is positive, so the predicate is
/// monotone. Gives up beyond `max_bits`; `resolution_bits = u64::MAX`
/// bisects down to consecutive integers.
pub fn step_ii_threshold(alpha: &Alpha, max_bits: u64, resolution_bits: u64, prec: usize) -> Result<Threshold> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("threshold needs alpha > 0".into()));
    }
    let mut evaluations = 0;
    let mut holds = |g: &BigUint| -> Result<bool> {
        evaluations += 1;
        step_ii_holds(g, alpha, prec)
    };
    let two = BigUint::from(2u32);
    let (below, found) = if holds(&two)? {
        (None, Some(two))
    } else {
        let mut e: u64 = 1;
        let mut lo = two;
        let mut hi = None;
        while e < max_bits {
            e = (e * 2).min(max_bits);
            let g = BigUint::one() << e;
            if holds(&g)? {
                hi = Some(g);
                break;
            }
            lo = g;
        }
        match hi {
            None => (Some(lo), None),
            Some(mut hi) => {
                let close = |lo: &BigUint, hi: &BigUint| {
                    let gap = hi - lo;
                    gap <= BigUint::one()
                        || (resolution_bits < hi.bits() && gap <= (hi >> resolution_bits as usize))
                };
                while !close(&lo, &hi) {
                    let mid = (&lo + &hi) >> 1;
                    if holds(&mid)? {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                (Some(lo), Some(hi))
            }
        }
    };
    Ok(Threshold {
        alpha: alpha.clone(),
        below,
        bits: found.as_ref().map(|g| g.bits()),
        ln_g: found.as_ref().map(|g| ln_of(g, prec)),
        g: found,
        resolution_bits,
        evaluations,
        precision_bits: prec,
    })
}
