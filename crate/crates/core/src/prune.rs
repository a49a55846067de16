//! Greedy pruning of a curve system down to m curves without raising the
//! average pairwise bound, and the count-level bound chain.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::bounds::exact::{cmp_with_power, ser_big};
use crate::bounds::{Alpha, Interval};
use crate::crossings::SparseCrossingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruneStep {
    pub removed: usize,
    pub row_sum: u128,
    pub total_before: u128,
    pub total_after: u128,
    /// Curves present before the removal.
    pub size_before: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruneTrace {
    pub n: usize,
    pub m_target: usize,
    pub initial_total: u128,
    pub steps: Vec<PruneStep>,
    pub survivors: Vec<usize>,
}

fn pairs(n: usize) -> u128 {
    let n = n as u128;
    n * n.saturating_sub(1) / 2
}

impl PruneStep {
    /// total_after/C(n−1,2) ≤ total_before/C(n,2), cross-multiplied.
    pub fn average_non_increasing(&self) -> bool {
        let n = self.size_before;
        let lhs = BigUint::from(self.total_after) * pairs(n);
        let rhs = BigUint::from(self.total_before) * pairs(n - 1);
        lhs <= rhs
    }
}

impl PruneTrace {
    pub fn final_total(&self) -> u128 {
        self.steps.last().map_or(self.initial_total, |s| s.total_after)
    }

    /// Average pairwise bound of the survivors, exact.
    pub fn final_average(&self) -> Option<BigRational> {
        let c = pairs(self.m_target);
        (c > 0).then(|| BigRational::new(self.final_total().into(), c.into()))
    }

    /// Index of the first step breaking bookkeeping or monotonicity.
    pub fn first_violation(&self) -> Option<usize> {
        let mut total = self.initial_total;
        for (i, s) in self.steps.iter().enumerate() {
            let consistent = s.total_before == total && s.total_after + s.row_sum == s.total_before;
            if !consistent || !s.average_non_increasing() {
                return Some(i);
            }
            total = s.total_after;
        }
        None
    }

    pub fn check_invariants(&self) -> bool {
        self.first_violation().is_none()
    }
}

/// Removes the curve with the largest remaining row sum (smallest index on
/// ties) until `m_target` curves are left.
pub fn greedy_prune(mat: &SparseCrossingMatrix, m_target: usize) -> Result<PruneTrace> {
    let n = mat.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if m_target == 0 || m_target > n {
        return Err(Error::InvalidParameter(format!(
            "m_target must be in 1..={n}, got {m_target}"
        )));
    }
    let adj = mat.adjacency();
    let mut sums = mat.row_sums();
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<(u128, Reverse<usize>)> =
        sums.iter().enumerate().map(|(i, &s)| (s, Reverse(i))).collect();
    let mut total = mat.total();
    let initial_total = total;
    let mut steps = Vec::with_capacity(n - m_target);
    let mut size = n;
    while size > m_target {
        let (s, Reverse(i)) = heap.pop().expect("live curves remain");
        if !alive[i] || s != sums[i] {
            continue;
        }
        alive[i] = false;
        let before = total;
        total -= s;
        for &(j, w) in &adj[i] {
            if alive[j] {
                sums[j] -= w as u128;
                heap.push((sums[j], Reverse(j)));
            }
        }
        steps.push(PruneStep {
            removed: i,
            row_sum: s,
            total_before: before,
            total_after: total,
            size_before: size,
        });
        size -= 1;
    }
    let survivors = (0..n).filter(|&i| alive[i]).collect();
    Ok(PruneTrace {
        n,
        m_target,
        initial_total,
        steps,
        survivors,
    })
}

/// m(m−1)·m_pq/(m_pq−1)·4k/(p−1), the bound on the pruned subsystem.
pub fn pruned_bound(m: &BigUint, m_pq: &BigUint, k: u64, p: &BigUint) -> Result<BigRational> {
    let two = BigUint::from(2u32);
    if *m < two {
        return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
    }
    if m > m_pq {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds m(p,q) = {m_pq}")));
    }
    if *p < two {
        return Err(Error::InvalidParameter(format!("p must be >= 2, got {p}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let num = m * (m - 1u32) * m_pq * (4 * k);
    let den = (m_pq - 1u32) * (p - 1u32);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// m(m−1)·m_pq/(m_pq−1) ≤ g^{2+2α}, the last step of the upper chain.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCertificate {
    #[serde(serialize_with = "ser_big")]
    pub m: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub m_pq: BigUint,
    /// m ≤ g^{1+α}.
    pub m_within_target: Option<bool>,
    /// m_pq > g^{1+α}.
    pub m_pq_exceeds_target: Option<bool>,
    pub hypotheses_hold: bool,
    pub holds: Option<bool>,
    /// Decided with exact integers rather than logarithms.
    pub exact: bool,
    /// (2+2α)·ln g − ln(m(m−1)m_pq/(m_pq−1)).
    pub log_margin: Interval,
    pub precision_bits: usize,
}

/// x ≤ g^e for a rational x, exactly, when the powers stay small.
fn rational_le_power(x: &BigRational, g: &BigUint, e: &BigRational) -> Option<bool> {
    let (a, b) = (e.numer().to_u64()?, e.denom().to_u32()?);
    let (num, den) = (x.numer().to_biguint()?, x.denom().to_biguint()?);
    let limit = crate::bounds::exact::EXACT_BIT_LIMIT;
    let fits = |v: &BigUint, t: u64| v.bits().checked_mul(t).is_some_and(|bits| bits <= limit);
    if !fits(&num, b as u64) || !fits(g, a) || !fits(&den, b as u64) {
        return None;
    }
    let lhs = num_traits::pow(num, b as usize);
    let rhs = num_traits::pow(g.clone(), a as usize) * num_traits::pow(den, b as usize);
    Some(lhs <= rhs)
}

fn ln_big(v: &BigUint, prec: usize) -> Result<Interval> {
    Interval::from_biguint(v, prec).ln()
}

pub fn chain_dominates(
    g: &BigUint,
    alpha: &Alpha,
    m: &BigUint,
    m_pq: &BigUint,
    prec: usize,
) -> Result<ChainCertificate> {
    if *m < BigUint::from(2u32) || *m_pq < BigUint::from(2u32) {
        return Err(Error::InvalidParameter("m and m(p,q) must be >= 2".into()));
    }
    if *g < BigUint::from(2u32) {
        return Err(Error::InvalidParameter(format!("genus must be >= 2, got {g}")));
    }
    let e1 = alpha.one_plus();
    let ln_g = ln_big(g, prec)?;
    let log_target = Interval::from_rational(&e1, prec).mul(&ln_g);
    let m_within_target = match cmp_with_power(m, g, &e1) {
        Some(o) => Some(o != Ordering::Greater),
        None => ln_big(m, prec)?.decide_le(&log_target),
    };
    let m_pq_exceeds_target = match cmp_with_power(m_pq, g, &e1) {
        Some(o) => Some(o == Ordering::Greater),
        None => log_target.decide_lt(&ln_big(m_pq, prec)?),
    };
    let hypotheses_hold = m_within_target == Some(true) && m_pq_exceeds_target == Some(true);

    let lhs = BigRational::new(
        BigInt::from(m * (m - 1u32) * m_pq),
        BigInt::from(m_pq - 1u32),
    );
    let e2 = &e1 * BigRational::from_integer(2.into());
    let log_lhs = ln_big(&(m * (m - 1u32) * m_pq), prec)?.sub(&ln_big(&(m_pq - 1u32), prec)?);
    let log_margin = Interval::from_rational(&e2, prec).mul(&ln_g).sub(&log_lhs);
    let (holds, exact) = match rational_le_power(&lhs, g, &e2) {
        Some(v) => (Some(v), true),
        None => (Interval::zero(prec).decide_le(&log_margin), false),
    };
    Ok(ChainCertificate {
        m: m.clone(),
        m_pq: m_pq.clone(),
        m_within_target,
        m_pq_exceeds_target,
        hypotheses_hold,
        holds,
        exact,
        log_margin,
        precision_bits: prec,
    })
}

/// Bound per pair after pruning relative to before: never above one.
pub fn average_ratio(trace: &PruneTrace) -> Option<BigRational> {
    let before = pairs(trace.n);
    let after = trace.final_average()?;
    if before == 0 || trace.initial_total == 0 {
        return Some(BigRational::zero());
    }
    Some(after / BigRational::new(trace.initial_total.into(), before.into()))
}

/// Whether every ratio is at most one.
pub fn is_at_most_one(r: &BigRational) -> bool {
    *r <= BigRational::one()
}
