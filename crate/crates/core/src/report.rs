//! Per-(g, α) reports combining the planner, both theorem sides, the curve
//! count growth and the two proof chains, plus sweeps over g.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::exact::{rational_string, ser_big, ser_opt_big};
use crate::bounds::{
    growth_check, hp_lower, lower_bound_chain_check, plan_parameters, system_size_exact,
    theorem_bounds, Alpha, GrowthCheck, HpLower, Interval, LowerChainCheck, Plan, TheoremBounds,
};
use crate::error::Result;
use crate::prune::{chain_dominates, pruned_bound, ChainCertificate};

pub const SCHEMA: u32 = 1;

/// Exact rationals longer than this are reported only as enclosures.
const MAX_EXACT_DIGITS: usize = 200;

/// The upper-bound chain at planner scale, evaluated on counts.
#[derive(Debug, Clone, Serialize)]
pub struct UpperChain {
    /// m(p,q) = (p−1)·C(2k,k).
    #[serde(serialize_with = "ser_opt_big")]
    pub m_pq: Option<BigUint>,
    /// 2 ≤ ⌊g^{1+α}⌋ ≤ m(p,q).
    pub pruning_applicable: bool,
    /// m(m−1)·m_pq/(m_pq−1)·4k/(p−1) with m = ⌊g^{1+α}⌋.
    pub pruned_bound: Option<Interval>,
    pub pruned_bound_exact: Option<String>,
    /// 4k/(p−1) ≤ 9α²(ln g)²/(4g).
    pub density_step: Option<bool>,
    pub chain: Option<ChainCertificate>,
    /// pruned bound ≤ (9/4)α²g^{1+2α}(ln g)².
    pub within_theorem_upper: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub schema: u32,
    #[serde(serialize_with = "ser_big")]
    pub g: BigUint,
    pub alpha: Alpha,
    pub precision_bits: usize,
    pub plan: Plan,
    pub hp_lower: HpLower,
    pub theorem: TheoremBounds,
    pub growth: Option<GrowthCheck>,
    pub upper_chain: Option<UpperChain>,
    pub lower_chain: Option<LowerChainCheck>,
}

impl BoundReport {
    pub fn chi_ok(&self) -> Option<bool> {
        self.plan.diagnostics.chi.as_ref().map(|c| c.embeds)
    }

    pub fn growth_ok(&self) -> Option<bool> {
        self.growth.as_ref().and_then(|g| g.growth_ok)
    }
}

fn upper_chain(
    g: &BigUint,
    alpha: &Alpha,
    plan: &Plan,
    theorem: &TheoremBounds,
    prec: usize,
) -> Result<Option<UpperChain>> {
    let Some((k, p)) = plan.parameters() else {
        return Ok(None);
    };
    let m = &plan.m_target.value;
    let m_pq = system_size_exact(p, k);
    let two = BigUint::from(2u32);
    let applicable = m_pq.as_ref().is_some_and(|mp| *m >= two && m <= mp) && *p >= two;

    let ln_g = Interval::from_biguint(g, prec).ln()?;
    let a = alpha.interval(prec);
    let density = Interval::from_u64(4 * k, prec).div(&Interval::from_biguint(&(p - 1u32), prec))?;
    let density_limit = Interval::from_rational(&BigRational::new(9.into(), 4.into()), prec)
        .mul(&a.mul(&ln_g).square())
        .div(&Interval::from_biguint(g, prec))?;
    let density_step = density.decide_le(&density_limit);

    let (pruned, exact, chain, within) = match (&m_pq, applicable) {
        (Some(mp), true) => {
            let b = pruned_bound(m, mp, k, p)?;
            let exact = (b.numer().bits() as f64 * std::f64::consts::LOG10_2 <= MAX_EXACT_DIGITS as f64)
                .then(|| rational_string(&b));
            let iv = Interval::from_rational(&b, prec);
            let within = iv.decide_le(&theorem.upper);
            let chain = chain_dominates(g, alpha, m, mp, prec)?;
            (Some(iv), exact, Some(chain), within)
        }
        _ => (None, None, None, None),
    };
    Ok(Some(UpperChain {
        m_pq,
        pruning_applicable: applicable,
        pruned_bound: pruned,
        pruned_bound_exact: exact,
        density_step,
        chain,
        within_theorem_upper: within,
    }))
}

pub fn bound_report(g: &BigUint, alpha: &Alpha, prec: usize) -> Result<BoundReport> {
    let plan = plan_parameters(g, alpha, prec)?;
    let theorem = theorem_bounds(g, alpha, prec)?;
    let hp = hp_lower(g, &plan.m_target.value, prec)?;
    let growth = match plan.parameters() {
        Some(_) => Some(growth_check(g, alpha, &plan)?),
        None => None,
    };
    let upper = upper_chain(g, alpha, &plan, &theorem, prec)?;
    let lower = if alpha.is_zero() {
        None
    } else {
        Some(lower_bound_chain_check(g, alpha, prec)?)
    };
    Ok(BoundReport {
        schema: SCHEMA,
        g: g.clone(),
        alpha: alpha.clone(),
        precision_bits: prec,
        plan,
        hp_lower: hp,
        theorem,
        growth,
        upper_chain: upper,
        lower_chain: lower,
    })
}

/// One line of a g-sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub g: String,
    pub alpha: String,
    pub valid: bool,
    pub k: Option<u64>,
    pub p: Option<String>,
    pub q: Option<u64>,
    pub k_window_ok: Option<bool>,
    pub p_window_ok: Option<bool>,
    pub chi_ok: Option<bool>,
    pub chi_margin: Option<String>,
    pub growth_ok: Option<bool>,
    /// ln m(p,q) − (1+α)·ln g, lower end.
    pub growth_margin: Option<String>,
    pub step_i: Option<bool>,
    pub step_ii: Option<bool>,
}

/// g = from, from·factor, … while g ≤ to.
pub fn geometric_range(from: &BigUint, to: &BigUint, factor: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    if *factor <= BigUint::from(1u32) {
        if from <= to {
            out.push(from.clone());
        }
        return out;
    }
    let mut g = from.clone();
    while &g <= to {
        out.push(g.clone());
        g *= factor;
    }
    out
}

pub fn sweep_row(g: &BigUint, alpha: &Alpha, prec: usize, digits: usize) -> Result<SweepRow> {
    let plan = plan_parameters(g, alpha, prec)?;
    let d = &plan.diagnostics;
    let growth = match plan.parameters() {
        Some(_) => Some(growth_check(g, alpha, &plan)?),
        None => None,
    };
    let chain = if alpha.is_zero() {
        None
    } else {
        Some(lower_bound_chain_check(g, alpha, prec)?)
    };
    Ok(SweepRow {
        g: g.to_string(),
        alpha: alpha.to_string(),
        valid: plan.valid,
        k: plan.k,
        p: plan.p.as_ref().map(|p| p.to_string()),
        q: plan.q,
        k_window_ok: d.k_window.as_ref().map(|w| w.holds()),
        p_window_ok: d.p_window.as_ref().map(|w| w.holds()),
        chi_ok: d.chi.as_ref().map(|c| c.embeds),
        chi_margin: d.chi.as_ref().map(|c| c.margin.to_string()),
        growth_ok: growth.as_ref().and_then(|g| g.growth_ok),
        growth_margin: growth.as_ref().map(|g| g.margin.lo_string(digits)),
        step_i: chain.as_ref().and_then(|c| c.step_i),
        step_ii: chain.as_ref().and_then(|c| c.step_ii),
    })
}

pub fn sweep(gs: &[BigUint], alpha: &Alpha, prec: usize, digits: usize) -> Result<Vec<SweepRow>> {
    gs.iter().map(|g| sweep_row(g, alpha, prec, digits)).collect()
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)
            .map_err(|e| crate::error::Error::Output(e.to_string()))?;
    }
    w.flush()
        .map_err(|e| crate::error::Error::Output(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_at_million() {
        let r = bound_report(&BigUint::from(1_000_000u32), &"1".parse().unwrap(), 256).unwrap();
        assert_eq!(r.plan.k, Some(9));
        assert_eq!(r.chi_ok(), Some(true));
        // m(p,q) = 96510·48620 ≈ 4.7e9 < 1e12
        assert_eq!(r.growth_ok(), Some(false));
        let up = r.upper_chain.unwrap();
        assert!(!up.pruning_applicable);
        assert_eq!(up.density_step, Some(true));
        assert!(!r.hp_lower.vacuous);
    }

    #[test]
    fn geometric() {
        let gs = geometric_range(&BigUint::from(10u32), &BigUint::from(10_000u32), &BigUint::from(10u32));
        assert_eq!(gs.len(), 4);
    }
}
