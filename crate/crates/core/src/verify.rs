//! Self-verification suites. Reports contain no timings or other
//! environment-dependent data, so identical runs give identical output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    binomial_constant_check, chi_embedding_check, growth_check, hp_lower, lower_bound_chain_check,
    plan_parameters, step_ii_threshold, theorem_bounds, Alpha, DEFAULT_PRECISION,
};
use crate::crossings::{
    chord_crossings_for_pair, coarse_matrix, coarse_pair_bound, total_coarse, upper_overlap,
    LaneAssignment, SparseCrossingMatrix,
};
use crate::curves::{edge_traversals, enumerate_system, is_null_homologous, realize_curve};
use crate::error::{Error, Result};
use crate::prune::{greedy_prune, pruned_bound};
use crate::report::SCHEMA;
use crate::surface::{build_surface, surface_summary, trace_boundary, RibbonGraph};

/// Seed of the randomized pruning matrices.
pub const SEED: u64 = 0x5eed_f1b2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Small,
    Full,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Suite::Small),
            "full" => Ok(Suite::Full),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Small => "small",
            Suite::Full => "full",
        })
    }
}

/// Deliberate corruption for negative testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fault {
    /// Swaps two ribbons in the rotation at upper vertex 0.
    Rotation,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(Fault::Rotation),
            _ => Err(Error::Parse(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: Suite,
    pub fault: Option<Fault>,
    pub seed: u64,
    pub precision_bits: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn result(name: &str, cases: u64, failures: &[String], ok_detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: failures.is_empty(),
        cases,
        detail: if failures.is_empty() {
            ok_detail
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        },
    }
}

fn from_error(name: &str, e: Error) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: false,
        cases: 0,
        detail: e.to_string(),
    }
}

/// Σ(p,q) with two ribbons swapped at upper vertex 0 when that changes the
/// cyclic order.
pub fn faulty_surface(p: usize, q: usize) -> Result<RibbonGraph> {
    let mut upper: Vec<Vec<u32>> = (0..p).map(|_| (0..q as u32).collect()).collect();
    let lower: Vec<Vec<u32>> = (0..q).map(|_| (0..p as u32).collect()).collect();
    if q >= 3 {
        upper[0].swap(0, 1);
    }
    RibbonGraph::from_rotations(p, q, upper, lower)
}

fn boundary_gcd(max: usize, fault: Option<Fault>) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for p in 1..=max {
        for q in 1..=max {
            let g = match fault {
                Some(Fault::Rotation) => faulty_surface(p, q)?,
                None => build_surface(p, q)?,
            };
            let b = trace_boundary(&g).len();
            cases += 1;
            if b != p.gcd(&q) {
                failures.push(format!("Σ({p},{q}): {b} components, gcd {}", p.gcd(&q)));
            }
        }
    }
    Ok(result(
        "boundary-gcd",
        cases,
        &failures,
        format!("boundary components = gcd(p,q) for 1 <= p,q <= {max}"),
    ))
}

fn surface_summaries() -> Result<CheckResult> {
    let expected = [((3, 4), (-5, 1, 3)), ((2, 3), (-1, 1, 1)), ((2, 2), (0, 2, 0))];
    let mut failures = Vec::new();
    for ((p, q), (chi, b, genus)) in expected {
        let s = surface_summary(&build_surface(p, q)?)?;
        if (s.chi, s.boundary_components, s.genus) != (chi, b, genus) {
            failures.push(format!(
                "Σ({p},{q}): chi={} b={} genus={}",
                s.chi, s.boundary_components, s.genus
            ));
        }
    }
    Ok(result(
        "surface-summaries",
        expected.len() as u64,
        &failures,
        "Σ(3,4): (-5,1,3); Σ(2,3): (-1,1,1); Σ(2,2): (0,2,0)".into(),
    ))
}

fn enumeration_counts(suite: Suite) -> Result<CheckResult> {
    let mut cases = vec![((2, 1), 2), ((3, 1), 4), ((3, 3), 40), ((4, 3), 60)];
    if suite == Suite::Full {
        cases.extend([((5, 5), 1008), ((3, 7), 6864)]);
    }
    let mut failures = Vec::new();
    for &((p, k), n) in &cases {
        let s = enumerate_system(p, k)?;
        let mut ids = s.curves.clone();
        ids.sort();
        ids.dedup();
        if s.len() != n || ids.len() != n {
            failures.push(format!("(p={p},k={k}): {} curves, {} distinct", s.len(), ids.len()));
        }
    }
    let listed: Vec<String> = cases.iter().map(|((p, k), n)| format!("({p},{k})->{n}")).collect();
    Ok(result("enumeration-counts", cases.len() as u64, &failures, listed.join(", ")))
}

fn curve_realization(max_p: usize, ks: &[usize]) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for &k in ks {
        for p in 2..=max_p {
            let g = build_surface(p, 2 * k)?;
            for id in enumerate_system(p, k)?.curves {
                cases += 1;
                match realize_curve(&g, &id) {
                    Err(e) => failures.push(format!("{id}: {e}")),
                    Ok(w) => {
                        let twice = edge_traversals(&w.walk).values().all(|&c| c == 2);
                        let steps = w.walk.len() == 4 * k;
                        if !twice || !steps || !is_null_homologous(&w.walk) {
                            failures.push(format!("{id} on Σ({p},{})", 2 * k));
                        }
                    }
                }
            }
        }
    }
    Ok(result(
        "curve-realization",
        cases,
        &failures,
        format!("single cycles, every sub-edge twice, null-homologous; p <= {max_p}, k in {ks:?}"),
    ))
}

/// Independent classification of every pair, compared with the block-wise
/// generator.
fn coarse_totals() -> Result<CheckResult> {
    let s = enumerate_system(3, 3)?;
    let mat = coarse_matrix(&s);
    let mut failures = Vec::new();
    let mut oracle: u128 = 0;
    let mut nonzero = 0;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let (a, b) = (&s.curves[i], &s.curves[j]);
            let expect = match (a.u == b.u, a.u.abs_diff(b.u)) {
                (true, _) => 12,
                (false, 1) => 6,
                _ => 0,
            };
            if u64::from(upper_overlap(a, b).value()) * 6 != expect || mat.get(i, j) != expect {
                failures.push(format!("pair ({i},{j})"));
            }
            if coarse_pair_bound(a, b, 3) != expect {
                failures.push(format!("pair bound ({i},{j})"));
            }
            oracle += expect as u128;
            nonzero += usize::from(expect > 0);
        }
    }
    let total = total_coarse(&s);
    let bound = BigRational::new((4 * 3 * 40 * 40).into(), 2.into());
    if total != BigUint::from(6960u32) || mat.total() != oracle || oracle != 6960 {
        failures.push(format!("total {total}, oracle {oracle}"));
    }
    if BigRational::from_integer(6960.into()) > bound {
        failures.push("total exceeds 4k·m²/(p−1)".into());
    }
    if mat.nonzero_pairs() != nonzero {
        failures.push(format!("{} stored pairs, {nonzero} expected", mat.nonzero_pairs()));
    }
    Ok(result(
        "coarse-total",
        780,
        &failures,
        format!("(p=3,k=3): total 6960 <= 9600, {nonzero} nonzero pairs"),
    ))
}

fn chord_diagrams(systems: &[(usize, usize)]) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut worst = 0u64;
    for &(p, k) in systems {
        let g = build_surface(p, 2 * k)?;
        let s = enumerate_system(p, k)?;
        let walks = s
            .curves
            .iter()
            .map(|id| realize_curve(&g, id))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..walks.len() {
            for j in (i + 1)..walks.len() {
                let (a, b) = (&walks[i], &walks[j]);
                if upper_overlap(&a.id, &b.id).value() == 0 {
                    continue;
                }
                cases += 1;
                let counts = chord_crossings_for_pair(&g, a, b, LaneAssignment::canonical(i, j))?;
                let sum: u64 = counts.iter().map(|&(_, c)| c).sum();
                worst = worst.max(counts.iter().map(|&(_, c)| c).max().unwrap_or(0));
                if counts.iter().any(|&(_, c)| c > 2 * k as u64)
                    || sum > coarse_pair_bound(&a.id, &b.id, k as u64)
                {
                    failures.push(format!("{} vs {}: {counts:?}", a.id, b.id));
                }
            }
        }
    }
    Ok(result(
        "chord-diagrams",
        cases,
        &failures,
        format!("per-vertex crossings <= 2k, pair sums <= coarse bound; largest vertex count {worst}"),
    ))
}

/// Sparse symmetric matrix with n ≤ 60 and entries in [0, 12].
pub fn random_matrix(rng: &mut ChaCha8Rng) -> SparseCrossingMatrix {
    let n = rng.gen_range(2..=60usize);
    let density = rng.gen_range(0.02..0.5f64);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(density) {
                entries.push((i, j, rng.gen_range(0..=12u64)));
            }
        }
    }
    SparseCrossingMatrix::from_entries(n, entries).expect("valid random matrix")
}

fn pruning(random_cases: usize) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let s = enumerate_system(3, 3)?;
    let t = greedy_prune(&coarse_matrix(&s), 10)?;
    if !t.check_invariants() {
        failures.push("(3,3) trace".into());
    }
    // total/C(10,2) ≤ 6960/C(40,2)
    if BigUint::from(t.final_total()) * 780u32 > BigUint::from(6960u32 * 45) {
        failures.push(format!("(3,3) final total {}", t.final_total()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut steps = t.steps.len() as u64;
    for case in 0..random_cases {
        let mat = random_matrix(&mut rng);
        let m = rng.gen_range(1..=mat.n());
        let t = greedy_prune(&mat, m)?;
        steps += t.steps.len() as u64;
        if let Some(i) = t.first_violation() {
            failures.push(format!("random case {case}, step {i}"));
        }
    }
    Ok(result(
        "pruning-monotonicity",
        1 + random_cases as u64,
        &failures,
        format!(
            "(3,3) to m=10 (final total {}) and {random_cases} random matrices; {steps} removals checked",
            t.final_total()
        ),
    ))
}

fn pruned_bound_examples() -> Result<CheckResult> {
    let b = |m: u32, mp: u32, k: u64, p: u32| {
        pruned_bound(&BigUint::from(m), &BigUint::from(mp), k, &BigUint::from(p))
    };
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut failures = Vec::new();
    for (got, want) in [
        (b(10, 40, 3, 3)?, r(21600, 39)),
        (b(40, 40, 3, 3)?, r(9600, 1)),
        (b(2, 2, 1, 2)?, r(16, 1)),
    ] {
        if got != want {
            failures.push(format!("{got} != {want}"));
        }
    }
    Ok(result("pruned-bound", 3, &failures, "21600/39, 9600, 16".into()))
}

fn binomial(k_max: u64) -> CheckResult {
    let r = binomial_constant_check(k_max);
    let failures: Vec<String> = r.failures.iter().map(|k| format!("k={k}")).collect();
    result(
        "binomial-constant",
        k_max,
        &failures,
        format!(
            "64·π_lo·k·C(2k,k)² >= 49·16^k for 1 <= k <= {k_max}; tightest at k={} (ratio {:.6})",
            r.tightest_k, r.tightest_ratio
        ),
    )
}

fn alphas() -> Vec<Alpha> {
    ["0.25", "0.5", "1", "2"].iter().map(|a| a.parse().expect("literal")).collect()
}

fn powers_of_ten(exps: impl IntoIterator<Item = u32>) -> Vec<BigUint> {
    exps.into_iter().map(|e| BigUint::from(10u32).pow(e)).collect()
}

fn planner_windows(gs: &[BigUint]) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let (mut valid, mut invalid) = (0, 0);
    for alpha in alphas() {
        for g in gs {
            let plan = plan_parameters(g, &alpha, DEFAULT_PRECISION)?;
            let Some((k, _)) = plan.parameters() else {
                invalid += 1;
                continue;
            };
            valid += 1;
            if k % 2 == 0 || !plan.windows_hold() {
                failures.push(format!("g={g}, alpha={alpha}"));
            }
        }
    }
    Ok(result(
        "planner-windows",
        (valid + invalid) as u64,
        &failures,
        format!("{valid} valid plans within k/p windows and |chi| <= 2g-2; {invalid} degenerate"),
    ))
}

fn theorem_ratio(gs: &[BigUint]) -> Result<CheckResult> {
    let want = BigRational::new(2313.into(), 4.into());
    let mut failures = Vec::new();
    let mut cases = 0;
    for alpha in alphas() {
        for g in gs {
            cases += 1;
            let t = theorem_bounds(g, &alpha, DEFAULT_PRECISION)?;
            let ratio_ok = t.ratio.as_ref() == Some(&want);
            let enclosure_ok = t
                .upper
                .overlaps(&t.lower.mul(&crate::bounds::Interval::from_rational(&want, DEFAULT_PRECISION)));
            if !ratio_ok || !enclosure_ok {
                failures.push(format!("g={g}, alpha={alpha}"));
            }
        }
    }
    Ok(result("theorem-ratio", cases, &failures, "upper/lower = 2313/4".into()))
}

fn hp_monotone() -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for g in [2u32, 10, 1000] {
        let g = BigUint::from(g);
        let mut prev: Option<crate::bounds::Interval> = None;
        let mut m = (&g * 2u32) * 404u32; // just above (2g−1)e⁶
        for _ in 0..40 {
            let h = hp_lower(&g, &m, DEFAULT_PRECISION)?;
            cases += 1;
            if let Some(v) = h.value {
                if let Some(p) = &prev {
                    if p.decide_le(&v) != Some(true) {
                        failures.push(format!("g={g}, m={m}"));
                    }
                }
                prev = Some(v);
            }
            m = &m * 3u32 / 2u32;
        }
    }
    Ok(result(
        "hp-monotone",
        cases,
        &failures,
        "non-decreasing in m above (2g-1)e^6".into(),
    ))
}

fn chi_examples() -> CheckResult {
    let b = BigUint::from;
    let mut failures = Vec::new();
    if !chi_embedding_check(&b(3u32), &b(4u32), &b(4u32)).embeds {
        failures.push("(3,4,4)".into());
    }
    if chi_embedding_check(&b(3u32), &b(4u32), &b(3u32)).embeds {
        failures.push("(3,4,3)".into());
    }
    for q in 1..=20u32 {
        if !chi_embedding_check(&b(1u32), &b(q), &b(2u32)).embeds {
            failures.push(format!("(1,{q},2)"));
        }
    }
    result("chi-embedding", 22, &failures, "|p+q-pq| <= 2g-2 examples".into())
}

fn lower_chain_step_i(gs: &[BigUint]) -> Result<CheckResult> {
    let alpha: Alpha = "1".parse().expect("literal");
    let mut failures = Vec::new();
    for g in gs {
        let c = lower_bound_chain_check(g, &alpha, DEFAULT_PRECISION)?;
        if !c.hypothesis || c.step_i != Some(true) {
            failures.push(format!("g={g}"));
        }
    }
    let bits = gs.iter().map(|g| g.bits()).max().unwrap_or(0);
    Ok(result(
        "lower-chain-step-i",
        gs.len() as u64,
        &failures,
        format!("step (i) holds at alpha=1 for sampled g >= 10 (up to {bits} bits)"),
    ))
}

/// Significant bits to which the step (ii) crossover is bracketed.
pub const THRESHOLD_RESOLUTION: u64 = 64;

fn lower_chain_threshold() -> Result<CheckResult> {
    let alpha: Alpha = "1".parse().expect("literal");
    let t = step_ii_threshold(&alpha, 1 << 16, THRESHOLD_RESOLUTION, DEFAULT_PRECISION)?;
    let failures = match (&t.below, &t.g) {
        (Some(below), Some(g)) => {
            let at = lower_bound_chain_check(g, &alpha, DEFAULT_PRECISION)?;
            let before = lower_bound_chain_check(below, &alpha, DEFAULT_PRECISION)?;
            if at.step_ii == Some(true) && before.step_ii == Some(false) {
                vec![]
            } else {
                vec![format!("bracket ({below}, {g}] is not a crossover")]
            }
        }
        _ => vec!["no threshold below 2^65536".to_string()],
    };
    let detail = match (&t.bits, &t.ln_g) {
        (Some(bits), Some(ln)) => format!(
            "step (ii) crossover bracketed to {THRESHOLD_RESOLUTION} bits at a g of {bits} bits, ln g in [{}, {}]",
            ln.lo_string(12),
            ln.hi_string(12)
        ),
        _ => "no threshold".into(),
    };
    Ok(result("lower-chain-threshold", t.evaluations as u64, &failures, detail))
}

/// g = 10^{3+100j}: the margin ln m(p,q) − 2 ln g starts negative and rises.
pub fn growth_sweep_exponents(suite: Suite) -> Vec<u32> {
    let steps = match suite {
        Suite::Small => 6,
        Suite::Full => 21,
    };
    (0..steps).map(|j| 3 + 100 * j).collect()
}

fn growth_sweep(suite: Suite) -> Result<CheckResult> {
    let alpha: Alpha = "1".parse().expect("literal");
    let exps = growth_sweep_exponents(suite);
    let mut failures = Vec::new();
    let mut margins = Vec::new();
    for (&e, g) in exps.iter().zip(powers_of_ten(exps.iter().copied())) {
        let plan = plan_parameters(&g, &alpha, DEFAULT_PRECISION)?;
        let gc = growth_check(&g, &alpha, &plan)?;
        if gc.analytic_ok != Some(true) {
            failures.push(format!("analytic bound at 10^{e}"));
        }
        margins.push((e, gc.margin));
    }
    if margins.first().map(|(_, m)| m.is_negative()) != Some(true) {
        failures.push("margin at 10^3 not negative".into());
    }
    for w in margins.windows(2) {
        if !w[0].1.certainly_lt(&w[1].1) {
            failures.push(format!("margin not increasing from 10^{} to 10^{}", w[0].0, w[1].0));
        }
    }
    let crossing = margins.iter().find(|(_, m)| m.is_positive()).map(|(e, _)| *e);
    Ok(result(
        "growth-sweep",
        margins.len() as u64,
        &failures,
        format!(
            "alpha=1, g=10^3..10^{} by 10^100: margin {} at 10^3, first positive at {}",
            exps.last().copied().unwrap_or(3),
            margins[0].1.hi_string(8),
            crossing.map_or("none".to_string(), |e| format!("10^{e}"))
        ),
    ))
}

fn record(checks: &mut Vec<CheckResult>, name: &str, r: Result<CheckResult>) {
    checks.push(r.unwrap_or_else(|e| from_error(name, e)));
}

pub fn run_suite(suite: Suite, fault: Option<Fault>) -> VerifyReport {
    let full = suite == Suite::Full;
    let mut checks = Vec::new();
    record(&mut checks, "boundary-gcd", boundary_gcd(if full { 10 } else { 6 }, fault));
    record(&mut checks, "surface-summaries", surface_summaries());
    record(&mut checks, "enumeration-counts", enumeration_counts(suite));
    let realization = if full {
        curve_realization(6, &[1, 3, 5])
    } else {
        curve_realization(4, &[1, 3])
    };
    record(&mut checks, "curve-realization", realization);
    record(&mut checks, "coarse-total", coarse_totals());
    let systems: &[(usize, usize)] = if full {
        &[(2, 1), (3, 1), (4, 1), (2, 3), (3, 3), (4, 3), (3, 5)]
    } else {
        &[(2, 1), (3, 1), (4, 1), (2, 3), (3, 3), (4, 3)]
    };
    record(&mut checks, "chord-diagrams", chord_diagrams(systems));
    record(&mut checks, "pruning-monotonicity", pruning(if full { 100 } else { 20 }));
    record(&mut checks, "pruned-bound", pruned_bound_examples());
    checks.push(binomial(if full { 64 } else { 16 }));
    let grid = if full {
        powers_of_ten(3..=12)
    } else {
        powers_of_ten([3, 6, 9, 12])
    };
    record(&mut checks, "planner-windows", planner_windows(&grid));
    record(&mut checks, "theorem-ratio", theorem_ratio(&grid));
    record(&mut checks, "hp-monotone", hp_monotone());
    checks.push(chi_examples());
    let step_i_gs = if full {
        powers_of_ten((1..=12).chain([50, 100, 500, 1000]))
    } else {
        powers_of_ten(1..=12)
    };
    record(&mut checks, "lower-chain-step-i", lower_chain_step_i(&step_i_gs));
    if full {
        record(&mut checks, "lower-chain-threshold", lower_chain_threshold());
    }
    record(&mut checks, "growth-sweep", growth_sweep(suite));
    VerifyReport {
        schema: SCHEMA,
        suite,
        fault,
        seed: SEED,
        precision_bits: DEFAULT_PRECISION,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
