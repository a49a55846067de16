//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fibrecurve::bounds::binomial::PI_LO;
use fibrecurve::verify::{growth_sweep_exponents, random_matrix, Suite, THRESHOLD_RESOLUTION};
use fibrecurve::{
    binomial_constant_check, build_surface, chord_crossings_for_pair, coarse_matrix, coarse_summary,
    enumerate_system, greedy_prune, growth_check, is_null_homologous, lower_bound_chain_check, plan_parameters,
    realize_curve, step_ii_threshold, surface_summary, theorem_bounds, total_coarse, trace_boundary, Alpha,
    Edge, Interval, LaneAssignment, SparseCrossingMatrix, DEFAULT_PRECISION,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn choose(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn pairs(n: usize) -> BigUint {
    BigUint::from(n * n.saturating_sub(1) / 2)
}

fn alphas() -> Vec<(f64, Alpha)> {
    [0.25, 0.5, 1.0, 2.0].iter().map(|&a| (a, a.to_string().parse().unwrap())).collect()
}

fn pow10(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

fn boundary_count() -> Outcome {
    let start = Instant::now();
    for p in 1..=10 {
        for q in 1..=10 {
            let faces = trace_boundary(&build_surface(p, q).map_err(err)?).len();
            ensure(faces == gcd(p, q), || format!("Σ({p},{q}): {faces} components, gcd {}", gcd(p, q)))?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("100 cases equal gcd(p,q) in {} ms", t.as_millis()))
}

fn surface_examples() -> Outcome {
    for (p, q, chi, b, genus) in [(3, 4, -5, 1, 3), (2, 3, -1, 1, 1), (2, 2, 0, 2, 0)] {
        let s = surface_summary(&build_surface(p, q).map_err(err)?).map_err(err)?;
        ensure(p as i64 + q as i64 - (p * q) as i64 == chi, || "formula".into())?;
        ensure((s.chi, s.boundary_components, s.genus) == (chi, b, genus), || {
            format!("Σ({p},{q}): got {s:?}")
        })?;
    }
    Ok("Σ(3,4) χ=-5 b=1 g=3; Σ(2,3) χ=-1 b=1 g=1; Σ(2,2) χ=0 b=2 g=0".into())
}

fn enumeration_counts() -> Outcome {
    for ((p, k), want) in [(2, 1), (3, 1), (3, 3), (4, 3)].into_iter().zip([2u64, 4, 40, 60]) {
        let n = enumerate_system(p, k).map_err(err)?.len();
        let formula = BigUint::from(p - 1) * choose(2 * k as u64, k as u64);
        ensure(n as u64 == want && formula == BigUint::from(want), || format!("(p={p},k={k}): {n}"))?;
    }
    Ok("(2,1)→2, (3,1)→4, (3,3)→40, (4,3)→60".into())
}

fn curve_realization() -> Outcome {
    let mut curves = 0;
    for p in 2..=4 {
        for k in [1usize, 3] {
            let g = build_surface(p, 2 * k).map_err(err)?;
            for id in enumerate_system(p, k).map_err(err)?.curves {
                let w = realize_curve(&g, &id).map_err(err)?;
                let steps = &w.walk.steps;
                let closed = (0..steps.len()).all(|i| steps[i].head() == steps[(i + 1) % steps.len()].tail());
                let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
                for s in steps {
                    *counts.entry(s.edge).or_default() += 1;
                }
                let expect: BTreeMap<Edge, usize> = id
                    .uppers()
                    .iter()
                    .flat_map(|&u| id.lower_set.iter().map(move |l| (Edge::new(u, l), 2)))
                    .collect();
                ensure(closed && steps.len() == 4 * k, || format!("{id}: not one closed cycle"))?;
                ensure(counts == expect, || format!("{id}: sub-edges not traversed exactly twice"))?;
                ensure(is_null_homologous(&w.walk), || format!("{id}: not null-homologous mod 2"))?;
                curves += 1;
            }
        }
    }
    Ok(format!("{curves} curves (p ≤ 4, k ∈ {{1,3}}): single cycle, each sub-edge twice, null mod 2"))
}

fn coarse_total() -> Outcome {
    let (p, k) = (3usize, 3u64);
    let s = enumerate_system(p, k as usize).map_err(err)?;
    // classify every pair by how many upper vertices the two curves share
    let mut oracle = 0u64;
    for (i, a) in s.curves.iter().enumerate() {
        for b in &s.curves[i + 1..] {
            let shared = a.uppers().iter().filter(|u| b.uppers().contains(u)).count() as u64;
            oracle += 2 * k * shared;
        }
    }
    let total = total_coarse(&s);
    ensure(total == BigUint::from(6960u32) && oracle == 6960, || format!("total {total}, oracle {oracle}"))?;
    let m = BigUint::from(s.len());
    let (num, den) = (BigUint::from(4 * k) * &m * &m, BigUint::from(p - 1));
    let summary = coarse_summary(&s);
    ensure(&total * &den <= num && summary.within_bound, || "bound exceeded".into())?;
    ensure(summary.bound_numer * &den == &num * summary.bound_denom, || "bound differs from 4k·m²/(p−1)".into())?;
    Ok(format!("(p=3,k=3) total {total} = pair classification, ≤ 4k·m²/(p−1) = {}", num / den))
}

fn chord_diagrams() -> Outcome {
    let (mut pairs_checked, mut worst) = (0u64, 0u64);
    for p in 2..=4 {
        for k in [1usize, 3] {
            let g = build_surface(p, 2 * k).map_err(err)?;
            let s = enumerate_system(p, k).map_err(err)?;
            let walks: Vec<_> = s.curves.iter().map(|id| realize_curve(&g, id)).collect::<Result<_, _>>().map_err(err)?;
            let mat = coarse_matrix(&s);
            for i in 0..walks.len() {
                for j in i + 1..walks.len() {
                    let per = chord_crossings_for_pair(&g, &walks[i], &walks[j], LaneAssignment::canonical(i, j))
                        .map_err(err)?;
                    let sum: u64 = per.iter().map(|&(_, c)| c).sum();
                    ensure(per.iter().all(|&(_, c)| c <= 2 * k as u64), || format!("pair ({i},{j}) p={p} k={k}"))?;
                    ensure(sum <= mat.get(i, j), || format!("pair ({i},{j}) p={p} k={k}: {sum} > coarse"))?;
                    worst = worst.max(sum);
                    pairs_checked += 1;
                }
            }
        }
    }
    Ok(format!("{pairs_checked} pairs: per vertex ≤ 2k, per pair ≤ coarse bound (max {worst})"))
}

/// Replays a prune trace against the matrix, recomputing every total from
/// scratch and comparing averages by exact cross-multiplication.
fn replay_prune(mat: &SparseCrossingMatrix, m: usize) -> Result<usize, String> {
    let t = greedy_prune(mat, m).map_err(err)?;
    ensure(t.check_invariants(), || "trace invariants".into())?;
    let mut alive = vec![true; mat.n()];
    let total = |alive: &[bool]| -> BigUint {
        mat.entries()
            .iter()
            .filter(|e| alive[e.i as usize] && alive[e.j as usize])
            .map(|e| BigUint::from(e.bound))
            .sum()
    };
    let mut size = mat.n();
    let mut before = total(&alive);
    for s in &t.steps {
        alive[s.removed] = false;
        let after = total(&alive);
        ensure(BigUint::from(s.total_after) == after, || format!("step removing {} misreports total", s.removed))?;
        ensure(&after * pairs(size) <= &before * pairs(size - 1), || format!("average rose at size {size}"))?;
        before = after;
        size -= 1;
    }
    Ok(t.steps.len())
}

fn pruning() -> Outcome {
    let mat = coarse_matrix(&enumerate_system(3, 3).map_err(err)?);
    let mut steps = replay_prune(&mat, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(fibrecurve::verify::SEED);
    for case in 0..100 {
        let mat = random_matrix(&mut rng);
        ensure(mat.n() <= 60, || format!("case {case}: n = {}", mat.n()))?;
        let m = 2.min(mat.n());
        steps += replay_prune(&mat, m).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(format!("(3,3) matrix + 100 random matrices: {steps} removal steps, average never rises"))
}

fn binomial_constant() -> Outcome {
    let c = binomial_constant_check(64);
    ensure(c.all_pass, || format!("library check fails at {:?}", c.failures))?;
    let (pi_num, pi_den) = PI_LO;
    ensure(pi_num as f64 / (pi_den as f64) < std::f64::consts::PI, || "π_lo not below π".into())?;
    for k in 1..=64u64 {
        let b = choose(2 * k, k);
        let lhs = BigUint::from(64 * pi_num) * k * &b * &b;
        let rhs = BigUint::from(49 * pi_den) * BigUint::from(16u32).pow(k as u32);
        ensure(lhs >= rhs, || format!("k={k}"))?;
    }
    Ok(format!("1 ≤ k ≤ 64 exact; tightest at k={}", c.tightest_k))
}

fn planner_windows() -> Outcome {
    // f64 oracle, widened by a relative margin of 1e-9 for its own rounding
    const EPS: f64 = 1e-9;
    let (mut valid, mut degenerate) = (0, 0);
    for e in 3..=12 {
        let g = pow10(e);
        let gf = 10f64.powi(e as i32);
        for (a, alpha) in alphas() {
            let plan = plan_parameters(&g, &alpha, DEFAULT_PRECISION).map_err(err)?;
            let x = 0.75 * a * gf.ln();
            let Some((k, p)) = plan.parameters() else {
                ensure(x < 1.0 + EPS, || format!("g=1e{e} α={a}: plan invalid at ¾α ln g = {x}"))?;
                degenerate += 1;
                continue;
            };
            let tag = || format!("g=1e{e} α={a}");
            ensure(plan.windows_hold(), || format!("{}: certified windows", tag()))?;
            let kf = k as f64;
            ensure(k % 2 == 1, || format!("{}: k={k} even", tag()))?;
            ensure(x - 2.0 - EPS * x <= kf && kf <= x + EPS * x, || format!("{}: k={k} vs {x}", tag()))?;
            let pt = gf / x;
            let pf: f64 = p.to_string().parse().unwrap();
            ensure(pt + 1.0 - EPS * pt <= pf && pf <= pt + 2.0 + EPS * pt, || format!("{}: p={p} vs {pt}", tag()))?;
            let (pi, qi) = (BigInt::from(p.clone()), BigInt::from(2 * k));
            let chi = &pi + &qi - &pi * &qi;
            let limit: BigInt = BigInt::from(&g * 2u32) - 2;
            ensure(chi.magnitude() <= limit.magnitude(), || format!("{}: |χ| = {}", tag(), chi.magnitude()))?;
            valid += 1;
        }
    }
    Ok(format!("{valid} valid plans within windows, |χ| ≤ 2g−2; {degenerate} degenerate (¾α ln g < 1)"))
}

fn theorem_ratio() -> Outcome {
    let want = ("2313".to_string(), "4".to_string());
    let mut cases = 0;
    for g in [2u64, 10, 1000, 123_456_789].map(BigUint::from).into_iter().chain([pow10(40)]) {
        for (_, alpha) in alphas().into_iter().chain(["1/3", "7/5"].map(|s| (0.0, s.parse().unwrap()))) {
            let t = theorem_bounds(&g, &alpha, DEFAULT_PRECISION).map_err(err)?;
            let ratio = t.ratio.as_ref().map(|r| (r.numer().to_string(), r.denom().to_string()));
            ensure(ratio == Some(want.clone()), || format!("g={g} α={alpha}: {ratio:?}"))?;
            let scaled = t.lower.mul(&Interval::from_u64(2313, DEFAULT_PRECISION));
            let upper4 = t.upper.mul_u64(4);
            ensure(!scaled.certainly_lt(&upper4) && !upper4.certainly_lt(&scaled), || {
                format!("g={g} α={alpha}: enclosures disagree")
            })?;
            cases += 1;
        }
    }
    Ok(format!("upper/lower = 2313/4 exactly in {cases} cases"))
}

fn lower_chain() -> Outcome {
    let alpha: Alpha = "1".parse().unwrap();
    let gs: Vec<BigUint> = [10u64, 11, 12, 15, 20, 50, 100]
        .map(BigUint::from)
        .into_iter()
        .chain((3..=12).map(pow10))
        .chain([50, 100, 500, 1000].map(pow10))
        .collect();
    for g in &gs {
        let c = lower_bound_chain_check(g, &alpha, DEFAULT_PRECISION).map_err(err)?;
        ensure(c.hypothesis && c.step_i == Some(true), || format!("step (i) at g={g}"))?;
    }
    let run = || step_ii_threshold(&alpha, 1 << 16, THRESHOLD_RESOLUTION, DEFAULT_PRECISION).map_err(err);
    let (a, b) = (run()?, run()?);
    ensure(a.below == b.below && a.g == b.g, || "threshold differs across runs".into())?;
    let (Some(below), Some(g)) = (&a.below, &a.g) else {
        return Err("no step (ii) threshold below 2^65536".into());
    };
    let at = lower_bound_chain_check(g, &alpha, DEFAULT_PRECISION).map_err(err)?;
    let before = lower_bound_chain_check(below, &alpha, DEFAULT_PRECISION).map_err(err)?;
    ensure(at.step_ii == Some(true) && before.step_ii == Some(false), || "bracket is not a crossover".into())?;
    let ln = a.ln_g.as_ref().map_or("?".into(), |l| l.lo_string(10));
    Ok(format!(
        "step (i) at {} sampled g ∈ [10, 10^1000]; step (ii) threshold: ln g ≈ {ln} ({} bits), stable over 2 runs",
        gs.len(),
        g.bits()
    ))
}

fn growth() -> Outcome {
    let alpha: Alpha = "1".parse().unwrap();
    let exps = growth_sweep_exponents(Suite::Full);
    let mut margins = Vec::new();
    for &e in &exps {
        let g = pow10(e);
        let plan = plan_parameters(&g, &alpha, DEFAULT_PRECISION).map_err(err)?;
        margins.push((e, growth_check(&g, &alpha, &plan).map_err(err)?.margin));
    }
    ensure(exps[0] == 3 && margins[0].1.is_negative(), || "margin at g = 10^3 is not negative".into())?;
    for w in margins.windows(2) {
        ensure(w[0].1.certainly_lt(&w[1].1), || format!("margin falls from 10^{} to 10^{}", w[0].0, w[1].0))?;
    }
    let first_pos = margins.iter().find(|(_, m)| m.is_positive()).map(|(e, _)| *e);
    Ok(format!(
        "g = 10^3..10^{} by 10^100: increasing, {:.3} at 10^3 (negative as expected), first positive at {}",
        exps.last().unwrap(),
        margins[0].1.approx_f64(),
        first_pos.map_or("none".into(), |e| format!("10^{e}"))
    ))
}

fn determinism() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).map_err(err)?;
    let start = Instant::now();
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("verify-full-{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_fibrecurve"))
            .args(["verify", "--suite", "full", "--out"])
            .arg(&path)
            .output()
            .map_err(err)?;
        ensure(out.status.success(), || format!("run {i} exited {:?}", out.status.code()))?;
        reports.push((std::fs::read(&path).map_err(err)?, out.stdout));
    }
    let t = start.elapsed();
    ensure(reports[0] == reports[1], || "reports differ".into())?;
    ensure(t < Duration::from_secs(120), || format!("two runs took {t:?}"))?;
    Ok(format!("two full runs byte-identical ({} bytes), {:.1} s total", reports[0].0.len(), t.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("boundary-count oracle", boundary_count),
        ("surface examples", surface_examples),
        ("enumeration counts", enumeration_counts),
        ("curve realization", curve_realization),
        ("coarse crossing total", coarse_total),
        ("chord-diagram diagnostic", chord_diagrams),
        ("greedy pruning monotonicity", pruning),
        ("binomial constant", binomial_constant),
        ("planner windows", planner_windows),
        ("theorem ratio", theorem_ratio),
        ("lower-bound chain", lower_chain),
        ("growth diagnostic", growth),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{:.2} s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
