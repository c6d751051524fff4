//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumset_core::catalog;
use sumset_core::harness::{
    theorem1_quotient, GroupDescriptor, Harness, Pruning, SearchPlan, Status, VerificationReport,
};
use sumset_core::nullstellensatz::{coefficient_value, expansion_oracle_coefficient, verify_field_lemma};
use sumset_core::reports::{ReportDocument, ReportResult};
use sumset_core::{Bits, FiniteField, FiniteGroup, Result};

struct Outcome {
    ok: bool,
    detail: String,
}

fn group(name: &str) -> Result<FiniteGroup> {
    catalog::resolve(name)
}

/// Checks every report and returns the number of instances covered.
fn tally(reports: &[VerificationReport], problems: &mut Vec<String>) -> u64 {
    for r in reports {
        if r.status != Status::Pass {
            let mut msg = format!(
                "{} on {}: {:?}, {} violations",
                r.theorem.id(),
                r.group.name,
                r.status,
                r.violation_count
            );
            if let Some(v) = r.violations.first() {
                msg += &format!(
                    ", e.g. A={:?} B={:?} γ={:?} σ={:?}: {} < {}",
                    v.a, v.b, v.gamma, v.sigma, v.lhs, v.rhs
                );
            }
            problems.push(msg);
        }
    }
    reports.iter().map(|r| r.covered_instances).sum()
}

fn outcome(problems: Vec<String>, elapsed: Duration, limit: Option<Duration>, summary: String) -> Outcome {
    let mut problems = problems;
    if let Some(limit) = limit {
        if elapsed > limit {
            problems.push(format!("took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
        }
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!("{summary}; {:.1} s", elapsed.as_secs_f64())
    } else {
        problems.join("; ")
    };
    Outcome { ok, detail }
}

/// Cauchy-Davenport over all pairs in every catalog group of order at most 12.
fn criterion1() -> Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    let groups = catalog::standard_groups(12)?;
    for g in &groups {
        reports.push(Harness::new(g).verify_cauchy_davenport(&SearchPlan::exhaustive())?);
    }
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    Ok(outcome(
        problems,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        format!("{} groups, {n} pairs, 0 violations", groups.len()),
    ))
}

const THM1_GROUPS: [&str; 16] = [
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z2xZ4", "Z3xZ3", "Z2^3", "Q8", "D4",
];

/// Restricted and diagonal bounds in nilpotent groups.
fn criterion2() -> Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for name in THM1_GROUPS {
        let g = group(name)?;
        reports.push(Harness::new(&g).verify_theorem1(&SearchPlan::exhaustive())?);
    }
    let h = group("Heis3")?;
    let harness = Harness::new(&h);
    reports.push(harness.verify_theorem1(&SearchPlan::size_capped(4, 4))?);
    reports.push(harness.verify_theorem1(&SearchPlan::sampled(1_000_000, 1))?);
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    Ok(outcome(
        problems,
        start.elapsed(),
        Some(Duration::from_secs(600)),
        format!("{} groups + Heis3 capped and sampled, {n} instances", THM1_GROUPS.len()),
    ))
}

/// Diagonal equality cases are commutative, and progressions from size 5.
fn criterion3() -> Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for name in ["Heis3", "Heis5", "Z25", "Z5^2", "Z49", "Z7^2"] {
        let g = group(name)?;
        reports.push(Harness::new(&g).verify_theorem2(&SearchPlan::exhaustive())?);
    }
    for name in ["Z11", "Z13"] {
        let g = group(name)?;
        reports.push(Harness::new(&g).verify_theorem2(&SearchPlan::size_capped(7, 7))?);
    }
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    let cases: u64 = reports.iter().map(|r| r.counters.get("equality_cases").copied().unwrap_or(0)).sum();
    if cases == 0 {
        problems.push("no equality cases were reached".into());
    }
    Ok(outcome(
        problems,
        start.elapsed(),
        Some(Duration::from_secs(600)),
        format!("{n} sets, {cases} equality cases"),
    ))
}

/// σ-commutativity of twisted equality cases for odd-order σ.
fn criterion4() -> Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for name in ["Z7", "Z9", "Z3^2", "Z5^2", "F21", "Heis3"] {
        let g = group(name)?;
        reports.push(Harness::new(&g).verify_theorem3(&SearchPlan::exhaustive())?);
    }
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    let cases: u64 = reports.iter().map(|r| r.counters.get("equality_cases").copied().unwrap_or(0)).sum();
    Ok(outcome(
        problems,
        start.elapsed(),
        Some(Duration::from_secs(900)),
        format!("{n} (σ, A) instances, {cases} equality cases"),
    ))
}

/// The twisted bound, sampled across the catalog.
fn criterion5() -> Result<Outcome> {
    let start = Instant::now();
    let mut groups = catalog::standard_groups(27)?;
    for name in ["F55", "Heis5", "Z128"] {
        groups.push(group(name)?);
    }
    let mut reports = Vec::new();
    for g in &groups {
        reports.push(Harness::new(g).verify_balister_wheeler(&SearchPlan::sampled(100_000, 5))?);
    }
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    let even: u64 = reports.iter().map(|r| r.counters.get("even_order_sigma").copied().unwrap_or(0)).sum();
    if even == 0 {
        problems.push("no even-order σ was sampled".into());
    }
    Ok(outcome(
        problems,
        start.elapsed(),
        None,
        format!("{} groups, {n} samples, {even} with even-order σ", groups.len()),
    ))
}

/// Distinct representative sums in prime cyclic groups and in the
/// quotients used for induction.
fn criterion6() -> Result<Outcome> {
    let start = Instant::now();
    let mut groups = Vec::new();
    for name in ["Z3", "Z5", "Z7", "Z11"] {
        groups.push(group(name)?);
    }
    for name in THM1_GROUPS.iter().chain(&["Heis3"]) {
        groups.push(theorem1_quotient(&group(name)?)?.quotient().clone());
    }
    let mut reports = Vec::new();
    for g in &groups {
        reports.push(Harness::new(g).verify_hall(&SearchPlan::exhaustive())?);
    }
    let mut problems = Vec::new();
    let n = tally(&reports, &mut problems);
    let built: u64 = reports.iter().map(|r| r.counters.get("matchings_verified").copied().unwrap_or(0)).sum();
    if built != n {
        problems.push(format!("{built} of {n} matchings verified"));
    }
    Ok(outcome(
        problems,
        start.elapsed(),
        None,
        format!("{} groups, {built}/{n} matchings verified", groups.len()),
    ))
}

/// Closed-form coefficient against literal expansion, and the field bound.
fn criterion7() -> Result<Outcome> {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut compared = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3u32, 5, 7, 11, 13] {
        let f = FiniteField::prime(p)?;
        let q = f.order();
        for m in 2..=6 {
            for n in 2..=6 {
                // the coefficient must not depend on which S is used
                let mut sets = Vec::new();
                for k in 0..=(m + n - 3).min(q) {
                    sets.push((0..k).collect::<Bits>());
                    sets.push(sample(&mut rng, q, k).into_iter().collect::<Bits>());
                }
                for gamma in 0..q {
                    let closed = coefficient_value(&f, m, n, gamma)?;
                    for s in &sets {
                        compared += 1;
                        let oracle = expansion_oracle_coefficient(&f, m, n, gamma, s)?;
                        if oracle != closed {
                            problems.push(format!("p={p} m={m} n={n} γ={gamma} S={:?}: {closed} vs {oracle}", s.to_vec()));
                        }
                    }
                }
            }
        }
    }
    let mut reports = Vec::new();
    for p in [3, 5, 7] {
        reports.push(verify_field_lemma(&FiniteField::prime(p)?, 3)?);
    }
    let n = tally(&reports, &mut problems);
    problems.truncate(10);
    Ok(outcome(
        problems,
        start.elapsed(),
        None,
        format!("{compared} oracle comparisons, {n} field instances"),
    ))
}

/// Pruned and unpruned runs agree on violations and account for the same
/// instances.
fn criterion8() -> Result<Outcome> {
    let start = Instant::now();
    let mut problems = Vec::new();
    let groups: Vec<FiniteGroup> = catalog::standard_groups(9)?
        .into_iter()
        .filter(|g| g.is_nilpotent())
        .collect();
    let mut saved = 0u64;
    for g in &groups {
        let h = Harness::new(g);
        let plan = SearchPlan::exhaustive();
        let full = h.verify_theorem1(&plan)?;
        for prune in ["inversion", "auto", "both"] {
            let pruned = h.verify_theorem1(&plan.clone().with_pruning(Pruning::parse(prune).expect("known")))?;
            let name = g.name();
            if pruned.violations != full.violations || pruned.violation_count != full.violation_count {
                problems.push(format!("{name} {prune}: violation sets differ"));
            }
            if full.violation_count != 0 {
                problems.push(format!("{name}: {} violations", full.violation_count));
            }
            for r in [&full, &pruned] {
                if Some(r.covered_instances) != r.predicted_instances {
                    problems.push(format!(
                        "{name} {prune}: covered {} vs predicted {:?}",
                        r.covered_instances, r.predicted_instances
                    ));
                }
            }
            if prune == "both" {
                saved += full.instances_checked - pruned.instances_checked;
            }
        }
    }
    Ok(outcome(
        problems,
        start.elapsed(),
        None,
        format!("{} groups, {saved} evaluations saved by full pruning", groups.len()),
    ))
}

fn sampled_document(g: &FiniteGroup, plan: &SearchPlan) -> Result<String> {
    let h = Harness::new(g);
    let mut doc = ReportDocument::new(GroupDescriptor::of(g), Some(plan.clone()));
    doc.push(ReportResult::Verification(h.verify_theorem1(plan)?));
    doc.push(ReportResult::Verification(h.verify_balister_wheeler(plan)?));
    doc.push(ReportResult::Verification(h.verify_cauchy_davenport(plan)?));
    doc.to_json()
}

/// Identical sampled plans give byte-identical reports.
fn criterion9() -> Result<Outcome> {
    let start = Instant::now();
    let mut problems = Vec::new();
    for name in ["Heis3", "Z12", "Q8"] {
        let g = group(name)?;
        let plan = SearchPlan::sampled(200_000, 2024);
        if sampled_document(&g, &plan)? != sampled_document(&g, &plan)? {
            problems.push(format!("{name}: reports differ"));
        }
    }
    Ok(outcome(problems, start.elapsed(), None, "3 groups, 3 sampled theorems each".into()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("cauchy-davenport exhaustive, |G| <= 12", criterion1),
        ("restricted and diagonal bounds in nilpotent groups", criterion2),
        ("diagonal equality cases: commutative, progressions from size 5", criterion3),
        ("twisted equality cases are sigma-commutative", criterion4),
        ("twisted bound sampled across the catalog", criterion5),
        ("distinct representative sums", criterion6),
        ("coefficient formula and field bound", criterion7),
        ("pruning soundness", criterion8),
        ("determinism of sampled reports", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| Outcome {
            ok: false,
            detail: format!("error: {e}"),
        });
        failed += usize::from(!o.ok);
        println!("{} criterion {}: {name} ({})", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
