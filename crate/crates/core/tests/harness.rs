use std::collections::BTreeMap;

use sumset_core::catalog;
use sumset_core::harness::{
    extremal_scan, instance_stream, replay_violation, theorem1_quotient, verify_balister_wheeler,
    verify_cauchy_davenport, verify_hall, verify_theorem1, verify_theorem2, verify_theorem3, CheckKind,
    ExtremalScan, Harness, Pruning, SearchPlan, Status, StreamKind, Violation,
};
use sumset_core::morphisms::enumerate_automorphisms;
use sumset_core::nullstellensatz::{gamma_restricted_sumset, replay_field_violation};
use sumset_core::{Bits, BoundKind, Error, FiniteField, FiniteGroup};

type Key = (Vec<usize>, Option<Vec<usize>>, Option<Vec<usize>>);

fn image(perm: &[usize], xs: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = xs.iter().map(|&x| perm[x]).collect();
    v.sort_unstable();
    v
}

/// Every configuration in the orbit of one scan entry under `Aut(G)` and,
/// when `inversion` is set, `(A, B) ↦ (−B, −A)`.
fn orbit(g: &FiniteGroup, key: &Key, inversion: bool) -> Vec<Key> {
    let aut = enumerate_automorphisms(g).unwrap();
    let neg: Vec<usize> = (0..g.order()).map(|x| g.neg(x)).collect();
    let mut out = Vec::new();
    for phi in aut.iter() {
        let p = phi.perm_vec();
        let pinv = phi.inverse().perm_vec();
        let a = image(&p, &key.0);
        let b = key.1.as_ref().map(|b| image(&p, b));
        // φσφ⁻¹ as an image list
        let s = key.2.as_ref().map(|s| (0..g.order()).map(|x| p[s[pinv[x]]]).collect::<Vec<_>>());
        if inversion {
            let na = image(&neg, b.as_ref().unwrap_or(&a));
            let nb = b.as_ref().map(|_| image(&neg, &a));
            out.push((na, nb, s.clone()));
        }
        out.push((a, b, s));
    }
    out.sort();
    out.dedup();
    out
}

fn keyed(scan: &ExtremalScan) -> BTreeMap<Key, u64> {
    scan.instances
        .iter()
        .map(|i| ((i.a.clone(), i.b.clone(), i.sigma.clone()), i.weight))
        .collect()
}

fn assert_pruning_sound(name: &str, bound: BoundKind, plan: SearchPlan, prune: &str) {
    let g = catalog::resolve(name).unwrap();
    let pruning = Pruning::parse(prune).unwrap();
    let full = extremal_scan(&g, &plan, bound).unwrap();
    let pruned = extremal_scan(&g, &plan.clone().with_pruning(pruning), bound).unwrap();
    assert_eq!(full.covered_instances, pruned.covered_instances, "{name} {bound:?}");
    assert!(pruned.instances_checked <= full.instances_checked);
    let expected = keyed(&full);
    assert!(expected.values().all(|&w| w == 1));
    let mut expanded = BTreeMap::new();
    for (key, weight) in keyed(&pruned) {
        let orbit = orbit(&g, &key, pruning.use_inversion_symmetry);
        assert_eq!(orbit.len() as u64, weight, "{name} {bound:?} {key:?}");
        for k in orbit {
            assert!(expanded.insert(k.clone(), 1).is_none(), "{name}: {k:?} reached twice");
        }
    }
    assert_eq!(expanded, expected, "{name} {bound:?} {prune}");
}

#[test]
fn pruned_extremal_scans_expand_to_unpruned() {
    for name in ["Z7", "Z9", "Z3xZ3", "Q8", "D4", "Z2xZ4"] {
        assert_pruning_sound(name, BoundKind::CauchyDavenport, SearchPlan::size_capped(3, 3), "both");
        assert_pruning_sound(name, BoundKind::AnrRestricted, SearchPlan::size_capped(3, 3), "both");
        assert_pruning_sound(name, BoundKind::AnrRestricted, SearchPlan::size_capped(3, 2), "auto");
        assert_pruning_sound(name, BoundKind::EhDiagonal, SearchPlan::exhaustive(), "both");
    }
}

#[test]
fn pruned_twisted_scans_expand_to_unpruned() {
    for name in ["Z7", "Z9", "S3", "Q8"] {
        assert_pruning_sound(name, BoundKind::BalisterWheeler, SearchPlan::size_capped(2, 2), "auto");
    }
}

#[test]
fn pruned_and_unpruned_theorem1_agree() {
    for name in ["Z5", "Z8", "Z9", "Z3xZ3", "Q8", "D4", "Z2xZ2xZ2"] {
        let g = catalog::resolve(name).unwrap();
        let base = SearchPlan::exhaustive();
        let full = verify_theorem1(&g, &base).unwrap();
        assert_eq!(full.status, Status::Pass);
        let n = (1u64 << g.order()) - 1;
        assert_eq!(full.predicted_instances, Some(n * n));
        assert_eq!(full.instances_checked, n * n);
        for prune in ["inversion", "auto", "both"] {
            let r = verify_theorem1(&g, &base.clone().with_pruning(Pruning::parse(prune).unwrap())).unwrap();
            assert_eq!(r.violations, full.violations, "{name} {prune}");
            assert_eq!(r.covered_instances, n * n, "{name} {prune}");
            assert_eq!(r.predicted_instances, full.predicted_instances);
            assert!(r.instances_checked < full.instances_checked, "{name} {prune}");
        }
    }
}

#[test]
fn stream_weights_cover_the_plan() {
    let g = catalog::resolve("Z5").unwrap();
    let plan = SearchPlan::exhaustive();
    let all: Vec<_> = instance_stream(&g, &plan, StreamKind::Pairs, None).unwrap().collect();
    assert_eq!(all.len(), 31 * 31);
    assert!(all.iter().all(|i| i.weight == 1));
    let pruned = plan.with_pruning(Pruning::parse("both").unwrap());
    let reps: Vec<_> = instance_stream(&g, &pruned, StreamKind::Pairs, None).unwrap().collect();
    assert!(reps.len() < all.len());
    assert_eq!(reps.iter().map(|i| i.weight).sum::<u64>(), 31 * 31);
    let singles: Vec<_> = instance_stream(&g, &SearchPlan::size_capped(2, 2), StreamKind::Singles, None)
        .unwrap()
        .collect();
    assert_eq!(singles.len(), 5 + 10);
}

#[test]
fn cauchy_davenport_counts() {
    let g = catalog::resolve("Z6").unwrap();
    let r = verify_cauchy_davenport(&g, &SearchPlan::exhaustive()).unwrap();
    assert_eq!((r.status, r.instances_checked), (Status::Pass, 63 * 63));
    let capped = verify_cauchy_davenport(&g, &SearchPlan::size_capped(2, 1)).unwrap();
    assert_eq!(capped.instances_checked, (6 + 15) * 6);
}

/// Instance counts for the twisted structure theorem: `|A| ≤ 4` in `Z7`
/// (`2|A|−3 < 7`) against the 3 odd-order automorphisms `x ↦ x, 2x, 4x`;
/// `|A| ≤ 2` in `Heis3` against the 81 elements of 3-power order in
/// `Aut(Heis3) ≅ Z3² ⋊ GL(2,3)`, the union of four Sylow 3-subgroups of
/// order 27 meeting in the translations.
#[test]
fn theorem3_instance_counts() {
    let z7 = catalog::resolve("Z7").unwrap();
    let r = verify_theorem3(&z7, &SearchPlan::exhaustive()).unwrap();
    assert_eq!((r.status, r.instances_checked), (Status::Pass, (7 + 21 + 35 + 35) * 3));
    let h = catalog::resolve("Heis3").unwrap();
    let r = verify_theorem3(&h, &SearchPlan::exhaustive()).unwrap();
    assert_eq!((r.status, r.instances_checked), (Status::Pass, (27 + 351) * 81));
}

#[test]
fn theorem2_counts_equality_cases() {
    // in Z7 the 2-sets and 3-sets with |A∔A| = 2|A|−3: all 21 pairs, and the
    // 3-sets {x, y, z} whose three pairwise sums are distinct
    let g = catalog::resolve("Z7").unwrap();
    let r = verify_theorem2(&g, &SearchPlan::size_capped(3, 3)).unwrap();
    let triples = (0..7usize)
        .flat_map(|x| (x + 1..7).flat_map(move |y| (y + 1..7).map(move |z| (x, y, z))))
        .filter(|&(x, y, z)| {
            let s = [(x + y) % 7, (x + z) % 7, (y + z) % 7];
            s[0] != s[1] && s[0] != s[2] && s[1] != s[2]
        })
        .count() as u64;
    assert_eq!(r.counters["equality_cases"], 21 + triples);
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn hall_runs_respect_the_hypothesis() {
    let g = catalog::resolve("Z5").unwrap();
    let r = verify_hall(&g, &SearchPlan::exhaustive()).unwrap();
    // pairs of nonempty subsets with |A| + |B| ≤ 6
    let c = [1u64, 5, 10, 10, 5, 1];
    let expected: u64 = (1..=5)
        .flat_map(|n| (1..=5).map(move |m| (n, m)))
        .filter(|(n, m)| n + m <= 6)
        .map(|(n, m)| c[n] * c[m])
        .sum();
    assert_eq!(r.instances_checked, expected);
    assert_eq!(r.counters["matchings_verified"], expected);
}

#[test]
fn theorem1_rejects_non_nilpotent_groups() {
    let g = catalog::resolve("F21").unwrap();
    assert!(matches!(
        verify_theorem1(&g, &SearchPlan::exhaustive()),
        Err(Error::NotNilpotent { order: 21 })
    ));
    assert!(matches!(theorem1_quotient(&g), Err(Error::NotNilpotent { .. })));
}

#[test]
fn theorem1_quotient_orders() {
    for (name, order) in [("Z9", 3), ("Z3xZ3", 3), ("Heis3", 9), ("Q8", 4), ("D4", 4), ("Z2xZ2xZ2", 2)] {
        let g = catalog::resolve(name).unwrap();
        let q = theorem1_quotient(&g).unwrap();
        assert_eq!(q.quotient().order(), order, "{name}");
    }
}

#[test]
fn sampled_reports_are_reproducible() {
    let g = catalog::resolve("Heis3").unwrap();
    let plan = SearchPlan::sampled(20_000, 7);
    let a = serde_json::to_string(&verify_balister_wheeler(&g, &plan).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_balister_wheeler(&g, &plan).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&verify_balister_wheeler(&g, &SearchPlan::sampled(20_000, 8)).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn invalid_plans_are_rejected() {
    let g = catalog::resolve("Z5").unwrap();
    let mut plan = SearchPlan::exhaustive();
    plan.max_a = Some(2);
    assert!(matches!(verify_cauchy_davenport(&g, &plan), Err(Error::InvalidPlan(_))));
    assert!(matches!(
        verify_cauchy_davenport(&g, &SearchPlan::sampled(0, 1)),
        Err(Error::InvalidPlan(_))
    ));
    let big = catalog::resolve("Z64").unwrap();
    assert!(verify_cauchy_davenport(&big, &SearchPlan::exhaustive()).is_err());
}

#[test]
fn replay_recomputes_from_payload() {
    let g = catalog::resolve("Z7").unwrap();
    let claim = Violation {
        check: CheckKind::Sumset,
        a: vec![0, 1],
        b: Some(vec![0, 1]),
        sigma: None,
        gamma: None,
        lhs: 2,
        rhs: 3,
        weight: 1,
        structure: None,
    };
    let r = replay_violation(&g, &claim).unwrap();
    assert_eq!((r.lhs, r.rhs, r.violated), (3, 3, false));

    let twisted = Violation {
        check: CheckKind::Twisted,
        b: Some(vec![1, 2, 3]),
        sigma: Some((0..7).map(|x| 2 * x % 7).collect()),
        ..claim.clone()
    };
    let r = replay_violation(&g, &twisted).unwrap();
    assert!(!r.violated && r.lhs >= r.rhs);

    let missing = Violation { b: None, ..claim };
    assert!(replay_violation(&g, &missing).is_err());
}

/// With `|A| ≠ |B|` the field bound can fail; such an instance replays as
/// a violation.
#[test]
fn field_replay_detects_unequal_size_failures() {
    let f = FiniteField::prime(5).unwrap();
    let mut found = None;
    'outer: for a in 1u64..32 {
        for b in 1u64..32 {
            for gamma in 2..5 {
                let (a, b) = (Bits::from_mask(a), Bits::from_mask(b));
                let lhs = gamma_restricted_sumset(&f, &a, &b, gamma).len() as i64;
                if lhs < 5.min(a.len() as i64 + b.len() as i64 - 2) {
                    found = Some((a, b, gamma, lhs));
                    break 'outer;
                }
            }
        }
    }
    let (a, b, gamma, lhs) = found.expect("some unequal-size instance falls short");
    assert_ne!(a.len(), b.len());
    let v = Violation {
        check: CheckKind::FieldGamma,
        a: a.to_vec(),
        b: Some(b.to_vec()),
        sigma: None,
        gamma: Some(gamma),
        lhs,
        rhs: 0,
        weight: 1,
        structure: None,
    };
    let (l, r) = replay_field_violation(&f, &v).unwrap();
    assert_eq!(l, lhs);
    assert!(l < r);
}

#[test]
fn automorphism_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let g = catalog::resolve("Heis3").unwrap();
    let first = Harness::new(&g).with_aut_cache(dir.path());
    assert_eq!(first.automorphisms().unwrap().unwrap().len(), 432);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = Harness::new(&g).with_aut_cache(dir.path());
    assert_eq!(second.automorphisms().unwrap().unwrap().len(), 432);
}

/// `A = B = F_p` with `γ = −1`: every kept sum `a + b` is nonzero, so
/// `|A +^γ B| ≤ p − 1 < min{p, 2p − 2}` for odd `p`.
#[test]
fn field_bound_fails_on_the_whole_field_with_gamma_minus_one() {
    let f = FiniteField::prime(3).unwrap();
    let r = sumset_core::nullstellensatz::verify_field_lemma(&f, 3).unwrap();
    assert_eq!((r.status, r.violation_count), (Status::Fail, 1));
    let v = &r.violations[0];
    assert_eq!((v.a.clone(), v.b.clone(), v.gamma), (vec![0, 1, 2], Some(vec![0, 1, 2]), Some(2)));
    assert_eq!((v.lhs, v.rhs), (2, 3));
    assert_eq!(replay_field_violation(&f, v).unwrap(), (2, 3));
}

/// Every shortfall has `2|A| − 2 > p`, `γ = −1` and misses the bound by
/// exactly one, so `min{p − 1, 2|A| − 2}` survives.
#[test]
fn field_bound_shortfalls_are_confined_to_gamma_minus_one() {
    for p in [5usize, 7] {
        let f = FiniteField::prime(p as u32).unwrap();
        let mut shortfalls = 0;
        for a in 1u64..1 << p {
            for b in 1u64..1 << p {
                let (a, b) = (Bits::from_mask(a), Bits::from_mask(b));
                if a.len() != b.len() {
                    continue;
                }
                let k = a.len() as i64;
                for gamma in 2..p {
                    let lhs = gamma_restricted_sumset(&f, &a, &b, gamma).len() as i64;
                    let rhs = (p as i64).min(2 * k - 2);
                    if lhs < rhs {
                        shortfalls += 1;
                        assert!(2 * k - 2 > p as i64 && gamma == p - 1 && lhs == rhs - 1);
                    }
                }
            }
        }
        assert!(shortfalls > 0);
        let r = sumset_core::nullstellensatz::verify_field_lemma(&f, p).unwrap();
        assert_eq!(r.violation_count, shortfalls);
    }
}

/// `{x, y}` meets the diagonal bound exactly when `x + y = y + x`. In
/// `Heis3` the 3 central elements commute with all 26 others and each of
/// the remaining 24 with 8, giving `(3·26 + 24·8)/2 = 135` pairs.
#[test]
fn heisenberg_diagonal_pairs_are_the_commuting_pairs() {
    let g = catalog::resolve("Heis3").unwrap();
    let scan = extremal_scan(&g, &SearchPlan::size_capped(2, 2), BoundKind::EhDiagonal).unwrap();
    let pairs: Vec<_> = scan.instances.iter().filter(|i| i.a.len() == 2).collect();
    assert_eq!(pairs.len(), 135);
    assert!(pairs.iter().all(|i| g.commute(i.a[0], i.a[1])));
    assert!(pairs.iter().all(|i| i.structure.as_ref().is_some_and(|s| s.commutative)));
}
