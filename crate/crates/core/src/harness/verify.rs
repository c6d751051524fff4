use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::matching;
use crate::morphisms::{
    automorphism_order_parity, enumerate_automorphisms_with, inner_automorphism, load_automorphism_cache,
    save_automorphism_cache, AutLimits, Automorphism, AutomorphismGroup, QuotientStructure,
};
use crate::structure::{self, EqualityReport};
use crate::sumset::{bound_value, BoundKind};

use super::driver::{check_equivariance, Inst, Layer, PairJob, SingleJob, Tally};
use super::space::{binom, subset_count, Space};
use super::{CheckKind, GroupDescriptor, Mode, SearchPlan, Status, Theorem, VerificationReport, Violation};

/// Largest number of pairs an enumerated plan may contain.
const PAIR_LIMIT: u128 = 10_000_000_000;

/// Runs verification plans against one group, enumerating its
/// automorphisms at most once.
pub struct Harness<'g> {
    g: &'g FiniteGroup,
    aut_cache: Option<PathBuf>,
    aut_limits: AutLimits,
    timing: bool,
    aut: OnceLock<Option<AutomorphismGroup>>,
}

/// The σ list of a twisted run and the layers built from it.
struct SigmaSetup {
    layers: Vec<Layer>,
    /// Automorphisms in scope, before pruning.
    total: u64,
    partial: bool,
}

impl<'g> Harness<'g> {
    pub fn new(g: &'g FiniteGroup) -> Self {
        Harness {
            g,
            aut_cache: None,
            aut_limits: AutLimits::default(),
            timing: false,
            aut: OnceLock::new(),
        }
    }

    /// Reads and writes automorphism groups under `dir`.
    pub fn with_aut_cache(mut self, dir: impl Into<PathBuf>) -> Self {
        self.aut_cache = Some(dir.into());
        self
    }

    pub fn with_aut_limits(mut self, limits: AutLimits) -> Self {
        self.aut_limits = limits;
        self
    }

    /// Records wall time in reports. Off by default so that reports are
    /// reproducible byte for byte.
    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    /// Supplies an already computed automorphism group.
    pub fn with_automorphisms(self, aut: AutomorphismGroup) -> Result<Self> {
        if aut.group_id() != self.g.id() {
            return Err(Error::GroupMismatch);
        }
        let _ = self.aut.set(Some(aut));
        Ok(self)
    }

    pub fn group(&self) -> &FiniteGroup {
        self.g
    }

    /// `Aut(G)`, or `None` if it is beyond the enumeration limits.
    pub fn automorphisms(&self) -> Result<Option<&AutomorphismGroup>> {
        if let Some(a) = self.aut.get() {
            return Ok(a.as_ref());
        }
        let cached = match &self.aut_cache {
            Some(dir) => load_automorphism_cache(dir, self.g)?,
            None => None,
        };
        let found = match cached {
            Some(a) => Some(a),
            None => match enumerate_automorphisms_with(self.g, &self.aut_limits) {
                Ok(a) => {
                    if let Some(dir) = &self.aut_cache {
                        save_automorphism_cache(dir, self.g, &a)?;
                    }
                    Some(a)
                }
                Err(Error::AutomorphismCapExceeded { .. }) => None,
                Err(e) => return Err(e),
            },
        };
        let _ = self.aut.set(found);
        Ok(self.aut.get().and_then(|a| a.as_ref()))
    }

    fn report(
        &self,
        theorem: Theorem,
        plan: &SearchPlan,
        t: Tally,
        predicted: u64,
        notes: Vec<String>,
        partial: bool,
        start: Instant,
    ) -> VerificationReport {
        let status = if t.violation_count > 0 {
            Status::Fail
        } else if partial {
            Status::Partial
        } else {
            Status::Pass
        };
        VerificationReport {
            theorem,
            group: GroupDescriptor::of(self.g),
            plan: plan.clone(),
            status,
            instances_checked: t.checked,
            covered_instances: t.covered,
            predicted_instances: Some(predicted),
            counters: t.counters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            violation_count: t.violation_count,
            violations: t.violations,
            notes,
            wall_time_secs: self.timing.then(|| start.elapsed().as_secs_f64()),
        }
    }

    fn sampled_pruning_note(plan: &SearchPlan, notes: &mut Vec<String>) {
        if plan.mode == Mode::Sampled && !plan.pruning.is_none() {
            notes.push("pruning does not apply to sampled plans".into());
        }
    }

    /// The single layer of an untwisted run, with the orbit-pruning group
    /// attached when requested and available.
    fn base_layer(&self, plan: &SearchPlan, restricted: bool, notes: &mut Vec<String>) -> Result<Layer> {
        let mut layer = if restricted {
            Layer::restricted(self.g.order())
        } else {
            Layer::plain()
        };
        if plan.mode != Mode::Sampled && plan.pruning.use_automorphism_orbits {
            match self.automorphisms()? {
                Some(aut) => layer.sym = Some(aut.iter().map(|s| s.perm().to_vec()).collect()),
                None => notes.push("automorphism group beyond enumeration limits; orbit pruning skipped".into()),
            }
        }
        Ok(layer)
    }

    fn sigma_layer(sigma: &Automorphism) -> Layer {
        Layer {
            sigma: None,
            sigma_perm: Some(sigma.perm().to_vec()),
            excl: Some((sigma.perm().to_vec(), sigma.inverse_perm().to_vec())),
            sym: None,
            mult: 1,
            delta: automorphism_order_parity(sigma).delta(),
        }
    }

    /// Layers over every automorphism (or every odd-order one). With orbit
    /// pruning, one layer per conjugacy class, pruned by the centralizer.
    fn sigma_setup(&self, plan: &SearchPlan, odd_only: bool, notes: &mut Vec<String>) -> Result<SigmaSetup> {
        if plan.mode != Mode::Sampled && plan.pruning.use_inversion_symmetry {
            return Err(Error::InvalidPlan(
                "inversion pruning is not available when σ ranges over automorphisms".into(),
            ));
        }
        let keep = |s: &Automorphism| !odd_only || s.order() % 2 == 1;
        let Some(aut) = self.automorphisms()? else {
            notes.push(format!(
                "automorphism group of order-{} group beyond enumeration limits; σ restricted to inner automorphisms{}",
                self.g.order(),
                if self.g.is_abelian() { " and negation" } else { "" }
            ));
            let mut list = vec![Automorphism::identity(self.g)];
            for a in 0..self.g.order() {
                let s = inner_automorphism(self.g, a)?;
                if !list.contains(&s) {
                    list.push(s);
                }
            }
            if self.g.is_abelian() {
                let neg = Automorphism::new(self.g, (0..self.g.order()).map(|x| self.g.neg(x)).collect())?;
                if !list.contains(&neg) {
                    list.push(neg);
                }
            }
            list.retain(|s| keep(s));
            let layers: Vec<Layer> = list.iter().enumerate().map(|(i, s)| Layer {
                sigma: Some(i),
                ..Self::sigma_layer(s)
            }).collect();
            return Ok(SigmaSetup {
                total: layers.len() as u64,
                layers,
                partial: true,
            });
        };
        let total = aut.iter().filter(|s| keep(s)).count() as u64;
        let mut layers = Vec::new();
        if plan.mode != Mode::Sampled && plan.pruning.use_automorphism_orbits {
            for (rep, size) in aut.conjugacy_classes() {
                let s = aut.get(rep);
                if !keep(s) {
                    continue;
                }
                let sym = aut.centralizer(rep).into_iter().map(|j| aut.get(j).perm().to_vec()).collect();
                layers.push(Layer {
                    sigma: Some(rep),
                    sym: Some(sym),
                    mult: size as u64,
                    ..Self::sigma_layer(s)
                });
            }
        } else {
            for (i, s) in aut.iter().enumerate().filter(|(_, s)| keep(s)) {
                layers.push(Layer {
                    sigma: Some(i),
                    ..Self::sigma_layer(s)
                });
            }
        }
        Ok(SigmaSetup {
            layers,
            total,
            partial: false,
        })
    }

    fn pair_spaces(&self, plan: &SearchPlan, size_limit: Option<usize>, layers: u64) -> Result<(Space, Space, u64)> {
        let n = self.g.order();
        let (ca, cb) = (plan.cap_a(n), plan.cap_b(n));
        if plan.mode == Mode::Sampled {
            return Ok((Space::caps_only(n, ca), Space::caps_only(n, cb), plan.samples));
        }
        let mut pairs: u128 = 0;
        for ka in 1..=ca {
            for kb in 1..=cb {
                if size_limit.is_none_or(|lim| ka + kb - 1 <= lim) {
                    pairs = pairs.saturating_add(binom(n, ka).saturating_mul(binom(n, kb)));
                }
            }
        }
        let predicted = pairs.saturating_mul(layers as u128);
        if predicted > PAIR_LIMIT {
            return Err(Error::InvalidPlan(format!(
                "{predicted} planned instances exceed the enumeration limit {PAIR_LIMIT}; cap the sizes or sample"
            )));
        }
        Ok((Space::new(n, ca)?, Space::new(n, cb)?, predicted as u64))
    }

    fn run_pairs<F>(
        &self,
        plan: &SearchPlan,
        layers: Vec<Layer>,
        layer_total: u64,
        sums: bool,
        size_limit: Option<usize>,
        check: F,
    ) -> Result<(Tally, u64)>
    where
        F: Fn(&Inst, &Layer, &mut Tally) + Sync,
    {
        plan.validate()?;
        let (a_space, b_space, predicted) = self.pair_spaces(plan, size_limit, layer_total)?;
        let job = PairJob {
            g: self.g,
            a_space: &a_space,
            b_space: &b_space,
            layers,
            inversion: plan.mode != Mode::Sampled && plan.pruning.use_inversion_symmetry,
            sums,
            size_limit,
        };
        if plan.mode == Mode::Sampled {
            let t = job.sample(plan.samples, plan.seed, |inst, t| check(inst, &job.layers[inst.layer], t));
            return Ok((t, predicted));
        }
        job.check_inversion()?;
        for layer in &job.layers {
            check_equivariance(self.g, layer, &a_space)?;
        }
        let t = job.run(|inst, t| check(inst, &job.layers[inst.layer], t));
        Ok((t, predicted))
    }

    fn run_singles<F>(
        &self,
        plan: &SearchPlan,
        layers: Vec<Layer>,
        layer_total: u64,
        size_cap: usize,
        check: F,
    ) -> Result<(Tally, u64)>
    where
        F: Fn(&Inst, &Layer, &mut Tally) + Sync,
    {
        plan.validate()?;
        let n = self.g.order();
        let cap = plan.cap_a(n).min(size_cap);
        let sampled = plan.mode == Mode::Sampled;
        if cap == 0 {
            return Ok((Tally::default(), 0));
        }
        let space = if sampled {
            Space::caps_only(n, cap)
        } else {
            Space::new(n, cap)?
        };
        let job = SingleJob {
            g: self.g,
            space: &space,
            layers,
            inversion: !sampled && plan.pruning.use_inversion_symmetry,
            sums: true,
        };
        if sampled {
            let t = job.sample(plan.samples, plan.seed, |inst, t| check(inst, &job.layers[inst.layer], t));
            return Ok((t, plan.samples));
        }
        for layer in &job.layers {
            check_equivariance(self.g, layer, &space)?;
        }
        let predicted = subset_count(n, cap).saturating_mul(layer_total as u128) as u64;
        let t = job.run(|inst, t| check(inst, &job.layers[inst.layer], t));
        Ok((t, predicted))
    }

    /// `|A+B| ≥ min{p(G), |A|+|B|−1}`.
    pub fn verify_cauchy_davenport(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        let p = self.g.least_prime_factor()?;
        let mut notes = Vec::new();
        Self::sampled_pruning_note(plan, &mut notes);
        let layer = self.base_layer(plan, false, &mut notes)?;
        let (t, predicted) = self.run_pairs(plan, vec![layer], 1, true, None, |inst, _, t| {
            let lhs = inst.sums.len() as i64;
            let rhs = bound_value(BoundKind::CauchyDavenport, p, inst.a.len(), inst.b.len(), 0);
            if lhs < rhs {
                t.violation(pair_violation(CheckKind::Sumset, inst, None, lhs, rhs));
            }
        })?;
        Ok(self.report(Theorem::Cd, plan, t, predicted, notes, false, start))
    }

    /// `|A∔B| ≥ min{p(G), |A|+|B|−2}` for `A ≠ B`, and the diagonal bound
    /// `min{p(G), 2|A|−3}` for `A = B`, in nilpotent groups.
    pub fn verify_theorem1(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        if !self.g.is_nilpotent() {
            return Err(Error::NotNilpotent { order: self.g.order() });
        }
        let p = self.g.least_prime_factor()?;
        let mut notes = Vec::new();
        Self::sampled_pruning_note(plan, &mut notes);
        let layer = self.base_layer(plan, true, &mut notes)?;
        let (t, predicted) = self.run_pairs(plan, vec![layer], 1, true, None, |inst, _, t| {
            let lhs = inst.sums.len() as i64;
            let (a, b) = (inst.a.len(), inst.b.len());
            let (kind, rhs) = if inst.a == inst.b {
                t.count("diagonal_checked");
                (CheckKind::Diagonal, bound_value(BoundKind::EhDiagonal, p, a, a, 0))
            } else {
                t.count("off_diagonal_checked");
                (CheckKind::Restricted, bound_value(BoundKind::AnrRestricted, p, a, b, 0))
            };
            if lhs < rhs {
                let b = (kind == CheckKind::Restricted).then_some(inst.b);
                t.violation(Violation {
                    b: b.map(|b| b.to_vec()),
                    ..pair_violation(kind, inst, None, lhs, rhs)
                });
            }
        })?;
        Ok(self.report(Theorem::Thm1, plan, t, predicted, notes, false, start))
    }

    /// Every `A` with `|A| < (p(G)+3)/2` and `|A∔A| = 2|A|−3` is
    /// commutative, and a progression when `|A| ≥ 5`.
    pub fn verify_theorem2(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = self.g;
        let p = g.least_prime_factor()?;
        let mut notes = Vec::new();
        Self::sampled_pruning_note(plan, &mut notes);
        let layer = self.base_layer(plan, true, &mut notes)?;
        let (t, predicted) = self.run_singles(plan, vec![layer], 1, diagonal_size_cap(p), |inst, _, t| {
            let n = inst.a.len() as i64;
            if inst.sums.len() as i64 != 2 * n - 3 {
                return;
            }
            t.count("equality_cases");
            let a = g.wrap(inst.a);
            let commutative = structure::is_commutative_subset(g, &a).unwrap_or(false);
            let progression = commutative && structure::find_ap_decomposition(g, &a).ok().flatten().is_some();
            let kind = if !commutative {
                Some(CheckKind::Commutative)
            } else if !progression && n >= 5 {
                Some(CheckKind::Progression)
            } else {
                if !progression && n >= 3 {
                    t.count("small_non_progression");
                }
                None
            };
            if let Some(kind) = kind {
                t.violation(Violation {
                    structure: structure::classify_equality_case(g, &a).ok(),
                    ..single_violation(kind, inst, None, 2 * n - 3, 2 * n - 3)
                });
            }
        })?;
        Ok(self.report(Theorem::Thm2, plan, t, predicted, notes, false, start))
    }

    /// For every odd-order σ and every `A` with `2|A|−3 < p(G)` and
    /// `|σ(A)+^σA| = 2|A|−3`, `A` is σ-commutative.
    pub fn verify_theorem3(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = self.g;
        let p = g.least_prime_factor()?;
        let mut notes = Vec::new();
        Self::sampled_pruning_note(plan, &mut notes);
        let setup = self.sigma_setup(plan, true, &mut notes)?;
        let (t, predicted) = self.run_singles(plan, setup.layers, setup.total, diagonal_size_cap(p), |inst, layer, t| {
            let n = inst.a.len() as i64;
            let rhs = 2 * n - 3;
            if inst.sums.len() as i64 != rhs {
                return;
            }
            t.count("equality_cases");
            let sigma = layer.sigma_perm.as_deref().expect("twisted layers carry σ");
            if !sigma_commutative(g, sigma, inst.a) {
                t.violation(single_violation(CheckKind::SigmaCommutative, inst, Some(sigma), rhs, rhs));
            }
        })?;
        Ok(self.report(Theorem::Thm3, plan, t, predicted, notes, setup.partial, start))
    }

    /// `|A+^σB| ≥ min{p(G)−δ, |A|+|B|−3}` with σ over all automorphisms.
    pub fn verify_balister_wheeler(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        let p = self.g.least_prime_factor()?;
        let mut notes = Vec::new();
        Self::sampled_pruning_note(plan, &mut notes);
        let setup = self.sigma_setup(plan, false, &mut notes)?;
        let (t, predicted) = self.run_pairs(plan, setup.layers, setup.total, true, None, |inst, layer, t| {
            if layer.delta == 1 {
                t.count("even_order_sigma");
            }
            let lhs = inst.sums.len() as i64;
            let rhs = bound_value(BoundKind::BalisterWheeler, p, inst.a.len(), inst.b.len(), layer.delta);
            if lhs < rhs {
                t.violation(pair_violation(CheckKind::Twisted, inst, layer.sigma_perm.as_deref(), lhs, rhs));
            }
        })?;
        Ok(self.report(Theorem::Bw, plan, t, predicted, notes, setup.partial, start))
    }

    /// Distinct representative sums for every planned `(A, B)` with
    /// `|A|+|B|−1 ≤ p(G)`, taking the least element of `A` as `a_1`.
    pub fn verify_hall(&self, plan: &SearchPlan) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = self.g;
        let p = g.least_prime_factor()?;
        let mut notes = Vec::new();
        if !plan.pruning.is_none() {
            notes.push("pruning is not applied to matching runs".into());
        }
        let unpruned = SearchPlan {
            pruning: Default::default(),
            ..plan.clone()
        };
        let (t, predicted) = self.run_pairs(&unpruned, vec![Layer::plain()], 1, false, Some(p), |inst, _, t| {
            let (a, b) = (inst.a.to_vec(), inst.b.to_vec());
            let ok = matches!(matching::hall_representatives(g, &a, &b), Ok(r) if matching::verify_sdr(g, &r));
            if ok {
                t.count("matchings_verified");
            } else {
                let rhs = (a.len() + b.len()) as i64 - 1;
                t.violation(pair_violation(CheckKind::Sdr, inst, None, 0, rhs));
            }
        })?;
        Ok(self.report(Theorem::Hall, plan, t, predicted, notes, false, start))
    }

    /// Every planned instance meeting `bound` with equality.
    pub fn extremal_scan(&self, plan: &SearchPlan, bound: BoundKind) -> Result<ExtremalScan> {
        let g = self.g;
        let p = g.least_prime_factor()?;
        let mut notes = Vec::new();
        let mut scan = ExtremalScan {
            group: GroupDescriptor::of(g),
            plan: plan.clone(),
            bound,
            instances_checked: 0,
            covered_instances: 0,
            instances: Vec::new(),
            notes: Vec::new(),
        };
        if p == 2 {
            plan.validate()?;
            scan.notes.push("p(G) = 2: the bounds are degenerate and no instances are listed".into());
            return Ok(scan);
        }
        Self::sampled_pruning_note(plan, &mut notes);
        let hit = |inst: &Inst, t: &mut Tally, rhs: i64| {
            if inst.sums.len() as i64 == rhs {
                t.hits.push((*inst, rhs));
            }
        };
        let (t, layers) = match bound {
            BoundKind::CauchyDavenport | BoundKind::AnrRestricted => {
                let restricted = bound == BoundKind::AnrRestricted;
                let layer = self.base_layer(plan, restricted, &mut notes)?;
                let (t, _) = self.run_pairs(plan, vec![layer], 1, true, None, |inst, _, t| {
                    if restricted && inst.a == inst.b {
                        return;
                    }
                    hit(inst, t, bound_value(bound, p, inst.a.len(), inst.b.len(), 0));
                })?;
                (t, None)
            }
            BoundKind::EhDiagonal => {
                let layer = self.base_layer(plan, true, &mut notes)?;
                let (t, _) = self.run_singles(plan, vec![layer], 1, diagonal_size_cap(p), |inst, _, t| {
                    hit(inst, t, bound_value(bound, p, inst.a.len(), inst.a.len(), 0));
                })?;
                (t, None)
            }
            BoundKind::BalisterWheeler => {
                let setup = self.sigma_setup(plan, false, &mut notes)?;
                let perms: Vec<Option<Vec<u8>>> = setup.layers.iter().map(|l| l.sigma_perm.clone()).collect();
                let (t, _) = self.run_pairs(plan, setup.layers, setup.total, true, None, |inst, layer, t| {
                    hit(inst, t, bound_value(bound, p, inst.a.len(), inst.b.len(), layer.delta));
                })?;
                (t, Some(perms))
            }
        };
        scan.instances_checked = t.checked;
        scan.covered_instances = t.covered;
        scan.instances = t
            .hits
            .into_iter()
            .map(|(inst, rhs)| {
                let diagonal = bound == BoundKind::EhDiagonal;
                ExtremalInstance {
                    a: inst.a.to_vec(),
                    b: (!diagonal).then(|| inst.b.to_vec()),
                    sigma: layers
                        .as_ref()
                        .and_then(|l| l[inst.layer].as_ref())
                        .map(|s| s.iter().map(|&x| x as usize).collect()),
                    lhs: rhs,
                    bound: rhs,
                    weight: inst.weight,
                    structure: diagonal
                        .then(|| structure::classify_equality_case(g, &g.wrap(inst.a)).ok())
                        .flatten(),
                }
            })
            .collect();
        scan.notes = notes;
        Ok(scan)
    }
}

/// Largest `k` with `2k − 3 < p`, equivalently `k < (p+3)/2`.
pub(crate) fn diagonal_size_cap(p: usize) -> usize {
    (p + 2) / 2
}

fn sigma_commutative(g: &FiniteGroup, sigma: &[u8], a: Bits) -> bool {
    let v = a.to_vec();
    v.iter().enumerate().all(|(i, &x)| {
        v[i + 1..]
            .iter()
            .all(|&y| g.op(sigma[x] as usize, y) == g.op(sigma[y] as usize, x))
    })
}

fn perm_vec(s: Option<&[u8]>) -> Option<Vec<usize>> {
    s.map(|s| s.iter().map(|&x| x as usize).collect())
}

fn pair_violation(check: CheckKind, inst: &Inst, sigma: Option<&[u8]>, lhs: i64, rhs: i64) -> Violation {
    Violation {
        check,
        a: inst.a.to_vec(),
        b: Some(inst.b.to_vec()),
        sigma: perm_vec(sigma),
        gamma: None,
        lhs,
        rhs,
        weight: inst.weight,
        structure: None,
    }
}

fn single_violation(check: CheckKind, inst: &Inst, sigma: Option<&[u8]>, lhs: i64, rhs: i64) -> Violation {
    Violation {
        b: None,
        ..pair_violation(check, inst, sigma, lhs, rhs)
    }
}

/// An instance meeting a bound with equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalInstance {
    pub a: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    pub lhs: i64,
    pub bound: i64,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<EqualityReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalScan {
    pub group: GroupDescriptor,
    pub plan: SearchPlan,
    pub bound: BoundKind,
    pub instances_checked: u64,
    pub covered_instances: u64,
    pub instances: Vec<ExtremalInstance>,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// The normal subgroup `H` used for induction in nilpotent groups: a
/// subgroup of index `p(G)` if `G` is abelian, the center otherwise.
pub fn theorem1_quotient(g: &FiniteGroup) -> Result<QuotientStructure> {
    if !g.is_nilpotent() {
        return Err(Error::NotNilpotent { order: g.order() });
    }
    let p = g.least_prime_factor()?;
    let h = if g.is_abelian() {
        let n = g.order();
        let mut h = g.closure((0..n).map(|x| g.multiple(x, p)).collect());
        for x in 0..n {
            if n / h.len() == p {
                break;
            }
            if !h.contains(x) {
                h = g.closure(h.with(x));
            }
        }
        g.wrap(h)
    } else {
        g.center()
    };
    g.quotient(&h)
}

pub fn verify_cauchy_davenport(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_cauchy_davenport(plan)
}

pub fn verify_theorem1(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_theorem1(plan)
}

pub fn verify_theorem2(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_theorem2(plan)
}

pub fn verify_theorem3(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_theorem3(plan)
}

pub fn verify_balister_wheeler(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_balister_wheeler(plan)
}

pub fn verify_hall(g: &FiniteGroup, plan: &SearchPlan) -> Result<VerificationReport> {
    Harness::new(g).verify_hall(plan)
}

pub fn extremal_scan(g: &FiniteGroup, plan: &SearchPlan, bound: BoundKind) -> Result<ExtremalScan> {
    Harness::new(g).extremal_scan(plan, bound)
}
