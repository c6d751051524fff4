//! Row-parallel enumeration with symmetry pruning, and seeded sampling.
//!
//! A row is one `A` under one σ layer. Rows are evaluated in parallel and
//! their tallies merged in row order, so results do not depend on the
//! number of threads. Sampling splits into fixed-size chunks, each with its
//! own ChaCha stream, for the same reason.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::sumset::kernel;

use super::space::{random_subset, Space, SAMPLE_CHUNK};
use super::{Violation, MAX_STORED_VIOLATIONS};

/// Rows handed to one parallel task.
const ROW_BATCH: usize = 16;

/// One σ (or none) together with the symmetry group used to prune under it.
pub(crate) struct Layer {
    /// Index of σ in the automorphism list, if any.
    pub sigma: Option<usize>,
    /// σ as an index table, for `σ(A)`.
    pub sigma_perm: Option<Vec<u8>>,
    /// Exclusion tables `(σ, σ⁻¹)` for the restricted kernels.
    pub excl: Option<(Vec<u8>, Vec<u8>)>,
    /// Pruning group, including the identity, commuting with σ.
    pub sym: Option<Vec<Vec<u8>>>,
    /// Instances each σ representative stands for (its class size).
    pub mult: u64,
    pub delta: i64,
}

impl Layer {
    pub fn plain() -> Self {
        Layer {
            sigma: None,
            sigma_perm: None,
            excl: None,
            sym: None,
            mult: 1,
            delta: 0,
        }
    }

    pub fn restricted(n: usize) -> Self {
        let id = crate::sumset::identity_table(n);
        Layer {
            excl: Some((id.clone(), id)),
            ..Layer::plain()
        }
    }

    fn excl(&self) -> Option<(&[u8], &[u8])> {
        self.excl.as_ref().map(|(f, i)| (f.as_slice(), i.as_slice()))
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Inst {
    pub a: Bits,
    pub b: Bits,
    pub sums: Bits,
    pub weight: u64,
    pub layer: usize,
}

#[derive(Default)]
pub(crate) struct Tally {
    pub checked: u64,
    pub covered: u64,
    pub counters: BTreeMap<&'static str, u64>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub hits: Vec<(Inst, i64)>,
}

impl Tally {
    pub fn count(&mut self, key: &'static str) {
        *self.counters.entry(key).or_insert(0) += 1;
    }

    pub fn violation(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.covered += other.covered;
        for (k, v) in other.counters {
            *self.counters.entry(k).or_insert(0) += v;
        }
        self.violation_count += other.violation_count;
        let room = MAX_STORED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.hits.extend(other.hits);
        self
    }
}

fn merge_all(tallies: Vec<Tally>) -> Tally {
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

/// `min_φ (φ(x), φ(y))` over the pruning group.
fn canon_pair(perms: &[Vec<u8>], x: Bits, y: Bits) -> (Bits, Bits) {
    perms
        .iter()
        .map(|p| (x.map(p), y.map(p)))
        .min()
        .expect("pruning group contains the identity")
}

fn canon(perms: &[Vec<u8>], x: Bits) -> Bits {
    perms.iter().map(|p| x.map(p)).min().expect("pruning group contains the identity")
}

/// Members of the pruning group fixing `a`, or `None` if `a` is not the
/// least element of its orbit.
fn stabilizer(perms: &[Vec<u8>], a: Bits) -> Option<Vec<&[u8]>> {
    let mut stab = Vec::new();
    for p in perms {
        match a.map(p).cmp(&a) {
            Ordering::Less => return None,
            Ordering::Equal => stab.push(p.as_slice()),
            Ordering::Greater => {}
        }
    }
    Some(stab)
}

/// Orbit weight of a canonical single set, with the inversion factor.
fn single_weight(g: &FiniteGroup, layer: &Layer, inversion: bool, a: Bits) -> Option<u64> {
    let mut w = layer.mult;
    if let Some(perms) = &layer.sym {
        let stab = stabilizer(perms, a)?;
        w *= (perms.len() / stab.len()) as u64;
    }
    if inversion {
        let na = a.map(g.inverse_table());
        let other = match &layer.sym {
            Some(perms) => canon(perms, na),
            None => na,
        };
        match a.cmp(&other) {
            Ordering::Greater => return None,
            Ordering::Less => w *= 2,
            Ordering::Equal => {}
        }
    }
    Some(w)
}

pub(crate) struct PairJob<'a> {
    pub g: &'a FiniteGroup,
    pub a_space: &'a Space,
    pub b_space: &'a Space,
    pub layers: Vec<Layer>,
    pub inversion: bool,
    pub sums: bool,
    /// Keep only pairs with `|A| + |B| − 1` at most this.
    pub size_limit: Option<usize>,
}

impl PairJob<'_> {
    pub fn rows(&self) -> usize {
        self.layers.len() * self.a_space.len()
    }

    pub fn check_inversion(&self) -> Result<()> {
        if self.inversion && self.a_space.cap() != self.b_space.cap() {
            return Err(Error::InvalidPlan(
                "inversion pruning needs equal size caps for A and B".into(),
            ));
        }
        if self.inversion && self.layers.iter().any(|l| l.sigma.is_some()) {
            return Err(Error::InvalidPlan(
                "inversion pruning is not available with an automorphism σ".into(),
            ));
        }
        Ok(())
    }

    /// All sums `A' + b` over `B`-masks at once: `A ⊕ B = (A ⊕ B') ∪ R[b]`
    /// where `b` is the lowest element of `B` and `B' = B ∖ {b}`.
    fn row_dp(&self, a: Bits, layer: &Layer) -> Vec<u64> {
        let n = self.g.order();
        let t = self.g.translations().expect("full spaces have small order");
        let am = a.low_word();
        let r: Vec<u64> = (0..n)
            .map(|y| {
                let rest = match layer.excl() {
                    Some((fwd, _)) => am & !(1u64 << fwd[y]),
                    None => am,
                };
                t.right(y, rest)
            })
            .collect();
        let mut dp = vec![0u64; 1 << n];
        for m in 1usize..1 << n {
            dp[m] = dp[m & (m - 1)] | r[m.trailing_zeros() as usize];
        }
        dp
    }

    pub fn run_row(&self, row: usize, visit: &mut dyn FnMut(&Inst)) {
        let li = row / self.a_space.len();
        let layer = &self.layers[li];
        let a = self.a_space.get(row % self.a_space.len());
        let mut w_a = layer.mult;
        let stab = match &layer.sym {
            Some(perms) => match stabilizer(perms, a) {
                Some(s) => Some(s),
                None => return,
            },
            None => None,
        };
        let dp = (self.sums && self.b_space.is_full()).then(|| self.row_dp(a, layer));
        let neg = self.g.inverse_table();
        let na = a.map(neg);
        if let (Some(perms), Some(_)) = (&layer.sym, &stab) {
            // the orbit weight is |P| / |Stab(A, B)|, filled in per B
            w_a *= perms.len() as u64;
        }
        for (j, &b) in self.b_space.subsets().iter().enumerate() {
            if let Some(lim) = self.size_limit {
                if a.len() + b.len() - 1 > lim {
                    continue;
                }
            }
            let mut w = w_a;
            if let Some(st) = &stab {
                let mut fix = 0u64;
                let mut least = true;
                for p in st {
                    match b.map(p).cmp(&b) {
                        Ordering::Less => {
                            least = false;
                            break;
                        }
                        Ordering::Equal => fix += 1,
                        Ordering::Greater => {}
                    }
                }
                if !least {
                    continue;
                }
                w /= fix;
            }
            if self.inversion {
                let nb = b.map(neg);
                let other = match &layer.sym {
                    Some(perms) => canon_pair(perms, nb, na),
                    None => (nb, na),
                };
                match (a, b).cmp(&other) {
                    Ordering::Greater => continue,
                    Ordering::Less => w *= 2,
                    Ordering::Equal => {}
                }
            }
            let sums = match &dp {
                Some(d) => Bits::from_mask(d[j + 1]),
                None if self.sums => kernel(self.g, a, b, layer.excl()),
                None => Bits::EMPTY,
            };
            visit(&Inst {
                a,
                b,
                sums,
                weight: w,
                layer: li,
            });
        }
    }

    pub fn run<F>(&self, check: F) -> Tally
    where
        F: Fn(&Inst, &mut Tally) + Sync,
    {
        let rows = self.rows();
        let batches: Vec<Tally> = (0..rows.div_ceil(ROW_BATCH))
            .into_par_iter()
            .map(|c| {
                let mut t = Tally::default();
                for row in c * ROW_BATCH..((c + 1) * ROW_BATCH).min(rows) {
                    self.run_row(row, &mut |inst| {
                        t.checked += 1;
                        t.covered += inst.weight;
                        check(inst, &mut t);
                    });
                }
                t
            })
            .collect();
        merge_all(batches)
    }

    /// Seeded draws: layer uniformly, then each size uniformly in its
    /// range, then a uniform subset of that size.
    pub fn sample<F>(&self, samples: u64, seed: u64, check: F) -> Tally
    where
        F: Fn(&Inst, &mut Tally) + Sync,
    {
        let n = self.g.order();
        let (ca, cb) = (self.a_space.cap(), self.b_space.cap());
        let chunks: Vec<Tally> = (0..samples.div_ceil(SAMPLE_CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let mut t = Tally::default();
                for _ in 0..SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK) {
                    let li = rng.gen_range(0..self.layers.len());
                    let layer = &self.layers[li];
                    let (ka, kb) = match self.size_limit {
                        Some(lim) => {
                            let ka = rng.gen_range(1..=ca.min(lim));
                            (ka, rng.gen_range(1..=cb.min(lim + 1 - ka)))
                        }
                        None => (rng.gen_range(1..=ca), rng.gen_range(1..=cb)),
                    };
                    let a = random_subset(&mut rng, n, ka);
                    let b = random_subset(&mut rng, n, kb);
                    let sums = if self.sums {
                        kernel(self.g, a, b, layer.excl())
                    } else {
                        Bits::EMPTY
                    };
                    let inst = Inst {
                        a,
                        b,
                        sums,
                        weight: 1,
                        layer: li,
                    };
                    t.checked += 1;
                    t.covered += 1;
                    check(&inst, &mut t);
                }
                t
            })
            .collect();
        merge_all(chunks)
    }
}

/// Single-set instances: `A` alone under each layer, with `σ(A) ⊕ A` (or
/// `A ⊕ A` without σ) as the sums.
pub(crate) struct SingleJob<'a> {
    pub g: &'a FiniteGroup,
    pub space: &'a Space,
    pub layers: Vec<Layer>,
    pub inversion: bool,
    pub sums: bool,
}

impl SingleJob<'_> {
    pub fn rows(&self) -> usize {
        self.layers.len() * self.space.len()
    }

    fn sums_of(&self, layer: &Layer, a: Bits) -> Bits {
        if !self.sums {
            return Bits::EMPTY;
        }
        let left = match &layer.sigma_perm {
            Some(s) => a.map(s),
            None => a,
        };
        kernel(self.g, left, a, layer.excl())
    }

    pub fn run_row(&self, row: usize, visit: &mut dyn FnMut(&Inst)) {
        let li = row / self.space.len();
        let layer = &self.layers[li];
        let a = self.space.get(row % self.space.len());
        if let Some(w) = single_weight(self.g, layer, self.inversion, a) {
            visit(&Inst {
                a,
                b: a,
                sums: self.sums_of(layer, a),
                weight: w,
                layer: li,
            });
        }
    }

    pub fn run<F>(&self, check: F) -> Tally
    where
        F: Fn(&Inst, &mut Tally) + Sync,
    {
        let rows = self.rows();
        let batch = 256;
        let batches: Vec<Tally> = (0..rows.div_ceil(batch))
            .into_par_iter()
            .map(|c| {
                let mut t = Tally::default();
                for row in c * batch..((c + 1) * batch).min(rows) {
                    self.run_row(row, &mut |inst| {
                        t.checked += 1;
                        t.covered += inst.weight;
                        check(inst, &mut t);
                    });
                }
                t
            })
            .collect();
        merge_all(batches)
    }

    pub fn sample<F>(&self, samples: u64, seed: u64, check: F) -> Tally
    where
        F: Fn(&Inst, &mut Tally) + Sync,
    {
        let n = self.g.order();
        let cap = self.space.cap();
        let chunks: Vec<Tally> = (0..samples.div_ceil(SAMPLE_CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let mut t = Tally::default();
                for _ in 0..SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK) {
                    let li = rng.gen_range(0..self.layers.len());
                    let k = rng.gen_range(1..=cap);
                    let a = random_subset(&mut rng, n, k);
                    let inst = Inst {
                        a,
                        b: a,
                        sums: self.sums_of(&self.layers[li], a),
                        weight: 1,
                        layer: li,
                    };
                    t.checked += 1;
                    t.covered += 1;
                    check(&inst, &mut t);
                }
                t
            })
            .collect();
        merge_all(chunks)
    }
}

fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
    q.iter().map(|&x| p[x as usize]).collect()
}

/// A generating subset of a permutation group, chosen greedily.
pub(crate) fn perm_generators(perms: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut gens: Vec<Vec<u8>> = Vec::new();
    let mut closure: HashSet<Vec<u8>> = HashSet::new();
    if let Some(first) = perms.first() {
        closure.insert((0..first.len() as u8).collect());
    }
    for p in perms {
        if closure.contains(p) {
            continue;
        }
        gens.push(p.clone());
        let mut frontier: Vec<Vec<u8>> = closure.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for s in &gens {
                let y = compose(s, &x);
                if closure.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Checks `φ(X) ⊕ φ(Y) = φ(X ⊕ Y)` for generators `φ` of the pruning group
/// on the first subsets of the space, where `⊕` is the layer's sumset.
/// Orbit pruning is only sound if this holds.
pub(crate) fn check_equivariance(g: &FiniteGroup, layer: &Layer, space: &Space) -> Result<()> {
    let Some(perms) = &layer.sym else {
        return Ok(());
    };
    let probe = &space.subsets()[..space.len().min(24)];
    for phi in perm_generators(perms) {
        for &x in probe {
            for &y in probe {
                let lhs = kernel(g, x.map(&phi), y.map(&phi), layer.excl());
                let rhs = kernel(g, x, y, layer.excl()).map(&phi);
                if lhs != rhs {
                    return Err(Error::InvalidPlan(
                        "pruning group does not act compatibly with the sumset".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}
