//! The γ-restricted sumset over a finite field and the coefficient that
//! makes its lower bound work.
//!
//! Field subsets are [`Bits`] over field element indices.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::{FiniteGroup, GroupLimits};
use crate::harness::space::{combinations, random_subset, SAMPLE_CHUNK};
use crate::harness::{
    CheckKind, GroupDescriptor, Mode, Pruning, SearchPlan, Status, Theorem, VerificationReport, Violation,
    MAX_STORED_VIOLATIONS,
};
use crate::sumset::kernel;

/// Largest total degree the expansion oracle accepts by default.
pub const EXPANSION_CAP: usize = 24;

/// `A +^γ B = {a + b : a ≠ γb}` in the field's additive group.
pub fn gamma_restricted_sumset(f: &FiniteField, a: &Bits, b: &Bits, gamma: usize) -> Bits {
    let q = f.order();
    let mut out = Bits::EMPTY;
    for x in a.iter().filter(|&x| x < q) {
        for y in b.iter().filter(|&y| y < q) {
            if x != f.mul(gamma, y) {
                out.insert(f.add(x, y));
            }
        }
    }
    out
}

/// `C(n, k) mod p` from Pascal's rule.
pub fn binomial_mod(n: usize, k: usize, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u32; k + 1];
    row[0] = 1 % p;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (row[j] + row[j - 1]) % p;
        }
    }
    row[k]
}

/// The coefficient of `x^{m−1} y^{n−1}` in `(x − γy)(x + y)^{m+n−3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientCertificate {
    pub p: u32,
    pub alpha: u32,
    pub m: usize,
    pub n: usize,
    pub gamma: usize,
    pub value: usize,
    pub nonzero: bool,
}

/// `C(m+n−3, m−2) − γ·C(m+n−3, n−2)` for any `m, n ≥ 2`.
pub fn coefficient_value(f: &FiniteField, m: usize, n: usize, gamma: usize) -> Result<usize> {
    if m < 2 || n < 2 {
        return Err(Error::CoefficientPrecondition(format!("need m, n ≥ 2, got {m}, {n}")));
    }
    if gamma >= f.order() {
        return Err(Error::ElementOutOfRange {
            element: gamma,
            order: f.order(),
        });
    }
    let p = f.characteristic();
    let top = m + n - 3;
    let left = f.from_int(binomial_mod(top, m - 2, p) as i64);
    let right = f.from_int(binomial_mod(top, n - 2, p) as i64);
    Ok(f.sub(left, f.mul(gamma, right)))
}

/// The coefficient with the degree condition `m + n − 2 ≤ p` enforced.
pub fn anr_coefficient(f: &FiniteField, m: usize, n: usize, gamma: usize) -> Result<CoefficientCertificate> {
    let p = f.characteristic() as usize;
    if m >= 2 && n >= 2 && m + n - 2 > p {
        return Err(Error::CoefficientPrecondition(format!(
            "m + n − 2 = {} exceeds p = {p}",
            m + n - 2
        )));
    }
    let value = coefficient_value(f, m, n, gamma)?;
    Ok(CoefficientCertificate {
        p: f.characteristic(),
        alpha: f.degree(),
        m,
        n,
        gamma,
        value,
        nonzero: value != 0,
    })
}

/// Dense bivariate polynomial, `c[i][j]` the coefficient of `x^i y^j`.
struct Poly2 {
    c: Vec<Vec<usize>>,
}

impl Poly2 {
    fn one(d: usize) -> Self {
        let mut c = vec![vec![0; d + 1]; d + 1];
        c[0][0] = 1;
        Poly2 { c }
    }

    /// Multiplies by `ux + vy + w`.
    fn mul_linear(&mut self, f: &FiniteField, u: usize, v: usize, w: usize) {
        let d = self.c.len() - 1;
        let mut out = vec![vec![0; d + 1]; d + 1];
        for i in 0..=d {
            for j in 0..=d - i {
                let mut acc = f.mul(w, self.c[i][j]);
                if i > 0 {
                    acc = f.add(acc, f.mul(u, self.c[i - 1][j]));
                }
                if j > 0 {
                    acc = f.add(acc, f.mul(v, self.c[i][j - 1]));
                }
                out[i][j] = acc;
            }
        }
        self.c = out;
    }
}

/// The coefficient of `x^{m−1} y^{n−1}` in
/// `(x − γy)(x + y)^{m+n−3−|S|} ∏_{c∈S} (x + y − c)`, by literal expansion.
pub fn expansion_oracle_coefficient(f: &FiniteField, m: usize, n: usize, gamma: usize, s: &Bits) -> Result<usize> {
    expansion_oracle_coefficient_with_cap(f, m, n, gamma, s, EXPANSION_CAP)
}

pub fn expansion_oracle_coefficient_with_cap(
    f: &FiniteField,
    m: usize,
    n: usize,
    gamma: usize,
    s: &Bits,
    cap: usize,
) -> Result<usize> {
    if m < 2 || n < 2 {
        return Err(Error::CoefficientPrecondition(format!("need m, n ≥ 2, got {m}, {n}")));
    }
    let degree = m + n - 2;
    if degree > cap {
        return Err(Error::ExpansionCap { degree, cap });
    }
    if s.len() > degree - 1 || s.iter().any(|c| c >= f.order()) || gamma >= f.order() {
        return Err(Error::CoefficientPrecondition(
            "S must be a field subset of size at most m + n − 3".into(),
        ));
    }
    let mut poly = Poly2::one(degree);
    poly.mul_linear(f, 1, f.neg(gamma), 0);
    for _ in 0..degree - 1 - s.len() {
        poly.mul_linear(f, 1, 1, 0);
    }
    for c in s.iter() {
        poly.mul_linear(f, 1, 1, f.neg(c));
    }
    Ok(poly.c[m - 1][n - 1])
}

/// Sampling fallback for [`verify_field_lemma_with`].
#[derive(Clone, Copy, Debug)]
pub struct FieldLemmaOptions {
    /// Enumerate when the instance count is at most this.
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for FieldLemmaOptions {
    fn default() -> Self {
        FieldLemmaOptions {
            exhaustive_limit: 5_000_000,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// Checks `|A +^γ B| ≥ min{p, |A|+|B|−2}` for `|A| = |B| ≤ size_cap` and
/// every `γ ∉ {0, 1}`.
pub fn verify_field_lemma(f: &FiniteField, size_cap: usize) -> Result<VerificationReport> {
    verify_field_lemma_with(f, size_cap, &FieldLemmaOptions::default())
}

struct FieldCtx {
    group: FiniteGroup,
    /// Multiplication by γ and by γ⁻¹, per γ index.
    scale: Vec<(Vec<u8>, Vec<u8>)>,
    p: usize,
}

impl FieldCtx {
    fn new(f: &FiniteField) -> Result<Self> {
        let q = f.order();
        let table = (0..q * q).map(|i| f.add(i / q, i % q)).collect();
        let group = FiniteGroup::from_table(f.name(), q, table, None, &GroupLimits::default())?;
        let scale = (0..q)
            .map(|gamma| {
                let fwd = (0..q).map(|y| f.mul(gamma, y) as u8).collect();
                let inv = match f.inv(gamma) {
                    Some(gi) => (0..q).map(|x| f.mul(gi, x) as u8).collect(),
                    None => Vec::new(),
                };
                (fwd, inv)
            })
            .collect();
        Ok(FieldCtx {
            group,
            scale,
            p: f.characteristic() as usize,
        })
    }

    fn sumset(&self, a: Bits, b: Bits, gamma: usize) -> Bits {
        let (fwd, inv) = &self.scale[gamma];
        kernel(&self.group, a, b, Some((fwd, inv)))
    }

    fn bound(&self, a: usize, b: usize) -> i64 {
        (self.p as i64).min(a as i64 + b as i64 - 2)
    }
}

#[derive(Default)]
struct FieldTally {
    checked: u64,
    violations: Vec<Violation>,
    violation_count: u64,
}

impl FieldTally {
    fn record(&mut self, ctx: &FieldCtx, a: Bits, b: Bits, gamma: usize) {
        self.checked += 1;
        let lhs = ctx.sumset(a, b, gamma).len() as i64;
        let rhs = ctx.bound(a.len(), b.len());
        if lhs < rhs {
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    check: CheckKind::FieldGamma,
                    a: a.to_vec(),
                    b: Some(b.to_vec()),
                    sigma: None,
                    gamma: Some(gamma),
                    lhs,
                    rhs,
                    weight: 1,
                    structure: None,
                });
            }
        }
    }

    fn merge(mut self, other: FieldTally) -> FieldTally {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        let room = MAX_STORED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self
    }
}

pub fn verify_field_lemma_with(
    f: &FiniteField,
    size_cap: usize,
    opts: &FieldLemmaOptions,
) -> Result<VerificationReport> {
    let ctx = FieldCtx::new(f)?;
    let q = f.order();
    let cap = size_cap.min(q);
    let gammas: Vec<usize> = (2..q).collect();
    let per_size: Vec<u128> = (0..=cap).map(|k| crate::harness::space::binom(q, k)).collect();
    let total: u128 = (1..=cap).map(|k| per_size[k] * per_size[k]).sum::<u128>() * gammas.len() as u128;
    let exhaustive = total <= opts.exhaustive_limit as u128;
    let mut notes = Vec::new();

    let tally = if gammas.is_empty() || cap == 0 {
        FieldTally::default()
    } else if exhaustive {
        let layers: Vec<Vec<Bits>> = (0..=cap).map(|k| combinations(q, k)).collect();
        let sizes = &per_size;
        let rows: Vec<(usize, usize, usize)> = gammas
            .iter()
            .flat_map(|&g| (1..=cap).flat_map(move |k| (0..sizes[k] as usize).map(move |i| (g, k, i))))
            .collect();
        let tally = rows
            .par_iter()
            .map(|&(gamma, k, i)| {
                let mut t = FieldTally::default();
                let a = layers[k][i];
                for &b in &layers[k] {
                    t.record(&ctx, a, b, gamma);
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(FieldTally::default(), FieldTally::merge);
        if let Some((margin, count)) = unequal_margin(&ctx, &layers, &gammas, opts.exhaustive_limit) {
            notes.push(format!(
                "unequal sizes (not asserted): minimum of |A+^γB| − min{{p, |A|+|B|−2}} is {margin} over {count} instances"
            ));
        }
        tally
    } else {
        let chunks = opts.samples.div_ceil(SAMPLE_CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(c);
                let mut t = FieldTally::default();
                let len = SAMPLE_CHUNK.min(opts.samples - c * SAMPLE_CHUNK);
                for _ in 0..len {
                    let gamma = gammas[rng.gen_range(0..gammas.len())];
                    let k = rng.gen_range(1..=cap);
                    let a = random_subset(&mut rng, q, k);
                    let b = random_subset(&mut rng, q, k);
                    t.record(&ctx, a, b, gamma);
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(FieldTally::default(), FieldTally::merge)
    };

    let predicted = if exhaustive { total as u64 } else { opts.samples };
    let plan = SearchPlan {
        group: Some(f.name()),
        mode: if exhaustive { Mode::Exhaustive } else { Mode::Sampled },
        max_a: Some(cap),
        max_b: Some(cap),
        samples: if exhaustive { 0 } else { opts.samples },
        seed: if exhaustive { 0 } else { opts.seed },
        pruning: Pruning::default(),
    };
    Ok(VerificationReport {
        theorem: Theorem::FieldLemma,
        group: GroupDescriptor {
            name: f.name(),
            order: q,
            table_hash: None,
        },
        plan,
        status: if tally.violation_count > 0 { Status::Fail } else { Status::Pass },
        instances_checked: tally.checked,
        covered_instances: tally.checked,
        predicted_instances: Some(predicted),
        counters: Default::default(),
        violation_count: tally.violation_count,
        violations: tally.violations,
        notes,
        wall_time_secs: None,
    })
}

/// Smallest `|A +^γ B| − min{p, |A|+|B|−2}` over unequal sizes, when the
/// enumeration fits under `limit`.
fn unequal_margin(ctx: &FieldCtx, layers: &[Vec<Bits>], gammas: &[usize], limit: u64) -> Option<(i64, u64)> {
    let cap = layers.len() - 1;
    let count: u64 = (1..=cap)
        .flat_map(|i| (1..=cap).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (layers[i].len() * layers[j].len()) as u64)
        .sum::<u64>()
        * gammas.len() as u64;
    if count == 0 || count > limit {
        return None;
    }
    let margin = gammas
        .par_iter()
        .map(|&gamma| {
            let mut best = i64::MAX;
            for i in 1..=cap {
                for j in (1..=cap).filter(|&j| j != i) {
                    for &a in &layers[i] {
                        for &b in &layers[j] {
                            let lhs = ctx.sumset(a, b, gamma).len() as i64;
                            best = best.min(lhs - ctx.bound(i, j));
                        }
                    }
                }
            }
            best
        })
        .min()
        .unwrap_or(i64::MAX);
    Some((margin, count))
}

/// Recomputes `(lhs, rhs)` for a field-lemma violation.
pub fn replay_field_violation(f: &FiniteField, v: &Violation) -> Result<(i64, i64)> {
    let gamma = v.gamma.ok_or_else(|| Error::Parse("violation has no γ".into()))?;
    let b = v.b.as_ref().ok_or_else(|| Error::Parse("violation has no B".into()))?;
    let a: Bits = v.a.iter().copied().collect();
    let b: Bits = b.iter().copied().collect();
    let lhs = gamma_restricted_sumset(f, &a, &b, gamma).len() as i64;
    let p = f.characteristic() as i64;
    Ok((lhs, p.min(a.len() as i64 + b.len() as i64 - 2)))
}
