//! Sumset kernels and the lower-bound formulas they are checked against.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSubset};
use crate::morphisms::Automorphism;

/// `A + B`, with the pair `(a, b)` dropped whenever `a = σ(b)` if an
/// exclusion map is given. `excl`/`excl_inv` are σ and σ⁻¹ as index tables.
///
/// Iterates the smaller operand; for `a ∈ A` the only excluded partner is
/// `σ⁻¹(a)`, and for `b ∈ B` it is `σ(b)`, so each translate is taken of the
/// other operand with that one element cleared.
pub(crate) fn kernel(g: &FiniteGroup, a: Bits, b: Bits, excl: Option<(&[u8], &[u8])>) -> Bits {
    if a.is_empty() || b.is_empty() {
        return Bits::EMPTY;
    }
    let by_a = a.len() <= b.len();
    if let Some(t) = g.translations() {
        let (am, bm) = (a.low_word(), b.low_word());
        let mut out = 0u64;
        if by_a {
            for x in a.iter() {
                let mut rest = bm;
                if let Some((_, inv)) = excl {
                    rest &= !(1u64 << inv[x]);
                }
                out |= t.left(x, rest);
            }
        } else {
            for y in b.iter() {
                let mut rest = am;
                if let Some((fwd, _)) = excl {
                    rest &= !(1u64 << fwd[y]);
                }
                out |= t.right(y, rest);
            }
        }
        return Bits::from_mask(out);
    }
    let mut out = Bits::EMPTY;
    if by_a {
        for x in a.iter() {
            let skip = excl.map(|(_, inv)| inv[x] as usize);
            for y in b.iter() {
                if Some(y) != skip {
                    out.insert(g.op(x, y));
                }
            }
        }
    } else {
        for y in b.iter() {
            let skip = excl.map(|(fwd, _)| fwd[y] as usize);
            for x in a.iter() {
                if Some(x) != skip {
                    out.insert(g.op(x, y));
                }
            }
        }
    }
    out
}

/// Identity index table, used as σ = id for the restricted sumset.
pub(crate) fn identity_table(n: usize) -> Vec<u8> {
    (0..n).map(|x| x as u8).collect()
}

fn owned(g: &FiniteGroup, a: &GroupSubset, b: &GroupSubset) -> Result<()> {
    g.owns(a)?;
    g.owns(b)
}

/// `A + B = {a + b}`.
pub fn sumset(g: &FiniteGroup, a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    owned(g, a, b)?;
    Ok(g.wrap(kernel(g, a.bits(), b.bits(), None)))
}

/// `A ∔ B = {a + b : a ≠ b}`.
pub fn restricted_sumset(g: &FiniteGroup, a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    owned(g, a, b)?;
    let id = identity_table(g.order());
    Ok(g.wrap(kernel(g, a.bits(), b.bits(), Some((&id, &id)))))
}

/// `A +^σ B = {a + b : a ≠ σ(b)}`.
pub fn sigma_restricted_sumset(
    g: &FiniteGroup,
    a: &GroupSubset,
    b: &GroupSubset,
    sigma: &Automorphism,
) -> Result<GroupSubset> {
    owned(g, a, b)?;
    if sigma.group_id() != g.id() {
        return Err(Error::GroupMismatch);
    }
    Ok(g.wrap(kernel(
        g,
        a.bits(),
        b.bits(),
        Some((sigma.perm(), sigma.inverse_perm())),
    )))
}

/// `σ(A) +^σ A`, the set whose size the twisted structure theorem pins down.
pub fn theorem_form_sumset(g: &FiniteGroup, a: &GroupSubset, sigma: &Automorphism) -> Result<GroupSubset> {
    let sa = sigma.apply(a)?;
    sigma_restricted_sumset(g, &sa, a, sigma)
}

/// `-A = {-a : a ∈ A}`.
pub fn negate(g: &FiniteGroup, a: &GroupSubset) -> Result<GroupSubset> {
    g.owns(a)?;
    Ok(g.wrap(a.bits().map(g.inverse_table())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `min{p(G), |A|+|B|−1}` for `|A+B|`.
    CauchyDavenport,
    /// `min{p(G), |A|+|B|−2}` for `|A∔B|`, `A ≠ B`.
    AnrRestricted,
    /// `min{p(G), 2|A|−3}` for `|A∔A|`.
    EhDiagonal,
    /// `min{p(G)−δ, |A|+|B|−3}` for `|A+^σB|`.
    BalisterWheeler,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::CauchyDavenport => "cauchy_davenport",
            BoundKind::AnrRestricted => "anr_restricted",
            BoundKind::EhDiagonal => "eh_diagonal",
            BoundKind::BalisterWheeler => "balister_wheeler",
        }
    }

    pub fn parse(s: &str) -> Option<BoundKind> {
        Some(match s.replace('-', "_").as_str() {
            "cauchy_davenport" | "cd" => BoundKind::CauchyDavenport,
            "anr_restricted" | "anr" => BoundKind::AnrRestricted,
            "eh_diagonal" | "eh" => BoundKind::EhDiagonal,
            "balister_wheeler" | "bw" => BoundKind::BalisterWheeler,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub kind: BoundKind,
    pub value: i64,
}

/// Bound value from the sizes alone. `delta` is only read for
/// [`BoundKind::BalisterWheeler`]. The result may be negative.
pub fn bound_value(kind: BoundKind, p: usize, size_a: usize, size_b: usize, delta: i64) -> i64 {
    let p = p as i64;
    let (a, b) = (size_a as i64, size_b as i64);
    match kind {
        BoundKind::CauchyDavenport => p.min(a + b - 1),
        BoundKind::AnrRestricted => p.min(a + b - 2),
        BoundKind::EhDiagonal => p.min(2 * a - 3),
        BoundKind::BalisterWheeler => (p - delta).min(a + b - 3),
    }
}

/// Evaluates a bound formula for `(A, B)`; no sumset is computed.
/// The diagonal bound reads only `A`.
pub fn evaluate_bound(
    kind: BoundKind,
    g: &FiniteGroup,
    a: &GroupSubset,
    b: &GroupSubset,
    sigma: Option<&Automorphism>,
) -> Result<BoundSpec> {
    owned(g, a, b)?;
    let p = g.least_prime_factor()?;
    let delta = match kind {
        BoundKind::BalisterWheeler => {
            let s = sigma.ok_or(Error::MissingAutomorphism)?;
            crate::morphisms::automorphism_order_parity(s).delta()
        }
        _ => 0,
    };
    Ok(BoundSpec {
        kind,
        value: bound_value(kind, p, a.len(), b.len(), delta),
    })
}
