//! Enumeration and sampling of subset configurations, checked against the
//! bounds and structure theorems.

mod driver;
pub mod plan;
pub mod space;
mod stream;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::matching;
use crate::morphisms::Automorphism;
use crate::structure::{self, EqualityReport};
use crate::sumset::{self, BoundKind};

pub use plan::{default_plans, Mode, Pruning, SearchPlan};
pub use stream::{instance_stream, Instance, StreamKind};
pub use verify::{
    extremal_scan, theorem1_quotient, verify_balister_wheeler, verify_cauchy_davenport, verify_hall,
    verify_theorem1, verify_theorem2, verify_theorem3, ExtremalInstance, ExtremalScan, Harness,
};

/// Violations stored per report; the total is always counted.
pub const MAX_STORED_VIOLATIONS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Cd,
    Thm1,
    Thm2,
    Thm3,
    Bw,
    FieldLemma,
    Hall,
    Extremal,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Theorem::Cd => "cd",
            Theorem::Thm1 => "thm1",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
            Theorem::Bw => "bw",
            Theorem::FieldLemma => "field-lemma",
            Theorem::Hall => "hall",
            Theorem::Extremal => "extremal",
        }
    }

    pub fn parse(s: &str) -> Option<Theorem> {
        Some(match s {
            "cd" => Theorem::Cd,
            "thm1" => Theorem::Thm1,
            "thm2" => Theorem::Thm2,
            "thm3" => Theorem::Thm3,
            "bw" => Theorem::Bw,
            "field-lemma" => Theorem::FieldLemma,
            "hall" => Theorem::Hall,
            "extremal" => Theorem::Extremal,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// No violation, but part of the planned space was not covered.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_hash: Option<String>,
}

impl GroupDescriptor {
    pub fn of(g: &FiniteGroup) -> Self {
        GroupDescriptor {
            name: g.name().to_string(),
            order: g.order(),
            table_hash: Some(g.table_hash()),
        }
    }
}

/// What a violation's `lhs` and `rhs` measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|A+B|` against `min{p, |A|+|B|−1}`.
    Sumset,
    /// `|A∔B|` against `min{p, |A|+|B|−2}`, `A ≠ B`.
    Restricted,
    /// `|A∔A|` against `min{p, 2|A|−3}`.
    Diagonal,
    /// `|A+^σB|` against `min{p−δ, |A|+|B|−3}`.
    Twisted,
    /// `|A∔A| = 2|A|−3` under the size hypothesis, but `A` is not commutative.
    Commutative,
    /// As above with `|A| ≥ 5`, commutative, but not a progression.
    Progression,
    /// `|σ(A)+^σA| = 2|A|−3` with `2|A|−3 < p`, but `A` is not σ-commutative.
    SigmaCommutative,
    /// No distinct representative sums found; `lhs` counts distinct sums
    /// produced, `rhs` is `|A|+|B|−1`.
    Sdr,
    /// `|A+^γB|` over a field against `min{p, |A|+|B|−2}`.
    FieldGamma,
}

/// A failed check, with enough payload to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: CheckKind,
    pub a: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<usize>>,
    /// σ as its image list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    pub lhs: i64,
    pub rhs: i64,
    /// Number of instances this representative stands for under pruning.
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<EqualityReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub group: GroupDescriptor,
    pub plan: SearchPlan,
    pub status: Status,
    /// Instances actually evaluated.
    pub instances_checked: u64,
    /// Instances accounted for, counting each pruned representative with
    /// its orbit weight.
    pub covered_instances: u64,
    /// Combinatorial count of the planned instances.
    pub predicted_instances: Option<u64>,
    #[serde(default)]
    pub counters: BTreeMap<String, u64>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Outcome of re-evaluating a violation from its payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Replay {
    pub lhs: i64,
    pub rhs: i64,
    pub violated: bool,
}

fn payload_subset(g: &FiniteGroup, xs: &[usize]) -> Result<Bits> {
    Ok(g.subset(xs)?.bits())
}

/// Recomputes a group violation from its payload alone.
pub fn replay_violation(g: &FiniteGroup, v: &Violation) -> Result<Replay> {
    let p = g.least_prime_factor()? as i64;
    let a = g.subset(&v.a)?;
    let n = a.len() as i64;
    let need_b = || -> Result<crate::group::GroupSubset> {
        let b = v.b.as_ref().ok_or_else(|| Error::Parse("violation has no B".into()))?;
        g.subset(b)
    };
    let need_sigma = || -> Result<Automorphism> {
        let s = v.sigma.as_ref().ok_or_else(|| Error::Parse("violation has no σ".into()))?;
        Automorphism::new(g, s.clone())
    };
    let bounded = |lhs: i64, rhs: i64| Replay {
        lhs,
        rhs,
        violated: lhs < rhs,
    };
    Ok(match v.check {
        CheckKind::Sumset => {
            let b = need_b()?;
            let lhs = sumset::sumset(g, &a, &b)?.len() as i64;
            bounded(lhs, sumset::bound_value(BoundKind::CauchyDavenport, p as usize, a.len(), b.len(), 0))
        }
        CheckKind::Restricted => {
            let b = need_b()?;
            let lhs = sumset::restricted_sumset(g, &a, &b)?.len() as i64;
            let r = bounded(lhs, sumset::bound_value(BoundKind::AnrRestricted, p as usize, a.len(), b.len(), 0));
            Replay {
                violated: r.violated && a != b,
                ..r
            }
        }
        CheckKind::Diagonal => {
            let lhs = sumset::restricted_sumset(g, &a, &a)?.len() as i64;
            bounded(lhs, sumset::bound_value(BoundKind::EhDiagonal, p as usize, a.len(), a.len(), 0))
        }
        CheckKind::Twisted => {
            let b = need_b()?;
            let s = need_sigma()?;
            let lhs = sumset::sigma_restricted_sumset(g, &a, &b, &s)?.len() as i64;
            let delta = crate::morphisms::automorphism_order_parity(&s).delta();
            bounded(
                lhs,
                sumset::bound_value(BoundKind::BalisterWheeler, p as usize, a.len(), b.len(), delta),
            )
        }
        CheckKind::Commutative | CheckKind::Progression => {
            let r = structure::classify_equality_case(g, &a)?;
            let violated = matches!(
                (v.check, r.verdict),
                (
                    CheckKind::Commutative,
                    structure::Verdict::Counterexample {
                        violated: structure::Conclusion::Commutative
                    }
                ) | (
                    CheckKind::Progression,
                    structure::Verdict::Counterexample {
                        violated: structure::Conclusion::ArithmeticProgression
                    }
                )
            );
            Replay {
                lhs: r.restricted_size as i64,
                rhs: 2 * n - 3,
                violated,
            }
        }
        CheckKind::SigmaCommutative => {
            let s = need_sigma()?;
            let lhs = sumset::theorem_form_sumset(g, &a, &s)?.len() as i64;
            let rhs = 2 * n - 3;
            let violated = s.order() % 2 == 1
                && lhs == rhs
                && rhs < p
                && !structure::is_sigma_commutative(g, &a, &s)?;
            Replay { lhs, rhs, violated }
        }
        CheckKind::Sdr => {
            let b = v.b.as_ref().ok_or_else(|| Error::Parse("violation has no B".into()))?;
            payload_subset(g, b)?;
            let rhs = (v.a.len() + b.len()) as i64 - 1;
            match matching::hall_representatives(g, &v.a, b) {
                Ok(r) if matching::verify_sdr(g, &r) => Replay {
                    lhs: rhs,
                    rhs,
                    violated: false,
                },
                Ok(_) | Err(Error::MatchingFailed) => Replay {
                    lhs: 0,
                    rhs,
                    violated: true,
                },
                Err(e) => return Err(e),
            }
        }
        CheckKind::FieldGamma => {
            return Err(Error::InvalidParameter(
                "field violations replay against a field, not a group".into(),
            ))
        }
    })
}
