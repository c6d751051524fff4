use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSubset};
use crate::morphisms::Automorphism;

use super::driver::{Layer, PairJob, SingleJob};
use super::plan::{Mode, SearchPlan};
use super::space::Space;
use super::Harness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamKind {
    /// `(A, B)` pairs.
    Pairs,
    /// Single sets `A`.
    Singles,
}

/// One planned configuration and the number of configurations it stands
/// for under pruning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub a: GroupSubset,
    pub b: Option<GroupSubset>,
    pub sigma: Option<Automorphism>,
    pub weight: u64,
}

/// The instances a plan visits, in visiting order, with σ fixed to the
/// given automorphism if any. The stream is collected eagerly; it is meant
/// for inspection and small plans.
pub fn instance_stream(
    g: &FiniteGroup,
    plan: &SearchPlan,
    kind: StreamKind,
    sigma: Option<&Automorphism>,
) -> Result<std::vec::IntoIter<Instance>> {
    plan.validate()?;
    if let Some(s) = sigma {
        if s.group_id() != g.id() {
            return Err(Error::GroupMismatch);
        }
    }
    let n = g.order();
    let h = Harness::new(g);
    let mut notes = Vec::new();
    let mut layer = h.base_layer_for_stream(plan, &mut notes)?;
    if let Some(s) = sigma {
        layer.sigma_perm = Some(s.perm().to_vec());
        if let Some(sym) = layer.sym.take() {
            // only automorphisms commuting with σ preserve the twisted sets
            let commuting = sym
                .into_iter()
                .filter(|phi| (0..n).all(|x| phi[s.image(x)] as usize == s.image(phi[x] as usize)))
                .collect();
            layer.sym = Some(commuting);
        }
    }
    let wrap = |inst_a, inst_b: Option<_>, weight| Instance {
        a: g.wrap(inst_a),
        b: inst_b.map(|b| g.wrap(b)),
        sigma: sigma.cloned(),
        weight,
    };
    let mut out = Vec::new();
    let sampled = plan.mode == Mode::Sampled;
    match kind {
        StreamKind::Pairs => {
            let (ca, cb) = (plan.cap_a(n), plan.cap_b(n));
            let (sa, sb) = if sampled {
                (Space::caps_only(n, ca), Space::caps_only(n, cb))
            } else {
                (Space::new(n, ca)?, Space::new(n, cb)?)
            };
            let job = PairJob {
                g,
                a_space: &sa,
                b_space: &sb,
                layers: vec![layer],
                inversion: !sampled && plan.pruning.use_inversion_symmetry,
                sums: false,
                size_limit: None,
            };
            if sampled {
                let t = job.sample(plan.samples, plan.seed, |inst, t| t.hits.push((*inst, 0)));
                out.extend(t.hits.into_iter().map(|(i, _)| wrap(i.a, Some(i.b), i.weight)));
            } else {
                if sigma.is_some() && job.inversion {
                    return Err(Error::InvalidPlan(
                        "inversion pruning is not available with an automorphism σ".into(),
                    ));
                }
                job.check_inversion()?;
                for row in 0..job.rows() {
                    job.run_row(row, &mut |i| out.push(wrap(i.a, Some(i.b), i.weight)));
                }
            }
        }
        StreamKind::Singles => {
            let cap = plan.cap_a(n);
            let space = if sampled {
                Space::caps_only(n, cap)
            } else {
                Space::new(n, cap)?
            };
            let job = SingleJob {
                g,
                space: &space,
                layers: vec![layer],
                inversion: !sampled && plan.pruning.use_inversion_symmetry && sigma.is_none(),
                sums: false,
            };
            if sampled {
                let t = job.sample(plan.samples, plan.seed, |inst, t| t.hits.push((*inst, 0)));
                out.extend(t.hits.into_iter().map(|(i, _)| wrap(i.a, None, i.weight)));
            } else {
                for row in 0..job.rows() {
                    job.run_row(row, &mut |i| out.push(wrap(i.a, None, i.weight)));
                }
            }
        }
    }
    Ok(out.into_iter())
}

impl Harness<'_> {
    fn base_layer_for_stream(&self, plan: &SearchPlan, notes: &mut Vec<String>) -> Result<Layer> {
        let mut layer = Layer::plain();
        if plan.mode != Mode::Sampled && plan.pruning.use_automorphism_orbits {
            match self.automorphisms()? {
                Some(aut) => layer.sym = Some(aut.iter().map(|s| s.perm().to_vec()).collect()),
                None => notes.push("orbit pruning skipped".into()),
            }
        }
        Ok(layer)
    }
}
