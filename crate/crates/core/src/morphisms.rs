//! Automorphisms, quotients, and the invariant-subgroup field structure used
//! for twisted sumsets.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::field::{self, FiniteField, Poly};
use crate::group::{FiniteGroup, GroupSubset};

// ---- quotients ------------------------------------------------------------

/// `G/H` together with the projection `G → G/H` and a section choosing the
/// least element of each coset.
#[derive(Clone, Debug)]
pub struct QuotientStructure {
    parent_id: u64,
    parent_order: usize,
    normal_subgroup: GroupSubset,
    quotient: FiniteGroup,
    projection: Vec<usize>,
    section: Vec<usize>,
}

impl QuotientStructure {
    /// `h` must already be known to be a normal subgroup of `g`.
    pub(crate) fn build(g: &FiniteGroup, h: GroupSubset) -> Result<Self> {
        let n = g.order();
        let mut projection = vec![usize::MAX; n];
        let mut section = Vec::new();
        for x in 0..n {
            if projection[x] != usize::MAX {
                continue;
            }
            let c = section.len();
            section.push(x);
            for y in h.iter() {
                projection[g.op(x, y)] = c;
            }
        }
        let m = section.len();
        let table = (0..m * m)
            .map(|k| projection[g.op(section[k / m], section[k % m])])
            .collect();
        let labels = section
            .iter()
            .map(|&x| format!("{}+H", g.label(x)))
            .collect();
        let quotient = FiniteGroup::from_table(
            format!("{}/H{}", g.name(), h.len()),
            m,
            table,
            Some(labels),
            &Default::default(),
        )?;
        Ok(QuotientStructure {
            parent_id: g.id(),
            parent_order: n,
            normal_subgroup: h,
            quotient,
            projection,
            section,
        })
    }

    pub fn parent_id(&self) -> u64 {
        self.parent_id
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn normal_subgroup(&self) -> &GroupSubset {
        &self.normal_subgroup
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    /// Coset index of `x`.
    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Representative (least element) of coset `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.section[c]
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// `π(A)` as a subset of the quotient.
    pub fn project_subset(&self, a: &GroupSubset) -> Result<GroupSubset> {
        if a.group_id() != self.parent_id {
            return Err(Error::GroupMismatch);
        }
        self.quotient
            .subset(&a.iter().map(|x| self.projection[x]).collect::<Vec<_>>())
    }
}

// ---- automorphisms --------------------------------------------------------

/// A permutation of element indices certified to respect the operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    group_id: u64,
    perm: Vec<u8>,
    inv: Vec<u8>,
    order: usize,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automorphism(order {}, {:?})", self.order, self.perm)
    }
}

impl Automorphism {
    /// Checks bijectivity, that the identity is fixed, and the homomorphism
    /// law on every pair.
    pub fn new(g: &FiniteGroup, perm: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if perm.len() != n {
            return Err(Error::NotAutomorphism(format!(
                "{} images for {} elements",
                perm.len(),
                n
            )));
        }
        let mut seen = Bits::EMPTY;
        for (x, &y) in perm.iter().enumerate() {
            if y >= n || seen.contains(y) {
                return Err(Error::NotAutomorphism(format!(
                    "image {y} of {x} is out of range or repeated"
                )));
            }
            seen.insert(y);
        }
        if perm[0] != 0 {
            return Err(Error::NotAutomorphism("identity is moved".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if perm[g.op(x, y)] != g.op(perm[x], perm[y]) {
                    return Err(Error::NotAutomorphism(format!(
                        "f({x}+{y}) != f({x})+f({y})"
                    )));
                }
            }
        }
        Ok(Automorphism::from_perm(
            g.id(),
            perm.into_iter().map(|v| v as u8).collect(),
        ))
    }

    fn from_perm(group_id: u64, perm: Vec<u8>) -> Self {
        let n = perm.len();
        let mut inv = vec![0u8; n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        let order = cycle_order(&perm);
        Automorphism {
            group_id,
            perm,
            inv,
            order,
        }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism::from_perm(g.id(), (0..g.order()).map(|x| x as u8).collect())
    }

    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.perm[x] as usize
    }

    #[inline]
    pub fn preimage(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub(crate) fn inverse_perm(&self) -> &[u8] {
        &self.inv
    }

    pub fn perm_vec(&self) -> Vec<usize> {
        self.perm.iter().map(|&v| v as usize).collect()
    }

    /// Least `k >= 1` with `σ^k = id`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.group_id != other.group_id {
            return Err(Error::GroupMismatch);
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Automorphism) -> Automorphism {
        let perm = other.perm.iter().map(|&y| self.perm[y as usize]).collect();
        Automorphism::from_perm(self.group_id, perm)
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism::from_perm(self.group_id, self.inv.clone())
    }

    pub fn power(&self, k: usize) -> Automorphism {
        let n = self.perm.len();
        let mut perm: Vec<u8> = (0..n).map(|x| x as u8).collect();
        for _ in 0..k % self.order {
            perm = perm.iter().map(|&y| self.perm[y as usize]).collect();
        }
        Automorphism::from_perm(self.group_id, perm)
    }

    /// `σ(A) = {σ(a) : a ∈ A}`.
    pub fn apply(&self, a: &GroupSubset) -> Result<GroupSubset> {
        if a.group_id() != self.group_id {
            return Err(Error::GroupMismatch);
        }
        Ok(a.with_bits(a.bits().map(&self.perm)))
    }
}

/// Free-function form of [`Automorphism::apply`].
pub fn apply(sigma: &Automorphism, a: &GroupSubset) -> Result<GroupSubset> {
    sigma.apply(a)
}

fn cycle_order(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut order = 1usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        order = order / crate::arith::gcd(order as u64, len as u64) as usize * len;
    }
    order
}

/// The order of σ and whether it is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderParity {
    pub order: usize,
    pub even: bool,
}

impl OrderParity {
    /// `δ` in the twisted bound: 1 for even order, 0 for odd.
    pub fn delta(&self) -> i64 {
        self.even as i64
    }
}

pub fn automorphism_order_parity(sigma: &Automorphism) -> OrderParity {
    OrderParity {
        order: sigma.order(),
        even: sigma.order().is_multiple_of(2),
    }
}

/// `τ_a(x) = -a + x + a`.
pub fn inner_automorphism(g: &FiniteGroup, a: usize) -> Result<Automorphism> {
    if a >= g.order() {
        return Err(Error::ElementOutOfRange {
            element: a,
            order: g.order(),
        });
    }
    let perm = (0..g.order()).map(|x| g.conjugate(x, a) as u8).collect();
    Ok(Automorphism::from_perm(g.id(), perm))
}

/// The automorphism `σ̄` of `G/H` with `σ̄(π(x)) = π(σ(x))`.
pub fn restrict_to_quotient(sigma: &Automorphism, q: &QuotientStructure) -> Result<Automorphism> {
    if sigma.group_id != q.parent_id {
        return Err(Error::GroupMismatch);
    }
    let h = q.normal_subgroup.bits();
    if let Some(x) = h.iter().find(|&x| !h.contains(sigma.image(x))) {
        return Err(Error::NotInvariant { element: x });
    }
    let perm = q
        .section
        .iter()
        .map(|&x| q.projection[sigma.image(x)])
        .collect();
    Automorphism::new(&q.quotient, perm)
}

// ---- enumeration ----------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct AutLimits {
    pub order_cap: usize,
    /// Groups above `order_cap` are still handled if the greedy generating
    /// set has at most this many elements.
    pub max_generators: usize,
}

impl Default for AutLimits {
    fn default() -> Self {
        AutLimits {
            order_cap: 128,
            max_generators: 3,
        }
    }
}

/// The full automorphism group, sorted by permutation.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    group_id: u64,
    elements: Vec<Automorphism>,
    index: HashMap<Vec<u8>, usize>,
}

impl AutomorphismGroup {
    fn from_elements(group_id: u64, mut elements: Vec<Automorphism>) -> Result<Self> {
        elements.sort_by(|a, b| a.perm.cmp(&b.perm));
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.perm.clone(), i))
            .collect();
        let aut = AutomorphismGroup {
            group_id,
            elements,
            index,
        };
        aut.verify_closed()?;
        Ok(aut)
    }

    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &Automorphism {
        &self.elements[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.elements.iter()
    }

    pub fn position(&self, sigma: &Automorphism) -> Option<usize> {
        self.index.get(&sigma.perm).copied()
    }

    pub fn contains(&self, sigma: &Automorphism) -> bool {
        self.position(sigma).is_some()
    }

    /// Indices of the automorphisms of odd order.
    pub fn odd_order(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.elements[i].order % 2 == 1)
            .collect()
    }

    /// Verifies that the set is a group: it contains the identity and equals
    /// the subgroup generated by a greedily chosen subset of itself.
    pub fn verify_closed(&self) -> Result<()> {
        let Some(first) = self.elements.first() else {
            return Err(Error::NotAutomorphism("empty automorphism set".into()));
        };
        let id = Automorphism::from_perm(self.group_id, (0..first.perm.len()).map(|x| x as u8).collect());
        if !self.contains(&id) {
            return Err(Error::NotAutomorphism("identity missing".into()));
        }
        let mut gens: Vec<&Automorphism> = Vec::new();
        let mut generated: HashMap<Vec<u8>, ()> = HashMap::from([(id.perm.clone(), ())]);
        for s in &self.elements {
            if generated.contains_key(&s.perm) {
                continue;
            }
            gens.push(s);
            let mut frontier: Vec<Automorphism> = vec![id.clone()];
            generated = HashMap::from([(id.perm.clone(), ())]);
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = g.compose_unchecked(&x);
                    if generated.contains_key(&y.perm) {
                        continue;
                    }
                    if !self.contains(&y) {
                        return Err(Error::NotAutomorphism(
                            "enumerated set is not closed under composition".into(),
                        ));
                    }
                    generated.insert(y.perm.clone(), ());
                    frontier.push(y);
                }
            }
        }
        if generated.len() != self.len() {
            return Err(Error::NotAutomorphism(
                "enumerated set is not generated by its elements".into(),
            ));
        }
        Ok(())
    }

    /// Conjugacy classes `{φσφ⁻¹}` as `(least member, class size)`.
    pub fn conjugacy_classes(&self) -> Vec<(usize, usize)> {
        let mut class_of = vec![usize::MAX; self.len()];
        let mut classes = Vec::new();
        for i in 0..self.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let sigma = &self.elements[i];
            let mut size = 0;
            for phi in &self.elements {
                let c = phi.compose_unchecked(sigma).compose_unchecked(&phi.inverse());
                let j = self.index[&c.perm];
                if class_of[j] == usize::MAX {
                    class_of[j] = classes.len();
                    size += 1;
                }
            }
            classes.push((i, size));
        }
        classes
    }

    /// Indices of automorphisms commuting with `self.get(i)`.
    pub fn centralizer(&self, i: usize) -> Vec<usize> {
        let sigma = &self.elements[i];
        (0..self.len())
            .filter(|&j| {
                let phi = &self.elements[j];
                phi.compose_unchecked(sigma) == sigma.compose_unchecked(phi)
            })
            .collect()
    }
}

/// Every automorphism of `g`, by backtracking over generator images.
pub fn enumerate_automorphisms(g: &FiniteGroup) -> Result<AutomorphismGroup> {
    enumerate_automorphisms_with(g, &AutLimits::default())
}

pub fn enumerate_automorphisms_with(g: &FiniteGroup, limits: &AutLimits) -> Result<AutomorphismGroup> {
    let n = g.order();
    let gens = g.generating_set();
    if n > limits.order_cap && gens.len() > limits.max_generators {
        return Err(Error::AutomorphismCapExceeded {
            order: n,
            cap: limits.order_cap,
            max_generators: limits.max_generators,
        });
    }
    if gens.is_empty() {
        return AutomorphismGroup::from_elements(g.id(), vec![Automorphism::identity(g)]);
    }

    // levels[j]: BFS tree of <gens[0..=j]> as (element, parent, generator).
    let mut levels: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for j in 0..gens.len() {
        let mut seen = Bits::singleton(0);
        let mut order = vec![0usize];
        let mut tree = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (gi, &s) in gens[..=j].iter().enumerate() {
                let y = g.op(x, s);
                if !seen.contains(y) {
                    seen.insert(y);
                    order.push(y);
                    tree.push((y, x, gi));
                }
            }
        }
        levels.push(tree);
    }

    let orders = g.element_orders();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (1..n).filter(|&c| orders[c] == orders[s]).collect())
        .collect();

    let mut found = Vec::new();
    let mut images = vec![0usize; gens.len()];
    let mut phi = vec![usize::MAX; n];
    backtrack(g, &gens, &levels, &candidates, 0, &mut images, &mut phi, &mut found)?;
    AutomorphismGroup::from_elements(g.id(), found)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &FiniteGroup,
    gens: &[usize],
    levels: &[Vec<(usize, usize, usize)>],
    candidates: &[Vec<usize>],
    j: usize,
    images: &mut Vec<usize>,
    phi: &mut Vec<usize>,
    found: &mut Vec<Automorphism>,
) -> Result<()> {
    for &c in &candidates[j] {
        images[j] = c;
        phi[0] = 0;
        let mut used = Bits::singleton(0);
        let mut ok = true;
        for &(x, parent, gi) in &levels[j] {
            let y = g.op(phi[parent], images[gi]);
            if used.contains(y) {
                ok = false;
                break;
            }
            used.insert(y);
            phi[x] = y;
        }
        if !ok {
            continue;
        }
        let members = std::iter::once(0).chain(levels[j].iter().map(|t| t.0));
        'check: for x in members {
            for gi in 0..=j {
                if phi[g.op(x, gens[gi])] != g.op(phi[x], images[gi]) {
                    ok = false;
                    break 'check;
                }
            }
        }
        if !ok {
            continue;
        }
        if j + 1 == gens.len() {
            found.push(Automorphism::new(g, phi.clone())?);
        } else {
            backtrack(g, gens, levels, candidates, j + 1, images, phi, found)?;
        }
    }
    Ok(())
}

// ---- cache files ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CacheFile {
    table_hash: String,
    group_order: usize,
    automorphisms: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    perm: Vec<usize>,
    order: usize,
}

pub fn cache_path(dir: &Path, g: &FiniteGroup) -> PathBuf {
    dir.join(format!("aut-{}.json", g.table_hash()))
}

pub fn save_automorphism_cache(dir: &Path, g: &FiniteGroup, aut: &AutomorphismGroup) -> Result<PathBuf> {
    if aut.group_id != g.id() {
        return Err(Error::GroupMismatch);
    }
    std::fs::create_dir_all(dir)?;
    let doc = CacheFile {
        table_hash: g.table_hash(),
        group_order: g.order(),
        automorphisms: aut
            .iter()
            .map(|s| CacheEntry {
                perm: s.perm_vec(),
                order: s.order(),
            })
            .collect(),
    };
    let path = cache_path(dir, g);
    std::fs::write(&path, serde_json::to_string(&doc)?)?;
    Ok(path)
}

/// Loads and re-verifies a cached automorphism group; `None` if no cache
/// file exists for this table.
pub fn load_automorphism_cache(dir: &Path, g: &FiniteGroup) -> Result<Option<AutomorphismGroup>> {
    let path = cache_path(dir, g);
    if !path.exists() {
        return Ok(None);
    }
    let doc: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    if doc.table_hash != g.table_hash() || doc.group_order != g.order() {
        return Err(Error::Parse(format!("{} belongs to another group", path.display())));
    }
    let mut elements = Vec::with_capacity(doc.automorphisms.len());
    for e in doc.automorphisms {
        let s = Automorphism::new(g, e.perm)?;
        if s.order() != e.order {
            return Err(Error::Parse("cached automorphism order is wrong".into()));
        }
        elements.push(s);
    }
    AutomorphismGroup::from_elements(g.id(), elements).map(Some)
}

/// Enumerates through an on-disk cache directory.
pub fn enumerate_automorphisms_cached(g: &FiniteGroup, dir: &Path) -> Result<AutomorphismGroup> {
    if let Some(aut) = load_automorphism_cache(dir, g)? {
        return Ok(aut);
    }
    let aut = enumerate_automorphisms(g)?;
    save_automorphism_cache(dir, g, &aut)?;
    Ok(aut)
}

// ---- invariant subgroups with a field quotient ----------------------------

/// Identification of `G/H` with the additive group of `F_{p^α}` under which
/// the induced automorphism is multiplication by `gamma`.
#[derive(Clone, Debug)]
pub struct FieldStructure {
    pub p: u32,
    pub alpha: u32,
    /// Field element index of γ.
    pub gamma: usize,
    /// Quotient element index → field element index.
    pub chi: Vec<usize>,
    pub field: FiniteField,
}

impl FieldStructure {
    pub fn gamma_coords(&self) -> Vec<u32> {
        self.field.coords(self.gamma)
    }

    /// Re-checks that `chi` is an additive isomorphism, `gamma != 0`, and
    /// `chi(σ̄(x)) = gamma · chi(x)` pointwise.
    pub fn verify(&self, quotient: &FiniteGroup, induced: &Automorphism) -> bool {
        let m = quotient.order();
        if self.gamma == 0 || self.chi.len() != m || m != self.field.order() {
            return false;
        }
        let mut seen = vec![false; m];
        for &c in &self.chi {
            if c >= m || seen[c] {
                return false;
            }
            seen[c] = true;
        }
        for x in 0..m {
            if self.chi[induced.image(x)] != self.field.mul(self.gamma, self.chi[x]) {
                return false;
            }
            for y in 0..m {
                if self.chi[quotient.op(x, y)] != self.field.add(self.chi[x], self.chi[y]) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct BwSubgroup {
    pub quotient: QuotientStructure,
    /// σ̄ on the quotient.
    pub induced: Automorphism,
    pub field_structure: FieldStructure,
}

impl BwSubgroup {
    pub fn verify(&self, sigma: &Automorphism) -> bool {
        let q = &self.quotient;
        let h = q.normal_subgroup().bits();
        h.iter().all(|x| h.contains(sigma.image(x)))
            && q.quotient().order() > 1
            && (0..q.parent_order()).all(|x| {
                q.project(sigma.image(x)) == self.induced.image(q.project(x))
            })
            && self.field_structure.verify(q.quotient(), &self.induced)
    }
}

/// Finds a proper normal σ-invariant subgroup `H` such that `G/H` is the
/// additive group of a finite field on which σ acts by a scalar.
///
/// Among all qualifying subgroups the largest is returned, ties going to the
/// numerically least bit-vector.
pub fn find_bw_subgroup(g: &FiniteGroup, sigma: &Automorphism) -> Result<BwSubgroup> {
    if sigma.group_id() != g.id() {
        return Err(Error::GroupMismatch);
    }
    if g.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    if !g.is_solvable() {
        return Err(Error::InvalidParameter("group is not solvable".into()));
    }
    let mut candidates = invariant_normal_subgroups(g, sigma);
    let full = Bits::full(g.order());
    candidates.retain(|h| *h != full);
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    for h in candidates {
        let q = g.quotient(&g.wrap(h))?;
        if let Some(found) = field_quotient(q, sigma)? {
            return Ok(found);
        }
    }
    Err(Error::NoFieldQuotient)
}

/// All normal subgroups `H` with `σ(H) = H`.
pub fn invariant_normal_subgroups(g: &FiniteGroup, sigma: &Automorphism) -> Vec<Bits> {
    let gens = g.generating_set();
    let close = |seed: Bits| -> Bits {
        let mut s = seed;
        loop {
            let h = g.closure(s);
            let mut ext = h;
            for x in h.iter() {
                for &t in &gens {
                    ext.insert(g.conjugate(x, t));
                }
                ext.insert(sigma.image(x));
            }
            if ext == h {
                return h;
            }
            s = ext;
        }
    };
    let trivial = Bits::singleton(0);
    let mut found = vec![trivial];
    let mut head = 0;
    while head < found.len() {
        let k = found[head];
        head += 1;
        for x in 0..g.order() {
            if k.contains(x) {
                continue;
            }
            let n = close(k.with(x));
            if !found.contains(&n) {
                found.push(n);
            }
        }
    }
    found
}

fn field_quotient(q: QuotientStructure, sigma: &Automorphism) -> Result<Option<BwSubgroup>> {
    let quot = q.quotient();
    let m = quot.order();
    let Some((p, alpha)) = crate::arith::prime_power(m as u64) else {
        return Ok(None);
    };
    let p = p as usize;
    if !quot.is_abelian() || (1..m).any(|x| quot.element_order(x) != p) {
        return Ok(None);
    }
    let induced = restrict_to_quotient(sigma, &q)?;
    let a = alpha as usize;

    // Basis of the quotient as an F_p-space, chosen greedily by index.
    let mut basis = Vec::new();
    let mut span = Bits::singleton(0);
    for x in 1..m {
        if !span.contains(x) {
            basis.push(x);
            span = quot.closure(basis.iter().copied().collect());
        }
    }
    debug_assert_eq!(basis.len(), a);
    let mut elem_of = vec![0usize; m];
    let mut coords_of = vec![Vec::new(); m];
    for k in 0..m {
        let c: Vec<usize> = (0..a).map(|i| (k / p.pow(i as u32)) % p).collect();
        let x = c
            .iter()
            .zip(&basis)
            .fold(0, |acc, (&ci, &e)| quot.op(acc, quot.multiple(e, ci)));
        elem_of[k] = x;
        coords_of[x] = c;
    }
    let index_of = |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
    let apply_t = |v: &[usize]| -> Vec<usize> {
        coords_of[induced.image(elem_of[index_of(v)])].clone()
    };

    // Krylov basis from the first basis vector; the induced map qualifies
    // iff it is cyclic there with an irreducible minimal polynomial.
    let mut v = vec![0usize; a];
    v[0] = 1;
    let mut krylov = vec![v];
    for _ in 0..a {
        let next = apply_t(krylov.last().unwrap());
        krylov.push(next);
    }
    let Some(c) = solve_mod_p(&krylov[..a], &krylov[a], p) else {
        return Ok(None);
    };
    // t^α − Σ c_k t^k
    let mut minpoly: Poly = c.iter().map(|&ck| ((p - ck) % p) as u32).collect();
    minpoly.push(1);
    if !field::is_irreducible(&minpoly, p as u32) {
        return Ok(None);
    }

    let fld = match FiniteField::new(p as u32, alpha) {
        Ok(f) => f,
        Err(Error::FieldUnsupported { .. }) => FiniteField::with_modulus(p as u32, minpoly.clone())?,
        Err(e) => return Err(e),
    };
    let theta = (0..fld.order())
        .find(|&t| fld.eval(&minpoly, t) == 0)
        .expect("an irreducible polynomial of degree alpha splits in F_{p^alpha}");
    let theta_pows: Vec<usize> = (0..a).map(|k| fld.pow(theta, k as u64)).collect();

    let mut chi = vec![0usize; m];
    for k in 0..m {
        let ck: Vec<usize> = (0..a).map(|i| (k / p.pow(i as u32)) % p).collect();
        let mut w = vec![0usize; a];
        let mut f = 0;
        for (i, &ci) in ck.iter().enumerate() {
            for (wj, kj) in w.iter_mut().zip(&krylov[i]) {
                *wj = (*wj + ci * kj) % p;
            }
            f = fld.add(f, fld.mul(ci, theta_pows[i]));
        }
        chi[elem_of[index_of(&w)]] = f;
    }
    let fs = FieldStructure {
        p: p as u32,
        alpha,
        gamma: theta,
        chi,
        field: fld,
    };
    let found = BwSubgroup {
        quotient: q,
        induced,
        field_structure: fs,
    };
    debug_assert!(found.field_structure.verify(found.quotient.quotient(), &found.induced));
    Ok(Some(found))
}

/// Solves `Σ c_k cols[k] = rhs` over `F_p`; `None` if the columns are
/// dependent.
fn solve_mod_p(cols: &[Vec<usize>], rhs: &[usize], p: usize) -> Option<Vec<usize>> {
    let a = cols.len();
    let rows = rhs.len();
    // augmented matrix, row-major
    let mut mat: Vec<Vec<usize>> = (0..rows)
        .map(|r| {
            let mut row: Vec<usize> = cols.iter().map(|c| c[r] % p).collect();
            row.push(rhs[r] % p);
            row
        })
        .collect();
    let inv = |x: usize| crate::arith::pow_mod(x as u64, (p - 2) as u64, p as u64) as usize;
    let mut pivot_row = 0;
    for col in 0..a {
        let r = (pivot_row..rows).find(|&r| mat[r][col] != 0)?;
        mat.swap(pivot_row, r);
        let iv = inv(mat[pivot_row][col]);
        for x in mat[pivot_row].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..rows {
            if r != pivot_row && mat[r][col] != 0 {
                let f = mat[r][col];
                for k in 0..=a {
                    mat[r][k] = (mat[r][k] + p * p - f * mat[pivot_row][k]) % p;
                }
            }
        }
        pivot_row += 1;
    }
    Some((0..a).map(|k| mat[k][a]).collect())
}
