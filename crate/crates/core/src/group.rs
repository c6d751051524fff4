//! Finite groups given by explicit Cayley tables.
//!
//! Groups are written additively whether or not they are abelian: `x + y`
//! is the group operation and `-x` the inverse. Elements are the dense
//! indices `0..n` and the identity is always index `0`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith;
use crate::bits::{Bits, MAX_ORDER};
use crate::error::{Error, Result};
use crate::morphisms::QuotientStructure;

/// Construction limits. `order_cap` may be lowered but never raised above
/// [`MAX_ORDER`].
#[derive(Clone, Copy, Debug)]
pub struct GroupLimits {
    pub order_cap: usize,
    /// Tables up to this order get a full associativity check.
    pub associativity_cap: usize,
}

impl Default for GroupLimits {
    fn default() -> Self {
        GroupLimits {
            order_cap: MAX_ORDER,
            associativity_cap: MAX_ORDER,
        }
    }
}

#[derive(Clone, Default)]
struct Cache {
    least_prime_factor: OnceLock<Option<usize>>,
    center: OnceLock<Bits>,
    is_abelian: OnceLock<bool>,
    is_nilpotent: OnceLock<bool>,
    is_solvable: OnceLock<bool>,
    element_orders: OnceLock<Vec<usize>>,
    translations: OnceLock<Option<Translations>>,
}

/// A validated finite group with a row-major Cayley table.
#[derive(Clone)]
pub struct FiniteGroup {
    id: u64,
    name: String,
    order: usize,
    table: Vec<u8>,
    inv: Vec<u8>,
    labels: Vec<String>,
    cache: Cache,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("id", &format_args!("{:016x}", self.id))
            .finish()
    }
}

/// A subset of a specific group, as a bit-vector over element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSubset {
    group_id: u64,
    bits: Bits,
}

impl GroupSubset {
    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn bits(&self) -> Bits {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.bits.iter()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.bits.to_vec()
    }

    pub fn same_group(&self, other: &GroupSubset) -> Result<()> {
        if self.group_id == other.group_id {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn union(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        Ok(self.with_bits(self.bits.union(&other.bits)))
    }

    pub fn intersection(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        Ok(self.with_bits(self.bits.intersection(&other.bits)))
    }

    pub fn difference(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        Ok(self.with_bits(self.bits.difference(&other.bits)))
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub(crate) fn with_bits(&self, bits: Bits) -> GroupSubset {
        GroupSubset {
            group_id: self.group_id,
            bits,
        }
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.bits, f)
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.bits.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Byte-chunk translation tables, only for groups of order at most 64.
///
/// `left[(a * chunks + c) * 256 + v]` is the mask of `a + x` over the
/// elements `x` encoded by byte `v` of chunk `c`; `right` likewise for `x + a`.
#[derive(Clone)]
pub(crate) struct Translations {
    chunks: usize,
    left: Vec<u64>,
    right: Vec<u64>,
}

impl Translations {
    fn build(g: &FiniteGroup) -> Self {
        let n = g.order;
        let chunks = n.div_ceil(8);
        let mut left = vec![0u64; n * chunks * 256];
        let mut right = vec![0u64; n * chunks * 256];
        for a in 0..n {
            for c in 0..chunks {
                let base = (a * chunks + c) * 256;
                for v in 1..256usize {
                    let low = v.trailing_zeros() as usize;
                    let x = c * 8 + low;
                    let prev = v & (v - 1);
                    if x >= n {
                        left[base + v] = left[base + prev];
                        right[base + v] = right[base + prev];
                        continue;
                    }
                    left[base + v] = left[base + prev] | 1u64 << g.op(a, x);
                    right[base + v] = right[base + prev] | 1u64 << g.op(x, a);
                }
            }
        }
        Translations {
            chunks,
            left,
            right,
        }
    }

    /// `a + X` for a mask `X`.
    #[inline]
    pub(crate) fn left(&self, a: usize, mask: u64) -> u64 {
        let mut out = 0;
        let base = a * self.chunks;
        for c in 0..self.chunks {
            let v = ((mask >> (c * 8)) & 0xff) as usize;
            if v != 0 {
                out |= self.left[(base + c) * 256 + v];
            }
        }
        out
    }

    /// `X + a` for a mask `X`.
    #[inline]
    pub(crate) fn right(&self, a: usize, mask: u64) -> u64 {
        let mut out = 0;
        let base = a * self.chunks;
        for c in 0..self.chunks {
            let v = ((mask >> (c * 8)) & 0xff) as usize;
            if v != 0 {
                out |= self.right[(base + c) * 256 + v];
            }
        }
        out
    }
}

/// Serialized group definition: `order`, a row-major `table` (nested rows
/// or one flat list) and optional `labels` / `name`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDefinition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub table: TableRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableRows {
    Nested(Vec<Vec<usize>>),
    Flat(Vec<usize>),
}

impl FiniteGroup {
    /// Validates and normalizes a Cayley table given row-major as `n*n`
    /// entries. The identity is relabelled to index 0 if necessary.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
        limits: &GroupLimits,
    ) -> Result<Self> {
        let n = order;
        let cap = limits.order_cap.min(MAX_ORDER);
        if n == 0 {
            return Err(Error::Parse("order must be positive".into()));
        }
        if n > cap {
            return Err(Error::OrderCapExceeded { order: n, cap });
        }
        if table.len() != n * n {
            return Err(Error::Parse(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::Parse(format!(
                    "{} labels for {} elements",
                    labels.len(),
                    n
                )));
            }
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::Parse(format!(
                "entry {v} at row {} column {} is out of range",
                i / n,
                i % n
            )));
        }
        check_latin(n, &table)?;

        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or(Error::NoIdentity)?;

        let swap = |x: usize| {
            if x == 0 {
                e
            } else if x == e {
                0
            } else {
                x
            }
        };
        let (table, labels) = if e == 0 {
            (table, labels)
        } else {
            let mut t = vec![0usize; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = swap(table[swap(i) * n + swap(j)]);
                }
            }
            let labels = labels.map(|l| (0..n).map(|i| l[swap(i)].clone()).collect());
            (t, labels)
        };

        let mut inv = vec![0u8; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x * n + y] == 0)
                .ok_or(Error::NoInverse { x })?;
            if table[y * n + x] != 0 {
                return Err(Error::NoInverse { x });
            }
            inv[x] = y as u8;
        }

        if n <= limits.associativity_cap {
            for x in 0..n {
                for y in 0..n {
                    let xy = table[x * n + y];
                    for z in 0..n {
                        if table[xy * n + z] != table[x * n + table[y * n + z]] {
                            return Err(Error::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        }

        let table: Vec<u8> = table.into_iter().map(|v| v as u8).collect();
        let id = content_id(n, &table);
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        Ok(FiniteGroup {
            id,
            name: name.into(),
            order: n,
            table,
            inv,
            labels,
            cache: Cache::default(),
        })
    }

    pub fn from_definition(def: &GroupDefinition, limits: &GroupLimits) -> Result<Self> {
        let n = def.order;
        let flat = match &def.table {
            TableRows::Flat(v) => v.clone(),
            TableRows::Nested(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse(format!(
                        "table must have {n} rows of {n} entries"
                    )));
                }
                rows.concat()
            }
        };
        let name = def.name.clone().unwrap_or_else(|| "custom".into());
        FiniteGroup::from_table(name, n, flat, def.labels.clone(), limits)
    }

    pub fn to_definition(&self) -> GroupDefinition {
        let n = self.order;
        GroupDefinition {
            name: Some(self.name.clone()),
            order: n,
            table: TableRows::Nested(
                (0..n)
                    .map(|i| (0..n).map(|j| self.op(i, j)).collect())
                    .collect(),
            ),
            labels: Some(self.labels.clone()),
        }
    }

    /// Content identifier derived from the Cayley table; equal tables share it.
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Full SHA-256 of the Cayley table, hex encoded.
    pub fn table_hash(&self) -> String {
        let digest = table_digest(self.order, &self.table);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `-x + y + x`.
    #[inline]
    pub fn conjugate(&self, y: usize, x: usize) -> usize {
        self.op(self.op(self.neg(x), y), x)
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.op(x, y) == self.op(y, x)
    }

    /// `k·x = x + ... + x` (k copies); `0·x` is the identity.
    pub fn multiple(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.op(acc, x))
    }

    pub(crate) fn inverse_table(&self) -> &[u8] {
        &self.inv
    }

    pub(crate) fn translations(&self) -> Option<&Translations> {
        self.cache
            .translations
            .get_or_init(|| (self.order <= 64).then(|| Translations::build(self)))
            .as_ref()
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.element_orders()[x]
    }

    pub fn element_orders(&self) -> &[usize] {
        self.cache.element_orders.get_or_init(|| {
            (0..self.order)
                .map(|x| {
                    let mut k = 1;
                    let mut y = x;
                    while y != 0 {
                        y = self.op(y, x);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    // ---- subsets -------------------------------------------------------

    pub fn subset(&self, elements: &[usize]) -> Result<GroupSubset> {
        let mut bits = Bits::EMPTY;
        for &x in elements {
            if x >= self.order {
                return Err(Error::ElementOutOfRange {
                    element: x,
                    order: self.order,
                });
            }
            bits.insert(x);
        }
        Ok(self.wrap(bits))
    }

    pub fn subset_from_bits(&self, bits: Bits) -> Result<GroupSubset> {
        if let Some(x) = bits.difference(&Bits::full(self.order)).first() {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: self.order,
            });
        }
        Ok(self.wrap(bits))
    }

    pub fn empty_subset(&self) -> GroupSubset {
        self.wrap(Bits::EMPTY)
    }

    pub fn full_subset(&self) -> GroupSubset {
        self.wrap(Bits::full(self.order))
    }

    pub(crate) fn wrap(&self, bits: Bits) -> GroupSubset {
        GroupSubset {
            group_id: self.id,
            bits,
        }
    }

    pub fn owns(&self, s: &GroupSubset) -> Result<()> {
        if s.group_id == self.id {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    // ---- invariants ----------------------------------------------------

    /// Smallest prime dividing the group order.
    pub fn least_prime_factor(&self) -> Result<usize> {
        self.cache
            .least_prime_factor
            .get_or_init(|| arith::least_prime_factor(self.order as u64).map(|p| p as usize))
            .ok_or(Error::TrivialGroup)
    }

    pub fn is_abelian(&self) -> bool {
        *self.cache.is_abelian.get_or_init(|| {
            (0..self.order).all(|x| (x + 1..self.order).all(|y| self.commute(x, y)))
        })
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> GroupSubset {
        let bits = *self.cache.center.get_or_init(|| {
            (0..self.order)
                .filter(|&h| (0..self.order).all(|x| self.commute(h, x)))
                .collect()
        });
        self.wrap(bits)
    }

    /// Closure of `S ∪ {0}` under the operation.
    pub fn subgroup_generated(&self, s: &GroupSubset) -> Result<GroupSubset> {
        self.owns(s)?;
        Ok(self.wrap(self.closure(s.bits)))
    }

    pub(crate) fn closure(&self, gens: Bits) -> Bits {
        let gens: Vec<usize> = gens.iter().filter(|&g| g != 0).collect();
        let mut seen = Bits::singleton(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.op(x, g);
                if !seen.contains(y) {
                    seen.insert(y);
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn is_subgroup(&self, h: &GroupSubset) -> Result<bool> {
        self.owns(h)?;
        Ok(self.subgroup_failure(h.bits).is_none())
    }

    fn subgroup_failure(&self, h: Bits) -> Option<String> {
        if !h.contains(0) {
            return Some("identity missing".into());
        }
        for a in h.iter() {
            for b in h.iter() {
                let c = self.op(a, b);
                if !h.contains(c) {
                    return Some(format!("{a}+{b}={c} leaves the set"));
                }
            }
        }
        None
    }

    fn normality_witness(&self, h: Bits) -> Option<(usize, usize)> {
        for g in 0..self.order {
            for x in h.iter() {
                if !h.contains(self.conjugate(x, g)) {
                    return Some((g, x));
                }
            }
        }
        None
    }

    /// Whether `-g + H + g = H` for every `g`. Errors if `H` is not a subgroup.
    pub fn is_normal(&self, h: &GroupSubset) -> Result<bool> {
        self.owns(h)?;
        if let Some(why) = self.subgroup_failure(h.bits) {
            return Err(Error::NotSubgroup(why));
        }
        Ok(self.normality_witness(h.bits).is_none())
    }

    pub fn quotient(&self, h: &GroupSubset) -> Result<QuotientStructure> {
        self.owns(h)?;
        if let Some(why) = self.subgroup_failure(h.bits) {
            return Err(Error::NotSubgroup(why));
        }
        if let Some((g, h)) = self.normality_witness(h.bits) {
            return Err(Error::NotNormal { g, h });
        }
        QuotientStructure::build(self, *h)
    }

    /// Upper central series `Z_0 = {0} ⊂ Z_1 ⊂ ...`, ending once it stabilizes.
    pub fn upper_central_series(&self) -> Vec<GroupSubset> {
        let n = self.order;
        let mut series = vec![Bits::singleton(0)];
        loop {
            let z = *series.last().unwrap();
            let next: Bits = (0..n)
                .filter(|&g| {
                    (0..n).all(|x| {
                        let gx = self.op(g, x);
                        let xg = self.op(x, g);
                        z.contains(self.op(self.neg(xg), gx))
                    })
                })
                .collect();
            if next == z {
                break;
            }
            series.push(next);
        }
        series.into_iter().map(|b| self.wrap(b)).collect()
    }

    /// Derived series `G ⊃ G' ⊃ G'' ⊃ ...`, ending once it stabilizes.
    pub fn derived_series(&self) -> Vec<GroupSubset> {
        let mut series = vec![Bits::full(self.order)];
        loop {
            let d = *series.last().unwrap();
            let mut comms = Bits::EMPTY;
            for a in d.iter() {
                for b in d.iter() {
                    let c = self.op(self.neg(self.op(b, a)), self.op(a, b));
                    comms.insert(c);
                }
            }
            let next = self.closure(comms);
            if next == d {
                break;
            }
            series.push(next);
        }
        series.into_iter().map(|b| self.wrap(b)).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        *self.cache.is_nilpotent.get_or_init(|| {
            self.upper_central_series()
                .last()
                .is_some_and(|z| z.len() == self.order)
        })
    }

    pub fn is_solvable(&self) -> bool {
        *self
            .cache
            .is_solvable
            .get_or_init(|| self.derived_series().last().is_some_and(|d| d.len() == 1))
    }

    /// Greedy generating set: repeatedly add the element whose inclusion
    /// grows the generated subgroup most (ties to the smallest index).
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Bits::singleton(0);
        let full = Bits::full(self.order);
        let mut gen_bits = Bits::EMPTY;
        while span != full {
            let mut best: Option<(usize, Bits)> = None;
            for x in 0..self.order {
                if span.contains(x) {
                    continue;
                }
                let c = self.closure(gen_bits.with(x));
                if best.as_ref().is_none_or(|(_, b)| c.len() > b.len()) {
                    best = Some((x, c));
                }
            }
            let (x, c) = best.expect("span is proper");
            gens.push(x);
            gen_bits.insert(x);
            span = c;
        }
        gens
    }
}

fn check_latin(n: usize, table: &[usize]) -> Result<()> {
    for (line, is_row) in [("row", true), ("column", false)] {
        for i in 0..n {
            let mut seen = vec![usize::MAX; n];
            for j in 0..n {
                let v = if is_row {
                    table[i * n + j]
                } else {
                    table[j * n + i]
                };
                if seen[v] != usize::MAX {
                    return Err(Error::NotLatinSquare {
                        line,
                        index: i,
                        value: v,
                        first: seen[v],
                        second: j,
                    });
                }
                seen[v] = j;
            }
        }
    }
    Ok(())
}

fn table_digest(n: usize, table: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((n as u32).to_le_bytes());
    h.update(table);
    h.finalize().into()
}

fn content_id(n: usize, table: &[u8]) -> u64 {
    let d = table_digest(n, table);
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

// ---- constructors ---------------------------------------------------------

/// The cyclic group `Z_n`.
pub fn build_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic order must be positive".into()));
    }
    check_cap(n)?;
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    FiniteGroup::from_table(format!("Z{n}"), n, table, None, &GroupLimits::default())
}

/// `G × K`, element `(g, k)` numbered `g·|K| + k`.
pub fn build_direct_product(g: &FiniteGroup, k: &FiniteGroup) -> Result<FiniteGroup> {
    let (a, b) = (g.order(), k.order());
    check_cap(a * b)?;
    let n = a * b;
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            let (x1, x2) = (x / b, x % b);
            let (y1, y2) = (y / b, y % b);
            table[x * n + y] = g.op(x1, y1) * b + k.op(x2, y2);
        }
    }
    let labels = (0..n)
        .map(|x| format!("({},{})", g.label(x / b), k.label(x % b)))
        .collect();
    FiniteGroup::from_table(
        format!("{}x{}", g.name(), k.name()),
        n,
        table,
        Some(labels),
        &GroupLimits::default(),
    )
}

/// Upper unitriangular 3×3 matrices over `Z_p`; `(a, b, c)` is the matrix
/// with `a`, `b` on the superdiagonal and `c` in the corner, numbered
/// `a·p² + b·p + c`.
pub fn build_heisenberg(p: usize) -> Result<FiniteGroup> {
    if p < 3 || !arith::is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    let n = p * p * p;
    check_cap(n)?;
    let decode = |x: usize| (x / (p * p), (x / p) % p, x % p);
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        let (a, b, c) = decode(x);
        for y in 0..n {
            let (a2, b2, c2) = decode(y);
            let z = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
            table[x * n + y] = z.0 * p * p + z.1 * p + z.2;
        }
    }
    let labels = (0..n)
        .map(|x| {
            let (a, b, c) = decode(x);
            format!("({a},{b},{c})")
        })
        .collect();
    FiniteGroup::from_table(
        format!("Heis{p}"),
        n,
        table,
        Some(labels),
        &GroupLimits::default(),
    )
}

/// `Z_m ⋊ Z_k` where the generator of `Z_k` acts as `x ↦ r·x`. Element
/// `(x, i)` is numbered `x·k + i`.
pub fn build_semidirect_cyclic(m: usize, k: usize, r: usize) -> Result<FiniteGroup> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("factor orders must be positive".into()));
    }
    if arith::gcd(r as u64, m as u64) != 1 {
        return Err(Error::InvalidParameter(format!("gcd({r}, {m}) != 1")));
    }
    if arith::pow_mod(r as u64, k as u64, m as u64) != 1 % m as u64 {
        return Err(Error::InvalidParameter(format!(
            "{r}^{k} is not 1 modulo {m}"
        )));
    }
    let n = m * k;
    check_cap(n)?;
    let powers: Vec<usize> = (0..k)
        .map(|i| arith::pow_mod(r as u64, i as u64, m as u64) as usize)
        .collect();
    let mut table = vec![0usize; n * n];
    for u in 0..n {
        let (x, i) = (u / k, u % k);
        for v in 0..n {
            let (y, j) = (v / k, v % k);
            let z = (x + powers[i] * y) % m;
            table[u * n + v] = z * k + (i + j) % k;
        }
    }
    let labels = (0..n).map(|u| format!("({},{})", u / k, u % k)).collect();
    FiniteGroup::from_table(
        format!("Z{m}:Z{k}[{r}]"),
        n,
        table,
        Some(labels),
        &GroupLimits::default(),
    )
}

/// Parses and validates a JSON group-definition document.
pub fn load_cayley(source: &str) -> Result<FiniteGroup> {
    load_cayley_with(source, &GroupLimits::default())
}

pub fn load_cayley_with(source: &str, limits: &GroupLimits) -> Result<FiniteGroup> {
    let def: GroupDefinition =
        serde_json::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
    FiniteGroup::from_definition(&def, limits)
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        Err(Error::OrderCapExceeded {
            order: n,
            cap: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> Vec<usize> {
        // S_3 as permutations of {0,1,2}, composed left to right.
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let mut t = vec![];
        for p in &perms {
            for q in &perms {
                let r = [q[p[0]], q[p[1]], q[p[2]]];
                t.push(perms.iter().position(|s| *s == r).unwrap());
            }
        }
        t
    }

    #[test]
    fn cyclic_basics() {
        let z1 = build_cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(z1.least_prime_factor().unwrap_err().to_string(), Error::TrivialGroup.to_string());
        let z5 = build_cyclic(5).unwrap();
        assert_eq!(z5.op(3, 4), 2);
        assert_eq!(z5.neg(2), 3);
        assert!(z5.is_abelian() && z5.is_nilpotent());
        assert_eq!(build_cyclic(9).unwrap().least_prime_factor().unwrap(), 3);
        assert!(matches!(
            build_cyclic(257),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn direct_products() {
        let z2 = build_cyclic(2).unwrap();
        let v4 = build_direct_product(&z2, &z2).unwrap();
        assert!((1..4).all(|x| v4.element_order(x) == 2));
        let z3 = build_cyclic(3).unwrap();
        let z33 = build_direct_product(&z3, &z3).unwrap();
        assert_eq!((z33.order(), z33.least_prime_factor().unwrap()), (9, 3));
        let z6 = build_direct_product(&z2, &z3).unwrap();
        let mut orders = z6.element_orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 3, 3, 6, 6]);
    }

    #[test]
    fn heisenberg() {
        let h3 = build_heisenberg(3).unwrap();
        assert_eq!(h3.order(), 27);
        assert!(!h3.is_abelian());
        assert!(h3.is_nilpotent());
        assert_eq!(h3.upper_central_series().len(), 3);
        assert_eq!(h3.center().len(), 3);
        assert_eq!(build_heisenberg(5).unwrap().least_prime_factor().unwrap(), 5);
        assert!(build_heisenberg(2).is_err());
        assert!(build_heisenberg(9).is_err());
    }

    #[test]
    fn semidirect() {
        let f21 = build_semidirect_cyclic(7, 3, 2).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(!f21.is_abelian());
        assert!(!f21.is_nilpotent());
        assert!(f21.is_solvable());
        assert_eq!(f21.center().len(), 1);
        let z7 = build_semidirect_cyclic(7, 1, 1).unwrap();
        assert!(z7.is_abelian());
        assert_eq!(z7.order(), 7);
        let f20 = build_semidirect_cyclic(5, 4, 2).unwrap();
        assert_eq!(f20.least_prime_factor().unwrap(), 2);
        assert!(build_semidirect_cyclic(7, 3, 3).is_err());
        assert!(build_semidirect_cyclic(6, 2, 2).is_err());
    }

    #[test]
    fn load_documents() {
        let z2 = load_cayley(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.id(), build_cyclic(2).unwrap().id());

        let err = load_cayley(r#"{"order": 2, "table": [[0,1],[1,1]]}"#).unwrap_err();
        match err {
            Error::NotLatinSquare { line, index, .. } => {
                assert_eq!((line, index), ("row", 1));
            }
            other => panic!("unexpected {other}"),
        }

        let doc = serde_json::json!({"order": 6, "table": s3_table()}).to_string();
        let s3 = load_cayley(&doc).unwrap();
        assert!(!s3.is_abelian());
        assert!(s3.is_solvable() && !s3.is_nilpotent());
    }

    #[test]
    fn identity_is_normalized() {
        // Z_3 with the identity stored at index 2.
        let doc = r#"{"order": 3, "table": [1,2,0, 2,0,1, 0,1,2], "labels": ["a","b","e"]}"#;
        let g = load_cayley(doc).unwrap();
        assert_eq!(g.label(0), "e");
        assert!((0..3).all(|x| g.op(0, x) == x && g.op(x, 0) == x));
    }

    #[test]
    fn rejects_non_associative() {
        // A Latin square with identity 0 that is not a group (order 5 loop).
        let t = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let doc = serde_json::json!({"order": 5, "table": t}).to_string();
        assert!(matches!(
            load_cayley(&doc),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn subgroups_and_normality() {
        let z9 = build_cyclic(9).unwrap();
        let s = z9.subset(&[3]).unwrap();
        assert_eq!(z9.subgroup_generated(&s).unwrap().elements(), vec![0, 3, 6]);
        assert_eq!(z9.subgroup_generated(&z9.empty_subset()).unwrap().elements(), vec![0]);

        let h3 = build_heisenberg(3).unwrap();
        let xy = h3.subset(&[9, 3]).unwrap();
        assert_eq!(h3.subgroup_generated(&xy).unwrap().len(), 27);
        assert!(h3.is_normal(&h3.center()).unwrap());

        let f21 = build_semidirect_cyclic(7, 3, 2).unwrap();
        let c3 = f21.subgroup_generated(&f21.subset(&[1]).unwrap()).unwrap();
        assert_eq!(c3.len(), 3);
        assert!(!f21.is_normal(&c3).unwrap());
        assert!(matches!(
            f21.is_normal(&f21.subset(&[0, 1]).unwrap()),
            Err(Error::NotSubgroup(_))
        ));
        assert!(matches!(f21.quotient(&c3), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = build_cyclic(5).unwrap();
        let b = build_cyclic(7).unwrap();
        let x = a.subset(&[1]).unwrap();
        let y = b.subset(&[1]).unwrap();
        assert!(matches!(x.union(&y), Err(Error::GroupMismatch)));
        assert!(b.subgroup_generated(&x).is_err());
    }
}
