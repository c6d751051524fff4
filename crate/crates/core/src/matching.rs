//! Distinct representative sums: given ordered `A = (a_1, ..., a_n)` and
//! `B = (b_1, ..., b_m)` with `n + m − 1 ≤ p(G)`, pick `i_2, ..., i_n` such
//! that `a_1+b_1, ..., a_1+b_m, a_2+b_{i_2}, ..., a_n+b_{i_n}` are distinct.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingResult {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// `a_1 + b_k` for each `k`.
    pub base_sums: Vec<usize>,
    /// Index into `B` for each of `a_2, ..., a_n` (0-based).
    pub assignment: Vec<usize>,
    /// `a_j + b_{i_j}` for `j ≥ 2`.
    pub representative_sums: Vec<usize>,
}

fn check_elements(g: &FiniteGroup, xs: &[usize]) -> Result<()> {
    let mut seen = Bits::EMPTY;
    for &x in xs {
        if x >= g.order() {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: g.order(),
            });
        }
        if seen.contains(x) {
            return Err(Error::InvalidParameter(format!("element {x} repeated")));
        }
        seen.insert(x);
    }
    Ok(())
}

/// Augmenting-path matching of `a_2, ..., a_n` into the sets
/// `X_j = ({a_1, a_j} + B) ∖ (a_1 + B)`, scanning candidates in ascending
/// element order.
pub fn hall_representatives(g: &FiniteGroup, a: &[usize], b: &[usize]) -> Result<MatchingResult> {
    check_elements(g, a)?;
    check_elements(g, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("A and B must be nonempty".into()));
    }
    let p = g.least_prime_factor()?;
    let (n, m) = (a.len(), b.len());
    if n + m - 1 > p {
        return Err(Error::HallHypothesis { needed: n + m - 1, p });
    }
    let a1 = a[0];
    let base_sums: Vec<usize> = b.iter().map(|&y| g.op(a1, y)).collect();
    let base: Bits = base_sums.iter().copied().collect();

    // For each j ≥ 2, the sums a_j + b_k outside a_1 + B, keyed by element.
    let options: Vec<Vec<(usize, usize)>> = a[1..]
        .iter()
        .map(|&aj| {
            let mut v: Vec<(usize, usize)> = b
                .iter()
                .enumerate()
                .map(|(k, &y)| (g.op(aj, y), k))
                .filter(|(s, _)| !base.contains(*s))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; g.order()];
    let mut chosen: Vec<Option<(usize, usize)>> = vec![None; n - 1];
    for j in 0..n - 1 {
        let mut visited = Bits::EMPTY;
        if !augment(j, &options, &mut owner, &mut chosen, &mut visited) {
            return Err(Error::MatchingFailed);
        }
    }
    let chosen: Vec<(usize, usize)> = chosen.into_iter().map(|c| c.unwrap()).collect();
    Ok(MatchingResult {
        a: a.to_vec(),
        b: b.to_vec(),
        base_sums,
        assignment: chosen.iter().map(|&(_, k)| k).collect(),
        representative_sums: chosen.iter().map(|&(s, _)| s).collect(),
    })
}

fn augment(
    j: usize,
    options: &[Vec<(usize, usize)>],
    owner: &mut [Option<usize>],
    chosen: &mut [Option<(usize, usize)>],
    visited: &mut Bits,
) -> bool {
    for &(s, k) in &options[j] {
        if visited.contains(s) {
            continue;
        }
        visited.insert(s);
        let free = match owner[s] {
            None => true,
            Some(other) => augment(other, options, owner, chosen, visited),
        };
        if free {
            owner[s] = Some(j);
            chosen[j] = Some((s, k));
            return true;
        }
    }
    false
}

/// Runs the matching with each element of `A` in turn as the distinguished
/// `a_1`, returning the first success.
pub fn hall_representatives_any(g: &FiniteGroup, a: &[usize], b: &[usize]) -> Result<MatchingResult> {
    let mut last = Error::MatchingFailed;
    for i in 0..a.len() {
        let mut order = a.to_vec();
        order.swap(0, i);
        order[1..].sort_unstable();
        match hall_representatives(g, &order, b) {
            Ok(r) => return Ok(r),
            Err(Error::MatchingFailed) => last = Error::MatchingFailed,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Recomputes every sum from `a`, `b` and the assignment and checks that
/// all `m + n − 1` of them are distinct.
pub fn verify_sdr(g: &FiniteGroup, r: &MatchingResult) -> bool {
    if r.a.is_empty() || r.assignment.len() + 1 != r.a.len() || r.base_sums.len() != r.b.len() {
        return false;
    }
    let n = g.order();
    if r.a.iter().chain(&r.b).any(|&x| x >= n) {
        return false;
    }
    let mut seen = Bits::EMPTY;
    for (k, &y) in r.b.iter().enumerate() {
        let s = g.op(r.a[0], y);
        if r.base_sums[k] != s || seen.contains(s) {
            return false;
        }
        seen.insert(s);
    }
    for (j, &k) in r.assignment.iter().enumerate() {
        if k >= r.b.len() {
            return false;
        }
        let s = g.op(r.a[j + 1], r.b[k]);
        if r.representative_sums.get(j) != Some(&s) || seen.contains(s) {
            return false;
        }
        seen.insert(s);
    }
    true
}

/// `|⋃_{j∈J} X_j| ≥ |J|` for every nonempty `J ⊆ {2..n}`. Exponential in
/// `n`; meant for `n ≤ 12`.
pub fn hall_condition_holds(g: &FiniteGroup, a: &[usize], b: &[usize]) -> bool {
    if a.len() <= 1 {
        return true;
    }
    let base: Bits = b.iter().map(|&y| g.op(a[0], y)).collect();
    let xs: Vec<Bits> = a[1..]
        .iter()
        .map(|&aj| b.iter().map(|&y| g.op(aj, y)).collect::<Bits>().difference(&base))
        .collect();
    let k = xs.len();
    (1u32..1 << k).all(|mask| {
        let mut u = Bits::EMPTY;
        for (j, x) in xs.iter().enumerate() {
            if mask >> j & 1 == 1 {
                u.union_with(x);
            }
        }
        u.len() >= mask.count_ones() as usize
    })
}
