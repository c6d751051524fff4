//! Enumerated subset spaces and the sampler.

use rand::seq::index;
use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Largest subset space that is materialized.
pub const SPACE_LIMIT: u128 = 1 << 22;

/// Samples per independently seeded stream.
pub const SAMPLE_CHUNK: u64 = 8192;

/// Full spaces up to this order are listed in bit-vector order.
const FULL_ORDER_LIMIT: usize = 20;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = match c.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    c
}

/// Number of nonempty subsets of size at most `cap` of an `n`-set.
pub fn subset_count(n: usize, cap: usize) -> u128 {
    (1..=cap.min(n)).fold(0u128, |acc, k| acc.saturating_add(binom(n, k)))
}

/// All `k`-subsets of `0..n` in lexicographic order of their sorted
/// element lists.
pub fn combinations(n: usize, k: usize) -> Vec<Bits> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().copied().collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A uniformly random `k`-subset of `0..n`.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Bits {
    index::sample(rng, n, k).into_iter().collect()
}

/// The nonempty subsets of `0..n` with at most `cap` elements. A full space
/// of small order is listed in bit-vector order; otherwise by size, then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct Space {
    n: usize,
    cap: usize,
    full: bool,
    subsets: Vec<Bits>,
}

impl Space {
    pub fn new(n: usize, cap: usize) -> Result<Space> {
        let cap = cap.min(n);
        let count = subset_count(n, cap);
        if count > SPACE_LIMIT {
            return Err(Error::InvalidPlan(format!(
                "{count} subsets of size ≤ {cap} in a group of order {n} exceed the enumeration limit {SPACE_LIMIT}"
            )));
        }
        let full = cap == n && n <= FULL_ORDER_LIMIT;
        let subsets = if full {
            (1u64..1 << n).map(Bits::from_mask).collect()
        } else {
            (1..=cap).flat_map(|k| combinations(n, k)).collect()
        };
        Ok(Space { n, cap, full, subsets })
    }

    /// A space that is only sampled from, never listed.
    pub fn caps_only(n: usize, cap: usize) -> Space {
        Space {
            n,
            cap: cap.min(n),
            full: false,
            subsets: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Whether this is every nonempty subset, indexed by `mask − 1`.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn get(&self, i: usize) -> Bits {
        self.subsets[i]
    }

    pub fn subsets(&self) -> &[Bits] {
        &self.subsets
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn counts() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(125, 3), 317_750);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(subset_count(5, 5), 31);
        assert_eq!(subset_count(27, 2), 27 + 351);
        for (n, k) in [(6, 0), (6, 3), (7, 7), (9, 4)] {
            let c = combinations(n, k);
            assert_eq!(c.len() as u128, binom(n, k));
            assert!(c.windows(2).all(|w| w[0].to_vec() < w[1].to_vec()));
            assert!(c.iter().all(|b| b.len() == k));
        }
    }

    #[test]
    fn spaces() {
        let s = Space::new(5, 5).unwrap();
        assert!(s.is_full());
        assert_eq!(s.len(), 31);
        assert_eq!(s.get(4), Bits::from_mask(5));
        let s = Space::new(27, 2).unwrap();
        assert!(!s.is_full());
        assert_eq!(s.len(), 378);
        assert_eq!(s.get(0), Bits::singleton(0));
        assert_eq!(s.get(27), Bits::from_mask(3));
        assert!(Space::new(128, 128).is_err());
    }

    #[test]
    fn sampler() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 0..=10 {
            let b = random_subset(&mut rng, 10, k);
            assert_eq!(b.len(), k);
            assert!(b.iter().all(|x| x < 10));
        }
    }
}
