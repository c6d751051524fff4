//! Small finite fields `F_{p^α}` as polynomials over `F_p` modulo a fixed
//! irreducible.
//!
//! Element `k` has polynomial coordinates given by the base-`p` digits of `k`,
//! lowest degree first, so `0..p` is the prime subfield in its usual order.

use std::sync::OnceLock;

use crate::arith;
use crate::error::{Error, Result};

const MODULI: &str = include_str!("../data/irreducibles.txt");

/// Largest field order supported by the lookup tables.
pub const MAX_FIELD_ORDER: usize = 256;

/// A polynomial over `F_p`, lowest degree first, without trailing zeros
/// (the zero polynomial is empty).
pub type Poly = Vec<u32>;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    alpha: u32,
    size: usize,
    modulus: Poly,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// `(p, alpha, modulus)` entries parsed from the bundled moduli table.
pub fn modulus_table() -> &'static [(u32, u32, Poly)] {
    static TABLE: OnceLock<Vec<(u32, u32, Poly)>> = OnceLock::new();
    TABLE.get_or_init(|| parse_moduli(MODULI).expect("bundled moduli table is well formed"))
}

pub fn parse_moduli(text: &str) -> Result<Vec<(u32, u32, Poly)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("moduli line {}: {e}", lineno + 1)))?;
        if nums.len() < 3 || nums.len() != nums[1] as usize + 3 {
            return Err(Error::Parse(format!(
                "moduli line {}: expected p, alpha and alpha+1 coefficients",
                lineno + 1
            )));
        }
        out.push((nums[0], nums[1], nums[2..].to_vec()));
    }
    Ok(out)
}

impl FiniteField {
    /// The field of order `p^alpha`, using the bundled modulus table for
    /// `alpha > 1`.
    pub fn new(p: u32, alpha: u32) -> Result<Self> {
        if !arith::is_prime(p as u64) || alpha == 0 {
            return Err(Error::InvalidParameter(format!(
                "F_{{{p}^{alpha}}} is not a field order"
            )));
        }
        if alpha == 1 {
            return FiniteField::with_modulus(p, vec![0, 1]);
        }
        let modulus = modulus_table()
            .iter()
            .find(|(q, a, _)| *q == p && *a == alpha)
            .map(|(_, _, m)| m.clone())
            .ok_or(Error::FieldUnsupported { p, alpha })?;
        FiniteField::with_modulus(p, modulus)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        FiniteField::new(p, 1)
    }

    /// A field built from an explicit monic modulus, verified irreducible.
    pub fn with_modulus(p: u32, modulus: Poly) -> Result<Self> {
        if !arith::is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        let modulus = trim(modulus);
        let alpha = modulus.len().saturating_sub(1) as u32;
        if alpha == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(
                "modulus must be monic of positive degree with coefficients below p".into(),
            ));
        }
        let size = (p as usize).pow(alpha);
        if size > MAX_FIELD_ORDER {
            return Err(Error::FieldUnsupported { p, alpha });
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let mut f = FiniteField {
            p,
            alpha,
            size,
            modulus,
            add: vec![0; size * size],
            mul: vec![0; size * size],
            neg: vec![0; size],
            inv: vec![0; size],
        };
        f.fill_tables();
        Ok(f)
    }

    fn fill_tables(&mut self) {
        let q = self.size;
        let coords: Vec<Vec<u32>> = (0..q).map(|x| self.coords(x)).collect();
        for x in 0..q {
            for y in 0..q {
                let s: Vec<u32> = coords[x]
                    .iter()
                    .zip(&coords[y])
                    .map(|(a, b)| (a + b) % self.p)
                    .collect();
                self.add[x * q + y] = self.from_coords(&s) as u16;
                let prod = poly_rem(&poly_mul(&coords[x], &coords[y], self.p), &self.modulus, self.p);
                self.mul[x * q + y] = self.from_coords(&prod) as u16;
            }
        }
        for x in 0..q {
            self.neg[x] = (0..q).find(|&y| self.add[x * q + y] == 0).unwrap() as u16;
            self.inv[x] = if x == 0 {
                0
            } else {
                (1..q).find(|&y| self.mul[x * q + y] == 1).unwrap() as u16
            };
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn name(&self) -> String {
        if self.alpha == 1 {
            format!("F{}", self.p)
        } else {
            format!("F{}", self.size)
        }
    }

    /// Polynomial coordinates of `x`, lowest degree first, length `alpha`.
    pub fn coords(&self, x: usize) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.alpha as usize);
        let mut k = x;
        for _ in 0..self.alpha {
            v.push((k % self.p as usize) as u32);
            k /= self.p as usize;
        }
        v
    }

    /// Inverse of [`coords`](Self::coords); missing high coordinates are zero.
    pub fn from_coords(&self, c: &[u32]) -> usize {
        c.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p as usize + (d % self.p) as usize)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> usize {
        k.rem_euclid(self.p as i64) as usize
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: usize) -> Option<usize> {
        (x != 0).then(|| self.inv[x] as usize)
    }

    pub fn pow(&self, x: usize, e: u64) -> usize {
        let mut acc = 1;
        let mut b = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: usize) -> Option<usize> {
        if x == 0 {
            return None;
        }
        let mut k = 1;
        let mut y = x;
        while y != 1 {
            y = self.mul(y, x);
            k += 1;
        }
        Some(k)
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval(&self, poly: &[u32], x: usize) -> usize {
        poly.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c as usize))
    }
}

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm], 1);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - lead * c % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Irreducibility over `F_p`: a root scan for degree at most 3, otherwise
/// trial division by every monic polynomial of degree up to half.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let d = f.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let has_root = (0..p).any(|x| {
        f.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
            == 0
    });
    if has_root {
        return false;
    }
    if d <= 3 {
        return true;
    }
    for deg in 2..=d / 2 {
        let count = (p as usize).pow(deg as u32);
        for k in 0..count {
            let mut g: Poly = Vec::with_capacity(deg + 1);
            let mut t = k;
            for _ in 0..deg {
                g.push((t % p as usize) as u32);
                t /= p as usize;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_moduli_are_irreducible_and_primitive() {
        for (p, alpha, m) in modulus_table() {
            assert!(is_irreducible(m, *p), "F_{p}^{alpha}");
            let f = FiniteField::new(*p, *alpha).unwrap();
            // the class of x is index p
            let x = *p as usize;
            assert_eq!(f.multiplicative_order(x), Some(f.order() - 1), "F_{p}^{alpha}");
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for (p, a) in [(2, 3), (3, 2), (5, 2), (7, 1), (13, 1)] {
            let f = FiniteField::new(p, a).unwrap();
            let q = f.order();
            assert!((1..q).any(|x| f.multiplicative_order(x) == Some(q - 1)));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, a) in [(2, 2), (3, 2), (2, 3), (7, 2), (5, 1)] {
            let f = FiniteField::new(p, a).unwrap();
            let q = f.order();
            for x in 0..q {
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                }
                assert_eq!(f.add(x, f.neg(x)), 0);
                for y in 0..q {
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in 0..q {
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+2)(x+3) over F_5
        assert!(FiniteField::with_modulus(5, vec![1, 0, 1]).is_err());
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2, no roots
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(FiniteField::new(2, 7).is_err());
        assert!(FiniteField::new(4, 1).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let f = FiniteField::new(5, 2).unwrap();
        for x in 0..25 {
            assert_eq!(f.from_coords(&f.coords(x)), x);
        }
        assert_eq!(f.coords(7), vec![2, 1]);
    }
}
