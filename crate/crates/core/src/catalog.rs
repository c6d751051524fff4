//! Groups addressable by name.
//!
//! Parametric names: `Z<n>` (n ≤ 128), `Z<a>xZ<b>[xZ<c>...]`, `Z<p>^<k>`,
//! `D<n>` (dihedral of order 2n). Fixed names: `Heis3`, `Heis5`, `F20`,
//! `F21`, `F55`, `Q8`, `S3`, `A4`, `Dic3`.

use crate::error::{Error, Result};
use crate::group::{
    build_cyclic, build_direct_product, build_heisenberg, build_semidirect_cyclic, FiniteGroup, GroupLimits,
};

/// Largest cyclic order reachable by name.
pub const MAX_CYCLIC: usize = 128;

const NAMED: &[(&str, &str)] = &[
    ("Heis3", "Heisenberg group mod 3, order 27"),
    ("Heis5", "Heisenberg group mod 5, order 125"),
    ("F20", "Z5 ⋊ Z4, order 20"),
    ("F21", "Z7 ⋊ Z3, order 21"),
    ("F55", "Z11 ⋊ Z5, order 55"),
    ("Q8", "quaternion group, order 8"),
    ("S3", "symmetric group on 3 points, order 6"),
    ("A4", "alternating group on 4 points, order 12"),
    ("Dic3", "dicyclic group Z3 ⋊ Z4, order 12"),
];

/// One line per catalog entry, for help output and error messages.
pub fn listing() -> Vec<String> {
    let mut out = vec![
        format!("Z<n>            cyclic, 1 ≤ n ≤ {MAX_CYCLIC}"),
        "Z<a>xZ<b>[...]  direct product of cyclic groups".to_string(),
        "Z<p>^<k>        elementary abelian".to_string(),
        "D<n>            dihedral of order 2n, n ≥ 3".to_string(),
    ];
    out.extend(NAMED.iter().map(|(n, d)| format!("{n:<15} {d}")));
    out
}

fn unknown(name: &str) -> Error {
    Error::UnknownGroup {
        name: name.to_string(),
        known: listing().join("\n"),
    }
}

fn parse_cyclic(s: &str) -> Option<usize> {
    let n: usize = s.strip_prefix('Z').or_else(|| s.strip_prefix('z'))?.parse().ok()?;
    (1..=MAX_CYCLIC).contains(&n).then_some(n)
}

/// Resolves a catalog name.
pub fn resolve(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some(&(canonical, _)) = NAMED.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)) {
        return build_named(canonical);
    }
    if let Some(n) = parse_cyclic(name) {
        return build_cyclic(n);
    }
    if let Some((base, exp)) = name.split_once('^') {
        let p = parse_cyclic(base).ok_or_else(|| unknown(name))?;
        let k: u32 = exp.parse().map_err(|_| unknown(name))?;
        if k == 0 || (p as u64).checked_pow(k).is_none_or(|n| n > crate::bits::MAX_ORDER as u64) {
            return Err(unknown(name));
        }
        return power(p, k as usize, name);
    }
    if name.contains(['x', 'X']) {
        let factors: Option<Vec<usize>> = name.split(['x', 'X']).map(parse_cyclic).collect();
        let factors = factors.ok_or_else(|| unknown(name))?;
        let total = factors.iter().try_fold(1usize, |acc, &f| acc.checked_mul(f));
        if total.is_none_or(|n| n > crate::bits::MAX_ORDER) {
            return Err(unknown(name));
        }
        let mut g = build_cyclic(factors[0])?;
        for &f in &factors[1..] {
            g = build_direct_product(&g, &build_cyclic(f)?)?;
        }
        return Ok(g);
    }
    if let Some(n) = name.strip_prefix(['D', 'd']).and_then(|s| s.parse::<usize>().ok()) {
        if n >= 3 && 2 * n <= crate::bits::MAX_ORDER {
            return Ok(build_semidirect_cyclic(n, 2, n - 1)?.with_name(format!("D{n}")));
        }
    }
    Err(unknown(name))
}

fn power(p: usize, k: usize, name: &str) -> Result<FiniteGroup> {
    let base = build_cyclic(p)?;
    let mut g = base.clone();
    for _ in 1..k {
        g = build_direct_product(&g, &base)?;
    }
    Ok(g.with_name(name.to_string()))
}

fn build_named(name: &str) -> Result<FiniteGroup> {
    let g = match name {
        "Heis3" => build_heisenberg(3)?,
        "Heis5" => build_heisenberg(5)?,
        "F20" => build_semidirect_cyclic(5, 4, 2)?,
        "F21" => build_semidirect_cyclic(7, 3, 2)?,
        "F55" => build_semidirect_cyclic(11, 5, 3)?,
        "S3" => build_semidirect_cyclic(3, 2, 2)?,
        "Dic3" => build_semidirect_cyclic(3, 4, 2)?,
        "Q8" => quaternion()?,
        "A4" => alternating4()?,
        _ => return Err(unknown(name)),
    };
    Ok(g.with_name(name))
}

/// `±1, ±i, ±j, ±k` numbered `1, −1, i, −i, j, −j, k, −k`.
fn quaternion() -> Result<FiniteGroup> {
    // unit products among 1, i, j, k as (sign, unit)
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let table = (0..64)
        .map(|k| {
            let (x, y) = (k / 8, k % 8);
            let (neg, u) = UNIT[x / 2][y / 2];
            let neg = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
            2 * u + neg as usize
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table("Q8", 8, table, Some(labels), &GroupLimits::default())
}

/// Even permutations of four points in lexicographic order, composed as
/// `(x + y)(i) = x(y(i))`.
fn alternating4() -> Result<FiniteGroup> {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct && inversions(&p).is_multiple_of(2) {
                        perms.push(p);
                    }
                }
            }
        }
    }
    let index = |p: &[usize; 4]| perms.iter().position(|q| q == p).unwrap();
    let n = perms.len();
    let table = (0..n * n)
        .map(|k| {
            let (x, y) = (&perms[k / n], &perms[k % n]);
            index(&[x[y[0]], x[y[1]], x[y[2]], x[y[3]]])
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
        .collect();
    FiniteGroup::from_table("A4", n, table, Some(labels), &GroupLimits::default())
}

fn inversions(p: &[usize; 4]) -> usize {
    (0..4).map(|i| (i + 1..4).filter(|&j| p[i] > p[j]).count()).sum()
}

/// One representative of every isomorphism type the catalog can name with
/// `2 ≤ |G| ≤ max_order`, in a fixed order.
pub fn standard_groups(max_order: usize) -> Result<Vec<FiniteGroup>> {
    let mut names: Vec<String> = (2..=max_order.min(MAX_CYCLIC)).map(|n| format!("Z{n}")).collect();
    for a in 2..=max_order {
        for b in (a..=max_order / a).filter(|b| b % a == 0) {
            names.push(format!("Z{a}xZ{b}"));
        }
    }
    if max_order >= 8 {
        names.push("Z2xZ2xZ2".into());
    }
    for n in 3..=max_order / 2 {
        names.push(format!("D{n}"));
    }
    names.retain(|s| s != "D3");
    for (name, order) in [
        ("S3", 6),
        ("Q8", 8),
        ("Dic3", 12),
        ("A4", 12),
        ("F20", 20),
        ("F21", 21),
        ("Heis3", 27),
        ("F55", 55),
        ("Heis5", 125),
    ] {
        if order <= max_order {
            names.push(name.into());
        }
    }
    names.iter().map(|n| resolve(n)).collect()
}
