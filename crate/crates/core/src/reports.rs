//! Report documents: JSON for machines, aligned text for people, CSV for
//! tables of instances.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::harness::{ExtremalScan, GroupDescriptor, SearchPlan, VerificationReport, Violation};

/// Bumped whenever a field changes meaning or is removed.
pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub name: String,
    pub order: usize,
    /// Least prime factor of the order; absent for the trivial group.
    pub p: Option<usize>,
    pub abelian: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub center_size: usize,
    /// Number of automorphisms, when they were enumerated.
    pub automorphisms: Option<usize>,
    pub table_hash: String,
}

impl GroupInfo {
    pub fn of(g: &FiniteGroup, automorphisms: Option<usize>) -> Self {
        GroupInfo {
            name: g.name().to_string(),
            order: g.order(),
            p: g.least_prime_factor().ok(),
            abelian: g.is_abelian(),
            nilpotent: g.is_nilpotent(),
            solvable: g.is_solvable(),
            center_size: g.center().len(),
            automorphisms,
            table_hash: g.table_hash(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportResult {
    Verification(VerificationReport),
    Extremal(ExtremalScan),
    GroupInfo(GroupInfo),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub group: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<SearchPlan>,
    pub results: Vec<ReportResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn new(group: GroupDescriptor, plan: Option<SearchPlan>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            group,
            plan,
            results: Vec::new(),
            timing: None,
        }
    }

    pub fn push(&mut self, r: ReportResult) {
        self.results.push(r);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group   {} (order {})", self.group.name, self.group.order);
        if let Some(plan) = &self.plan {
            let _ = writeln!(out, "plan    {}", plan_summary(plan));
        }
        for r in &self.results {
            out.push('\n');
            match r {
                ReportResult::Verification(v) => verification_text(&mut out, v),
                ReportResult::Extremal(s) => extremal_text(&mut out, s),
                ReportResult::GroupInfo(i) => info_text(&mut out, i),
            }
        }
        if let Some(t) = self.timing {
            let _ = writeln!(out, "\nwall time {:.3} s", t.wall_time_secs);
        }
        out
    }

    /// One CSV table: extremal instances if there are any scans, otherwise
    /// the stored violations.
    pub fn to_csv(&self) -> Result<String> {
        let scans: Vec<&ExtremalScan> = self
            .results
            .iter()
            .filter_map(|r| match r {
                ReportResult::Extremal(s) => Some(s),
                _ => None,
            })
            .collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        if scans.is_empty() {
            w.write_record(VIOLATION_HEADER)?;
            for r in &self.results {
                if let ReportResult::Verification(v) = r {
                    violation_rows(&mut w, v)?;
                }
            }
        } else {
            w.write_record(EXTREMAL_HEADER)?;
            for s in scans {
                extremal_rows(&mut w, s)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn plan_summary(plan: &SearchPlan) -> String {
    let mut s = format!("{:?}", plan.mode).to_lowercase();
    if let Some(a) = plan.max_a {
        let _ = write!(s, " max_a={a}");
    }
    if let Some(b) = plan.max_b {
        let _ = write!(s, " max_b={b}");
    }
    if plan.mode == crate::harness::Mode::Sampled {
        let _ = write!(s, " samples={} seed={}", plan.samples, plan.seed);
    }
    let p = plan.pruning;
    let prune = match (p.use_inversion_symmetry, p.use_automorphism_orbits) {
        (false, false) => "none",
        (true, false) => "inversion",
        (false, true) => "auto",
        (true, true) => "both",
    };
    let _ = write!(s, " prune={prune}");
    s
}

/// Space-separated element list, safe inside a CSV field.
fn list(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn opt_list(xs: &Option<Vec<usize>>) -> String {
    xs.as_deref().map(list).unwrap_or_default()
}

fn rows(out: &mut String, pairs: &[(&str, String)]) {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in pairs {
        let _ = writeln!(out, "  {k:<w$}  {v}");
    }
}

fn verification_text(out: &mut String, v: &VerificationReport) {
    let _ = writeln!(out, "{}  {:?}", v.theorem.id(), v.status);
    let mut pairs = vec![
        ("instances checked", v.instances_checked.to_string()),
        ("instances covered", v.covered_instances.to_string()),
        (
            "instances predicted",
            v.predicted_instances.map_or("-".to_string(), |p| p.to_string()),
        ),
        ("violations", v.violation_count.to_string()),
    ];
    pairs.extend(v.counters.iter().map(|(k, c)| (k.as_str(), c.to_string())));
    rows(out, &pairs);
    for n in &v.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    for x in v.violations.iter().take(20) {
        let _ = writeln!(out, "  {}", violation_line(x));
    }
    if v.violations.len() > 20 {
        let _ = writeln!(out, "  ... {} more stored", v.violations.len() - 20);
    }
}

fn violation_line(x: &Violation) -> String {
    let mut s = format!("{:?} A={{{}}}", x.check, list(&x.a));
    if let Some(b) = &x.b {
        let _ = write!(s, " B={{{}}}", list(b));
    }
    if let Some(sg) = &x.sigma {
        let _ = write!(s, " σ=[{}]", list(sg));
    }
    if let Some(g) = x.gamma {
        let _ = write!(s, " γ={g}");
    }
    let _ = write!(s, " lhs={} rhs={} weight={}", x.lhs, x.rhs, x.weight);
    s
}

fn extremal_text(out: &mut String, s: &ExtremalScan) {
    let _ = writeln!(out, "extremal {}", s.bound.name());
    rows(
        out,
        &[
            ("instances checked", s.instances_checked.to_string()),
            ("instances covered", s.covered_instances.to_string()),
            ("equality cases", s.instances.len().to_string()),
        ],
    );
    for n in &s.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    let table: Vec<[String; 5]> = s
        .instances
        .iter()
        .map(|i| {
            [
                format!("{{{}}}", list(&i.a)),
                i.b.as_deref().map_or(String::new(), |b| format!("{{{}}}", list(b))),
                i.lhs.to_string(),
                i.weight.to_string(),
                i.structure.as_ref().map_or(String::new(), |r| {
                    let ap = r.progression.map_or("no AP".to_string(), |(a, d)| format!("AP({a},{d})"));
                    let comm = if r.commutative { "commutative" } else { "noncommutative" };
                    format!("{comm} {ap}")
                }),
            ]
        })
        .collect();
    let head = ["A", "B", "size", "weight", "structure"].map(String::from);
    let mut widths = head.clone().map(|h| h.len());
    for row in &table {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    for row in std::iter::once(&head).chain(&table) {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        let _ = writeln!(out, "  {}", line.join("  ").trim_end());
    }
}

fn info_text(out: &mut String, i: &GroupInfo) {
    let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
    rows(
        out,
        &[
            ("name", i.name.clone()),
            ("order", i.order.to_string()),
            ("p(G)", i.p.map_or("-".to_string(), |p| p.to_string())),
            ("abelian", yn(i.abelian)),
            ("nilpotent", yn(i.nilpotent)),
            ("solvable", yn(i.solvable)),
            ("center size", i.center_size.to_string()),
            ("automorphisms", i.automorphisms.map_or("-".to_string(), |n| n.to_string())),
            ("table hash", i.table_hash.clone()),
        ],
    );
}

const EXTREMAL_HEADER: [&str; 10] = [
    "bound",
    "a",
    "b",
    "sigma",
    "lhs",
    "value",
    "weight",
    "commutative",
    "progression",
    "verdict",
];
const VIOLATION_HEADER: [&str; 9] = ["theorem", "check", "a", "b", "sigma", "gamma", "lhs", "rhs", "weight"];

/// The bare string a unit-like serde enum serializes to.
fn tag<T: Serialize>(x: &T, field: Option<&str>) -> String {
    let v = serde_json::to_value(x).unwrap_or_default();
    let v = field.map_or(Some(&v), |f| v.get(f));
    v.and_then(|v| v.as_str()).unwrap_or_default().to_string()
}

fn extremal_rows(w: &mut csv::Writer<Vec<u8>>, s: &ExtremalScan) -> Result<()> {
    for i in &s.instances {
        let (comm, ap, verdict) = match &i.structure {
            Some(r) => (
                r.commutative.to_string(),
                r.progression.map_or(String::new(), |(a, d)| format!("{a} {d}")),
                tag(&r.verdict, Some("verdict")),
            ),
            None => Default::default(),
        };
        w.write_record([
            s.bound.name().to_string(),
            list(&i.a),
            opt_list(&i.b),
            opt_list(&i.sigma),
            i.lhs.to_string(),
            i.bound.to_string(),
            i.weight.to_string(),
            comm,
            ap,
            verdict,
        ])?;
    }
    Ok(())
}

fn violation_rows(w: &mut csv::Writer<Vec<u8>>, v: &VerificationReport) -> Result<()> {
    for x in &v.violations {
        w.write_record([
            v.theorem.id().to_string(),
            tag(&x.check, None),
            list(&x.a),
            opt_list(&x.b),
            opt_list(&x.sigma),
            x.gamma.map_or(String::new(), |g| g.to_string()),
            x.lhs.to_string(),
            x.rhs.to_string(),
            x.weight.to_string(),
        ])?;
    }
    Ok(())
}
