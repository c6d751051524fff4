use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every nonempty subset (or every subset meeting the theorem's size
    /// hypothesis).
    Exhaustive,
    /// Every nonempty subset up to the size caps.
    #[serde(alias = "capped")]
    SizeCapped,
    /// `samples` seeded draws.
    Sampled,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        Some(match s {
            "exhaustive" => Mode::Exhaustive,
            "capped" | "size_capped" | "size-capped" => Mode::SizeCapped,
            "sampled" => Mode::Sampled,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pruning {
    /// Keep one of `(A, B)` and `(−B, −A)`.
    pub use_inversion_symmetry: bool,
    /// Keep one pair per automorphism orbit.
    pub use_automorphism_orbits: bool,
}

impl Pruning {
    pub const NONE: Pruning = Pruning {
        use_inversion_symmetry: false,
        use_automorphism_orbits: false,
    };

    pub fn parse(s: &str) -> Option<Pruning> {
        let (inv, aut) = match s {
            "none" => (false, false),
            "inversion" => (true, false),
            "auto" => (false, true),
            "both" => (true, true),
            _ => return None,
        };
        Some(Pruning {
            use_inversion_symmetry: inv,
            use_automorphism_orbits: aut,
        })
    }

    pub fn is_none(&self) -> bool {
        !self.use_inversion_symmetry && !self.use_automorphism_orbits
    }
}

/// What to enumerate or sample. Identical plans give identical instance
/// streams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchPlan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub mode: Mode,
    /// Largest `|A|`; `None` for no cap.
    #[serde(default)]
    pub max_a: Option<usize>,
    #[serde(default)]
    pub max_b: Option<usize>,
    #[serde(default)]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub pruning: Pruning,
}

impl SearchPlan {
    pub fn exhaustive() -> Self {
        SearchPlan {
            group: None,
            mode: Mode::Exhaustive,
            max_a: None,
            max_b: None,
            samples: 0,
            seed: 0,
            pruning: Pruning::NONE,
        }
    }

    pub fn size_capped(max_a: usize, max_b: usize) -> Self {
        SearchPlan {
            mode: Mode::SizeCapped,
            max_a: Some(max_a),
            max_b: Some(max_b),
            ..SearchPlan::exhaustive()
        }
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        SearchPlan {
            mode: Mode::Sampled,
            samples,
            seed,
            ..SearchPlan::exhaustive()
        }
    }

    pub fn with_caps(mut self, max_a: usize, max_b: usize) -> Self {
        self.max_a = Some(max_a);
        self.max_b = Some(max_b);
        self
    }

    pub fn with_pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }

    pub fn with_group(mut self, name: impl Into<String>) -> Self {
        self.group = Some(name.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            Mode::Exhaustive if self.max_a.is_some() || self.max_b.is_some() => Err(Error::InvalidPlan(
                "exhaustive plans take no size caps; use size_capped".into(),
            )),
            Mode::SizeCapped if self.max_a.is_none() || self.max_b.is_none() => {
                Err(Error::InvalidPlan("size_capped plans need both caps".into()))
            }
            Mode::Sampled if self.samples == 0 => {
                Err(Error::InvalidPlan("sampled plans need at least one sample".into()))
            }
            _ if self.max_a == Some(0) || self.max_b == Some(0) => {
                Err(Error::InvalidPlan("size caps must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Cap on `|A|` for a group of order `n`.
    pub fn cap_a(&self, n: usize) -> usize {
        self.max_a.unwrap_or(n).min(n)
    }

    pub fn cap_b(&self, n: usize) -> usize {
        self.max_b.unwrap_or(n).min(n)
    }
}

/// Plans used when none is given: exhaustive up to order 12, otherwise
/// sizes capped at 4 plus a million seeded samples.
pub fn default_plans(order: usize) -> Vec<SearchPlan> {
    if order <= 12 {
        vec![SearchPlan::exhaustive()]
    } else {
        vec![SearchPlan::size_capped(4, 4), SearchPlan::sampled(1_000_000, 0)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SearchPlan::exhaustive().validate().is_ok());
        assert!(SearchPlan::exhaustive().with_caps(2, 2).validate().is_err());
        assert!(SearchPlan::sampled(0, 1).validate().is_err());
        assert!(SearchPlan::size_capped(0, 2).validate().is_err());
        assert!(SearchPlan::size_capped(3, 2).validate().is_ok());
    }

    #[test]
    fn serde_round_trip() {
        let plan = SearchPlan::sampled(10, 99).with_pruning(Pruning::parse("both").unwrap());
        let s = serde_json::to_string(&plan).unwrap();
        assert_eq!(serde_json::from_str::<SearchPlan>(&s).unwrap(), plan);
        let p: SearchPlan = serde_json::from_str(r#"{"mode":"capped","max_a":2,"max_b":3}"#).unwrap();
        assert_eq!(p, SearchPlan::size_capped(2, 3));
    }
}
