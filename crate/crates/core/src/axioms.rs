//! The involutory quandle axioms and subsets of them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// `Q1: x▷x = x`, `Q2: (x▷y)▷y = x`, `Q3: (x▷y)▷z = (x▷z)▷(y▷z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    Q1,
    Q2,
    Q3,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::Q1, Axiom::Q2, Axiom::Q3];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Q1 => "Q1",
            Axiom::Q2 => "Q2'",
            Axiom::Q3 => "Q3",
        }
    }

    /// Axiom text in the prover's input syntax.
    pub fn text(self) -> &'static str {
        match self {
            Axiom::Q1 => "x * x = x.",
            Axiom::Q2 => "(x * y) * y = x.",
            Axiom::Q3 => "(x * z) * (y * z) = (x * y) * z.",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxiomSet(u8);

impl AxiomSet {
    pub const ALL: AxiomSet = AxiomSet(0b111);

    pub fn new(axioms: &[Axiom]) -> Self {
        AxiomSet(axioms.iter().fold(0, |m, &a| m | 1 << a as u8))
    }

    pub fn contains(self, a: Axiom) -> bool {
        self.0 & (1 << a as u8) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Axiom> {
        Axiom::ALL.into_iter().filter(move |&a| self.contains(a))
    }

    /// True when `self` has no axiom outside `other`.
    pub fn is_subset(self, other: AxiomSet) -> bool {
        self.0 & !other.0 == 0
    }
}

impl Default for AxiomSet {
    fn default() -> Self {
        Self::ALL
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Axiom::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Parses `1,2,3` (indices) or names such as `Q1,Q2',Q3`.
impl FromStr for AxiomSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let a = match tok.trim_start_matches(['Q', 'q']).trim_end_matches('\'') {
                "1" => Axiom::Q1,
                "2" => Axiom::Q2,
                "3" => Axiom::Q3,
                _ => return Err(format!("unknown axiom '{tok}'")),
            };
            out.push(a);
        }
        let set = AxiomSet::new(&out);
        if set.is_empty() {
            return Err("axiom set must be nonempty".into());
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s: AxiomSet = "2,3".parse().unwrap();
        assert!(!s.contains(Axiom::Q1) && s.contains(Axiom::Q2) && s.contains(Axiom::Q3));
        assert_eq!(s.to_string(), "{Q2',Q3}");
        assert_eq!("Q1,Q2',Q3".parse::<AxiomSet>().unwrap(), AxiomSet::ALL);
        assert!("".parse::<AxiomSet>().is_err());
        assert!("4".parse::<AxiomSet>().is_err());
        assert!(s.is_subset(AxiomSet::ALL));
    }
}
