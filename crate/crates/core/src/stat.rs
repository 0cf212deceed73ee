//! Statistic names, value keys, and per-domain evaluation dispatch.

use crate::error::CombError;
use crate::invseq::{InvStats, InversionSequence};
use crate::perm::{PermStats, Permutation};
use std::fmt;
use std::str::FromStr;

/// Which family of objects a distribution ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Domain {
    #[serde(rename = "permutations")]
    Permutations,
    #[serde(rename = "inversion_sequences")]
    InversionSequences,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Permutations => write!(f, "permutations"),
            Domain::InversionSequences => write!(f, "inversion_sequences"),
        }
    }
}

impl FromStr for Domain {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Self, CombError> {
        match s {
            "perm" | "permutations" => Ok(Domain::Permutations),
            "invseq" | "inversion_sequences" => Ok(Domain::InversionSequences),
            other => Err(CombError::Domain(format!("unknown domain `{other}`"))),
        }
    }
}

/// Every statistic the crate knows, across both domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatName {
    // Permutation statistics.
    Des,
    Ides,
    Iasc,
    Lmax,
    Lmin,
    Rmax,
    // Inversion-sequence statistics.
    Asc,
    Dist,
    Rep,
    Zero,
    Max,
    Rmin,
    Last,
    Czero,
    Ealz,
    Cmax,
    Ealm,
    /// The set-valued right-to-left-minima statistic.
    RminSet,
}

impl StatName {
    pub fn applies_to(self, domain: Domain) -> bool {
        use StatName::*;
        match domain {
            Domain::Permutations => matches!(self, Des | Ides | Iasc | Lmax | Lmin | Rmax),
            Domain::InversionSequences => !matches!(self, Des | Ides | Iasc | Lmax | Lmin | Rmax),
        }
    }

    pub fn name(self) -> &'static str {
        use StatName::*;
        match self {
            Des => "des",
            Ides => "ides",
            Iasc => "iasc",
            Lmax => "lmax",
            Lmin => "lmin",
            Rmax => "rmax",
            Asc => "asc",
            Dist => "dist",
            Rep => "rep",
            Zero => "zero",
            Max => "max",
            Rmin => "rmin",
            Last => "last",
            Czero => "czero",
            Ealz => "ealz",
            Cmax => "cmax",
            Ealm => "ealm",
            RminSet => "rminset",
        }
    }
}

impl fmt::Display for StatName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatName {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Self, CombError> {
        use StatName::*;
        Ok(match s {
            "des" => Des,
            "ides" => Ides,
            "iasc" => Iasc,
            "lmax" => Lmax,
            "lmin" => Lmin,
            "rmax" => Rmax,
            "asc" => Asc,
            "dist" => Dist,
            "rep" => Rep,
            "zero" => Zero,
            "max" => Max,
            "rmin" => Rmin,
            "last" => Last,
            "czero" => Czero,
            "ealz" => Ealz,
            "cmax" => Cmax,
            "ealm" => Ealm,
            "rminset" | "Rmin" => RminSet,
            other => return Err(CombError::Domain(format!("unknown statistic `{other}`"))),
        })
    }
}

/// One coordinate of a distribution key: a count, or a value set for Rmin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatKey {
    Num(u32),
    /// Canonicalized as a sorted value list.
    Set(Vec<u32>),
}

impl fmt::Display for StatKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatKey::Num(v) => write!(f, "{v}"),
            StatKey::Set(vs) => {
                write!(f, "{{")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl PermStats {
    pub fn get(&self, name: StatName) -> Result<StatKey, CombError> {
        use StatName::*;
        Ok(StatKey::Num(match name {
            Des => self.des,
            Ides => self.ides,
            Iasc => self.iasc,
            Lmax => self.lmax,
            Lmin => self.lmin,
            Rmax => self.rmax,
            other => {
                return Err(CombError::Domain(format!(
                    "statistic `{other}` is not a permutation statistic"
                )))
            }
        }))
    }
}

impl InvStats {
    pub fn get(&self, name: StatName) -> Result<StatKey, CombError> {
        use StatName::*;
        Ok(match name {
            Asc => StatKey::Num(self.asc),
            Dist => StatKey::Num(self.dist),
            Rep => StatKey::Num(self.rep),
            Zero => StatKey::Num(self.zero),
            Max => StatKey::Num(self.max),
            Rmin => StatKey::Num(self.rmin),
            Last => StatKey::Num(self.last),
            Czero => StatKey::Num(self.czero),
            Ealz => StatKey::Num(self.ealz),
            Cmax => StatKey::Num(self.cmax),
            Ealm => StatKey::Num(self.ealm),
            RminSet => StatKey::Set(self.rmin_set.clone()),
            other => {
                return Err(CombError::Domain(format!(
                    "statistic `{other}` is not an inversion-sequence statistic"
                )))
            }
        })
    }
}

/// Evaluates a statistic tuple on a permutation.
pub fn perm_key(p: &Permutation, stats: &[StatName]) -> Result<Vec<StatKey>, CombError> {
    let s = p.stats()?;
    stats.iter().map(|&name| s.get(name)).collect()
}

/// Evaluates a statistic tuple on an inversion sequence.
pub fn invseq_key(seq: &InversionSequence, stats: &[StatName]) -> Result<Vec<StatKey>, CombError> {
    let s = seq.stats()?;
    stats.iter().map(|&name| s.get(name)).collect()
}
