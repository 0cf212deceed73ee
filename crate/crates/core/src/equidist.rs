//! Exact joint distributions and equidistribution checks.

use crate::error::CombError;
use crate::invseq::inversion_sequences;
use crate::perm::permutations;
use crate::report::{CheckReport, Witness};
use crate::stat::{invseq_key, perm_key, Domain, StatKey, StatName};
use crate::Count;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::time::Instant;

/// Exact joint distribution of a statistic tuple over S_n or I_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub stats: Vec<StatName>,
    pub domain: Domain,
    pub n: usize,
    pub counts: BTreeMap<Vec<StatKey>, Count>,
}

impl Distribution {
    /// Sum of all counts; always n! for a full-domain distribution.
    pub fn total(&self) -> Count {
        let mut t = Count::zero();
        for c in self.counts.values() {
            t += c;
        }
        t
    }

    /// Renders a key tuple as `(a,b,{0,1})`.
    pub fn key_string(key: &[StatKey]) -> String {
        let parts: Vec<String> = key.iter().map(|k| k.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Builds the exact joint distribution by full enumeration.
pub fn joint_distribution(
    stats: &[StatName],
    n: usize,
    domain: Domain,
) -> Result<Distribution, CombError> {
    for &s in stats {
        if !s.applies_to(domain) {
            return Err(CombError::Domain(format!(
                "statistic `{s}` does not apply to domain {domain}"
            )));
        }
    }
    let mut counts: BTreeMap<Vec<StatKey>, Count> = BTreeMap::new();
    match domain {
        Domain::Permutations => {
            for p in permutations(n)? {
                *counts.entry(perm_key(&p, stats)?).or_default() += Count::one();
            }
        }
        Domain::InversionSequences => {
            for s in inversion_sequences(n)? {
                *counts.entry(invseq_key(&s, stats)?).or_default() += Count::one();
            }
        }
    }
    let dist = Distribution { stats: stats.to_vec(), domain, n, counts };
    debug_assert_eq!(dist.total(), factorial(n));
    Ok(dist)
}

pub fn factorial(n: usize) -> Count {
    let mut f = Count::one();
    for k in 2..=n {
        f *= Count::from(k);
    }
    f
}

/// One side of an equidistribution claim.
#[derive(Debug, Clone)]
pub struct Side {
    pub stats: Vec<StatName>,
    pub domain: Domain,
}

impl Side {
    pub fn perms(stats: &[StatName]) -> Self {
        Side { stats: stats.to_vec(), domain: Domain::Permutations }
    }

    pub fn invseqs(stats: &[StatName]) -> Self {
        Side { stats: stats.to_vec(), domain: Domain::InversionSequences }
    }
}

/// Checks that two statistic tuples (possibly on different domains) have
/// identical joint distributions for every n <= n_max.
pub fn check_equidistribution(
    id: &str,
    a: &Side,
    b: &Side,
    n_max: usize,
) -> Result<CheckReport, CombError> {
    if a.stats.len() != b.stats.len() {
        return Err(CombError::Domain(format!(
            "arity mismatch: {} vs {}",
            a.stats.len(),
            b.stats.len()
        )));
    }
    let start = Instant::now();
    for n in 1..=n_max {
        let da = joint_distribution(&a.stats, n, a.domain)?;
        let db = joint_distribution(&b.stats, n, b.domain)?;
        if let Some(w) = first_count_difference(&da, &db) {
            return Ok(CheckReport::fail(id, w, start.elapsed()).with_range(1, n));
        }
    }
    Ok(CheckReport::pass(id, start.elapsed()).with_range(1, n_max))
}

fn first_count_difference(da: &Distribution, db: &Distribution) -> Option<Witness> {
    let mut keys: std::collections::BTreeSet<&Vec<StatKey>> = da.counts.keys().collect();
    keys.extend(db.counts.keys());
    for key in keys {
        let ca = da.counts.get(key).cloned().unwrap_or_default();
        let cb = db.counts.get(key).cloned().unwrap_or_default();
        if ca != cb {
            return Some(Witness::Distribution {
                tuple: Distribution::key_string(key),
                count_a: ca.to_string(),
                count_b: cb.to_string(),
            });
        }
    }
    None
}

/// Scans the open quintuple claim: (asc, rep, zero, max, rmin) against
/// (asc, rep, zero, rmin, max) on I_n for all n <= n_max. A failure is a
/// counterexample to a published conjecture and is reported verbatim with
/// the full witness tuple.
pub fn check_conjecture_op2(n_max: usize) -> Result<CheckReport, CombError> {
    use StatName::*;
    check_equidistribution(
        "op2",
        &Side::invseqs(&[Asc, Rep, Zero, Max, Rmin]),
        &Side::invseqs(&[Asc, Rep, Zero, Rmin, Max]),
        n_max,
    )
}

/// The named equidistribution claims the acceptance suite runs.
pub fn claim(id: &str) -> Option<(Side, Side)> {
    use StatName::*;
    let c = match id {
        // Cross-domain quintuple transfer between S_n and I_n.
        "bv" => (
            Side::perms(&[Des, Ides, Lmin, Lmax, Rmax]),
            Side::invseqs(&[Asc, Dist, Max, Zero, Rmin]),
        ),
        // Quadruple symmetries of the (des, ides, rmax, lmin) family.
        "quad_vq_swap" => (
            Side::perms(&[Des, Ides, Rmax, Lmin]),
            Side::perms(&[Des, Ides, Lmin, Rmax]),
        ),
        "quad_xu_swap" => (
            Side::perms(&[Des, Ides, Rmax, Lmin]),
            Side::perms(&[Ides, Des, Rmax, Lmin]),
        ),
        // Triple symmetries of (des, ides, rmax).
        "triple_ides_lmin" => (
            Side::perms(&[Des, Ides, Rmax]),
            Side::perms(&[Ides, Des, Lmin]),
        ),
        "triple_des_lmin" => (
            Side::perms(&[Des, Ides, Rmax]),
            Side::perms(&[Des, Ides, Lmin]),
        ),
        "triple_ides_rmax" => (
            Side::perms(&[Des, Ides, Rmax]),
            Side::perms(&[Ides, Des, Rmax]),
        ),
        // des <-> ides exchange preserving all three Stirling statistics.
        "stirling_quad" => (
            Side::perms(&[Des, Lmax, Lmin, Rmax]),
            Side::perms(&[Ides, Lmax, Lmin, Rmax]),
        ),
        // Set-valued right-to-left-minima refinement.
        "rminset_quad" => (
            Side::invseqs(&[Asc, Zero, Max, RminSet]),
            Side::invseqs(&[Dist, Zero, Max, RminSet]),
        ),
        // iasc variant transferring lmax to lmin.
        "iasc_quad" => (
            Side::perms(&[Des, Iasc, Rmax, Lmax]),
            Side::perms(&[Iasc, Des, Lmax, Lmin]),
        ),
        _ => return None,
    };
    Some(c)
}
