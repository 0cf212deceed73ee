//! Inversion sequences and their statistics.
//!
//! An inversion sequence of length n is a word (s_1, ..., s_n) with
//! 0 <= s_i <= i-1. The set I_n is equinumerous with S_n. Statistics:
//!
//! * asc: positions i with s_i < s_{i+1};
//! * dist: number of distinct values minus one (= distinct non-zero values);
//! * zero: number of zero entries; max: number of entries with s_i = i-1;
//! * rmin: number of right-to-left minima (values strictly below every
//!   later entry); Rmin is the set of those values; last = max(Rmin);
//! * czero: length of the initial run of zeros; ealz: entry after the last
//!   zero, with ealz = 0 when the word ends in 0;
//! * cmax: length of the initial strictly increasing run (necessarily the
//!   staircase 0,1,2,...); ealm: entry right after that run, 0 for the full
//!   staircase;
//! * rep = n - 1 - dist.

use crate::error::CombError;
use crate::DEFAULT_ENUM_BOUND;
use std::collections::BTreeSet;

/// An inversion sequence: 0 <= s_i <= i-1 for every 1-based position i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InversionSequence {
    entries: Vec<u32>,
}

/// The statistic vector of an inversion sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvStats {
    pub asc: u32,
    pub dist: u32,
    /// rep = n - 1 - dist.
    pub rep: u32,
    pub zero: u32,
    pub max: u32,
    /// Cardinality of `rmin_set`.
    pub rmin: u32,
    /// Last entry; always equals the largest element of `rmin_set`.
    pub last: u32,
    pub czero: u32,
    pub ealz: u32,
    pub cmax: u32,
    pub ealm: u32,
    /// Values that are strictly smaller than every entry to their right.
    pub rmin_set: Vec<u32>,
}

impl InversionSequence {
    /// Builds an inversion sequence, checking 0 <= s_i <= i-1.
    pub fn new(entries: Vec<u32>) -> Result<Self, CombError> {
        for (i, &e) in entries.iter().enumerate() {
            if e as usize > i {
                return Err(CombError::Domain(format!(
                    "entry s_{} = {} exceeds {}",
                    i + 1,
                    e,
                    i
                )));
            }
        }
        Ok(InversionSequence { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Entrywise complement s_i -> i - 1 - s_i; an involution that swaps the
    /// zero and max statistics.
    pub fn complement(&self) -> InversionSequence {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, &e)| i as u32 - e)
            .collect();
        InversionSequence { entries }
    }

    /// Computes all statistics at once. Errors on the empty sequence.
    pub fn stats(&self) -> Result<InvStats, CombError> {
        if self.entries.is_empty() {
            return Err(CombError::Domain("statistics of the empty sequence".into()));
        }
        let s = &self.entries;
        let n = s.len();

        let asc = s.windows(2).filter(|w| w[0] < w[1]).count() as u32;
        let values: BTreeSet<u32> = s.iter().copied().collect();
        let dist = values.len() as u32 - 1; // 0 is always present (s_1 = 0)
        let zero = s.iter().filter(|&&e| e == 0).count() as u32;
        let max = s
            .iter()
            .enumerate()
            .filter(|(i, &e)| e as usize == *i)
            .count() as u32;

        // Right-to-left minima: value strictly below everything to the right.
        let mut rmin_set = Vec::new();
        let mut lo = u32::MAX;
        for &e in s.iter().rev() {
            if e < lo {
                rmin_set.push(e);
                lo = e;
            }
        }
        rmin_set.reverse();

        let czero = s.iter().take_while(|&&e| e == 0).count() as u32;
        let ealz = if *s.last().unwrap() == 0 {
            0
        } else {
            let last_zero = s.iter().rposition(|&e| e == 0).unwrap();
            s[last_zero + 1]
        };

        // The initial strictly increasing run is forced to be 0,1,2,...
        let mut cmax = 1u32;
        while (cmax as usize) < n && s[cmax as usize] > s[cmax as usize - 1] {
            cmax += 1;
        }
        let ealm = if (cmax as usize) == n { 0 } else { s[cmax as usize] };

        Ok(InvStats {
            asc,
            dist,
            rep: n as u32 - 1 - dist,
            zero,
            max,
            rmin: rmin_set.len() as u32,
            last: *s.last().unwrap(),
            czero,
            ealz,
            cmax,
            ealm,
            rmin_set,
        })
    }
}

/// Iterator over I_n in lexicographic order (mixed-radix counting).
pub struct InvSeqIter {
    next: Option<Vec<u32>>,
}

impl Iterator for InvSeqIter {
    type Item = InversionSequence;

    fn next(&mut self) -> Option<InversionSequence> {
        let current = self.next.take()?;
        // Increment the rightmost position that can still grow (s_i <= i-1).
        let mut w = current.clone();
        let mut i = w.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            if (w[i - 1] as usize) < i - 1 {
                w[i - 1] += 1;
                for e in w.iter_mut().skip(i) {
                    *e = 0;
                }
                self.next = Some(w);
                break;
            }
            i -= 1;
        }
        Some(InversionSequence { entries: current })
    }
}

/// Enumerates I_n (n! sequences) in lexicographic order, default bound.
pub fn inversion_sequences(n: usize) -> Result<InvSeqIter, CombError> {
    inversion_sequences_bounded(n, DEFAULT_ENUM_BOUND)
}

/// Enumerates I_n with an explicit bound override.
pub fn inversion_sequences_bounded(n: usize, bound: usize) -> Result<InvSeqIter, CombError> {
    if n == 0 {
        return Err(CombError::Domain("n = 0: empty domain rejected".into()));
    }
    if n > bound {
        return Err(CombError::Resource { n, bound });
    }
    Ok(InvSeqIter { next: Some(vec![0; n]) })
}
