//! Permutations of {1..n} and their Euler-Stirling statistics.
//!
//! Statistics follow the classical definitions: des(pi) counts positions i
//! with pi_i > pi_{i+1}; ides(pi) = des of the inverse; lmax/lmin count
//! prefix record values; rmax counts suffix records. Positions and values
//! are 1-based at the interface.

use crate::error::CombError;
use crate::DEFAULT_ENUM_BOUND;

/// A permutation of {1, 2, ..., n}, stored as its one-line word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

/// The statistic vector of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermStats {
    pub des: u32,
    pub ides: u32,
    /// iasc = n - 1 - ides.
    pub iasc: u32,
    pub lmax: u32,
    pub lmin: u32,
    pub rmax: u32,
}

/// Structure-preserving transforms on permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermTransform {
    /// The group inverse.
    Inverse,
    /// pi^r = pi_n ... pi_1.
    Reverse,
    /// pi^c = (n+1-pi_1) ... (n+1-pi_n).
    Complement,
}

impl Permutation {
    /// Builds a permutation from its one-line word (values 1..=n, each once).
    pub fn new(values: Vec<u32>) -> Result<Self, CombError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(CombError::Domain(format!(
                    "value {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(CombError::Domain(format!("value {v} repeated")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { values })
    }

    /// The identity permutation 1 2 ... n.
    pub fn identity(n: usize) -> Self {
        Permutation { values: (1..=n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The one-line word, values 1..=n.
    pub fn word(&self) -> &[u32] {
        &self.values
    }

    /// Applies one of the three standard transforms.
    pub fn transform(&self, kind: PermTransform) -> Permutation {
        let n = self.values.len() as u32;
        let values = match kind {
            PermTransform::Inverse => {
                let mut inv = vec![0u32; n as usize];
                for (i, &v) in self.values.iter().enumerate() {
                    inv[v as usize - 1] = i as u32 + 1;
                }
                inv
            }
            PermTransform::Reverse => self.values.iter().rev().copied().collect(),
            PermTransform::Complement => self.values.iter().map(|&v| n + 1 - v).collect(),
        };
        Permutation { values }
    }

    /// Computes all six statistics at once. Errors on the empty permutation.
    pub fn stats(&self) -> Result<PermStats, CombError> {
        if self.values.is_empty() {
            return Err(CombError::Domain("statistics of the empty permutation".into()));
        }
        let n = self.values.len();
        let des = descents(&self.values);
        // ides goes through the explicit inverse word.
        let inv = self.transform(PermTransform::Inverse);
        let ides = descents(&inv.values);
        let mut lmax = 0u32;
        let mut lmin = 0u32;
        let mut hi = 0u32;
        let mut lo = u32::MAX;
        for &v in &self.values {
            if v > hi {
                lmax += 1;
                hi = v;
            }
            if v < lo {
                lmin += 1;
                lo = v;
            }
        }
        let mut rmax = 0u32;
        let mut hi = 0u32;
        for &v in self.values.iter().rev() {
            if v > hi {
                rmax += 1;
                hi = v;
            }
        }
        Ok(PermStats {
            des,
            ides,
            iasc: (n as u32) - 1 - ides,
            lmax,
            lmin,
            rmax,
        })
    }
}

fn descents(word: &[u32]) -> u32 {
    word.windows(2).filter(|w| w[0] > w[1]).count() as u32
}

/// Iterator over S_n in lexicographic order of the one-line word.
pub struct PermIter {
    next: Option<Vec<u32>>,
}

impl Iterator for PermIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        self.next = next_lex(&current);
        Some(Permutation { values: current })
    }
}

fn next_lex(word: &[u32]) -> Option<Vec<u32>> {
    let mut w = word.to_vec();
    let n = w.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    Some(w)
}

/// Enumerates S_n (n! permutations) in lexicographic order, against the
/// default bound.
pub fn permutations(n: usize) -> Result<PermIter, CombError> {
    permutations_bounded(n, DEFAULT_ENUM_BOUND)
}

/// Enumerates S_n with an explicit bound override.
pub fn permutations_bounded(n: usize, bound: usize) -> Result<PermIter, CombError> {
    if n == 0 {
        return Err(CombError::Domain("n = 0: empty domain rejected".into()));
    }
    if n > bound {
        return Err(CombError::Resource { n, bound });
    }
    Ok(PermIter { next: Some((1..=n as u32).collect()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(word: &[u32]) -> Permutation {
        Permutation::new(word.to_vec()).unwrap()
    }

    #[test]
    fn identity_stats() {
        for n in 1..=6usize {
            let s = Permutation::identity(n).stats().unwrap();
            assert_eq!(s.des, 0);
            assert_eq!(s.ides, 0);
            assert_eq!(s.lmax, n as u32);
            assert_eq!(s.lmin, 1);
            assert_eq!(s.rmax, 1);
        }
    }

    #[test]
    fn decreasing_stats() {
        for n in 1..=6usize {
            let word: Vec<u32> = (1..=n as u32).rev().collect();
            let s = p(&word).stats().unwrap();
            assert_eq!(s.des, n as u32 - 1);
            assert_eq!(s.lmax, 1);
            assert_eq!(s.lmin, n as u32);
            assert_eq!(s.rmax, n as u32);
        }
    }

    #[test]
    fn stats_312() {
        let s = p(&[3, 1, 2]).stats().unwrap();
        assert_eq!((s.des, s.ides, s.lmax, s.lmin, s.rmax), (1, 1, 1, 2, 2));
    }

    #[test]
    fn transforms_312() {
        assert_eq!(p(&[3, 1, 2]).transform(PermTransform::Reverse), p(&[2, 1, 3]));
        assert_eq!(p(&[3, 1, 2]).transform(PermTransform::Complement), p(&[1, 3, 2]));
        assert_eq!(p(&[3, 1, 2]).transform(PermTransform::Inverse), p(&[2, 3, 1]));
    }

    #[test]
    fn transform_involutions() {
        for perm in permutations(5).unwrap() {
            use PermTransform::*;
            assert_eq!(perm.transform(Reverse).transform(Reverse), perm);
            assert_eq!(perm.transform(Complement).transform(Complement), perm);
            assert_eq!(perm.transform(Inverse).transform(Inverse), perm);
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(permutations(1).unwrap().count(), 1);
        assert_eq!(permutations(3).unwrap().count(), 6);
        assert_eq!(permutations(8).unwrap().count(), 40320);
        let all: Vec<_> = permutations(3).unwrap().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[0], Permutation::identity(3));
    }

    #[test]
    fn enumeration_bounds() {
        assert!(matches!(permutations(0), Err(CombError::Domain(_))));
        assert!(matches!(permutations(11), Err(CombError::Resource { .. })));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }

    // Per-element transfer identities behind the equidistribution theorems.
    #[test]
    fn transfer_identities() {
        use PermTransform::*;
        for perm in permutations(6).unwrap() {
            let n = perm.len() as u32;
            let s = perm.stats().unwrap();
            let r = perm.transform(Reverse).stats().unwrap();
            let c = perm.transform(Complement).stats().unwrap();
            let i = perm.transform(Inverse).stats().unwrap();
            assert_eq!(s.ides, i.des);
            assert_eq!(r.des, n - 1 - s.des);
            assert_eq!(s.lmax, c.lmin);
            assert_eq!(s.rmax, r.lmax);
            // (des,ides,lmin,rmax) pi = (des,ides,rmax,lmin) (pi^c)^r
            let cr = perm.transform(Complement).transform(Reverse).stats().unwrap();
            assert_eq!(
                (s.des, s.ides, s.lmin, s.rmax),
                (cr.des, cr.ides, cr.rmax, cr.lmin)
            );
            // (des,ides,lmin,rmax) pi = (ides,des,lmin,rmax) pi^{-1}
            assert_eq!(
                (s.des, s.ides, s.lmin, s.rmax),
                (i.ides, i.des, i.lmin, i.rmax)
            );
        }
    }
}
