//! One-step extension maps on inversion sequences and their audit.
//!
//! Both maps extend an s of length n-1 to length n with prescribed last
//! entry j and prescribed right-to-left-minima set, the first making j a
//! fresh value (dist grows by one), the second re-using a value already
//! present (dist unchanged). The roundtrip verifier replays every instance
//! over I_{n-1} x {j}, audits the stated statistic changes, injectivity and
//! disjointness, and checks that the images tile I_n by the last-entry
//! distinct/repeated classification — reporting, not assuming, coverage.

use crate::error::CombError;
use crate::invseq::{inversion_sequences, InversionSequence};
use crate::report::{CheckReport, Witness};
use std::collections::BTreeMap;
use std::time::Instant;

/// Extends s by a *new* value j (j not previously representable as a value
/// of the result except at the end): shift the tail right of position j,
/// bump values >= j, rotate the below-j tail values into the gap, append j.
///
/// Requires 1 <= j <= |s| and max(Rmin(s)) < j. The result has dist raised
/// by one, Rmin enlarged by j, and j as its unique last occurrence.
pub fn extend_distinct(
    s: &InversionSequence,
    j: u32,
) -> Result<InversionSequence, CombError> {
    let n_old = s.len();
    if n_old == 0 {
        return Err(CombError::Precondition("cannot extend the empty sequence".into()));
    }
    if j == 0 || j as usize > n_old {
        return Err(CombError::Precondition(format!(
            "need 1 <= j <= {n_old}, got j = {j}"
        )));
    }
    let st = s.stats()?;
    let max_rmin = *st.rmin_set.last().unwrap();
    if max_rmin >= j {
        return Err(CombError::Precondition(format!(
            "max(Rmin) = {max_rmin} must be below j = {j}"
        )));
    }
    let jd = j as usize;
    let entries = s.entries();
    // 1-based slots 1..=n_old+1; None marks the migrating gap.
    let mut slots: Vec<Option<u32>> = vec![None; n_old + 2];
    for p in 1..=jd {
        slots[p] = Some(entries[p - 1]);
    }
    for p in jd + 1..=n_old {
        slots[p + 1] = Some(entries[p - 1]);
    }
    // bump values >= j so that j becomes fresh
    for slot in slots.iter_mut().flatten() {
        if *slot >= j {
            *slot += 1;
        }
    }
    // rotate below-j values toward the gap at j+1; the tail's last entry is
    // max(Rmin) < j, so the gap always ends up at the final position
    let below: Vec<usize> = (jd + 2..=n_old + 1)
        .filter(|&p| slots[p].is_some_and(|v| v < j))
        .collect();
    let mut gap = jd + 1;
    for &p in &below {
        slots[gap] = slots[p].take();
        gap = p;
    }
    debug_assert_eq!(gap, n_old + 1);
    slots[gap] = Some(j);
    let out: Vec<u32> = slots[1..].iter().map(|v| v.unwrap()).collect();
    InversionSequence::new(out)
        .map_err(|e| CombError::Precondition(format!("internal: invalid image ({e})")))
}

/// Extends s by a *repeated* value j.
///
/// Case 1 (last entry already j) appends j; so does the j = 0 extension
/// (a trailing zero is always a repeat and forces Rmin = {0}; the insertion
/// construction below is only ever claimed for 1 <= j <= n-2). Case 2
/// (last entry V >= j+1) inserts a run of k j's at position j+m+1 with
/// m = l-1-V for l the leftmost position of V and k the terminal run
/// length, shifts the tail right by k bumping values >= j+m, then removes
/// k-1 trailing copies of V+k and retargets the remaining ones to j.
///
/// Case 2 requires the executable domain derived from its own reverse
/// classification (leftmost j at position j+m+1, followed by its run):
/// the terminal value must actually bump (V >= j+m), and for m >= 1 the
/// value j must not already occur — stray copies of j break both the
/// dist bookkeeping and the leftmost-j reading. Inputs outside this
/// domain are precondition errors; the roundtrip verifier reports the
/// coverage they leave open rather than assuming the classification.
pub fn extend_repeated(
    s: &InversionSequence,
    j: u32,
) -> Result<InversionSequence, CombError> {
    let n_old = s.len();
    if n_old == 0 {
        return Err(CombError::Precondition("cannot extend the empty sequence".into()));
    }
    if j as usize > n_old - 1 {
        return Err(CombError::Precondition(format!(
            "j = {j} exceeds |s|-1 = {}",
            n_old - 1
        )));
    }
    let entries = s.entries();
    let last = *entries.last().unwrap();
    if last == j || j == 0 {
        let mut out = entries.to_vec();
        out.push(j);
        return Ok(InversionSequence::new(out).expect("appending last entry keeps validity"));
    }
    if last < j + 1 {
        return Err(CombError::Precondition(format!(
            "last entry {last} must equal j or be at least j+1 = {}",
            j + 1
        )));
    }
    // case 2
    let v = last;
    let l = entries.iter().position(|&e| e == v).unwrap() + 1; // 1-based
    let m = (l - 1) as u32 - v;
    let k = entries.iter().rev().take_while(|&&e| e == v).count();
    if v < j + m {
        return Err(CombError::Precondition(format!(
            "terminal value {v} below bump threshold j+m = {}",
            j + m
        )));
    }
    if m >= 1 && entries.contains(&j) {
        return Err(CombError::Precondition(format!(
            "value {j} already present with m = {m} >= 1"
        )));
    }
    let p = (j + m) as usize + 1; // insertion position, 1-based
    debug_assert!(p <= n_old);
    let mut out: Vec<u32> = Vec::with_capacity(n_old + k);
    out.extend_from_slice(&entries[..p - 1]);
    out.extend(std::iter::repeat_n(j, k));
    for &e in &entries[p - 1..] {
        out.push(if e >= j + m { e + k as u32 } else { e });
    }
    // drop k-1 trailing copies of v+k, then retarget the rest to j
    let target = v + k as u32;
    for _ in 1..k {
        let popped = out.pop();
        debug_assert_eq!(popped, Some(target));
    }
    for e in out.iter_mut() {
        if *e == target {
            *e = j;
        }
    }
    InversionSequence::new(out)
        .map_err(|e| CombError::Precondition(format!("internal: invalid image ({e})")))
}

fn fail(id: &str, start: Instant, n: usize, detail: String) -> CheckReport {
    CheckReport::fail(id, Witness::Map { detail }, start.elapsed()).with_range(1, n)
}

/// Records map images and flags duplicates with both preimages spelled out.
#[derive(Default)]
pub struct ImageLedger {
    images: BTreeMap<InversionSequence, (bool, InversionSequence, u32)>,
}

impl ImageLedger {
    /// Returns Err with a two-preimage witness when `image` was already
    /// produced by an earlier (preimage, j) pair.
    pub fn record(
        &mut self,
        image: InversionSequence,
        from_distinct: bool,
        preimage: &InversionSequence,
        j: u32,
    ) -> Result<(), String> {
        if let Some((_, prev, pj)) = self
            .images
            .insert(image.clone(), (from_distinct, preimage.clone(), j))
        {
            return Err(format!(
                "injectivity: {:?} reached from both ({:?}, {pj}) and ({:?}, {j})",
                image, prev, preimage
            ));
        }
        Ok(())
    }

    fn get(&self, image: &InversionSequence) -> Option<&(bool, InversionSequence, u32)> {
        self.images.get(image)
    }
}

/// Replays both extension maps over all of I_{n-1} for every n <= n_max and
/// audits: per-instance statistic changes, injectivity, disjointness of the
/// two images, and exhaustiveness of the last-entry classification.
pub fn roundtrip_verify(n_max: usize) -> Result<CheckReport, CombError> {
    let id = "tbij_roundtrip";
    let start = Instant::now();
    for n in 2..=n_max {
        let mut images = ImageLedger::default();
        for r in inversion_sequences(n - 1)? {
            let rst = r.stats()?;
            let max_rmin = *rst.rmin_set.last().unwrap();
            // distinct extensions: max(Rmin) < j <= n-1
            for j in max_rmin + 1..=(n as u32 - 1) {
                let s = extend_distinct(&r, j)?;
                let sst = s.stats()?;
                let mut expected_rmin = rst.rmin_set.clone();
                expected_rmin.push(j);
                if sst.dist != rst.dist + 1
                    || sst.zero != rst.zero
                    || sst.max != rst.max + u32::from(j == n as u32 - 1)
                    || sst.rmin_set != expected_rmin
                    || sst.last != j
                    || s.entries().iter().filter(|&&e| e == j).count() != 1
                {
                    return Ok(fail(
                        id,
                        start,
                        n,
                        format!("distinct map broke statistics: {:?} + {j} -> {:?}", r, s),
                    ));
                }
                if let Err(detail) = images.record(s, true, &r, j) {
                    return Ok(fail(id, start, n, detail));
                }
            }
            // repeated extensions: case 1 for j = last, case 2 for j < last
            let last = rst.last;
            for j in 0..=last {
                if j as usize > n - 2 {
                    break;
                }
                let s = match extend_repeated(&r, j) {
                    Ok(s) => s,
                    // outside the executable domain: skipped, and coverage
                    // below decides whether the tiling still closes
                    Err(CombError::Precondition(_)) if j != last => continue,
                    Err(e) => return Err(e),
                };
                let sst = s.stats()?;
                let expected_rmin: Vec<u32> = rst
                    .rmin_set
                    .iter()
                    .copied()
                    .filter(|&a| a <= j)
                    .chain((!rst.rmin_set.contains(&j)).then_some(j))
                    .collect();
                // a trailing zero is the one repeated extension that grows
                // the zero count
                let expected_zero = rst.zero + u32::from(j == 0);
                if sst.dist != rst.dist
                    || sst.zero != expected_zero
                    || sst.max != rst.max
                    || sst.rmin_set != expected_rmin
                    || sst.last != j
                    || s.entries().iter().filter(|&&e| e == j).count() < 2
                {
                    return Ok(fail(
                        id,
                        start,
                        n,
                        format!("repeated map broke statistics: {:?} + {j} -> {:?}", r, s),
                    ));
                }
                if let Err(detail) = images.record(s, false, &r, j) {
                    return Ok(fail(id, start, n, detail));
                }
            }
        }
        // exhaustiveness + classification
        for s in inversion_sequences(n)? {
            let last = *s.entries().last().unwrap();
            let unique = s.entries().iter().filter(|&&e| e == last).count() == 1;
            match images.get(&s) {
                None => {
                    return Ok(fail(
                        id,
                        start,
                        n,
                        format!(
                            "coverage hole: {:?} (last {} {}) has no preimage",
                            s,
                            last,
                            if unique { "distinct" } else { "repeated" }
                        ),
                    ));
                }
                Some((from_distinct, _, _)) => {
                    if *from_distinct != unique {
                        return Ok(fail(
                            id,
                            start,
                            n,
                            format!(
                                "classification: {:?} landed in the wrong image class",
                                s
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(CheckReport::pass(id, start.elapsed()).with_range(1, n_max))
}
