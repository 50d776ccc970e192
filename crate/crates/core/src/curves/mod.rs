//! Point counting and singularity analysis for the curve models: the
//! trigonal plane quintic family, complete intersections of three quadrics
//! in `P^4`, and the invariant quadric triple.

mod quadric;
mod quintic;

pub use quadric::{
    count_p4_points, count_p4_range, invariant_triple_singularity, quadric_random_search, QuadricCase,
    QuadricSearchReport, QuadricSystem, TripleRecord, DEFAULT_P4_BUDGET,
};
pub use quintic::{
    count_plane_points, extra_singular_points, singular_locus, ModelFlag, PlaneCountReport, QuinticModel,
    SearchSummary, SearchTable, TrigonalEntry, TrigonalKernel, TrigonalMode, DEFAULT_PLANE_BUDGET,
};

use std::ops::Range;

/// `P^{n-1}(F_q)` with canonical representatives: first nonzero coordinate
/// equal to 1, listed in lexicographic order of their code vectors.
///
/// Index 0 is `[0:..:0:1]`; the last block holds the `q^{n-1}` points
/// `[1:*:..:*]`.
#[derive(Debug, Clone, Copy)]
pub struct ProjectiveSpace {
    q: u64,
    n: usize,
}

impl ProjectiveSpace {
    pub const MAX_COORDS: usize = 5;

    pub fn new(q: u64, n: usize) -> Self {
        assert!((1..=Self::MAX_COORDS).contains(&n));
        ProjectiveSpace { q, n }
    }

    pub fn coords(&self) -> usize {
        self.n
    }

    /// Number of points, `q^{n-1} + .. + q + 1`.
    pub fn len(&self) -> u128 {
        (0..self.n).map(|k| (self.q as u128).pow(k as u32)).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn block_size(&self, lead: usize) -> u128 {
        (self.q as u128).pow((self.n - 1 - lead) as u32)
    }

    /// Code vector of the point with the given index.
    pub fn point(&self, mut index: u128) -> [u64; Self::MAX_COORDS] {
        assert!(index < self.len(), "projective index out of range");
        let mut out = [0u64; Self::MAX_COORDS];
        for lead in (0..self.n).rev() {
            let size = self.block_size(lead);
            if index < size {
                out[lead] = 1;
                for pos in (lead + 1..self.n).rev() {
                    out[pos] = (index % self.q as u128) as u64;
                    index /= self.q as u128;
                }
                return out;
            }
            index -= size;
        }
        unreachable!()
    }

    /// Calls `visit` on every point with index in `range`, in order.
    pub fn for_each_in(&self, range: Range<u128>, mut visit: impl FnMut(&[u64])) {
        let end = range.end.min(self.len());
        if range.start >= end {
            return;
        }
        let mut pt = self.point(range.start);
        let mut lead = pt.iter().position(|&c| c != 0).expect("representatives are nonzero");
        for _ in range.start..end {
            visit(&pt[..self.n]);
            // odometer on the tail, then move to the next block
            let mut pos = self.n;
            loop {
                pos -= 1;
                if pos == lead {
                    pt[lead] = 0;
                    if lead == 0 {
                        return;
                    }
                    lead -= 1;
                    pt[lead] = 1;
                    break;
                }
                pt[pos] += 1;
                if pt[pos] < self.q {
                    break;
                }
                pt[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_sorted_and_complete() {
        for (q, n) in [(2u64, 3usize), (3, 5), (5, 2), (4, 3), (7, 1)] {
            let space = ProjectiveSpace::new(q, n);
            let mut all = Vec::new();
            space.for_each_in(0..space.len(), |p| all.push(p.to_vec()));
            assert_eq!(all.len() as u128, space.len());
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(all, sorted);
            for (i, p) in all.iter().enumerate() {
                assert_eq!(&space.point(i as u128)[..n], &p[..]);
                assert_eq!(p.iter().find(|&&c| c != 0), Some(&1));
            }
            // any split of the range visits the same points
            let mid = space.len() / 3;
            let mut split = Vec::new();
            space.for_each_in(0..mid, |p| split.push(p.to_vec()));
            space.for_each_in(mid..space.len(), |p| split.push(p.to_vec()));
            assert_eq!(split, all);
        }
        assert_eq!(ProjectiveSpace::new(61, 5).len(), 14_076_605);
    }
}
