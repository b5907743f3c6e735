//! Edge-subset enumeration and isomorph rejection.
//!
//! Subsets are visited by a binary counter over edge-index bitmasks, in
//! ascending order, and streamed one at a time. With suppression on, a subset
//! is skipped when one of its edges shares no vertex with any other edge of
//! the subset; this drops every single-edge subset.

use std::collections::HashSet;
use std::ops::Range;

use crate::iso::{canonical_form, CanonicalForm};
use crate::mmp::MmpDiagram;

/// Per-edge bitmask of the other edges it shares a vertex with.
pub fn edge_adjacency(d: &MmpDiagram) -> Vec<u64> {
    let edges = d.edges();
    assert!(edges.len() < 64, "subset masks need fewer than 64 edges");
    (0..edges.len())
        .map(|i| {
            (0..edges.len())
                .filter(|&j| j != i && edges[i].shared(&edges[j]) > 0)
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect()
}

/// True iff some edge of `mask` touches no other edge of `mask`.
pub fn has_isolated_edge(adjacency: &[u64], mask: u64) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adjacency[i] & mask == 0 {
            return true;
        }
    }
    false
}

/// Streaming iterator over the nonempty edge subsets of a diagram.
pub struct EdgeSubsets<'a> {
    diagram: &'a MmpDiagram,
    adjacency: Vec<u64>,
    suppress_isolated: bool,
    next: u64,
    end: u64,
}

impl<'a> EdgeSubsets<'a> {
    /// Restricts the sweep to the bitmasks in `range` (clamped to the valid
    /// masks), for sharding.
    pub fn range(diagram: &'a MmpDiagram, suppress_isolated: bool, range: Range<u64>) -> Self {
        let adjacency = edge_adjacency(diagram);
        let full = 1u64 << diagram.edge_count();
        EdgeSubsets {
            diagram,
            adjacency,
            suppress_isolated,
            next: range.start.max(1),
            end: range.end.min(full),
        }
    }
}

impl Iterator for EdgeSubsets<'_> {
    type Item = MmpDiagram;

    fn next(&mut self) -> Option<MmpDiagram> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if self.suppress_isolated && has_isolated_edge(&self.adjacency, mask) {
                continue;
            }
            return Some(self.diagram.select_mask(mask));
        }
        None
    }
}

/// All nonempty edge subsets of `d` in ascending bitmask order, each kept
/// edge in its original relative order. `d` must have fewer than 64 edges.
pub fn enumerate_edge_subsets(d: &MmpDiagram, suppress_isolated: bool) -> EdgeSubsets<'_> {
    EdgeSubsets::range(d, suppress_isolated, 1..u64::MAX)
}

/// Keeps the first diagram seen from each isomorphism class.
pub struct DedupIsomorphs<I> {
    inner: I,
    seen: HashSet<CanonicalForm>,
}

impl<I: Iterator<Item = MmpDiagram>> Iterator for DedupIsomorphs<I> {
    type Item = MmpDiagram;

    fn next(&mut self) -> Option<MmpDiagram> {
        let seen = &mut self.seen;
        self.inner.find(|d| seen.insert(canonical_form(d)))
    }
}

pub fn dedup_isomorphs<I>(stream: I) -> DedupIsomorphs<I::IntoIter>
where
    I: IntoIterator<Item = MmpDiagram>,
{
    DedupIsomorphs {
        inner: stream.into_iter(),
        seen: HashSet::new(),
    }
}
