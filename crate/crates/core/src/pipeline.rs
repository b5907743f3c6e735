//! Classification of the KS subsets of Peres 24-24, criticality, containment
//! and loop analysis.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::catalog::{self, peres_24_24};
use crate::iso::{canonical_diagram, canonical_form, is_subgraph, CanonicalForm};
use crate::mmp::MmpDiagram;
use crate::states::{is_ks, StateSolver};
use crate::subsets::{edge_adjacency, has_isolated_edge};

pub const MIN_VERTICES: usize = 18;
pub const MIN_EDGES: usize = 9;
pub const MAX_VERTICES: usize = 24;
pub const MAX_EDGES: usize = 24;

/// Class counts keyed by (vertex count, edge count).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassificationTable {
    counts: BTreeMap<(usize, usize), u64>,
}

impl ClassificationTable {
    pub fn add(&mut self, vertices: usize, edges: usize) {
        *self.counts.entry((vertices, edges)).or_default() += 1;
    }

    pub fn cell(&self, vertices: usize, edges: usize) -> u64 {
        self.counts.get(&(vertices, edges)).copied().unwrap_or(0)
    }

    pub fn row_total(&self, vertices: usize) -> u64 {
        self.counts
            .iter()
            .filter(|((v, _), _)| *v == vertices)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn column_total(&self, edges: usize) -> u64 {
        self.counts
            .iter()
            .filter(|((_, e), _)| *e == edges)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    /// Rows 18..24 by columns 9..24 with row and column totals. Empty cells
    /// are left blank.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("vertices");
        for e in MIN_EDGES..=MAX_EDGES {
            write!(out, "\t{e}").unwrap();
        }
        out.push_str("\ttotal\n");
        let cell = |c: u64| if c == 0 { String::new() } else { c.to_string() };
        for v in MIN_VERTICES..=MAX_VERTICES {
            write!(out, "{v}").unwrap();
            for e in MIN_EDGES..=MAX_EDGES {
                write!(out, "\t{}", cell(self.cell(v, e))).unwrap();
            }
            writeln!(out, "\t{}", self.row_total(v)).unwrap();
        }
        out.push_str("total");
        for e in MIN_EDGES..=MAX_EDGES {
            write!(out, "\t{}", cell(self.column_total(e))).unwrap();
        }
        writeln!(out, "\t{}", self.grand_total()).unwrap();
        out
    }
}

/// One isomorphism class found by the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub key: CanonicalForm,
    /// The class member relabelled canonically.
    pub diagram: MmpDiagram,
    /// Smallest edge bitmask over Peres 24-24 that realizes the class.
    pub mask: u64,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub table: ClassificationTable,
    /// Sorted by (vertex count, edge count, key).
    pub representatives: Vec<Representative>,
    /// KS subsets below 18 vertices or 9 edges. Expected to be zero.
    pub small_ks_subsets: u64,
    /// KS subsets (not classes) inside the table's range.
    pub ks_subsets: u64,
}

impl Classification {
    /// Newline-delimited MMP text of the representatives.
    pub fn representatives_text(&self) -> String {
        self.representatives
            .iter()
            .map(|r| format!("{}\n", r.diagram))
            .collect()
    }
}

#[derive(Default)]
struct Shard {
    classes: HashMap<CanonicalForm, u64>,
    small: u64,
    ks: u64,
}

impl Shard {
    fn merge(mut self, other: Shard) -> Shard {
        for (k, m) in other.classes {
            self.classes
                .entry(k)
                .and_modify(|x| *x = (*x).min(m))
                .or_insert(m);
        }
        self.small += other.small;
        self.ks += other.ks;
        self
    }
}

const SHARD_BITS: u32 = 14;

/// Sweeps every edge subset of `master` (isolated-edge subsets suppressed),
/// keeps the KS ones with at least 18 vertices and 9 edges, and reduces
/// them to one representative per isomorphism class. Runs on the current
/// rayon pool; the result does not depend on the number of workers.
pub fn classify_ks_subsets(master: &MmpDiagram) -> Classification {
    let inc = master.incidence();
    let m = inc.edges.len();
    assert!(m < 64, "subset masks need fewer than 64 edges");
    assert!(
        inc.vertex_count() <= 64,
        "vertex masks need at most 64 vertices"
    );
    let adjacency = edge_adjacency(master);
    let vertex_masks: Vec<u64> = inc
        .edges
        .iter()
        .map(|e| e.iter().fold(0u64, |acc, &v| acc | 1 << v))
        .collect();
    let n = inc.vertex_count();
    let end = 1u64 << m;
    let shard = 1u64 << SHARD_BITS.min(m as u32);
    let starts: Vec<u64> = (0..end.div_ceil(shard)).map(|i| i * shard).collect();

    let total = starts
        .par_iter()
        .map(|&start| {
            let mut acc = Shard::default();
            let mut solver = StateSolver::new();
            let mut chosen: Vec<&[usize]> = Vec::with_capacity(m);
            for mask in start.max(1)..(start + shard).min(end) {
                if has_isolated_edge(&adjacency, mask) {
                    continue;
                }
                chosen.clear();
                let mut vmask = 0u64;
                let mut rest = mask;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    chosen.push(&inc.edges[i]);
                    vmask |= vertex_masks[i];
                }
                solver.load(n, chosen.iter().copied());
                if solver.has_state() {
                    continue;
                }
                let vertices = vmask.count_ones() as usize;
                if vertices < MIN_VERTICES || chosen.len() < MIN_EDGES {
                    acc.small += 1;
                    continue;
                }
                acc.ks += 1;
                let key = canonical_form(&master.select_mask(mask));
                acc.classes.entry(key).or_insert(mask);
            }
            acc
        })
        .reduce(Shard::default, Shard::merge);

    let mut table = ClassificationTable::default();
    let mut representatives: Vec<Representative> = total
        .classes
        .into_iter()
        .map(|(key, mask)| {
            let diagram = canonical_diagram(&master.select_mask(mask));
            table.add(diagram.vertex_count(), diagram.edge_count());
            Representative { key, diagram, mask }
        })
        .collect();
    representatives.sort_by(|a, b| {
        (a.diagram.vertex_count(), a.diagram.edge_count(), &a.key).cmp(&(
            b.diagram.vertex_count(),
            b.diagram.edge_count(),
            &b.key,
        ))
    });
    Classification {
        table,
        representatives,
        small_ks_subsets: total.small,
        ks_subsets: total.ks,
    }
}

/// Classification of the KS subsets of Peres 24-24.
pub fn reproduce_table1() -> Classification {
    classify_ks_subsets(&peres_24_24())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityReport {
    pub key: CanonicalForm,
    pub size: String,
    pub is_critical: bool,
    /// Canonical key of a critical proper KS subset, when one exists.
    pub witness: Option<CanonicalForm>,
}

/// A KS diagram is critical iff deleting any single edge (with the vertices
/// only that edge carried) leaves a diagram with a 0-1 state. Any proper
/// KS subset lies inside some single-edge deletion, and KS is preserved
/// under adding edges, so single deletions decide. For a non-critical set
/// the witness is reached by deleting edges greedily while the rest stays
/// KS, which ends at a critical subset.
pub fn criticality(d: &MmpDiagram) -> CriticalityReport {
    let key = canonical_form(d);
    let reducible = |x: &MmpDiagram| {
        (0..x.edge_count())
            .map(|i| x.delete_edge(i).expect("index in range"))
            .find(is_ks)
    };
    let witness = reducible(d).map(|mut cur| {
        while let Some(next) = reducible(&cur) {
            cur = next;
        }
        canonical_form(&cur)
    });
    CriticalityReport {
        key,
        size: d.size_label(),
        is_critical: witness.is_none(),
        witness,
    }
}

pub fn find_critical(reps: &[MmpDiagram]) -> Vec<CriticalityReport> {
    reps.par_iter().map(criticality).collect()
}

pub fn criticality_tsv(reports: &[CriticalityReport]) -> String {
    let mut out = String::from("name\tkey\tcritical\twitness\n");
    for r in reports {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.size,
            r.key,
            r.is_critical,
            r.witness.as_ref().map_or("", |w| w.as_str())
        )
        .unwrap();
    }
    out
}

/// Names of the six critical fixtures.
pub const CRITICAL_NAMES: [&str; 6] = ["18-9", "20-11a", "20-11b", "22-13a", "22-13b", "24-15"];

/// Whether `d` contains each critical fixture.
pub fn containment_report(d: &MmpDiagram) -> Vec<(&'static str, bool)> {
    CRITICAL_NAMES
        .iter()
        .map(|&name| {
            let fixture = catalog::get(name).expect("shipped fixture").diagram;
            (name, is_subgraph(&fixture, d).is_some())
        })
        .collect()
}

/// Length of the longest chordless cycle of at least three edges in which
/// cyclically consecutive edges share a vertex and all other pairs share
/// none; 0 when there is no such cycle.
pub fn max_edge_loop(d: &MmpDiagram) -> usize {
    let adjacency = edge_adjacency(d);
    let m = adjacency.len();
    let mut best = 0;
    for s in 0..m {
        // Cycles are enumerated from their smallest edge index.
        let allowed = !0u64 << s << 1;
        let mut path = vec![s];
        extend_loop(&adjacency, allowed, &mut path, 0, &mut best);
    }
    best
}

/// Extends the induced path `path` (starting at its lowest edge); `inner`
/// holds the interior path vertices, which new edges may not touch.
fn extend_loop(adj: &[u64], allowed: u64, path: &mut Vec<usize>, inner: u64, best: &mut usize) {
    let s = path[0];
    let last = *path.last().unwrap();
    let on_path = path.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut cand = adj[last] & allowed & !on_path;
    while cand != 0 {
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if adj[w] & inner != 0 {
            continue;
        }
        if path.len() >= 2 && adj[w] >> s & 1 == 1 {
            *best = (*best).max(path.len() + 1);
            continue;
        }
        let next_inner = if path.len() >= 2 {
            inner | 1 << last
        } else {
            inner
        };
        path.push(w);
        extend_loop(adj, allowed, path, next_inner, best);
        path.pop();
    }
}
