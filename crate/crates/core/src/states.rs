//! Dispersion-free (0-1) states.
//!
//! A 0-1 state gives every vertex the value 0 or 1 so that each edge holds
//! exactly one 1. A diagram with no such state has the Kochen-Specker
//! property.
//!
//! The search assigns vertices in order of descending edge-degree (ties by
//! alphabet), trying 1 before 0. A 1 forces 0 on every vertex sharing an edge
//! with it; an edge whose vertices are all 0 is a conflict; an edge with no 1
//! and a single free vertex forces that vertex to 1.

use crate::mmp::{MmpDiagram, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAssignment {
    vertices: Vec<VertexId>,
    values: Vec<bool>,
}

impl StateAssignment {
    pub fn new(vertices: Vec<VertexId>, values: Vec<bool>) -> StateAssignment {
        assert_eq!(vertices.len(), values.len());
        StateAssignment { vertices, values }
    }

    pub fn value(&self, v: VertexId) -> Option<bool> {
        self.vertices
            .iter()
            .position(|&u| u == v)
            .map(|i| self.values[i])
    }

    /// Vertices valued 1, in alphabet order.
    pub fn ones(&self) -> Vec<VertexId> {
        let mut ones: Vec<VertexId> = self
            .vertices
            .iter()
            .zip(&self.values)
            .filter(|(_, &b)| b)
            .map(|(&v, _)| v)
            .collect();
        ones.sort_unstable();
        ones
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, bool)> + '_ {
        self.vertices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    /// True iff the assignment covers every vertex of `d` and each edge of
    /// `d` has exactly one vertex valued 1.
    pub fn is_admissible(&self, d: &MmpDiagram) -> bool {
        if d.vertices().iter().any(|&v| self.value(v).is_none()) {
            return false;
        }
        d.edges().iter().all(|e| {
            e.vertices()
                .iter()
                .filter(|&&v| self.value(v) == Some(true))
                .count()
                == 1
        })
    }
}

const UNSET: u8 = 2;

/// Reusable 0-1 state search over dense vertex indices.
///
/// Buffers are kept between calls to [`StateSolver::load`], so sweeping many
/// small diagrams does not allocate per diagram.
#[derive(Debug, Default)]
pub struct StateSolver {
    edges: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    order: Vec<usize>,
    value: Vec<u8>,
    ones: Vec<u8>,
    zeros: Vec<u8>,
    trail: Vec<usize>,
    queue: Vec<(usize, u8)>,
    edge_count: usize,
}

impl StateSolver {
    pub fn new() -> StateSolver {
        StateSolver::default()
    }

    /// Loads a hypergraph on vertices `0..n`. Vertices on no edge are ignored.
    pub fn load<'a, I>(&mut self, n: usize, edges: I)
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        if self.vertex_edges.len() < n {
            self.vertex_edges.resize_with(n, Vec::new);
        }
        for ve in &mut self.vertex_edges[..n] {
            ve.clear();
        }
        self.edge_count = 0;
        for e in edges {
            if self.edges.len() == self.edge_count {
                self.edges.push(Vec::with_capacity(4));
            }
            let slot = &mut self.edges[self.edge_count];
            slot.clear();
            slot.extend_from_slice(e);
            for &v in e {
                self.vertex_edges[v].push(self.edge_count);
            }
            self.edge_count += 1;
        }
        self.order.clear();
        self.order
            .extend((0..n).filter(|&v| !self.vertex_edges[v].is_empty()));
        let ve = &self.vertex_edges;
        self.order
            .sort_by(|&a, &b| ve[b].len().cmp(&ve[a].len()).then(a.cmp(&b)));
        self.value.clear();
        self.value.resize(n, UNSET);
        self.ones.clear();
        self.ones.resize(self.edge_count, 0);
        self.zeros.clear();
        self.zeros.resize(self.edge_count, 0);
        self.trail.clear();
        self.queue.clear();
    }

    /// Searches for a state; on success the returned vector holds the value
    /// of every vertex `0..n` (vertices on no edge read 0).
    pub fn find(&mut self) -> Option<Vec<bool>> {
        let mut found = None;
        self.search(0, &mut |value| {
            found = Some(value.iter().map(|&x| x == 1).collect());
            true
        });
        self.reset_values();
        found
    }

    pub fn has_state(&mut self) -> bool {
        let found = self.search(0, &mut |_| true);
        self.reset_values();
        found
    }

    pub fn count(&mut self) -> u64 {
        let mut n = 0u64;
        self.search(0, &mut |_| {
            n += 1;
            false
        });
        self.reset_values();
        n
    }

    fn reset_values(&mut self) {
        let mark = 0;
        self.undo(mark);
    }

    /// Depth-first search; `visit` returns true to stop.
    fn search(&mut self, pos: usize, visit: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        let mut pos = pos;
        while pos < self.order.len() && self.value[self.order[pos]] != UNSET {
            pos += 1;
        }
        if pos == self.order.len() {
            return visit(&self.value);
        }
        let v = self.order[pos];
        for val in [1u8, 0u8] {
            let mark = self.trail.len();
            if self.assign(v, val) && self.search(pos + 1, visit) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn assign(&mut self, v: usize, val: u8) -> bool {
        self.queue.clear();
        self.queue.push((v, val));
        let mut ok = true;
        while let Some((u, val)) = self.queue.pop() {
            if self.value[u] != UNSET {
                if self.value[u] != val {
                    ok = false;
                    break;
                }
                continue;
            }
            self.value[u] = val;
            self.trail.push(u);
            for &e in &self.vertex_edges[u] {
                let edge = &self.edges[e];
                if val == 1 {
                    self.ones[e] += 1;
                    if self.ones[e] > 1 {
                        ok = false;
                    }
                    for &w in edge {
                        if self.value[w] == UNSET {
                            self.queue.push((w, 0));
                        }
                    }
                } else {
                    self.zeros[e] += 1;
                    if self.ones[e] == 0 {
                        let free = edge.len() - self.zeros[e] as usize;
                        if free == 0 {
                            ok = false;
                        } else if free == 1 {
                            if let Some(&w) = edge.iter().find(|&&w| self.value[w] == UNSET) {
                                self.queue.push((w, 1));
                            }
                        }
                    }
                }
            }
            if !ok {
                break;
            }
        }
        ok
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let u = self.trail.pop().unwrap();
            let val = self.value[u];
            for &e in &self.vertex_edges[u] {
                if val == 1 {
                    self.ones[e] -= 1;
                } else {
                    self.zeros[e] -= 1;
                }
            }
            self.value[u] = UNSET;
        }
    }
}

fn solver_for(d: &MmpDiagram) -> (StateSolver, Vec<VertexId>) {
    let inc = d.incidence();
    let mut solver = StateSolver::new();
    solver.load(inc.vertex_count(), inc.edges.iter().map(|e| e.as_slice()));
    (solver, inc.vertex_ids)
}

/// Some admissible 0-1 state of `d`, or `None` when `d` has none.
pub fn find_01_state(d: &MmpDiagram) -> Option<StateAssignment> {
    let (mut solver, ids) = solver_for(d);
    solver
        .find()
        .map(|values| StateAssignment::new(ids, values))
}

/// Exact number of admissible 0-1 states of `d`.
pub fn count_01_states(d: &MmpDiagram) -> u64 {
    let (mut solver, _) = solver_for(d);
    solver.count()
}

/// Kochen-Specker property: no admissible 0-1 state exists.
pub fn is_ks(d: &MmpDiagram) -> bool {
    let (mut solver, _) = solver_for(d);
    !solver.has_state()
}
