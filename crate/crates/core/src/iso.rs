//! Canonical forms, isomorphism and subgraph tests for MMP diagrams.
//!
//! The canonical form is the lexicographically least serialization among the
//! labelings reached by an individualization-refinement search: vertices are
//! split into ordered cells by repeated degree refinement, the first
//! non-singleton cell is individualized vertex by vertex, and each discrete
//! partition is a labeling. The search tree depends only on the isomorphism
//! class, so the minimum is a complete invariant. Subtrees that an already
//! discovered automorphism maps onto explored ones are skipped.

use std::collections::HashMap;
use std::fmt;

use crate::mmp::{Incidence, MmpDiagram, VertexId, ALPHABET};

/// Isomorphism-invariant key of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(d: &MmpDiagram) -> CanonicalForm {
    canonical_labeling(d).0
}

/// The diagram relabeled by its canonical labeling, edges sorted.
pub fn canonical_diagram(d: &MmpDiagram) -> MmpDiagram {
    let (_, labels) = canonical_labeling(d);
    let map: HashMap<VertexId, VertexId> = d.vertices().iter().copied().zip(labels).collect();
    d.relabel(|v| map[&v]).sorted()
}

/// Canonical key together with the new label of each vertex of `d` (in the
/// order of `d.vertices()`).
pub fn canonical_labeling(d: &MmpDiagram) -> (CanonicalForm, Vec<VertexId>) {
    let inc = d.incidence();
    let mut search = CanonSearch::new(&inc);
    let labels = search.run();
    let key = encode_key(&search.best.expect("at least one leaf"), inc.vertex_count());
    let ids = labels.into_iter().map(|l| VertexId(l as u32)).collect();
    (CanonicalForm(key), ids)
}

fn encode_key(flat: &[Vec<u32>], n: usize) -> String {
    let mut s = String::new();
    if n <= ALPHABET.len() {
        for (i, e) in flat.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.extend(e.iter().map(|&l| ALPHABET[l as usize] as char));
        }
        s.push('.');
    } else {
        s.push('#');
        for (i, e) in flat.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let parts: Vec<String> = e.iter().map(u32::to_string).collect();
            s.push_str(&parts.join(" "));
        }
    }
    s
}

type Cells = Vec<Vec<usize>>;

struct CanonSearch<'a> {
    inc: &'a Incidence,
    best: Option<Vec<Vec<u32>>>,
    best_labels: Vec<usize>,
    first: Option<(Vec<Vec<u32>>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> CanonSearch<'a> {
    fn new(inc: &'a Incidence) -> Self {
        CanonSearch {
            inc,
            best: None,
            best_labels: Vec::new(),
            first: None,
            automorphisms: Vec::new(),
        }
    }

    fn run(&mut self) -> Vec<usize> {
        let n = self.inc.vertex_count();
        let cells: Cells = if n == 0 {
            Vec::new()
        } else {
            vec![(0..n).collect()]
        };
        let mut path = Vec::new();
        self.search(cells, &mut path);
        std::mem::take(&mut self.best_labels)
    }

    fn search(&mut self, cells: Cells, path: &mut Vec<usize>) {
        let cells = refine(self.inc, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !tried.is_empty() && self.equivalent_to_tried(path, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            self.search(next, path);
            path.pop();
        }
    }

    /// Whether some known automorphism fixing `path` pointwise links `v` to a
    /// sibling already explored.
    fn equivalent_to_tried(&self, path: &[usize], tried: &[usize], v: usize) -> bool {
        let n = self.inc.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let nx = p[x];
                p[x] = r;
                x = nx;
            }
            r
        }
        let mut any = false;
        for g in &self.automorphisms {
            if path.iter().all(|&p| g[p] == p) {
                any = true;
                for x in 0..n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, cells: &Cells) {
        let n = self.inc.vertex_count();
        let mut labels = vec![0usize; n];
        for (i, c) in cells.iter().enumerate() {
            labels[c[0]] = i;
        }
        let form = relabeled_edges(self.inc, &labels);
        match &self.first {
            None => self.first = Some((form.clone(), labels.clone())),
            Some((f, flabels)) if *f == form => {
                let g = automorphism(flabels, &labels);
                self.automorphisms.push(g);
            }
            _ => {}
        }
        match &self.best {
            Some(b) if form > *b => {}
            Some(b) if form == *b => {
                let g = automorphism(&self.best_labels, &labels);
                self.automorphisms.push(g);
            }
            _ => {
                self.best = Some(form);
                self.best_labels = labels;
            }
        }
    }
}

/// The permutation `g` with `reference[g[v]] == labels[v]`.
fn automorphism(reference: &[usize], labels: &[usize]) -> Vec<usize> {
    let mut inverse = vec![0usize; reference.len()];
    for (v, &l) in reference.iter().enumerate() {
        inverse[l] = v;
    }
    labels.iter().map(|&l| inverse[l]).collect()
}

fn relabeled_edges(inc: &Incidence, labels: &[usize]) -> Vec<Vec<u32>> {
    let mut edges: Vec<Vec<u32>> = inc
        .edges
        .iter()
        .map(|e| {
            let mut le: Vec<u32> = e.iter().map(|&v| labels[v] as u32).collect();
            le.sort_unstable();
            le
        })
        .collect();
    edges.sort();
    edges
}

/// Splits cells by the multiset of cell-index profiles of each vertex's
/// edges until the partition is stable. New cells keep the order of their
/// parent cell and are ordered among themselves by profile.
fn refine(inc: &Incidence, mut cells: Cells) -> Cells {
    let n = inc.vertex_count();
    let mut cell_of = vec![0u32; n];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i as u32;
            }
        }
        let edge_profile: Vec<Vec<u32>> = inc
            .edges
            .iter()
            .map(|e| {
                let mut p: Vec<u32> = e.iter().map(|&v| cell_of[v]).collect();
                p.sort_unstable();
                p
            })
            .collect();
        let mut next: Cells = Vec::with_capacity(cells.len());
        for c in &cells {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<&Vec<u32>>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut sig: Vec<&Vec<u32>> = inc.vertex_edges[v]
                        .iter()
                        .map(|&e| &edge_profile[e])
                        .collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// True iff some vertex bijection maps the edge set of `a` onto that of `b`.
pub fn is_isomorphic(a: &MmpDiagram, b: &MmpDiagram) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.dim() != b.dim()
    {
        return false;
    }
    let degrees = |d: &MmpDiagram| {
        let mut ds: Vec<usize> = d.incidence().vertex_edges.iter().map(Vec::len).collect();
        ds.sort_unstable();
        ds
    };
    degrees(a) == degrees(b) && canonical_form(a) == canonical_form(b)
}

/// Witness of a subgraph relation: test edge `i` maps to reference edge
/// `pairs[i].1`, and each test vertex to the listed reference vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMapping {
    pub pairs: Vec<(usize, usize)>,
    pub vertex_map: Vec<(VertexId, VertexId)>,
}

impl EdgeMapping {
    /// Replays the mapping: the vertex map must be injective and carry every
    /// test edge onto its paired reference edge.
    pub fn verify(&self, test: &MmpDiagram, reference: &MmpDiagram) -> bool {
        let map: HashMap<VertexId, VertexId> = self.vertex_map.iter().copied().collect();
        let mut images: Vec<VertexId> = map.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != map.len() || map.len() != test.vertex_count() {
            return false;
        }
        let mut used = vec![false; reference.edge_count()];
        self.pairs.len() == test.edge_count()
            && self.pairs.iter().all(|&(t, r)| {
                let ok = r < reference.edge_count()
                    && !used[r]
                    && test.edges()[t].vertices().iter().all(|v| {
                        map.get(v)
                            .is_some_and(|img| reference.edges()[r].contains(*img))
                    });
                if r < used.len() {
                    used[r] = true;
                }
                ok
            })
    }

    /// The same mapping written with edge strings, e.g. `1234->ABCD`.
    pub fn describe(&self, test: &MmpDiagram, reference: &MmpDiagram) -> String {
        self.pairs
            .iter()
            .map(|&(t, r)| format!("{}->{}", test.edges()[t], reference.edges()[r]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Decides whether `test` embeds into `reference` edge by edge.
///
/// Test edges are taken one at a time (each next edge chosen to touch the
/// ones already placed when possible). A reference edge is a candidate image
/// for the next test edge when, for its vertices, the sets of already chosen
/// image edges containing them coincide as a multiset with the sets of
/// already placed test edges containing the test edge's vertices. Candidates
/// are tried in reference edge order; the search backtracks on failure.
pub fn is_subgraph(test: &MmpDiagram, reference: &MmpDiagram) -> Option<EdgeMapping> {
    let m = test.edge_count();
    if m > reference.edge_count() || test.dim() != reference.dim() {
        return None;
    }
    let ti = test.incidence();
    let ri = reference.incidence();
    let order = connected_order(&ti);
    let words = m.div_ceil(64).max(1);

    // Signatures of each test edge's vertices relative to the edges placed
    // before it, sorted as a multiset.
    let mut tsig = vec![0u64; ti.vertex_count() * words];
    let mut test_profiles: Vec<Vec<Vec<u64>>> = Vec::with_capacity(m);
    for (step, &e) in order.iter().enumerate() {
        let mut prof: Vec<Vec<u64>> = ti.edges[e]
            .iter()
            .map(|&v| tsig[v * words..(v + 1) * words].to_vec())
            .collect();
        prof.sort_unstable();
        test_profiles.push(prof);
        for &v in &ti.edges[e] {
            tsig[v * words + step / 64] |= 1 << (step % 64);
        }
    }

    let mut state = SubgraphSearch {
        ti: &ti,
        ri: &ri,
        order: &order,
        words,
        test_profiles: &test_profiles,
        test_full: &tsig,
        rsig: vec![0u64; ri.vertex_count() * words],
        used: vec![false; ri.edges.len()],
        chosen: Vec::with_capacity(m),
        result: None,
    };
    state.recurse(0);
    state.result.map(|(chosen, vmap)| {
        let mut pairs: Vec<(usize, usize)> = order.iter().copied().zip(chosen).collect();
        pairs.sort_unstable();
        let mut vertex_map: Vec<(VertexId, VertexId)> = vmap
            .into_iter()
            .enumerate()
            .map(|(u, r)| (ti.vertex_ids[u], ri.vertex_ids[r]))
            .collect();
        vertex_map.sort_unstable();
        EdgeMapping { pairs, vertex_map }
    })
}

/// Edge order where each next edge shares a vertex with an earlier one when
/// any such edge remains; ties by index.
fn connected_order(inc: &Incidence) -> Vec<usize> {
    let m = inc.edges.len();
    let mut placed = vec![false; m];
    let mut touched = vec![false; inc.vertex_count()];
    let mut order = Vec::with_capacity(m);
    while order.len() < m {
        let next = (0..m)
            .find(|&e| !placed[e] && inc.edges[e].iter().any(|&v| touched[v]))
            .or_else(|| (0..m).find(|&e| !placed[e]))
            .unwrap();
        placed[next] = true;
        for &v in &inc.edges[next] {
            touched[v] = true;
        }
        order.push(next);
    }
    order
}

struct SubgraphSearch<'a> {
    ti: &'a Incidence,
    ri: &'a Incidence,
    order: &'a [usize],
    words: usize,
    test_profiles: &'a [Vec<Vec<u64>>],
    test_full: &'a [u64],
    rsig: Vec<u64>,
    used: Vec<bool>,
    chosen: Vec<usize>,
    result: Option<(Vec<usize>, Vec<usize>)>,
}

impl SubgraphSearch<'_> {
    fn recurse(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            if let Some(vmap) = self.vertex_map() {
                self.result = Some((self.chosen.clone(), vmap));
                return true;
            }
            return false;
        }
        let w = self.words;
        let te = self.order[step];
        let size = self.ti.edges[te].len();
        for x in 0..self.ri.edges.len() {
            if self.used[x] || self.ri.edges[x].len() != size {
                continue;
            }
            let mut prof: Vec<&[u64]> = self.ri.edges[x]
                .iter()
                .map(|&v| &self.rsig[v * w..(v + 1) * w])
                .collect();
            prof.sort_unstable();
            if !prof
                .iter()
                .zip(&self.test_profiles[step])
                .all(|(a, b)| *a == b.as_slice())
            {
                continue;
            }
            self.used[x] = true;
            self.chosen.push(x);
            for &v in &self.ri.edges[x] {
                self.rsig[v * w + step / 64] |= 1 << (step % 64);
            }
            if self.recurse(step + 1) {
                return true;
            }
            for &v in &self.ri.edges[x] {
                self.rsig[v * w + step / 64] &= !(1 << (step % 64));
            }
            self.chosen.pop();
            self.used[x] = false;
        }
        false
    }

    /// Pairs test and reference vertices with identical full signatures and
    /// checks that the pairing carries every edge onto its image.
    fn vertex_map(&self) -> Option<Vec<usize>> {
        let w = self.words;
        let mut groups: HashMap<&[u64], (Vec<usize>, Vec<usize>)> = HashMap::new();
        for u in 0..self.ti.vertex_count() {
            groups
                .entry(&self.test_full[u * w..(u + 1) * w])
                .or_default()
                .0
                .push(u);
        }
        for r in 0..self.ri.vertex_count() {
            let sig = &self.rsig[r * w..(r + 1) * w];
            if sig.iter().any(|&x| x != 0) {
                groups.entry(sig).or_default().1.push(r);
            }
        }
        let mut map = vec![usize::MAX; self.ti.vertex_count()];
        for (tv, rv) in groups.values() {
            if tv.len() != rv.len() {
                return None;
            }
            for (&u, &r) in tv.iter().zip(rv) {
                map[u] = r;
            }
        }
        let ok = self.order.iter().zip(&self.chosen).all(|(&te, &x)| {
            self.ti.edges[te]
                .iter()
                .all(|&u| self.ri.edges[x].contains(&map[u]))
        });
        ok.then_some(map)
    }
}
