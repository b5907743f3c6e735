use std::collections::{BTreeSet, HashMap};

use ks_forge::mmp::{Edge, MmpDiagram, VertexId};

pub fn relabel(d: &MmpDiagram, perm: &[u32]) -> MmpDiagram {
    let map: HashMap<VertexId, VertexId> = d
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(perm[i])))
        .collect();
    d.relabel(|v| map[&v])
}

pub fn brute_force_states(d: &MmpDiagram) -> u64 {
    let inc = d.incidence();
    (0u64..1 << inc.vertex_count())
        .filter(|bits| {
            inc.edges
                .iter()
                .all(|e| e.iter().filter(|&&v| bits >> v & 1 == 1).count() == 1)
        })
        .count() as u64
}

fn edge_set(edges: &[Edge], map: &dyn Fn(VertexId) -> VertexId) -> BTreeSet<Vec<VertexId>> {
    edges
        .iter()
        .map(|e| {
            let mut v: Vec<VertexId> = e.vertices().iter().map(|&x| map(x)).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Tries every bijection between the vertex sets.
pub fn brute_force_isomorphic(a: &MmpDiagram, b: &MmpDiagram) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let target = edge_set(b.edges(), &|v| v);
    let av = a.vertices().to_vec();
    let mut images = b.vertices().to_vec();
    let n = images.len();
    let mut c = vec![0usize; n];
    let check = |images: &[VertexId]| {
        let map: HashMap<VertexId, VertexId> =
            av.iter().copied().zip(images.iter().copied()).collect();
        edge_set(a.edges(), &|v| map[&v]) == target
    };
    if check(&images) {
        return true;
    }
    // Heap's algorithm.
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                images.swap(0, i);
            } else {
                images.swap(c[i], i);
            }
            if check(&images) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}
