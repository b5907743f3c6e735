//! MMP diagrams: hypergraphs whose vertices stand for rays and whose edges
//! stand for maximal groups of mutually orthogonal rays.
//!
//! A diagram is valid when
//!
//! 1. every vertex belongs to at least one edge,
//! 2. every edge contains at least 3 vertices, and
//! 3. edges that intersect each other in `n - 2` vertices contain at least
//!    `n` vertices.
//!
//! Condition 1 holds by construction because the vertex set is derived from
//! the edges. For uniform 4-vertex edges condition 3 reduces to "two distinct
//! edges share at most 2 vertices".
//!
//! The text form writes each edge as a run of vertex symbols, separates edges
//! with `,` and terminates the diagram with `.`, e.g. `1234,4567,789A.`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Vertex symbols in their canonical order: `1`-`9`, then `A`-`Z`, then `a`-`z`.
pub const ALPHABET: &[u8; 61] = b"123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

/// The six edges of the hexagon loop present in every classified set.
pub const HEXAGON: [&str; 6] = ["1234", "4567", "789A", "ABCD", "DEFG", "GHI1"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmpError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("edge {edge} has {size} vertices; every edge needs at least 3 (MMP-2)")]
    EdgeTooSmall { edge: String, size: usize },
    #[error("edge {edge} has {size} vertices but the diagram is {dim}-dimensional")]
    WrongEdgeSize {
        edge: String,
        size: usize,
        dim: usize,
    },
    #[error("vertex {vertex} is repeated in edge {edge}")]
    RepeatedVertex { edge: String, vertex: String },
    #[error("edges {first} and {second} share {shared} vertices, violating MMP-3")]
    Mmp3 {
        first: String,
        second: String,
        shared: usize,
    },
    #[error("edge {edge} appears twice")]
    DuplicateEdge { edge: String },
    #[error("edge index {index} out of range for a diagram with {len} edges")]
    EdgeIndexOutOfRange { index: usize, len: usize },
}

/// A vertex, identified by its position in the symbol alphabet.
///
/// Indices beyond the 61 printable symbols are allowed internally; they print
/// as `[n]` and cannot be parsed back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn from_symbol(c: char) -> Option<VertexId> {
        if !c.is_ascii() {
            return None;
        }
        ALPHABET
            .iter()
            .position(|&b| b == c as u8)
            .map(|p| VertexId(p as u32))
    }

    pub fn symbol(self) -> Option<char> {
        ALPHABET.get(self.0 as usize).map(|&b| b as char)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbol() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "[{}]", self.0),
        }
    }
}

/// An edge keeps its vertices in input order; equality is set equality.
#[derive(Debug, Clone, Eq)]
pub struct Edge {
    vertices: Vec<VertexId>,
}

impl Edge {
    pub fn new(vertices: Vec<VertexId>) -> Result<Edge, MmpError> {
        let edge = Edge { vertices };
        if edge.vertices.len() < 3 {
            return Err(MmpError::EdgeTooSmall {
                edge: edge.to_string(),
                size: edge.vertices.len(),
            });
        }
        for (i, v) in edge.vertices.iter().enumerate() {
            if edge.vertices[..i].contains(v) {
                return Err(MmpError::RepeatedVertex {
                    edge: edge.to_string(),
                    vertex: v.to_string(),
                });
            }
        }
        Ok(edge)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn sorted(&self) -> Vec<VertexId> {
        let mut s = self.vertices.clone();
        s.sort_unstable();
        s
    }

    pub fn shared(&self, other: &Edge) -> usize {
        self.vertices.iter().filter(|v| other.contains(**v)).count()
    }
}

impl PartialEq for Edge {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.sorted() == other.sorted()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Dimension of the underlying space, i.e. the number of vertices per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Dim {
    Three,
    #[default]
    Four,
}

impl Dim {
    pub fn edge_size(self) -> usize {
        match self {
            Dim::Three => 3,
            Dim::Four => 4,
        }
    }
}

/// Vertices renumbered densely `0..n` (in alphabet order) with edges as index
/// lists. Most search routines run on this view.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub vertex_ids: Vec<VertexId>,
    pub edges: Vec<Vec<usize>>,
    pub vertex_edges: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_edges[v].len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpDiagram {
    edges: Vec<Edge>,
    vertices: Vec<VertexId>,
    dim: Dim,
}

impl MmpDiagram {
    /// The diagram with no vertices and no edges.
    pub fn vacuous() -> MmpDiagram {
        MmpDiagram {
            edges: Vec::new(),
            vertices: Vec::new(),
            dim: Dim::Four,
        }
    }

    pub fn new(edges: Vec<Edge>, dim: Dim) -> Result<MmpDiagram, MmpError> {
        for e in &edges {
            if e.len() != dim.edge_size() {
                return Err(MmpError::WrongEdgeSize {
                    edge: e.to_string(),
                    size: e.len(),
                    dim: dim.edge_size(),
                });
            }
        }
        for (i, a) in edges.iter().enumerate() {
            for b in &edges[..i] {
                if a == b {
                    return Err(MmpError::DuplicateEdge {
                        edge: a.to_string(),
                    });
                }
                let shared = a.shared(b);
                if shared > 0 && (a.len() < shared + 2 || b.len() < shared + 2) {
                    return Err(MmpError::Mmp3 {
                        first: b.to_string(),
                        second: a.to_string(),
                        shared,
                    });
                }
            }
        }
        Ok(Self::from_valid_edges(edges, dim))
    }

    /// Builds a diagram from edges already known to be valid together.
    pub(crate) fn from_valid_edges(edges: Vec<Edge>, dim: Dim) -> MmpDiagram {
        let mut vertices: Vec<VertexId> = edges
            .iter()
            .flat_map(|e| e.vertices.iter().copied())
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        MmpDiagram {
            edges,
            vertices,
            dim,
        }
    }

    /// Builds a 4-dim diagram from dense index lists, labelling index `i`
    /// with the `i`-th alphabet symbol.
    pub fn from_index_edges(edges: &[Vec<usize>]) -> Result<MmpDiagram, MmpError> {
        let edges = edges
            .iter()
            .map(|e| Edge::new(e.iter().map(|&v| VertexId(v as u32)).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        MmpDiagram::new(edges, Dim::Four)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vacuous(&self) -> bool {
        self.edges.is_empty()
    }

    /// The `x-y` size label (x vertices, y edges), e.g. `18-9`.
    pub fn size_label(&self) -> String {
        format!("{}-{}", self.vertex_count(), self.edge_count())
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn incidence(&self) -> Incidence {
        let pos = |v: VertexId| self.vertices.binary_search(&v).expect("vertex of own edge");
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.vertices.iter().map(|&v| pos(v)).collect())
            .collect();
        let mut vertex_edges = vec![Vec::new(); self.vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                vertex_edges[v].push(i);
            }
        }
        Incidence {
            vertex_ids: self.vertices.clone(),
            edges,
            vertex_edges,
        }
    }

    /// Prepends the hexagon loop to `fragment`.
    pub fn with_hexagon(fragment: &MmpDiagram) -> Result<MmpDiagram, MmpError> {
        let mut edges = hexagon_edges();
        edges.extend(fragment.edges.iter().cloned());
        MmpDiagram::new(edges, Dim::Four)
    }

    /// Removes edge `index` together with any vertices that lie only on it.
    pub fn delete_edge(&self, index: usize) -> Result<MmpDiagram, MmpError> {
        if index >= self.edges.len() {
            return Err(MmpError::EdgeIndexOutOfRange {
                index,
                len: self.edges.len(),
            });
        }
        let mut edges = self.edges.clone();
        edges.remove(index);
        Ok(MmpDiagram::from_valid_edges(edges, self.dim))
    }

    /// The sub-diagram made of the listed edges, in the given order.
    pub fn select_edges(&self, indices: impl IntoIterator<Item = usize>) -> MmpDiagram {
        let edges = indices.into_iter().map(|i| self.edges[i].clone()).collect();
        MmpDiagram::from_valid_edges(edges, self.dim)
    }

    /// The sub-diagram made of the edges whose bit is set in `mask`.
    pub fn select_mask(&self, mask: u64) -> MmpDiagram {
        self.select_edges((0..self.edges.len()).filter(|i| mask >> i & 1 == 1))
    }

    /// Applies a vertex renaming; `map` must be injective on this diagram's
    /// vertices.
    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> MmpDiagram {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                vertices: e.vertices.iter().map(|&v| map(v)).collect(),
            })
            .collect();
        MmpDiagram::from_valid_edges(edges, self.dim)
    }

    /// Renames the vertices `1, 2, 3, ...` in order of first appearance.
    pub fn compact_labels(&self) -> MmpDiagram {
        let mut seen: Vec<VertexId> = Vec::new();
        for e in &self.edges {
            for &v in &e.vertices {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        self.relabel(|v| VertexId(seen.iter().position(|&s| s == v).unwrap() as u32))
    }

    /// Same diagram with every edge's vertices sorted and the edges sorted.
    pub fn sorted(&self) -> MmpDiagram {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                vertices: e.sorted(),
            })
            .collect();
        edges.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        MmpDiagram::from_valid_edges(edges, self.dim)
    }

    /// Structural equality up to edge order and within-edge vertex order.
    pub fn same_edge_set(&self, other: &MmpDiagram) -> bool {
        self.sorted().edges == other.sorted().edges
    }
}

fn hexagon_edges() -> Vec<Edge> {
    HEXAGON
        .iter()
        .map(|s| Edge {
            vertices: s
                .chars()
                .map(|c| VertexId::from_symbol(c).unwrap())
                .collect(),
        })
        .collect()
}

/// The bare hexagon loop `1234,4567,789A,ABCD,DEFG,GHI1.`.
pub fn hexagon() -> MmpDiagram {
    MmpDiagram::from_valid_edges(hexagon_edges(), Dim::Four)
}

/// Parses a 4-dim diagram.
pub fn parse_mmp(text: &str) -> Result<MmpDiagram, MmpError> {
    parse_mmp_dim(text, Dim::Four)
}

pub fn parse_mmp_dim(text: &str, dim: Dim) -> Result<MmpDiagram, MmpError> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim();
    let Some(payload) = body.strip_suffix('.') else {
        return Err(MmpError::Syntax {
            pos: lead + body.len(),
            msg: "diagram must end with '.'".into(),
        });
    };
    if payload.trim().is_empty() {
        return Ok(MmpDiagram {
            dim,
            ..MmpDiagram::vacuous()
        });
    }
    let mut edges = Vec::new();
    let mut offset = lead;
    for chunk in payload.split(',') {
        let trimmed = chunk.trim();
        let start = offset + (chunk.len() - chunk.trim_start().len());
        if trimmed.is_empty() {
            return Err(MmpError::Syntax {
                pos: start,
                msg: "empty edge".into(),
            });
        }
        let mut vertices = Vec::with_capacity(trimmed.len());
        for (i, c) in trimmed.char_indices() {
            match VertexId::from_symbol(c) {
                Some(v) => vertices.push(v),
                None => {
                    return Err(MmpError::Syntax {
                        pos: start + i,
                        msg: format!("invalid vertex character {c:?}"),
                    })
                }
            }
        }
        edges.push(Edge::new(vertices)?);
        offset += chunk.len() + 1;
    }
    MmpDiagram::new(edges, dim)
}

/// Comma-separated edges in stored order, terminated by a period.
pub fn serialize_mmp(d: &MmpDiagram) -> String {
    let mut out = String::new();
    for (i, e) in d.edges.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&e.to_string());
    }
    out.push('.');
    out
}

impl fmt::Display for MmpDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_mmp(self))
    }
}

impl FromStr for MmpDiagram {
    type Err = MmpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mmp(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEX: &str = "1234,4567,789A,ABCD,DEFG,GHI1.";

    #[test]
    fn alphabet_order() {
        assert_eq!(VertexId::from_symbol('1'), Some(VertexId(0)));
        assert_eq!(VertexId::from_symbol('A'), Some(VertexId(9)));
        assert_eq!(VertexId::from_symbol('a'), Some(VertexId(35)));
        assert_eq!(VertexId::from_symbol('z'), Some(VertexId(60)));
        assert_eq!(VertexId::from_symbol('0'), None);
        assert_eq!(VertexId(61).to_string(), "[61]");
    }

    #[test]
    fn parse_two_edges() {
        let d = parse_mmp("1234,4567.").unwrap();
        assert_eq!(d.vertex_count(), 7);
        assert_eq!(d.edge_count(), 2);
    }

    #[test]
    fn parse_hexagon() {
        let d = parse_mmp(HEX).unwrap();
        assert_eq!((d.vertex_count(), d.edge_count()), (18, 6));
        assert_eq!(d, hexagon());
    }

    #[test]
    fn surrounding_whitespace_is_tolerated() {
        let d = parse_mmp("  1234,4567. \n").unwrap();
        assert_eq!(serialize_mmp(&d), "1234,4567.");
        let d = parse_mmp("25BE,1AJK, JFLM,68FH,39IC.").unwrap();
        assert_eq!(d.edge_count(), 5);
    }

    #[test]
    fn mmp3_violation() {
        let err = parse_mmp("1234,1235.").unwrap_err();
        assert!(matches!(err, MmpError::Mmp3 { shared: 3, .. }), "{err}");
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_mmp("1234,4567"),
            Err(MmpError::Syntax { .. })
        ));
        assert!(matches!(
            parse_mmp("12#4."),
            Err(MmpError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_mmp("1234,,4567."),
            Err(MmpError::Syntax { .. })
        ));
        assert!(matches!(parse_mmp("12 34."), Err(MmpError::Syntax { .. })));
    }

    #[test]
    fn validity_errors() {
        assert!(matches!(
            parse_mmp("12,345."),
            Err(MmpError::EdgeTooSmall { size: 2, .. })
        ));
        assert!(matches!(
            parse_mmp("1231."),
            Err(MmpError::RepeatedVertex { .. })
        ));
        assert!(matches!(
            parse_mmp("1234,4321."),
            Err(MmpError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            parse_mmp("123,345."),
            Err(MmpError::WrongEdgeSize { size: 3, .. })
        ));
        let d = parse_mmp_dim("123,345,561.", Dim::Three).unwrap();
        assert_eq!(d.vertex_count(), 6);
        assert!(parse_mmp_dim("123,124.", Dim::Three).is_err());
    }

    #[test]
    fn serialize_round_trips() {
        let d = parse_mmp(HEX).unwrap();
        assert_eq!(serialize_mmp(&d), HEX);
        assert_eq!(serialize_mmp(&parse_mmp("BCDE.").unwrap()), "BCDE.");
        assert_eq!(serialize_mmp(&MmpDiagram::vacuous()), ".");
        assert!(parse_mmp(".").unwrap().is_vacuous());
    }

    #[test]
    fn with_hexagon_examples() {
        let frag = parse_mmp("H68F,IJK5,1J9B,4KEC.").unwrap();
        let d = MmpDiagram::with_hexagon(&frag).unwrap();
        assert_eq!(d.size_label(), "20-10");
        assert_eq!(
            d.to_string(),
            "1234,4567,789A,ABCD,DEFG,GHI1,H68F,IJK5,1J9B,4KEC."
        );
        let bare = MmpDiagram::with_hexagon(&MmpDiagram::vacuous()).unwrap();
        assert_eq!(bare.size_label(), "18-6");
        let d = MmpDiagram::with_hexagon(&parse_mmp("25BE,1AJK,JFLM,68FH,39IC.").unwrap()).unwrap();
        assert_eq!(d.size_label(), "22-11");
        assert!(MmpDiagram::with_hexagon(&parse_mmp("1235.").unwrap()).is_err());
        assert!(MmpDiagram::with_hexagon(&parse_mmp("4567.").unwrap()).is_err());
    }

    #[test]
    fn delete_edge_drops_private_vertices() {
        let d = hexagon().delete_edge(5).unwrap();
        assert_eq!(d.to_string(), "1234,4567,789A,ABCD,DEFG.");
        let gone = |c| !d.vertices().contains(&VertexId::from_symbol(c).unwrap());
        assert!(gone('H') && gone('I'));
        assert!(!gone('G') && !gone('1'));
        assert_eq!(d.vertex_count(), 16);

        let single = parse_mmp("BCDE.").unwrap().delete_edge(0).unwrap();
        assert!(single.is_vacuous());
        assert_eq!(single.vertex_count(), 0);

        assert!(matches!(
            hexagon().delete_edge(6),
            Err(MmpError::EdgeIndexOutOfRange { index: 6, len: 6 })
        ));
    }

    #[test]
    fn edge_equality_is_set_equality() {
        let a = parse_mmp("1234.").unwrap();
        let b = parse_mmp("4321.").unwrap();
        assert_eq!(a, b);
        assert_ne!(a.to_string(), b.to_string());
        assert!(a.same_edge_set(&b));
    }
}
