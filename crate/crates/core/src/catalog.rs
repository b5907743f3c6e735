//! Named diagrams and vector tables shipped with the crate.
//!
//! Every fixture is stored as fully expanded MMP text (the hexagon included)
//! in `data/sets.tsv`; vector tables live in `data/vectors/` in the
//! assignment file format. The Peres 24-24 master set is built from its rays
//! by brute force rather than stored.

use std::sync::OnceLock;

use num_traits::Zero;
use thiserror::Error;

use crate::mmp::{parse_mmp, MmpDiagram, VertexId};
use crate::vectors::{dot, standard_pool_m101, Ray4, VectorAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown fixture {0:?}")]
    Unknown(String),
}

/// How a fixture's edge list was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// A published MMP string, used as written.
    Listed,
    /// A published string that omits the hexagon; the hexagon is prefixed.
    ListedWithHexagon,
    /// The orthogonal tetrads of a published vector table.
    Tetrads,
    /// The representative of an isomorphism class found by the
    /// classification sweep over Peres 24-24.
    Sweep,
    /// Selected by search as the first diagram meeting the published
    /// constraints (sizes, containments, vector table).
    Reconstructed,
    /// Generated from the 24 Peres rays.
    Computed,
}

impl Source {
    fn parse(tag: &str) -> Source {
        match tag {
            "listed" => Source::Listed,
            "listed+hexagon" => Source::ListedWithHexagon,
            "tetrads" => Source::Tetrads,
            "sweep" => Source::Sweep,
            "reconstructed" => Source::Reconstructed,
            other => panic!("bad source tag {other:?} in sets.tsv"),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Source::Listed => "published MMP string",
            Source::ListedWithHexagon => "published MMP string, hexagon prefixed",
            Source::Tetrads => "orthogonal tetrads of the published vector table",
            Source::Sweep => "classification sweep representative",
            Source::Reconstructed => "reconstructed from published constraints",
            Source::Computed => "brute-force orthogonality over the 24 Peres rays",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    pub diagram: MmpDiagram,
    pub vectors: Option<VectorAssignment>,
    pub source: Source,
}

impl NamedSet {
    pub fn provenance(&self) -> &'static str {
        self.source.describe()
    }
}

const SETS: &str = include_str!("../data/sets.tsv");

const VECTOR_TABLES: &[(&str, &str)] = &[
    ("18-9", include_str!("../data/vectors/18-9.txt")),
    ("22-11", include_str!("../data/vectors/22-11.txt")),
    ("23-12", include_str!("../data/vectors/23-12.txt")),
    ("24-14-x", include_str!("../data/vectors/24-14-x.txt")),
    ("23-14a", include_str!("../data/vectors/23-14a.txt")),
    ("23-14b", include_str!("../data/vectors/23-14b.txt")),
    ("24-15", include_str!("../data/vectors/24-15.txt")),
    ("24-20", include_str!("../data/vectors/24-20.txt")),
];

/// The 22-11 vector column exactly as transcribed, before the sign of the
/// fourth component of J was corrected. J is parallel to I there.
const TRANSCRIBED_22_11: &str = include_str!("../data/vectors/22-11-printed.txt");

pub const PERES_NAME: &str = "peres";

/// Normalizes listing typography: `$,$` separators and a missing or
/// doubled final period.
pub fn normalize_listing(text: &str) -> String {
    let body = text.trim().replace("$,$", ",");
    format!("{}.", body.trim_end_matches('.'))
}

/// The 24 Peres rays: the 4 basis rays, the 12 rays with two nonzero
/// entries, then the 8 rays with four, each group in pool order.
pub fn peres_rays() -> Vec<Ray4> {
    let pool = standard_pool_m101();
    let support = |r: &Ray4| r.components().iter().filter(|c| !c.is_zero()).count();
    [1, 2, 4]
        .iter()
        .flat_map(|&k| pool.rays().iter().filter(move |r| support(r) == k).cloned())
        .collect()
}

/// Peres 24-24: every mutually orthogonal 4-subset of [`peres_rays`], in
/// lexicographic order of ray indices, labelled `1..O`.
pub fn peres_24_24() -> MmpDiagram {
    let rays = peres_rays();
    let n = rays.len();
    let orth: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&rays[i], &rays[j]).is_zero()).collect())
        .collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !orth[a][b] {
                continue;
            }
            for c in b + 1..n {
                if !(orth[a][c] && orth[b][c]) {
                    continue;
                }
                for d in c + 1..n {
                    if orth[a][d] && orth[b][d] && orth[c][d] {
                        edges.push(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    MmpDiagram::from_index_edges(&edges).expect("Peres tetrads form a valid diagram")
}

fn peres_vectors() -> VectorAssignment {
    VectorAssignment::new(
        peres_rays()
            .into_iter()
            .enumerate()
            .map(|(i, r)| (VertexId(i as u32), r))
            .collect(),
    )
    .expect("distinct labels")
}

fn index() -> &'static [NamedSet] {
    static INDEX: OnceLock<Vec<NamedSet>> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut sets: Vec<NamedSet> = SETS
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|line| {
                let mut cols = line.split('\t');
                let (name, tag, text) = match (cols.next(), cols.next(), cols.next()) {
                    (Some(n), Some(t), Some(d)) => (n, t, d),
                    _ => panic!("malformed sets.tsv line {line:?}"),
                };
                let diagram = parse_mmp(&normalize_listing(text))
                    .unwrap_or_else(|e| panic!("fixture {name}: {e}"));
                let vectors = VECTOR_TABLES
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, t)| {
                        VectorAssignment::parse(t)
                            .unwrap_or_else(|e| panic!("vectors of {name}: {e}"))
                    });
                NamedSet {
                    name: name.to_string(),
                    diagram,
                    vectors,
                    source: Source::parse(tag),
                }
            })
            .collect();
        sets.push(NamedSet {
            name: PERES_NAME.to_string(),
            diagram: peres_24_24(),
            vectors: Some(peres_vectors()),
            source: Source::Computed,
        });
        sets
    })
}

pub fn get(name: &str) -> Result<NamedSet, CatalogError> {
    index()
        .iter()
        .find(|s| s.name == name)
        .cloned()
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

/// All fixture names in shipping order.
pub fn list_names() -> Vec<&'static str> {
    index().iter().map(|s| s.name.as_str()).collect()
}

pub fn all() -> &'static [NamedSet] {
    index()
}

/// The 22-11 vector column as transcribed, uncorrected.
pub fn transcribed_22_11_vectors() -> VectorAssignment {
    VectorAssignment::parse(TRANSCRIBED_22_11).expect("well-formed table")
}

/// Candidate pool made of the rays of the corrected 22-11 vector table.
pub fn pool_22_11() -> crate::vectors::CandidatePool {
    let set = get("22-11").expect("shipped");
    let rays = set
        .vectors
        .expect("has vectors")
        .iter()
        .map(|(_, r)| r.clone())
        .collect();
    crate::vectors::CandidatePool::new(rays).expect("pairwise non-parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_typography() {
        assert_eq!(normalize_listing("12$,$34."), "12,34.");
        assert_eq!(normalize_listing(" 1234,4567 "), "1234,4567.");
    }

    #[test]
    fn peres_shape() {
        let p = peres_24_24();
        assert_eq!(p.vertex_count(), 24);
        assert_eq!(p.edge_count(), 24);
        assert!(p.vertices().iter().all(|&v| p.degree(v) == 4));
    }

    #[test]
    fn peres_edges_match_direct_orthogonality() {
        // Oracle: the 24 integer vectors written out by hand, tetrads by
        // integer dot products.
        let mut raw: Vec<[i64; 4]> = vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for i in 0..4 {
            for j in i + 1..4 {
                for s in [1, -1] {
                    let mut v = [0; 4];
                    v[i] = 1;
                    v[j] = s;
                    raw.push(v);
                }
            }
        }
        for s in 0..8 {
            raw.push([
                1,
                1 - 2 * (s & 1),
                1 - 2 * (s >> 1 & 1),
                1 - 2 * (s >> 2 & 1),
            ]);
        }
        let dot = |a: &[i64; 4], b: &[i64; 4]| (0..4).map(|k| a[k] * b[k]).sum::<i64>();
        let mut tetrads = 0;
        for a in 0..24 {
            for b in a + 1..24 {
                for c in b + 1..24 {
                    for d in c + 1..24 {
                        let q = [a, b, c, d];
                        let orth =
                            (0..4).all(|i| (i + 1..4).all(|j| dot(&raw[q[i]], &raw[q[j]]) == 0));
                        tetrads += orth as usize;
                    }
                }
            }
        }
        assert_eq!(tetrads, peres_24_24().edge_count());
        let mut ours: Vec<Ray4> = peres_rays();
        let mut theirs: Vec<Ray4> = raw.iter().map(|&v| Ray4::from_ints(v).unwrap()).collect();
        let key = |r: &Ray4| r.to_string();
        ours.sort_by_key(key);
        theirs.sort_by_key(key);
        assert_eq!(ours, theirs);
    }

    #[test]
    fn lookups() {
        assert!(matches!(get("nope"), Err(CatalogError::Unknown(_))));
        let s = get("20-10").unwrap();
        assert_eq!(
            s.diagram.to_string(),
            "1234,4567,789A,ABCD,DEFG,GHI1,H68F,IJK5,1J9B,4KEC."
        );
        let fragment = parse_mmp("H68F,IJK5,1J9B,4KEC.").unwrap();
        assert!(MmpDiagram::with_hexagon(&fragment)
            .unwrap()
            .same_edge_set(&s.diagram));
        let v = get("18-9").unwrap().vectors.unwrap();
        assert_eq!(
            v.get(VertexId(0)).unwrap(),
            &Ray4::from_ints([1, 0, 0, 1]).unwrap()
        );
        assert_eq!(
            get("24-15-4").unwrap().diagram.to_string(),
            "LMNO,HIJK,DEFG,9ABC,5678,1234,34FG,78EG,BCDG,24JK,68IK,ACHK,14NO,58MO,9CLO."
        );
        let names = list_names();
        for n in ["18-9", "23-15", "24-14", PERES_NAME] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(!names.contains(&"hexagon"));
    }

    #[test]
    fn names_encode_sizes() {
        for s in all() {
            if s.name == PERES_NAME {
                continue;
            }
            let label = s.diagram.size_label();
            assert!(s.name.starts_with(&label), "{} is {}", s.name, label);
        }
    }
}
