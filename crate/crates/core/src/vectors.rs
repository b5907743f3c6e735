//! Rays in four dimensions over the √2/√3 field, orthogonality systems and
//! the vector-assignment search.
//!
//! An assignment maps every vertex of a diagram to a ray such that the rays
//! of each edge are mutually orthogonal and no two vertices carry parallel
//! rays. The search picks rays from a finite [`CandidatePool`] and handles
//! vertices in order of descending edge-degree, so that heavily shared
//! vertices are fixed first and conflicts surface early.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{AlgebraicNumber, ExprError};
use crate::mmp::{Dim, MmpDiagram, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("the zero vector is not a ray")]
    ZeroRay,
    #[error("a ray needs 4 components, got {0}")]
    WrongLength(usize),
    #[error("bad component: {0}")]
    Component(#[from] ExprError),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("pool rays {0} and {1} are parallel")]
    ParallelPoolMembers(usize, usize),
    #[error("vertex {0} is assigned twice")]
    DuplicateVertex(String),
}

/// A projective ray in four dimensions.
///
/// Stored in normal form: divided by its first nonzero component, then
/// scaled so every coefficient is an integer with no common factor. The first
/// nonzero component is therefore a positive integer, and parallel inputs
/// produce identical values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray4 {
    components: [AlgebraicNumber; 4],
}

impl Ray4 {
    pub fn new(components: [AlgebraicNumber; 4]) -> Result<Ray4, VectorError> {
        let lead = components
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(VectorError::ZeroRay)?
            .inverse()
            .expect("nonzero");
        let scaled: Vec<AlgebraicNumber> = components.iter().map(|c| c * &lead).collect();
        let lcm = scaled
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
        let lcm = BigRational::from_integer(lcm);
        let cleared: Vec<AlgebraicNumber> = scaled.iter().map(|c| c.scale_rational(&lcm)).collect();
        let gcd = cleared
            .iter()
            .flat_map(|c| c.integer_coefficients().expect("denominators cleared"))
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
        let inv_gcd = BigRational::new(BigInt::one(), gcd);
        let mut it = cleared.into_iter().map(|c| c.scale_rational(&inv_gcd));
        Ok(Ray4 {
            components: [
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ],
        })
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Ray4, VectorError> {
        Ray4::new(c.map(AlgebraicNumber::from_int))
    }

    pub fn components(&self) -> &[AlgebraicNumber; 4] {
        &self.components
    }

    /// True when every component is an integer in {-1, 0, 1}.
    pub fn is_m101(&self) -> bool {
        let allowed = [-1, 0, 1].map(AlgebraicNumber::from_int);
        self.components.iter().all(|c| allowed.contains(c))
    }
}

impl fmt::Display for Ray4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.components;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl std::str::FromStr for Ray4 {
    type Err = VectorError;

    /// Accepts `(c1,c2,c3,c4)`, `{c1,c2,c3,c4}` or a bare `c1,c2,c3,c4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .or_else(|| body.strip_prefix('{').and_then(|b| b.strip_suffix('}')))
            .unwrap_or(body);
        let parts = split_top_level(body);
        if parts.len() != 4 {
            return Err(VectorError::WrongLength(parts.len()));
        }
        let mut comps = Vec::with_capacity(4);
        for p in parts {
            comps.push(p.parse::<AlgebraicNumber>()?);
        }
        Ray4::new(comps.try_into().expect("four components"))
    }
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Exact inner product `Σ u_k v_k`.
pub fn dot(u: &Ray4, v: &Ray4) -> AlgebraicNumber {
    u.components
        .iter()
        .zip(&v.components)
        .fold(AlgebraicNumber::zero(), |acc, (a, b)| &acc + &(a * b))
}

/// True iff every 2×2 minor `u_i v_j - u_j v_i` vanishes.
pub fn is_parallel(u: &Ray4, v: &Ray4) -> bool {
    let (a, b) = (&u.components, &v.components);
    (0..4).all(|i| (i + 1..4).all(|j| (&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero()))
}

/// A finite list of pairwise non-parallel rays to draw assignments from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePool {
    rays: Vec<Ray4>,
}

impl CandidatePool {
    pub fn new(rays: Vec<Ray4>) -> Result<CandidatePool, VectorError> {
        for i in 0..rays.len() {
            for j in 0..i {
                if is_parallel(&rays[i], &rays[j]) {
                    return Err(VectorError::ParallelPoolMembers(j, i));
                }
            }
        }
        Ok(CandidatePool { rays })
    }

    /// Reads one ray per line; blank lines, `#` comments and an optional
    /// leading `X:` vertex label are ignored.
    pub fn parse(text: &str) -> Result<CandidatePool, VectorError> {
        let mut rays = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let body = match line.split_once(':') {
                Some((_, rest)) => rest,
                None => line,
            };
            rays.push(body.parse::<Ray4>().map_err(|e| VectorError::Format {
                line: i + 1,
                msg: e.to_string(),
            })?);
        }
        CandidatePool::new(rays)
    }

    pub fn rays(&self) -> &[Ray4] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Index of the pool ray parallel to `r`, if any.
    pub fn position(&self, r: &Ray4) -> Option<usize> {
        self.rays.iter().position(|p| p == r)
    }
}

/// All 40 rays with components in {-1, 0, 1}, first nonzero component +1.
pub fn standard_pool_m101() -> CandidatePool {
    let vals = [0i64, 1, -1];
    let mut rays = Vec::with_capacity(40);
    for a in vals {
        for b in vals {
            for c in vals {
                for d in vals {
                    let comps = [a, b, c, d];
                    if comps.iter().find(|&&x| x != 0) == Some(&1) {
                        rays.push(Ray4::from_ints(comps).unwrap());
                    }
                }
            }
        }
    }
    CandidatePool { rays }
}

/// Vertex → ray map, kept sorted by vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorAssignment {
    rays: Vec<(VertexId, Ray4)>,
}

impl VectorAssignment {
    pub fn new(mut rays: Vec<(VertexId, Ray4)>) -> Result<VectorAssignment, VectorError> {
        rays.sort_by_key(|(v, _)| *v);
        for w in rays.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(VectorError::DuplicateVertex(w[0].0.to_string()));
            }
        }
        Ok(VectorAssignment { rays })
    }

    pub fn get(&self, v: VertexId) -> Option<&Ray4> {
        self.rays
            .binary_search_by_key(&v, |(u, _)| *u)
            .ok()
            .map(|i| &self.rays[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Ray4)> {
        self.rays.iter().map(|(v, r)| (*v, r))
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Parses the assignment file format: one `X: (c1,c2,c3,c4)` per line.
    pub fn parse(text: &str) -> Result<VectorAssignment, VectorError> {
        let mut rays = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| VectorError::Format { line: i + 1, msg };
            let (label, body) = line
                .split_once(':')
                .ok_or_else(|| err("expected `vertex: (c1,c2,c3,c4)`".into()))?;
            let mut chars = label.trim().chars();
            let v = match (chars.next(), chars.next()) {
                (Some(c), None) => VertexId::from_symbol(c),
                _ => None,
            }
            .ok_or_else(|| err(format!("bad vertex label {:?}", label.trim())))?;
            let ray = body.parse::<Ray4>().map_err(|e| err(e.to_string()))?;
            rays.push((v, ray));
        }
        VectorAssignment::new(rays)
    }
}

impl fmt::Display for VectorAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, r) in &self.rays {
            writeln!(f, "{v}: {r}")?;
        }
        Ok(())
    }
}

/// True iff the assignment covers every vertex, all rays within each edge are
/// mutually orthogonal, and no two vertices carry parallel rays.
pub fn verify_assignment(d: &MmpDiagram, va: &VectorAssignment) -> bool {
    let mut rays = Vec::with_capacity(d.vertex_count());
    for &v in d.vertices() {
        match va.get(v) {
            Some(r) => rays.push(r),
            None => return false,
        }
    }
    let orthogonal_edges = d.edges().iter().all(|e| {
        let vs = e.vertices();
        (0..vs.len()).all(|i| {
            (i + 1..vs.len()).all(|j| dot(va.get(vs[i]).unwrap(), va.get(vs[j]).unwrap()).is_zero())
        })
    });
    orthogonal_edges && (0..rays.len()).all(|i| (0..i).all(|j| !is_parallel(rays[i], rays[j])))
}

/// One orthogonality condition `a_X · a_Y = 0` between two vertices of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equation {
    pub left: VertexId,
    pub right: VertexId,
    pub components: usize,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.components {
            if k > 1 {
                f.write_str("+")?;
            }
            write!(f, "a_{}{k}*a_{}{k}", self.left, self.right)?;
        }
        f.write_str("=0")
    }
}

/// The `n(n-1)/2` bilinear equations of every edge, in edge order.
pub fn orthogonality_system(d: &MmpDiagram) -> Vec<Equation> {
    let components = match d.dim() {
        Dim::Three => 3,
        Dim::Four => 4,
    };
    let mut out = Vec::new();
    for e in d.edges() {
        let vs = e.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                out.push(Equation {
                    left: vs[i],
                    right: vs[j],
                    components,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VectorFindOutcome {
    Assigned(VectorAssignment),
    /// The pool has been exhausted: no assignment exists.
    NoSolution,
    /// The timeout expired first; nothing is decided.
    Indeterminate,
}

impl VectorFindOutcome {
    pub fn is_assigned(&self) -> bool {
        matches!(self, VectorFindOutcome::Assigned(_))
    }
}

#[derive(Debug, Clone, Default)]
pub struct VectorFindOptions {
    pub timeout: Option<Duration>,
    /// Restrict the first vertex to one representative per orbit of the pool
    /// under signed coordinate permutations. Only applied when the pool is
    /// closed under all of them (the {-1,0,1} pool is); ignored otherwise.
    pub break_symmetry: bool,
}

/// Searches `pool` for an assignment of `d`, giving up after `timeout`.
pub fn vectorfind(
    d: &MmpDiagram,
    pool: &CandidatePool,
    timeout: Option<Duration>,
) -> VectorFindOutcome {
    vectorfind_with(
        d,
        pool,
        &VectorFindOptions {
            timeout,
            ..Default::default()
        },
    )
}

pub fn vectorfind_with(
    d: &MmpDiagram,
    pool: &CandidatePool,
    opts: &VectorFindOptions,
) -> VectorFindOutcome {
    let inc = d.incidence();
    let n = inc.vertex_count();
    let neighbors = co_edge_neighbors(&inc.edges, n);
    let order = degree_order(&inc.vertex_edges.iter().map(Vec::len).collect::<Vec<_>>());
    let first = if opts.break_symmetry {
        signed_permutation_orbit_representatives(pool)
    } else {
        None
    };
    let mut search = PoolSearch::new(pool, &neighbors, order, first, opts.timeout);
    let mut found = None;
    let end = search.run(&mut |choice| {
        found = Some(choice.to_vec());
        true
    });
    match (found, end) {
        (Some(choice), _) => {
            let rays = choice
                .iter()
                .enumerate()
                .map(|(v, &i)| (inc.vertex_ids[v], pool.rays[i].clone()))
                .collect();
            let va = VectorAssignment::new(rays).expect("distinct vertices");
            debug_assert!(verify_assignment(d, &va));
            VectorFindOutcome::Assigned(va)
        }
        (None, SearchEnd::TimedOut) => VectorFindOutcome::Indeterminate,
        (None, _) => VectorFindOutcome::NoSolution,
    }
}

/// Assignment in which every vertex lying on two or more edges takes a pool
/// ray and each vertex lying on a single edge is completed exactly inside
/// the orthogonal complement of its edge.
///
/// Shared vertices are searched as in [`vectorfind`] with orthogonality
/// imposed only between shared vertices of a common edge. For each such
/// choice the private vertices of every edge are filled by Gram-Schmidt over
/// the standard basis followed by the pool, and the first result passing
/// [`verify_assignment`] is returned.
pub fn realize_shared_from_pool(
    d: &MmpDiagram,
    pool: &CandidatePool,
    timeout: Option<Duration>,
) -> VectorFindOutcome {
    let inc = d.incidence();
    let n = inc.vertex_count();
    let degree: Vec<usize> = inc.vertex_edges.iter().map(Vec::len).collect();
    let shared: Vec<bool> = degree.iter().map(|&k| k >= 2).collect();
    let mut neighbors = co_edge_neighbors(&inc.edges, n);
    for (v, nb) in neighbors.iter_mut().enumerate() {
        if shared[v] {
            nb.retain(|&u| shared[u]);
        } else {
            nb.clear();
        }
    }
    let order: Vec<usize> = degree_order(&degree)
        .into_iter()
        .filter(|&v| shared[v])
        .collect();
    let mut fill: Vec<[AlgebraicNumber; 4]> = (0..4)
        .map(|k| std::array::from_fn(|j| AlgebraicNumber::from_int(i64::from(j == k))))
        .collect();
    fill.extend(pool.rays.iter().map(|r| r.components.clone()));

    let mut search = PoolSearch::new(pool, &neighbors, order, None, timeout);
    let mut found = None;
    let end = search.run(&mut |choice| {
        let rays: Vec<Option<Ray4>> = choice
            .iter()
            .map(|&i| (i != usize::MAX).then(|| pool.rays[i].clone()))
            .collect();
        for shift in 0..fill.len().min(8) {
            if let Some(va) = complete_private(d, &inc, &rays, &fill[shift..]) {
                found = Some(va);
                return true;
            }
        }
        false
    });
    match (found, end) {
        (Some(va), _) => VectorFindOutcome::Assigned(va),
        (None, SearchEnd::TimedOut) => VectorFindOutcome::Indeterminate,
        (None, _) => VectorFindOutcome::NoSolution,
    }
}

fn complete_private(
    d: &MmpDiagram,
    inc: &crate::mmp::Incidence,
    shared: &[Option<Ray4>],
    fill: &[[AlgebraicNumber; 4]],
) -> Option<VectorAssignment> {
    let fixed: Vec<bool> = shared.iter().map(Option::is_some).collect();
    let mut rays = shared.to_vec();
    for e in &inc.edges {
        let mut basis: Vec<[AlgebraicNumber; 4]> = e
            .iter()
            .filter(|&&v| fixed[v])
            .map(|&v| rays[v].as_ref().unwrap().components.clone())
            .collect();
        for &v in e.iter().filter(|&&v| !fixed[v]) {
            let next = fill.iter().find_map(|c| {
                let w = orthogonalize(c, &basis);
                w.iter().any(|x| !x.is_zero()).then_some(w)
            })?;
            rays[v] = Some(Ray4::new(next.clone()).ok()?);
            basis.push(next);
        }
    }
    let pairs = inc
        .vertex_ids
        .iter()
        .zip(rays.iter())
        .map(|(&v, r)| (v, r.clone().unwrap()))
        .collect();
    let va = VectorAssignment::new(pairs).ok()?;
    verify_assignment(d, &va).then_some(va)
}

/// `c` minus its projections onto the mutually orthogonal `basis`.
fn orthogonalize(c: &[AlgebraicNumber; 4], basis: &[[AlgebraicNumber; 4]]) -> [AlgebraicNumber; 4] {
    let dot4 = |u: &[AlgebraicNumber; 4], v: &[AlgebraicNumber; 4]| {
        u.iter()
            .zip(v)
            .fold(AlgebraicNumber::zero(), |acc, (a, b)| &acc + &(a * b))
    };
    let mut w = c.clone();
    for b in basis {
        let coef = &dot4(&w, b) / &dot4(b, b);
        for k in 0..4 {
            w[k] = &w[k] - &(&coef * &b[k]);
        }
    }
    w
}

pub(crate) fn co_edge_neighbors(edges: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut nb = vec![Vec::new(); n];
    for e in edges {
        for &a in e {
            for &b in e {
                if a != b && !nb[a].contains(&b) {
                    nb[a].push(b);
                }
            }
        }
    }
    nb
}

/// Vertices by descending degree, ties by index.
pub(crate) fn degree_order(degree: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..degree.len()).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    order
}

/// Pool indices of one representative per orbit under signed permutations
/// of the four coordinates, or `None` if the pool is not closed under them.
fn signed_permutation_orbit_representatives(pool: &CandidatePool) -> Option<Vec<usize>> {
    let perms = permutations4();
    let mut orbit_of = vec![usize::MAX; pool.len()];
    let mut reps = Vec::new();
    for start in 0..pool.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        reps.push(start);
        orbit_of[start] = start;
        let c = pool.rays[start].components();
        for p in &perms {
            for signs in 0..16u32 {
                let image: [AlgebraicNumber; 4] = std::array::from_fn(|k| {
                    let x = c[p[k]].clone();
                    if signs >> k & 1 == 1 {
                        -x
                    } else {
                        x
                    }
                });
                let ray = Ray4::new(image).expect("nonzero");
                orbit_of[pool.position(&ray)?] = start;
            }
        }
    }
    Some(reps)
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p[..i].iter().all(|&x| x != p[i])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchEnd {
    Stopped,
    Exhausted,
    TimedOut,
}

/// Backtracking over pool indices with forward checking: each vertex keeps a
/// bitset domain of pool rays still orthogonal to its assigned neighbours.
pub(crate) struct PoolSearch<'a> {
    words: usize,
    orth: Vec<u64>,
    neighbors: &'a [Vec<usize>],
    order: Vec<usize>,
    first: Option<Vec<usize>>,
    domains: Vec<u64>,
    used: Vec<u64>,
    choice: Vec<usize>,
    assigned: Vec<bool>,
    trail: Vec<(usize, u64)>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl<'a> PoolSearch<'a> {
    pub(crate) fn new(
        pool: &CandidatePool,
        neighbors: &'a [Vec<usize>],
        order: Vec<usize>,
        first: Option<Vec<usize>>,
        timeout: Option<Duration>,
    ) -> Self {
        let m = pool.len();
        let words = m.div_ceil(64).max(1);
        let mut orth = vec![0u64; m * words];
        for i in 0..m {
            for j in 0..m {
                if dot(&pool.rays[i], &pool.rays[j]).is_zero() {
                    orth[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let n = neighbors.len();
        let mut full = vec![0u64; words];
        for j in 0..m {
            full[j / 64] |= 1 << (j % 64);
        }
        let domains = (0..n).flat_map(|_| full.iter().copied()).collect();
        PoolSearch {
            words,
            orth,
            neighbors,
            order,
            first,
            domains,
            used: vec![0; words],
            choice: vec![usize::MAX; n],
            assigned: vec![false; n],
            trail: Vec::new(),
            deadline: timeout.map(|t| Instant::now() + t),
            nodes: 0,
            timed_out: false,
        }
    }

    /// Runs the search; `visit` receives each complete choice of pool indices
    /// and returns true to stop.
    pub(crate) fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> SearchEnd {
        if self.recurse(0, visit) {
            SearchEnd::Stopped
        } else if self.timed_out {
            SearchEnd::TimedOut
        } else {
            SearchEnd::Exhausted
        }
    }

    fn recurse(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.choice);
        }
        self.nodes += 1;
        if self.nodes & 0xff == 1 {
            if let Some(dl) = self.deadline {
                if Instant::now() >= dl {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return false;
        }
        let v = self.order[depth];
        let w = self.words;
        let candidates: Vec<usize> = match (&self.first, depth) {
            (Some(first), 0) => first.clone(),
            _ => {
                let mut out = Vec::new();
                for k in 0..w {
                    let mut bits = self.domains[v * w + k] & !self.used[k];
                    while bits != 0 {
                        out.push(k * 64 + bits.trailing_zeros() as usize);
                        bits &= bits - 1;
                    }
                }
                out
            }
        };
        for i in candidates {
            let mark = self.trail.len();
            if self.place(v, i) && self.recurse(depth + 1, visit) {
                return true;
            }
            self.unplace(v, i, mark);
            if self.timed_out {
                return false;
            }
        }
        false
    }

    fn place(&mut self, v: usize, i: usize) -> bool {
        let w = self.words;
        self.choice[v] = i;
        self.assigned[v] = true;
        self.used[i / 64] |= 1 << (i % 64);
        let neighbors = self.neighbors;
        for &u in &neighbors[v] {
            if self.assigned[u] {
                continue;
            }
            let mut alive = false;
            for k in 0..w {
                let slot = u * w + k;
                let old = self.domains[slot];
                let new = old & self.orth[i * w + k];
                if new != old {
                    self.trail.push((slot, old));
                    self.domains[slot] = new;
                }
                alive |= new & !self.used[k] != 0;
            }
            if !alive {
                return false;
            }
        }
        true
    }

    fn unplace(&mut self, v: usize, i: usize, mark: usize) {
        while self.trail.len() > mark {
            let (slot, old) = self.trail.pop().unwrap();
            self.domains[slot] = old;
        }
        self.used[i / 64] &= !(1 << (i % 64));
        self.assigned[v] = false;
        self.choice[v] = usize::MAX;
    }
}
