//! Simple 3-polytopes stored as vertex triples.
//!
//! A vertex of a simple 3-polytope lies on exactly three facets, so the list
//! of facet triples determines everything else: edges are the facet pairs
//! occurring in exactly two triples, and each facet's neighbours form a cycle.
//! Facets are numbered from 1 in files and user-facing text and from 0 in the
//! API.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::MAX_BITS;
use crate::symmetry::Automorphism;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Violation {
    FacetCount { m: usize },
    FacetOutOfRange { vertex: usize, facet: usize },
    Degenerate { vertex: usize },
    DuplicateVertex { vertex: usize },
    FacetDegree { facet: usize, vertices: usize },
    OpenEdge { facets: (usize, usize) },
    Simplicity { facets: (usize, usize), triples: usize },
    Euler { v: usize, e: usize, f: usize },
    FacetCycle { facet: usize },
    Disconnected,
    Orientation,
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::FacetCount { .. } => "facet_count",
            Violation::FacetOutOfRange { .. } => "facet_range",
            Violation::Degenerate { .. } => "degenerate_vertex",
            Violation::DuplicateVertex { .. } => "duplicate_vertex",
            Violation::FacetDegree { .. } => "facet_degree",
            Violation::OpenEdge { .. } => "closed_surface",
            Violation::Simplicity { .. } => "simplicity",
            Violation::Euler { .. } => "euler",
            Violation::FacetCycle { .. } => "facet_cycle",
            Violation::Disconnected => "connected",
            Violation::Orientation => "orientation",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FacetCount { m } => write!(f, "facet count {m} outside 4..=32"),
            Violation::FacetOutOfRange { vertex, facet } => {
                write!(f, "vertex {vertex} names facet {facet}, outside 1..=m")
            }
            Violation::Degenerate { vertex } => write!(f, "vertex {vertex} repeats a facet"),
            Violation::DuplicateVertex { vertex } => write!(f, "vertex {vertex} is listed twice"),
            Violation::FacetDegree { facet, vertices } => {
                write!(f, "facet {facet} lies on {vertices} vertices (need >= 3)")
            }
            Violation::OpenEdge { facets: (a, b) } => {
                write!(f, "facet pair {{{a},{b}}} occurs in exactly one vertex")
            }
            Violation::Simplicity { facets: (a, b), triples } => {
                write!(f, "facet pair {{{a},{b}}} occurs in {triples} vertices")
            }
            Violation::Euler { v, e, f: m } => write!(f, "V - E + F = {v} - {e} + {m} != 2"),
            Violation::FacetCycle { facet } => {
                write!(f, "edges around facet {facet} do not form a single cycle")
            }
            Violation::Disconnected => write!(f, "facet adjacency graph is disconnected"),
            Violation::Orientation => write!(f, "no consistent orientation exists"),
        }
    }
}

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("invalid polytope: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("Löbell polyhedron R({0}) needs N >= 5")]
    LobellTooSmall(usize),
    #[error("unknown polytope spec {0:?} (expected cube, dodecahedron, simplex3, lobell:<N> or file:<path>)")]
    UnknownSpec(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed polytope file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rotation system conflict at facet {0}")]
    OrientationConflict(usize),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("{} ({x})", x.invariant())).collect::<Vec<_>>().join("; ")
}

/// On-disk representation: `{"name": .., "m": .., "vertices": [[i,j,k], ..]}`
/// with 1-based facet ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeData {
    pub name: String,
    pub m: usize,
    pub vertices: Vec<[usize; 3]>,
}

impl PolytopeData {
    /// Checks every structural invariant; returns all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        analyse(self).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    /// The two facets meeting along the edge, `facets.0 < facets.1`.
    pub facets: (usize, usize),
    /// Indices of the two endpoint vertices.
    pub vertices: (usize, usize),
}

struct Analysis {
    triples: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    cycles: Vec<Vec<usize>>,
}

fn analyse(data: &PolytopeData) -> Result<Analysis, Vec<Violation>> {
    let m = data.m;
    let mut errs = Vec::new();
    if !(4..=MAX_BITS).contains(&m) {
        return Err(vec![Violation::FacetCount { m }]);
    }
    let mut triples = Vec::with_capacity(data.vertices.len());
    let mut seen = HashMap::new();
    for (i, t) in data.vertices.iter().enumerate() {
        let vid = i + 1;
        if let Some(&f) = t.iter().find(|&&f| f == 0 || f > m) {
            errs.push(Violation::FacetOutOfRange { vertex: vid, facet: f });
            continue;
        }
        let mut s = [t[0] - 1, t[1] - 1, t[2] - 1];
        s.sort_unstable();
        if s[0] == s[1] || s[1] == s[2] {
            errs.push(Violation::Degenerate { vertex: vid });
            continue;
        }
        if seen.insert(s, vid).is_some() {
            errs.push(Violation::DuplicateVertex { vertex: vid });
            continue;
        }
        triples.push(s);
    }
    if !errs.is_empty() {
        return Err(errs);
    }

    let mut degree = vec![0usize; m];
    let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (vi, t) in triples.iter().enumerate() {
        for &f in t {
            degree[f] += 1;
        }
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            pairs.entry((a, b)).or_default().push(vi);
        }
    }
    for (f, &d) in degree.iter().enumerate() {
        if d < 3 {
            errs.push(Violation::FacetDegree { facet: f + 1, vertices: d });
        }
    }
    let mut edges = Vec::new();
    for (&(a, b), vs) in &pairs {
        match vs.len() {
            1 => errs.push(Violation::OpenEdge { facets: (a + 1, b + 1) }),
            2 => edges.push(Edge { facets: (a, b), vertices: (vs[0], vs[1]) }),
            n => errs.push(Violation::Simplicity { facets: (a + 1, b + 1), triples: n }),
        }
    }
    let (v, e) = (triples.len(), edges.len());
    if v + m != e + 2 {
        errs.push(Violation::Euler { v, e, f: m });
    }

    // Neighbours of f, linked whenever they share a vertex with f.
    let mut links: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); m];
    for t in &triples {
        for i in 0..3 {
            let f = t[i];
            let (g, h) = (t[(i + 1) % 3], t[(i + 2) % 3]);
            links[f].entry(g).or_default().push(h);
            links[f].entry(h).or_default().push(g);
        }
    }
    let mut cycles = Vec::with_capacity(m);
    for (f, link) in links.iter().enumerate() {
        match walk_cycle(link) {
            Some(c) => cycles.push(c),
            None => {
                errs.push(Violation::FacetCycle { facet: f + 1 });
                cycles.push(Vec::new());
            }
        }
    }

    let mut seen = vec![false; m];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for &g in links[f].keys() {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        errs.push(Violation::Disconnected);
    }

    if errs.is_empty() {
        Ok(Analysis { triples, edges, cycles })
    } else {
        Err(errs)
    }
}

/// Walks the link of a facet; `None` unless it is one simple cycle.
fn walk_cycle(link: &BTreeMap<usize, Vec<usize>>) -> Option<Vec<usize>> {
    if link.len() < 3 || link.values().any(|n| n.len() != 2) {
        return None;
    }
    let start = *link.keys().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = link[&start][0].min(link[&start][1]);
    while cur != start {
        cycle.push(cur);
        let nb = &link[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        if cycle.len() > link.len() {
            return None;
        }
    }
    (cycle.len() == link.len()).then_some(cycle)
}

/// A validated simple 3-polytope.
#[derive(Debug, Clone)]
pub struct Polytope {
    name: String,
    m: usize,
    vertices: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    /// Neighbour cycle of each facet, oriented by the global rotation system.
    cycles: Vec<Vec<usize>>,
    adjacency: Vec<u32>,
    edge_index: HashMap<(usize, usize), usize>,
    vertex_index: HashMap<[usize; 3], usize>,
    rotation: RotationSystem,
    automorphisms: OnceLock<Vec<Automorphism>>,
}

impl Polytope {
    pub fn new(data: PolytopeData) -> Result<Self, PolytopeError> {
        let a = analyse(&data).map_err(PolytopeError::Invalid)?;
        let m = data.m;
        let mut adjacency = vec![0u32; m];
        let mut edge_index = HashMap::new();
        for (i, e) in a.edges.iter().enumerate() {
            adjacency[e.facets.0] |= 1 << e.facets.1;
            adjacency[e.facets.1] |= 1 << e.facets.0;
            edge_index.insert(e.facets, i);
        }
        let vertex_index = a.triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut p = Polytope {
            name: data.name,
            m,
            vertices: a.triples,
            edges: a.edges,
            cycles: a.cycles.clone(),
            adjacency,
            edge_index,
            vertex_index,
            rotation: RotationSystem { cycles: a.cycles },
            automorphisms: OnceLock::new(),
        };
        let rot = orient(&p).map_err(|_| PolytopeError::Invalid(vec![Violation::Orientation]))?;
        p.cycles = rot.cycles.clone();
        p.rotation = rot;
        Ok(p)
    }

    pub fn data(&self) -> PolytopeData {
        PolytopeData {
            name: self.name.clone(),
            m: self.m,
            vertices: self.vertices.iter().map(|t| [t[0] + 1, t[1] + 1, t[2] + 1]).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of facets.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex triples, sorted and zero-based.
    pub fn vertices(&self) -> &[[usize; 3]] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of facet `f` in cyclic order.
    pub fn neighbours(&self, f: usize) -> &[usize] {
        &self.cycles[f]
    }

    pub fn degree(&self, f: usize) -> usize {
        self.cycles[f].len()
    }

    /// Bit mask of the facets adjacent to `f`.
    pub fn adjacency_mask(&self, f: usize) -> u32 {
        self.adjacency[f]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        (self.adjacency[a] >> b) & 1 == 1
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn vertex_id(&self, mut t: [usize; 3]) -> Option<usize> {
        t.sort_unstable();
        self.vertex_index.get(&t).copied()
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub(crate) fn automorphism_cache(&self) -> &OnceLock<Vec<Automorphism>> {
        &self.automorphisms
    }

    /// The same polytope with facet `f` renamed `perm[f]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Polytope, PolytopeError> {
        assert_eq!(perm.len(), self.m);
        let vertices = self.vertices.iter().map(|t| [perm[t[0]] + 1, perm[t[1]] + 1, perm[t[2]] + 1]).collect();
        Polytope::new(PolytopeData { name: self.name.clone(), m: self.m, vertices })
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        let sorted = |v: &[[usize; 3]]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        self.m == other.m && sorted(&self.vertices) == sorted(&other.vertices)
    }
}

impl Eq for Polytope {}

/// Orientation of every facet's neighbour cycle, consistent across edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    cycles: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn cycle(&self, f: usize) -> &[usize] {
        &self.cycles[f]
    }

    fn position(&self, f: usize, g: usize) -> Option<usize> {
        self.cycles[f].iter().position(|&x| x == g)
    }

    /// Neighbour of `f` following `g` in the rotation at `f`.
    pub fn successor(&self, f: usize, g: usize) -> usize {
        let c = &self.cycles[f];
        let i = self.position(f, g).expect("g adjacent to f");
        c[(i + 1) % c.len()]
    }

    pub fn predecessor(&self, f: usize, g: usize) -> usize {
        let c = &self.cycles[f];
        let i = self.position(f, g).expect("g adjacent to f");
        c[(i + c.len() - 1) % c.len()]
    }

    /// Each facet traverses its boundary through vertices `{f, c_i, c_{i+1}}`.
    /// Consistency means every directed boundary edge occurs exactly once and
    /// so does its reverse.
    pub fn is_consistent(&self, p: &Polytope) -> bool {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for f in 0..p.m() {
            let c = &self.cycles[f];
            let d = c.len();
            if d != p.degree(f) {
                return false;
            }
            for i in 0..d {
                let a = p.vertex_id([f, c[i], c[(i + 1) % d]]);
                let b = p.vertex_id([f, c[(i + 1) % d], c[(i + 2) % d]]);
                match (a, b) {
                    (Some(a), Some(b)) => *directed.entry((a, b)).or_default() += 1,
                    _ => return false,
                }
            }
        }
        directed.len() == 2 * p.edge_count()
            && directed.iter().all(|(&(a, b), &n)| n == 1 && directed.get(&(b, a)) == Some(&1))
    }
}

/// Orients facet 0 as stored and propagates across edges breadth-first.
pub fn orient(p: &Polytope) -> Result<RotationSystem, PolytopeError> {
    let m = p.m();
    let mut cycles: Vec<Option<Vec<usize>>> = vec![None; m];
    cycles[0] = Some(p.cycles[0].clone());
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let cf = cycles[f].clone().expect("oriented");
        for (i, &g) in cf.iter().enumerate() {
            // f runs along the edge f|g towards vertex {f, g, s}; g must run
            // the other way, so s is followed by f in g's rotation.
            let s = cf[(i + 1) % cf.len()];
            let base = &p.cycles[g];
            let d = base.len();
            let j = base.iter().position(|&x| x == s).ok_or(PolytopeError::OrientationConflict(g))?;
            let oriented = if base[(j + 1) % d] == f {
                base.clone()
            } else if base[(j + d - 1) % d] == f {
                base.iter().rev().copied().collect()
            } else {
                return Err(PolytopeError::OrientationConflict(g));
            };
            match &cycles[g] {
                Some(existing) => {
                    if !same_cycle(existing, &oriented) {
                        return Err(PolytopeError::OrientationConflict(g));
                    }
                }
                None => {
                    cycles[g] = Some(oriented);
                    queue.push_back(g);
                }
            }
        }
    }
    let rot = RotationSystem {
        cycles: cycles.into_iter().map(|c| c.ok_or(PolytopeError::OrientationConflict(0))).collect::<Result<_, _>>()?,
    };
    if !rot.is_consistent(p) {
        return Err(PolytopeError::OrientationConflict(0));
    }
    Ok(rot)
}

/// Equal as cyclic sequences with the same direction.
pub(crate) fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    match b.iter().position(|&x| x == a[0]) {
        Some(off) => (0..a.len()).all(|i| a[i] == b[(i + off) % b.len()]),
        None => false,
    }
}

/// Facet adjacency lists, sorted.
pub fn facet_graph(p: &Polytope) -> Vec<Vec<usize>> {
    (0..p.m())
        .map(|f| {
            let mut n = p.neighbours(f).to_vec();
            n.sort_unstable();
            n
        })
        .collect()
}

/// A simplicial complex of dimension at most 2 on zero-based vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl SimplicialComplex {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// The full subcomplex spanned by the vertices in `mask`.
    pub fn induced(&self, mask: u32) -> SimplicialComplex {
        let inside = |v: usize| (mask >> v) & 1 == 1;
        SimplicialComplex {
            vertices: self.vertices.iter().copied().filter(|&v| inside(v)).collect(),
            edges: self.edges.iter().copied().filter(|e| e.iter().all(|&v| inside(v))).collect(),
            triangles: self.triangles.iter().copied().filter(|t| t.iter().all(|&v| inside(v))).collect(),
        }
    }
}

/// The boundary complex of the dual polytope: one vertex per facet, one edge
/// per edge, one triangle per vertex.
pub fn dual_complex(p: &Polytope) -> SimplicialComplex {
    SimplicialComplex {
        vertices: (0..p.m()).collect(),
        edges: p.edges().iter().map(|e| [e.facets.0, e.facets.1]).collect(),
        triangles: p.vertices().to_vec(),
    }
}

fn build(name: &str, m: usize, vertices: Vec<[usize; 3]>) -> Polytope {
    Polytope::new(PolytopeData { name: name.to_string(), m, vertices }).expect("generator output is valid")
}

/// The 3-cube with opposite facets numbered `2i-1, 2i`.
pub fn cube() -> Polytope {
    let mut vertices = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                vertices.push([a, b, c]);
            }
        }
    }
    build("cube", 6, vertices)
}

pub fn simplex3() -> Polytope {
    build("simplex3", 4, vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
}

/// The dodecahedron as the dual of the icosahedron with vertices at the
/// cyclic permutations of `(0, ±1, ±φ)`; facet order follows that list.
pub fn dodecahedron() -> Polytope {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for rot in 0..3 {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let v = [0.0, s1, s2 * phi];
                pts.push([v[rot % 3], v[(rot + 1) % 3], v[(rot + 2) % 3]]);
            }
        }
    }
    let near = |a: &[f64; 3], b: &[f64; 3]| {
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        (d - 4.0).abs() < 1e-9
    };
    let mut vertices = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if near(&pts[i], &pts[j]) && near(&pts[i], &pts[k]) && near(&pts[j], &pts[k]) {
                    vertices.push([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    build("dodecahedron", 12, vertices)
}

/// The Löbell polyhedron `R(N)`: facet 1 is the top `N`-gon, facets
/// `2..=N+1` the upper ring of pentagons, `N+2..=2N+1` the lower ring and
/// `2N+2` the bottom `N`-gon. Upper facet `2+i` meets lower facets
/// `N+1+i` and `N+2+i` (ring indices mod `N`), so facet 2 touches `N+2`
/// and `2N+1`.
pub fn lobell(n: usize) -> Result<Polytope, PolytopeError> {
    if n < 5 {
        return Err(PolytopeError::LobellTooSmall(n));
    }
    if 2 * n + 2 > MAX_BITS {
        return Err(PolytopeError::Invalid(vec![Violation::FacetCount { m: 2 * n + 2 }]));
    }
    let top = 1;
    let bottom = 2 * n + 2;
    let up = |i: usize| 2 + i % n;
    let low = |j: usize| n + 2 + j % n;
    let mut vertices = Vec::with_capacity(4 * n);
    for i in 0..n {
        vertices.push([top, up(i), up(i + 1)]);
        vertices.push([up(i), up(i + 1), low(i)]);
        vertices.push([up(i), low(i + n - 1), low(i)]);
        vertices.push([bottom, low(i), low(i + 1)]);
    }
    Ok(build(&format!("lobell:{n}"), 2 * n + 2, vertices))
}

/// How a polytope is named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeSpec {
    Cube,
    Dodecahedron,
    Simplex3,
    Lobell(usize),
    File(PathBuf),
}

impl PolytopeSpec {
    pub fn load(&self) -> Result<Polytope, PolytopeError> {
        match self {
            PolytopeSpec::Cube => Ok(cube()),
            PolytopeSpec::Dodecahedron => Ok(dodecahedron()),
            PolytopeSpec::Simplex3 => Ok(simplex3()),
            PolytopeSpec::Lobell(n) => lobell(*n),
            PolytopeSpec::File(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|source| PolytopeError::Io { path: path.clone(), source })?;
                parse_polytope_json(&text)
            }
        }
    }
}

impl FromStr for PolytopeSpec {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "cube" => return Ok(PolytopeSpec::Cube),
            "dodecahedron" => return Ok(PolytopeSpec::Dodecahedron),
            "simplex3" => return Ok(PolytopeSpec::Simplex3),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("lobell:") {
            return n.parse().map(PolytopeSpec::Lobell).map_err(|_| PolytopeError::UnknownSpec(s.to_string()));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(PolytopeSpec::File(PathBuf::from(path)));
        }
        Err(PolytopeError::UnknownSpec(s.to_string()))
    }
}

impl fmt::Display for PolytopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeSpec::Cube => f.write_str("cube"),
            PolytopeSpec::Dodecahedron => f.write_str("dodecahedron"),
            PolytopeSpec::Simplex3 => f.write_str("simplex3"),
            PolytopeSpec::Lobell(n) => write!(f, "lobell:{n}"),
            PolytopeSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

pub fn parse_polytope_json(text: &str) -> Result<Polytope, PolytopeError> {
    let data: PolytopeData = serde_json::from_str(text)?;
    Polytope::new(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(p: &Polytope) -> (usize, usize, usize) {
        (p.m(), p.vertex_count(), p.edge_count())
    }

    #[test]
    fn generator_counts() {
        assert_eq!(counts(&cube()), (6, 8, 12));
        assert_eq!(counts(&dodecahedron()), (12, 20, 30));
        assert_eq!(counts(&simplex3()), (4, 4, 6));
        assert_eq!(lobell(7).unwrap().m(), 16);
        assert_eq!(counts(&lobell(6).unwrap()), (14, 24, 36));
        assert!(matches!(lobell(4), Err(PolytopeError::LobellTooSmall(4))));
    }

    #[test]
    fn generators_validate() {
        for p in [cube(), dodecahedron(), simplex3(), lobell(5).unwrap(), lobell(6).unwrap(), lobell(15).unwrap()] {
            assert_eq!(p.data().validate(), Ok(()), "{}", p.name());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = serde_json::to_string(&dodecahedron().data()).unwrap();
        let b = serde_json::to_string(&dodecahedron().data()).unwrap();
        assert_eq!(a, b);
        assert_eq!(lobell(9).unwrap().data(), lobell(9).unwrap().data());
    }

    #[test]
    fn cube_missing_vertex_breaks_euler() {
        let mut d = cube().data();
        d.vertices.pop();
        let errs = d.validate().unwrap_err();
        assert!(errs.iter().any(|v| v.invariant() == "euler"), "{errs:?}");
    }

    #[test]
    fn pair_in_three_triples_is_not_simple() {
        let mut d = cube().data();
        d.vertices.push([1, 3, 2]);
        d.vertices[0] = [1, 3, 4];
        let errs = d.validate().unwrap_err();
        assert!(errs.iter().any(|v| v.invariant() == "simplicity"), "{errs:?}");
    }

    #[test]
    fn malformed_triples() {
        let d = PolytopeData { name: "x".into(), m: 4, vertices: vec![[1, 2, 9], [1, 1, 2]] };
        let errs = d.validate().unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].invariant(), "facet_range");
        assert_eq!(errs[1].invariant(), "degenerate_vertex");
    }

    #[test]
    fn two_disjoint_tetrahedra_are_rejected() {
        let d = PolytopeData {
            name: "two".into(),
            m: 8,
            vertices: vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [5, 6, 7], [5, 6, 8], [5, 7, 8], [6, 7, 8]],
        };
        let errs = d.validate().unwrap_err();
        assert!(errs.iter().any(|v| v.invariant() == "connected"));
        assert!(errs.iter().any(|v| v.invariant() == "euler"));
    }

    #[test]
    fn facet_graph_degrees() {
        let g = facet_graph(&dodecahedron());
        assert!(g.iter().all(|n| n.len() == 5));
        assert_eq!(g.iter().map(Vec::len).sum::<usize>(), 60);
        let g = facet_graph(&cube());
        assert!(g.iter().all(|n| n.len() == 4));
        let l7 = lobell(7).unwrap();
        assert_eq!(facet_graph(&l7)[0].len(), 7);
        assert_eq!(facet_graph(&l7)[15].len(), 7);
        assert!(facet_graph(&l7)[1..15].iter().all(|n| n.len() == 5));
    }

    #[test]
    fn dual_complexes_are_spheres() {
        for (p, tris) in [(simplex3(), 4), (cube(), 8), (dodecahedron(), 20)] {
            let k = dual_complex(&p);
            assert_eq!(k.triangles.len(), tris);
            assert_eq!(k.edges.len(), p.edge_count());
            assert_eq!(k.euler_characteristic(), 2);
        }
    }

    #[test]
    fn rotation_systems_are_consistent() {
        for p in [cube(), simplex3(), dodecahedron(), lobell(7).unwrap()] {
            let rot = orient(&p).unwrap();
            assert!(rot.is_consistent(&p));
            assert_eq!(&rot, p.rotation());
        }
    }

    #[test]
    fn reversed_facet_is_inconsistent() {
        let p = cube();
        let mut rot = p.rotation().clone();
        rot.cycles[2].reverse();
        assert!(!rot.is_consistent(&p));
    }

    #[test]
    fn torus_is_rejected() {
        // 7-vertex triangulation of the torus read as facet triples.
        let tris = [
            [1, 2, 4],
            [2, 3, 5],
            [3, 1, 6],
            [4, 5, 7],
            [5, 6, 1],
            [6, 7, 2],
            [7, 1, 3],
            [1, 4, 6],
            [2, 5, 7],
            [3, 6, 1],
            [4, 7, 2],
            [5, 1, 3],
            [6, 2, 4],
            [7, 3, 5],
        ];
        let d = PolytopeData { name: "torus".into(), m: 7, vertices: tris.to_vec() };
        assert!(d.validate().is_err());
        assert!(Polytope::new(d).is_err());
    }

    #[test]
    fn lobell_labelling() {
        let p = lobell(7).unwrap();
        // facets 1, 2, 3 meet at a vertex; facet 2 touches facets 9 and 15
        assert!(p.vertex_id([0, 1, 2]).is_some());
        assert!(p.adjacent(1, 8));
        assert!(p.adjacent(1, 14));
        assert!(!p.adjacent(1, 9));
        assert!(p.adjacent(8, 15));
        assert!(!p.adjacent(0, 15));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("cube".parse::<PolytopeSpec>().unwrap(), PolytopeSpec::Cube);
        assert_eq!("lobell:7".parse::<PolytopeSpec>().unwrap(), PolytopeSpec::Lobell(7));
        assert!("lobell:x".parse::<PolytopeSpec>().is_err());
        assert!("torus".parse::<PolytopeSpec>().is_err());
        let p = parse_polytope_json(&serde_json::to_string(&cube().data()).unwrap()).unwrap();
        assert_eq!(p, cube());
        assert!(parse_polytope_json(r#"{"name":"x","m":4,"vertices":[[1,2,3]]}"#).is_err());
    }
}
