//! Combinatorial automorphisms of simple 3-polytopes and their geometric type.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::polytope::{same_cycle, Polytope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("not a permutation of 1..={m}: {detail}")]
    BadPermutation { m: usize, detail: String },
    #[error("permutation does not preserve the vertex triples")]
    NotAnAutomorphism,
    #[error("cannot classify {perm}: {reason}")]
    Unclassifiable { perm: String, reason: String },
    #[error("no rotation about {0}")]
    NoAxis(String),
    #[error("unknown cell {0:?}")]
    BadCell(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    fn times(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

/// A symmetry of a polytope, stored as its facet permutation (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    perm: Vec<usize>,
    orientation: Orientation,
}

impl Automorphism {
    pub fn identity(m: usize) -> Self {
        Automorphism { perm: (0..m).collect(), orientation: Orientation::Preserving }
    }

    /// Checks that `perm` is an automorphism of `p` and works out its orientation.
    pub fn from_permutation(p: &Polytope, perm: Vec<usize>) -> Result<Self, SymmetryError> {
        check_permutation(&perm, p.m())?;
        for t in p.vertices() {
            if p.vertex_id([perm[t[0]], perm[t[1]], perm[t[2]]]).is_none() {
                return Err(SymmetryError::NotAnAutomorphism);
            }
        }
        let orientation = orientation_of(p, &perm).ok_or(SymmetryError::NotAnAutomorphism)?;
        Ok(Automorphism { perm, orientation })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, f: usize) -> usize {
        self.perm[f]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&f| self.perm[f]).collect(),
            orientation: self.orientation.times(other.orientation),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        Automorphism { perm: inv, orientation: self.orientation }
    }

    pub fn pow(&self, e: u64) -> Automorphism {
        let mut out = Automorphism::identity(self.perm.len());
        for _ in 0..e {
            out = self.compose(&out);
        }
        out
    }

    /// Order as a permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        cycles(&self.perm).iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Image of each vertex index.
    pub fn vertex_perm(&self, p: &Polytope) -> Vec<usize> {
        p.vertices()
            .iter()
            .map(|t| p.vertex_id([self.perm[t[0]], self.perm[t[1]], self.perm[t[2]]]).expect("automorphism"))
            .collect()
    }

    /// Image of each edge index.
    pub fn edge_perm(&self, p: &Polytope) -> Vec<usize> {
        p.edges()
            .iter()
            .map(|e| p.edge_id(self.perm[e.facets.0], self.perm[e.facets.1]).expect("automorphism"))
            .collect()
    }
}

/// Cycle notation with 1-based facet ids; the identity prints as `()`.
impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<_> = cycles(&self.perm).into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return f.write_str("()");
        }
        for c in cs {
            let items: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = perm[x];
        }
        out.push(c);
    }
    out
}

fn check_permutation(perm: &[usize], m: usize) -> Result<(), SymmetryError> {
    if perm.len() != m {
        return Err(SymmetryError::BadPermutation { m, detail: format!("{} entries", perm.len()) });
    }
    let mut seen = vec![false; m];
    for &x in perm {
        if x >= m || seen[x] {
            return Err(SymmetryError::BadPermutation {
                m,
                detail: format!("entry {} repeated or out of range", x + 1),
            });
        }
        seen[x] = true;
    }
    Ok(())
}

/// Compares each facet's image cycle with the rotation system; `None` if the
/// directions disagree between facets (not an automorphism).
fn orientation_of(p: &Polytope, perm: &[usize]) -> Option<Orientation> {
    let rot = p.rotation();
    let mut result = None;
    for f in 0..p.m() {
        let image: Vec<usize> = rot.cycle(f).iter().map(|&g| perm[g]).collect();
        let target = rot.cycle(perm[f]);
        let o = if same_cycle(&image, target) {
            Orientation::Preserving
        } else {
            let rev: Vec<usize> = image.iter().rev().copied().collect();
            if !same_cycle(&rev, target) {
                return None;
            }
            Orientation::Reversing
        };
        match result {
            None => result = Some(o),
            Some(r) if r != o => return None,
            _ => {}
        }
    }
    result
}

/// +1 if `phi` carries every oriented facet cycle to an identically oriented one.
pub fn orientation_character(p: &Polytope, phi: &Automorphism) -> i8 {
    orientation_of(p, phi.perm()).expect("automorphism of p").sign()
}

/// Extends the flag map `(f0, g0) -> (f1, g1)` breadth-first; succeeds only if
/// the result is a combinatorial isomorphism `p -> q`.
fn propagate(
    p: &Polytope,
    q: &Polytope,
    (f0, g0): (usize, usize),
    (f1, g1): (usize, usize),
    reversing: bool,
) -> Option<Vec<usize>> {
    let m = p.m();
    if q.m() != m || p.degree(f0) != q.degree(f1) {
        return None;
    }
    let mut map: Vec<Option<usize>> = vec![None; m];
    let mut used = vec![false; m];
    let mut done = vec![false; m];
    map[f0] = Some(f1);
    used[f1] = true;
    let mut queue = VecDeque::from([(f0, g0)]);
    // g0's image is fixed by the flag; the walk below assigns it first.
    let mut first = Some(g1);
    while let Some((f, g)) = queue.pop_front() {
        if done[f] {
            continue;
        }
        done[f] = true;
        let cf = p.neighbours(f);
        let fi = map[f]?;
        let cq = q.neighbours(fi);
        let d = cf.len();
        if cq.len() != d {
            return None;
        }
        let gi = match first.take() {
            Some(x) => x,
            None => map[g]?,
        };
        let i0 = cf.iter().position(|&x| x == g)?;
        let j0 = cq.iter().position(|&x| x == gi)?;
        for t in 0..d {
            let a = cf[(i0 + t) % d];
            let b = if reversing { cq[(j0 + d - t) % d] } else { cq[(j0 + t) % d] };
            match map[a] {
                Some(x) if x != b => return None,
                Some(_) => {}
                None => {
                    if used[b] {
                        return None;
                    }
                    map[a] = Some(b);
                    used[b] = true;
                    queue.push_back((a, f));
                }
            }
        }
    }
    let perm: Vec<usize> = map.into_iter().collect::<Option<_>>()?;
    for t in p.vertices() {
        q.vertex_id([perm[t[0]], perm[t[1]], perm[t[2]]])?;
    }
    Some(perm)
}

/// The full automorphism group, sorted by facet permutation (identity first).
/// Computed once per polytope.
pub fn automorphisms(p: &Polytope) -> &[Automorphism] {
    p.automorphism_cache().get_or_init(|| {
        let f0 = 0;
        let g0 = p.neighbours(0)[0];
        let mut out = Vec::new();
        for f1 in 0..p.m() {
            for &g1 in p.neighbours(f1) {
                for reversing in [false, true] {
                    if let Some(perm) = propagate(p, p, (f0, g0), (f1, g1), reversing) {
                        let orientation = if reversing { Orientation::Reversing } else { Orientation::Preserving };
                        out.push(Automorphism { perm, orientation });
                    }
                }
            }
        }
        out.sort();
        out
    })
}

/// Orientation-preserving automorphisms.
pub fn rotation_subgroup(p: &Polytope) -> Vec<Automorphism> {
    automorphisms(p).iter().filter(|a| a.orientation == Orientation::Preserving).cloned().collect()
}

/// A facet bijection `perm` with `perm(p) = q`, if one exists.
pub fn isomorphism(p: &Polytope, q: &Polytope) -> Option<Vec<usize>> {
    if p.m() != q.m() || p.vertex_count() != q.vertex_count() {
        return None;
    }
    let g0 = p.neighbours(0)[0];
    for f1 in 0..q.m() {
        for &g1 in q.neighbours(f1) {
            for reversing in [false, true] {
                if let Some(perm) = propagate(p, q, (0, g0), (f1, g1), reversing) {
                    return Some(perm);
                }
            }
        }
    }
    None
}

/// A cell of the boundary complex, named by its facets (zero-based, sorted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Face(usize),
    Edge(usize, usize),
    Vertex(usize, usize, usize),
}

impl Cell {
    pub fn facets(&self) -> Vec<usize> {
        match *self {
            Cell::Face(f) => vec![f],
            Cell::Edge(a, b) => vec![a, b],
            Cell::Vertex(a, b, c) => vec![a, b, c],
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Face(_) => 0,
            Cell::Edge(..) => 1,
            Cell::Vertex(..) => 2,
        }
    }

    /// Parses `face:F`, `edge:F,G` or `vertex:F,G,H` (1-based).
    pub fn parse(p: &Polytope, s: &str) -> Result<Cell, SymmetryError> {
        let bad = || SymmetryError::BadCell(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let ids: Vec<usize> = rest
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1 && v <= p.m()).map(|v| v - 1))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match (kind, ids.as_slice()) {
            ("face", &[f]) => Ok(Cell::Face(f)),
            ("edge", &[a, b]) if p.adjacent(a, b) => Ok(Cell::Edge(a.min(b), a.max(b))),
            ("vertex", &[a, b, c]) if p.vertex_id([a, b, c]).is_some() => {
                let mut t = [a, b, c];
                t.sort_unstable();
                Ok(Cell::Vertex(t[0], t[1], t[2]))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Cell::Face(a) => write!(f, "face {}", a + 1),
            Cell::Edge(a, b) => write!(f, "edge {{{},{}}}", a + 1, b + 1),
            Cell::Vertex(a, b, c) => write!(f, "vertex {{{},{},{}}}", a + 1, b + 1, c + 1),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Cells mapped to themselves setwise.
pub fn invariant_cells(p: &Polytope, phi: &Automorphism) -> Vec<Cell> {
    let mut out = Vec::new();
    for f in 0..p.m() {
        if phi.apply(f) == f {
            out.push(Cell::Face(f));
        }
    }
    for e in p.edges() {
        let (a, b) = e.facets;
        let (x, y) = (phi.apply(a), phi.apply(b));
        if (x.min(y), x.max(y)) == (a, b) {
            out.push(Cell::Edge(a, b));
        }
    }
    for t in p.vertices() {
        let mut img = [phi.apply(t[0]), phi.apply(t[1]), phi.apply(t[2])];
        img.sort_unstable();
        if img == *t {
            out.push(Cell::Vertex(t[0], t[1], t[2]));
        }
    }
    out
}

/// Facets meeting the fixed-point set of `phi` on the boundary.
pub fn fix_facets(p: &Polytope, phi: &Automorphism) -> Vec<usize> {
    let mut mask = 0u32;
    for c in invariant_cells(p, phi) {
        for f in c.facets() {
            mask |= 1 << f;
        }
    }
    (0..p.m()).filter(|&f| (mask >> f) & 1 == 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Identity,
    EdgeRotation,
    FaceRotation,
    VertexRotation,
    FaceEdgeRotation,
    FaceVertexRotation,
    Reflection,
    Antipodal,
    EdgeRotoreflection,
    VertexRotoreflection,
    FaceRotoreflection,
}

impl SymmetryKind {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::Identity => "identity",
            SymmetryKind::EdgeRotation => "edge_rotation",
            SymmetryKind::FaceRotation => "face_rotation",
            SymmetryKind::VertexRotation => "vertex_rotation",
            SymmetryKind::FaceEdgeRotation => "face_edge_rotation",
            SymmetryKind::FaceVertexRotation => "face_vertex_rotation",
            SymmetryKind::Reflection => "reflection",
            SymmetryKind::Antipodal => "antipodal",
            SymmetryKind::EdgeRotoreflection => "edge_rotoreflection",
            SymmetryKind::VertexRotoreflection => "vertex_rotoreflection",
            SymmetryKind::FaceRotoreflection => "face_rotoreflection",
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            SymmetryKind::EdgeRotation
                | SymmetryKind::FaceRotation
                | SymmetryKind::VertexRotation
                | SymmetryKind::FaceEdgeRotation
                | SymmetryKind::FaceVertexRotation
        )
    }

    pub fn is_rotoreflection(self) -> bool {
        matches!(
            self,
            SymmetryKind::EdgeRotoreflection | SymmetryKind::VertexRotoreflection | SymmetryKind::FaceRotoreflection
        )
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryClassification {
    pub kind: SymmetryKind,
    pub order: u64,
    pub orientation: Orientation,
    /// Rotation axis cells; for rotoreflections those of the square.
    pub poles: Vec<Cell>,
}

fn rotation_kind(p: &Polytope, phi: &Automorphism) -> Result<(SymmetryKind, Vec<Cell>), SymmetryError> {
    let fail = |reason: String| SymmetryError::Unclassifiable { perm: phi.to_string(), reason };
    let mut poles = invariant_cells(p, phi);
    if poles.len() != 2 {
        return Err(fail(format!("{} invariant cells, expected 2 poles", poles.len())));
    }
    poles.sort_by_key(|c| (c.rank(), *c));
    let kind = match (poles[0], poles[1]) {
        (Cell::Face(_), Cell::Face(_)) => SymmetryKind::FaceRotation,
        (Cell::Edge(..), Cell::Edge(..)) => SymmetryKind::EdgeRotation,
        (Cell::Vertex(..), Cell::Vertex(..)) => SymmetryKind::VertexRotation,
        (Cell::Face(_), Cell::Edge(..)) => SymmetryKind::FaceEdgeRotation,
        (Cell::Face(_), Cell::Vertex(..)) => SymmetryKind::FaceVertexRotation,
        _ => return Err(fail("edge and vertex poles".into())),
    };
    Ok((kind, poles))
}

/// Geometric type of `phi`.
pub fn classify(p: &Polytope, phi: &Automorphism) -> Result<SymmetryClassification, SymmetryError> {
    let order = phi.order();
    let orientation = phi.orientation();
    let fail = |reason: &str| SymmetryError::Unclassifiable { perm: phi.to_string(), reason: reason.to_string() };
    let (kind, poles) = if phi.is_identity() {
        (SymmetryKind::Identity, Vec::new())
    } else if orientation == Orientation::Preserving {
        rotation_kind(p, phi)?
    } else if order == 2 {
        if invariant_cells(p, phi).is_empty() {
            (SymmetryKind::Antipodal, Vec::new())
        } else {
            (SymmetryKind::Reflection, Vec::new())
        }
    } else {
        if !invariant_cells(p, phi).is_empty() {
            return Err(fail("orientation-reversing of order > 2 with invariant cells"));
        }
        let (sq, poles) = rotation_kind(p, &phi.compose(phi))?;
        let kind = match sq {
            SymmetryKind::EdgeRotation => SymmetryKind::EdgeRotoreflection,
            SymmetryKind::VertexRotation => SymmetryKind::VertexRotoreflection,
            SymmetryKind::FaceRotation => SymmetryKind::FaceRotoreflection,
            _ => return Err(fail("square has poles of different types")),
        };
        (kind, poles)
    };
    Ok(SymmetryClassification { kind, order, orientation, poles })
}

/// Parses a facet permutation in cycle notation (`(1 2 3)(4 5)`) or as a
/// list of images (`2,3,1,4,...`), both 1-based.
pub fn parse_permutation(text: &str, m: usize) -> Result<Vec<usize>, SymmetryError> {
    let text = text.trim();
    let bad = |detail: String| SymmetryError::BadPermutation { m, detail };
    let num = |s: &str| -> Result<usize, SymmetryError> {
        match s.parse::<usize>() {
            Ok(v) if (1..=m).contains(&v) => Ok(v - 1),
            _ => Err(bad(format!("bad facet id {s:?}"))),
        }
    };
    let mut perm: Vec<usize> = (0..m).collect();
    if text.starts_with('(') {
        let mut moved = vec![false; m];
        for chunk in text.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('(').ok_or_else(|| bad(format!("stray text {chunk:?}")))?;
            let ids = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(num)
                .collect::<Result<Vec<_>, _>>()?;
            for (i, &x) in ids.iter().enumerate() {
                if moved[x] {
                    return Err(bad(format!("facet {} occurs twice", x + 1)));
                }
                moved[x] = true;
                perm[x] = ids[(i + 1) % ids.len()];
            }
        }
    } else {
        perm = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(num)
            .collect::<Result<_, _>>()?;
    }
    check_permutation(&perm, m)?;
    Ok(perm)
}

/// Generator of the rotations about `cell`: the one of largest order, ties
/// broken by the smallest image of the cell's lowest neighbouring facet.
pub fn axis_rotation(p: &Polytope, cell: Cell) -> Result<Automorphism, SymmetryError> {
    let facets = cell.facets();
    let probe = match cell {
        Cell::Face(f) => *p.neighbours(f).iter().min().expect("facet has neighbours"),
        _ => facets[0],
    };
    rotation_subgroup(p)
        .into_iter()
        .filter(|a| !a.is_identity() && invariant_cells(p, a).contains(&cell))
        .max_by(|a, b| a.order().cmp(&b.order()).then(b.apply(probe).cmp(&a.apply(probe))))
        .ok_or_else(|| SymmetryError::NoAxis(cell.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, dodecahedron, lobell, simplex3};
    use std::collections::HashSet;

    fn group_axioms(p: &Polytope) {
        let g = automorphisms(p);
        let set: HashSet<_> = g.iter().cloned().collect();
        assert_eq!(set.len(), g.len());
        assert!(g[0].is_identity());
        for a in g {
            assert!(set.contains(&a.inverse()));
            for b in g {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(automorphisms(&cube()).len(), 48);
        assert_eq!(automorphisms(&dodecahedron()).len(), 120);
        assert_eq!(automorphisms(&simplex3()).len(), 24);
        assert_eq!(automorphisms(&lobell(7).unwrap()).len(), 28);
        assert_eq!(rotation_subgroup(&dodecahedron()).len(), 60);
    }

    #[test]
    fn closure() {
        let mut ps = vec![cube(), simplex3(), dodecahedron()];
        ps.extend((5..=8).map(|n| lobell(n).unwrap()));
        for p in ps {
            group_axioms(&p);
            assert_eq!((4 * p.edge_count()) % automorphisms(&p).len(), 0);
        }
    }

    #[test]
    fn orientation_matches_propagation() {
        for p in [cube(), dodecahedron(), lobell(7).unwrap()] {
            for a in automorphisms(&p) {
                assert_eq!(orientation_character(&p, a), a.orientation().sign());
            }
        }
    }

    #[test]
    fn cube_mirror_reverses() {
        let p = cube();
        let mirror = Automorphism::from_permutation(&p, vec![1, 0, 2, 3, 4, 5]).unwrap();
        assert_eq!(orientation_character(&p, &mirror), -1);
        assert_eq!(classify(&p, &mirror).unwrap().kind, SymmetryKind::Reflection);
    }

    #[test]
    fn cube_kinds() {
        let p = cube();
        // quarter turn about the axis through facets 1 and 2
        let perm = parse_permutation("(3 5 4 6)", 6).unwrap();
        let a = Automorphism::from_permutation(&p, perm).unwrap();
        let c = classify(&p, &a).unwrap();
        assert_eq!((c.kind, c.order), (SymmetryKind::FaceRotation, 4));
        assert_eq!(c.poles, vec![Cell::Face(0), Cell::Face(1)]);

        let anti = Automorphism::from_permutation(&p, parse_permutation("(1 2)(3 4)(5 6)", 6).unwrap()).unwrap();
        let c = classify(&p, &anti).unwrap();
        assert_eq!((c.kind, c.order), (SymmetryKind::Antipodal, 2));
        assert!(fix_facets(&p, &anti).is_empty());
    }

    #[test]
    fn simplex_edge_rotoreflection() {
        let p = simplex3();
        let a = Automorphism::from_permutation(&p, parse_permutation("(1 3 2 4)", 4).unwrap()).unwrap();
        let c = classify(&p, &a).unwrap();
        assert_eq!((c.kind, c.order), (SymmetryKind::EdgeRotoreflection, 4));
        assert_eq!(c.poles.len(), 2);
    }

    #[test]
    fn every_element_classifies() {
        for p in [cube(), dodecahedron(), simplex3(), lobell(7).unwrap(), lobell(8).unwrap()] {
            for a in automorphisms(&p) {
                let c = classify(&p, a).unwrap();
                assert_eq!(c.order, a.order());
                let fixed = fix_facets(&p, a);
                let free = c.kind == SymmetryKind::Antipodal || c.kind.is_rotoreflection();
                assert_eq!(fixed.is_empty(), free, "{a} {:?}", c.kind);
                match c.kind {
                    SymmetryKind::EdgeRotation => assert_eq!((c.order, fixed.len()), (2, 4)),
                    SymmetryKind::Antipodal | SymmetryKind::Reflection => assert_eq!(c.order, 2),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn heptagon_rotation() {
        let p = lobell(7).unwrap();
        let a = axis_rotation(&p, Cell::Face(0)).unwrap();
        assert_eq!(a.order(), 7);
        assert_eq!(a.apply(1), 2);
        assert_eq!(fix_facets(&p, &a), vec![0, 15]);
        assert_eq!(classify(&p, &a).unwrap().kind, SymmetryKind::FaceRotation);
    }

    #[test]
    fn dodecahedron_is_lobell5() {
        let d = dodecahedron();
        let l = lobell(5).unwrap();
        let perm = isomorphism(&l, &d).expect("isomorphic");
        assert_eq!(l.relabel(&perm).unwrap(), d);
        assert!(isomorphism(&lobell(6).unwrap(), &d).is_none());
    }

    #[test]
    fn permutation_parsing() {
        assert_eq!(parse_permutation("(1 2)(3 4)", 4).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_permutation("2,1,4,3", 4).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_permutation("()", 4).unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_permutation("(1 2)(2 3)", 4).is_err());
        assert!(parse_permutation("1,1,2,3", 4).is_err());
        let a = Automorphism::from_permutation(&cube(), vec![1, 0, 3, 2, 5, 4]).unwrap();
        assert_eq!(a.to_string(), "(1 2)(3 4)(5 6)");
        assert!(Automorphism::from_permutation(&cube(), vec![2, 1, 0, 3, 4, 5]).is_err());
    }
}
