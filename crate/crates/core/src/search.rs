//! Enumeration of colourings up to equivalence, and construction of
//! colourings invariant under a chosen symmetry.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::admissible::{admissible_group, induced_linear_map, AdmissibleError, SymGroupReport};
use crate::colouring::{canonical_form, is_proper, CanonicalForm, Colouring, LinearGroup};
use crate::gf2::{matrices_with_constraints, BitVec, Gf2Error, SquareGF2, XorBasis, MAX_GL_RANK};
use crate::homology::{betti_manifold, is_qhs, HomologyError};
use crate::polytope::Polytope;
use crate::symmetry::Automorphism;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("rank {0} outside 3..={MAX_GL_RANK}")]
    BadRank(usize),
    #[error("rank {k} exceeds the facet count {m}")]
    TooFewFacets { k: usize, m: usize },
    #[error("base vertex {0} does not exist")]
    BadVertex(usize),
    #[error("seed facet {0} is out of range or repeated")]
    BadSeedFacet(usize),
    #[error("seed colour of facet {0} must be a nonzero odd-weight vector of the colour space")]
    BadSeedColour(usize),
    #[error("seed conflicts with the symmetry: no linear map carries the seeded colours along orbits")]
    SeedConflict,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
}

/// What to enumerate: odd-column colourings of rank `k`, optionally only
/// those giving rational homology spheres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTask {
    pub k: usize,
    pub qhs: bool,
    /// Cut branches containing a cycle in some two-colour subgraph, which
    /// rules out a rational homology sphere. Only used with the QHS filter
    /// and `k <= 4`.
    pub prune: bool,
    /// Vertex whose three facets receive `e1, e2, e3`.
    pub base_vertex: usize,
}

impl EnumerationTask {
    pub fn new(k: usize, qhs: bool) -> Self {
        EnumerationTask { k, qhs, prune: true, base_vertex: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    #[serde(serialize_with = "ser_display")]
    pub canonical: CanonicalForm,
    #[serde(skip)]
    pub representative: Colouring,
    pub betti: [u64; 4],
    pub qhs: bool,
    pub symmetry: SymGroupReport,
}

fn ser_display<S: serde::Serializer>(c: &CanonicalForm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

/// Pairwise inequivalent classes, sorted by canonical form.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ClassList {
    pub classes: Vec<ClassEntry>,
}

impl ClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    fn from_forms(p: &Polytope, forms: Vec<CanonicalForm>) -> Result<ClassList, SearchError> {
        let classes = forms
            .into_par_iter()
            .map(|canonical| {
                let representative = canonical.colouring();
                Ok(ClassEntry {
                    betti: betti_manifold(p, &representative)?,
                    qhs: is_qhs(p, &representative),
                    symmetry: admissible_group(p, &representative)?,
                    representative,
                    canonical,
                })
            })
            .collect::<Result<Vec<_>, SearchError>>()?;
        Ok(ClassList { classes })
    }
}

/// Number of classes per identified admissible group.
pub fn classify_by_symmetry(classes: &ClassList) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for c in &classes.classes {
        *out.entry(c.symmetry.identified_name.clone()).or_default() += 1;
    }
    out
}

/// Facets in breadth-first order from the facets of `vertex`.
fn search_order(p: &Polytope, vertex: usize) -> Vec<usize> {
    let start = p.vertices()[vertex];
    let mut seen = 0u32;
    let mut order = Vec::with_capacity(p.m());
    let mut queue: VecDeque<usize> = start.iter().copied().collect();
    for &f in &start {
        seen |= 1 << f;
    }
    while let Some(f) = queue.pop_front() {
        order.push(f);
        let mut nb = p.neighbours(f).to_vec();
        nb.sort_unstable();
        for g in nb {
            if seen & (1 << g) == 0 {
                seen |= 1 << g;
                queue.push_back(g);
            }
        }
    }
    order
}

#[derive(Clone)]
struct State {
    colours: Vec<u32>,
    /// Facet mask of each colour.
    class: [u32; 32],
    /// Colours so far span `e1..e_d`.
    d: usize,
}

struct Enumerator<'a> {
    p: &'a Polytope,
    k: usize,
    order: Vec<usize>,
    prune: bool,
}

impl Enumerator<'_> {
    fn assign(&self, st: &mut State, f: usize, c: u32) {
        st.colours[f] = c;
        st.class[c as usize] |= 1 << f;
    }

    fn unassign(&self, st: &mut State, f: usize, c: u32) {
        st.colours[f] = 0;
        st.class[c as usize] &= !(1 << f);
    }

    /// Colouring `f` by `c` closes a cycle in some two-colour subgraph.
    fn closes_cycle(&self, st: &State, f: usize, c: u32) -> bool {
        let adj = self.p.adjacency_mask(f);
        for (c2, &mask2) in st.class.iter().enumerate() {
            if c2 as u32 == c || mask2 == 0 {
                continue;
            }
            let nbrs = adj & mask2;
            if nbrs.count_ones() < 2 {
                continue;
            }
            let allowed = st.class[c as usize] | mask2;
            let mut rest = nbrs;
            while rest != 0 {
                let start = rest & rest.wrapping_neg();
                let comp = self.component(start, allowed);
                if (comp & nbrs).count_ones() >= 2 {
                    return true;
                }
                rest &= !comp;
            }
        }
        false
    }

    fn component(&self, start: u32, allowed: u32) -> u32 {
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let g = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.p.adjacency_mask(g) & allowed & !seen;
            seen |= new;
            frontier |= new;
        }
        seen
    }

    fn candidates(&self, st: &State, i: usize) -> Vec<(u32, usize)> {
        let f = self.order[i];
        let remaining = self.order.len() - i - 1;
        let mut forbidden = 0u64;
        let mut adj = self.p.adjacency_mask(f);
        while adj != 0 {
            let g = adj.trailing_zeros() as usize;
            adj &= adj - 1;
            if st.colours[g] != 0 {
                forbidden |= 1 << st.colours[g];
            }
        }
        let mut out = Vec::new();
        for c in 1u32..(1 << st.d) {
            if c.count_ones() % 2 == 1 && forbidden & (1 << c) == 0 && remaining >= self.k - st.d {
                out.push((c, st.d));
            }
        }
        if st.d < self.k && remaining + 1 >= self.k - st.d {
            out.push((1 << st.d, st.d + 1));
        }
        out
    }

    /// Depth-first extension of `st` from position `i`; every state reaching
    /// position `limit` is handed to `sink`.
    fn run(&self, st: &mut State, i: usize, limit: usize, sink: &mut dyn FnMut(&State)) {
        if i == limit {
            sink(st);
            return;
        }
        let f = self.order[i];
        for (c, d) in self.candidates(st, i) {
            if self.prune && self.closes_cycle(st, f, c) {
                continue;
            }
            let saved = st.d;
            st.d = d;
            self.assign(st, f, c);
            self.run(st, i + 1, limit, sink);
            self.unassign(st, f, c);
            st.d = saved;
        }
    }
}

fn validate_rank(p: &Polytope, k: usize) -> Result<(), SearchError> {
    if !(3..=MAX_GL_RANK).contains(&k) {
        return Err(SearchError::BadRank(k));
    }
    if k > p.m() {
        return Err(SearchError::TooFewFacets { k, m: p.m() });
    }
    Ok(())
}

/// Canonical forms of all proper odd-column rank-`k` colourings (QHS only if
/// requested), one per class.
pub fn enumerate_canonical(p: &Polytope, task: &EnumerationTask) -> Result<Vec<CanonicalForm>, SearchError> {
    validate_rank(p, task.k)?;
    if task.base_vertex >= p.vertex_count() {
        return Err(SearchError::BadVertex(task.base_vertex));
    }
    let k = task.k;
    let e = Enumerator { p, k, order: search_order(p, task.base_vertex), prune: task.prune && task.qhs && k <= 4 };
    let m = p.m();
    let mut st = State { colours: vec![0; m], class: [0; 32], d: 3 };
    for (j, &f) in e.order[..3].iter().enumerate() {
        e.assign(&mut st, f, 1 << j);
    }
    let depth = m.min(9);
    let mut prefixes = Vec::new();
    e.run(&mut st, 3, depth, &mut |s| prefixes.push(s.clone()));

    let forms: BTreeMap<CanonicalForm, ()> = prefixes
        .into_par_iter()
        .map(|mut s| {
            let mut found = BTreeMap::new();
            e.run(&mut s, depth, m, &mut |leaf| {
                if leaf.d != k {
                    return;
                }
                let lambda = Colouring::new(k, leaf.colours.clone()).expect("rank k by construction");
                debug_assert!(is_proper(p, &lambda));
                if task.qhs && !is_qhs(p, &lambda) {
                    return;
                }
                found.insert(canonical_form(p, &lambda, LinearGroup::GlOr), ());
            });
            found
        })
        .reduce(BTreeMap::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(forms.into_keys().collect())
}

/// One entry per equivalence class, with Betti numbers and admissible group.
pub fn enumerate_colourings(p: &Polytope, task: &EnumerationTask) -> Result<ClassList, SearchError> {
    ClassList::from_forms(p, enumerate_canonical(p, task)?)
}

/// Result of [`construct_with_symmetry`].
#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    /// Matrices `A` used by at least one candidate.
    #[serde(serialize_with = "ser_matrices")]
    pub matrices: Vec<SquareGF2>,
    /// Colourings produced before the properness and QHS filters, after
    /// fixing the remaining basis freedom.
    pub raw_candidates: usize,
    /// Candidates that are proper and of full rank.
    pub proper: usize,
    pub classes: ClassList,
}

fn ser_matrices<S: serde::Serializer>(v: &[SquareGF2], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|a| a.to_string()))
}

/// Reading facets in order, every colour outside the span of `base` and the
/// colours before it is the next unit vector.
fn in_basis_order(cols: &[u32], base: &XorBasis) -> bool {
    let mut span = base.clone();
    for &c in cols {
        if !span.contains(c) {
            if c != 1 << span.rank() {
                return false;
            }
            span.insert(c);
        }
    }
    true
}

fn orbits(phi: &Automorphism) -> Vec<Vec<usize>> {
    let m = phi.perm().len();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = phi.apply(x);
        }
        out.push(orbit);
    }
    out
}

/// Colourings with `λ(φ^i F) = A^i λ(F)` for a matrix `A` of order dividing
/// `o(φ)`, agreeing with `seed` (pairs of zero-based facet and colour word).
///
/// Seeded orbits are propagated from their least seeded facet. Each free
/// orbit takes any odd colour fixed by `A^len` other than the colour of a
/// `φ`-invariant facet adjacent to it, since such a facet meets every member
/// of the orbit and `A` fixes its colour.
pub fn construct_with_symmetry(
    p: &Polytope,
    phi: &Automorphism,
    k: usize,
    seed: &[(usize, u32)],
    qhs: bool,
) -> Result<Construction, SearchError> {
    validate_rank(p, k)?;
    let m = p.m();
    let mut seeded: Vec<Option<u32>> = vec![None; m];
    for &(f, c) in seed {
        if f >= m || seeded[f].is_some() {
            return Err(SearchError::BadSeedFacet(f + 1));
        }
        if c >= (1 << k) || c.count_ones() % 2 == 0 {
            return Err(SearchError::BadSeedColour(f + 1));
        }
        seeded[f] = Some(c);
    }
    let constraints: Vec<(BitVec, BitVec)> = (0..m)
        .filter_map(|f| match (seeded[f], seeded[phi.apply(f)]) {
            (Some(a), Some(b)) => Some((BitVec::from_parts(k, a), BitVec::from_parts(k, b))),
            _ => None,
        })
        .collect();
    let order = phi.order();
    let matrices = match matrices_with_constraints(k, order, &constraints) {
        Err(Gf2Error::InconsistentConstraints) => return Err(SearchError::SeedConflict),
        other => other?,
    };
    let orbits = orbits(phi);
    // Linear maps fixing the seeded colours commute with the construction,
    // so when those colours span `e1..e_d` only colourings introducing new
    // colours in basis order are kept.
    let seed_span = XorBasis::from_words(&seed.iter().map(|&(_, c)| c).collect::<Vec<_>>());
    let d = seed_span.rank();
    let normal = (0..d).all(|i| seed_span.contains(1 << i)).then_some(seed_span);
    let mut used: Vec<&SquareGF2> = Vec::new();

    let mut raw_candidates = 0usize;
    let mut candidates: Vec<Colouring> = Vec::new();
    'matrix: for a in &matrices {
        let mut fixed: Vec<Option<u32>> = vec![None; m];
        let mut free = Vec::new();
        for orbit in &orbits {
            let Some(&start) = orbit.iter().find(|&&f| seeded[f].is_some()) else {
                free.push(orbit);
                continue;
            };
            let mut c = seeded[start].expect("seeded");
            let pos = orbit.iter().position(|&f| f == start).expect("member");
            for t in 0..orbit.len() {
                let f = orbit[(pos + t) % orbit.len()];
                if seeded[f].is_some_and(|s| s != c) {
                    continue 'matrix;
                }
                fixed[f] = Some(c);
                c = a.apply_word(c);
            }
            if c != seeded[start].expect("seeded") {
                continue 'matrix;
            }
        }
        let power: Vec<SquareGF2> = free.iter().map(|o| a.pow(o.len() as u64)).collect();
        let options: Vec<Vec<u32>> = free
            .iter()
            .zip(&power)
            .map(|(orbit, al)| {
                let mut banned = 0u64;
                for o in &orbits {
                    if let [g] = o[..] {
                        if orbit.iter().any(|&f| p.adjacent(f, g)) {
                            if let Some(c) = fixed[g] {
                                banned |= 1 << c;
                            }
                        }
                    }
                }
                (1u32..(1 << k))
                    .filter(|&c| c.count_ones() % 2 == 1 && banned & (1 << c) == 0 && al.apply_word(c) == c)
                    .collect()
            })
            .collect();
        let mut pick = vec![0usize; free.len()];
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let mut cols = fixed.clone();
            for (j, orbit) in free.iter().enumerate() {
                let mut c = options[j][pick[j]];
                for &f in orbit.iter() {
                    cols[f] = Some(c);
                    c = a.apply_word(c);
                }
            }
            let cols: Vec<u32> = cols.into_iter().map(|c| c.expect("every orbit coloured")).collect();
            if normal.as_ref().is_none_or(|base| in_basis_order(&cols, base)) {
                raw_candidates += 1;
                if used.last() != Some(&a) {
                    used.push(a);
                }
                if let Ok(lambda) = Colouring::new(k, cols) {
                    candidates.push(lambda);
                }
            }
            // odometer over the free orbit choices
            let mut j = 0;
            loop {
                if j == pick.len() {
                    break;
                }
                pick[j] += 1;
                if pick[j] < options[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == pick.len() {
                break;
            }
        }
    }

    let proper: Vec<Colouring> = candidates.into_iter().filter(|l| is_proper(p, l)).collect();
    let proper_count = proper.len();
    let mut forms = BTreeMap::new();
    for lambda in proper {
        if qhs && !is_qhs(p, &lambda) {
            continue;
        }
        assert!(induced_linear_map(&lambda, phi).is_some(), "constructed colouring must admit the symmetry");
        forms.insert(canonical_form(p, &lambda, LinearGroup::GlOr), ());
    }
    Ok(Construction {
        matrices: used.into_iter().cloned().collect(),
        raw_candidates,
        proper: proper_count,
        classes: ClassList::from_forms(p, forms.into_keys().collect())?,
    })
}
