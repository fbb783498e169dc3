//! Rational Betti numbers of `K_ω` and of the manifold `M_λ`, and the QHS tests.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{is_orientable, Colouring};
use crate::gf2::XorBasis;
use crate::polytope::{dual_complex, Polytope, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("the tree criterion needs a rank-3 colouring by odd vectors (got rank {0})")]
    NotSmallCover(usize),
    #[error("polytope is not the cube with opposite facets numbered 2i-1, 2i")]
    NotCube,
    #[error("rank {0} of the boundary matrix overflowed 128-bit elimination")]
    Overflow(usize),
}

/// Reduced rational Betti numbers of a complex of dimension at most 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BettiTriple {
    pub b0: u64,
    pub b1: u64,
    pub b2: u64,
    /// The empty complex, whose only reduced homology sits in degree -1.
    pub empty: bool,
}

impl BettiTriple {
    /// Nonempty with vanishing reduced homology (a rational homology point).
    pub fn is_acyclic(&self) -> bool {
        !self.empty && self.b0 == 0 && self.b1 == 0 && self.b2 == 0
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let x = a[r][c].checked_mul(a[i][j])?;
                let y = a[i][c].checked_mul(a[r][j])?;
                a[i][j] = x.checked_sub(y)? / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    Some(r)
}

fn boundary2(k: &SimplicialComplex) -> Vec<Vec<i128>> {
    let index = |e: [usize; 2]| k.edges.iter().position(|&x| x == e).expect("faces of a triangle are edges");
    let mut d = vec![vec![0i128; k.triangles.len()]; k.edges.len()];
    for (j, t) in k.triangles.iter().enumerate() {
        let [a, b, c] = *t;
        d[index([b, c])][j] += 1;
        d[index([a, c])][j] -= 1;
        d[index([a, b])][j] += 1;
    }
    d
}

/// Reduced rational Betti numbers. Vertex ids must be sorted inside every
/// simplex, as produced by [`dual_complex`].
pub fn betti_complex(k: &SimplicialComplex) -> Result<BettiTriple, HomologyError> {
    if k.is_empty() {
        return Ok(BettiTriple { empty: true, ..Default::default() });
    }
    let n = k.vertices.iter().max().map_or(0, |&v| v + 1);
    let mut uf = UnionFind::new(n);
    let mut merges = 0usize;
    for e in &k.edges {
        merges += uf.union(e[0], e[1]) as usize;
    }
    let components = k.vertices.len() - merges;
    let r2 = integer_rank(boundary2(k)).ok_or(HomologyError::Overflow(k.edges.len()))?;
    let v = k.vertices.len();
    let e = k.edges.len();
    let t = k.triangles.len();
    Ok(BettiTriple {
        b0: (components - 1) as u64,
        b1: (e - (v - components) - r2) as u64,
        b2: (t - r2) as u64,
        empty: false,
    })
}

fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// `Row(Λ)` as facet masks, in Gray-code order from 0.
pub fn row_space_masks(lambda: &Colouring) -> Vec<u32> {
    XorBasis::from_words(&lambda.row_words()).span()
}

/// Rational Betti numbers `(β0, β1, β2, β3)` of `M_λ`, summing the reduced
/// Betti numbers of `K_ω` over `ω ∈ Row(Λ)` with a degree shift of one.
pub fn betti_manifold(p: &Polytope, lambda: &Colouring) -> Result<[u64; 4], HomologyError> {
    let k = dual_complex(p);
    row_space_masks(lambda)
        .par_iter()
        .map(|&w| {
            let b = betti_complex(&k.induced(w))?;
            Ok(if b.empty { [1, 0, 0, 0] } else { [0, b.b0, b.b1, b.b2] })
        })
        .try_reduce(|| [0; 4], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]))
}

/// The facets in `mask` induce a nonempty connected subgraph of `G(P)`.
pub fn connected_mask(p: &Polytope, mask: u32) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let f = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = p.adjacency_mask(f) & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

/// `M_λ` is a rational homology sphere: orientable, and the 1-skeleton of
/// `K_ω` is nonempty and connected for every `ω ∈ Row(Λ) ∖ {0, ε}`.
pub fn is_qhs(p: &Polytope, lambda: &Colouring) -> bool {
    if !is_orientable(lambda) {
        return false;
    }
    let eps = full_mask(p.m());
    let mut omegas = row_space_masks(lambda);
    omegas.retain(|&w| w != 0 && w != eps);
    omegas.sort_by_key(|&w| (w.count_ones(), w));
    omegas.into_iter().all(|w| connected_mask(p, w))
}

/// Tree test for small covers: with colours `e1, e2, e3, e1+e2+e3`, the
/// subgraphs spanned by facets of colours `{i, j} ⊂ {1, 2, 3}` must be trees.
pub fn is_qhs_small_cover(p: &Polytope, lambda: &Colouring) -> Result<bool, HomologyError> {
    if lambda.k() != 3 || !lambda.is_odd() {
        return Err(HomologyError::NotSmallCover(lambda.k()));
    }
    let class = |c: u32| -> u32 { (0..p.m()).filter(|&f| lambda.colour_word(f) == c).fold(0, |acc, f| acc | (1 << f)) };
    let (c1, c2, c3) = (class(1), class(2), class(4));
    Ok([(c1, c2), (c1, c3), (c2, c3)].iter().all(|&(a, b)| is_tree(p, a | b)))
}

fn is_tree(p: &Polytope, mask: u32) -> bool {
    let vertices = mask.count_ones() as usize;
    let edges = p.edges().iter().filter(|e| (mask >> e.facets.0) & 1 == 1 && (mask >> e.facets.1) & 1 == 1).count();
    connected_mask(p, mask) && edges + 1 == vertices
}

/// For the `n`-cube whose facets `2i-1, 2i` are opposite: `T_j` holds the
/// sums of `j` distinct opposite-pair indicator vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSets {
    pub n: usize,
    /// `sets[j]` is `T_j` as facet masks, `0 <= j <= n`.
    pub sets: Vec<Vec<u32>>,
}

impl TSets {
    pub fn new(n: usize) -> Self {
        let mut sets = vec![Vec::new(); n + 1];
        for s in 0u32..(1 << n) {
            let mask = (0..n).filter(|i| (s >> i) & 1 == 1).fold(0u32, |acc, i| acc | (0b11 << (2 * i)));
            sets[s.count_ones() as usize].push(mask);
        }
        for t in &mut sets {
            t.sort_unstable();
        }
        TSets { n, sets }
    }
}

fn check_cube(p: &Polytope) -> Result<usize, HomologyError> {
    let m = p.m();
    let n = m / 2;
    let ok = m % 2 == 0
        && p.vertex_count() == 1 << n
        && (0..m).all(|f| p.adjacency_mask(f) == full_mask(m) & !(0b11 << (2 * (f / 2))));
    if ok {
        Ok(n)
    } else {
        Err(HomologyError::NotCube)
    }
}

/// `β_j(M_λ) = |Row(Λ) ∩ T_j|` for colourings of the cube.
pub fn betti_cube(p: &Polytope, lambda: &Colouring, j: usize) -> Result<u64, HomologyError> {
    let n = check_cube(p)?;
    let basis = XorBasis::from_words(&lambda.row_words());
    Ok(TSets::new(n).sets.get(j).map_or(0, |t| t.iter().filter(|&&w| basis.contains(w)).count() as u64))
}

/// Orientable, with `Row(Λ)` missing every `T_j` for `0 < j < n`.
pub fn is_qhs_cube(p: &Polytope, lambda: &Colouring) -> Result<bool, HomologyError> {
    let n = check_cube(p)?;
    for j in 1..n {
        if betti_cube(p, lambda, j)? != 0 {
            return Ok(false);
        }
    }
    Ok(is_orientable(lambda))
}
