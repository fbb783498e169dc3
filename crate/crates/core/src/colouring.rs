//! Facet colourings by `Z_2^k` and their equivalence classes.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{enumerate_gl, BitMatrix, BitVec, Gf2Error, XorBasis, MAX_BITS};
use crate::polytope::{dual_complex, Polytope, PolytopeError, PolytopeSpec, SimplicialComplex};
use crate::symmetry::automorphisms;

#[derive(Debug, Error)]
pub enum ColouringError {
    #[error("colouring has rank {rank} but lives in Z_2^{k}; colours must span")]
    NotSurjective { rank: usize, k: usize },
    #[error("colouring has {found} columns but the polytope has {expected} facets")]
    WrongLength { expected: usize, found: usize },
    #[error("rank {0} outside 1..=32")]
    BadRank(usize),
    #[error("colour {colour:#x} of facet {facet} does not fit in {k} bits")]
    BadColour { facet: usize, colour: u32, k: usize },
    #[error("colouring file must start with a `polytope: <spec>` line")]
    MissingHeader,
    #[error(transparent)]
    Matrix(#[from] Gf2Error),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// A surjective map from facets to `Z_2^k`, stored as one packed word per
/// facet (bit `i` is coordinate `i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colouring {
    k: usize,
    columns: Vec<u32>,
}

impl Colouring {
    pub fn new(k: usize, columns: Vec<u32>) -> Result<Self, ColouringError> {
        if !(1..=MAX_BITS).contains(&k) {
            return Err(ColouringError::BadRank(k));
        }
        if columns.is_empty() || columns.len() > MAX_BITS {
            return Err(Gf2Error::BadLength(columns.len()).into());
        }
        let mask = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        if let Some((facet, &colour)) = columns.iter().enumerate().find(|(_, &c)| c & !mask != 0) {
            return Err(ColouringError::BadColour { facet: facet + 1, colour, k });
        }
        let rank = XorBasis::from_words(&columns).rank();
        if rank != k {
            return Err(ColouringError::NotSurjective { rank, k });
        }
        Ok(Colouring { k, columns })
    }

    /// Reads the defining matrix: `k` rows, column `j` is the colour of facet `j`.
    pub fn from_matrix(m: &BitMatrix) -> Result<Self, ColouringError> {
        Colouring::new(m.k(), m.column_words())
    }

    /// Checks the facet count against `p`.
    pub fn for_polytope(self, p: &Polytope) -> Result<Self, ColouringError> {
        if self.m() != p.m() {
            return Err(ColouringError::WrongLength { expected: p.m(), found: self.m() });
        }
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.columns.len()
    }

    pub fn colour(&self, f: usize) -> BitVec {
        BitVec::from_parts(self.k, self.columns[f])
    }

    pub fn colour_word(&self, f: usize) -> u32 {
        self.columns[f]
    }

    pub fn colour_words(&self) -> &[u32] {
        &self.columns
    }

    /// The defining matrix `Λ`.
    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_columns(self.k, &self.columns).expect("valid colouring")
    }

    /// Rows of `Λ` packed as facet masks.
    pub fn row_words(&self) -> Vec<u32> {
        (0..self.k)
            .map(|i| self.columns.iter().enumerate().fold(0u32, |acc, (j, &c)| acc | (((c >> i) & 1) << j)))
            .collect()
    }

    /// All colours have odd weight.
    pub fn is_odd(&self) -> bool {
        self.columns.iter().all(|c| c.count_ones() % 2 == 1)
    }

    /// `λ∘s`: facet `f` receives the colour of `perm[f]`.
    pub fn permute(&self, perm: &[usize]) -> Colouring {
        Colouring { k: self.k, columns: perm.iter().map(|&f| self.columns[f]).collect() }
    }

    /// `A∘λ` for invertible `A`, given as its column words.
    pub fn transform(&self, a: &crate::gf2::SquareGF2) -> Colouring {
        Colouring { k: self.k, columns: self.columns.iter().map(|&c| a.apply_word(c)).collect() }
    }
}

impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix().fmt(f)
    }
}

/// Parses a colouring file: a `polytope: <spec>` line followed by the matrix.
/// Lines starting with `#` are comments.
pub fn parse_colouring_file(text: &str) -> Result<(PolytopeSpec, Colouring), ColouringError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or(ColouringError::MissingHeader)?;
    let spec = header.strip_prefix("polytope:").ok_or(ColouringError::MissingHeader)?.trim().parse::<PolytopeSpec>()?;
    let body: Vec<&str> = lines.collect();
    let m = BitMatrix::parse(&body.join("\n"))?;
    Ok((spec, Colouring::from_matrix(&m)?))
}

pub fn format_colouring_file(spec: &PolytopeSpec, lambda: &Colouring) -> String {
    format!("polytope: {spec}\n{lambda}")
}

/// Every simplex of `K_P` receives linearly independent colours.
pub fn is_proper_general(p: &Polytope, lambda: &Colouring) -> bool {
    let c = lambda.colour_words();
    (0..p.m()).all(|f| c[f] != 0)
        && p.edges().iter().all(|e| {
            let (a, b) = (c[e.facets.0], c[e.facets.1]);
            a != b
        })
        && p.vertices().iter().all(|t| XorBasis::from_words(&[c[t[0]], c[t[1]], c[t[2]]]).rank() == 3)
}

/// Fast path for odd colourings: properness reduces to adjacent facets having
/// different colours. `None` if some colour is even.
pub fn is_proper_odd(p: &Polytope, lambda: &Colouring) -> Option<bool> {
    if !lambda.is_odd() {
        return None;
    }
    let c = lambda.colour_words();
    Some(p.edges().iter().all(|e| c[e.facets.0] != c[e.facets.1]))
}

pub fn is_proper(p: &Polytope, lambda: &Colouring) -> bool {
    is_proper_odd(p, lambda).unwrap_or_else(|| is_proper_general(p, lambda))
}

/// `ε = (1, …, 1)` lies in `Row(Λ)`.
pub fn is_orientable(lambda: &Colouring) -> bool {
    let eps = if lambda.m() == 32 { u32::MAX } else { (1u32 << lambda.m()) - 1 };
    XorBasis::from_words(&lambda.row_words()).contains(eps)
}

/// `K_ω`: the full subcomplex of `K_P` on the facets in the support of `ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subcomplex {
    pub omega: u32,
    pub complex: SimplicialComplex,
}

pub fn subcomplex(p: &Polytope, omega: u32) -> Subcomplex {
    Subcomplex { omega, complex: dual_complex(p).induced(omega) }
}

/// Every rank-`k+1` colouring projecting onto `lambda` by dropping the last
/// coordinate: one per extra row `b ∉ Row(Λ)`, `2^m - 2^k` in total.
pub fn extensions(lambda: &Colouring) -> impl Iterator<Item = Colouring> + '_ {
    let m = lambda.m();
    let k = lambda.k;
    let basis = XorBasis::from_words(&lambda.row_words());
    (0u64..(1u64 << m)).map(|b| b as u32).filter(move |&b| !basis.contains(b)).map(move |b| Colouring {
        k: k + 1,
        columns: lambda.columns.iter().enumerate().map(|(j, &c)| c | (((b >> j) & 1) << k)).collect(),
    })
}

pub fn extension_count(lambda: &Colouring) -> u64 {
    (1u64 << lambda.m()) - (1u64 << lambda.k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinearGroup {
    /// All of `GL_k(Z_2)`.
    FullGl,
    /// Matrices whose columns all have odd weight.
    GlOr,
}

/// The lexicographically least defining matrix in an equivalence class,
/// compared row-major with column 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    m: usize,
    /// Row words with column `j` in bit `j`.
    rows: Vec<u32>,
}

impl CanonicalForm {
    fn key(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(move |&r| row_key(r, self.m))
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::new(self.m, self.rows.clone()).expect("fits")
    }

    pub fn colouring(&self) -> Colouring {
        Colouring::from_matrix(&self.matrix()).expect("canonical forms are surjective")
    }

    /// Rows joined by `/`.
    pub fn compact(&self) -> String {
        let m = self.matrix();
        (0..m.k()).map(|i| m.row(i).to_string()).collect::<Vec<_>>().join("/")
    }

    /// Row-major bytes, one `0`/`1` per entry.
    pub fn bytes(&self) -> Vec<u8> {
        self.compact().bytes().filter(|&b| b != b'/').collect()
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows.len(), self.m).cmp(&(other.rows.len(), other.m)).then_with(|| self.key().cmp(other.key()))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

/// Column 0 becomes the most significant bit.
fn row_key(r: u32, m: usize) -> u32 {
    r.reverse_bits() >> (32 - m)
}

/// Least ordered basis of the span of `rows`; with `sum` set, only bases
/// adding up to `sum` are allowed.
fn least_basis(rows: &[u32], m: usize, sum: Option<u32>) -> Vec<u32> {
    let k = rows.len();
    let mut span = XorBasis::from_words(rows).span();
    span.retain(|&w| w != 0);
    span.sort_unstable_by_key(|&w| row_key(w, m));
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    let mut basis = XorBasis::new();
    let mut acc = 0u32;
    while chosen.len() < k {
        let last = chosen.len() + 1 == k;
        let pick = match sum {
            Some(s) if last => s ^ acc,
            _ => *span
                .iter()
                .find(|&&w| {
                    if basis.contains(w) {
                        return false;
                    }
                    match sum {
                        None => true,
                        Some(s) => {
                            let mut b = basis.clone();
                            b.insert(w);
                            !b.contains(s)
                        }
                    }
                })
                .expect("a completion exists"),
        };
        basis.insert(pick);
        acc ^= pick;
        chosen.push(pick);
    }
    chosen
}

fn permuted_rows(lambda: &Colouring, perm: &[usize]) -> Vec<u32> {
    lambda.permute(perm).row_words()
}

/// The least matrix `A·Λ∘s` over `s ∈ Sym(P)` and `A` in `group`.
///
/// The orbit of a matrix under `GL_k` is the set of ordered bases of its row
/// space; under `GL_k^or` it is the set of those bases whose sum equals the
/// sum of the rows. Both minima are found greedily.
pub fn canonical_form(p: &Polytope, lambda: &Colouring, group: LinearGroup) -> CanonicalForm {
    let m = lambda.m();
    automorphisms(p)
        .iter()
        .map(|s| {
            let rows = permuted_rows(lambda, s.perm());
            let sum = match group {
                LinearGroup::FullGl => None,
                LinearGroup::GlOr => Some(rows.iter().fold(0, |a, &r| a ^ r)),
            };
            CanonicalForm { m, rows: least_basis(&rows, m, sum) }
        })
        .min()
        .expect("identity is a symmetry")
}

/// Reference implementation: minimum over the full product `Sym(P) × GL`.
pub fn canonical_form_exhaustive(
    p: &Polytope,
    lambda: &Colouring,
    group: LinearGroup,
) -> Result<CanonicalForm, Gf2Error> {
    let m = lambda.m();
    let gl = enumerate_gl(lambda.k(), group == LinearGroup::GlOr)?;
    let mut best: Option<CanonicalForm> = None;
    for s in automorphisms(p) {
        let base = lambda.permute(s.perm());
        for a in &gl {
            let cand = CanonicalForm { m, rows: base.transform(a).row_words() };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("nonempty"))
}

/// `λ = A∘μ∘s` for some symmetry `s` and `A ∈ GL_k`.
pub fn equivalent(p: &Polytope, lambda: &Colouring, mu: &Colouring) -> bool {
    lambda.k() == mu.k()
        && lambda.m() == mu.m()
        && canonical_form(p, lambda, LinearGroup::FullGl) == canonical_form(p, mu, LinearGroup::FullGl)
}
