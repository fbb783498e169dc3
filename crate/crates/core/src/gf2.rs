//! Linear algebra over GF(2) on single machine words.
//!
//! Vectors of length at most 32 are packed into a `u32`, with bit `i` holding
//! coordinate `i`. A [`BitMatrix`] stores its rows as words, so row reduction
//! is plain XOR. The groups `GL_k(Z2)` and its orientation-preserving subgroup
//! `GL_k^or(Z2)` (all columns of odd weight) are enumerated for small `k`.

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on vector lengths (and therefore on facet counts and ranks).
pub const MAX_BITS: usize = 32;

/// Largest `k` for which `GL_k` is materialized.
pub const MAX_GL_RANK: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("vector length {0} outside 1..=32")]
    BadLength(usize),
    #[error("bits above position {len} are set in {bits:#x}")]
    StrayBits { len: usize, bits: u32 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedRows,
    #[error("invalid character {0:?} in 0/1 text")]
    BadChar(char),
    #[error("empty matrix")]
    Empty,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible")]
    Singular,
    #[error("GL_{0} is too large to enumerate (limit is k <= 5)")]
    RankTooLarge(usize),
    #[error("constraints are not consistent with any linear map")]
    InconsistentConstraints,
    #[error("order must be at least 1")]
    ZeroOrder,
}

#[inline]
fn low_mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

#[inline]
pub(crate) fn parity(w: u32) -> u32 {
    w.count_ones() & 1
}

/// A vector in `Z2^len`, `1 <= len <= 32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BitVec {
    len: u8,
    bits: u32,
}

impl BitVec {
    pub fn new(len: usize, bits: u32) -> Result<Self, Gf2Error> {
        if len == 0 || len > MAX_BITS {
            return Err(Gf2Error::BadLength(len));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Gf2Error::StrayBits { len, bits });
        }
        Ok(Self { len: len as u8, bits })
    }

    /// Panics on invalid input; for internal call sites that already uphold the invariants.
    pub(crate) fn from_parts(len: usize, bits: u32) -> Self {
        Self::new(len, bits).expect("valid bit vector")
    }

    pub fn zero(len: usize) -> Self {
        Self::from_parts(len, 0)
    }

    /// The all-ones vector, usually written epsilon.
    pub fn ones(len: usize) -> Self {
        Self::from_parts(len, low_mask(len))
    }

    /// The standard basis vector `e_{i+1}` (zero-based `i`).
    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len, "unit index {i} out of range for length {len}");
        Self::from_parts(len, 1 << i)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit {i} out of range");
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Odd weight, i.e. an orientable colour.
    pub fn is_odd(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        parity(self.bits & other.bits) == 1
    }
}

impl BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: BitVec) -> BitVec {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        BitVec { len: self.len, bits: self.bits ^ rhs.bits }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut bits = 0u32;
        let mut len = 0usize;
        for ch in s.chars() {
            match ch {
                '0' => {}
                '1' => {
                    if len < MAX_BITS {
                        bits |= 1 << len;
                    }
                }
                c => return Err(Gf2Error::BadChar(c)),
            }
            len += 1;
        }
        BitVec::new(len, bits)
    }
}

/// Incremental echelon basis. Pivots are lowest set bits and basis vectors
/// are kept sorted by pivot, so reduction is a single ascending pass.
#[derive(Clone, Debug, Default)]
pub(crate) struct XorBasis {
    vecs: Vec<u32>,
}

impl XorBasis {
    pub fn new() -> Self {
        Self { vecs: Vec::new() }
    }

    pub fn from_words(words: &[u32]) -> Self {
        let mut b = Self::new();
        for &w in words {
            b.insert(w);
        }
        b
    }

    pub fn reduce(&self, mut w: u32) -> u32 {
        for &b in &self.vecs {
            if w & b & b.wrapping_neg() != 0 {
                w ^= b;
            }
        }
        w
    }

    pub fn contains(&self, w: u32) -> bool {
        self.reduce(w) == 0
    }

    /// Returns true if `w` was independent of the current basis.
    pub fn insert(&mut self, w: u32) -> bool {
        let r = self.reduce(w);
        if r == 0 {
            return false;
        }
        let pivot = r & r.wrapping_neg();
        let pos = self.vecs.iter().position(|&b| (b & b.wrapping_neg()) > pivot).unwrap_or(self.vecs.len());
        self.vecs.insert(pos, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    /// Every element of the span, in Gray-code order starting at 0.
    pub fn span(&self) -> Vec<u32> {
        let n = self.vecs.len();
        let mut out = Vec::with_capacity(1 << n);
        let mut cur = 0u32;
        out.push(cur);
        for i in 1u64..(1u64 << n) {
            cur ^= self.vecs[i.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }
}

/// A `k x m` matrix over GF(2), stored row-wise. When used as a defining
/// matrix, column `j` is the colour of facet `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<u32>,
}

impl BitMatrix {
    pub fn new(cols: usize, rows: Vec<u32>) -> Result<Self, Gf2Error> {
        if cols == 0 || cols > MAX_BITS {
            return Err(Gf2Error::BadLength(cols));
        }
        for &r in &rows {
            if r & !low_mask(cols) != 0 {
                return Err(Gf2Error::StrayBits { len: cols, bits: r });
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn from_rows(rows: &[BitVec]) -> Result<Self, Gf2Error> {
        let first = rows.first().ok_or(Gf2Error::Empty)?;
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(Gf2Error::RaggedRows);
        }
        Self::new(first.len(), rows.iter().map(|r| r.bits()).collect())
    }

    /// Builds a `k x columns.len()` matrix whose column `j` is `columns[j]`
    /// (low `k` bits).
    pub fn from_columns(k: usize, columns: &[u32]) -> Result<Self, Gf2Error> {
        if k == 0 || k > MAX_BITS {
            return Err(Gf2Error::BadLength(k));
        }
        let mut rows = vec![0u32; k];
        for (j, &c) in columns.iter().enumerate() {
            if c & !low_mask(k) != 0 {
                return Err(Gf2Error::StrayBits { len: k, bits: c });
            }
            for (i, row) in rows.iter_mut().enumerate() {
                *row |= ((c >> i) & 1) << j;
            }
        }
        Self::new(columns.len(), rows)
    }

    pub fn zero(k: usize, m: usize) -> Self {
        Self::new(m, vec![0; k]).expect("valid dimensions")
    }

    pub fn identity(k: usize) -> Self {
        Self::new(k, (0..k).map(|i| 1u32 << i).collect()).expect("valid dimensions")
    }

    /// Number of rows.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn m(&self) -> usize {
        self.cols
    }

    pub fn row_words(&self) -> &[u32] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_parts(self.cols, self.rows[i])
    }

    pub fn column_word(&self, j: usize) -> u32 {
        assert!(j < self.cols);
        self.rows.iter().enumerate().fold(0, |acc, (i, &r)| acc | (((r >> j) & 1) << i))
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_parts(self.k(), self.column_word(j))
    }

    pub fn column_words(&self) -> Vec<u32> {
        (0..self.cols).map(|j| self.column_word(j)).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// `self * rhs` where `self` is `k x n` and `rhs` is `n x m`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != rhs.k() {
            return Err(Gf2Error::LengthMismatch { expected: self.cols, found: rhs.k() });
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| rhs.rows.iter().enumerate().filter(|(j, _)| (r >> j) & 1 == 1).fold(0, |acc, (_, &x)| acc ^ x))
            .collect();
        BitMatrix::new(rhs.cols, rows)
    }

    /// Parses the `k` lines of `0`/`1` characters format. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, Gf2Error> {
        let rows: Vec<BitVec> =
            text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::parse).collect::<Result<_, _>>()?;
        Self::from_rows(&rows)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k() {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Row rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    XorBasis::from_words(&m.rows).rank()
}

/// All vectors of `Row(M)`, sorted by their packed value.
pub fn row_space(m: &BitMatrix) -> Vec<BitVec> {
    let mut words = XorBasis::from_words(&m.rows).span();
    words.sort_unstable();
    words.into_iter().map(|w| BitVec::from_parts(m.cols, w)).collect()
}

pub fn in_span(v: &BitVec, m: &BitMatrix) -> Result<bool, Gf2Error> {
    if v.len() != m.m() {
        return Err(Gf2Error::LengthMismatch { expected: m.m(), found: v.len() });
    }
    Ok(XorBasis::from_words(&m.rows).contains(v.bits()))
}

pub(crate) fn odd_words(k: usize) -> impl Iterator<Item = u32> {
    (1u64..(1u64 << k)).map(|w| w as u32).filter(|w| w.count_ones() % 2 == 1)
}

/// The `2^(k-1)` odd-weight vectors of `Z2^k`, in increasing packed order.
pub fn orientable_vectors(k: usize) -> Vec<BitVec> {
    assert!((1..=MAX_BITS).contains(&k), "k must lie in 1..=32");
    assert!(k < 28, "refusing to materialize 2^{} vectors", k - 1);
    odd_words(k).map(|w| BitVec::from_parts(k, w)).collect()
}

/// A square matrix over GF(2). Column `j` is the image of `e_{j+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SquareGF2 {
    k: usize,
    rows: Vec<u32>,
}

impl SquareGF2 {
    pub fn identity(k: usize) -> Self {
        assert!((1..=MAX_BITS).contains(&k));
        Self { k, rows: (0..k).map(|i| 1u32 << i).collect() }
    }

    pub fn from_matrix(m: BitMatrix) -> Result<Self, Gf2Error> {
        if m.k() != m.m() {
            return Err(Gf2Error::NotSquare { rows: m.k(), cols: m.m() });
        }
        Ok(Self { k: m.m(), rows: m.rows })
    }

    /// The matrix sending `e_{j+1}` to `columns[j]`.
    pub fn from_columns(columns: &[u32]) -> Result<Self, Gf2Error> {
        let k = columns.len();
        Self::from_matrix(BitMatrix::from_columns(k, columns)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_matrix(&self) -> BitMatrix {
        BitMatrix { cols: self.k, rows: self.rows.clone() }
    }

    #[inline]
    pub fn apply_word(&self, v: u32) -> u32 {
        self.rows.iter().enumerate().fold(0, |acc, (i, &r)| acc | (parity(r & v) << i))
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.k, "dimension mismatch");
        BitVec::from_parts(self.k, self.apply_word(v.bits()))
    }

    pub fn column_word(&self, j: usize) -> u32 {
        self.apply_word(1 << j)
    }

    pub fn column_words(&self) -> Vec<u32> {
        (0..self.k).map(|j| self.column_word(j)).collect()
    }

    /// `self * rhs`, i.e. apply `rhs` first.
    pub fn mul(&self, rhs: &SquareGF2) -> SquareGF2 {
        assert_eq!(self.k, rhs.k, "dimension mismatch");
        let cols: Vec<u32> = rhs.column_words().into_iter().map(|c| self.apply_word(c)).collect();
        SquareGF2::from_columns(&cols).expect("square product")
    }

    pub fn pow(&self, mut e: u64) -> SquareGF2 {
        let mut base = self.clone();
        let mut acc = SquareGF2::identity(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    pub fn is_invertible(&self) -> bool {
        XorBasis::from_words(&self.rows).rank() == self.k
    }

    /// Every column has odd weight, so odd vectors map to odd vectors.
    pub fn is_orientation_preserving(&self) -> bool {
        self.column_words().iter().all(|c| c.count_ones() % 2 == 1)
    }

    pub fn inverse(&self) -> Option<SquareGF2> {
        // Gauss-Jordan on [A | I], rows packed as (A row) | (I row) << k.
        let k = self.k;
        if k > 16 {
            return self.inverse_wide();
        }
        let mut aug: Vec<u32> = self.rows.iter().enumerate().map(|(i, &r)| r | (1 << (i + k))).collect();
        for col in 0..k {
            let pivot = (col..k).find(|&i| (aug[i] >> col) & 1 == 1)?;
            aug.swap(col, pivot);
            for i in 0..k {
                if i != col && (aug[i] >> col) & 1 == 1 {
                    aug[i] ^= aug[col];
                }
            }
        }
        Some(SquareGF2 { k, rows: aug.iter().map(|&r| r >> k).collect() })
    }

    fn inverse_wide(&self) -> Option<SquareGF2> {
        let k = self.k;
        let mut a = self.rows.clone();
        let mut inv: Vec<u32> = (0..k).map(|i| 1u32 << i).collect();
        for col in 0..k {
            let pivot = (col..k).find(|&i| (a[i] >> col) & 1 == 1)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for i in 0..k {
                if i != col && (a[i] >> col) & 1 == 1 {
                    a[i] ^= a[col];
                    inv[i] ^= inv[col];
                }
            }
        }
        Some(SquareGF2 { k, rows: inv })
    }
}

impl fmt::Display for SquareGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_matrix().fmt(f)
    }
}

/// Least `d >= 1` with `A^d = I`.
pub fn matrix_order(a: &SquareGF2) -> Result<u64, Gf2Error> {
    if !a.is_invertible() {
        return Err(Gf2Error::Singular);
    }
    let mut p = a.clone();
    let mut d = 1u64;
    while !p.is_identity() {
        p = p.mul(a);
        d += 1;
    }
    Ok(d)
}

/// All invertible `k x k` matrices (optionally only those with odd-weight
/// columns), in lexicographic order of their column lists.
pub fn enumerate_gl(k: usize, orientable_only: bool) -> Result<Vec<SquareGF2>, Gf2Error> {
    if k == 0 {
        return Err(Gf2Error::BadLength(0));
    }
    if k > MAX_GL_RANK {
        return Err(Gf2Error::RankTooLarge(k));
    }
    let mut out = Vec::new();
    let mut cols = Vec::with_capacity(k);
    gl_rec(k, orientable_only, &mut cols, &mut out);
    Ok(out)
}

fn gl_rec(k: usize, odd: bool, cols: &mut Vec<u32>, out: &mut Vec<SquareGF2>) {
    if cols.len() == k {
        out.push(SquareGF2::from_columns(cols).expect("square"));
        return;
    }
    let basis = XorBasis::from_words(cols);
    for c in 1u32..(1 << k) {
        if odd && c.count_ones() % 2 == 0 {
            continue;
        }
        if basis.contains(c) {
            continue;
        }
        cols.push(c);
        gl_rec(k, odd, cols, out);
        cols.pop();
    }
}

/// All `A` in `GL_k^or` with `A^order = I` and `A(src) = dst` for every
/// constraint pair.
pub fn matrices_with_constraints(
    k: usize,
    order: u64,
    constraints: &[(BitVec, BitVec)],
) -> Result<Vec<SquareGF2>, Gf2Error> {
    if order == 0 {
        return Err(Gf2Error::ZeroOrder);
    }
    if k > 16 {
        return Err(Gf2Error::RankTooLarge(k));
    }
    for (s, d) in constraints {
        for v in [s, d] {
            if v.len() != k {
                return Err(Gf2Error::LengthMismatch { expected: k, found: v.len() });
            }
        }
    }
    // A linear map exists iff every relation among the sources also holds
    // among the targets. Packing (src | dst << k) with pivots in the low
    // half, a residue living only in the high half is a violated relation.
    let mut basis = XorBasis::new();
    for (s, d) in constraints {
        let w = s.bits() | (d.bits() << k);
        let r = basis.reduce(w);
        if r != 0 && r & low_mask(k) == 0 {
            return Err(Gf2Error::InconsistentConstraints);
        }
        basis.insert(w);
    }
    let all = enumerate_gl(k, true)?;
    Ok(all
        .into_iter()
        .filter(|a| constraints.iter().all(|(s, d)| a.apply_word(s.bits()) == d.bits()))
        .filter(|a| a.pow(order).is_identity())
        .collect())
}
