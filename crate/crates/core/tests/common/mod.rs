//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use qhs_core::colouring::Colouring;
use qhs_core::gf2::BitMatrix;
use qhs_core::polytope::{lobell, Polytope};
use rand::seq::SliceRandom;
use rand::Rng;

/// Rank-4 colouring of `R(7)` with a heptagonal rotation symmetry.
pub const Z7_MATRIX: &str = "\
1000101110110001
0100111011101000
0010011101110100
0001110111010010
";

pub fn z7_colouring() -> Colouring {
    Colouring::from_matrix(&BitMatrix::parse(Z7_MATRIX).unwrap()).unwrap()
}

/// Small-cover colour labels `1, 2, 3, 4` as vectors `e1, e2, e3, e1+e2+e3`.
pub fn label(c: u32) -> u32 {
    [0, 1, 2, 4, 7][c as usize]
}

/// The ring pattern on `R(N)`: top and bottom get labels 1 and 2, the upper
/// ring repeats `2 3 4` and ends in `2 4`, the lower ring repeats `4 1 3`
/// and ends in `1 3`.
pub fn lobell_pattern(n: usize) -> (Polytope, Vec<u32>) {
    let ring = |block: [u32; 3], tail: [u32; 2], i: usize| if i < n - 2 { block[i % 3] } else { tail[i - (n - 2)] };
    let mut labels = vec![1];
    labels.extend((0..n).map(|i| ring([2, 3, 4], [2, 4], i)));
    labels.extend((0..n).map(|i| ring([4, 1, 3], [1, 3], i)));
    labels.push(2);
    (lobell(n).unwrap(), labels.into_iter().map(label).collect())
}

/// A random proper colouring by `e1, e2, e3, e1+e2+e3`; `None` if the
/// attempt dead-ends.
pub fn random_small_cover<R: Rng>(p: &Polytope, rng: &mut R) -> Option<Colouring> {
    random_odd_colouring(p, 3, rng)
}

/// A random proper odd-column colouring of rank `k`, by randomized
/// backtracking. Distinct odd vectors at a vertex are always independent.
pub fn random_odd_colouring<R: Rng>(p: &Polytope, k: usize, rng: &mut R) -> Option<Colouring> {
    fn go<R: Rng>(p: &Polytope, k: usize, order: &[usize], i: usize, cols: &mut Vec<u32>, rng: &mut R) -> bool {
        if i == order.len() {
            return true;
        }
        let f = order[i];
        let mut opts: Vec<u32> = (1u32..1 << k).filter(|c| c.count_ones() % 2 == 1).collect();
        opts.shuffle(rng);
        for c in opts {
            if p.neighbours(f).iter().all(|&g| cols[g] != c) {
                cols[f] = c;
                if go(p, k, order, i + 1, cols, rng) {
                    return true;
                }
                cols[f] = 0;
            }
        }
        false
    }
    let mut order: Vec<usize> = (0..p.m()).collect();
    order.shuffle(rng);
    let mut cols = vec![0u32; p.m()];
    if !go(p, k, &order, 0, &mut cols, rng) {
        return None;
    }
    Colouring::new(k, cols).ok()
}

/// Reduced rational Betti numbers from dense boundary matrices over `Q`.
pub fn rational_betti(vertices: &[usize], edges: &[[usize; 2]], triangles: &[[usize; 3]]) -> (i64, i64, i64) {
    use num_rational::Rational64;
    fn rank(mut a: Vec<Vec<Rational64>>) -> usize {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| a[i][c] != Rational64::from_integer(0)) else { continue };
            a.swap(r, p);
            for i in 0..rows {
                if i != r && a[i][c] != Rational64::from_integer(0) {
                    let f = a[i][c] / a[r][c];
                    for j in 0..cols {
                        let v = a[r][j] * f;
                        a[i][j] -= v;
                    }
                }
            }
            r += 1;
        }
        r
    }
    let z = Rational64::from_integer(0);
    let vi = |v: usize| vertices.iter().position(|&x| x == v).unwrap();
    let ei = |e: [usize; 2]| edges.iter().position(|&x| x == e).unwrap();
    let mut d1 = vec![vec![z; edges.len()]; vertices.len()];
    for (j, e) in edges.iter().enumerate() {
        d1[vi(e[0])][j] -= 1;
        d1[vi(e[1])][j] += 1;
    }
    let mut d2 = vec![vec![z; triangles.len()]; edges.len()];
    for (j, t) in triangles.iter().enumerate() {
        d2[ei([t[1], t[2]])][j] += 1;
        d2[ei([t[0], t[2]])][j] -= 1;
        d2[ei([t[0], t[1]])][j] += 1;
    }
    let r1 = rank(d1) as i64;
    let r2 = rank(d2) as i64;
    let (v, e, t) = (vertices.len() as i64, edges.len() as i64, triangles.len() as i64);
    (v - r1 - 1, e - r1 - r2, t - r2)
}
