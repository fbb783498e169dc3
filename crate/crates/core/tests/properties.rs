mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use qhs_core::colouring::{
    canonical_form, canonical_form_exhaustive, extension_count, extensions, is_proper, Colouring, LinearGroup,
};
use qhs_core::gf2::{enumerate_gl, rank, BitMatrix};
use qhs_core::homology::{betti_manifold, is_qhs};
use qhs_core::polytope::{cube, dodecahedron, Polytope};
use qhs_core::search::{
    classify_by_symmetry, construct_with_symmetry, enumerate_canonical, enumerate_colourings, EnumerationTask,
};
use qhs_core::symmetry::{automorphisms, axis_rotation, Cell};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn odd_colouring(k: usize, words: &[u32]) -> Option<Colouring> {
    let odd: Vec<u32> = (1u32..1 << k).filter(|c| c.count_ones() % 2 == 1).collect();
    let cols: Vec<u32> = words.iter().map(|&w| odd[w as usize % odd.len()]).collect();
    let full = rank(&BitMatrix::from_columns(k, &cols).ok()?) == k;
    full.then(|| Colouring::new(k, cols).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_a_class_invariant(
        words in prop::collection::vec(any::<u32>(), 12),
        s in 0usize..120,
        a in 0usize..1344,
    ) {
        let p = dodecahedron();
        let Some(l) = odd_colouring(4, &words) else { return Ok(()) };
        let gl = enumerate_gl(4, true).unwrap();
        let moved = l.permute(automorphisms(&p)[s].perm()).transform(&gl[a]);
        for g in [LinearGroup::GlOr, LinearGroup::FullGl] {
            prop_assert_eq!(canonical_form(&p, &l, g), canonical_form(&p, &moved, g));
        }
        prop_assert_eq!(is_proper(&p, &l), is_proper(&p, &moved));
        prop_assert_eq!(is_qhs(&p, &l), is_qhs(&p, &moved));
    }

    #[test]
    fn manifold_betti_numbers_obey_duality(seed in any::<u64>(), k in 3usize..=5) {
        let p = dodecahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = common::random_odd_colouring(&p, k, &mut rng) else { return Ok(()) };
        prop_assert!(is_proper(&p, &l));
        let b = betti_manifold(&p, &l).unwrap();
        prop_assert_eq!(b[0], 1);
        prop_assert_eq!(b[3], 1);
        prop_assert_eq!(b[1], b[2]);
        prop_assert_eq!(is_qhs(&p, &l), b == [1, 0, 0, 1]);
    }

    #[test]
    fn extensions_project_back(words in prop::collection::vec(any::<u32>(), 6)) {
        let Some(l) = odd_colouring(3, &words) else { return Ok(()) };
        let ext: Vec<Colouring> = extensions(&l).collect();
        prop_assert_eq!(ext.len() as u64, extension_count(&l));
        let distinct: BTreeSet<Vec<u32>> = ext.iter().map(|e| e.colour_words().to_vec()).collect();
        prop_assert_eq!(distinct.len(), ext.len());
        for e in &ext {
            prop_assert_eq!(e.k(), 4);
            let low: Vec<u32> = e.colour_words().iter().map(|c| c & 7).collect();
            prop_assert_eq!(low.as_slice(), l.colour_words());
        }
    }
}

#[test]
fn fast_canonical_form_matches_exhaustive() {
    let p = dodecahedron();
    let classes = enumerate_colourings(&p, &EnumerationTask::new(4, true)).unwrap();
    for c in classes.classes.iter().step_by(9) {
        for g in [LinearGroup::GlOr, LinearGroup::FullGl] {
            assert_eq!(
                canonical_form(&p, &c.representative, g),
                canonical_form_exhaustive(&p, &c.representative, g).unwrap()
            );
        }
    }
}

#[test]
fn full_and_orientable_gl_give_the_same_partition() {
    let p = dodecahedron();
    let classes = enumerate_colourings(&p, &EnumerationTask::new(4, true)).unwrap();
    let full: BTreeSet<_> =
        classes.classes.iter().map(|c| canonical_form(&p, &c.representative, LinearGroup::FullGl)).collect();
    assert_eq!(full.len(), classes.len());
}

#[test]
fn pruning_does_not_change_the_census() {
    let p = dodecahedron();
    let mut task = EnumerationTask::new(4, true);
    let pruned = enumerate_canonical(&p, &task).unwrap();
    task.prune = false;
    assert_eq!(enumerate_canonical(&p, &task).unwrap(), pruned);
}

fn census_summary(p: &Polytope, k: usize, qhs: bool) -> (usize, Vec<(String, usize)>) {
    let classes = enumerate_colourings(p, &EnumerationTask::new(k, qhs)).unwrap();
    (classes.len(), classify_by_symmetry(&classes).into_iter().collect())
}

#[test]
fn census_is_invariant_under_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, k, qhs) in [(cube(), 4, false), (cube(), 4, true), (dodecahedron(), 4, true)] {
        let want = census_summary(&p, k, qhs);
        for _ in 0..2 {
            let mut perm: Vec<usize> = (0..p.m()).collect();
            perm.shuffle(&mut rng);
            let q = p.relabel(&perm).unwrap();
            assert_eq!(census_summary(&q, k, qhs), want);
        }
    }
}

#[test]
fn census_does_not_depend_on_the_base_vertex() {
    let p = dodecahedron();
    let mut task = EnumerationTask::new(4, true);
    let want = enumerate_canonical(&p, &task).unwrap();
    task.base_vertex = 11;
    assert_eq!(enumerate_canonical(&p, &task).unwrap(), want);
}

#[test]
fn construction_finds_symmetric_census_classes() {
    let p = dodecahedron();
    let census = enumerate_colourings(&p, &EnumerationTask::new(4, true)).unwrap();
    let forms: BTreeSet<_> = census.classes.iter().map(|c| c.canonical.clone()).collect();
    let v = p.vertices()[0];
    let phi = axis_rotation(&p, Cell::Vertex(v[0], v[1], v[2])).unwrap();
    assert_eq!(phi.order(), 3);
    let seed = [(v[0], 1), (v[1], 2), (v[2], 4)];
    let built = construct_with_symmetry(&p, &phi, 4, &seed, true).unwrap();
    assert!(!built.classes.is_empty());
    for c in &built.classes.classes {
        assert!(forms.contains(&c.canonical), "{} is not in the census", c.canonical);
        assert!(c.symmetry.group_order % 3 == 0);
    }
    let names: BTreeSet<&str> = built.classes.classes.iter().map(|c| c.symmetry.identified_name.as_str()).collect();
    assert!(names.contains("S3"), "{names:?}");
}

#[test]
fn z7_reference_is_a_proper_qhs() {
    let p = qhs_core::polytope::lobell(7).unwrap();
    let l = common::z7_colouring();
    assert!(is_proper(&p, &l));
    assert_eq!(betti_manifold(&p, &l).unwrap(), [1, 0, 0, 1]);
}
