//! Admissible symmetries of a colouring and the obstructions they obey on
//! rational homology spheres.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::colouring::{is_orientable, is_proper, Colouring};
use crate::gf2::{matrix_order, SquareGF2, XorBasis};
use crate::homology::is_qhs;
use crate::polytope::Polytope;
use crate::symmetry::{
    automorphisms, classify, fix_facets, Automorphism, SymmetryClassification, SymmetryError, SymmetryKind,
};

#[derive(Debug, Error)]
pub enum AdmissibleError {
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("audit needs a proper, orientable QHS colouring: {0}")]
    Precondition(&'static str),
}

/// The linear map `A` with `A λ(F) = λ(φF)` for every facet, if one exists.
pub fn induced_linear_map(lambda: &Colouring, phi: &Automorphism) -> Option<SquareGF2> {
    let k = lambda.k();
    let m = lambda.m();
    let mut perm: HashMap<u32, u32> = HashMap::new();
    for f in 0..m {
        let (src, dst) = (lambda.colour_word(f), lambda.colour_word(phi.apply(f)));
        if *perm.entry(src).or_insert(dst) != dst {
            return None;
        }
    }
    let mut basis = XorBasis::new();
    let mut src = Vec::with_capacity(k);
    let mut dst = Vec::with_capacity(k);
    for f in 0..m {
        if basis.insert(lambda.colour_word(f)) {
            src.push(lambda.colour_word(f));
            dst.push(lambda.colour_word(phi.apply(f)));
        }
    }
    let b = SquareGF2::from_columns(&src).ok()?;
    let c = SquareGF2::from_columns(&dst).ok()?;
    let a = c.mul(&b.inverse()?);
    let consistent = perm.iter().all(|(&s, &d)| a.apply_word(s) == d);
    (consistent && a.is_invertible()).then_some(a)
}

/// The colours on facets meeting the fixed points of `φ` do not span.
pub fn is_good(p: &Polytope, lambda: &Colouring, phi: &Automorphism) -> bool {
    let words: Vec<u32> = fix_facets(p, phi).iter().map(|&f| lambda.colour_word(f)).collect();
    XorBasis::from_words(&words).rank() < lambda.k()
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleElement {
    #[serde(serialize_with = "ser_display")]
    pub automorphism: Automorphism,
    #[serde(serialize_with = "ser_matrix")]
    pub psi: SquareGF2,
    pub classification: SymmetryClassification,
    pub good: bool,
}

fn ser_display<S: serde::Serializer>(a: &Automorphism, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

fn ser_matrix<S: serde::Serializer>(a: &SquareGF2, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct SymGroupReport {
    pub elements: Vec<AdmissibleElement>,
    pub group_order: usize,
    pub identified_name: String,
    pub abelian: bool,
    /// Number of elements of each order.
    pub element_orders: BTreeMap<u64, usize>,
    /// `|Sym_λ(P)| · 2^k`.
    pub coloured_isometry_order: u64,
}

impl SymGroupReport {
    pub fn kinds(&self) -> BTreeMap<SymmetryKind, usize> {
        let mut out = BTreeMap::new();
        for e in &self.elements {
            *out.entry(e.classification.kind).or_default() += 1;
        }
        out
    }
}

/// All admissible symmetries of `lambda`, each with its matrix and type.
pub fn admissible_group(p: &Polytope, lambda: &Colouring) -> Result<SymGroupReport, AdmissibleError> {
    let mut elements = Vec::new();
    for phi in automorphisms(p) {
        if let Some(psi) = induced_linear_map(lambda, phi) {
            elements.push(AdmissibleElement {
                classification: classify(p, phi)?,
                good: is_good(p, lambda, phi),
                automorphism: phi.clone(),
                psi,
            });
        }
    }
    let set: HashSet<&[usize]> = elements.iter().map(|e| e.automorphism.perm()).collect();
    let abelian = elements.iter().all(|a| {
        elements.iter().all(|b| a.automorphism.compose(&b.automorphism) == b.automorphism.compose(&a.automorphism))
    });
    debug_assert!(elements
        .iter()
        .all(|a| elements.iter().all(|b| set.contains(a.automorphism.compose(&b.automorphism).perm()))));
    let orders: Vec<u64> = elements.iter().map(|e| e.classification.order).collect();
    let mut element_orders = BTreeMap::new();
    for &o in &orders {
        *element_orders.entry(o).or_default() += 1;
    }
    Ok(SymGroupReport {
        group_order: elements.len(),
        identified_name: identify_group(&orders, abelian),
        abelian,
        element_orders,
        coloured_isometry_order: (elements.len() as u64) << lambda.k(),
        elements,
    })
}

fn order_profile(orders: &[u64]) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for &o in orders {
        *out.entry(o).or_default() += 1;
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn euler_phi(n: u64) -> usize {
    (1..=n).filter(|&i| gcd(i, n) == 1).count()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Element orders of the dihedral group of order `2r`.
fn dihedral_profile(r: u64) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for d in divisors(r) {
        *out.entry(d).or_default() += euler_phi(d);
    }
    *out.entry(2).or_default() += r as usize;
    out
}

/// Invariant factors of an abelian group recovered from its element orders,
/// largest first. `None` if the counts are inconsistent.
fn abelian_factors(orders: &[u64]) -> Option<Vec<u64>> {
    let n = orders.len() as u64;
    let mut elementary: Vec<Vec<u64>> = Vec::new();
    for p in prime_factors(n) {
        // s_i = log_p #{x : x^(p^i) = 1} = Σ_j min(a_j, i)
        let mut s = vec![0u32];
        let mut pi = 1u64;
        loop {
            pi *= p;
            let count = orders.iter().filter(|&&o| pi % o == 0).count() as u64;
            let log = count.ilog(p);
            if p.pow(log) != count {
                return None;
            }
            s.push(log);
            if s[s.len() - 1] == s[s.len() - 2] {
                break;
            }
        }
        // factors with exponent >= i: s_i - s_{i-1}
        let ge: Vec<u32> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let mut exps = Vec::new();
        for i in 0..ge.len() {
            let next = ge.get(i + 1).copied().unwrap_or(0);
            for _ in 0..ge[i].checked_sub(next)? {
                exps.push(i as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        elementary.push(exps.iter().map(|&e| p.pow(e)).collect());
    }
    let len = elementary.iter().map(Vec::len).max().unwrap_or(0);
    let factors: Vec<u64> =
        (0..len).map(|i| elementary.iter().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
    (factors.iter().product::<u64>() == n).then_some(factors)
}

/// Names a finite group from its element orders and commutativity.
/// Groups outside the recognized list come back as `"unrecognized"`.
pub fn identify_group(orders: &[u64], abelian: bool) -> String {
    let n = orders.len() as u64;
    if n == 1 {
        return "trivial".into();
    }
    let profile = order_profile(orders);
    if abelian {
        return match abelian_factors(orders) {
            Some(f) => f.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join("x"),
            None => "unrecognized".into(),
        };
    }
    let p = |pairs: &[(u64, usize)]| pairs.iter().copied().collect::<BTreeMap<u64, usize>>();
    if n == 6 && profile == dihedral_profile(3) {
        return "S3".into();
    }
    if n == 8 && profile == p(&[(1, 1), (2, 1), (4, 6)]) {
        return "Q8".into();
    }
    if n == 12 && profile == p(&[(1, 1), (2, 3), (3, 8)]) {
        return "A4".into();
    }
    if n == 12 && profile == p(&[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]) {
        return "Dic12".into();
    }
    if n == 21 && profile == p(&[(1, 1), (3, 14), (7, 6)]) {
        return "Z7:Z3".into();
    }
    if n == 24 && profile == p(&[(1, 1), (2, 9), (3, 8), (4, 6)]) {
        return "S4".into();
    }
    if n == 24 && profile == p(&[(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]) {
        return "SL(2,3)".into();
    }
    if n % 2 == 0 && n <= 24 && profile == dihedral_profile(n / 2) {
        return format!("D{n}");
    }
    "unrecognized".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub element: String,
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub group_order: usize,
    pub identified_name: String,
    pub defects: Vec<Defect>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks the admissible group of a QHS colouring against every restriction
/// on kinds, goodness and orders that such groups must satisfy. A defect
/// means the computation disagrees with the theory.
pub fn obstruction_audit(p: &Polytope, lambda: &Colouring) -> Result<AuditReport, AdmissibleError> {
    if !is_proper(p, lambda) {
        return Err(AdmissibleError::Precondition("colouring is not proper"));
    }
    if !is_orientable(lambda) {
        return Err(AdmissibleError::Precondition("colouring is not orientable"));
    }
    if !is_qhs(p, lambda) {
        return Err(AdmissibleError::Precondition("colouring is not a QHS"));
    }
    let report = admissible_group(p, lambda)?;
    let k = lambda.k();
    let mut defects = Vec::new();
    let mut flag = |e: &AdmissibleElement, rule: &'static str, detail: String| {
        defects.push(Defect { element: e.automorphism.to_string(), rule, detail });
    };
    let mut images = HashMap::new();
    for e in &report.elements {
        if let Some(prev) = images.insert(e.psi.clone(), e.automorphism.to_string()) {
            flag(e, "psi_injective", format!("same matrix as {prev}"));
        }
        let c = &e.classification;
        let psi_order = matrix_order(&e.psi).unwrap_or(0);
        if psi_order != c.order {
            flag(e, "psi_order", format!("matrix order {psi_order}, symmetry order {}", c.order));
        }
        if c.kind == SymmetryKind::Identity {
            continue;
        }
        let kind = c.kind;
        match kind {
            SymmetryKind::Reflection => flag(e, "no_reflection", String::new()),
            SymmetryKind::Antipodal => flag(e, "no_antipodal", String::new()),
            _ => {}
        }
        if e.good && c.order == 2 {
            flag(e, "no_good_involution", kind.to_string());
        }
        if e.good && !(kind == SymmetryKind::EdgeRotoreflection || (kind.is_rotation() && c.order % 2 == 1)) {
            flag(e, "good_kind", format!("good {kind} of order {}", c.order));
        }
        if (kind == SymmetryKind::FaceRotation && c.order % 2 == 0)
            || (kind.is_rotoreflection() && kind != SymmetryKind::EdgeRotoreflection)
        {
            flag(e, "forbidden_kind", format!("{kind} of order {}", c.order));
        }
        let allowed = match kind {
            SymmetryKind::EdgeRotation => !e.good && k <= 4,
            SymmetryKind::FaceEdgeRotation => !e.good && k == 3,
            SymmetryKind::EdgeRotoreflection => e.good && k <= 4,
            SymmetryKind::FaceRotation => e.good && c.order % 2 == 1,
            SymmetryKind::VertexRotation | SymmetryKind::FaceVertexRotation => true,
            _ => false,
        };
        if !allowed {
            let goodness = if e.good { "good" } else { "bad" };
            flag(e, "rank_kind", format!("{goodness} {kind} at rank {k}"));
        }
    }
    if k >= 5 && report.group_order % 2 == 0 {
        defects.push(Defect {
            element: "group".into(),
            rule: "odd_order",
            detail: format!("order {} at rank {k}", report.group_order),
        });
    }
    Ok(AuditReport { group_order: report.group_order, identified_name: report.identified_name.clone(), defects })
}
