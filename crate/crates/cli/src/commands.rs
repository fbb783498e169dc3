use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qhs_core::admissible::{admissible_group, obstruction_audit, SymGroupReport};
use qhs_core::colouring::{is_orientable, is_proper, parse_colouring_file, subcomplex, Colouring};
use qhs_core::gf2::{BitMatrix, BitVec};
use qhs_core::homology::{betti_complex, betti_manifold, is_qhs, row_space_masks};
use qhs_core::polytope::{Polytope, PolytopeSpec};
use qhs_core::search::{
    classify_by_symmetry, construct_with_symmetry, enumerate_colourings, ClassEntry, ClassList, EnumerationTask,
};
use qhs_core::symmetry::{automorphisms, axis_rotation, classify, parse_permutation, Automorphism, Cell, Orientation};
use serde_json::{json, Value};

use crate::{ColouringInput, Command, Format};

const SCHEMA: u32 = 1;

thread_local! {
    static OUT: RefCell<String> = const { RefCell::new(String::new()) };
}

macro_rules! out {
    ($($t:tt)*) => { OUT.with(|o| { let _ = write!(o.borrow_mut(), $($t)*); }) };
}

macro_rules! outln {
    ($($t:tt)*) => { OUT.with(|o| { let _ = writeln!(o.borrow_mut(), $($t)*); }) };
}

/// Everything written so far, emptied.
pub fn take_output() -> String {
    OUT.with(|o| std::mem::take(&mut *o.borrow_mut()))
}

pub fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check { input, qhs, json } => check(&input, qhs, json),
        Command::Betti { input, json } => betti(&input, json),
        Command::Symmetries { polytope, colouring, json } => {
            symmetries(polytope.as_deref(), colouring.as_deref(), json)
        }
        Command::Enumerate { polytope, rank, qhs, classify_sym, min_order, no_prune, base_vertex, out } => {
            let (spec, p) = load_polytope(&polytope)?;
            if base_vertex == 0 || base_vertex > p.vertex_count() {
                bail!("base vertex {base_vertex} outside 1..={}", p.vertex_count());
            }
            let task = EnumerationTask { k: rank, qhs, prune: !no_prune, base_vertex: base_vertex - 1 };
            let mut classes = enumerate_colourings(&p, &task)?;
            classes.classes.retain(|c| c.symmetry.group_order >= min_order);
            let extra = json!({ "polytope": spec.to_string(), "rank": rank, "qhs": qhs });
            emit_classes(&classes, extra, classify_sym, out, Vec::new())?;
            Ok(!classes.is_empty())
        }
        Command::Construct { polytope, symmetry, rank, seed, qhs, out } => {
            let (spec, p) = load_polytope(&polytope)?;
            let phi = parse_symmetry(&p, &symmetry)?;
            let seed = match seed {
                Some(path) => {
                    parse_seed(&read(&path)?, p.m(), rank).with_context(|| format!("seed file {}", path.display()))?
                }
                None => Vec::new(),
            };
            let built = construct_with_symmetry(&p, &phi, rank, &seed, qhs)?;
            let extra = json!({
                "polytope": spec.to_string(),
                "rank": rank,
                "qhs": qhs,
                "symmetry": phi.to_string(),
                "matrices": built.matrices.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "raw_candidates": built.raw_candidates,
                "proper": built.proper,
            });
            let header = vec![
                format!("symmetry: {phi}"),
                format!("matrices: {}", built.matrices.len()),
                format!("raw candidates: {}", built.raw_candidates),
                format!("proper: {}", built.proper),
            ];
            emit_classes(&built.classes, extra, true, out, header)?;
            Ok(!built.classes.is_empty())
        }
        Command::Audit { input, audit_soft, json } => audit(&input, audit_soft, json),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_polytope(spec: &str) -> Result<(PolytopeSpec, Polytope)> {
    let spec: PolytopeSpec = spec.parse()?;
    let p = spec.load()?;
    Ok((spec, p))
}

/// A colouring file with or without its `polytope:` header. An explicit
/// `--polytope` must agree with the header.
fn load_colouring(input: &ColouringInput) -> Result<(PolytopeSpec, Polytope, Colouring)> {
    let text = read(&input.colouring)?;
    let has_header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("polytope:"));
    let ctx = || format!("colouring file {}", input.colouring.display());
    let (spec, lambda) = if has_header {
        let (spec, lambda) = parse_colouring_file(&text).with_context(ctx)?;
        if let Some(flag) = &input.polytope {
            let flag: PolytopeSpec = flag.parse()?;
            if flag != spec {
                bail!("--polytope {flag} disagrees with the file header polytope {spec}");
            }
        }
        (spec, lambda)
    } else {
        let Some(flag) = &input.polytope else {
            bail!("{}: no `polytope:` header, pass --polytope", ctx());
        };
        let body: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        let m = BitMatrix::parse(&body.join("\n")).with_context(ctx)?;
        (flag.parse()?, Colouring::from_matrix(&m).with_context(ctx)?)
    };
    let p = spec.load()?;
    let lambda = lambda.for_polytope(&p).with_context(ctx)?;
    Ok((spec, p, lambda))
}

fn parse_symmetry(p: &Polytope, s: &str) -> Result<Automorphism> {
    let s = s.trim();
    if ["face:", "edge:", "vertex:"].iter().any(|pre| s.starts_with(pre)) {
        let cell = Cell::parse(p, s)?;
        return Ok(axis_rotation(p, cell)?);
    }
    let perm = parse_permutation(s, p.m())?;
    Ok(Automorphism::from_permutation(p, perm)?)
}

fn parse_seed(text: &str, m: usize, k: usize) -> Result<Vec<(usize, u32)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(f), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("line {}: expected `facet colour`", no + 1);
        };
        let f: usize = f.parse().with_context(|| format!("line {}: bad facet {f:?}", no + 1))?;
        if f == 0 || f > m {
            bail!("line {}: facet {f} outside 1..={m}", no + 1);
        }
        let c: BitVec = c.parse().with_context(|| format!("line {}: bad colour", no + 1))?;
        if c.len() != k {
            bail!("line {}: colour has {} bits, rank is {k}", no + 1, c.len());
        }
        out.push((f - 1, c.bits()));
    }
    Ok(out)
}

fn betti_string(b: &[u64]) -> String {
    b.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn with_schema(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn mask_string(w: u32, m: usize) -> String {
    (0..m).map(|j| if (w >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

fn check(input: &ColouringInput, want_qhs: bool, json: bool) -> Result<bool> {
    let (spec, p, lambda) = load_colouring(input)?;
    let proper = is_proper(&p, &lambda);
    let orientable = is_orientable(&lambda);
    let betti = if proper { Some(betti_manifold(&p, &lambda)?) } else { None };
    let qhs = proper && is_qhs(&p, &lambda);
    let verdict = if !proper {
        "not proper"
    } else if qhs {
        "QHS"
    } else {
        "not QHS"
    };
    if json {
        out!(
            "{}",
            with_schema(json!({
                "polytope": spec.to_string(),
                "rank": lambda.k(),
                "proper": proper,
                "orientable": orientable,
                "betti": betti,
                "qhs": qhs,
                "verdict": verdict,
            }))
        );
    } else {
        outln!("polytope: {spec}");
        outln!("rank: {}", lambda.k());
        outln!("proper: {proper}");
        outln!("orientable: {orientable}");
        outln!("betti: {}", betti.map_or("-".into(), |b| betti_string(&b)));
        outln!("qhs: {qhs}");
        outln!("verdict: {verdict}");
    }
    Ok(proper && (qhs || !want_qhs))
}

fn betti(input: &ColouringInput, json: bool) -> Result<bool> {
    let (spec, p, lambda) = load_colouring(input)?;
    if !is_proper(&p, &lambda) {
        if json {
            out!("{}", with_schema(json!({ "polytope": spec.to_string(), "proper": false })));
        } else {
            outln!("verdict: not proper");
        }
        return Ok(false);
    }
    let b = betti_manifold(&p, &lambda)?;
    let mut omegas = row_space_masks(&lambda);
    omegas.retain(|&w| w != 0);
    omegas.sort_by_key(|&w| (w.count_ones(), mask_string(w, p.m())));
    let mut rows = Vec::new();
    for w in omegas {
        let t = betti_complex(&subcomplex(&p, w).complex)?;
        rows.push((mask_string(w, p.m()), t));
    }
    if json {
        let subs: Vec<Value> = rows
            .iter()
            .map(|(w, t)| json!({ "omega": w, "reduced_betti": [t.b0, t.b1, t.b2], "acyclic": t.is_acyclic() }))
            .collect();
        out!(
            "{}",
            with_schema(json!({ "polytope": spec.to_string(), "proper": true, "betti": b, "subcomplexes": subs }))
        );
    } else {
        outln!("betti: {}", betti_string(&b));
        for (w, t) in rows {
            outln!("{w}  {} {} {}", t.b0, t.b1, t.b2);
        }
    }
    Ok(true)
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Preserving => "preserving",
        Orientation::Reversing => "reversing",
    }
}

fn poles_string(poles: &[Cell]) -> String {
    if poles.is_empty() {
        "-".into()
    } else {
        poles.iter().map(Cell::to_string).collect::<Vec<_>>().join(", ")
    }
}

fn report_text(r: &SymGroupReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group: {} (order {})", r.identified_name, r.group_order);
    let _ = writeln!(s, "abelian: {}", r.abelian);
    let _ = writeln!(s, "coloured isometry group order: {}", r.coloured_isometry_order);
    for e in &r.elements {
        let psi = e.psi.to_string().trim_end().replace('\n', "/");
        let c = &e.classification;
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            e.automorphism,
            orientation_name(c.orientation),
            c.kind,
            c.order,
            poles_string(&c.poles),
            if e.good { "good" } else { "bad" },
            psi
        );
    }
    s
}

fn symmetries(polytope: Option<&str>, colouring: Option<&Path>, json: bool) -> Result<bool> {
    if let Some(path) = colouring {
        let input = ColouringInput { polytope: polytope.map(str::to_string), colouring: path.to_path_buf() };
        let (spec, p, lambda) = load_colouring(&input)?;
        let report = admissible_group(&p, &lambda)?;
        if json {
            let mut v = serde_json::to_value(&report)?;
            v["polytope"] = json!(spec.to_string());
            out!("{}", with_schema(v));
        } else {
            out!("{}", report_text(&report));
        }
        return Ok(true);
    }
    let Some(polytope) = polytope else {
        bail!("pass --polytope, --colouring or both");
    };
    let (spec, p) = load_polytope(polytope)?;
    let group = automorphisms(&p);
    let mut rows = Vec::new();
    for a in group {
        rows.push((a, classify(&p, a)?));
    }
    if json {
        let elems: Vec<Value> = rows
            .iter()
            .map(|(a, c)| {
                json!({
                    "automorphism": a.to_string(),
                    "orientation": orientation_name(c.orientation),
                    "kind": c.kind,
                    "order": c.order,
                    "poles": c.poles,
                })
            })
            .collect();
        let rotations = group.iter().filter(|a| a.orientation() == Orientation::Preserving).count();
        out!(
            "{}",
            with_schema(json!({
                "polytope": spec.to_string(),
                "order": group.len(),
                "rotation_subgroup_order": rotations,
                "elements": elems,
            }))
        );
    } else {
        for (a, c) in rows {
            outln!("{a}\t{}\t{}\t{}\t{}", orientation_name(c.orientation), c.kind, c.order, poles_string(&c.poles));
        }
    }
    Ok(true)
}

fn audit(input: &ColouringInput, soft: bool, json: bool) -> Result<bool> {
    let (spec, p, lambda) = load_colouring(input)?;
    let report = obstruction_audit(&p, &lambda)?;
    if json {
        let mut v = serde_json::to_value(&report)?;
        v["polytope"] = json!(spec.to_string());
        v["passed"] = json!(report.passed());
        out!("{}", with_schema(v));
    } else {
        outln!("group: {} (order {})", report.identified_name, report.group_order);
        for d in &report.defects {
            let level = if soft { "warning" } else { "defect" };
            outln!("{level}: {} [{}] {}", d.element, d.rule, d.detail);
        }
        outln!("defects: {}", report.defects.len());
    }
    Ok(soft || report.passed())
}

fn csv_row(c: &ClassEntry) -> [String; 4] {
    [
        c.canonical.compact(),
        c.symmetry.identified_name.clone(),
        c.symmetry.group_order.to_string(),
        betti_string(&c.betti),
    ]
}

fn emit_classes(classes: &ClassList, extra: Value, histogram: bool, out: Format, header: Vec<String>) -> Result<()> {
    let hist = classify_by_symmetry(classes);
    match out {
        Format::Json => {
            let mut v = extra;
            v["count"] = json!(classes.len());
            v["classes"] = serde_json::to_value(classes)?["classes"].take();
            if histogram {
                v["histogram"] = serde_json::to_value(&hist)?;
            }
            out!("{}", with_schema(v));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["canonical", "group", "order", "betti"])?;
            for c in &classes.classes {
                w.write_record(csv_row(c))?;
            }
            let text = String::from_utf8(w.into_inner()?)?;
            out!("{text}");
            if histogram {
                for (name, n) in &hist {
                    eprintln!("{name}: {n}");
                }
            }
        }
        Format::Text => {
            for line in header {
                outln!("{line}");
            }
            outln!("classes: {}", classes.len());
            for c in &classes.classes {
                outln!("{}", csv_row(c).join("\t"));
            }
            if histogram {
                for (name, n) in &hist {
                    outln!("{name}: {n}");
                }
            }
        }
    }
    Ok(())
}
