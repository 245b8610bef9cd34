//! JSON reports with exact scalars. Every report carries `"format": 1`.

use serde_json::{json, Value};

use crate::cylinder::Decomposition;
use crate::deformation::TorusClosure;
use crate::geom::{Mat2, Vec2};
use crate::homology::Cocycle;
use crate::io::{complex_text, vec_text, FORMAT_VERSION};
use crate::linalg::Complex;
use crate::orbit::{rank_lower_bound, FieldReport, MoreCylinders, ParabolicityReport, PeriodicityReport, ScanClass, TangentSpan};
use crate::scalar::Scalar;

fn s(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn v(x: &Vec2) -> Value {
    json!(vec_text(x))
}

fn scalars(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(s).collect())
}

fn complexes(xs: &[Complex]) -> Value {
    Value::Array(xs.iter().map(|z| json!(complex_text(z))).collect())
}

fn mat(g: &Mat2) -> Value {
    json!([[g.a.to_string(), g.b.to_string()], [g.c.to_string(), g.d.to_string()]])
}

pub fn cocycle_json(c: &Cocycle) -> Value {
    json!({ "frame": c.frame, "values": complexes(&c.values) })
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    let cylinders: Vec<Value> = d
        .cylinders
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "height": s(&c.height),
                "circumference": s(&c.circumference),
                "modulus": s(&c.modulus),
                "core_class": c.core_class,
                "cross_class": c.cross_class,
                "bottom": c.bottom,
                "top": c.top,
            })
        })
        .collect();
    let scs: Vec<Value> = d
        .saddle_connections
        .iter()
        .map(|sc| match sc {
            Some(sc) => json!({ "holonomy": v(&sc.holonomy), "start_vertex": sc.start_vertex, "end_vertex": sc.end_vertex }),
            None => Value::Null,
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "direction": v(&d.direction),
        "normalizer": mat(&d.g),
        "bound_sq": s(&d.bound_sq),
        "status": d.status.name(),
        "frame": d.frame_hash,
        "normalized_area": s(&d.normalized_area()),
        "cylinder_area": s(&d.cylinder_area()),
        "cylinders": cylinders,
        "saddle_connections": scs,
    })
}

pub fn certificate_json(span: &TangentSpan, max_len_sq: &Scalar, bound_sq: &Scalar, scan: &[Decomposition]) -> Value {
    let generators: Vec<Value> = span
        .generators
        .iter()
        .map(|g| {
            json!({
                "direction": g.direction.as_ref().map(v),
                "rule": g.rule.name(),
                "cylinders": g.num_cylinders,
                "new_dimension": g.new_dimension,
                "values": complexes(&g.cocycle.values),
            })
        })
        .collect();
    let skipped: Vec<Value> = span
        .skipped
        .iter()
        .map(|k| {
            json!({
                "direction": v(&k.direction),
                "status": k.status.name(),
                "cylinders": k.num_cylinders,
                "invariant_failed": k.invariant_failed,
            })
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "frame": span.frame_hash,
        "genus": span.genus,
        "max_len_sq": s(max_len_sq),
        "bound_sq": s(bound_sq),
        "generators": generators,
        "not_certified": skipped,
        "basis": span.basis().iter().map(|b| complexes(b)).collect::<Vec<_>>(),
        "dim_c": span.dim(),
        "p_dim": span.p_dim(),
        "k_lb": rank_lower_bound(span),
        "scan": scan_rows(scan),
    })
}

fn scan_rows(ds: &[Decomposition]) -> Vec<Value> {
    ds.iter()
        .map(|d| {
            json!({
                "direction": v(&d.direction),
                "status": d.status.name(),
                "class": ScanClass::of(d).name(),
                "cylinders": d.cylinders.len(),
                "moduli": scalars(&d.moduli()),
            })
        })
        .collect()
}

pub fn periodicity_json(r: &PeriodicityReport, max_len_sq: &Scalar, bound_sq: &Scalar) -> Value {
    json!({
        "format": FORMAT_VERSION,
        "mode": "periodicity",
        "max_len_sq": s(max_len_sq),
        "bound_sq": s(bound_sq),
        "counts": {
            "Periodic": r.count(ScanClass::Periodic),
            "HasCylinderNotCertifiedPeriodic": r.count(ScanClass::HasCylinderNotCertifiedPeriodic),
            "NoCylinderFound": r.count(ScanClass::NoCylinderFound),
        },
        "offending": r.offending().into_iter().map(v).collect::<Vec<_>>(),
        "directions": scan_rows(&r.decompositions),
    })
}

pub fn parabolicity_json(r: &ParabolicityReport, max_len_sq: &Scalar, bound_sq: &Scalar) -> Value {
    let rows: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            json!({
                "direction": v(&e.direction),
                "moduli": scalars(&e.moduli),
                "pass": e.failure.is_none(),
                "failure": e.failure.map(|(i, j)| json!([i, j])),
            })
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "mode": "parabolicity",
        "max_len_sq": s(max_len_sq),
        "bound_sq": s(bound_sq),
        "pass": r.pass(),
        "first_failure": r.first_failure().map(|e| v(&e.direction)),
        "directions": rows,
    })
}

pub fn field_row(f: &FieldReport) -> Value {
    json!({
        "direction": v(&f.direction),
        "circumferences": scalars(&f.circumferences),
        "ratios": scalars(&f.ratios),
        "field": f.field,
        "single_cylinder": f.single_cylinder,
        "bound": if f.single_cylinder {
            "k(M) = Q".to_string()
        } else {
            format!("k(M) ⊆ {}; equality holds if the listed cylinders form one M-parallel class", f.field)
        },
    })
}

pub fn field_json(rows: &[FieldReport], max_len_sq: &Scalar, bound_sq: &Scalar) -> Value {
    json!({
        "format": FORMAT_VERSION,
        "mode": "field",
        "max_len_sq": s(max_len_sq),
        "bound_sq": s(bound_sq),
        "directions": rows.iter().map(field_row).collect::<Vec<_>>(),
    })
}

pub fn torus_closure_json(t: &TorusClosure) -> Value {
    json!({
        "format": FORMAT_VERSION,
        "dim": t.dim,
        "relations": crate::deformation::lattice_rows(&t.lattice.relations),
        "allowed": crate::deformation::lattice_rows(&t.lattice.allowed),
        "t": t.t.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "cocycle": t.cocycle.as_ref().map(cocycle_json),
    })
}

pub fn more_cylinders_json(r: &MoreCylinders) -> Value {
    json!({
        "format": FORMAT_VERSION,
        "cp_dim": r.cp_dim,
        "tw_dim": r.tw_dim,
        "hypothesis": r.hypothesis_holds(),
        "attempted_eps": scalars(&r.attempted),
        "found": r.found.as_ref().map(|(_, d)| decomposition_json(d)),
        "note": "best-effort search; an empty result certifies nothing",
    })
}

/// Serializes a report the same way every time.
pub fn to_text(v: &Value) -> String {
    let mut t = serde_json::to_string_pretty(v).expect("reports serialize");
    t.push('\n');
    t
}
