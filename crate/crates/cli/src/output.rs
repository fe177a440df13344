//! Report and scan serialization. JSON keys come out sorted, so output is
//! byte-stable for a fixed input, mode, tolerance, and seed.

use cubemetrics::negtype::WpValue;
use cubemetrics::oracles::{MValue, OmnibusReport};
use cubemetrics::report::{InvariantReport, ScanRow};
use cubemetrics::{Mode, Scalar, Vector};
use serde_json::{json, Map, Value};

/// Exact scalars become `"p/q"` strings (integers without the slash) so no
/// precision is lost; float scalars become JSON numbers.
pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => Value::String(r.to_string()),
        Scalar::Float(x) => json!(x),
    }
}

fn vector_to_json(v: &Vector) -> Value {
    Value::Array(v.entries().iter().map(scalar_to_json).collect())
}

fn omnibus_to_json(o: &OmnibusReport) -> Value {
    json!({
        "c1_affine_indep": o.c1_affine_indep,
        "c2_D_invertible": o.c2_d_invertible,
        "c3_strict_1neg": o.c3_strict_1neg,
        "c4_wp_gt_1": o.c4_wp_gt_1,
        "c5_mgr_gt_1": o.c5_mgr_gt_1,
        "c6_gap_positive": o.c6_gap_positive,
        "c7_no_poly_eq": o.c7_no_poly_eq,
        "consistent": o.consistent,
    })
}

pub fn report_to_json(report: &InvariantReport, source: &str) -> Value {
    let mut map = Map::new();
    map.insert(
        "input".into(),
        json!({ "kind": report.kind, "points": report.points, "source": source }),
    );
    map.insert(
        "mode".into(),
        Value::String(
            match report.mode {
                Mode::Exact => "exact",
                Mode::Float => "float",
            }
            .into(),
        ),
    );
    map.insert("tol".into(), json!(report.tol));
    map.insert("det".into(), scalar_to_json(&report.det));
    map.insert("cofactor_sum".into(), scalar_to_json(&report.cofactor_sum));
    map.insert("rank_D".into(), json!(report.rank_d));
    map.insert(
        "affine_dim".into(),
        report.affine_dim.map_or(Value::Null, |d| json!(d)),
    );
    map.insert("strict_1neg".into(), json!(report.strict_1neg));
    map.insert(
        "wp".into(),
        match &report.wp {
            Some(WpValue::Finite(v)) => scalar_to_json(v),
            Some(WpValue::Infinite) => Value::String("infinite".into()),
            None => Value::Null,
        },
    );
    map.insert(
        "gap_1".into(),
        report.gap_1.as_ref().map_or(Value::Null, scalar_to_json),
    );
    map.insert(
        "M".into(),
        match &report.m_constant {
            Some(MValue::Finite(v)) => scalar_to_json(v),
            Some(MValue::Infinite) => Value::String("infinite".into()),
            None => Value::Null,
        },
    );
    map.insert(
        "inv_sum".into(),
        report.inv_sum.as_ref().map_or(Value::Null, scalar_to_json),
    );
    map.insert(
        "kernel_basis".into(),
        Value::Array(report.kernel_basis.iter().map(vector_to_json).collect()),
    );
    map.insert(
        "omnibus".into(),
        report.omnibus.as_ref().map_or(Value::Null, omnibus_to_json),
    );
    map.insert(
        "warnings".into(),
        Value::Array(
            report
                .warnings
                .iter()
                .map(|w| Value::String(w.clone()))
                .collect(),
        ),
    );
    Value::Object(map)
}

/// Fixed header, `.` decimal point, `NA` for the inverse sum at singular
/// exponents.
pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("p,det,cof,inv_sum\n");
    for r in rows {
        let inv = match r.inv_sum {
            Some(v) => format!("{v}"),
            None => "NA".into(),
        };
        out.push_str(&format!("{},{},{},{}\n", r.p, r.det, r.cof, inv));
    }
    out
}
