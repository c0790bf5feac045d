//! Report assembly: one JSON schema (keys sorted, deterministic) and a
//! human-readable text rendering of the same fields.


use serde_json::{json, Value};
use voldist_core::classify::{DistortionVerdict, Rigor};
use voldist_core::fclass::{decimal_string, FnClass};
use voldist_core::intmat::{SpectralProfile, UnitCircleClass};
use voldist_core::witness::{MeasurementReport, WitnessFamily};
use voldist_core::IntMatrix;

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(|x| json!(x.to_string())).collect()))
        .collect();
    Value::Array(rows)
}

pub fn spectral_json(m: &IntMatrix, p: &SpectralProfile) -> Value {
    let moduli: Vec<Value> = p
        .moduli
        .iter()
        .map(|e| {
            json!({
                "lo": format!("{}/{}", e.interval.lo.numer(), e.interval.lo.denom()),
                "hi": format!("{}/{}", e.interval.hi.numer(), e.interval.hi.denom()),
                "decimal": decimal_string(&e.interval.midpoint(), 12),
                "multiplicity": e.multiplicity,
                "class": match e.class {
                    UnitCircleClass::Below => "below",
                    UnitCircleClass::On => "on",
                    UnitCircleClass::Above => "above",
                },
            })
        })
        .collect();
    json!({
        "dim": p.dim,
        "det_abs": p.d_abs.to_string(),
        "moduli": moduli,
        "n_off_circle": p.n_off_circle,
        "finite_order": p.finite_order,
        "diagonalizable": p.diagonalizable,
        "unipotent_block_sizes": p.unipotent_block_sizes,
        "cyclotomic_part": p.cyclotomic_part.to_string(),
        "char_poly": m.char_poly().to_string(),
    })
}

fn class_json(c: &FnClass) -> Value {
    json!({
        "rendered": c.to_string(),
        "exponent": c.exponent_f64(),
    })
}

pub fn verdict_json(v: &DistortionVerdict) -> Value {
    json!({
        "lower": class_json(&v.lower),
        "upper": class_json(&v.upper),
        "sharp": v.sharp,
        "rigor": match v.rigor { Rigor::Proved => "proved", Rigor::Conjectural => "conjectural" },
        "notes": v.notes,
    })
}

pub fn family_json(f: &WitnessFamily, scales: &[u64]) -> Value {
    let per_scale: Vec<Value> = scales
        .iter()
        .map(|&n| {
            json!({
                "scale": n,
                "height": f.height(n),
                "sides": f.sides(n),
                "cycle_vectors": f.cycle_vectors(n),
                "predicted_subgroup": f.predicted_subgroup(n),
                "predicted_ambient": f.predicted_ambient(n),
            })
        })
        .collect();
    json!({
        "kind": format!("{:?}", f.kind).to_lowercase(),
        "m": f.m,
        "k": f.k,
        "moduli": f.moduli,
        "blocks": f.blocks,
        "predicted_exponent": f.predicted_exponent,
        "degenerate": f.degenerate,
        "scales": per_scale,
        "notes": f.notes,
    })
}

pub fn measurement_json(r: &MeasurementReport) -> Value {
    serde_json::to_value(r).expect("measurement serializes")
}

/// Render the whole report as pretty JSON (stable key order) or text.
pub fn emit(report: &Value, format: &str) -> String {
    if format == "json" {
        serde_json::to_string_pretty(report).expect("report serializes")
    } else {
        let mut out = String::new();
        text_render(report, 0, &mut out);
        out
    }
}

fn text_render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_render(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        text_render(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {item}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}
