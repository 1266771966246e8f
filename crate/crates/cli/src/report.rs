//! Text and JSON rendering of descriptor tables, analysis reports, and
//! protocol traces. JSON objects are built as `serde_json::Value` maps,
//! which keep keys sorted; every report carries `"schema": 1`.

use serde_json::{json, Map, Value};

use descryptor_core::analysis::{
    AttributionReport, CorrelationReport, DecompositionCandidate, SeparabilityVerdict,
    Separability,
};
use descryptor_core::descriptor::{Component, Descriptor, Register};
use descryptor_core::linalg::CMatrix;
use descryptor_core::pauli::PauliSum;
use descryptor_core::protocols::{BitDescriptor, ProtocolTrace, WReport};

pub const SCHEMA_VERSION: u64 = 1;

pub fn schema_object() -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema".to_string(), json!(SCHEMA_VERSION));
    map
}

/// A component as a JSON array of `[re, im, "LETTERS"]` terms, in the
/// sum's deterministic term order.
pub fn sum_to_json(sum: &PauliSum) -> Value {
    let terms: Vec<Value> = sum
        .terms()
        .map(|(s, c)| {
            let letters: String = (1..=s.n()).map(|a| s.letter(a).to_char()).collect();
            json!([c.re, c.im, letters])
        })
        .collect();
    Value::Array(terms)
}

pub fn descriptor_to_json(d: &Descriptor) -> Value {
    let mut map = schema_less_map();
    map.insert("qubit".to_string(), json!(d.qubit()));
    map.insert("x".to_string(), sum_to_json(d.component(Component::X)));
    map.insert("y".to_string(), sum_to_json(d.component(Component::Y)));
    map.insert("z".to_string(), sum_to_json(d.component(Component::Z)));
    Value::Object(map)
}

fn schema_less_map() -> Map<String, Value> {
    Map::new()
}

pub fn register_to_json(reg: &Register) -> Value {
    let descriptors: Vec<Value> = reg.descriptors().iter().map(descriptor_to_json).collect();
    json!({ "qubits": reg.n(), "descriptors": descriptors })
}

/// Text table: one line per component, sorted by qubit then component.
pub fn render_register_text(reg: &Register) -> String {
    let mut out = format!("qubits {}\n", reg.n());
    for d in reg.descriptors() {
        for c in Component::ALL {
            out.push_str(&format!("{} {} {}\n", d.qubit(), c.label(), d.component(c).render()));
        }
    }
    out
}

pub fn render_fixture_descriptors_text(rows: &[Descriptor]) -> String {
    let mut out = String::new();
    for d in rows {
        for c in Component::ALL {
            out.push_str(&format!("{} {} {}\n", d.qubit(), c.label(), d.component(c).render()));
        }
    }
    out
}

pub fn correlation_to_json(rep: &CorrelationReport) -> Value {
    let table: Vec<Value> = (0..3)
        .map(|i| {
            let row: Vec<Value> = (0..3)
                .map(|j| {
                    json!({
                        "joint": rep.table[i][j].joint,
                        "product": rep.table[i][j].product,
                    })
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    let witnesses: Vec<Value> = rep
        .witnesses
        .iter()
        .map(|(a, b)| json!([a.label().to_string(), b.label().to_string()]))
        .collect();
    json!({
        "correlated": rep.correlated,
        "pair": [rep.pair.0, rep.pair.1],
        "table": table,
        "witnesses": witnesses,
    })
}

pub fn render_correlation_text(rep: &CorrelationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "correlation: {}\n",
        if rep.correlated { "correlated" } else { "uncorrelated" }
    ));
    for (i, ci) in Component::ALL.into_iter().enumerate() {
        for (j, cj) in Component::ALL.into_iter().enumerate() {
            let e = &rep.table[i][j];
            let mark = if e.is_witness() { "  <- witness" } else { "" };
            out.push_str(&format!(
                "  ({},{}) joint {:+.10} product {:+.10}{}\n",
                ci.label(),
                cj.label(),
                e.joint,
                e.product,
                mark
            ));
        }
    }
    out
}

fn separability_label(s: Separability) -> &'static str {
    match s {
        Separability::Separable => "separable",
        Separability::Entangled => "entangled",
        Separability::Inconclusive => "inconclusive",
    }
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.dim())
        .map(|r| {
            let row: Vec<Value> =
                (0..m.dim()).map(|c| json!([m.get(r, c).re, m.get(r, c).im])).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn certificate_to_json(cert: &DecompositionCandidate) -> Value {
    let unitaries = |us: &[CMatrix]| -> Vec<Value> { us.iter().map(matrix_to_json).collect() };
    json!({
        "weights": cert.weights,
        "row_marginals": cert.row_marginals(),
        "col_marginals": cert.col_marginals(),
        "form": if cert.is_product_form(1e-9) { "product" } else { "diagonal" },
        "unitaries_a": unitaries(&cert.unitaries_a),
        "unitaries_b": unitaries(&cert.unitaries_b),
    })
}

pub fn verdict_to_json(v: &SeparabilityVerdict) -> Value {
    let mut map = schema_less_map();
    map.insert("verdict".to_string(), json!(separability_label(v.separable)));
    map.insert("residual".to_string(), json!(v.residual));
    if let Some(cross) = v.ppt_cross_check {
        map.insert("ppt_cross_check".to_string(), json!(separability_label(cross)));
    }
    map.insert(
        "certificate".to_string(),
        v.certificate.as_ref().map_or(Value::Null, certificate_to_json),
    );
    Value::Object(map)
}

pub fn attribution_to_json(rep: &AttributionReport) -> Value {
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            json!({
                "components": [e.comps.0.label().to_string(), e.comps.1.label().to_string()],
                "attribution": match e.attribution {
                    descryptor_core::analysis::Attribution::ThirdParty => "third-party",
                    descryptor_core::analysis::Attribution::Direct => "direct",
                },
                "full": { "joint": e.full.joint, "product": e.full.product },
                "reduced": { "joint": e.reduced.joint, "product": e.reduced.product },
            })
        })
        .collect();
    json!({
        "correlated": rep.correlated,
        "pair": [rep.pair.0, rep.pair.1],
        "purifier": rep.purifier,
        "entries": entries,
    })
}

pub fn render_attribution_text(rep: &AttributionReport) -> String {
    if !rep.correlated {
        return "attribution: none (pair is uncorrelated)\n".to_string();
    }
    let mut out = String::from("attribution:\n");
    for e in &rep.entries {
        out.push_str(&format!(
            "  ({},{}): {} (full joint {:+.10}, reduced joint {:+.10})\n",
            e.comps.0.label(),
            e.comps.1.label(),
            match e.attribution {
                descryptor_core::analysis::Attribution::ThirdParty => "third-party",
                descryptor_core::analysis::Attribution::Direct => "direct",
            },
            e.full.joint,
            e.reduced.joint
        ));
    }
    out
}

pub fn bit_to_json(bit: &BitDescriptor) -> Value {
    json!({ "qubit": bit.source, "content": sum_to_json(&bit.content) })
}

pub fn trace_to_json(trace: &ProtocolTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "register": register_to_json(&s.register),
            })
        })
        .collect();
    let bits: Vec<Value> = trace.bits.iter().map(bit_to_json).collect();
    json!({ "steps": steps, "bits": bits })
}

pub fn render_trace_text(trace: &ProtocolTrace) -> String {
    let mut out = String::new();
    for step in &trace.steps {
        out.push_str(&format!("step {}\n", step.label));
        out.push_str(&render_register_text(&step.register));
    }
    for bit in &trace.bits {
        out.push_str(&format!("bit {} {}\n", bit.source, bit.content.render()));
    }
    out
}

pub fn w_report_to_json(report: &WReport) -> Value {
    json!({
        "hermitian_deviation": report.hermitian_deviation,
        "trace": report.trace,
        "min_eigenvalue": report.min_eigenvalue,
        "fidelity_to_w": report.fidelity_to_w,
        "matrix": matrix_to_json(&report.rho),
    })
}

pub fn render_w_report_text(report: &WReport) -> String {
    format!(
        "reconstruction: trace {:.12}, hermitian deviation {:.3e}, min eigenvalue {:+.3e}\n\
         fidelity to canonical W state: {:.6}\n",
        report.trace, report.hermitian_deviation, report.min_eigenvalue, report.fidelity_to_w
    )
}
