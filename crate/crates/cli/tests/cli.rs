//! End-to-end checks of the binary: exit codes, golden text output, JSON
//! round-trips, and the analysis flows.

use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

use descryptor_core::descriptor::{Component, Register};
use descryptor_core::pauli::{Pauli, PauliString, PauliSum};
use descryptor_core::protocols;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn descryptor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descryptor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn evolve_ghz_prints_golden_table() {
    let out = descryptor(&["evolve", fixture("ghz.qc").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let want = "qubits 3\n\
                1 x +.ZXX\n\
                1 y -.YXX\n\
                1 z +.XII\n\
                2 x +.IXI\n\
                2 y +.XYI\n\
                2 z +.XZI\n\
                3 x +.IIX\n\
                3 y +.XIY\n\
                3 z +.XIZ\n";
    assert_eq!(text, want);
}

#[test]
fn evolve_empty_circuit_prints_initial_table() {
    let dir = std::env::temp_dir().join("descryptor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.qc");
    std::fs::write(&path, "qubits 2\n").unwrap();
    let out = descryptor(&["evolve", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(
        text,
        "qubits 2\n1 x +.XI\n1 y +.YI\n1 z +.ZI\n2 x +.IX\n2 y +.IY\n2 z +.IZ\n"
    );
}

#[test]
fn evolve_rejects_malformed_circuit_with_exit_2() {
    let out = descryptor(&["evolve", fixture("bad_gate.qc").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "stderr: {err}");
}

#[test]
fn evolve_json_round_trips_exactly() {
    let out = descryptor(&["evolve", fixture("ghz.qc").to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["command"], "evolve");

    let parsed = descriptors_from_json(&value);
    let reg = Register::from_circuit(&protocols::ghz_circuit()).unwrap();
    assert_eq!(parsed.len(), 3);
    for (qubit, comps) in &parsed {
        let want = reg.descriptor(*qubit).unwrap();
        for (c, got) in Component::ALL.into_iter().zip(comps) {
            assert_eq!(got, want.component(c), "qubit {qubit} component {}", c.label());
        }
    }
}

#[test]
fn evolve_json_round_trips_dense_components_exactly() {
    // Non-Clifford path: an S-like dense single-qubit rotation leaves
    // multi-term sums whose coefficients must survive the JSON round trip
    // bit-for-bit.
    let dir = std::env::temp_dir().join("descryptor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let mat = dir.join("t.mat");
    // T gate (eighth turn), not a Clifford.
    let c = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(&mat, format!("1 0 0 0\n0 0 {c} {c}\n")).unwrap();
    let circ = dir.join("t.qc");
    std::fs::write(&circ, "qubits 2\ngate U1 1 @t.mat\ngate CNOT 1 2\n").unwrap();

    let out = descryptor(&["evolve", circ.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let parsed = descriptors_from_json(&value);

    let circuit = descryptor_core::circuit::Circuit::parse_file(&circ).unwrap();
    let reg = Register::from_circuit(&circuit).unwrap();
    for (qubit, comps) in &parsed {
        let want = reg.descriptor(*qubit).unwrap();
        for (c, got) in Component::ALL.into_iter().zip(comps) {
            assert_eq!(got, want.component(c), "qubit {qubit} component {}", c.label());
        }
    }
}

#[test]
fn dense_gate_file_matches_named_gate() {
    let named = descryptor(&["evolve", fixture("bell.qc").to_str().unwrap()]);
    let dense = descryptor(&["evolve", fixture("dense_bell.qc").to_str().unwrap()]);
    assert!(named.status.success() && dense.status.success());
    assert_eq!(stdout_of(&named), stdout_of(&dense));
}

#[test]
fn analyze_ghz_pair_with_purifier() {
    let out = descryptor(&[
        "analyze",
        fixture("ghz.qc").to_str().unwrap(),
        "--pair",
        "1",
        "2",
        "--purifier",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("correlation: correlated"), "{text}");
    assert!(text.contains("ppt: separable"), "{text}");
    assert!(text.contains("descriptor-search: separable"), "{text}");
    assert!(text.contains("(z,z): direct"), "{text}");
}

#[test]
fn analyze_ghz_pair_two_three_is_third_party() {
    let out = descryptor(&[
        "analyze",
        fixture("ghz.qc").to_str().unwrap(),
        "--pair",
        "2",
        "3",
        "--purifier",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("descriptor-search: separable"), "{text}");
    assert!(text.contains("(z,z): third-party"), "{text}");
}

#[test]
fn analyze_bell_pair_is_entangled() {
    let out =
        descryptor(&["analyze", fixture("bell.qc").to_str().unwrap(), "--pair", "1", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("ppt: entangled"), "{text}");
    assert!(text.contains("pure-separability: not separable"), "{text}");
    assert!(text.contains("descriptor-search: inconclusive"), "{text}");
}

#[test]
fn analyze_json_shape() {
    let out = descryptor(&[
        "analyze",
        fixture("ghz.qc").to_str().unwrap(),
        "--pair",
        "1",
        "2",
        "--purifier",
        "3",
        "--json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pair"], serde_json::json!([1, 2]));
    assert_eq!(v["correlation"]["correlated"], true);
    assert_eq!(v["ppt"]["separable"], true);
    assert_eq!(v["descriptor_search"]["verdict"], "separable");
    let cert = &v["descriptor_search"]["certificate"];
    assert!(cert["weights"].is_array());
    assert!(cert["unitaries_a"].is_array());
    assert_eq!(v["attribution"]["entries"][0]["attribution"], "direct");
}

#[test]
fn analyze_mixed_pair_without_purifier_exits_3() {
    let out =
        descryptor(&["analyze", fixture("ghz.qc").to_str().unwrap(), "--pair", "1", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("purif"), "stderr: {err}");
}

#[test]
fn analyze_rejects_out_of_range_pair() {
    let out =
        descryptor(&["analyze", fixture("bell.qc").to_str().unwrap(), "--pair", "1", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn protocol_names_and_exit_codes() {
    for name in ["bell", "ghz", "w", "bell-measurement"] {
        let out = descryptor(&["protocol", name]);
        assert!(out.status.success(), "protocol {name}");
    }
    let out = descryptor(&["protocol", "teleport"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn protocol_bell_measurement_prints_tables_in_order() {
    let out = descryptor(&["protocol", "bell-measurement"]);
    let text = stdout_of(&out);
    let steps: Vec<&str> = text.lines().filter(|l| l.starts_with("step ")).collect();
    assert_eq!(
        steps,
        vec!["step prepared", "step entangled-pair", "step measurement-1", "step measurement-2"]
    );
    assert!(text.contains("3 z +.XIZI"), "{text}");
    assert!(text.contains("4 z +.XZIZ"), "{text}");
    assert!(text.contains("bit 3 +.XIZI"), "{text}");
    assert!(text.contains("bit 4 +.XZIZ"), "{text}");
}

#[test]
fn shipped_sample_circuit_reproduces_the_protocol_register() {
    let sample = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples/bell_measurement.qc");
    let evolved = descryptor(&["evolve", sample.to_str().unwrap()]);
    assert!(evolved.status.success());
    let protocol = descryptor(&["protocol", "bell-measurement"]);
    let protocol_text = stdout_of(&protocol);
    let final_block: String = protocol_text
        .split("step measurement-2\n")
        .nth(1)
        .unwrap()
        .lines()
        .take_while(|l| !l.starts_with("bit "))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(stdout_of(&evolved), final_block);
}

#[test]
fn protocol_w_reports_fidelity() {
    let out = descryptor(&["protocol", "w"]);
    let text = stdout_of(&out);
    assert!(text.contains("fidelity to canonical W state: 0.083333"), "{text}");

    let json_out = descryptor(&["protocol", "w", "--json"]);
    let v: Value = serde_json::from_str(&stdout_of(&json_out)).unwrap();
    let fidelity = v["reconstruction"]["fidelity_to_w"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&fidelity));
    assert!(v["reconstruction"]["min_eigenvalue"].as_f64().unwrap() > -1e-8);
}

#[test]
fn protocol_ghz_json_toggle() {
    let v: Value =
        serde_json::from_str(&stdout_of(&descryptor(&["protocol", "ghz", "--json"]))).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["name"], "ghz");
    assert_eq!(v["descriptors"].as_array().unwrap().len(), 3);
}

#[test]
fn dense_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_descryptor"))
        .args(["analyze", fixture("ghz.qc").to_str().unwrap(), "--pair", "1", "2"])
        .env("DESCRYPTOR_DENSE_CAP", "1")
        .output()
        .unwrap();
    // A cap of one qubit cannot reconstruct the pair density matrix.
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "stderr: {err}");
}

// ---- JSON round-trip helpers -------------------------------------------

fn sum_from_json(value: &Value, n: usize) -> PauliSum {
    let mut sum = PauliSum::zero(n);
    for term in value.as_array().expect("component array") {
        let parts = term.as_array().expect("term triple");
        let re = parts[0].as_f64().unwrap();
        let im = parts[1].as_f64().unwrap();
        let letters = parts[2].as_str().unwrap();
        let mut string = PauliString::identity(n);
        for (k, ch) in letters.chars().enumerate() {
            string.set_letter(k + 1, Pauli::from_char(ch).unwrap());
        }
        sum.add_term(&string, Complex64::new(re, im));
    }
    sum
}

fn descriptors_from_json(value: &Value) -> Vec<(usize, [PauliSum; 3])> {
    let n = value["qubits"].as_u64().unwrap() as usize;
    value["descriptors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            let qubit = row["qubit"].as_u64().unwrap() as usize;
            (
                qubit,
                [
                    sum_from_json(&row["x"], n),
                    sum_from_json(&row["y"], n),
                    sum_from_json(&row["z"], n),
                ],
            )
        })
        .collect()
}
