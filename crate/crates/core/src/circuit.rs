//! Gate and circuit model plus the circuit text format.
//!
//! One directive per line:
//!
//! ```text
//! qubits N
//! gate KIND t1 [t2 ...]
//! # comment
//! ```
//!
//! Named kinds are H, X, Y, Z, S, CNOT, CZ, SWAP. Dense unitaries are
//! `gate U<k> t1 .. tk @file.mat` where the file holds the row-major
//! 2^k x 2^k complex entries as whitespace-separated `re im` pairs.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Unitarity tolerance for dense gate matrices.
pub const UNITARY_TOL: f64 = 1e-12;

/// Dense gates act on at most this many qubits.
pub const MAX_DENSE_GATE_QUBITS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    DenseUnitary { targets: Vec<usize>, matrix: CMatrix },
}

impl Gate {
    /// 1-based qubits the gate touches.
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::H(a) | Gate::X(a) | Gate::Y(a) | Gate::Z(a) | Gate::S(a) => vec![*a],
            Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::DenseUnitary { targets, .. } => targets.clone(),
        }
    }

    pub fn dense_unitary(targets: Vec<usize>, matrix: CMatrix) -> Result<Gate> {
        if targets.is_empty() || targets.len() > MAX_DENSE_GATE_QUBITS {
            return Err(Error::MalformedGate(format!(
                "dense gates support 1..={MAX_DENSE_GATE_QUBITS} qubits, got {}",
                targets.len()
            )));
        }
        if matrix.dim() != 1 << targets.len() {
            return Err(Error::MalformedGate(format!(
                "matrix dimension {} does not match {} targets",
                matrix.dim(),
                targets.len()
            )));
        }
        if !matrix.is_unitary(UNITARY_TOL) {
            return Err(Error::MalformedGate("matrix is not unitary".to_string()));
        }
        Ok(Gate::DenseUnitary { targets, matrix })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let targets = self.targets();
        for &t in &targets {
            if t < 1 || t > n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
        }
        for i in 0..targets.len() {
            for j in (i + 1)..targets.len() {
                if targets[i] == targets[j] {
                    return Err(Error::MalformedGate(format!(
                        "duplicate target {} in {self}",
                        targets[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense matrix over the gate's own targets (target order = kron order).
    pub fn local_matrix(&self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Gate::H(_) => CMatrix::from_rows(2, &[l, l, l, -l]).scale(inv_sqrt2),
            Gate::X(_) => CMatrix::from_rows(2, &[o, l, l, o]),
            Gate::Y(_) => CMatrix::from_rows(2, &[o, -i, i, o]),
            Gate::Z(_) => CMatrix::from_rows(2, &[l, o, o, -l]),
            Gate::S(_) => CMatrix::from_rows(2, &[l, o, o, i]),
            Gate::Cnot(_, _) => CMatrix::from_rows(
                4,
                &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o],
            ),
            Gate::Cz(_, _) => {
                let mut m = CMatrix::identity(4);
                m.set(3, 3, -l);
                m
            }
            Gate::Swap(_, _) => CMatrix::from_rows(
                4,
                &[l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l],
            ),
            Gate::DenseUnitary { matrix, .. } => matrix.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(a) => write!(f, "H {a}"),
            Gate::X(a) => write!(f, "X {a}"),
            Gate::Y(a) => write!(f, "Y {a}"),
            Gate::Z(a) => write!(f, "Z {a}"),
            Gate::S(a) => write!(f, "S {a}"),
            Gate::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Gate::DenseUnitary { targets, .. } => {
                write!(f, "U{}", targets.len())?;
                for t in targets {
                    write!(f, " {t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn with_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Parse the circuit text format. Matrix files referenced by `@file`
    /// directives are resolved relative to `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "qubits" => {
                    if circuit.is_some() {
                        return Err(Error::ParseAt {
                            line: line_no,
                            message: "duplicate `qubits` directive".to_string(),
                        });
                    }
                    let n: usize = fields
                        .get(1)
                        .and_then(|v| v.parse().ok())
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| Error::ParseAt {
                            line: line_no,
                            message: "`qubits` needs a positive count".to_string(),
                        })?;
                    circuit = Some(Circuit::new(n));
                }
                "gate" => {
                    let circuit = circuit.as_mut().ok_or_else(|| Error::ParseAt {
                        line: line_no,
                        message: "`gate` before `qubits`".to_string(),
                    })?;
                    let gate = parse_gate(&fields[1..], base_dir).map_err(|e| Error::ParseAt {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                    circuit.push(gate).map_err(|e| Error::ParseAt {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                }
                other => {
                    return Err(Error::ParseAt {
                        line: line_no,
                        message: format!("unknown directive `{other}`"),
                    });
                }
            }
        }
        circuit.ok_or_else(|| Error::Parse("missing `qubits` directive".to_string()))
    }

    pub fn parse_file(path: &Path) -> Result<Circuit> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        Circuit::parse(&text, &base)
    }
}

fn parse_gate(fields: &[&str], base_dir: &Path) -> Result<Gate> {
    let kind = fields.first().ok_or_else(|| Error::Parse("missing gate kind".to_string()))?;
    let parse_target = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| Error::Parse(format!("bad target `{s}`")))
    };
    let upper = kind.to_ascii_uppercase();
    let expect_args = |want: usize| -> Result<Vec<usize>> {
        if fields.len() != want + 1 {
            return Err(Error::Parse(format!(
                "gate {upper} expects {want} target(s), got {}",
                fields.len() - 1
            )));
        }
        fields[1..].iter().map(|s| parse_target(s)).collect()
    };
    match upper.as_str() {
        "H" => Ok(Gate::H(expect_args(1)?[0])),
        "X" => Ok(Gate::X(expect_args(1)?[0])),
        "Y" => Ok(Gate::Y(expect_args(1)?[0])),
        "Z" => Ok(Gate::Z(expect_args(1)?[0])),
        "S" => Ok(Gate::S(expect_args(1)?[0])),
        "CNOT" => expect_args(2).map(|t| Gate::Cnot(t[0], t[1])),
        "CZ" => expect_args(2).map(|t| Gate::Cz(t[0], t[1])),
        "SWAP" => expect_args(2).map(|t| Gate::Swap(t[0], t[1])),
        u if u.starts_with('U') => {
            let k: usize = u[1..]
                .parse()
                .ok()
                .filter(|&k| (1..=MAX_DENSE_GATE_QUBITS).contains(&k))
                .ok_or_else(|| {
                    Error::Parse(format!("bad dense gate kind `{kind}` (use U1..U{MAX_DENSE_GATE_QUBITS})"))
                })?;
            if fields.len() != k + 2 {
                return Err(Error::Parse(format!(
                    "gate U{k} expects {k} target(s) and one @file argument"
                )));
            }
            let targets: Vec<usize> =
                fields[1..=k].iter().map(|s| parse_target(s)).collect::<Result<_>>()?;
            let file = fields[k + 1]
                .strip_prefix('@')
                .ok_or_else(|| Error::Parse("dense gate matrix argument must start with `@`".to_string()))?;
            let matrix = read_matrix_file(&base_dir.join(file), 1 << k)?;
            Gate::dense_unitary(targets, matrix)
        }
        _ => Err(Error::Parse(format!("unknown gate kind `{kind}`"))),
    }
}

/// Read a row-major complex matrix: whitespace-separated `re im` pairs,
/// `#` comments allowed.
pub fn read_matrix_file(path: &Path, dim: usize) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text, dim).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str, dim: usize) -> Result<CMatrix> {
    let mut values = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{tok}` in matrix file")))?;
            values.push(v);
        }
    }
    if values.len() != 2 * dim * dim {
        return Err(Error::Parse(format!(
            "matrix file holds {} numbers, expected {} for a {dim}x{dim} complex matrix",
            values.len(),
            2 * dim * dim
        )));
    }
    let entries: Vec<Complex64> =
        values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    Ok(CMatrix::from_rows(dim, &entries))
}
