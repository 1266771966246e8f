//! Deterministic random generators backing the test suites: random Clifford
//! circuits, Haar-ish unitaries, and random register states. Kept in the
//! library so unit, integration, and acceptance tests share one source.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::linalg::CMatrix;

/// Random circuit over {H, S, X, Y, Z, CNOT, CZ, SWAP}.
pub fn random_clifford_circuit(rng: &mut StdRng, n: usize, depth: usize) -> Circuit {
    let mut circ = Circuit::new(n);
    for _ in 0..depth {
        let a = rng.gen_range(1..=n);
        let gate = if n >= 2 && rng.gen_bool(0.5) {
            let mut b = rng.gen_range(1..=n);
            while b == a {
                b = rng.gen_range(1..=n);
            }
            match rng.gen_range(0..3) {
                0 => Gate::Cnot(a, b),
                1 => Gate::Cz(a, b),
                _ => Gate::Swap(a, b),
            }
        } else {
            match rng.gen_range(0..5) {
                0 => Gate::H(a),
                1 => Gate::S(a),
                2 => Gate::X(a),
                3 => Gate::Y(a),
                _ => Gate::Z(a),
            }
        };
        circ.push(gate).expect("generated gate is valid");
    }
    circ
}

/// Random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut StdRng, dim: usize) -> CMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            cols.push(
                (0..dim)
                    .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                    .collect(),
            );
        }
        if let Some(u) = orthonormalize(&cols) {
            return u;
        }
    }
}

fn gaussian(rng: &mut StdRng) -> f64 {
    // Box-Muller.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn orthonormalize(cols: &[Vec<Complex64>]) -> Option<CMatrix> {
    let dim = cols.len();
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for col in cols {
        let mut v = col.clone();
        for prev in &out {
            let overlap: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= overlap * pi;
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        out.push(v);
    }
    let mut m = CMatrix::zeros(dim);
    for (c, col) in out.iter().enumerate() {
        for r in 0..dim {
            m.set(r, c, col[r]);
        }
    }
    Some(m)
}

/// Random normalized state vector of the given dimension.
pub fn random_state(rng: &mut StdRng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Random single-qubit pure state.
pub fn random_qubit_state(rng: &mut StdRng) -> Vec<Complex64> {
    random_state(rng, 2)
}
