//! Independent dense state-vector simulator. This module is deliberately
//! simple: it exists to cross-check the descriptor engine, not to be fast.
//!
//! Amplitude ordering: qubit 1 is the most significant index bit, so
//! |0...0> is amplitude index 0 and a `PauliString`'s `to_dense` acts on the
//! same index space without any permutation.

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{Pauli, PauliSum};

/// State-vector simulation is capped at this register size.
pub const SIMULATE_CAP: usize = 10;

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n > SIMULATE_CAP {
            return Err(Error::DenseCapExceeded { requested: n, cap: SIMULATE_CAP });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > SIMULATE_CAP {
            return Err(Error::DenseCapExceeded { requested: n, cap: SIMULATE_CAP });
        }
        if amps.len() != 1 << n {
            return Err(Error::MalformedMatrix(format!(
                "amplitude count {} does not match 2^{n}",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::MalformedMatrix(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_gate(&mut self, gate: &crate::circuit::Gate) -> Result<()> {
        gate.validate(self.n)?;
        let positions: Vec<usize> = gate.targets().iter().map(|&t| t - 1).collect();
        let full = gate.local_matrix().embed(&positions, self.n);
        self.amps = full.apply(&self.amps);
        Ok(())
    }

    /// Overlap <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// <psi| P |psi> for a Pauli sum, computed by direct string application.
    pub fn expectation(&self, p: &PauliSum) -> Result<Complex64> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch { left: p.n(), right: self.n });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (string, coeff) in p.terms() {
            let mut term = Complex64::new(0.0, 0.0);
            for (idx, amp) in self.amps.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                // Apply the string to |idx>, tracking target index and phase.
                let mut target = idx;
                let mut factor = Complex64::new(1.0, 0.0);
                for a in 1..=self.n {
                    let bit_pos = self.n - a; // qubit 1 = most significant
                    let bit = (idx >> bit_pos) & 1;
                    match string.letter(a) {
                        Pauli::I => {}
                        Pauli::X => target ^= 1 << bit_pos,
                        Pauli::Y => {
                            target ^= 1 << bit_pos;
                            factor *= if bit == 0 {
                                Complex64::new(0.0, 1.0)
                            } else {
                                Complex64::new(0.0, -1.0)
                            };
                        }
                        Pauli::Z => {
                            if bit == 1 {
                                factor = -factor;
                            }
                        }
                    }
                }
                term += self.amps[target].conj() * factor * amp;
            }
            acc += coeff * term;
        }
        Ok(acc)
    }

    /// Density matrix of the listed qubits (1-based, deduplicated and
    /// sorted ascending), tracing out the complement.
    pub fn reduced_density(&self, subset: &[usize]) -> Result<CMatrix> {
        let mut keep: Vec<usize> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        for &a in &keep {
            if a < 1 || a > self.n {
                return Err(Error::IndexOutOfRange { index: a, n: self.n });
            }
        }
        let k = keep.len();
        let rest: Vec<usize> = (1..=self.n).filter(|a| !keep.contains(a)).collect();
        let dim = 1usize << k;
        let mut rho = CMatrix::zeros(dim);
        let env_dim = 1usize << rest.len();
        let build_index = |sub: usize, env: usize| -> usize {
            let mut idx = 0usize;
            for (j, &a) in keep.iter().enumerate() {
                let bit = (sub >> (k - 1 - j)) & 1;
                idx |= bit << (self.n - a);
            }
            for (j, &a) in rest.iter().enumerate() {
                let bit = (env >> (rest.len() - 1 - j)) & 1;
                idx |= bit << (self.n - a);
            }
            idx
        };
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for env in 0..env_dim {
                    acc += self.amps[build_index(r, env)] * self.amps[build_index(c, env)].conj();
                }
                rho.set(r, c, acc);
            }
        }
        Ok(rho)
    }
}

/// Run a circuit from |0...0>.
pub fn simulate(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.n)?;
    for gate in &circuit.gates {
        state.apply_gate(gate)?;
    }
    Ok(state)
}
