//! Reduced descriptors, validity of the reduced substitution, and convex
//! representation of mixed-subsystem descriptors.
//!
//! Reduction replaces every letter at a dropped slot by the identity and
//! leaves phases alone. The result stays an operator on the full register;
//! products of reduced descriptors are formed there directly, which is what
//! makes pair products with a shared purifier meaningful.

use num_complex::Complex64;

use crate::descriptor::{Component, Descriptor, Register};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Purity threshold for treating a subsystem as pure.
pub const PURITY_TOL: f64 = 1e-10;

/// Expectation agreement tolerance on exact (Clifford) paths.
pub const EXACT_TOL: f64 = 1e-10;

/// Convex-decomposition reproduction tolerance.
pub const CONVEX_TOL: f64 = 1e-8;

/// A descriptor with every letter outside `keep` replaced by identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDescriptor {
    base: Descriptor,
    keep: Vec<usize>,
    comps: [PauliSum; 3],
}

impl ReducedDescriptor {
    pub fn base(&self) -> &Descriptor {
        &self.base
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn component(&self, c: Component) -> &PauliSum {
        &self.comps[c.index()]
    }

    pub fn table_component(&self, idx: usize) -> PauliSum {
        match idx {
            0 => PauliSum::identity(self.base.n()),
            1..=3 => self.comps[idx - 1].clone(),
            _ => panic!("component index {idx} outside 0..=3"),
        }
    }

    /// View as a plain descriptor (same qubit label, reduced components).
    pub fn as_descriptor(&self) -> Descriptor {
        Descriptor::from_components(self.base.qubit(), self.comps.clone())
    }
}

/// Replace letters outside `keep` by identity in every component.
pub fn reduce(d: &Descriptor, keep: &[usize]) -> Result<ReducedDescriptor> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    for &a in &keep {
        if a < 1 || a > d.n() {
            return Err(Error::IndexOutOfRange { index: a, n: d.n() });
        }
    }
    let comps = [
        d.component(Component::X).restrict_to(&keep),
        d.component(Component::Y).restrict_to(&keep),
        d.component(Component::Z).restrict_to(&keep),
    ];
    Ok(ReducedDescriptor { base: d.clone(), keep, comps })
}

/// Tr(rho_subset^2) for a register subset.
pub fn purity(r: &Register, subset: &[usize]) -> Result<f64> {
    r.purity(subset)
}

/// One observed mismatch between full and reduced expectations.
#[derive(Clone, Debug)]
pub struct Disagreement {
    /// (qubit, component index 0..=3) per kept qubit, 0 meaning identity.
    pub assignment: Vec<(usize, usize)>,
    pub full: Complex64,
    pub reduced: Complex64,
}

/// Outcome of the reduced-substitution validity check.
#[derive(Clone, Debug)]
pub struct ReductionVerdict {
    /// True exactly when every single and joint expectation over the kept
    /// qubits is preserved by the reduced descriptors.
    pub valid: bool,
    /// Tr(rho_keep^2).
    pub purity: f64,
    /// Purity equals one within tolerance (the substitution criterion the
    /// formalism states).
    pub subsystem_pure: bool,
    pub disagreements: Vec<Disagreement>,
}

impl ReductionVerdict {
    /// The empirical answer and the purity criterion point different ways.
    pub fn diverges(&self) -> bool {
        self.valid != self.subsystem_pure
    }
}

/// Check whether descriptors reduced to `keep` reproduce every expectation
/// the full descriptors give: all products with one component (or identity)
/// chosen per kept qubit are compared in the universal state.
pub fn is_valid_reduction(r: &Register, a: usize, keep: &[usize]) -> Result<ReductionVerdict> {
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() {
        return Err(Error::EmptyKeep);
    }
    if !keep_sorted.contains(&a) {
        return Err(Error::Invalid(format!("qubit {a} is not in the keep set {keep_sorted:?}")));
    }
    let purity = r.purity(&keep_sorted)?;
    let subsystem_pure = (purity - 1.0).abs() <= PURITY_TOL;

    let reduced: Vec<ReducedDescriptor> = keep_sorted
        .iter()
        .map(|&w| reduce(r.descriptor(w)?, &keep_sorted))
        .collect::<Result<_>>()?;

    let k = keep_sorted.len();
    let mut disagreements = Vec::new();
    let mut assignment = vec![0usize; k];
    'outer: loop {
        if assignment.iter().any(|&idx| idx > 0) {
            let mut full = PauliSum::identity(r.n());
            let mut red = PauliSum::identity(r.n());
            for (j, &idx) in assignment.iter().enumerate() {
                if idx == 0 {
                    continue;
                }
                let w = keep_sorted[j];
                full = full.multiply(&r.descriptor(w)?.table_component(idx))?;
                red = red.multiply(&reduced[j].table_component(idx))?;
            }
            let fe = full.expectation_zero();
            let re = red.expectation_zero();
            if (fe - re).norm() > EXACT_TOL {
                disagreements.push(Disagreement {
                    assignment: keep_sorted.iter().copied().zip(assignment.iter().copied()).collect(),
                    full: fe,
                    reduced: re,
                });
            }
        }
        let mut j = 0;
        loop {
            assignment[j] += 1;
            if assignment[j] < 4 {
                break;
            }
            assignment[j] = 0;
            j += 1;
            if j == k {
                break 'outer;
            }
        }
    }

    Ok(ReductionVerdict { valid: disagreements.is_empty(), purity, subsystem_pure, disagreements })
}

/// A weighted sum of descriptors that are pure on the kept space.
#[derive(Clone, Debug)]
pub struct ConvexDescriptor {
    qubit: usize,
    keep: Vec<usize>,
    terms: Vec<(f64, Descriptor)>,
}

impl ConvexDescriptor {
    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn terms(&self) -> &[(f64, Descriptor)] {
        &self.terms
    }

    /// Weighted expectation of a component across the terms.
    pub fn expectation(&self, c: Component) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, d)| d.component(c).expectation_zero() * Complex64::new(*w, 0.0))
            .sum()
    }
}

/// Represent the (possibly mixed) subsystem descriptor of qubit `a` on
/// `keep` as a convex sum of pure-space descriptors, one per eigenstate of
/// the reduced density matrix.
pub fn convex_decompose(r: &Register, a: usize, keep: &[usize]) -> Result<ConvexDescriptor> {
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if !keep_sorted.contains(&a) {
        return Err(Error::Invalid(format!("qubit {a} is not in the keep set {keep_sorted:?}")));
    }
    let rho = r.density_matrix(&keep_sorted)?;
    let (eigs, vecs) = rho.eigh();
    let local_pos = keep_sorted.iter().position(|&w| w == a).unwrap();

    let mut terms = Vec::new();
    for (idx, &weight) in eigs.iter().enumerate() {
        if weight < 1e-12 {
            continue;
        }
        let psi = vecs.column(idx);
        let w_unitary = CMatrix::unitary_from_first_column(&psi);
        let comps = synthesize_components(&w_unitary, local_pos, &keep_sorted, r.n())?;
        terms.push((weight, Descriptor::from_components(a, comps)));
    }

    let total: f64 = terms.iter().map(|(w, _)| *w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NoCertificate(format!(
            "eigenvalue weights sum to {total}, not 1"
        )));
    }
    for (w, _) in terms.iter_mut() {
        *w /= total;
    }
    let out = ConvexDescriptor { qubit: a, keep: keep_sorted, terms };

    // The convex sum must reproduce the full component expectations.
    for c in Component::ALL {
        let want = r.descriptor(a)?.component(c).expectation_zero();
        let got = out.expectation(c);
        if (want - got).norm() > CONVEX_TOL {
            return Err(Error::NoCertificate(format!(
                "component {} expectation {got} does not reproduce {want}",
                c.label()
            )));
        }
    }
    Ok(out)
}

/// Components of the descriptor of the qubit at `local_pos` for the pure
/// state W|0..0> on the kept space, expanded in the Pauli basis of `keep`
/// and embedded into the full register.
fn synthesize_components(
    w_unitary: &CMatrix,
    local_pos: usize,
    keep: &[usize],
    n: usize,
) -> Result<[PauliSum; 3]> {
    let k = keep.len();
    let dim = 1usize << k;
    let w_dag = w_unitary.adjoint();
    let mut out = Vec::with_capacity(3);
    for comp in Component::ALL {
        let sigma = single_letter_local(comp.letter(), local_pos, k);
        let conj = w_dag.matmul(&sigma).matmul(w_unitary);
        let mut sum = PauliSum::zero(n);
        for code in 0..dim * dim {
            let letters: Vec<Pauli> =
                (0..k).map(|j| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(code >> (2 * j)) & 3]).collect();
            let mut basis = CMatrix::identity(1);
            for &p in &letters {
                basis = basis.kron(&p.matrix());
            }
            let coeff = basis.matmul(&conj).trace() / Complex64::new(dim as f64, 0.0);
            if coeff.norm() < crate::pauli::PRUNE_EPS {
                continue;
            }
            let mut string = PauliString::identity(n);
            for (j, &p) in letters.iter().enumerate() {
                string.set_letter(keep[j], p);
            }
            sum.add_term(&string, coeff);
        }
        out.push(sum);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn single_letter_local(p: Pauli, pos: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::identity(1);
    for j in 0..k {
        m = m.kron(&if j == pos { p.matrix() } else { Pauli::I.matrix() });
    }
    m
}
