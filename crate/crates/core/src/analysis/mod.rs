//! Correlation tests, separability tests, and correlation attribution.
//!
//! Correlation compares ⟨q_a q_b⟩ against ⟨q_a⟩⟨q_b⟩ componentwise. For pure
//! pairs, separability is the reduced-descriptor identity; for mixed pairs
//! the decomposition search in [`search`] produces certificates, with the
//! partial-transpose test as the independent two-qubit oracle.

mod search;

pub use search::{
    descriptor_separability_search, joint_table, reconstruct_table, DecompositionCandidate,
    ExpectationTable, SearchBudget,
};

use num_complex::Complex64;

use crate::descriptor::{Component, Register};
use crate::error::{Error, Result};
use crate::linalg::{partial_transpose_second, CMatrix};
use crate::pauli::Pauli;
use crate::reduction::reduce;

/// Componentwise equality tolerance on exact (Clifford) paths.
pub const EXACT_TOL: f64 = 1e-10;

/// Certificate reconstruction tolerance for optimizer outputs.
pub const SEARCH_TOL: f64 = 1e-6;

/// Eigenvalue floor for the partial-transpose test.
pub const PPT_TOL: f64 = 1e-10;

/// One cell of the correlation table.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CorrelationEntry {
    /// ⟨q_{a,i} q_{b,j}⟩
    pub joint: f64,
    /// ⟨q_{a,i}⟩⟨q_{b,j}⟩
    pub product: f64,
}

impl CorrelationEntry {
    pub fn is_witness(&self) -> bool {
        (self.joint - self.product).abs() > EXACT_TOL
    }
}

/// The 3x3 componentwise comparison for one qubit pair.
#[derive(Clone, Debug)]
pub struct CorrelationReport {
    pub pair: (usize, usize),
    pub table: [[CorrelationEntry; 3]; 3],
    pub correlated: bool,
    pub witnesses: Vec<(Component, Component)>,
}

/// Compare ⟨q_a q_b⟩ with ⟨q_a⟩⟨q_b⟩ on all nine component pairs.
pub fn correlation_test(r: &Register, a: usize, b: usize) -> Result<CorrelationReport> {
    if a == b {
        return Err(Error::Invalid(format!("correlation pair needs distinct qubits, got ({a}, {b})")));
    }
    let da = r.descriptor(a)?;
    let db = r.descriptor(b)?;
    let singles_a: Vec<f64> =
        Component::ALL.iter().map(|&c| real_expectation(da.component(c).expectation_zero())).collect();
    let singles_b: Vec<f64> =
        Component::ALL.iter().map(|&c| real_expectation(db.component(c).expectation_zero())).collect();

    let mut table = [[CorrelationEntry { joint: 0.0, product: 0.0 }; 3]; 3];
    let mut witnesses = Vec::new();
    for (i, &ci) in Component::ALL.iter().enumerate() {
        for (j, &cj) in Component::ALL.iter().enumerate() {
            let joint = real_expectation(
                da.component(ci).multiply(db.component(cj))?.expectation_zero(),
            );
            let entry = CorrelationEntry { joint, product: singles_a[i] * singles_b[j] };
            table[i][j] = entry;
            if entry.is_witness() {
                witnesses.push((ci, cj));
            }
        }
    }
    Ok(CorrelationReport { pair: (a, b), correlated: !witnesses.is_empty(), table, witnesses })
}

fn real_expectation(v: Complex64) -> f64 {
    debug_assert!(v.im.abs() < 1e-9, "expectation has imaginary part {}", v.im);
    v.re
}

/// Pure-state separability: ⟨q_a q_b⟩ = ⟨[q_a]_a [q_b]_b⟩ on all nine
/// component pairs. Requires the joint subsystem {a, b} to be pure.
pub fn pure_separability_test(r: &Register, a: usize, b: usize) -> Result<bool> {
    let purity = r.purity(&[a, b])?;
    if (purity - 1.0).abs() > crate::reduction::PURITY_TOL {
        return Err(Error::SubsystemNotPure { subset: vec![a, b], purity });
    }
    let ra = reduce(r.descriptor(a)?, &[a])?;
    let rb = reduce(r.descriptor(b)?, &[b])?;
    for ci in Component::ALL {
        for cj in Component::ALL {
            let full = r
                .descriptor(a)?
                .component(ci)
                .multiply(r.descriptor(b)?.component(cj))?
                .expectation_zero();
            let red = ra.component(ci).multiply(rb.component(cj))?.expectation_zero();
            if (full - red).norm() > EXACT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Ppt,
    DescriptorSearch,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Entangled,
    Inconclusive,
}

/// Verdict of either separability route.
#[derive(Clone, Debug)]
pub struct SeparabilityVerdict {
    pub method: Method,
    pub separable: Separability,
    pub certificate: Option<DecompositionCandidate>,
    /// PPT: smallest partial-transpose eigenvalue. Search: certificate
    /// reconstruction error (or best residual reached on failure).
    pub residual: f64,
    /// On search failures, what the independent oracle said.
    pub ppt_cross_check: Option<Separability>,
}

/// Peres-Horodecki test: a two-qubit state is separable exactly when its
/// partial transpose has no negative eigenvalue.
pub fn ppt_separability(rho: &CMatrix) -> Result<SeparabilityVerdict> {
    validate_two_qubit_density(rho)?;
    let pt = partial_transpose_second(rho);
    let min_eig = pt.min_eigenvalue();
    let separable = if min_eig < -PPT_TOL { Separability::Entangled } else { Separability::Separable };
    Ok(SeparabilityVerdict {
        method: Method::Ppt,
        separable,
        certificate: None,
        residual: min_eig,
        ppt_cross_check: None,
    })
}

pub fn validate_two_qubit_density(rho: &CMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::MalformedMatrix(format!("expected a 4x4 matrix, got {0}x{0}", rho.dim())));
    }
    let herm = rho.max_abs_diff_hermitian();
    if herm > PPT_TOL {
        return Err(Error::MalformedMatrix(format!("not Hermitian (max deviation {herm:.2e})")));
    }
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > PPT_TOL {
        return Err(Error::MalformedMatrix(format!("trace {trace} is not 1")));
    }
    let min_eig = rho.min_eigenvalue();
    if min_eig < -PPT_TOL {
        return Err(Error::MalformedMatrix(format!("not positive semidefinite (min eigenvalue {min_eig:.2e})")));
    }
    Ok(())
}

/// Build a two-qubit density matrix from a 4x4 expectation table,
/// rho = (1/4) sum T[i][j] sigma_i ⊗ sigma_j.
pub fn density_from_table(table: &ExpectationTable) -> CMatrix {
    let sigmas = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut rho = CMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            if table[i][j].abs() == 0.0 {
                continue;
            }
            let term = sigmas[i].matrix().kron(&sigmas[j].matrix());
            rho = rho.add(&term.scale(Complex64::new(table[i][j] / 4.0, 0.0)));
        }
    }
    rho
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Attribution {
    /// The correlation survives reduction to {self, purifier}: it is carried
    /// by past interaction with the third party.
    ThirdParty,
    /// The correlation vanishes under reduction: it came from direct
    /// interaction between the pair.
    Direct,
}

#[derive(Clone, Debug)]
pub struct WitnessAttribution {
    pub comps: (Component, Component),
    pub full: CorrelationEntry,
    pub reduced: CorrelationEntry,
    pub attribution: Attribution,
}

/// Attribution outcome; `entries` is empty when the pair is uncorrelated
/// (the explicit no-attribution case).
#[derive(Clone, Debug)]
pub struct AttributionReport {
    pub pair: (usize, usize),
    pub purifier: usize,
    pub correlated: bool,
    pub entries: Vec<WitnessAttribution>,
}

/// Classify each correlation witness by recomputing the table with
/// descriptors reduced to {self, purifier}.
pub fn correlation_attribution(
    r: &Register,
    a: usize,
    b: usize,
    purifier: usize,
) -> Result<AttributionReport> {
    if purifier == a || purifier == b {
        return Err(Error::Invalid(format!(
            "purifier {purifier} must be distinct from the pair ({a}, {b})"
        )));
    }
    let report = correlation_test(r, a, b)?;
    if !report.correlated {
        return Ok(AttributionReport { pair: (a, b), purifier, correlated: false, entries: Vec::new() });
    }
    let ra = reduce(r.descriptor(a)?, &[a, purifier])?;
    let rb = reduce(r.descriptor(b)?, &[b, purifier])?;
    let red_singles_a: Vec<f64> = Component::ALL
        .iter()
        .map(|&c| real_expectation(ra.component(c).expectation_zero()))
        .collect();
    let red_singles_b: Vec<f64> = Component::ALL
        .iter()
        .map(|&c| real_expectation(rb.component(c).expectation_zero()))
        .collect();

    let mut entries = Vec::new();
    for &(ci, cj) in &report.witnesses {
        let joint = real_expectation(
            ra.component(ci).multiply(rb.component(cj))?.expectation_zero(),
        );
        let reduced = CorrelationEntry {
            joint,
            product: red_singles_a[ci.index()] * red_singles_b[cj.index()],
        };
        let attribution =
            if reduced.is_witness() { Attribution::ThirdParty } else { Attribution::Direct };
        entries.push(WitnessAttribution {
            comps: (ci, cj),
            full: report.table[ci.index()][cj.index()],
            reduced,
            attribution,
        });
    }
    Ok(AttributionReport { pair: (a, b), purifier, correlated: true, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};

    fn bell() -> Register {
        Register::from_circuit(&Circuit::with_gates(2, vec![Gate::H(1), Gate::Cnot(1, 2)]).unwrap())
            .unwrap()
    }

    fn ghz() -> Register {
        Register::from_circuit(
            &Circuit::with_gates(3, vec![Gate::H(1), Gate::Cnot(1, 2), Gate::Cnot(1, 3)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fresh_register_is_uncorrelated() {
        let reg = Register::fresh(2).unwrap();
        let rep = correlation_test(&reg, 1, 2).unwrap();
        assert!(!rep.correlated);
        assert!(rep.witnesses.is_empty());
    }

    #[test]
    fn ghz_pair_one_two_is_zz_correlated() {
        let rep = correlation_test(&ghz(), 1, 2).unwrap();
        assert!(rep.correlated);
        assert_eq!(rep.witnesses, vec![(Component::Z, Component::Z)]);
        let e = &rep.table[2][2];
        assert_eq!(e.joint, 1.0);
        assert_eq!(e.product, 0.0);
    }

    #[test]
    fn bell_witnesses_include_xx_and_zz() {
        let rep = correlation_test(&bell(), 1, 2).unwrap();
        assert!(rep.witnesses.contains(&(Component::X, Component::X)));
        assert!(rep.witnesses.contains(&(Component::Z, Component::Z)));
    }

    #[test]
    fn pure_separability_examples() {
        let fresh = Register::fresh(2).unwrap();
        assert!(pure_separability_test(&fresh, 1, 2).unwrap());

        assert!(!pure_separability_test(&bell(), 1, 2).unwrap());

        let hh = Register::from_circuit(
            &Circuit::with_gates(2, vec![Gate::H(1), Gate::H(2)]).unwrap(),
        )
        .unwrap();
        assert!(pure_separability_test(&hh, 1, 2).unwrap());
    }

    #[test]
    fn pure_test_rejects_mixed_pairs() {
        match pure_separability_test(&ghz(), 1, 2) {
            Err(Error::SubsystemNotPure { purity, .. }) => assert!((purity - 0.5).abs() < 1e-10),
            other => panic!("expected purity error, got {other:?}"),
        }
    }

    #[test]
    fn separable_pure_pairs_are_uncorrelated() {
        // Eq-style implication: wherever the pure separability identity
        // holds, the correlation table shows no witnesses.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x715);
        let mut seen_separable = 0;
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let depth = rng.gen_range(0..=12);
            let circ = crate::testkit::random_clifford_circuit(&mut rng, n, depth);
            let reg = Register::from_circuit(&circ).unwrap();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    let Ok(sep) = pure_separability_test(&reg, a, b) else { continue };
                    if sep {
                        seen_separable += 1;
                        assert!(!correlation_test(&reg, a, b).unwrap().correlated);
                    }
                }
            }
        }
        assert!(seen_separable > 0);
    }

    #[test]
    fn ppt_maximally_mixed_is_separable() {
        let rho = CMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let v = ppt_separability(&rho).unwrap();
        assert_eq!(v.separable, Separability::Separable);
    }

    #[test]
    fn ppt_bell_projector_is_entangled() {
        let rho = bell().density_matrix(&[1, 2]).unwrap();
        let v = ppt_separability(&rho).unwrap();
        assert_eq!(v.separable, Separability::Entangled);
        assert!((v.residual + 0.5).abs() < 1e-10, "min PT eigenvalue {}", v.residual);
    }

    fn werner(p: f64) -> CMatrix {
        let bell_rho = bell().density_matrix(&[1, 2]).unwrap();
        bell_rho
            .scale(Complex64::new(p, 0.0))
            .add(&CMatrix::identity(4).scale(Complex64::new((1.0 - p) / 4.0, 0.0)))
    }

    #[test]
    fn ppt_werner_states() {
        assert_eq!(ppt_separability(&werner(0.25)).unwrap().separable, Separability::Separable);
        assert_eq!(ppt_separability(&werner(0.5)).unwrap().separable, Separability::Entangled);
        // Min PT eigenvalue is (1-3p)/4.
        let v = ppt_separability(&werner(0.5)).unwrap();
        assert!((v.residual - (1.0 - 1.5) / 4.0).abs() < 1e-10);
    }

    #[test]
    fn ppt_rejects_malformed_input() {
        let not_density = CMatrix::identity(4);
        assert!(matches!(ppt_separability(&not_density), Err(Error::MalformedMatrix(_))));
        let wrong_dim = CMatrix::identity(2);
        assert!(ppt_separability(&wrong_dim).is_err());
    }

    #[test]
    fn werner_boundary_by_bisection() {
        let mut lo = 0.0f64; // separable side
        let mut hi = 1.0f64; // entangled side
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match ppt_separability(&werner(mid)).unwrap().separable {
                Separability::Separable => lo = mid,
                _ => hi = mid,
            }
        }
        let boundary = 0.5 * (lo + hi);
        assert!((boundary - 1.0 / 3.0).abs() <= 0.01, "boundary {boundary}");
    }

    #[test]
    fn attribution_ghz_pair_two_three_is_third_party() {
        let rep = correlation_attribution(&ghz(), 2, 3, 1).unwrap();
        assert!(rep.correlated);
        assert_eq!(rep.entries.len(), 1);
        let e = &rep.entries[0];
        assert_eq!(e.comps, (Component::Z, Component::Z));
        assert_eq!(e.attribution, Attribution::ThirdParty);
        assert_eq!(e.reduced.joint, 1.0);
    }

    #[test]
    fn attribution_ghz_pair_one_two_is_direct() {
        let rep = correlation_attribution(&ghz(), 1, 2, 3).unwrap();
        assert_eq!(rep.entries.len(), 1);
        let e = &rep.entries[0];
        assert_eq!(e.attribution, Attribution::Direct);
        assert_eq!(e.full.joint, 1.0);
        assert_eq!(e.reduced.joint, 0.0);
    }

    #[test]
    fn attribution_uncorrelated_pair_reports_nothing() {
        let reg = Register::fresh(3).unwrap();
        let rep = correlation_attribution(&reg, 1, 2, 3).unwrap();
        assert!(!rep.correlated);
        assert!(rep.entries.is_empty());
    }

    #[test]
    fn attribution_classifies_every_witness() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xa77);
        for _ in 0..40 {
            let depth = rng.gen_range(1..=14);
            let circ = crate::testkit::random_clifford_circuit(&mut rng, 3, depth);
            let reg = Register::from_circuit(&circ).unwrap();
            let rep = correlation_test(&reg, 1, 2).unwrap();
            let att = correlation_attribution(&reg, 1, 2, 3).unwrap();
            assert_eq!(att.entries.len(), rep.witnesses.len());
        }
    }
}
