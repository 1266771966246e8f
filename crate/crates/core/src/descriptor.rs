//! Descriptor creation, evolution, combination, and density-matrix
//! reconstruction.
//!
//! Each qubit `a` carries a triple of operators (q_x, q_y, q_z); at time zero
//! these are the single-letter strings with the letter at slot `a`. A circuit
//! evolves every triple by conjugation with the accumulated unitary,
//! processed gate by gate: a new gate rewrites the triples of the qubits it
//! touches as products of the *current* triples, and leaves every other
//! qubit's triple untouched. Named Clifford kinds map single strings to
//! single strings exactly; dense unitaries re-expand each component in the
//! Pauli basis of the gate support with coefficients pruned at 1e-12.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{Pauli, PauliString, PauliSum, DEFAULT_DENSE_CAP};

/// One of the three descriptor components.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    X,
    Y,
    Z,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::X, Component::Y, Component::Z];

    pub fn index(self) -> usize {
        match self {
            Component::X => 0,
            Component::Y => 1,
            Component::Z => 2,
        }
    }

    pub fn label(self) -> char {
        match self {
            Component::X => 'x',
            Component::Y => 'y',
            Component::Z => 'z',
        }
    }

    pub fn letter(self) -> Pauli {
        match self {
            Component::X => Pauli::X,
            Component::Y => Pauli::Y,
            Component::Z => Pauli::Z,
        }
    }
}

/// The (q_x, q_y, q_z) triple attached to one qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct Descriptor {
    qubit: usize,
    n: usize,
    comps: [PauliSum; 3],
    generation: u64,
}

impl Descriptor {
    /// The time-zero descriptor: identity everywhere except the single
    /// letter at slot `a`.
    pub fn initial(a: usize, n: usize) -> Result<Self> {
        if a < 1 || a > n {
            return Err(Error::IndexOutOfRange { index: a, n });
        }
        let comp = |p: Pauli| PauliSum::from_string(&PauliString::single(p, a, n));
        Ok(Descriptor {
            qubit: a,
            n,
            comps: [comp(Pauli::X), comp(Pauli::Y), comp(Pauli::Z)],
            generation: 0,
        })
    }

    /// Build a descriptor directly from component sums (fixture tables).
    pub fn from_components(qubit: usize, comps: [PauliSum; 3]) -> Self {
        let n = comps[0].n();
        Descriptor { qubit, n, comps, generation: 0 }
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn component(&self, c: Component) -> &PauliSum {
        &self.comps[c.index()]
    }

    pub fn components(&self) -> &[PauliSum; 3] {
        &self.comps
    }

    /// Component by table index: 0 is the implicit identity, 1..=3 are x, y, z.
    pub fn table_component(&self, idx: usize) -> PauliSum {
        match idx {
            0 => PauliSum::identity(self.n),
            1..=3 => self.comps[idx - 1].clone(),
            _ => panic!("component index {idx} outside 0..=3"),
        }
    }

    /// q_x q_y = i q_z and cyclic permutations, within `tol`.
    pub fn algebra_holds(&self, tol: f64) -> bool {
        let i = Complex64::new(0.0, 1.0);
        let pairs = [
            (Component::X, Component::Y, Component::Z),
            (Component::Y, Component::Z, Component::X),
            (Component::Z, Component::X, Component::Y),
        ];
        pairs.iter().all(|&(a, b, c)| {
            let prod = self.component(a).multiply(self.component(b)).unwrap();
            prod.max_abs_diff(&self.component(c).scale(i)) <= tol
        })
    }

    /// Every component is a single Pauli string with a unit coefficient.
    pub fn is_single_string(&self) -> bool {
        self.comps.iter().all(|c| c.as_single_string().is_some())
    }
}

/// All descriptors of an n-qubit register, evolved by the same circuit
/// prefix. Evolution is pure: applying a gate produces a new register.
#[derive(Clone, Debug, PartialEq)]
pub struct Register {
    n: usize,
    descriptors: Vec<Descriptor>,
    generation: u64,
    dense_cap: usize,
}

impl Register {
    pub fn fresh(n: usize) -> Result<Self> {
        let descriptors = (1..=n).map(|a| Descriptor::initial(a, n)).collect::<Result<_>>()?;
        Ok(Register { n, descriptors, generation: 0, dense_cap: DEFAULT_DENSE_CAP })
    }

    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        Register::fresh(circuit.n)?.apply_circuit(circuit)
    }

    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn descriptor(&self, a: usize) -> Result<&Descriptor> {
        if a < 1 || a > self.n {
            return Err(Error::IndexOutOfRange { index: a, n: self.n });
        }
        Ok(&self.descriptors[a - 1])
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    /// Component sum by qubit and table index (0 = identity).
    pub fn component_sum(&self, a: usize, idx: usize) -> Result<PauliSum> {
        Ok(self.descriptor(a)?.table_component(idx))
    }

    /// Conjugate every descriptor by one more gate.
    pub fn apply_gate(&self, gate: &Gate) -> Result<Register> {
        gate.validate(self.n)?;
        let mut out = self.clone();
        out.generation += 1;
        for d in out.descriptors.iter_mut() {
            d.generation = out.generation;
        }

        let old = |a: usize, c: Component| self.descriptors[a - 1].component(c).clone();
        let minus = Complex64::new(-1.0, 0.0);

        match gate {
            Gate::H(a) => {
                out.set_components(
                    *a,
                    [old(*a, Component::Z), old(*a, Component::Y).scale(minus), old(*a, Component::X)],
                );
            }
            Gate::X(a) => {
                out.set_components(
                    *a,
                    [
                        old(*a, Component::X),
                        old(*a, Component::Y).scale(minus),
                        old(*a, Component::Z).scale(minus),
                    ],
                );
            }
            Gate::Y(a) => {
                out.set_components(
                    *a,
                    [
                        old(*a, Component::X).scale(minus),
                        old(*a, Component::Y),
                        old(*a, Component::Z).scale(minus),
                    ],
                );
            }
            Gate::Z(a) => {
                out.set_components(
                    *a,
                    [
                        old(*a, Component::X).scale(minus),
                        old(*a, Component::Y).scale(minus),
                        old(*a, Component::Z),
                    ],
                );
            }
            Gate::S(a) => {
                // S† X S = -Y, S† Y S = X, S† Z S = Z.
                out.set_components(
                    *a,
                    [old(*a, Component::Y).scale(minus), old(*a, Component::X), old(*a, Component::Z)],
                );
            }
            Gate::Cnot(c, t) => {
                let xt = old(*t, Component::X);
                let zc = old(*c, Component::Z);
                out.set_components(
                    *c,
                    [
                        old(*c, Component::X).multiply(&xt)?,
                        old(*c, Component::Y).multiply(&xt)?,
                        old(*c, Component::Z),
                    ],
                );
                out.set_components(
                    *t,
                    [
                        old(*t, Component::X),
                        zc.multiply(&old(*t, Component::Y))?,
                        zc.multiply(&old(*t, Component::Z))?,
                    ],
                );
            }
            Gate::Cz(a, b) => {
                let za = old(*a, Component::Z);
                let zb = old(*b, Component::Z);
                out.set_components(
                    *a,
                    [
                        old(*a, Component::X).multiply(&zb)?,
                        old(*a, Component::Y).multiply(&zb)?,
                        old(*a, Component::Z),
                    ],
                );
                out.set_components(
                    *b,
                    [
                        za.multiply(&old(*b, Component::X))?,
                        za.multiply(&old(*b, Component::Y))?,
                        old(*b, Component::Z),
                    ],
                );
            }
            Gate::Swap(a, b) => {
                out.set_components(*a, self.descriptors[*b - 1].comps.clone());
                out.set_components(*b, self.descriptors[*a - 1].comps.clone());
            }
            Gate::DenseUnitary { targets, matrix } => {
                self.apply_dense(&mut out, targets, matrix)?;
            }
        }
        Ok(out)
    }

    fn set_components(&mut self, a: usize, comps: [PauliSum; 3]) {
        self.descriptors[a - 1].comps = comps;
    }

    /// General conjugation path: expand U† sigma U over the gate support in
    /// the Pauli basis, then substitute the current images of the support
    /// letters.
    fn apply_dense(&self, out: &mut Register, targets: &[usize], matrix: &CMatrix) -> Result<()> {
        let k = targets.len();
        let dim = 1usize << k;
        let u_dag = matrix.adjoint();

        // Image of each local basis string under the current register state.
        let local_strings: Vec<Vec<Pauli>> = (0..dim * dim)
            .map(|code| {
                (0..k)
                    .map(|j| {
                        [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(code >> (2 * j)) & 3]
                    })
                    .collect()
            })
            .collect();
        let images: Vec<PauliSum> = local_strings
            .iter()
            .map(|letters| {
                let mut acc = PauliSum::identity(self.n);
                for (j, &p) in letters.iter().enumerate() {
                    let factor = match p {
                        Pauli::I => continue,
                        Pauli::X => self.descriptors[targets[j] - 1].component(Component::X),
                        Pauli::Y => self.descriptors[targets[j] - 1].component(Component::Y),
                        Pauli::Z => self.descriptors[targets[j] - 1].component(Component::Z),
                    };
                    acc = acc.multiply(factor)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let local_dense: Vec<CMatrix> = local_strings
            .iter()
            .map(|letters| {
                let mut m = CMatrix::identity(1);
                for &p in letters {
                    m = m.kron(&p.matrix());
                }
                m
            })
            .collect();

        for (j, &a) in targets.iter().enumerate() {
            let mut new_comps: Vec<PauliSum> = Vec::with_capacity(3);
            for comp in Component::ALL {
                // sigma of this component at local position j.
                let mut letters = vec![Pauli::I; k];
                letters[j] = comp.letter();
                let mut sigma = CMatrix::identity(1);
                for &p in &letters {
                    sigma = sigma.kron(&p.matrix());
                }
                let conj = u_dag.matmul(&sigma).matmul(matrix);
                let mut acc = PauliSum::zero(self.n);
                let norm = 1.0 / dim as f64;
                for (code, basis) in local_dense.iter().enumerate() {
                    let coeff = basis.matmul(&conj).trace() * norm;
                    if coeff.norm() < crate::pauli::PRUNE_EPS {
                        continue;
                    }
                    acc = acc.add(&images[code].scale(coeff))?;
                }
                new_comps.push(acc);
            }
            out.set_components(a, [new_comps[0].clone(), new_comps[1].clone(), new_comps[2].clone()]);
        }
        Ok(())
    }

    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Register> {
        if circuit.n != self.n {
            return Err(Error::LengthMismatch { left: circuit.n, right: self.n });
        }
        let mut reg = self.clone();
        for gate in &circuit.gates {
            reg = reg.apply_gate(gate)?;
        }
        Ok(reg)
    }

    /// Density matrix of a qubit subset, reconstructed from component
    /// expectation values with normalization 1/2^k. The subset is sorted
    /// ascending and the row/column index uses the same order, first listed
    /// qubit most significant.
    pub fn density_matrix(&self, subset: &[usize]) -> Result<CMatrix> {
        let keep = normalize_subset(subset, self.n)?;
        if keep.len() > self.dense_cap {
            return Err(Error::DenseCapExceeded { requested: keep.len(), cap: self.dense_cap });
        }
        let triples: Vec<&Descriptor> =
            keep.iter().map(|&a| &self.descriptors[a - 1]).collect();
        reconstruct_density(&triples)
    }

    /// Tr(rho_subset^2).
    pub fn purity(&self, subset: &[usize]) -> Result<f64> {
        let rho = self.density_matrix(subset)?;
        Ok(rho.matmul(&rho).trace().re)
    }
}

fn normalize_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = subset.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    for &a in &keep {
        if a < 1 || a > n {
            return Err(Error::IndexOutOfRange { index: a, n });
        }
    }
    Ok(keep)
}

/// Ordered product of selected descriptor components. All descriptors must
/// share the same evolution history.
pub fn joint(parts: &[(&Descriptor, Component)]) -> Result<PauliSum> {
    let Some(((first, _), rest)) = parts.split_first() else {
        return Err(Error::EmptyKeep);
    };
    for (d, _) in rest {
        if d.generation != first.generation {
            return Err(Error::MixedHistories { left: first.generation, right: d.generation });
        }
        if d.n != first.n {
            return Err(Error::LengthMismatch { left: first.n, right: d.n });
        }
    }
    let mut acc = PauliSum::identity(first.n);
    for (d, c) in parts {
        acc = acc.multiply(d.component(*c))?;
    }
    Ok(acc)
}

/// Reconstruct the density matrix encoded by a list of descriptor triples:
/// rho = 2^-k * sum over component assignments of Re<product> times the
/// matching sigma tensor. Products run in the order the triples are listed.
/// For unitary-evolved registers the components commute and the real part
/// is exact; for raw fixture tables it makes the output Hermitian by
/// construction (the symmetrized operator product).
pub fn reconstruct_density(triples: &[&Descriptor]) -> Result<CMatrix> {
    let k = triples.len();
    if k == 0 {
        return Err(Error::EmptyKeep);
    }
    let dim = 1usize << k;
    let mut rho = CMatrix::zeros(dim);
    let norm = 1.0 / dim as f64;
    let mut assignment = vec![0usize; k];
    loop {
        // Expectation of the ordered component product for this assignment.
        let mut prod = PauliSum::identity(triples[0].n());
        for (j, &idx) in assignment.iter().enumerate() {
            if idx > 0 {
                prod = prod.multiply(triples[j].component(Component::ALL[idx - 1]))?;
            }
        }
        let coeff = prod.expectation_zero().re * norm;
        if coeff.abs() > 0.0 {
            let mut sigma = CMatrix::identity(1);
            for &idx in &assignment {
                let m = match idx {
                    0 => Pauli::I,
                    1 => Pauli::X,
                    2 => Pauli::Y,
                    _ => Pauli::Z,
                }
                .matrix();
                sigma = sigma.kron(&m);
            }
            rho = rho.add(&sigma.scale(Complex64::new(coeff, 0.0)));
        }
        // Advance the mixed-radix assignment counter.
        let mut j = 0;
        loop {
            assignment[j] += 1;
            if assignment[j] < 4 {
                break;
            }
            assignment[j] = 0;
            j += 1;
            if j == k {
                return Ok(rho);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn s(text: &str) -> PauliString {
        PauliString::parse(text).unwrap()
    }

    fn assert_comp(d: &Descriptor, c: Component, want: &str) {
        let got = d.component(c).as_single_string().unwrap_or_else(|| {
            panic!("component {} of q{} is not a single string: {}", c.label(), d.qubit(), d.component(c))
        });
        assert_eq!(got, s(want), "component {} of q{}", c.label(), d.qubit());
    }

    #[test]
    fn initial_descriptors() {
        let d = Descriptor::initial(1, 1).unwrap();
        assert_comp(&d, Component::X, "+.X");
        assert_comp(&d, Component::Y, "+.Y");
        assert_comp(&d, Component::Z, "+.Z");

        let d = Descriptor::initial(2, 3).unwrap();
        assert_comp(&d, Component::X, "+.IXI");
        assert_comp(&d, Component::Y, "+.IYI");
        assert_comp(&d, Component::Z, "+.IZI");

        let d = Descriptor::initial(3, 3).unwrap();
        assert_comp(&d, Component::Z, "+.IIZ");

        assert!(Descriptor::initial(4, 3).is_err());
        assert!(Descriptor::initial(0, 3).is_err());
    }

    #[test]
    fn hadamard_matches_dense_conjugation() {
        let reg = Register::fresh(1).unwrap().apply_gate(&Gate::H(1)).unwrap();
        let d = reg.descriptor(1).unwrap();
        assert_comp(d, Component::X, "+.Z");
        assert_comp(d, Component::Y, "-.Y");
        assert_comp(d, Component::Z, "+.X");

        // Independent dense route: U† sigma U.
        let u = Gate::H(1).local_matrix();
        for (c, sigma) in [(Component::X, Pauli::X), (Component::Y, Pauli::Y), (Component::Z, Pauli::Z)] {
            let want = u.adjoint().matmul(&sigma.matrix()).matmul(&u);
            let got = d.component(c).to_dense(10).unwrap();
            assert!(got.max_abs_diff(&want) < 1e-12);
        }
    }

    fn bell_register() -> Register {
        Register::from_circuit(
            &Circuit::with_gates(2, vec![Gate::H(1), Gate::Cnot(1, 2)]).unwrap(),
        )
        .unwrap()
    }

    fn ghz_register() -> Register {
        Register::from_circuit(
            &Circuit::with_gates(3, vec![Gate::H(1), Gate::Cnot(1, 2), Gate::Cnot(1, 3)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn bell_descriptor_table() {
        let reg = bell_register();
        let q1 = reg.descriptor(1).unwrap();
        assert_comp(q1, Component::X, "+.ZX");
        assert_comp(q1, Component::Y, "-.YX");
        assert_comp(q1, Component::Z, "+.XI");
        let q2 = reg.descriptor(2).unwrap();
        assert_comp(q2, Component::X, "+.IX");
        assert_comp(q2, Component::Y, "+.XY");
        assert_comp(q2, Component::Z, "+.XZ");
    }

    #[test]
    fn ghz_descriptor_table() {
        let reg = ghz_register();
        let q1 = reg.descriptor(1).unwrap();
        assert_comp(q1, Component::X, "+.ZXX");
        assert_comp(q1, Component::Y, "-.YXX");
        assert_comp(q1, Component::Z, "+.XII");
        let q2 = reg.descriptor(2).unwrap();
        assert_comp(q2, Component::X, "+.IXI");
        assert_comp(q2, Component::Y, "+.XYI");
        assert_comp(q2, Component::Z, "+.XZI");
        let q3 = reg.descriptor(3).unwrap();
        assert_comp(q3, Component::X, "+.IIX");
        assert_comp(q3, Component::Y, "+.XIY");
        assert_comp(q3, Component::Z, "+.XIZ");
    }

    #[test]
    fn gates_only_touch_their_support() {
        let reg = Register::from_circuit(
            &Circuit::with_gates(3, vec![Gate::H(1), Gate::Cnot(1, 2)]).unwrap(),
        )
        .unwrap();
        let before = reg.descriptor(2).unwrap().components().clone();
        let after = reg.apply_gate(&Gate::Cnot(1, 3)).unwrap();
        assert_eq!(after.descriptor(2).unwrap().components(), &before);
    }

    #[test]
    fn identity_dense_unitary_is_a_no_op() {
        let reg = ghz_register();
        let gate = Gate::dense_unitary(vec![1, 3], CMatrix::identity(4)).unwrap();
        let out = reg.apply_gate(&gate).unwrap();
        for a in 1..=3 {
            assert_eq!(
                out.descriptor(a).unwrap().components(),
                reg.descriptor(a).unwrap().components()
            );
        }
    }

    #[test]
    fn dense_gate_agrees_with_named_gate() {
        // A CNOT supplied as a dense matrix must evolve descriptors exactly
        // like the named kind.
        let base = bell_register();
        let named = base.apply_gate(&Gate::Cnot(2, 1)).unwrap();
        let dense = base
            .apply_gate(&Gate::dense_unitary(vec![2, 1], Gate::Cnot(2, 1).local_matrix()).unwrap())
            .unwrap();
        for a in 1..=2 {
            for c in Component::ALL {
                let diff = named
                    .descriptor(a)
                    .unwrap()
                    .component(c)
                    .max_abs_diff(dense.descriptor(a).unwrap().component(c));
                assert!(diff < 1e-12, "q{a} {} differs by {diff}", c.label());
            }
        }
    }

    #[test]
    fn joint_products() {
        let reg = ghz_register();
        let q1 = reg.descriptor(1).unwrap();
        let q2 = reg.descriptor(2).unwrap();
        let q3 = reg.descriptor(3).unwrap();

        let zz = joint(&[(q1, Component::Z), (q2, Component::Z)]).unwrap();
        assert_eq!(zz.as_single_string().unwrap(), s("+.IZI"));

        let same = joint(&[(q2, Component::X), (q2, Component::X)]).unwrap();
        assert_eq!(same.as_single_string().unwrap(), s("+.III"));

        let xx = joint(&[(q2, Component::X), (q3, Component::X)]).unwrap();
        assert_eq!(xx.as_single_string().unwrap(), s("+.IXX"));
    }

    #[test]
    fn joint_rejects_mixed_histories() {
        let reg = ghz_register();
        let older = bell_register();
        // Different generation counters: 3 gates vs 2 gates.
        let out = joint(&[
            (reg.descriptor(1).unwrap(), Component::Z),
            (older.descriptor(2).unwrap(), Component::Z),
        ]);
        assert!(matches!(out, Err(Error::MixedHistories { .. })));
    }

    #[test]
    fn density_matrix_examples() {
        let fresh = Register::fresh(2).unwrap();
        let rho = fresh.density_matrix(&[1]).unwrap();
        let mut want = CMatrix::zeros(2);
        want.set(0, 0, Complex64::new(1.0, 0.0));
        assert!(rho.max_abs_diff(&want) < 1e-12);

        let bell = bell_register();
        let rho = bell.density_matrix(&[1, 2]).unwrap();
        let mut want = CMatrix::zeros(4);
        for &(r, c) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            want.set(r, c, Complex64::new(0.5, 0.0));
        }
        assert!(rho.max_abs_diff(&want) < 1e-12);

        let ghz = ghz_register();
        let rho = ghz.density_matrix(&[1, 3]).unwrap();
        let mut want = CMatrix::zeros(4);
        want.set(0, 0, Complex64::new(0.5, 0.0));
        want.set(3, 3, Complex64::new(0.5, 0.0));
        assert!(rho.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn density_matrix_matches_oracle_partial_trace() {
        let circ =
            Circuit::with_gates(3, vec![Gate::H(1), Gate::Cnot(1, 2), Gate::Cnot(1, 3)]).unwrap();
        let reg = Register::from_circuit(&circ).unwrap();
        let state = oracle::simulate(&circ).unwrap();
        for subset in [vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
            let a = reg.density_matrix(&subset).unwrap();
            let b = state.reduced_density(&subset).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12, "subset {subset:?}");
        }
    }

    #[test]
    fn clifford_paths_stay_single_string_and_preserve_algebra() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..30 {
            let n = rng.gen_range(1..=5);
            let mut reg = Register::fresh(n).unwrap();
            for _ in 0..rng.gen_range(1..=20) {
                let a = rng.gen_range(1..=n);
                let gate = match rng.gen_range(0..8) {
                    0 => Gate::H(a),
                    1 => Gate::S(a),
                    2 => Gate::X(a),
                    3 => Gate::Y(a),
                    4 => Gate::Z(a),
                    _ if n >= 2 => {
                        let mut b = rng.gen_range(1..=n);
                        while b == a {
                            b = rng.gen_range(1..=n);
                        }
                        match rng.gen_range(0..3) {
                            0 => Gate::Cnot(a, b),
                            1 => Gate::Cz(a, b),
                            _ => Gate::Swap(a, b),
                        }
                    }
                    _ => Gate::H(a),
                };
                reg = reg.apply_gate(&gate).unwrap();
                for d in reg.descriptors() {
                    assert!(d.is_single_string(), "clifford closure violated");
                    assert!(d.algebra_holds(1e-12), "algebra violated after {gate}");
                }
            }
        }
    }

    #[test]
    fn dense_path_preserves_algebra() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xd00d);
        for _ in 0..10 {
            let n = 3;
            let mut reg = Register::fresh(n).unwrap();
            for _ in 0..3 {
                let k = rng.gen_range(1..=2usize);
                let mut targets: Vec<usize> = (1..=n).collect();
                for i in (1..targets.len()).rev() {
                    targets.swap(i, rng.gen_range(0..=i));
                }
                targets.truncate(k);
                let u = crate::testkit::random_unitary(&mut rng, 1 << k);
                reg = reg.apply_gate(&Gate::dense_unitary(targets, u).unwrap()).unwrap();
            }
            for d in reg.descriptors() {
                assert!(d.algebra_holds(1e-9));
                // Hermitian components: real coefficients.
                for c in Component::ALL {
                    assert!(d.component(c).is_hermitian(1e-10));
                }
            }
        }
    }
}
