//! Decomposition search for the generalized two-qubit separability
//! criterion: find weights and local unitaries, each acting on one pair
//! qubit together with the purifier, whose trace expression reproduces the
//! register's joint expectation table.
//!
//! The search works on the 4x4 expectation table (identity row/column
//! included, so marginals are covered by the same fit). Candidate
//! decompositions are sums of product states: seeded from the spectral
//! decomposition of rho (Schmidt factors of each eigenvector, plus the
//! product states lying in the range of a rank-2 rho, found as roots of a
//! quadratic pencil), refined by nonnegative least squares over the seed
//! dictionary, then polished by per-term rank-one fits with
//! simulated-annealing jitter to escape stalls.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::descriptor::Register;
use crate::error::{Error, Result};
use crate::linalg::{nnls, CMatrix};
use crate::pauli::Pauli;

use super::{
    density_from_table, ppt_separability, validate_two_qubit_density, Method, Separability,
    SeparabilityVerdict, SEARCH_TOL,
};

/// 4x4 table of real expectations; index 0 is the identity component.
pub type ExpectationTable = [[f64; 4]; 4];

/// Unitarity tolerance for certificate matrices.
pub const CERT_UNITARY_TOL: f64 = 1e-10;

/// Bounds on the decomposition search.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Cap on decomposition terms.
    pub max_terms: usize,
    /// Polish sweeps per attempt.
    pub max_sweeps: usize,
    /// Independent restarts merged by lowest residual.
    pub restarts: usize,
    /// Annealing jitter steps per attempt.
    pub anneal_steps: usize,
    /// RNG seed; the search is deterministic given the budget.
    pub seed: u64,
    /// Certificate acceptance tolerance on the reconstructed table.
    pub tolerance: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_terms: 8,
            max_sweeps: 60,
            restarts: 4,
            anneal_steps: 200,
            seed: 0xD15C,
            tolerance: SEARCH_TOL,
        }
    }
}

/// Weights plus local purification unitaries proposed as a separability
/// certificate. `unitaries_a[i]` acts on (qubit a, purifier) and
/// `unitaries_b[j]` on (qubit b, purifier), pair qubit first in each
/// two-qubit factor.
#[derive(Clone, Debug)]
pub struct DecompositionCandidate {
    pub weights: Vec<Vec<f64>>,
    pub unitaries_a: Vec<CMatrix>,
    pub unitaries_b: Vec<CMatrix>,
}

impl DecompositionCandidate {
    /// Row marginals mu_i = sum_j lambda_ij.
    pub fn row_marginals(&self) -> Vec<f64> {
        self.weights.iter().map(|row| row.iter().sum()).collect()
    }

    /// Column marginals nu_j = sum_i lambda_ij.
    pub fn col_marginals(&self) -> Vec<f64> {
        let cols = self.weights.first().map_or(0, Vec::len);
        (0..cols).map(|j| self.weights.iter().map(|row| row[j]).sum()).collect()
    }

    /// True when lambda factorizes as mu_i nu_j (uncorrelated states).
    pub fn is_product_form(&self, tol: f64) -> bool {
        let mu = self.row_marginals();
        let nu = self.col_marginals();
        self.weights.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &l)| (l - mu[i] * nu[j]).abs() <= tol)
        })
    }

    /// Weight nonnegativity and normalization, unitarity of every factor.
    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.weights.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NoCertificate(format!("weights sum to {total}, not 1")));
        }
        if self.weights.iter().flatten().any(|&w| w < -1e-12) {
            return Err(Error::NoCertificate("negative weight".to_string()));
        }
        for u in self.unitaries_a.iter().chain(&self.unitaries_b) {
            if u.dim() != 4 || !u.is_unitary(CERT_UNITARY_TOL) {
                return Err(Error::NoCertificate("certificate factor is not unitary".to_string()));
            }
        }
        Ok(())
    }
}

/// Joint expectation table of a pair from the register's descriptors:
/// entry (i, j) is ⟨q_{a,i} q_{b,j}⟩ with component 0 the implicit identity.
pub fn joint_table(r: &Register, a: usize, b: usize) -> Result<ExpectationTable> {
    let mut table = [[0.0f64; 4]; 4];
    for i in 0..4 {
        let qa = r.component_sum(a, i)?;
        for j in 0..4 {
            let qb = r.component_sum(b, j)?;
            let v = qa.multiply(&qb)?.expectation_zero();
            debug_assert!(v.im.abs() < 1e-9);
            table[i][j] = v.re;
        }
    }
    Ok(table)
}

/// Independent certificate checker: evaluate the full trace expression on
/// the (a, b, purifier) space. The reconstructed entry (i, j) is
/// sum_kl lambda_kl <000| A_k^(i) B_l^(j) |000> with A on slots (0, 2) and
/// B on slots (1, 2).
pub fn reconstruct_table(cand: &DecompositionCandidate) -> (ExpectationTable, f64) {
    let sigmas = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let e0 = {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    // Precompute embedded conjugated components.
    let embed_ops = |us: &[CMatrix], positions: &[usize]| -> Vec<[CMatrix; 4]> {
        us.iter()
            .map(|u| {
                let udag = u.adjoint();
                let mut ops: Vec<CMatrix> = Vec::with_capacity(4);
                for s in sigmas {
                    let local = s.matrix().kron(&Pauli::I.matrix());
                    ops.push(udag.matmul(&local).matmul(u).embed(positions, 3));
                }
                [ops[0].clone(), ops[1].clone(), ops[2].clone(), ops[3].clone()]
            })
            .collect()
    };
    let a_ops = embed_ops(&cand.unitaries_a, &[0, 2]);
    let b_ops = embed_ops(&cand.unitaries_b, &[1, 2]);

    let mut table = [[0.0f64; 4]; 4];
    let mut max_imag = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, row) in cand.weights.iter().enumerate() {
                for (l, &lambda) in row.iter().enumerate() {
                    if lambda == 0.0 {
                        continue;
                    }
                    let v = b_ops[l][j].apply(&e0);
                    let w = a_ops[k][i].apply(&v);
                    acc += Complex64::new(lambda, 0.0) * w[0];
                }
            }
            table[i][j] = acc.re;
            max_imag = max_imag.max(acc.im.abs());
        }
    }
    (table, max_imag)
}

fn table_max_diff(a: &ExpectationTable, b: &ExpectationTable) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}

/// Search for a separability certificate of the pair (a, b) against the
/// purifier. `purifier = None` requires the pair itself to be pure; the
/// certificate then uses a trivial purifier in the ground state.
pub fn descriptor_separability_search(
    r: &Register,
    a: usize,
    b: usize,
    purifier: Option<usize>,
    budget: &SearchBudget,
) -> Result<SeparabilityVerdict> {
    if a == b || purifier == Some(a) || purifier == Some(b) {
        return Err(Error::Invalid(format!(
            "search needs distinct qubits, got pair ({a}, {b}), purifier {purifier:?}"
        )));
    }
    let mut triple = vec![a, b];
    if let Some(c) = purifier {
        triple.push(c);
    }
    let purity = r.purity(&triple)?;
    if (purity - 1.0).abs() > crate::reduction::PURITY_TOL {
        return Err(Error::NoPurification { purity });
    }

    let target = joint_table(r, a, b)?;
    let rho = density_from_table(&target);
    validate_two_qubit_density(&rho).map_err(|e| {
        Error::MalformedMatrix(format!("pair state reconstruction failed: {e}"))
    })?;
    let ppt = ppt_separability(&rho)?;

    match fit_decomposition(&target, &rho, budget) {
        (Some(terms), _) => {
            let candidate = certificate_from_terms(&terms);
            candidate.validate()?;
            let (recon, max_imag) = reconstruct_table(&candidate);
            let err = table_max_diff(&recon, &target).max(max_imag);
            if err <= budget.tolerance {
                Ok(SeparabilityVerdict {
                    method: Method::DescriptorSearch,
                    separable: Separability::Separable,
                    certificate: Some(candidate),
                    residual: err,
                    ppt_cross_check: Some(ppt.separable),
                })
            } else {
                Ok(inconclusive(err, &ppt))
            }
        }
        (None, best) => Ok(inconclusive(best, &ppt)),
    }
}

fn inconclusive(residual: f64, ppt: &SeparabilityVerdict) -> SeparabilityVerdict {
    SeparabilityVerdict {
        method: Method::DescriptorSearch,
        separable: Separability::Inconclusive,
        certificate: None,
        residual,
        ppt_cross_check: Some(ppt.separable),
    }
}

/// A pair of single-qubit states, one per side.
type StatePair = ([Complex64; 2], [Complex64; 2]);

/// One product term of a candidate decomposition.
#[derive(Clone, Debug)]
struct ProductTerm {
    weight: f64,
    state_a: [Complex64; 2],
    state_b: [Complex64; 2],
}

impl ProductTerm {
    fn bloch_a(&self) -> [f64; 3] {
        bloch_of(&self.state_a)
    }

    fn bloch_b(&self) -> [f64; 3] {
        bloch_of(&self.state_b)
    }

    fn table(&self) -> ExpectationTable {
        let ea = extended(&self.bloch_a());
        let eb = extended(&self.bloch_b());
        let mut t = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = ea[i] * eb[j];
            }
        }
        t
    }
}

fn bloch_of(state: &[Complex64; 2]) -> [f64; 3] {
    let (a0, a1) = (state[0], state[1]);
    [
        2.0 * (a0.conj() * a1).re,
        2.0 * (a0.conj() * a1).im,
        a0.norm_sqr() - a1.norm_sqr(),
    ]
}

fn extended(u: &[f64; 3]) -> [f64; 4] {
    [1.0, u[0], u[1], u[2]]
}

fn state_of_bloch(u: &[f64; 3]) -> [Complex64; 2] {
    let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt().max(1e-300);
    let (ux, uy, uz) = (u[0] / norm, u[1] / norm, u[2] / norm);
    let theta = uz.clamp(-1.0, 1.0).acos();
    let phi = uy.atan2(ux);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Fit the target table as a nonnegative mixture of product terms.
/// Returns the terms when the best residual clears the tolerance, plus the
/// best max-entry residual reached either way.
fn fit_decomposition(
    target: &ExpectationTable,
    rho: &CMatrix,
    budget: &SearchBudget,
) -> (Option<Vec<ProductTerm>>, f64) {
    let mut rng = StdRng::seed_from_u64(budget.seed);
    let seeds = seed_states(rho);
    let accept = 0.5 * budget.tolerance;

    let mut best: Option<(Vec<ProductTerm>, f64)> = None;
    for restart in 0..budget.restarts.max(1) {
        let mut atoms = seeds.clone();
        // Stabilizer-state dictionary plus random fillers.
        if restart > 0 || atoms.len() < 4 {
            atoms.extend(stabilizer_pairs());
        }
        while atoms.len() < 24 + 8 * restart {
            atoms.push((random_qubit(&mut rng), random_qubit(&mut rng)));
        }
        let (mut terms, mut residual) = weights_by_nnls(target, &atoms, budget.max_terms);
        // Polish sweeps with annealing escapes.
        let mut temperature = 0.1f64;
        let mut stall = 0usize;
        for _sweep in 0..budget.max_sweeps {
            if residual <= accept {
                break;
            }
            polish_terms(target, &mut terms);
            let new_residual = residual_of(target, &terms);
            if new_residual + 1e-15 < residual {
                residual = new_residual;
                stall = 0;
            } else {
                stall += 1;
            }
            if stall >= 3 && budget.anneal_steps > 0 {
                let (jittered, jr) =
                    anneal(target, &terms, residual, temperature, budget.anneal_steps / 4, &mut rng);
                if jr < residual {
                    terms = jittered;
                    residual = jr;
                }
                temperature *= 0.5;
                stall = 0;
            }
        }
        if best.as_ref().is_none_or(|(_, r)| residual < *r) {
            best = Some((terms, residual));
        }
        if best.as_ref().is_some_and(|(_, r)| *r <= accept) {
            break;
        }
    }

    let Some((terms, residual)) = best else {
        return (None, f64::INFINITY);
    };
    if residual <= budget.tolerance {
        (Some(normalize_terms(terms)), residual)
    } else {
        (None, residual)
    }
}

fn random_qubit(rng: &mut StdRng) -> [Complex64; 2] {
    let u = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    state_of_bloch(&u)
}

/// Six single-qubit stabilizer states on each side.
fn stabilizer_pairs() -> Vec<StatePair> {
    let states = stabilizer_states();
    let mut out = Vec::with_capacity(36);
    for sa in &states {
        for sb in &states {
            out.push((*sa, *sb));
        }
    }
    out
}

fn stabilizer_states() -> [[Complex64; 2]; 6] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
    ]
}

/// Deterministic seeds from the spectral structure of rho: Schmidt factors
/// of each eigenvector, and for rank <= 2 the product states in the range
/// found as roots of det(M1 + t M2) = 0.
fn seed_states(rho: &CMatrix) -> Vec<StatePair> {
    let (eigs, vecs) = rho.eigh();
    let kept: Vec<(f64, Vec<Complex64>)> = eigs
        .iter()
        .zip(0..4)
        .filter(|(&e, _)| e > 1e-9)
        .map(|(&e, k)| (e, vecs.column(k)))
        .collect();

    let mut out = Vec::new();
    for (_, psi) in &kept {
        let (factors, _) = schmidt_factors(psi);
        for (fa, fb) in factors {
            out.push((fa, fb));
        }
    }
    if kept.len() == 2 {
        for psi in pencil_product_states(&kept[0].1, &kept[1].1) {
            let (factors, sigma1) = schmidt_factors(&psi);
            if sigma1 < 1e-6 {
                if let Some(&(fa, fb)) = factors.first() {
                    out.push((fa, fb));
                }
            }
        }
    }
    out
}

/// Schmidt pairs of a two-qubit vector, strongest first, along with the
/// second singular value (zero means product).
fn schmidt_factors(psi: &[Complex64]) -> (Vec<StatePair>, f64) {
    // M[r][c] = amplitude of |r>_a |c>_b.
    let m = [[psi[0], psi[1]], [psi[2], psi[3]]];
    // H = M† M.
    let mut h = CMatrix::zeros(2);
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += m[k][r].conj() * m[k][c];
            }
            h.set(r, c, acc);
        }
    }
    let (eigs, vecs) = h.eigh();
    let mut pairs = Vec::new();
    let mut second = 0.0f64;
    for k in 0..2 {
        let sigma = eigs[k].max(0.0).sqrt();
        if k == 1 {
            second = sigma;
        }
        if sigma < 1e-9 {
            continue;
        }
        let v = vecs.column(k);
        let mut u = [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ];
        let norm = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        if norm < 1e-12 {
            continue;
        }
        u[0] /= norm;
        u[1] /= norm;
        let b_factor = [v[0].conj(), v[1].conj()];
        pairs.push((u, b_factor));
    }
    (pairs, second)
}

/// Product states in span{psi1, psi2}: psi1 + t psi2 with
/// det(M1 + t M2) = 0, plus psi2 itself when it is product.
fn pencil_product_states(psi1: &[Complex64], psi2: &[Complex64]) -> Vec<Vec<Complex64>> {
    let m1 = [[psi1[0], psi1[1]], [psi1[2], psi1[3]]];
    let m2 = [[psi2[0], psi2[1]], [psi2[2], psi2[3]]];
    let det = |m: &[[Complex64; 2]; 2]| m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let c0 = det(&m1);
    let c2 = det(&m2);
    let c1 = m1[0][0] * m2[1][1] + m2[0][0] * m1[1][1] - m1[0][1] * m2[1][0] - m2[0][1] * m1[1][0];

    let mut roots: Vec<Complex64> = Vec::new();
    let eps = 1e-12;
    if c2.norm() > eps {
        let disc = (c1 * c1 - Complex64::new(4.0, 0.0) * c2 * c0).sqrt();
        roots.push((-c1 + disc) / (Complex64::new(2.0, 0.0) * c2));
        roots.push((-c1 - disc) / (Complex64::new(2.0, 0.0) * c2));
    } else if c1.norm() > eps {
        roots.push(-c0 / c1);
    }

    let mut out = Vec::new();
    for t in roots {
        if !t.re.is_finite() || !t.im.is_finite() {
            continue;
        }
        let v: Vec<Complex64> = psi1.iter().zip(psi2).map(|(x, y)| x + t * y).collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            out.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    if c2.norm() <= eps {
        out.push(psi2.to_vec());
    }
    out
}

/// NNLS over the atom dictionary; keeps the `max_terms` heaviest atoms and
/// refits. Returns terms and their residual.
fn weights_by_nnls(
    target: &ExpectationTable,
    atoms: &[StatePair],
    max_terms: usize,
) -> (Vec<ProductTerm>, f64) {
    let terms: Vec<ProductTerm> = atoms
        .iter()
        .map(|(a, b)| ProductTerm { weight: 0.0, state_a: *a, state_b: *b })
        .collect();
    let weights = solve_weights(target, &terms);
    let mut weighted: Vec<ProductTerm> = terms
        .into_iter()
        .zip(weights)
        .map(|(mut t, w)| {
            t.weight = w;
            t
        })
        .filter(|t| t.weight > 1e-12)
        .collect();
    weighted.sort_by(|x, y| y.weight.partial_cmp(&x.weight).unwrap());
    weighted.truncate(max_terms);
    if weighted.is_empty() {
        // Degenerate start: a single ground-state product.
        let c = Complex64::new;
        weighted.push(ProductTerm {
            weight: 1.0,
            state_a: [c(1.0, 0.0), c(0.0, 0.0)],
            state_b: [c(1.0, 0.0), c(0.0, 0.0)],
        });
    }
    let refit = solve_weights(target, &weighted);
    for (t, w) in weighted.iter_mut().zip(refit) {
        t.weight = w;
    }
    weighted.retain(|t| t.weight > 1e-12);
    let residual = residual_of(target, &weighted);
    (weighted, residual)
}

/// Nonnegative LS weights for fixed product states against the table.
fn solve_weights(target: &ExpectationTable, terms: &[ProductTerm]) -> Vec<f64> {
    let rows = 16;
    let cols = terms.len();
    if cols == 0 {
        return Vec::new();
    }
    let mut a = vec![0.0f64; rows * cols];
    for (j, t) in terms.iter().enumerate() {
        let table = t.table();
        for i in 0..4 {
            for k in 0..4 {
                a[(i * 4 + k) * cols + j] = table[i][k];
            }
        }
    }
    let b: Vec<f64> = (0..rows).map(|r| target[r / 4][r % 4]).collect();
    nnls(&a, rows, cols, &b)
}

fn residual_of(target: &ExpectationTable, terms: &[ProductTerm]) -> f64 {
    let mut recon = [[0.0f64; 4]; 4];
    for t in terms {
        let tt = t.table();
        for i in 0..4 {
            for j in 0..4 {
                recon[i][j] += t.weight * tt[i][j];
            }
        }
    }
    table_max_diff(&recon, target)
}

/// One pass of per-term rank-one refits followed by a weight refit.
fn polish_terms(target: &ExpectationTable, terms: &mut Vec<ProductTerm>) {
    let count = terms.len();
    for k in 0..count {
        // Residual with term k removed.
        let mut g = *target;
        for (l, t) in terms.iter().enumerate() {
            if l == k {
                continue;
            }
            let tt = t.table();
            for i in 0..4 {
                for j in 0..4 {
                    g[i][j] -= t.weight * tt[i][j];
                }
            }
        }
        let term = &mut terms[k];
        let mut u = term.bloch_a();
        let mut v = term.bloch_b();
        for _ in 0..4 {
            // Optimal u for fixed v, then the reverse.
            let ev = extended(&v);
            let p: Vec<f64> =
                (0..4).map(|i| (0..4).map(|j| g[i][j] * ev[j]).sum()).collect();
            let pn = (p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt();
            if pn > 1e-12 {
                u = [p[1] / pn, p[2] / pn, p[3] / pn];
            }
            let eu = extended(&u);
            let q: Vec<f64> =
                (0..4).map(|j| (0..4).map(|i| g[i][j] * eu[i]).sum()).collect();
            let qn = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            if qn > 1e-12 {
                v = [q[1] / qn, q[2] / qn, q[3] / qn];
            }
        }
        term.state_a = state_of_bloch(&u);
        term.state_b = state_of_bloch(&v);
        let eu = extended(&u);
        let ev = extended(&v);
        let overlap: f64 =
            (0..4).map(|i| (0..4).map(|j| g[i][j] * eu[i] * ev[j]).sum::<f64>()).sum();
        term.weight = (overlap / 4.0).max(0.0);
    }
    let weights = solve_weights(target, terms);
    for (t, w) in terms.iter_mut().zip(weights) {
        t.weight = w;
    }
    terms.retain(|t| t.weight > 1e-12);
    if terms.is_empty() {
        let c = Complex64::new;
        terms.push(ProductTerm {
            weight: 1.0,
            state_a: [c(1.0, 0.0), c(0.0, 0.0)],
            state_b: [c(1.0, 0.0), c(0.0, 0.0)],
        });
    }
}

/// Randomized local rotations with annealing acceptance.
fn anneal(
    target: &ExpectationTable,
    terms: &[ProductTerm],
    start_residual: f64,
    temperature: f64,
    steps: usize,
    rng: &mut StdRng,
) -> (Vec<ProductTerm>, f64) {
    let mut current = terms.to_vec();
    let mut current_res = start_residual;
    let mut best = terms.to_vec();
    let mut best_res = start_residual;
    for step in 0..steps.max(1) {
        let t = temperature * (1.0 - step as f64 / steps.max(1) as f64) + 1e-6;
        let mut proposal = current.clone();
        let k = rng.gen_range(0..proposal.len());
        let side_a = rng.gen_bool(0.5);
        let angle = t * rng.gen_range(0.1..2.0);
        let blo = if side_a { proposal[k].bloch_a() } else { proposal[k].bloch_b() };
        let jittered = jitter_bloch(&blo, angle, rng);
        if side_a {
            proposal[k].state_a = state_of_bloch(&jittered);
        } else {
            proposal[k].state_b = state_of_bloch(&jittered);
        }
        let weights = solve_weights(target, &proposal);
        for (t, w) in proposal.iter_mut().zip(weights) {
            t.weight = w;
        }
        proposal.retain(|t| t.weight > 1e-12);
        if proposal.is_empty() {
            continue;
        }
        let res = residual_of(target, &proposal);
        let accept = res < current_res
            || rng.gen_bool(((current_res - res) / t).exp().clamp(0.0, 1.0));
        if accept {
            current = proposal;
            current_res = res;
            if res < best_res {
                best = current.clone();
                best_res = res;
            }
        }
    }
    (best, best_res)
}

fn jitter_bloch(u: &[f64; 3], angle: f64, rng: &mut StdRng) -> [f64; 3] {
    let d = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let out = [
        u[0] + angle * d[0],
        u[1] + angle * d[1],
        u[2] + angle * d[2],
    ];
    let n = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt().max(1e-12);
    [out[0] / n, out[1] / n, out[2] / n]
}

fn normalize_terms(mut terms: Vec<ProductTerm>) -> Vec<ProductTerm> {
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    if total > 0.0 {
        for t in terms.iter_mut() {
            t.weight /= total;
        }
    }
    terms
}

/// Build the diagonal-form certificate from product terms: U_k = A_k ⊗ I
/// with A_k |0> the a-side state, and likewise for the primed side.
fn certificate_from_terms(terms: &[ProductTerm]) -> DecompositionCandidate {
    let k = terms.len();
    let mut weights = vec![vec![0.0f64; k]; k];
    let mut unitaries_a = Vec::with_capacity(k);
    let mut unitaries_b = Vec::with_capacity(k);
    for (idx, t) in terms.iter().enumerate() {
        weights[idx][idx] = t.weight;
        unitaries_a.push(qubit_unitary(&t.state_a).kron(&CMatrix::identity(2)));
        unitaries_b.push(qubit_unitary(&t.state_b).kron(&CMatrix::identity(2)));
    }
    DecompositionCandidate { weights, unitaries_a, unitaries_b }
}

/// Single-qubit unitary with the given state as its first column.
fn qubit_unitary(state: &[Complex64; 2]) -> CMatrix {
    CMatrix::from_rows(2, &[state[0], -state[1].conj(), state[1], state[0].conj()])
}
