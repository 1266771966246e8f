//! Small dense complex matrices and the handful of decompositions the
//! analysis needs. Everything here targets dimensions of at most 2^10, with
//! typical sizes of 2 to 32, so the implementations favour clarity over
//! asymptotics.

use num_complex::Complex64;

/// Square complex matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for k in 0..dim {
            m.set(k, k, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        CMatrix { dim, data: entries.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, factor: Complex64) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn conjugate(&self) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = CMatrix::zeros(n * m);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.get(r1, c1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.set(r1 * m + r2, c1 * m + c2, a * other.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..n {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff_hermitian() <= tol
    }

    pub fn max_abs_diff_hermitian(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&CMatrix::identity(self.dim)) <= tol
    }

    /// Hermitian half of the matrix, (A + A†)/2.
    pub fn hermitian_part(&self) -> CMatrix {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    /// Embed an operator acting on the listed qubit positions (0-based,
    /// distinct) into an `n`-qubit space. Position 0 is the most significant
    /// index bit, matching the register convention that qubit 1 is the most
    /// significant amplitude bit.
    pub fn embed(&self, positions: &[usize], n: usize) -> CMatrix {
        let k = positions.len();
        assert_eq!(self.dim, 1 << k, "operator dimension does not match positions");
        let dim = 1usize << n;
        let mut out = CMatrix::zeros(dim);
        // Index helpers: extract/insert the sub-index formed by `positions`.
        let bit_of = |idx: usize, pos: usize| (idx >> (n - 1 - pos)) & 1;
        for row in 0..dim {
            let sub_row: usize =
                positions.iter().enumerate().fold(0, |acc, (j, &p)| acc | (bit_of(row, p) << (k - 1 - j)));
            for sub_col in 0..(1 << k) {
                let v = self.get(sub_row, sub_col);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                // Write sub_col bits into row's positions to build the column index.
                let mut col = row;
                for (j, &p) in positions.iter().enumerate() {
                    let bit = (sub_col >> (k - 1 - j)) & 1;
                    let shift = n - 1 - p;
                    col = (col & !(1 << shift)) | (bit << shift);
                }
                out.set(row, col, v);
            }
        }
        out
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns eigenvalues in descending order with matching
    /// orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let n = self.dim;
        let mut a = self.clone();
        let mut v = CMatrix::identity(n);
        let tol = 1e-14 * self.max_abs().max(1.0);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a.get(p, q).norm());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.norm() <= tol {
                        continue;
                    }
                    // Unitary 2x2 rotation J with J† A J zeroing (p, q).
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let abs = apq.norm();
                    let phase = apq / abs;
                    let tau = (aqq - app) / (2.0 * abs);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Columns: col_p' = c·col_p - s·conj(phase)... applied to
                    // both sides, keeping A Hermitian.
                    let cs = Complex64::new(c, 0.0);
                    let sp = phase * s;
                    for r in 0..n {
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, arp * cs - arq * sp.conj());
                        a.set(r, q, arp * sp + arq * cs);
                    }
                    for cidx in 0..n {
                        let apc = a.get(p, cidx);
                        let aqc = a.get(q, cidx);
                        a.set(p, cidx, apc * cs - aqc * sp);
                        a.set(q, cidx, apc * sp.conj() + aqc * cs);
                    }
                    for r in 0..n {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, vrp * cs - vrq * sp.conj());
                        v.set(r, q, vrp * sp + vrq * cs);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let eigs: Vec<f64> = (0..n).map(|k| a.get(k, k).re).collect();
        order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
        let sorted_eigs: Vec<f64> = order.iter().map(|&k| eigs[k]).collect();
        let mut vecs = CMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            // Fix the gauge: largest-magnitude entry made real positive.
            let mut pivot = 0usize;
            let mut best = 0.0;
            for r in 0..n {
                let m = v.get(r, old_col).norm();
                if m > best {
                    best = m;
                    pivot = r;
                }
            }
            let g = v.get(pivot, old_col);
            let fix = if g.norm() > 0.0 { g.conj() / g.norm() } else { Complex64::new(1.0, 0.0) };
            for r in 0..n {
                vecs.set(r, new_col, v.get(r, old_col) * fix);
            }
        }
        (sorted_eigs, vecs)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (eigs, _) = self.eigh();
        eigs.into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    /// Complete a vector to a unitary matrix having its normalization as
    /// column 0, by Gram-Schmidt over the standard basis. Columns are
    /// re-orthogonalized once, which keeps the unitarity defect at the
    /// rounding level even for ill-conditioned inputs.
    pub fn unitary_from_first_column(first: &[Complex64]) -> CMatrix {
        let n = first.len();
        let norm: f64 = first.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "first column is numerically zero");
        let mut cols: Vec<Vec<Complex64>> = vec![first.iter().map(|c| c / norm).collect()];
        for k in 0..n {
            if cols.len() == n {
                break;
            }
            let mut cand = vec![Complex64::new(0.0, 0.0); n];
            cand[k] = Complex64::new(1.0, 0.0);
            for _pass in 0..2 {
                for col in &cols {
                    let overlap: Complex64 =
                        col.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                    for (c, a) in cand.iter_mut().zip(col) {
                        *c -= overlap * a;
                    }
                }
            }
            let norm: f64 = cand.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-9 {
                for c in cand.iter_mut() {
                    *c /= norm;
                }
                cols.push(cand);
            }
        }
        assert_eq!(cols.len(), n, "failed to complete unitary basis");
        let mut m = CMatrix::zeros(n);
        for (cidx, col) in cols.iter().enumerate() {
            for r in 0..n {
                m.set(r, cidx, col[r]);
            }
        }
        m
    }
}

/// Partial transpose of a two-qubit matrix with respect to the second qubit.
pub fn partial_transpose_second(rho: &CMatrix) -> CMatrix {
    assert_eq!(rho.dim(), 4);
    let mut out = CMatrix::zeros(4);
    for r1 in 0..2 {
        for c1 in 0..2 {
            for r2 in 0..2 {
                for c2 in 0..2 {
                    // (r1 r2),(c1 c2) <- (r1 c2),(c1 r2)
                    out.set(r1 * 2 + r2, c1 * 2 + c2, rho.get(r1 * 2 + c2, c1 * 2 + r2));
                }
            }
        }
    }
    out
}

/// Nonnegative least squares by the Lawson-Hanson active-set method.
/// Minimizes ||A x - b|| subject to x >= 0. `a` is row-major, `rows x cols`.
pub fn nnls(a: &[f64], rows: usize, cols: usize, b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    let col = |j: usize| (0..rows).map(move |i| a[i * cols + j]);
    let mut x = vec![0.0f64; cols];
    let mut passive = vec![false; cols];
    let tol = 1e-11;

    for _outer in 0..(3 * cols + 10) {
        // Gradient of the active (zero) variables.
        let mut resid = vec![0.0f64; rows];
        for i in 0..rows {
            let mut acc = b[i];
            for j in 0..cols {
                acc -= a[i * cols + j] * x[j];
            }
            resid[i] = acc;
        }
        let mut best_j = None;
        let mut best_w = tol;
        for j in 0..cols {
            if passive[j] {
                continue;
            }
            let w: f64 = col(j).zip(&resid).map(|(aij, r)| aij * r).sum();
            if w > best_w {
                best_w = w;
                best_j = Some(j);
            }
        }
        let Some(j_new) = best_j else { break };
        passive[j_new] = true;

        // Inner loop: solve unconstrained LS on the passive set, back off
        // whenever a passive variable would go negative.
        for _inner in 0..(3 * cols + 10) {
            let idx: Vec<usize> = (0..cols).filter(|&j| passive[j]).collect();
            let z = solve_ls_subset(a, rows, cols, b, &idx);
            if z.iter().all(|&v| v > 0.0) {
                for (&j, &v) in idx.iter().zip(&z) {
                    x[j] = v;
                }
                for j in 0..cols {
                    if !passive[j] {
                        x[j] = 0.0;
                    }
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&j, &zj) in idx.iter().zip(&z) {
                if zj <= 0.0 {
                    let step = x[j] / (x[j] - zj);
                    alpha = alpha.min(step);
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (&j, &zj) in idx.iter().zip(&z) {
                x[j] += alpha * (zj - x[j]);
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    x
}

/// Least squares on selected columns via modified Gram-Schmidt QR.
fn solve_ls_subset(a: &[f64], rows: usize, cols: usize, b: &[f64], idx: &[usize]) -> Vec<f64> {
    let k = idx.len();
    if k == 0 {
        return Vec::new();
    }
    let mut q: Vec<Vec<f64>> = idx
        .iter()
        .map(|&j| (0..rows).map(|i| a[i * cols + j]).collect())
        .collect();
    let mut r = vec![vec![0.0f64; k]; k];
    for j in 0..k {
        for p in 0..j {
            let dot: f64 = (0..rows).map(|i| q[p][i] * q[j][i]).sum();
            r[p][j] = dot;
            for i in 0..rows {
                q[j][i] -= dot * q[p][i];
            }
        }
        let norm: f64 = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        r[j][j] = norm;
        if norm > 1e-13 {
            for v in q[j].iter_mut() {
                *v /= norm;
            }
        }
    }
    // Back-substitute R z = Q^T b.
    let mut z = vec![0.0f64; k];
    let qtb: Vec<f64> = (0..k).map(|j| (0..rows).map(|i| q[j][i] * b[i]).sum()).collect();
    for j in (0..k).rev() {
        let mut acc = qtb[j];
        for p in (j + 1)..k {
            acc -= r[j][p] * z[p];
        }
        z[j] = if r[j][j].abs() > 1e-13 { acc / r[j][j] } else { 0.0 };
    }
    z
}
