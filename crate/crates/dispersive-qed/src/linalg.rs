//! Minimal dense complex linear algebra for small quantum systems.
//!
//! Everything here operates on [`ComplexMatrix`], a row-major dense matrix of
//! `Complex64` entries. The dimensions in play are tiny (4×4 two-qubit states
//! up to a few-thousand-dimensional truncated joint spaces), so the solvers
//! favour accuracy and simplicity over asymptotic speed: Hermitian eigenvalues
//! come from a cyclic Jacobi iteration with complex rotations.

use num_complex::Complex64;
use thiserror::Error;

/// Maximum number of Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm (relative to matrix scale) at which the Jacobi
/// iteration is considered converged.
const JACOBI_OFF_TOL: f64 = 1e-13;
/// Entrywise tolerance for the Hermiticity precondition of [`eig_hermitian`].
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below this are rejected by [`mat_fn_sqrt_psd`].
const PSD_TOL: f64 = -1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |m - m†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPsd { eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense complex matrix, row-major. The universal carrier for states,
/// operators and superoperator actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square matrix with the given (complex) diagonal.
    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn from_diag_re(diag: &[f64]) -> Self {
        let v: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::from_diag(&v)
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Outer product v·w† of two column vectors.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, &vi) in v.iter().enumerate() {
            for (j, &wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        // ikj order keeps the inner loop contiguous in both factors.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let lhs = k * other.cols;
                let dst = i * other.cols;
                for j in 0..other.cols {
                    out.data[dst + j] += a * other.data[lhs + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// In-place `self += s * other`.
    pub fn add_scaled(&mut self, s: Complex64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
    }

    /// (m + m†)/2, projecting numerical dust off the Hermitian manifold.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity, max |m - m†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product a ⊗ b; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Hermitian eigendecomposition by cyclic Jacobi with complex rotations.
#[derive(Debug, Clone)]
pub struct EighResult {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

/// Full Hermitian eigendecomposition. Eigenvalues descending, eigenvector
/// columns in matching order.
pub fn eigh(m: &ComplexMatrix) -> Result<EighResult, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }

    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= JACOBI_OFF_TOL * scale;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs <= f64::EPSILON * scale {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                // Unitary 2x2 rotation zeroing the (p,q) entry. With
                // a_pq = |a_pq| e^{iφ} the rotation column mixing carries the
                // phase w = e^{iφ}; the angle comes from the usual real Jacobi
                // formula applied to |a_pq|.
                let w = apq / abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns: B = A·U with U[p,p]=c, U[q,p]=s·w̄, U[p,q]=−s·w, U[q,q]=c.
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * c + arq * s * w.conj();
                    a[(r, q)] = -arp * s * w + arq * c;
                }
                // Rows: A' = U†·B.
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = apr * c + aqr * s * w;
                    a[(q, r)] = -apr * s * w.conj() + aqr * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c + vrq * s * w.conj();
                    v[(r, q)] = -vrp * s * w + vrq * c;
                }
            }
        }
        converged = off(&a) <= JACOBI_OFF_TOL * scale;
    }
    if !converged {
        return Err(LinalgError::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors =
        ComplexMatrix::from_fn(n, n, |r, cidx| v[(r, order[cidx])]);
    Ok(EighResult { eigenvalues, eigenvectors })
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(eigh(m)?.eigenvalues)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in [-1e-12, 0] are clipped to zero; anything below -1e-10
/// is rejected as not PSD.
pub fn mat_fn_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let dec = eigh(m)?;
    if let Some(&bad) = dec.eigenvalues.iter().find(|&&l| l < PSD_TOL) {
        return Err(LinalgError::NotPsd { eigenvalue: bad });
    }
    let n = m.rows();
    let roots: Vec<f64> = dec.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    // s = V · diag(√λ) · V†
    let v = &dec.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[(i, k)] * roots[k] * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out.hermitize())
}

/// Whether `m + shift·I` admits a Cholesky factorization, i.e. whether the
/// smallest eigenvalue of the Hermitian matrix `m` exceeds `-shift` (up to a
/// small slack for roundoff). Used as a cheap positivity audit on states too
/// large for a full eigendecomposition.
pub fn is_psd_within(m: &ComplexMatrix, shift: f64) -> bool {
    assert!(m.is_square());
    let n = m.rows();
    let slack = 1e-9 * m.frobenius_norm().max(1.0);
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut pivot = m[(j, j)].re + shift + slack;
        for k in 0..j {
            pivot -= l[j * n + k].norm_sqr();
        }
        if pivot <= 0.0 {
            return false;
        }
        let ljj = pivot.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = m[(i, j)] + if i == j { Complex64::new(shift, 0.0) } else { Complex64::new(0.0, 0.0) };
            for k in 0..j {
                acc -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = acc / ljj;
        }
    }
    true
}

/// Pauli Y.
pub fn sigma_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), -i],
        vec![i, Complex64::new(0.0, 0.0)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_complex(rng: &mut StdRng) -> Complex64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn random_matrix(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| random_complex(rng))
    }

    fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitize()
    }

    fn random_psd(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        let g = random_matrix(rng, n);
        g.matmul(&g.dagger())
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(kron(&i2, &i2), i4);
    }

    #[test]
    fn kron_sigma_y_pair() {
        let yy = kron(&sigma_y(), &sigma_y());
        // Anti-diagonal (-1, 1, 1, -1), all other entries zero.
        let expect = [
            (0usize, 3usize, -1.0),
            (1, 2, 1.0),
            (2, 1, 1.0),
            (3, 0, -1.0),
        ];
        for i in 0..4 {
            for j in 0..4 {
                let want = expect
                    .iter()
                    .find(|&&(r, col, _)| r == i && col == j)
                    .map(|&(_, _, v)| v)
                    .unwrap_or(0.0);
                assert!((yy[(i, j)] - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_diagonal_case() {
        let a = ComplexMatrix::from_diag_re(&[1.0, 2.0]);
        let b = ComplexMatrix::from_diag_re(&[3.0, 4.0]);
        let want = ComplexMatrix::from_diag_re(&[3.0, 4.0, 6.0, 8.0]);
        assert!(kron(&a, &b).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 2);
            let b = random_matrix(&mut rng, 3);
            let d = random_matrix(&mut rng, 2);
            let lhs = kron(&kron(&a, &b), &d);
            let rhs = kron(&a, &kron(&b, &d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn kron_trace_factorizes() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 3);
            let b = random_matrix(&mut rng, 4);
            let lhs = kron(&a, &b).trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn eig_diagonal_projector() {
        let m = ComplexMatrix::from_diag_re(&[1.0, 0.0, 0.0, 0.0]);
        let vals = eig_hermitian(&m).unwrap();
        assert_eq!(vals, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn eig_scalar_matrix() {
        let m = ComplexMatrix::identity(4).scale_re(0.25);
        let vals = eig_hermitian(&m).unwrap();
        for v in vals {
            assert!((v - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_diagonal_is_exact_sorted() {
        let d = [0.3, -1.5, 2.0, 0.0, 7.25];
        let vals = eig_hermitian(&ComplexMatrix::from_diag_re(&d)).unwrap();
        let mut want = d.to_vec();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (v, w) in vals.iter().zip(want.iter()) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_sum_matches_trace() {
        let mut rng = StdRng::seed_from_u64(13);
        for n in [2usize, 3, 4, 6, 8] {
            let h = random_hermitian(&mut rng, n);
            let vals = eig_hermitian(&h).unwrap();
            let sum: f64 = vals.iter().sum();
            assert!((sum - h.trace().re).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn eig_reconstructs_matrix() {
        let mut rng = StdRng::seed_from_u64(14);
        let h = random_hermitian(&mut rng, 5);
        let dec = eigh(&h).unwrap();
        let v = &dec.eigenvectors;
        // V·diag(λ)·V† must reproduce the input.
        let lam = ComplexMatrix::from_diag_re(&dec.eigenvalues);
        let rebuilt = v.matmul(&lam).matmul(&v.dagger());
        assert!(rebuilt.max_abs_diff(&h) < 1e-11);
        // and V must be unitary.
        let vv = v.dagger().matmul(v);
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        match eig_hermitian(&m) {
            Err(LinalgError::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_identity() {
        let i4 = ComplexMatrix::identity(4);
        let s = mat_fn_sqrt_psd(&i4).unwrap();
        assert!(s.max_abs_diff(&i4) < 1e-12);
    }

    #[test]
    fn sqrt_diagonal() {
        let m = ComplexMatrix::from_diag_re(&[4.0, 9.0, 0.0, 1.0]);
        let want = ComplexMatrix::from_diag_re(&[2.0, 3.0, 0.0, 1.0]);
        let s = mat_fn_sqrt_psd(&m).unwrap();
        assert!(s.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..10 {
            let m = random_psd(&mut rng, 4);
            let s = mat_fn_sqrt_psd(&m).unwrap();
            assert!(s.matmul(&s).max_abs_diff(&m) < 1e-8);
            assert!(s.hermiticity_deviation() < 1e-10);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = ComplexMatrix::from_diag_re(&[1.0, -0.5]);
        match mat_fn_sqrt_psd(&m) {
            Err(LinalgError::NotPsd { .. }) => {}
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn cholesky_positivity_probe() {
        let mut rng = StdRng::seed_from_u64(16);
        let m = random_psd(&mut rng, 6);
        assert!(is_psd_within(&m, 1e-6));
        // Pull one eigendirection clearly negative.
        let shifted = &m - &ComplexMatrix::identity(6).scale_re(m.frobenius_norm() + 1.0);
        assert!(!is_psd_within(&shifted, 1e-6));
    }

    #[test]
    fn x_state_block_eigenvalues() {
        // X-structured density matrices decompose into two 2x2 blocks with
        // analytically known spectra; good end-to-end check of the rotations.
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let mut d: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
            let norm: f64 = d.iter().sum();
            d.iter_mut().for_each(|x| *x /= norm);
            let r14 = random_complex(&mut rng) * 0.4 * (d[0] * d[3]).sqrt();
            let r23 = random_complex(&mut rng) * 0.4 * (d[1] * d[2]).sqrt();
            let mut m = ComplexMatrix::from_diag_re(&d);
            m[(0, 3)] = r14;
            m[(3, 0)] = r14.conj();
            m[(1, 2)] = r23;
            m[(2, 1)] = r23.conj();

            let outer = |a: f64, b: f64, z: Complex64| {
                let mid = 0.5 * (a + b);
                let rad = (0.25 * (a - b).powi(2) + z.norm_sqr()).sqrt();
                (mid + rad, mid - rad)
            };
            let (e1, e2) = outer(d[0], d[3], r14);
            let (e3, e4) = outer(d[1], d[2], r23);
            let mut want = vec![e1, e2, e3, e4];
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());

            let got = eig_hermitian(&m).unwrap();
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).abs() < 1e-12);
            }
        }
    }
}
