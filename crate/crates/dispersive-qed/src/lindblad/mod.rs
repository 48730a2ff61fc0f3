//! Brute-force master-equation oracle on a truncated Fock space.
//!
//! One atom–cavity copy lives on the joint space {|e⟩, |g⟩} ⊗ {|0⟩..|N−1⟩},
//! evolving under
//!
//!   dρ′/dt = −i[V, ρ′] + k(2aρ′a† − a†aρ′ − ρ′a†a),
//!   V = Ω[(a†a + 1)|e⟩⟨e| − a†a|g⟩⟨g|],
//!
//! integrated by explicit fixed-step RK4. Nothing here assumes the closed
//! forms of [`crate::analytic`]; the whole point of this module is to
//! validate them by direct numerical evolution: the atomic coherence
//! multiplier extracted from a run must reproduce f(t)·λ(t), the field-space
//! blocks must follow their decoupled generators, and a joint two-copy
//! integration must reproduce the two-atom map element by element.

mod evolution;
mod two_copy;

pub use evolution::{
    block_evolution_check, coherence_multiplier, dispersive_generator, dispersive_validity_check,
    full_jc_generator, integrate, jc_interaction_generator, BlockEvolutionReport, Model,
    Trajectory, ValidityReport,
};
pub use two_copy::{two_copy_oracle, TwoCopyTrajectory, TWO_COPY_MEMORY_CAP};

use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::SystemParams;
use crate::linalg::{kron, ComplexMatrix};

/// Norm deficit allowed when representing a coherent state at finite
/// truncation.
pub const TAIL_MASS_TOL: f64 = 1e-10;
/// Trace drift allowed along an integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-9;
/// Most negative eigenvalue tolerated in sampled states.
pub const NEGATIVITY_TOL: f64 = 1e-6;
/// Population allowed in the top Fock level along a run.
pub const TOP_LEVEL_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LindbladError {
    #[error("Fock truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("step too large: {0}")]
    StepTooLarge(String),
    #[error("two-copy state would exceed the memory budget: {0}")]
    MemoryBudget(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// Truncated bosonic mode with Fock states |0⟩..|N−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    truncation: usize,
}

impl FockSpace {
    pub fn new(truncation: usize) -> Result<Self, LindbladError> {
        if truncation < 2 {
            return Err(LindbladError::TruncationTooSmall(format!(
                "need at least 2 Fock levels, got {truncation}"
            )));
        }
        Ok(Self { truncation })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Dimension of one atom ⊗ field copy.
    pub fn joint_dim(&self) -> usize {
        2 * self.truncation
    }
}

/// Annihilation, creation and number operators on the truncated space:
/// a|n⟩ = √n|n−1⟩, a†|n⟩ = √(n+1)|n+1⟩ (zero beyond the cutoff), n = a†a.
pub fn ladder_ops(space: &FockSpace) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = space.truncation();
    let mut a = ComplexMatrix::zeros(n, n);
    for m in 1..n {
        a[(m - 1, m)] = Complex64::new((m as f64).sqrt(), 0.0);
    }
    let a_dag = a.dagger();
    let n_op = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (a, a_dag, n_op)
}

/// Probability mass of a coherent state |α⟩ beyond the truncation cutoff.
pub fn coherent_tail_mass(truncation: usize, alpha: Complex64) -> f64 {
    let nbar = alpha.norm_sqr();
    let mut kept = 0.0;
    let mut term = (-nbar).exp(); // e^{−|α|²}·|α|^{2n}/n! at n = 0
    for m in 0..truncation {
        kept += term;
        term *= nbar / (m as f64 + 1.0);
    }
    (1.0 - kept).max(0.0)
}

/// Fock-basis coefficients of the coherent state |α⟩, e^{−|α|²/2} αⁿ/√n!.
///
/// Fails with `TruncationTooSmall` when the norm deficit of the truncated
/// expansion exceeds 1e-10. The coefficients are not renormalized.
pub fn coherent_vector(space: &FockSpace, alpha: Complex64) -> Result<Vec<Complex64>, LindbladError> {
    let n = space.truncation();
    let tail = coherent_tail_mass(n, alpha);
    if tail >= TAIL_MASS_TOL {
        return Err(LindbladError::TruncationTooSmall(format!(
            "coherent state |α| = {:.3} leaves tail mass {tail:.3e} above {TAIL_MASS_TOL:.0e} at N = {n}",
            alpha.norm()
        )));
    }
    let pref = (-0.5 * alpha.norm_sqr()).exp();
    let mut v = Vec::with_capacity(n);
    let mut coeff = Complex64::new(pref, 0.0);
    for m in 0..n {
        if m > 0 {
            coeff *= alpha / (m as f64).sqrt();
        }
        v.push(coeff);
    }
    Ok(v)
}

/// The three superoperator actions on a field-space operator:
/// Mρ = aρa†, Rρ = a†aρ, Lρ = ρa†a.
pub fn apply_superops(
    rho: &ComplexMatrix,
    space: &FockSpace,
) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix), LindbladError> {
    let n = space.truncation();
    if rho.rows() != n || rho.cols() != n {
        return Err(LindbladError::DimensionMismatch(format!(
            "expected a {n}x{n} field operator, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut m_rho = ComplexMatrix::zeros(n, n);
    let mut r_rho = ComplexMatrix::zeros(n, n);
    let mut l_rho = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i + 1 < n && j + 1 < n {
                let w = ((i as f64 + 1.0) * (j as f64 + 1.0)).sqrt();
                m_rho[(i, j)] = w * rho[(i + 1, j + 1)];
            }
            r_rho[(i, j)] = (i as f64) * rho[(i, j)];
            l_rho[(i, j)] = (j as f64) * rho[(i, j)];
        }
    }
    Ok((m_rho, r_rho, l_rho))
}

/// Standard partial trace. `dims` are the tensor-factor dimensions (their
/// product must equal the matrix dimension); `keep` lists the factor indices
/// to retain, in ascending order.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix, LindbladError> {
    let total: usize = dims.iter().product();
    if !rho.is_square() || rho.rows() != total {
        return Err(LindbladError::DimensionMismatch(format!(
            "matrix is {}x{} but factor dimensions multiply to {total}",
            rho.rows(),
            rho.cols()
        )));
    }
    if keep.windows(2).any(|w| w[1] <= w[0]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(LindbladError::DimensionMismatch(
            "keep set must be ascending factor indices".into(),
        ));
    }

    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product::<usize>().max(1);
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    // Strides of each factor in the full big-endian mixed-radix index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let index_of = |digits: &[usize], factors: &[usize]| -> usize {
        digits
            .iter()
            .zip(factors.iter())
            .map(|(&d, &f)| d * strides[f])
            .sum()
    };
    let unrank = |mut r: usize, ds: &[usize]| -> Vec<usize> {
        let mut digits = vec![0usize; ds.len()];
        for i in (0..ds.len()).rev() {
            digits[i] = r % ds[i];
            r /= ds[i];
        }
        digits
    };

    let mut out = ComplexMatrix::zeros(out_dim.max(1), out_dim.max(1));
    for i in 0..out_dim {
        let row_digits = unrank(i, &kept_dims);
        for j in 0..out_dim {
            let col_digits = unrank(j, &kept_dims);
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..traced_total {
                let tr_digits = unrank(s, &traced_dims);
                let r = index_of(&row_digits, keep) + index_of(&tr_digits, &traced);
                let c = index_of(&col_digits, keep) + index_of(&tr_digits, &traced);
                acc += rho[(r, c)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Joint atom ⊗ field state of one copy, atom basis {|e⟩, |g⟩} first.
#[derive(Debug, Clone)]
pub struct JointState {
    pub density: ComplexMatrix,
    pub time: f64,
}

impl JointState {
    /// Product of a 2×2 atom state with an N×N field state.
    pub fn from_atom_field(
        atom: &ComplexMatrix,
        field: &ComplexMatrix,
        space: &FockSpace,
    ) -> Result<Self, LindbladError> {
        if atom.rows() != 2 || atom.cols() != 2 {
            return Err(LindbladError::DimensionMismatch("atom state must be 2x2".into()));
        }
        let n = space.truncation();
        if field.rows() != n || field.cols() != n {
            return Err(LindbladError::DimensionMismatch(format!(
                "field state must be {n}x{n}"
            )));
        }
        let density = kron(atom, field);
        let state = Self { density, time: 0.0 };
        state.validate(space)?;
        Ok(state)
    }

    /// Product of a 2×2 atom state with the coherent projector |α⟩⟨α|.
    pub fn atom_coherent_product(
        atom: &ComplexMatrix,
        space: &FockSpace,
        alpha: Complex64,
    ) -> Result<Self, LindbladError> {
        let v = coherent_vector(space, alpha)?;
        let field = ComplexMatrix::outer(&v, &v);
        Self::from_atom_field(atom, &field, space)
    }

    fn validate(&self, space: &FockSpace) -> Result<(), LindbladError> {
        let d = space.joint_dim();
        if self.density.rows() != d || self.density.cols() != d {
            return Err(LindbladError::DimensionMismatch(format!(
                "joint state must be {d}x{d}"
            )));
        }
        if self.density.hermiticity_deviation() > 1e-10 {
            return Err(LindbladError::InvalidState("joint state is not Hermitian".into()));
        }
        let tr = self.density.trace();
        if (tr.re - 1.0).abs() > TRACE_DRIFT_TOL || tr.im.abs() > TRACE_DRIFT_TOL {
            return Err(LindbladError::InvalidState(format!(
                "joint state trace {tr} is not 1"
            )));
        }
        if !crate::linalg::is_psd_within(&self.density, 1e-8) {
            return Err(LindbladError::InvalidState(
                "joint state has an eigenvalue below -1e-8".into(),
            ));
        }
        Ok(())
    }

    /// Extract the N×N field-space block ⟨s_row|ρ′|s_col⟩ (0 = e, 1 = g).
    pub fn atom_block(&self, space: &FockSpace, s_row: usize, s_col: usize) -> ComplexMatrix {
        let n = space.truncation();
        ComplexMatrix::from_fn(n, n, |m, l| self.density[(s_row * n + m, s_col * n + l)])
    }

    /// 2×2 atomic marginal, field traced out.
    pub fn atom_marginal(&self, space: &FockSpace) -> ComplexMatrix {
        let n = space.truncation();
        partial_trace(&self.density, &[2, n], &[0]).expect("dimensions fixed by construction")
    }
}

/// Parameters of the underlying non-dispersive model: field frequency ω,
/// atomic frequency ω₀, coupling g, cavity decay k and initial amplitude α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullModelParams {
    pub omega: f64,
    pub omega0: f64,
    pub g: f64,
    pub decay: f64,
    pub alpha: Complex64,
}

impl FullModelParams {
    pub fn new(
        omega: f64,
        omega0: f64,
        g: f64,
        decay: f64,
        alpha: Complex64,
    ) -> Result<Self, LindbladError> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(LindbladError::InvalidState(format!(
                "coupling must be positive, got {g}"
            )));
        }
        if omega0 - omega == 0.0 {
            return Err(LindbladError::InvalidState(
                "detuning must be nonzero (resonant regime is outside the dispersive model)"
                    .into(),
            ));
        }
        if !(decay >= 0.0) {
            return Err(LindbladError::InvalidState(format!(
                "decay must be non-negative, got {decay}"
            )));
        }
        Ok(Self { omega, omega0, g, decay, alpha })
    }

    pub fn detuning(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Effective dispersive coupling Ω = g²/Δ.
    pub fn omega_eff(&self) -> f64 {
        self.g * self.g / self.detuning()
    }

    /// Whether |Δ| ≥ 10·√(n̄+1)·g with n̄ = |α|². Advisory: callers warn,
    /// they do not fail.
    pub fn dispersive_valid(&self) -> bool {
        self.detuning().abs() >= 10.0 * (self.alpha.norm_sqr() + 1.0).sqrt() * self.g
    }

    /// Collapse to the effective dispersive parameter set.
    pub fn effective_params(&self) -> SystemParams {
        SystemParams::new(self.omega_eff(), self.decay, self.alpha)
            .expect("full-model parameters define a valid effective set")
    }
}
