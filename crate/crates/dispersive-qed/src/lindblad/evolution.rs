//! Generators and fixed-step integration for one atom–cavity copy.
//!
//! The right-hand sides are applied through the index structure of the
//! ladder operators (number scaling and single-step shifts) rather than
//! dense matrix products, which keeps one generator evaluation at O(d²) for
//! a d-dimensional joint space. Dense-product reference implementations live
//! in the tests and pin the structured forms down entrywise.

use num_complex::Complex64;

use crate::analytic::{self, SystemParams};
use crate::linalg::{self, ComplexMatrix};

use super::{
    coherent_vector, FockSpace, FullModelParams, JointState, LindbladError, NEGATIVITY_TOL,
    TOP_LEVEL_TOL, TRACE_DRIFT_TOL,
};

/// Which right-hand side drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Effective photon-number-dependent shift V = Ω[(n+1)|e⟩⟨e| − n|g⟩⟨g|]
    /// plus the zero-temperature cavity dissipator.
    Dispersive(SystemParams),
    /// Underlying excitation-exchange model H = ωa†a + (ω₀/2)σ_z
    /// + g(a†σ₋ + aσ₊), same dissipator, lab frame.
    FullJc(FullModelParams),
    /// The same model in the rotating frame of the free Hamiltonian, where
    /// the coupling carries the residual phase e^{∓iΔt}. Used for validity
    /// comparisons against the dispersive generator without resolving the
    /// bare optical frequencies.
    FullJcInteraction(FullModelParams),
}

impl Model {
    fn decay(&self) -> f64 {
        match self {
            Model::Dispersive(s) => s.decay,
            Model::FullJc(p) | Model::FullJcInteraction(p) => p.decay,
        }
    }
}

/// Precomputed per-index tables for the structured generator application.
struct GenTables {
    n_fock: usize,
    dim: usize,
    /// Diagonal unitary part per joint index (dispersive shift or free
    /// energies; zero in the rotating frame).
    diag: Vec<f64>,
    /// Photon number per joint index.
    photon: Vec<f64>,
    k: f64,
    /// Coupling for the excitation-exchange terms; zero for the dispersive
    /// model.
    g: f64,
    delta: f64,
    rotating: bool,
}

impl GenTables {
    fn build(model: &Model, space: &FockSpace) -> Self {
        let n = space.truncation();
        let dim = 2 * n;
        let mut diag = vec![0.0; dim];
        let mut photon = vec![0.0; dim];
        for s in 0..2 {
            for m in 0..n {
                let r = s * n + m;
                photon[r] = m as f64;
                diag[r] = match model {
                    Model::Dispersive(sys) => {
                        if s == 0 {
                            sys.omega_eff * (m as f64 + 1.0)
                        } else {
                            -sys.omega_eff * m as f64
                        }
                    }
                    Model::FullJc(p) => {
                        p.omega * m as f64 + 0.5 * p.omega0 * if s == 0 { 1.0 } else { -1.0 }
                    }
                    Model::FullJcInteraction(_) => 0.0,
                };
            }
        }
        let (g, delta, rotating) = match model {
            Model::Dispersive(_) => (0.0, 0.0, false),
            Model::FullJc(p) => (p.g, p.detuning(), false),
            Model::FullJcInteraction(p) => (p.g, p.detuning(), true),
        };
        Self { n_fock: n, dim, diag, photon, k: model.decay(), g, delta, rotating }
    }

    /// out = generator(rho) at time t.
    fn apply(&self, rho: &ComplexMatrix, t: f64, out: &mut ComplexMatrix) {
        let n = self.n_fock;
        let dim = self.dim;
        let k = self.k;
        let minus_i = Complex64::new(0.0, -1.0);

        // Phases of the excitation-exchange terms in the rotating frame.
        let (phase_down, phase_up) = if self.rotating {
            let p = Complex64::from_polar(1.0, -self.delta * t);
            (p, p.conj())
        } else {
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
        };

        for row in 0..dim {
            let (s_r, m_r) = (row / n, row % n);
            for col in 0..dim {
                let (s_c, m_c) = (col / n, col % n);
                let r = rho[(row, col)];

                // Diagonal unitary part and number-damping part.
                let mut acc = minus_i * (self.diag[row] - self.diag[col]) * r
                    - k * (self.photon[row] + self.photon[col]) * r;

                // Quantum-jump refill 2k·a(·)a†.
                if m_r + 1 < n && m_c + 1 < n {
                    let w = 2.0 * k * ((m_r as f64 + 1.0) * (m_c as f64 + 1.0)).sqrt();
                    acc += w * rho[(row + 1, col + 1)];
                }

                // Excitation exchange −i(Hρ − ρH) for the g-coupling.
                if self.g != 0.0 {
                    let mut h_rho = Complex64::new(0.0, 0.0);
                    // ⟨g,m|H|e,m−1⟩ = g√m·phase_down
                    if s_r == 1 && m_r >= 1 {
                        h_rho += self.g * (m_r as f64).sqrt() * phase_down * rho[(m_r - 1, col)];
                    }
                    // ⟨e,m|H|g,m+1⟩ = g√(m+1)·phase_up
                    if s_r == 0 && m_r + 1 < n {
                        h_rho +=
                            self.g * (m_r as f64 + 1.0).sqrt() * phase_up * rho[(n + m_r + 1, col)];
                    }
                    let mut rho_h = Complex64::new(0.0, 0.0);
                    if s_c == 1 && m_c >= 1 {
                        rho_h += rho[(row, m_c - 1)] * self.g * (m_c as f64).sqrt() * phase_up;
                    }
                    if s_c == 0 && m_c + 1 < n {
                        rho_h +=
                            rho[(row, n + m_c + 1)] * self.g * (m_c as f64 + 1.0).sqrt() * phase_down;
                    }
                    acc += minus_i * (h_rho - rho_h);
                }

                out[(row, col)] = acc;
            }
        }
    }
}

/// dρ′/dt of the dispersive model, one evaluation.
pub fn dispersive_generator(
    rho: &ComplexMatrix,
    sys: &SystemParams,
    space: &FockSpace,
) -> Result<ComplexMatrix, LindbladError> {
    apply_checked(&Model::Dispersive(*sys), space, rho, 0.0)
}

/// dρ′/dt of the lab-frame excitation-exchange model, one evaluation.
pub fn full_jc_generator(
    rho: &ComplexMatrix,
    params: &FullModelParams,
    space: &FockSpace,
) -> Result<ComplexMatrix, LindbladError> {
    apply_checked(&Model::FullJc(*params), space, rho, 0.0)
}

/// dρ′/dt of the rotating-frame excitation-exchange model at time t.
pub fn jc_interaction_generator(
    rho: &ComplexMatrix,
    params: &FullModelParams,
    space: &FockSpace,
    t: f64,
) -> Result<ComplexMatrix, LindbladError> {
    apply_checked(&Model::FullJcInteraction(*params), space, rho, t)
}

fn apply_checked(
    model: &Model,
    space: &FockSpace,
    rho: &ComplexMatrix,
    t: f64,
) -> Result<ComplexMatrix, LindbladError> {
    let d = space.joint_dim();
    if rho.rows() != d || rho.cols() != d {
        return Err(LindbladError::DimensionMismatch(format!(
            "expected a {d}x{d} joint state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tables = GenTables::build(model, space);
    let mut out = ComplexMatrix::zeros(d, d);
    tables.apply(rho, t, &mut out);
    Ok(out)
}

/// Shared RK4 buffers, reused across steps.
pub(super) struct Rk4Workspace {
    k1: ComplexMatrix,
    k2: ComplexMatrix,
    k3: ComplexMatrix,
    k4: ComplexMatrix,
    stage: ComplexMatrix,
}

impl Rk4Workspace {
    pub(super) fn new(dim: usize) -> Self {
        Self {
            k1: ComplexMatrix::zeros(dim, dim),
            k2: ComplexMatrix::zeros(dim, dim),
            k3: ComplexMatrix::zeros(dim, dim),
            k4: ComplexMatrix::zeros(dim, dim),
            stage: ComplexMatrix::zeros(dim, dim),
        }
    }

    /// One classical fourth-order step of dρ/dt = rhs(ρ, t).
    pub(super) fn step(
        &mut self,
        rho: &mut ComplexMatrix,
        t: f64,
        dt: f64,
        rhs: &mut impl FnMut(&ComplexMatrix, f64, &mut ComplexMatrix),
    ) {
        let half = Complex64::new(0.5 * dt, 0.0);
        let full = Complex64::new(dt, 0.0);

        rhs(rho, t, &mut self.k1);

        self.stage.data_mut().copy_from_slice(rho.data());
        self.stage.add_scaled(half, &self.k1);
        rhs(&self.stage, t + 0.5 * dt, &mut self.k2);

        self.stage.data_mut().copy_from_slice(rho.data());
        self.stage.add_scaled(half, &self.k2);
        rhs(&self.stage, t + 0.5 * dt, &mut self.k3);

        self.stage.data_mut().copy_from_slice(rho.data());
        self.stage.add_scaled(full, &self.k3);
        rhs(&self.stage, t + dt, &mut self.k4);

        let w = dt / 6.0;
        rho.add_scaled(Complex64::new(w, 0.0), &self.k1);
        rho.add_scaled(Complex64::new(2.0 * w, 0.0), &self.k2);
        rho.add_scaled(Complex64::new(2.0 * w, 0.0), &self.k3);
        rho.add_scaled(Complex64::new(w, 0.0), &self.k4);
    }
}

/// Sampled states of one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Hermitized samples, one per time.
    pub states: Vec<ComplexMatrix>,
    /// Step actually used (may be half the request after one retry).
    pub dt_used: f64,
    /// Largest |Tr ρ − 1| observed at the samples.
    pub max_trace_drift: f64,
}

/// Audit a sampled joint state: trace drift, positivity, headroom below the
/// Fock cutoff. Per copy, the top-level population is summed over the atom.
fn audit_sample(
    rho: &ComplexMatrix,
    space: &FockSpace,
    drift: &mut f64,
) -> Result<(), LindbladError> {
    let tr = rho.trace();
    let dev = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
    *drift = drift.max(dev);
    if dev > TRACE_DRIFT_TOL {
        return Err(LindbladError::StepTooLarge(format!(
            "trace drift {dev:.3e} exceeds {TRACE_DRIFT_TOL:.0e}"
        )));
    }
    // A diverging step shows up first in the high-Fock entries while the
    // trace stays exact; classify by positivity before blaming the cutoff.
    if !rho.is_finite() {
        return Err(LindbladError::StepTooLarge("non-finite entries in state".into()));
    }
    if !linalg::is_psd_within(rho, NEGATIVITY_TOL) {
        return Err(LindbladError::StepTooLarge(format!(
            "state eigenvalue below -{NEGATIVITY_TOL:.0e}"
        )));
    }
    let n = space.truncation();
    let top: f64 = (0..2).map(|s| rho[(s * n + n - 1, s * n + n - 1)].re).sum();
    if top > TOP_LEVEL_TOL {
        return Err(LindbladError::TruncationTooSmall(format!(
            "top Fock level holds population {top:.3e}"
        )));
    }
    Ok(())
}

/// Integrate one copy from `initial` to `t_end`, sampling `n_samples` states
/// (endpoints included). The step is halved once automatically if a drift or
/// positivity audit fails; a second failure is an error.
pub fn integrate(
    initial: &JointState,
    model: &Model,
    space: &FockSpace,
    dt: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<Trajectory, LindbladError> {
    if !(dt > 0.0) || !(t_end > initial.time) || n_samples < 2 {
        return Err(LindbladError::InvalidState(
            "need dt > 0, t_end past the initial time, and at least two samples".into(),
        ));
    }
    match integrate_once(initial, model, space, dt, t_end, n_samples) {
        Ok(traj) => Ok(traj),
        // Halving cures step-size problems, not a too-small Fock space.
        Err(LindbladError::StepTooLarge(_)) => {
            integrate_once(initial, model, space, 0.5 * dt, t_end, n_samples)
        }
        Err(e) => Err(e),
    }
}

fn integrate_once(
    initial: &JointState,
    model: &Model,
    space: &FockSpace,
    dt: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<Trajectory, LindbladError> {
    let d = space.joint_dim();
    if initial.density.rows() != d {
        return Err(LindbladError::DimensionMismatch(format!(
            "initial state must be {d}x{d}"
        )));
    }
    let tables = GenTables::build(model, space);
    let mut rhs =
        |rho: &ComplexMatrix, t: f64, out: &mut ComplexMatrix| tables.apply(rho, t, out);

    let span = t_end - initial.time;
    let n_steps = (span / dt).ceil().max(1.0) as usize;
    let dt_eff = span / n_steps as f64;

    let sample_times: Vec<f64> = (0..n_samples)
        .map(|i| initial.time + span * i as f64 / (n_samples - 1) as f64)
        .collect();
    let sample_steps: Vec<usize> = sample_times
        .iter()
        .map(|&ts| (((ts - initial.time) / dt_eff).round() as usize).min(n_steps))
        .collect();

    let mut ws = Rk4Workspace::new(d);
    let mut rho = initial.density.clone();
    let mut drift = 0.0;
    let mut times = Vec::with_capacity(n_samples);
    let mut states = Vec::with_capacity(n_samples);

    let mut next_sample = 0usize;
    for step in 0..=n_steps {
        while next_sample < sample_steps.len() && sample_steps[next_sample] == step {
            let snapshot = rho.hermitize();
            audit_sample(&snapshot, space, &mut drift)?;
            times.push(initial.time + step as f64 * dt_eff);
            states.push(snapshot);
            next_sample += 1;
        }
        if step < n_steps {
            let t = initial.time + step as f64 * dt_eff;
            ws.step(&mut rho, t, dt_eff, &mut rhs);
        }
    }

    Ok(Trajectory { times, states, dt_used: dt_eff, max_trace_drift: drift })
}

/// Atomic coherence multiplier at the trajectory samples: the field is traced
/// out and ⟨e|ρ_atom|g⟩ is divided by its initial value.
pub fn coherence_multiplier(
    traj: &Trajectory,
    space: &FockSpace,
) -> Result<Vec<(f64, Complex64)>, LindbladError> {
    let n = space.truncation();
    let initial = super::partial_trace(&traj.states[0], &[2, n], &[0])?[(0, 1)];
    if initial.norm() < 1e-12 {
        return Err(LindbladError::InvalidState(
            "initial atomic coherence is zero; no multiplier to extract".into(),
        ));
    }
    let mut out = Vec::with_capacity(traj.times.len());
    for (t, state) in traj.times.iter().zip(traj.states.iter()) {
        let coh = super::partial_trace(state, &[2, n], &[0])?[(0, 1)];
        out.push((*t, coh / initial));
    }
    Ok(out)
}

/// Deviations gathered by [`block_evolution_check`].
#[derive(Debug, Clone)]
pub struct BlockEvolutionReport {
    /// Joint-evolution blocks vs the independently evolved field blocks.
    pub max_block_deviation: f64,
    /// Field blocks vs the closed coherent-projector forms.
    pub max_closed_form_deviation: f64,
    /// ⟨g|ρ′|e⟩ vs ⟨e|ρ′|g⟩† along the run.
    pub max_hermiticity_deviation: f64,
}

/// Evolve the three field-space blocks ρ′_ee, ρ′_gg, ρ′_eg of the product
/// state ξ ⊗ |α⟩⟨α| under their decoupled generators
///
///   ee: −iΩ(nX − Xn) + k(2aXa† − nX − Xn)
///   gg: +iΩ(nX − Xn) + k(2aXa† − nX − Xn)
///   eg: −iΩ(nX + Xn + X) + k(2aXa† − nX − Xn)
///
/// and confirm they agree with the blocks of the joint integration and with
/// the closed forms ξ_a|α₊⟩⟨α₊|, ξ_b|α₋⟩⟨α₋|, ξ_c f(t)|α₊⟩⟨α₋|.
pub fn block_evolution_check(
    atom: &ComplexMatrix,
    sys: &SystemParams,
    space: &FockSpace,
    dt: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<BlockEvolutionReport, LindbladError> {
    let initial = JointState::atom_coherent_product(atom, space, sys.alpha)?;
    let joint = integrate(&initial, &Model::Dispersive(*sys), space, dt, t_end, n_samples)?;

    let n = space.truncation();
    let om = sys.omega_eff;
    let k = sys.decay;
    let block_rhs = |shift_sign: f64, eg: bool| {
        move |x: &ComplexMatrix, _t: f64, out: &mut ComplexMatrix| {
            for i in 0..n {
                for j in 0..n {
                    let (mi, mj) = (i as f64, j as f64);
                    let unitary = if eg { mi + mj + 1.0 } else { shift_sign * (mi - mj) };
                    let mut acc = Complex64::new(0.0, -om * unitary) * x[(i, j)]
                        - k * (mi + mj) * x[(i, j)];
                    if i + 1 < n && j + 1 < n {
                        acc += 2.0 * k * ((mi + 1.0) * (mj + 1.0)).sqrt() * x[(i + 1, j + 1)];
                    }
                    out[(i, j)] = acc;
                }
            }
        }
    };

    let xi_a = atom[(0, 0)];
    let xi_b = atom[(1, 1)];
    let xi_c = atom[(0, 1)];
    let field0 = {
        let v = coherent_vector(space, sys.alpha)?;
        ComplexMatrix::outer(&v, &v)
    };

    let span = t_end;
    let n_steps = (span / dt).ceil().max(1.0) as usize;
    let dt_eff = span / n_steps as f64;
    let sample_steps: Vec<usize> = (0..n_samples)
        .map(|i| ((n_steps as f64) * i as f64 / (n_samples - 1) as f64).round() as usize)
        .collect();

    let mut ee = field0.scale(xi_a);
    let mut gg = field0.scale(xi_b);
    let mut eg = field0.scale(xi_c);
    let mut ws = Rk4Workspace::new(n);
    let mut rhs_ee = block_rhs(1.0, false);
    let mut rhs_gg = block_rhs(-1.0, false);
    let mut rhs_eg = block_rhs(0.0, true);

    let mut report = BlockEvolutionReport {
        max_block_deviation: 0.0,
        max_closed_form_deviation: 0.0,
        max_hermiticity_deviation: 0.0,
    };

    let mut sample_idx = 0usize;
    for step in 0..=n_steps {
        while sample_idx < sample_steps.len() && sample_steps[sample_idx] == step {
            let t = step as f64 * dt_eff;
            let joint_state = &joint.states[sample_idx];
            let joint_ee = block_of(joint_state, n, 0, 0);
            let joint_gg = block_of(joint_state, n, 1, 1);
            let joint_eg = block_of(joint_state, n, 0, 1);
            let joint_ge = block_of(joint_state, n, 1, 0);

            report.max_block_deviation = report
                .max_block_deviation
                .max(joint_ee.max_abs_diff(&ee))
                .max(joint_gg.max_abs_diff(&gg))
                .max(joint_eg.max_abs_diff(&eg));
            report.max_hermiticity_deviation = report
                .max_hermiticity_deviation
                .max(joint_ge.max_abs_diff(&joint_eg.dagger()));

            let (ap, am) = analytic::alpha_branches(sys, t);
            let vp = coherent_vector(space, ap)?;
            let vm = coherent_vector(space, am)?;
            let want_ee = ComplexMatrix::outer(&vp, &vp).scale(xi_a);
            let want_gg = ComplexMatrix::outer(&vm, &vm).scale(xi_b);
            let want_eg =
                ComplexMatrix::outer(&vp, &vm).scale(xi_c * analytic::f_factor(sys, t));
            report.max_closed_form_deviation = report
                .max_closed_form_deviation
                .max(ee.max_abs_diff(&want_ee))
                .max(gg.max_abs_diff(&want_gg))
                .max(eg.max_abs_diff(&want_eg));

            sample_idx += 1;
        }
        if step < n_steps {
            let t = step as f64 * dt_eff;
            ws.step(&mut ee, t, dt_eff, &mut rhs_ee);
            ws.step(&mut gg, t, dt_eff, &mut rhs_gg);
            ws.step(&mut eg, t, dt_eff, &mut rhs_eg);
        }
    }
    Ok(report)
}

fn block_of(joint: &ComplexMatrix, n: usize, s_row: usize, s_col: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |m, l| joint[(s_row * n + m, s_col * n + l)])
}

/// Side-by-side comparison of the rotating-frame excitation-exchange model
/// against its dispersive approximation.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    /// Largest |m_full(t) − m_dispersive(t)| over the samples.
    pub max_multiplier_deviation: f64,
    /// (time, full-model multiplier, dispersive multiplier) samples.
    pub samples: Vec<(f64, Complex64, Complex64)>,
    pub dispersive_condition_met: bool,
}

/// Integrate the same superposition-atom initial state under both models and
/// compare the extracted coherence multipliers.
pub fn dispersive_validity_check(
    params: &FullModelParams,
    space: &FockSpace,
    t_end: f64,
    n_samples: usize,
    dt_full: f64,
    dt_dispersive: f64,
) -> Result<ValidityReport, LindbladError> {
    let half = Complex64::new(0.5, 0.0);
    let atom = ComplexMatrix::from_rows(&[vec![half, half], vec![half, half]]);
    let initial = JointState::atom_coherent_product(&atom, space, params.alpha)?;

    let sys = params.effective_params();
    let disp = integrate(
        &initial,
        &Model::Dispersive(sys),
        space,
        dt_dispersive,
        t_end,
        n_samples,
    )?;
    let full = integrate(
        &initial,
        &Model::FullJcInteraction(*params),
        space,
        dt_full,
        t_end,
        n_samples,
    )?;

    let m_disp = coherence_multiplier(&disp, space)?;
    let m_full = coherence_multiplier(&full, space)?;
    let mut max_dev: f64 = 0.0;
    let mut samples = Vec::with_capacity(n_samples);
    for ((t, md), (_, mf)) in m_disp.iter().zip(m_full.iter()) {
        max_dev = max_dev.max((md - mf).norm());
        samples.push((*t, *mf, *md));
    }
    Ok(ValidityReport {
        max_multiplier_deviation: max_dev,
        samples,
        dispersive_condition_met: params.dispersive_valid(),
    })
}
