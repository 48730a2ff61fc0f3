//! Joint integration of two independent atom–cavity copies.
//!
//! The full (2N)²-dimensional density matrix of atom₁ ⊗ field₁ ⊗ atom₂ ⊗
//! field₂ evolves under the sum of the two local generators; both fields are
//! then traced out to give the two-atom state. No part of the two-atom map
//! is assumed — this is the end-to-end cross-check for the channel-factor
//! evolution and the concurrence trajectory.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{ewl_state, EwlParams, SystemParams};
use crate::linalg::{self, ComplexMatrix};

use super::evolution::Rk4Workspace;
use super::{
    coherent_vector, FockSpace, LindbladError, NEGATIVITY_TOL, TOP_LEVEL_TOL, TRACE_DRIFT_TOL,
};

/// Largest per-copy truncation accepted for the joint two-copy state; the
/// (2·24)² density matrix is the desk-scale ceiling.
pub const TWO_COPY_MEMORY_CAP: usize = 24;

/// Two-atom states sampled from the joint two-copy evolution.
#[derive(Debug, Clone)]
pub struct TwoCopyTrajectory {
    pub times: Vec<f64>,
    /// 4×4 two-atom density matrices (both fields traced out), raw apart
    /// from Hermitization; the trace carries the truncation's norm deficit.
    pub atoms: Vec<ComplexMatrix>,
    pub max_trace_drift: f64,
}

impl TwoCopyTrajectory {
    /// Concurrence at a sample, evaluated by the general spin-flip spectrum
    /// on the renormalized state — an independent route from the closed-form
    /// channel expression.
    pub fn concurrence(&self, idx: usize) -> Result<f64, LindbladError> {
        let raw = &self.atoms[idx];
        let tr = raw.trace().re;
        let rho = crate::analytic::TwoQubitDensity::new(raw.hermitize().scale_re(1.0 / tr))
            .map_err(|e| LindbladError::InvalidState(e.to_string()))?;
        crate::analytic::concurrence_wootters(&rho)
            .map_err(|e| LindbladError::InvalidState(e.to_string()))
    }
}

struct TwoCopyTables {
    n_fock: usize,
    /// Dimension of one copy, 2N.
    copy_dim: usize,
    /// Dispersive diagonal per copy index.
    v: Vec<f64>,
    /// Photon number per copy index.
    photon: Vec<f64>,
    k: f64,
}

impl TwoCopyTables {
    fn build(sys: &SystemParams, space: &FockSpace) -> Self {
        let n = space.truncation();
        let copy_dim = 2 * n;
        let mut v = vec![0.0; copy_dim];
        let mut photon = vec![0.0; copy_dim];
        for s in 0..2 {
            for m in 0..n {
                let r = s * n + m;
                photon[r] = m as f64;
                v[r] = if s == 0 {
                    sys.omega_eff * (m as f64 + 1.0)
                } else {
                    -sys.omega_eff * m as f64
                };
            }
        }
        Self { n_fock: n, copy_dim, v, photon, k: sys.decay }
    }

    /// out = (L₁ ⊗ I + I ⊗ L₂) ρ, rows evaluated in parallel.
    fn apply(&self, rho: &ComplexMatrix, out: &mut ComplexMatrix) {
        let n = self.n_fock;
        let d = self.copy_dim;
        let dim = d * d;
        let k = self.k;
        let rho_data = rho.data();
        let v = &self.v;
        let photon = &self.photon;

        out.data_mut()
            .par_chunks_mut(dim)
            .enumerate()
            .for_each(|(row, out_row)| {
                let (r1, r2) = (row / d, row % d);
                let can_shift_r1 = r1 % n + 1 < n;
                let can_shift_r2 = r2 % n + 1 < n;
                let sq_r1 = (photon[r1] + 1.0).sqrt();
                let sq_r2 = (photon[r2] + 1.0).sqrt();
                let row_v = v[r1] + v[r2];
                let row_ph = photon[r1] + photon[r2];
                let base = row * dim;
                let shift1 = base + d * dim + d; // (r1+1, c1+1) block offset
                let shift2 = base + dim + 1; // (r2+1, c2+1) offset

                for c1 in 0..d {
                    let col_base = c1 * d;
                    let can_shift_c1 = c1 % n + 1 < n;
                    let w1 = 2.0 * k * sq_r1 * (photon[c1] + 1.0).sqrt();
                    for c2 in 0..d {
                        let col = col_base + c2;
                        let r = rho_data[base + col];
                        let freq = row_v - v[c1] - v[c2];
                        let damp = k * (row_ph + photon[c1] + photon[c2]);
                        let mut acc = Complex64::new(
                            freq * r.im - damp * r.re,
                            -freq * r.re - damp * r.im,
                        );
                        if can_shift_r1 && can_shift_c1 {
                            acc += w1 * rho_data[shift1 + col];
                        }
                        if can_shift_r2 && c2 % n + 1 < n {
                            let w2 = 2.0 * k * sq_r2 * (photon[c2] + 1.0).sqrt();
                            acc += w2 * rho_data[shift2 + col];
                        }
                        out_row[col] = acc;
                    }
                }
            });
    }
}

/// Build the joint initial state ρ_atoms ⊗ |α⟩⟨α| ⊗ |α⟩⟨α| (copy-major
/// ordering: atom₁, field₁, atom₂, field₂).
fn joint_initial(
    ewl: &EwlParams,
    space: &FockSpace,
    alpha: Complex64,
) -> Result<ComplexMatrix, LindbladError> {
    let n = space.truncation();
    let d = 2 * n;
    let dim = d * d;
    let v = coherent_vector(space, alpha)?;
    let atoms = ewl_state(ewl);
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for s1 in 0..2 {
        for m1 in 0..n {
            for s2 in 0..2 {
                for m2 in 0..n {
                    let row = (s1 * n + m1) * d + s2 * n + m2;
                    for t1 in 0..2 {
                        for l1 in 0..n {
                            for t2 in 0..2 {
                                for l2 in 0..n {
                                    let col = (t1 * n + l1) * d + t2 * n + l2;
                                    let w = atoms.matrix()[(2 * s1 + s2, 2 * t1 + t2)];
                                    if w.norm_sqr() == 0.0 {
                                        continue;
                                    }
                                    rho[(row, col)] =
                                        w * v[m1] * v[l1].conj() * v[m2] * v[l2].conj();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rho)
}

/// Trace out both fields: ρ_atoms[(s1 s2), (t1 t2)] = Σ_{m1 m2} ρ[..].
fn trace_fields(rho: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = 2 * n;
    let mut out = ComplexMatrix::zeros(4, 4);
    for s1 in 0..2 {
        for s2 in 0..2 {
            for t1 in 0..2 {
                for t2 in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m1 in 0..n {
                        for m2 in 0..n {
                            let row = (s1 * n + m1) * d + s2 * n + m2;
                            let col = (t1 * n + m1) * d + t2 * n + m2;
                            acc += rho[(row, col)];
                        }
                    }
                    out[(2 * s1 + s2, 2 * t1 + t2)] = acc;
                }
            }
        }
    }
    out
}

fn audit_joint(rho: &ComplexMatrix, n: usize, drift: &mut f64) -> Result<(), LindbladError> {
    let tr = rho.trace();
    let dev = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
    *drift = drift.max(dev);
    // The truncated coherent tails already cost up to the tail-mass budget
    // per field, on top of the integrator's own drift allowance.
    if dev > TRACE_DRIFT_TOL + 4.0 * super::TAIL_MASS_TOL {
        return Err(LindbladError::StepTooLarge(format!(
            "joint trace drift {dev:.3e}"
        )));
    }
    if !rho.is_finite() {
        return Err(LindbladError::StepTooLarge("non-finite entries in joint state".into()));
    }
    if !linalg::is_psd_within(rho, NEGATIVITY_TOL) {
        return Err(LindbladError::StepTooLarge(
            "joint state eigenvalue below the negativity budget".into(),
        ));
    }
    let d = 2 * n;
    // Population of the top Fock level of either field.
    let mut top = 0.0;
    for s1 in 0..2 {
        for s2 in 0..2 {
            for m2 in 0..n {
                let idx = (s1 * n + n - 1) * d + s2 * n + m2;
                top += rho[(idx, idx)].re;
            }
            for m1 in 0..n {
                let idx = (s1 * n + m1) * d + s2 * n + n - 1;
                top += rho[(idx, idx)].re;
            }
        }
    }
    if top > 2.0 * TOP_LEVEL_TOL {
        return Err(LindbladError::TruncationTooSmall(format!(
            "top Fock level population {top:.3e} in the joint run"
        )));
    }
    Ok(())
}

/// Integrate the two-copy system and return the two-atom marginal at
/// `n_samples` evenly spaced times (endpoints included).
pub fn two_copy_oracle(
    ewl: &EwlParams,
    sys: &SystemParams,
    space: &FockSpace,
    dt: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<TwoCopyTrajectory, LindbladError> {
    let n = space.truncation();
    if n > TWO_COPY_MEMORY_CAP {
        return Err(LindbladError::MemoryBudget(format!(
            "truncation {n} exceeds the two-copy cap of {TWO_COPY_MEMORY_CAP}"
        )));
    }
    if !(dt > 0.0) || !(t_end > 0.0) || n_samples < 2 {
        return Err(LindbladError::InvalidState(
            "need dt > 0, t_end > 0 and at least two samples".into(),
        ));
    }

    let tables = TwoCopyTables::build(sys, space);
    let mut rho = joint_initial(ewl, space, sys.alpha)?;
    let dim = rho.rows();

    let n_steps = (t_end / dt).ceil().max(1.0) as usize;
    let dt_eff = t_end / n_steps as f64;
    let sample_steps: Vec<usize> = (0..n_samples)
        .map(|i| ((n_steps as f64) * i as f64 / (n_samples - 1) as f64).round() as usize)
        .collect();

    let mut ws = Rk4Workspace::new(dim);
    let mut rhs = |r: &ComplexMatrix, _t: f64, out: &mut ComplexMatrix| tables.apply(r, out);

    let mut drift = 0.0;
    let mut times = Vec::with_capacity(n_samples);
    let mut atoms = Vec::with_capacity(n_samples);
    let mut next = 0usize;
    for step in 0..=n_steps {
        while next < sample_steps.len() && sample_steps[next] == step {
            audit_joint(&rho, n, &mut drift)?;
            times.push(step as f64 * dt_eff);
            atoms.push(trace_fields(&rho, n).hermitize());
            next += 1;
        }
        if step < n_steps {
            ws.step(&mut rho, step as f64 * dt_eff, dt_eff, &mut rhs);
        }
    }

    Ok(TwoCopyTrajectory { times, atoms, max_trace_drift: drift })
}
