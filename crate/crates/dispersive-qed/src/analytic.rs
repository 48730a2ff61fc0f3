//! Closed-form dynamics of two two-level atoms in independent dissipative
//! cavities, in the dispersive regime.
//!
//! Each atom sits in its own single-mode cavity prepared in a coherent state
//! |α⟩ and couples dispersively with effective strength Ω while the cavity
//! decays at rate k. Tracing out the field leaves the atom populations fixed
//! and multiplies the atomic coherence by f(t)·λ(t), where
//!
//!   f(t) = exp{−iΩt + |α|²(e^{−2kt} − 1)}
//!            · exp{ |α|² k/(k+iΩ) · [1 − e^{−2(k+iΩ)t}] }
//!   λ(t) = ⟨α₋(t)|α₊(t)⟩,   α±(t) = α e^{−(k±iΩ)t}.
//!
//! For two identical, non-interacting copies the two-atom density matrix in
//! the basis |ee⟩, |eg⟩, |ge⟩, |gg⟩ keeps its diagonal, picks up one factor
//! of fλ per single-coherence element, (fλ)² on the outer corner and |fλ|²
//! on the inner corner — an X-structure-preserving map. Everything downstream
//! (concurrence, sudden-death intervals, the stationary entanglement limit,
//! linear entropy of the marginals) follows from these two scalar factors.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, kron, ComplexMatrix, LinalgError};

/// Concurrence below this is treated as exactly dead when hunting for
/// sudden-death intervals.
const ESD_ZERO_TOL: f64 = 1e-12;
/// Bisection tolerance (in t) for sudden-death interval endpoints.
const ESD_BISECT_TOL: f64 = 1e-8;
/// Bisection tolerance (in kt) for the threshold time.
const THRESHOLD_KT_TOL: f64 = 1e-6;
/// Fraction of the initial-to-stationary concurrence drop used by the default
/// threshold level: the level sits where the decaying oscillation amplitude
/// becomes invisible at this relative scale.
const DEFAULT_LEVEL_FRACTION: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("no level crossing found in the search range")]
    NoSolution,
    #[error("invalid concurrence level: {0}")]
    BadC(String),
    #[error("time grid must contain at least two strictly increasing points")]
    EmptyGrid,
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Physical parameters of one atom–cavity copy. Both cavities share the same
/// parameters: equal decay rates, equal couplings, equal initial amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Effective dispersive coupling Ω (rad per unit time), strictly positive.
    pub omega_eff: f64,
    /// Cavity decay constant k (inverse time), non-negative.
    pub decay: f64,
    /// Initial coherent amplitude of each cavity field.
    pub alpha: Complex64,
}

impl SystemParams {
    pub fn new(omega_eff: f64, decay: f64, alpha: Complex64) -> Result<Self, AnalyticError> {
        if !(omega_eff > 0.0) || !omega_eff.is_finite() {
            return Err(AnalyticError::DomainError(format!(
                "omega_eff must be positive and finite, got {omega_eff}"
            )));
        }
        if !(decay >= 0.0) || !decay.is_finite() {
            return Err(AnalyticError::DomainError(format!(
                "decay must be non-negative and finite, got {decay}"
            )));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(AnalyticError::DomainError("alpha must be finite".into()));
        }
        Ok(Self { omega_eff, decay, alpha })
    }
}

/// Which Bell-like state the white-noise admixture is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EwlFamily {
    /// μ|eg⟩ + ν|ge⟩
    Phi,
    /// μ|ee⟩ + ν|gg⟩
    Psi,
}

/// Extended Werner-like initial state of the two atoms:
/// p·|ψ⟩⟨ψ| + (1−p)/4·I with |ψ⟩ a Bell-like state of weights μ, ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwlParams {
    pub purity: f64,
    pub mu: Complex64,
    pub nu: Complex64,
    pub family: EwlFamily,
}

impl EwlParams {
    pub fn new(
        purity: f64,
        mu: Complex64,
        nu: Complex64,
        family: EwlFamily,
    ) -> Result<Self, AnalyticError> {
        if !(0.0..=1.0).contains(&purity) {
            return Err(AnalyticError::DomainError(format!(
                "purity must lie in [0, 1], got {purity}"
            )));
        }
        let norm = mu.norm_sqr() + nu.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(AnalyticError::DomainError(format!(
                "|mu|^2 + |nu|^2 must equal 1, got {norm}"
            )));
        }
        Ok(Self { purity, mu, nu, family })
    }

    /// μ = ν = 1/√2, the balanced case used throughout the figure sweeps.
    pub fn balanced(purity: f64, family: EwlFamily) -> Result<Self, AnalyticError> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(purity, h, h, family)
    }

    fn mu_nu_abs(&self) -> f64 {
        (self.mu * self.nu).norm()
    }
}

/// The pair (f(t), λ(t)) that fully determines the two-atom map at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelFactors {
    pub f: Complex64,
    pub lam: Complex64,
    pub t: f64,
}

impl ChannelFactors {
    pub fn new(f: Complex64, lam: Complex64, t: f64) -> Result<Self, AnalyticError> {
        if !(t >= 0.0) {
            return Err(AnalyticError::DomainError(format!("t must be >= 0, got {t}")));
        }
        if f.norm() > 1.0 + 1e-12 || lam.norm() > 1.0 + 1e-12 {
            return Err(AnalyticError::DomainError(format!(
                "|f| and |lam| must not exceed 1, got |f| = {}, |lam| = {}",
                f.norm(),
                lam.norm()
            )));
        }
        if t == 0.0 && (f != Complex64::new(1.0, 0.0) || lam != Complex64::new(1.0, 0.0)) {
            return Err(AnalyticError::DomainError(
                "at t = 0 both factors must be exactly 1".into(),
            ));
        }
        Ok(Self { f, lam, t })
    }

    /// Combined coherence multiplier f(t)·λ(t).
    pub fn multiplier(&self) -> Complex64 {
        self.f * self.lam
    }
}

/// Two-qubit basis ordering used everywhere: |1⟩=|ee⟩, |2⟩=|eg⟩, |3⟩=|ge⟩,
/// |4⟩=|gg⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Atom1,
    Atom2,
}

/// 4×4 two-qubit density matrix with the X zero pattern: only the diagonal
/// and anti-diagonal entries are populated.
#[derive(Debug, Clone, PartialEq)]
pub struct XStateDensity {
    m: ComplexMatrix,
}

impl XStateDensity {
    pub fn new(m: ComplexMatrix) -> Result<Self, AnalyticError> {
        validate_density(&m)?;
        for &(i, j) in &[(0usize, 1usize), (0, 2), (1, 3), (2, 3)] {
            if m[(i, j)].norm() > 1e-12 || m[(j, i)].norm() > 1e-12 {
                return Err(AnalyticError::InvalidState(format!(
                    "X zero pattern violated at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn rho11(&self) -> f64 {
        self.m[(0, 0)].re
    }
    pub fn rho22(&self) -> f64 {
        self.m[(1, 1)].re
    }
    pub fn rho33(&self) -> f64 {
        self.m[(2, 2)].re
    }
    pub fn rho44(&self) -> f64 {
        self.m[(3, 3)].re
    }
    /// Outer-corner coherence ⟨ee|ρ|gg⟩.
    pub fn rho14(&self) -> Complex64 {
        self.m[(0, 3)]
    }
    /// Inner-corner coherence ⟨eg|ρ|ge⟩.
    pub fn rho23(&self) -> Complex64 {
        self.m[(1, 2)]
    }
}

/// General 4×4 two-qubit density matrix (Hermitian, unit trace, PSD).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    m: ComplexMatrix,
}

impl TwoQubitDensity {
    pub fn new(m: ComplexMatrix) -> Result<Self, AnalyticError> {
        validate_density(&m)?;
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }
}

impl From<XStateDensity> for TwoQubitDensity {
    fn from(x: XStateDensity) -> Self {
        Self { m: x.m }
    }
}

fn validate_density(m: &ComplexMatrix) -> Result<(), AnalyticError> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(AnalyticError::InvalidState(format!(
            "expected a 4x4 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let herm = m.hermiticity_deviation();
    if herm > 1e-12 {
        return Err(AnalyticError::InvalidState(format!(
            "not Hermitian: max |m - m†| = {herm:.3e}"
        )));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(AnalyticError::InvalidState(format!("trace must be 1, got {tr}")));
    }
    let vals = linalg::eig_hermitian(&m.hermitize())?;
    if let Some(&bad) = vals.iter().find(|&&l| l < -1e-10) {
        return Err(AnalyticError::InvalidState(format!(
            "negative eigenvalue {bad:.3e}"
        )));
    }
    Ok(())
}

/// The two coherent branches (α₊(t), α₋(t)) = (α e^{−(k+iΩ)t}, α e^{−(k−iΩ)t}).
pub fn alpha_branches(sys: &SystemParams, t: f64) -> (Complex64, Complex64) {
    assert!(t >= 0.0, "time must be non-negative");
    let k = sys.decay;
    let om = sys.omega_eff;
    let plus = sys.alpha * (-Complex64::new(k, om) * t).exp();
    let minus = sys.alpha * (-Complex64::new(k, -om) * t).exp();
    (plus, minus)
}

/// Overlap ⟨β|α⟩ = exp(−|β|²/2 − |α|²/2 + β̄·α) of two coherent states.
pub fn coherent_overlap(beta: Complex64, alpha: Complex64) -> Complex64 {
    (Complex64::new(-0.5 * (beta.norm_sqr() + alpha.norm_sqr()), 0.0) + beta.conj() * alpha).exp()
}

/// Decoherence factor f(t) attached to the atomic coherence block.
pub fn f_factor(sys: &SystemParams, t: f64) -> Complex64 {
    assert!(t >= 0.0, "time must be non-negative");
    let k = sys.decay;
    let om = sys.omega_eff;
    let asq = sys.alpha.norm_sqr();
    let first = Complex64::new(asq * ((-2.0 * k * t).exp() - 1.0), -om * t);
    let kio = Complex64::new(k, om);
    let second = Complex64::new(asq * k, 0.0) / kio
        * (Complex64::new(1.0, 0.0) - (-2.0 * kio * t).exp());
    (first + second).exp()
}

/// Branch overlap λ(t) = ⟨α₋(t)|α₊(t)⟩
///   = exp(−|α|² e^{−2kt} + |α|² e^{−2(k+iΩ)t}).
pub fn lambda_factor(sys: &SystemParams, t: f64) -> Complex64 {
    assert!(t >= 0.0, "time must be non-negative");
    let k = sys.decay;
    let om = sys.omega_eff;
    let asq = sys.alpha.norm_sqr();
    let arg = Complex64::new(-asq * (-2.0 * k * t).exp(), 0.0)
        + asq * (-2.0 * Complex64::new(k, om) * t).exp();
    arg.exp()
}

/// Both channel factors at time t, with their invariants enforced.
pub fn channel(sys: &SystemParams, t: f64) -> ChannelFactors {
    let ch = ChannelFactors::new(f_factor(sys, t), lambda_factor(sys, t), t);
    ch.expect("channel factors violate |f|, |lam| <= 1")
}

/// |f(t)·λ(t)|², the decoherence weight entering the concurrence.
fn multiplier_sqr(sys: &SystemParams, t: f64) -> f64 {
    (f_factor(sys, t) * lambda_factor(sys, t)).norm_sqr()
}

/// Density matrix of the extended Werner-like state.
pub fn ewl_state(ewl: &EwlParams) -> XStateDensity {
    let p = ewl.purity;
    let w = (1.0 - p) / 4.0;
    let mut m = ComplexMatrix::from_diag_re(&[w, w, w, w]);
    match ewl.family {
        EwlFamily::Phi => {
            m[(1, 1)] += p * ewl.mu.norm_sqr();
            m[(2, 2)] += p * ewl.nu.norm_sqr();
            let coh = ewl.mu * ewl.nu.conj() * p;
            m[(1, 2)] = coh;
            m[(2, 1)] = coh.conj();
        }
        EwlFamily::Psi => {
            m[(0, 0)] += p * ewl.mu.norm_sqr();
            m[(3, 3)] += p * ewl.nu.norm_sqr();
            let coh = ewl.mu * ewl.nu.conj() * p;
            m[(0, 3)] = coh;
            m[(3, 0)] = coh.conj();
        }
    }
    XStateDensity::new(m).expect("EWL construction yields a valid X state")
}

/// Apply the two-atom map for one time step's channel factors: diagonals are
/// untouched, single coherences pick up fλ, the outer corner (fλ)² and the
/// inner corner |fλ|².
pub fn evolve_two_atom(
    rho0: &XStateDensity,
    ch: &ChannelFactors,
) -> Result<XStateDensity, AnalyticError> {
    let m = ch.multiplier();
    let msq = m * m;
    let mabs2 = Complex64::new(m.norm_sqr(), 0.0);
    let src = rho0.matrix();
    let mut out = src.clone();
    out[(0, 3)] = src[(0, 3)] * msq;
    out[(3, 0)] = out[(0, 3)].conj();
    out[(1, 2)] = src[(1, 2)] * mabs2;
    out[(2, 1)] = out[(1, 2)].conj();
    XStateDensity::new(out)
}

/// Wootters concurrence of an arbitrary two-qubit state.
///
/// The spin-flipped product ρ(σy⊗σy)ρ*(σy⊗σy) is non-Hermitian; its spectrum
/// is obtained as that of the Hermitian PSD matrix √ρ(σy⊗σy)ρ*(σy⊗σy)√ρ,
/// which shares it.
pub fn concurrence_wootters(rho: &TwoQubitDensity) -> Result<f64, AnalyticError> {
    let m = rho.matrix().hermitize();
    let yy = kron(&linalg::sigma_y(), &linalg::sigma_y());
    let sqrt_rho = linalg::mat_fn_sqrt_psd(&m)?;
    let flipped = yy.matmul(&m.conj()).matmul(&yy);
    let t = sqrt_rho.matmul(&flipped).matmul(&sqrt_rho).hermitize();
    let vals = linalg::eig_hermitian(&t)?;
    let roots: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Closed-form concurrence for X states:
/// 2·max{0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)}.
pub fn concurrence_x(rho: &XStateDensity) -> f64 {
    let inner = rho.rho23().norm() - (rho.rho11() * rho.rho44()).sqrt();
    let outer = rho.rho14().norm() - (rho.rho22() * rho.rho33()).sqrt();
    (2.0 * inner.max(outer).max(0.0)).clamp(0.0, 1.0)
}

/// Concurrence of an evolved EWL state straight from the channel factors:
/// C(t) = max{0, 2p|fλ|²|μν| − (1−p)/2}, identical for both families.
pub fn concurrence_ewl(sys: &SystemParams, ewl: &EwlParams, t: f64) -> f64 {
    assert!(t >= 0.0, "time must be non-negative");
    concurrence_from_multiplier(ewl, multiplier_sqr(sys, t))
}

fn concurrence_from_multiplier(ewl: &EwlParams, mult_sqr: f64) -> f64 {
    let raw = 2.0 * ewl.purity * mult_sqr * ewl.mu_nu_abs() - (1.0 - ewl.purity) / 2.0;
    raw.max(0.0)
}

/// t → ∞ limit of |f(t)λ(t)|²: exp(−2|α|²Ω²/(k²+Ω²)).
fn asymptotic_multiplier_sqr(sys: &SystemParams) -> f64 {
    let k2 = sys.decay * sys.decay;
    let om2 = sys.omega_eff * sys.omega_eff;
    (-2.0 * sys.alpha.norm_sqr() * om2 / (k2 + om2)).exp()
}

/// Stationary (long-lived) entanglement:
/// max{0, 2p|μν|·exp(−2|α|²Ω²/(k²+Ω²)) − (1−p)/2}.
///
/// Requires k > 0; without dissipation |fλ| oscillates forever and no
/// stationary limit exists.
pub fn asymptotic_concurrence(sys: &SystemParams, ewl: &EwlParams) -> Result<f64, AnalyticError> {
    if sys.decay <= 0.0 {
        return Err(AnalyticError::DomainError(
            "no stationary limit for k = 0: the channel factors keep oscillating".into(),
        ));
    }
    Ok(concurrence_from_multiplier(ewl, asymptotic_multiplier_sqr(sys)))
}

/// A maximal span of time over which the two atoms are completely
/// disentangled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// The interval still covers the end of the grid; whether entanglement
    /// ever revives past it is outside the scanned window.
    pub open_ended: bool,
}

/// Locate entanglement sudden-death intervals on a time grid.
///
/// Grid points where the concurrence sits below 1e-12 are grouped into
/// maximal runs; each run boundary is then refined by bisecting the smooth
/// pre-clamp expression 2p|fλ|²|μν| − (1−p)/2 between the bracketing grid
/// points.
pub fn esd_intervals(
    sys: &SystemParams,
    ewl: &EwlParams,
    t_grid: &[f64],
) -> Result<Vec<EsdInterval>, AnalyticError> {
    if t_grid.len() < 2 {
        return Err(AnalyticError::EmptyGrid);
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] < 0.0 {
        return Err(AnalyticError::EmptyGrid);
    }

    // Smooth expression whose max{0, ·} clamp is the concurrence; bisect this
    // rather than the kinked concurrence itself.
    let smooth = |t: f64| {
        2.0 * ewl.purity * multiplier_sqr(sys, t) * ewl.mu_nu_abs() - (1.0 - ewl.purity) / 2.0
            - ESD_ZERO_TOL
    };
    let dead: Vec<bool> = t_grid.iter().map(|&t| smooth(t) < 0.0).collect();

    let mut intervals = Vec::new();
    let mut i = 0;
    while i < t_grid.len() {
        if !dead[i] {
            i += 1;
            continue;
        }
        let run_start = i;
        while i + 1 < t_grid.len() && dead[i + 1] {
            i += 1;
        }
        let run_end = i;

        let t_start = if run_start == 0 {
            t_grid[0]
        } else {
            bisect(&smooth, t_grid[run_start - 1], t_grid[run_start], ESD_BISECT_TOL)
        };
        let (t_end, open_ended) = if run_end == t_grid.len() - 1 {
            (*t_grid.last().unwrap(), true)
        } else {
            (
                bisect(&smooth, t_grid[run_end], t_grid[run_end + 1], ESD_BISECT_TOL),
                false,
            )
        };
        intervals.push(EsdInterval { t_start, t_end, open_ended });
        i += 1;
    }
    Ok(intervals)
}

/// Bisection for a sign change of `f` on [a, b], to absolute tolerance `tol`
/// in the argument. Falls back to the midpoint if the bracket is degenerate.
fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.signum() == fb.signum() {
        return 0.5 * (a + b);
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Default level for [`threshold_time`]: a hair above the stationary value,
/// at the fraction of the initial-to-stationary drop where the decaying
/// oscillation of C(t) has become invisible.
pub fn default_threshold_level(sys: &SystemParams, ewl: &EwlParams) -> Result<f64, AnalyticError> {
    let c_inf = asymptotic_concurrence(sys, ewl)?;
    let c0 = concurrence_ewl(sys, ewl, 0.0);
    Ok(c_inf + DEFAULT_LEVEL_FRACTION * (c0 - c_inf))
}

/// Largest scaled time kt at which C(t) still crosses the level c; past it
/// C(t) − c keeps a single sign up to `t_search_max`. Located by a dense scan
/// resolving the 2Ω oscillation followed by bisection to 1e-6 in kt.
///
/// Requires k > 0 and the balanced weights μ = ν = 1/√2 used by the level
/// condition. Returns `NoSolution` when the level is never crossed (in
/// particular when c exceeds every attainable concurrence value).
pub fn threshold_time(
    sys: &SystemParams,
    ewl: &EwlParams,
    c: f64,
    t_search_max: f64,
) -> Result<f64, AnalyticError> {
    if sys.decay <= 0.0 {
        return Err(AnalyticError::DomainError(
            "threshold time needs k > 0".into(),
        ));
    }
    if (ewl.mu_nu_abs() - 0.5).abs() > 1e-12 {
        return Err(AnalyticError::DomainError(
            "threshold time is defined for balanced weights mu = nu = 1/sqrt(2)".into(),
        ));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(AnalyticError::BadC(format!("level must be finite and >= 0, got {c}")));
    }
    if !(t_search_max > 0.0) || !t_search_max.is_finite() {
        return Err(AnalyticError::DomainError(format!(
            "t_search_max must be positive and finite, got {t_search_max}"
        )));
    }

    let g = |t: f64| concurrence_ewl(sys, ewl, t) - c;

    // Step fine enough to resolve the 2Ω oscillation of |fλ|².
    let step = std::f64::consts::PI / (8.0 * sys.omega_eff);
    let n_steps = ((t_search_max / step).ceil() as usize).max(16);
    let step = t_search_max / n_steps as f64;

    let mut last_bracket: Option<(f64, f64)> = None;
    let mut t_prev = 0.0;
    let mut g_prev = g(0.0);
    for i in 1..=n_steps {
        let t = i as f64 * step;
        let g_cur = g(t);
        if (g_prev > 0.0) != (g_cur > 0.0) {
            last_bracket = Some((t_prev, t));
        }
        t_prev = t;
        g_prev = g_cur;
    }

    match last_bracket {
        None => Err(AnalyticError::NoSolution),
        Some((a, b)) => {
            let t_root = bisect(&g, a, b, THRESHOLD_KT_TOL / sys.decay);
            Ok(sys.decay * t_root)
        }
    }
}

/// Linear entropy S = 1 − Tr(ρ²) of a unit-trace matrix; zero on pure states.
pub fn linear_entropy(rho: &ComplexMatrix) -> Result<f64, AnalyticError> {
    if !rho.is_square() {
        return Err(AnalyticError::NotDensity(format!(
            "expected a square matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(AnalyticError::NotDensity(format!("trace must be 1, got {tr}")));
    }
    let n = rho.rows();
    let mut purity = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            purity += rho[(i, j)] * rho[(j, i)];
        }
    }
    let mut s = 1.0 - purity.re;
    if s < 0.0 && s > -1e-12 {
        s = 0.0;
    }
    Ok(s)
}

/// Marginal state of one atom, tracing the other out.
pub fn reduced_atom(rho: &TwoQubitDensity, which: Atom) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                let (r, c) = match which {
                    Atom::Atom1 => (2 * i + k, 2 * j + k),
                    Atom::Atom2 => (2 * k + i, 2 * k + j),
                };
                acc += m[(r, c)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sys(omega: f64, decay: f64, alpha: Complex64) -> SystemParams {
        SystemParams::new(omega, decay, alpha).unwrap()
    }

    fn random_sys(rng: &mut StdRng) -> SystemParams {
        sys(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.001..0.5),
            c(rng.gen_range(0.2..1.5), rng.gen_range(-0.5..0.5)),
        )
    }

    fn random_ewl(rng: &mut StdRng, family: EwlFamily) -> EwlParams {
        let p = rng.gen_range(0.0..1.0);
        let mu_abs = rng.gen_range(0.05f64..0.95).sqrt();
        let nu_abs = (1.0 - mu_abs * mu_abs).sqrt();
        let phase_mu = rng.gen_range(0.0..std::f64::consts::TAU);
        let phase_nu = rng.gen_range(0.0..std::f64::consts::TAU);
        EwlParams::new(
            p,
            Complex64::from_polar(mu_abs, phase_mu),
            Complex64::from_polar(nu_abs, phase_nu),
            family,
        )
        .unwrap()
    }

    fn random_x_state(rng: &mut StdRng) -> XStateDensity {
        let mut d: Vec<f64> = (0..4).map(|_| rng.gen_range(0.02..1.0)).collect();
        let norm: f64 = d.iter().sum();
        d.iter_mut().for_each(|x| *x /= norm);
        let u14 = rng.gen_range(0.0..0.95);
        let u23 = rng.gen_range(0.0..0.95);
        let r14 = Complex64::from_polar(
            u14 * (d[0] * d[3]).sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let r23 = Complex64::from_polar(
            u23 * (d[1] * d[2]).sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let mut m = ComplexMatrix::from_diag_re(&d);
        m[(0, 3)] = r14;
        m[(3, 0)] = r14.conj();
        m[(1, 2)] = r23;
        m[(2, 1)] = r23.conj();
        XStateDensity::new(m).unwrap()
    }

    fn bell_state() -> TwoQubitDensity {
        let ewl = EwlParams::balanced(1.0, EwlFamily::Psi).unwrap();
        ewl_state(&ewl).into()
    }

    #[test]
    fn branches_at_zero_time() {
        let s = sys(1.0, 0.1, c(0.7, 0.3));
        let (p, m) = alpha_branches(&s, 0.0);
        assert_eq!(p, s.alpha);
        assert_eq!(m, s.alpha);
    }

    #[test]
    fn branches_pure_phase_rotation() {
        let s = sys(1.0, 0.0, c(0.8, 0.0));
        let t = std::f64::consts::PI; // Ωt = π
        let (p, m) = alpha_branches(&s, t);
        assert!((p - c(-0.8, 0.0)).norm() < 1e-12);
        assert!((m - c(-0.8, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn branches_magnitude_decay() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let (p, m) = alpha_branches(&s, 1.0);
        let want = (-0.01f64).exp();
        assert!((p.norm() - want).abs() < 1e-12);
        assert!((m.norm() - want).abs() < 1e-12);
    }

    #[test]
    fn overlap_normalization() {
        let a = c(0.7, -1.1);
        assert!((coherent_overlap(a, a) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn overlap_vacuum_projection() {
        let a = c(0.9, 0.4);
        let want = (-0.5 * a.norm_sqr()).exp();
        assert!((coherent_overlap(c(0.0, 0.0), a) - c(want, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn overlap_closed_form_value() {
        // <1|i> = exp(-1 + i)
        let got = coherent_overlap(c(1.0, 0.0), c(0.0, 1.0));
        let want = c(-1.0, 1.0).exp();
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn overlap_matches_fock_series() {
        // Independent oracle: truncated Fock sum Σ conj(β_n)·α_n.
        let series = |beta: Complex64, alpha: Complex64, n_max: usize| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut bpow = Complex64::new(1.0, 0.0);
            let mut apow = Complex64::new(1.0, 0.0);
            let mut fact = 1.0;
            for n in 0..n_max {
                if n > 0 {
                    bpow *= beta;
                    apow *= alpha;
                    fact *= n as f64;
                }
                sum += bpow.conj() * apow / fact;
            }
            sum * (-0.5 * (beta.norm_sqr() + alpha.norm_sqr())).exp()
        };
        let beta = c(1.0, 0.0);
        let alpha = c(0.0, 1.0);
        let got = coherent_overlap(beta, alpha);
        assert!((got - series(beta, alpha, 40)).norm() < 1e-10);
    }

    #[test]
    fn f_factor_at_zero() {
        let s = sys(1.3, 0.2, c(1.1, -0.4));
        assert_eq!(f_factor(&s, 0.0), c(1.0, 0.0));
    }

    #[test]
    fn f_factor_lossless_is_pure_phase() {
        let s = sys(2.0, 0.0, c(1.0, 0.5));
        for &t in &[0.3, 1.7, 9.2] {
            let f = f_factor(&s, t);
            let want = c(0.0, -s.omega_eff * t).exp();
            assert!((f - want).norm() < 1e-12);
            assert!((f.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn f_factor_long_time_magnitude() {
        let s = sys(1.0, 0.1, c(1.0, 0.0));
        let t = 20.0 / s.decay; // kt = 20
        let want = (-s.alpha.norm_sqr() * s.omega_eff.powi(2)
            / (s.decay.powi(2) + s.omega_eff.powi(2)))
        .exp();
        assert!((f_factor(&s, t).norm() - want).abs() < 1e-10);
    }

    #[test]
    fn lambda_at_zero_and_infinity() {
        let s = sys(1.0, 0.05, c(1.3, 0.2));
        assert_eq!(lambda_factor(&s, 0.0), c(1.0, 0.0));
        let t = 25.0 / s.decay;
        assert!((lambda_factor(&s, t) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lambda_lossless_magnitude() {
        let s = sys(1.0, 0.0, c(1.0, 0.0));
        for &t in &[0.4, 1.0, 2.9] {
            let want = (-s.alpha.norm_sqr() * (1.0 - (2.0 * s.omega_eff * t).cos())).exp();
            assert!((lambda_factor(&s, t).norm() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_at_zero_is_identity() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ch = channel(&s, 0.0);
        assert_eq!(ch.f, c(1.0, 0.0));
        assert_eq!(ch.lam, c(1.0, 0.0));
    }

    #[test]
    fn channel_lossless_multiplier_magnitude() {
        let s = sys(1.0, 0.0, c(1.0, 0.0));
        for &t in &[0.7, 1.9, 4.2] {
            let want = (-s.alpha.norm_sqr() * (1.0 - (2.0 * s.omega_eff * t).cos())).exp();
            assert!((channel(&s, t).multiplier().norm() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_contraction_strict_for_dissipative_cavities() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..50 {
            let s = random_sys(&mut rng);
            for _ in 0..20 {
                let t = rng.gen_range(1e-3..40.0);
                let m = channel(&s, t).multiplier().norm();
                assert!(m <= 1.0 + 1e-12);
                assert!(m < 1.0, "strict contraction expected for k > 0, t > 0");
            }
        }
    }

    #[test]
    fn monotone_envelope_at_oscillation_nodes() {
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..20 {
            let s = random_sys(&mut rng);
            let mut prev = f64::INFINITY;
            for n in 0..40 {
                let t = n as f64 * std::f64::consts::PI / s.omega_eff;
                let m = channel(&s, t).multiplier().norm_sqr();
                assert!(m <= prev + 1e-12, "envelope must not grow at t = nπ/Ω");
                prev = m;
            }
        }
    }

    #[test]
    fn ewl_bell_state_limit() {
        let bell = bell_state();
        let m = bell.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((m[(3, 3)].re - 0.5).abs() < 1e-15);
        assert!((m[(0, 3)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!(m[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn ewl_maximally_mixed_limit() {
        let ewl = EwlParams::balanced(0.0, EwlFamily::Phi).unwrap();
        let rho = ewl_state(&ewl);
        let want = ComplexMatrix::identity(4).scale_re(0.25);
        assert!(rho.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn ewl_unit_trace() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..20 {
            let ewl = random_ewl(&mut rng, EwlFamily::Phi);
            let tr = ewl_state(&ewl).matrix().trace();
            assert!((tr - c(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn evolve_identity_channel_is_fixed_point() {
        let mut rng = StdRng::seed_from_u64(24);
        let rho = random_x_state(&mut rng);
        let ch = ChannelFactors::new(c(1.0, 0.0), c(1.0, 0.0), 0.0).unwrap();
        let out = evolve_two_atom(&rho, &ch).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn evolve_preserves_diagonal() {
        let mut rng = StdRng::seed_from_u64(25);
        let s = random_sys(&mut rng);
        let rho = random_x_state(&mut rng);
        let out = evolve_two_atom(&rho, &channel(&s, 3.7)).unwrap();
        for i in 0..4 {
            assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-15);
        }
    }

    #[test]
    fn evolve_half_multiplier_inner_corner() {
        let ewl = EwlParams::balanced(1.0, EwlFamily::Phi).unwrap();
        let rho = ewl_state(&ewl);
        // |fλ|² = 1/2 with a real multiplier.
        let ch = ChannelFactors::new(c(0.5f64.sqrt(), 0.0), c(1.0, 0.0), 1.0).unwrap();
        let out = evolve_two_atom(&rho, &ch).unwrap();
        assert!((out.rho23() - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evolve_matches_tensor_product_oracle() {
        // Independent route: the map is the Hadamard product with w ⊗ w,
        // w = [[1, m], [m*, 1]] the single-atom multiplier pattern.
        let mut rng = StdRng::seed_from_u64(26);
        for _ in 0..30 {
            let s = random_sys(&mut rng);
            let t = rng.gen_range(0.1..20.0);
            let rho = random_x_state(&mut rng);
            let ch = channel(&s, t);
            let m = ch.multiplier();
            let w = ComplexMatrix::from_rows(&[
                vec![c(1.0, 0.0), m],
                vec![m.conj(), c(1.0, 0.0)],
            ]);
            let ww = kron(&w, &w);
            let mut want = rho.matrix().clone();
            for i in 0..4 {
                for j in 0..4 {
                    want[(i, j)] *= ww[(i, j)];
                }
            }
            let got = evolve_two_atom(&rho, &ch).unwrap();
            assert!(got.matrix().max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn x_closure_under_evolution() {
        let mut rng = StdRng::seed_from_u64(27);
        for _ in 0..50 {
            let s = random_sys(&mut rng);
            let t = rng.gen_range(0.0..30.0);
            let rho = random_x_state(&mut rng);
            // The constructor inside re-validates the full X invariant set.
            let out = evolve_two_atom(&rho, &channel(&s, t));
            assert!(out.is_ok(), "evolved X state must stay a valid X state");
        }
    }

    #[test]
    fn wootters_bell_and_mixed_anchors() {
        assert!((concurrence_wootters(&bell_state()).unwrap() - 1.0).abs() < 1e-10);
        let mixed =
            TwoQubitDensity::new(ComplexMatrix::identity(4).scale_re(0.25)).unwrap();
        assert!(concurrence_wootters(&mixed).unwrap() < 1e-12);
    }

    #[test]
    fn wootters_ewl_initial_value() {
        let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
        let rho: TwoQubitDensity = ewl_state(&ewl).into();
        // 2p|μν| − (1−p)/2 = 0.8 − 0.1
        assert!((concurrence_wootters(&rho).unwrap() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn x_form_concurrence_anchors() {
        let ewl = EwlParams::balanced(1.0, EwlFamily::Psi).unwrap();
        assert!((concurrence_x(&ewl_state(&ewl)) - 1.0).abs() < 1e-12);
        let ewl = EwlParams::balanced(0.6, EwlFamily::Phi).unwrap();
        assert!((concurrence_x(&ewl_state(&ewl)) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn x_form_matches_wootters_on_random_states() {
        let mut rng = StdRng::seed_from_u64(28);
        for _ in 0..200 {
            let rho = random_x_state(&mut rng);
            let direct = concurrence_x(&rho);
            let general = concurrence_wootters(&rho.clone().into()).unwrap();
            assert!(
                (direct - general).abs() < 1e-10,
                "closed form {direct} vs spin-flip spectrum {general}"
            );
        }
    }

    #[test]
    fn ewl_concurrence_initial_anchors() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let e8 = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
        let e6 = EwlParams::balanced(0.6, EwlFamily::Phi).unwrap();
        assert!((concurrence_ewl(&s, &e8, 0.0) - 0.7).abs() < 1e-12);
        assert!((concurrence_ewl(&s, &e6, 0.0) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn ewl_concurrence_mixed_stays_zero() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.0, EwlFamily::Psi).unwrap();
        for &t in &[0.0, 1.0, 10.0, 100.0] {
            assert_eq!(concurrence_ewl(&s, &ewl, t), 0.0);
        }
    }

    #[test]
    fn ewl_concurrence_consistent_with_evolved_state() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..100 {
            let s = random_sys(&mut rng);
            let family = if rng.gen_bool(0.5) { EwlFamily::Phi } else { EwlFamily::Psi };
            let ewl = random_ewl(&mut rng, family);
            let t = rng.gen_range(0.0..25.0);
            let via_state =
                concurrence_x(&evolve_two_atom(&ewl_state(&ewl), &channel(&s, t)).unwrap());
            let direct = concurrence_ewl(&s, &ewl, t);
            assert!(
                (via_state - direct).abs() < 1e-12,
                "direct {direct} vs evolved-state {via_state}"
            );
        }
    }

    #[test]
    fn family_independence() {
        let mut rng = StdRng::seed_from_u64(30);
        for _ in 0..100 {
            let s = random_sys(&mut rng);
            let phi = random_ewl(&mut rng, EwlFamily::Phi);
            let psi = EwlParams::new(phi.purity, phi.mu, phi.nu, EwlFamily::Psi).unwrap();
            let t = rng.gen_range(0.0..25.0);
            let c_phi =
                concurrence_x(&evolve_two_atom(&ewl_state(&phi), &channel(&s, t)).unwrap());
            let c_psi =
                concurrence_x(&evolve_two_atom(&ewl_state(&psi), &channel(&s, t)).unwrap());
            assert!((c_phi - c_psi).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptote_long_lived_value() {
        let s = sys(1.0, 0.01, c(0.5, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        let c_inf = asymptotic_concurrence(&s, &ewl).unwrap();
        assert!((c_inf - 0.4959).abs() < 1e-3);
        // Long-time evaluation of the exact expression must agree.
        let late = concurrence_ewl(&s, &ewl, 25.0 / s.decay);
        assert!((c_inf - late).abs() < 1e-8);
    }

    #[test]
    fn asymptote_dies_for_large_amplitude() {
        let s = sys(1.0, 0.01, c(2.0, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        assert_eq!(asymptotic_concurrence(&s, &ewl).unwrap(), 0.0);
    }

    #[test]
    fn asymptote_zero_purity() {
        let mut rng = StdRng::seed_from_u64(31);
        let s = random_sys(&mut rng);
        let ewl = EwlParams::balanced(0.0, EwlFamily::Psi).unwrap();
        assert_eq!(asymptotic_concurrence(&s, &ewl).unwrap(), 0.0);
    }

    #[test]
    fn asymptote_rejects_lossless() {
        let s = sys(1.0, 0.0, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        match asymptotic_concurrence(&s, &ewl) {
            Err(AnalyticError::DomainError(_)) => {}
            other => panic!("expected DomainError, got {other:?}"),
        }
    }

    fn omega_t_grid(omega: f64, start: f64, stop: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (start + (stop - start) * i as f64 / (n - 1) as f64) / omega)
            .collect()
    }

    #[test]
    fn esd_absent_for_small_amplitude() {
        let s = sys(1.0, 0.01, c(0.5, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        let grid = omega_t_grid(s.omega_eff, 0.0, 30.0, 3001);
        assert!(esd_intervals(&s, &ewl, &grid).unwrap().is_empty());
    }

    #[test]
    fn esd_present_for_unit_amplitude() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        let grid = omega_t_grid(s.omega_eff, 0.0, 30.0, 3001);
        let intervals = esd_intervals(&s, &ewl, &grid).unwrap();
        assert!(!intervals.is_empty());
        // Death and revival: the first interval closes again within the grid.
        assert!(!intervals[0].open_ended);
        assert!(intervals[0].t_start > 0.0);
        assert!(intervals[0].t_end > intervals[0].t_start);
        // The refined boundary really is a zero of the concurrence edge.
        let edge = concurrence_ewl(&s, &ewl, intervals[0].t_start);
        assert!(edge < 1e-6, "concurrence at refined boundary: {edge}");
    }

    #[test]
    fn esd_never_for_pure_bell() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::balanced(1.0, EwlFamily::Phi).unwrap();
        let grid = omega_t_grid(s.omega_eff, 0.0, 50.0, 2001);
        assert!(esd_intervals(&s, &ewl, &grid).unwrap().is_empty());
    }

    #[test]
    fn esd_rejects_degenerate_grids() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        assert!(matches!(
            esd_intervals(&s, &ewl, &[1.0]),
            Err(AnalyticError::EmptyGrid)
        ));
        assert!(matches!(
            esd_intervals(&s, &ewl, &[1.0, 1.0]),
            Err(AnalyticError::EmptyGrid)
        ));
    }

    #[test]
    fn esd_trailing_interval_open_ended() {
        // Large amplitude with weak decay: after the early oscillations die,
        // the state stays disentangled to the end of the window.
        let s = sys(1.0, 0.01, c(2.0, 0.0));
        let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
        let grid = omega_t_grid(s.omega_eff, 0.0, 500.0, 20001);
        let intervals = esd_intervals(&s, &ewl, &grid).unwrap();
        let last = intervals.last().expect("expected sudden death");
        assert!(last.open_ended);
        assert!((last.t_end - 500.0).abs() < 1e-9);
    }

    #[test]
    fn threshold_in_reading_window() {
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
        let c_level = default_threshold_level(&s, &ewl).unwrap();
        let kt = threshold_time(&s, &ewl, c_level, 12.0 / s.decay).unwrap();
        assert!((5.0..=9.0).contains(&kt), "kt_c = {kt}");
    }

    #[test]
    fn threshold_level_never_reached() {
        let s = sys(1.0, 0.05, c(1.0, 0.0));
        let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
        // Above C(0): concurrence never climbs back over its initial value.
        let c0 = concurrence_ewl(&s, &ewl, 0.0);
        match threshold_time(&s, &ewl, c0 + 0.05, 200.0) {
            Err(AnalyticError::NoSolution) => {}
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn threshold_rejects_lossless_and_negative_level() {
        let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
        let s0 = sys(1.0, 0.0, c(1.0, 0.0));
        assert!(matches!(
            threshold_time(&s0, &ewl, 0.1, 10.0),
            Err(AnalyticError::DomainError(_))
        ));
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        assert!(matches!(
            threshold_time(&s, &ewl, -0.1, 10.0),
            Err(AnalyticError::BadC(_))
        ));
    }

    #[test]
    fn linear_entropy_anchors() {
        let pure = ComplexMatrix::from_diag_re(&[1.0, 0.0]);
        assert!(linear_entropy(&pure).unwrap().abs() < 1e-15);
        let qubit_mixed = ComplexMatrix::identity(2).scale_re(0.5);
        assert!((linear_entropy(&qubit_mixed).unwrap() - 0.5).abs() < 1e-15);
        let two_qubit_mixed = ComplexMatrix::identity(4).scale_re(0.25);
        assert!((linear_entropy(&two_qubit_mixed).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn linear_entropy_on_random_pure_projector() {
        let mut rng = StdRng::seed_from_u64(32);
        let mut v: Vec<Complex64> =
            (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        let proj = ComplexMatrix::outer(&v, &v);
        assert!(linear_entropy(&proj).unwrap().abs() < 1e-12);
    }

    #[test]
    fn linear_entropy_rejects_bad_trace() {
        let m = ComplexMatrix::identity(3);
        assert!(matches!(
            linear_entropy(&m),
            Err(AnalyticError::NotDensity(_))
        ));
    }

    #[test]
    fn reduced_atom_bell_marginal() {
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        for which in [Atom::Atom1, Atom::Atom2] {
            assert!(reduced_atom(&bell_state(), which).max_abs_diff(&half) < 1e-14);
        }
    }

    #[test]
    fn reduced_atom_product_state() {
        let e = ComplexMatrix::from_diag_re(&[1.0, 0.0]);
        let g = ComplexMatrix::from_diag_re(&[0.0, 1.0]);
        let rho = TwoQubitDensity::new(kron(&e, &g)).unwrap();
        assert!(reduced_atom(&rho, Atom::Atom1).max_abs_diff(&e) < 1e-15);
        assert!(reduced_atom(&rho, Atom::Atom2).max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn reduced_atom_swap_symmetry() {
        // Exchange-symmetric state: equal weights in both Bell-like families.
        let ewl = EwlParams::balanced(0.7, EwlFamily::Phi).unwrap();
        let rho: TwoQubitDensity = ewl_state(&ewl).into();
        let a1 = reduced_atom(&rho, Atom::Atom1);
        let a2 = reduced_atom(&rho, Atom::Atom2);
        assert!(a1.max_abs_diff(&a2) < 1e-14);
    }

    #[test]
    fn marginals_are_decoherence_free() {
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..100 {
            let s = random_sys(&mut rng);
            let family = if rng.gen_bool(0.5) { EwlFamily::Phi } else { EwlFamily::Psi };
            let ewl = random_ewl(&mut rng, family);
            let rho0 = ewl_state(&ewl);
            let s1_initial =
                linear_entropy(&reduced_atom(&rho0.clone().into(), Atom::Atom1)).unwrap();
            let s2_initial =
                linear_entropy(&reduced_atom(&rho0.clone().into(), Atom::Atom2)).unwrap();
            for _ in 0..20 {
                let t = rng.gen_range(0.0..50.0);
                let evolved: TwoQubitDensity =
                    evolve_two_atom(&rho0, &channel(&s, t)).unwrap().into();
                let s1 = linear_entropy(&reduced_atom(&evolved, Atom::Atom1)).unwrap();
                let s2 = linear_entropy(&reduced_atom(&evolved, Atom::Atom2)).unwrap();
                assert!((s1 - s1_initial).abs() < 1e-12);
                assert!((s2 - s2_initial).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn balanced_marginal_entropy_is_half() {
        let mut rng = StdRng::seed_from_u64(34);
        let s = random_sys(&mut rng);
        for &p in &[0.0, 0.3, 0.5, 0.8, 1.0] {
            let ewl = EwlParams::balanced(p, EwlFamily::Phi).unwrap();
            let evolved: TwoQubitDensity =
                evolve_two_atom(&ewl_state(&ewl), &channel(&s, 2.3)).unwrap().into();
            let s1 = linear_entropy(&reduced_atom(&evolved, Atom::Atom1)).unwrap();
            assert!((s1 - 0.5).abs() < 1e-12, "p = {p}: S1 = {s1}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::new(0.0, 0.1, c(1.0, 0.0)).is_err());
        assert!(SystemParams::new(1.0, -0.1, c(1.0, 0.0)).is_err());
        assert!(EwlParams::new(1.2, c(1.0, 0.0), c(0.0, 0.0), EwlFamily::Phi).is_err());
        assert!(EwlParams::new(0.5, c(1.0, 0.0), c(1.0, 0.0), EwlFamily::Phi).is_err());
    }

    #[test]
    fn degenerate_weights_are_accepted() {
        // μν = 0 collapses the concurrence to zero without special-casing.
        let s = sys(1.0, 0.01, c(1.0, 0.0));
        let ewl = EwlParams::new(0.7, c(1.0, 0.0), c(0.0, 0.0), EwlFamily::Phi).unwrap();
        for &t in &[0.0, 1.0, 10.0] {
            assert_eq!(concurrence_ewl(&s, &ewl, t), 0.0);
        }
        assert_eq!(asymptotic_concurrence(&s, &ewl).unwrap(), 0.0);
    }
}
