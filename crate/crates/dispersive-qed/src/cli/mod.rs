//! Run configuration, parameter sweeps and data products.
//!
//! A run is described by a TOML document (see [`parse_config`]) naming the
//! physical parameters, a time grid in dimensionless units (Ωt or kt), an
//! optional second sweep axis, oracle settings and output paths. Sweeps
//! evaluate the closed-form concurrence on the grid; the CSV writer and the
//! textual report live in [`output`], figure presets in [`figures`].

pub mod figures;
pub mod output;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::analytic::{
    self, asymptotic_concurrence, channel, concurrence_ewl, esd_intervals, evolve_two_atom,
    ewl_state, linear_entropy, reduced_atom, Atom, EsdInterval, EwlFamily, EwlParams,
    SystemParams,
};
use crate::lindblad::{self, FockSpace};

/// Exit gate for the oracle cross-check mode.
pub const ORACLE_DEVIATION_GATE: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical check failed: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 config, 3 numerical, 4 io.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<analytic::AnalyticError> for CliError {
    fn from(e: analytic::AnalyticError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<lindblad::LindbladError> for CliError {
    fn from(e: lindblad::LindbladError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Raw TOML schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum NumberOrParts {
    Real(f64),
    Parts {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl NumberOrParts {
    fn complex(self) -> Complex64 {
        match self {
            NumberOrParts::Real(re) => Complex64::new(re, 0.0),
            NumberOrParts::Parts { re, im } => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    omega_eff: f64,
    decay: f64,
    alpha: NumberOrParts,
    p: f64,
    mu: Option<NumberOrParts>,
    nu: Option<NumberOrParts>,
    family: Option<String>,
    grid: RawGrid,
    sweep: Option<RawSweep>,
    #[serde(default)]
    oracle: RawOracle,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    scale: String,
    start: f64,
    stop: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    param: String,
    start: f64,
    stop: f64,
    count: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    #[serde(default)]
    enabled: bool,
    truncation: Option<usize>,
    dt: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<String>,
    #[serde(default)]
    plots: bool,
    #[serde(default)]
    deterministic: bool,
}

// ---------------------------------------------------------------------------
// Validated configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScale {
    /// Grid values are Ωt.
    OmegaT,
    /// Grid values are kt.
    KT,
}

impl TimeScale {
    pub fn axis_name(&self) -> &'static str {
        match self {
            TimeScale::OmegaT => "omega_t",
            TimeScale::KT => "k_t",
        }
    }

    /// Factor converting a scaled grid value to absolute time.
    pub fn to_time(&self, sys: &SystemParams) -> f64 {
        match self {
            TimeScale::OmegaT => 1.0 / sys.omega_eff,
            TimeScale::KT => 1.0 / sys.decay,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    pub scale: TimeScale,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl TimeGrid {
    /// Scaled grid values (Ωt or kt).
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Decay,
    Alpha,
    Purity,
    OmegaEff,
}

impl SweepParam {
    pub fn key(&self) -> &'static str {
        match self {
            SweepParam::Decay => "decay",
            SweepParam::Alpha => "alpha",
            SweepParam::Purity => "p",
            SweepParam::OmegaEff => "omega_eff",
        }
    }

    /// Substitute one sweep value into the base parameter set.
    pub fn apply(
        &self,
        sys: &SystemParams,
        ewl: &EwlParams,
        v: f64,
    ) -> Result<(SystemParams, EwlParams), CliError> {
        let mut sys = *sys;
        let mut ewl = *ewl;
        match self {
            SweepParam::Decay => sys = SystemParams::new(sys.omega_eff, v, sys.alpha)?,
            SweepParam::OmegaEff => sys = SystemParams::new(v, sys.decay, sys.alpha)?,
            SweepParam::Alpha => {
                sys = SystemParams::new(sys.omega_eff, sys.decay, Complex64::new(v, 0.0))?
            }
            SweepParam::Purity => ewl = EwlParams::new(v, ewl.mu, ewl.nu, ewl.family)?,
        }
        Ok((sys, ewl))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepAxisSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxisSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub enabled: bool,
    pub truncation: Option<usize>,
    pub dt: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub csv: Option<std::path::PathBuf>,
    pub plots: bool,
    pub deterministic: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sys: SystemParams,
    pub ewl: EwlParams,
    pub grid: TimeGrid,
    pub sweep: Option<SweepAxisSpec>,
    pub oracle: OracleConfig,
    pub output: OutputConfig,
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Parse and validate a TOML run configuration. Missing μ, ν default to the
/// balanced 1/√2 weights; the family defaults to Φ.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::Config(format!("parse failure:\n{e}")))?;

    let sys = SystemParams::new(raw.omega_eff, raw.decay, raw.alpha.complex())?;

    let family = match raw.family.as_deref().unwrap_or("phi") {
        "phi" | "Phi" | "PHI" => EwlFamily::Phi,
        "psi" | "Psi" | "PSI" => EwlFamily::Psi,
        other => {
            return Err(CliError::Config(format!(
                "family must be \"phi\" or \"psi\", got \"{other}\""
            )))
        }
    };
    let ewl = match (raw.mu, raw.nu) {
        (None, None) => EwlParams::balanced(raw.p, family)?,
        (Some(mu), Some(nu)) => EwlParams::new(raw.p, mu.complex(), nu.complex(), family)?,
        _ => {
            return Err(CliError::Config(
                "mu and nu must be given together (or both omitted for 1/sqrt(2))".into(),
            ))
        }
    };

    let scale = match raw.grid.scale.as_str() {
        "omega_t" => TimeScale::OmegaT,
        "k_t" => TimeScale::KT,
        other => {
            return Err(CliError::Config(format!(
                "grid.scale must be \"omega_t\" or \"k_t\", got \"{other}\""
            )))
        }
    };
    if scale == TimeScale::KT && sys.decay <= 0.0 {
        return Err(CliError::Config(
            "grid.scale = \"k_t\" needs a nonzero decay".into(),
        ));
    }
    validate_axis("grid", raw.grid.start, raw.grid.stop, raw.grid.count)?;
    if raw.grid.start < 0.0 {
        return Err(CliError::Config("grid.start must be >= 0".into()));
    }
    let grid = TimeGrid { scale, start: raw.grid.start, stop: raw.grid.stop, count: raw.grid.count };

    let sweep = match raw.sweep {
        None => None,
        Some(s) => {
            let param = match s.param.as_str() {
                "decay" => SweepParam::Decay,
                "alpha" => SweepParam::Alpha,
                "p" => SweepParam::Purity,
                "omega_eff" => SweepParam::OmegaEff,
                other => {
                    return Err(CliError::Config(format!(
                        "sweep.param must be one of decay, alpha, p, omega_eff; got \"{other}\""
                    )))
                }
            };
            validate_axis("sweep", s.start, s.stop, s.count)?;
            let spec = SweepAxisSpec { param, start: s.start, stop: s.stop, count: s.count };
            // Every sweep value must produce a valid parameter set.
            for v in [s.start, s.stop] {
                param.apply(&sys, &ewl, v)?;
            }
            if scale == TimeScale::KT && param == SweepParam::Decay && s.start <= 0.0 {
                return Err(CliError::Config(
                    "sweeping decay through 0 is incompatible with a kt grid".into(),
                ));
            }
            Some(spec)
        }
    };

    let oracle = OracleConfig {
        enabled: raw.oracle.enabled,
        truncation: raw.oracle.truncation,
        dt: raw.oracle.dt,
        samples: raw.oracle.samples.unwrap_or(9).max(2),
    };
    let output = OutputConfig {
        csv: raw.output.csv.map(std::path::PathBuf::from),
        plots: raw.output.plots,
        deterministic: raw.output.deterministic,
    };

    Ok(RunConfig { sys, ewl, grid, sweep, oracle, output })
}

fn validate_axis(what: &str, start: f64, stop: f64, count: usize) -> Result<(), CliError> {
    if !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Config(format!("{what} range must be finite")));
    }
    if stop <= start {
        return Err(CliError::Config(format!("{what}.stop must exceed {what}.start")));
    }
    if count < 2 {
        return Err(CliError::Config(format!("{what}.count must be at least 2")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Sweep evaluation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AxisData {
    pub name: String,
    pub values: Vec<f64>,
}

/// Evaluated grid plus the scalar summaries of the base parameter set.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Outer axis; rows are emitted outer-axis-major.
    pub axis1: AxisData,
    /// Optional inner axis.
    pub axis2: Option<AxisData>,
    /// Concurrence per grid point, axis1-major.
    pub concurrence: Vec<f64>,
    /// Linear entropy of the atom-1 marginal per grid point, when computed.
    pub linear_entropy: Option<Vec<f64>>,
    /// Sudden-death intervals of the base parameter set over the time axis,
    /// in the axis's scaled units.
    pub esd: Vec<EsdInterval>,
    /// Stationary concurrence of the base parameter set (absent for k = 0).
    pub asymptotic: Option<f64>,
    pub meta: RunMeta,
}

#[derive(Debug, Clone)]
pub struct RunMeta {
    pub version: &'static str,
    pub sys: SystemParams,
    pub ewl: EwlParams,
    pub config_echo: String,
    pub time_scale: Option<TimeScale>,
}

impl RunMeta {
    fn new(sys: SystemParams, ewl: EwlParams, time_scale: Option<TimeScale>) -> Self {
        let family = match ewl.family {
            EwlFamily::Phi => "phi",
            EwlFamily::Psi => "psi",
        };
        let config_echo = format!(
            "omega_eff={} decay={} alpha={}{:+}i p={} mu={}{:+}i nu={}{:+}i family={}",
            sys.omega_eff,
            sys.decay,
            sys.alpha.re,
            sys.alpha.im,
            ewl.purity,
            ewl.mu.re,
            ewl.mu.im,
            ewl.nu.re,
            ewl.nu.im,
            family
        );
        Self { version: env!("CARGO_PKG_VERSION"), sys, ewl, config_echo, time_scale }
    }
}

/// Evaluate the configured grid. The time axis is the outer axis; the sweep
/// axis, when present, is inner. Grid points are independent and evaluated in
/// parallel, gathered by index.
pub fn run_sweep(config: &RunConfig) -> Result<SweepResult, CliError> {
    let time_values = config.grid.values();
    let sweep_values: Vec<f64> = match &config.sweep {
        Some(s) => s.values(),
        None => vec![f64::NAN], // single column, base parameters
    };

    // Resolve the per-column parameter sets up front.
    let columns: Vec<(SystemParams, EwlParams)> = match &config.sweep {
        None => vec![(config.sys, config.ewl)],
        Some(s) => sweep_values
            .iter()
            .map(|&v| s.param.apply(&config.sys, &config.ewl, v))
            .collect::<Result<_, _>>()?,
    };

    let n_time = time_values.len();
    let n_cols = columns.len();
    let scale = config.grid.scale;

    let cells: Vec<(f64, f64)> = (0..n_time * n_cols)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n_cols, idx % n_cols);
            let (sys_j, ewl_j) = &columns[j];
            let t = time_values[i] * scale.to_time(sys_j);
            let c = concurrence_ewl(sys_j, ewl_j, t);
            let evolved = evolve_two_atom(&ewl_state(ewl_j), &channel(sys_j, t))
                .expect("channel keeps X states valid");
            let s1 = linear_entropy(&reduced_atom(&evolved.into(), Atom::Atom1))
                .expect("marginal of a density matrix is a density matrix");
            (c, s1)
        })
        .collect();
    let concurrence: Vec<f64> = cells.iter().map(|&(c, _)| c).collect();
    let entropy: Vec<f64> = cells.iter().map(|&(_, s)| s).collect();

    // Scalar summaries for the base parameter set.
    let base_times: Vec<f64> = {
        let f = scale.to_time(&config.sys);
        time_values.iter().map(|&v| v * f).collect()
    };
    let esd_abs = esd_intervals(&config.sys, &config.ewl, &base_times)?;
    let back = 1.0 / scale.to_time(&config.sys);
    let esd = esd_abs
        .iter()
        .map(|iv| EsdInterval {
            t_start: iv.t_start * back,
            t_end: iv.t_end * back,
            open_ended: iv.open_ended,
        })
        .collect();
    let asymptotic = if config.sys.decay > 0.0 {
        Some(asymptotic_concurrence(&config.sys, &config.ewl)?)
    } else {
        None
    };

    Ok(SweepResult {
        axis1: AxisData { name: scale.axis_name().to_string(), values: time_values },
        axis2: config.sweep.as_ref().map(|s| AxisData {
            name: s.param.key().to_string(),
            values: sweep_values.clone(),
        }),
        concurrence,
        linear_entropy: Some(entropy),
        esd,
        asymptotic,
        meta: RunMeta::new(config.sys, config.ewl, Some(scale)),
    })
}

// ---------------------------------------------------------------------------
// Oracle cross-check
// ---------------------------------------------------------------------------

/// Outcome of comparing the closed-form two-atom evolution against the
/// brute-force two-copy integration.
#[derive(Debug, Clone)]
pub struct OracleCheckOutcome {
    pub truncation: usize,
    pub dt: f64,
    pub t_end: f64,
    pub samples: usize,
    /// Largest elementwise deviation of the two-atom density matrices.
    pub max_density_deviation: f64,
    /// Largest deviation of the concurrence trajectories.
    pub max_concurrence_deviation: f64,
    /// Largest single-copy coherence-multiplier deviation from f(t)λ(t).
    pub max_multiplier_deviation: f64,
    pub trace_drift: f64,
}

impl OracleCheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_density_deviation < ORACLE_DEVIATION_GATE
    }
}

/// Smallest truncation whose coherent tail mass leaves an order of magnitude
/// of headroom under the construction gate.
fn auto_truncation(alpha: Complex64) -> Result<usize, CliError> {
    for n in 6..=lindblad::TWO_COPY_MEMORY_CAP {
        if lindblad::coherent_tail_mass(n, alpha) < lindblad::TAIL_MASS_TOL / 10.0 {
            return Ok(n);
        }
    }
    Err(CliError::Config(format!(
        "|alpha| = {:.3} needs more than {} Fock levels for the two-copy oracle; \
         reduce the amplitude or set oracle.truncation explicitly",
        alpha.norm(),
        lindblad::TWO_COPY_MEMORY_CAP
    )))
}

/// Run the two-copy oracle over the configured time range and compare it
/// elementwise against the closed-form map, plus a single-copy multiplier
/// comparison on the same grid.
pub fn check_oracle(config: &RunConfig) -> Result<OracleCheckOutcome, CliError> {
    let sys = config.sys;
    if sys.alpha.norm() > 1.0 + 1e-12 {
        return Err(CliError::Config(
            "the two-copy oracle is limited to |alpha| <= 1; trim the amplitude".into(),
        ));
    }
    let truncation = match config.oracle.truncation {
        Some(n) => n,
        None => auto_truncation(sys.alpha)?,
    };
    let space = FockSpace::new(truncation)?;
    let dt = config.oracle.dt.unwrap_or(1e-3 / sys.omega_eff);
    let t_end = config.grid.stop * config.grid.scale.to_time(&sys);
    let samples = config.oracle.samples;

    let traj = lindblad::two_copy_oracle(&config.ewl, &sys, &space, dt, t_end, samples)?;
    let rho0 = ewl_state(&config.ewl);
    let mut max_density_dev: f64 = 0.0;
    let mut max_conc_dev: f64 = 0.0;
    for (i, t) in traj.times.iter().enumerate() {
        let want = evolve_two_atom(&rho0, &channel(&sys, *t))?;
        max_density_dev = max_density_dev.max(traj.atoms[i].max_abs_diff(want.matrix()));
        let c_oracle = traj.concurrence(i)?;
        let c_closed = concurrence_ewl(&sys, &config.ewl, *t);
        max_conc_dev = max_conc_dev.max((c_oracle - c_closed).abs());
    }

    // Single-copy multiplier on the same span.
    let half = Complex64::new(0.5, 0.0);
    let atom = crate::linalg::ComplexMatrix::from_rows(&[vec![half, half], vec![half, half]]);
    let initial = lindblad::JointState::atom_coherent_product(&atom, &space, sys.alpha)?;
    let single = lindblad::integrate(
        &initial,
        &lindblad::Model::Dispersive(sys),
        &space,
        dt,
        t_end,
        samples,
    )?;
    let mult = lindblad::coherence_multiplier(&single, &space)?;
    let mut max_mult_dev: f64 = 0.0;
    for (t, m) in mult {
        let want = analytic::f_factor(&sys, t) * analytic::lambda_factor(&sys, t);
        max_mult_dev = max_mult_dev.max((m - want).norm());
    }

    Ok(OracleCheckOutcome {
        truncation,
        dt,
        t_end,
        samples,
        max_density_deviation: max_density_dev,
        max_concurrence_deviation: max_conc_dev,
        max_multiplier_deviation: max_mult_dev,
        trace_drift: traj.max_trace_drift,
    })
}
