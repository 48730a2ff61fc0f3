//! Canned parameter sweeps reproducing the published concurrence maps.
//!
//! Every preset pins the caption parameters exactly (balanced weights
//! μ = ν = 1/√2 throughout); axis extents not stated alongside the captions
//! use 301 points per time axis and 101 per parameter axis, with ranges wide
//! enough to show the sudden-death structure and the stationary plateau.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{concurrence_ewl, EwlFamily, EwlParams, SystemParams};

use super::{AxisData, CliError, RunMeta, SweepResult, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    /// Concurrence over (Ωt, k/Ω) at α = 1, p = 0.8.
    Fig2,
    /// Concurrence over (Ωt, k/Ω) at α = 1, p = 0.6.
    Fig3,
    /// Concurrence over Ωt at k/Ω = 0.01, α = 0.5 for p ∈ {0.8, 0.6, 0.5};
    /// short- and long-term panels.
    Fig4,
    /// Concurrence over Ωt at k/Ω = 0.01, p = 0.9 for α ∈ {0.5, 1, 2};
    /// short- and long-term panels.
    Fig5,
    /// Concurrence over (kt, Ω/k) at α = 1, p = 0.8.
    Fig6,
    /// Stationary concurrence over (α, p) at Ω = 1, k = 0.01, t = 500.
    Fig7,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 6] = [
        FigurePreset::Fig2,
        FigurePreset::Fig3,
        FigurePreset::Fig4,
        FigurePreset::Fig5,
        FigurePreset::Fig6,
        FigurePreset::Fig7,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Fig5 => "fig5",
            FigurePreset::Fig6 => "fig6",
            FigurePreset::Fig7 => "fig7",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(FigurePreset::Fig2),
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4" => Ok(FigurePreset::Fig4),
            "fig5" => Ok(FigurePreset::Fig5),
            "fig6" => Ok(FigurePreset::Fig6),
            "fig7" => Ok(FigurePreset::Fig7),
            other => Err(CliError::Config(format!(
                "unknown figure \"{other}\" (expected fig2..fig7)"
            ))),
        }
    }
}

/// One emitted data grid; two-panel figures produce two.
#[derive(Debug, Clone)]
pub struct FigurePanel {
    pub name: String,
    pub result: SweepResult,
}

const TIME_POINTS: usize = 301;
const PARAM_POINTS: usize = 101;
const SHORT_SPAN: f64 = 30.0;
const LONG_SPAN: f64 = 500.0;

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

fn balanced(p: f64) -> EwlParams {
    EwlParams::balanced(p, EwlFamily::Phi).expect("purity in range")
}

fn sys(omega: f64, decay: f64, alpha: f64) -> SystemParams {
    SystemParams::new(omega, decay, Complex64::new(alpha, 0.0)).expect("preset parameters valid")
}

/// Evaluate a grid with per-cell parameter resolution, outer-axis-major.
fn grid_eval(
    axis1: AxisData,
    axis2: AxisData,
    eval: impl Fn(f64, f64) -> f64 + Sync,
    meta: RunMeta,
) -> SweepResult {
    let n2 = axis2.values.len();
    let concurrence: Vec<f64> = (0..axis1.values.len() * n2)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n2, idx % n2);
            eval(axis1.values[i], axis2.values[j])
        })
        .collect();
    SweepResult {
        axis1,
        axis2: Some(axis2),
        concurrence,
        linear_entropy: None,
        esd: Vec::new(),
        asymptotic: None,
        meta,
    }
}

/// Concurrence over (Ωt, k/Ω) at unit Ω, fixed amplitude and purity.
fn time_vs_decay_ratio(p: f64, alpha: f64) -> SweepResult {
    let axis1 = AxisData { name: "omega_t".into(), values: linspace(0.0, SHORT_SPAN, TIME_POINTS) };
    let axis2 =
        AxisData { name: "k_over_omega".into(), values: linspace(0.0, 0.1, PARAM_POINTS) };
    let ewl = balanced(p);
    let meta = RunMeta::new(sys(1.0, 0.01, alpha), ewl, Some(TimeScale::OmegaT));
    grid_eval(
        axis1,
        axis2,
        move |omega_t, ratio| {
            let s = sys(1.0, ratio, alpha);
            concurrence_ewl(&s, &ewl, omega_t)
        },
        meta,
    )
}

/// Concurrence over Ωt for a handful of parameter variants (inner axis).
fn time_lines(
    span: f64,
    inner_name: &str,
    inner_values: &[f64],
    make: impl Fn(f64) -> (SystemParams, EwlParams) + Sync,
    meta: RunMeta,
) -> SweepResult {
    let axis1 = AxisData { name: "omega_t".into(), values: linspace(0.0, span, TIME_POINTS) };
    let axis2 = AxisData { name: inner_name.into(), values: inner_values.to_vec() };
    grid_eval(
        axis1,
        axis2,
        move |omega_t, v| {
            let (s, e) = make(v);
            concurrence_ewl(&s, &e, omega_t / s.omega_eff)
        },
        meta,
    )
}

/// Build the panels for one preset.
pub fn run_figure(preset: FigurePreset) -> Vec<FigurePanel> {
    match preset {
        FigurePreset::Fig2 => vec![FigurePanel {
            name: "fig2".into(),
            result: time_vs_decay_ratio(0.8, 1.0),
        }],
        FigurePreset::Fig3 => vec![FigurePanel {
            name: "fig3".into(),
            result: time_vs_decay_ratio(0.6, 1.0),
        }],
        FigurePreset::Fig4 => {
            let meta = RunMeta::new(sys(1.0, 0.01, 0.5), balanced(0.8), Some(TimeScale::OmegaT));
            let make = |p: f64| (sys(1.0, 0.01, 0.5), balanced(p));
            [("fig4_short", SHORT_SPAN), ("fig4_long", LONG_SPAN)]
                .into_iter()
                .map(|(name, span)| FigurePanel {
                    name: name.into(),
                    result: time_lines(span, "p", &[0.8, 0.6, 0.5], make, meta.clone()),
                })
                .collect()
        }
        FigurePreset::Fig5 => {
            let meta = RunMeta::new(sys(1.0, 0.01, 0.5), balanced(0.9), Some(TimeScale::OmegaT));
            let make = |alpha: f64| (sys(1.0, 0.01, alpha), balanced(0.9));
            [("fig5_short", SHORT_SPAN), ("fig5_long", LONG_SPAN)]
                .into_iter()
                .map(|(name, span)| FigurePanel {
                    name: name.into(),
                    result: time_lines(span, "alpha", &[0.5, 1.0, 2.0], make, meta.clone()),
                })
                .collect()
        }
        FigurePreset::Fig6 => {
            let axis1 =
                AxisData { name: "k_t".into(), values: linspace(0.0, 10.0, TIME_POINTS) };
            let axis2 =
                AxisData { name: "omega_over_k".into(), values: linspace(1.0, 50.0, PARAM_POINTS) };
            let ewl = balanced(0.8);
            let meta = RunMeta::new(sys(100.0, 1.0, 1.0), ewl, Some(TimeScale::KT));
            let result = grid_eval(
                axis1,
                axis2,
                move |k_t, ratio| {
                    let s = sys(ratio, 1.0, 1.0); // k = 1, Ω = ratio
                    concurrence_ewl(&s, &ewl, k_t)
                },
                meta,
            );
            vec![FigurePanel { name: "fig6".into(), result }]
        }
        FigurePreset::Fig7 => {
            let axis1 = AxisData { name: "alpha".into(), values: linspace(0.0, 2.0, PARAM_POINTS) };
            let axis2 = AxisData { name: "p".into(), values: linspace(0.0, 1.0, PARAM_POINTS) };
            let meta = RunMeta::new(sys(1.0, 0.01, 1.0), balanced(0.9), None);
            let result = grid_eval(
                axis1,
                axis2,
                move |alpha, p| {
                    let s = sys(1.0, 0.01, alpha);
                    concurrence_ewl(&s, &balanced(p), 500.0)
                },
                meta,
            );
            vec![FigurePanel { name: "fig7".into(), result }]
        }
    }
}
