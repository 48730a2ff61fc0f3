//! CSV emission, plot-script generation and the textual run report.

use std::io::Write;
use std::path::Path;

use crate::analytic::{concurrence_ewl, default_threshold_level, threshold_time, AnalyticError};

use super::{CliError, SweepResult, TimeScale};

/// Serialize one value with 17 significant digits.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a sweep grid as CSV: comment header, one column per axis, one
/// quantity column per grid, rows outer-axis-major. Refuses to write
/// non-finite values, naming the offending grid point.
pub fn emit_csv(result: &SweepResult, path: &Path, deterministic: bool) -> Result<(), CliError> {
    let n2 = result.axis2.as_ref().map(|a| a.values.len()).unwrap_or(1);
    let n1 = result.axis1.values.len();
    let expect = n1 * n2;
    if result.concurrence.len() != expect {
        return Err(CliError::Numeric(format!(
            "grid holds {} values but axes span {expect}",
            result.concurrence.len()
        )));
    }

    for (idx, &c) in result.concurrence.iter().enumerate() {
        if !c.is_finite() {
            let (i, j) = (idx / n2, idx % n2);
            return Err(CliError::Numeric(format!(
                "non-finite concurrence at {} = {}{}",
                result.axis1.name,
                result.axis1.values[i],
                result
                    .axis2
                    .as_ref()
                    .map(|a| format!(", {} = {}", a.name, a.values[j]))
                    .unwrap_or_default()
            )));
        }
    }
    if let Some(entropy) = &result.linear_entropy {
        if entropy.iter().any(|s| !s.is_finite()) {
            return Err(CliError::Numeric("non-finite linear entropy in grid".into()));
        }
    }

    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "# dispersive-qed v{}", result.meta.version)?;
    writeln!(w, "# params: {}", result.meta.config_echo)?;
    if !deterministic {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "# generated: unix:{now}")?;
    }

    let mut header = result.axis1.name.clone();
    if let Some(a2) = &result.axis2 {
        header.push(',');
        header.push_str(&a2.name);
    }
    header.push_str(",concurrence");
    if result.linear_entropy.is_some() {
        header.push_str(",linear_entropy");
    }
    writeln!(w, "{header}")?;

    for i in 0..n1 {
        for j in 0..n2 {
            let idx = i * n2 + j;
            let mut row = fmt(result.axis1.values[i]);
            if let Some(a2) = &result.axis2 {
                row.push(',');
                row.push_str(&fmt(a2.values[j]));
            }
            row.push(',');
            row.push_str(&fmt(result.concurrence[idx]));
            if let Some(entropy) = &result.linear_entropy {
                row.push(',');
                row.push_str(&fmt(entropy[idx]));
            }
            writeln!(w, "{row}")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Companion plotting script for a CSV. Text-only convenience; the CSV is
/// the artifact of record.
pub fn emit_plot_script(result: &SweepResult, csv_path: &Path) -> Result<(), CliError> {
    let script_path = csv_path.with_extension("plot.py");
    let csv_name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data.csv".into());
    let n2 = result.axis2.as_ref().map(|a| a.values.len()).unwrap_or(1);
    let heatmap = n2 > 8;

    let mut body = String::new();
    body.push_str("#!/usr/bin/env python3\n");
    body.push_str("import numpy as np\nimport matplotlib.pyplot as plt\n\n");
    body.push_str(&format!("data = np.genfromtxt(\"{csv_name}\", delimiter=\",\", comments=\"#\", names=True)\n"));
    let a1 = &result.axis1.name;
    if let Some(a2) = &result.axis2 {
        let a2 = &a2.name;
        if heatmap {
            body.push_str(&format!(
                "x = np.unique(data[\"{a1}\"])\ny = np.unique(data[\"{a2}\"])\n\
                 c = data[\"concurrence\"].reshape(len(x), len(y))\n\
                 plt.pcolormesh(x, y, c.T, shading=\"auto\")\n\
                 plt.colorbar(label=\"concurrence\")\n"
            ));
        } else {
            body.push_str(&format!(
                "for v in np.unique(data[\"{a2}\"]):\n\
                 \x20\x20\x20\x20sel = data[\"{a2}\"] == v\n\
                 \x20\x20\x20\x20plt.plot(data[\"{a1}\"][sel], data[\"concurrence\"][sel], label=f\"{a2} = {{v:g}}\")\n\
                 plt.legend()\nplt.ylabel(\"concurrence\")\n"
            ));
        }
    } else {
        body.push_str(&format!(
            "plt.plot(data[\"{a1}\"], data[\"concurrence\"])\nplt.ylabel(\"concurrence\")\n"
        ));
    }
    body.push_str(&format!("plt.xlabel(\"{a1}\")\nplt.tight_layout()\nplt.show()\n"));

    std::fs::write(&script_path, body)?;
    Ok(())
}

/// Human-readable summary of a run: initial and extremal concurrence,
/// sudden-death intervals, the stationary value and the threshold time under
/// the default level convention.
pub fn report(result: &SweepResult) -> String {
    let sys = &result.meta.sys;
    let ewl = &result.meta.ewl;
    let mut out = String::new();
    out.push_str("dispersive-qed run summary\n");
    out.push_str(&format!("  parameters : {}\n", result.meta.config_echo));

    let c0 = concurrence_ewl(sys, ewl, 0.0);
    out.push_str(&format!("  C(0)       = {c0:.6}\n"));

    let max_c = result.concurrence.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    out.push_str(&format!("  max C      = {max_c:.6} over the grid\n"));

    let unit = match result.meta.time_scale {
        Some(TimeScale::OmegaT) => "Omega*t",
        Some(TimeScale::KT) => "k*t",
        None => "t",
    };
    if result.esd.is_empty() {
        out.push_str("  ESD        : none\n");
    } else {
        let spans: Vec<String> = result
            .esd
            .iter()
            .map(|iv| {
                format!(
                    "[{:.4}, {:.4}{}]",
                    iv.t_start,
                    iv.t_end,
                    if iv.open_ended { ", open" } else { "" }
                )
            })
            .collect();
        out.push_str(&format!(
            "  ESD        : {} interval(s) in {unit}: {}\n",
            result.esd.len(),
            spans.join(" ")
        ));
    }

    match result.asymptotic {
        Some(c_inf) => {
            if c_inf > 0.0 {
                out.push_str(&format!(
                    "  C(inf)     = {c_inf:.6} (long-lived entanglement)\n"
                ));
            } else {
                out.push_str("  C(inf)     = 0 (no long-lived entanglement)\n");
            }
        }
        None => out.push_str("  C(inf)     : undefined (k = 0, lossless oscillation)\n"),
    }

    if c0 <= 0.0 && max_c <= 0.0 && result.asymptotic.unwrap_or(0.0) <= 0.0 {
        out.push_str("  note       : C(t) = 0 for all t (no entanglement is generated)\n");
    }

    match threshold_line(result) {
        Ok(line) => out.push_str(&line),
        Err(e) => out.push_str(&format!("  kt_c       : n/a ({e})\n")),
    }
    out
}

fn threshold_line(result: &SweepResult) -> Result<String, AnalyticError> {
    let sys = &result.meta.sys;
    let ewl = &result.meta.ewl;
    let level = default_threshold_level(sys, ewl)?;
    let horizon = 15.0 / sys.decay;
    let kt = threshold_time(sys, ewl, level, horizon)?;
    Ok(format!(
        "  kt_c       = {kt:.4} at level c = {level:.6} (default convention)\n"
    ))
}
