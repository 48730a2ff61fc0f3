//! Entanglement sudden death: where the concurrence hits exact zero and how
//! long it stays there.
//!
//! Scans the mean-photon-number dependence: small coherent amplitudes keep
//! the atoms entangled throughout, larger ones open dead windows that the
//! oscillating field overlap later re-closes, until dissipation wins.

use dispersive_qed::{esd_intervals, EwlFamily, EwlParams, SystemParams};
use num_complex::Complex64;

fn main() {
    let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
    let grid: Vec<f64> = (0..=6000).map(|i| 30.0 * i as f64 / 6000.0).collect();

    println!("p = 0.9, k/omega = 0.01, scan omega*t in [0, 30]");
    for alpha in [0.5, 1.0, 2.0] {
        let sys = SystemParams::new(1.0, 0.01, Complex64::new(alpha, 0.0)).unwrap();
        let intervals = esd_intervals(&sys, &ewl, &grid).unwrap();
        if intervals.is_empty() {
            println!("alpha = {alpha}: no sudden death");
            continue;
        }
        println!("alpha = {alpha}: {} dead window(s)", intervals.len());
        for iv in intervals {
            println!(
                "    omega*t in [{:8.4}, {:8.4}]{}",
                iv.t_start * sys.omega_eff,
                iv.t_end * sys.omega_eff,
                if iv.open_ended { "  (still dead at scan end)" } else { "" }
            );
        }
    }
}
