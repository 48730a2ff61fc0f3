//! Long-lived entanglement: the nonzero stationary concurrence that survives
//! cavity dissipation.
//!
//! Maps the t → ∞ limit over the coherent amplitude and purity, and marks
//! where it dies entirely.

use dispersive_qed::{asymptotic_concurrence, concurrence_ewl, EwlFamily, EwlParams, SystemParams};
use num_complex::Complex64;

fn main() {
    let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
    println!("p = 0.9, k/omega = 0.01:");
    println!("{:>8} {:>12} {:>14}", "alpha", "C(inf)", "C at kt = 25");
    for i in 0..=8 {
        let alpha = 0.25 * i as f64;
        let sys = SystemParams::new(1.0, 0.01, Complex64::new(alpha, 0.0)).unwrap();
        let c_inf = asymptotic_concurrence(&sys, &ewl).unwrap();
        let late = concurrence_ewl(&sys, &ewl, 25.0 / sys.decay);
        println!("{alpha:8.2} {c_inf:12.6} {late:14.6}");
    }

    // Purity needed for any stationary entanglement at a given amplitude:
    // the white-noise floor (1-p)/2 has to stay below the frozen coherence.
    println!("\nminimum purity for long-lived entanglement:");
    for alpha in [0.25, 0.5, 1.0, 1.5] {
        let sys = SystemParams::new(1.0, 0.01, Complex64::new(alpha, 0.0)).unwrap();
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..60 {
            let p = 0.5 * (lo + hi);
            let ewl = EwlParams::balanced(p, EwlFamily::Phi).unwrap();
            if asymptotic_concurrence(&sys, &ewl).unwrap() > 0.0 {
                hi = p;
            } else {
                lo = p;
            }
        }
        println!("  alpha = {alpha}: p > {hi:.6}");
    }
}
