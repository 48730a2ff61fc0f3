//! The threshold time kt_c past which the concurrence stops oscillating and
//! sits at its stationary value.
//!
//! Uses the default level convention (a hair above the stationary value) and
//! shows how weakly kt_c depends on the coupling-to-decay ratio.

use dispersive_qed::analytic::default_threshold_level;
use dispersive_qed::{concurrence_ewl, threshold_time, EwlFamily, EwlParams, SystemParams};
use num_complex::Complex64;

fn main() {
    let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
    println!("alpha = 1, p = 0.8, mu = nu = 1/sqrt(2)");
    println!("{:>12} {:>14} {:>10}", "omega/k", "level c", "kt_c");
    for ratio in [10.0, 20.0, 50.0, 100.0, 200.0] {
        let sys = SystemParams::new(1.0, 1.0 / ratio, Complex64::new(1.0, 0.0)).unwrap();
        let level = default_threshold_level(&sys, &ewl).unwrap();
        let kt_c = threshold_time(&sys, &ewl, level, 15.0 / sys.decay).unwrap();
        println!("{ratio:12.0} {level:14.8} {kt_c:10.4}");
    }

    // Past the threshold the trajectory is effectively flat.
    let sys = SystemParams::new(1.0, 0.01, Complex64::new(1.0, 0.0)).unwrap();
    let level = default_threshold_level(&sys, &ewl).unwrap();
    let kt_c = threshold_time(&sys, &ewl, level, 15.0 / sys.decay).unwrap();
    println!("\nconcurrence around kt_c = {kt_c:.3} (omega/k = 100):");
    for kt in [0.5 * kt_c, kt_c, 1.5 * kt_c, 2.0 * kt_c] {
        let c = concurrence_ewl(&sys, &ewl, kt / sys.decay);
        println!("  kt = {kt:7.3}: C = {c:.9}");
    }
}
