//! Concurrence of two atoms in separate leaky cavities over time.
//!
//! Starts from extended Werner-like states of different purity and traces
//! how the initial entanglement decays, dies, revives and finally freezes at
//! its stationary value.

use dispersive_qed::{
    asymptotic_concurrence, concurrence_ewl, EwlFamily, EwlParams, SystemParams,
};
use num_complex::Complex64;

fn main() {
    let sys = SystemParams::new(1.0, 0.01, Complex64::new(1.0, 0.0)).unwrap();
    let purities = [1.0, 0.8, 0.6];
    let states: Vec<EwlParams> = purities
        .iter()
        .map(|&p| EwlParams::balanced(p, EwlFamily::Phi).unwrap())
        .collect();

    println!("omega_eff = 1, k = 0.01, alpha = 1, mu = nu = 1/sqrt(2)");
    print!("{:>8}", "omega*t");
    for p in purities {
        print!(" {:>10}", format!("C (p={p})"));
    }
    println!();

    for i in 0..=20 {
        let omega_t = 1.5 * i as f64;
        let t = omega_t / sys.omega_eff;
        print!("{omega_t:8.2}");
        for ewl in &states {
            print!(" {:10.6}", concurrence_ewl(&sys, ewl, t));
        }
        println!();
    }

    println!("\nstationary values:");
    for (p, ewl) in purities.iter().zip(&states) {
        let c_inf = asymptotic_concurrence(&sys, ewl).unwrap();
        println!("  p = {p}: C(inf) = {c_inf:.6}");
    }
}
