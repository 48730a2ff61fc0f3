//! Each atom's marginal is a decoherence-free subsystem: its linear entropy
//! never moves, no matter how violently the joint entanglement behaves.

use dispersive_qed::{
    channel, concurrence_ewl, evolve_two_atom, ewl_state, linear_entropy, reduced_atom, Atom,
    EwlFamily, EwlParams, SystemParams, TwoQubitDensity,
};
use num_complex::Complex64;

fn main() {
    let sys = SystemParams::new(1.0, 0.01, Complex64::new(1.0, 0.0)).unwrap();
    let ewl = EwlParams::balanced(0.9, EwlFamily::Phi).unwrap();
    let rho0 = ewl_state(&ewl);

    println!("p = 0.9, alpha = 1, k/omega = 0.01");
    println!("{:>8} {:>12} {:>14} {:>14}", "omega*t", "C(t)", "S(atom 1)", "S(atom 2)");
    for i in 0..=10 {
        let omega_t = 3.0 * i as f64;
        let t = omega_t / sys.omega_eff;
        let evolved: TwoQubitDensity = evolve_two_atom(&rho0, &channel(&sys, t)).unwrap().into();
        let s1 = linear_entropy(&reduced_atom(&evolved, Atom::Atom1)).unwrap();
        let s2 = linear_entropy(&reduced_atom(&evolved, Atom::Atom2)).unwrap();
        println!(
            "{omega_t:8.1} {:12.6} {s1:14.12} {s2:14.12}",
            concurrence_ewl(&sys, &ewl, t)
        );
    }
    println!("\nthe joint state loses entanglement; the marginals never notice.");

    // Unbalanced weights shift the constant but not the constancy.
    let skew = EwlParams::new(
        0.7,
        Complex64::new(0.9, 0.0),
        Complex64::new(0.0, (1.0f64 - 0.81).sqrt()),
        EwlFamily::Psi,
    )
    .unwrap();
    let rho0 = ewl_state(&skew);
    let s_at = |t: f64| {
        let evolved: TwoQubitDensity = evolve_two_atom(&rho0, &channel(&sys, t)).unwrap().into();
        linear_entropy(&reduced_atom(&evolved, Atom::Atom1)).unwrap()
    };
    println!("\nskewed weights |mu| = 0.9: S(atom 1) = {:.12} at t = 0", s_at(0.0));
    println!("                           S(atom 1) = {:.12} at omega*t = 40", s_at(40.0));
}
