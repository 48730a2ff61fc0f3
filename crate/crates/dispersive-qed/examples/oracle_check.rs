//! The closed forms against the brute-force integrator, at desk scale.
//!
//! A single atom–cavity copy is integrated on a truncated Fock space and the
//! coherence multiplier read off the trajectory is compared with f(t)·λ(t);
//! then the full two-copy system is integrated and its traced-out two-atom
//! state compared elementwise with the channel map.

use dispersive_qed::linalg::ComplexMatrix;
use dispersive_qed::lindblad::{
    coherence_multiplier, integrate, two_copy_oracle, FockSpace, JointState, Model,
};
use dispersive_qed::{
    channel, concurrence_ewl, evolve_two_atom, ewl_state, f_factor, lambda_factor, EwlFamily,
    EwlParams, SystemParams,
};
use num_complex::Complex64;

fn main() {
    let sys = SystemParams::new(1.0, 0.1, Complex64::new(0.8, 0.0)).unwrap();

    // --- single copy ------------------------------------------------------
    let space = FockSpace::new(20).unwrap();
    let half = Complex64::new(0.5, 0.0);
    let atom = ComplexMatrix::from_rows(&[vec![half, half], vec![half, half]]);
    let initial = JointState::atom_coherent_product(&atom, &space, sys.alpha).unwrap();
    let traj = integrate(&initial, &Model::Dispersive(sys), &space, 1e-3, 6.0, 7).unwrap();

    println!("single copy (N = 20, alpha = 0.8, k/omega = 0.1):");
    println!("{:>8} {:>14} {:>14} {:>12}", "omega*t", "|m| oracle", "|f*lambda|", "deviation");
    let mut worst: f64 = 0.0;
    for (t, m) in coherence_multiplier(&traj, &space).unwrap() {
        let want = f_factor(&sys, t) * lambda_factor(&sys, t);
        let dev = (m - want).norm();
        worst = worst.max(dev);
        println!(
            "{:8.2} {:14.8} {:14.8} {:12.3e}",
            t * sys.omega_eff,
            m.norm(),
            want.norm(),
            dev
        );
    }
    println!("worst multiplier deviation: {worst:.3e} (trace drift {:.2e})", traj.max_trace_drift);

    // --- two copies ---------------------------------------------------
    let ewl = EwlParams::balanced(0.8, EwlFamily::Phi).unwrap();
    let space = FockSpace::new(12).unwrap();
    let oracle = two_copy_oracle(&ewl, &sys, &space, 1e-3, 3.0, 7).unwrap();
    let rho0 = ewl_state(&ewl);

    println!("\ntwo copies (N = 12 per cavity, joint dimension {}):", (2 * 12usize).pow(2));
    println!("{:>8} {:>12} {:>12} {:>12}", "omega*t", "C oracle", "C closed", "max |drho|");
    for (i, t) in oracle.times.iter().enumerate() {
        let want = evolve_two_atom(&rho0, &channel(&sys, *t)).unwrap();
        println!(
            "{:8.2} {:12.8} {:12.8} {:12.3e}",
            t * sys.omega_eff,
            oracle.concurrence(i).unwrap(),
            concurrence_ewl(&sys, &ewl, *t),
            oracle.atoms[i].max_abs_diff(want.matrix())
        );
    }
}
