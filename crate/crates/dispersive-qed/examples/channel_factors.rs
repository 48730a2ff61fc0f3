//! The two scalar factors that drive everything: f(t) and λ(t).
//!
//! Prints their magnitudes and the combined coherence multiplier over a few
//! oscillation periods, then shows the lossless limit where |f| stays on the
//! unit circle and |λ| breathes periodically.

use dispersive_qed::{channel, f_factor, lambda_factor, SystemParams};
use num_complex::Complex64;

fn main() {
    let sys = SystemParams::new(1.0, 0.05, Complex64::new(1.0, 0.0)).unwrap();
    println!("dissipative cavity: omega_eff = 1, k/omega = 0.05, alpha = 1");
    println!("{:>8} {:>12} {:>12} {:>12}", "omega*t", "|f|", "|lambda|", "|f*lambda|^2");
    for i in 0..=12 {
        let t = i as f64 * 0.5 * std::f64::consts::PI;
        let ch = channel(&sys, t);
        println!(
            "{:8.3} {:12.6} {:12.6} {:12.6}",
            t * sys.omega_eff,
            ch.f.norm(),
            ch.lam.norm(),
            ch.multiplier().norm_sqr()
        );
    }

    let asymptote = (-2.0 * sys.alpha.norm_sqr() * sys.omega_eff.powi(2)
        / (sys.decay.powi(2) + sys.omega_eff.powi(2)))
    .exp();
    println!("\nstationary multiplier |f*lambda|^2 -> {asymptote:.6}");

    // Without decay the factors never lose magnitude permanently: f is a pure
    // phase and lambda returns to 1 every half period.
    let lossless = SystemParams::new(1.0, 0.0, Complex64::new(1.0, 0.0)).unwrap();
    println!("\nlossless cavity (k = 0):");
    for i in 0..=4 {
        let t = i as f64 * 0.25 * std::f64::consts::PI;
        println!(
            "  omega*t = {:6.3}: |f| = {:.6}, |lambda| = {:.6}",
            t,
            f_factor(&lossless, t).norm(),
            lambda_factor(&lossless, t).norm()
        );
    }
}
