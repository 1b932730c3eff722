//! Check the defining property of the invariant along the designed
//! trajectory: dI/dt - i [I, H] should vanish when the invariant is paired
//! with its own Hamiltonian, and visibly fail when paired with the
//! opposite-handed one.

use esst::design::{designed_pulses, polynomial_schedule, DesignParams};
use esst::invariant::{invariance_residual, invariant_matrix, residuals_on_grid, InvariantSpec};
use esst::metrics::omega_max;
use esst::model::{su2_hamiltonian, Chirality};

fn main() {
    let omega0 = 2.0;
    let tau = 1.0;
    let params = DesignParams::new(tau, 0.02);
    let schedule = polynomial_schedule(&params, Chirality::Left).unwrap();
    let pulses = designed_pulses(&params, Chirality::Left).unwrap();

    let residuals = residuals_on_grid(&schedule, &pulses, omega0).unwrap();
    let worst = residuals[1..residuals.len() - 1]
        .iter()
        .fold(0.0_f64, |a, &b| a.max(b));
    let peak = omega_max(&pulses);
    println!("designed pairing:   max residual {worst:.2e}  (omega0 * omega_max = {:.2})",
        omega0 * peak);

    // Same invariant, wrong-handed Hamiltonian: the condition breaks down.
    let h = tau / (schedule.len() - 1) as f64;
    let invariant_at = |t: f64| {
        invariant_matrix(&InvariantSpec {
            omega0,
            angles: schedule.angles_at(t),
            chirality: Chirality::Left,
        })
        .unwrap()
    };
    let wrong = invariance_residual(
        invariant_at,
        |t| su2_hamiltonian(&pulses.value_at(t), Chirality::Right).unwrap(),
        tau / 2.0,
        h,
        tau,
    )
    .unwrap();
    println!("mismatched pairing: residual {wrong:.3} at t = tau/2");
}
