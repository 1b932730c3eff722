//! Norm-preserving integration of the time-dependent Schroedinger equation.
//!
//! Each step applies the exact exponential of the midpoint-sampled
//! Hamiltonian, `psi <- exp(-i H(t_mid) dt) psi` (second-order Magnus), so
//! the evolution is unitary by construction and the recorded norm error
//! only reflects eigendecomposition roundoff. Waveforms are re-evaluated
//! from their closed form at the substep midpoints; nothing is
//! interpolated.

use std::io::{self, Write};

use crate::algebra::{hermitian_expm, Matrix3, Vector3};
use crate::design::{AngleSchedule, PulseSet};
use crate::error::{Error, Result};
use crate::invariant::residuals_on_grid;
use crate::model::{su2_hamiltonian, Chirality};

/// Minimum accepted step count.
pub const MIN_STEPS: usize = 100;

/// Largest accepted deviation of |psi0| from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Time-indexed record of one propagation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vector3>,
    pub populations: Vec<[f64; 3]>,
    pub norm_errors: Vec<f64>,
    /// Filled by [`Trajectory::with_invariant_residuals`]; NaN at the two
    /// endpoints where the central stencil does not fit.
    pub invariant_residuals: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &Vector3 {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn final_populations(&self) -> [f64; 3] {
        *self.populations.last().expect("trajectory holds at least the initial state")
    }

    pub fn max_norm_error(&self) -> f64 {
        self.norm_errors.iter().fold(0.0_f64, |a, &b| a.max(b))
    }

    /// Attach invariance-condition residuals computed from the designed
    /// schedule that this trajectory followed.
    pub fn with_invariant_residuals(
        mut self,
        schedule: &AngleSchedule,
        pulses: &PulseSet,
        omega0: f64,
    ) -> Result<Self> {
        if schedule.len() != self.len() {
            return Err(Error::invalid(
                "schedule",
                format!(
                    "schedule grid ({} points) does not match trajectory grid ({} points)",
                    schedule.len(),
                    self.len()
                ),
            ));
        }
        self.invariant_residuals = Some(residuals_on_grid(schedule, pulses, omega0)?);
        Ok(self)
    }

    /// CSV with header `t,P1,P2,P3,norm_error[,invariant_residual]`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        match &self.invariant_residuals {
            None => {
                writeln!(out, "t,P1,P2,P3,norm_error")?;
                for k in 0..self.len() {
                    let p = self.populations[k];
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        crate::fmt_sig(self.times[k]),
                        crate::fmt_sig(p[0]),
                        crate::fmt_sig(p[1]),
                        crate::fmt_sig(p[2]),
                        crate::fmt_sig(self.norm_errors[k]),
                    )?;
                }
            }
            Some(residuals) => {
                writeln!(out, "t,P1,P2,P3,norm_error,invariant_residual")?;
                for (k, &residual) in residuals.iter().enumerate() {
                    let p = self.populations[k];
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        crate::fmt_sig(self.times[k]),
                        crate::fmt_sig(p[0]),
                        crate::fmt_sig(p[1]),
                        crate::fmt_sig(p[2]),
                        crate::fmt_sig(self.norm_errors[k]),
                        crate::fmt_sig(residual),
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Integrate under an arbitrary Hamiltonian schedule over `[0, tau]`.
/// The closure is queried at the step midpoints.
pub fn propagate_hamiltonian<H>(
    hamiltonian_at: H,
    tau: f64,
    psi0: &Vector3,
    steps: usize,
) -> Result<Trajectory>
where
    H: Fn(f64) -> Result<Matrix3>,
{
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
    }
    if steps < MIN_STEPS {
        return Err(Error::invalid(
            "steps",
            format!("need at least {MIN_STEPS} steps, got {steps}"),
        ));
    }
    if !psi0.is_finite() {
        return Err(Error::NonFinite { context: "initial state" });
    }
    let norm_dev = (psi0.norm_sqr() - 1.0).abs();
    if norm_dev > NORM_TOL {
        return Err(Error::invalid(
            "psi0",
            format!("|norm^2 - 1| = {norm_dev:.3e} exceeds {NORM_TOL:.1e}"),
        ));
    }

    let n = steps as f64;
    let dt = tau / n;
    let mut psi = *psi0;
    let mut trajectory = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        populations: Vec::with_capacity(steps + 1),
        norm_errors: Vec::with_capacity(steps + 1),
        invariant_residuals: None,
    };
    let record = |t: f64, psi: &Vector3, out: &mut Trajectory| {
        out.times.push(t);
        out.states.push(*psi);
        out.populations.push(psi.populations());
        out.norm_errors.push((psi.norm() - 1.0).abs());
    };
    record(0.0, &psi, &mut trajectory);

    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) / n * tau;
        let h = hamiltonian_at(t_mid)?;
        if !h.is_finite() {
            return Err(Error::NonFinite { context: "sampled Hamiltonian" });
        }
        let u = hermitian_expm(&h, dt)?;
        psi = u * psi;
        record((k as f64 + 1.0) / n * tau, &psi, &mut trajectory);
    }
    Ok(trajectory)
}

/// Integrate a state under the given pulse set and chirality.
pub fn propagate(
    pulses: &PulseSet,
    chirality: Chirality,
    psi0: &Vector3,
    steps: usize,
) -> Result<Trajectory> {
    propagate_hamiltonian(
        |t| su2_hamiltonian(&pulses.value_at(t), chirality),
        pulses.tau(),
        psi0,
        steps,
    )
}

/// Max-amplitude difference between the final states obtained with `steps`
/// and `2 * steps`; certifies grid adequacy by Richardson halving.
pub fn convergence_check(
    pulses: &PulseSet,
    chirality: Chirality,
    psi0: &Vector3,
    steps: usize,
) -> Result<f64> {
    let coarse = propagate(pulses, chirality, psi0, steps)?;
    let fine = propagate(pulses, chirality, psi0, 2 * steps)?;
    Ok(coarse.final_state().max_abs_diff(fine.final_state()))
}
