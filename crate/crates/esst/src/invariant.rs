//! Dynamical invariants for the cyclic three-level system.
//!
//! A Hermitian operator I(t) with dI/dt = dI/dt|_partial - i [I, H] = 0 keeps
//! constant eigenvalues, and the exact solution of the Schroedinger equation
//! decomposes over its eigenstates as
//!
//! ```text
//!   psi(t) = sum_n c_n exp(i alpha_n(t)) |phi_n(t)>,
//!   c_n = <phi_n(0)|psi(0)>,
//! ```
//!
//! with time-independent coefficients and the phases
//! `alpha_n(t) = int_0^t <phi_n|(i d/dt' - H)|phi_n> dt'`.
//!
//! The invariant used here is parametrized by two auxiliary angles:
//!
//! ```text
//!   I = (omega0 / 2) (cos(theta) sin(psi) K_x
//!        + cos(theta) cos(psi) K_y + sin(theta) K_z)
//! ```
//!
//! Its eigenvalues are 0 and +- omega0/2 for any angles, and the
//! eigenvectors are available in closed form below. For the zero branch the
//! phase vanishes identically; for the +- branches the integrand evaluates
//! to
//!
//! ```text
//!   d(alpha_pm)/dt = -+ [ dpsi sin(theta)
//!                       + Omega_x cos(theta) sin(psi)
//!                       + s Omega_y cos(theta) cos(psi)
//!                       + Omega_z sin(theta) ]
//! ```
//!
//! where s is the chirality sign carried by the Hamiltonian. (The dpsi term
//! comes from `<phi_pm| i d/dt |phi_pm> = -+ dpsi sin(theta)`; note the
//! factor sin(theta), not sin(psi).)

use num_complex::Complex64 as C64;

use crate::algebra::{Matrix3, Vector3};
use crate::design::{AngleSchedule, PulseSet};
use crate::error::{Error, Result};
use crate::model::{su2_hamiltonian, Chirality};

/// Auxiliary angles and their time derivatives.
///
/// `theta` is the angle multiplying K_z in the invariant (gamma for the
/// left branch, xi for the right); `psi` is the azimuthal angle between the
/// K_x and K_y terms (beta for the left branch, chi for the right).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuxAngles {
    pub theta: f64,
    pub psi: f64,
    pub dtheta: f64,
    pub dpsi: f64,
}

impl AuxAngles {
    pub fn new(theta: f64, psi: f64, dtheta: f64, dpsi: f64) -> Self {
        AuxAngles { theta, psi, dtheta, dpsi }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite()
            && self.psi.is_finite()
            && self.dtheta.is_finite()
            && self.dpsi.is_finite()
    }
}

/// Everything needed to build the invariant matrix at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantSpec {
    /// Arbitrary positive constant with unit of frequency; only the
    /// eigenvectors matter for the transfer, so its value is free.
    pub omega0: f64,
    pub angles: AuxAngles,
    pub chirality: Chirality,
}

impl InvariantSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.omega0.is_finite() || self.omega0 <= 0.0 {
            return Err(Error::invalid(
                "omega0",
                format!("must be finite and > 0, got {}", self.omega0),
            ));
        }
        if !self.angles.is_finite() {
            return Err(Error::NonFinite { context: "invariant angles" });
        }
        Ok(())
    }
}

pub(crate) fn invariant_matrix_unchecked(omega0: f64, angles: &AuxAngles) -> Matrix3 {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.psi.sin_cos();
    let w = omega0 / 2.0;
    let xy = C64::new(w * ct * sp, 0.0);
    let yz = C64::new(w * ct * cp, 0.0);
    let xz = C64::new(0.0, -w * st);
    let o = C64::ZERO;
    Matrix3::from_rows([[o, xy, xz], [xy, o, yz], [-xz, yz, o]])
}

/// The invariant matrix
/// `(omega0/2)(cos(theta) sin(psi) K_x + cos(theta) cos(psi) K_y + sin(theta) K_z)`.
///
/// Hermitian by construction; the matrix form is the same for both
/// chiralities (the tag only records which basis the angles refer to). Its
/// eigenvalues are {0, +omega0/2, -omega0/2} for every angle pair.
pub fn invariant_matrix(spec: &InvariantSpec) -> Result<Matrix3> {
    spec.validate()?;
    Ok(invariant_matrix_unchecked(spec.omega0, &spec.angles))
}

/// Closed-form orthonormal eigenvectors of the invariant.
#[derive(Clone, Copy, Debug)]
pub struct InvariantEigensystem {
    /// Eigenvalue 0 branch; carries the transfer.
    pub phi_zero: Vector3,
    /// Eigenvalue +omega0/2 branch.
    pub phi_plus: Vector3,
    /// Eigenvalue -omega0/2 branch.
    pub phi_minus: Vector3,
}

impl InvariantEigensystem {
    pub fn branch(&self, branch: Branch) -> &Vector3 {
        match branch {
            Branch::Zero => &self.phi_zero,
            Branch::Plus => &self.phi_plus,
            Branch::Minus => &self.phi_minus,
        }
    }
}

/// Eigenvectors of [`invariant_matrix`] with their conventional global
/// phases:
///
/// ```text
///   phi_0  = ( cos(theta) cos(psi), -i sin(theta), -cos(theta) sin(psi) )
///   phi_+- = ( sin(theta) cos(psi) +- i sin(psi),
///              i cos(theta),
///              -sin(theta) sin(psi) +- i cos(psi) ) / sqrt(2)
/// ```
///
/// The phases are part of the contract: the transfer targets (-|3> for the
/// left branch, i|2> for the right) and the phase reconstruction both
/// depend on them, so no re-phasing is applied.
pub fn invariant_eigensystem(angles: &AuxAngles) -> Result<InvariantEigensystem> {
    if !angles.is_finite() {
        return Err(Error::NonFinite { context: "invariant_eigensystem" });
    }
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.psi.sin_cos();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let phi_zero = Vector3::new(
        C64::new(ct * cp, 0.0),
        C64::new(0.0, -st),
        C64::new(-ct * sp, 0.0),
    );
    let phi_plus = Vector3::new(
        C64::new(st * cp, sp) * inv_sqrt2,
        C64::new(0.0, ct) * inv_sqrt2,
        C64::new(-st * sp, cp) * inv_sqrt2,
    );
    let phi_minus = Vector3::new(
        C64::new(st * cp, -sp) * inv_sqrt2,
        C64::new(0.0, ct) * inv_sqrt2,
        C64::new(-st * sp, -cp) * inv_sqrt2,
    );
    Ok(InvariantEigensystem { phi_zero, phi_plus, phi_minus })
}

/// Branch index of the invariant eigensystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Zero,
    Plus,
    Minus,
}

/// Finite-difference check of the invariance condition at time `t`:
/// returns `max_abs( (I(t+dt) - I(t-dt)) / (2 dt) - i [I(t), H(t)] )`.
///
/// Near zero along a correctly designed trajectory (up to the O(dt^2)
/// stencil floor); order one when the invariant does not belong to the
/// Hamiltonian, e.g. when the chirality is wrong.
pub fn invariance_residual<I, H>(
    invariant_at: I,
    hamiltonian_at: H,
    t: f64,
    dt: f64,
    t_end: f64,
) -> Result<f64>
where
    I: Fn(f64) -> Matrix3,
    H: Fn(f64) -> Matrix3,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    if t - dt < 0.0 || t + dt > t_end {
        return Err(Error::StencilOutOfRange { t, dt });
    }
    let deriv = (invariant_at(t + dt) - invariant_at(t - dt))
        .scaled(C64::new(1.0 / (2.0 * dt), 0.0));
    let comm = Matrix3::commutator(&invariant_at(t), &hamiltonian_at(t));
    let residual = deriv - comm.scaled(C64::I);
    Ok(residual.max_abs())
}

/// Integrand of the +- phase derivative (without the leading -+ sign).
fn lr_integrand(angles: &AuxAngles, omega_x: f64, omega_y: f64, omega_z: f64, sign: f64) -> f64 {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.psi.sin_cos();
    angles.dpsi * st + omega_x * ct * sp + sign * omega_y * ct * cp + omega_z * st
}

/// Cumulative integral of uniformly sampled values by composite Simpson
/// quadrature; odd indices are completed with the three-point half-panel
/// rule. `out[k]` approximates the integral from sample 0 to sample k.
pub(crate) fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    for k in 1..n {
        if k == 1 {
            out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
        } else if k % 2 == 0 {
            out[k] = out[k - 2] + h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
        } else {
            out[k] = out[k - 1]
                + h / 12.0 * (-values[k - 2] + 8.0 * values[k - 1] + 5.0 * values[k]);
        }
    }
    out
}

/// `alpha_plus` sampled on the schedule grid (`alpha_minus = -alpha_plus`,
/// `alpha_zero = 0`). The schedule and pulse grids must agree.
pub fn lr_phase_table(schedule: &AngleSchedule, pulses: &PulseSet) -> Result<Vec<f64>> {
    if schedule.len() != pulses.len() || schedule.len() < 2 {
        return Err(Error::invalid(
            "schedule",
            format!(
                "schedule grid ({} points) and pulse grid ({} points) must match and hold \
                 at least 2 samples",
                schedule.len(),
                pulses.len()
            ),
        ));
    }
    if (schedule.tau() - pulses.tau()).abs() > 1e-12 * schedule.tau().abs().max(1.0) {
        return Err(Error::invalid(
            "schedule",
            format!("schedule tau {} differs from pulse tau {}", schedule.tau(), pulses.tau()),
        ));
    }
    let sign = schedule.chirality().sign();
    let h = schedule.tau() / (schedule.len() - 1) as f64;
    let integrand: Vec<f64> = schedule
        .times()
        .iter()
        .zip(schedule.samples().iter())
        .map(|(&t, angles)| {
            let rabi = pulses.value_at(t);
            lr_integrand(angles, rabi.omega_x, rabi.omega_y, rabi.omega_z, sign)
        })
        .collect();
    // alpha_plus carries the minus sign in front of the integral.
    Ok(cumulative_simpson(&integrand, h).into_iter().map(|v| -v).collect())
}

/// Lewis-Riesenfeld phase of one invariant branch at time `t` in
/// `[0, tau]`. Zero-branch phases vanish identically; the +- branches are
/// computed by Simpson quadrature on the schedule grid (linear
/// interpolation between grid points).
pub fn lr_phase(branch: Branch, schedule: &AngleSchedule, pulses: &PulseSet, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { context: "lr_phase time" });
    }
    let tau = schedule.tau();
    if t < -1e-12 * tau || t > tau * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "t",
            format!("t = {t} outside the schedule interval [0, {tau}]"),
        ));
    }
    if branch == Branch::Zero {
        return Ok(0.0);
    }
    let table = lr_phase_table(schedule, pulses)?;
    let h = tau / (table.len() - 1) as f64;
    let x = (t / h).clamp(0.0, (table.len() - 1) as f64);
    let k = (x.floor() as usize).min(table.len() - 2);
    let frac = x - k as f64;
    let alpha_plus = table[k] + (table[k + 1] - table[k]) * frac;
    Ok(match branch {
        Branch::Plus => alpha_plus,
        Branch::Minus => -alpha_plus,
        Branch::Zero => unreachable!(),
    })
}

/// Invariance residuals over the schedule grid with the matching designed
/// field: central differences at interior points, NaN at the two endpoints
/// where the stencil does not fit.
pub fn residuals_on_grid(
    schedule: &AngleSchedule,
    pulses: &PulseSet,
    omega0: f64,
) -> Result<Vec<f64>> {
    if schedule.len() != pulses.len() || schedule.len() < 3 {
        return Err(Error::invalid(
            "schedule",
            "need matching grids with at least 3 samples for the central stencil".to_string(),
        ));
    }
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::invalid("omega0", format!("must be finite and > 0, got {omega0}")));
    }
    let chirality = schedule.chirality();
    let tau = schedule.tau();
    let n = schedule.len();
    let h = tau / (n - 1) as f64;
    let invariant_at = |t: f64| invariant_matrix_unchecked(omega0, &schedule.angles_at(t));
    let hamiltonian_at = |t: f64| {
        su2_hamiltonian(&pulses.value_at(t), chirality)
            .expect("designed pulse samples are finite")
    };
    let mut out = vec![f64::NAN; n];
    for (k, slot) in out.iter_mut().enumerate().take(n - 1).skip(1) {
        *slot = invariance_residual(invariant_at, hamiltonian_at, schedule.times()[k], h, tau)?;
    }
    Ok(out)
}
