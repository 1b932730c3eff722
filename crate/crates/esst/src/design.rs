//! Inverse engineering of the control fields.
//!
//! The transfer is designed backwards: pick auxiliary-angle trajectories for
//! the invariant first, then solve for the Rabi waveforms that realize them.
//! With the cubic polynomial schedule and the convention Omega_x = Omega_z,
//! the waveforms reduce to closed forms:
//!
//! ```text
//!   Omega_x(t) = Omega_z(t) = (3 pi t / tau^2) (t/tau - 1)
//!   Omega_y(t) = Omega_x(t) * cot(3 pi t^2 / (2 tau^2) - pi t^3 / tau^3 + c)
//! ```
//!
//! where `c` is `eta` for the left-handed design and `-eta'` for the
//! right-handed one, so the two designs produce literally the same field when
//! `eta = -eta'`. The offset keeps the cotangent argument away from zero at
//! t = 0; without it Omega_y diverges, which is why `eta = 0` is a hard
//! error rather than a limit.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::invariant::AuxAngles;
use crate::model::{Chirality, RabiSample};

/// Denominator magnitude below which the inverse engineering is singular.
pub const SINGULAR_DENOMINATOR_LIMIT: f64 = 1e-9;

/// Default number of uniform samples over [0, tau].
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Largest admissible |eta| for the closed-form design.
pub const MAX_ETA: f64 = 0.2;

/// Parameters of the closed-form polynomial design.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignParams {
    /// Total duration, in the caller's time unit.
    pub tau: f64,
    /// Regularization angle (radians). For a right-handed design this is
    /// eta'; the headline scenario uses eta = -eta' = 0.02.
    pub eta: f64,
    /// Number of uniform grid samples (>= 2).
    pub grid_points: usize,
}

impl DesignParams {
    pub fn new(tau: f64, eta: f64) -> Self {
        DesignParams { tau, eta, grid_points: DEFAULT_GRID_POINTS }
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(Error::invalid("tau", format!("must be finite and > 0, got {}", self.tau)));
        }
        if !self.eta.is_finite() || self.eta.abs() > MAX_ETA {
            return Err(Error::invalid(
                "eta",
                format!("|eta| must lie in (0, {MAX_ETA}], got {}", self.eta),
            ));
        }
        if self.grid_points < 2 {
            return Err(Error::invalid(
                "grid_points",
                format!("need at least 2 samples, got {}", self.grid_points),
            ));
        }
        Ok(())
    }
}

/// The cubic ramp `3 pi u^2 / 2 - pi u^3` in reduced time u = t/tau.
/// Runs from 0 at u = 0 to pi/2 at u = 1 with vanishing slope at both ends.
fn ramp(u: f64) -> f64 {
    (1.5 * PI - PI * u) * u * u
}

/// d(ramp)/du = 3 pi u (1 - u); exactly zero at u = 0 and u = 1.
fn ramp_slope(u: f64) -> f64 {
    3.0 * PI * u * (1.0 - u)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum ScheduleForm {
    /// theta or psi follows eta + ramp (left) / eta - ramp (right).
    Polynomial { eta: f64 },
    /// Fixed angles, zero derivatives.
    Constant { theta: f64, psi: f64 },
}

/// Auxiliary-angle trajectories on a uniform time grid, with closed-form
/// re-evaluation at arbitrary t.
///
/// For the left-handed branch theta is the angle called gamma and psi the
/// angle called beta; for the right-handed branch theta is xi and psi is chi.
#[derive(Clone, Debug)]
pub struct AngleSchedule {
    chirality: Chirality,
    tau: f64,
    form: ScheduleForm,
    times: Vec<f64>,
    samples: Vec<AuxAngles>,
}

impl AngleSchedule {
    fn build(chirality: Chirality, tau: f64, form: ScheduleForm, grid_points: usize) -> Self {
        let n = grid_points.max(2);
        let steps = (n - 1) as f64;
        let mut schedule = AngleSchedule {
            chirality,
            tau,
            form,
            times: Vec::with_capacity(n),
            samples: Vec::with_capacity(n),
        };
        for k in 0..n {
            let t = (k as f64 / steps) * tau;
            schedule.times.push(t);
            schedule.samples.push(schedule.angles_at(t));
        }
        schedule
    }

    /// Schedule with fixed angles (useful as a degenerate reference).
    pub fn constant(
        chirality: Chirality,
        tau: f64,
        theta: f64,
        psi: f64,
        grid_points: usize,
    ) -> Self {
        Self::build(chirality, tau, ScheduleForm::Constant { theta, psi }, grid_points)
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[AuxAngles] {
        &self.samples
    }

    /// Closed-form angles and derivatives at arbitrary t in [0, tau].
    pub fn angles_at(&self, t: f64) -> AuxAngles {
        match self.form {
            ScheduleForm::Constant { theta, psi } => AuxAngles::new(theta, psi, 0.0, 0.0),
            ScheduleForm::Polynomial { eta } => {
                let u = t / self.tau;
                let value = ramp(u);
                let slope = ramp_slope(u) / self.tau;
                match self.chirality {
                    Chirality::Left => AuxAngles::new(0.0, value + eta, 0.0, slope),
                    Chirality::Right => AuxAngles::new(-value + eta, 0.0, -slope, 0.0),
                }
            }
        }
    }
}

/// The polynomial schedule meeting the transfer boundary conditions:
/// left-handed, theta = 0 and psi ramps eta -> pi/2 + eta; right-handed,
/// psi = 0 and theta ramps eta -> -pi/2 + eta (here `eta` is the params
/// field, i.e. eta' for the right branch). Endpoint derivatives vanish
/// exactly, so the designed fields switch on and off smoothly.
pub fn polynomial_schedule(params: &DesignParams, branch: Chirality) -> Result<AngleSchedule> {
    params.validate()?;
    Ok(AngleSchedule::build(
        branch,
        params.tau,
        ScheduleForm::Polynomial { eta: params.eta },
        params.grid_points,
    ))
}

/// General inverse engineering with the convention Omega_z = Omega_x:
/// maps instantaneous auxiliary angles and their derivatives to
/// `(omega_x, omega_y)`.
///
/// Left-handed branch:
///
/// ```text
///   omega_x = (dpsi sin(psi) + dtheta cos(psi) tan(theta)) / (tan(theta) - sin(psi))
///   omega_y = (dpsi cos(psi) + dtheta (1 - tan(theta) sin(psi))) / (tan(theta) - sin(psi))
/// ```
///
/// The right-handed branch shares omega_x and flips the sign of omega_y.
/// A vanishing denominator means no finite field realizes the requested
/// angle velocity, reported as [`Error::SingularDesign`].
pub fn aux_to_rabi(angles: &AuxAngles, branch: Chirality) -> Result<(f64, f64)> {
    if !angles.is_finite() {
        return Err(Error::NonFinite { context: "aux_to_rabi" });
    }
    if angles.theta.abs() >= FRAC_PI_2 {
        return Err(Error::invalid(
            "theta",
            format!("|theta| must be < pi/2 where tan(theta) is evaluated, got {}", angles.theta),
        ));
    }
    let tan_theta = angles.theta.tan();
    let (sin_psi, cos_psi) = angles.psi.sin_cos();
    let denominator = tan_theta - sin_psi;
    if denominator.abs() <= SINGULAR_DENOMINATOR_LIMIT {
        return Err(Error::SingularDesign {
            t: None,
            theta: angles.theta,
            psi: angles.psi,
            denominator: denominator.abs(),
            limit: SINGULAR_DENOMINATOR_LIMIT,
        });
    }
    let omega_x = (angles.dpsi * sin_psi + angles.dtheta * cos_psi * tan_theta) / denominator;
    let omega_y = (angles.dpsi * cos_psi + angles.dtheta * (1.0 - tan_theta * sin_psi))
        / denominator;
    match branch {
        Chirality::Left => Ok((omega_x, omega_y)),
        Chirality::Right => Ok((omega_x, -omega_y)),
    }
}

/// Right side of the auxiliary-angle equations of motion for given fields:
/// returns `(dtheta, dpsi)` implied by the sample. Inverse of
/// [`aux_to_rabi`]; used to verify designs end to end.
pub fn aux_ode_rhs(angles: &AuxAngles, rabi: &RabiSample, branch: Chirality) -> (f64, f64) {
    let s = branch.sign();
    let (sin_psi, cos_psi) = angles.psi.sin_cos();
    let dtheta = rabi.omega_x * cos_psi - s * rabi.omega_y * sin_psi;
    let dpsi =
        (rabi.omega_x * sin_psi + s * rabi.omega_y * cos_psi) * angles.theta.tan() - rabi.omega_z;
    (dtheta, dpsi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Waveform {
    /// The closed-form designed field; `cot_offset` is the constant inside
    /// the cotangent argument.
    Designed { cot_offset: f64 },
    /// Identically zero field.
    Zero,
}

/// Sampled Rabi waveforms over [0, tau] with exact closed-form
/// re-evaluation at arbitrary t.
///
/// Omega_x and Omega_z are identical by construction and share storage.
/// The loop phase is fixed at pi/2.
#[derive(Clone, Debug)]
pub struct PulseSet {
    tau: f64,
    phi: f64,
    waveform: Waveform,
    times: Vec<f64>,
    omega_xz: Vec<f64>,
    omega_y: Vec<f64>,
}

impl PulseSet {
    fn build(tau: f64, waveform: Waveform, grid_points: usize) -> Self {
        let n = grid_points.max(2);
        let steps = (n - 1) as f64;
        let mut set = PulseSet {
            tau,
            phi: FRAC_PI_2,
            waveform,
            times: Vec::with_capacity(n),
            omega_xz: Vec::with_capacity(n),
            omega_y: Vec::with_capacity(n),
        };
        for k in 0..n {
            let t = (k as f64 / steps) * tau;
            let sample = set.value_at(t);
            set.times.push(t);
            set.omega_xz.push(sample.omega_x);
            set.omega_y.push(sample.omega_y);
        }
        set
    }

    /// All-zero field on the same kind of grid.
    pub fn zeros(tau: f64, grid_points: usize) -> Self {
        Self::build(tau, Waveform::Zero, grid_points)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn omega_x(&self) -> &[f64] {
        &self.omega_xz
    }

    /// Same slice as [`PulseSet::omega_x`]: the two waveforms are equal by
    /// construction.
    pub fn omega_z(&self) -> &[f64] {
        &self.omega_xz
    }

    pub fn omega_y(&self) -> &[f64] {
        &self.omega_y
    }

    /// Exact waveform values at arbitrary t (no interpolation).
    pub fn value_at(&self, t: f64) -> RabiSample {
        match self.waveform {
            Waveform::Zero => RabiSample::new(0.0, 0.0, 0.0),
            Waveform::Designed { cot_offset } => {
                let u = t / self.tau;
                // The trailing + 0.0 collapses -0 onto 0 at the endpoints.
                let envelope = 3.0 * PI * u * (u - 1.0) / self.tau + 0.0;
                let arg = ramp(u) + cot_offset;
                let omega_y = envelope * (arg.cos() / arg.sin()) + 0.0;
                RabiSample::new(envelope, omega_y, envelope)
            }
        }
    }

    /// Largest |omega| over the stored grid samples.
    pub fn max_abs_sample(&self) -> f64 {
        self.omega_xz
            .iter()
            .chain(self.omega_y.iter())
            .fold(0.0_f64, |acc, &w| acc.max(w.abs()))
    }

    /// CSV with header `t,omega_x,omega_y,omega_z`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,omega_x,omega_y,omega_z")?;
        for k in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{}",
                crate::fmt_sig(self.times[k]),
                crate::fmt_sig(self.omega_xz[k]),
                crate::fmt_sig(self.omega_y[k]),
                crate::fmt_sig(self.omega_xz[k]),
            )?;
        }
        Ok(())
    }
}

/// The closed-form designed field for the given branch.
///
/// For `branch = Left` the cotangent offset is `params.eta`; for
/// `branch = Right` it is `-params.eta` (the params field then plays the
/// role of eta'). Consequently a left design at eta and a right design at
/// eta' = -eta yield bitwise-identical waveforms: the two enantiomers are
/// driven by one shared field.
pub fn designed_pulses(params: &DesignParams, branch: Chirality) -> Result<PulseSet> {
    params.validate()?;
    if params.eta == 0.0 {
        return Err(Error::invalid(
            "eta",
            "eta = 0 makes omega_y diverge at t = 0; the designed field needs a nonzero offset",
        ));
    }
    let cot_offset = match branch {
        Chirality::Left => params.eta,
        Chirality::Right => -params.eta,
    };
    Ok(PulseSet::build(params.tau, Waveform::Designed { cot_offset }, params.grid_points))
}
