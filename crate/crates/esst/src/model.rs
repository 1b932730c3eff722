//! Cyclic three-level Hamiltonians for the two enantiomers.
//!
//! The couplings (Omega_x, Omega_y, Omega_z) drive the |1>-|2>, |2>-|3>, and
//! |1>-|3> transitions; the loop phase phi sits on the |1>-|3> coupling. The
//! two enantiomers share Omega_x and Omega_z while the sign of Omega_y is
//! opposite, which is the convention used throughout this crate. With the
//! canonical phi = pi/2 the Hamiltonian is exactly
//! `Omega_x K_x + sign * Omega_y K_y + Omega_z K_z`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::Matrix3;
use crate::error::{Error, Result};

/// Handedness tag. Fixes the sign applied to the Omega_y coupling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    /// +1 for left-handed, -1 for right-handed.
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Left => 1.0,
            Chirality::Right => -1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
        }
    }
}

/// Instantaneous Rabi values (rad per time unit) and the loop phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiSample {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    pub phi: f64,
}

impl RabiSample {
    /// Sample with the canonical loop phase phi = pi/2.
    pub fn new(omega_x: f64, omega_y: f64, omega_z: f64) -> Self {
        RabiSample { omega_x, omega_y, omega_z, phi: FRAC_PI_2 }
    }

    pub fn with_phase(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.omega_x.is_finite()
            && self.omega_y.is_finite()
            && self.omega_z.is_finite()
            && self.phi.is_finite()
    }
}

/// Full cyclic Hamiltonian with an explicit loop phase:
///
/// ```text
///         |  0            Omega_x        Omega_z e^{-i phi} |
///   H  =  |  Omega_x      0              s Omega_y          |
///         |  Omega_z e^{i phi}  s Omega_y          0        |
/// ```
///
/// with `s = chirality.sign()`. Hermitian by construction. The inverse
/// engineering in [`crate::design`] is derived for phi = pi/2 only; other
/// phases are accepted here but feed no designed schedule.
pub fn build_hamiltonian(sample: &RabiSample, chirality: Chirality) -> Result<Matrix3> {
    if !sample.is_finite() {
        return Err(Error::NonFinite { context: "build_hamiltonian" });
    }
    let s = chirality.sign();
    let oy = C64::new(s * sample.omega_y, 0.0);
    let ox = C64::new(sample.omega_x, 0.0);
    let oz = C64::new(
        sample.omega_z * sample.phi.cos(),
        -sample.omega_z * sample.phi.sin(),
    );
    let o = C64::ZERO;
    Ok(Matrix3::from_rows([
        [o, ox, oz],
        [ox, o, oy],
        [oz.conj(), oy, o],
    ]))
}

/// Canonical phi = pi/2 Hamiltonian, `Omega_x K_x + s Omega_y K_y +
/// Omega_z K_z`, with the |1>-|3> entries exactly -+ i Omega_z.
///
/// This form is the one every designed schedule and the propagator use; the
/// general-phase [`build_hamiltonian`] exists to cross-check it.
pub fn su2_hamiltonian(sample: &RabiSample, chirality: Chirality) -> Result<Matrix3> {
    if !sample.is_finite() {
        return Err(Error::NonFinite { context: "su2_hamiltonian" });
    }
    let s = chirality.sign();
    let ox = C64::new(sample.omega_x, 0.0);
    let oy = C64::new(s * sample.omega_y, 0.0);
    let oz = C64::new(0.0, -sample.omega_z);
    let o = C64::ZERO;
    Ok(Matrix3::from_rows([
        [o, ox, oz],
        [ox, o, oy],
        [-oz, oy, o],
    ]))
}
