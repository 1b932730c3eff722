//! Transfer figures of merit and the eta sweep.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::algebra::Vector3;
use crate::design::{designed_pulses, DesignParams, PulseSet, MAX_ETA};
use crate::error::{Error, Result};
use crate::model::Chirality;
use crate::propagate::propagate;

/// One point of the eta sweep: both enantiomers start in |1> and evolve
/// under the shared field (left design at eta, equivalently right design at
/// eta' = -eta).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub eta: f64,
    /// Final population of |3> for the left-handed molecule (its target).
    pub p3_left: f64,
    /// Final population of |3> for the right-handed molecule (residual).
    pub p3_right: f64,
    /// Final population of |2> for the right-handed molecule (its target).
    pub p2_right: f64,
    /// Enantiomeric excess built from the two |3> populations.
    pub excess: f64,
    /// Peak |omega| of the shared field, in rad per time unit at this tau.
    pub omega_max: f64,
}

/// `|(p3_left - p3_right) / (p3_left + p3_right)|`.
pub fn enantiomeric_excess(p3_left: f64, p3_right: f64) -> Result<f64> {
    for (name, p) in [("p3_left", p3_left), ("p3_right", p3_right)] {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("population", format!("{name} = {p} outside [0, 1]")));
        }
    }
    if p3_left == 0.0 && p3_right == 0.0 {
        return Err(Error::UndefinedExcess);
    }
    Ok(((p3_left - p3_right) / (p3_left + p3_right)).abs())
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b))
}

/// Peak `max{|omega_x|, |omega_y|, |omega_z|}` over the whole pulse,
/// refined by golden-section search around the discrete argmax of each
/// waveform.
pub fn omega_max(pulses: &PulseSet) -> f64 {
    let times = pulses.times();
    let tol = 1e-12 * pulses.tau();
    let refine = |samples: &[f64], component: &dyn Fn(f64) -> f64| -> f64 {
        let mut idx = 0usize;
        let mut best = 0.0_f64;
        for (k, &v) in samples.iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                idx = k;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        let lo = times[idx.saturating_sub(1)];
        let hi = times[(idx + 1).min(times.len() - 1)];
        golden_max(component, lo, hi, tol).max(best)
    };
    let along_x = |t: f64| pulses.value_at(t).omega_x.abs();
    let along_y = |t: f64| pulses.value_at(t).omega_y.abs();
    refine(pulses.omega_x(), &along_x).max(refine(pulses.omega_y(), &along_y))
}

/// The default sweep grid: 20 log-spaced values of eta in [0.005, 0.1].
pub fn default_eta_grid() -> Vec<f64> {
    let lo = 0.005_f64;
    let hi = 0.1_f64;
    let n = 20usize;
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn sweep_row(eta: f64, tau: f64, steps: usize) -> Result<SweepRow> {
    let run = || -> Result<SweepRow> {
        let params = DesignParams::new(tau, eta).with_grid_points(steps + 1);
        // One shared field drives both enantiomers.
        let pulses = designed_pulses(&params, Chirality::Left)?;
        let psi0 = Vector3::basis(0);
        let left = propagate(&pulses, Chirality::Left, &psi0, steps)?;
        let right = propagate(&pulses, Chirality::Right, &psi0, steps)?;
        let pl = left.final_populations();
        let pr = right.final_populations();
        Ok(SweepRow {
            eta,
            p3_left: pl[2],
            p3_right: pr[2],
            p2_right: pr[1],
            excess: enantiomeric_excess(pl[2], pr[2])?,
            omega_max: omega_max(&pulses),
        })
    };
    run().map_err(|e| Error::SweepRow { eta, source: Box::new(e) })
}

/// Run the sweep over the given eta values. Rows are computed in parallel
/// (each point is independent) and returned sorted by eta, so the output is
/// identical for any worker count.
pub fn sweep_eta(etas: &[f64], tau: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if etas.is_empty() {
        return Err(Error::invalid("etas", "the eta list must not be empty"));
    }
    for &eta in etas {
        if !(eta.is_finite() && eta > 0.0 && eta <= MAX_ETA) {
            return Err(Error::invalid(
                "etas",
                format!("each eta must lie in (0, {MAX_ETA}], got {eta}"),
            ));
        }
    }
    let mut rows = etas
        .par_iter()
        .map(|&eta| sweep_row(eta, tau, steps))
        .collect::<Result<Vec<SweepRow>>>()?;
    rows.sort_by(|a, b| a.eta.total_cmp(&b.eta));
    Ok(rows)
}

/// CSV with header `eta,P3_L,P3_R,P2_R,excess,omega_max`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "eta,P3_L,P3_R,P2_R,excess,omega_max")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            crate::fmt_sig(row.eta),
            crate::fmt_sig(row.p3_left),
            crate::fmt_sig(row.p3_right),
            crate::fmt_sig(row.p2_right),
            crate::fmt_sig(row.excess),
            crate::fmt_sig(row.omega_max),
        )?;
    }
    Ok(())
}
