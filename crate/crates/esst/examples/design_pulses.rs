//! Design the shared control field and export it as CSV.
//!
//! The left-handed design at eta and the right-handed design at
//! eta' = -eta produce the same three waveforms, which is what makes the
//! transfer enantio-specific: one field, two different destinations.

use std::fs::File;
use std::io::BufWriter;

use esst::design::{designed_pulses, DesignParams};
use esst::metrics::omega_max;
use esst::model::Chirality;

fn main() {
    let tau_us = 0.5;
    let eta = 0.02;
    let params = DesignParams::new(tau_us, eta);

    let left = designed_pulses(&params, Chirality::Left).unwrap();
    let right = designed_pulses(&DesignParams::new(tau_us, -eta), Chirality::Right).unwrap();

    let mut worst = 0.0_f64;
    for k in 0..left.len() {
        worst = worst.max((left.omega_y()[k] - right.omega_y()[k]).abs());
    }
    println!("left(eta = {eta}) vs right(eta' = {}): max waveform difference {worst:.1e}", -eta);

    println!("peak drive strength: {:.6} rad/us over tau = {tau_us} us", omega_max(&left));
    for &t in &[0.0, 0.05, 0.125, 0.25, 0.375, 0.5] {
        let s = left.value_at(t);
        println!(
            "t = {t:>5} us: omega_x = omega_z = {:>10.4}, omega_y = {:>10.4} rad/us",
            s.omega_x, s.omega_y
        );
    }

    let path = "pulses.csv";
    let mut out = BufWriter::new(File::create(path).unwrap());
    left.write_csv(&mut out).unwrap();
    println!("wrote {path} ({} samples)", left.len());
}
