//! Trade-off study: smaller eta gives a cleaner transfer but a stronger
//! field. Sweeps the default grid and writes sweep.csv.
//!
//! Note the right-handed residual population P3_R: it grows with eta only
//! up to eta ~ 0.039 and falls again beyond, while P3_L and the peak drive
//! strength fall monotonically over the whole grid.

use std::fs::File;
use std::io::BufWriter;

use esst::metrics::{default_eta_grid, sweep_eta, write_sweep_csv};

fn main() {
    let tau_us = 0.5;
    let steps = 2000;
    let rows = sweep_eta(&default_eta_grid(), tau_us, steps).unwrap();

    println!("   eta       P3_L         P3_R        P2_R      excess   omega_max[rad/us]");
    for r in &rows {
        println!(
            "{:8.4}  {:.7}  {:.4e}  {:.7}  {:.6}  {:10.3}",
            r.eta, r.p3_left, r.p3_right, r.p2_right, r.excess, r.omega_max
        );
    }

    let path = "sweep.csv";
    let mut out = BufWriter::new(File::create(path).unwrap());
    write_sweep_csv(&rows, &mut out).unwrap();
    println!("wrote {path} ({} rows)", rows.len());
}
