//! Drive both enantiomers with the same field and watch them separate:
//! the left-handed molecule ends in |3>, the right-handed one in |2>.

use esst::algebra::Vector3;
use esst::design::{designed_pulses, DesignParams};
use esst::metrics::enantiomeric_excess;
use esst::model::Chirality;
use esst::propagate::propagate;

fn main() {
    let steps = 4000;
    let params = DesignParams::new(0.5, 0.02).with_grid_points(steps + 1);
    let field = designed_pulses(&params, Chirality::Left).unwrap();
    let psi0 = Vector3::basis(0); // both species start in |1>

    let left = propagate(&field, Chirality::Left, &psi0, steps).unwrap();
    let right = propagate(&field, Chirality::Right, &psi0, steps).unwrap();

    println!("          P1           P2           P3");
    let pl = left.final_populations();
    println!("left    {:.6}       {:.6}     {:.6}", pl[0], pl[1], pl[2]);
    let pr = right.final_populations();
    println!("right   {:.6}       {:.6}     {:.6}", pr[0], pr[1], pr[2]);

    let excess = enantiomeric_excess(pl[2], pr[2]).unwrap();
    println!("enantiomeric excess: {:.4}%", 100.0 * excess);
    println!("max norm drift: {:.1e} (left), {:.1e} (right)",
        left.max_norm_error(), right.max_norm_error());

    // A few intermediate points of the left trajectory.
    println!("\nleft-handed populations along the transfer:");
    for k in (0..left.len()).step_by(left.len() / 8) {
        let p = left.populations[k];
        println!("  t = {:>7.4} us: {:.4}  {:.4}  {:.4}", left.times[k], p[0], p[1], p[2]);
    }
}
