//! The algebra the whole crate is built on: SU(2) generators, their
//! commutators, and the unitary exponential used by the propagator.

use esst::algebra::{hermitian_expm, su2_generators, Matrix3, Vector3};

fn main() {
    let (kx, ky, kz) = su2_generators();
    println!("K_x =\n{kx:?}");
    println!("K_y =\n{ky:?}");
    println!("K_z =\n{kz:?}");

    let i = num_complex::Complex64::I;
    println!("[K_x, K_y] - i K_z max deviation: {:.1e}",
        (Matrix3::commutator(&kx, &ky) - kz.scaled(i)).max_abs());
    println!("[K_y, K_z] - i K_x max deviation: {:.1e}",
        (Matrix3::commutator(&ky, &kz) - kx.scaled(i)).max_abs());
    println!("[K_z, K_x] - i K_y max deviation: {:.1e}",
        (Matrix3::commutator(&kz, &kx) - ky.scaled(i)).max_abs());

    // A pi/2 area along K_x flops |1> fully into |2> (up to phase).
    let u = hermitian_expm(&kx, std::f64::consts::FRAC_PI_2).unwrap();
    let out = u * Vector3::basis(0);
    println!("exp(-i pi/2 K_x)|1> = {out:?}");
    println!("population in |2>: {:.12}", out.populations()[1]);

    let unitarity = (u.adjoint() * u - Matrix3::identity()).max_abs();
    println!("||U'U - I||_max = {unitarity:.1e}");
}
