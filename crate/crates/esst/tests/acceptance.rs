//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p esst --test acceptance -- --nocapture` to see
//! every line. Criterion 8 asserts a strictly monotone trend for the
//! right-handed residual population across the full default eta grid; the
//! exact dynamics peaks near eta = 0.039 and decreases beyond, so that one
//! check reports FAIL by construction (see README, "Known red acceptance
//! check").

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64 as C64;

use esst::algebra::{su2_generators, Matrix3, Vector3};
use esst::design::{designed_pulses, polynomial_schedule, DesignParams, PulseSet};
use esst::invariant::{invariant_eigensystem, lr_phase_table, residuals_on_grid};
use esst::metrics::{default_eta_grid, enantiomeric_excess, omega_max, sweep_eta};
use esst::model::Chirality;
use esst::propagate::propagate;
use esst::scenario::{run_scenario, Mode, ScenarioConfig};

const TAU_US: f64 = 0.5;
const ETA: f64 = 0.02;
const STEPS: usize = 4000;

fn headline_params() -> DesignParams {
    DesignParams::new(TAU_US, ETA).with_grid_points(STEPS + 1)
}

fn shared_field() -> PulseSet {
    designed_pulses(&headline_params(), Chirality::Left).unwrap()
}

fn report(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_left_endpoint_reproduction() {
    let start = Instant::now();
    let pulses = shared_field();
    let trajectory = propagate(&pulses, Chirality::Left, &Vector3::basis(0), STEPS).unwrap();
    let elapsed = start.elapsed();
    let p = trajectory.final_populations();

    let ok_p3 = (p[2] - 0.9991).abs() <= 5e-4;
    let ok_p1 = (p[0] - 0.0005).abs() <= 5e-4;
    let ok_p2 = (p[1] - 0.0004).abs() <= 5e-4;
    let ok_time = elapsed.as_secs_f64() < 1.0;
    let ok = ok_p3 && ok_p1 && ok_p2 && ok_time;
    report(
        1,
        ok,
        &format!(
            "left transfer P3 = {:.6}, P1 = {:.6}, P2 = {:.6} (targets 0.9991/0.0005/0.0004 \
             +-5e-4), runtime {:.3} s at {STEPS} steps",
            p[2],
            p[0],
            p[1],
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok_p3, "P3(tau) = {} not within 5e-4 of 0.9991", p[2]);
    assert!(ok_p1, "P1(tau) = {} not within 5e-4 of 0.0005", p[0]);
    assert!(ok_p2, "P2(tau) = {} not within 5e-4 of 0.0004", p[1]);
    assert!(ok_time, "runtime {:?} exceeds 1 s", elapsed);
}

#[test]
fn criterion_02_right_endpoint_with_the_same_field() {
    let pulses = shared_field();
    let trajectory = propagate(&pulses, Chirality::Right, &Vector3::basis(0), STEPS).unwrap();
    let p = trajectory.final_populations();
    let ok = (p[1] - 0.9991).abs() <= 5e-4
        && (p[0] - 0.0005).abs() <= 5e-4
        && (p[2] - 0.0004).abs() <= 5e-4;
    report(
        2,
        ok,
        &format!(
            "right molecule under the SAME field: P2 = {:.6}, P1 = {:.6}, P3 = {:.6} \
             (targets 0.9991/0.0005/0.0004 +-5e-4)",
            p[1], p[0], p[2]
        ),
    );
    assert!((p[1] - 0.9991).abs() <= 5e-4, "P2(tau) = {}", p[1]);
    assert!((p[0] - 0.0005).abs() <= 5e-4, "P1(tau) = {}", p[0]);
    assert!((p[2] - 0.0004).abs() <= 5e-4, "P3(tau) = {}", p[2]);
}

#[test]
fn criterion_03_enantiomeric_excess() {
    let pulses = shared_field();
    let left = propagate(&pulses, Chirality::Left, &Vector3::basis(0), STEPS).unwrap();
    let right = propagate(&pulses, Chirality::Right, &Vector3::basis(0), STEPS).unwrap();
    let excess =
        enantiomeric_excess(left.final_populations()[2], right.final_populations()[2]).unwrap();
    let ok = (excess - 0.9992).abs() <= 5e-4;
    report(3, ok, &format!("excess = {excess:.6} (target 0.9992 +-5e-4)"));
    assert!(ok, "excess = {excess}");
}

#[test]
fn criterion_04_left_and_right_fields_are_identical() {
    let left = designed_pulses(&headline_params(), Chirality::Left).unwrap();
    let right = designed_pulses(
        &DesignParams::new(TAU_US, -ETA).with_grid_points(STEPS + 1),
        Chirality::Right,
    )
    .unwrap();

    let mut worst = 0.0_f64;
    for k in 0..left.len() {
        worst = worst.max((left.omega_x()[k] - right.omega_x()[k]).abs());
        worst = worst.max((left.omega_y()[k] - right.omega_y()[k]).abs());
        worst = worst.max((left.times()[k] - right.times()[k]).abs());
    }
    let mut csv_left = Vec::new();
    let mut csv_right = Vec::new();
    left.write_csv(&mut csv_left).unwrap();
    right.write_csv(&mut csv_right).unwrap();
    let bytes_equal = csv_left == csv_right;

    let ok = worst <= 1e-12 && bytes_equal;
    report(
        4,
        ok,
        &format!(
            "left(eta = {ETA}) vs right(eta' = {}) field: max sample difference {worst:.3e}, \
             CSV bytes equal = {bytes_equal}",
            -ETA
        ),
    );
    assert!(ok, "fields differ: worst {worst:.3e}, bytes_equal {bytes_equal}");
}

#[test]
fn criterion_05_invariance_condition_residual() {
    let omega0 = 2.0;
    let pulses = shared_field();
    let peak = omega_max(&pulses);
    let threshold = 1e-5 * omega0 * peak;

    let mut worst = 0.0_f64;
    for (branch, eta) in [(Chirality::Left, ETA), (Chirality::Right, -ETA)] {
        let schedule = polynomial_schedule(
            &DesignParams::new(TAU_US, eta).with_grid_points(STEPS + 1),
            branch,
        )
        .unwrap();
        let residuals = residuals_on_grid(&schedule, &pulses, omega0).unwrap();
        for &r in &residuals[1..residuals.len() - 1] {
            worst = worst.max(r);
        }
    }
    let ok = worst <= threshold;
    report(
        5,
        ok,
        &format!(
            "max finite-difference residual {worst:.3e} <= 1e-5 * omega0 * omega_max = \
             {threshold:.3e}, both trajectories, every interior grid point"
        ),
    );
    assert!(ok, "residual {worst:.3e} above {threshold:.3e}");
}

#[test]
fn criterion_06_phase_reconstruction_matches_propagation() {
    let mut worst_overall = 0.0_f64;
    for (branch, eta) in [(Chirality::Left, ETA), (Chirality::Right, -ETA)] {
        let params = DesignParams::new(TAU_US, eta).with_grid_points(STEPS + 1);
        let schedule = polynomial_schedule(&params, branch).unwrap();
        let pulses = designed_pulses(&params, branch).unwrap();
        let psi0 = Vector3::basis(0);
        let trajectory = propagate(&pulses, branch, &psi0, STEPS).unwrap();
        let alpha_plus = lr_phase_table(&schedule, &pulses).unwrap();

        let start = invariant_eigensystem(&schedule.angles_at(0.0)).unwrap();
        let c0 = start.phi_zero.dot(&psi0);
        let cp = start.phi_plus.dot(&psi0);
        let cm = start.phi_minus.dot(&psi0);

        let mut worst = 0.0_f64;
        for (k, &t) in schedule.times().iter().enumerate() {
            let sys = invariant_eigensystem(&schedule.angles_at(t)).unwrap();
            let phase = C64::from_polar(1.0, alpha_plus[k]);
            let rebuilt = sys.phi_zero.scaled(c0)
                + sys.phi_plus.scaled(cp * phase)
                + sys.phi_minus.scaled(cm * phase.conj());
            worst = worst.max(rebuilt.max_abs_diff(&trajectory.states[k]));
        }
        worst_overall = worst_overall.max(worst);
    }
    let ok = worst_overall <= 1e-6;
    report(
        6,
        ok,
        &format!(
            "direct propagation vs sum_n c_n e^(i alpha_n) phi_n(t): max amplitude error \
             {worst_overall:.3e} <= 1e-6, both enantiomers"
        ),
    );
    assert!(ok, "reconstruction error {worst_overall:.3e}");
}

#[test]
fn criterion_07_endpoint_populations_independent_of_tau() {
    let psi0 = Vector3::basis(0);
    let mut worst = 0.0_f64;
    for chirality in [Chirality::Left, Chirality::Right] {
        let short = propagate(
            &designed_pulses(
                &DesignParams::new(TAU_US, ETA).with_grid_points(STEPS + 1),
                Chirality::Left,
            )
            .unwrap(),
            chirality,
            &psi0,
            STEPS,
        )
        .unwrap()
        .final_populations();
        let long = propagate(
            &designed_pulses(
                &DesignParams::new(2.0 * TAU_US, ETA).with_grid_points(STEPS + 1),
                Chirality::Left,
            )
            .unwrap(),
            chirality,
            &psi0,
            STEPS,
        )
        .unwrap()
        .final_populations();
        for k in 0..3 {
            worst = worst.max((short[k] - long[k]).abs());
        }
    }
    let ok = worst <= 1e-8;
    report(
        7,
        ok,
        &format!("tau = {TAU_US} vs {}: max endpoint population difference {worst:.3e} <= 1e-8",
            2.0 * TAU_US),
    );
    assert!(ok, "tau dependence {worst:.3e}");
}

#[test]
fn criterion_08_sweep_trends_over_the_default_grid() {
    let start = Instant::now();
    let grid = default_eta_grid();
    assert_eq!(grid.len(), 20);
    let rows = sweep_eta(&grid, TAU_US, STEPS).unwrap();
    let elapsed = start.elapsed();

    let p3_left_falls = rows.windows(2).all(|w| w[1].p3_left <= w[0].p3_left);
    let p3_right_rises = rows.windows(2).all(|w| w[1].p3_right >= w[0].p3_right);
    let omega_max_falls = rows.windows(2).all(|w| w[1].omega_max <= w[0].omega_max);
    let ok_time = elapsed.as_secs_f64() < 30.0;

    let peak = rows
        .iter()
        .max_by(|a, b| a.p3_right.total_cmp(&b.p3_right))
        .unwrap();
    report(
        8,
        p3_left_falls && p3_right_rises && omega_max_falls && ok_time,
        &format!(
            "20 log-spaced eta in [0.005, 0.1], {:.2} s: P3_L monotone decreasing = \
             {p3_left_falls}, omega_max monotone decreasing = {omega_max_falls}, P3_R monotone \
             increasing = {p3_right_rises} (P3_R peaks at eta = {:.4} and falls beyond)",
            elapsed.as_secs_f64(),
            peak.eta
        ),
    );
    assert!(p3_left_falls, "P3_L is not monotone decreasing over the grid");
    assert!(omega_max_falls, "omega_max is not monotone decreasing over the grid");
    assert!(ok_time, "sweep took {elapsed:?}, budget 30 s");
    assert!(
        p3_right_rises,
        "P3_R is not monotone increasing over eta in [0.005, 0.1]: it rises to a maximum at \
         eta = {:.4} (P3_R = {:.3e}) and decreases beyond; the closed-form endpoint value \
         sin^2(eta) sin^2(A(eta)) with A(eta) = ln[tan(pi/4 + eta/2)/tan(eta/2)] proves the \
         turnover is a property of the exact dynamics, not of the integrator",
        peak.eta,
        peak.p3_right
    );
}

#[test]
fn criterion_09_algebra_suite() {
    // Commutators, entrywise exact.
    let (kx, ky, kz) = su2_generators();
    let i = C64::I;
    let comm_ok = Matrix3::commutator(&kx, &ky) == kz.scaled(i)
        && Matrix3::commutator(&ky, &kz) == kx.scaled(i)
        && Matrix3::commutator(&kz, &kx) == ky.scaled(i);

    // Propagator norm drift on the headline run.
    let pulses = shared_field();
    let trajectory = propagate(&pulses, Chirality::Left, &Vector3::basis(0), STEPS).unwrap();
    let drift = trajectory.max_norm_error();
    let drift_ok = drift <= 1e-9;

    // Invariant eigenvalues constant in time and eigenvectors orthonormal.
    let omega0 = 2.0;
    let schedule = polynomial_schedule(&headline_params(), Chirality::Left).unwrap();
    let mut lambda_dev = 0.0_f64;
    let mut ortho_dev = 0.0_f64;
    for (k, angles) in schedule.samples().iter().enumerate().step_by(40) {
        let spec = esst::invariant::InvariantSpec {
            omega0,
            angles: *angles,
            chirality: Chirality::Left,
        };
        let (vals, _) = esst::invariant::invariant_matrix(&spec).unwrap().eigh().unwrap();
        lambda_dev = lambda_dev
            .max((vals[0] + omega0 / 2.0).abs())
            .max(vals[1].abs())
            .max((vals[2] - omega0 / 2.0).abs());
        let sys = invariant_eigensystem(angles).unwrap();
        for v in [&sys.phi_zero, &sys.phi_plus, &sys.phi_minus] {
            ortho_dev = ortho_dev.max((v.norm() - 1.0).abs());
        }
        ortho_dev = ortho_dev
            .max(sys.phi_zero.dot(&sys.phi_plus).norm())
            .max(sys.phi_zero.dot(&sys.phi_minus).norm())
            .max(sys.phi_plus.dot(&sys.phi_minus).norm());
        let _ = k;
    }
    let lambda_ok = lambda_dev <= 1e-10 * omega0;
    let ortho_ok = ortho_dev <= 1e-12;

    let ok = comm_ok && drift_ok && lambda_ok && ortho_ok;
    report(
        9,
        ok,
        &format!(
            "commutators exact = {comm_ok}; norm drift {drift:.3e} <= 1e-9; eigenvalue \
             constancy {lambda_dev:.3e} <= 1e-10 * omega0; eigenvector orthonormality \
             {ortho_dev:.3e} <= 1e-12"
        ),
    );
    assert!(comm_ok);
    assert!(drift_ok, "norm drift {drift:.3e}");
    assert!(lambda_ok, "eigenvalue drift {lambda_dev:.3e}");
    assert!(ortho_ok, "orthonormality deviation {ortho_dev:.3e}");
}

#[test]
fn criterion_10_bitwise_determinism() {
    let dir = std::env::temp_dir().join(format!("esst-acceptance-10-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);

    let mut config = ScenarioConfig::new(Mode::ReproduceFig2);
    config.output_dir = dir.clone();
    config.steps = 1000;

    let snapshot = |paths: &[PathBuf]| -> BTreeMap<String, Vec<u8>> {
        paths
            .iter()
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(p).unwrap()))
            .collect()
    };

    let first = run_scenario(&config).unwrap();
    let first_bytes = snapshot(&first.files);
    let first_manifest = fs::read(&first.manifest_path).unwrap();
    let second = run_scenario(&config).unwrap();
    let second_bytes = snapshot(&second.files);
    let second_manifest = fs::read(&second.manifest_path).unwrap();
    let rerun_identical = first_bytes == second_bytes && first_manifest == second_manifest;

    // Sweep rows must not depend on the worker count.
    let sweep_with_threads = |threads: usize| -> Vec<u8> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let rows = pool.install(|| sweep_eta(&[0.01, 0.02, 0.05], 1.0, 400).unwrap());
        let mut csv = Vec::new();
        esst::metrics::write_sweep_csv(&rows, &mut csv).unwrap();
        csv
    };
    let workers_identical = sweep_with_threads(1) == sweep_with_threads(2);

    let ok = rerun_identical && workers_identical;
    report(
        10,
        ok,
        &format!(
            "re-run bitwise identical = {rerun_identical}; sweep identical across worker \
             counts = {workers_identical}"
        ),
    );
    let _ = fs::remove_dir_all(&dir);
    assert!(rerun_identical, "repeated runs differ");
    assert!(workers_identical, "worker count changed the sweep output");
}
