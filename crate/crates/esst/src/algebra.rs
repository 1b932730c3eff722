//! Complex 3-vector / 3x3 Hermitian matrix kernel.
//!
//! Everything the rest of the crate needs from linear algebra lives here:
//! products, commutators, a Hermitian eigensolver, and the matrix exponential
//! `exp(-i s M)` used by the propagator. Eigenvalues come from the closed-form
//! characteristic cubic (trigonometric root formula); when roots are nearly
//! degenerate the solver falls back to cyclic complex Jacobi iteration, which
//! is unconditionally stable at n = 3. All tolerances are relative to the
//! max-absolute-entry norm, so results are unaffected by an overall rescaling
//! of the matrix.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative Hermiticity tolerance accepted by [`hermitian_expm`] and
/// [`Matrix3::eigh`].
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Relative eigenvalue gap below which the closed-form eigenvector
/// construction is abandoned in favor of Jacobi iteration.
const DEGENERACY_TOL: f64 = 1e-8;

/// Complex amplitude triple over the basis {|1>, |2>, |3>}.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Vector3(pub [C64; 3]);

/// Dense complex 3x3 matrix, row-major.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Matrix3(pub [[C64; 3]; 3]);

impl Vector3 {
    pub fn new(a0: C64, a1: C64, a2: C64) -> Self {
        Vector3([a0, a1, a2])
    }

    pub fn zero() -> Self {
        Vector3([C64::ZERO; 3])
    }

    /// The k-th canonical basis state (k = 0, 1, 2 for |1>, |2>, |3>).
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = C64::ONE;
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `<self|rhs>` (conjugate-linear in `self`).
    pub fn dot(&self, rhs: &Vector3) -> C64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `(|a1|^2, |a2|^2, |a3|^2)`.
    pub fn populations(&self) -> [f64; 3] {
        [
            self.0[0].norm_sqr(),
            self.0[1].norm_sqr(),
            self.0[2].norm_sqr(),
        ]
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            self.scaled(C64::new(1.0 / n, 0.0))
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Vector3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn max_abs_diff(&self, rhs: &Vector3) -> f64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

impl Index<usize> for Vector3 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, rhs: Vector3) -> Vector3 {
        Vector3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, rhs: Vector3) -> Vector3 {
        Vector3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl fmt::Debug for Vector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

impl Matrix3 {
    pub fn zero() -> Self {
        Matrix3([[C64::ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = C64::ONE;
        }
        m
    }

    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        Matrix3(rows)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector3 {
        Vector3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn set_column(&mut self, j: usize, v: &Vector3) {
        for i in 0..3 {
            self.0[i][j] = v.0[i];
        }
    }

    /// Max absolute entry; the matrix norm used for every relative tolerance.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn commutator(a: &Matrix3, b: &Matrix3) -> Matrix3 {
        *a * *b - *b * *a
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in ascending order and the unitary matrix whose
    /// columns are the corresponding eigenvectors. Rejects inputs whose
    /// Hermiticity error exceeds [`HERMITICITY_TOL`] relative to the
    /// max-absolute-entry norm.
    pub fn eigh(&self) -> Result<([f64; 3], Matrix3)> {
        if !self.is_finite() {
            return Err(Error::NonFinite { context: "eigh" });
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Ok(([0.0; 3], Matrix3::identity()));
        }
        let asym = self.hermiticity_error();
        if asym > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
                allowed: HERMITICITY_TOL * scale,
            });
        }

        // Work on the exactly Hermitian average so roundoff in the input
        // cannot leak into complex eigenvalues.
        let mut h = *self;
        for i in 0..3 {
            h.0[i][i] = C64::new(self.0[i][i].re, 0.0);
            for j in (i + 1)..3 {
                let avg = (self.0[i][j] + self.0[j][i].conj()) * 0.5;
                h.0[i][j] = avg;
                h.0[j][i] = avg.conj();
            }
        }

        let p1 = h.0[0][1].norm_sqr() + h.0[0][2].norm_sqr() + h.0[1][2].norm_sqr();
        let q = (h.0[0][0].re + h.0[1][1].re + h.0[2][2].re) / 3.0;
        let p2 = (h.0[0][0].re - q).powi(2)
            + (h.0[1][1].re - q).powi(2)
            + (h.0[2][2].re - q).powi(2)
            + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();

        if p < 1e-14 * scale {
            // Essentially q * identity; Jacobi settles it immediately.
            return Ok(jacobi_eigh(&h));
        }

        let b = (h - Matrix3::identity().scaled(C64::new(q, 0.0)))
            .scaled(C64::new(1.0 / p, 0.0));
        let r = (b.det().re / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let hi = q + 2.0 * p * phi.cos();
        let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let mid = 3.0 * q - hi - lo;
        let values = [lo, mid, hi];

        let gap = (mid - lo).min(hi - mid);
        if gap < DEGENERACY_TOL * scale {
            return Ok(jacobi_eigh(&h));
        }

        // Well-separated spectrum: eigenvectors from the adjugate of
        // (H - lambda I) for the two extreme eigenvalues, third by
        // completing the unitary frame.
        let v_lo = match null_vector(&h, lo, scale) {
            Some(v) => v,
            None => return Ok(jacobi_eigh(&h)),
        };
        let mut v_hi = match null_vector(&h, hi, scale) {
            Some(v) => v,
            None => return Ok(jacobi_eigh(&h)),
        };
        // Polish orthogonality of the second extreme vector.
        let overlap = v_lo.dot(&v_hi);
        v_hi = (v_hi - v_lo.scaled(overlap)).normalized();
        let v_mid = conj_cross(&v_lo, &v_hi).normalized();

        let mut vectors = Matrix3::zero();
        vectors.set_column(0, &v_lo);
        vectors.set_column(1, &v_mid);
        vectors.set_column(2, &v_hi);

        // Residual guard: fall back if the closed-form route lost accuracy.
        for (k, &lambda) in values.iter().enumerate() {
            let col = vectors.column(k);
            let resid = (h * col - col.scaled(C64::new(lambda, 0.0)))
                .0
                .iter()
                .map(|e| e.norm())
                .fold(0.0, f64::max);
            if resid > 1e-11 * scale {
                return Ok(jacobi_eigh(&h));
            }
        }

        Ok((values, vectors))
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;
    fn add(self, rhs: Matrix3) -> Matrix3 {
        let mut m = Matrix3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;
    fn sub(self, rhs: Matrix3) -> Matrix3 {
        let mut m = Matrix3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        m
    }
}

impl Neg for Matrix3 {
    type Output = Matrix3;
    fn neg(self) -> Matrix3 {
        self.scaled(C64::new(-1.0, 0.0))
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;
    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut m = Matrix3::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = C64::ZERO;
                for k in 0..3 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

impl Mul<Vector3> for Matrix3 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        let mut out = Vector3::zero();
        for i in 0..3 {
            let mut acc = C64::ZERO;
            for k in 0..3 {
                acc += self.0[i][k] * v.0[k];
            }
            out.0[i] = acc;
        }
        out
    }
}

impl fmt::Debug for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.0.iter() {
            writeln!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// Plain (bilinear, unconjugated) cross product of complex 3-vectors.
fn cross(u: &Vector3, v: &Vector3) -> Vector3 {
    Vector3([
        u.0[1] * v.0[2] - u.0[2] * v.0[1],
        u.0[2] * v.0[0] - u.0[0] * v.0[2],
        u.0[0] * v.0[1] - u.0[1] * v.0[0],
    ])
}

/// Completes a unitary frame: the result is Hermitian-orthogonal to both
/// inputs.
fn conj_cross(u: &Vector3, v: &Vector3) -> Vector3 {
    let c = cross(u, v);
    Vector3([c.0[0].conj(), c.0[1].conj(), c.0[2].conj()])
}

/// Largest-norm column of adj(H - lambda I), i.e. a null vector of the
/// shifted matrix. Returns `None` when every candidate is too small to trust.
fn null_vector(h: &Matrix3, lambda: f64, scale: f64) -> Option<Vector3> {
    let shifted = *h - Matrix3::identity().scaled(C64::new(lambda, 0.0));
    let rows: Vec<Vector3> = (0..3)
        .map(|i| Vector3([shifted.0[i][0], shifted.0[i][1], shifted.0[i][2]]))
        .collect();
    let candidates = [
        cross(&rows[1], &rows[2]),
        cross(&rows[2], &rows[0]),
        cross(&rows[0], &rows[1]),
    ];
    let best = candidates
        .iter()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))?;
    if best.norm() < 1e-30 * scale * scale {
        return None;
    }
    Some(best.normalized())
}

/// Cyclic complex Jacobi diagonalization; always converges for Hermitian
/// input at this size. Eigenvalues ascending.
fn jacobi_eigh(h: &Matrix3) -> ([f64; 3], Matrix3) {
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut a = *h;
    let mut v = Matrix3::identity();
    for _ in 0..60 {
        let off = a.0[0][1].norm().max(a.0[0][2].norm()).max(a.0[1][2].norm());
        if off <= 1e-16 * scale {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a.0[p][q];
            let x = apq.norm();
            if x <= 1e-18 * scale {
                continue;
            }
            let ph = apq / x;
            let alpha = a.0[p][p].re;
            let gamma = a.0[q][q].re;
            let tau = (gamma - alpha) / (2.0 * x);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                1.0 / (tau - (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            let mut j = Matrix3::identity();
            j.0[p][p] = C64::new(c, 0.0);
            j.0[p][q] = ph * s;
            j.0[q][p] = -ph.conj() * s;
            j.0[q][q] = C64::new(c, 0.0);

            a = j.adjoint() * a * j;
            v = v * j;
        }
    }
    // Clean tiny imaginary residue on the diagonal and sort ascending.
    let mut pairs: Vec<(f64, Vector3)> =
        (0..3).map(|k| (a.0[k][k].re, v.column(k))).collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    let mut values = [0.0; 3];
    let mut vectors = Matrix3::zero();
    for (k, (lambda, col)) in pairs.iter().enumerate() {
        values[k] = *lambda;
        vectors.set_column(k, col);
    }
    (values, vectors)
}

/// The SU(2) angular-momentum operators (K_x, K_y, K_z) in the cyclic
/// three-level basis. K_x couples |1>-|2>, K_y couples |2>-|3>, and K_z
/// couples |1>-|3> with the imaginary unit.
pub fn su2_generators() -> (Matrix3, Matrix3, Matrix3) {
    let o = C64::ZERO;
    let l = C64::ONE;
    let i = C64::I;
    let kx = Matrix3::from_rows([[o, l, o], [l, o, o], [o, o, o]]);
    let ky = Matrix3::from_rows([[o, o, o], [o, o, l], [o, l, o]]);
    let kz = Matrix3::from_rows([[o, o, -i], [o, o, o], [i, o, o]]);
    (kx, ky, kz)
}

/// `exp(-i s M)` for Hermitian `M`, via eigendecomposition. The result is
/// unitary up to eigensolver roundoff.
pub fn hermitian_expm(m: &Matrix3, s: f64) -> Result<Matrix3> {
    if !s.is_finite() {
        return Err(Error::NonFinite { context: "hermitian_expm scale" });
    }
    let (values, vectors) = m.eigh()?;
    let mut out = Matrix3::zero();
    for (k, &lambda) in values.iter().enumerate() {
        let col = vectors.column(k);
        let phase = C64::from_polar(1.0, -s * lambda);
        // out += phase * |v_k><v_k|
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += phase * col.0[i] * col.0[j].conj();
            }
        }
    }
    Ok(out)
}
