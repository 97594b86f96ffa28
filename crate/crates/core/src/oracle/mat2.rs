//! 2×2 complex matrices with the exact exponential/logarithm pair used by
//! the path integrators.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// Hermitian matrix a₀·I + b⃗·σ from its Pauli components.
    pub fn from_pauli(a0: f64, b: [f64; 3]) -> Self {
        Mat2::new(
            Complex64::new(a0 + b[2], 0.0),
            Complex64::new(b[0], -b[1]),
            Complex64::new(b[0], b[1]),
            Complex64::new(a0 - b[2], 0.0),
        )
    }

    /// Pauli components (a₀, b⃗) of a Hermitian matrix.
    pub fn pauli_components(&self) -> (f64, [f64; 3]) {
        let a0 = 0.5 * (self.e[0][0].re + self.e[1][1].re);
        let bx = 0.5 * (self.e[0][1].re + self.e[1][0].re);
        let by = 0.5 * (self.e[1][0].im - self.e[0][1].im);
        let bz = 0.5 * (self.e[0][0].re - self.e[1][1].re);
        (a0, [bx, by, bz])
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn scale(&self, c: Complex64) -> Mat2 {
        Mat2::new(
            self.e[0][0] * c,
            self.e[0][1] * c,
            self.e[1][0] * c,
            self.e[1][1] * c,
        )
    }

    /// Applies the matrix to an amplitude pair.
    #[inline]
    pub fn apply(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        (
            self.e[0][0] * a + self.e[0][1] * b,
            self.e[1][0] * a + self.e[1][1] * b,
        )
    }

    /// max-norm of U†U − I.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((g.e[i][j] - expect).norm());
            }
        }
        worst
    }

    /// exp(−i·dt·H) for Hermitian H, in closed form.
    pub fn exp_minus_i_h(h_matrix: &Mat2, dt: f64) -> Mat2 {
        let (a0, b) = h_matrix.pauli_components();
        let bn = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        let phase = Complex64::from_polar(1.0, -dt * a0);
        if bn < 1e-300 {
            return Mat2::identity().scale(phase);
        }
        let (s, c) = (dt * bn).sin_cos();
        let f = Complex64::new(0.0, -s / bn);
        let m = Mat2::new(
            Complex64::new(c, 0.0) + f * b[2],
            f * Complex64::new(b[0], -b[1]),
            f * Complex64::new(b[0], b[1]),
            Complex64::new(c, 0.0) - f * b[2],
        );
        m.scale(phase)
    }

    /// The Hermitian generator K with `to = from·exp(−i·dt·K)`, from the
    /// principal matrix logarithm of the step unitary from†·to.
    pub fn step_generator(from: &Mat2, to: &Mat2, dt: f64) -> Mat2 {
        let v = from.adjoint() * *to;
        // V = e^{iδ} W with W ∈ SU(2): δ from det, W = cosφ·I − i sinφ·m̂·σ
        let delta = 0.5 * v.det().arg();
        let w = v.scale(Complex64::from_polar(1.0, -delta));
        let cos_phi = (0.5 * w.trace().re).clamp(-1.0, 1.0);
        let phi = cos_phi.acos();
        let sin_phi = phi.sin();
        // sinφ·m̂ components from W − cosφ·I
        let sm = [-w.e[0][1].im, -w.e[0][1].re, -w.e[0][0].im];
        let ratio = if sin_phi < 1e-12 {
            // φ/sinφ → 1 as the step rotation vanishes
            1.0 + phi * phi / 6.0
        } else {
            phi / sin_phi
        };
        Mat2::from_pauli(-delta / dt, [
            sm[0] * ratio / dt,
            sm[1] * ratio / dt,
            sm[2] * ratio / dt,
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] * o.e[0][0] + self.e[0][1] * o.e[1][0],
            self.e[0][0] * o.e[0][1] + self.e[0][1] * o.e[1][1],
            self.e[1][0] * o.e[0][0] + self.e[1][1] * o.e[1][0],
            self.e[1][0] * o.e[0][1] + self.e[1][1] * o.e[1][1],
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] + o.e[0][0],
            self.e[0][1] + o.e[0][1],
            self.e[1][0] + o.e[1][0],
            self.e[1][1] + o.e[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] - o.e[0][0],
            self.e[0][1] - o.e[0][1],
            self.e[1][0] - o.e[1][0],
            self.e[1][1] - o.e[1][1],
        )
    }
}

/// Pauli σ_x.
pub fn sigma_x() -> Mat2 {
    Mat2::from_pauli(0.0, [1.0, 0.0, 0.0])
}

/// Pauli σ_y.
pub fn sigma_y() -> Mat2 {
    Mat2::from_pauli(0.0, [0.0, 1.0, 0.0])
}

/// Pauli σ_z.
pub fn sigma_z() -> Mat2 {
    Mat2::from_pauli(0.0, [0.0, 0.0, 1.0])
}
