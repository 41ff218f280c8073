use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::Modulus;

/// Three-component complex spinor.
pub type Vec3 = [C64; 3];

/// Dense complex 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[C64; 3]; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3([[C64::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = C64::new(v, 0.0);
            }
        }
        m
    }

    /// The kinetic structure `γ` of `-iγ∂ₓ`: ones at (1,2) and (2,1).
    pub fn gamma() -> Self {
        Self::from_real([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn det(&self) -> C64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Transposed cofactor matrix; `self * adjugate = det · 1`.
    pub fn adjugate(&self) -> Self {
        let a = &self.0;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
        Mat3([
            [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
            [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
            [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
        ])
    }

    /// Inverse by adjugate over determinant. `None` when the determinant is
    /// exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0.iter().map(|r| r.iter().map(|v| v.modulus()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|r| r.iter()).map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// Largest modulus of `M - M†`.
    pub fn hermitian_defect(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let mut out = [C64::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(mut self, rhs: Mat3) -> Mat3 {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(mut self, rhs: Mat3) -> Mat3 {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j] + self.0[i][2] * rhs.0[2][j];
            }
        }
        m
    }
}

/// Sup norm of a spinor.
pub(crate) fn vec3_norm_inf(v: &Vec3) -> f64 {
    v.iter().map(|c| c.modulus()).fold(0.0, f64::max)
}
