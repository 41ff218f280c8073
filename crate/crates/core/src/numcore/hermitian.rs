use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::{Error, Modulus, Result};

/// Relative tolerance for the Hermitian check at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Eigenpairs sorted by ascending eigenvalue. `vectors[j]` is the
/// normalized eigenvector of `values[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

impl HermitianMatrix {
    /// Build from row-major entries. Rejects asymmetry above
    /// `HERMITIAN_TOL · max(1, max|entry|)` and reports the offending pair.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        if data.len() != dim * dim {
            return Err(Error::Dimension { expected: dim * dim, got: data.len() });
        }
        if let Some(i) = data.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(alloc::format!("entry ({}, {})", i / dim, i % dim)));
        }
        let scale = data.iter().map(|v| v.modulus()).fold(1.0, f64::max);
        let tol = HERMITIAN_TOL * scale;
        let mut worst = (0, 0, 0.0);
        for i in 0..dim {
            for j in i..dim {
                let dev = (data[i * dim + j] - data[j * dim + i].conj()).modulus();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > tol {
            return Err(Error::NotHermitian { row: worst.0, col: worst.1, deviation: worst.2 });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(dim, data)
    }

    pub fn from_real(dim: usize, rows: &[f64]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().map(|v| v.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .fold(C64::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `max_j ‖M vⱼ − λⱼ vⱼ‖∞` over the given eigenpairs.
    pub fn residual(&self, eig: &Eigen) -> f64 {
        eig.values
            .iter()
            .zip(&eig.vectors)
            .map(|(&lam, v)| {
                self.matvec(v).iter().zip(v).map(|(mv, vi)| (mv - vi * lam).modulus()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Eigen-decomposition of a small Hermitian matrix by cyclic complex Jacobi
/// rotations. Intended for `dim ≤ 8`; larger inputs work but cost O(n³)
/// per sweep.
pub fn eigh_small(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim;
    let mut a = m.data.clone();
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let mut v = vec![C64::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let frob = libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let target = f64::EPSILON * 1e-3 * frob;
    const MAX_SWEEPS: usize = 64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = libm::sqrt(
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| a[i * n + j].norm_sqr()).sum::<f64>(),
        );
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = order.iter().map(|&j| (0..n).map(|i| v[i * n + j]).collect()).collect();
    Ok(Eigen { values, vectors })
}

/// One Jacobi step annihilating `a[p][q]`: a phase rotation makes the pivot
/// real, then a real plane rotation diagonalizes the 2×2 block.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let b = a[p * n + q];
    let babs = b.modulus();
    if babs == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    if babs < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = C64::zero();
        a[q * n + p] = C64::zero();
        return;
    }
    let phase = b / babs;
    let tau = (aqq - app) / (2.0 * babs);
    let t = if tau >= 0.0 { 1.0 / (tau + libm::sqrt(1.0 + tau * tau)) } else { -1.0 / (-tau + libm::sqrt(1.0 + tau * tau)) };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    // W = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    for r in 0..n {
        let (x, y) = (a[r * n + p], a[r * n + q]);
        a[r * n + p] = x * w_pp + y * w_qp;
        a[r * n + q] = x * w_pq + y * w_qq;
    }
    for r in 0..n {
        let (x, y) = (a[p * n + r], a[q * n + r]);
        a[p * n + r] = w_pp.conj() * x + w_qp.conj() * y;
        a[q * n + r] = w_pq.conj() * x + w_qq.conj() * y;
    }
    for r in 0..n {
        let (x, y) = (v[r * n + p], v[r * n + q]);
        v[r * n + p] = x * w_pp + y * w_qp;
        v[r * n + q] = x * w_pq + y * w_qq;
    }
    a[p * n + q] = C64::zero();
    a[q * n + p] = C64::zero();
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
}
