use alloc::vec::Vec;
use core::f64::consts::PI;

use super::TightBindingParams;
use crate::numcore::{eigh_small, HermitianMatrix, Mat3};
use crate::{polar, Error, Result, C64};

pub const DEFAULT_K_POINTS: usize = 513;

/// `H(k)` in the (A, B, C) basis.
pub fn bloch_hamiltonian(p: &TightBindingParams, k: f64) -> Result<HermitianMatrix> {
    p.validate()?;
    if !k.is_finite() {
        return Err(Error::NonFinite("quasi-momentum k".into()));
    }
    HermitianMatrix::from_fn(3, |i, j| bloch_mat(p, k)[(i, j)])
}

fn bloch_mat(p: &TightBindingParams, k: f64) -> Mat3 {
    let r = |x: f64| C64::new(x, 0.0);
    let hab = r(p.t_ab) + polar(p.t_ab_tilde, -k * p.a);
    Mat3([
        [r(p.t_aa), hab, r(p.t_ac)],
        [hab.conj(), r(p.t_bb), r(p.t_bc)],
        [r(p.t_ac), r(p.t_bc), r(p.t_cc)],
    ])
}

/// `det(H(k) − E)`.
pub fn det_shifted(p: &TightBindingParams, k: f64, e: f64) -> C64 {
    let mut m = bloch_mat(p, k);
    for i in 0..3 {
        m[(i, i)] -= e;
    }
    m.det()
}

/// `n` uniform points on `[−π/a, π/a]`, both ends included.
pub fn default_k_grid(a: f64, n: usize) -> Vec<f64> {
    let kmax = PI / a;
    let n = n.max(2);
    (0..n)
        .map(|i| if i == n - 1 { kmax } else { -kmax + 2.0 * kmax * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Per-k sorted eigenvalues of `H(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub k_grid: Vec<f64>,
    pub bands: [Vec<f64>; 3],
}

impl BandStructure {
    /// `max_k E_j − min_k E_j`.
    pub fn spread(&self, j: usize) -> f64 {
        let b = &self.bands[j];
        let hi = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = b.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn mean(&self, j: usize) -> f64 {
        self.bands[j].iter().sum::<f64>() / self.bands[j].len() as f64
    }

    /// Whether band `j` is flat: spread ≤ 1e−8·(1 + |E|).
    pub fn is_flat(&self, j: usize) -> bool {
        self.spread(j) <= 1e-8 * (1.0 + self.mean(j).abs())
    }

    /// Gap between bands `j` and `j + 1` at grid index `i`.
    pub fn gap_at(&self, j: usize, i: usize) -> f64 {
        self.bands[j + 1][i] - self.bands[j][i]
    }

    /// Assemble from per-k sorted triples (used by parallel callers).
    pub fn from_rows(k_grid: Vec<f64>, rows: &[[f64; 3]]) -> Self {
        let bands = [0, 1, 2].map(|j| rows.iter().map(|r| r[j]).collect());
        Self { k_grid, bands }
    }
}

/// Eigenvalues of `H(k)` at one quasi-momentum, ascending.
pub fn bands_at(p: &TightBindingParams, k: f64) -> Result<[f64; 3]> {
    let e = eigh_small(&bloch_hamiltonian(p, k)?)?;
    Ok([e.values[0], e.values[1], e.values[2]])
}

pub fn band_structure(p: &TightBindingParams, k_grid: &[f64]) -> Result<BandStructure> {
    if k_grid.is_empty() {
        return Err(Error::InvalidGrid("empty k-grid".into()));
    }
    let rows = k_grid.iter().map(|&k| bands_at(p, k)).collect::<Result<Vec<_>>>()?;
    Ok(BandStructure::from_rows(k_grid.to_vec(), &rows))
}
