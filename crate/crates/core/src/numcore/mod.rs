//! Numerical kernels shared by every other module.

mod banded;
mod calculus;
mod grid;
mod hermitian;
mod mat3;
mod roots;

pub use banded::{eigenvector_near, eigh_banded, BandedHermitian};
pub use calculus::{diff_central, integrate_cumulative, Sample};
pub use grid::Grid;
pub use hermitian::{eigh_small, Eigen, HermitianMatrix, HERMITIAN_TOL};
pub use mat3::{Mat3, Vec3};
pub(crate) use mat3::vec3_norm_inf;
pub use roots::{quad_roots, QuadRoots};

/// Measured convergence order from errors on successively halved grids.
pub fn convergence_orders(errors: &[f64]) -> alloc::vec::Vec<f64> {
    errors
        .windows(2)
        .map(|w| libm::log(w[0] / w[1]) / core::f64::consts::LN_2)
        .collect()
}
