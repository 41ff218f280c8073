use alloc::format;

use super::{DiracOperatorSpec, PotentialField};
use crate::numcore::{BandedHermitian, Grid, HERMITIAN_TOL};
use crate::spectrum::{analyze, SpectrumOptions, SpectrumReport};
use crate::{Error, Result, C64};

/// Central-difference discretization on `grid` with the wave function set
/// to zero outside it. Sites are ordered `(x_0; 1, 2, 3), (x_1; 1, 2, 3), …`
/// so the matrix has bandwidth 4.
pub fn discretize<P: PotentialField>(spec: &DiracOperatorSpec<P>, grid: &Grid) -> Result<BandedHermitian> {
    let n = grid.len();
    let mut m = BandedHermitian::zeros(3 * n, 4);
    for (i, x) in grid.points().enumerate() {
        let v = spec.potential.matrix(x);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("potential at x = {x}")));
        }
        let defect = v.hermitian_defect();
        if defect > HERMITIAN_TOL * v.max_abs().max(1.0) {
            return Err(Error::InvalidParameter {
                name: "potential",
                reason: format!("not Hermitian at x = {x} (defect {defect:e})"),
            });
        }
        for r in 0..3 {
            m.set_real(3 * i + r, 3 * i + r, v[(r, r)].re)?;
            for c in 0..r {
                m.set(3 * i + r, 3 * i + c, v[(r, c)])?;
            }
        }
    }
    // −i∂ₓ between component 1 and 2 of neighbouring points
    let w = C64::new(0.0, -0.5 / grid.h());
    for i in 0..n - 1 {
        m.set(3 * i, 3 * (i + 1) + 1, w)?;
        m.set(3 * i + 1, 3 * (i + 1), w)?;
    }
    Ok(m)
}

/// Spectrum of the discretized operator. Sign-alternating doubler states are
/// tagged and kept out of the gap edges.
pub fn discrete_spectrum<P: PotentialField>(
    spec: &DiracOperatorSpec<P>,
    grid: &Grid,
    opts: &SpectrumOptions,
) -> Result<SpectrumReport> {
    let m = discretize(spec, grid)?;
    analyze(&m, &SpectrumOptions { block: 3, stagger_filter: true, ..opts.clone() })
}
