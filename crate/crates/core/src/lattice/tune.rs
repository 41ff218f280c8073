use alloc::vec::Vec;

use super::bloch::{default_k_grid, det_shifted};
use super::TightBindingParams;
use crate::numcore::quad_roots;
use crate::{Error, Modulus, Result};

/// One way of tuning `t_CC` so that `a2` is a k-independent band.
///
/// With it, `det(E − H(k)) = (E − a2)(E² + a1 E + a0(k))` and
/// `a0(k) = a0_const + a0_cos · cos(ka)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatBandSolution {
    pub t_cc: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0_const: f64,
    pub a0_cos: f64,
}

impl FlatBandSolution {
    /// The parameters with this solution's `t_CC` filled in.
    pub fn apply(&self, p: &TightBindingParams) -> TightBindingParams {
        TightBindingParams { t_cc: self.t_cc, ..*p }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    /// Ascending in `a2`; empty when the quadratic has no real root.
    pub solutions: Vec<FlatBandSolution>,
    pub discriminant: f64,
}

/// All real `(t_CC, a2)` pairs for which `H(k)` has a flat band at `a2`.
///
/// The `cos(ka)` coefficient of `det(H − a2)` is `2 t̃ [t_AC t_BC − (t_CC − a2) t_AB]`,
/// so flatness forces `t_CC − a2 = t_AC t_BC / t_AB`. Substituting leaves a
/// quadratic in `a2`. The incoming `t_cc` is ignored.
pub fn tune_flat_band(p: &TightBindingParams) -> Result<TuneReport> {
    p.validate()?;
    if p.t_ab == 0.0 || p.t_ab_tilde == 0.0 {
        return Err(Error::DegenerateDispersion(
            "t_ab and t_ab_tilde must both be nonzero for a dispersive band to exist".into(),
        ));
    }
    let (ta, tb, t, tt) = (p.t_aa, p.t_bb, p.t_ab, p.t_ab_tilde);
    let (pp, q) = (p.t_ac, p.t_bc);
    let pq = pp * q;
    let p2 = pq;
    let p1 = -pq * (ta + tb) + t * (pp * pp + q * q);
    let p0 = pq * ta * tb - t * (q * q * ta + pp * pp * tb) + pq * (t * t - tt * tt);
    let roots = quad_roots(p2, p1, p0).map_err(|_| {
        Error::DegenerateDispersion("t_ac = t_bc = 0: the C site decouples and t_cc is not determined".into())
    })?;
    let offset = pq / t;
    let solutions = roots
        .iter()
        .map(|a2| {
            let t_cc = a2 + offset;
            let a1 = a2 - (ta + tb + t_cc);
            let minors = ta * tb + ta * t_cc + tb * t_cc - pp * pp - q * q - t * t - tt * tt;
            FlatBandSolution { t_cc, a2, a1, a0_const: minors + a2 * a1, a0_cos: -2.0 * t * tt }
        })
        .collect();
    Ok(TuneReport { solutions, discriminant: roots.discriminant })
}

/// `max_k |det(H(k) − a2)|` over `n_k` points, divided by
/// `(1 + max |parameter|)³` so the figure is scale-free.
pub fn flat_band_residual(p: &TightBindingParams, a2: f64, n_k: usize) -> f64 {
    let scale = p.named()[..7].iter().map(|(_, v)| v.abs()).fold(a2.abs(), f64::max);
    let scale = (1.0 + scale) * (1.0 + scale) * (1.0 + scale);
    default_k_grid(p.a, n_k).into_iter().map(|k| det_shifted(p, k, a2).modulus()).fold(0.0, f64::max) / scale
}
