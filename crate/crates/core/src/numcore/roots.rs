
use crate::{Error, Result};

/// Real roots of `a y² + b y + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadRoots {
    /// Real roots, ascending; `None` slots are absent.
    pub roots: [Option<f64>; 2],
    /// `b² − 4ac`; zero when the equation degenerates to linear.
    pub discriminant: f64,
}

impl QuadRoots {
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().flatten().copied()
    }

    pub fn count(&self) -> usize {
        self.iter().count()
    }
}

/// Roots via the cancellation-free `q = −(b + sgn(b)√Δ)/2` form. Falls back
/// to the linear root when `a` vanishes relative to the other coefficients.
/// Fails when every coefficient is zero.
pub fn quad_roots(a: f64, b: f64, c: f64) -> Result<QuadRoots> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::NonFinite("quadratic coefficient".into()));
    }
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Err(Error::InvalidParameter {
            name: "quadratic",
            reason: "all coefficients vanish; every value is a root".into(),
        });
    }
    if a.abs() <= f64::EPSILON * scale {
        if b.abs() <= f64::EPSILON * scale {
            return Ok(QuadRoots { roots: [None, None], discriminant: 0.0 });
        }
        return Ok(QuadRoots { roots: [Some(-c / b), None], discriminant: 0.0 });
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(QuadRoots { roots: [None, None], discriminant: disc });
    }
    let sq = libm::sqrt(disc);
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let roots = if disc == 0.0 { [Some(lo), None] } else { [Some(lo), Some(hi)] };
    Ok(QuadRoots { roots, discriminant: disc })
}
