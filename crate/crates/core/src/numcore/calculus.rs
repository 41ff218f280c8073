use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use super::grid::Grid;
use crate::{Error, Result};

/// Scalar types the grid calculus works over.
pub trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn is_finite_sample(&self) -> bool;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

fn check_len<T>(grid: &Grid, f: &[T]) -> Result<()> {
    if f.len() != grid.len() {
        return Err(Error::Dimension { expected: grid.len(), got: f.len() });
    }
    Ok(())
}

/// Second-order derivative: central in the interior, one-sided three-point
/// at the ends.
pub fn diff_central<T: Sample>(grid: &Grid, f: &[T]) -> Result<Vec<T>> {
    check_len(grid, f)?;
    let n = f.len();
    let inv2h = 0.5 / grid.h();
    let mut out = Vec::with_capacity(n);
    out.push((f[1] * 4.0 - f[0] * 3.0 - f[2]) * inv2h);
    for i in 1..n - 1 {
        out.push((f[i + 1] - f[i - 1]) * inv2h);
    }
    out.push((f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * inv2h);
    Ok(out)
}

/// Trapezoid antiderivative, zero at the grid node nearest `x = 0`.
pub fn integrate_cumulative<T: Sample>(grid: &Grid, f: &[T]) -> Result<Vec<T>> {
    check_len(grid, f)?;
    if let Some(i) = f.iter().position(|v| !v.is_finite_sample()) {
        return Err(Error::NonFinite(format!("integrand at x = {}", grid.x(i))));
    }
    let n = f.len();
    let half_h = 0.5 * grid.h();
    let anchor = grid.nearest_index(0.0);
    let mut out = alloc::vec![T::zero(); n];
    for i in anchor + 1..n {
        out[i] = out[i - 1] + (f[i - 1] + f[i]) * half_h;
    }
    for i in (0..anchor).rev() {
        out[i] = out[i + 1] - (f[i] + f[i + 1]) * half_h;
    }
    Ok(out)
}
