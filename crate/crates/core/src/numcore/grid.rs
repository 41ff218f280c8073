use alloc::format;

use crate::{Error, Result};

/// Uniform grid on `[x_min, x_max]` including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    h: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{x_min}, {x_max}]")));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!("x_min {x_min} must be below x_max {x_max}")));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        let h = (x_max - x_min) / (n_points - 1) as f64;
        Ok(Self { x_min, x_max, n_points, h })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Same interval with the spacing halved; every old node is kept.
    pub fn refined(&self) -> Self {
        Self::new(self.x_min, self.x_max, 2 * self.n_points - 1).expect("refining a valid grid")
    }

    /// Index of the node closest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = libm::round((x - self.x_min) / self.h);
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.n_points - 1)
        }
    }
}
