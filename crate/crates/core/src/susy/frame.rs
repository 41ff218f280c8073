use alloc::format;
use alloc::vec::Vec;

use super::seed::{ln_cosh, seed_epsilon_state_general, seed_lambda_states, ColumnValue};
use super::SeedData;
use crate::numcore::{integrate_cumulative, vec3_norm_inf, Grid, Mat3};
use crate::{Error, Modulus, Result, C64};

/// Frames whose relative determinant drops below this are rejected.
pub const SINGULAR: f64 = 1e-8;
/// Frames whose relative determinant drops below this are flagged.
pub const NEAR_SINGULAR: f64 = 1e-4;

/// Third component of the λ-columns.
#[derive(Debug, Clone, PartialEq)]
pub enum Xi2 {
    /// `ξ₂ = cosh(κ₀x) = φ₂`.
    Cosh,
    /// Arbitrary nowhere-vanishing samples with their derivative, one per
    /// grid point.
    Sampled { values: Vec<f64>, derivs: Vec<f64> },
}

/// How `ξ₁` is obtained from `ξ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Xi1Rule {
    /// `ξ₁ = ξ₂·(c₁ − (ε − λ)·W·∫dx/ξ₂²)`, which makes `Ṽ` Hermitian.
    Hermitize,
    /// `ξ₁ = c·ξ₂`. Breaks Hermiticity unless `ε = λ`.
    Multiple(f64),
}

/// `U(x)` and `U′(x)` at one grid point, each column divided by
/// `e^{ln_scale[j]}` so that nothing overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    pub x: f64,
    pub psi: [f64; 3],
    pub phi: [f64; 3],
    pub xi: [f64; 3],
    pub dpsi: [f64; 3],
    pub dphi: [f64; 3],
    pub dxi: [f64; 3],
    pub ln_scale: [f64; 3],
}

impl FramePoint {
    fn build(psi: [f64; 3], phi: [f64; 3], xi: [f64; 3]) -> Mat3 {
        let i = |x: f64| C64::new(0.0, x);
        let r = |x: f64| C64::new(x, 0.0);
        Mat3([
            [i(psi[0]), i(psi[1]), i(psi[2])],
            [r(phi[0]), r(phi[1]), r(phi[2])],
            [r(xi[0]), r(xi[1]), r(xi[2])],
        ])
    }

    /// Column-scaled `U`.
    pub fn u(&self) -> Mat3 {
        Self::build(self.psi, self.phi, self.xi)
    }

    /// Column-scaled `U′` (same scale factors as [`u`](Self::u)).
    pub fn du(&self) -> Mat3 {
        Self::build(self.dpsi, self.dphi, self.dxi)
    }

    fn unscale(&self, m: Mat3) -> Mat3 {
        let mut out = m;
        for j in 0..3 {
            let s = libm::exp(self.ln_scale[j]);
            for i in 0..3 {
                out[(i, j)] = m[(i, j)] * s;
            }
        }
        out
    }

    /// The actual `U(x)`. Overflows once `|κx|` approaches 700.
    pub fn true_u(&self) -> Mat3 {
        self.unscale(self.u())
    }

    pub fn true_du(&self) -> Mat3 {
        self.unscale(self.du())
    }

    /// `U′U⁻¹`, which the column scaling leaves unchanged.
    pub fn log_derivative(&self) -> Option<Mat3> {
        self.u().inverse().map(|inv| self.du() * inv)
    }

    /// `D = ψ₀P − φ₀Q` with `P = ξ₂φ₁ − ξ₁φ₂`, `Q = ξ₂ψ₁ − ξ₁ψ₂`; `det U = iD`.
    pub fn d(&self) -> f64 {
        let (p, q) = self.pq();
        self.psi[0] * p - self.phi[0] * q
    }

    pub(crate) fn pq(&self) -> (f64, f64) {
        let p = self.xi[2] * self.phi[1] - self.xi[1] * self.phi[2];
        let q = self.xi[2] * self.psi[1] - self.xi[1] * self.psi[2];
        (p, q)
    }

    /// `|D|` divided by the sum of the magnitudes of its terms: a
    /// scale-free measure of how close `U` is to singular.
    pub fn relative_det(&self) -> f64 {
        let (ps, ph, xi) = (self.psi, self.phi, self.xi);
        let terms = ps[0].abs() * ((ph[1] * xi[2]).abs() + (ph[2] * xi[1]).abs())
            + ph[0].abs() * ((ps[1] * xi[2]).abs() + (ps[2] * xi[1]).abs());
        if terms == 0.0 {
            0.0
        } else {
            self.d().abs() / terms
        }
    }
}

/// `U` sampled on a grid together with the data it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationFrame {
    pub grid: Grid,
    pub seed: SeedData,
    pub points: Vec<FramePoint>,
    /// `W₀/(m + v − λ)`, the Wronskian used in the hermitization.
    pub wronskian: f64,
    pub xi1_rule: Xi1Rule,
}

/// `max_x |(H − E)·column|` per column, with the derivative taken by finite
/// differences, and the same normalized by `1 + max|column|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnResiduals {
    pub absolute: [f64; 3],
    pub relative: [f64; 3],
}

impl ColumnResiduals {
    pub fn max_absolute(&self) -> f64 {
        self.absolute.iter().copied().fold(0.0, f64::max)
    }
}

pub fn assemble_frame(seed: &SeedData, grid: &Grid, xi2: &Xi2, rule: Xi1Rule) -> Result<TransformationFrame> {
    seed.validate()?;
    let eps_state = seed_epsilon_state_general(seed)?;
    let lam = seed_lambda_states(seed)?;
    let k0 = lam.kappa0;
    let w = seed.wronskian();
    let shift = seed.epsilon - seed.lambda;

    // ξ₂ and ∫dx/ξ₂² at each point, ξ₂ already divided by cosh(κ₀x)
    let n = grid.len();
    let (xi2_s, dxi2_s, integral): (Vec<f64>, Vec<f64>, Vec<f64>) = match xi2 {
        Xi2::Cosh => grid.points().map(|x| (1.0, k0 * libm::tanh(k0 * x), libm::tanh(k0 * x) / k0)).fold(
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)),
            |(mut a, mut b, mut c), (p, q, r)| {
                a.push(p);
                b.push(q);
                c.push(r);
                (a, b, c)
            },
        ),
        Xi2::Sampled { values, derivs } => {
            if values.len() != n || derivs.len() != n {
                return Err(Error::Dimension { expected: n, got: values.len().min(derivs.len()) });
            }
            let worst = values.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, v)| (i, v.abs()));
            if let Some((i, v)) = worst {
                if !(v > 0.0) {
                    return Err(Error::SingularFrame { x: grid.x(i), ratio: 0.0 });
                }
            }
            let inv_sq: Vec<f64> = values.iter().map(|v| 1.0 / (v * v)).collect();
            let integral = integrate_cumulative(grid, &inv_sq)?;
            let scale: Vec<f64> = grid.points().map(|x| libm::exp(-ln_cosh(k0 * x))).collect();
            let xs = values.iter().zip(&scale).map(|(v, s)| v * s).collect();
            let ds = derivs.iter().zip(&scale).map(|(v, s)| v * s).collect();
            (xs, ds, integral)
        }
    };

    let mut points = Vec::with_capacity(n);
    for (i, x) in grid.points().enumerate() {
        let (c0, ln0) = eps_state.eval_scaled(x);
        let ([c1, c2], ln12) = lam.eval_scaled(x);
        let (x2, dx2) = (xi2_s[i], dxi2_s[i]);
        let (x1, dx1) = match rule {
            Xi1Rule::Hermitize => {
                let h = seed.c1 - shift * w * integral[i];
                // d/dx of ∫dx/ξ₂² is 1/ξ₂²; in scaled form that term is
                // −(ε − λ)·W/ξ₂ times sech(κ₀x)
                let true_inv = match xi2 {
                    Xi2::Cosh => {
                        let s = crate::susy::seed::sech(k0 * x);
                        s * s
                    }
                    Xi2::Sampled { values, .. } => 1.0 / values[i] * libm::exp(-ln_cosh(k0 * x)),
                };
                (x2 * h, dx2 * h - shift * w * true_inv)
            }
            Xi1Rule::Multiple(c) => (c * x2, c * dx2),
        };
        let col = |c: &ColumnValue| (c.psi, c.phi, c.dpsi, c.dphi);
        let (p0, f0, dp0, df0) = col(&c0);
        let (p1, f1, dp1, df1) = col(&c1);
        let (p2, f2, dp2, df2) = col(&c2);
        let pt = FramePoint {
            x,
            psi: [p0, p1, p2],
            phi: [f0, f1, f2],
            xi: [0.0, x1, x2],
            dpsi: [dp0, dp1, dp2],
            dphi: [df0, df1, df2],
            dxi: [0.0, dx1, dx2],
            ln_scale: [ln0, ln12, ln12],
        };
        if !pt.u().is_finite() || !pt.du().is_finite() {
            return Err(Error::NonFinite(format!("transformation matrix at x = {x}")));
        }
        let ratio = pt.relative_det();
        if ratio < SINGULAR {
            return Err(Error::SingularFrame { x, ratio });
        }
        points.push(pt);
    }
    Ok(TransformationFrame { grid: *grid, seed: *seed, points, wronskian: w, xi1_rule: rule })
}

impl TransformationFrame {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest relative determinant and where it occurs.
    pub fn min_relative_det(&self) -> (f64, f64) {
        self.points.iter().map(|p| (p.x, p.relative_det())).fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    /// True when `U` comes within [`NEAR_SINGULAR`] of degenerating.
    pub fn near_singular(&self) -> bool {
        self.min_relative_det().1 < NEAR_SINGULAR
    }

    /// `det U` at each point, unscaled (may overflow on very wide boxes).
    pub fn det_samples(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.true_u().det()).collect()
    }

    /// `φ₂ψ₁ − φ₁ψ₂` at each point, unscaled.
    pub fn wronskian_samples(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| (p.phi[2] * p.psi[1] - p.phi[1] * p.psi[2]) * libm::exp(2.0 * p.ln_scale[1]))
            .collect()
    }

    /// Population standard deviation of [`wronskian_samples`](Self::wronskian_samples)
    /// over the absolute mean.
    pub fn wronskian_relative_stdev(&self) -> f64 {
        let w = self.wronskian_samples();
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        libm::sqrt(var) / mean.abs()
    }

    /// Column energies `(ε, λ, λ)`.
    pub fn energies(&self) -> [f64; 3] {
        [self.seed.epsilon, self.seed.lambda, self.seed.lambda]
    }

    /// Unscaled columns as spinors, one list per column.
    pub fn columns(&self) -> [Vec<[C64; 3]>; 3] {
        let us: Vec<Mat3> = self.points.iter().map(|p| p.true_u()).collect();
        [0, 1, 2].map(|j| us.iter().map(|u| u.column(j)).collect())
    }

    /// `(H − E)·column` with a finite-difference derivative.
    pub fn column_residuals(&self) -> Result<ColumnResiduals> {
        let v = self.seed.potential().matrix();
        let e = self.energies();
        let mut absolute = [0.0; 3];
        let mut relative = [0.0; 3];
        for (j, col) in self.columns().iter().enumerate() {
            let r = super::darboux::operator_residual(&self.grid, col, |_| v, e[j])?;
            let norm = col.iter().map(|c| vec3_norm_inf(c)).fold(0.0, f64::max);
            absolute[j] = r;
            relative[j] = r / (1.0 + norm);
        }
        Ok(ColumnResiduals { absolute, relative })
    }

    /// `(H − E)·column` using the analytic derivatives; roundoff-sized.
    pub fn analytic_column_residual(&self) -> f64 {
        let v = self.seed.potential().matrix();
        let g = Mat3::gamma();
        let e = self.energies();
        let mut worst: f64 = 0.0;
        for p in &self.points {
            let (u, du) = (p.u(), p.du());
            let r = (g * du).scale(C64::new(0.0, -1.0)) + v * u;
            for j in 0..3 {
                for i in 0..3 {
                    let d = (r[(i, j)] - u[(i, j)] * e[j]).modulus();
                    let n = 1.0 + u.column(j).iter().map(|z| z.modulus()).fold(0.0, f64::max);
                    worst = worst.max(d / n);
                }
            }
        }
        worst
    }
}
