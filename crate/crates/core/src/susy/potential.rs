use alloc::vec::Vec;

use super::frame::{TransformationFrame, Xi1Rule, SINGULAR};
use crate::continuum::{PotentialField, PotentialPoint};
use crate::numcore::Mat3;
use crate::{Error, Result, C64};

/// Sampled coefficients of the transformed potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialComponents {
    pub x: Vec<f64>,
    pub v11: Vec<f64>,
    pub v12: Vec<f64>,
    pub v13: Vec<f64>,
    pub v23: Vec<f64>,
    pub v: f64,
    pub lambda: f64,
}

impl PotentialComponents {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn point(&self, i: usize) -> PotentialPoint {
        PotentialPoint { v11: self.v11[i], v12: self.v12[i], v13: self.v13[i], v23: self.v23[i], v: self.v, lambda: self.lambda }
    }

    pub fn matrix(&self, i: usize) -> Mat3 {
        self.point(i).matrix()
    }

    pub fn from_points(x: Vec<f64>, pts: &[PotentialPoint]) -> Self {
        let (v, lambda) = pts.first().map_or((0.0, 0.0), |p| (p.v, p.lambda));
        Self {
            x,
            v11: pts.iter().map(|p| p.v11).collect(),
            v12: pts.iter().map(|p| p.v12).collect(),
            v13: pts.iter().map(|p| p.v13).collect(),
            v23: pts.iter().map(|p| p.v23).collect(),
            v,
            lambda,
        }
    }

    /// Largest pointwise difference in any coefficient.
    pub fn max_difference(&self, other: &Self) -> f64 {
        let cols = [(&self.v11, &other.v11), (&self.v12, &other.v12), (&self.v13, &other.v13), (&self.v23, &other.v23)];
        cols.iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(p, q)| (p - q).abs()))
            .fold((self.v - other.v).abs().max((self.lambda - other.lambda).abs()), f64::max)
    }

    /// Nearest-sample lookup, so the samples can drive a discretization on
    /// the same grid.
    pub fn as_field(&self) -> SampledField<'_> {
        SampledField(self)
    }
}

/// [`PotentialField`] view of [`PotentialComponents`] (nearest sample).
#[derive(Clone, Copy)]
pub struct SampledField<'a>(&'a PotentialComponents);

impl PotentialField for SampledField<'_> {
    fn matrix(&self, x: f64) -> Mat3 {
        let xs = &self.0.x;
        let i = match xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i >= xs.len() => xs.len() - 1,
            Err(i) => {
                if (xs[i] - x).abs() < (x - xs[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        };
        self.0.matrix(i)
    }
}

/// Closed-form coefficients of `Ṽ` in terms of the frame columns:
///
/// ```text
/// ṽ₁₂ = −A + (ε − λ)(ψ₀Q − φ₀P)/D
/// ṽ₁₃ = (ε − λ) ψ₀ (φ₁ψ₂ − φ₂ψ₁)/D
/// ṽ₂₃ = −(ε − λ) φ₀ (φ₁ψ₂ − φ₂ψ₁)/D
/// ṽ₁₁ = −m + (ε − λ)(ψ₀P + φ₀Q)/D
/// ```
///
/// They presume the hermitizing `ξ₁`.
pub fn transformed_potential(frame: &TransformationFrame) -> Result<PotentialComponents> {
    let s = &frame.seed;
    let shift = s.epsilon - s.lambda;
    if frame.xi1_rule != Xi1Rule::Hermitize && shift != 0.0 {
        return Err(Error::Unsupported("closed-form coefficients need the hermitizing ξ₁; use commutator_potential".into()));
    }
    let mut pts = Vec::with_capacity(frame.len());
    for p in &frame.points {
        let ratio = p.relative_det();
        if ratio < SINGULAR {
            return Err(Error::SingularFrame { x: p.x, ratio });
        }
        let (pp, q) = p.pq();
        let d = p.d();
        let (psi0, phi0) = (p.psi[0], p.phi[0]);
        let wn = p.phi[1] * p.psi[2] - p.phi[2] * p.psi[1];
        pts.push(PotentialPoint {
            v11: -s.m + shift * (psi0 * pp + phi0 * q) / d,
            v12: -s.a_gauge + shift * (psi0 * q - phi0 * pp) / d,
            v13: shift * psi0 * wn / d,
            v23: -shift * phi0 * wn / d,
            v: s.v,
            lambda: s.lambda,
        });
    }
    Ok(PotentialComponents::from_points(frame.points.iter().map(|p| p.x).collect(), &pts))
}

/// `Ṽ = V − i[γ, U′U⁻¹]` at every grid point, as full matrices.
pub fn commutator_potential(frame: &TransformationFrame) -> Result<Vec<Mat3>> {
    let v = frame.seed.potential().matrix();
    let g = Mat3::gamma();
    frame
        .points
        .iter()
        .map(|p| {
            let ld = p.log_derivative().ok_or(Error::SingularFrame { x: p.x, ratio: p.relative_det() })?;
            Ok(v - g.commutator(&ld).scale(C64::new(0.0, 1.0)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Grid;
    use crate::susy::{assemble_frame, SeedData, Xi2};

    fn model1_seed(m: f64, lambda: f64) -> SeedData {
        let a = (m * (m - lambda)).sqrt();
        let omega = -4.0 * m / (a * (2.0 * m + lambda));
        SeedData { c0: omega, ..SeedData::new(m, a, lambda) }
    }

    fn dual_path_gap(s: &SeedData, g: &Grid) -> f64 {
        let f = assemble_frame(s, g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let a = transformed_potential(&f).unwrap();
        let b = commutator_potential(&f).unwrap();
        (0..a.len()).map(|i| (a.matrix(i) - b[i]).max_abs()).fold(0.0, f64::max)
    }

    #[test]
    fn both_paths_agree() {
        let g = Grid::symmetric(20.0, 401).unwrap();
        assert!(dual_path_gap(&model1_seed(0.07, 0.0), &g) < 1e-13);
        let s = SeedData { v: 0.02, c1: 0.4, w0: 3.0, epsilon: 0.03, ..model1_seed(0.1, -0.04) };
        assert!(dual_path_gap(&s, &g) < 1e-12);
    }

    #[test]
    fn model1_values_at_origin() {
        let m = 0.07;
        let g = Grid::symmetric(20.0, 401).unwrap();
        let f = assemble_frame(&model1_seed(m, 0.0), &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let p = transformed_potential(&f).unwrap();
        let i = 200;
        assert!((p.v13[i] - m / 3.0).abs() < 1e-14);
        assert!((p.v23[i] - m / 3.0).abs() < 1e-14);
        assert!((p.v11[i] + 2.0 * m / 3.0).abs() < 1e-14);
        assert!(p.v12.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn equal_energies_flip_the_seed() {
        let s = SeedData { epsilon: 0.02, ..SeedData::new(0.07, 0.05, 0.02) };
        let g = Grid::symmetric(10.0, 101).unwrap();
        let f = assemble_frame(&s, &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let p = transformed_potential(&f).unwrap();
        for i in 0..p.len() {
            assert_eq!((p.v13[i], p.v23[i]), (0.0, 0.0));
            assert_eq!((p.v11[i], p.v12[i]), (-0.07, -0.05));
        }
    }

    #[test]
    fn hermiticity_needs_the_right_xi1() {
        let s = model1_seed(0.07, 0.0);
        let g = Grid::symmetric(20.0, 401).unwrap();
        let good = assemble_frame(&s, &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let bad = assemble_frame(&s, &g, &Xi2::Cosh, Xi1Rule::Multiple(1.0)).unwrap();
        let defect = |f| commutator_potential(f).unwrap().iter().map(|v| v.hermitian_defect() / (1.0 + v.norm_inf())).fold(0.0, f64::max);
        assert!(defect(&good) < 1e-13);
        assert!(defect(&bad) > 1e-4);
        assert!(transformed_potential(&bad).is_err());
    }

    #[test]
    fn sampled_field_lookup() {
        let g = Grid::symmetric(1.0, 5).unwrap();
        let f = assemble_frame(&model1_seed(0.07, 0.0), &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let p = transformed_potential(&f).unwrap();
        let field = p.as_field();
        assert_eq!(field.matrix(0.1), p.matrix(2));
        assert_eq!(field.matrix(-7.0), p.matrix(0));
        assert_eq!(field.matrix(0.4), p.matrix(3));
    }
}
