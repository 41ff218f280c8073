use alloc::vec::Vec;

use super::frame::{assemble_frame, TransformationFrame, Xi1Rule, Xi2};
use super::SeedData;
use crate::numcore::{convergence_orders, diff_central, Grid, Mat3};
use crate::{Error, Modulus, Result, C64};

/// Three-component wave function value.
pub type Spinor = [C64; 3];

fn derivative(grid: &Grid, f: &[Spinor]) -> Result<Vec<Spinor>> {
    let comps = [0, 1, 2].map(|c| f.iter().map(|s| s[c]).collect::<Vec<C64>>());
    let d = [diff_central(grid, &comps[0])?, diff_central(grid, &comps[1])?, diff_central(grid, &comps[2])?];
    Ok((0..f.len()).map(|i| [d[0][i], d[1][i], d[2][i]]).collect())
}

fn norm_inf(s: &Spinor) -> f64 {
    s.iter().map(|z| z.modulus()).fold(0.0, f64::max)
}

/// `−iγψ′ + V(xᵢ)ψ` with a finite-difference derivative.
pub fn apply_operator(grid: &Grid, psi: &[Spinor], potential: impl Fn(usize) -> Mat3) -> Result<Vec<Spinor>> {
    let d = derivative(grid, psi)?;
    let mi = C64::new(0.0, -1.0);
    Ok((0..psi.len())
        .map(|i| {
            let v = potential(i).apply(&psi[i]);
            [mi * d[i][1] + v[0], mi * d[i][0] + v[1], v[2]]
        })
        .collect())
}

/// `max_x |(H − E)ψ|` where `H = −iγ∂ₓ + V`.
pub(crate) fn operator_residual(grid: &Grid, psi: &[Spinor], potential: impl Fn(usize) -> Mat3, e: f64) -> Result<f64> {
    let h = apply_operator(grid, psi, potential)?;
    Ok(h.iter().zip(psi).map(|(a, b)| norm_inf(&[a[0] - b[0] * e, a[1] - b[1] * e, a[2] - b[2] * e])).fold(0.0, f64::max))
}

fn inverse_at(frame: &TransformationFrame, i: usize) -> Result<Mat3> {
    let p = &frame.points[i];
    p.true_u().inverse().ok_or(Error::SingularFrame { x: p.x, ratio: p.relative_det() })
}

/// `Lψ = U ∂ₓ(U⁻¹ψ)`, differentiating `U⁻¹ψ` numerically.
pub fn apply_darboux(frame: &TransformationFrame, state: &[Spinor]) -> Result<Vec<Spinor>> {
    if state.len() != frame.len() {
        return Err(Error::Dimension { expected: frame.len(), got: state.len() });
    }
    let w = (0..state.len()).map(|i| Ok(inverse_at(frame, i)?.apply(&state[i]))).collect::<Result<Vec<Spinor>>>()?;
    let dw = derivative(&frame.grid, &w)?;
    Ok(frame.points.iter().zip(&dw).map(|(p, d)| p.true_u().apply(d)).collect())
}

/// `max_x |(LH − H̃L)ψ|` for one sampled state.
pub fn intertwining_residual(frame: &TransformationFrame, v_tilde: &[Mat3], state: &[Spinor]) -> Result<f64> {
    if v_tilde.len() != frame.len() {
        return Err(Error::Dimension { expected: frame.len(), got: v_tilde.len() });
    }
    let v = frame.seed.potential().matrix();
    let h_psi = apply_operator(&frame.grid, state, |_| v)?;
    let lhs = apply_darboux(frame, &h_psi)?;
    let l_psi = apply_darboux(frame, state)?;
    let rhs = apply_operator(&frame.grid, &l_psi, |i| v_tilde[i])?;
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| norm_inf(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])).fold(0.0, f64::max))
}

/// Intertwining residuals on successively refined grids.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningReport {
    pub points: Vec<usize>,
    pub residuals: Vec<f64>,
    /// `log₂` of successive residual ratios.
    pub orders: Vec<f64>,
}

impl IntertwiningReport {
    /// Smallest ratio between consecutive residuals.
    pub fn min_reduction(&self) -> f64 {
        self.residuals.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min)
    }
}

/// Build the hermitized cosh frame on each grid and measure the
/// intertwining residual of `state`.
pub fn intertwining_order(seed: &SeedData, grids: &[Grid], state: impl Fn(f64) -> Spinor) -> Result<IntertwiningReport> {
    let mut residuals = Vec::with_capacity(grids.len());
    for g in grids {
        let frame = assemble_frame(seed, g, &Xi2::Cosh, Xi1Rule::Hermitize)?;
        let vt = super::commutator_potential(&frame)?;
        let samples: Vec<Spinor> = g.points().map(&state).collect();
        residuals.push(intertwining_residual(&frame, &vt, &samples)?);
    }
    Ok(IntertwiningReport { points: grids.iter().map(|g| g.len()).collect(), orders: convergence_orders(&residuals), residuals })
}

/// A column of `(U⁻¹)†` as a candidate eigenstate of `H̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct DaggerState {
    pub energy: f64,
    pub samples: Vec<Spinor>,
    /// `max_x |(H̃ − E)ψ|`.
    pub residual: f64,
    /// `∫|ψ|²` over the grid.
    pub l2_mass: f64,
    /// Fitted `−d ln|ψ|/dx` over the right quarter of the box; positive
    /// means decay.
    pub decay_right: f64,
    /// Fitted `d ln|ψ|/dx` over the left quarter; positive means decay.
    pub decay_left: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Columns of `(U⁻¹)†` with energies `(ε, λ, λ)`.
pub fn inverse_dagger_states(frame: &TransformationFrame, v_tilde: &[Mat3]) -> Result<[DaggerState; 3]> {
    let n = frame.len();
    let inv_dag = (0..n).map(|i| Ok(inverse_at(frame, i)?.adjoint())).collect::<Result<Vec<Mat3>>>()?;
    let energies = frame.energies();
    let g = &frame.grid;
    let quarter = (n / 4).max(2);
    let mut out = Vec::with_capacity(3);
    for (j, &e) in energies.iter().enumerate() {
        let samples: Vec<Spinor> = inv_dag.iter().map(|m| m.column(j)).collect();
        let residual = operator_residual(g, &samples, |i| v_tilde[i], e)?;
        let dens: Vec<f64> = samples.iter().map(|s| s.iter().map(|z| z.norm_sqr()).sum()).collect();
        let l2_mass = g.h() * (dens.iter().sum::<f64>() - 0.5 * (dens[0] + dens[n - 1]));
        let fit = |range: core::ops::Range<usize>| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                range.filter(|&i| dens[i] > 0.0).map(|i| (g.x(i), 0.5 * libm::log(dens[i]))).unzip();
            if xs.len() < 2 {
                f64::NAN
            } else {
                slope(&xs, &ys)
            }
        };
        out.push(DaggerState {
            energy: e,
            residual,
            l2_mass,
            decay_right: -fit(n - quarter..n),
            decay_left: fit(0..quarter),
            samples,
        });
    }
    let [a, b, c]: [DaggerState; 3] = out.try_into().map_err(|_| Error::Dimension { expected: 3, got: 0 })?;
    Ok([a, b, c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::commutator_potential;

    fn model1_seed(m: f64, lambda: f64) -> SeedData {
        let a = (m * (m - lambda)).sqrt();
        let omega = -4.0 * m / (a * (2.0 * m + lambda));
        SeedData { c0: omega, ..SeedData::new(m, a, lambda) }
    }

    fn gaussian(x: f64) -> Spinor {
        let g = (-x * x / 8.0).exp();
        [C64::new(g, 0.0), C64::new(0.0, 0.5 * g * x), C64::new(0.3 * g, 0.1 * g)]
    }

    fn grids() -> [Grid; 3] {
        [401, 801, 1601].map(|n| Grid::symmetric(20.0, n).unwrap())
    }

    #[test]
    fn l_annihilates_columns() {
        let g = Grid::symmetric(20.0, 401).unwrap();
        let f = assemble_frame(&model1_seed(0.07, 0.0), &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        for col in f.columns() {
            let scale = col.iter().map(norm_inf).fold(0.0, f64::max);
            let out = apply_darboux(&f, &col).unwrap();
            let worst = out.iter().map(norm_inf).fold(0.0, f64::max);
            assert!(worst < 1e-12 * scale, "{worst}");
        }
    }

    #[test]
    fn intertwining_is_second_order() {
        let r = intertwining_order(&model1_seed(0.1, 0.04), &grids(), gaussian).unwrap();
        assert!(r.min_reduction() > 3.6, "{r:?}");
    }

    #[test]
    fn lambda_kernel_of_h_maps_to_kernel() {
        // (0, 0, ξ) is a λ-eigenvector of H for any ξ
        let s = model1_seed(0.07, 0.02);
        let errs: Vec<f64> = grids()
            .iter()
            .map(|g| {
                let f = assemble_frame(&s, g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
                let vt = commutator_potential(&f).unwrap();
                let st: Vec<Spinor> = g.points().map(|x| [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new((-x * x / 4.0).exp(), 0.0)]).collect();
                let l = apply_darboux(&f, &st).unwrap();
                operator_residual(g, &l, |i| vt[i], s.lambda).unwrap()
            })
            .collect();
        for p in convergence_orders(&errs) {
            assert!(p > 1.8, "{errs:?}");
        }
    }

    #[test]
    fn dagger_states_are_eigenstates() {
        let s = model1_seed(0.07, 0.0);
        let res: Vec<[f64; 3]> = grids()
            .iter()
            .map(|g| {
                let f = assemble_frame(&s, g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
                let vt = commutator_potential(&f).unwrap();
                for i in 0..f.len() {
                    let u = f.points[i].true_u();
                    let prod = u * u.inverse().unwrap();
                    assert!((prod - Mat3::identity()).max_abs() < 1e-12);
                }
                inverse_dagger_states(&f, &vt).unwrap().map(|d| d.residual)
            })
            .collect();
        for j in 0..3 {
            let e: Vec<f64> = res.iter().map(|r| r[j]).collect();
            for p in convergence_orders(&e) {
                assert!(p > 1.9, "column {j}: {e:?}");
            }
        }
    }
}
