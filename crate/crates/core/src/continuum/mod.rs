//! Dirac-type operators `H = −iγ∂ₓ + V(x)` with the pseudo-spin-1 kinetic
//! matrix `γ` that couples the first two components.

mod discrete;

pub use discrete::{discrete_spectrum, discretize};

use alloc::format;

use crate::lattice::TightBindingParams;
use crate::numcore::{eigh_small, HermitianMatrix, Mat3};
use crate::{Error, Result, C64};

/// Real coefficients of the potential
///
/// ```text
///     ⎡ v11 + v   −i v12   −i v13 ⎤
/// V = ⎢ i v12    −v11 + v    v23  ⎥
///     ⎣ i v13      v23      lambda⎦
/// ```
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PotentialPoint {
    pub v11: f64,
    pub v12: f64,
    pub v13: f64,
    pub v23: f64,
    pub v: f64,
    pub lambda: f64,
}

impl PotentialPoint {
    pub fn matrix(&self) -> Mat3 {
        let r = |x: f64| C64::new(x, 0.0);
        let i = |x: f64| C64::new(0.0, x);
        Mat3([
            [r(self.v11 + self.v), i(-self.v12), i(-self.v13)],
            [i(self.v12), r(-self.v11 + self.v), r(self.v23)],
            [i(self.v13), r(self.v23), r(self.lambda)],
        ])
    }

    /// Read the coefficients back from a matrix of the above shape. Parts
    /// outside that shape are ignored.
    pub fn from_matrix(m: &Mat3) -> Self {
        let v = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        Self {
            v11: 0.5 * (m[(0, 0)].re - m[(1, 1)].re),
            v12: m[(1, 0)].im,
            v13: m[(2, 0)].im,
            v23: m[(2, 1)].re,
            v,
            lambda: m[(2, 2)].re,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.v11, self.v12, self.v13, self.v23, self.v, self.lambda].iter().all(|x| x.is_finite())
    }
}

/// Anything that yields a potential matrix at position `x`.
pub trait PotentialField {
    fn matrix(&self, x: f64) -> Mat3;
}

impl PotentialField for PotentialPoint {
    fn matrix(&self, _x: f64) -> Mat3 {
        PotentialPoint::matrix(self)
    }
}

impl PotentialField for Mat3 {
    fn matrix(&self, _x: f64) -> Mat3 {
        *self
    }
}

/// Adapter turning a closure into a [`PotentialField`].
#[derive(Clone, Copy)]
pub struct FnPotential<F>(pub F);

impl<F: Fn(f64) -> Mat3> PotentialField for FnPotential<F> {
    fn matrix(&self, x: f64) -> Mat3 {
        (self.0)(x)
    }
}

impl<P: PotentialField + ?Sized> PotentialField for &P {
    fn matrix(&self, x: f64) -> Mat3 {
        (**self).matrix(x)
    }
}

/// `−iγ∂ₓ + V(x)`. `energy_scale` is the factor by which lattice energies
/// were divided so that the kinetic coefficient is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracOperatorSpec<P> {
    pub potential: P,
    pub energy_scale: f64,
}

impl<P: PotentialField> DiracOperatorSpec<P> {
    pub fn new(potential: P) -> Self {
        Self { potential, energy_scale: 1.0 }
    }

    pub fn gamma() -> Mat3 {
        Mat3::gamma()
    }

    /// Constant-coefficient symbol `γk + V(x)`.
    pub fn symbol(&self, x: f64, k: f64) -> Mat3 {
        Mat3::gamma().scale(C64::new(k, 0.0)) + self.potential.matrix(x)
    }
}

/// Low-energy operator of the saw chain near `k = π/a`.
///
/// Expanding `t_AB + t̃ e^{−ika}` at `k = π/a + q` and conjugating by
/// `diag(1, −i, −i)` gives `t̃a·q·γ + V` with `v12 = t_AB − t̃`. Everything is
/// divided by `t̃a`.
pub fn continuum_limit(p: &TightBindingParams) -> Result<DiracOperatorSpec<PotentialPoint>> {
    p.validate()?;
    if p.t_ab_tilde == 0.0 {
        return Err(Error::DegenerateDispersion("t_ab_tilde = 0: no Dirac expansion exists".into()));
    }
    let s = p.t_ab_tilde * p.a;
    let potential = PotentialPoint {
        v11: 0.5 * (p.t_aa - p.t_bb) / s,
        v12: (p.t_ab - p.t_ab_tilde) / s,
        v13: p.t_ac / s,
        v23: p.t_bc / s,
        v: 0.5 * (p.t_aa + p.t_bb) / s,
        lambda: p.t_cc / s,
    };
    Ok(DiracOperatorSpec { potential, energy_scale: s })
}

/// Constant limit of a potential at one end of the line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AsymptoticCell {
    pub v11: f64,
    pub v12: f64,
    pub v13: f64,
    pub v23: f64,
    pub v: f64,
    pub lambda: f64,
}

impl AsymptoticCell {
    pub fn potential(&self) -> PotentialPoint {
        PotentialPoint { v11: self.v11, v12: self.v12, v13: self.v13, v23: self.v23, v: self.v, lambda: self.lambda }
    }

    pub fn is_decoupled(&self) -> bool {
        self.v13 == 0.0 && self.v23 == 0.0
    }
}

/// Eigenvalues of `γk + V∞`, ascending.
pub fn symbol_dispersion(cell: &AsymptoticCell, k: f64) -> Result<[f64; 3]> {
    let m = Mat3::gamma().scale(C64::new(k, 0.0)) + cell.potential().matrix();
    let e = eigh_small(&HermitianMatrix::from_fn(3, |i, j| m[(i, j)])?)?;
    Ok([e.values[0], e.values[1], e.values[2]])
}

/// Continuum thresholds and flat energy of a decoupled cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub lower: f64,
    pub upper: f64,
    pub flat: f64,
}

/// For a decoupled cell the dispersive branches are `v ± √(k² + v11² + v12²)`,
/// so the gap edges sit at `k = 0`.
pub fn threshold_scan(cell: &AsymptoticCell) -> Result<Thresholds> {
    if !cell.is_decoupled() {
        return Err(Error::Unsupported(format!(
            "threshold scan needs v13 = v23 = 0 asymptotically, got v13 = {}, v23 = {}",
            cell.v13, cell.v23
        )));
    }
    let gap = libm::hypot(cell.v11, cell.v12);
    Ok(Thresholds { lower: cell.v - gap, upper: cell.v + gap, flat: cell.lambda })
}
