//! The two closed-form coupled models. Both come from the cosh seed with
//! `ε = m`, `v = 0`, `c₀ = W₀ω + c₁`, and differ in the choice of `A`:
//!
//! - Model I: `A = √(m(m − λ))`, `κ = √((m − λ)(2m + λ))`, regular for
//!   `−2m < λ < m`.
//! - Model II: `A = m`, `κ = √(2m² − λ²)`, `ṽ₁₂ ≡ −λ`, needs `λ² < 2m²`.
//!
//! The formulas are evaluated through `sech` and `tanh` of `2κx`, so they
//! stay finite for any `x`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::continuum::{AsymptoticCell, PotentialPoint};
use crate::lattice::ChainProfile;
use crate::numcore::Grid;
use crate::susy::{seed::sech, PotentialComponents, SeedData};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    I,
    II,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::I => "I",
            ModelKind::II => "II",
        }
    }
}

/// A model with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub m: f64,
    pub lambda: f64,
    pub a_gauge: f64,
    pub kappa: f64,
    pub omega: f64,
    pub w0: f64,
    pub c1: f64,
}

/// One failed admissibility condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

impl ModelParams {
    /// Derived constants without any checks; invalid inputs give NaNs.
    pub fn unchecked(kind: ModelKind, m: f64, lambda: f64) -> Self {
        let (a_gauge, kappa, omega) = match kind {
            ModelKind::I => {
                let a = libm::sqrt(m * (m - lambda));
                (a, libm::sqrt((m - lambda) * (2.0 * m + lambda)), -4.0 * m / (a * (2.0 * m + lambda)))
            }
            ModelKind::II => {
                let k2 = 2.0 * m * m - lambda * lambda;
                (m, libm::sqrt(k2), -2.0 * (2.0 * m - lambda) / k2)
            }
        };
        Self { kind, m, lambda, a_gauge, kappa, omega, w0: 1.0, c1: 0.0 }
    }

    /// Validated model with `W₀ = 1`, `c₁ = 0`.
    pub fn new(kind: ModelKind, m: f64, lambda: f64) -> Result<Self> {
        let p = Self::unchecked(kind, m, lambda);
        if let Some(v) = validate_params(&p).into_iter().next() {
            return Err(Error::ModelWindow(format!("model {}: {} ({})", kind.as_str(), v.condition, v.detail)));
        }
        Ok(p)
    }

    pub fn model1(m: f64, lambda: f64) -> Result<Self> {
        Self::new(ModelKind::I, m, lambda)
    }

    pub fn model2(m: f64, lambda: f64) -> Result<Self> {
        Self::new(ModelKind::II, m, lambda)
    }

    pub fn c0(&self) -> f64 {
        self.w0 * self.omega + self.c1
    }

    /// `ṽ` at `x` from the closed form.
    pub fn potential(&self, x: f64) -> PotentialPoint {
        match self.kind {
            ModelKind::I => model1_potential(self, x),
            ModelKind::II => model2_potential(self, x),
        }
    }

    /// Closed form sampled on a grid.
    pub fn sample(&self, grid: &Grid) -> PotentialComponents {
        let x: Vec<f64> = grid.points().collect();
        let pts: Vec<PotentialPoint> = x.iter().map(|&x| self.potential(x)).collect();
        PotentialComponents::from_points(x, &pts)
    }

    /// The seed whose Darboux transform is this model.
    pub fn to_seed(&self) -> Result<SeedData> {
        let s = SeedData { c0: self.c0(), c1: self.c1, w0: self.w0, ..SeedData::new(self.m, self.a_gauge, self.lambda) };
        s.validate().map_err(|e| Error::ModelWindow(format!("model {} seed: {e}", self.kind.as_str())))?;
        Ok(s)
    }

    /// Limit cell at `x → +∞` (`sign = 1`) or `x → −∞` (`sign = −1`).
    pub fn asymptotic_cell(&self, sign: f64) -> AsymptoticCell {
        let (m, l, k, a) = (self.m, self.lambda, self.kappa, self.a_gauge);
        let (v11, v12) = match self.kind {
            ModelKind::I => {
                let d = 2.0 * m - l;
                (-sign * 2.0 * k * a / d - l * l / d, sign * k * l / d - 2.0 * a * l / d)
            }
            ModelKind::II => (-sign * k, -l),
        };
        AsymptoticCell { v11, v12, v13: 0.0, v23: 0.0, v: 0.0, lambda: l }
    }
}

/// Empty when admissible. For admissible inputs the seed identity
/// `κ = √(A² + m² − λ²)` is also checked.
pub fn validate_params(p: &ModelParams) -> Vec<Violation> {
    let (m, l) = (p.m, p.lambda);
    let mut out = Vec::new();
    let check = |out: &mut Vec<Violation>, ok: bool, condition: &'static str, detail: String| {
        if !ok {
            out.push(Violation { condition, detail });
        }
    };
    check(&mut out, m.is_finite() && l.is_finite(), "finite m and λ", format!("m = {m}, λ = {l}"));
    match p.kind {
        ModelKind::I => {
            check(&mut out, m > 0.0, "m > 0", format!("m = {m}"));
            check(&mut out, -2.0 * m < l, "−2m < λ", format!("λ = {l}, −2m = {}", -2.0 * m));
            check(&mut out, l < m, "λ < m", format!("λ = {l}, m = {m}"));
            check(&mut out, m * (m - l) > 0.0, "m(m − λ) > 0", format!("m(m − λ) = {}", m * (m - l)));
        }
        ModelKind::II => {
            check(&mut out, l * l < 2.0 * m * m, "λ² < 2m²", format!("λ² = {}, 2m² = {}", l * l, 2.0 * m * m));
            check(&mut out, l != m, "λ ≠ m", "the seed ψ-columns divide by m − λ".into());
        }
    }
    if out.is_empty() {
        let k0 = libm::sqrt(p.a_gauge * p.a_gauge + m * m - l * l);
        check(&mut out, (k0 - p.kappa).abs() <= 1e-14 * p.kappa.max(1e-300), "κ = √(A² + m² − λ²)", format!("κ = {}, κ₀ = {k0}", p.kappa));
    }
    out
}

pub fn model1_potential(p: &ModelParams, x: f64) -> PotentialPoint {
    let (m, l, k, a) = (p.m, p.lambda, p.kappa, p.a_gauge);
    let y = 2.0 * k * x;
    let (s, t) = (sech(y), libm::tanh(y));
    let den = 2.0 * m - l + 4.0 * m * s;
    let cden = 4.0 * m * s + 2.0 * m - l;
    PotentialPoint {
        v11: -(l * l + 4.0 * m * m * s + 2.0 * a * k * t) / den,
        v12: -l * (2.0 * a * (1.0 + s) - k * t) / den,
        v13: libm::sqrt(m * (2.0 * m + l)) * k * s / cden,
        v23: k * k * s / cden,
        v: 0.0,
        lambda: l,
    }
}

pub fn model2_potential(p: &ModelParams, x: f64) -> PotentialPoint {
    let (m, l, k) = (p.m, p.lambda, p.kappa);
    let y = 2.0 * k * x;
    let (s, t) = (sech(y), libm::tanh(y));
    let d2 = (2.0 * m - l) * (2.0 * m - l);
    let e2 = 2.0 * (m - l) * (m - l);
    let c = (m - l) * k * k * s / (d2 * s + e2);
    PotentialPoint {
        v11: -k * ((2.0 * m - l) * k * s + e2 * t) / (e2 + d2 * s),
        v12: -l,
        v13: c,
        v23: c,
        v: 0.0,
        lambda: l,
    }
}

/// Where an analytic statement comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Stated with the model.
    Published,
    /// Worked out here from the asymptotic cells.
    Derived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
        }
    }
}

/// Continuum edges `±E₊` and the flat energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpectrum {
    pub lower: f64,
    pub upper: f64,
    pub flat: f64,
    pub provenance: Provenance,
    /// `max_± |v11∞² + v12∞² − E₊²|`.
    pub identity_residual: f64,
}

fn identity_residual(p: &ModelParams, e2: f64) -> f64 {
    [1.0, -1.0]
        .iter()
        .map(|&s| {
            let c = p.asymptotic_cell(s);
            (c.v11 * c.v11 + c.v12 * c.v12 - e2).abs()
        })
        .fold(0.0, f64::max)
}

/// `σ(H̃) = (−∞, −√(m(2m − λ))] ∪ [√(m(2m − λ)), ∞) ∪ {λ}`.
pub fn model1_spectrum(p: &ModelParams) -> Result<AnalyticSpectrum> {
    if p.kind != ModelKind::I {
        return Err(Error::ModelWindow("model1_spectrum needs a Model I parameter set".into()));
    }
    ModelParams::model1(p.m, p.lambda)?;
    let e2 = p.m * (2.0 * p.m - p.lambda);
    let e = libm::sqrt(e2);
    Ok(AnalyticSpectrum { lower: -e, upper: e, flat: p.lambda, provenance: Provenance::Published, identity_residual: identity_residual(p, e2) })
}

/// Edges `±√(κ² + λ²) = ±√2|m|`, read off the asymptotic cells.
pub fn model2_thresholds(p: &ModelParams) -> Result<AnalyticSpectrum> {
    if p.kind != ModelKind::II {
        return Err(Error::ModelWindow("model2_thresholds needs a Model II parameter set".into()));
    }
    ModelParams::model2(p.m, p.lambda)?;
    let e2 = 2.0 * p.m * p.m;
    let e = libm::sqrt(e2);
    Ok(AnalyticSpectrum { lower: -e, upper: e, flat: p.lambda, provenance: Provenance::Derived, identity_residual: identity_residual(p, e2) })
}

pub fn analytic_spectrum(p: &ModelParams) -> Result<AnalyticSpectrum> {
    match p.kind {
        ModelKind::I => model1_spectrum(p),
        ModelKind::II => model2_thresholds(p),
    }
}

/// On-site energy of the C sites when sampling a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CSiteRule {
    /// `t_CC = λ + t_AC·t_BC/t_AB` per cell, the lattice flat-band
    /// condition with `a2 = λ`. The correction is second order in the
    /// couplings, below the resolution of the continuum limit.
    #[default]
    LocalFlatBand,
    /// `t_CC = λ` everywhere.
    Bare,
}

/// Saw-chain couplings reproducing the model at lattice constant
/// `a = (x_max − x_min)/n_cells`. Cell `n` samples the potential at its
/// centre; `t̃_AB = 1/a` so that the kinetic coefficient `t̃_AB·a` is one.
pub fn sample_chain_profile(p: &ModelParams, n_cells: usize, x_min: f64, x_max: f64, rule: CSiteRule) -> Result<ChainProfile> {
    if n_cells < 2 {
        return Err(Error::InvalidParameter { name: "n_cells", reason: format!("need at least 2 cells, got {n_cells}") });
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(Error::InvalidGrid(format!("box [{x_min}, {x_max}]")));
    }
    let a = (x_max - x_min) / n_cells as f64;
    let tt = 1.0 / a;
    let mut prof = ChainProfile::uniform(&crate::lattice::TightBindingParams::default(), n_cells);
    for n in 0..n_cells {
        let x = x_min + (n as f64 + 0.5) * a;
        let v = p.potential(x);
        prof.t_aa[n] = v.v11 + v.v;
        prof.t_bb[n] = -v.v11 + v.v;
        prof.t_ab_tilde[n] = tt;
        prof.t_ab[n] = tt + v.v12;
        prof.t_ac[n] = v.v13;
        prof.t_bc[n] = v.v23;
        prof.t_cc[n] = match rule {
            CSiteRule::Bare => v.lambda,
            CSiteRule::LocalFlatBand => v.lambda + v.v13 * v.v23 / prof.t_ab[n],
        };
    }
    prof.validate()?;
    Ok(prof)
}
