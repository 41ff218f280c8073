use alloc::format;

use super::SeedData;
use crate::{Error, Result};

/// Real components `(ψ, φ)` of a column `(iψ, φ, ·)` and their derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ColumnValue {
    pub psi: f64,
    pub phi: f64,
    pub dpsi: f64,
    pub dphi: f64,
}

impl ColumnValue {
    fn scaled(self, s: f64) -> Self {
        Self { psi: self.psi * s, phi: self.phi * s, dpsi: self.dpsi * s, dphi: self.dphi * s }
    }
}

/// `(ψ₀, φ₀) = (p, q)·e^{−κx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonState {
    pub kappa: f64,
    pub psi_coef: f64,
    pub phi_coef: f64,
}

impl EpsilonState {
    /// Value times `e^{κx}`, paired with the log of the factor that undoes
    /// the scaling.
    pub fn eval_scaled(&self, x: f64) -> (ColumnValue, f64) {
        let c = ColumnValue {
            psi: self.psi_coef,
            phi: self.phi_coef,
            dpsi: -self.kappa * self.psi_coef,
            dphi: -self.kappa * self.phi_coef,
        };
        (c, -self.kappa * x)
    }

    pub fn eval(&self, x: f64) -> ColumnValue {
        let (c, ln) = self.eval_scaled(x);
        c.scaled(libm::exp(ln))
    }
}

/// `ψ₀ = −m e^{−Ax}`, `φ₀ = A e^{−Ax}`, the ε-column for `ε = m + v`.
pub fn seed_epsilon_state(s: &SeedData) -> Result<EpsilonState> {
    if !s.epsilon_on_shell() {
        return Err(Error::Unsupported(format!(
            "closed-form ε-column needs ε = m + v = {}, got ε = {}",
            s.m + s.v,
            s.epsilon
        )));
    }
    Ok(EpsilonState { kappa: s.a_gauge, psi_coef: -s.m, phi_coef: s.a_gauge })
}

/// ε-column for any `ε` with `κ_ε² = A² + (m + v − ε)(m − v + ε) > 0`.
/// Picks the branch decaying to the right. Reduces to
/// [`seed_epsilon_state`] on the mass shell.
pub fn seed_epsilon_state_general(s: &SeedData) -> Result<EpsilonState> {
    if s.epsilon_on_shell() {
        return seed_epsilon_state(s);
    }
    let d = s.m + s.v - s.epsilon;
    let k2 = s.a_gauge * s.a_gauge + d * (s.m - s.v + s.epsilon);
    if k2 <= 0.0 {
        return Err(Error::Unsupported(format!("κ_ε² = {k2} ≤ 0: oscillatory ε-seed")));
    }
    let kappa = libm::sqrt(k2);
    Ok(EpsilonState { kappa, psi_coef: (s.a_gauge - kappa) / d, phi_coef: 1.0 })
}

/// The two λ-columns: `φ₂ = cosh(κ₀x)`, `φ₁ = φ₂·(W₀ tanh(κ₀x)/κ₀ + c₀)`,
/// `ψₐ = (φₐ′ + Aφₐ)/(m + v − λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaStates {
    pub kappa0: f64,
    a: f64,
    w0: f64,
    c0: f64,
    dl: f64,
    cross: f64,
}

/// `sech y` without overflow.
pub(crate) fn sech(y: f64) -> f64 {
    let e = libm::exp(-2.0 * y.abs());
    2.0 * libm::exp(-y.abs()) / (1.0 + e)
}

/// `ln cosh y` without overflow.
pub(crate) fn ln_cosh(y: f64) -> f64 {
    y.abs() + libm::log1p(libm::exp(-2.0 * y.abs())) - core::f64::consts::LN_2
}

impl LambdaStates {
    /// Values times `sech(κ₀x)` and `ln cosh(κ₀x)`.
    pub fn eval_scaled(&self, x: f64) -> ([ColumnValue; 2], f64) {
        let k = self.kappa0;
        let t = libm::tanh(k * x);
        let sh = sech(k * x);
        let g = self.w0 * t / k + self.c0;
        let phi2 = 1.0;
        let dphi2 = k * t;
        let phi1 = g;
        let dphi1 = dphi2 * g + self.w0 * sh * sh;
        let col = |phi: f64, dphi: f64| {
            let psi = (dphi + self.a * phi) / self.dl;
            ColumnValue { psi, phi, dpsi: self.a * psi + self.cross * phi, dphi }
        };
        ([col(phi1, dphi1), col(phi2, dphi2)], ln_cosh(k * x))
    }

    pub fn eval(&self, x: f64) -> [ColumnValue; 2] {
        let ([a, b], ln) = self.eval_scaled(x);
        let s = libm::exp(ln);
        [a.scaled(s), b.scaled(s)]
    }
}

pub fn seed_lambda_states(s: &SeedData) -> Result<LambdaStates> {
    s.validate()?;
    Ok(LambdaStates {
        kappa0: s.kappa0(),
        a: s.a_gauge,
        w0: s.w0,
        c0: s.c0,
        dl: s.delta_lambda(),
        cross: s.m - s.v + s.lambda,
    })
}
