//! Darboux transformation of a decoupled pseudo-spin-1 Dirac operator.
//!
//! The seed operator is `H = −iγ∂ₓ + V` with the constant potential
//!
//! ```text
//!     ⎡ m + v   −iA     0 ⎤
//! V = ⎢  iA    −m + v   0 ⎥
//!     ⎣  0       0      λ ⎦
//! ```
//!
//! Three eigen-columns are combined into `U`, with `HU = U diag(ε, λ, λ)`.
//! Then `L = U∂ₓU⁻¹` intertwines `H` with `H̃ = −iγ∂ₓ + Ṽ`, where
//! `Ṽ = V − i[γ, U′U⁻¹]`.

mod darboux;
mod frame;
mod potential;
pub(crate) mod seed;

pub use darboux::{
    apply_darboux, apply_operator, intertwining_order, intertwining_residual, inverse_dagger_states, DaggerState,
    IntertwiningReport, Spinor,
};
pub use frame::{assemble_frame, ColumnResiduals, FramePoint, TransformationFrame, Xi1Rule, Xi2, NEAR_SINGULAR, SINGULAR};
pub use potential::{commutator_potential, transformed_potential, PotentialComponents};
pub use seed::{seed_epsilon_state, seed_epsilon_state_general, seed_lambda_states, ColumnValue, EpsilonState, LambdaStates};

use alloc::format;

use crate::continuum::PotentialPoint;
use crate::{Error, Result};

/// Constants of the seed operator and the transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedData {
    pub m: f64,
    pub v: f64,
    /// The constant `A` in `V`.
    pub a_gauge: f64,
    pub lambda: f64,
    /// Energy of the first column of `U`.
    pub epsilon: f64,
    pub c0: f64,
    pub c1: f64,
    pub w0: f64,
}

impl SeedData {
    /// Seed with `v = 0`, `ε = m`, `W₀ = 1`, `c₀ = c₁ = 0`.
    pub fn new(m: f64, a_gauge: f64, lambda: f64) -> Self {
        Self { m, v: 0.0, a_gauge, lambda, epsilon: m, c0: 0.0, c1: 0.0, w0: 1.0 }
    }

    /// `m + v − λ`, the denominator of the λ-column `ψ`s.
    pub fn delta_lambda(&self) -> f64 {
        self.m + self.v - self.lambda
    }

    /// `κ₀² = A² + (m + v − λ)(m − v + λ)`.
    pub fn kappa0_sq(&self) -> f64 {
        self.a_gauge * self.a_gauge + self.delta_lambda() * (self.m - self.v + self.lambda)
    }

    pub fn kappa0(&self) -> f64 {
        libm::sqrt(self.kappa0_sq())
    }

    /// Whether `ε` is the mass-shell energy `m + v` of the simple closed form.
    pub fn epsilon_on_shell(&self) -> bool {
        self.epsilon == self.m + self.v
    }

    /// The seed potential as a [`PotentialPoint`].
    pub fn potential(&self) -> PotentialPoint {
        PotentialPoint { v11: self.m, v12: self.a_gauge, v13: 0.0, v23: 0.0, v: self.v, lambda: self.lambda }
    }

    /// Wronskian `φ₂ψ₁ − φ₁ψ₂ = W₀/(m + v − λ)` of the two λ-columns.
    pub fn wronskian(&self) -> f64 {
        self.w0 / self.delta_lambda()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("m", self.m),
            ("v", self.v),
            ("a_gauge", self.a_gauge),
            ("lambda", self.lambda),
            ("epsilon", self.epsilon),
            ("c0", self.c0),
            ("c1", self.c1),
            ("w0", self.w0),
        ];
        for (name, x) in fields {
            if !x.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite, got {x}") });
            }
        }
        if self.w0 == 0.0 {
            return Err(Error::InvalidParameter { name: "w0", reason: "the λ-columns must be independent (W₀ ≠ 0)".into() });
        }
        if self.delta_lambda() == 0.0 {
            return Err(Error::InvalidParameter { name: "lambda", reason: "m + v − λ = 0 makes ψ₁, ψ₂ singular".into() });
        }
        if self.kappa0_sq() <= 0.0 {
            return Err(Error::Unsupported(format!(
                "κ₀² = A² + (m + v − λ)(m − v + λ) = {} ≤ 0: oscillatory λ-seed",
                self.kappa0_sq()
            )));
        }
        Ok(())
    }
}
