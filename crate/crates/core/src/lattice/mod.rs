//! Saw-chain tight-binding model: Bloch bands, flat-band tuning and finite
//! open chains.

mod bloch;
mod chain;
mod tune;

pub use bloch::{band_structure, bands_at, bloch_hamiltonian, default_k_grid, det_shifted, BandStructure, DEFAULT_K_POINTS};
pub use chain::{build_finite_chain, chain_spectrum, ChainProfile};
pub use tune::{flat_band_residual, tune_flat_band, FlatBandSolution, TuneReport};

use alloc::format;

use crate::{Error, Result};

/// On-site energies and hoppings of the saw chain plus the lattice constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightBindingParams {
    pub t_aa: f64,
    pub t_bb: f64,
    pub t_cc: f64,
    /// Intra-cell A–B hopping.
    pub t_ab: f64,
    /// Inter-cell A–B hopping.
    pub t_ab_tilde: f64,
    pub t_ac: f64,
    pub t_bc: f64,
    pub a: f64,
}

impl Default for TightBindingParams {
    fn default() -> Self {
        Self { t_aa: 0.0, t_bb: 0.0, t_cc: 0.0, t_ab: 1.0, t_ab_tilde: 1.0, t_ac: 0.0, t_bc: 0.0, a: 1.0 }
    }
}

impl TightBindingParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite, got {v}") });
            }
        }
        if self.a <= 0.0 {
            return Err(Error::InvalidParameter { name: "a", reason: format!("lattice constant must be positive, got {}", self.a) });
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 8] {
        [
            ("t_aa", self.t_aa),
            ("t_bb", self.t_bb),
            ("t_cc", self.t_cc),
            ("t_ab", self.t_ab),
            ("t_ab_tilde", self.t_ab_tilde),
            ("t_ac", self.t_ac),
            ("t_bc", self.t_bc),
            ("a", self.a),
        ]
    }

    /// Add `s` to every on-site energy.
    pub fn shifted(&self, s: f64) -> Self {
        Self { t_aa: self.t_aa + s, t_bb: self.t_bb + s, t_cc: self.t_cc + s, ..*self }
    }
}
