use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::TightBindingParams;
use crate::numcore::BandedHermitian;
use crate::spectrum::{analyze, SpectrumOptions, SpectrumReport};
use crate::{Error, Result};

/// Per-cell couplings of a finite saw chain. `t_ab_tilde[n]` is the bond
/// between `A_n` and `B_{n−1}` and is unused for `n = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainProfile {
    pub t_aa: Vec<f64>,
    pub t_bb: Vec<f64>,
    pub t_cc: Vec<f64>,
    pub t_ab: Vec<f64>,
    pub t_ab_tilde: Vec<f64>,
    pub t_ac: Vec<f64>,
    pub t_bc: Vec<f64>,
}

impl ChainProfile {
    pub fn uniform(p: &TightBindingParams, n_cells: usize) -> Self {
        Self {
            t_aa: vec![p.t_aa; n_cells],
            t_bb: vec![p.t_bb; n_cells],
            t_cc: vec![p.t_cc; n_cells],
            t_ab: vec![p.t_ab; n_cells],
            t_ab_tilde: vec![p.t_ab_tilde; n_cells],
            t_ac: vec![p.t_ac; n_cells],
            t_bc: vec![p.t_bc; n_cells],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.t_aa.len()
    }

    fn columns(&self) -> [(&'static str, &[f64]); 7] {
        [
            ("t_aa", &self.t_aa),
            ("t_bb", &self.t_bb),
            ("t_cc", &self.t_cc),
            ("t_ab", &self.t_ab),
            ("t_ab_tilde", &self.t_ab_tilde),
            ("t_ac", &self.t_ac),
            ("t_bc", &self.t_bc),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_cells();
        if n < 2 {
            return Err(Error::InvalidParameter { name: "n_cells", reason: format!("need at least 2 cells, got {n}") });
        }
        for (name, col) in self.columns() {
            if col.len() != n {
                return Err(Error::InvalidParameter { name, reason: format!("length {} but {n} cells", col.len()) });
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("non-finite value in cell {i}") });
            }
        }
        Ok(())
    }
}

/// Open-boundary hopping matrix with sites ordered `A_0, B_0, C_0, A_1, …`.
pub fn build_finite_chain(profile: &ChainProfile) -> Result<BandedHermitian> {
    profile.validate()?;
    let n = profile.n_cells();
    let mut m = BandedHermitian::zeros(3 * n, 2);
    for c in 0..n {
        let (a, b, cc) = (3 * c, 3 * c + 1, 3 * c + 2);
        m.set_real(a, a, profile.t_aa[c])?;
        m.set_real(b, b, profile.t_bb[c])?;
        m.set_real(cc, cc, profile.t_cc[c])?;
        m.set_real(b, a, profile.t_ab[c])?;
        m.set_real(cc, a, profile.t_ac[c])?;
        m.set_real(cc, b, profile.t_bc[c])?;
        if c > 0 {
            m.set_real(a, a - 2, profile.t_ab_tilde[c])?;
        }
    }
    Ok(m)
}

/// Spectrum of a chain with three sites per cell.
pub fn chain_spectrum(chain: &BandedHermitian, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    analyze(chain, &SpectrumOptions { block: 3, ..opts.clone() })
}
