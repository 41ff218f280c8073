//! Run configuration. The file is TOML; every key is optional and dotted
//! keys (`lattice.t_ac = 0.2`) work as well as tables.

use std::path::Path;

use serde::Deserialize;
use susychain_core::lattice::TightBindingParams;
use susychain_core::models::{validate_params, CSiteRule, ModelKind, ModelParams};
use susychain_core::numcore::Grid;
use susychain_core::susy::SeedData;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Seed for the randomized sweeps of `verify`.
    pub seed: u64,
    /// Replaces every upper-bound tolerance of `verify` and the flatness
    /// threshold of `bands`.
    pub tol: Option<f64>,
    pub lattice: LatticeConfig,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub chain: ChainConfig,
    pub spectrum: SpectrumConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_517,
            tol: None,
            lattice: LatticeConfig::default(),
            model: ModelConfig::default(),
            grid: GridConfig::default(),
            chain: ChainConfig::default(),
            spectrum: SpectrumConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub t_aa: f64,
    pub t_bb: f64,
    pub t_cc: f64,
    pub t_ab: f64,
    pub t_ab_tilde: f64,
    pub t_ac: f64,
    pub t_bc: f64,
    pub a: f64,
    pub k_points: usize,
    /// Replace `t_cc` by the flat-band root with the smallest `|a2|`.
    pub tune: bool,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            t_aa: 0.0,
            t_bb: 0.0,
            t_cc: 0.002,
            t_ab: 1.0,
            t_ab_tilde: 1.0,
            t_ac: 0.2,
            t_bc: 0.01,
            a: 1.0,
            k_points: 513,
            tune: false,
        }
    }
}

impl LatticeConfig {
    pub fn params(&self) -> TightBindingParams {
        TightBindingParams {
            t_aa: self.t_aa,
            t_bb: self.t_bb,
            t_cc: self.t_cc,
            t_ab: self.t_ab,
            t_ab_tilde: self.t_ab_tilde,
            t_ac: self.t_ac,
            t_bc: self.t_bc,
            a: self.a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ModelChoice {
    I,
    II,
    #[serde(rename = "custom")]
    Custom,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub kind: ModelChoice,
    pub m: f64,
    pub lambda: f64,
    pub w0: f64,
    pub c1: f64,
    /// The remaining seed constants; only for `kind = "custom"`.
    pub a_gauge: Option<f64>,
    pub v: Option<f64>,
    pub epsilon: Option<f64>,
    pub c0: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { kind: ModelChoice::I, m: 0.07, lambda: 0.0, w0: 1.0, c1: 0.0, a_gauge: None, v: None, epsilon: None, c0: None }
    }
}

impl ModelConfig {
    /// The named model, or `None` for a custom seed.
    pub fn model(&self) -> CliResult<Option<ModelParams>> {
        let kind = match self.kind {
            ModelChoice::I => ModelKind::I,
            ModelChoice::II => ModelKind::II,
            ModelChoice::Custom => return Ok(None),
        };
        let p = ModelParams { w0: self.w0, c1: self.c1, ..ModelParams::unchecked(kind, self.m, self.lambda) };
        if let Some(v) = validate_params(&p).into_iter().next() {
            return Err(CliError::Config(format!("model.{}: violates {} ({})", kind_key(kind), v.condition, v.detail)));
        }
        Ok(Some(p))
    }

    pub fn seed(&self) -> CliResult<SeedData> {
        let s = match self.model()? {
            Some(p) => p.to_seed()?,
            None => SeedData {
                v: self.v.unwrap_or(0.0),
                epsilon: self.epsilon.unwrap_or(self.m + self.v.unwrap_or(0.0)),
                c0: self.c0.unwrap_or(0.0),
                c1: self.c1,
                w0: self.w0,
                ..SeedData::new(self.m, self.a_gauge.unwrap_or(0.0), self.lambda)
            },
        };
        s.validate().map_err(|e| CliError::Config(format!("model: {e}")))?;
        Ok(s)
    }
}

fn kind_key(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::I => "kind = \"I\"",
        ModelKind::II => "kind = \"II\"",
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// The grid is `[-half_width, half_width]`.
    pub half_width: f64,
    pub points: usize,
    /// Number of grids (each halving the spacing) for convergence orders.
    pub refinements: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: 20.0, points: 401, refinements: 3 }
    }
}

impl GridConfig {
    pub fn grid(&self) -> CliResult<Grid> {
        Grid::symmetric(self.half_width, self.points).map_err(|e| CliError::Config(format!("grid: {e}")))
    }

    /// The base grid followed by `refinements − 1` halvings.
    pub fn ladder(&self) -> CliResult<Vec<Grid>> {
        let mut g = vec![self.grid()?];
        for _ in 1..self.refinements {
            let next = g.last().unwrap().refined();
            g.push(next);
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CSiteChoice {
    LocalFlatBand,
    Bare,
}

impl From<CSiteChoice> for CSiteRule {
    fn from(c: CSiteChoice) -> Self {
        match c {
            CSiteChoice::LocalFlatBand => CSiteRule::LocalFlatBand,
            CSiteChoice::Bare => CSiteRule::Bare,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainConfig {
    pub cells: usize,
    /// Defaults to `cells / 2`, i.e. lattice constant one.
    pub half_width: Option<f64>,
    pub c_site: CSiteChoice,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { cells: 400, half_width: None, c_site: CSiteChoice::LocalFlatBand }
    }
}

impl ChainConfig {
    pub fn half_width(&self) -> f64 {
        self.half_width.unwrap_or(self.cells as f64 / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Chain,
    Continuum,
    Both,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub solver: Solver,
    pub cluster_tol: f64,
    /// Halo around the flat energy, as a fraction of the analytic edge.
    pub halo_fraction: f64,
    pub edge_fraction: f64,
    /// Eigenvectors are computed for `|E| ≤ window_factor · E₊`.
    pub window_factor: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { solver: Solver::Chain, cluster_tol: 1e-6, halo_fraction: 0.1, edge_fraction: 0.05, window_factor: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Randomized tight-binding parameter sets for the tuning sweep.
    pub random_samples: usize,
    pub model1_cells: usize,
    pub model2_cells: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { random_samples: 64, model1_cells: 400, model2_cells: 800 }
    }
}

/// Command-line overrides, applied on top of the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub grid_points: Option<usize>,
    pub half_width: Option<f64>,
    pub cells: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: Option<&Path>, ov: &Overrides) -> CliResult<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::parse(&text)?
            }
            None => Self::default(),
        };
        cfg.apply(ov);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, ov: &Overrides) {
        if let Some(s) = ov.seed {
            self.seed = s;
        }
        if ov.tol.is_some() {
            self.tol = ov.tol;
        }
        if let Some(n) = ov.grid_points {
            self.grid.points = n;
        }
        if let Some(w) = ov.half_width {
            self.grid.half_width = w;
            self.chain.half_width = Some(w);
        }
        if let Some(n) = ov.cells {
            self.chain.cells = n;
        }
    }

    /// Every numeric field against the invariants of the module that owns it.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |key: &str, why: String| Err(CliError::Config(format!("{key}: {why}")));
        if let Some(t) = self.tol {
            if !(t >= 0.0 && t.is_finite()) {
                return bad("tol", format!("must be a finite non-negative number, got {t}"));
            }
        }
        self.lattice.params().validate().map_err(|e| CliError::Config(format!("lattice: {e}")))?;
        if self.lattice.k_points < 2 {
            return bad("lattice.k_points", format!("need at least 2, got {}", self.lattice.k_points));
        }
        self.model.seed()?;
        if self.model.kind != ModelChoice::Custom {
            for (key, set) in [("a_gauge", self.model.a_gauge), ("v", self.model.v), ("epsilon", self.model.epsilon), ("c0", self.model.c0)] {
                if set.is_some() {
                    return bad(&format!("model.{key}"), "only allowed with kind = \"custom\"; the named models fix it".into());
                }
            }
        }
        self.grid.grid()?;
        if self.grid.refinements < 2 {
            return bad("grid.refinements", format!("need at least 2 grids for an order, got {}", self.grid.refinements));
        }
        if self.chain.cells < 2 {
            return bad("chain.cells", format!("need at least 2, got {}", self.chain.cells));
        }
        let hw = self.chain.half_width();
        if !(hw > 0.0 && hw.is_finite()) {
            return bad("chain.half_width", format!("must be positive, got {hw}"));
        }
        let s = &self.spectrum;
        for (key, v) in [
            ("spectrum.cluster_tol", s.cluster_tol),
            ("spectrum.halo_fraction", s.halo_fraction),
            ("spectrum.edge_fraction", s.edge_fraction),
            ("spectrum.window_factor", s.window_factor),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(key, format!("must be a finite non-negative number, got {v}"));
            }
        }
        if s.edge_fraction >= 0.5 {
            return bad("spectrum.edge_fraction", format!("must be below 0.5, got {}", s.edge_fraction));
        }
        for (key, v) in [("verify.model1_cells", self.verify.model1_cells), ("verify.model2_cells", self.verify.model2_cells)] {
            if v < 2 {
                return bad(key, format!("need at least 2, got {v}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys_and_tables_agree() {
        let a = RunConfig::parse("lattice.t_ac = 0.3\nmodel.kind = \"II\"\nmodel.m = 0.03\n").unwrap();
        let b = RunConfig::parse("[lattice]\nt_ac = 0.3\n[model]\nkind = \"II\"\nm = 0.03\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lattice.t_ac, 0.3);
        assert_eq!(a.lattice.t_bc, 0.01);
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = RunConfig::parse("lattice.t_xy = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("t_xy"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn window_violation_is_a_config_error() {
        let mut c = RunConfig::default();
        c.model.lambda = -0.2;
        let e = c.validate().unwrap_err();
        assert!(e.to_string().contains("−2m < λ"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn custom_only_keys() {
        let c = RunConfig::parse("model.epsilon = 0.1\n").unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::parse("model.kind = \"custom\"\nmodel.epsilon = 0.1\nmodel.a_gauge = 0.05\n").unwrap();
        c.validate().unwrap();
        assert_eq!(c.model.seed().unwrap().epsilon, 0.1);
    }

    #[test]
    fn overrides() {
        let mut c = RunConfig::default();
        c.apply(&Overrides { seed: Some(3), tol: Some(0.0), grid_points: Some(101), half_width: Some(30.0), cells: Some(50) });
        assert_eq!((c.seed, c.tol, c.grid.points, c.grid.half_width, c.chain.cells), (3, Some(0.0), 101, 30.0, 50));
        assert_eq!(c.chain.half_width(), 30.0);
        c.validate().unwrap();
    }
}
