use serde::Serialize;
use susychain_core::continuum::{discrete_spectrum, DiracOperatorSpec, FnPotential};
use susychain_core::lattice::{build_finite_chain, chain_spectrum};
use susychain_core::models::{analytic_spectrum, sample_chain_profile, AnalyticSpectrum, CSiteRule, ModelParams};
use susychain_core::numcore::Grid;
use susychain_core::spectrum::{SpectrumOptions, SpectrumReport, StateTag};

use crate::config::{RunConfig, SpectrumConfig, Solver};
use crate::error::{CliError, CliResult};
use crate::output::{fmt17, OutDir, F17};

pub const CSV_HEADER: [&str; 6] = ["index", "energy", "tag", "ipr", "edge_mass", "stagger"];

#[derive(Debug, Serialize)]
pub struct Analytic {
    pub lower: F17,
    pub upper: F17,
    pub flat: F17,
    pub provenance: &'static str,
    pub identity_residual: F17,
}

#[derive(Debug, Serialize)]
pub struct Measured {
    pub states: usize,
    pub cluster_count: usize,
    pub cluster_fraction: F17,
    pub cluster_width: F17,
    pub gap_lower: Option<F17>,
    pub gap_upper: Option<F17>,
    pub rel_err_lower: Option<F17>,
    pub rel_err_upper: Option<F17>,
    /// Bulk states in `(−E₊ + δ, E₊ − δ)` with `δ = halo_fraction · E₊`.
    pub bulk_in_gap: usize,
    pub halo_states: usize,
    pub edge_states: usize,
    pub doubler_states: usize,
}

#[derive(Debug, Serialize)]
pub struct ChainInfo {
    pub cells: usize,
    pub half_width: F17,
    pub c_site: &'static str,
    pub measured: Measured,
}

#[derive(Debug, Serialize)]
pub struct ContinuumInfo {
    pub points: usize,
    pub half_width: F17,
    pub measured: Measured,
}

#[derive(Debug, Serialize)]
pub struct SpectrumOutput {
    pub model: &'static str,
    pub m: F17,
    pub lambda: F17,
    pub analytic: Analytic,
    pub chain: Option<ChainInfo>,
    pub continuum: Option<ContinuumInfo>,
}

pub fn options(s: &SpectrumConfig, a: &AnalyticSpectrum) -> SpectrumOptions {
    SpectrumOptions {
        target: Some(a.flat),
        cluster_tol: s.cluster_tol,
        halo: s.halo_fraction * a.upper,
        edge_fraction: s.edge_fraction,
        window: Some((-s.window_factor * a.upper, s.window_factor * a.upper)),
        ..Default::default()
    }
}

pub fn measure(r: &SpectrumReport, a: &AnalyticSpectrum, halo_fraction: f64, sites: usize) -> Measured {
    let rel = |m: Option<f64>, e: f64| m.map(|m| F17((m - e).abs() / e.abs()));
    let delta = halo_fraction * a.upper;
    Measured {
        states: r.states.len(),
        cluster_count: r.cluster_count,
        cluster_fraction: F17(r.cluster_count as f64 / sites as f64),
        cluster_width: F17(r.cluster_width),
        gap_lower: r.gap_lower.map(F17),
        gap_upper: r.gap_upper.map(F17),
        rel_err_lower: rel(r.gap_lower, a.lower),
        rel_err_upper: rel(r.gap_upper, a.upper),
        bulk_in_gap: r.bulk_in(a.lower + delta, a.upper - delta).len(),
        halo_states: r.count_tagged(StateTag::Halo),
        edge_states: r.count_tagged(StateTag::Edge),
        doubler_states: r.count_tagged(StateTag::Doubler),
    }
}

pub fn chain_report(p: &ModelParams, cells: usize, half_width: f64, rule: CSiteRule, opts: &SpectrumOptions) -> CliResult<SpectrumReport> {
    let profile = sample_chain_profile(p, cells, -half_width, half_width, rule)?;
    Ok(chain_spectrum(&build_finite_chain(&profile)?, opts)?)
}

fn rows(r: &SpectrumReport) -> impl Iterator<Item = Vec<String>> + '_ {
    r.states.iter().enumerate().map(|(i, s)| {
        let (ipr, edge, stagger) = match s.localization {
            Some(l) => (fmt17(l.ipr), fmt17(l.edge_mass), fmt17(l.stagger)),
            None => (String::new(), String::new(), String::new()),
        };
        vec![i.to_string(), fmt17(s.energy), s.tag.as_str().to_string(), ipr, edge, stagger]
    })
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<SpectrumOutput> {
    let p = cfg
        .model
        .model()?
        .ok_or_else(|| CliError::Config("model.kind: spectrum needs model \"I\" or \"II\"".into()))?;
    let a = analytic_spectrum(&p)?;
    let s = &cfg.spectrum;
    let opts = options(s, &a);

    let chain = if matches!(s.solver, Solver::Chain | Solver::Both) {
        let cells = cfg.chain.cells;
        let hw = cfg.chain.half_width();
        let rule: CSiteRule = cfg.chain.c_site.into();
        let r = chain_report(&p, cells, hw, rule, &opts)?;
        out.csv("spectrum_chain.csv", &CSV_HEADER, rows(&r))?;
        let c_site = match rule {
            CSiteRule::LocalFlatBand => "local_flat_band",
            CSiteRule::Bare => "bare",
        };
        Some(ChainInfo { cells, half_width: F17(hw), c_site, measured: measure(&r, &a, s.halo_fraction, cells) })
    } else {
        None
    };

    let continuum = if matches!(s.solver, Solver::Continuum | Solver::Both) {
        let grid: Grid = cfg.grid.grid()?;
        let spec = DiracOperatorSpec::new(FnPotential(|x| p.potential(x).matrix()));
        let r = discrete_spectrum(&spec, &grid, &opts)?;
        out.csv("spectrum_continuum.csv", &CSV_HEADER, rows(&r))?;
        Some(ContinuumInfo {
            points: grid.len(),
            half_width: F17(cfg.grid.half_width),
            measured: measure(&r, &a, s.halo_fraction, grid.len()),
        })
    } else {
        None
    };

    let report = SpectrumOutput {
        model: p.kind.as_str(),
        m: F17(p.m),
        lambda: F17(p.lambda),
        analytic: Analytic {
            lower: F17(a.lower),
            upper: F17(a.upper),
            flat: F17(a.flat),
            provenance: a.provenance.as_str(),
            identity_residual: F17(a.identity_residual),
        },
        chain,
        continuum,
    };
    out.json("spectrum.json", &report)?;
    Ok(report)
}
