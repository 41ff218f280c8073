use rayon::prelude::*;
use serde::Serialize;
use susychain_core::lattice::{bands_at, default_k_grid, tune_flat_band, BandStructure, TightBindingParams};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{fmt17, OutDir, F17};

pub const CSV_HEADER: [&str; 4] = ["k", "E1", "E2", "E3"];

#[derive(Debug, Serialize)]
pub struct BandSummary {
    pub band: usize,
    pub min: F17,
    pub max: F17,
    pub mean: F17,
    pub spread: F17,
    pub flat: bool,
}

#[derive(Debug, Serialize)]
pub struct BandsReport {
    pub params: Params,
    pub tuned: bool,
    pub k_points: usize,
    pub bands: Vec<BandSummary>,
    pub flat_band: Option<FlatBand>,
}

#[derive(Debug, Serialize)]
pub struct FlatBand {
    pub band: usize,
    pub energy: F17,
}

#[derive(Debug, Serialize)]
pub struct Params {
    pub t_aa: F17,
    pub t_bb: F17,
    pub t_cc: F17,
    pub t_ab: F17,
    pub t_ab_tilde: F17,
    pub t_ac: F17,
    pub t_bc: F17,
    pub a: F17,
}

impl From<&TightBindingParams> for Params {
    fn from(p: &TightBindingParams) -> Self {
        Self {
            t_aa: F17(p.t_aa),
            t_bb: F17(p.t_bb),
            t_cc: F17(p.t_cc),
            t_ab: F17(p.t_ab),
            t_ab_tilde: F17(p.t_ab_tilde),
            t_ac: F17(p.t_ac),
            t_bc: F17(p.t_bc),
            a: F17(p.a),
        }
    }
}

/// The configured parameters, with `t_cc` retuned if asked.
pub fn lattice_params(cfg: &RunConfig) -> CliResult<TightBindingParams> {
    let p = cfg.lattice.params();
    if !cfg.lattice.tune {
        return Ok(p);
    }
    let report = tune_flat_band(&p)?;
    let best = report.solutions.iter().min_by(|a, b| a.a2.abs().total_cmp(&b.a2.abs()));
    match best {
        Some(s) => Ok(s.apply(&p)),
        None => Err(crate::error::CliError::Config(format!(
            "lattice.tune: no real flat-band solution (discriminant {:e})",
            report.discriminant
        ))),
    }
}

pub fn band_structure_par(p: &TightBindingParams, k_points: usize) -> CliResult<BandStructure> {
    let k = default_k_grid(p.a, k_points);
    let rows = k.par_iter().map(|&k| bands_at(p, k)).collect::<Result<Vec<_>, _>>()?;
    Ok(BandStructure::from_rows(k, &rows))
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<BandsReport> {
    let p = lattice_params(cfg)?;
    let bs = band_structure_par(&p, cfg.lattice.k_points)?;
    out.csv(
        "bands.csv",
        &CSV_HEADER,
        (0..bs.k_grid.len()).map(|i| {
            vec![fmt17(bs.k_grid[i]), fmt17(bs.bands[0][i]), fmt17(bs.bands[1][i]), fmt17(bs.bands[2][i])]
        }),
    )?;
    let is_flat = |j: usize| match cfg.tol {
        Some(t) => bs.spread(j) <= t,
        None => bs.is_flat(j),
    };
    let bands: Vec<BandSummary> = (0..3)
        .map(|j| {
            let b = &bs.bands[j];
            BandSummary {
                band: j + 1,
                min: F17(b.iter().copied().fold(f64::INFINITY, f64::min)),
                max: F17(b.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
                mean: F17(bs.mean(j)),
                spread: F17(bs.spread(j)),
                flat: is_flat(j),
            }
        })
        .collect();
    let flat_band = (0..3).find(|&j| is_flat(j)).map(|j| FlatBand { band: j + 1, energy: F17(bs.mean(j)) });
    let report = BandsReport { params: (&p).into(), tuned: cfg.lattice.tune, k_points: cfg.lattice.k_points, bands, flat_band };
    out.json("bands.json", &report)?;
    Ok(report)
}
