use serde::Serialize;
use susychain_core::lattice::{flat_band_residual, tune_flat_band};

use super::bands::Params;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{OutDir, F17};

#[derive(Debug, Serialize)]
pub struct A0Coeffs {
    pub constant: F17,
    pub cos_ka: F17,
}

#[derive(Debug, Serialize)]
pub struct Solution {
    pub t_cc: F17,
    pub a2: F17,
    pub a1: F17,
    pub a0_coeffs: A0Coeffs,
    pub residual_max_over_k: F17,
}

#[derive(Debug, Serialize)]
pub struct TuneOutput {
    pub params: Params,
    pub discriminant: F17,
    pub k_points: usize,
    pub solutions: Vec<Solution>,
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<TuneOutput> {
    let p = cfg.lattice.params();
    let r = tune_flat_band(&p)?;
    let solutions = r
        .solutions
        .iter()
        .map(|s| Solution {
            t_cc: F17(s.t_cc),
            a2: F17(s.a2),
            a1: F17(s.a1),
            a0_coeffs: A0Coeffs { constant: F17(s.a0_const), cos_ka: F17(s.a0_cos) },
            residual_max_over_k: F17(flat_band_residual(&s.apply(&p), s.a2, cfg.lattice.k_points)),
        })
        .collect();
    let report = TuneOutput { params: (&p).into(), discriminant: F17(r.discriminant), k_points: cfg.lattice.k_points, solutions };
    out.json("tune.json", &report)?;
    Ok(report)
}
