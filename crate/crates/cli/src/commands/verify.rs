use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use susychain_core::lattice::{band_structure, bands_at, default_k_grid, flat_band_residual, tune_flat_band, TightBindingParams};
use susychain_core::models::{analytic_spectrum, CSiteRule, ModelKind, ModelParams};
use susychain_core::numcore::{convergence_orders, Grid};
use susychain_core::susy::{assemble_frame, intertwining_order, transformed_potential, Xi1Rule, Xi2};

use super::spectrum::{chain_report, measure, options};
use super::susy::{
    column_residual_ladder, dagger_residual_ladder, dual_path_difference, hermiticity, hermiticity_control, test_spinors,
};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{OutDir, F17};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: F17,
    /// `"max"`: pass when `measured ≤ bound`; `"min"`: when `measured ≥ bound`.
    pub kind: &'static str,
    pub bound: F17,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub tol: Option<F17>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

struct Suite {
    tol: Option<f64>,
    checks: Vec<Check>,
}

impl Suite {
    /// Upper bound that `--tol` replaces.
    fn tolerance(&mut self, criterion: u8, name: &str, measured: f64, bound: f64) {
        let bound = self.tol.unwrap_or(bound);
        self.push(criterion, name, measured, "max", bound, measured <= bound);
    }

    /// Upper bound on a count or a fraction; not a tolerance.
    fn at_most(&mut self, criterion: u8, name: &str, measured: f64, bound: f64) {
        self.push(criterion, name, measured, "max", bound, measured <= bound);
    }

    fn at_least(&mut self, criterion: u8, name: &str, measured: f64, bound: f64) {
        self.push(criterion, name, measured, "min", bound, measured >= bound);
    }

    fn push(&mut self, criterion: u8, name: &str, measured: f64, kind: &'static str, bound: f64, pass: bool) {
        self.checks.push(Check { criterion, name: name.into(), measured: F17(measured), kind, bound: F17(bound), pass });
    }
}

const MASSES: [f64; 5] = [0.05, 0.07, 0.1, 0.13, 0.16];

/// Five masses times five λ/m ratios inside each model's window.
pub fn admissible_grid() -> Vec<ModelParams> {
    let mut out = Vec::with_capacity(50);
    for m in MASSES {
        for f in [-1.5, -0.75, 0.0, 0.4, 0.8] {
            out.push(ModelParams::model1(m, f * m).expect("inside the Model I window"));
        }
        for f in [-1.2, -0.6, 0.0, 0.6, 1.2] {
            out.push(ModelParams::model2(m, f * m).expect("inside the Model II window"));
        }
    }
    out
}

fn random_params(rng: &mut ChaCha8Rng) -> TightBindingParams {
    TightBindingParams {
        t_aa: rng.random_range(-1.0..1.0),
        t_bb: rng.random_range(-1.0..1.0),
        t_ab: rng.random_range(0.3..1.5),
        t_ab_tilde: rng.random_range(0.3..1.5),
        t_ac: rng.random_range(-1.0..1.0),
        t_bc: rng.random_range(-1.0..1.0),
        ..Default::default()
    }
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn min(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.min(b) })
}

fn lattice_checks(s: &mut Suite, cfg: &RunConfig) -> CliResult<()> {
    let reference = TightBindingParams { t_ac: 0.2, t_bc: 0.01, ..Default::default() };
    let r = tune_flat_band(&reference)?;
    let sol = r
        .solutions
        .iter()
        .min_by(|a, b| a.a2.abs().total_cmp(&b.a2.abs()))
        .ok_or_else(|| CliError::Numerical("no flat-band root for the reference parameters".into()))?;
    s.tolerance(1, "tune_t_cc_error", (sol.t_cc - 1.0 / 500.0).abs(), 1e-12);
    s.tolerance(1, "tune_a2_error", sol.a2.abs(), 1e-12);
    let bs = band_structure(&sol.apply(&reference), &default_k_grid(1.0, 513))?;
    s.tolerance(1, "flat_band_spread", bs.spread(1), 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<TightBindingParams> = (0..cfg.verify.random_samples).map(|_| random_params(&mut rng)).collect();
    let worst = samples
        .par_iter()
        .map(|p| {
            let r = tune_flat_band(p)?;
            Ok(max(r.solutions.iter().map(|sol| flat_band_residual(&sol.apply(p), sol.a2, 256))))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    s.tolerance(1, "random_tune_residual", max(worst), 1e-10);

    let e = bands_at(&TightBindingParams::default(), PI)?;
    // the decoupled C band sits at zero between the two dispersive ones
    s.tolerance(2, "dirac_gap_at_zone_edge", e[2] - e[0], 1e-12);
    Ok(())
}

struct FrameStats {
    column_order: f64,
    w0_stdev: f64,
    hermiticity: f64,
    control: f64,
    dual_path: f64,
    oracle: f64,
    model2_v12: f64,
    intertwining_reduction: f64,
    dagger_order: f64,
}

fn frame_stats(p: &ModelParams, grids: &[Grid]) -> CliResult<FrameStats> {
    let seed = p.to_seed()?;
    let base = &grids[0];
    let frame = assemble_frame(&seed, base, &Xi2::Cosh, Xi1Rule::Hermitize)?;
    let pot = transformed_potential(&frame)?;
    let model2_v12 = match p.kind {
        ModelKind::II => max(pot.v12.iter().map(|v| (v + p.lambda).abs())),
        ModelKind::I => 0.0,
    };
    let columns = column_residual_ladder(&seed, grids)?;
    let dagger = dagger_residual_ladder(&seed, grids)?;
    let dagger_order = min((0..3).flat_map(|j| convergence_orders(&dagger.iter().map(|r| r[j]).collect::<Vec<_>>())));
    let mut reduction = f64::INFINITY;
    for f in test_spinors() {
        reduction = reduction.min(intertwining_order(&seed, grids, f)?.min_reduction());
    }
    Ok(FrameStats {
        column_order: min(convergence_orders(&columns)),
        w0_stdev: frame.wronskian_relative_stdev(),
        hermiticity: hermiticity(&frame)?,
        control: hermiticity_control(&seed, base)?,
        dual_path: dual_path_difference(&frame)?,
        oracle: pot.max_difference(&p.sample(base)),
        model2_v12,
        intertwining_reduction: reduction,
        dagger_order,
    })
}

fn susy_checks(s: &mut Suite, cfg: &RunConfig) -> CliResult<()> {
    let grids = cfg.grid.ladder()?;
    let stats = admissible_grid().par_iter().map(|p| frame_stats(p, &grids)).collect::<CliResult<Vec<_>>>()?;
    let all = |f: fn(&FrameStats) -> f64| stats.iter().map(f).collect::<Vec<f64>>();
    s.at_least(3, "eigen_column_order", min(all(|x| x.column_order)), 1.9);
    s.tolerance(3, "w0_relative_stdev", max(all(|x| x.w0_stdev)), 1e-10);
    s.tolerance(4, "hermiticity_asymmetry", max(all(|x| x.hermiticity)), 1e-10);
    s.at_least(4, "hermiticity_control_asymmetry", min(all(|x| x.control)), 1e-4);
    s.tolerance(5, "dual_path_difference", max(all(|x| x.dual_path)), 1e-8);
    s.tolerance(5, "model_oracle_difference", max(all(|x| x.oracle)), 1e-8);
    s.tolerance(5, "model2_v12_deviation", max(all(|x| x.model2_v12)), 1e-10);
    s.at_least(6, "intertwining_reduction", min(all(|x| x.intertwining_reduction)), 3.6);

    // L applied to its own columns; U⁻¹·column is constant so this is roundoff
    let seed = ModelParams::model1(0.07, 0.0)?.to_seed()?;
    let frame = assemble_frame(&seed, &grids[0], &Xi2::Cosh, Xi1Rule::Hermitize)?;
    let kernel = max(frame.columns().iter().map(|col| {
        let lc = susychain_core::susy::apply_darboux(&frame, col).expect("regular frame");
        let scale = max(col.iter().flatten().map(|z| z.norm()));
        max(lc.iter().flatten().map(|z| z.norm())) / scale
    }));
    s.tolerance(6, "kernel_residual", kernel, 1e-10);
    s.at_least(9, "dagger_residual_order", min(all(|x| x.dagger_order)), 1.9);
    Ok(())
}

fn spectrum_checks(s: &mut Suite, cfg: &RunConfig) -> CliResult<()> {
    let identity = max(admissible_grid().iter().filter(|p| p.kind == ModelKind::I).map(|p| {
        analytic_spectrum(p).map(|a| a.identity_residual).unwrap_or(f64::NAN)
    }));
    s.tolerance(7, "model1_edge_identity", identity, 1e-12);

    let sc = &cfg.spectrum;
    let mut runs = vec![(7u8, ModelParams::model1(0.07, 0.0)?, cfg.verify.model1_cells)];
    for l in [-0.015, 0.0, 0.015] {
        runs.push((8, ModelParams::model2(0.03, l)?, cfg.verify.model2_cells));
    }
    let reports = runs
        .par_iter()
        .map(|(_, p, n)| {
            let a = analytic_spectrum(p)?;
            let r = chain_report(p, *n, *n as f64 / 2.0, CSiteRule::LocalFlatBand, &options(sc, &a))?;
            Ok(measure(&r, &a, sc.halo_fraction, *n))
        })
        .collect::<CliResult<Vec<_>>>()?;
    for ((c, p, _), m) in runs.iter().zip(&reports) {
        let kind = match p.kind {
            ModelKind::I => 1,
            ModelKind::II => 2,
        };
        let tag = format!("model{kind}_lambda_{}", p.lambda);
        let rel = |x: &Option<F17>| x.map_or(f64::NAN, |v| v.0);
        s.at_least(*c, &format!("{tag}_cluster_fraction"), m.cluster_fraction.0, 0.9);
        if *c == 7 {
            s.at_most(*c, &format!("{tag}_bulk_in_gap"), m.bulk_in_gap as f64, 0.0);
        }
        s.at_most(*c, &format!("{tag}_lower_edge_rel_err"), rel(&m.rel_err_lower), 0.05);
        s.at_most(*c, &format!("{tag}_upper_edge_rel_err"), rel(&m.rel_err_upper), 0.05);
    }
    Ok(())
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<VerifyReport> {
    let mut suite = Suite { tol: cfg.tol, checks: Vec::new() };
    lattice_checks(&mut suite, cfg)?;
    susy_checks(&mut suite, cfg)?;
    spectrum_checks(&mut suite, cfg)?;
    let passed = suite.checks.iter().filter(|c| c.pass).count();
    let report = VerifyReport {
        seed: cfg.seed,
        tol: cfg.tol.map(F17),
        passed,
        failed: suite.checks.len() - passed,
        checks: suite.checks,
    };
    out.json("verify.json", &report)?;
    Ok(report)
}
