use rayon::prelude::*;
use serde::Serialize;
use susychain_core::numcore::{convergence_orders, Grid};
use susychain_core::susy::{
    assemble_frame, commutator_potential, intertwining_order, inverse_dagger_states, transformed_potential, SeedData,
    Spinor, TransformationFrame, Xi1Rule, Xi2,
};
use susychain_core::C64;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{f17s, fmt17, OutDir, F17};

pub const CSV_HEADER: [&str; 5] = ["x", "v11", "v12", "v13", "v23"];

/// Smooth, well-localized spinors used to probe the intertwining relation.
pub fn test_spinors() -> [fn(f64) -> Spinor; 3] {
    fn gauss(x: f64) -> Spinor {
        let e = (-x * x / 8.0).exp();
        [C64::new(e, 0.0), C64::new(0.0, 0.5 * e), C64::new(0.2 * e, 0.0)]
    }
    fn shifted(x: f64) -> Spinor {
        let e = (-(x - 1.0) * (x - 1.0) / 4.0).exp();
        [C64::new(0.0, x * e), C64::new(e, 0.0), C64::new(-e, e)]
    }
    fn boosted(x: f64) -> Spinor {
        let e = (-x * x / 10.0).exp();
        let ph = C64::from_polar(e, 0.8 * x);
        [ph, ph * 0.3, ph * -0.6]
    }
    [gauss, shifted, boosted]
}

/// Largest `‖Ṽ − Ṽ†‖∞ / (1 + ‖Ṽ‖∞)` over the grid.
pub fn hermiticity(frame: &TransformationFrame) -> CliResult<f64> {
    Ok(commutator_potential(frame)?.iter().map(|v| v.hermitian_defect() / (1.0 + v.norm_inf())).fold(0.0, f64::max))
}

/// Same measure with `ξ₁ = ξ₂`, which breaks Hermiticity when `ε ≠ λ`.
pub fn hermiticity_control(seed: &SeedData, grid: &Grid) -> CliResult<f64> {
    let f = assemble_frame(seed, grid, &Xi2::Cosh, Xi1Rule::Multiple(1.0))?;
    Ok(commutator_potential(&f)?.iter().map(|v| v.hermitian_defect()).fold(0.0, f64::max))
}

pub fn dual_path_difference(frame: &TransformationFrame) -> CliResult<f64> {
    let closed = transformed_potential(frame)?;
    let comm = commutator_potential(frame)?;
    Ok(comm.iter().enumerate().map(|(i, v)| (closed.matrix(i) - *v).max_abs()).fold(0.0, f64::max))
}

/// `max_x ‖(H − E)·column‖` on each grid of the ladder.
pub fn column_residual_ladder(seed: &SeedData, grids: &[Grid]) -> CliResult<Vec<f64>> {
    grids
        .par_iter()
        .map(|g| Ok(assemble_frame(seed, g, &Xi2::Cosh, Xi1Rule::Hermitize)?.column_residuals()?.max_absolute()))
        .collect()
}

/// `(H̃ − E)` residual of each `(U⁻¹)†` column on each grid of the ladder.
pub fn dagger_residual_ladder(seed: &SeedData, grids: &[Grid]) -> CliResult<Vec<[f64; 3]>> {
    grids
        .par_iter()
        .map(|g| {
            let f = assemble_frame(seed, g, &Xi2::Cosh, Xi1Rule::Hermitize)?;
            let vt = commutator_potential(&f)?;
            Ok(inverse_dagger_states(&f, &vt)?.map(|d| d.residual))
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Ladder {
    pub points: Vec<usize>,
    pub residuals: Vec<F17>,
    pub orders: Vec<F17>,
}

impl Ladder {
    pub fn new(grids: &[Grid], residuals: &[f64]) -> Self {
        Self {
            points: grids.iter().map(|g| g.len()).collect(),
            residuals: f17s(residuals),
            orders: f17s(&convergence_orders(residuals)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DaggerReport {
    pub energy: F17,
    pub residuals: Ladder,
    pub l2_mass: F17,
    pub decay_left: F17,
    pub decay_right: F17,
}

#[derive(Debug, Serialize)]
pub struct SeedReport {
    pub m: F17,
    pub v: F17,
    pub a_gauge: F17,
    pub lambda: F17,
    pub epsilon: F17,
    pub c0: F17,
    pub c1: F17,
    pub w0: F17,
}

#[derive(Debug, Serialize)]
pub struct SusyReport {
    pub model: &'static str,
    pub seed: SeedReport,
    pub half_width: F17,
    pub points: usize,
    pub min_relative_det: F17,
    pub min_relative_det_x: F17,
    pub near_singular: bool,
    pub hermiticity_max_asymmetry: F17,
    pub hermiticity_control_asymmetry: Option<F17>,
    pub w0_relative_stdev: F17,
    pub dual_path_max_diff: F17,
    pub model_oracle_max_diff: Option<F17>,
    pub column_residuals: Ladder,
    pub intertwining: Vec<Ladder>,
    pub kernel_max_residual: F17,
    pub dagger_states: Vec<DaggerReport>,
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<SusyReport> {
    let seed = cfg.model.seed()?;
    let model = cfg.model.model()?;
    let grid = cfg.grid.grid()?;
    let ladder = cfg.grid.ladder()?;
    let frame = assemble_frame(&seed, &grid, &Xi2::Cosh, Xi1Rule::Hermitize)?;
    let pot = transformed_potential(&frame)?;
    out.csv(
        "potential.csv",
        &CSV_HEADER,
        (0..pot.len()).map(|i| vec![fmt17(pot.x[i]), fmt17(pot.v11[i]), fmt17(pot.v12[i]), fmt17(pot.v13[i]), fmt17(pot.v23[i])]),
    )?;

    let (det_x, det_min) = frame.min_relative_det();
    let control = if seed.epsilon != seed.lambda { Some(F17(hermiticity_control(&seed, &grid)?)) } else { None };
    let oracle = model.map(|p| F17(pot.max_difference(&p.sample(&grid))));
    let columns = column_residual_ladder(&seed, &ladder)?;
    let intertwining = test_spinors()
        .par_iter()
        .map(|f| {
            let r = intertwining_order(&seed, &ladder, f)?;
            Ok(Ladder::new(&ladder, &r.residuals))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let kernel = frame
        .columns()
        .iter()
        .map(|col| {
            let lc = susychain_core::susy::apply_darboux(&frame, col)?;
            let scale = col.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
            Ok(lc.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max) / scale)
        })
        .collect::<CliResult<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let vt = commutator_potential(&frame)?;
    let dagger = inverse_dagger_states(&frame, &vt)?;
    let dagger_ladder = dagger_residual_ladder(&seed, &ladder)?;
    let dagger_states = dagger
        .iter()
        .enumerate()
        .map(|(j, d)| DaggerReport {
            energy: F17(d.energy),
            residuals: Ladder::new(&ladder, &dagger_ladder.iter().map(|r| r[j]).collect::<Vec<_>>()),
            l2_mass: F17(d.l2_mass),
            decay_left: F17(d.decay_left),
            decay_right: F17(d.decay_right),
        })
        .collect();

    let report = SusyReport {
        model: match model {
            Some(p) => p.kind.as_str(),
            None => "custom",
        },
        seed: SeedReport {
            m: F17(seed.m),
            v: F17(seed.v),
            a_gauge: F17(seed.a_gauge),
            lambda: F17(seed.lambda),
            epsilon: F17(seed.epsilon),
            c0: F17(seed.c0),
            c1: F17(seed.c1),
            w0: F17(seed.w0),
        },
        half_width: F17(cfg.grid.half_width),
        points: grid.len(),
        min_relative_det: F17(det_min),
        min_relative_det_x: F17(det_x),
        near_singular: frame.near_singular(),
        hermiticity_max_asymmetry: F17(hermiticity(&frame)?),
        hermiticity_control_asymmetry: control,
        w0_relative_stdev: F17(frame.wronskian_relative_stdev()),
        dual_path_max_diff: F17(dual_path_difference(&frame)?),
        model_oracle_max_diff: oracle,
        column_residuals: Ladder::new(&ladder, &columns),
        intertwining,
        kernel_max_residual: F17(kernel),
        dagger_states,
    };
    out.json("susy.json", &report)?;
    Ok(report)
}
