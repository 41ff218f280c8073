use susychain_core::lattice::{build_finite_chain, chain_spectrum};
use susychain_core::models::{
    analytic_spectrum, model1_spectrum, model2_thresholds, sample_chain_profile, validate_params, CSiteRule, ModelKind,
    ModelParams, Provenance,
};
use susychain_core::numcore::Grid;
use susychain_core::spectrum::SpectrumOptions;
use susychain_core::susy::{assemble_frame, transformed_potential, Xi1Rule, Xi2};

const MS: [f64; 5] = [0.05, 0.07, 0.1, 0.13, 0.16];

fn admissible_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for m in MS {
        for f in [-1.5, -0.75, 0.0, 0.4, 0.8] {
            out.push(ModelParams::model1(m, f * m).unwrap());
        }
        for f in [-1.2, -0.6, 0.0, 0.6, 1.2] {
            out.push(ModelParams::model2(m, f * m).unwrap());
        }
    }
    out
}

#[test]
fn closed_forms_match_the_darboux_pipeline() {
    let g = Grid::symmetric(20.0, 801).unwrap();
    for p in admissible_grid() {
        let f = assemble_frame(&p.to_seed().unwrap(), &g, &Xi2::Cosh, Xi1Rule::Hermitize).unwrap();
        let diff = transformed_potential(&f).unwrap().max_difference(&p.sample(&g));
        assert!(diff <= 1e-8, "{p:?}: {diff}");
    }
}

#[test]
fn closed_form_shapes_with_cosh() {
    // the shapes written with cosh 2κx instead of sech
    for p in admissible_grid() {
        let (m, l, k) = (p.m, p.lambda, p.kappa);
        for x in [-7.0, -1.3, 0.0, 0.4, 5.0] {
            let c = (2.0 * k * x).cosh();
            let v = p.potential(x);
            let (v13, v23) = match p.kind {
                ModelKind::I => {
                    let d = 4.0 * m + (2.0 * m - l) * c;
                    ((m * (2.0 * m + l)).sqrt() * k / d, k * k / d)
                }
                ModelKind::II => {
                    let w = (m - l) * k * k / ((2.0 * m - l).powi(2) + 2.0 * (m - l).powi(2) * c);
                    (w, w)
                }
            };
            assert!((v.v13 - v13).abs() < 1e-14 && (v.v23 - v23).abs() < 1e-14);
            if p.kind == ModelKind::I {
                let a = (m * (m - l)).sqrt();
                let s = 1.0 / c;
                let v12 = -l * (2.0 * a * (1.0 + s) - k * (2.0 * k * x).tanh()) / (2.0 * m - l + 4.0 * m * s);
                assert!((v.v12 - v12).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn model1_examples() {
    let p = ModelParams::model1(0.07, 0.0).unwrap();
    let v = p.potential(0.0);
    assert!((v.v13 - 0.07 / 3.0).abs() < 1e-15 && (v.v23 - 0.07 / 3.0).abs() < 1e-15);
    assert!((v.v11 + 2.0 * 0.07 / 3.0).abs() < 1e-15);
    for x in [-30.0, -2.0, 0.5, 11.0] {
        let v = p.potential(x);
        assert_eq!(v.v12, 0.0);
        assert_eq!(v.v13, v.v23);
    }
    let s = model1_spectrum(&p).unwrap();
    assert!((s.upper - 0.098_994_949_366_116_66).abs() < 1e-15 && s.flat == 0.0);
    assert_eq!(s.provenance, Provenance::Published);
}

#[test]
fn model2_examples() {
    let p = ModelParams::model2(0.03, 0.0).unwrap();
    assert!((p.potential(0.0).v13 - 0.01).abs() < 1e-15);
    let t = model2_thresholds(&p).unwrap();
    assert!((t.upper - 0.042_426_406_871_192_85).abs() < 1e-15);
    assert_eq!(t.provenance, Provenance::Derived);
    for l in [-0.04, -0.015, 0.0, 0.015, 0.02] {
        let p = ModelParams::model2(0.03, l).unwrap();
        assert_eq!(model2_thresholds(&p).unwrap().upper, t.upper);
        for x in [-9.0, 0.0, 3.0] {
            let v = p.potential(x);
            assert_eq!(v.v13, v.v23);
            assert_eq!(v.v12, -l);
        }
    }
    let k = ModelParams::model2(0.03, 0.015).unwrap().kappa;
    assert!((ModelParams::model2(0.03, 0.015).unwrap().potential(40.0 / k).v11 + k).abs() < 1e-12);
    assert!((ModelParams::model2(0.03, 0.015).unwrap().potential(-40.0 / k).v11 - k).abs() < 1e-12);
}

#[test]
fn asymptotic_limits() {
    for p in admissible_grid() {
        for sign in [1.0, -1.0] {
            let v = p.potential(sign * 12.0 / p.kappa);
            let c = p.asymptotic_cell(sign);
            let d = [(v.v11, c.v11), (v.v12, c.v12), (v.v13, 0.0), (v.v23, 0.0)];
            assert!(d.iter().all(|(a, b)| (a - b).abs() <= 1e-8), "{p:?} {sign}: {d:?}");
        }
    }
}

#[test]
fn denominators_stay_positive() {
    for p in admissible_grid() {
        let (m, l, k) = (p.m, p.lambda, p.kappa);
        let scale = m * m;
        for i in 0..=2000 {
            let x = -40.0 + 0.04 * i as f64;
            let s = 1.0 / (2.0 * k * x).cosh();
            let dens: Vec<f64> = match p.kind {
                ModelKind::I => vec![2.0 * m - l + 4.0 * m * s, 4.0 * m * s + 2.0 * m - l],
                ModelKind::II => vec![(2.0 * m - l).powi(2) * s + 2.0 * (m - l).powi(2)],
            };
            assert!(dens.iter().all(|d| *d > 1e-12 * scale), "{p:?} at {x}");
            let v = p.potential(x);
            assert!(v.is_finite());
        }
    }
}

#[test]
fn spectrum_identity_across_the_grid() {
    for p in admissible_grid() {
        let s = analytic_spectrum(&p).unwrap();
        assert!(s.identity_residual <= 1e-12, "{p:?}: {}", s.identity_residual);
        if p.kind == ModelKind::I {
            // the flat band lies strictly inside the gap
            assert!(p.lambda.abs() < s.upper);
        }
    }
}

#[test]
fn window_violations_are_named() {
    assert!(validate_params(&ModelParams::unchecked(ModelKind::I, 0.07, 0.0)).is_empty());
    let v = validate_params(&ModelParams::unchecked(ModelKind::I, 0.07, -0.14));
    assert_eq!(v[0].condition, "−2m < λ");
    let v = validate_params(&ModelParams::unchecked(ModelKind::II, 0.07, 1.5 * 0.07));
    assert_eq!(v[0].condition, "λ² < 2m²");
    assert!(ModelParams::model1(0.07, 0.07).is_err());
    assert!(ModelParams::model1(-0.07, 0.0).is_err());
    assert!(ModelParams::model2(0.07, 0.07).is_err());
}

#[test]
fn chain_profiles() {
    let p = ModelParams::model1(0.07, 0.0).unwrap();
    let prof = sample_chain_profile(&p, 400, -200.0, 200.0, CSiteRule::Bare).unwrap();
    assert!(prof.t_ab.iter().zip(&prof.t_ab_tilde).all(|(a, b)| a == b));
    assert!(prof.t_cc.iter().all(|&c| c == 0.0));
    for n in [0, 1, 398, 399] {
        assert!(prof.t_ac[n] < 1e-10 && prof.t_bc[n] < 1e-10);
    }
    let q = ModelParams::model2(0.03, 0.015).unwrap();
    let prof = sample_chain_profile(&q, 100, -100.0, 100.0, CSiteRule::Bare).unwrap();
    assert!(prof.t_ab.iter().zip(&prof.t_ab_tilde).all(|(a, b)| (a - b + 0.015).abs() < 1e-14));
    assert!(sample_chain_profile(&q, 1, -1.0, 1.0, CSiteRule::Bare).is_err());
}

#[test]
fn model1_chain_tracks_lambda() {
    for l in [-0.03, 0.0, 0.03] {
        let p = ModelParams::model1(0.07, l).unwrap();
        let chain = build_finite_chain(&sample_chain_profile(&p, 200, -100.0, 100.0, CSiteRule::LocalFlatBand).unwrap()).unwrap();
        let r = chain_spectrum(&chain, &SpectrumOptions { target: Some(l), ..Default::default() }).unwrap();
        assert!(r.cluster_count >= 180, "λ = {l}: {}", r.cluster_count);
    }
}
