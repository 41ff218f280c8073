use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use susychain_core::numcore::*;
use susychain_core::C64;

#[test]
fn bloch_matrix_at_zone_centre() {
    // H(0) of the bare AB chain: E(E² − 4) = 0
    let m = HermitianMatrix::from_real(3, &[0.0, 2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let e = eigh_small(&m).unwrap();
    for (a, b) in e.values.iter().zip([-2.0, 0.0, 2.0]) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn derivative_examples() {
    for n in [21, 41, 81] {
        let g = Grid::symmetric(1.0, n).unwrap();
        let h2 = g.h() * g.h();
        let s: Vec<f64> = g.points().map(f64::sin).collect();
        let d = diff_central(&g, &s).unwrap();
        assert!((d[n / 2] - 1.0).abs() < 0.2 * h2);
        let c = diff_central(&g, &vec![2.5; n]).unwrap();
        assert!(c.iter().all(|&v| v == 0.0));
        let a = 0.1;
        let f: Vec<f64> = g.points().map(|x| (-a * x).exp()).collect();
        let d = diff_central(&g, &f).unwrap();
        for (i, x) in g.points().enumerate() {
            assert!((d[i] + a * (-a * x).exp()).abs() < 0.01 * h2);
        }
    }
}

#[test]
fn integral_examples_and_order() {
    let g = Grid::symmetric(1.0, 11).unwrap();
    let one = integrate_cumulative(&g, &vec![1.0; 11]).unwrap();
    for (i, x) in g.points().enumerate() {
        assert!((one[i] - x).abs() < 1e-15);
    }
    let odd: Vec<f64> = g.points().map(|x| x * x * x - x).collect();
    let s = integrate_cumulative(&g, &odd).unwrap();
    for i in 0..11 {
        assert!((s[i] - s[10 - i]).abs() < 1e-15);
    }
    assert_eq!(s[5], 0.0);

    let errs: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| {
            let g = Grid::symmetric(3.0, n).unwrap();
            let f: Vec<f64> = g.points().map(|x| 1.0 / x.cosh().powi(2)).collect();
            let s = integrate_cumulative(&g, &f).unwrap();
            g.points().zip(&s).map(|(x, v)| (v - x.tanh()).abs()).fold(0.0, f64::max)
        })
        .collect();
    for p in convergence_orders(&errs) {
        assert!(p >= 1.9, "{errs:?}");
    }
}

#[test]
fn derivative_order_complex() {
    let errs: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| {
            let g = Grid::new(-2.0, 1.0, n).unwrap();
            let f: Vec<C64> = g.points().map(|x| C64::new(0.0, 2.0 * x).exp() * (-x * x).exp()).collect();
            let d = diff_central(&g, &f).unwrap();
            g.points()
                .zip(&d)
                .map(|(x, v)| (v - C64::new(-2.0 * x, 2.0) * C64::new(0.0, 2.0 * x).exp() * (-x * x).exp()).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    for p in convergence_orders(&errs) {
        assert!(p >= 1.9, "{errs:?}");
    }
}

#[test]
fn quad_root_examples() {
    assert_eq!(quad_roots(1.0, -3.0, 2.0).unwrap().roots, [Some(1.0), Some(2.0)]);
    assert_eq!(quad_roots(0.0, 2.0, -4.0).unwrap().roots, [Some(2.0), None]);
    let r = quad_roots(1.0, 0.0, 1.0).unwrap();
    assert_eq!((r.count(), r.discriminant), (0, -4.0));
}

proptest! {
    #[test]
    fn quad_roots_substitute_back(p2 in -10.0f64..10.0, p1 in -10.0f64..10.0, p0 in -10.0f64..10.0, e in -6i32..6) {
        let s = 10f64.powi(e);
        let (p2, p1, p0) = (p2 * s, p1, p0 / s);
        prop_assume!(p2 != 0.0 || p1 != 0.0 || p0 != 0.0);
        let r = quad_roots(p2, p1, p0).unwrap();
        let scale = p2.abs().max(p1.abs()).max(p0.abs());
        let roots: Vec<f64> = r.iter().collect();
        for w in roots.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for y in roots {
            let val = (p2 * y + p1) * y + p0;
            prop_assert!(val.abs() <= 1e-10 * scale * (1.0 + y * y), "y={y} p={val}");
        }
    }

    #[test]
    fn small_eigensolver_contract(seed in 0u64..10_000, n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = || rng.random_range(-1.0..1.0);
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = C64::new(next(), 0.0);
            for j in 0..i {
                let z = C64::new(next(), next());
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        let m = HermitianMatrix::from_fn(n, |i, j| data[i * n + j]).unwrap();
        let e = eigh_small(&m).unwrap();
        prop_assert!(m.residual(&e) <= 1e-12 * m.norm_inf().max(1e-300));
    }
}
