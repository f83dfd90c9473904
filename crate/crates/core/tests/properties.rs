//! Invariants of the discretization under random inputs.

use hweno::field::{Boundary1D, Boundary2D, BoundaryKind, MomentField1D, MomentField2D};
use hweno::hweno1d::{interface_linear_weights, linear_interface, linear_internal, moment_linear_weights, nonlinear_weights, Stencil1D};
use hweno::mesh::{Mesh1D, Mesh2D};
use hweno::physics::{Euler1D, Euler2D, ScalarLaw};
use hweno::problems::burgers_implicit;
use hweno::rhs::{Scheme1D, Scheme2D, SchemeMode};
use hweno::timeloop::{run, TimeConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

proptest! {
    #[test]
    fn weights_form_a_partition_of_unity(b in prop::array::uniform3(0.0f64..1e3), eps_exp in -10i32..-2) {
        let eps = 10f64.powi(eps_exp);
        for gamma in [moment_linear_weights::<f64>(), interface_linear_weights::<f64>()] {
            let w = nonlinear_weights(&gamma, &b, eps);
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert!(w.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn equal_smoothness_keeps_linear_weights(b in 0.0f64..1e3) {
        let gamma = interface_linear_weights::<f64>();
        let w = nonlinear_weights(&gamma, &[b; 3], 1e-6);
        for k in 0..3 {
            prop_assert!((w[k] - gamma[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_reconstruction_is_exact_for_quartics(c in prop::array::uniform5(-2.0f64..2.0), h in 0.01f64..1.0) {
        let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
        let mesh = Mesh1D::new(-1.5 * h, 1.5 * h, 3).unwrap();
        let f = MomentField1D::<f64, 1>::init(&mesh, |x| [p(x)]).unwrap();
        let s = Stencil1D::new(
            [0, 1, 2].map(|i| f.avg[mesh.padded(i)][0]),
            [0, 1, 2].map(|i| f.mom_x[mesh.padded(i)][0]),
        );
        let (l, r) = linear_interface(&s);
        let (a, b) = linear_internal(&s);
        let tol = 1e-12 * (1.0 + c.iter().map(|v| v.abs()).sum::<f64>());
        prop_assert!((l - p(-0.5 * h)).abs() < tol);
        prop_assert!((r - p(0.5 * h)).abs() < tol);
        let q = 5f64.sqrt() / 10.0 * h;
        prop_assert!((a - p(-q)).abs() < tol && (b - p(q)).abs() < tol);
    }

    #[test]
    fn burgers_root_has_tiny_residual(a in -20.0f64..20.0, b in 0.0f64..0.999) {
        let u = burgers_implicit(a, b).unwrap();
        prop_assert!((u - 0.5 - (a - b * u).sin()).abs() <= 1e-14);
    }

    #[test]
    fn mesh_index_round_trip(nx in 3usize..30, ny in 3usize..30, i in -2isize..32, j in -2isize..32) {
        let mesh = Mesh2D::new(0.0, 1.0, 0.0, 2.0, nx, ny).unwrap();
        prop_assume!(i < nx as isize + 2 && j < ny as isize + 2);
        prop_assert_eq!(mesh.ij(mesh.idx(i, j)), (i, j));
    }
}

#[test]
fn burgers_root_residual_on_a_dense_sample() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..10_000 {
        let (x, t) = (rng.random_range(0.0..2.0), rng.random_range(0.0..0.3));
        let (a, b) = (std::f64::consts::PI * x, std::f64::consts::PI * t);
        let u = burgers_implicit(a, b).unwrap();
        assert!((u - 0.5 - (a - b * u).sin()).abs() <= 1e-14);
    }
}

fn max_dev<const N: usize>(a: &[[f64; N]], b: &[f64; N]) -> f64 {
    a.iter().flat_map(|u| (0..N).map(move |k| (u[k] - b[k]).abs())).fold(0.0, f64::max)
}

#[test]
fn uniform_state_is_preserved_in_1d() {
    let state = [1.3, 0.0, 2.0 / 0.4];
    for mode in SchemeMode::ALL {
        for bc in [BoundaryKind::Periodic, BoundaryKind::Outflow, BoundaryKind::Reflective] {
            let label = format!("{bc:?}");
            let mesh = Mesh1D::new(0.0, 1.0, 40).unwrap();
            let mut f = MomentField1D::init(&mesh, |_| state).unwrap();
            let mut scheme = Scheme1D::new(mesh.clone(), Euler1D::default(), Boundary1D::uniform(bc), mode).unwrap();
            // the unlimited linear scheme is stable up to CFL ≈ 0.56
            let mut cfg = TimeConfig::new(0.5, 1.0);
            cfg.max_steps = 100;
            let stats = run(&mut scheme, &mut f, 0.0, &cfg);
            assert!(stats.is_err() || stats.unwrap().steps <= 100);
            let n = mesh.n;
            let inner = &f.avg[mesh.padded(0)..mesh.padded(0) + n];
            assert!(max_dev(inner, &state) < 1e-13, "{mode} {label} avg drift {}", max_dev(inner, &state));
            let moms = &f.mom_x[mesh.padded(0)..mesh.padded(0) + n];
            assert!(max_dev(moms, &[0.0; 3]) < 1e-13, "{mode} moment drift");
        }
    }
}

#[test]
fn uniform_state_is_preserved_in_2d() {
    let state = [1.3, 0.0, 0.0, 2.0 / 0.4];
    for mode in SchemeMode::ALL {
        for bc in [BoundaryKind::Periodic, BoundaryKind::Reflective] {
            let mesh = Mesh2D::new(0.0, 1.0, 0.0, 1.0, 12, 10).unwrap();
            let mut f = MomentField2D::init(&mesh, |_, _| state).unwrap();
            let mut scheme = Scheme2D::new(mesh.clone(), Euler2D::default(), Boundary2D::uniform(bc), mode).unwrap();
            let mut cfg = TimeConfig::two_d(1.0);
            cfg.max_steps = 20;
            let _ = run(&mut scheme, &mut f, 0.0, &cfg);
            for j in 0..mesh.ny as isize {
                for i in 0..mesh.nx as isize {
                    let p = mesh.idx(i, j);
                    assert!(max_dev(&[f.avg[p]], &state) < 1e-13, "{mode} ({i},{j})");
                    assert!(max_dev(&[f.mom_x[p], f.mom_y[p]], &[0.0; 4]) < 1e-13);
                }
            }
        }
    }
}

#[test]
fn roundoff_stays_bounded_inside_the_linear_stability_limit() {
    let mesh = Mesh1D::new(0.0, 1.0, 40).unwrap();
    let mut f = MomentField1D::<f64, 3>::init(&mesh, |x| [1.3 + 1e-12 * (37.0 * x * x).sin(), 0.0, 5.0]).unwrap();
    let mut scheme = Scheme1D::new(mesh.clone(), Euler1D::default(), Boundary1D::uniform(BoundaryKind::Reflective), SchemeMode::Hybrid).unwrap();
    let mut cfg = TimeConfig::new(0.5, 1e3);
    cfg.max_steps = 2000;
    let stats = run(&mut scheme, &mut f, 0.0, &cfg).unwrap_err().stats;
    assert_eq!(stats.steps, 2000);
    assert_eq!(stats.mean_troubled_fraction(), 0.0);
    let inner = &f.avg[mesh.padded(0)..mesh.padded(0) + mesh.n];
    assert!(max_dev(inner, &[1.3, 0.0, 5.0]) < 2e-12);
}

fn random_profile(seed: u64) -> impl Fn(f64) -> f64 {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let terms: Vec<(f64, f64)> = (1..=4).map(|k| (rng.random_range(-0.3..0.3) / k as f64, rng.random_range(0.0..6.3))).collect();
    move |x| {
        0.4 + terms
            .iter()
            .enumerate()
            .map(|(k, (a, ph))| a * (2.0 * std::f64::consts::PI * (k + 1) as f64 * x + ph).sin())
            .sum::<f64>()
    }
}

#[test]
fn periodic_runs_conserve_totals() {
    // without a limiter the run must stop before the shock forms
    for (seed, mode, t_end) in [(1, SchemeMode::Hybrid, 0.5), (2, SchemeMode::LimitAll, 0.5), (3, SchemeMode::LinearUnlimited, 0.05)] {
        let g = random_profile(seed);
        let mesh = Mesh1D::new(0.0, 1.0, 64).unwrap();
        let mut f = MomentField1D::init(&mesh, |x| [g(x)]).unwrap();
        let before = f.conserved_totals(&mesh)[0];
        let mut scheme = Scheme1D::new(mesh.clone(), ScalarLaw::Burgers, Boundary1D::uniform(BoundaryKind::Periodic), mode).unwrap();
        run(&mut scheme, &mut f, 0.0, &TimeConfig::one_d(t_end)).unwrap();
        let after = f.conserved_totals(&mesh)[0];
        assert!((after - before).abs() < 1e-13, "{mode}: {before} -> {after}");
    }
    let (gx, gy) = (random_profile(4), random_profile(5));
    let mesh = Mesh2D::new(0.0, 1.0, 0.0, 1.0, 16, 16).unwrap();
    let init = |x: f64, y: f64| {
        let rho = 1.0 + 0.3 * gx(x) * gy(y);
        [rho, rho * 0.5, -rho * 0.2, 2.5 + 0.5 * rho * 0.29]
    };
    let mut f = MomentField2D::init(&mesh, init).unwrap();
    let before = f.conserved_totals(&mesh);
    let mut scheme = Scheme2D::new(mesh.clone(), Euler2D::default(), Boundary2D::uniform(BoundaryKind::Periodic), SchemeMode::Hybrid).unwrap();
    run(&mut scheme, &mut f, 0.0, &TimeConfig::two_d(0.2)).unwrap();
    let after = f.conserved_totals(&mesh);
    for k in 0..4 {
        assert!((after[k] - before[k]).abs() < 1e-13, "component {k}");
    }
}

#[test]
fn transpose_symmetry_is_preserved() {
    let g = random_profile(9);
    let mesh = Mesh2D::new(0.0, 1.0, 0.0, 1.0, 14, 14).unwrap();
    let u0 = |x: f64, y: f64| [g(x) + g(y) + 0.5 * (g(x) - 0.4) * (g(y) - 0.4) + 0.2 * (x + y - 1.0)];
    for mode in SchemeMode::ALL {
        let mut f = MomentField2D::init(&mesh, u0).unwrap();
        let mut scheme = Scheme2D::new(mesh.clone(), ScalarLaw::Burgers, Boundary2D::uniform(BoundaryKind::Outflow), mode).unwrap();
        run(&mut scheme, &mut f, 0.0, &TimeConfig::two_d(0.1)).unwrap();
        for j in 0..14 {
            for i in 0..14 {
                let (p, q) = (mesh.idx(i, j), mesh.idx(j, i));
                assert!((f.avg[p][0] - f.avg[q][0]).abs() < 1e-12, "{mode} avg ({i},{j})");
                assert!((f.mom_x[p][0] - f.mom_y[q][0]).abs() < 1e-12, "{mode} moment ({i},{j})");
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let solve = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let g = random_profile(21);
            let mesh = Mesh2D::new(0.0, 1.0, 0.0, 1.0, 40, 40).unwrap();
            let init = |x: f64, y: f64| {
                let rho = 1.0 + 0.5 * g(x) * (y - 0.5).signum();
                [rho, 0.0, 0.0, 2.5 * rho]
            };
            let mut f = MomentField2D::init(&mesh, init).unwrap();
            let mut scheme = Scheme2D::new(mesh, Euler2D::default(), Boundary2D::uniform(BoundaryKind::Reflective), SchemeMode::Hybrid).unwrap();
            let stats = run(&mut scheme, &mut f, 0.0, &TimeConfig::two_d(0.05)).unwrap();
            (f, stats.stages.iter().map(|s| s.flagged_count).collect::<Vec<_>>())
        })
    };
    let (a, fa) = solve(1);
    let (b, fb) = solve(3);
    assert!(fa.iter().any(|&c| c > 0));
    assert_eq!(fa, fb);
    assert_eq!(a, b);
}

#[test]
fn recorded_cells_are_interior_and_match_stage_counts() {
    let mesh = Mesh1D::new(0.0, 2.0, 60).unwrap();
    let mut f = MomentField1D::init(&mesh, |x| [0.5 + (std::f64::consts::PI * x).sin()]).unwrap();
    let mut scheme = Scheme1D::new(mesh, ScalarLaw::Burgers, Boundary1D::uniform(BoundaryKind::Periodic), SchemeMode::Hybrid).unwrap();
    let mut cfg = TimeConfig::one_d(1.5 / std::f64::consts::PI);
    cfg.record_cells = true;
    let stats = run(&mut scheme, &mut f, 0.0, &cfg).unwrap();
    assert_eq!(stats.cells.len(), stats.steps);
    for (k, step) in stats.cells.iter().enumerate() {
        assert_eq!(step.step, k + 1);
        assert!(step.cells.windows(2).all(|w| w[0] < w[1]));
        assert!(step.cells.iter().all(|&(i, j)| i < 60 && j.is_none()));
        let most = stats.stages.iter().filter(|s| s.step == step.step).map(|s| s.flagged_count).max().unwrap();
        assert!(step.cells.len() >= most && step.cells.len() <= 3 * most);
    }
    assert!(stats.cells.iter().any(|s| !s.cells.is_empty()));

    let mesh = Mesh2D::new(0.0, 4.0, 0.0, 1.0, 40, 10).unwrap().with_solid_block(2.0, 0.3).unwrap();
    let mut f = MomentField2D::init(&mesh, |x, _| if x < 1.0 { [2.0, 1.0, 0.0, 5.0] } else { [1.0, 0.0, 0.0, 2.5] }).unwrap();
    let mut scheme = Scheme2D::new(mesh.clone(), Euler2D::default(), Boundary2D::uniform(BoundaryKind::Reflective), SchemeMode::Hybrid).unwrap();
    let mut cfg = TimeConfig::two_d(0.05);
    cfg.record_cells = true;
    let stats = run(&mut scheme, &mut f, 0.0, &cfg).unwrap();
    for step in &stats.cells {
        for &(i, j) in &step.cells {
            let j = j.unwrap();
            assert!(i < 40 && j < 10 && !mesh.is_solid(i as isize, j as isize));
        }
    }
    assert!(stats.cells.iter().all(|s| !s.cells.is_empty()));
}
