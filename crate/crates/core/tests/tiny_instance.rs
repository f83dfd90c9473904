//! Full 1D operator on six periodic cells against the oracle transcription.

use hweno::field::{Boundary1D, BoundaryKind, MomentField1D};
use hweno::indicator::TroubledMask;
use hweno::mesh::{Mesh1D, N_GHOST};
use hweno::physics::ScalarLaw;
use hweno::rhs::{PhaseTimings, Scheme1D, SchemeMode};
use hweno_oracle::max_abs_diff;
use hweno_oracle::tiny::burgers_rhs;
use rand::{Rng, SeedableRng};

const N: usize = 6;

fn random_field(seed: u64) -> (Mesh1D<f64>, MomentField1D<f64, 1>) {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mesh = Mesh1D::new(0.0, 1.0, N).unwrap();
    let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.4..0.4));
    let b: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.4..0.4));
    let c0 = rng.random_range(-1.0..1.0);
    let tau = std::f64::consts::TAU;
    let f = MomentField1D::init(&mesh, |x| {
        let mut u = c0;
        for k in 0..3 {
            let w = tau * (k + 1) as f64 * x;
            u += a[k] * w.sin() + b[k] * w.cos();
        }
        [u]
    })
    .unwrap();
    (mesh, f)
}

fn compare(mode: SchemeMode, flagged: bool, seed: u64) {
    let (mesh, mut field) = random_field(seed);
    let avg: Vec<f64> = (0..N).map(|i| field.avg[i + N_GHOST][0]).collect();
    let mom: Vec<f64> = (0..N).map(|i| field.mom_x[i + N_GHOST][0]).collect();
    let limit = mode == SchemeMode::LimitAll || (mode == SchemeMode::Hybrid && flagged);
    let nonlinear = mode != SchemeMode::Hybrid || flagged;
    let oracle = burgers_rhs(&avg, &mom, mesh.dx, limit, nonlinear, hweno::hweno1d::EPSILON);

    let mut scheme = Scheme1D::new(mesh.clone(), ScalarLaw::Burgers, Boundary1D::uniform(BoundaryKind::Periodic), mode).unwrap();
    scheme.apply_boundary(&mut field, 0.0);
    let mask = TroubledMask::uniform(mesh.n_padded(), N, flagged);
    let mut out = MomentField1D::zeros(&mesh);
    scheme.compute_rhs(&mut field, &mask, 0.0, &mut out, &mut PhaseTimings::default()).unwrap();

    let du: Vec<f64> = (0..N).map(|i| out.avg[i + N_GHOST][0]).collect();
    let dv: Vec<f64> = (0..N).map(|i| out.mom_x[i + N_GHOST][0]).collect();
    let lim: Vec<f64> = (0..N).map(|i| field.mom_x[i + N_GHOST][0]).collect();
    let traces: Vec<f64> = (0..N).flat_map(|i| *scheme.traces(i)).map(|t| t[0]).collect();
    let oracle_traces: Vec<f64> = oracle.traces.iter().flatten().copied().collect();
    let parts = [
        ("limited moments", max_abs_diff(&lim, &oracle.moments)),
        ("traces", max_abs_diff(&traces, &oracle_traces)),
        ("d avg", max_abs_diff(&du, &oracle.d_avg)),
        ("d mom", max_abs_diff(&dv, &oracle.d_mom)),
    ];
    let worst = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    assert!(worst <= 1e-11, "{mode} seed {seed}: {parts:?}");
}

#[test]
fn smooth_data_linear_everywhere() {
    for seed in 0..20 {
        compare(SchemeMode::Hybrid, false, seed);
    }
}

#[test]
fn unlimited_moments_with_nonlinear_interfaces() {
    for seed in 0..20 {
        compare(SchemeMode::LinearUnlimited, false, seed);
    }
}

#[test]
fn flagged_everywhere_limit_all() {
    for seed in 0..20 {
        compare(SchemeMode::LimitAll, true, seed);
        compare(SchemeMode::Hybrid, true, seed);
    }
}

#[test]
fn constant_data_gives_zero_in_both() {
    let mesh = Mesh1D::new(0.0, 1.0, N).unwrap();
    for (mode, flagged) in [(SchemeMode::Hybrid, false), (SchemeMode::LimitAll, true)] {
        let mut f = MomentField1D::<f64, 1>::init(&mesh, |_| [0.3]).unwrap();
        let mut s = Scheme1D::new(mesh.clone(), ScalarLaw::Burgers, Boundary1D::uniform(BoundaryKind::Periodic), mode).unwrap();
        s.apply_boundary(&mut f, 0.0);
        let mut out = MomentField1D::zeros(&mesh);
        s.compute_rhs(&mut f, &TroubledMask::uniform(mesh.n_padded(), N, flagged), 0.0, &mut out, &mut PhaseTimings::default())
            .unwrap();
        assert!(out.avg.iter().chain(&out.mom_x).all(|v| v[0].abs() < 1e-14));
        let o = burgers_rhs(&[0.3; N], &[0.0; N], mesh.dx, flagged, flagged, 1e-6);
        assert!(o.d_avg.iter().chain(&o.d_mom).all(|v| v.abs() < 1e-14));
    }
}
