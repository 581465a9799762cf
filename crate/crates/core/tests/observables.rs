use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64 as C64;
use quasirect::fock::{analytic_to_fock, fock_coherent_projection, fock_position_amplitude, FockSpace, TruncationPolicy};
use quasirect::gaussian::{SqueezeParameter, SqueezedComponent, SuperpositionState};
use quasirect::observables::{
    flatness_report, husimi_q, position_density, PhaseSpaceGrid, PositionGrid,
};
use quasirect::protocol::{build_superposition, dyadic_schedule};
use quasirect::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

fn sq(r: f64) -> SqueezeParameter {
    SqueezeParameter::new(r).unwrap()
}

fn protocol_state(p: usize, tau: f64, r: f64) -> SuperpositionState {
    build_superposition(&dyadic_schedule(p, tau).unwrap(), sq(r)).unwrap()
}

#[test]
fn gaussian_ripple_matches_normal_quantiles() {
    // vacuum density is N(0, 1/2)
    let vac = SuperpositionState::new(vec![SqueezedComponent::real(0.0, 1.0)], sq(0.0)).unwrap();
    let d = position_density(&vac, &PositionGrid::new(-6.0, 6.0, 1201).unwrap(), Exec::Parallel).unwrap();
    let f = flatness_report(&d, 0.8).unwrap();
    let sigma = 0.5f64.sqrt();
    let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.9);
    let half = z * sigma;
    let peak = 1.0 / (sigma * (2.0 * PI).sqrt());
    let edge = peak * (-0.5 * z * z).exp();
    let mean = 0.8 / (2.0 * half);
    let expected = (peak - edge) / mean;
    assert_relative_eq!(f.plateau_window.1, half, epsilon = 1e-4);
    assert_relative_eq!(f.ripple, expected, epsilon = 1e-4);
    assert_relative_eq!(f.plateau_mass, 0.8, epsilon = 1e-6);
}

#[test]
fn densities_normalize_on_auto_grids() {
    for (p, tau, r) in [(1, 1.0, 0.0), (3, 0.4, 0.5), (4, 4.0 * (-2.0f64).exp(), 2.0), (4, 0.5 * (-3.0f64).exp(), 3.0)] {
        let st = protocol_state(p, tau, r);
        let d = position_density(&st, &PositionGrid::auto(&st), Exec::Parallel).unwrap();
        assert!((d.integral_estimate - 1.0).abs() < 1e-6, "P={p} tau={tau} r={r}: {}", d.integral_estimate);
        assert!(d.values.iter().all(|v| *v >= 0.0));
        let q = husimi_q(&st, &PhaseSpaceGrid::auto(&st), Exec::Parallel).unwrap();
        assert!((q.integral_estimate - 1.0).abs() < 1e-5, "Q P={p} tau={tau} r={r}: {}", q.integral_estimate);
        assert!(q.values.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn squeezed_husimi_is_normalized() {
    let st = SuperpositionState::new(vec![SqueezedComponent::real(0.0, 1.0)], sq(1.0)).unwrap();
    let q = husimi_q(&st, &PhaseSpaceGrid::auto(&st), Exec::Parallel).unwrap();
    assert_relative_eq!(q.integral_estimate, 1.0, epsilon = 1e-6);
}

#[test]
fn analytic_observables_match_fock_oracle() {
    let space = FockSpace::new(TruncationPolicy::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let states = [
        SuperpositionState::new(vec![SqueezedComponent::real(0.0, 1.0)], sq(1.0)).unwrap(),
        protocol_state(2, 0.5, 0.5),
        protocol_state(3, 0.3, 1.0),
        protocol_state(4, 0.5 * (-1.0f64).exp(), 1.0),
    ];
    for st in &states {
        let v = analytic_to_fock(st, &space).unwrap();
        let pg = PositionGrid::auto(st);
        for _ in 0..20 {
            let x = rng.gen_range(pg.x_min..pg.x_max);
            let analytic = st.wavefunction(x).norm_sqr();
            let oracle = fock_position_amplitude(&v, x).norm_sqr();
            assert!((analytic - oracle).abs() < 1e-7, "x={x}");
            let beta = C64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let analytic = st.coherent_projection(beta).norm_sqr() / PI;
            let oracle = fock_coherent_projection(&v, beta).norm_sqr() / PI;
            assert!((analytic - oracle).abs() < 1e-7, "beta={beta}");
        }
    }
}

#[test]
fn protocol_densities_are_even() {
    for (p, tau, r) in [(2, 0.7, 0.0), (4, 4.0 * (-3.0f64).exp(), 3.0), (4, 0.5 * (-1.0f64).exp(), 1.0)] {
        let st = protocol_state(p, tau, r);
        let g = PositionGrid::auto(&st);
        let d = position_density(&st, &g, Exec::Parallel).unwrap();
        let n = d.values.len();
        for i in 0..n / 2 {
            let (a, b) = (d.values[i], d.values[n - 1 - i]);
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "i={i}");
        }
    }
}

#[test]
fn small_tau_flattens_the_plateau() {
    let r = 3.0f64;
    let flat = protocol_state(4, 0.5 * (-r).exp(), r);
    let wavy = protocol_state(4, 4.0 * (-r).exp(), r);
    let rf = flatness_report(&position_density(&flat, &PositionGrid::auto(&flat), Exec::Parallel).unwrap(), 0.8)
        .unwrap();
    let rw = flatness_report(&position_density(&wavy, &PositionGrid::auto(&wavy), Exec::Parallel).unwrap(), 0.8)
        .unwrap();
    eprintln!("ripple flat={} wavy={}", rf.ripple, rw.ripple);
    assert!(rf.ripple < rw.ripple);
}
