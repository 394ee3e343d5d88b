//! Crossover regimes across dimension, phase correlation and model.

use qudit_memory::crossover::{delta_i, find_crossover, DEFAULT_GRID_N, DEFAULT_TOL};
use qudit_memory::{sweep_crossover, ChannelSpec, Model, Parity};

fn mu_c(model: Model, d: usize, eta: f64, nu: f64) -> Option<f64> {
    let spec = ChannelSpec::new(model, d, eta, 0.0, nu).unwrap();
    find_crossover(&spec, DEFAULT_GRID_N, DEFAULT_TOL).unwrap().mu_c
}

#[test]
fn anticorrelated_phases_ignore_parity() {
    let values: Vec<f64> = (2..=9).map(|d| mu_c(Model::Qd, d, 0.8, 1.0).unwrap()).collect();
    // monotone over d, so odd and even dimensions interleave smoothly
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn correlated_phases_split_by_parity() {
    let rows = sweep_crossover(Model::Qd, &[2, 3, 4, 5, 6, 7], &[0.8], &[0.0], DEFAULT_GRID_N, DEFAULT_TOL).unwrap();
    for r in rows {
        assert!(r.error.is_none());
        match r.parity {
            Parity::Even => assert!(r.mu_c.is_some(), "d = {}", r.d),
            Parity::Odd => assert!(r.mu_c.is_none(), "d = {}", r.d),
        }
    }
}

#[test]
fn qcd_odd_dimensions_never_cross_for_partial_correlation() {
    for d in [3, 5] {
        assert_eq!(mu_c(Model::Qcd, d, 0.3, 0.3), None);
    }
}

#[test]
fn bisection_brackets_the_root() {
    for (model, d, eta, nu) in [(Model::Qd, 2, 0.8, 0.0), (Model::Qd, 5, 0.8, 1.0), (Model::Qcd, 4, 0.3, 0.0)] {
        let spec = ChannelSpec::new(model, d, eta, 0.0, nu).unwrap();
        let r = find_crossover(&spec, DEFAULT_GRID_N, DEFAULT_TOL).unwrap();
        let m = r.mu_c.unwrap();
        assert!(r.bracket_width < DEFAULT_TOL);
        let lo = delta_i(&spec, m - 2.0 * DEFAULT_TOL).unwrap();
        let hi = delta_i(&spec, m + 2.0 * DEFAULT_TOL).unwrap();
        assert!(lo.signum() != hi.signum(), "{lo} {hi}");
        let h = 1e-4;
        let slope = (delta_i(&spec, m + h).unwrap() - delta_i(&spec, m - h).unwrap()) / (2.0 * h);
        assert!(delta_i(&spec, m).unwrap().abs() < 10.0 * slope.abs() * DEFAULT_TOL);
    }
}

/// QCD with correlated phases: the crossing climbs toward μ = 1 with even d
/// and is gone between d = 64 and d = 72.
#[test]
fn qcd_entanglement_advantage_vanishes_at_large_even_d() {
    let mut previous = 0.0;
    for d in [2, 4, 8, 16] {
        let m = mu_c(Model::Qcd, d, 0.3, 0.0).unwrap();
        assert!(m > previous, "d = {d}: {m}");
        previous = m;
    }
    let near = mu_c(Model::Qcd, 64, 0.3, 0.0).unwrap();
    assert!(near > 0.99 && near < 1.0, "{near}");
    assert_eq!(mu_c(Model::Qcd, 72, 0.3, 0.0), None);
}
