use std::time::Instant;

use entlat_core::analysis::{model_fidelity_gaussian, two_qubit_oracle};
use entlat_core::ensemble::{run_ensemble, scan_j};
use entlat_core::lattice::{build_geometry, draw_disorder};
use entlat_core::{EnsembleConfig, GridSpec, InitialKind, ModelParams, TcMode, TimeGrid};

fn bell(n: usize, j: f64, n_r: usize) -> EnsembleConfig {
    EnsembleConfig::new(ModelParams::new(n, 1.0, 0.2, j), InitialKind::Bell, n_r, 1)
}

#[test]
fn strongest_inset_coupling_decays_first() {
    let js = [2e-3, 5e-3, 1e-2, 2e-2, 3e-2];
    let scan = scan_j(&bell(10, js[0], 50), &js).unwrap();
    let tc: Vec<Option<f64>> = scan.points.iter().map(|p| p.t_c(TcMode::AveragedCurve)).collect();
    let last = tc[4].expect("J = 3e-2 crosses 0.96");
    for (j, t) in js.iter().zip(&tc).take(4) {
        if let Some(t) = t {
            assert!(*t > last, "J={j}: t_c {t} not above {last}");
        }
    }
}

#[test]
fn fidelity_follows_bond_product_at_strong_coupling() {
    let mut c = bell(10, 0.2, 10);
    c.grid = GridSpec::Explicit(TimeGrid::uniform(10.0, 201).unwrap());
    c.keep_archive = true;
    c.stability_check = false;
    let res = run_ensemble(&c).unwrap();
    let geometry = build_geometry(&c.params).unwrap();
    let disorders: Vec<_> = res.seeds.iter().map(|&s| draw_disorder(&c.params, &geometry, s)).collect();
    let mut checked = 0;
    for (k, &t) in res.times.iter().enumerate() {
        let model = disorders.iter().map(|d| model_fidelity_gaussian(d, t)).sum::<f64>() / disorders.len() as f64;
        if res.mean_f[k] > 0.2 {
            assert!((res.mean_f[k] - model).abs() <= 0.1, "t={t}: measured {} vs model {model}", res.mean_f[k]);
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn two_qubit_ensemble_matches_closed_form() {
    let mut c = EnsembleConfig::new(ModelParams::new(2, 1.0, 0.2, 0.05), InitialKind::Separable, 3, 7);
    let grid = TimeGrid::uniform(300.0, 1501).unwrap();
    c.grid = GridSpec::Explicit(grid.clone());
    c.keep_archive = true;
    c.stability_check = false;
    let res = run_ensemble(&c).unwrap();
    let geometry = build_geometry(&c.params).unwrap();
    for trace in &res.realizations {
        let d = draw_disorder(&c.params, &geometry, trace.seed);
        let want = two_qubit_oracle(d.deltas[0] - d.deltas[1], d.couplings[0], &grid).unwrap();
        for (got, want) in trace.concurrence.iter().zip(&want.values) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }
}

#[test]
fn standard_error_shrinks_with_realizations() {
    let mean_se = |n_r| {
        let mut c = bell(6, 0.05, n_r);
        c.stability_check = false;
        let r = run_ensemble(&c).unwrap();
        r.stderr_c.iter().sum::<f64>() / r.stderr_c.len() as f64
    };
    let ratio = mean_se(20) / mean_se(80);
    // 1/sqrt(N_r) predicts 2
    assert!((1.4..2.8).contains(&ratio), "{ratio}");
}

#[test]
fn small_lattice_ensemble_is_fast() {
    let start = Instant::now();
    let r = run_ensemble(&bell(4, 0.05, 50)).unwrap();
    assert_eq!(r.seeds.len(), 50);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}
