//! Oracle suite behind `entlat verify`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::two_qubit_oracle;
use crate::error::Result;
use crate::hamiltonian::{build_full, build_sector};
use crate::hilbert::{embed_sector, initial_state, reduce_to_pair, Basis, BasisKind, InitialKind, SectorBasis, StateVector, TwoQubitDensityMatrix};
use crate::lattice::{build_geometry, draw_disorder, DisorderRealization, ModelParams};
use crate::observables::{concurrence, fidelity, ConcurrenceResult};
use crate::oracle;
use crate::propagator::{diagonalize, evolve_exact, evolve_krylov, KrylovOptions, TimeGrid, DEFAULT_DENSE_CAP};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: Result<f64>, tol: f64) -> Check {
    match worst {
        Ok(w) => Check { name, passed: w <= tol, detail: format!("max deviation {w:.2e} (tolerance {tol:.0e})") },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Worst deviation from `max(0, (3p - 1)/2)` over a set of Werner states.
pub fn werner_deviation(conc: impl Fn(&TwoQubitDensityMatrix) -> Result<ConcurrenceResult>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.4, 1.0, 0.25, 0.5, 0.9] {
        let rho = TwoQubitDensityMatrix::new(oracle::werner_state(p))?;
        worst = worst.max((conc(&rho)?.value - oracle::werner_concurrence(p)).abs());
    }
    Ok(worst)
}

fn random_state(basis: &Basis, rng: &mut impl Rng) -> StateVector {
    let mut s = StateVector::zeros(basis);
    for a in s.amplitudes.iter_mut() {
        *a = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    s.normalize();
    s
}

/// Sector reduction against the dense `|ψ⟩⟨ψ|` partial trace for `count`
/// random `n = 4` states.
pub fn partial_trace_deviation(count: usize, seed: u64) -> Result<f64> {
    let basis = Basis::full(4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let s = random_state(&basis, &mut rng);
        let got = reduce_to_pair(&s, &basis)?;
        let want = oracle::dense_partial_trace_first_two(&s.amplitudes, 4);
        worst = worst.max((got.entries() - want).map(|z| z.norm()).max());
    }
    Ok(worst)
}

/// n = 2 sector simulation against the closed-form two-level solution, for
/// both concurrence (separable start) and fidelity.
pub fn two_qubit_deviation() -> Result<f64> {
    let basis = Basis::sector(2)?;
    let sb = SectorBasis::new(2)?;
    let grid = TimeGrid::uniform(400.0, 2001)?;
    let mut worst: f64 = 0.0;
    for (d1, d2, j) in [(0.05f64, -0.05f64, 0.02f64), (0.0, 0.0, 0.3), (0.08, 0.01, -0.004), (-0.03, 0.06, 0.1)] {
        let params = ModelParams::new(2, 1.0, 0.2, j.abs());
        let geometry = build_geometry(&params)?;
        let disorder = DisorderRealization { deltas: vec![d1, d2], couplings: vec![j], seed: 0 };
        let h = build_sector(&params, &geometry, &disorder, &sb)?;
        let es = diagonalize(&h, DEFAULT_DENSE_CAP)?;
        let psi0 = initial_state(InitialKind::Separable, &basis)?;
        let d = d1 - d2;
        let want = two_qubit_oracle(d, j, &grid)?;
        for ((s, c), &t) in evolve_exact(&es, &psi0, &grid)?.iter().zip(&want.values).zip(grid.samples()) {
            worst = worst.max((concurrence(&reduce_to_pair(s, &basis)?)?.value - c).abs());
            let f = 1.0 - oracle::rabi_transfer(d, j, t);
            worst = worst.max((fidelity(&psi0, s)? - f).abs());
        }
    }
    Ok(worst)
}

/// Sparse full-space Hamiltonian against the Pauli Kronecker construction.
pub fn hamiltonian_deviation(n: usize, seed: u64) -> Result<f64> {
    let params = ModelParams::new(n, 0.6, 0.2, 0.3);
    let geometry = build_geometry(&params)?;
    let disorder = draw_disorder(&params, &geometry, seed);
    let sparse = build_full(&params, &geometry, &disorder)?.to_dense();
    let dense = oracle::pauli_hamiltonian(&params, &geometry, &disorder);
    let diff = DMatrix::from_fn(sparse.nrows(), sparse.ncols(), |r, c| (C64::new(sparse[(r, c)], 0.0) - dense[(r, c)]).norm());
    Ok(diff.max())
}

/// Krylov against exact propagation in the sector.
pub fn krylov_deviation(n: usize, seed: u64) -> Result<f64> {
    let params = ModelParams::new(n, 1.0, 0.2, 0.1);
    let geometry = build_geometry(&params)?;
    let disorder = draw_disorder(&params, &geometry, seed);
    let sb = SectorBasis::new(n)?;
    let h = build_sector(&params, &geometry, &disorder, &sb)?;
    let psi0 = initial_state(InitialKind::Bell, &Basis::Sector(sb))?;
    let grid = TimeGrid::uniform(100.0, 101)?;
    let es = diagonalize(&h, DEFAULT_DENSE_CAP)?;
    let exact = evolve_exact(&es, &psi0, &grid)?;
    let kry = evolve_krylov(&h, &psi0, &grid, &KrylovOptions::default())?;
    Ok(max_amplitude_gap(&exact, &kry))
}

/// XY dynamics in the full space against the embedded sector dynamics.
pub fn sector_embedding_deviation(n: usize, seed: u64) -> Result<f64> {
    let params = ModelParams::new(n, 0.0, 0.2, 0.1);
    let geometry = build_geometry(&params)?;
    let disorder = draw_disorder(&params, &geometry, seed);
    let sb = SectorBasis::new(n)?;
    let grid = TimeGrid::uniform(50.0, 51)?;
    let hs = build_sector(&params, &geometry, &disorder, &sb)?;
    let hf = build_full(&params, &geometry, &disorder)?;
    let ps = initial_state(InitialKind::Bell, &Basis::Sector(sb.clone()))?;
    let pf = initial_state(InitialKind::Bell, &Basis::full(n)?)?;
    let sector = evolve_exact(&diagonalize(&hs, DEFAULT_DENSE_CAP)?, &ps, &grid)?;
    let full = evolve_exact(&diagonalize(&hf, DEFAULT_DENSE_CAP)?, &pf, &grid)?;
    let embedded: Vec<StateVector> = sector.iter().map(|s| embed_sector(s, &sb)).collect::<Result<_>>()?;
    debug_assert!(embedded.iter().all(|s| s.kind == BasisKind::Full));
    Ok(max_amplitude_gap(&embedded, &full))
}

fn max_amplitude_gap(a: &[StateVector], b: &[StateVector]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.amplitudes.iter().zip(&y.amplitudes).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Runs every check; lattice sizes are capped at `n_cap` qubits.
pub fn run(n_cap: usize) -> Vec<Check> {
    let cap = n_cap.max(4) & !1;
    vec![
        check("werner_concurrence", werner_deviation(concurrence), 1e-9),
        check("partial_trace_dense_n4", partial_trace_deviation(100, 17), 1e-12),
        check("two_qubit_closed_form", two_qubit_deviation(), 1e-9),
        check("pauli_hamiltonian", hamiltonian_deviation(cap.min(8), 3), 1e-12),
        check("krylov_vs_exact", krylov_deviation(cap.min(10), 5), 1e-8),
        check("sector_vs_full_xy", sector_embedding_deviation(cap.min(8), 9), 1e-9),
    ]
}
