//! Time evolution `|Ψ(t)⟩ = exp(-iHt)|Ψ(0)⟩`.
//!
//! Two routes: a dense eigendecomposition for dimensions up to
//! [`DEFAULT_DENSE_CAP`], and short-time Lanczos (Krylov) stepping that only
//! needs sparse matrix-vector products.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::SparseHamiltonian;
use crate::hilbert::StateVector;
use crate::C64;

/// Dimension above which the dense eigensolver refuses to run.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending and
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Eigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max_k ‖H v_k - E_k v_k‖` against a dense reference matrix.
    pub fn max_residual(&self, h: &DMatrix<f64>) -> f64 {
        let hv = h * &self.eigenvectors;
        (0..self.dim())
            .map(|k| (hv.column(k) - self.eigenvectors.column(k) * self.eigenvalues[k]).norm())
            .fold(0.0, f64::max)
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        (gram - DMatrix::identity(self.dim(), self.dim())).abs().max()
    }
}

/// Full eigendecomposition of a sparse Hamiltonian, refusing dimensions
/// above `cap`.
pub fn diagonalize(h: &SparseHamiltonian, cap: usize) -> Result<Eigensystem> {
    if h.dim() > cap {
        return Err(Error::DenseCapExceeded { dim: h.dim(), cap });
    }
    Ok(diagonalize_dense(h.to_dense()))
}

pub fn diagonalize_dense(m: DMatrix<f64>) -> Eigensystem {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let eigenvectors = eig.eigenvectors.select_columns(&order);
    Eigensystem { eigenvalues, eigenvectors }
}

/// Strictly increasing sample times starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    samples: Vec<f64>,
}

impl TimeGrid {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Config("a time grid needs at least two samples".into()));
        }
        if samples[0] != 0.0 {
            return Err(Error::Config("time grids start at t = 0".into()));
        }
        if samples.iter().any(|t| !t.is_finite()) || samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("time samples must be finite and strictly increasing".into()));
        }
        Ok(TimeGrid { samples })
    }

    /// `count` equally spaced samples on `[0, t_max]`, both ends included.
    pub fn uniform(t_max: f64, count: usize) -> Result<Self> {
        if !(t_max > 0.0) || count < 2 {
            return Err(Error::Config(format!("bad uniform grid: t_max={t_max}, count={count}")));
        }
        let step = t_max / (count - 1) as f64;
        let mut samples: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
        samples[count - 1] = t_max;
        Self::from_samples(samples)
    }

    /// Uniform grid on `[0, t_max]` merged with a denser uniform grid on
    /// `[0, t_early]`.
    pub fn refined(t_max: f64, count: usize, t_early: f64, early_count: usize) -> Result<Self> {
        let coarse = Self::uniform(t_max, count)?;
        if early_count < 2 || !(t_early > 0.0) {
            return Ok(coarse);
        }
        let fine = Self::uniform(t_early.min(t_max), early_count)?;
        Ok(coarse.merge(&fine))
    }

    /// Union of two grids; samples closer than `1e-12 t_max` collapse.
    pub fn merge(&self, other: &TimeGrid) -> TimeGrid {
        let mut all: Vec<f64> = self.samples.iter().chain(&other.samples).copied().collect();
        all.sort_by(f64::total_cmp);
        let tol = 1e-12 * all.last().copied().unwrap_or(1.0).abs().max(1.0);
        let mut samples: Vec<f64> = Vec::with_capacity(all.len());
        for t in all {
            match samples.last() {
                Some(&last) if t - last <= tol => {}
                _ => samples.push(t),
            }
        }
        TimeGrid { samples }
    }

    /// Default grid for a model with disorder width `delta` and coupling
    /// bound `j`: `t_max = max(200/δ, 20/J)` with 2000 uniform samples, plus
    /// 400 samples on `[0, min(t_max, 4/J)]` to resolve the early decay.
    pub fn default_for(delta: f64, j: f64) -> Result<Self> {
        let t_max = default_t_max(delta, j)?;
        let t_early = if j > 0.0 { (4.0 / j).min(t_max) } else { 0.0 };
        Self::refined(t_max, 2000, t_early, 400)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.samples.last().expect("grid is never empty")
    }

    /// Uniform tail on `[2 t_max - fraction·2 t_max, 2 t_max]` with `count`
    /// samples, used to check saturation against a doubled horizon.
    pub fn doubled_tail(&self, fraction: f64, count: usize) -> Vec<f64> {
        let end = 2.0 * self.t_max();
        let start = end * (1.0 - fraction);
        let count = count.max(2);
        (0..count)
            .map(|k| start + (end - start) * k as f64 / (count - 1) as f64)
            .collect()
    }
}

pub fn default_t_max(delta: f64, j: f64) -> Result<f64> {
    let a = if delta > 0.0 { 200.0 / delta } else { 0.0 };
    let b = if j > 0.0 { 20.0 / j } else { 0.0 };
    let t = a.max(b);
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Config("default time grid needs delta > 0 or J > 0".into()))
    }
}

fn complex_parts(v: &[C64]) -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_iterator(v.len(), v.iter().map(|a| a.re)),
        DVector::from_iterator(v.len(), v.iter().map(|a| a.im)),
    )
}

/// Spectral coefficients `Vᵀ ψ₀` of a state.
fn spectral_coefficients(es: &Eigensystem, psi0: &StateVector) -> Result<Vec<C64>> {
    if psi0.dim() != es.dim() {
        return Err(Error::DimensionMismatch { expected: es.dim(), actual: psi0.dim() });
    }
    let (re, im) = complex_parts(&psi0.amplitudes);
    let vt = es.eigenvectors.transpose();
    let cr = &vt * re;
    let ci = &vt * im;
    Ok(cr.iter().zip(ci.iter()).map(|(&r, &i)| C64::new(r, i)).collect())
}

/// Evolves at arbitrary (not necessarily increasing) times.
pub fn evolve_exact_at(es: &Eigensystem, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    const CHUNK: usize = 128;
    let coeffs = spectral_coefficients(es, psi0)?;
    let dim = es.dim();
    let mut out = Vec::with_capacity(times.len());
    for chunk in times.chunks(CHUNK) {
        let m = chunk.len();
        let mut pr = DMatrix::<f64>::zeros(dim, m);
        let mut pi = DMatrix::<f64>::zeros(dim, m);
        for (col, &t) in chunk.iter().enumerate() {
            for k in 0..dim {
                let phase = C64::from_polar(1.0, -es.eigenvalues[k] * t) * coeffs[k];
                pr[(k, col)] = phase.re;
                pi[(k, col)] = phase.im;
            }
        }
        let sr = &es.eigenvectors * pr;
        let si = &es.eigenvectors * pi;
        for (col, &t) in chunk.iter().enumerate() {
            if t == 0.0 {
                out.push(psi0.clone());
                continue;
            }
            let amplitudes = (0..dim).map(|r| C64::new(sr[(r, col)], si[(r, col)])).collect();
            out.push(StateVector { kind: psi0.kind, n: psi0.n, amplitudes });
        }
    }
    Ok(out)
}

/// `ψ(t) = V diag(e^{-iE_k t}) Vᵀ ψ(0)` at every grid sample.
pub fn evolve_exact(es: &Eigensystem, psi0: &StateVector, grid: &TimeGrid) -> Result<Vec<StateVector>> {
    evolve_exact_at(es, psi0, grid.samples())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrylovOptions {
    /// Maximum Krylov subspace dimension per step.
    pub order: usize,
    /// Upper bound on the step; the spectral width may force smaller steps.
    pub max_step: Option<f64>,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { order: 30, max_step: None }
    }
}

impl KrylovOptions {
    /// Step size used for `h`: keeps `(spectral half-width)·dt ≤ order/8`.
    pub fn step_for(&self, h: &SparseHamiltonian) -> f64 {
        let (lo, hi) = h.spectral_bounds();
        let half_width = ((hi - lo) / 2.0).max(1e-300);
        let bound = self.order as f64 / 8.0 / half_width;
        match self.max_step {
            Some(s) if s > 0.0 => s.min(bound),
            _ => bound,
        }
    }
}

/// One Lanczos approximation of `exp(-iH dt) v`. Stops early when the
/// Krylov space becomes invariant, in which case the result is exact up to
/// rounding.
pub fn krylov_step(h: &SparseHamiltonian, v: &[C64], dt: f64, order: usize) -> Vec<C64> {
    let dim = v.len();
    let beta0 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if beta0 == 0.0 || dt == 0.0 {
        return v.to_vec();
    }
    let order = order.max(1).min(dim);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(order);
    basis.push(v.iter().map(|a| a / beta0).collect());
    let mut alpha = Vec::with_capacity(order);
    let mut beta: Vec<f64> = Vec::with_capacity(order);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    let scale = h.norm_bound().max(1e-300);

    for j in 0..order {
        h.apply_into(&basis[j], &mut w);
        // full reorthogonalisation, two passes
        let mut a = 0.0;
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let proj: C64 = q.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                if i == j {
                    a += proj.re;
                }
                w.iter_mut().zip(q).for_each(|(y, x)| *y -= proj * x);
            }
        }
        alpha.push(a);
        let b = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if j + 1 == order || b <= 1e-13 * scale {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|y| y / b).collect());
    }

    let k = alpha.len();
    let tri = DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(tri);
    let s = &eig.eigenvectors;
    let phases: Vec<C64> = (0..k)
        .map(|l| C64::from_polar(1.0, -eig.eigenvalues[l] * dt) * s[(0, l)])
        .collect();

    let mut out = vec![C64::new(0.0, 0.0); dim];
    for (j, q) in basis.iter().enumerate().take(k) {
        let yj: C64 = (0..k).map(|l| phases[l] * s[(j, l)]).sum::<C64>() * beta0;
        out.iter_mut().zip(q).for_each(|(o, x)| *o += yj * x);
    }
    out
}

/// Evolves `psi` by `dt` (either sign) in substeps no longer than the
/// option's step bound.
pub fn krylov_evolve_by(h: &SparseHamiltonian, psi: &[C64], dt: f64, opts: &KrylovOptions) -> Vec<C64> {
    let step = opts.step_for(h);
    let nsub = ((dt.abs() / step).ceil() as usize).max(1);
    let sub = dt / nsub as f64;
    let mut v = psi.to_vec();
    for _ in 0..nsub {
        v = krylov_step(h, &v, sub, opts.order);
    }
    v
}

/// Krylov evolution sampled on `grid`, renormalising after each sample.
pub fn evolve_krylov(
    h: &SparseHamiltonian,
    psi0: &StateVector,
    grid: &TimeGrid,
    opts: &KrylovOptions,
) -> Result<Vec<StateVector>> {
    evolve_krylov_at(h, psi0, grid.samples(), opts)
}

/// Krylov evolution through an increasing list of times starting at or
/// after 0.
pub fn evolve_krylov_at(
    h: &SparseHamiltonian,
    psi0: &StateVector,
    times: &[f64],
    opts: &KrylovOptions,
) -> Result<Vec<StateVector>> {
    if opts.order < 4 {
        return Err(Error::Config(format!("Krylov order must be at least 4, got {}", opts.order)));
    }
    if psi0.kind != h.kind() || psi0.n != h.n() {
        return Err(Error::BasisMismatch("initial state and Hamiltonian live in different bases".into()));
    }
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: psi0.dim() });
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Config("Krylov sample times must be nonnegative and nondecreasing".into()));
    }
    let norm0 = psi0.norm();
    let mut out = Vec::with_capacity(times.len());
    let mut current = psi0.amplitudes.clone();
    let mut t_prev = 0.0;
    for &t in times {
        if t > t_prev {
            current = krylov_evolve_by(h, &current, t - t_prev, opts);
            let nrm = current.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 0.0 {
                current.iter_mut().for_each(|a| *a *= norm0 / nrm);
            }
            t_prev = t;
        }
        if t == 0.0 {
            out.push(psi0.clone());
        } else {
            out.push(StateVector { kind: psi0.kind, n: psi0.n, amplitudes: current.clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_full, build_sector};
    use crate::hilbert::{initial_state, Basis, InitialKind, SectorBasis};
    use crate::lattice::{build_geometry, draw_disorder, DisorderRealization, ModelParams};
    use crate::oracle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sector_model(n: usize, j: f64, seed: u64) -> (SparseHamiltonian, Basis) {
        let p = ModelParams::new(n, 1.0, 0.2, j);
        let g = build_geometry(&p).unwrap();
        let d = draw_disorder(&p, &g, seed);
        let sb = SectorBasis::new(n).unwrap();
        (build_sector(&p, &g, &d, &sb).unwrap(), Basis::Sector(sb))
    }

    fn two_level(dd: f64, j: f64) -> SparseHamiltonian {
        let p = ModelParams::new(2, 1.0, 1.0, j.abs());
        let g = build_geometry(&p).unwrap();
        let d = DisorderRealization { deltas: vec![dd / 2.0, -dd / 2.0], couplings: vec![j], seed: 0 };
        build_sector(&p, &g, &d, &SectorBasis::new(2).unwrap()).unwrap()
    }

    #[test]
    fn two_level_eigenvalues() {
        let (d, j) = (0.13, 0.04);
        let es = diagonalize(&two_level(d, j), DEFAULT_DENSE_CAP).unwrap();
        let omega = (d * d + j * j).sqrt();
        assert!((es.eigenvalues[0] + omega).abs() < 1e-14);
        assert!((es.eigenvalues[1] - omega).abs() < 1e-14);
    }

    #[test]
    fn clean_full_space_is_diagonal() {
        let p = ModelParams::new(4, 1.0, 0.2, 0.0);
        let g = build_geometry(&p).unwrap();
        let d = draw_disorder(&p, &g, 1);
        let h = build_full(&p, &g, &d).unwrap();
        let es = diagonalize(&h, DEFAULT_DENSE_CAP).unwrap();
        let mut diag = h.diagonal();
        diag.sort_by(f64::total_cmp);
        for (a, b) in es.eigenvalues.iter().zip(&diag) {
            assert!((a - b).abs() < 1e-14);
        }
        for k in 0..16 {
            let col = es.eigenvectors.column(k);
            assert_eq!(col.iter().filter(|x| x.abs() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn random_symmetric_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = DMatrix::from_fn(100, 100, |_, _| rng.random::<f64>() - 0.5);
        let m = &a + a.transpose();
        let es = diagonalize_dense(m.clone());
        let norm = m.norm();
        assert!(es.max_residual(&m) <= 1e-9 * norm);
        assert!(es.orthonormality_defect() <= 1e-9);
        assert!(es.eigenvalues.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dense_cap_is_enforced() {
        let (h, _) = sector_model(8, 0.05, 1);
        assert!(matches!(diagonalize(&h, 10), Err(Error::DenseCapExceeded { .. })));
    }

    #[test]
    fn grids() {
        let g = TimeGrid::uniform(10.0, 11).unwrap();
        assert_eq!(g.samples()[0], 0.0);
        assert_eq!(g.t_max(), 10.0);
        assert!(TimeGrid::from_samples(vec![0.0, 1.0, 1.0]).is_err());
        assert!(TimeGrid::from_samples(vec![0.5, 1.0]).is_err());
        let r = TimeGrid::refined(100.0, 11, 5.0, 6).unwrap();
        assert!(r.samples().windows(2).all(|w| w[1] > w[0]));
        assert_eq!(r.len(), 11 + 5);
        let d = TimeGrid::default_for(0.2, 0.01).unwrap();
        assert_eq!(d.t_max(), 2000.0);
        let d = TimeGrid::default_for(0.2, 0.5).unwrap();
        assert_eq!(d.t_max(), 1000.0);
        assert!(d.samples().iter().filter(|&&t| t <= 8.0).count() >= 400);
    }

    #[test]
    fn exact_evolution_basics() {
        let (h, basis) = sector_model(6, 0.05, 2);
        let es = diagonalize(&h, DEFAULT_DENSE_CAP).unwrap();
        let psi0 = initial_state(InitialKind::Bell, &basis).unwrap();
        let grid = TimeGrid::uniform(50.0, 101).unwrap();
        let states = evolve_exact(&es, &psi0, &grid).unwrap();
        assert_eq!(states[0], psi0);
        for s in &states {
            assert!((s.norm() - 1.0).abs() < 1e-10);
        }

        // an eigenvector only picks up a phase
        let v = StateVector {
            kind: psi0.kind,
            n: psi0.n,
            amplitudes: es.eigenvectors.column(7).iter().map(|&x| C64::new(x, 0.0)).collect(),
        };
        for s in evolve_exact(&es, &v, &grid).unwrap() {
            assert!((v.inner(&s).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rabi_oscillation() {
        let (d, j) = (0.1, 0.03);
        let es = diagonalize(&two_level(d, j), DEFAULT_DENSE_CAP).unwrap();
        let basis = Basis::sector(2).unwrap();
        let psi0 = initial_state(InitialKind::Separable, &basis).unwrap();
        let grid = TimeGrid::uniform(200.0, 401).unwrap();
        for (t, s) in grid.samples().iter().zip(evolve_exact(&es, &psi0, &grid).unwrap()) {
            let moved = s.amplitudes[1].norm_sqr();
            assert!((moved - oracle::rabi_transfer(d, j, *t)).abs() < 1e-12);
        }
    }

    #[test]
    fn krylov_matches_exact_on_n8_sector() {
        let (h, basis) = sector_model(8, 0.1, 3);
        let es = diagonalize(&h, DEFAULT_DENSE_CAP).unwrap();
        let psi0 = initial_state(InitialKind::Bell, &basis).unwrap();
        let grid = TimeGrid::uniform(200.0, 201).unwrap();
        let exact = evolve_exact(&es, &psi0, &grid).unwrap();
        let kry = evolve_krylov(&h, &psi0, &grid, &KrylovOptions::default()).unwrap();
        let worst = exact
            .iter()
            .zip(&kry)
            .flat_map(|(a, b)| a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "max amplitude difference {worst}");
    }

    #[test]
    fn krylov_step_halving_is_consistent() {
        let (h, basis) = sector_model(8, 0.1, 4);
        let psi0 = initial_state(InitialKind::Separable, &basis).unwrap();
        let dt = 2.0;
        let one = krylov_step(&h, &psi0.amplitudes, dt, 30);
        let half = krylov_step(&h, &krylov_step(&h, &psi0.amplitudes, dt / 2.0, 30), dt / 2.0, 30);
        let diff = one.iter().zip(&half).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn krylov_breakdown_is_exact() {
        // two-dimensional space: the Krylov space closes after two vectors
        let (d, j) = (0.1, 0.03);
        let h = two_level(d, j);
        let psi = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let t = 7.3;
        let out = krylov_step(&h, &psi, t, 30);
        assert!((out[1].norm_sqr() - oracle::rabi_transfer(d, j, t)).abs() < 1e-14);
    }

    #[test]
    fn krylov_time_reversal() {
        let (h, basis) = sector_model(10, 0.2, 5);
        let psi0 = initial_state(InitialKind::Bell, &basis).unwrap();
        let opts = KrylovOptions::default();
        let forward = krylov_evolve_by(&h, &psi0.amplitudes, 40.0, &opts);
        let back = krylov_evolve_by(&h, &forward, -40.0, &opts);
        let diff = back.iter().zip(&psi0.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn krylov_rejects_low_order() {
        let (h, basis) = sector_model(4, 0.1, 5);
        let psi0 = initial_state(InitialKind::Bell, &basis).unwrap();
        let grid = TimeGrid::uniform(1.0, 3).unwrap();
        let opts = KrylovOptions { order: 3, max_step: None };
        assert!(evolve_krylov(&h, &psi0, &grid, &opts).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn energy_and_norm_conserved(seed in any::<u64>(), j in 0.001f64..0.5) {
            let (h, basis) = sector_model(6, j, seed);
            let es = diagonalize(&h, DEFAULT_DENSE_CAP).unwrap();
            let psi0 = initial_state(InitialKind::Bell, &basis).unwrap();
            let e0 = h.expectation(&psi0).unwrap();
            let grid = TimeGrid::uniform(300.0, 31).unwrap();
            for s in evolve_exact(&es, &psi0, &grid).unwrap() {
                prop_assert!((s.norm() - 1.0).abs() < 1e-10);
                let e = h.expectation(&s).unwrap();
                prop_assert!((e - e0).abs() <= 1e-8 * e0.abs().max(h.norm_bound()));
            }
        }
    }
}
