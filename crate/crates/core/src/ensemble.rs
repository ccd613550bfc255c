//! Disorder ensembles and parameter scans.
//!
//! Realization `r` of an ensemble draws its disorder from
//! `child_seed(master_seed, r)`, so every scan point sees the same uniform
//! draws rescaled by its own `J` and `δ`. Realizations run on a rayon pool
//! and are merged by index, which keeps the output independent of the
//! worker count.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    crossover_window, ergodic_window, fgr_window, fit_exponential_cinf, fit_power_law, model_decay_rates,
    FitResult,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_full, build_sector, SparseHamiltonian};
use crate::hilbert::{initial_state, Basis, InitialKind, PairReducer, StateVector};
use crate::lattice::{build_geometry, child_seed, draw_disorder, LatticeGeometry, ModelParams};
use crate::observables::{
    concurrence, eigenstate_entropy, first_crossing, fmt_num, saturation_is_stable, trailing_average,
    SeriesLabel, TimeSeries, SATURATION_FRACTION, TC_THRESHOLD,
};
use crate::propagator::{
    diagonalize, evolve_exact_at, krylov_evolve_by, KrylovOptions, TimeGrid, DEFAULT_DENSE_CAP,
};
use crate::C64;

/// Coupling grid used by the figure presets: the 1-2-5 decades from `10⁻⁴`
/// to `0.2`, the inset's `3×10⁻²`, two fill-in points inside the golden-rule
/// window, and the ergodic points `0.3 … 1`.
pub const DEFAULT_J_GRID: [f64; 19] = [
    1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 7e-3, 1e-2, 1.5e-2, 2e-2, 3e-2, 5e-2, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0,
];

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evolution {
    Full,
    Sector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagatorKind {
    Exact,
    Krylov,
    /// Exact up to the dense cap, Krylov above it.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpec {
    /// [`TimeGrid::default_for`] evaluated at each point's `δ` and `J`.
    Auto,
    Uniform { t_max: f64, samples: usize },
    Explicit(TimeGrid),
}

impl GridSpec {
    pub fn resolve(&self, params: &ModelParams) -> Result<TimeGrid> {
        match self {
            GridSpec::Auto => TimeGrid::default_for(params.delta, params.j_strength),
            GridSpec::Uniform { t_max, samples } => TimeGrid::uniform(*t_max, *samples),
            GridSpec::Explicit(g) => Ok(g.clone()),
        }
    }
}

/// How `t_c` is extracted from an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TcMode {
    /// Crossing of the disorder-averaged curve.
    AveragedCurve,
    /// Mean of the per-realization crossings, over realizations that cross.
    PerRealization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub params: ModelParams,
    pub initial: InitialKind,
    pub n_realizations: usize,
    pub master_seed: u64,
    pub grid: GridSpec,
    pub evolution: Evolution,
    pub propagator: PropagatorKind,
    pub krylov: KrylovOptions,
    pub dense_cap: usize,
    /// Also evaluate `C∞` on a horizon of `2 t_max`.
    pub stability_check: bool,
    /// Keep every realization's full `C(t)` and `f(t)`.
    pub keep_archive: bool,
    /// Worker threads; `None` uses the rayon default.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl EnsembleConfig {
    pub fn new(params: ModelParams, initial: InitialKind, n_realizations: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            params,
            initial,
            n_realizations,
            master_seed,
            grid: GridSpec::Auto,
            evolution: Evolution::Sector,
            propagator: PropagatorKind::Auto,
            krylov: KrylovOptions::default(),
            dense_cap: DEFAULT_DENSE_CAP,
            stability_check: true,
            keep_archive: false,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_realizations == 0 {
            return Err(Error::Config("n_realizations must be at least 1".into()));
        }
        if self.krylov.order < 4 {
            return Err(Error::Config(format!("Krylov order must be at least 4, got {}", self.krylov.order)));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn realization_seed(&self, index: usize) -> u64 {
        child_seed(self.master_seed, index as u64)
    }
}

/// Observables of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationTrace {
    pub index: usize,
    pub seed: u64,
    pub c_inf: f64,
    pub t_c: Option<f64>,
    /// Empty unless the archive is kept.
    pub concurrence: Vec<f64>,
    pub fidelity: Vec<f64>,
    #[serde(skip)]
    tail: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub params: ModelParams,
    pub initial: InitialKind,
    pub n_realizations: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub times: Vec<f64>,
    pub mean_c: Vec<f64>,
    pub stderr_c: Vec<f64>,
    pub mean_f: Vec<f64>,
    pub stderr_f: Vec<f64>,
    /// Trailing average of the mean concurrence.
    pub c_inf: f64,
    /// Standard error of the per-realization trailing averages.
    pub c_inf_stderr: f64,
    /// Same average on the doubled horizon, when checked.
    pub c_inf_doubled: Option<f64>,
    pub realizations: Vec<RealizationTrace>,
    pub wall_time_s: f64,
}

impl EnsembleResult {
    pub fn concurrence_series(&self) -> TimeSeries {
        TimeSeries { times: self.times.clone(), values: self.mean_c.clone(), label: SeriesLabel::Concurrence }
    }

    pub fn fidelity_series(&self) -> TimeSeries {
        TimeSeries { times: self.times.clone(), values: self.mean_f.clone(), label: SeriesLabel::Fidelity }
    }

    /// `None` when no stability check ran.
    pub fn stable(&self) -> Option<bool> {
        self.c_inf_doubled.map(|d| saturation_is_stable(self.c_inf, d))
    }

    pub fn t_c(&self, mode: TcMode) -> Option<f64> {
        match mode {
            TcMode::AveragedCurve => first_crossing(&self.times, &self.mean_c, TC_THRESHOLD),
            TcMode::PerRealization => {
                let hits: Vec<f64> = self.realizations.iter().filter_map(|r| r.t_c).collect();
                (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64)
            }
        }
    }

    /// Realizations whose own concurrence crosses the threshold.
    pub fn crossing_count(&self) -> usize {
        self.realizations.iter().filter(|r| r.t_c.is_some()).count()
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} workers: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Everything shared by the realizations of one ensemble.
struct Setup {
    geometry: LatticeGeometry,
    basis: Basis,
    psi0: StateVector,
    reducer: PairReducer,
    times: Vec<f64>,
    tail: Vec<f64>,
}

impl Setup {
    fn new(config: &EnsembleConfig) -> Result<Self> {
        config.validate()?;
        let p = &config.params;
        let geometry = build_geometry(p)?;
        let basis = match config.evolution {
            Evolution::Full => Basis::full(p.n)?,
            Evolution::Sector => Basis::sector(p.n)?,
        };
        let psi0 = initial_state(config.initial, &basis)?;
        let reducer = PairReducer::new(&basis, 0, 1)?;
        let grid = config.grid.resolve(p)?;
        let times = grid.samples().to_vec();
        let tail = if config.stability_check {
            let start = grid.t_max() * (1.0 - SATURATION_FRACTION);
            let in_window = times.iter().filter(|&&t| t >= start).count();
            grid.doubled_tail(SATURATION_FRACTION, in_window.max(10))
        } else {
            Vec::new()
        };
        Ok(Setup { geometry, basis, psi0, reducer, times, tail })
    }

    fn hamiltonian(&self, config: &EnsembleConfig, seed: u64) -> Result<SparseHamiltonian> {
        let d = draw_disorder(&config.params, &self.geometry, seed);
        match &self.basis {
            Basis::Full { .. } => build_full(&config.params, &self.geometry, &d),
            Basis::Sector(sb) => build_sector(&config.params, &self.geometry, &d, sb),
        }
    }
}

const CHUNK: usize = 128;

/// Propagates through `times` (increasing) and hands every state to `visit`.
fn propagate(
    config: &EnsembleConfig,
    h: &SparseHamiltonian,
    psi0: &StateVector,
    times: &[f64],
    mut visit: impl FnMut(&StateVector) -> Result<()>,
) -> Result<()> {
    let exact = match config.propagator {
        PropagatorKind::Exact => true,
        PropagatorKind::Krylov => false,
        PropagatorKind::Auto => h.dim() <= config.dense_cap,
    };
    if exact {
        let es = diagonalize(h, config.dense_cap)?;
        for chunk in times.chunks(CHUNK) {
            for s in evolve_exact_at(&es, psi0, chunk)? {
                visit(&s)?;
            }
        }
        return Ok(());
    }
    let norm0 = psi0.norm();
    let mut current = psi0.clone();
    let mut t_prev = 0.0;
    for &t in times {
        if t > t_prev {
            current.amplitudes = krylov_evolve_by(h, &current.amplitudes, t - t_prev, &config.krylov);
            let nrm = current.norm();
            if nrm > 0.0 {
                current.amplitudes.iter_mut().for_each(|a| *a *= norm0 / nrm);
            }
            t_prev = t;
        }
        visit(&current)?;
    }
    Ok(())
}

fn run_one(config: &EnsembleConfig, setup: &Setup, index: usize) -> Result<RealizationTrace> {
    let seed = config.realization_seed(index);
    let wrap = |e: Error| Error::Realization { index, seed, source: Box::new(e) };
    let h = setup.hamiltonian(config, seed).map_err(wrap)?;
    let m = setup.times.len();
    let mut all_times = setup.times.clone();
    all_times.extend_from_slice(&setup.tail);
    let mut conc = Vec::with_capacity(all_times.len());
    let mut fid = Vec::with_capacity(m);
    propagate(config, &h, &setup.psi0, &all_times, |s| {
        conc.push(concurrence(&setup.reducer.reduce(s)?)?.value);
        if fid.len() < m {
            let ov: C64 = setup.psi0.amplitudes.iter().zip(&s.amplitudes).map(|(a, b)| a.conj() * b).sum();
            fid.push(ov.norm_sqr());
        }
        Ok(())
    })
    .map_err(wrap)?;
    let tail = conc.split_off(m);
    let c_inf = trailing_average(&setup.times, &conc, SATURATION_FRACTION).map_err(wrap)?;
    let t_c = first_crossing(&setup.times, &conc, TC_THRESHOLD);
    Ok(RealizationTrace { index, seed, c_inf, t_c, concurrence: conc, fidelity: fid, tail })
}

fn mean_and_stderr(rows: &[&[f64]], k: usize) -> (f64, f64) {
    let m = rows.len() as f64;
    let mean = rows.iter().map(|r| r[k]).sum::<f64>() / m;
    if rows.len() < 2 {
        return (mean, 0.0);
    }
    let var = rows.iter().map(|r| (r[k] - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn columns(rows: &[&[f64]]) -> (Vec<f64>, Vec<f64>) {
    let len = rows.first().map_or(0, |r| r.len());
    (0..len).map(|k| mean_and_stderr(rows, k)).unzip()
}

fn run_in_pool(config: &EnsembleConfig) -> Result<EnsembleResult> {
    let start = Instant::now();
    let setup = Setup::new(config)?;
    let traces: Vec<Result<RealizationTrace>> =
        (0..config.n_realizations).into_par_iter().map(|r| run_one(config, &setup, r)).collect();
    let mut realizations = Vec::with_capacity(traces.len());
    for t in traces {
        realizations.push(t?);
    }

    let conc: Vec<&[f64]> = realizations.iter().map(|r| r.concurrence.as_slice()).collect();
    let fid: Vec<&[f64]> = realizations.iter().map(|r| r.fidelity.as_slice()).collect();
    let (mean_c, stderr_c) = columns(&conc);
    let (mean_f, stderr_f) = columns(&fid);
    let c_inf = trailing_average(&setup.times, &mean_c, SATURATION_FRACTION)?;
    let per: Vec<[f64; 1]> = realizations.iter().map(|r| [r.c_inf]).collect();
    let rows: Vec<&[f64]> = per.iter().map(|x| x.as_slice()).collect();
    let (_, c_inf_stderr) = mean_and_stderr(&rows, 0);
    let c_inf_doubled = if setup.tail.is_empty() {
        None
    } else {
        let tails: Vec<&[f64]> = realizations.iter().map(|r| r.tail.as_slice()).collect();
        let (mean_tail, _) = columns(&tails);
        Some(trailing_average(&setup.tail, &mean_tail, 1.0)?)
    };
    if !config.keep_archive {
        for r in &mut realizations {
            r.concurrence = Vec::new();
            r.fidelity = Vec::new();
        }
    }
    for r in &mut realizations {
        r.tail = Vec::new();
    }
    Ok(EnsembleResult {
        params: config.params.clone(),
        initial: config.initial,
        n_realizations: config.n_realizations,
        master_seed: config.master_seed,
        seeds: realizations.iter().map(|r| r.seed).collect(),
        times: setup.times,
        mean_c,
        stderr_c,
        mean_f,
        stderr_f,
        c_inf,
        c_inf_stderr,
        c_inf_doubled,
        realizations,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Averages `C(t)` and `f(t)` over `config.n_realizations` disorder draws.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleResult> {
    with_pool(config.workers, || run_in_pool(config))?
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub j: f64,
    pub n: usize,
    pub gamma: f64,
    pub result: EnsembleResult,
}

impl ScanPoint {
    pub fn t_c(&self, mode: TcMode) -> Option<f64> {
        self.result.t_c(mode)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub base: EnsembleConfig,
    pub tc_mode: TcMode,
    pub points: Vec<ScanPoint>,
    pub fits: BTreeMap<String, FitResult>,
    pub wall_time_s: f64,
}

impl ScanResult {
    /// `(J, t_c)` for the points at `n`, `γ` that cross the threshold.
    pub fn tc_table(&self, n: usize, gamma: f64) -> Vec<(f64, f64)> {
        self.select(n, gamma).filter_map(|p| p.t_c(self.tc_mode).map(|t| (p.j, t))).collect()
    }

    /// `(J, C∞)` for the points at `n`, `γ`.
    pub fn cinf_table(&self, n: usize, gamma: f64) -> Vec<(f64, f64)> {
        self.select(n, gamma).map(|p| (p.j, p.result.c_inf)).collect()
    }

    fn select(&self, n: usize, gamma: f64) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(move |p| p.n == n && p.gamma == gamma)
    }

    /// Distinct `(n, γ)` pairs in scan order.
    pub fn families(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for p in &self.points {
            if !out.iter().any(|&(n, g)| n == p.n && g == p.gamma) {
                out.push((p.n, p.gamma));
            }
        }
        out
    }

    /// Runs the regime fits for every `(n, γ)` family and stores them under
    /// `<fit>_n<n>_gamma<γ>`. Fits whose window holds too few points are
    /// skipped with a warning.
    pub fn attach_standard_fits(&mut self, windows: &FitWindows) {
        let bell = self.base.initial == InitialKind::Bell;
        for (n, gamma) in self.families() {
            let mut params = self.base.params.clone();
            params.n = n;
            let Ok(est) = model_decay_rates(&params) else { continue };
            let tc = self.tc_table(n, gamma);
            let cinf = self.cinf_table(n, gamma);
            let j_min = cinf.first().map_or(0.0, |p| p.0);
            let j_max = cinf.last().map_or(0.0, |p| p.0);
            let mut attempts: Vec<(&str, Result<FitResult>)> = Vec::new();
            if bell {
                attempts.push(("tc_fgr", fit_power_law(&tc, windows.fgr.unwrap_or(fgr_window(&est)))));
                attempts.push(("tc_ergodic", fit_power_law(&tc, windows.ergodic.unwrap_or(ergodic_window(&est, j_max)))));
                attempts.push(("cinf_exponential", fit_exponential_cinf(&cinf, windows.crossover.unwrap_or(crossover_window(&est)))));
            }
            // 1 - C∞ for a Bell start, C∞ itself for a separable start
            let pert: Vec<(f64, f64)> = cinf.iter().map(|&(j, c)| (j, if bell { 1.0 - c } else { c })).collect();
            let pert_window = windows.perturbative.unwrap_or((j_min, est.j_p));
            attempts.push(("cinf_perturbative", fit_power_law(&pert, pert_window)));
            for (name, fit) in attempts {
                let key = format!("{name}_n{n}_gamma{gamma}");
                match fit {
                    Ok(f) => {
                        self.fits.insert(key, f);
                    }
                    Err(e) => log::warn!("{key}: {e}"),
                }
            }
        }
    }

    /// Writes `manifest.json`, `avg_C.csv`, `avg_f.csv`, `scan_table.csv`,
    /// `fits.json` and one `t,value` file per point and observable under
    /// `series/` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let series = dir.join("series");
        fs::create_dir_all(&series)?;
        for p in &self.points {
            let stem = format!("n{}_gamma{}_J{}", p.n, p.gamma, p.j);
            p.result.concurrence_series().write_csv(BufWriter::new(fs::File::create(series.join(format!("C_{stem}.csv")))?))?;
            p.result.fidelity_series().write_csv(BufWriter::new(fs::File::create(series.join(format!("f_{stem}.csv")))?))?;
        }
        self.write_series(&dir.join("avg_C.csv"), |r| (&r.mean_c, &r.stderr_c))?;
        self.write_series(&dir.join("avg_f.csv"), |r| (&r.mean_f, &r.stderr_f))?;

        let mut w = BufWriter::new(fs::File::create(dir.join("scan_table.csv"))?);
        writeln!(w, "J,n,gamma,C_inf,C_inf_stderr,t_c,stable_flag")?;
        for p in &self.points {
            let r = &p.result;
            let tc = p.t_c(self.tc_mode).map(fmt_num).unwrap_or_default();
            let stable = r.stable().map(|s| (s as u8).to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_num(p.j),
                p.n,
                fmt_num(p.gamma),
                fmt_num(r.c_inf),
                fmt_num(r.c_inf_stderr),
                tc,
                stable
            )?;
        }
        w.flush()?;

        fs::write(dir.join("fits.json"), serde_json::to_string_pretty(&self.fits)?)?;
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&self.manifest())?)?;
        Ok(())
    }

    fn write_series(&self, path: &Path, pick: impl Fn(&EnsembleResult) -> (&Vec<f64>, &Vec<f64>)) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        writeln!(w, "J,n,gamma,t,value,stderr")?;
        for p in &self.points {
            let (vals, errs) = pick(&p.result);
            for ((t, v), e) in p.result.times.iter().zip(vals).zip(errs) {
                writeln!(w, "{},{},{},{},{},{}", fmt_num(p.j), p.n, fmt_num(p.gamma), fmt_num(*t), fmt_num(*v), fmt_num(*e))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    fn manifest(&self) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| {
                serde_json::json!({
                    "J": p.j,
                    "n": p.n,
                    "gamma": p.gamma,
                    "n_realizations": p.result.n_realizations,
                    "seeds": p.result.seeds,
                    "samples": p.result.times.len(),
                    "t_max": p.result.times.last(),
                    "c_inf_doubled": p.result.c_inf_doubled,
                    "crossings": p.result.crossing_count(),
                    "wall_time_s": p.result.wall_time_s,
                })
            })
            .collect();
        serde_json::json!({
            "tool": "entlat",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.base,
            "tc_mode": self.tc_mode,
            "points": points,
            "wall_time_s": self.wall_time_s,
        })
    }
}

/// Explicit fit windows; `None` picks the default derived from
/// [`model_decay_rates`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FitWindows {
    pub fgr: Option<(f64, f64)>,
    pub ergodic: Option<(f64, f64)>,
    pub crossover: Option<(f64, f64)>,
    pub perturbative: Option<(f64, f64)>,
}

/// Runs every combination of `n`, `γ` and `J` (in that nesting order).
pub fn scan_grid(config: &EnsembleConfig, n_values: &[usize], gammas: &[f64], j_values: &[f64]) -> Result<ScanResult> {
    if j_values.is_empty() || n_values.is_empty() || gammas.is_empty() {
        return Err(Error::Config("scan axes must not be empty".into()));
    }
    if j_values.iter().any(|&j| !(j > 0.0 && j.is_finite())) || j_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("J values must be positive and ascending".into()));
    }
    if let Some(n) = n_values.iter().find(|&&n| n % 2 != 0) {
        return Err(Error::Config(format!("scan qubit counts must be even, got {n}")));
    }
    let mut configs = Vec::new();
    for &n in n_values {
        for &gamma in gammas {
            for &j in j_values {
                let mut c = config.clone();
                let rows = c.params.rows.max(1);
                c.params = ModelParams { n, gamma, j_strength: j, rows, cols: n / rows, ..c.params.clone() };
                if n % rows != 0 {
                    return Err(Error::Config(format!("{n} qubits do not fill {rows} rows")));
                }
                c.validate()?;
                configs.push(c);
            }
        }
    }
    let start = Instant::now();
    let results: Vec<Result<EnsembleResult>> =
        with_pool(config.workers, || configs.par_iter().map(run_in_pool).collect())?;
    let mut points = Vec::with_capacity(results.len());
    for (c, r) in configs.iter().zip(results) {
        let (n, gamma, j) = (c.params.n, c.params.gamma, c.params.j_strength);
        let result = r.map_err(|e| Error::ScanPoint { n, gamma, j, source: Box::new(e) })?;
        points.push(ScanPoint { j, n, gamma, result });
    }
    Ok(ScanResult {
        base: config.clone(),
        tc_mode: TcMode::AveragedCurve,
        points,
        fits: BTreeMap::new(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn scan_j(config: &EnsembleConfig, j_values: &[f64]) -> Result<ScanResult> {
    scan_grid(config, &[config.params.n], &[config.params.gamma], j_values)
}

pub fn scan_n(config: &EnsembleConfig, n_values: &[usize]) -> Result<ScanResult> {
    scan_grid(config, n_values, &[config.params.gamma], &[config.params.j_strength])
}

/// Eigenstate entropies of the Hamiltonian pooled over realizations.
pub fn pooled_eigenstate_entropy(config: &EnsembleConfig) -> Result<Vec<f64>> {
    let setup = Setup::new(config)?;
    let per: Vec<Result<Vec<f64>>> = with_pool(config.workers, || {
        (0..config.n_realizations)
            .into_par_iter()
            .map(|r| {
                let seed = config.realization_seed(r);
                let wrap = |e: Error| Error::Realization { index: r, seed, source: Box::new(e) };
                let h = setup.hamiltonian(config, seed).map_err(wrap)?;
                let es = diagonalize(&h, config.dense_cap).map_err(wrap)?;
                Ok(eigenstate_entropy(&es))
            })
            .collect()
    })?;
    let mut all = Vec::new();
    for p in per {
        all.extend(p?);
    }
    Ok(all)
}
