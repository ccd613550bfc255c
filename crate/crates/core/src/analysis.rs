//! Regime fits over scan tables and reference models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DisorderRealization, ModelParams};
use crate::observables::{RegimeEstimates, SeriesLabel, TimeSeries};
use crate::oracle;
use crate::propagator::TimeGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParameter {
    pub name: String,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub parameters: Vec<FitParameter>,
    pub window: (f64, f64),
    /// Points that entered the fit, as `(x, y)`.
    pub points: Vec<(f64, f64)>,
    /// Euclidean norm of the residuals in the linearised coordinates.
    pub residual_norm: f64,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<&FitParameter> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn value(&self, name: &str) -> f64 {
        self.param(name).map_or(f64::NAN, |p| p.value)
    }
}

struct Line {
    slope: f64,
    intercept: f64,
    slope_se: f64,
    intercept_se: f64,
    cov: f64,
    residual_norm: f64,
}

/// Ordinary least squares `y = intercept + slope·x`.
fn ols(xs: &[f64], ys: &[f64]) -> Result<Line> {
    let m = xs.len();
    if m < 2 {
        return Err(Error::DegenerateWindow(format!("{m} point(s) in the fit window")));
    }
    let mf = m as f64;
    let xbar = xs.iter().sum::<f64>() / mf;
    let ybar = ys.iter().sum::<f64>() / mf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateWindow("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let s2 = if m > 2 { rss / (mf - 2.0) } else { 0.0 };
    Ok(Line {
        slope,
        intercept,
        slope_se: (s2 / sxx).sqrt(),
        intercept_se: (s2 * (1.0 / mf + xbar * xbar / sxx)).sqrt(),
        cov: -xbar * s2 / sxx,
        residual_norm: rss.sqrt(),
    })
}

fn in_window(points: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DegenerateWindow(format!("window [{lo}, {hi}]")));
    }
    let tol = 1e-9 * hi.abs().max(lo.abs());
    Ok(points.iter().copied().filter(|&(x, _)| x >= lo - tol && x <= hi + tol).collect())
}

/// Minimum number of points for [`fit_power_law`].
pub const POWER_LAW_MIN_POINTS: usize = 4;

/// Fits `y = B·x^p` by least squares in log-log coordinates.
pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let pts = in_window(points, window)?;
    if pts.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::DegenerateWindow("power-law fit needs positive data".into()));
    }
    if pts.len() < POWER_LAW_MIN_POINTS {
        return Err(Error::DegenerateWindow(format!(
            "{} point(s) in [{}, {}], need {POWER_LAW_MIN_POINTS}",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let line = ols(&xs, &ys)?;
    let prefactor = line.intercept.exp();
    Ok(FitResult {
        model: "power_law".into(),
        parameters: vec![
            FitParameter { name: "exponent".into(), value: line.slope, stderr: line.slope_se },
            FitParameter { name: "prefactor".into(), value: prefactor, stderr: prefactor * line.intercept_se },
        ],
        window,
        points: pts,
        residual_norm: line.residual_norm,
    })
}

/// Fits `C∞(J) = exp(-A (J - J₀))` through `ln C∞ = A J₀ - A J`.
/// Nonpositive `C∞` values are excluded with a warning.
pub fn fit_exponential_cinf(points: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let mut pts = in_window(points, window)?;
    let before = pts.len();
    pts.retain(|&(_, c)| c > 0.0);
    if pts.len() < before {
        log::warn!("exponential C_inf fit: excluded {} point(s) with C_inf <= 0", before - pts.len());
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateWindow(format!("{} usable point(s) in [{}, {}]", pts.len(), window.0, window.1)));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let line = ols(&xs, &ys)?;
    let a = -line.slope;
    if a == 0.0 {
        return Err(Error::DegenerateWindow("flat C_inf, J0 undefined".into()));
    }
    let j0 = line.intercept / a;
    // delta method on J0 = -intercept/slope
    let (gi, gs) = (1.0 / a, line.intercept / (a * a));
    let var_j0 = gi * gi * line.intercept_se.powi(2) + gs * gs * line.slope_se.powi(2) + 2.0 * gi * gs * line.cov;
    Ok(FitResult {
        model: "exponential_cinf".into(),
        parameters: vec![
            FitParameter { name: "A".into(), value: a, stderr: line.slope_se },
            FitParameter { name: "J0".into(), value: j0, stderr: var_j0.max(0.0).sqrt() },
        ],
        window,
        points: pts,
        residual_norm: line.residual_norm,
    })
}

/// Survival amplitude model `∏_bonds cos(J_ij t)`.
pub fn overlap_amplitude_model(disorder: &DisorderRealization, t: f64) -> f64 {
    disorder.couplings.iter().map(|j| (j * t).cos()).product()
}

/// Strong-coupling fidelity reference `∏_bonds cos²(J_ij t)`, the squared
/// modulus of [`overlap_amplitude_model`]; its short-time form is the
/// Gaussian `exp(-Σ J_ij² t²)`.
pub fn model_fidelity_gaussian(disorder: &DisorderRealization, t: f64) -> f64 {
    overlap_amplitude_model(disorder, t).powi(2)
}

pub fn model_decay_rates(params: &ModelParams) -> Result<RegimeEstimates> {
    let (d, n, j) = (params.delta, params.n as f64, params.j_strength);
    if !(d > 0.0) {
        return Err(Error::Undefined(format!("regime estimates need delta > 0, got {d}")));
    }
    Ok(RegimeEstimates { j_p: d / n, j_e: d, gamma_c: j * j / d, rho_c: 1.0 / d, rho_f: n / d })
}

/// Default window for the `t_c ∝ J⁻²` fit: `[J_p/10, J_p]`.
pub fn fgr_window(est: &RegimeEstimates) -> (f64, f64) {
    (est.j_p / 10.0, est.j_p)
}

/// Alternative FGR window `[J_p, J_E/2]`.
pub fn fgr_window_upper(est: &RegimeEstimates) -> (f64, f64) {
    (est.j_p, est.j_e / 2.0)
}

/// Default window for the `t_c ∝ J⁻¹` fit: `[2 J_E, j_max]`.
pub fn ergodic_window(est: &RegimeEstimates, j_max: f64) -> (f64, f64) {
    (2.0 * est.j_e, j_max)
}

/// Crossover window `[J_p, J_E]`.
pub fn crossover_window(est: &RegimeEstimates) -> (f64, f64) {
    (est.j_p, est.j_e)
}

/// Closed-form concurrence of two qubits with level asymmetry `d` and
/// coupling `j`, started from `|01⟩`.
pub fn two_qubit_oracle(d: f64, j: f64, grid: &TimeGrid) -> Result<TimeSeries> {
    if d == 0.0 && j == 0.0 {
        return Err(Error::Undefined("two-qubit oracle needs d or j nonzero".into()));
    }
    let times = grid.samples().to_vec();
    let values = times.iter().map(|&t| oracle::rabi_concurrence(d, j, t)).collect();
    TimeSeries::new(times, values, SeriesLabel::Concurrence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: impl Fn(f64) -> f64, xs: &[f64]) -> Vec<(f64, f64)> {
        xs.iter().map(|&x| (x, f(x))).collect()
    }

    #[test]
    fn exact_power_laws() {
        let js = [1e-3, 2e-3, 5e-3, 1e-2, 2e-2];
        let fit = fit_power_law(&table(|j| 3.0 / (j * j), &js), (1e-3, 2e-2)).unwrap();
        assert!((fit.value("exponent") + 2.0).abs() < 1e-6);
        assert!((fit.value("prefactor") - 3.0).abs() < 1e-6);
        assert!(fit.residual_norm < 1e-10);
        let fit = fit_power_law(&table(|j| 5.0 / j, &js), (0.0, 1.0)).unwrap();
        assert!((fit.value("exponent") + 1.0).abs() < 1e-12);
        assert!(fit.param("exponent").unwrap().stderr < 1e-9);
    }

    #[test]
    fn power_law_window_errors() {
        let pts = table(|j| 1.0 / j, &[1e-3, 2e-3, 5e-3, 1e-2]);
        assert!(matches!(fit_power_law(&pts, (1e-3, 5e-3)), Err(Error::DegenerateWindow(_))));
        assert!(fit_power_law(&pts, (1e-2, 1e-3)).is_err());
        let bad = vec![(1e-3, 1.0), (2e-3, -1.0), (3e-3, 1.0), (4e-3, 1.0)];
        assert!(fit_power_law(&bad, (0.0, 1.0)).is_err());
    }

    #[test]
    fn exact_exponential() {
        let js = [0.01, 0.02, 0.05, 0.1, 0.15];
        let fit = fit_exponential_cinf(&table(|j| (-20.0 * (j - 1e-3)).exp(), &js), (0.0, 1.0)).unwrap();
        assert!((fit.value("A") - 20.0).abs() < 1e-10);
        assert!((fit.value("J0") - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn exponential_excludes_nonpositive_and_degenerate() {
        let mut pts = table(|j| (-10.0 * j).exp(), &[0.1, 0.2, 0.3]);
        pts.push((0.25, 0.0));
        let fit = fit_exponential_cinf(&pts, (0.0, 1.0)).unwrap();
        assert_eq!(fit.points.len(), 3);
        assert!((fit.value("A") - 10.0).abs() < 1e-10);
        assert!(matches!(fit_exponential_cinf(&pts[..1], (0.0, 1.0)), Err(Error::DegenerateWindow(_))));
    }

    #[test]
    fn j0_stderr_is_finite() {
        let pts = vec![(0.02, 0.62), (0.05, 0.35), (0.1, 0.13), (0.15, 0.06), (0.2, 0.021)];
        let fit = fit_exponential_cinf(&pts, (0.0, 1.0)).unwrap();
        let se = fit.param("J0").unwrap().stderr;
        assert!(se.is_finite() && se > 0.0);
    }

    #[test]
    fn fidelity_models() {
        let d = DisorderRealization { deltas: vec![0.0; 2], couplings: vec![0.3], seed: 0 };
        assert_eq!(model_fidelity_gaussian(&d, 0.0), 1.0);
        let t = 1.7;
        assert_eq!(overlap_amplitude_model(&d, t), (0.3 * t).cos());
        assert!((model_fidelity_gaussian(&d, t) - (0.3 * t).cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn regime_estimates() {
        let p = ModelParams::new(10, 1.0, 0.2, 0.01);
        let e = model_decay_rates(&p).unwrap();
        assert!((e.j_p - 0.02).abs() < 1e-15);
        assert_eq!(e.j_e, 0.2);
        assert!((e.gamma_c - 5e-4).abs() < 1e-15);
        assert!(e.j_p <= e.j_e);
        let e20 = model_decay_rates(&ModelParams::new(20, 1.0, 0.2, 0.01)).unwrap();
        assert!((e20.j_p - e.j_p / 2.0).abs() < 1e-15);
        assert_eq!(e20.j_e, e.j_e);
        assert!(matches!(model_decay_rates(&ModelParams::new(10, 1.0, 0.0, 0.01)), Err(Error::Undefined(_))));
    }

    #[test]
    fn oracle_limits() {
        let (d, j) = (0.2, 1e-3);
        let grid = TimeGrid::uniform(100.0, 20001).unwrap();
        let s = two_qubit_oracle(d, j, &grid).unwrap();
        let peak = s.values.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 2.0 * j / d).abs() < 1e-3 * 2.0 * j / d);
        // first zero after t = 0 sits at π/Ω
        let omega = (d * d + j * j).sqrt();
        let pi = std::f64::consts::PI;
        let zero = s
            .times
            .iter()
            .zip(&s.values)
            .filter(|(&t, _)| t > 0.5 * pi / omega && t < 1.5 * pi / omega)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((zero - pi / d).abs() < 0.02);

        let short = TimeGrid::uniform(1e-3, 11).unwrap();
        for (t, c) in short.samples().iter().zip(two_qubit_oracle(d, j, &short).unwrap().values) {
            assert!((c - 2.0 * j * t).abs() <= 1e-6 * 2.0 * j * t.max(1e-300) + 1e-18);
        }
        let res = two_qubit_oracle(0.0, 0.3, &grid).unwrap();
        for (t, c) in res.times.iter().zip(&res.values) {
            assert!((c - (0.6 * t).sin().abs()).abs() < 1e-12);
        }
        assert!(two_qubit_oracle(0.0, 0.0, &grid).is_err());
    }
}
