//! Pairwise concurrence, fidelity, eigenstate entropy, saturation value and
//! the concurrence time scale.

use std::io::Write;

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{StateVector, TwoQubitDensityMatrix};
use crate::propagator::Eigensystem;
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const NEGATIVE_TOL: f64 = 1e-10;
/// Eigenvalues below this are indistinguishable from zero in a 4×4 solve.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Default threshold defining `t_c`.
pub const TC_THRESHOLD: f64 = 0.96;
/// Default trailing-window fraction for `C∞`.
pub const SATURATION_FRACTION: f64 = 0.1;
/// Largest change of `C∞` under a doubled horizon still counted as saturated.
pub const STABILITY_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the eigenvalues of `ρρ̃`, descending.
    pub lambdas: [f64; 4],
}

/// `σ^y ⊗ σ^y` in the standard basis.
fn sigma_yy() -> Matrix4<C64> {
    let z = C64::new(0.0, 0.0);
    let p = C64::new(1.0, 0.0);
    let m = C64::new(-1.0, 0.0);
    Matrix4::new(
        z, z, z, m, //
        z, z, p, z, //
        z, p, z, z, //
        m, z, z, z,
    )
}

/// Spin-flipped matrix `ρ̃ = (σ^y⊗σ^y) ρ* (σ^y⊗σ^y)`.
pub fn spin_flip(rho: &Matrix4<C64>) -> Matrix4<C64> {
    let yy = sigma_yy();
    yy * rho.conjugate() * yy
}

fn clamped_spectrum(m: &Matrix4<C64>, what: &str) -> Result<(nalgebra::Vector4<f64>, Matrix4<C64>)> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut values = eig.eigenvalues;
    for v in values.iter_mut() {
        if *v < -NEGATIVE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("{what} has eigenvalue {v:.3e}")));
        }
        if *v < NOISE_FLOOR {
            *v = 0.0;
        }
    }
    Ok((values, eig.eigenvectors))
}

/// Wootters concurrence `max(λ₁ - λ₂ - λ₃ - λ₄, 0)`.
///
/// The λ's come from the Hermitian product `√ρ ρ̃ √ρ`, which has the same
/// spectrum as `ρρ̃`.
pub fn concurrence(rho: &TwoQubitDensityMatrix) -> Result<ConcurrenceResult> {
    concurrence_with_flip(rho, &sigma_yy())
}

/// [`concurrence`] with an arbitrary flip operator in place of `σ^y⊗σ^y`;
/// exists so the oracle suite can be run against deliberately broken
/// variants.
pub fn concurrence_with_flip(rho: &TwoQubitDensityMatrix, flip: &Matrix4<C64>) -> Result<ConcurrenceResult> {
    let herm = rho.hermiticity_defect();
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {herm:.3e})")));
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace {tr} deviates from 1")));
    }
    let m = rho.entries();
    let (vals, vecs) = clamped_spectrum(m, "rho")?;
    let sqrt_diag = Matrix4::from_diagonal(&vals.map(|v| C64::new(v.sqrt(), 0.0)));
    let sqrt_rho = vecs * sqrt_diag * vecs.adjoint();
    let product = sqrt_rho * (flip * m.conjugate() * flip) * sqrt_rho;
    let (mu, _) = clamped_spectrum(&product, "sqrt(rho) rho~ sqrt(rho)")?;

    let mut lambdas = [mu[0].sqrt(), mu[1].sqrt(), mu[2].sqrt(), mu[3].sqrt()];
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult { value, lambdas })
}

/// `|⟨ψ₀|ψ_t⟩|²`.
pub fn fidelity(psi0: &StateVector, psit: &StateVector) -> Result<f64> {
    Ok(psi0.inner(psit)?.norm_sqr())
}

/// Shannon entropy (bits) of `|c_α|²` for every eigenvector column.
pub fn eigenstate_entropy(es: &Eigensystem) -> Vec<f64> {
    es.eigenvectors
        .column_iter()
        .map(|col| {
            -col.iter()
                .map(|c| c * c)
                .filter(|&p| p > 0.0)
                .map(|p| p * p.log2())
                .sum::<f64>()
        })
        .collect()
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesLabel {
    Concurrence,
    Fidelity,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: SeriesLabel,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: SeriesLabel) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), actual: values.len() });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("series times must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("series values must be finite".into()));
        }
        Ok(TimeSeries { times, values, label })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with header `t,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{},{}", fmt_num(*t), fmt_num(*v))?;
        }
        Ok(())
    }

    pub fn read_csv(text: &str, label: SeriesLabel) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("t,value") {
            return Err(Error::Config("expected header `t,value`".into()));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|x| x.trim().parse().ok())
                    .ok_or_else(|| Error::Config(format!("line {}: malformed row `{line}`", k + 2)))
            };
            let mut parts = line.split(',');
            times.push(parse(parts.next())?);
            values.push(parse(parts.next())?);
        }
        Self::new(times, values, label)
    }
}

/// Number formatting shared by all CSV outputs: 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.14e}")
}

/// Trailing average `(1/τ) ∫_{t-τ}^{t} C dt'` over the last `fraction` of the
/// series span, by trapezoidal quadrature.
pub fn saturation_value(series: &TimeSeries, fraction: f64) -> Result<f64> {
    trailing_average(&series.times, &series.values, fraction)
}

pub fn trailing_average(times: &[f64], values: &[f64], fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config(format!("window fraction must be in (0, 1], got {fraction}")));
    }
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::SeriesTooShort("empty or ragged series".into()));
    }
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let start = t1 - fraction * (t1 - t0);
    let first = times.partition_point(|&t| t < start - 1e-12 * t1.abs().max(1.0));
    let count = times.len() - first;
    if count < 10 {
        return Err(Error::SeriesTooShort(format!("{count} samples in the averaging window, need 10")));
    }
    let (ts, vs) = (&times[first..], &values[first..]);
    let area: f64 = ts
        .windows(2)
        .zip(vs.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum();
    Ok(area / (ts[ts.len() - 1] - ts[0]))
}

/// Whether `C∞` moved by at most [`STABILITY_TOL`] when the horizon doubled.
pub fn saturation_is_stable(c_inf: f64, c_inf_doubled: f64) -> bool {
    (c_inf - c_inf_doubled).abs() <= STABILITY_TOL
}

/// First time the series falls below `threshold`, linearly interpolated
/// between the bracketing samples; `None` if it never does.
pub fn concurrence_timescale(series: &TimeSeries, threshold: f64) -> Option<f64> {
    first_crossing(&series.times, &series.values, threshold)
}

pub fn first_crossing(times: &[f64], values: &[f64], threshold: f64) -> Option<f64> {
    let k = values.iter().position(|&v| v < threshold)?;
    if k == 0 {
        return Some(times[0]);
    }
    let (ta, tb) = (times[k - 1], times[k]);
    let (va, vb) = (values[k - 1], values[k]);
    Some(ta + (va - threshold) / (va - vb) * (tb - ta))
}

/// Order-of-magnitude regime scales of the lattice model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeEstimates {
    /// Perturbative border δ/n.
    pub j_p: f64,
    /// Ergodic border δ.
    pub j_e: f64,
    /// Golden-rule concurrence decay rate J²/δ.
    pub gamma_c: f64,
    /// Density of directly coupled states relevant to the pair, 1/δ.
    pub rho_c: f64,
    /// Density of directly coupled states for the fidelity, n/δ.
    pub rho_f: f64,
}
