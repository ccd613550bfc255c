//! Lattice geometry and disorder realizations.
//!
//! Sites are numbered row-major starting at the top-left corner, so the
//! tracked pair (sites 1 and 2, indices 0 and 1 here) is a horizontal bond
//! on the upper border. Boundaries are free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count the crate accepts.
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of qubits.
    pub n: usize,
    /// Anisotropy: 1 is the Ising-like coupling, 0 the XY coupling.
    pub gamma: f64,
    /// Width of the on-site offset distribution.
    pub delta: f64,
    /// Couplings are drawn from `[-j_strength, j_strength]`.
    pub j_strength: f64,
    /// Mean level spacing; energies are quoted in its units.
    pub delta0: f64,
    pub rows: usize,
    pub cols: usize,
}

impl ModelParams {
    /// A `2 × n/2` ladder with `Δ₀ = 1`.
    pub fn new(n: usize, gamma: f64, delta: f64, j_strength: f64) -> Self {
        ModelParams {
            n,
            gamma,
            delta,
            j_strength,
            delta0: 1.0,
            rows: 2,
            cols: n / 2,
        }
    }

    pub fn with_shape(mut self, rows: usize, cols: usize) -> Self {
        self.rows = rows;
        self.cols = cols;
        self
    }

    pub fn with_j(mut self, j_strength: f64) -> Self {
        self.j_strength = j_strength;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "qubit count must be even and at least 2, got {}",
                self.n
            )));
        }
        if self.n > MAX_QUBITS {
            return Err(Error::Config(format!(
                "qubit count {} exceeds the maximum of {MAX_QUBITS}",
                self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!("delta must be >= 0, got {}", self.delta)));
        }
        if !(self.j_strength >= 0.0 && self.j_strength.is_finite()) {
            return Err(Error::Config(format!(
                "coupling strength must be >= 0, got {}",
                self.j_strength
            )));
        }
        if !(self.delta0 > 0.0 && self.delta0.is_finite()) {
            return Err(Error::Config(format!("delta0 must be > 0, got {}", self.delta0)));
        }
        if self.rows * self.cols != self.n {
            return Err(Error::Config(format!(
                "lattice {}x{} does not hold {} qubits",
                self.rows, self.cols, self.n
            )));
        }
        Ok(())
    }
}

/// Nearest-neighbour bond between 0-based sites `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col)` of each site, in site order.
    pub sites: Vec<(usize, usize)>,
    pub bonds: Vec<Bond>,
}

impl LatticeGeometry {
    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn n_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_border(&self, site: usize) -> bool {
        let (r, c) = self.sites[site];
        r == 0 || c == 0 || r + 1 == self.rows || c + 1 == self.cols
    }
}

/// Rectangular lattice with row-major numbering and free boundaries.
///
/// Horizontal bonds are listed row by row, followed by the vertical bonds.
pub fn build_geometry(params: &ModelParams) -> Result<LatticeGeometry> {
    params.validate()?;
    let (rows, cols) = (params.rows, params.cols);
    let site = |r: usize, c: usize| r * cols + c;

    let sites = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .collect();

    let mut bonds = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            bonds.push(Bond { i: site(r, c), j: site(r, c + 1) });
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            bonds.push(Bond { i: site(r, c), j: site(r + 1, c) });
        }
    }

    Ok(LatticeGeometry { rows, cols, sites, bonds })
}

/// One draw of the on-site offsets and bond couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    /// Offsets δ_i, one per site, in `[-δ/2, δ/2]`.
    pub deltas: Vec<f64>,
    /// Couplings J_ij, one per bond in geometry order, in `[-J, J]`.
    pub couplings: Vec<f64>,
    pub seed: u64,
}

impl DisorderRealization {
    /// On-site level spacings Δ_i = Δ₀ + δ_i.
    pub fn level_spacings(&self, delta0: f64) -> Vec<f64> {
        self.deltas.iter().map(|d| delta0 + d).collect()
    }
}

/// Draws one realization. The offsets are drawn before the couplings, both
/// from a ChaCha8 stream keyed by `seed`.
pub fn draw_disorder(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    seed: u64,
) -> DisorderRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = params.delta / 2.0;
    let deltas = (0..geometry.n())
        .map(|_| uniform(&mut rng, -half, half))
        .collect();
    let couplings = (0..geometry.n_bonds())
        .map(|_| uniform(&mut rng, -params.j_strength, params.j_strength))
        .collect();
    DisorderRealization { deltas, couplings, seed }
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index` within an ensemble keyed by `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Audit record of a realization together with its lattice, with 1-based
/// site labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub bonds: Vec<[usize; 2]>,
    pub deltas: Vec<f64>,
    pub couplings: Vec<f64>,
    pub seed: u64,
}

impl RealizationRecord {
    pub fn new(geometry: &LatticeGeometry, disorder: &DisorderRealization) -> Self {
        RealizationRecord {
            n: geometry.n(),
            rows: geometry.rows,
            cols: geometry.cols,
            bonds: geometry.bonds.iter().map(|b| [b.i + 1, b.j + 1]).collect(),
            deltas: disorder.deltas.clone(),
            couplings: disorder.couplings.clone(),
            seed: disorder.seed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Splits the record back into geometry and disorder.
    pub fn into_parts(self) -> Result<(LatticeGeometry, DisorderRealization)> {
        if self.rows * self.cols != self.n || self.deltas.len() != self.n {
            return Err(Error::Config("inconsistent realization record".into()));
        }
        if self.couplings.len() != self.bonds.len() {
            return Err(Error::Config("bond and coupling counts differ".into()));
        }
        let mut bonds = Vec::with_capacity(self.bonds.len());
        for [i, j] in &self.bonds {
            if *i == 0 || *j == 0 || *i > self.n || *j > self.n || i >= j {
                return Err(Error::Config(format!("invalid bond ({i}, {j})")));
            }
            bonds.push(Bond { i: i - 1, j: j - 1 });
        }
        let cols = self.cols;
        let sites = (0..self.n).map(|s| (s / cols, s % cols)).collect();
        Ok((
            LatticeGeometry { rows: self.rows, cols: self.cols, sites, bonds },
            DisorderRealization { deltas: self.deltas, couplings: self.couplings, seed: self.seed },
        ))
    }
}
