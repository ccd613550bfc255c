//! Register-state bases, initial states and the two-qubit partial trace.
//!
//! Qubit `q` (0-based site index) is stored at bit position `n - 1 - q`, so
//! qubit 1 is the most significant bit. Bit value 0 is spin up
//! (σ^z = +1) and 1 is spin down.

use std::fmt;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::MAX_QUBITS;
use crate::C64;

/// Computational basis state, qubit 1 in the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegisterState(pub u32);

impl RegisterState {
    /// Bit value (0 or 1) of qubit `q` in an `n`-qubit register.
    #[inline]
    pub fn bit(self, n: usize, q: usize) -> u32 {
        (self.0 >> (n - 1 - q)) & 1
    }

    /// σ^z eigenvalue of qubit `q`.
    #[inline]
    pub fn spin(self, n: usize, q: usize) -> f64 {
        if self.bit(n, q) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Flips qubits `a` and `b`.
    #[inline]
    pub fn flip_pair(self, n: usize, a: usize, b: usize) -> RegisterState {
        RegisterState(self.0 ^ (1 << (n - 1 - a)) ^ (1 << (n - 1 - b)))
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Parses a bit string such as `"0101"` (qubit 1 first).
    pub fn from_bits(bits: &str) -> Option<RegisterState> {
        if bits.is_empty() || bits.len() > MAX_QUBITS {
            return None;
        }
        u32::from_str_radix(bits, 2).ok().map(RegisterState)
    }

    pub fn to_bits(self, n: usize) -> String {
        format!("{:0width$b}", self.0, width = n)
    }
}

fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) || n > MAX_QUBITS {
        return Err(Error::Config(format!(
            "zero-magnetization basis needs an even qubit count in 2..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

/// All register states with exactly `n/2` ones, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n: usize,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_even(n)?;
        let half = (n / 2) as u32;
        let states = (0u32..(1u32 << n)).filter(|s| s.count_ones() == half).collect();
        Ok(SectorBasis { n, states })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, k: usize) -> RegisterState {
        RegisterState(self.states[k])
    }

    pub fn states(&self) -> impl Iterator<Item = RegisterState> + '_ {
        self.states.iter().map(|&s| RegisterState(s))
    }

    pub fn index_of(&self, state: RegisterState) -> Option<usize> {
        self.states.binary_search(&state.0).ok()
    }
}

/// Which basis a state vector is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Full,
    Sector,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Full => f.write_str("full"),
            BasisKind::Sector => f.write_str("sector"),
        }
    }
}

/// Either the whole `2ⁿ` register space or the zero-magnetization sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    Full { n: usize },
    Sector(SectorBasis),
}

impl Basis {
    pub fn full(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Config(format!("qubit count must be in 1..={MAX_QUBITS}, got {n}")));
        }
        Ok(Basis::Full { n })
    }

    pub fn sector(n: usize) -> Result<Self> {
        Ok(Basis::Sector(SectorBasis::new(n)?))
    }

    pub fn n(&self) -> usize {
        match self {
            Basis::Full { n } => *n,
            Basis::Sector(s) => s.n(),
        }
    }

    pub fn kind(&self) -> BasisKind {
        match self {
            Basis::Full { .. } => BasisKind::Full,
            Basis::Sector(_) => BasisKind::Sector,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Full { n } => 1 << n,
            Basis::Sector(s) => s.dim(),
        }
    }

    pub fn state(&self, k: usize) -> RegisterState {
        match self {
            Basis::Full { .. } => RegisterState(k as u32),
            Basis::Sector(s) => s.state(k),
        }
    }

    pub fn index_of(&self, state: RegisterState) -> Option<usize> {
        match self {
            Basis::Full { n } => ((state.0 as usize) < (1 << n)).then_some(state.0 as usize),
            Basis::Sector(s) => s.index_of(state),
        }
    }

    pub fn check(&self, state: &StateVector) -> Result<()> {
        if state.kind != self.kind() || state.n != self.n() {
            return Err(Error::BasisMismatch(format!(
                "state is a {} vector on {} qubits, basis is {} on {}",
                state.kind,
                state.n,
                self.kind(),
                self.n()
            )));
        }
        if state.amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.amplitudes.len(),
            });
        }
        Ok(())
    }
}

/// Complex amplitudes over a register basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub kind: BasisKind,
    pub n: usize,
    pub amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zeros(basis: &Basis) -> Self {
        StateVector {
            kind: basis.kind(),
            n: basis.n(),
            amplitudes: vec![C64::new(0.0, 0.0); basis.dim()],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let nrm = self.norm();
        if nrm > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= nrm);
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.same_space(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn same_space(&self, other: &StateVector) -> Result<()> {
        if self.kind != other.kind || self.n != other.n {
            return Err(Error::BasisMismatch(format!(
                "{} vector on {} qubits vs {} vector on {}",
                self.kind, self.n, other.kind, other.n
            )));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let dump = StateDump {
            basis: self.kind,
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        };
        Ok(serde_json::to_string(&dump)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dump: StateDump = serde_json::from_str(text)?;
        let basis = match dump.basis {
            BasisKind::Full => Basis::full(dump.n)?,
            BasisKind::Sector => Basis::sector(dump.n)?,
        };
        let state = StateVector {
            kind: dump.basis,
            n: dump.n,
            amplitudes: dump.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        };
        basis.check(&state)?;
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct StateDump {
    basis: BasisKind,
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

/// The two initial states of the tracked pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// `(|01⟩ + |10⟩)/√2 ⊗ |0101…01⟩`
    Bell,
    /// `|01⟩ ⊗ |0101…01⟩`
    Separable,
}

impl std::str::FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(InitialKind::Bell),
            "separable" => Ok(InitialKind::Separable),
            other => Err(Error::Config(format!(
                "unknown initial state `{other}` (expected `bell` or `separable`)"
            ))),
        }
    }
}

/// Register state with qubits 1, 2 set to `pair` (two bits) and the rest in
/// the alternating pattern `0101…01`.
pub fn register_with_pair(n: usize, pair: u32) -> RegisterState {
    let rest_len = n - 2;
    let mut rest = 0u32;
    for k in 0..rest_len {
        // qubit 3 + k holds 0 for even k, 1 for odd k
        rest = (rest << 1) | (k as u32 & 1);
    }
    RegisterState((pair << rest_len) | rest)
}

pub fn initial_state(kind: InitialKind, basis: &Basis) -> Result<StateVector> {
    let n = basis.n();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!("initial states need an even qubit count, got {n}")));
    }
    let mut psi = StateVector::zeros(basis);
    let mut put = |state: RegisterState, amp: f64| -> Result<()> {
        let k = basis.index_of(state).ok_or_else(|| {
            Error::BasisMismatch(format!("{} is not in the {} basis", state.to_bits(n), basis.kind()))
        })?;
        psi.amplitudes[k] = C64::new(amp, 0.0);
        Ok(())
    };
    match kind {
        InitialKind::Bell => {
            let a = std::f64::consts::FRAC_1_SQRT_2;
            put(register_with_pair(n, 0b01), a)?;
            put(register_with_pair(n, 0b10), a)?;
        }
        InitialKind::Separable => put(register_with_pair(n, 0b01), 1.0)?,
    }
    Ok(psi)
}

/// Full-space vector from a sector vector.
pub fn embed_sector(state: &StateVector, sector: &SectorBasis) -> Result<StateVector> {
    Basis::Sector(sector.clone()).check(state)?;
    let mut full = vec![C64::new(0.0, 0.0); 1 << sector.n()];
    for (k, s) in sector.states().enumerate() {
        full[s.0 as usize] = state.amplitudes[k];
    }
    Ok(StateVector { kind: BasisKind::Full, n: sector.n(), amplitudes: full })
}

/// Sector vector from a full-space vector; fails if more than `1e-10` of
/// the weight lies outside the sector.
pub fn project_sector(state: &StateVector, sector: &SectorBasis) -> Result<StateVector> {
    Basis::full(sector.n())?.check(state)?;
    let amplitudes: Vec<C64> = sector.states().map(|s| state.amplitudes[s.0 as usize]).collect();
    let kept: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let lost = (state.norm_sqr() - kept).max(0.0);
    if lost > 1e-10 {
        return Err(Error::DataLoss { weight: lost });
    }
    Ok(StateVector { kind: BasisKind::Sector, n: sector.n(), amplitudes })
}

/// Σ_q ⟨σ_q^z⟩ of a state.
pub fn total_magnetization(state: &StateVector, basis: &Basis) -> Result<f64> {
    basis.check(state)?;
    let n = basis.n();
    Ok(state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * (n as f64 - 2.0 * basis.state(k).weight() as f64))
        .sum())
}

/// Reduced density matrix of two qubits in the basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensityMatrix {
    entries: Matrix4<C64>,
}

impl TwoQubitDensityMatrix {
    /// Validated constructor: Hermitian within `1e-12`, unit trace within
    /// `1e-10`, no eigenvalue below `-1e-10`.
    pub fn new(entries: Matrix4<C64>) -> Result<Self> {
        let rho = TwoQubitDensityMatrix { entries };
        let herm = rho.hermiticity_defect();
        if herm > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(rho)
    }

    /// Wraps a matrix without checks.
    pub fn from_raw(entries: Matrix4<C64>) -> Self {
        TwoQubitDensityMatrix { entries }
    }

    /// Projector onto a pure two-qubit state with amplitudes over
    /// `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn pure(amps: [C64; 4]) -> Self {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] = amps[a] * amps[b].conj();
            }
        }
        TwoQubitDensityMatrix { entries: m }
    }

    pub fn entries(&self) -> &Matrix4<C64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|k| self.entries[(k, k)].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max((self.entries[(a, b)] - self.entries[(b, a)].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let ev = h.symmetric_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }
}

/// Precomputed index table for tracing a basis down to two qubits.
#[derive(Debug, Clone)]
pub struct PairReducer {
    /// `(row index, column index, a, b)` contributions
    /// ρ[a][b] += ψ[row] ψ[col]*.
    terms: Vec<(usize, usize, u8, u8)>,
    dim: usize,
    kind: BasisKind,
    n: usize,
}

impl PairReducer {
    /// Reducer onto qubits `q1`, `q2` (0-based, distinct); `q1` is the more
    /// significant index of the reduced basis.
    pub fn new(basis: &Basis, q1: usize, q2: usize) -> Result<Self> {
        let n = basis.n();
        if q1 >= n || q2 >= n || q1 == q2 {
            return Err(Error::Config(format!("invalid qubit pair ({q1}, {q2}) for n = {n}")));
        }
        let m1 = 1u32 << (n - 1 - q1);
        let m2 = 1u32 << (n - 1 - q2);
        let pair_bits = |s: u32| -> u8 { (((s & m1 != 0) as u8) << 1) | (s & m2 != 0) as u8 };
        let with_pair = |s: u32, p: u8| -> u32 {
            let mut t = s & !(m1 | m2);
            if p & 2 != 0 {
                t |= m1;
            }
            if p & 1 != 0 {
                t |= m2;
            }
            t
        };
        let mut terms = Vec::new();
        for k in 0..basis.dim() {
            let s = basis.state(k).0;
            let a = pair_bits(s);
            for b in 0..4u8 {
                if let Some(l) = basis.index_of(RegisterState(with_pair(s, b))) {
                    terms.push((k, l, a, b));
                }
            }
        }
        Ok(PairReducer { terms, dim: basis.dim(), kind: basis.kind(), n })
    }

    pub fn reduce(&self, state: &StateVector) -> Result<TwoQubitDensityMatrix> {
        if state.kind != self.kind || state.n != self.n {
            return Err(Error::BasisMismatch("state does not match reducer basis".into()));
        }
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: state.dim() });
        }
        Ok(self.reduce_amplitudes(&state.amplitudes))
    }

    pub fn reduce_amplitudes(&self, psi: &[C64]) -> TwoQubitDensityMatrix {
        let mut m = Matrix4::<C64>::zeros();
        for &(k, l, a, b) in &self.terms {
            m[(a as usize, b as usize)] += psi[k] * psi[l].conj();
        }
        TwoQubitDensityMatrix { entries: m }
    }
}

/// ρ₁₂ of qubits 1 and 2.
pub fn reduce_to_pair(state: &StateVector, basis: &Basis) -> Result<TwoQubitDensityMatrix> {
    PairReducer::new(basis, 0, 1)?.reduce(state)
}
