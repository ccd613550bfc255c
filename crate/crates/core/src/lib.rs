//! Entanglement dynamics of a disordered qubit lattice.
//!
//! The crate builds the random-coupling spin Hamiltonian on a rectangular
//! lattice, evolves the two standard initial states (a Bell pair or a
//! separable pair embedded in a Néel background), and tracks the pairwise
//! concurrence and fidelity of qubits 1 and 2. Disorder ensembles and
//! parameter scans sit on top, together with the regime fits used to read
//! off perturbative, golden-rule and ergodic behaviour.
//!
//! Energies are in units of the mean level spacing Δ₀ and ħ = 1.

pub mod analysis;
pub mod ensemble;
pub mod error;
pub mod hamiltonian;
pub mod hilbert;
pub mod lattice;
pub mod observables;
pub mod oracle;
pub mod propagator;
pub mod selftest;

pub use error::{Error, Result};

pub use analysis::{FitParameter, FitResult};
pub use ensemble::{
    EnsembleConfig, EnsembleResult, Evolution, FitWindows, GridSpec, PropagatorKind, ScanPoint, ScanResult,
    TcMode,
};
pub use hamiltonian::SparseHamiltonian;
pub use hilbert::{
    Basis, BasisKind, InitialKind, PairReducer, RegisterState, SectorBasis, StateVector,
    TwoQubitDensityMatrix,
};
pub use lattice::{Bond, DisorderRealization, LatticeGeometry, ModelParams};
pub use observables::{ConcurrenceResult, RegimeEstimates, SeriesLabel, TimeSeries};
pub use propagator::{Eigensystem, KrylovOptions, TimeGrid};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
