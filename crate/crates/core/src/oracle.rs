//! Brute-force and closed-form references.
//!
//! Nothing here shares code with the production paths: Hamiltonians are
//! built from explicit Kronecker products of Pauli matrices and partial
//! traces from the full `2ⁿ × 2ⁿ` projector. Used by the test suites and by
//! `entlat verify`.

use nalgebra::{DMatrix, Matrix4};

use crate::lattice::{DisorderRealization, LatticeGeometry, ModelParams};
use crate::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `op` acting on qubit `q` of `n` (qubit 0 is the leftmost tensor factor).
pub fn embed_single(op: &DMatrix<C64>, q: usize, n: usize) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::identity(1, 1);
    for k in 0..n {
        let factor = if k == q { op.clone() } else { DMatrix::identity(2, 2) };
        out = out.kronecker(&factor);
    }
    out
}

/// Dense Hamiltonian assembled term by term from Pauli operators.
pub fn pauli_hamiltonian(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    disorder: &DisorderRealization,
) -> DMatrix<C64> {
    let n = geometry.n();
    let dim = 1 << n;
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    for q in 0..n {
        h += embed_single(&z, q, n) * c(params.delta0 + disorder.deltas[q], 0.0);
    }
    let g = params.gamma;
    for (bond, &jij) in geometry.bonds.iter().zip(&disorder.couplings) {
        let xx = embed_single(&x, bond.i, n) * embed_single(&x, bond.j, n);
        let yy = embed_single(&y, bond.i, n) * embed_single(&y, bond.j, n);
        h += xx * c(jij * (1.0 + g) / 2.0, 0.0) + yy * c(jij * (1.0 - g) / 2.0, 0.0);
    }
    h
}

/// ρ of qubits 1, 2 from the full projector `|ψ⟩⟨ψ|`.
pub fn dense_partial_trace_first_two(psi: &[C64], n: usize) -> Matrix4<C64> {
    let dim = 1 << n;
    assert_eq!(psi.len(), dim);
    let col = DMatrix::from_column_slice(dim, 1, psi);
    let projector = &col * col.adjoint();
    let rest = dim / 4;
    let mut rho = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = c(0.0, 0.0);
            for r in 0..rest {
                acc += projector[(a * rest + r, b * rest + r)];
            }
            rho[(a, b)] = acc;
        }
    }
    rho
}

/// `p |Φ⁺⟩⟨Φ⁺| + (1 - p) I/4` with `Φ⁺ = (|00⟩ + |11⟩)/√2`.
pub fn werner_state(p: f64) -> Matrix4<C64> {
    let mut m = Matrix4::<C64>::identity() * c((1.0 - p) / 4.0, 0.0);
    for a in [0, 3] {
        for b in [0, 3] {
            m[(a, b)] += c(p / 2.0, 0.0);
        }
    }
    m
}

pub fn werner_concurrence(p: f64) -> f64 {
    ((3.0 * p - 1.0) / 2.0).max(0.0)
}

/// Concurrence `2|ad - bc|` of a pure two-qubit state `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩`.
pub fn pure_state_concurrence(amps: [C64; 4]) -> f64 {
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm()
}

/// Weight transferred to the other level of `[[d, j], [j, -d]]` after time `t`.
pub fn rabi_transfer(d: f64, j: f64, t: f64) -> f64 {
    let omega = (d * d + j * j).sqrt();
    if omega == 0.0 {
        return 0.0;
    }
    (j / omega).powi(2) * (omega * t).sin().powi(2)
}

/// Concurrence of `√(1-w)|01⟩ + e^{iφ}√w|10⟩` for the two-level problem above.
pub fn rabi_concurrence(d: f64, j: f64, t: f64) -> f64 {
    let omega = (d * d + j * j).sqrt();
    if omega == 0.0 {
        return 0.0;
    }
    let (s, c) = (omega * t).sin_cos();
    let w = (j / omega).powi(2) * s * s;
    // 1 - w without cancellation
    let stay = c * c + (d / omega).powi(2) * s * s;
    2.0 * (w * stay).sqrt()
}
