//! Sparse real-symmetric Hamiltonian of the disordered qubit lattice.
//!
//! `H = Σ_i Δ_i σ^z_i + Σ_bonds J_ij [ (1+γ)/2 σ^x_i σ^x_j + (1-γ)/2 σ^y_i σ^y_j ]`
//!
//! In the register basis each bond contributes a flip-flop element `J_ij`
//! between states that differ by `01 ↔ 10` on the bond, and a double-flip
//! element `γ J_ij` between states that differ by `00 ↔ 11`. All matrix
//! elements are real.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{Basis, BasisKind, RegisterState, SectorBasis, StateVector};
use crate::lattice::{DisorderRealization, LatticeGeometry, ModelParams};
use crate::C64;

/// Compressed-row storage with the model it was built from.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    dim: usize,
    kind: BasisKind,
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    pub params: ModelParams,
    pub disorder: DisorderRealization,
}

fn check_inputs(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    disorder: &DisorderRealization,
) -> Result<()> {
    params.validate()?;
    if geometry.n() != params.n || disorder.deltas.len() != params.n {
        return Err(Error::Config("geometry, disorder and parameters disagree on n".into()));
    }
    if disorder.couplings.len() != geometry.n_bonds() {
        return Err(Error::Config(format!(
            "{} couplings for {} bonds",
            disorder.couplings.len(),
            geometry.n_bonds()
        )));
    }
    Ok(())
}

fn diagonal_energy(state: RegisterState, n: usize, spacings: &[f64]) -> f64 {
    spacings
        .iter()
        .enumerate()
        .map(|(q, d)| d * state.spin(n, q))
        .sum()
}

/// Hamiltonian over all `2ⁿ` register states.
pub fn build_full(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    disorder: &DisorderRealization,
) -> Result<SparseHamiltonian> {
    check_inputs(params, geometry, disorder)?;
    let basis = Basis::full(params.n)?;
    Ok(assemble(params, geometry, disorder, &basis, true))
}

/// Zero-magnetization block. Double-flip terms leave the sector and are
/// dropped, so the result does not depend on γ.
pub fn build_sector(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    disorder: &DisorderRealization,
    basis: &SectorBasis,
) -> Result<SparseHamiltonian> {
    check_inputs(params, geometry, disorder)?;
    if basis.n() != params.n {
        return Err(Error::BasisMismatch(format!(
            "sector basis on {} qubits, model on {}",
            basis.n(),
            params.n
        )));
    }
    Ok(assemble(params, geometry, disorder, &Basis::Sector(basis.clone()), false))
}

fn assemble(
    params: &ModelParams,
    geometry: &LatticeGeometry,
    disorder: &DisorderRealization,
    basis: &Basis,
    double_flips: bool,
) -> SparseHamiltonian {
    let n = params.n;
    let dim = basis.dim();
    let spacings = disorder.level_spacings(params.delta0);
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(geometry.n_bonds() + 1);

    row_ptr.push(0);
    for k in 0..dim {
        let s = basis.state(k);
        row.clear();
        row.push((k, diagonal_energy(s, n, &spacings)));
        for (bond, &jij) in geometry.bonds.iter().zip(&disorder.couplings) {
            let parallel = s.bit(n, bond.i) == s.bit(n, bond.j);
            let value = match (parallel, double_flips) {
                (false, _) => jij,
                (true, true) => params.gamma * jij,
                (true, false) => continue,
            };
            if value == 0.0 {
                continue;
            }
            if let Some(l) = basis.index_of(s.flip_pair(n, bond.i, bond.j)) {
                row.push((l, value));
            }
        }
        row.sort_by_key(|&(c, _)| c);
        for &(c, v) in row.iter() {
            // each bond reaches a distinct state, so no duplicates to merge
            col_idx.push(c);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }

    SparseHamiltonian {
        dim,
        kind: basis.kind(),
        n,
        row_ptr,
        col_idx,
        values,
        params: params.clone(),
        disorder: disorder.clone(),
    }
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(row, col, value)` entries, 0-based, in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for (r, c, v) in self.triplets() {
            if r == c {
                d[r] += v;
            }
        }
        d
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..self.dim {
            let mut centre = 0.0;
            let mut radius = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.col_idx[k] == r {
                    centre += self.values[k];
                } else {
                    radius += self.values[k].abs();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    /// Largest absolute row sum.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.values[k].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `y = H x` on raw amplitude slices.
    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.col_idx[k]] * self.values[k];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.kind != self.kind || v.n != self.n {
            return Err(Error::BasisMismatch(format!(
                "Hamiltonian acts on the {} basis of {} qubits, vector is {} on {}",
                self.kind, self.n, v.kind, v.n
            )));
        }
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: v.dim() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(&v.amplitudes, &mut out);
        Ok(StateVector { kind: self.kind, n: self.n, amplitudes: out })
    }

    /// ⟨v|H|v⟩ (real for Hermitian H).
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        let hv = self.apply(v)?;
        Ok(v.inner(&hv)?.re)
    }

    /// Plain-text dump, one `row col value` line per entry, 1-based indices.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> Result<()> {
        for (r, c, v) in self.triplets() {
            writeln!(w, "{} {} {:.17e}", r + 1, c + 1, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SectorBasis;
    use crate::lattice::{build_geometry, draw_disorder};
    use crate::oracle;
    use nalgebra::SymmetricEigen;

    fn model(n: usize, gamma: f64, delta: f64, j: f64, seed: u64) -> (ModelParams, LatticeGeometry, DisorderRealization) {
        let p = ModelParams::new(n, gamma, delta, j);
        let g = build_geometry(&p).unwrap();
        let d = draw_disorder(&p, &g, seed);
        (p, g, d)
    }

    fn entry(h: &SparseHamiltonian, r: usize, c: usize) -> f64 {
        h.triplets().filter(|&(a, b, _)| a == r && b == c).map(|t| t.2).sum()
    }

    #[test]
    fn two_qubit_hand_expansion() {
        let p = ModelParams::new(2, 1.0, 0.0, 0.3);
        let g = build_geometry(&p).unwrap();
        let d = DisorderRealization { deltas: vec![0.0, 0.0], couplings: vec![0.3], seed: 0 };
        let h = build_full(&p, &g, &d).unwrap();
        // H|01> = 0|01> + j|10>,  H|00> = 2|00> + j|11>
        assert_eq!(entry(&h, 0b01, 0b01), 0.0);
        assert_eq!(entry(&h, 0b10, 0b01), 0.3);
        assert_eq!(entry(&h, 0b00, 0b00), 2.0);
        assert_eq!(entry(&h, 0b11, 0b00), 0.3);
        assert_eq!(h.nnz(), 8);
    }

    #[test]
    fn matches_pauli_kronecker_oracle() {
        for (n, gamma, seed) in [(2, 1.0, 1), (4, 0.0, 2), (4, 0.5, 3), (6, 1.0, 4), (6, 0.3, 5)] {
            let (p, g, d) = model(n, gamma, 0.2, 0.1, seed);
            let h = build_full(&p, &g, &d).unwrap().to_dense();
            let reference = oracle::pauli_hamiltonian(&p, &g, &d);
            let mut worst = 0.0f64;
            for r in 0..h.nrows() {
                for c in 0..h.ncols() {
                    worst = worst.max((reference[(r, c)] - C64::new(h[(r, c)], 0.0)).norm());
                }
            }
            assert!(worst < 1e-14, "n={n} gamma={gamma}: {worst}");
        }
    }

    #[test]
    fn exactly_symmetric() {
        let (p, g, d) = model(8, 0.7, 0.2, 0.05, 9);
        let h = build_full(&p, &g, &d).unwrap().to_dense();
        assert_eq!(h, h.transpose());
        let s = build_sector(&p, &g, &d, &SectorBasis::new(8).unwrap()).unwrap().to_dense();
        assert_eq!(s, s.transpose());
    }

    #[test]
    fn xy_limit_conserves_magnetization() {
        let (p, g, d) = model(6, 0.0, 0.2, 0.05, 1);
        let h = build_full(&p, &g, &d).unwrap();
        for (r, c, _) in h.triplets() {
            assert_eq!((r as u32).count_ones(), (c as u32).count_ones());
        }
    }

    #[test]
    fn clean_coupling_gives_n_plus_one_bands() {
        let n = 6;
        let (p, g, d) = model(n, 1.0, 0.02, 0.0, 4);
        let h = build_full(&p, &g, &d).unwrap();
        assert_eq!(h.nnz(), 1 << n);
        for (r, _, e) in h.triplets() {
            let k = (r as u32).count_ones() as f64;
            let centre = n as f64 - 2.0 * k;
            assert!((e - centre).abs() <= n as f64 * p.delta / 2.0);
        }
        let mut levels: Vec<i64> = h.diagonal().iter().map(|e| e.round() as i64).collect();
        levels.sort();
        levels.dedup();
        assert_eq!(levels, (0..=n as i64).map(|k| 2 * k - n as i64).collect::<Vec<_>>());
    }

    #[test]
    fn sector_two_qubit_block() {
        let p = ModelParams::new(2, 1.0, 0.2, 0.1);
        let g = build_geometry(&p).unwrap();
        let d = DisorderRealization { deltas: vec![0.07, -0.02], couplings: vec![0.05], seed: 0 };
        let h = build_sector(&p, &g, &d, &SectorBasis::new(2).unwrap()).unwrap().to_dense();
        let dd = 0.07 - (-0.02);
        assert!((h[(0, 0)] - dd).abs() < 1e-15);
        assert!((h[(1, 1)] + dd).abs() < 1e-15);
        assert_eq!(h[(0, 1)], 0.05);
        let ev = SymmetricEigen::new(h).eigenvalues;
        let omega = (dd * dd + 0.05f64.powi(2)).sqrt();
        let (lo, hi) = (ev.min(), ev.max());
        assert!((lo + omega).abs() < 1e-14 && (hi - omega).abs() < 1e-14);
    }

    #[test]
    fn sector_matrix_is_gamma_independent() {
        let basis = SectorBasis::new(8).unwrap();
        let (p, g, d) = model(8, 0.0, 0.2, 0.1, 77);
        let reference = build_sector(&p, &g, &d, &basis).unwrap().to_dense();
        for gamma in [0.5, 1.0] {
            let p2 = ModelParams { gamma, ..p.clone() };
            assert_eq!(build_sector(&p2, &g, &d, &basis).unwrap().to_dense(), reference);
        }
    }

    #[test]
    fn xy_full_block_equals_sector_build() {
        let n = 6;
        let (p, g, d) = model(n, 0.0, 0.2, 0.1, 12);
        let basis = SectorBasis::new(n).unwrap();
        let full = build_full(&p, &g, &d).unwrap().to_dense();
        let sector = build_sector(&p, &g, &d, &basis).unwrap().to_dense();
        for (a, sa) in basis.states().enumerate() {
            for (b, sb) in basis.states().enumerate() {
                assert_eq!(full[(sa.0 as usize, sb.0 as usize)], sector[(a, b)]);
            }
        }
    }

    #[test]
    fn sector_spectrum_matches_full_block() {
        // single active bond on a 2x2 plaquette
        let p = ModelParams::new(4, 0.0, 0.0, 0.1);
        let g = build_geometry(&p).unwrap();
        let d = DisorderRealization { deltas: vec![0.0; 4], couplings: vec![0.1, 0.0, 0.0, 0.0], seed: 0 };
        let basis = SectorBasis::new(4).unwrap();
        let mut sector_ev: Vec<f64> = SymmetricEigen::new(build_sector(&p, &g, &d, &basis).unwrap().to_dense())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        let full = build_full(&p, &g, &d).unwrap().to_dense();
        let idx: Vec<usize> = basis.states().map(|s| s.0 as usize).collect();
        let block = DMatrix::from_fn(6, 6, |r, c| full[(idx[r], idx[c])]);
        let mut full_ev: Vec<f64> = SymmetricEigen::new(block).eigenvalues.iter().copied().collect();
        sector_ev.sort_by(f64::total_cmp);
        full_ev.sort_by(f64::total_cmp);
        for (a, b) in sector_ev.iter().zip(&full_ev) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn apply_matches_dense_products() {
        let (p, g, d) = model(4, 0.6, 0.2, 0.3, 8);
        let h = build_full(&p, &g, &d).unwrap();
        let dense = h.to_dense().map(|x| C64::new(x, 0.0));
        let v: Vec<C64> = (0..16).map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect();
        let state = StateVector { kind: BasisKind::Full, n: 4, amplitudes: v.clone() };
        let twice = h.apply(&h.apply(&state).unwrap()).unwrap();
        let col = nalgebra::DVector::from_vec(v);
        let reference = &dense * (&dense * col);
        for (a, b) in twice.amplitudes.iter().zip(reference.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        let e = h.apply(&state).unwrap();
        let ip = state.inner(&e).unwrap();
        assert!(ip.im.abs() < 1e-12 * ip.norm().max(1.0));
    }

    #[test]
    fn register_states_are_eigenvectors_without_coupling() {
        let (p, g, d) = model(4, 1.0, 0.2, 0.0, 3);
        let h = build_full(&p, &g, &d).unwrap();
        let mut v = StateVector::zeros(&Basis::full(4).unwrap());
        v.amplitudes[0b0110] = C64::new(1.0, 0.0);
        let hv = h.apply(&v).unwrap();
        let e = h.diagonal()[0b0110];
        for (k, a) in hv.amplitudes.iter().enumerate() {
            assert_eq!(*a, if k == 0b0110 { C64::new(e, 0.0) } else { C64::new(0.0, 0.0) });
        }
    }

    #[test]
    fn apply_rejects_wrong_space() {
        let (p, g, d) = model(4, 1.0, 0.2, 0.1, 3);
        let h = build_full(&p, &g, &d).unwrap();
        let v = StateVector::zeros(&Basis::sector(4).unwrap());
        assert!(h.apply(&v).is_err());
    }

    #[test]
    fn triplet_dump_is_one_based() {
        let p = ModelParams::new(2, 1.0, 0.0, 0.3);
        let g = build_geometry(&p).unwrap();
        let d = DisorderRealization { deltas: vec![0.0, 0.0], couplings: vec![0.3], seed: 0 };
        let h = build_sector(&p, &g, &d, &SectorBasis::new(2).unwrap()).unwrap();
        let mut out = Vec::new();
        h.write_triplets(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let first: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
        assert_eq!(&first[..2], ["1", "1"]);
        assert_eq!(text.lines().count(), h.nnz());
    }
}
