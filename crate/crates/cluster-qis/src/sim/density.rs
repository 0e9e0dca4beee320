use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::sim::state::StateVector;

/// Density matrix on `num_qubits` wires.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: CMat,
}

impl DensityMatrix {
    pub fn from_entries(num_qubits: usize, entries: CMat) -> Result<Self> {
        if entries.dim() != 1 << num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "matrix dim {} does not match {num_qubits} qubits",
                entries.dim()
            )));
        }
        Ok(DensityMatrix {
            num_qubits,
            entries,
        })
    }

    /// |ψ><ψ| of a pure state.
    pub fn from_pure(state: &StateVector) -> Self {
        let dim = state.amplitudes().len();
        let mut m = CMat::zeros(dim);
        for (i, a) in state.amplitudes().iter().enumerate() {
            for (j, b) in state.amplitudes().iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        DensityMatrix {
            num_qubits: state.num_qubits(),
            entries: m,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries.sub(&self.entries.adjoint()).max_abs()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.hermitian_eigenvalues()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries.sub(&other.entries).max_abs()
    }
}

/// Partial trace of |ψ><ψ| keeping `keep` (ordered, distinct) wires; the
/// output qubit order follows `keep`.
pub fn reduced_density_matrix(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_qubits();
    for &q in keep {
        state.check_qubit(q)?;
    }
    let mut seen = vec![false; n + 1];
    for &q in keep {
        if seen[q] {
            return Err(Error::invalid(format!("duplicate kept qubit {q}")));
        }
        seen[q] = true;
    }
    let traced: Vec<usize> = (1..=n).filter(|q| !seen[*q]).collect();
    let keep_masks: Vec<usize> = keep.iter().map(|&q| state.mask(q)).collect();
    let traced_masks: Vec<usize> = traced.iter().map(|&q| state.mask(q)).collect();

    let k = keep.len();
    let nt = traced.len();
    let idx_of = |bits: usize, env: usize| -> usize {
        let mut i = 0usize;
        for (j, &mask) in keep_masks.iter().enumerate() {
            if bits & (1 << (k - 1 - j)) != 0 {
                i |= mask;
            }
        }
        for (j, &mask) in traced_masks.iter().enumerate() {
            if env & (1 << (nt - 1 - j)) != 0 {
                i |= mask;
            }
        }
        i
    };

    let amps = state.amplitudes();
    let mut rho = CMat::zeros(1 << k);
    for bi in 0..(1usize << k) {
        for bj in 0..(1usize << k) {
            let mut sum = Complex64::new(0.0, 0.0);
            for env in 0..(1usize << traced.len()) {
                sum += amps[idx_of(bi, env)] * amps[idx_of(bj, env)].conj();
            }
            rho[(bi, bj)] = sum;
        }
    }
    DensityMatrix::from_entries(k, rho)
}

/// (1/2) Σ |eigenvalues of a − b|; both matrices must share a dimension.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.entries.dim() != b.entries.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            a.entries.dim(),
            b.entries.dim()
        )));
    }
    let diff = a.entries.sub(&b.entries);
    Ok(0.5 * diff.hermitian_eigenvalues().iter().map(|v| v.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let mut bell = StateVector::basis_state(2, "00").unwrap();
        bell.h(1);
        bell.cnot(1, 2);
        let rho = reduced_density_matrix(&bell, &[1]).unwrap();
        assert!(rho.hermiticity_defect() < 1e-10);
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
        assert!((rho.entries()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((rho.entries()[(1, 1)].re - 0.5).abs() < 1e-12);
        assert!(rho.entries()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn product_state_marginal_is_pure() {
        let s = StateVector::basis_state(2, "01").unwrap();
        let rho = reduced_density_matrix(&s, &[2]).unwrap();
        assert!((rho.entries()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(rho.entries()[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn reference_c5_keep_back_three_has_flat_rank_two_spectrum() {
        let chan = crate::channel::reference_state(crate::channel::ReferenceName::C5).unwrap();
        let rho = reduced_density_matrix(&chan, &[3, 4, 5]).unwrap();
        let eigs = rho.eigenvalues();
        assert!(eigs.iter().all(|&v| v > -1e-9));
        let nonzero: Vec<f64> = eigs.iter().copied().filter(|v| v.abs() > 1e-9).collect();
        assert_eq!(nonzero.len(), 2, "{eigs:?}");
        assert!(nonzero.iter().all(|v| (v - 0.5).abs() < 1e-9), "{eigs:?}");
    }

    #[test]
    fn full_keep_reproduces_projector() {
        let mut s = StateVector::basis_state(2, "00").unwrap();
        s.h(1);
        s.cz(1, 2);
        let rho = reduced_density_matrix(&s, &[1, 2]).unwrap();
        let proj = DensityMatrix::from_pure(&s);
        assert!(rho.max_abs_diff(&proj) < 1e-10);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::from_pure(&StateVector::basis_state(1, "0").unwrap());
        let one = DensityMatrix::from_pure(&StateVector::basis_state(1, "1").unwrap());
        assert!((trace_distance(&zero, &zero).unwrap()).abs() < 1e-12);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        let mut half = CMat::zeros(2);
        half[(0, 0)] = Complex64::new(0.5, 0.0);
        half[(1, 1)] = Complex64::new(0.5, 0.0);
        let mixed = DensityMatrix::from_entries(1, half).unwrap();
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-12);
    }
}
