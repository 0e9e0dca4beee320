use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::state::StateVector;

/// Probability below which a branch is flagged as unrealizable.
pub const ZERO_PROB: f64 = 1e-12;

/// One outcome of a computational-basis measurement on a set of wires.
///
/// All `2^m` outcomes are enumerated, including branches of probability
/// (numerically) zero, which are flagged so that downstream correction tables
/// stay total over the full outcome alphabet.
#[derive(Clone, Debug)]
pub struct MeasurementBranch {
    /// Measured bits in measurement-list order.
    pub outcome: Vec<bool>,
    /// Probability of this outcome under the Born rule.
    pub probability: f64,
    /// Renormalized state of the surviving wires; for flagged branches this
    /// is the raw (near-zero) projection.
    pub post_state: StateVector,
    /// Original labels of the surviving wires, in post-state wire order.
    pub survivor_map: Vec<usize>,
    /// True when `probability <= ZERO_PROB`.
    pub zero_probability: bool,
}

/// Projects `state` onto every outcome of measuring `qubits` (in order) in
/// the computational basis. Measured wires are removed from the post-states;
/// survivors keep their relative order.
pub fn enumerate_measurement_branches(
    state: &StateVector,
    qubits: &[usize],
) -> Result<Vec<MeasurementBranch>> {
    let n = state.num_qubits();
    for &q in qubits {
        state.check_qubit(q)?;
    }
    let mut seen = vec![false; n + 1];
    for &q in qubits {
        if seen[q] {
            return Err(Error::invalid(format!("duplicate measured qubit {q}")));
        }
        seen[q] = true;
    }

    let m = qubits.len();
    let survivors: Vec<usize> = (1..=n).filter(|q| !seen[*q]).collect();
    let masks: Vec<usize> = qubits.iter().map(|&q| state.mask(q)).collect();
    let survivor_masks: Vec<usize> = survivors.iter().map(|&q| state.mask(q)).collect();

    let mut branches = Vec::with_capacity(1 << m);
    for k in 0..(1usize << m) {
        // Index bits demanded by outcome k, first measured qubit = MSB of k.
        let mut want = 0usize;
        for (j, &mask) in masks.iter().enumerate() {
            if k & (1 << (m - 1 - j)) != 0 {
                want |= mask;
            }
        }
        let measured_mask: usize = masks.iter().fold(0, |acc, &mk| acc | mk);
        let mut proj = vec![Complex64::new(0.0, 0.0); 1 << survivors.len()];
        for (i, &amp) in state.amplitudes().iter().enumerate() {
            if i & measured_mask != want {
                continue;
            }
            let mut si = 0usize;
            for &sm in &survivor_masks {
                si = (si << 1) | usize::from(i & sm != 0);
            }
            proj[si] = amp;
        }
        let probability: f64 = proj.iter().map(|a| a.norm_sqr()).sum();
        let zero_probability = probability <= ZERO_PROB;
        if !zero_probability {
            let inv = 1.0 / probability.sqrt();
            for a in &mut proj {
                *a *= inv;
            }
        }
        branches.push(MeasurementBranch {
            outcome: (0..m).map(|j| k & (1 << (m - 1 - j)) != 0).collect(),
            probability,
            post_state: StateVector::from_raw(survivors.len(), proj),
            survivor_map: survivors.clone(),
            zero_probability,
        });
    }
    Ok(branches)
}

impl MeasurementBranch {
    /// The projected, unnormalized branch state: sqrt(p) · post_state.
    /// Linear in the pre-measurement state, which is what transfer maps need.
    pub fn unnormalized_state(&self) -> StateVector {
        if self.zero_probability {
            return self.post_state.clone();
        }
        let r = self.probability.sqrt();
        StateVector::from_raw(
            self.post_state.num_qubits(),
            self.post_state.amplitudes().iter().map(|a| a * r).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::state::tensor_product;

    #[test]
    fn bell_state_single_qubit_measurement() {
        let mut bell = StateVector::basis_state(2, "00").unwrap();
        bell.h(1);
        bell.cnot(1, 2);
        let branches = enumerate_measurement_branches(&bell, &[1]).unwrap();
        assert_eq!(branches.len(), 2);
        for (b, label) in branches.iter().zip(["0", "1"]) {
            assert!((b.probability - 0.5).abs() < 1e-12);
            let expect = StateVector::basis_state(1, label).unwrap();
            assert!((b.post_state.amplitudes()[usize::from(label == "1")]
                - expect.amplitudes()[usize::from(label == "1")])
            .norm()
                < 1e-12);
            assert_eq!(b.survivor_map, vec![2]);
        }
    }

    #[test]
    fn zero_probability_branch_is_flagged() {
        let s = StateVector::basis_state(1, "0").unwrap();
        let branches = enumerate_measurement_branches(&s, &[1]).unwrap();
        assert_eq!(branches.len(), 2);
        assert!((branches[0].probability - 1.0).abs() < 1e-12);
        assert_eq!(branches[0].post_state.num_qubits(), 0);
        assert!(branches[1].zero_probability);
        assert_eq!(branches[1].probability, 0.0);
    }

    #[test]
    fn reference_c5_two_qubit_measurement() {
        // Measuring qubits {1,2} of the four-term five-qubit channel ket:
        // outcome 00 keeps |101> - |010>, probability 1/2.
        let chan = crate::channel::reference_state(crate::channel::ReferenceName::C5).unwrap();
        let branches = enumerate_measurement_branches(&chan, &[1, 2]).unwrap();
        let b00 = &branches[0];
        assert!((b00.probability - 0.5).abs() < 1e-12);
        let f = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b00.post_state.amplitude_of("101").unwrap().re - f).abs() < 1e-12);
        assert!((b00.post_state.amplitude_of("010").unwrap().re + f).abs() < 1e-12);
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn survivors_keep_relative_order() {
        let a = StateVector::basis_state(1, "1").unwrap();
        let b = StateVector::basis_state(2, "01").unwrap();
        let joint = tensor_product(&a, &b); // |1 0 1>
        let branches = enumerate_measurement_branches(&joint, &[2]).unwrap();
        let hit = &branches[0]; // outcome 0 has probability 1
        assert!((hit.probability - 1.0).abs() < 1e-12);
        assert_eq!(hit.survivor_map, vec![1, 3]);
        assert_eq!(hit.post_state.amplitude_of("11").unwrap().re, 1.0);
    }

    #[test]
    fn duplicate_and_out_of_range_rejected() {
        let s = StateVector::basis_state(2, "00").unwrap();
        assert!(enumerate_measurement_branches(&s, &[1, 1]).is_err());
        assert!(enumerate_measurement_branches(&s, &[3]).is_err());
    }
}
