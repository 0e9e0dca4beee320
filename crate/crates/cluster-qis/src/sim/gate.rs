use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::sim::state::StateVector;

/// Gate vocabulary of the generation and protocol circuits. For `CNOT` the
/// first target is the control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateName {
    H,
    X,
    Z,
    XZ,
    CZ,
    CNOT,
    SWAP,
}

impl GateName {
    pub fn arity(self) -> usize {
        match self {
            GateName::H | GateName::X | GateName::Z | GateName::XZ => 1,
            GateName::CZ | GateName::CNOT | GateName::SWAP => 2,
        }
    }

    /// The realized unitary (2x2 or 4x4, first target = most significant).
    pub fn matrix(self) -> CMat {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rows = |r: Vec<Vec<f64>>| -> CMat {
            CMat::from_rows(
                &r.iter()
                    .map(|row| row.iter().map(|&v| c(v, 0.0)).collect())
                    .collect::<Vec<_>>(),
            )
        };
        let f = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            GateName::H => rows(vec![vec![f, f], vec![f, -f]]),
            GateName::X => rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
            GateName::Z => rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]),
            GateName::XZ => rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]),
            GateName::CZ => rows(vec![
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 0.0, -1.0],
            ]),
            GateName::CNOT => rows(vec![
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ]),
            GateName::SWAP => rows(vec![
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
            ]),
        }
    }
}

/// A named gate bound to ordered 1-based wire targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSpec {
    pub name: GateName,
    pub targets: Vec<usize>,
}

impl GateSpec {
    pub fn new(name: GateName, targets: Vec<usize>) -> Self {
        GateSpec { name, targets }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.len() != self.name.arity() {
            return Err(Error::invalid(format!(
                "{:?} takes {} target(s), got {}",
                self.name,
                self.name.arity(),
                self.targets.len()
            )));
        }
        for &t in &self.targets {
            if t == 0 || t > num_qubits {
                return Err(Error::invalid(format!(
                    "target {t} out of range 1..={num_qubits}"
                )));
            }
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::invalid(format!(
                "{:?} targets must be distinct, got {:?}",
                self.name, self.targets
            )));
        }
        Ok(())
    }
}

/// Returns U|ψ>; the input state is left unmodified.
pub fn apply_gate(state: &StateVector, gate: &GateSpec) -> Result<StateVector> {
    gate.validate(state.num_qubits())?;
    let mut out = state.clone();
    match gate.name {
        GateName::H => out.h(gate.targets[0]),
        GateName::X => out.x(gate.targets[0]),
        GateName::Z => out.z(gate.targets[0]),
        GateName::XZ => out.xz(gate.targets[0]),
        GateName::CZ => out.cz(gate.targets[0], gate.targets[1]),
        GateName::CNOT => out.cnot(gate.targets[0], gate.targets[1]),
        GateName::SWAP => out.swap(gate.targets[0], gate.targets[1]),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::basis_state(1, "0").unwrap();
        let out = apply_gate(&s, &GateSpec::new(GateName::H, vec![1])).unwrap();
        let f = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0].re - f).abs() < 1e-15);
        assert!((out.amplitudes()[1].re - f).abs() < 1e-15);
        // value semantics: input untouched
        assert_eq!(s.amplitudes()[0].re, 1.0);
    }

    #[test]
    fn cz_flips_sign_of_11() {
        let s = StateVector::basis_state(2, "11").unwrap();
        let out = apply_gate(&s, &GateSpec::new(GateName::CZ, vec![1, 2])).unwrap();
        assert_eq!(out.amplitudes()[3].re, -1.0);
    }

    #[test]
    fn cnot_first_target_is_control() {
        let s = StateVector::basis_state(2, "10").unwrap();
        let out = apply_gate(&s, &GateSpec::new(GateName::CNOT, vec![1, 2])).unwrap();
        assert_eq!(out.amplitude_of("11").unwrap().re, 1.0);
    }

    #[test]
    fn all_gate_matrices_unitary() {
        for name in [
            GateName::H,
            GateName::X,
            GateName::Z,
            GateName::XZ,
            GateName::CZ,
            GateName::CNOT,
            GateName::SWAP,
        ] {
            assert!(
                name.matrix().unitarity_defect() <= 1e-12,
                "{name:?} not unitary"
            );
        }
    }

    #[test]
    fn invalid_targets_rejected() {
        let s = StateVector::basis_state(2, "00").unwrap();
        assert!(apply_gate(&s, &GateSpec::new(GateName::H, vec![3])).is_err());
        assert!(apply_gate(&s, &GateSpec::new(GateName::CNOT, vec![1, 1])).is_err());
        assert!(apply_gate(&s, &GateSpec::new(GateName::CNOT, vec![1])).is_err());
    }

    #[test]
    fn gate_json_shape() {
        let g = GateSpec::new(GateName::CZ, vec![1, 2]);
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"name":"CZ","targets":[1,2]}"#
        );
    }
}
