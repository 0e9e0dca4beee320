use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::secret::SecretState;
use crate::sim::{enumerate_measurement_branches, tensor_product, MeasurementBranch, StateVector};

/// How Bob1 turns his pair into classical bits when N ≥ 6. The variants
/// reflect the two-qubit unlocking step's contested reading; the sweep
/// decides which admits deterministic correction for a given channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bob1Style {
    /// CNOT from his first qubit onto his second, then measure both.
    CnotThenMeasure,
    /// CNOT, Hadamards on both, then measure.
    CnotThenHadamards,
    /// CZ, Hadamards on both, then measure.
    CzThenHadamards,
}

impl Bob1Style {
    pub const ALL: [Bob1Style; 3] = [
        Bob1Style::CnotThenMeasure,
        Bob1Style::CnotThenHadamards,
        Bob1Style::CzThenHadamards,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Bob1Style::CnotThenMeasure => "cnot",
            Bob1Style::CnotThenHadamards => "cnot-h",
            Bob1Style::CzThenHadamards => "cz-h",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "cnot" => Ok(Bob1Style::CnotThenMeasure),
            "cnot-h" => Ok(Bob1Style::CnotThenHadamards),
            "cz-h" => Ok(Bob1Style::CzThenHadamards),
            other => Err(Error::invalid(format!("unknown bob1 style '{other}'"))),
        }
    }
}

/// Contested details of the locking/unlocking circuits, resolved by sweep.
///
/// `h_on_psi1` selects where the two pre-measurement Hadamards of the locking
/// step sit: `true` puts them on the first secret wire and channel qubit 1
/// (the CNOT controls, completing two Bell-type product measurements);
/// `false` puts them on the two CNOT-target wires instead. `bob1_style` is
/// ignored when N = 5, where Bob1 holds a single qubit and measures it in the
/// Hadamard basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LockingVariant {
    pub h_on_psi1: bool,
    pub bob1_style: Bob1Style,
}

impl LockingVariant {
    pub fn new(h_on_psi1: bool, bob1_style: Bob1Style) -> Self {
        LockingVariant {
            h_on_psi1,
            bob1_style,
        }
    }
}

/// Wires of the joint state: 1 and 2 are the secret pair, wire i+2 carries
/// channel qubit i.
pub fn prepare_joint_state(secret: &SecretState, channel: &StateVector) -> StateVector {
    tensor_product(&secret.to_state(), channel)
}

/// The dealer's locking step.
///
/// Applies, in order: SWAP(wire 2, wire 4); CNOT(wire 1 → wire 2);
/// CNOT(wire 3 → wire 4); then the variant's Hadamards (wires 1 and 3, or
/// wires 2 and 4); finally enumerates all 16 outcomes of measuring wires
/// 1..4, bit a_i = wire i.
pub fn lock(joint: &StateVector, variant: &LockingVariant) -> Result<Vec<([bool; 4], MeasurementBranch)>> {
    if joint.num_qubits() < 7 {
        return Err(Error::invalid(format!(
            "locking needs at least 7 wires, got {}",
            joint.num_qubits()
        )));
    }
    let mut s = joint.clone();
    s.swap(2, 4);
    s.cnot(1, 2);
    if !variant.h_on_psi1 {
        s.h(2);
    }
    s.cnot(3, 4);
    if variant.h_on_psi1 {
        s.h(1);
        s.h(3);
    } else {
        s.h(4);
    }
    let branches = enumerate_measurement_branches(&s, &[1, 2, 3, 4])?;
    Ok(branches
        .into_iter()
        .map(|b| {
            let bits = [b.outcome[0], b.outcome[1], b.outcome[2], b.outcome[3]];
            (bits, b)
        })
        .collect())
}

/// Bob1's unlocking measurement on the post-lock survivors, whose first one
/// (two) wire(s) are his.
pub fn unlock_bob1(
    branch_state: &StateVector,
    n: usize,
    variant: &LockingVariant,
) -> Result<Vec<(Vec<bool>, MeasurementBranch)>> {
    if branch_state.num_qubits() != n - 2 {
        return Err(Error::invalid(format!(
            "post-lock state should have {} wires, got {}",
            n - 2,
            branch_state.num_qubits()
        )));
    }
    let mut s = branch_state.clone();
    let measured: Vec<usize> = if n == 5 {
        s.h(1);
        vec![1]
    } else {
        match variant.bob1_style {
            Bob1Style::CnotThenMeasure => s.cnot(1, 2),
            Bob1Style::CnotThenHadamards => {
                s.cnot(1, 2);
                s.h(1);
                s.h(2);
            }
            Bob1Style::CzThenHadamards => {
                s.cz(1, 2);
                s.h(1);
                s.h(2);
            }
        }
        vec![1, 2]
    };
    let branches = enumerate_measurement_branches(&s, &measured)?;
    Ok(branches.into_iter().map(|b| (b.outcome.clone(), b)).collect())
}

/// A middle party's Hadamard measurement on one wire.
pub fn unlock_bob_mid(
    branch_state: &StateVector,
    wire: usize,
) -> Result<Vec<(bool, MeasurementBranch)>> {
    branch_state.check_qubit(wire)?;
    let mut s = branch_state.clone();
    s.h(wire);
    let branches = enumerate_measurement_branches(&s, &[wire])?;
    Ok(branches.into_iter().map(|b| (b.outcome[0], b)).collect())
}
