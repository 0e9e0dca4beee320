//! The N-qubit linear cluster channel in its three forms — product formula,
//! generation circuit, and explicit reference kets — plus the
//! pre-distribution swap schedules.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{apply_gate, GateName, GateSpec, StateVector};

/// Smallest and largest chain lengths the builders accept.
pub const MIN_CHAIN: usize = 2;
pub const MAX_CHAIN: usize = 16;

/// Which construction yields the channel state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelSource {
    /// Explicit kets for N = 5 and 6 as printed; the home-basis construction
    /// (generation circuit plus a fixed Hadamard frame) for larger N.
    Reference,
    /// Generation circuit: Hadamards on every wire, then the chain of
    /// controlled-Z gates.
    Circuit,
    /// Expansion of the cluster product formula.
    Product,
}

impl ChannelSource {
    pub fn tag(self) -> &'static str {
        match self {
            ChannelSource::Reference => "reference",
            ChannelSource::Circuit => "circuit",
            ChannelSource::Product => "product",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "reference" => Ok(ChannelSource::Reference),
            "circuit" => Ok(ChannelSource::Circuit),
            "product" => Ok(ChannelSource::Product),
            other => Err(Error::invalid(format!("unknown channel source '{other}'"))),
        }
    }
}

/// Names of the explicitly printed channel kets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceName {
    C5,
    C5Prime,
    C6Prime,
}

/// Ordered list of 1-based swap pairs applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSchedule {
    swaps: Vec<(usize, usize)>,
}

impl SwapSchedule {
    pub fn new(swaps: Vec<(usize, usize)>, num_qubits: usize) -> Result<Self> {
        for &(i, j) in &swaps {
            if i == j {
                return Err(Error::invalid(format!("degenerate swap pair ({i},{j})")));
            }
            if i == 0 || j == 0 || i > num_qubits || j > num_qubits {
                return Err(Error::invalid(format!(
                    "swap pair ({i},{j}) out of range 1..={num_qubits}"
                )));
            }
        }
        Ok(SwapSchedule { swaps })
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    pub fn reversed(&self) -> SwapSchedule {
        SwapSchedule {
            swaps: self.swaps.iter().rev().copied().collect(),
        }
    }

    /// Where each original qubit ends up: `permutation()[p-1]` is the
    /// original label held at position `p` after applying the schedule.
    pub fn permutation(&self, num_qubits: usize) -> Vec<usize> {
        let mut contents: Vec<usize> = (1..=num_qubits).collect();
        for &(i, j) in &self.swaps {
            contents.swap(i - 1, j - 1);
        }
        contents
    }
}

fn check_chain(n: usize) -> Result<()> {
    if !(MIN_CHAIN..=MAX_CHAIN).contains(&n) {
        return Err(Error::invalid(format!(
            "chain length {n} outside {MIN_CHAIN}..={MAX_CHAIN}"
        )));
    }
    Ok(())
}

/// Expands the cluster product formula: each factor contributes |0> with a
/// σz on the next wire, or |1>. The boundary σz on wire N+1 is the identity.
/// Amplitudes come out as ±2^{-N/2} with sign (-1)^{Σ (1-x_a)·x_{a+1}}.
pub fn build_product_form(n: usize) -> Result<StateVector> {
    check_chain(n)?;
    let scale = 0.5f64.powf(n as f64 / 2.0);
    let mut amps = Vec::with_capacity(1 << n);
    for i in 0..(1usize << n) {
        let bit = |q: usize| (i >> (n - q)) & 1;
        let mut sign = 0usize;
        for a in 1..n {
            sign += (1 - bit(a)) * bit(a + 1);
        }
        let v = if sign % 2 == 0 { scale } else { -scale };
        amps.push(Complex64::new(v, 0.0));
    }
    Ok(StateVector::from_raw(n, amps))
}

/// The gate list of the generation circuit: H on every wire, then CZ on each
/// neighboring pair.
pub fn generation_circuit(n: usize) -> Result<Vec<GateSpec>> {
    check_chain(n)?;
    let mut gates = Vec::with_capacity(2 * n - 1);
    for q in 1..=n {
        gates.push(GateSpec::new(GateName::H, vec![q]));
    }
    for a in 1..n {
        gates.push(GateSpec::new(GateName::CZ, vec![a, a + 1]));
    }
    Ok(gates)
}

/// Runs the generation circuit on |0..0>. Amplitudes are
/// 2^{-N/2}·(-1)^{Σ x_a·x_{a+1}}.
pub fn build_circuit_form(n: usize) -> Result<StateVector> {
    let mut state = StateVector::basis_state(n, &"0".repeat(n))?;
    for gate in generation_circuit(n)? {
        state = apply_gate(&state, &gate)?;
    }
    Ok(state)
}

/// The literal channel kets as printed, with exact ±1/2 and ±1/(2√2)
/// coefficients.
pub fn reference_state(name: ReferenceName) -> Result<StateVector> {
    let half = 0.5f64;
    let eighth = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
    let terms: (usize, Vec<(f64, &str)>) = match name {
        ReferenceName::C5 => (
            5,
            vec![
                (half, "00101"),
                (-half, "00010"),
                (-half, "11001"),
                (half, "11110"),
            ],
        ),
        ReferenceName::C5Prime => (
            5,
            vec![
                (half, "00010"),
                (half, "01101"),
                (-half, "10100"),
                (-half, "11011"),
            ],
        ),
        ReferenceName::C6Prime => (
            6,
            vec![
                (eighth, "010101"),
                (-eighth, "010010"),
                (-eighth, "001001"),
                (eighth, "001110"),
                (eighth, "100101"),
                (-eighth, "100010"),
                (-eighth, "111001"),
                (-eighth, "111110"),
            ],
        ),
    };
    let (n, kets) = terms;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (coef, label) in kets {
        let idx = usize::from_str_radix(label, 2).expect("binary label");
        amps[idx] = Complex64::new(coef, 0.0);
    }
    Ok(StateVector::from_raw(n, amps))
}

/// Six-qubit reference ket with its final sign inverted; used by the sweep
/// to flag whether determinism holds with either choice of that sign.
pub fn reference_c6_prime_sign_flipped() -> StateVector {
    let mut state = reference_state(ReferenceName::C6Prime).unwrap();
    let idx = usize::from_str_radix("111110", 2).unwrap();
    let mut amps = state.amplitudes().to_vec();
    amps[idx] = -amps[idx];
    state = StateVector::from_raw(6, amps);
    state
}

/// Pre-distribution swap schedule.
///
/// Odd N: (1,3),(3,5),...,(N-2,N) applied left to right — the order that maps
/// the printed five-qubit ket onto its redistributed form. N = 6: (1,4),(3,6)
/// as stated for the six-qubit case. Even N > 6 generalizes the six-qubit
/// pattern as (1, N/2+1), (N/2, N).
pub fn swap_schedule(n: usize) -> Result<SwapSchedule> {
    if n < 5 {
        return Err(Error::invalid(format!("no swap schedule for N={n} < 5")));
    }
    let swaps = if n % 2 == 1 {
        (1..=n - 2).step_by(2).map(|i| (i, i + 2)).collect()
    } else if n == 6 {
        vec![(1, 4), (3, 6)]
    } else {
        vec![(1, n / 2 + 1), (n / 2, n)]
    };
    SwapSchedule::new(swaps, n)
}

/// Applies the schedule's SWAP gates in order; a pure basis-label
/// permutation, so the multiset of amplitude values is unchanged.
pub fn redistribute(state: &StateVector, schedule: &SwapSchedule) -> Result<StateVector> {
    let mut out = state.clone();
    for &(i, j) in schedule.swaps() {
        out = apply_gate(&out, &GateSpec::new(GateName::SWAP, vec![i, j]))?;
    }
    Ok(out)
}

/// Hadamard frame of the home-basis channel for N ≥ 7, in original (pre-swap)
/// labels: the chain-interior qubits that land with the first unlocking party
/// plus any chain endpoint landing with a middle party. In this frame every
/// branch of the locking/unlocking pipeline is correctable by a local unitary,
/// which is how the printed five-qubit channel relates to its generation
/// circuit.
pub fn home_basis_frame(n: usize) -> Result<Vec<usize>> {
    if n < 7 {
        return Err(Error::invalid(format!(
            "home-basis frame defined for N >= 7, got {n}"
        )));
    }
    let perm = swap_schedule(n)?.permutation(n);
    let bob = [perm[2], perm[3]]; // positions 3 and 4
    let mids = &perm[4..n - 2]; // positions 5..=N-2
    let mut frame: Vec<usize> = bob.iter().copied().filter(|&q| q != 1 && q != n).collect();
    frame.extend(mids.iter().copied().filter(|&q| q == 1 || q == n));
    frame.sort_unstable();
    Ok(frame)
}

/// The redistributed channel a protocol run starts from.
///
/// * `Reference`, N = 5 or 6 — the printed kets (already redistributed).
/// * `Reference`, N ≥ 7 — generation circuit, the [`home_basis_frame`]
///   Hadamards, then the swap schedule.
/// * `Circuit` / `Product` — the respective construction followed by the
///   swap schedule.
pub fn channel_state(source: ChannelSource, n: usize) -> Result<StateVector> {
    if n < 5 {
        return Err(Error::invalid(format!("protocol channel needs N >= 5, got {n}")));
    }
    match source {
        ChannelSource::Reference => match n {
            5 => reference_state(ReferenceName::C5Prime),
            6 => reference_state(ReferenceName::C6Prime),
            _ => {
                let mut state = build_circuit_form(n)?;
                for q in home_basis_frame(n)? {
                    state = apply_gate(&state, &GateSpec::new(GateName::H, vec![q]))?;
                }
                redistribute(&state, &swap_schedule(n)?)
            }
        },
        ChannelSource::Circuit => redistribute(&build_circuit_form(n)?, &swap_schedule(n)?),
        ChannelSource::Product => redistribute(&build_product_form(n)?, &swap_schedule(n)?),
    }
}
