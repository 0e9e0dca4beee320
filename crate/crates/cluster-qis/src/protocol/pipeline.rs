use serde::{Deserialize, Serialize};

use crate::channel::{channel_state, ChannelSource};
use crate::error::{Error, Result};
use crate::protocol::correction::{apply_correction, decode_n5, decode_n6, GateSequence};
use crate::protocol::locking::{lock, prepare_joint_state, unlock_bob1, unlock_bob_mid, LockingVariant};
use crate::protocol::secret::SecretState;
use crate::protocol::transcript::ClassicalTranscript;
use crate::sim::{pure_fidelity, StateVector};
use crate::synth::CorrectionTable;

/// Probability threshold below which a path is reported as unrealizable.
pub const ZERO_PATH: f64 = 1e-12;

/// A complete protocol instance: chain length, channel construction, and the
/// resolved circuit variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    pub source: ChannelSource,
    pub variant: LockingVariant,
}

impl ProtocolConfig {
    pub fn new(n: usize, source: ChannelSource, variant: LockingVariant) -> Self {
        ProtocolConfig { n, source, variant }
    }

    pub fn channel(&self) -> Result<StateVector> {
        channel_state(self.source, self.n)
    }
}

/// One outcome path of the full lock → unlock pipeline.
#[derive(Clone, Debug)]
pub struct PathBranch {
    pub transcript: ClassicalTranscript,
    /// Product of the stage probabilities along the path.
    pub probability: f64,
    /// Renormalized two-qubit receiver state; raw near-zero projection on
    /// flagged paths.
    pub charlie_state: StateVector,
    pub zero_probability: bool,
}

impl PathBranch {
    /// sqrt(probability) · charlie_state — linear in the input secret.
    pub fn unnormalized_state(&self) -> StateVector {
        if self.zero_probability {
            return self.charlie_state.clone();
        }
        let r = self.probability.sqrt();
        StateVector::from_raw(
            2,
            self.charlie_state
                .amplitudes()
                .iter()
                .map(|a| a * r)
                .collect(),
        )
    }
}

/// Runs lock × bob1 × every middle measurement over all outcome paths, in
/// canonical transcript order. Zero-probability stages propagate as flagged
/// zero states so the output stays total over the outcome alphabet.
pub fn enumerate_paths(config: &ProtocolConfig, secret: &SecretState) -> Result<Vec<PathBranch>> {
    let channel = config.channel()?;
    enumerate_paths_on_channel(&channel, config.n, &config.variant, secret)
}

/// [`enumerate_paths`] against an explicit channel state, for channels that
/// are not addressable as a [`ChannelSource`].
pub fn enumerate_paths_on_channel(
    channel: &StateVector,
    n: usize,
    variant: &LockingVariant,
    secret: &SecretState,
) -> Result<Vec<PathBranch>> {
    if channel.num_qubits() != n {
        return Err(Error::invalid(format!(
            "channel has {} qubits, expected {n}",
            channel.num_qubits()
        )));
    }
    let joint = prepare_joint_state(secret, channel);
    let num_mids = n.saturating_sub(6);

    let mut out = Vec::new();
    for (alice_bits, alice_branch) in lock(&joint, variant)? {
        let p_alice = alice_branch.probability;
        for (bob_bits, bob_branch) in unlock_bob1(&alice_branch.post_state, n, variant)? {
            // depth-first over the middle parties, always measuring the
            // current first wire (the lowest-indexed remaining channel qubit)
            let mut stack: Vec<(StateVector, Vec<bool>, f64)> = vec![(
                bob_branch.post_state.clone(),
                Vec::new(),
                p_alice * bob_branch.probability,
            )];
            for _ in 0..num_mids {
                let mut next = Vec::with_capacity(stack.len() * 2);
                for (state, bits, p) in stack {
                    for (bit, mid_branch) in unlock_bob_mid(&state, 1)? {
                        let mut bits2 = bits.clone();
                        bits2.push(bit);
                        next.push((mid_branch.post_state, bits2, p * mid_branch.probability));
                    }
                }
                stack = next;
            }
            for (state, mid_bits, p) in stack {
                debug_assert_eq!(state.num_qubits(), 2);
                out.push(PathBranch {
                    transcript: ClassicalTranscript::new(alice_bits, bob_bits.clone(), mid_bits),
                    probability: if p > ZERO_PATH { p } else { 0.0 },
                    charlie_state: state,
                    zero_probability: p <= ZERO_PATH,
                });
            }
        }
    }
    debug_assert!(out
        .iter()
        .enumerate()
        .all(|(i, b)| b.transcript.index() == i));
    Ok(out)
}

/// Which correction rule the receiver applies.
#[derive(Clone, Debug)]
pub enum Decoder<'a> {
    /// The five-qubit closed form.
    Eq6,
    /// The six-qubit closed form.
    Eq8,
    /// A synthesized correction table.
    Table(&'a CorrectionTable),
}

/// Per-transcript outcome of a full protocol run followed by correction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchReport {
    pub transcript: ClassicalTranscript,
    pub probability: f64,
    /// Recovery fidelity against the input secret; absent on zero-probability
    /// paths, where no state is realized.
    pub fidelity: Option<f64>,
    pub correction: GateSequence,
}

/// Runs every outcome path, applies the chosen correction, and reports each
/// path's probability and recovery fidelity. Probabilities sum to 1.
pub fn enumerate_protocol_branches(
    config: &ProtocolConfig,
    secret: &SecretState,
    decoder: &Decoder,
) -> Result<Vec<BranchReport>> {
    match decoder {
        Decoder::Eq6 if config.n != 5 => {
            return Err(Error::invalid("the five-qubit closed form requires N=5"))
        }
        Decoder::Eq8 if config.n != 6 => {
            return Err(Error::invalid("the six-qubit closed form requires N=6"))
        }
        Decoder::Table(table) if table.n != config.n => {
            return Err(Error::invalid(format!(
                "table is for N={}, run is N={}",
                table.n, config.n
            )));
        }
        _ => {}
    }
    let target = secret.to_state();
    let mut reports = Vec::new();
    for path in enumerate_paths(config, secret)? {
        let seq = match decoder {
            Decoder::Eq6 => decode_n5(&path.transcript)?,
            Decoder::Eq8 => decode_n6(&path.transcript)?,
            Decoder::Table(table) => table
                .sequence_for(&path.transcript)
                .ok_or_else(|| {
                    Error::invalid(format!("table has no row for {}", path.transcript))
                })?
                .clone(),
        };
        let fidelity = if path.zero_probability {
            None
        } else {
            let corrected = apply_correction(&path.charlie_state, &seq)?;
            Some(pure_fidelity(&corrected, &target)?)
        };
        reports.push(BranchReport {
            transcript: path.transcript,
            probability: path.probability,
            fidelity,
            correction: seq,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::locking::Bob1Style;

    fn config5() -> ProtocolConfig {
        ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        )
    }

    #[test]
    fn paths_total_probability_one() {
        for n in [5usize, 6, 7] {
            let config = ProtocolConfig::new(
                n,
                if n == 5 {
                    ChannelSource::Reference
                } else {
                    ChannelSource::Circuit
                },
                LockingVariant::new(true, Bob1Style::CnotThenMeasure),
            );
            let secret = SecretState::basis(0);
            let paths = enumerate_paths(&config, &secret).unwrap();
            let expected = 16 * (if n == 5 { 2 } else { 4 }) * (1 << n.saturating_sub(6));
            assert_eq!(paths.len(), expected);
            let total: f64 = paths.iter().map(|p| p.probability).sum();
            assert!((total - 1.0).abs() < 1e-9, "n={n} total={total}");
        }
    }

    #[test]
    fn decoder_chain_length_mismatch_rejected() {
        let secret = SecretState::basis(0);
        assert!(enumerate_protocol_branches(&config5(), &secret, &Decoder::Eq8).is_err());
        let config6 = ProtocolConfig::new(
            6,
            ChannelSource::Circuit,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        );
        assert!(enumerate_protocol_branches(&config6, &secret, &Decoder::Eq6).is_err());
    }

    #[test]
    fn eq6_closed_form_runs_on_all_branches() {
        let secret = SecretState::basis(0);
        let reports = enumerate_protocol_branches(&config5(), &secret, &Decoder::Eq6).unwrap();
        assert_eq!(reports.len(), 32);
        let total: f64 = reports.iter().map(|r| r.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(reports.iter().all(|r| r.fidelity.is_some()));
    }
}
