use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::protocol::{GateSequence, PairOp};

/// Search-space tiers for correction synthesis, escalated in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryLevel {
    /// Pauli layer · entangler · Pauli layer, with entanglers drawn from
    /// {I, CNOT12, CNOT21, SWAP, CNOT21·SWAP, CNOT12·SWAP}.
    PauliFrame,
    /// PauliFrame with Hadamard layers on either side of the entangler.
    Extended,
    /// The full two-qubit Clifford group (11520 elements up to phase),
    /// generated by closure over {H1, H2, S1, S2, CNOT12}.
    FullClifford,
}

impl DictionaryLevel {
    pub const ESCALATION: [DictionaryLevel; 3] = [
        DictionaryLevel::PauliFrame,
        DictionaryLevel::Extended,
        DictionaryLevel::FullClifford,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            DictionaryLevel::PauliFrame => "pauli_frame",
            DictionaryLevel::Extended => "extended",
            DictionaryLevel::FullClifford => "full_clifford",
        }
    }
}

/// Deduplicated correction dictionary: no two entries realize the same
/// unitary up to global phase. Entry order is the deterministic generation
/// order, which fixes tie-breaking downstream.
pub struct GateDictionary {
    level: DictionaryLevel,
    entries: Vec<(GateSequence, CMat)>,
    index: HashMap<Vec<(i64, i64)>, usize>,
}

impl GateDictionary {
    pub fn level(&self) -> DictionaryLevel {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &(GateSequence, CMat)> {
        self.entries.iter()
    }

    fn insert(&mut self, seq: GateSequence) {
        let matrix = seq.realize();
        let key = matrix.phase_canonical_key();
        if let std::collections::hash_map::Entry::Vacant(e) = self.index.entry(key) {
            e.insert(self.entries.len());
            self.entries.push((seq, matrix));
        }
    }

    /// Finds the entry equal to `target` up to global phase, if present.
    /// A quantized-key lookup with an exact verification, falling back to a
    /// linear scan so key-rounding can never miss.
    pub fn find(&self, target: &CMat) -> Option<(usize, &GateSequence)> {
        if let Some(&i) = self.index.get(&target.phase_canonical_key()) {
            if self.entries[i].1.equal_up_to_phase(target, 1e-8) {
                return Some((i, &self.entries[i].0));
            }
        }
        self.entries
            .iter()
            .enumerate()
            .find(|(_, (_, m))| m.equal_up_to_phase(target, 1e-8))
            .map(|(i, (seq, _))| (i, seq))
    }

    pub fn contains(&self, target: &CMat) -> bool {
        self.find(target).is_some()
    }
}

/// Per-qubit Pauli choices of a layer, as op lists (XZ is σx·σz).
fn pauli_layer_ops() -> Vec<Vec<PairOp>> {
    let first: [&[PairOp]; 4] = [&[], &[PairOp::X1], &[PairOp::Z1], &[PairOp::X1, PairOp::Z1]];
    let second: [&[PairOp]; 4] = [&[], &[PairOp::X2], &[PairOp::Z2], &[PairOp::X2, PairOp::Z2]];
    let mut layers = Vec::with_capacity(16);
    for f in first {
        for s in second {
            let mut ops = f.to_vec();
            ops.extend_from_slice(s);
            layers.push(ops);
        }
    }
    layers
}

fn entanglers() -> Vec<Vec<PairOp>> {
    vec![
        vec![],
        vec![PairOp::Cnot12],
        vec![PairOp::Cnot21],
        vec![PairOp::Swap],
        vec![PairOp::Cnot21, PairOp::Swap],
        vec![PairOp::Cnot12, PairOp::Swap],
    ]
}

fn hadamard_layers() -> Vec<Vec<PairOp>> {
    vec![
        vec![],
        vec![PairOp::H1],
        vec![PairOp::H2],
        vec![PairOp::H1, PairOp::H2],
    ]
}

fn assemble(parts: &[&[PairOp]]) -> GateSequence {
    let ops: Vec<PairOp> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    if ops.is_empty() {
        GateSequence::identity()
    } else {
        GateSequence(ops)
    }
}

/// Cached dictionaries; each tier is deterministic, so building once is
/// sound and keeps sweeps from re-deriving the Clifford group per config.
pub fn dictionary(level: DictionaryLevel) -> &'static GateDictionary {
    use std::sync::OnceLock;
    static PAULI: OnceLock<GateDictionary> = OnceLock::new();
    static EXTENDED: OnceLock<GateDictionary> = OnceLock::new();
    static FULL: OnceLock<GateDictionary> = OnceLock::new();
    match level {
        DictionaryLevel::PauliFrame => PAULI.get_or_init(|| build_dictionary(level)),
        DictionaryLevel::Extended => EXTENDED.get_or_init(|| build_dictionary(level)),
        DictionaryLevel::FullClifford => FULL.get_or_init(|| build_dictionary(level)),
    }
}

/// Builds the deduplicated dictionary for a tier.
pub fn build_dictionary(level: DictionaryLevel) -> GateDictionary {
    let mut dict = GateDictionary {
        level,
        entries: Vec::new(),
        index: HashMap::new(),
    };
    dict.insert(GateSequence::identity());
    match level {
        DictionaryLevel::PauliFrame => {
            for left in &pauli_layer_ops() {
                for ent in &entanglers() {
                    for right in &pauli_layer_ops() {
                        dict.insert(assemble(&[left, ent, right]));
                    }
                }
            }
        }
        DictionaryLevel::Extended => {
            for left in &pauli_layer_ops() {
                for hl in &hadamard_layers() {
                    for ent in &entanglers() {
                        for hr in &hadamard_layers() {
                            for right in &pauli_layer_ops() {
                                dict.insert(assemble(&[left, hl, ent, hr, right]));
                            }
                        }
                    }
                }
            }
        }
        DictionaryLevel::FullClifford => {
            // breadth-first closure over the generator set
            let gens = [
                PairOp::H1,
                PairOp::H2,
                PairOp::S1,
                PairOp::S2,
                PairOp::Cnot12,
            ];
            let mut frontier: Vec<usize> = vec![0];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &i in &frontier {
                    let (base_seq, _) = &dict.entries[i];
                    let base_ops = if base_seq.ops() == [PairOp::Id] {
                        Vec::new()
                    } else {
                        base_seq.ops().to_vec()
                    };
                    for g in gens {
                        let before = dict.entries.len();
                        let mut ops = vec![g];
                        ops.extend(base_ops.iter().copied());
                        dict.insert(GateSequence(ops));
                        if dict.entries.len() > before {
                            next.push(before);
                        }
                    }
                }
                frontier = next;
            }
        }
    }
    dict
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_frame_size_and_contents() {
        let dict = build_dictionary(DictionaryLevel::PauliFrame);
        // 16 Paulis (mod phase) per coset of 6 entanglers
        assert_eq!(dict.len(), 96);
        // the stated five-qubit worked correction lives in this family
        let worked = GateSequence(vec![PairOp::X1, PairOp::Cnot21, PairOp::Swap, PairOp::Z2]);
        assert!(dict.contains(&worked.realize()));
        // identity present
        assert!(dict.contains(&CMat::identity(4)));
    }

    #[test]
    fn extended_contains_pauli_frame() {
        let ext = build_dictionary(DictionaryLevel::Extended);
        let pf = build_dictionary(DictionaryLevel::PauliFrame);
        assert!(ext.len() > pf.len());
        for (_, m) in pf.entries() {
            assert!(ext.contains(m));
        }
        assert!(ext.contains(&CMat::identity(4)));
    }

    #[test]
    fn full_clifford_count() {
        let dict = build_dictionary(DictionaryLevel::FullClifford);
        assert_eq!(dict.len(), 11520);
        assert!(dict.contains(&CMat::identity(4)));
    }

    #[test]
    fn entries_unitary_and_distinct_mod_phase() {
        let dict = build_dictionary(DictionaryLevel::Extended);
        for (seq, m) in dict.entries() {
            assert!(m.unitarity_defect() <= 1e-12, "{seq}");
        }
        let keys: std::collections::HashSet<_> = dict
            .entries()
            .map(|(_, m)| m.phase_canonical_key())
            .collect();
        assert_eq!(keys.len(), dict.len());
    }

    #[test]
    fn find_is_phase_invariant() {
        let dict = build_dictionary(DictionaryLevel::PauliFrame);
        let seq = GateSequence(vec![PairOp::Z1, PairOp::Swap]);
        let rotated = seq.realize().scale(num_complex::Complex64::from_polar(1.0, 0.777));
        let (_, hit) = dict.find(&rotated).expect("present");
        assert!(hit.realize().equal_up_to_phase(&rotated, 1e-8));
    }
}
