use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::protocol::{ClassicalTranscript, GateSequence, LockingVariant, ProtocolConfig};
use crate::synth::dictionary::{build_dictionary, DictionaryLevel, GateDictionary};
use crate::synth::transfer::{transfer_maps, TransferMap};

/// Coverage status of one transcript row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowFlag {
    /// A dictionary entry inverts the branch transfer map.
    Corrected,
    /// The branch carries no probability; the identity is stored.
    ZeroProbability,
    /// No unitary correction exists, or none within the dictionary.
    Unsynthesizable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub transcript: ClassicalTranscript,
    pub sequence: GateSequence,
    pub flag: RowFlag,
}

/// Mapping transcript → correction for one protocol configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionTable {
    pub n: usize,
    pub source: crate::channel::ChannelSource,
    pub variant: LockingVariant,
    pub rows: Vec<TableRow>,
}

impl CorrectionTable {
    pub fn sequence_for(&self, t: &ClassicalTranscript) -> Option<&GateSequence> {
        self.rows.get(t.index()).map(|row| {
            debug_assert_eq!(&row.transcript, t);
            &row.sequence
        })
    }

    pub fn count(&self, flag: RowFlag) -> usize {
        self.rows.iter().filter(|r| r.flag == flag).count()
    }

    /// True when every row is corrected (no zero-probability holes, nothing
    /// unsynthesizable): the protocol is deterministic under this table.
    pub fn fully_corrected(&self) -> bool {
        self.rows.iter().all(|r| r.flag == RowFlag::Corrected)
    }
}

/// Synthesizes the correction table row by row.
///
/// For each realizable transcript the unique (mod phase) candidate inverse
/// M†/√c is looked up in the dictionary; rows whose transfer map is not
/// proportional to a unitary, or whose correction lies outside the
/// dictionary, are marked rather than failing. Tie-breaking never arises:
/// entries are deduplicated up to phase, so at most one can invert M.
pub fn synthesize_table(config: &ProtocolConfig, dict: &GateDictionary) -> Result<CorrectionTable> {
    let maps = transfer_maps(config)?;
    Ok(CorrectionTable {
        n: config.n,
        source: config.source,
        variant: config.variant,
        rows: maps.iter().map(|m| synthesize_row(m, dict)).collect(),
    })
}

fn synthesize_row(map: &TransferMap, dict: &GateDictionary) -> TableRow {
    if map.is_zero() {
        return TableRow {
            transcript: map.transcript.clone(),
            sequence: GateSequence::identity(),
            flag: RowFlag::ZeroProbability,
        };
    }
    let (sequence, flag) = match map.correction_unitary() {
        Some(candidate) => match dict.find(&candidate) {
            Some((_, seq)) => (seq.clone(), RowFlag::Corrected),
            None => (GateSequence::identity(), RowFlag::Unsynthesizable),
        },
        None => (GateSequence::identity(), RowFlag::Unsynthesizable),
    };
    TableRow {
        transcript: map.transcript.clone(),
        sequence,
        flag,
    }
}

/// Runs the escalation ladder and returns the first level whose dictionary
/// leaves no correctable row uncovered, together with its table.
pub fn synthesize_with_escalation(
    config: &ProtocolConfig,
) -> Result<(CorrectionTable, DictionaryLevel)> {
    let mut best: Option<(CorrectionTable, DictionaryLevel)> = None;
    for level in DictionaryLevel::ESCALATION {
        let dict = build_dictionary(level);
        let table = synthesize_table(config, &dict)?;
        let unsynth = table.count(RowFlag::Unsynthesizable);
        let done = unsynth == 0;
        best = Some((table, level));
        if done {
            break;
        }
    }
    Ok(best.expect("escalation ladder is nonempty"))
}

/// Verifies a stored correction against its transfer map: U·M must equal
/// c·I with |c|² the branch probability. Returns the max deviation and |c|².
pub fn verify_row(map: &TransferMap, seq: &GateSequence) -> (f64, f64) {
    let u = seq.realize();
    let um = u.mul(&map.matrix);
    let c = um.trace() / Complex64::new(4.0, 0.0);
    (um.max_abs_sub_scalar(c), c.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSource;
    use crate::protocol::{Bob1Style, LockingVariant};

    fn accepted5() -> ProtocolConfig {
        ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        )
    }

    #[test]
    fn n5_reference_fully_corrected_at_pauli_frame() {
        let dict = build_dictionary(DictionaryLevel::PauliFrame);
        let table = synthesize_table(&accepted5(), &dict).unwrap();
        assert_eq!(table.rows.len(), 32);
        assert!(table.fully_corrected());
        // every stored correction inverts its map, with |c|² = probability
        let maps = transfer_maps(&accepted5()).unwrap();
        for (row, map) in table.rows.iter().zip(&maps) {
            let (defect, p) = verify_row(map, &row.sequence);
            assert!(defect <= 1e-9);
            assert!((p - 1.0 / 32.0).abs() < 1e-9);
        }
    }

    #[test]
    fn escalation_reports_the_level_used() {
        let (table, level) = synthesize_with_escalation(&accepted5()).unwrap();
        assert!(table.fully_corrected());
        assert_eq!(level, DictionaryLevel::PauliFrame);

        // the six-qubit accepted channel needs Hadamard layers
        let config6 = ProtocolConfig::new(
            6,
            ChannelSource::Circuit,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        );
        let (table6, level6) = synthesize_with_escalation(&config6).unwrap();
        assert!(table6.fully_corrected());
        assert_eq!(table6.rows.len(), 64);
        assert_eq!(level6, DictionaryLevel::Extended);
    }

    #[test]
    fn broken_variant_rows_marked_unsynthesizable() {
        let config = ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(false, Bob1Style::CnotThenMeasure),
        );
        let dict = build_dictionary(DictionaryLevel::PauliFrame);
        let table = synthesize_table(&config, &dict).unwrap();
        assert_eq!(table.count(RowFlag::Unsynthesizable), 32);
        assert!(!table.fully_corrected());
    }

    #[test]
    fn table_json_round_trip() {
        let dict = build_dictionary(DictionaryLevel::PauliFrame);
        let table = synthesize_table(&accepted5(), &dict).unwrap();
        let text = serde_json::to_string(&table).unwrap();
        let back: CorrectionTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rows.len(), table.rows.len());
        for (a, b) in table.rows.iter().zip(&back.rows) {
            assert_eq!(a.transcript, b.transcript);
            assert_eq!(a.sequence, b.sequence);
            assert_eq!(a.flag, b.flag);
        }
        assert!(text.contains("\"flag\":\"corrected\""));
    }
}
