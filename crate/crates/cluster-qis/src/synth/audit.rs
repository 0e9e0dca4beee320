use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::protocol::{decode_n5, decode_n6, ClassicalTranscript, GateSequence, PairOp};
use crate::synth::table::{CorrectionTable, RowFlag};

/// How the closed-form decoders' bit symbols are read off the wire
/// transcript, and in which order the receiver's two qubits are numbered.
/// The worked examples and the equations disagree with each other, so the
/// audit reports every plausible reading instead of privileging one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitConvention {
    AsWritten,
    AliceReversed,
    AllReversed,
    AsWrittenCharlieSwapped,
    AliceReversedCharlieSwapped,
    AllReversedCharlieSwapped,
}

impl BitConvention {
    pub const ALL: [BitConvention; 6] = [
        BitConvention::AsWritten,
        BitConvention::AliceReversed,
        BitConvention::AllReversed,
        BitConvention::AsWrittenCharlieSwapped,
        BitConvention::AliceReversedCharlieSwapped,
        BitConvention::AllReversedCharlieSwapped,
    ];

    fn alice_reversed(self) -> bool {
        !matches!(
            self,
            BitConvention::AsWritten | BitConvention::AsWrittenCharlieSwapped
        )
    }

    fn bob_reversed(self) -> bool {
        matches!(
            self,
            BitConvention::AllReversed | BitConvention::AllReversedCharlieSwapped
        )
    }

    pub fn charlie_swapped(self) -> bool {
        matches!(
            self,
            BitConvention::AsWrittenCharlieSwapped
                | BitConvention::AliceReversedCharlieSwapped
                | BitConvention::AllReversedCharlieSwapped
        )
    }

    /// Bit-reversal is an involution, so this maps wire transcripts to
    /// decoder inputs and decoder inputs back to wire transcripts alike.
    pub fn apply(self, t: &ClassicalTranscript) -> ClassicalTranscript {
        let mut alice = t.alice_bits;
        if self.alice_reversed() {
            alice.reverse();
        }
        let mut bob = t.bob1_bits.clone();
        if self.bob_reversed() {
            bob.reverse();
        }
        ClassicalTranscript::new(alice, bob, t.mid_bits.clone())
    }
}

/// Which closed form is under audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Eq6,
    Eq8,
}

impl DecoderKind {
    pub fn chain_length(self) -> usize {
        match self {
            DecoderKind::Eq6 => 5,
            DecoderKind::Eq8 => 6,
        }
    }

    fn decode(self, t: &ClassicalTranscript) -> Result<GateSequence> {
        match self {
            DecoderKind::Eq6 => decode_n5(t),
            DecoderKind::Eq8 => decode_n6(t),
        }
    }

    /// The stated worked answer and its input bits.
    pub fn worked_example(self) -> (ClassicalTranscript, GateSequence) {
        match self {
            DecoderKind::Eq6 => (
                ClassicalTranscript::new([true, true, true, false], vec![true], vec![]),
                GateSequence(vec![PairOp::X1, PairOp::Cnot21, PairOp::Swap, PairOp::Z2]),
            ),
            DecoderKind::Eq8 => (
                ClassicalTranscript::new([false, true, false, false], vec![false, true], vec![]),
                GateSequence(vec![PairOp::X2, PairOp::Cnot21, PairOp::Z2]),
            ),
        }
    }
}

/// How the stated worked answer compares with the ground truth.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorkedExampleAudit {
    /// The worked input bits, as printed.
    pub input: ClassicalTranscript,
    /// The wire transcript those bits denote under this convention.
    pub wire_transcript: ClassicalTranscript,
    /// Does the stated answer agree with the literal equation?
    pub stated_matches_equation: bool,
    /// Does the stated answer invert the synthesized branch map?
    pub stated_matches_table: bool,
    /// Does the literal equation's output invert the branch map?
    pub literal_matches_table: bool,
    /// "both" | "equation" | "table" | "neither", judged on the stated answer.
    pub classification: String,
}

/// Result of comparing a closed-form decoder against a synthesized table
/// under one reading convention.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub decoder: DecoderKind,
    pub convention: BitConvention,
    /// Rows with a synthesized correction to compare against.
    pub comparable_rows: usize,
    pub matches: usize,
    pub match_fraction: f64,
    pub mismatched_transcripts: Vec<String>,
    pub worked_example: WorkedExampleAudit,
}

fn conjugate_if_swapped(u: &CMat, convention: BitConvention) -> CMat {
    if convention.charlie_swapped() {
        let sw = PairOp::Swap.matrix();
        sw.mul(u).mul(&sw)
    } else {
        u.clone()
    }
}

/// Compares the closed form, read under `convention`, against every
/// corrected row of `table`, and classifies the worked example.
pub fn audit_decoder(
    table: &CorrectionTable,
    decoder: DecoderKind,
    convention: BitConvention,
) -> Result<AuditReport> {
    if table.n != decoder.chain_length() {
        return Err(Error::invalid(format!(
            "decoder expects N={}, table is N={}",
            decoder.chain_length(),
            table.n
        )));
    }
    let mut comparable = 0usize;
    let mut matches = 0usize;
    let mut mismatched = Vec::new();
    for row in &table.rows {
        if row.flag != RowFlag::Corrected {
            continue;
        }
        comparable += 1;
        let truth = row.sequence.realize();
        let closed = decoder.decode(&convention.apply(&row.transcript))?.realize();
        if conjugate_if_swapped(&closed, convention).equal_up_to_phase(&truth, 1e-8) {
            matches += 1;
        } else {
            mismatched.push(row.transcript.to_string());
        }
    }

    let (input, stated) = decoder.worked_example();
    let wire_transcript = convention.apply(&input);
    let stated_u = conjugate_if_swapped(&stated.realize(), convention);
    let literal_u = conjugate_if_swapped(&decoder.decode(&input)?.realize(), convention);
    let stated_matches_equation = stated
        .realize()
        .equal_up_to_phase(&decoder.decode(&input)?.realize(), 1e-8);
    let row = &table.rows[wire_transcript.index()];
    let (stated_matches_table, literal_matches_table) = if row.flag == RowFlag::Corrected {
        let truth = row.sequence.realize();
        (
            stated_u.equal_up_to_phase(&truth, 1e-8),
            literal_u.equal_up_to_phase(&truth, 1e-8),
        )
    } else {
        (false, false)
    };
    let classification = match (stated_matches_table, stated_matches_equation) {
        (true, true) => "both",
        (true, false) => "table",
        (false, true) => "equation",
        (false, false) => "neither",
    }
    .to_string();

    Ok(AuditReport {
        decoder,
        convention,
        comparable_rows: comparable,
        matches,
        match_fraction: if comparable == 0 {
            0.0
        } else {
            matches as f64 / comparable as f64
        },
        mismatched_transcripts: mismatched,
        worked_example: WorkedExampleAudit {
            input,
            wire_transcript,
            stated_matches_equation,
            stated_matches_table,
            literal_matches_table,
            classification,
        },
    })
}
