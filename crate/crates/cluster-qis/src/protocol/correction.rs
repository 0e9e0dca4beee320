use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::sim::StateVector;

/// Named operations on the receiver's two-qubit register. Qubit 1 is his
/// lower-indexed channel wire. `Cnot12` is controlled on qubit 1, `Cnot21`
/// on qubit 2. The phase gates `S1`/`S2` and Hadamards `H1`/`H2` extend the
/// vocabulary enough to express any two-qubit Clifford correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairOp {
    #[serde(rename = "I")]
    Id,
    X1,
    X2,
    XX,
    Z1,
    Z2,
    ZZ,
    H1,
    H2,
    S1,
    S2,
    #[serde(rename = "CNOT12")]
    Cnot12,
    #[serde(rename = "CNOT21")]
    Cnot21,
    #[serde(rename = "SWAP")]
    Swap,
}

impl PairOp {
    pub fn matrix(self) -> CMat {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let f = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let m2 = |rows: [[Complex64; 2]; 2]| CMat::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]);
        let eye = m2([[o, z], [z, o]]);
        let x = m2([[z, o], [o, z]]);
        let zg = m2([[o, z], [z, -o]]);
        let h = m2([[f, f], [f, -f]]);
        let s = m2([[o, z], [z, i]]);
        match self {
            PairOp::Id => eye.kron(&eye),
            PairOp::X1 => x.kron(&eye),
            PairOp::X2 => eye.kron(&x),
            PairOp::XX => x.kron(&x),
            PairOp::Z1 => zg.kron(&eye),
            PairOp::Z2 => eye.kron(&zg),
            PairOp::ZZ => zg.kron(&zg),
            PairOp::H1 => h.kron(&eye),
            PairOp::H2 => eye.kron(&h),
            PairOp::S1 => s.kron(&eye),
            PairOp::S2 => eye.kron(&s),
            PairOp::Cnot12 => {
                let mut m = CMat::zeros(4);
                for (out, inp) in [(0, 0), (1, 1), (3, 2), (2, 3)] {
                    m[(out, inp)] = o;
                }
                m
            }
            PairOp::Cnot21 => {
                let mut m = CMat::zeros(4);
                for (out, inp) in [(0, 0), (3, 1), (2, 2), (1, 3)] {
                    m[(out, inp)] = o;
                }
                m
            }
            PairOp::Swap => {
                let mut m = CMat::zeros(4);
                for (out, inp) in [(0, 0), (2, 1), (1, 2), (3, 3)] {
                    m[(out, inp)] = o;
                }
                m
            }
        }
    }
}

/// An ordered product of [`PairOp`]s, applied right to left as written
/// (matrix-product order). The empty sequence realizes the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateSequence(pub Vec<PairOp>);

impl GateSequence {
    pub fn identity() -> Self {
        GateSequence(vec![PairOp::Id])
    }

    /// The realized 4x4 unitary.
    pub fn realize(&self) -> CMat {
        let mut m = CMat::identity(4);
        for op in &self.0 {
            m = m.mul(&op.matrix());
        }
        m
    }

    pub fn ops(&self) -> &[PairOp] {
        &self.0
    }
}

impl std::fmt::Display for GateSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self
            .0
            .iter()
            .map(|op| serde_json::to_string(op).unwrap().trim_matches('"').to_string())
            .collect();
        write!(f, "{}", names.join("."))
    }
}

/// Applies the realized correction to the receiver's two-qubit state.
pub fn apply_correction(charlie_state: &StateVector, seq: &GateSequence) -> Result<StateVector> {
    if charlie_state.num_qubits() != 2 {
        return Err(Error::invalid(format!(
            "correction needs a 2-qubit state, got {} qubits",
            charlie_state.num_qubits()
        )));
    }
    let u = seq.realize();
    let a = charlie_state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); 4];
    for (r, o) in out.iter_mut().enumerate() {
        for (c, v) in a.iter().enumerate() {
            *o += u[(r, c)] * v;
        }
    }
    Ok(StateVector::from_raw(2, out))
}

fn xor(bits: &[bool]) -> bool {
    bits.iter().fold(false, |acc, &b| acc ^ b)
}

/// Five-qubit closed-form decoder, evaluated literally.
///
/// The first bracket selects an X-layer from (a4, a2): (0,0)→X⊗I,
/// (0,1)→I⊗X, (1,0)→I, (1,1)→X⊗X. The second selects a Z-layer from
/// (a1⊕a3, a3⊕b1): (0,0)→I⊗Z, (0,1)→Z⊗I, (1,0)→Z⊗Z, (1,1)→I. The result is
/// X-layer · CNOT21 · SWAP · Z-layer. Total over all 32 transcripts.
pub fn decode_n5(t: &crate::protocol::ClassicalTranscript) -> Result<GateSequence> {
    t.validate_for(5)?;
    let [a1, a2, a3, a4] = t.alice_bits;
    let b1 = t.bob1_bits[0];
    let xop = match (a4, a2) {
        (false, false) => PairOp::X1,
        (false, true) => PairOp::X2,
        (true, false) => PairOp::Id,
        (true, true) => PairOp::XX,
    };
    let zop = match (xor(&[a1, a3]), xor(&[a3, b1])) {
        (false, false) => PairOp::Z2,
        (false, true) => PairOp::Z1,
        (true, false) => PairOp::ZZ,
        (true, true) => PairOp::Id,
    };
    Ok(GateSequence(vec![xop, PairOp::Cnot21, PairOp::Swap, zop]))
}

/// Six-qubit closed-form decoder, evaluated literally.
///
/// X-layer from (a4, a1⊕a2⊕b1⊕a3⊕b2): (0,0)→X⊗I, (0,1)→I, (1,0)→I⊗X,
/// (1,1)→X⊗X. Z-layer from (a1⊕a3, a3⊕b2): (0,0)→Z⊗I, (0,1)→I⊗Z,
/// (1,0)→Z⊗Z, (1,1)→I. Result: X-layer · CNOT21 · Z-layer; total over all
/// 64 transcripts.
pub fn decode_n6(t: &crate::protocol::ClassicalTranscript) -> Result<GateSequence> {
    t.validate_for(6)?;
    let [a1, a2, a3, a4] = t.alice_bits;
    let (b1, b2) = (t.bob1_bits[0], t.bob1_bits[1]);
    let parity = xor(&[a1, a2, b1, a3, b2]);
    let xop = match (a4, parity) {
        (false, false) => PairOp::X1,
        (false, true) => PairOp::Id,
        (true, false) => PairOp::X2,
        (true, true) => PairOp::XX,
    };
    let zop = match (xor(&[a1, a3]), xor(&[a3, b2])) {
        (false, false) => PairOp::Z1,
        (false, true) => PairOp::Z2,
        (true, false) => PairOp::ZZ,
        (true, true) => PairOp::Id,
    };
    Ok(GateSequence(vec![xop, PairOp::Cnot21, zop]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ClassicalTranscript;

    fn t5(a: [u8; 4], b: u8) -> ClassicalTranscript {
        ClassicalTranscript::new(
            [a[0] == 1, a[1] == 1, a[2] == 1, a[3] == 1],
            vec![b == 1],
            vec![],
        )
    }

    fn t6(a: [u8; 4], b: [u8; 2]) -> ClassicalTranscript {
        ClassicalTranscript::new(
            [a[0] == 1, a[1] == 1, a[2] == 1, a[3] == 1],
            vec![b[0] == 1, b[1] == 1],
            vec![],
        )
    }

    #[test]
    fn decode_n5_literal_examples() {
        assert_eq!(
            decode_n5(&t5([0, 0, 0, 0], 0)).unwrap().ops(),
            &[PairOp::X1, PairOp::Cnot21, PairOp::Swap, PairOp::Z2]
        );
        assert_eq!(
            decode_n5(&t5([0, 1, 0, 1], 1)).unwrap().ops(),
            &[PairOp::XX, PairOp::Cnot21, PairOp::Swap, PairOp::Z1]
        );
        // the worked-example transcript: the literal evaluation picks I⊗X
        // where the stated answer has X⊗I
        assert_eq!(
            decode_n5(&t5([1, 1, 1, 0], 1)).unwrap().ops(),
            &[PairOp::X2, PairOp::Cnot21, PairOp::Swap, PairOp::Z2]
        );
    }

    #[test]
    fn decode_n6_literal_examples() {
        assert_eq!(
            decode_n6(&t6([0, 0, 0, 0], [0, 0])).unwrap().ops(),
            &[PairOp::X1, PairOp::Cnot21, PairOp::Z1]
        );
        // the worked-example transcript: literal evaluation picks X⊗I
        // where the stated answer has I⊗X
        assert_eq!(
            decode_n6(&t6([0, 1, 0, 0], [0, 1])).unwrap().ops(),
            &[PairOp::X1, PairOp::Cnot21, PairOp::Z2]
        );
    }

    #[test]
    fn decoders_total_and_unitary() {
        for t in ClassicalTranscript::enumerate_all(5).unwrap() {
            let seq = decode_n5(&t).unwrap();
            assert!(seq.realize().unitarity_defect() <= 1e-12);
        }
        for t in ClassicalTranscript::enumerate_all(6).unwrap() {
            let seq = decode_n6(&t).unwrap();
            assert!(seq.realize().unitarity_defect() <= 1e-12);
        }
        // wrong bit counts are rejected
        assert!(decode_n5(&t6([0; 4], [0, 0])).is_err());
        assert!(decode_n6(&t5([0; 4], 0)).is_err());
    }

    #[test]
    fn selector_exclusivity_by_exhaustion() {
        // Every transcript picks exactly one X option and one Z option; the
        // match statements above are total, so it suffices that the four
        // selector pairs enumerate all combinations.
        let mut seen5 = std::collections::HashSet::new();
        for t in ClassicalTranscript::enumerate_all(5).unwrap() {
            let seq = decode_n5(&t).unwrap();
            seen5.insert((seq.ops()[0], seq.ops()[3]));
        }
        assert_eq!(seen5.len(), 16);
    }

    #[test]
    fn apply_correction_examples() {
        let s = StateVector::basis_state(2, "00").unwrap();
        let out = apply_correction(&s, &GateSequence::identity()).unwrap();
        assert_eq!(out.amplitude_of("00").unwrap().re, 1.0);
        let out = apply_correction(&s, &GateSequence(vec![PairOp::X1])).unwrap();
        assert_eq!(out.amplitude_of("10").unwrap().re, 1.0);
        assert!(apply_correction(
            &StateVector::basis_state(3, "000").unwrap(),
            &GateSequence::identity()
        )
        .is_err());
    }

    #[test]
    fn sequence_order_is_matrix_product() {
        // [X1, Z1] realizes X·Z = the XZ matrix, not Z·X.
        let seq = GateSequence(vec![PairOp::X1, PairOp::Z1]);
        let m = seq.realize();
        // on |00>: Z first (no-op), then X -> |10>
        let s = StateVector::basis_state(2, "00").unwrap();
        let out = apply_correction(&s, &seq).unwrap();
        assert_eq!(out.amplitude_of("10").unwrap().re, 1.0);
        // on |10>: Z gives -|10>, X gives -|00>
        let s = StateVector::basis_state(2, "10").unwrap();
        let out = apply_correction(&s, &seq).unwrap();
        assert_eq!(out.amplitude_of("00").unwrap().re, -1.0);
        assert!((m.unitarity_defect()) < 1e-12);
    }

    #[test]
    fn pair_op_json_names() {
        let seq = GateSequence(vec![PairOp::X1, PairOp::Cnot21, PairOp::Swap, PairOp::Z2]);
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            r#"["X1","CNOT21","SWAP","Z2"]"#
        );
        assert_eq!(seq.to_string(), "X1.CNOT21.SWAP.Z2");
    }
}
