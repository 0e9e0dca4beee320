use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The classical bits Charlie receives: Alice's four, Bob1's one (N = 5) or
/// two (N ≥ 6), and one per middle party.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassicalTranscript {
    pub alice_bits: [bool; 4],
    pub bob1_bits: Vec<bool>,
    pub mid_bits: Vec<bool>,
}

impl ClassicalTranscript {
    pub fn new(alice_bits: [bool; 4], bob1_bits: Vec<bool>, mid_bits: Vec<bool>) -> Self {
        ClassicalTranscript {
            alice_bits,
            bob1_bits,
            mid_bits,
        }
    }

    fn expected_bob_bits(n: usize) -> usize {
        if n == 5 {
            1
        } else {
            2
        }
    }

    fn expected_mid_bits(n: usize) -> usize {
        n.saturating_sub(6)
    }

    /// Checks bit counts against a chain length.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.bob1_bits.len() != Self::expected_bob_bits(n)
            || self.mid_bits.len() != Self::expected_mid_bits(n)
        {
            return Err(Error::invalid(format!(
                "transcript {self} has wrong bit counts for N={n}"
            )));
        }
        Ok(())
    }

    pub fn total_bits(&self) -> usize {
        4 + self.bob1_bits.len() + self.mid_bits.len()
    }

    /// Index of this transcript in the canonical (binary-counting) order.
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for &b in self
            .alice_bits
            .iter()
            .chain(&self.bob1_bits)
            .chain(&self.mid_bits)
        {
            idx = (idx << 1) | usize::from(b);
        }
        idx
    }

    /// All transcripts for a chain length, in canonical order.
    pub fn enumerate_all(n: usize) -> Result<Vec<ClassicalTranscript>> {
        if n < 5 {
            return Err(Error::invalid(format!("N={n} < 5")));
        }
        let nb = Self::expected_bob_bits(n);
        let nm = Self::expected_mid_bits(n);
        let total = 4 + nb + nm;
        let mut out = Vec::with_capacity(1 << total);
        for idx in 0..(1usize << total) {
            let bit = |pos: usize| (idx >> (total - 1 - pos)) & 1 == 1;
            let alice = [bit(0), bit(1), bit(2), bit(3)];
            let bob: Vec<bool> = (0..nb).map(|j| bit(4 + j)).collect();
            let mid: Vec<bool> = (0..nm).map(|j| bit(4 + nb + j)).collect();
            out.push(ClassicalTranscript::new(alice, bob, mid));
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let groups: Vec<&str> = text.split('|').collect();
        if groups.len() != 3 {
            return Err(Error::invalid(format!(
                "transcript '{text}' must have three |-separated groups"
            )));
        }
        let bits = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::invalid(format!("bad bit '{c}' in '{text}'"))),
                })
                .collect()
        };
        let alice = bits(groups[0])?;
        if alice.len() != 4 {
            return Err(Error::invalid(format!(
                "transcript '{text}' needs exactly 4 dealer bits"
            )));
        }
        Ok(ClassicalTranscript::new(
            [alice[0], alice[1], alice[2], alice[3]],
            bits(groups[1])?,
            bits(groups[2])?,
        ))
    }
}

fn group(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl std::fmt::Display for ClassicalTranscript {
    /// Encoding "a1a2a3a4|b…|m…"; the mid group is empty for N = 5, 6.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}|{}|{}",
            group(&self.alice_bits),
            group(&self.bob1_bits),
            group(&self.mid_bits)
        )
    }
}

impl TryFrom<String> for ClassicalTranscript {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        ClassicalTranscript::parse(&s)
    }
}

impl From<ClassicalTranscript> for String {
    fn from(t: ClassicalTranscript) -> String {
        t.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode() {
        let t = ClassicalTranscript::new([true, false, true, true], vec![false], vec![]);
        assert_eq!(t.to_string(), "1011|0|");
        assert_eq!(ClassicalTranscript::parse("1011|0|").unwrap(), t);
        let t8 = ClassicalTranscript::new(
            [false; 4],
            vec![true, false],
            vec![true, true],
        );
        assert_eq!(t8.to_string(), "0000|10|11");
        assert!(t8.validate_for(8).is_ok());
        assert!(t8.validate_for(6).is_err());
    }

    #[test]
    fn counts_per_chain_length() {
        assert_eq!(ClassicalTranscript::enumerate_all(5).unwrap().len(), 32);
        assert_eq!(ClassicalTranscript::enumerate_all(6).unwrap().len(), 64);
        assert_eq!(ClassicalTranscript::enumerate_all(8).unwrap().len(), 256);
        // total bits = 4 + (1 if N=5 else 2) + max(0, N-6)
        let t = &ClassicalTranscript::enumerate_all(9).unwrap()[0];
        assert_eq!(t.total_bits(), 4 + 2 + 3);
    }

    #[test]
    fn canonical_order_is_binary_counting() {
        let all = ClassicalTranscript::enumerate_all(5).unwrap();
        for (i, t) in all.iter().enumerate() {
            assert_eq!(t.index(), i);
        }
        assert_eq!(all[0b10110].to_string(), "1011|0|");
    }

    #[test]
    fn bad_strings_rejected()  {
        assert!(ClassicalTranscript::parse("01|0|").is_err());
        assert!(ClassicalTranscript::parse("0000|0").is_err());
        assert!(ClassicalTranscript::parse("00x0|0|").is_err());
    }
}
