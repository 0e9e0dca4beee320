use crate::error::{Error, Result};

/// Which joint-state wires each party holds.
///
/// Wires are 1-based indices into the (N+2)-qubit joint state: wires 1 and 2
/// are the dealer's secret pair, wire i+2 carries channel qubit i of the
/// redistributed chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyAssignment {
    pub n: usize,
    pub alice: Vec<usize>,
    pub bob1: Vec<usize>,
    /// One wire per middle party, in party order.
    pub mid_bobs: Vec<usize>,
    pub charlie: [usize; 2],
}

/// Distribution rule: Alice keeps her secret pair plus channel qubits 1 and
/// 2; Bob1 gets qubit 3 (and 4 when N ≥ 6); each middle party one qubit;
/// Charlie the last two.
pub fn assign_parties(n: usize) -> Result<PartyAssignment> {
    if n < 5 {
        return Err(Error::invalid(format!("protocol needs N >= 5, got {n}")));
    }
    let wire = |channel_qubit: usize| channel_qubit + 2;
    let assignment = if n == 5 {
        PartyAssignment {
            n,
            alice: vec![1, 2, wire(1), wire(2)],
            bob1: vec![wire(3)],
            mid_bobs: vec![],
            charlie: [wire(4), wire(5)],
        }
    } else {
        PartyAssignment {
            n,
            alice: vec![1, 2, wire(1), wire(2)],
            bob1: vec![wire(3), wire(4)],
            mid_bobs: (5..=n - 2).map(wire).collect(),
            charlie: [wire(n - 1), wire(n)],
        }
    };
    Ok(assignment)
}

impl PartyAssignment {
    /// Total number of parties (Alice, the Bobs, Charlie).
    pub fn num_parties(&self) -> usize {
        2 + 1 + self.mid_bobs.len()
    }

    /// Every wire exactly once, ascending — the partition sanity check.
    pub fn all_wires(&self) -> Vec<usize> {
        let mut wires = self.alice.clone();
        wires.extend(&self.bob1);
        wires.extend(&self.mid_bobs);
        wires.extend(self.charlie);
        wires.sort_unstable();
        wires
    }
}
