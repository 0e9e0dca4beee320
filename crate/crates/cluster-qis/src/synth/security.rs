use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{assign_parties, lock, prepare_joint_state, ProtocolConfig, SecretState};
use crate::sim::{reduced_density_matrix, trace_distance};

/// A single non-dealer party whose view is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Bob1,
    /// Middle party index i in 2..=N-5 holding channel qubit i+3.
    MidBob(usize),
    /// The receiver, conditioned on the dealer's bits but before any Bob
    /// bits arrive (his marginal then averages over their outcomes).
    Charlie,
}

impl Party {
    pub fn label(self) -> String {
        match self {
            Party::Bob1 => "bob1".into(),
            Party::MidBob(i) => format!("bob{i}"),
            Party::Charlie => "charlie".into(),
        }
    }

    /// Every scannable party for a chain length, in wire order.
    pub fn all_for(n: usize) -> Vec<Party> {
        let mut parties = vec![Party::Bob1];
        parties.extend((2..=n.saturating_sub(5)).map(Party::MidBob));
        parties.push(Party::Charlie);
        parties
    }

    /// The party's wire positions inside the post-lock survivor state.
    /// Joint wires 1..4 are measured away in the locking step, so survivor
    /// position p corresponds to joint wire p+4.
    fn post_lock_wires(self, n: usize) -> Result<Vec<usize>> {
        let assignment = assign_parties(n)?;
        let map = |wire: usize| -> Result<usize> {
            if wire <= 4 {
                return Err(Error::invalid("wire is measured away in the locking step"));
            }
            Ok(wire - 4)
        };
        match self {
            Party::Bob1 => assignment.bob1.iter().map(|&w| map(w)).collect(),
            Party::MidBob(i) => {
                let idx = i.checked_sub(2).ok_or_else(|| {
                    Error::invalid(format!("middle party index {i} out of range"))
                })?;
                let wire = *assignment
                    .mid_bobs
                    .get(idx)
                    .ok_or_else(|| Error::invalid(format!("no middle party {i} for N={n}")))?;
                Ok(vec![map(wire)?])
            }
            Party::Charlie => assignment.charlie.iter().map(|&w| map(w)).collect(),
        }
    }
}

/// Result of a reduced-density-matrix distinguishability scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SecurityReport {
    pub party: String,
    pub n: usize,
    pub pairs: usize,
    pub seed: u64,
    /// Max trace distance seen in each dealer-outcome branch (canonical
    /// order), over all sampled secret pairs.
    pub per_branch_max: Vec<f64>,
    pub global_max: f64,
}

/// For each dealer outcome branch, compares the party's reduced density
/// matrix between `pairs` sampled secret pairs and reports the maximum trace
/// distance. A distance of 0 would mean the party's view is independent of
/// the secret even given the dealer's bits.
pub fn security_scan(
    config: &ProtocolConfig,
    party: Party,
    pairs: usize,
    seed: u64,
) -> Result<SecurityReport> {
    let wires = party.post_lock_wires(config.n)?;
    let channel = config.channel()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_branch_max = vec![0.0f64; 16];
    for _ in 0..pairs {
        let s1 = SecretState::random(&mut rng);
        let s2 = SecretState::random(&mut rng);
        let b1 = lock(&prepare_joint_state(&s1, &channel), &config.variant)?;
        let b2 = lock(&prepare_joint_state(&s2, &channel), &config.variant)?;
        for (k, ((_, br1), (_, br2))) in b1.iter().zip(&b2).enumerate() {
            if br1.zero_probability || br2.zero_probability {
                continue;
            }
            let r1 = reduced_density_matrix(&br1.post_state, &wires)?;
            let r2 = reduced_density_matrix(&br2.post_state, &wires)?;
            let d = trace_distance(&r1, &r2)?;
            per_branch_max[k] = per_branch_max[k].max(d);
        }
    }
    let global_max = per_branch_max.iter().copied().fold(0.0, f64::max);
    Ok(SecurityReport {
        party: party.label(),
        n: config.n,
        pairs,
        seed,
        per_branch_max,
        global_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSource;
    use crate::protocol::{Bob1Style, LockingVariant};
    use crate::sim::DensityMatrix;

    fn accepted5() -> ProtocolConfig {
        ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        )
    }

    #[test]
    fn identical_secrets_have_zero_distance() {
        let config = accepted5();
        let channel = config.channel().unwrap();
        let s = SecretState::basis(2);
        let branches = lock(&prepare_joint_state(&s, &channel), &config.variant).unwrap();
        let (_, b) = &branches[3];
        let rho = reduced_density_matrix(&b.post_state, &[1]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn parties_enumerate_with_chain_length() {
        assert_eq!(Party::all_for(5).len(), 2); // bob1, charlie
        assert_eq!(Party::all_for(8).len(), 4); // bob1, bob2, bob3, charlie
        assert_eq!(Party::MidBob(2).label(), "bob2");
    }

    #[test]
    fn scan_is_seed_reproducible() {
        let config = accepted5();
        let a = security_scan(&config, Party::Bob1, 3, 17).unwrap();
        let b = security_scan(&config, Party::Bob1, 3, 17).unwrap();
        assert_eq!(a.per_branch_max, b.per_branch_max);
        assert_eq!(a.global_max, b.global_max);
        assert!(a.global_max <= 1.0 + 1e-9);
    }

    #[test]
    fn charlie_marginal_equals_bob_average() {
        // Measuring Bob's wire cannot change Charlie's marginal: the
        // post-lock reduced state already averages over his outcomes.
        let config = accepted5();
        let channel = config.channel().unwrap();
        let s = SecretState::basis(3);
        let branches = lock(&prepare_joint_state(&s, &channel), &config.variant).unwrap();
        let (_, b) = &branches[5];
        let direct = reduced_density_matrix(&b.post_state, &[2, 3]).unwrap();
        let bob = crate::protocol::unlock_bob1(&b.post_state, 5, &config.variant).unwrap();
        let mut avg = crate::linalg::CMat::zeros(4);
        for (_, bb) in &bob {
            if bb.zero_probability {
                continue;
            }
            let rho = reduced_density_matrix(&bb.post_state, &[1, 2]).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    avg[(i, j)] += rho.entries()[(i, j)]
                        * num_complex::Complex64::new(bb.probability, 0.0);
                }
            }
        }
        let avg = DensityMatrix::from_entries(2, avg).unwrap();
        assert!(direct.max_abs_diff(&avg) < 1e-10);
    }
}
