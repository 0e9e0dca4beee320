use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::protocol::{ClassicalTranscript, ProtocolConfig, SecretState};

/// Proportionality tolerance for the determinism criterion M†M ∝ I.
pub const PROP_TOL: f64 = 1e-9;

/// Linear map from secret amplitudes (standard order |00>,|01>,|10>,|11>) to
/// the receiver's unnormalized two-qubit state along one outcome path.
/// The path probability for secret s is ‖M s‖².
#[derive(Clone, Debug)]
pub struct TransferMap {
    pub transcript: ClassicalTranscript,
    pub matrix: CMat,
}

impl TransferMap {
    /// Some(c) with M†M = c·I when the branch is correctable by a unitary;
    /// c is then the (secret-independent) branch probability.
    pub fn proportionality(&self) -> Option<f64> {
        let a = self.matrix.adjoint().mul(&self.matrix);
        let c = a.trace().re / 4.0;
        if c > 1e-12 && a.max_abs_sub_scalar(Complex64::new(c, 0.0)) <= PROP_TOL {
            Some(c)
        } else {
            None
        }
    }

    /// True when the branch carries (numerically) no probability for any
    /// secret.
    pub fn is_zero(&self) -> bool {
        self.matrix.max_abs() < 1e-9
    }

    /// The unique (up to phase) correcting unitary M†/√c, when one exists.
    pub fn correction_unitary(&self) -> Option<CMat> {
        let c = self.proportionality()?;
        Some(
            self.matrix
                .adjoint()
                .scale(Complex64::new(1.0 / c.sqrt(), 0.0)),
        )
    }

    /// Image of a secret: M·s, the unnormalized receiver state.
    pub fn apply(&self, secret: &SecretState) -> Vec<Complex64> {
        let s = secret.amplitudes();
        (0..4)
            .map(|r| (0..4).map(|c| self.matrix[(r, c)] * s[c]).sum())
            .collect()
    }
}

/// Transfer maps for every transcript, assembled column-by-column from runs
/// on the four basis secrets |00>, |01>, |10>, |11>.
pub fn transfer_maps(config: &ProtocolConfig) -> Result<Vec<TransferMap>> {
    let channel = config.channel()?;
    transfer_maps_on_channel(&channel, config.n, &config.variant)
}

/// [`transfer_maps`] against an explicit channel state.
pub fn transfer_maps_on_channel(
    channel: &crate::sim::StateVector,
    n: usize,
    variant: &crate::protocol::LockingVariant,
) -> Result<Vec<TransferMap>> {
    let mut columns = Vec::with_capacity(4);
    for basis_index in 0..4 {
        let secret = SecretState::basis(basis_index);
        columns.push(crate::protocol::enumerate_paths_on_channel(
            channel, n, variant, &secret,
        )?);
    }
    let rows = columns[0].len();
    for col in &columns {
        if col.len() != rows {
            return Err(Error::invalid("basis runs disagree on path count"));
        }
    }
    let mut maps = Vec::with_capacity(rows);
    for t in 0..rows {
        let mut m = CMat::zeros(4);
        for (j, col) in columns.iter().enumerate() {
            let v = col[t].unnormalized_state();
            for (r, amp) in v.amplitudes().iter().enumerate() {
                m[(r, j)] = *amp;
            }
        }
        maps.push(TransferMap {
            transcript: columns[0][t].transcript.clone(),
            matrix: m,
        });
    }
    Ok(maps)
}

/// The transfer map of a single transcript.
pub fn branch_transfer_map(
    config: &ProtocolConfig,
    transcript: &ClassicalTranscript,
) -> Result<TransferMap> {
    transcript.validate_for(config.n)?;
    let maps = transfer_maps(config)?;
    maps.into_iter()
        .find(|m| &m.transcript == transcript)
        .ok_or_else(|| Error::invalid(format!("no branch for transcript {transcript}")))
}

/// max |Σ_t M_t†M_t − I|; zero when the measurement decomposition is
/// complete.
pub fn completeness_defect(maps: &[TransferMap]) -> f64 {
    let mut sum = CMat::zeros(4);
    for m in maps {
        let a = m.matrix.adjoint().mul(&m.matrix);
        for i in 0..4 {
            for j in 0..4 {
                sum[(i, j)] += a[(i, j)];
            }
        }
    }
    sum.max_abs_sub_scalar(Complex64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSource;
    use crate::protocol::{Bob1Style, LockingVariant};
    use rand::SeedableRng;

    fn accepted5() -> ProtocolConfig {
        ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(true, Bob1Style::CnotThenMeasure),
        )
    }

    #[test]
    fn completeness_and_uniform_proportionality_on_the_reference_channel() {
        let maps = transfer_maps(&accepted5()).unwrap();
        assert_eq!(maps.len(), 32);
        assert!(completeness_defect(&maps) <= 1e-9);
        for m in &maps {
            let c = m.proportionality().expect("branch correctable");
            assert!((c - 1.0 / 32.0).abs() < 1e-9);
        }
    }

    #[test]
    fn linearity_cross_check_against_full_run() {
        let config = accepted5();
        let maps = transfer_maps(&config).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let secret = SecretState::random(&mut rng);
        let paths = crate::protocol::enumerate_paths(&config, &secret).unwrap();
        for (m, p) in maps.iter().zip(&paths) {
            assert_eq!(m.transcript, p.transcript);
            let predicted = m.apply(&secret);
            let actual = p.unnormalized_state();
            for (a, b) in predicted.iter().zip(actual.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
            // probability matches ‖M s‖²
            let norm2: f64 = predicted.iter().map(|v| v.norm_sqr()).sum();
            assert!((norm2 - p.probability).abs() < 1e-10);
        }
    }

    #[test]
    fn single_branch_lookup() {
        let config = accepted5();
        let t = ClassicalTranscript::parse("0000|0|").unwrap();
        let m = branch_transfer_map(&config, &t).unwrap();
        assert_eq!(m.transcript, t);
        assert!(m.proportionality().is_some());
    }

    #[test]
    fn broken_variant_has_no_correctable_branch() {
        // The Hadamards-on-target-wires reading collapses every branch map to
        // rank one, so no branch passes the criterion.
        let config = ProtocolConfig::new(
            5,
            ChannelSource::Reference,
            LockingVariant::new(false, Bob1Style::CnotThenMeasure),
        );
        let maps = transfer_maps(&config).unwrap();
        assert!(completeness_defect(&maps) <= 1e-9);
        assert!(maps.iter().all(|m| m.proportionality().is_none()));
    }
}
