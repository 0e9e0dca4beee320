use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::StateVector;

/// The two-qubit secret α|00> + μ|10> + γ|01> + β|11>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecretState {
    pub alpha: Complex64,
    pub mu: Complex64,
    pub gamma: Complex64,
    pub beta: Complex64,
}

impl SecretState {
    /// Accepts coefficients already normalized within 1e-9.
    pub fn new(alpha: Complex64, mu: Complex64, gamma: Complex64, beta: Complex64) -> Result<Self> {
        let s = SecretState {
            alpha,
            mu,
            gamma,
            beta,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "secret coefficients have norm {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero coefficients to unit norm, reporting how
    /// large the adjustment was.
    pub fn normalized(
        alpha: Complex64,
        mu: Complex64,
        gamma: Complex64,
        beta: Complex64,
    ) -> Result<(Self, f64)> {
        let norm = (alpha.norm_sqr() + mu.norm_sqr() + gamma.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm < 1e-12 {
            return Err(Error::invalid("secret coefficients are all zero"));
        }
        let s = SecretState {
            alpha: alpha / norm,
            mu: mu / norm,
            gamma: gamma / norm,
            beta: beta / norm,
        };
        Ok((s, (norm - 1.0).abs()))
    }

    /// Basis secret |00>, |01>, |10> or |11>.
    pub fn basis(index: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match index {
            0 => SecretState { alpha: one, mu: zero, gamma: zero, beta: zero },
            1 => SecretState { alpha: zero, mu: zero, gamma: one, beta: zero },
            2 => SecretState { alpha: zero, mu: one, gamma: zero, beta: zero },
            3 => SecretState { alpha: zero, mu: zero, gamma: zero, beta: one },
            _ => panic!("basis index {index} out of range"),
        }
    }

    /// Haar-like sample: four complex Gaussians normalized to unit length.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut draw = || {
            // Box-Muller from two uniforms.
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            Complex64::new(r * u2.cos(), r * u2.sin())
        };
        let (a, m, g, b) = (draw(), draw(), draw(), draw());
        SecretState::normalized(a, m, g, b).expect("gaussian draw is nonzero").0
    }

    pub fn norm(&self) -> f64 {
        (self.alpha.norm_sqr() + self.mu.norm_sqr() + self.gamma.norm_sqr() + self.beta.norm_sqr())
            .sqrt()
    }

    /// Amplitudes in standard index order |00>, |01>, |10>, |11>,
    /// i.e. (α, γ, μ, β).
    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.alpha, self.gamma, self.mu, self.beta]
    }

    pub fn to_state(self) -> StateVector {
        StateVector::from_raw(2, self.amplitudes().to_vec())
    }

    /// Parses eight comma-separated reals: re,im pairs for α, μ, γ, β.
    /// Returns the normalized secret and the adjustment magnitude.
    pub fn parse_csv(text: &str) -> Result<(Self, f64)> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 8 {
            return Err(Error::invalid(format!(
                "secret needs 8 comma-separated reals (re,im for α,μ,γ,β), got {}",
                parts.len()
            )));
        }
        let mut vals = [0.0f64; 8];
        for (v, p) in vals.iter_mut().zip(&parts) {
            *v = p
                .parse()
                .map_err(|_| Error::invalid(format!("bad real number '{p}' in secret")))?;
        }
        SecretState::normalized(
            Complex64::new(vals[0], vals[1]),
            Complex64::new(vals[2], vals[3]),
            Complex64::new(vals[4], vals[5]),
            Complex64::new(vals[6], vals[7]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn norm_validation() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(SecretState::new(one, zero, zero, zero).is_ok());
        assert!(SecretState::new(one, one, zero, zero).is_err());
    }

    #[test]
    fn amplitude_order_matches_ket_labels() {
        // μ multiplies |10>, γ multiplies |01>.
        let s = SecretState::normalized(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap()
        .0;
        let state = s.to_state();
        assert_eq!(state.amplitude_of("10").unwrap().re, 1.0);
    }

    #[test]
    fn csv_parsing_and_normalization() {
        let (s, adj) = SecretState::parse_csv("0.6,0,0,0,0,0,0.8,0").unwrap();
        assert!(adj < 1e-12);
        assert!((s.alpha.re - 0.6).abs() < 1e-12);
        assert!((s.beta.re - 0.8).abs() < 1e-12);
        assert!(SecretState::parse_csv("1,2,3").is_err());
        let (_, adj) = SecretState::parse_csv("2,0,0,0,0,0,0,0").unwrap();
        assert!(adj > 0.5);
    }

    #[test]
    fn random_secrets_are_normalized_and_seeded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = SecretState::random(&mut rng);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let b = SecretState::random(&mut rng2);
        assert_eq!(a, b);
    }
}
