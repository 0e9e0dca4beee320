use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) const NORM_TOL: f64 = 1e-9;

/// Pure state of `num_qubits` labeled wires.
///
/// Qubit `q` in `1..=num_qubits` maps to bit position `num_qubits - q` of the
/// amplitude index, so qubit 1 is the leftmost (most significant) label and a
/// ket written `|x1 x2 .. xn>` has amplitude index `x1 x2 .. xn` read as a
/// binary number. `num_qubits = 0` is permitted and denotes the trivial
/// one-dimensional space left after measuring every wire.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state from a label of '0'/'1' characters,
    /// leftmost character = qubit 1.
    pub fn basis_state(num_qubits: usize, label: &str) -> Result<Self> {
        if label.len() != num_qubits {
            return Err(Error::invalid(format!(
                "label '{label}' has length {}, expected {num_qubits}",
                label.len()
            )));
        }
        let mut index = 0usize;
        for ch in label.chars() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::invalid(format!(
                            "label '{label}' contains '{ch}'; expected only 0/1"
                        )))
                    }
                };
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Builds a state from explicit amplitudes, checking length and norm.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::invalid(format!(
                "expected {} amplitudes for {num_qubits} qubits, got {}",
                1usize << num_qubits,
                amps.len()
            )));
        }
        let state = StateVector { num_qubits, amps };
        if (state.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state norm {} is not 1 within {NORM_TOL}",
                state.norm()
            )));
        }
        Ok(state)
    }

    /// Unchecked constructor for internal intermediates (projections may have
    /// any norm, including zero).
    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of the basis ket given by `label` (qubit 1 leftmost).
    pub fn amplitude_of(&self, label: &str) -> Result<Complex64> {
        let probe = StateVector::basis_state(self.num_qubits, label)?;
        let idx = probe.amps.iter().position(|a| a.re == 1.0).unwrap();
        Ok(self.amps[idx])
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Bit mask selecting qubit `q` inside an amplitude index.
    pub(crate) fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - q)
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.num_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range 1..={}",
                self.num_qubits
            )));
        }
        Ok(())
    }

    // In-place gate kernels. Callers validate indices.

    pub(crate) fn h(&mut self, q: usize) {
        let m = self.mask(q);
        let f = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a = self.amps[i];
                let b = self.amps[i | m];
                self.amps[i] = (a + b) * f;
                self.amps[i | m] = (a - b) * f;
            }
        }
    }

    pub(crate) fn x(&mut self, q: usize) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
    }

    pub(crate) fn z(&mut self, q: usize) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    /// XZ = σx·σz, i.e. |0> -> |1>, |1> -> -|0>.
    pub(crate) fn xz(&mut self, q: usize) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | m];
                self.amps[i] = -a1;
                self.amps[i | m] = a0;
            }
        }
    }

    pub(crate) fn cz(&mut self, a: usize, b: usize) {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    pub(crate) fn cnot(&mut self, control: usize, target: usize) {
        let (mc, mt) = (self.mask(control), self.mask(target));
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, (i & !ma) | mb);
            }
        }
    }
}

/// `a ⊗ b`; `a`'s qubits become labels `1..=a.num_qubits()` of the result.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    let n = a.num_qubits + b.num_qubits;
    let mut amps = Vec::with_capacity(1 << n);
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    StateVector::from_raw(n, amps)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} qubits",
            a.num_qubits, b.num_qubits
        )));
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |<a|b>|² for pure states of equal qubit count.
pub fn pure_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr())
}

/// True iff min over φ of ‖a − e^{iφ} b‖ ≤ tol. The minimizing phase is the
/// conjugate of the overlap's phase; the difference is formed explicitly so
/// near-zero distances do not lose precision to cancellation.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    let ov = inner_product(a, b)?;
    let phase = if ov.norm() > 1e-15 {
        ov.conj() / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let d2: f64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x - y * phase).norm_sqr())
        .sum();
    Ok(d2.sqrt() <= tol)
}

// JSON schema: {"num_qubits": n, "amplitudes": [[re, im], ...]}

#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorRepr {
            num_qubits: self.num_qubits,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = StateVectorRepr::deserialize(de)?;
        let amps = repr
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        StateVector::from_amplitudes(repr.num_qubits, amps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_state_examples() {
        let s = StateVector::basis_state(1, "0").unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        // |10>: qubit 1 is most significant, so index 0b10 = 2.
        let s = StateVector::basis_state(2, "10").unwrap();
        assert_eq!(s.amplitudes()[2], c(1.0, 0.0));
        assert_eq!(s.norm(), 1.0);

        // first ket of the five-qubit reference channel
        let s = StateVector::basis_state(5, "00101").unwrap();
        assert_eq!(s.amplitudes()[0b00101], c(1.0, 0.0));

        assert!(StateVector::basis_state(2, "012").is_err());
        assert!(StateVector::basis_state(3, "01").is_err());
    }

    #[test]
    fn tensor_product_examples() {
        let zero = StateVector::basis_state(1, "0").unwrap();
        let one = StateVector::basis_state(1, "1").unwrap();
        let s = tensor_product(&zero, &one);
        assert_eq!(s.amplitudes()[0b01], c(1.0, 0.0));

        let mut plus = zero.clone();
        plus.h(1);
        let s = tensor_product(&plus, &zero);
        assert!((s.amplitude_of("00").unwrap().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude_of("10").unwrap().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis_state(1, "0").unwrap();
        let one = StateVector::basis_state(1, "1").unwrap();
        let mut plus = zero.clone();
        plus.h(1);
        assert!((pure_fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(pure_fidelity(&zero, &one).unwrap() < 1e-15);
        assert!((pure_fidelity(&plus, &zero).unwrap() - 0.5).abs() < 1e-12);
        assert!(pure_fidelity(&zero, &StateVector::basis_state(2, "00").unwrap()).is_err());
    }

    #[test]
    fn global_phase_comparison() {
        let s = StateVector::basis_state(2, "01").unwrap();
        let neg = StateVector::from_raw(2, s.amplitudes().iter().map(|a| -a).collect());
        assert!(equal_up_to_global_phase(&s, &neg, 1e-12).unwrap());
        let other = StateVector::basis_state(2, "10").unwrap();
        assert!(!equal_up_to_global_phase(&s, &other, 1e-12).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let mut s = StateVector::basis_state(2, "00").unwrap();
        s.h(1);
        s.cnot(1, 2);
        let text = serde_json::to_string(&s).unwrap();
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        assert!(text.contains("\"num_qubits\":2"));
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let amps = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(StateVector::from_amplitudes(1, amps).is_err());
    }
}
