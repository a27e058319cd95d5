use crate::error::{Error, Result};

/// Largest qubit count accepted anywhere in the crate. Analytic paths store
/// 2^(N-1) weight pairs, so this bounds memory at a few gigabytes.
pub const MAX_QUBITS: usize = 30;

/// Per-qubit polarizations `alpha_i = beta h nu_i / 2`.
///
/// Qubits are numbered from 1 in every accessor that takes a qubit label;
/// `alphas()[0]` is qubit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationVector {
    alphas: Vec<f64>,
}

impl PolarizationVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() > MAX_QUBITS {
            return Err(Error::QubitCount {
                n: alphas.len(),
                min: 1,
                max: MAX_QUBITS,
            });
        }
        if let Some((i, &value)) = alphas.iter().enumerate().find(|(_, a)| !a.is_finite()) {
            return Err(Error::NonFinitePolarization { qubit: i + 1, value });
        }
        Ok(Self { alphas })
    }

    /// All qubits share the polarization `alpha`.
    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![alpha; n])
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Polarization of qubit `qubit` (1-based).
    ///
    /// Panics if `qubit` is 0 or exceeds `n`.
    pub fn alpha(&self, qubit: usize) -> f64 {
        self.alphas[qubit - 1]
    }

    /// Sign bit `s_i`: 0 for `alpha_i >= 0`, 1 otherwise.
    pub fn sign_bit(&self, qubit: usize) -> u8 {
        u8::from(self.alpha(qubit) < 0.0)
    }

    /// `N * mean(|alpha_i|)`, the total polarization magnitude.
    pub fn abs_sum(&self) -> f64 {
        self.alphas.iter().map(|a| a.abs()).sum()
    }

    /// True when every alpha equals the first one exactly.
    pub fn is_uniform(&self) -> bool {
        self.alphas.iter().all(|&a| a == self.alphas[0])
    }

    /// Copy with `alpha_qubit` negated.
    pub fn with_sign_flipped(&self, qubit: usize) -> Self {
        let mut alphas = self.alphas.clone();
        alphas[qubit - 1] = -alphas[qubit - 1];
        Self { alphas }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.n(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PolarizationVector::new(vec![]).is_err());
        assert!(matches!(
            PolarizationVector::new(vec![0.1, f64::NAN]),
            Err(Error::NonFinitePolarization { qubit: 2, .. })
        ));
        assert!(PolarizationVector::new(vec![0.1, f64::INFINITY]).is_err());
        assert!(PolarizationVector::new(vec![0.0; MAX_QUBITS + 1]).is_err());
    }

    #[test]
    fn sign_bits_and_magnitudes() {
        let p = PolarizationVector::new(vec![-0.5, 0.3, 0.0]).unwrap();
        assert_eq!(p.sign_bit(1), 1);
        assert_eq!(p.sign_bit(2), 0);
        assert_eq!(p.sign_bit(3), 0);
        assert!((p.abs_sum() - 0.8).abs() < 1e-15);
        assert_eq!(p.with_sign_flipped(2).alphas(), &[-0.5, -0.3, 0.0]);
    }
}
