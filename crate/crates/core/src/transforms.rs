//! Thermal state of the chemically shifted Zeeman Hamiltonian and its two
//! Bell transformations, evaluated directly as GHZ-basis weights.
//!
//! `U_CH = U_fan (H_1 (x) I)` maps `|0 j>` to `|Psi_j^+>` and `|1 j>` to
//! `|Psi_j^->`, so `rho_CH` has weights equal to the Boltzmann factors of
//! those computational states. `U_CF = U_CH U_fan` additionally routes
//! `|1 j>` to `|Psi_jbar^->`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bell::{party_signed_sums, BellDiagonalState, PtSpectrum};
use crate::bipartition::{Bipartition, GhzIndex, Sign};
use crate::error::{Error, Result};
use crate::oracle::MAX_DENSE_QUBITS;
use crate::polarization::PolarizationVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// Controlled-NOT-Hadamard.
    Ch,
    /// CH-fanout.
    Cf,
}

impl TransformKind {
    pub const ALL: [TransformKind; 2] = [TransformKind::Ch, TransformKind::Cf];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Ch => "ch",
            TransformKind::Cf => "cf",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ch" => Ok(TransformKind::Ch),
            "cf" | "ch-fanout" | "chfanout" => Ok(TransformKind::Cf),
            other => Err(Error::Parse(format!("unknown transform '{other}' (expected ch or cf)"))),
        }
    }
}

/// `ln(2 cosh x)` without overflow.
#[inline]
pub(crate) fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// `ln Z = sum_i ln(2 cosh alpha_i)`.
pub fn log_partition_function(pol: &PolarizationVector) -> f64 {
    pol.alphas().iter().map(|&a| ln_two_cosh(a)).sum()
}

/// `Z = tr exp(-beta H) = prod_i 2 cosh alpha_i`.
pub fn partition_function(pol: &PolarizationVector) -> f64 {
    pol.alphas().iter().map(|&a| 2.0 * a.cosh()).product()
}

/// `m_z = tr(J_z rho_th) = -(1/2) sum_i tanh alpha_i`.
pub fn magnetization(pol: &PolarizationVector) -> f64 {
    -0.5 * pol.alphas().iter().map(|a| a.tanh()).sum::<f64>()
}

fn require_two_qubits(pol: &PolarizationVector) -> Result<()> {
    if pol.n() < 2 {
        return Err(Error::QubitCount {
            n: pol.n(),
            min: 2,
            max: crate::polarization::MAX_QUBITS,
        });
    }
    Ok(())
}

/// GHZ-basis weights of `U rho_th U^dagger`.
pub fn bell_transformed_state(kind: TransformKind, pol: &PolarizationVector) -> Result<BellDiagonalState> {
    require_two_qubits(pol)?;
    let n = pol.n();
    let alphas = pol.alphas();
    let ln_z = log_partition_function(pol);
    let a1 = alphas[0];
    let weights = (0..1u32 << (n - 1))
        .map(|j| {
            // k = 0 puts every qubit in "party A": s = sum_{i>=2} (-1)^{j_i} alpha_i.
            let (with_first, _) = party_signed_sums(j, 0, alphas);
            let s = with_first - a1;
            match kind {
                TransformKind::Ch => [(-a1 - s - ln_z).exp(), (a1 - s - ln_z).exp()],
                TransformKind::Cf => [(-a1 - s - ln_z).exp(), (a1 + s - ln_z).exp()],
            }
        })
        .collect();
    BellDiagonalState::new(n, weights)
}

/// Partial-transpose spectrum from the specialized closed forms
/// `mu_CH = (1/Z) e^{a1} cosh(a1) e^{-(N-w) xi} (e^{-w eta} -/+ tanh(a1) e^{w eta})` and
/// `mu_CF = (1/Z) (e^{-/+(N-w) xi} cosh(w eta) +/- e^{+/-(N-w) xi} sinh(w eta))`.
pub fn pt_eigenvalues_analytic(
    kind: TransformKind,
    pol: &PolarizationVector,
    bip: &Bipartition,
) -> Result<PtSpectrum> {
    pol.check_n(bip.n())?;
    let alphas = pol.alphas();
    let ln_z = log_partition_function(pol);
    let a1 = alphas[0];
    let ln_cosh_a1 = ln_two_cosh(a1) - std::f64::consts::LN_2;
    let tanh_a1 = a1.tanh();
    let k = bip.k();
    let values = (0..1u32 << (bip.n() - 1))
        .map(|j| {
            // a = (N-w) xi, b = w eta
            let (a, b) = party_signed_sums(j, k, alphas);
            match kind {
                TransformKind::Ch => {
                    let base = a1 + ln_cosh_a1 - a - ln_z;
                    let t1 = (base - b).exp();
                    let t2 = tanh_a1 * (base + b).exp();
                    [t1 - t2, t1 + t2]
                }
                TransformKind::Cf => {
                    let e = |x: f64| 0.5 * (x - ln_z).exp();
                    let (pp, pm, mp, mm) = (e(a + b), e(a - b), e(-a + b), e(-a - b));
                    [mp + mm + pp - pm, pp + pm - mp + mm]
                }
            }
        })
        .collect();
    Ok(PtSpectrum::from_values(*bip, values))
}

/// Dense amplitudes of `|Psi_j^(+/-)>` in the computational basis (qubit 1 most significant).
pub fn generalized_ghz_vector(j: u64, sign: Sign, n: usize) -> Result<Vec<f64>> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: MAX_DENSE_QUBITS,
        });
    }
    let g = GhzIndex::new(n, j)?;
    let mut v = vec![0.0; 1 << n];
    v[g.zero_branch()] = std::f64::consts::FRAC_1_SQRT_2;
    v[g.one_branch()] = sign.factor() * std::f64::consts::FRAC_1_SQRT_2;
    Ok(v)
}
