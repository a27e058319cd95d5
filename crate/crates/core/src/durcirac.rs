//! Dür–Cirac depolarization coefficients and the resulting per-bipartition
//! verdicts, plus the local X-flip rescue for states the method misses.

use serde::Serialize;

use crate::bipartition::{basis_bit, Bipartition, GhzIndex};
use crate::error::{Error, Result};
use crate::oracle::{DenseDensityMatrix, POSITIVITY_TOL};

/// `Delta` and `2 lambda_k` closer than this are treated as equal (inconclusive).
pub const EQUALITY_TOL: f64 = 1e-12;
/// Largest N accepted by [`find_rescue_flips`].
pub const MAX_SCAN_QUBITS: usize = 6;

/// Parameters of the depolarized state `rho_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcCoefficients {
    pub n: usize,
    pub lambda0_plus: f64,
    pub lambda0_minus: f64,
    /// `lambdas[j - 1]` holds `lambda_j` for `j = 1 .. 2^(N-1) - 1`.
    pub lambdas: Vec<f64>,
    /// `|lambda0_plus - lambda0_minus|`
    pub delta: f64,
}

impl DcCoefficients {
    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas[j - 1]
    }

    /// `lambda0^+ + lambda0^- + 2 sum_j lambda_j`, which is the trace of `rho`.
    pub fn total(&self) -> f64 {
        self.lambda0_plus + self.lambda0_minus + 2.0 * self.lambdas.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DcVerdict {
    /// `rho_N` is NPT, which certifies entanglement of the original state.
    Npt,
    /// `rho_N` is PPT and says nothing about the original state.
    Inconclusive,
}

impl DcVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DcVerdict::Npt => "NPT",
            DcVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for DcVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `<Psi_j^+|rho|Psi_j^+>` and `<Psi_j^-|rho|Psi_j^->`.
fn ghz_populations(rho: &DenseDensityMatrix, g: GhzIndex) -> (f64, f64) {
    let z = g.zero_branch();
    let o = g.one_branch();
    let diag = 0.5 * (rho.get(z, z) + rho.get(o, o));
    let coherence = 0.5 * (rho.get(z, o) + rho.get(o, z));
    (diag + coherence, diag - coherence)
}

pub fn dc_coefficients(rho: &DenseDensityMatrix) -> Result<DcCoefficients> {
    let n = rho.n();
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: crate::oracle::MAX_DENSE_QUBITS,
        });
    }
    let (lambda0_plus, lambda0_minus) = ghz_populations(rho, GhzIndex::new(n, 0)?);
    let mut lambdas = Vec::with_capacity((1 << (n - 1)) - 1);
    for j in 1..1u64 << (n - 1) {
        let (p, m) = ghz_populations(rho, GhzIndex::new(n, j)?);
        lambdas.push(0.5 * (p + m));
    }
    let smallest = lambdas.iter().copied().fold(lambda0_plus.min(lambda0_minus), f64::min);
    if smallest < -POSITIVITY_TOL {
        return Err(Error::NotDensityMatrix(format!(
            "negative GHZ-basis population {smallest}"
        )));
    }
    Ok(DcCoefficients {
        n,
        lambda0_plus,
        lambda0_minus,
        lambdas,
        delta: (lambda0_plus - lambda0_minus).abs(),
    })
}

/// NPT iff `Delta > 2 lambda_k` by more than [`EQUALITY_TOL`].
pub fn dc_verdict(coeffs: &DcCoefficients, k: u64) -> Result<DcVerdict> {
    let bip = Bipartition::new(coeffs.n, k)?;
    let gap = coeffs.delta - 2.0 * coeffs.lambda(bip.k() as usize);
    Ok(if gap > EQUALITY_TOL {
        DcVerdict::Npt
    } else {
        DcVerdict::Inconclusive
    })
}

/// Conjugate by Pauli X on `qubit` (1-based).
pub fn local_x_flip(rho: &DenseDensityMatrix, qubit: usize) -> Result<DenseDensityMatrix> {
    if !(1..=rho.n()).contains(&qubit) {
        return Err(Error::QubitOutOfRange { qubit, n: rho.n() });
    }
    let bit = basis_bit(rho.n(), qubit);
    Ok(rho.permuted(|b| b ^ bit))
}

/// Apply the X-flips in order, then decide across `k`.
pub fn dc_with_rescue(rho: &DenseDensityMatrix, k: u64, flips: &[usize]) -> Result<DcVerdict> {
    let mut flipped = rho.clone();
    for &q in flips {
        flipped = local_x_flip(&flipped, q)?;
    }
    dc_verdict(&dc_coefficients(&flipped)?, k)
}

/// Exhaustive search over X-flip patterns on qubits `2..=N` (flipping every
/// qubit leaves the GHZ populations unchanged, so qubit 1 is never needed).
/// Returns the first pattern, in increasing mask order, that certifies NPT
/// across `k`; the empty pattern is tried first.
pub fn find_rescue_flips(rho: &DenseDensityMatrix, k: u64) -> Result<Option<Vec<usize>>> {
    let n = rho.n();
    if n > MAX_SCAN_QUBITS {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: MAX_SCAN_QUBITS,
        });
    }
    Bipartition::new(n, k)?;
    for mask in 0u32..1 << (n - 1) {
        let flips: Vec<usize> = (2..=n).filter(|q| (mask >> (q - 2)) & 1 == 1).collect();
        if dc_with_rescue(rho, k, &flips)? == DcVerdict::Npt {
            return Ok(Some(flips));
        }
    }
    Ok(None)
}

/// `(1-f) I/4 + f |Psi_0^+><Psi_0^+|`, physical for `-1/3 <= f <= 1`.
pub fn isotropic_state(f: f64) -> Result<DenseDensityMatrix> {
    if !(-1.0 / 3.0..=1.0).contains(&f) {
        return Err(Error::InvalidParameter(format!(
            "isotropic fidelity parameter {f} outside [-1/3, 1]"
        )));
    }
    let mut data = vec![0.0; 16];
    for i in 0..4 {
        data[i * 4 + i] = 0.25 * (1.0 - f);
    }
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        data[r * 4 + c] += 0.5 * f;
    }
    DenseDensityMatrix::new(2, data)
}
