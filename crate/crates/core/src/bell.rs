//! Bell-diagonal states over the generalized GHZ basis and their closed-form
//! partial transposition.

use crate::bipartition::{Bipartition, GhzIndex};
use crate::error::{Error, Result};
use crate::polarization::{PolarizationVector, MAX_QUBITS};

/// Construction rejects states whose weights miss unit trace by more than this.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Signed mean polarizations of party A (`xi`) and party B (`eta`) for GHZ
/// index `j`, with `j_1 := 0`.
pub fn xi_eta(j: u64, bip: &Bipartition, pol: &PolarizationVector) -> Result<(f64, f64)> {
    pol.check_n(bip.n())?;
    let j = GhzIndex::new(bip.n(), j)?;
    Ok(xi_eta_unchecked(j.j(), bip.k(), pol.alphas()))
}

/// `(N-w) xi` and `w eta` without the division; shared by the spectrum formulas.
#[inline]
pub(crate) fn party_signed_sums(j: u32, k: u32, alphas: &[f64]) -> (f64, f64) {
    let mut sum_a = alphas[0];
    let mut sum_b = 0.0;
    for (offset, &alpha) in alphas[1..].iter().enumerate() {
        let signed = if (j >> offset) & 1 == 1 { -alpha } else { alpha };
        if (k >> offset) & 1 == 1 {
            sum_b += signed;
        } else {
            sum_a += signed;
        }
    }
    (sum_a, sum_b)
}

#[inline]
fn xi_eta_unchecked(j: u32, k: u32, alphas: &[f64]) -> (f64, f64) {
    let n = alphas.len();
    let w = k.count_ones() as usize;
    let (sum_a, sum_b) = party_signed_sums(j, k, alphas);
    (sum_a / (n - w) as f64, sum_b / w as f64)
}

/// Magnitude sums `(sum_{A}|alpha_i|, sum_{B}|alpha_i|)`, i.e. `((N-w) xi*, w eta*)`.
pub fn party_abs_sums(bip: &Bipartition, pol: &PolarizationVector) -> Result<(f64, f64)> {
    pol.check_n(bip.n())?;
    let mut a = 0.0;
    let mut b = 0.0;
    for q in 1..=bip.n() {
        let m = pol.alpha(q).abs();
        if bip.in_party_b(q) {
            b += m;
        } else {
            a += m;
        }
    }
    Ok((a, b))
}

/// Bounds of `xi` and `eta` over all GHZ indices for a fixed bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEtaExtrema {
    /// `max_j xi = mean_{A} |alpha_i|`
    pub xi_star: f64,
    /// `max_j eta = mean_{B} |alpha_i|`; `min_j eta = -eta_star`.
    pub eta_star: f64,
    /// `min_j xi`, which is only `-xi_star` when `alpha_1 < 0` since `j_1` is pinned.
    pub xi_min: f64,
}

pub fn xi_eta_extrema(bip: &Bipartition, pol: &PolarizationVector) -> Result<XiEtaExtrema> {
    let (sum_a, sum_b) = party_abs_sums(bip, pol)?;
    let size_a = (bip.n() - bip.w()) as f64;
    let xi_star = sum_a / size_a;
    let eta_star = sum_b / bip.w() as f64;
    let pinned = if pol.sign_bit(1) == 0 { 2.0 } else { 0.0 };
    Ok(XiEtaExtrema {
        xi_star,
        eta_star,
        xi_min: -xi_star + pinned * pol.alpha(1).abs() / size_a,
    })
}

/// A density matrix diagonal in the generalized GHZ basis, stored as
/// `[omega_j^+, omega_j^-]` pairs indexed by `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellDiagonalState {
    n: usize,
    weights: Vec<[f64; 2]>,
}

impl BellDiagonalState {
    pub fn new(n: usize, weights: Vec<[f64; 2]>) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(Error::QubitCount {
                n,
                min: 2,
                max: MAX_QUBITS,
            });
        }
        let pairs = 1usize << (n - 1);
        if weights.len() != pairs {
            return Err(Error::InvalidParameter(format!(
                "{n} qubits need {pairs} weight pairs, got {}",
                weights.len()
            )));
        }
        for (j, pair) in weights.iter().enumerate() {
            for &value in pair {
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(Error::NegativeWeight { j, value });
                }
            }
        }
        let sum: f64 = weights.iter().map(|p| p[0] + p[1]).sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                sum,
                tol: NORMALIZATION_TOL,
            });
        }
        Ok(Self { n, weights })
    }

    /// The maximally mixed state, every weight `2^-N`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let w = (0.5f64).powi(n as i32);
        Self::new(n, vec![[w, w]; 1usize << (n.clamp(1, MAX_QUBITS) - 1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[[f64; 2]] {
        &self.weights
    }

    /// `omega_j^+` and `omega_j^-`.
    pub fn weight(&self, j: usize) -> [f64; 2] {
        self.weights[j]
    }
}

/// Eigenvalues `[mu_j^+, mu_j^-]` of a partially transposed Bell-diagonal
/// state, indexed by `j`. The partial transpose is again diagonal in the
/// GHZ basis, so these pairs are its full spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PtSpectrum {
    bip: Bipartition,
    values: Vec<[f64; 2]>,
}

impl PtSpectrum {
    pub(crate) fn from_values(bip: Bipartition, values: Vec<[f64; 2]>) -> Self {
        debug_assert_eq!(values.len(), 1usize << (bip.n() - 1));
        Self { bip, values }
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.bip
    }

    pub fn n(&self) -> usize {
        self.bip.n()
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().map(|p| p[0] + p[1]).sum()
    }

    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|p| p.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// All 2^N eigenvalues in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.values.iter().flat_map(|p| p.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Transpose party B again; recovers the original weights.
    pub fn partial_transpose(&self) -> PtSpectrum {
        PtSpectrum {
            bip: self.bip,
            values: transpose_pairs(&self.values, self.bip.k()),
        }
    }
}

fn transpose_pairs(weights: &[[f64; 2]], k: u32) -> Vec<[f64; 2]> {
    (0..weights.len())
        .map(|j| {
            let [p, m] = weights[j];
            let [pk, mk] = weights[j ^ k as usize];
            let mean = 0.5 * (p + m);
            let half_diff = 0.5 * (pk - mk);
            [mean + half_diff, mean - half_diff]
        })
        .collect()
}

/// `mu_j^(+/-) = (omega_j^+ + omega_j^-)/2 +/- (omega_{j^k}^+ - omega_{j^k}^-)/2`.
pub fn partial_transpose_weights(state: &BellDiagonalState, bip: &Bipartition) -> Result<PtSpectrum> {
    if state.n() != bip.n() {
        return Err(Error::DimensionMismatch {
            expected: state.n(),
            got: bip.n(),
        });
    }
    Ok(PtSpectrum {
        bip: *bip,
        values: transpose_pairs(state.weights(), bip.k()),
    })
}
