//! Separability boundary of the uniformly scaled, chemically shifted
//! polarization model `alpha_i = alpha (1 + x_i)`, `x_i ~ U[-delta, delta]`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::bell::party_abs_sums;
use crate::bipartition::Bipartition;
use crate::criteria::{cf_margin, ch_margin};
use crate::error::{Error, Result};
use crate::mt::Mt19937;
use crate::polarization::{PolarizationVector, MAX_QUBITS};
use crate::transforms::TransformKind;

/// Bisection bracket for the overall scale.
pub const BRACKET: (f64, f64) = (1e-6, 10.0);
pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_BISECTIONS: usize = 4000;

/// Reference polarization, relative spread and seed of the shift model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftModel {
    pub alpha_mean: f64,
    pub delta: f64,
    pub seed: u32,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside [0, 1)")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl ShiftModel {
    pub fn new(alpha_mean: f64, delta: f64, seed: u32) -> Result<Self> {
        if !(alpha_mean.is_finite() && alpha_mean > 0.0) {
            return Err(Error::NonPositivePolarization { qubit: 0, value: alpha_mean });
        }
        check_delta(delta)?;
        Ok(Self {
            alpha_mean,
            delta,
            seed,
        })
    }
}

/// Per-N generator seed used by [`boundary_alpha`]: `seed ^ (2654435761 * N mod 2^32)`.
pub fn cell_seed(seed: u32, n: usize) -> u32 {
    seed ^ 2_654_435_761u32.wrapping_mul(n as u32)
}

/// `x_i = -delta + 2 delta u_i` with `u_i` the 53-bit MT19937 doubles for `seed`.
pub fn sample_relative_shifts(delta: f64, seed: u32, n: usize) -> Result<Vec<f64>> {
    check_delta(delta)?;
    check_n(n)?;
    let mut mt = Mt19937::new(seed);
    Ok((0..n).map(|_| -delta + 2.0 * delta * mt.next_f64()).collect())
}

/// `alpha_i = alpha_mean (1 + x_i)` drawn from a generator seeded with `model.seed`.
pub fn sample_shifts(model: &ShiftModel, n: usize) -> Result<PolarizationVector> {
    let x = sample_relative_shifts(model.delta, model.seed, n)?;
    scaled(model.alpha_mean, &x)
}

fn scaled(alpha: f64, x: &[f64]) -> Result<PolarizationVector> {
    PolarizationVector::new(x.iter().map(|xi| alpha * (1.0 + xi)).collect())
}

/// Which bipartition the boundary is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionRule {
    /// Party B is qubits `2..=N` (`w = N - 1`).
    AllButFirst,
    /// Party B is the last `floor(N/2)` qubits.
    HalfSplit,
    Explicit(u64),
}

impl PartitionRule {
    pub fn default_for(kind: TransformKind) -> Self {
        match kind {
            TransformKind::Ch => PartitionRule::AllButFirst,
            TransformKind::Cf => PartitionRule::HalfSplit,
        }
    }

    pub fn resolve(self, n: usize) -> Result<Bipartition> {
        match self {
            PartitionRule::AllButFirst => Bipartition::last_qubits(n, n.saturating_sub(1)),
            PartitionRule::HalfSplit => Bipartition::last_qubits(n, n / 2),
            PartitionRule::Explicit(k) => Bipartition::new(n, k),
        }
    }
}

impl fmt::Display for PartitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionRule::AllButFirst => f.write_str("all-but-first"),
            PartitionRule::HalfSplit => f.write_str("half"),
            PartitionRule::Explicit(k) => write!(f, "k={k}"),
        }
    }
}

impl FromStr for PartitionRule {
    type Err = Error;

    /// Accepts `all-but-first`, `half`, or `k=<integer>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-but-first" => Ok(PartitionRule::AllButFirst),
            "half" => Ok(PartitionRule::HalfSplit),
            _ => s
                .strip_prefix("k=")
                .and_then(|k| k.parse().ok())
                .map(PartitionRule::Explicit)
                .ok_or_else(|| Error::Parse(format!("unknown partition rule '{s}' (all-but-first, half, k=<int>)"))),
        }
    }
}

/// `e^{-2 w eta*} - tanh alpha_1` (CH) or `cosh((N-w) xi* - w eta*) - sinh(sum alpha_i)` (CF);
/// positive on the separable side. Requires every polarization to be positive.
pub fn boundary_residual(kind: TransformKind, pol: &PolarizationVector, bip: &Bipartition) -> Result<f64> {
    if let Some((i, &value)) = pol.alphas().iter().enumerate().find(|(_, &a)| !(a > 0.0)) {
        return Err(Error::NonPositivePolarization { qubit: i + 1, value });
    }
    let (a, b) = party_abs_sums(bip, pol)?;
    Ok(match kind {
        TransformKind::Ch => ch_margin(b, pol.alpha(1)),
        TransformKind::Cf => cf_margin(a - b, a + b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub transform: TransformKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: u32,
    pub w: usize,
    pub delta: f64,
    pub seed: u32,
    pub alpha_b: f64,
    pub log10_inv_alpha: f64,
    pub residual: f64,
}

/// Root of the boundary residual in the overall scale `alpha`, with the
/// relative shifts drawn once from [`cell_seed`]`(seed, n)` and held fixed.
///
/// Bisection stops once the bracket is narrower than `tol * max(1, alpha)`
/// and `|residual| <= tol`, or when the bracket can no longer shrink.
pub fn boundary_alpha(
    kind: TransformKind,
    n: usize,
    rule: PartitionRule,
    delta: f64,
    seed: u32,
    tol: f64,
) -> Result<BoundaryPoint> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let bip = rule.resolve(n)?;
    let x = sample_relative_shifts(delta, cell_seed(seed, n), n)?;
    let g = |alpha: f64| boundary_residual(kind, &scaled(alpha, &x)?, &bip);

    let (mut lo, mut hi) = BRACKET;
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi, g_lo, g_hi });
    }
    let mut mid = 0.5 * (lo + hi);
    let mut g_mid = g(mid)?;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol * mid.max(1.0) && g_mid.abs() <= tol {
            break;
        }
        if g_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        if next == lo || next == hi {
            break;
        }
        mid = next;
        g_mid = g(mid)?;
    }
    Ok(BoundaryPoint {
        transform: kind,
        n,
        k: bip.k(),
        w: bip.w(),
        delta,
        seed,
        alpha_b: mid,
        log10_inv_alpha: -mid.log10(),
        residual: g_mid,
    })
}

/// One [`boundary_alpha`] point per N in `n_range`, ordered by N.
pub fn sweep(
    kind: TransformKind,
    n_range: std::ops::RangeInclusive<usize>,
    delta: f64,
    seed: u32,
    rule: PartitionRule,
    tol: f64,
) -> Result<Vec<BoundaryPoint>> {
    if n_range.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "empty qubit range {}..={}",
            n_range.start(),
            n_range.end()
        )));
    }
    check_n(*n_range.start())?;
    check_n(*n_range.end())?;
    n_range
        .map(|n| boundary_alpha(kind, n, rule, delta, seed, tol))
        .collect()
}

/// CSV with a header row; floats use the shortest exact round-trip representation.
pub fn write_csv<W: Write>(points: &[BoundaryPoint], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    if points.is_empty() {
        wtr.write_record(["transform", "N", "k", "w", "delta", "seed", "alpha_b", "log10_inv_alpha", "residual"])?;
    }
    for p in points {
        wtr.serialize(p)?;
    }
    wtr.flush()?;
    Ok(())
}
