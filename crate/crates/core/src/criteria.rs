//! PPT/NPT decisions for the Bell-transformed thermal states.
//!
//! Every test reduces to comparing two magnitudes. `margin` is their signed
//! difference, negative when the partial transpose has a negative eigenvalue.

use serde::Serialize;

use crate::bell::party_abs_sums;
use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::polarization::PolarizationVector;
use crate::transforms::TransformKind;

/// Margins within this distance of zero count as PPT and set `at_boundary`.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Largest N for which the CF extremal quantities are enumerated.
pub const MAX_ENUMERATION_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub npt: bool,
    pub margin: f64,
    /// `|margin| <= BOUNDARY_TOL`; such states are reported as PPT.
    pub at_boundary: bool,
}

impl Verdict {
    pub fn from_margin(margin: f64) -> Self {
        Self {
            npt: margin < -BOUNDARY_TOL,
            margin,
            at_boundary: margin.abs() <= BOUNDARY_TOL,
        }
    }
}

pub(crate) fn ch_margin(b: f64, alpha1: f64) -> f64 {
    (-2.0 * b).exp() - alpha1.abs().tanh()
}

/// `cosh(d) - sinh(s)`. Once that overflows only the sign is meaningful,
/// taken from `sinh(s) - cosh(d) = e^u sinh v - e^-u cosh v` with `u, v = (s +/- d)/2`.
pub(crate) fn cf_margin(d: f64, s: f64) -> f64 {
    let m = d.cosh() - s.sinh();
    if m.is_finite() {
        return m;
    }
    let u = 0.5 * (s + d);
    let v = 0.5 * (s - d);
    if v > 0.0 && 2.0 * u + v.tanh().ln() > 0.0 {
        -f64::MAX
    } else {
        f64::MAX
    }
}

/// `rho_CH` is NPT across `bip` iff `exp(-2 w eta*) < tanh|alpha_1|`.
pub fn npt_ch(pol: &PolarizationVector, bip: &Bipartition) -> Result<Verdict> {
    let (_, b) = party_abs_sums(bip, pol)?;
    Ok(Verdict::from_margin(ch_margin(b, pol.alpha(1))))
}

/// `rho_CF` is NPT across `bip` iff `cosh((N-w) xi* - w eta*) < sinh(sum |alpha_i|)`.
pub fn npt_cf(pol: &PolarizationVector, bip: &Bipartition) -> Result<Verdict> {
    let (a, b) = party_abs_sums(bip, pol)?;
    Ok(Verdict::from_margin(cf_margin(a - b, a + b)))
}

pub fn npt(kind: TransformKind, pol: &PolarizationVector, bip: &Bipartition) -> Result<Verdict> {
    match kind {
        TransformKind::Ch => npt_ch(pol, bip),
        TransformKind::Cf => npt_cf(pol, bip),
    }
}

/// True iff flipping the sign of any single polarization leaves the verdict unchanged.
pub fn sign_flip_invariance_check(kind: TransformKind, pol: &PolarizationVector, bip: &Bipartition) -> Result<bool> {
    let reference = npt(kind, pol, bip)?.npt;
    for q in 1..=pol.n() {
        if npt(kind, &pol.with_sign_flipped(q), bip)?.npt != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Extremal {
    /// Extremes of `w eta*` over bipartitions.
    Ch { b_max: f64, b_min: f64 },
    /// Extremes of `|(N-w) xi* - w eta*|` over bipartitions.
    Cf { d_max: f64, d_min: f64 },
}

/// Necessary conditions for full separability and full distillability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullClassification {
    pub full_sep_possible: bool,
    pub full_dist_possible: bool,
    pub extremal: Extremal,
}

fn require_two(pol: &PolarizationVector) -> Result<()> {
    if pol.n() < 2 {
        return Err(Error::QubitCount {
            n: pol.n(),
            min: 2,
            max: crate::polarization::MAX_QUBITS,
        });
    }
    Ok(())
}

pub fn full_classification_ch(pol: &PolarizationVector) -> Result<FullClassification> {
    require_two(pol)?;
    let rest = pol.alphas()[1..].iter().map(|a| a.abs());
    let b_max: f64 = rest.clone().sum();
    let b_min = rest.fold(f64::INFINITY, f64::min);
    let a1 = pol.alpha(1);
    Ok(FullClassification {
        full_sep_possible: !Verdict::from_margin(ch_margin(b_max, a1)).npt,
        full_dist_possible: Verdict::from_margin(ch_margin(b_min, a1)).npt,
        extremal: Extremal::Ch { b_max, b_min },
    })
}

/// Enumerates every bipartition, so N is capped at [`MAX_ENUMERATION_QUBITS`].
pub fn full_classification_cf(pol: &PolarizationVector) -> Result<FullClassification> {
    require_two(pol)?;
    let n = pol.n();
    if n > MAX_ENUMERATION_QUBITS {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: MAX_ENUMERATION_QUBITS,
        });
    }
    let mags: Vec<f64> = pol.alphas().iter().map(|a| a.abs()).collect();
    let total = pol.abs_sum();
    let mut d_max = f64::NEG_INFINITY;
    let mut d_min = f64::INFINITY;
    for k in 1..Bipartition::max_k(n) + 1 {
        let mut a = 0.0;
        let mut b = 0.0;
        for (q, &m) in mags.iter().enumerate() {
            if q > 0 && (k >> (q - 1)) & 1 == 1 {
                b += m;
            } else {
                a += m;
            }
        }
        let d = (a - b).abs();
        d_max = d_max.max(d);
        d_min = d_min.min(d);
    }
    Ok(FullClassification {
        full_sep_possible: !Verdict::from_margin(cf_margin(d_min, total)).npt,
        full_dist_possible: Verdict::from_margin(cf_margin(d_max, total)).npt,
        extremal: Extremal::Cf { d_max, d_min },
    })
}

pub fn full_classification(kind: TransformKind, pol: &PolarizationVector) -> Result<FullClassification> {
    match kind {
        TransformKind::Ch => full_classification_ch(pol),
        TransformKind::Cf => full_classification_cf(pol),
    }
}

/// Full distillability of the uniformly polarized state: `exp(-2 alpha) < tanh alpha`
/// for CH, `tanh alpha > exp(-2 (N-1) alpha)` for CF. Only defined for `alpha > 0`.
pub fn uniform_full_distillable_iff(kind: TransformKind, alpha: f64, n: usize) -> Result<bool> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::NonPositivePolarization { qubit: 1, value: alpha });
    }
    if !(2..=crate::polarization::MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: crate::polarization::MAX_QUBITS,
        });
    }
    Ok(match kind {
        TransformKind::Ch => (-2.0 * alpha).exp() < alpha.tanh(),
        TransformKind::Cf => alpha.tanh() > (-2.0 * (n as f64 - 1.0) * alpha).exp(),
    })
}
