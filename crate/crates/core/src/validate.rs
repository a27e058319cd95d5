//! Randomized agreement checks between the closed forms and the dense oracle.

use serde::Serialize;

use crate::bell::{partial_transpose_weights, BellDiagonalState};
use crate::bipartition::{Bipartition, GhzIndex};
use crate::criteria::{full_classification, npt, sign_flip_invariance_check};
use crate::error::{Error, Result};
use crate::mt::Mt19937;
use crate::oracle::{dense_transformed_thermal, min_eigenvalue, partial_transpose_dense, DenseDensityMatrix};
use crate::polarization::PolarizationVector;
use crate::transforms::{bell_transformed_state, pt_eigenvalues_analytic, TransformKind};

pub const MAX_CHECK_QUBITS: usize = 8;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const GHZ_TOL: f64 = 1e-12;
/// Verdicts are compared with the oracle only when `|min eigenvalue|` exceeds this.
pub const VERDICT_GUARD: f64 = 1e-10;
const ALPHA_RANGE: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheckReport {
    pub nmax: usize,
    pub trials: usize,
    pub seed: u32,
    pub properties: Vec<PropertyResult>,
}

impl OracleCheckReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }
}

/// Maximum deviation of `rho` from the Bell-diagonal `state` in the GHZ basis,
/// over all diagonal and off-diagonal elements.
pub fn ghz_basis_deviation(rho: &DenseDensityMatrix, state: &BellDiagonalState) -> Result<f64> {
    let n = rho.n();
    let half = 1u64 << (n - 1);
    let branches: Vec<(usize, usize)> = (0..half)
        .map(|j| GhzIndex::new(n, j).map(|g| (g.zero_branch(), g.one_branch())))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (a, &(za, oa)) in branches.iter().enumerate() {
        for (b, &(zb, ob)) in branches.iter().enumerate() {
            for (si, s) in [1.0, -1.0].into_iter().enumerate() {
                for (ti, t) in [1.0, -1.0].into_iter().enumerate() {
                    let element = 0.5
                        * (rho.get(za, zb) + t * rho.get(za, ob) + s * rho.get(oa, zb) + s * t * rho.get(oa, ob));
                    let expected = if a == b && si == ti { state.weight(a)[si] } else { 0.0 };
                    worst = worst.max((element - expected).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Run every property on `trials` random polarization vectors per N in `2..=nmax`.
/// With `corrupt`, the analytic spectrum is perturbed so the harness must fail.
pub fn run_oracle_check(nmax: usize, trials: usize, seed: u32, corrupt: bool) -> Result<OracleCheckReport> {
    if !(2..=MAX_CHECK_QUBITS).contains(&nmax) {
        return Err(Error::QubitCount {
            n: nmax,
            min: 2,
            max: MAX_CHECK_QUBITS,
        });
    }
    let mut spectrum = PropertyResult::new("pt_spectrum_matches_oracle");
    let mut verdict = PropertyResult::new("verdict_matches_oracle");
    let mut ghz = PropertyResult::new("ghz_diagonal_matches_oracle");
    let mut conservation = PropertyResult::new("pt_trace_and_involution");
    let mut locality = PropertyResult::new("ch_party_a_locality");
    let mut flips = PropertyResult::new("sign_flip_invariance");
    let mut full_dist = PropertyResult::new("full_dist_implies_all_npt");

    let mut mt = Mt19937::new(seed);
    for n in 2..=nmax {
        for trial in 0..trials {
            let pol = PolarizationVector::new((0..n).map(|_| mt.uniform(-ALPHA_RANGE, ALPHA_RANGE)).collect())?;
            let replacement = mt.uniform(-ALPHA_RANGE, ALPHA_RANGE);
            let at = |what: &str| format!("N={n} trial={trial} alphas={:?}: {what}", pol.alphas());
            for kind in TransformKind::ALL {
                let state = bell_transformed_state(kind, &pol)?;
                let dense = dense_transformed_thermal(kind, &pol)?;
                let dev = ghz_basis_deviation(&dense, &state)?;
                ghz.record(dev <= GHZ_TOL, || at(&format!("{kind} deviation {dev:e}")));

                let fc = full_classification(kind, &pol)?;
                let mut all_npt = true;
                for bip in Bipartition::all(n)? {
                    let mut analytic = pt_eigenvalues_analytic(kind, &pol, &bip)?.sorted();
                    if corrupt {
                        analytic[0] += 1e-3;
                    }
                    let pt = partial_transpose_dense(&dense, &bip)?;
                    let oracle = pt.eigenvalues()?;
                    let worst = analytic
                        .iter()
                        .zip(&oracle)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    spectrum.record(worst <= SPECTRUM_TOL, || at(&format!("{kind} {bip} max |diff| {worst:e}")));

                    let v = npt(kind, &pol, &bip)?;
                    all_npt &= v.npt;
                    let min = oracle[0];
                    if min.abs() > VERDICT_GUARD {
                        verdict.record(v.npt == (min < 0.0), || {
                            at(&format!("{kind} {bip} npt={} oracle min {min:e}", v.npt))
                        });
                    }

                    let pt_w = partial_transpose_weights(&state, &bip)?;
                    let back = pt_w.partial_transpose();
                    let round_trip = back
                        .values()
                        .iter()
                        .zip(state.weights())
                        .flat_map(|(x, y)| [(x[0] - y[0]).abs(), (x[1] - y[1]).abs()])
                        .fold(0.0, f64::max);
                    let trace_err = (pt_w.trace() - 1.0).abs();
                    conservation.record(trace_err <= 1e-12 && round_trip <= 1e-15, || {
                        at(&format!("{kind} {bip} trace err {trace_err:e}, round trip {round_trip:e}"))
                    });

                    flips.record(sign_flip_invariance_check(kind, &pol, &bip)?, || at(&format!("{kind} {bip}")));

                    if kind == TransformKind::Ch {
                        if let Some(q) = bip.party_a().into_iter().find(|&q| q != 1) {
                            let mut alphas = pol.alphas().to_vec();
                            alphas[q - 1] = replacement;
                            let moved = npt(kind, &PolarizationVector::new(alphas)?, &bip)?;
                            locality.record(moved == v, || at(&format!("{bip} changing alpha_{q}")));
                        }
                    }
                }
                if fc.full_dist_possible {
                    full_dist.record(all_npt, || at(&format!("{kind} full-dist but some k is PPT")));
                }
            }
        }
    }
    Ok(OracleCheckReport {
        nmax,
        trials,
        seed,
        properties: vec![spectrum, verdict, ghz, conservation, locality, flips, full_dist],
    })
}

/// Dense minimum PT eigenvalue of a transformed thermal state.
pub fn oracle_min_pt_eigenvalue(kind: TransformKind, pol: &PolarizationVector, bip: &Bipartition) -> Result<f64> {
    min_eigenvalue(&partial_transpose_dense(&dense_transformed_thermal(kind, pol)?, bip)?)
}
