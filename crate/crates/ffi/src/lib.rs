//! C ABI over `thermal-ppt`.
//!
//! Every function returns a [`TpStatus`]; results are written through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. On failure, [`tp_last_error`] returns a description of the most
//! recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thermal_ppt::boundary::{boundary_alpha, PartitionRule};
use thermal_ppt::criteria::{self, Extremal};
use thermal_ppt::durcirac::{self, DcVerdict};
use thermal_ppt::oracle::{self, DenseDensityMatrix};
use thermal_ppt::transforms::{self, TransformKind};
use thermal_ppt::{Bipartition, Error, PolarizationVector};

pub const TP_TRANSFORM_CH: u32 = 0;
pub const TP_TRANSFORM_CF: u32 = 1;

pub const TP_RULE_DEFAULT: u32 = 0;
pub const TP_RULE_ALL_BUT_FIRST: u32 = 1;
pub const TP_RULE_HALF: u32 = 2;
pub const TP_RULE_EXPLICIT: u32 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpStatus {
    Ok = 0,
    NullPointer = 1,
    /// The inputs violate a precondition (bad N, k, alpha, matrix, ...).
    InvalidArgument = 2,
    /// The output buffer is shorter than required.
    BufferTooSmall = 3,
    /// I/O or other environment failure.
    Internal = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpDcVerdict {
    Npt = 0,
    Inconclusive = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TpVerdict {
    pub npt: bool,
    pub margin: f64,
    pub at_boundary: bool,
}

/// `extremal_max`/`extremal_min` are `b_max`/`b_min` for CH and `d_max`/`d_min` for CF.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TpClassification {
    pub full_sep_possible: bool,
    pub full_dist_possible: bool,
    pub extremal_max: f64,
    pub extremal_min: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TpBoundaryPoint {
    pub n: usize,
    pub k: u32,
    pub w: usize,
    pub alpha_b: f64,
    pub log10_inv_alpha: f64,
    pub residual: f64,
}

/// Opaque polarization vector.
pub struct TpPolarization(PolarizationVector);

/// Opaque dense density matrix.
pub struct TpDensityMatrix(DenseDensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Failure(TpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_domain() { TpStatus::InvalidArgument } else { TpStatus::Internal };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside thermal-ppt");
            TpStatus::Panic
        }
    }
}

fn kind(code: u32) -> Result<TransformKind, Failure> {
    match code {
        TP_TRANSFORM_CH => Ok(TransformKind::Ch),
        TP_TRANSFORM_CF => Ok(TransformKind::Cf),
        other => Err(Failure(TpStatus::InvalidArgument, format!("unknown transform code {other}"))),
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn fill(out: *mut f64, len: usize, values: impl Iterator<Item = f64> + Clone) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let needed = values.clone().count();
    if len < needed {
        return Err(Failure(
            TpStatus::BufferTooSmall,
            format!("buffer holds {len} values, {needed} required"),
        ));
    }
    for (i, v) in values.enumerate() {
        out.add(i).write(v);
    }
    Ok(())
}

/// Copy the last error message (NUL-terminated, truncated to fit) into `buf`.
/// Returns the buffer size needed for the full message including the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tp_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            buf.add(n).write(0);
        }
        bytes.len() + 1
    })
}

/// # Safety
/// `alphas` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_polarization_new(alphas: *const f64, n: usize, out: *mut *mut TpPolarization) -> TpStatus {
    guard(|| {
        if alphas.is_null() {
            return Err(null("alphas"));
        }
        let pol = PolarizationVector::new(std::slice::from_raw_parts(alphas, n).to_vec())?;
        write(out, Box::into_raw(Box::new(TpPolarization(pol))))
    })
}

/// # Safety
/// `pol` must be null or a handle from [`tp_polarization_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_polarization_free(pol: *mut TpPolarization) {
    if !pol.is_null() {
        drop(Box::from_raw(pol));
    }
}

/// NPT verdict of the transformed state across bipartition `k`.
///
/// # Safety
/// `pol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_npt(transform: u32, pol: *const TpPolarization, k: u64, out: *mut TpVerdict) -> TpStatus {
    guard(|| {
        let pol = &as_ref(pol, "polarization")?.0;
        let bip = Bipartition::new(pol.n(), k)?;
        let v = criteria::npt(kind(transform)?, pol, &bip)?;
        write(
            out,
            TpVerdict {
                npt: v.npt,
                margin: v.margin,
                at_boundary: v.at_boundary,
            },
        )
    })
}

/// Partial-transpose eigenvalues as `2^N` doubles laid out `[mu_0^+, mu_0^-, mu_1^+, ...]`.
///
/// # Safety
/// `pol` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tp_pt_spectrum(
    transform: u32,
    pol: *const TpPolarization,
    k: u64,
    out: *mut f64,
    len: usize,
) -> TpStatus {
    guard(|| {
        let pol = &as_ref(pol, "polarization")?.0;
        let bip = Bipartition::new(pol.n(), k)?;
        let spectrum = transforms::pt_eigenvalues_analytic(kind(transform)?, pol, &bip)?;
        fill(out, len, spectrum.values().iter().flatten().copied())
    })
}

/// GHZ-basis weights as `2^N` doubles laid out `[omega_0^+, omega_0^-, ...]`.
///
/// # Safety
/// `pol` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tp_bell_weights(transform: u32, pol: *const TpPolarization, out: *mut f64, len: usize) -> TpStatus {
    guard(|| {
        let pol = &as_ref(pol, "polarization")?.0;
        let state = transforms::bell_transformed_state(kind(transform)?, pol)?;
        fill(out, len, state.weights().iter().flatten().copied())
    })
}

/// # Safety
/// `pol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_classify(transform: u32, pol: *const TpPolarization, out: *mut TpClassification) -> TpStatus {
    guard(|| {
        let pol = &as_ref(pol, "polarization")?.0;
        let fc = criteria::full_classification(kind(transform)?, pol)?;
        let (extremal_max, extremal_min) = match fc.extremal {
            Extremal::Ch { b_max, b_min } => (b_max, b_min),
            Extremal::Cf { d_max, d_min } => (d_max, d_min),
        };
        write(
            out,
            TpClassification {
                full_sep_possible: fc.full_sep_possible,
                full_dist_possible: fc.full_dist_possible,
                extremal_max,
                extremal_min,
            },
        )
    })
}

/// Boundary scale for `n` qubits. `rule` is one of the `TP_RULE_*` codes;
/// `k` is used only with `TP_RULE_EXPLICIT`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tp_boundary_alpha(
    transform: u32,
    n: usize,
    rule: u32,
    k: u64,
    delta: f64,
    seed: u32,
    tol: f64,
    out: *mut TpBoundaryPoint,
) -> TpStatus {
    guard(|| {
        let kind = kind(transform)?;
        let rule = match rule {
            TP_RULE_DEFAULT => PartitionRule::default_for(kind),
            TP_RULE_ALL_BUT_FIRST => PartitionRule::AllButFirst,
            TP_RULE_HALF => PartitionRule::HalfSplit,
            TP_RULE_EXPLICIT => PartitionRule::Explicit(k),
            other => return Err(Failure(TpStatus::InvalidArgument, format!("unknown rule code {other}"))),
        };
        let p = boundary_alpha(kind, n, rule, delta, seed, tol)?;
        write(
            out,
            TpBoundaryPoint {
                n: p.n,
                k: p.k,
                w: p.w,
                alpha_b: p.alpha_b,
                log10_inv_alpha: p.log10_inv_alpha,
                residual: p.residual,
            },
        )
    })
}

fn boxed(rho: DenseDensityMatrix) -> *mut TpDensityMatrix {
    Box::into_raw(Box::new(TpDensityMatrix(rho)))
}

/// Density matrix from `len = 4^N` row-major doubles; must be symmetric,
/// unit-trace and positive semidefinite.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_density_from_buffer(data: *const f64, len: usize, out: *mut *mut TpDensityMatrix) -> TpStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let rho = DenseDensityMatrix::from_square(std::slice::from_raw_parts(data, len).to_vec())?;
        rho.check_positive()?;
        write(out, boxed(rho))
    })
}

/// # Safety
/// `pol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_density_thermal(pol: *const TpPolarization, out: *mut *mut TpDensityMatrix) -> TpStatus {
    guard(|| {
        let rho = oracle::dense_thermal(&as_ref(pol, "polarization")?.0)?;
        write(out, boxed(rho))
    })
}

/// New matrix `U rho U^T` for the given transform.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_density_transform(
    transform: u32,
    rho: *const TpDensityMatrix,
    out: *mut *mut TpDensityMatrix,
) -> TpStatus {
    guard(|| {
        let rho = oracle::apply_transform_dense(kind(transform)?, &as_ref(rho, "density matrix")?.0)?;
        write(out, boxed(rho))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_density_isotropic(f: f64, out: *mut *mut TpDensityMatrix) -> TpStatus {
    guard(|| write(out, boxed(durcirac::isotropic_state(f)?)))
}

/// Qubit count of the matrix, or 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tp_density_qubits(rho: *const TpDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.n())
}

/// Copy the `4^N` row-major entries into `out`.
///
/// # Safety
/// `rho` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tp_density_copy(rho: *const TpDensityMatrix, out: *mut f64, len: usize) -> TpStatus {
    guard(|| fill(out, len, as_ref(rho, "density matrix")?.0.data().iter().copied()))
}

/// Smallest eigenvalue of the partial transpose across `k`, by dense diagonalization.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_density_min_pt_eigenvalue(rho: *const TpDensityMatrix, k: u64, out: *mut f64) -> TpStatus {
    guard(|| {
        let rho = &as_ref(rho, "density matrix")?.0;
        let bip = Bipartition::new(rho.n(), k)?;
        write(out, oracle::min_eigenvalue(&oracle::partial_transpose_dense(rho, &bip)?)?)
    })
}

/// Dür–Cirac verdict across `k` after X flips on the `n_flips` listed qubits (1-based).
///
/// # Safety
/// `rho` must be a live handle; `flips` must point to `n_flips` readable
/// values (or be null when `n_flips` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tp_dc_verdict(
    rho: *const TpDensityMatrix,
    k: u64,
    flips: *const usize,
    n_flips: usize,
    out: *mut TpDcVerdict,
) -> TpStatus {
    guard(|| {
        let rho = &as_ref(rho, "density matrix")?.0;
        let flips = match (flips.is_null(), n_flips) {
            (_, 0) => &[][..],
            (true, _) => return Err(null("flips")),
            (false, n) => std::slice::from_raw_parts(flips, n),
        };
        let v = match durcirac::dc_with_rescue(rho, k, flips)? {
            DcVerdict::Npt => TpDcVerdict::Npt,
            DcVerdict::Inconclusive => TpDcVerdict::Inconclusive,
        };
        write(out, v)
    })
}

/// # Safety
/// `rho` must be null or a handle from a `tp_density_*` constructor not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_density_free(rho: *mut TpDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}
