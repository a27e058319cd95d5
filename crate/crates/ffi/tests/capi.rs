use std::ffi::CStr;
use std::ptr;

use thermal_ppt::criteria::npt_ch;
use thermal_ppt::transforms::pt_eigenvalues_analytic;
use thermal_ppt::{Bipartition, PolarizationVector, TransformKind};
use thermal_ppt_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe { tp_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn polarization(alphas: &[f64]) -> *mut TpPolarization {
    let mut pol = ptr::null_mut();
    assert_eq!(unsafe { tp_polarization_new(alphas.as_ptr(), alphas.len(), &mut pol) }, TpStatus::Ok);
    pol
}

#[test]
fn npt_matches_library() {
    let alphas = [1.0, 1.0];
    let pol = polarization(&alphas);
    let mut v = TpVerdict::default();
    assert_eq!(unsafe { tp_npt(TP_TRANSFORM_CH, pol, 1, &mut v) }, TpStatus::Ok);
    let expected = npt_ch(&PolarizationVector::new(alphas.to_vec()).unwrap(), &Bipartition::new(2, 1).unwrap()).unwrap();
    assert!(v.npt);
    assert_eq!(v.margin, expected.margin);
    unsafe { tp_polarization_free(pol) };
}

#[test]
fn spectrum_layout_and_buffer_check() {
    let alphas = [0.4, -0.7, 1.1];
    let pol = polarization(&alphas);
    let mut small = [0.0; 7];
    assert_eq!(unsafe { tp_pt_spectrum(TP_TRANSFORM_CF, pol, 2, small.as_mut_ptr(), small.len()) }, TpStatus::BufferTooSmall);
    assert!(last_error().contains("8 required"));

    let mut buf = [0.0; 8];
    assert_eq!(unsafe { tp_pt_spectrum(TP_TRANSFORM_CF, pol, 2, buf.as_mut_ptr(), buf.len()) }, TpStatus::Ok);
    let lib = pt_eigenvalues_analytic(
        TransformKind::Cf,
        &PolarizationVector::new(alphas.to_vec()).unwrap(),
        &Bipartition::new(3, 2).unwrap(),
    )
    .unwrap();
    for (j, pair) in lib.values().iter().enumerate() {
        assert_eq!(buf[2 * j], pair[0]);
        assert_eq!(buf[2 * j + 1], pair[1]);
    }

    let mut w = [0.0; 8];
    assert_eq!(unsafe { tp_bell_weights(TP_TRANSFORM_CF, pol, w.as_mut_ptr(), w.len()) }, TpStatus::Ok);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    unsafe { tp_polarization_free(pol) };
}

#[test]
fn analytic_and_dense_paths_agree() {
    let pol = polarization(&[0.9, 0.3, -0.5]);
    let mut thermal = ptr::null_mut();
    let mut rho = ptr::null_mut();
    unsafe {
        assert_eq!(tp_density_thermal(pol, &mut thermal), TpStatus::Ok);
        assert_eq!(tp_density_transform(TP_TRANSFORM_CH, thermal, &mut rho), TpStatus::Ok);
        assert_eq!(tp_density_qubits(rho), 3);
        for k in 1..4 {
            let mut spectrum = [0.0; 8];
            assert_eq!(tp_pt_spectrum(TP_TRANSFORM_CH, pol, k, spectrum.as_mut_ptr(), 8), TpStatus::Ok);
            let analytic = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
            let mut dense = 0.0;
            assert_eq!(tp_density_min_pt_eigenvalue(rho, k, &mut dense), TpStatus::Ok);
            assert!((analytic - dense).abs() < 1e-12, "k = {k}");
        }
        let mut copy = vec![0.0; 64];
        assert_eq!(tp_density_copy(rho, copy.as_mut_ptr(), copy.len()), TpStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(tp_density_from_buffer(copy.as_ptr(), copy.len(), &mut again), TpStatus::Ok);
        tp_density_free(again);
        tp_density_free(rho);
        tp_density_free(thermal);
        tp_polarization_free(pol);
    }
}

#[test]
fn durcirac_with_flips() {
    let pol = polarization(&[1.0, 1.0]);
    let mut thermal = ptr::null_mut();
    let mut rho = ptr::null_mut();
    let mut v = TpDcVerdict::Npt;
    unsafe {
        tp_density_thermal(pol, &mut thermal);
        tp_density_transform(TP_TRANSFORM_CH, thermal, &mut rho);
        assert_eq!(tp_dc_verdict(rho, 1, ptr::null(), 0, &mut v), TpStatus::Ok);
        assert_eq!(v, TpDcVerdict::Inconclusive);
        let flips = [2usize];
        assert_eq!(tp_dc_verdict(rho, 1, flips.as_ptr(), 1, &mut v), TpStatus::Ok);
        assert_eq!(v, TpDcVerdict::Npt);
        assert_eq!(tp_dc_verdict(rho, 1, ptr::null(), 1, &mut v), TpStatus::NullPointer);

        let mut iso = ptr::null_mut();
        assert_eq!(tp_density_isotropic(0.5, &mut iso), TpStatus::Ok);
        assert_eq!(tp_dc_verdict(iso, 1, ptr::null(), 0, &mut v), TpStatus::Ok);
        assert_eq!(v, TpDcVerdict::Npt);
        assert_eq!(tp_density_isotropic(2.0, &mut iso), TpStatus::InvalidArgument);
        tp_density_free(iso);
        tp_density_free(rho);
        tp_density_free(thermal);
        tp_polarization_free(pol);
    }
}

#[test]
fn classify_and_boundary() {
    let pol = polarization(&[0.5, 0.5, 0.5, 0.5]);
    let mut c = TpClassification::default();
    assert_eq!(unsafe { tp_classify(TP_TRANSFORM_CF, pol, &mut c) }, TpStatus::Ok);
    assert!(!c.full_sep_possible);
    assert_eq!(c.extremal_min, 0.0);
    unsafe { tp_polarization_free(pol) };

    let mut p = TpBoundaryPoint::default();
    let status = unsafe { tp_boundary_alpha(TP_TRANSFORM_CH, 2, TP_RULE_DEFAULT, 0, 0.0, 1, 1e-9, &mut p) };
    assert_eq!(status, TpStatus::Ok);
    assert_eq!((p.n, p.k), (2, 1));
    assert!((p.alpha_b - 1f64.asinh() / 2.0).abs() < 1e-8);
    let status = unsafe { tp_boundary_alpha(TP_TRANSFORM_CH, 4, 9, 0, 0.0, 1, 1e-9, &mut p) };
    assert_eq!(status, TpStatus::InvalidArgument);
}

#[test]
fn invalid_inputs_report_status_and_message() {
    let mut pol = ptr::null_mut();
    let alphas = [1.0, f64::NAN];
    assert_eq!(unsafe { tp_polarization_new(alphas.as_ptr(), 2, &mut pol) }, TpStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { tp_polarization_new(ptr::null(), 2, &mut pol) }, TpStatus::NullPointer);
    assert_eq!(last_error(), "alphas is null");

    let pol = polarization(&[1.0, 1.0]);
    let mut v = TpVerdict::default();
    assert_eq!(unsafe { tp_npt(7, pol, 1, &mut v) }, TpStatus::InvalidArgument);
    assert_eq!(unsafe { tp_npt(TP_TRANSFORM_CH, pol, 2, &mut v) }, TpStatus::InvalidArgument);
    assert_eq!(unsafe { tp_npt(TP_TRANSFORM_CH, pol, 1, ptr::null_mut()) }, TpStatus::NullPointer);
    assert_eq!(unsafe { tp_npt(TP_TRANSFORM_CH, ptr::null(), 1, &mut v) }, TpStatus::NullPointer);
    unsafe { tp_polarization_free(pol) };

    let asym = [0.5, 0.1, 0.0, 0.5];
    let mut rho = ptr::null_mut();
    assert_eq!(unsafe { tp_density_from_buffer(asym.as_ptr(), 4, &mut rho) }, TpStatus::InvalidArgument);
    assert!(rho.is_null());
    unsafe { tp_density_free(ptr::null_mut()) };
    assert_eq!(unsafe { tp_density_qubits(ptr::null()) }, 0);
}

#[test]
fn last_error_reports_required_size() {
    let mut pol = ptr::null_mut();
    unsafe { tp_polarization_new(ptr::null(), 1, &mut pol) };
    let needed = unsafe { tp_last_error(ptr::null_mut(), 0) };
    assert_eq!(needed, "alphas is null".len() + 1);
    let mut tiny = [1 as std::ffi::c_char; 4];
    unsafe { tp_last_error(tiny.as_mut_ptr(), tiny.len()) };
    assert_eq!(unsafe { CStr::from_ptr(tiny.as_ptr()) }.to_bytes(), b"alp");
}
