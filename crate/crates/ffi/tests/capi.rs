//! Exercises the C ABI the way a foreign binding would: through raw
//! pointers and status codes only.

use std::ffi::CStr;
use std::ptr;

use adia_ffi::*;

#[test]
fn periodic_lifecycle_and_spectrum() {
    unsafe {
        let mut sys: *mut AdiaSystem = ptr::null_mut();
        let st = adia_system_new_periodic(3, 8, 1.0, 1.0, 1.0, &mut sys);
        assert_eq!(st, AdiaStatus::Ok);
        assert!(!sys.is_null());
        assert_eq!(adia_system_sites(sys), 512);

        let mut p = AdiaSpectralPoint {
            s: 0.0,
            e0: 0.0,
            e1: 0.0,
            gap: 0.0,
            v01: 0.0,
            integrand: 0.0,
        };
        assert_eq!(adia_spectral_point(sys, 0.0, &mut p), AdiaStatus::Ok);
        assert!((p.e0 - -6.0).abs() < 1e-12);
        assert!(p.gap > 0.0);

        assert_eq!(
            adia_spectral_point(sys, 2.0, &mut p),
            AdiaStatus::InvalidArgument
        );
        let msg = CStr::from_ptr(adia_last_error_message());
        assert!(!msg.to_bytes().is_empty());

        adia_system_free(sys);
    }
}

#[test]
fn invalid_specs_rejected() {
    unsafe {
        let mut sys: *mut AdiaSystem = ptr::null_mut();
        // periodic L = 2 is rejected
        assert_eq!(
            adia_system_new_periodic(2, 2, 1.0, 1.0, 1.0, &mut sys),
            AdiaStatus::InvalidArgument
        );
        // marked site out of range
        assert_eq!(
            adia_system_new_open(1, 4, 4, 1.0, 1.0, 1.0, &mut sys),
            AdiaStatus::InvalidArgument
        );
        // null out pointer
        assert_eq!(
            adia_system_new_periodic(3, 8, 1.0, 1.0, 1.0, ptr::null_mut()),
            AdiaStatus::NullPointer
        );
    }
}

#[test]
fn peak_summary_grover_consistency() {
    unsafe {
        let mut sys: *mut AdiaSystem = ptr::null_mut();
        assert_eq!(
            adia_system_new_periodic(2, 6, 1.0, 1.0, 1.0, &mut sys),
            AdiaStatus::Ok
        );
        let mut sum = std::mem::zeroed::<AdiaPeakSummary>();
        assert_eq!(adia_peak_summary(sys, 0, &mut sum), AdiaStatus::Ok);
        assert!(sum.peak_height > 0.0);
        assert!(sum.s_minus < sum.peak_location && sum.peak_location < sum.s_plus);
        assert!((sum.t_estimate - sum.peak_height * sum.width).abs() < 1e-12);
        adia_system_free(sys);

        let (mut g, mut v) = (0.0f64, 0.0f64);
        assert_eq!(
            adia_grover_reference(64, 0.5, &mut g, &mut v),
            AdiaStatus::Ok
        );
        assert!((g - 0.125).abs() < 1e-15);
        assert_eq!(
            adia_grover_reference(1, 0.5, &mut g, &mut v),
            AdiaStatus::InvalidArgument
        );
    }
}

#[test]
fn open_system_and_evolution() {
    unsafe {
        let mut sys: *mut AdiaSystem = ptr::null_mut();
        assert_eq!(
            adia_system_new_open(1, 4, 1, 1.0, 1.0, 1.0, &mut sys),
            AdiaStatus::Ok
        );
        let mut ev = std::mem::zeroed::<AdiaEvolution>();
        assert_eq!(adia_evolve_constant_rate(sys, 0.0, &mut ev), AdiaStatus::Ok);
        assert!((ev.p0 - 0.25).abs() < 1e-15);
        assert_eq!(ev.steps, 0);
        adia_system_free(sys);
        adia_system_free(ptr::null_mut()); // tolerated
    }
}

#[test]
fn version_string_is_static() {
    unsafe {
        let v = CStr::from_ptr(adia_version());
        assert!(!v.to_bytes().is_empty());
    }
}
