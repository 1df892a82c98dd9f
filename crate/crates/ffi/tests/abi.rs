use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gouy_ffi::*;

fn new_spec(omega0: f64, omega: f64, gamma: f64) -> *mut GouySpec {
    let mut spec = ptr::null_mut();
    assert_eq!(gouy_spec_new(omega0, omega, gamma, 1.0, 1.0, &mut spec), GouyStatus::Ok);
    assert!(!spec.is_null());
    spec
}

fn last_message() -> String {
    let p = gouy_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn values_match_the_core_library() {
    let spec = new_spec(1.0, 0.1, 0.0);
    let mut b = 0.0;
    assert_eq!(gouy_width(spec, 5.0 * std::f64::consts::PI, &mut b), GouyStatus::Ok);
    assert!((b - 10.0).abs() < 1e-12);
    let mut rate = 0.0;
    assert_eq!(gouy_phase_rate(spec, 5.0 * std::f64::consts::PI, &mut rate), GouyStatus::Ok);
    assert!((rate - 0.005).abs() < 1e-15);
    let mut sigma0 = 0.0;
    assert_eq!(gouy_spec_sigma0(spec, &mut sigma0), GouyStatus::Ok);
    assert_eq!(sigma0, 1.0);
    unsafe { gouy_spec_free(spec) };
}

#[test]
fn qfi_closed_and_numeric_agree() {
    let spec = new_spec(1.0, 1.0, 1.0);
    let (mut closed, mut numeric) = (0.0, 0.0);
    assert_eq!(gouy_qfi(spec, 2.0, 0, &mut closed), GouyStatus::Ok);
    assert_eq!(gouy_qfi(spec, 2.0, 1, &mut numeric), GouyStatus::Ok);
    assert_eq!(closed, 10.0);
    assert!((numeric - closed).abs() / closed < 1e-6);
    let mut cfi = 0.0;
    assert_eq!(gouy_cfi(spec, 2.0, &mut cfi), GouyStatus::Ok);
    assert!(cfi <= closed);
    unsafe { gouy_spec_free(spec) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut spec = ptr::null_mut();
    assert_eq!(
        gouy_spec_new(0.0, 1.0, 0.0, 1.0, 1.0, &mut spec),
        GouyStatus::InvalidArgument
    );
    assert!(spec.is_null());
    assert!(last_message().starts_with("NonPositiveFrequency"));

    let spec = new_spec(1.0, 2.0, 0.0);
    let mut v = 42.0;
    assert_eq!(gouy_qfi(spec, 1.0, 0, &mut v), GouyStatus::NotResonant);
    assert_eq!(v, 42.0, "out untouched on failure");
    assert_eq!(gouy_inv_curvature(spec, 0.0, &mut v), GouyStatus::Singular);
    assert_eq!(
        gouy_oracle_l2_error(spec, std::f64::consts::FRAC_PI_2, &mut v),
        GouyStatus::Singular
    );
    assert_eq!(gouy_width(spec, 1.0, ptr::null_mut()), GouyStatus::NullPointer);
    assert_eq!(gouy_width(ptr::null(), 1.0, &mut v), GouyStatus::InvalidArgument);
    unsafe { gouy_spec_free(spec) };
    unsafe { gouy_spec_free(ptr::null_mut()) };
}

#[test]
fn oracle_through_the_boundary() {
    let spec = new_spec(1.0, 0.7, -1.0);
    let mut e = 1.0;
    assert_eq!(gouy_oracle_l2_error(spec, 1.1, &mut e), GouyStatus::Ok);
    assert!(e < 1e-8, "{e}");
    unsafe { gouy_spec_free(spec) };
}

#[test]
fn static_strings() {
    let name = unsafe { CStr::from_ptr(gouy_status_name(GouyStatus::Singular)) };
    assert_eq!(name.to_str().unwrap(), "singular");
    let version = unsafe { CStr::from_ptr(gouy_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_generated_and_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gouy.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in [
        "typedef struct GouySpec GouySpec;",
        "GOUY_STATUS_SINGULAR = 3",
        "gouy_spec_new(",
        "gouy_spec_free(",
        "gouy_phase_unwrapped(",
        "gouy_oracle_l2_error(",
        "gouy_last_error_message(void)",
    ] {
        assert!(text.contains(symbol), "missing {symbol}");
    }
}

/// Compile `tests/c/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe_dir = std::env::current_exe().unwrap();
    let profile_dir = exe_dir.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libgouy_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let out = tempfile_path("gouy_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("CurvatureSingular"));
    let _ = std::fs::remove_file(out);
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
