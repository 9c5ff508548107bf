use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use hulthen_kg_ffi::*;

fn c(re: f64) -> HkgComplex {
    HkgComplex { re, im: 0.0 }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hkg_last_error_message()) }.to_string_lossy().into_owned()
}

fn params(v0: f64, q: f64, alpha: f64) -> *mut HkgParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { hkg_params_new(c(v0), c(q), c(alpha), &mut p) }, HkgStatus::Ok);
    p
}

#[test]
fn level_and_validation() {
    let p = params(0.5, 1.0, 1.0);
    let mut level = HkgLevel {
        n: 0,
        e_plus: c(0.0),
        e_minus: c(0.0),
        valid_plus: false,
        valid_minus: false,
    };
    unsafe {
        assert_eq!(hkg_energy_level(p, 0, &mut level), HkgStatus::Ok);
        assert!((level.e_plus.re - 0.911437827766).abs() < 1e-11);
        assert!((level.e_minus.re + 0.411437827766).abs() < 1e-11);
        assert!(level.valid_plus && !level.valid_minus);

        let (mut valid, mut residual) = (false, f64::NAN);
        assert_eq!(hkg_validate_level(p, level.e_plus.re, 0, &mut valid, &mut residual), HkgStatus::Ok);
        assert!(valid && residual < 1e-9);

        let mut v = c(0.0);
        assert_eq!(hkg_potential(p, 1.0, &mut v), HkgStatus::Ok);
        let expect = -0.5 * (-1.0f64).exp() / (1.0 - (-1.0f64).exp());
        assert!((v.re - expect).abs() < 1e-14 && v.im == 0.0);
        hkg_params_free(p);
    }
}

#[test]
fn spectrum_handle() {
    let p = params(0.5, 1.0, 1.0);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(hkg_spectrum_new(p, 2, false, &mut s), HkgStatus::Ok);
        assert_eq!(hkg_spectrum_len(s), 2);
        let mut level = std::mem::zeroed::<HkgLevel>();
        assert_eq!(hkg_spectrum_get(s, 1, &mut level), HkgStatus::Ok);
        assert_eq!(level.n, 1);
        assert!((level.e_plus.re - 0.830947501931).abs() < 1e-11);
        assert_eq!(hkg_spectrum_get(s, 2, &mut level), HkgStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        hkg_spectrum_free(s);

        assert_eq!(hkg_spectrum_new(p, 5, true, &mut s), HkgStatus::Ok);
        assert_eq!(hkg_spectrum_len(s), 1);
        hkg_spectrum_free(s);
        assert_eq!(hkg_spectrum_len(ptr::null()), 0);
        hkg_params_free(p);
    }
}

#[test]
fn conditions() {
    let p = params(0.5, 1.0, 1.0);
    unsafe {
        let mut cnd = std::mem::zeroed::<HkgConditions>();
        assert_eq!(hkg_conditions(p, 0, &mut cnd), HkgStatus::Ok);
        assert!(cnd.at_least_one_level);
        hkg_params_free(p);
    }
}

#[test]
fn wavefunction_handle() {
    let p = params(0.5, 1.0, 1.0);
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(hkg_wavefunction_new(p, 0, 0, false, true, &mut w), HkgStatus::Ok);
        let mut psi = c(0.0);
        assert_eq!(hkg_wavefunction_eval(w, 1.0, &mut psi), HkgStatus::Ok);
        assert!(psi.re.is_finite() && psi.re != 0.0);
        assert_eq!(hkg_wavefunction_eval(w, -1.0, &mut psi), HkgStatus::Domain);
        hkg_wavefunction_free(w);
        w = ptr::null_mut();

        assert_eq!(hkg_wavefunction_new(p, 0, 1, false, false, &mut w), HkgStatus::Refused);
        assert!(w.is_null());
        assert_eq!(hkg_wavefunction_new(p, 0, 7, false, false, &mut w), HkgStatus::InvalidArgument);
        hkg_params_free(p);
    }
}

#[test]
fn pion_entry_points() {
    unsafe {
        let mut z = 0;
        assert_eq!(hkg_pion_critical_z(0.1, 0, &mut z), HkgStatus::Ok);
        assert_eq!(z, 22);
        let mut st = std::mem::zeroed::<HkgPionState>();
        assert_eq!(hkg_pion_ground_state(22, 0.1, 0.0, 0.0, 0.0, &mut st), HkgStatus::Ok);
        assert!((st.in_units_of_mass - 0.93801).abs() < 1e-5);
        assert!((st.binding + 8.651).abs() < 1e-3);
        assert_eq!(hkg_pion_ground_state(22, 1.0, 0.0, 0.0, 0.0, &mut st), HkgStatus::NoBoundState);
        assert!(last_error().contains("quantization identity"));
        assert_eq!(hkg_pion_ground_state(0, 0.1, 0.0, 0.0, 0.0, &mut st), HkgStatus::Domain);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(hkg_params_new(c(0.5), c(1.0), c(1.0), ptr::null_mut()), HkgStatus::NullPointer);
        assert_eq!(hkg_params_new(c(f64::NAN), c(1.0), c(1.0), &mut p), HkgStatus::Domain);
        assert!(!last_error().is_empty());
        assert_eq!(hkg_potential(ptr::null(), 1.0, &mut c(0.0)), HkgStatus::NullPointer);
        assert_eq!(last_error(), "params is null");
        hkg_params_free(ptr::null_mut());
        let name = CStr::from_ptr(hkg_status_name(HkgStatus::Domain));
        assert_eq!(name.to_str().unwrap(), "domain error");
    }
}

#[test]
fn error_messages_are_per_thread() {
    unsafe {
        hkg_potential(ptr::null(), 1.0, &mut c(0.0));
    }
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
    assert_eq!(last_error(), "params is null");
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hulthen_kg.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    assert!(h.contains("#ifndef HULTHEN_KG_H"));
    for name in [
        "hkg_params_new",
        "hkg_params_new_pion",
        "hkg_params_free",
        "hkg_potential",
        "hkg_energy_level",
        "hkg_validate_level",
        "hkg_conditions",
        "hkg_spectrum_new",
        "hkg_spectrum_len",
        "hkg_spectrum_get",
        "hkg_spectrum_free",
        "hkg_wavefunction_new",
        "hkg_wavefunction_eval",
        "hkg_wavefunction_free",
        "hkg_pion_critical_z",
        "hkg_pion_ground_state",
        "hkg_last_error_message",
        "hkg_status_name",
    ] {
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct HkgParams HkgParams;"));
    assert!(h.contains("HKG_STATUS_PANIC = 15"));
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <math.h>
#include "hulthen_kg.h"

int main(void) {
    HkgParams *p = NULL;
    HkgComplex v0 = {0.5, 0.0}, q = {1.0, 0.0}, a = {1.0, 0.0};
    if (hkg_params_new(v0, q, a, &p) != HKG_STATUS_OK) return 1;
    HkgLevel level;
    if (hkg_energy_level(p, 0, &level) != HKG_STATUS_OK) return 2;
    if (fabs(level.e_plus.re - 0.911437827766) > 1e-11 || !level.valid_plus) return 3;
    HkgWavefunction *w = NULL;
    if (hkg_wavefunction_new(p, 0, 1, false, false, &w) != HKG_STATUS_REFUSED) return 4;
    printf("%s: %s\n", hkg_status_name(HKG_STATUS_REFUSED), hkg_last_error_message());
    hkg_params_free(p);
    return 0;
}
"#;

fn have(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().map(|o| o.status.success()).unwrap_or(false)
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have("gcc") {
        eprintln!("gcc not found, skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_SMOKE).unwrap();
    let inc = header().parent().unwrap().to_path_buf();
    let out = Command::new("gcc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&inc)
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    if have("g++") {
        let cpp = dir.path().join("smoke.cpp");
        std::fs::write(&cpp, "#include \"hulthen_kg.h\"\nint main() { return hkg_spectrum_len(nullptr) == 0 ? 0 : 1; }\n").unwrap();
        let out = Command::new("g++").args(["-fsyntax-only", "-I"]).arg(&inc).arg(&cpp).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

fn static_library() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libhulthen_kg_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_library().filter(|_| have("gcc")) else {
        eprintln!("static library or gcc not available, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let out = Command::new("gcc")
        .args(["-std=c99", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.starts_with("refused: "), "{stdout}");
}
