//! C ABI over the bound-state engine.
//!
//! Handles are opaque and owned by the caller once created; free each with its
//! `_free` function. Every call returns an [`HkgStatus`]; on failure the message
//! is available from [`hkg_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hulthen_kg::applications::{critical_z, pion_ground_state, PionSystem};
use hulthen_kg::model::{eval_potential, PotentialParams, UnitSystem};
use hulthen_kg::quadrature::QuadratureConfig;
use hulthen_kg::spectrum::{bound_state_conditions, energy_candidates, spectrum, validate_level, EnergyLevel, Mode, Root};
use hulthen_kg::wavefunction::{build_eigenfunction, normalize, WavefunctionSpec};
use hulthen_kg::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Pole = 4,
    ExponentialCase = 5,
    NoKSolution = 6,
    NoBoundBranch = 7,
    Unsupported = 8,
    Refused = 9,
    Divergent = 10,
    NoEigenvalue = 11,
    NoBoundState = 12,
    TrivialSolution = 13,
    Internal = 14,
    Panic = 15,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkgComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for HkgComplex {
    fn from(z: Complex64) -> Self {
        HkgComplex { re: z.re, im: z.im }
    }
}

impl From<HkgComplex> for Complex64 {
    fn from(z: HkgComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkgLevel {
    pub n: u32,
    pub e_plus: HkgComplex,
    pub e_minus: HkgComplex,
    pub valid_plus: bool,
    pub valid_minus: bool,
}

impl From<&EnergyLevel> for HkgLevel {
    fn from(l: &EnergyLevel) -> Self {
        HkgLevel {
            n: l.n,
            e_plus: l.e_plus.into(),
            e_minus: l.e_minus.into(),
            valid_plus: l.valid_plus,
            valid_minus: l.valid_minus,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkgConditions {
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub at_least_one_level: bool,
    /// n_max is meaningful only when this is set.
    pub has_n_max: bool,
    pub n_max: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkgPionState {
    pub v0: f64,
    pub e0: f64,
    pub binding: f64,
    pub in_units_of_mass: f64,
}

/// Potential parameters and units.
pub struct HkgParams(PotentialParams);

/// Energy levels computed once.
pub struct HkgSpectrum(Vec<EnergyLevel>);

/// An eigenfunction ready for evaluation.
pub struct HkgWavefunction(WavefunctionSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HkgStatus {
    match e {
        Error::Domain(_) => HkgStatus::Domain,
        Error::Pole { .. } => HkgStatus::Pole,
        Error::ExponentialCase => HkgStatus::ExponentialCase,
        Error::NoKSolution(_) => HkgStatus::NoKSolution,
        Error::NoBoundBranch { .. } => HkgStatus::NoBoundBranch,
        Error::Unsupported(_) => HkgStatus::Unsupported,
        Error::Refused(_) => HkgStatus::Refused,
        Error::Divergent { .. } => HkgStatus::Divergent,
        Error::NoEigenvalueInBracket { .. } => HkgStatus::NoEigenvalue,
        Error::NoBoundState { .. } => HkgStatus::NoBoundState,
        Error::TrivialSolution => HkgStatus::TrivialSolution,
        Error::Output { .. } | Error::Internal(_) => HkgStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), HkgStatus>>(f: F) -> HkgStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HkgStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            HkgStatus::Panic
        }
    }
}

fn fail(e: Error) -> HkgStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> HkgStatus {
    set_error(&format!("{what} is null"));
    HkgStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, HkgStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, HkgStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

fn root_of(root: u32) -> Result<Root, HkgStatus> {
    match root {
        0 => Ok(Root::Plus),
        1 => Ok(Root::Minus),
        _ => {
            set_error("root must be 0 (plus) or 1 (minus)");
            Err(HkgStatus::InvalidArgument)
        }
    }
}

/// Natural units (hbar = c = m = 1).
///
/// # Safety
/// `out_params` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hkg_params_new(
    v0: HkgComplex,
    q: HkgComplex,
    alpha: HkgComplex,
    out_params: *mut *mut HkgParams,
) -> HkgStatus {
    guard(|| {
        let slot = out(out_params, "out_params")?;
        let p = PotentialParams::new(v0, q, alpha, 1.0, UnitSystem::natural()).map_err(fail)?;
        *slot = Box::into_raw(Box::new(HkgParams(p)));
        Ok(())
    })
}

/// Pion units: energies in MeV, lengths in fm. Non-positive constants select
/// the defaults; `mass` <= 0 selects the pion mass.
///
/// # Safety
/// `out_params` must be a valid pointer to writable storage for one handle.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hkg_params_new_pion(
    v0: HkgComplex,
    q: HkgComplex,
    alpha: HkgComplex,
    mass: f64,
    hbar_c: f64,
    pion_mass: f64,
    e2: f64,
    out_params: *mut *mut HkgParams,
) -> HkgStatus {
    guard(|| {
        let slot = out(out_params, "out_params")?;
        let units = pion_units(hbar_c, pion_mass, e2)?;
        let m = if mass > 0.0 { mass } else { units.pion_mass_energy };
        let p = PotentialParams::new(v0, q, alpha, m, units).map_err(fail)?;
        *slot = Box::into_raw(Box::new(HkgParams(p)));
        Ok(())
    })
}

fn pion_units(hbar_c: f64, pion_mass: f64, e2: f64) -> Result<UnitSystem, HkgStatus> {
    let u = UnitSystem::pion();
    let pick = |v: f64, d: f64| if v > 0.0 { v } else { d };
    u.with_constants(
        pick(hbar_c, u.hbar_c),
        pick(pion_mass, u.pion_mass_energy),
        pick(e2, u.e_squared),
    )
    .map_err(fail)
}

/// # Safety
/// `params` must come from `hkg_params_new*` and not be freed already; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hkg_params_free(params: *mut HkgParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_potential(params: *const HkgParams, x: f64, out_v: *mut HkgComplex) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let slot = out(out_v, "out_v")?;
        *slot = eval_potential(&p.0, x).map_err(fail)?.into();
        Ok(())
    })
}

/// Both closed-form roots of level n with their validation flags.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_energy_level(params: *const HkgParams, n: u32, out_level: *mut HkgLevel) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let slot = out(out_level, "out_level")?;
        *slot = (&energy_candidates(n, &p.0).map_err(fail)?).into();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_validate_level(
    params: *const HkgParams,
    energy: f64,
    n: u32,
    out_valid: *mut bool,
    out_residual: *mut f64,
) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let valid = out(out_valid, "out_valid")?;
        let residual = out(out_residual, "out_residual")?;
        let v = validate_level(energy, n, &p.0);
        *valid = v.valid;
        *residual = v.residual;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_conditions(params: *const HkgParams, n: u32, out_conditions: *mut HkgConditions) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let slot = out(out_conditions, "out_conditions")?;
        let c = bound_state_conditions(&p.0, n).map_err(fail)?;
        *slot = HkgConditions {
            cond_ii: c.cond_ii,
            cond_iii: c.cond_iii,
            at_least_one_level: c.at_least_one_level,
            has_n_max: c.n_max.is_some(),
            n_max: c.n_max.unwrap_or(0),
        };
        Ok(())
    })
}

/// Levels 0..=n_limit; `validated` drops levels without a valid root.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_spectrum_new(
    params: *const HkgParams,
    n_limit: u32,
    validated: bool,
    out_spectrum: *mut *mut HkgSpectrum,
) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let slot = out(out_spectrum, "out_spectrum")?;
        let mode = if validated { Mode::Validated } else { Mode::PaperFidelity };
        let levels = spectrum(&p.0, n_limit, mode).map_err(fail)?;
        *slot = Box::into_raw(Box::new(HkgSpectrum(levels)));
        Ok(())
    })
}

/// Number of levels; 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hkg_spectrum_len(spectrum: *const HkgSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_spectrum_get(spectrum: *const HkgSpectrum, index: usize, out_level: *mut HkgLevel) -> HkgStatus {
    guard(|| {
        let s = deref(spectrum, "spectrum")?;
        let slot = out(out_level, "out_level")?;
        let level = s.0.get(index).ok_or_else(|| {
            set_error(&format!("index {index} out of range for {} levels", s.0.len()));
            HkgStatus::InvalidArgument
        })?;
        *slot = level.into();
        Ok(())
    })
}

/// # Safety
/// `spectrum` must come from `hkg_spectrum_new` and not be freed already; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hkg_spectrum_free(spectrum: *mut HkgSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Eigenfunction of level n; root 0 is the plus root, 1 the minus root.
/// Roots failing validation are refused unless `force` is set.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_wavefunction_new(
    params: *const HkgParams,
    n: u32,
    root: u32,
    force: bool,
    normalized: bool,
    out_wavefunction: *mut *mut HkgWavefunction,
) -> HkgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let slot = out(out_wavefunction, "out_wavefunction")?;
        let root = root_of(root)?;
        let level = energy_candidates(n, &p.0).map_err(fail)?;
        let mut spec = build_eigenfunction(&level, root, &p.0, force).map_err(fail)?;
        if normalized {
            spec.norm_constant = Some(normalize(&spec, &QuadratureConfig::default()).map_err(fail)?);
        }
        *slot = Box::into_raw(Box::new(HkgWavefunction(spec)));
        Ok(())
    })
}

/// psi(x).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_wavefunction_eval(
    wavefunction: *const HkgWavefunction,
    x: f64,
    out_psi: *mut HkgComplex,
) -> HkgStatus {
    guard(|| {
        let w = deref(wavefunction, "wavefunction")?;
        let slot = out(out_psi, "out_psi")?;
        let (lo, _) = w.0.x_domain();
        if !x.is_finite() || x < lo {
            set_error(&format!("x = {x} lies outside the domain [{lo}, inf)"));
            return Err(HkgStatus::Domain);
        }
        *slot = w.0.eval_x(x).into();
        Ok(())
    })
}

/// # Safety
/// `wavefunction` must come from `hkg_wavefunction_new` and not be freed already; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hkg_wavefunction_free(wavefunction: *mut HkgWavefunction) {
    if !wavefunction.is_null() {
        drop(Box::from_raw(wavefunction));
    }
}

/// Largest nuclear charge with a bound level n, default pion constants.
///
/// # Safety
/// `out_z` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_pion_critical_z(q: f64, n: u32, out_z: *mut u32) -> HkgStatus {
    guard(|| {
        let slot = out(out_z, "out_z")?;
        *slot = critical_z(q, n, &UnitSystem::pion()).map_err(fail)?;
        Ok(())
    })
}

/// Pionic ground state for charge z with A = 2.5 z and r0 = 1.2 fm.
/// Non-positive constants select the defaults.
///
/// # Safety
/// `out_state` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hkg_pion_ground_state(
    z: u32,
    q: f64,
    hbar_c: f64,
    pion_mass: f64,
    e2: f64,
    out_state: *mut HkgPionState,
) -> HkgStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let units = pion_units(hbar_c, pion_mass, e2)?;
        let sys = PionSystem::new(z).map_err(fail)?;
        let g = pion_ground_state(&sys, q, &units).map_err(fail)?;
        *slot = HkgPionState {
            v0: g.v0,
            e0: g.e0,
            binding: g.binding,
            in_units_of_mass: g.in_units_of_mass,
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hkg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn hkg_status_name(status: HkgStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        HkgStatus::Ok => b"ok\0",
        HkgStatus::NullPointer => b"null pointer\0",
        HkgStatus::InvalidArgument => b"invalid argument\0",
        HkgStatus::Domain => b"domain error\0",
        HkgStatus::Pole => b"pole\0",
        HkgStatus::ExponentialCase => b"exponential case\0",
        HkgStatus::NoKSolution => b"no k solution\0",
        HkgStatus::NoBoundBranch => b"no bound branch\0",
        HkgStatus::Unsupported => b"unsupported\0",
        HkgStatus::Refused => b"refused\0",
        HkgStatus::Divergent => b"divergent\0",
        HkgStatus::NoEigenvalue => b"no eigenvalue\0",
        HkgStatus::NoBoundState => b"no bound state\0",
        HkgStatus::TrivialSolution => b"trivial solution\0",
        HkgStatus::Internal => b"internal error\0",
        HkgStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn c(re: f64) -> HkgComplex {
        HkgComplex { re, im: 0.0 }
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Pole { location: Complex64::new(0.0, 0.0) }), HkgStatus::Pole);
        assert_eq!(status_of(&Error::NoBoundState { condition: String::new() }), HkgStatus::NoBoundState);
        assert_eq!(status_of(&Error::Output { path: String::new(), reason: String::new() }), HkgStatus::Internal);
    }

    #[test]
    fn status_names_are_static() {
        let name = unsafe { CStr::from_ptr(hkg_status_name(HkgStatus::NoEigenvalue)) };
        assert_eq!(name.to_str().unwrap(), "no eigenvalue");
    }

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, HkgStatus::Panic);
        let msg = unsafe { CStr::from_ptr(hkg_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("boom"));
    }

    #[test]
    fn error_message_cleared_on_success() {
        let mut p = std::ptr::null_mut();
        unsafe {
            assert_eq!(hkg_params_new(c(0.5), c(1.0), c(1.0), std::ptr::null_mut()), HkgStatus::NullPointer);
            assert!(!CStr::from_ptr(hkg_last_error_message()).to_bytes().is_empty());
            assert_eq!(hkg_params_new(c(0.5), c(1.0), c(1.0), &mut p), HkgStatus::Ok);
            assert!(CStr::from_ptr(hkg_last_error_message()).to_bytes().is_empty());
            hkg_params_free(p);
        }
    }
}
