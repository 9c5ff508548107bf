//! Physical parameters, unit conventions and the generalized Hulthen potential
//!
//! V_q(x) = -V0 e^{-alpha x} / (1 - q e^{-alpha x})
//!
//! Every parameter is stored as a full complex scalar; the real/imaginary
//! splits used for the complex regimes are views computed on demand.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominator magnitude below which `1 - q e^{-alpha x}` is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;
/// Tolerance for recognising q = 0, +1, -1.
pub const SPECIAL_CASE_TOLERANCE: f64 = 1e-12;
/// Default tolerance of the PT and Hermiticity tests.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// Energies in mc^2, inverse lengths in mc/hbar.
    Natural,
    /// Energies in MeV, lengths in fm.
    Pion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// hbar c, MeV fm in pion mode.
    pub hbar_c: f64,
    /// m_pi c^2, MeV in pion mode; fixed to 1 in natural mode.
    pub pion_mass_energy: f64,
    /// e^2 = e^2/(4 pi eps0), MeV fm in pion mode.
    pub e_squared: f64,
}

impl UnitSystem {
    pub fn natural() -> Self {
        UnitSystem {
            mode: UnitMode::Natural,
            hbar_c: 1.0,
            pion_mass_energy: 1.0,
            e_squared: FINE_STRUCTURE,
        }
    }

    pub fn pion() -> Self {
        UnitSystem {
            mode: UnitMode::Pion,
            hbar_c: 197.327,
            pion_mass_energy: 139.57,
            e_squared: 1.44,
        }
    }

    pub fn with_constants(mut self, hbar_c: f64, pion_mass_energy: f64, e_squared: f64) -> Result<Self> {
        self.hbar_c = hbar_c;
        self.pion_mass_energy = pion_mass_energy;
        self.e_squared = e_squared;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.hbar_c) && ok(self.pion_mass_energy) && ok(self.e_squared)) {
            return Err(Error::domain("unit constants must be finite and strictly positive"));
        }
        if self.mode == UnitMode::Natural && (self.hbar_c != 1.0 || self.pion_mass_energy != 1.0) {
            return Err(Error::domain("natural units fix hbar c = m c^2 = 1"));
        }
        Ok(())
    }

    /// Compton wavenumber m_pi c / hbar of the pion (1 in natural units).
    pub fn pion_wavenumber(&self) -> f64 {
        self.pion_mass_energy / self.hbar_c
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub v0: Complex64,
    pub q: Complex64,
    pub alpha: Complex64,
    pub mass_energy: f64,
    pub units: UnitSystem,
}

impl PotentialParams {
    pub fn new(
        v0: impl Into<Complex64>,
        q: impl Into<Complex64>,
        alpha: impl Into<Complex64>,
        mass_energy: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        units.validate()?;
        if !(mass_energy.is_finite() && mass_energy > 0.0) {
            return Err(Error::domain("mass energy must be strictly positive"));
        }
        if units.mode == UnitMode::Natural && mass_energy != 1.0 {
            return Err(Error::domain("natural units fix m c^2 = 1"));
        }
        let (v0, q, alpha) = (v0.into(), q.into(), alpha.into());
        if !(v0.is_finite() && q.is_finite() && alpha.is_finite()) {
            return Err(Error::domain("V0, q and alpha must be finite"));
        }
        Ok(PotentialParams {
            v0,
            q,
            alpha,
            mass_energy,
            units,
        })
    }

    /// Natural units, m c^2 = 1.
    pub fn natural(v0: impl Into<Complex64>, q: impl Into<Complex64>, alpha: impl Into<Complex64>) -> Self {
        PotentialParams {
            v0: v0.into(),
            q: q.into(),
            alpha: alpha.into(),
            mass_energy: 1.0,
            units: UnitSystem::natural(),
        }
    }

    /// hbar c alpha: the energy scale of the dimensionless reduction.
    pub fn energy_scale(&self) -> Complex64 {
        self.alpha * self.units.hbar_c
    }

    pub fn is_real(&self) -> bool {
        self.v0.im == 0.0 && self.q.im == 0.0 && self.alpha.im == 0.0
    }

    pub(crate) fn require_q_nonzero(&self) -> Result<()> {
        if self.q.norm() < SPECIAL_CASE_TOLERANCE {
            Err(Error::ExponentialCase)
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_real(&self, what: &str) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} requires real V0, q and alpha")))
        }
    }

    /// x where 1 - q e^{-alpha x} = 0, i.e. ln(q)/alpha.
    pub fn pole_location(&self) -> Complex64 {
        self.q.ln() / self.alpha
    }
}

/// The reduced quantities of the dimensionless KG equation at energy E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessParams {
    pub energy: f64,
    /// Principal square root of `eps_squared`.
    pub eps: Complex64,
    pub eps_squared: Complex64,
    /// E^2 <= m^2c^4 and eps real non-negative.
    pub bound: bool,
    pub beta2: Complex64,
    pub gamma2: Complex64,
    /// sqrt(q^2 - 4 gamma^2), principal branch.
    pub a: Complex64,
    /// sqrt(1 - 4 gamma^2), the q = 1 Jacobi index.
    pub b: Complex64,
    pub q: Complex64,
}

impl DimensionlessParams {
    pub fn kappa(&self, n: u32) -> Complex64 {
        self.a + self.q * (2.0 * n as f64 + 1.0)
    }

    /// Right-hand side of the unsquared quantization relation
    /// beta^2 - kappa eps = (a + q)(2n + 1)/2 + n^2 q.
    pub fn quantization_rhs(&self, n: u32) -> Complex64 {
        let nf = n as f64;
        (self.a + self.q) * (2.0 * nf + 1.0) / 2.0 + self.q * nf * nf
    }
}

/// Principal square root with a signed-zero imaginary part read as +0.
pub fn csqrt(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0).sqrt()
}

pub fn reduce_dimensionless(params: &PotentialParams, energy: f64) -> Result<DimensionlessParams> {
    if params.alpha.norm() == 0.0 || !params.alpha.norm().is_finite() {
        return Err(Error::domain("alpha must be non-zero"));
    }
    let scale2 = params.energy_scale() * params.energy_scale();
    let m2 = params.mass_energy * params.mass_energy;
    let eps_squared = -(energy * energy - m2) / scale2;
    let eps = csqrt(eps_squared);
    let gamma2 = params.v0 * params.v0 / scale2;
    let beta2 = 2.0 * params.v0 * energy / scale2;
    let q = params.q;
    let a = csqrt(q * q - 4.0 * gamma2);
    let b = csqrt(Complex64::new(1.0, 0.0) - 4.0 * gamma2);
    let real_eps = eps_squared.im.abs() <= 1e-14 * eps_squared.norm().max(1.0) && eps_squared.re >= 0.0;
    Ok(DimensionlessParams {
        energy,
        eps,
        eps_squared,
        bound: energy * energy <= m2 && real_eps,
        beta2,
        gamma2,
        a,
        b,
        q,
    })
}

/// Inverse of the eps reduction for real alpha: E = sign sqrt(m^2 - (hbar c alpha eps)^2).
pub fn energy_from_eps(params: &PotentialParams, eps: f64, positive: bool) -> f64 {
    let scale = params.energy_scale().re;
    let e = (params.mass_energy * params.mass_energy - scale * scale * eps * eps).sqrt();
    if positive {
        e
    } else {
        -e
    }
}

pub fn eval_potential(params: &PotentialParams, x: f64) -> Result<Complex64> {
    eval_potential_with_tolerance(params, x, POLE_TOLERANCE)
}

pub fn eval_potential_with_tolerance(params: &PotentialParams, x: f64, pole_tol: f64) -> Result<Complex64> {
    let z = (-params.alpha * x).exp();
    let denom = 1.0 - params.q * z;
    if denom.norm() < pole_tol {
        return Err(Error::Pole {
            location: params.pole_location(),
        });
    }
    Ok(-params.v0 * z / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    Exponential,
    StandardHulthen,
    WoodsSaxon,
    Generic,
}

pub fn classify_special_case(q: Complex64) -> SpecialCase {
    let near = |target: f64| {
        (q.re - target).abs() < SPECIAL_CASE_TOLERANCE && q.im.abs() < SPECIAL_CASE_TOLERANCE
    };
    if near(0.0) {
        SpecialCase::Exponential
    } else if near(1.0) {
        SpecialCase::StandardHulthen
    } else if near(-1.0) {
        SpecialCase::WoodsSaxon
    } else {
        SpecialCase::Generic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub is_pt_symmetric: bool,
    pub is_hermitian: bool,
    /// max |V*(-x) - V(x)| over the grid.
    pub max_violation: f64,
    /// max |Im V(x)| over the grid.
    pub max_imaginary: f64,
}

pub fn pt_symmetry_test(params: &PotentialParams, grid: &[f64]) -> Result<SymmetryReport> {
    pt_symmetry_test_with_tolerance(params, grid, SYMMETRY_TOLERANCE)
}

pub fn pt_symmetry_test_with_tolerance(
    params: &PotentialParams,
    grid: &[f64],
    tol: f64,
) -> Result<SymmetryReport> {
    if grid.is_empty() {
        return Err(Error::domain("symmetry test needs a non-empty grid"));
    }
    let mut sorted: Vec<f64> = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    for i in 0..n {
        if (sorted[i] + sorted[n - 1 - i]).abs() > 1e-12 * sorted[i].abs().max(1.0) {
            return Err(Error::domain("symmetry grid must be symmetric about x = 0"));
        }
    }
    let mut max_violation = 0.0_f64;
    let mut max_imaginary = 0.0_f64;
    for &x in grid {
        let v = eval_potential(params, x)?;
        let mirrored = eval_potential(params, -x)?.conj();
        max_violation = max_violation.max((mirrored - v).norm());
        max_imaginary = max_imaginary.max(v.im.abs());
    }
    Ok(SymmetryReport {
        is_pt_symmetric: max_violation < tol,
        is_hermitian: max_imaginary < tol,
        max_violation,
        max_imaginary,
    })
}

/// Symmetric grid +-{step, 2 step, ..., extent}.
pub fn symmetric_grid(step: f64, extent: f64) -> Vec<f64> {
    let count = (extent / step).round() as usize;
    let mut grid = Vec::with_capacity(2 * count);
    for i in 1..=count {
        let x = step * i as f64;
        grid.push(-x);
        grid.push(x);
    }
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearOriginExpansion {
    /// V0/(q - 1)
    pub shift: Complex64,
    /// V0 alpha/(q - 1)^2
    pub slope: Complex64,
}

pub fn near_origin_expansion(params: &PotentialParams) -> Result<NearOriginExpansion> {
    let d = params.q - 1.0;
    if d.norm() < SPECIAL_CASE_TOLERANCE {
        return Err(Error::domain("near-origin expansion is undefined at q = 1 (pole at x = 0)"));
    }
    Ok(NearOriginExpansion {
        shift: params.v0 / d,
        slope: params.v0 * params.alpha / (d * d),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexRegime {
    /// Re V0 = 0, Re q = 0, alpha real.
    ImagV0Q,
    /// Re alpha = 0, V0 and q real; PT-symmetric but non-Hermitian.
    ImagAlpha,
    /// V0, q and alpha all purely imaginary.
    AllImag,
}

fn is_zero(v: f64) -> bool {
    v.abs() < SPECIAL_CASE_TOLERANCE
}

pub(crate) fn check_regime(regime: ComplexRegime, params: &PotentialParams) -> Result<()> {
    let (v0, q, alpha) = (params.v0, params.q, params.alpha);
    let ok = match regime {
        ComplexRegime::ImagV0Q => is_zero(v0.re) && is_zero(q.re) && is_zero(alpha.im),
        ComplexRegime::ImagAlpha => is_zero(alpha.re) && is_zero(v0.im) && is_zero(q.im),
        ComplexRegime::AllImag => is_zero(v0.re) && is_zero(q.re) && is_zero(alpha.re),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "parameters V0={v0}, q={q}, alpha={alpha} do not match the {regime:?} regime"
        )))
    }
}

/// Printed closed forms of the potential in the three complex regimes.
pub fn closed_form_complex(regime: ComplexRegime, params: &PotentialParams, x: f64) -> Result<Complex64> {
    check_regime(regime, params)?;
    let (num, den, scale) = match regime {
        ComplexRegime::ImagV0Q => {
            let t = params.alpha.re * x;
            let q_i = params.q.im;
            // 2 cosh^2 t - sinh 2t - 1 = e^{-2t} and cosh t - sinh t = e^{-t}; the
            // hyperbolic forms cancel catastrophically for large |t|
            let shape = (-2.0 * t).exp();
            let num = Complex64::new(q_i * shape, -(-t).exp());
            (num, 1.0 + q_i * q_i * shape, params.v0.im)
        }
        ComplexRegime::ImagAlpha => {
            let t = params.alpha.im * x;
            let q = params.q.re;
            let num = Complex64::new(q - t.cos(), t.sin());
            (num, q * q - 2.0 * q * t.cos() + 1.0, params.v0.re)
        }
        ComplexRegime::AllImag => {
            let t = params.alpha.im * x;
            let q_i = params.q.im;
            let num = Complex64::new(q_i - t.sin(), -t.cos());
            (num, q_i * q_i - 2.0 * q_i * t.sin() + 1.0, params.v0.im)
        }
    };
    if den.abs() < POLE_TOLERANCE {
        return Err(Error::Pole {
            location: params.pole_location(),
        });
    }
    Ok(num * scale / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduction_hulthen_example() {
        let p = PotentialParams::natural(0.5, 1.0, 1.0);
        let d = reduce_dimensionless(&p, 0.9114).unwrap();
        assert_relative_eq!(d.beta2.re, 0.9114, epsilon = 1e-12);
        assert_relative_eq!(d.gamma2.re, 0.25, epsilon = 1e-12);
        assert_relative_eq!(d.eps.re, (1.0f64 - 0.9114 * 0.9114).sqrt(), epsilon = 1e-12);
        assert!((d.eps.re - 0.4114).abs() < 2e-4);
        assert!(d.bound);
    }

    #[test]
    fn reduction_zero_coupling_at_threshold() {
        let p = PotentialParams::natural(0.0, 0.3, 1.0);
        let d = reduce_dimensionless(&p, 1.0).unwrap();
        assert_eq!(d.beta2, c(0.0, 0.0));
        assert_eq!(d.gamma2, c(0.0, 0.0));
        assert_eq!(d.eps, c(0.0, 0.0));
    }

    #[test]
    fn reduction_pion_units() {
        let units = UnitSystem::pion();
        let alpha = units.pion_wavenumber();
        let p = PotentialParams::new(6.943, 0.1, alpha, units.pion_mass_energy, units).unwrap();
        let d = reduce_dimensionless(&p, units.pion_mass_energy).unwrap();
        // hbar c alpha = m_pi c^2
        assert_relative_eq!(d.gamma2.re.sqrt(), 6.943 / 139.57, epsilon = 1e-12);
        assert!((d.gamma2.re.sqrt() - 0.04975).abs() < 5e-5);
        assert_eq!(d.eps.re, 0.0);
    }

    #[test]
    fn reduction_rejects_zero_alpha_and_flags_unbound() {
        let p = PotentialParams::natural(0.5, 1.0, 0.0);
        assert!(matches!(reduce_dimensionless(&p, 0.5), Err(Error::Domain(_))));
        let p = PotentialParams::natural(0.5, 1.0, 1.0);
        assert!(!reduce_dimensionless(&p, 1.2).unwrap().bound);
    }

    #[test]
    fn potential_values() {
        let p = PotentialParams::natural(1.0, -1.0, 1.0);
        assert_relative_eq!(eval_potential(&p, 0.0).unwrap().re, -0.5);
        let p = PotentialParams::natural(1.0, 2.0, 1.0);
        assert!(eval_potential(&p, 800.0).unwrap().norm() < 1e-300);
        let p = PotentialParams::natural(1.0, 2.0, c(0.0, 1.0));
        let v = eval_potential(&p, PI).unwrap();
        assert_relative_eq!(v.re, 1.0 / 3.0, epsilon = 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn potential_pole_reports_location() {
        let p = PotentialParams::natural(1.0, 1.0, 1.0);
        match eval_potential(&p, 0.0) {
            Err(Error::Pole { location }) => assert_eq!(location, c(0.0, 0.0)),
            other => panic!("expected pole, got {other:?}"),
        }
        let p = PotentialParams::natural(1.0, 2.0, 1.0);
        let x = 2f64.ln();
        assert!(matches!(eval_potential_with_tolerance(&p, x, 1e-9), Err(Error::Pole { .. })));
    }

    #[test]
    fn special_cases() {
        assert_eq!(classify_special_case(c(1.0, 0.0)), SpecialCase::StandardHulthen);
        assert_eq!(classify_special_case(c(-1.0, 0.0)), SpecialCase::WoodsSaxon);
        assert_eq!(classify_special_case(c(0.0, 0.0)), SpecialCase::Exponential);
        assert_eq!(classify_special_case(c(0.25, 0.0)), SpecialCase::Generic);
        assert_eq!(classify_special_case(c(1.0, 1e-6)), SpecialCase::Generic);
    }

    #[test]
    fn pt_classification() {
        let grid = symmetric_grid(0.1, 3.0);
        let r = pt_symmetry_test(&PotentialParams::natural(1.0, 2.0, c(0.0, 1.0)), &grid).unwrap();
        assert!(r.is_pt_symmetric && !r.is_hermitian);

        let r = pt_symmetry_test(&PotentialParams::natural(c(0.0, 1.0), c(0.0, 1.0), c(0.0, 1.0)), &grid)
            .unwrap();
        assert!(!r.is_pt_symmetric && !r.is_hermitian);

        let r = pt_symmetry_test(&PotentialParams::natural(1.0, -1.0, 1.0), &grid).unwrap();
        assert!(r.is_hermitian && !r.is_pt_symmetric);
    }

    #[test]
    fn pt_test_rejects_asymmetric_grid() {
        let p = PotentialParams::natural(1.0, -1.0, 1.0);
        assert!(pt_symmetry_test(&p, &[0.1, 0.2, -0.1]).is_err());
    }

    #[test]
    fn near_origin_values() {
        let e = near_origin_expansion(&PotentialParams::natural(1.0, -1.0, 1.0)).unwrap();
        assert_relative_eq!(e.shift.re, -0.5);
        assert_relative_eq!(e.slope.re, 0.25);
        let e = near_origin_expansion(&PotentialParams::natural(0.0, 0.3, 2.0)).unwrap();
        assert_eq!((e.shift, e.slope), (c(0.0, 0.0), c(0.0, 0.0)));
        let e = near_origin_expansion(&PotentialParams::natural(1.0, 2.0, 3.0)).unwrap();
        assert_relative_eq!(e.shift.re, 1.0);
        assert_relative_eq!(e.slope.re, 3.0);
        assert!(near_origin_expansion(&PotentialParams::natural(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn near_origin_matches_potential_slope() {
        let p = PotentialParams::natural(0.7, -0.4, 1.3);
        let e = near_origin_expansion(&p).unwrap();
        let h = 1e-5;
        let v0 = eval_potential(&p, 0.0).unwrap();
        let dv = (eval_potential(&p, h).unwrap() - eval_potential(&p, -h).unwrap()) / (2.0 * h);
        assert_relative_eq!(v0.re, e.shift.re, epsilon = 1e-14);
        assert_relative_eq!(dv.re, e.slope.re, epsilon = 1e-8);
    }

    #[test]
    fn closed_forms_examples() {
        let p = PotentialParams::natural(1.0, 2.0, c(0.0, 1.0));
        let v = closed_form_complex(ComplexRegime::ImagAlpha, &p, 0.0).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        let v = closed_form_complex(ComplexRegime::ImagAlpha, &p, PI / 2.0).unwrap();
        assert_relative_eq!(v.re, 0.4, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.2, epsilon = 1e-15);

        let p = PotentialParams::natural(c(0.0, 1.0), c(0.0, 2.0), c(0.0, 1.0));
        let v = closed_form_complex(ComplexRegime::AllImag, &p, 0.0).unwrap();
        assert_relative_eq!(v.re, 0.4, epsilon = 1e-15);
        assert_relative_eq!(v.im, -0.2, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_regime_mismatch() {
        let p = PotentialParams::natural(1.0, 2.0, 1.0);
        assert!(matches!(
            closed_form_complex(ComplexRegime::ImagAlpha, &p, 0.3),
            Err(Error::Domain(_))
        ));
        assert!(closed_form_complex(ComplexRegime::AllImag, &p, 0.3).is_err());
        assert!(closed_form_complex(ComplexRegime::ImagV0Q, &p, 0.3).is_err());
    }

    #[test]
    fn unit_validation() {
        assert!(UnitSystem::pion().with_constants(197.327, -1.0, 1.44).is_err());
        assert!(PotentialParams::new(0.1, 1.0, 1.0, 2.0, UnitSystem::natural()).is_err());
        assert!(PotentialParams::new(0.1, 1.0, 1.0, 0.0, UnitSystem::pion()).is_err());
    }

    #[test]
    fn non_finite_parameters_rejected() {
        let u = UnitSystem::natural();
        assert!(PotentialParams::new(f64::NAN, 1.0, 1.0, 1.0, u).is_err());
        assert!(PotentialParams::new(0.5, Complex64::new(1.0, f64::INFINITY), 1.0, 1.0, u).is_err());
        assert!(PotentialParams::new(0.5, 1.0, 1.0, 1.0, u).is_ok());
    }
}
