//! Closed-form Klein-Gordon levels of the generalized Hulthen potential.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_regime, csqrt, reduce_dimensionless, ComplexRegime, PotentialParams};
use crate::nu::{self, BranchPolicy, NuProblem};
use crate::polynomial::Poly2;

/// Relative tolerance of the unsquared quantization identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// A root counts as real when |Im E| is below this fraction of mc^2.
pub const REALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// All roots of the closed form, including squaring artifacts.
    PaperFidelity,
    /// Only roots satisfying the unsquared quantization identity.
    Validated,
}

/// Which sign of the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Root {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub e_plus: Complex64,
    pub e_minus: Complex64,
    pub valid_plus: bool,
    pub valid_minus: bool,
    pub mode: Mode,
}

impl EnergyLevel {
    pub fn root(&self, root: Root) -> Complex64 {
        match root {
            Root::Plus => self.e_plus,
            Root::Minus => self.e_minus,
        }
    }

    pub fn is_valid(&self, root: Root) -> bool {
        match root {
            Root::Plus => self.valid_plus,
            Root::Minus => self.valid_minus,
        }
    }

    /// Real parts of the roots that pass validation.
    pub fn valid_energies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if self.valid_plus {
            out.push(self.e_plus.re);
        }
        if self.valid_minus {
            out.push(self.e_minus.re);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validation {
    pub valid: bool,
    /// |beta^2 - kappa eps - rhs|
    pub residual: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
}

fn closed_form_roots(n: u32, params: &PotentialParams) -> Result<(Complex64, Complex64)> {
    params.require_q_nonzero()?;
    let scale2 = params.energy_scale() * params.energy_scale();
    let gamma2 = params.v0 * params.v0 / scale2;
    let q = params.q;
    let kappa = csqrt(q * q - 4.0 * gamma2) + q * (2.0 * n as f64 + 1.0);
    let shift = params.v0 / (2.0 * q);
    let denom = 4.0 * gamma2 + kappa * kappa;
    if denom.norm() == 0.0 {
        // kappa -> 0 with gamma -> 0: the kappa * root term vanishes
        return Ok((shift, shift));
    }
    let m2 = params.mass_energy * params.mass_energy;
    // V0^2/gamma^2 = (hbar c alpha)^2, which also covers V0 = 0
    let root = csqrt(m2 / denom - scale2 / (16.0 * q * q));
    Ok((shift + kappa * root, shift - kappa * root))
}

fn root_is_valid(e: Complex64, n: u32, params: &PotentialParams) -> bool {
    e.im.abs() <= REALITY_TOLERANCE * params.mass_energy && validate_level(e.re, n, params).valid
}

/// Both roots of the closed form for level n, with validity flags.
pub fn energy_candidates(n: u32, params: &PotentialParams) -> Result<EnergyLevel> {
    let (e_plus, e_minus) = closed_form_roots(n, params)?;
    Ok(EnergyLevel {
        n,
        e_plus,
        e_minus,
        valid_plus: root_is_valid(e_plus, n, params),
        valid_minus: root_is_valid(e_minus, n, params),
        mode: Mode::PaperFidelity,
    })
}

/// Checks beta^2 - kappa eps = (a+q)(2n+1)/2 + n^2 q with eps >= 0.
pub fn validate_level(e: f64, n: u32, params: &PotentialParams) -> Validation {
    let invalid = Validation {
        valid: false,
        residual: f64::INFINITY,
        lhs: Complex64::new(f64::NAN, 0.0),
        rhs: Complex64::new(f64::NAN, 0.0),
    };
    if !e.is_finite() {
        return invalid;
    }
    let Ok(d) = reduce_dimensionless(params, e) else {
        return invalid;
    };
    let lhs = d.beta2 - d.kappa(n) * d.eps;
    let rhs = d.quantization_rhs(n);
    let residual = (lhs - rhs).norm();
    let m = params.mass_energy;
    Validation {
        valid: e * e <= m * m * (1.0 + 1e-12) && residual < IDENTITY_TOLERANCE * rhs.norm().max(1.0),
        residual,
        lhs,
        rhs,
    }
}

/// Levels n = 0..=n_limit, capped by the finite-level bound when it applies.
pub fn spectrum(params: &PotentialParams, n_limit: u32, mode: Mode) -> Result<Vec<EnergyLevel>> {
    params.require_q_nonzero()?;
    let mut n_hi = Some(n_limit);
    if params.is_real() {
        let cond = bound_state_conditions(params, 0)?;
        if let Some(rhs) = cond.bound_rhs {
            if rhs < 0.0 {
                n_hi = None;
            }
        }
        if let (Some(cap), Some(hi)) = (cond.n_max, n_hi) {
            n_hi = Some(hi.min(cap));
        }
    }
    let Some(n_hi) = n_hi else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for n in 0..=n_hi {
        let mut level = energy_candidates(n, params)?;
        level.mode = mode;
        if mode == Mode::Validated && !(level.valid_plus || level.valid_minus) {
            continue;
        }
        out.push(level);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionsReport {
    pub n: u32,
    /// 4 gamma^2 <= q^2
    pub cond_ii: bool,
    /// V0^2 <= 16 q^2 gamma^2 (mc^2)^2 / (4 gamma^2 + kappa^2)
    pub cond_iii: bool,
    pub n_max: Option<u32>,
    pub at_least_one_level: bool,
    /// Right side of the level bound before flooring.
    pub bound_rhs: Option<f64>,
}

pub fn bound_state_conditions(params: &PotentialParams, n: u32) -> Result<ConditionsReport> {
    params.require_real("bound-state conditions")?;
    params.require_q_nonzero()?;
    let v0 = params.v0.re;
    let q = params.q.re;
    let scale = params.energy_scale().re;
    let m = params.mass_energy;
    let gamma2 = (v0 / scale).powi(2);
    let cond_ii = 4.0 * gamma2 <= q * q;

    let a = Complex64::new(q * q - 4.0 * gamma2, 0.0).sqrt();
    let kappa = a + q * (2.0 * n as f64 + 1.0);
    let denom = 4.0 * gamma2 + kappa * kappa;
    let limit = 16.0 * q * q * gamma2 * m * m / denom;
    let cond_iii = v0 * v0 <= limit.re && limit.im.abs() <= 1e-12 * limit.norm().max(1.0);

    let reach = 4.0 * q * q * m * m - v0 * v0;
    let bound_rhs = if cond_ii && reach >= 0.0 {
        Some(reach.sqrt() / (q.abs() * scale) - a.re / (2.0 * q) - 0.5)
    } else {
        None
    };
    let n_max = match bound_rhs {
        Some(r) if cond_ii && cond_iii && r >= 0.0 => Some(r.floor() as u32),
        _ => None,
    };
    let at_least_one_level = reach >= 0.0 && (q + a).norm() <= 2.0 * reach.sqrt() / scale;
    Ok(ConditionsReport {
        n,
        cond_ii,
        cond_iii,
        n_max,
        at_least_one_level,
        bound_rhs,
    })
}

/// The q = -1 closed form written with b = sqrt(1 - 4 gamma^2).
pub fn woods_saxon_spectrum(params: &PotentialParams, n: u32) -> Result<EnergyLevel> {
    if params.q != Complex64::new(-1.0, 0.0) {
        return Err(Error::domain(format!("woods-saxon form needs q = -1, got {}", params.q)));
    }
    let scale2 = params.energy_scale() * params.energy_scale();
    let gamma2 = params.v0 * params.v0 / scale2;
    let bracket = csqrt(1.0 - 4.0 * gamma2) - (2.0 * n as f64 + 1.0);
    let m2 = params.mass_energy * params.mass_energy;
    let coupling = if gamma2.norm() == 0.0 {
        scale2 / 16.0
    } else {
        params.v0 * params.v0 / (16.0 * gamma2)
    };
    let denom = 4.0 * gamma2 + bracket * bracket;
    let term = if denom.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        bracket * csqrt(m2 / denom - coupling)
    };
    let e_plus = -params.v0 / 2.0 + term;
    let e_minus = -params.v0 / 2.0 - term;
    Ok(EnergyLevel {
        n,
        e_plus,
        e_minus,
        valid_plus: root_is_valid(e_plus, n, params),
        valid_minus: root_is_valid(e_minus, n, params),
        mode: Mode::PaperFidelity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealityReport {
    pub regime: ComplexRegime,
    pub n: u32,
    /// The printed inequality.
    pub predicate: bool,
    /// Both closed-form roots have |Im E| below tolerance.
    pub complex_arithmetic_real: bool,
    pub discrepancy: bool,
    pub e_plus: Complex64,
    pub e_minus: Complex64,
    pub note: Option<String>,
}

pub fn reality_predicate(regime: ComplexRegime, params: &PotentialParams, n: u32) -> Result<RealityReport> {
    check_regime(regime, params)?;
    let m = params.mass_energy;
    let hc = params.units.hbar_c;
    let nn = 2.0 * n as f64 + 1.0;
    let (e_plus, e_minus) = closed_form_roots(n, params)?;
    let trivial = params.v0.norm() == 0.0;
    let mut note = None;
    let predicate = match regime {
        ComplexRegime::ImagV0Q => {
            let v0i = params.v0.im;
            let qi = params.q.im;
            let g2 = (v0i / (hc * params.alpha.re)).powi(2);
            let kappa = Complex64::new(qi * qi - 4.0 * g2, 0.0).sqrt() + qi * nn;
            let lhs = v0i * v0i * (4.0 * g2 + kappa * kappa);
            lhs.re <= 16.0 * qi * qi * g2 * m * m && lhs.im.abs() <= 1e-12 * lhs.norm().max(1.0)
        }
        ComplexRegime::ImagAlpha | ComplexRegime::AllImag => {
            let (v0, q) = if regime == ComplexRegime::ImagAlpha {
                (params.v0.re, params.q.re)
            } else {
                (params.v0.im, params.q.im)
            };
            let g2 = (v0 / (hc * params.alpha.im)).powi(2);
            let bracket = (q * q + 4.0 * g2).sqrt() + q * nn;
            if q > 0.0 && !trivial {
                note = Some("printed inequality cannot hold for positive q".into());
            }
            16.0 * q * q * g2 * m * m <= v0 * v0 * (4.0 * g2 - bracket * bracket)
        }
    };
    let tol = REALITY_TOLERANCE * m;
    let complex_arithmetic_real = trivial || (e_plus.im.abs() <= tol && e_minus.im.abs() <= tol);
    Ok(RealityReport {
        regime,
        n,
        predicate,
        complex_arithmetic_real,
        discrepancy: predicate != complex_arithmetic_real,
        e_plus,
        e_minus,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q0Diagnostic {
    pub energy: f64,
    pub gamma: Complex64,
    pub eps: Complex64,
    pub beta2: Complex64,
    /// k = beta^2 -/+ 2 i gamma eps
    pub k_pair: [Complex64; 2],
    /// tau(z) = (1 + 2 eps) - 2 i gamma z
    pub tau: Poly2,
    /// lambda = beta^2 - 2 i gamma eps - i gamma
    pub lambda: Complex64,
    pub i_gamma: Complex64,
    pub lambda_is_real: bool,
    pub applicable: bool,
    pub verdict: String,
    /// Outcome of the generic engine on the q = 0 problem.
    pub engine: String,
}

pub fn nu_applicability_diagnostic(params: &PotentialParams, energy: f64) -> Result<Q0Diagnostic> {
    if params.q.norm() != 0.0 {
        return Err(Error::domain("the exponential-case diagnostic needs q = 0"));
    }
    let d = reduce_dimensionless(params, energy)?;
    let i = Complex64::new(0.0, 1.0);
    let gamma = params.v0 / params.energy_scale();
    let i_gamma = i * gamma;
    let k_pair = [d.beta2 - 2.0 * i_gamma * d.eps, d.beta2 + 2.0 * i_gamma * d.eps];
    let tau = Poly2::linear(1.0 + 2.0 * d.eps, -2.0 * i_gamma);
    let lambda = d.beta2 - 2.0 * i_gamma * d.eps - i_gamma;
    let tol = 1e-12 * gamma.norm().max(1.0);
    let applicable = i_gamma.im.abs() <= tol;
    let lambda_is_real = lambda.im.abs() <= 1e-12 * lambda.norm().max(1.0);
    let verdict = if gamma.norm() == 0.0 {
        "not applicable: zero coupling".to_string()
    } else if applicable {
        "applicable under imaginary coupling: i*gamma is real".to_string()
    } else {
        "not applicable: lambda is real only if i*gamma is real (V0 or alpha imaginary)".to_string()
    };
    let engine = match nu::solve(&NuProblem::generalized_hulthen(&d), BranchPolicy::NegativeTau) {
        Ok(sol) => format!("branch found with tau' = {}", sol.chosen.tau_derivative),
        Err(e) => e.to_string(),
    };
    Ok(Q0Diagnostic {
        energy,
        gamma,
        eps: d.eps,
        beta2: d.beta2,
        k_pair,
        tau,
        lambda,
        i_gamma,
        lambda_is_real,
        applicable: applicable && gamma.norm() != 0.0,
        verdict,
        engine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UnitSystem;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn nat(v0: f64, q: f64, alpha: f64) -> PotentialParams {
        PotentialParams::natural(v0, q, alpha)
    }

    #[test]
    fn hulthen_ground_roots() {
        let lvl = energy_candidates(0, &nat(0.5, 1.0, 1.0)).unwrap();
        assert_relative_eq!(lvl.e_plus.re, 0.25 + 7f64.sqrt() / 4.0, epsilon = 1e-14);
        assert_relative_eq!(lvl.e_minus.re, 0.25 - 7f64.sqrt() / 4.0, epsilon = 1e-14);
        assert!(lvl.valid_plus && !lvl.valid_minus);
    }

    #[test]
    fn weak_coupling_limit() {
        let lvl = energy_candidates(0, &nat(1e-4, 1.0, 1.0)).unwrap();
        assert!((lvl.e_plus.re - 3f64.sqrt() / 2.0).abs() < 1e-4);
        let lvl = energy_candidates(0, &nat(0.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(lvl.e_plus.re, 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_relative_eq!(lvl.e_minus.re, -lvl.e_plus.re, epsilon = 1e-14);
    }

    #[test]
    fn woods_saxon_roots() {
        let p = nat(0.1, -1.0, 1.0);
        let lvl = energy_candidates(0, &p).unwrap();
        assert!((lvl.e_plus.re + 0.1504).abs() < 1e-4);
        assert!((lvl.e_minus.re - 0.0504).abs() < 1e-4);
        assert!(lvl.valid_plus && !lvl.valid_minus);
        let ws = woods_saxon_spectrum(&p, 0).unwrap();
        assert!((ws.e_plus - lvl.e_plus).norm() <= 1e-12 * lvl.e_plus.norm());
        assert!((ws.e_minus - lvl.e_minus).norm() <= 1e-12 * lvl.e_minus.norm());
    }

    #[test]
    fn woods_saxon_zero_coupling_symmetric() {
        for n in 0..3 {
            let ws = woods_saxon_spectrum(&nat(0.0, -1.0, 1.0), n).unwrap();
            assert_relative_eq!(ws.e_plus.re, -ws.e_minus.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn woods_saxon_needs_q_minus_one() {
        assert!(matches!(woods_saxon_spectrum(&nat(0.1, 1.0, 1.0), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn exponential_case_rejected() {
        assert_eq!(energy_candidates(0, &nat(0.1, 0.0, 1.0)), Err(Error::ExponentialCase));
        assert_eq!(spectrum(&nat(0.1, 0.0, 1.0), 3, Mode::Validated), Err(Error::ExponentialCase));
    }

    #[test]
    fn validate_examples() {
        let p = nat(0.5, 1.0, 1.0);
        let v = validate_level(0.25 + 7f64.sqrt() / 4.0, 0, &p);
        assert!(v.valid && v.residual < 1e-12);
        assert_relative_eq!(v.rhs.re, 0.5, epsilon = 1e-12);
        let v = validate_level(0.25 - 7f64.sqrt() / 4.0, 0, &p);
        assert!(!v.valid);
        assert!((v.lhs.re + 1.3228).abs() < 1e-4);
        let p = nat(0.1, -1.0, 1.0);
        let e = energy_candidates(0, &p).unwrap().e_plus.re;
        let v = validate_level(e, 0, &p);
        assert!(v.valid);
        assert!((v.rhs.re + 0.01011).abs() < 1e-5 && (v.lhs.re + 0.01011).abs() < 1e-5);
        assert!(!validate_level(1.5, 0, &p).valid);
        assert!(!validate_level(f64::NAN, 0, &p).valid);
    }

    #[test]
    fn spectrum_modes() {
        let p = nat(0.5, 1.0, 1.0);
        let paper = spectrum(&p, 10, Mode::PaperFidelity).unwrap();
        assert_eq!(paper.iter().map(|l| l.n).collect::<Vec<_>>(), vec![0, 1]);
        let valid = spectrum(&p, 10, Mode::Validated).unwrap();
        assert_eq!(valid.len(), 1);
        assert_eq!(valid[0].valid_energies().len(), 1);
        assert!((valid[0].valid_energies()[0] - 0.911438).abs() < 1e-6);
        assert!(spectrum(&nat(0.1, 1.0, 1.0), 10, Mode::Validated).unwrap().is_empty());
        assert_eq!(spectrum(&p, 0, Mode::PaperFidelity).unwrap().len(), 1);
    }

    #[test]
    fn conditions_examples() {
        let c = bound_state_conditions(&nat(0.5, 1.0, 1.0), 0).unwrap();
        assert!(c.cond_ii && c.cond_iii && c.at_least_one_level);
        assert_eq!(c.n_max, Some(1));
        assert!((c.bound_rhs.unwrap() - 1.4365).abs() < 1e-4);

        let units = UnitSystem::pion();
        let z = 23.0f64;
        let r = 1.2 * (2.5 * z).cbrt();
        let v0 = z * units.e_squared / r;
        let p = PotentialParams::new(v0, 0.10, units.pion_wavenumber(), units.pion_mass_energy, units).unwrap();
        let c = bound_state_conditions(&p, 0).unwrap();
        assert!(!c.cond_ii);
        assert_eq!(c.n_max, None);

        let c = bound_state_conditions(&nat(0.0, 0.5, 1.0), 0).unwrap();
        assert!(c.cond_iii);
        // q + |q| <= 4|q| m/(hbar c alpha)
        assert!(c.at_least_one_level);
        let c = bound_state_conditions(&nat(0.0, 0.5, 5.0), 0).unwrap();
        assert!(!c.at_least_one_level);
    }

    #[test]
    fn conditions_woods_saxon_two_states() {
        let c = bound_state_conditions(&nat(0.1, -1.0, 1.0), 0).unwrap();
        assert_eq!(c.n_max, Some(1));
    }

    #[test]
    fn conditions_need_real_params() {
        let p = PotentialParams::natural(Complex64::new(0.0, 0.1), Complex64::new(0.0, 1.0), 1.0);
        assert!(bound_state_conditions(&p, 0).is_err());
    }

    #[test]
    fn reality_imag_v0_q() {
        let p = PotentialParams::natural(Complex64::new(0.0, 0.1), Complex64::new(0.0, 1.0), 1.0);
        let r = reality_predicate(ComplexRegime::ImagV0Q, &p, 0).unwrap();
        assert!(r.predicate && r.complex_arithmetic_real && !r.discrepancy);
        for n in 0..4 {
            for &v in &[0.05, 0.3, 0.45, 0.6, 1.2] {
                let p = PotentialParams::natural(Complex64::new(0.0, v), Complex64::new(0.0, 1.0), 1.0);
                let r = reality_predicate(ComplexRegime::ImagV0Q, &p, n).unwrap();
                assert!(!r.discrepancy, "n={n} v={v}: {r:?}");
            }
        }
    }

    #[test]
    fn reality_imag_alpha_positive_q() {
        for n in 0..4 {
            let p = PotentialParams::natural(0.3, 1.0, Complex64::new(0.0, 1.0));
            let r = reality_predicate(ComplexRegime::ImagAlpha, &p, n).unwrap();
            assert!(!r.predicate);
            assert!(r.note.is_some());
            assert!(r.complex_arithmetic_real);
            assert!(r.discrepancy);
        }
    }

    #[test]
    fn reality_all_imag() {
        let i = Complex64::new(0.0, 1.0);
        let p = PotentialParams::natural(0.2 * i, 0.5 * i, i);
        let r = reality_predicate(ComplexRegime::AllImag, &p, 0).unwrap();
        assert!(!r.predicate);
        assert!(r.complex_arithmetic_real && r.discrepancy);
    }

    #[test]
    fn reality_zero_coupling() {
        let p = PotentialParams::natural(0.0, 1.0, Complex64::new(0.0, 1.0));
        let r = reality_predicate(ComplexRegime::ImagAlpha, &p, 2).unwrap();
        assert!(r.predicate && r.complex_arithmetic_real);
    }

    #[test]
    fn reality_regime_mismatch() {
        assert!(reality_predicate(ComplexRegime::ImagAlpha, &nat(0.3, 1.0, 1.0), 0).is_err());
    }

    #[test]
    fn q0_diagnostic_examples() {
        let d = nu_applicability_diagnostic(&nat(1.0, 0.0, 1.0), 0.5).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let want = d.beta2 - 2.0 * i * d.eps - i;
        assert!((d.lambda - want).norm() < 1e-15);
        assert!(!d.applicable && !d.lambda_is_real);
        assert!(d.engine.contains("no admissible branch"));
        assert_eq!(d.tau.c1, Complex64::new(0.0, -2.0));

        let d = nu_applicability_diagnostic(&PotentialParams::natural(i, 0.0, 1.0), 0.5).unwrap();
        assert!(d.applicable);
        assert_eq!(d.i_gamma, Complex64::new(-1.0, 0.0));
        let d = nu_applicability_diagnostic(&PotentialParams::natural(1.0, 0.0, i), 0.5).unwrap();
        assert!(d.applicable);
        assert!(nu_applicability_diagnostic(&nat(1.0, 0.5, 1.0), 0.5).is_err());
    }

    #[test]
    fn identity_matches_nu_lambda_closure() {
        // lambda = lambda_n exactly at validated energies
        for &(v0, q, alpha) in &[(0.5, 1.0, 1.0), (0.45, 1.0, 1.0), (0.1, -1.0, 1.0), (0.3, 0.5, 0.8)] {
            let p = nat(v0, q, alpha);
            for lvl in spectrum(&p, 3, Mode::Validated).unwrap() {
                for e in lvl.valid_energies() {
                    let d = reduce_dimensionless(&p, e).unwrap();
                    let prob = NuProblem::generalized_hulthen(&d);
                    let sol = nu::solve(&prob, BranchPolicy::BoundExponent).unwrap();
                    let ln = nu::lambda_n(lvl.n, &sol, &prob);
                    assert!((sol.lambda - ln).norm() < 1e-9, "{v0} {q} {alpha} n={}: {} vs {}", lvl.n, sol.lambda, ln);
                }
            }
        }
    }

    fn nonrelativistic(v0: f64, alpha: f64, n: u32) -> f64 {
        let bt = 2.0 * v0 / (alpha * alpha);
        let nn = n as f64 + 1.0;
        -(alpha * alpha / 8.0) * (bt / nn - nn).powi(2)
    }

    #[test]
    fn nonrelativistic_limit_converges() {
        for &(bt, n) in &[(2.0, 0u32), (5.0, 0), (5.0, 1), (10.0, 0), (10.0, 1), (10.0, 2)] {
            let mut prev = f64::INFINITY;
            for &alpha in &[0.05, 0.01, 0.002] {
                let v0 = bt * alpha * alpha / 2.0;
                let p = nat(v0, 1.0, alpha);
                let lvl = energy_candidates(n, &p).unwrap();
                assert!(lvl.valid_plus);
                let got = lvl.e_plus.re - 1.0;
                let want = nonrelativistic(v0, alpha, n);
                let rel = ((got - want) / want).abs();
                assert!(rel < prev);
                prev = rel;
            }
            assert!(prev < 0.01, "bt={bt} n={n}: {prev}");
        }
    }

    #[test]
    fn sign_of_levels_follows_q() {
        for i in 1..=20 {
            let alpha = 0.1 * i as f64;
            for lvl in spectrum(&nat(0.1, -1.0, alpha), 4, Mode::Validated).unwrap() {
                assert!(lvl.valid_energies().iter().all(|&e| e <= 0.0));
            }
            for lvl in spectrum(&nat(0.1, 1.0, alpha), 4, Mode::Validated).unwrap() {
                assert!(lvl.valid_energies().iter().all(|&e| e >= 0.0));
            }
        }
    }

    proptest! {
        #[test]
        fn vieta_sum(v0 in -0.6f64..0.6, q in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0], alpha in 0.2f64..2.0, n in 0u32..5) {
            let p = nat(v0, q, alpha);
            let lvl = energy_candidates(n, &p).unwrap();
            let sum = lvl.e_plus + lvl.e_minus;
            prop_assert!((sum - v0 / q).norm() <= 1e-12 * (v0 / q).abs().max(1.0));
        }

        #[test]
        fn roots_solve_squared_identity(v0 in 0.01f64..0.6, q in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0], alpha in 0.2f64..2.0, n in 0u32..4) {
            // (beta^2 - R)^2 = kappa^2 eps^2 is quadratic in E
            let p = nat(v0, q, alpha);
            let lvl = energy_candidates(n, &p).unwrap();
            for e in [lvl.e_plus, lvl.e_minus] {
                if e.im.abs() > 1e-12 { continue; }
                let d = reduce_dimensionless(&p, e.re).unwrap();
                let lhs = (d.beta2 - d.quantization_rhs(n)).powi(2);
                let rhs = d.kappa(n).powi(2) * d.eps_squared;
                prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0));
            }
        }

        #[test]
        fn woods_saxon_matches_general(v0 in -0.6f64..0.6, alpha in 0.1f64..3.0, n in 0u32..4) {
            let p = nat(v0, -1.0, alpha);
            let a = woods_saxon_spectrum(&p, n).unwrap();
            let b = energy_candidates(n, &p).unwrap();
            prop_assert!((a.e_plus - b.e_plus).norm() <= 1e-12 * b.e_plus.norm().max(1e-300));
            prop_assert!((a.e_minus - b.e_minus).norm() <= 1e-12 * b.e_minus.norm().max(1e-300));
        }

        #[test]
        fn valid_roots_below_threshold(v0 in -1.0f64..1.0, q in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0], alpha in 0.1f64..2.0) {
            let p = nat(v0, q, alpha);
            for lvl in spectrum(&p, 5, Mode::Validated).unwrap() {
                for e in lvl.valid_energies() {
                    prop_assert!(e.abs() <= 1.0 + 1e-12);
                    prop_assert!(validate_level(e, lvl.n, &p).residual < 1e-9);
                }
            }
        }
    }
}
