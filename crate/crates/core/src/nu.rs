//! Nikiforov-Uvarov reduction of
//!
//!   psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0
//!
//! to sigma y'' + tau y' + lambda y = 0 through psi = phi(z) y(z).
//!
//! The engine is generic in the polynomial triple but only factorizes sigma
//! of the form sigma1 z (1 - c z) (or sigma1 z when c = 0), which covers the
//! generalized Hulthen family and the exponential limit.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DimensionlessParams;
use crate::polynomial::{binomial, falling_factorial, linear_power, Poly, Poly2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Relative size of the discriminant accepted as a perfect square.
pub const PERFECT_SQUARE_TOLERANCE: f64 = 1e-10;
const EXPONENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuProblem {
    pub sigma: Poly2,
    pub tilde_tau: Poly2,
    pub tilde_sigma: Poly2,
}

impl NuProblem {
    pub fn new(sigma: Poly2, tilde_tau: Poly2, tilde_sigma: Poly2) -> Result<Self> {
        if tilde_tau.c2 != ZERO {
            return Err(Error::domain("tilde tau must have degree at most one"));
        }
        if sigma.is_zero() {
            return Err(Error::domain("sigma must not vanish identically"));
        }
        Ok(NuProblem {
            sigma,
            tilde_tau,
            tilde_sigma,
        })
    }

    /// sigma = z(1 - qz), tilde tau = 1 - qz and
    /// tilde sigma = (gamma^2 - q^2 eps^2 - q beta^2) z^2 + (beta^2 + 2 q eps^2) z - eps^2.
    pub fn generalized_hulthen(d: &DimensionlessParams) -> Self {
        let q = d.q;
        let e2 = d.eps * d.eps;
        NuProblem {
            sigma: Poly2::new(0.0, 1.0, -q),
            tilde_tau: Poly2::linear(1.0, -q),
            tilde_sigma: Poly2::new(-e2, d.beta2 + 2.0 * q * e2, d.gamma2 - q * q * e2 - q * d.beta2),
        }
    }

    /// (sigma' - tilde tau)/2
    fn half_difference(&self) -> Poly2 {
        (self.sigma.derivative() - self.tilde_tau).scale(Complex64::new(0.5, 0.0))
    }

    /// The expression under the square root defining pi(z), for a given k.
    pub fn radicand(&self, k: Complex64) -> Poly2 {
        let h = self.half_difference();
        let h_sq = Poly2::new(h.c0 * h.c0, 2.0 * h.c0 * h.c1, h.c1 * h.c1);
        h_sq - self.tilde_sigma + self.sigma.scale(k)
    }
}

/// Sign in front of the square root in pi(z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiCandidate {
    pub k: Complex64,
    pub sign: Sign,
    pub pi: Poly2,
    /// tau = tilde tau + 2 pi
    pub tau: Poly2,
    pub tau_derivative: Complex64,
}

impl PiCandidate {
    /// lambda = k + pi'
    pub fn lambda(&self) -> Complex64 {
        self.k + self.pi.c1
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Values of k that give the radicand a double zero, sorted by (Re k, Im k).
pub fn solve_k_candidates(problem: &NuProblem) -> Result<Vec<Complex64>> {
    // radicand = (A0 + k s2) z^2 + (B0 + k s1) z + (C0 + k s0); its
    // discriminant is quadratic in k.
    let base = problem.radicand(ZERO);
    let s = problem.sigma;
    let (a0, b0, c0) = (base.c2, base.c1, base.c0);
    let qa = s.c1 * s.c1 - 4.0 * s.c2 * s.c0;
    let qb = 2.0 * b0 * s.c1 - 4.0 * (a0 * s.c0 + c0 * s.c2);
    let qc = b0 * b0 - 4.0 * a0 * c0;
    let scale = qa.norm().max(qb.norm()).max(qc.norm()).max(f64::MIN_POSITIVE);
    let mut ks = if qa.norm() > 1e-14 * scale {
        let mut disc2 = qb * qb - 4.0 * qa * qc;
        // double root up to round-off
        if disc2.norm() <= 4.0 * f64::EPSILON * (qb * qb).norm().max((4.0 * qa * qc).norm()) {
            disc2 = ZERO;
        }
        let disc = disc2.sqrt();
        // cancellation-free pair
        let sign = if (qb.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
        let w = -(qb + sign * disc) / 2.0;
        if w.norm() == 0.0 {
            vec![ZERO, ZERO]
        } else {
            vec![w / qa, qc / w]
        }
    } else if qb.norm() > 1e-14 * scale {
        vec![-qc / qb]
    } else {
        return Err(Error::NoKSolution(
            "the discriminant of the radicand does not depend on k".into(),
        ));
    };
    ks.sort_by(cmp_complex);
    Ok(ks)
}

/// Both square-root branches of pi(z) for one k.
pub fn build_pi_candidates(problem: &NuProblem, k: Complex64) -> Result<Vec<PiCandidate>> {
    let rad = problem.radicand(k);
    let (a, b, c) = (rad.c2, rad.c1, rad.c0);
    let disc = b * b - 4.0 * a * c;
    // forward-error scale: magnitudes of the summands behind a, b and c
    let base = problem.radicand(ZERO);
    let s = problem.sigma;
    let am = base.c2.norm() + k.norm() * s.c2.norm();
    let bm = base.c1.norm() + k.norm() * s.c1.norm();
    let cm = base.c0.norm() + k.norm() * s.c0.norm();
    let scale = (bm * bm).max(4.0 * am * cm).max(1e-30);
    if disc.norm() > PERFECT_SQUARE_TOLERANCE * scale {
        return Err(Error::Internal(format!(
            "radicand is not a perfect square for k = {k} (relative discriminant {:.3e})",
            disc.norm() / scale
        )));
    }
    let mut root = if a.norm() >= c.norm() && a.norm() > 0.0 {
        let sa = a.sqrt();
        Poly2::linear(b / (2.0 * sa), sa)
    } else if c.norm() > 0.0 {
        let sc = c.sqrt();
        Poly2::linear(sc, b / (2.0 * sc))
    } else {
        Poly2::default()
    };
    // canonical orientation: negative real part on the first non-zero coefficient
    let lead = if root.c0.norm() > 0.0 { root.c0 } else { root.c1 };
    if lead.re > 0.0 || (lead.re == 0.0 && lead.im > 0.0) {
        root = -root;
    }
    let h = problem.half_difference();
    Ok([Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|sign| {
            let pi = match sign {
                Sign::Plus => h + root,
                Sign::Minus => h - root,
            };
            let tau = problem.tilde_tau + pi.scale(Complex64::new(2.0, 0.0));
            PiCandidate {
                k,
                sign,
                pi,
                tau,
                tau_derivative: tau.c1,
            }
        })
        .collect())
}

/// All candidates for all k.
pub fn enumerate_candidates(problem: &NuProblem) -> Result<Vec<PiCandidate>> {
    let mut out = Vec::with_capacity(4);
    for k in solve_k_candidates(problem)? {
        out.extend(build_pi_candidates(problem, k)?);
    }
    Ok(out)
}

/// A function of the form z^p (1 - c z)^r, or z^p e^{s z} when sigma is linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ProductForm {
    PowerPair { p: Complex64, r: Complex64, c: Complex64 },
    PowerExp { p: Complex64, s: Complex64 },
}

impl ProductForm {
    /// Partial fractions of `numer/sigma` for a linear numerator, integrated.
    fn from_log_derivative(numer: Poly2, sigma: &Poly2) -> Result<Self> {
        if sigma.c0 != ZERO || sigma.c1 == ZERO {
            return Err(Error::Unsupported(
                "sigma must have a simple root at z = 0 (sigma = s1 z + s2 z^2, s1 != 0)".into(),
            ));
        }
        let p = numer.c0 / sigma.c1;
        if sigma.c2 == ZERO {
            return Ok(ProductForm::PowerExp { p, s: numer.c1 / sigma.c1 });
        }
        let c = -sigma.c2 / sigma.c1;
        let r = -numer.c1 / (c * sigma.c1) - p;
        Ok(ProductForm::PowerPair { p, r, c })
    }

    pub fn z_power(&self) -> Complex64 {
        match *self {
            ProductForm::PowerPair { p, .. } | ProductForm::PowerExp { p, .. } => p,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            ProductForm::PowerPair { p, r, c } => z.powc(p) * (1.0 - c * z).powc(r),
            ProductForm::PowerExp { p, s } => z.powc(p) * (s * z).exp(),
        }
    }

    /// (f'/f, (f'/f)')
    pub fn log_derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        match *self {
            ProductForm::PowerPair { p, r, c } => {
                let w = 1.0 - c * z;
                (p / z - r * c / w, -p / (z * z) - r * c * c / (w * w))
            }
            ProductForm::PowerExp { p, s } => (p / z + s, -p / (z * z)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    /// Only candidates with Re tau' < 0 are admissible; ties go to the
    /// bound-state exponent pattern, then to the most negative tau'.
    NegativeTau,
    /// Candidates with a non-negative exponent at z = 0 are admissible; the
    /// most negative tau' wins even if it is not negative.
    BoundExponent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuSolution {
    pub chosen: PiCandidate,
    /// The remaining candidates, in the deterministic order used for selection.
    pub alternatives: Vec<PiCandidate>,
    pub lambda: Complex64,
    /// phi(z) from phi'/phi = pi/sigma.
    pub phi: ProductForm,
    /// rho(z) from (sigma rho)' = tau rho.
    pub weight: ProductForm,
    pub policy: BranchPolicy,
    /// More than one candidate was admissible.
    pub tie_broken: bool,
    pub negative_tau: bool,
}

fn bound_exponent(problem: &NuProblem, cand: &PiCandidate) -> bool {
    problem.sigma.c1 != ZERO && (cand.pi.c0 / problem.sigma.c1).re >= -EXPONENT_TOLERANCE
}

pub fn select_branch(problem: &NuProblem, candidates: &[PiCandidate]) -> Result<NuSolution> {
    select_branch_with(problem, candidates, BranchPolicy::NegativeTau)
}

pub fn select_branch_with(
    problem: &NuProblem,
    candidates: &[PiCandidate],
    policy: BranchPolicy,
) -> Result<NuSolution> {
    if candidates.is_empty() {
        return Err(Error::domain("empty candidate list"));
    }
    let mut ordered = candidates.to_vec();
    ordered.sort_by(|a, b| {
        a.tau_derivative
            .re
            .total_cmp(&b.tau_derivative.re)
            .then(cmp_complex(&a.k, &b.k))
            .then(a.sign.cmp(&b.sign))
    });
    let negative = |c: &PiCandidate| c.tau_derivative.re < 0.0;

    let admissible: Vec<usize> = match policy {
        BranchPolicy::NegativeTau => (0..ordered.len()).filter(|&i| negative(&ordered[i])).collect(),
        BranchPolicy::BoundExponent => (0..ordered.len())
            .filter(|&i| bound_exponent(problem, &ordered[i]))
            .collect(),
    };
    if admissible.is_empty() {
        let taus: Vec<String> = ordered.iter().map(|c| format!("{}", c.tau_derivative)).collect();
        let mut diagnostic = format!("tau' on every branch: [{}]", taus.join(", "));
        if ordered.iter().all(|c| c.tau_derivative.re.abs() < 1e-14) {
            diagnostic.push_str("; tau' is purely imaginary, so lambda is real only if i*gamma is real");
        }
        return Err(Error::NoBoundBranch { diagnostic });
    }
    let pick = match policy {
        BranchPolicy::NegativeTau => admissible
            .iter()
            .copied()
            .find(|&i| bound_exponent(problem, &ordered[i]))
            .unwrap_or(admissible[0]),
        BranchPolicy::BoundExponent => admissible[0],
    };
    let chosen = ordered.remove(pick);
    let phi = ProductForm::from_log_derivative(chosen.pi, &problem.sigma)?;
    let weight = ProductForm::from_log_derivative(chosen.tau - problem.sigma.derivative(), &problem.sigma)?;
    Ok(NuSolution {
        lambda: chosen.lambda(),
        chosen,
        alternatives: ordered,
        phi,
        weight,
        policy,
        tie_broken: admissible.len() > 1,
        negative_tau: negative(&chosen),
    })
}

/// Enumerate all candidates and select with the given policy.
pub fn solve(problem: &NuProblem, policy: BranchPolicy) -> Result<NuSolution> {
    let candidates = enumerate_candidates(problem)?;
    select_branch_with(problem, &candidates, policy)
}

/// lambda_n = -n tau' - n(n-1) sigma''/2
pub fn lambda_n(n: u32, solution: &NuSolution, problem: &NuProblem) -> Complex64 {
    let nf = n as f64;
    -nf * solution.chosen.tau_derivative - nf * (nf - 1.0) / 2.0 * problem.sigma.second_derivative()
}

pub fn weight_function(solution: &NuSolution, problem: &NuProblem) -> Result<ProductForm> {
    if problem.sigma.c2 != ZERO {
        let disc = problem.sigma.c1 * problem.sigma.c1 - 4.0 * problem.sigma.c2 * problem.sigma.c0;
        if disc.norm() == 0.0 {
            return Err(Error::Unsupported("sigma has a repeated root".into()));
        }
    }
    ProductForm::from_log_derivative(solution.chosen.tau - problem.sigma.derivative(), &problem.sigma)
}

/// y_n = rho^{-1} d^n/dz^n [sigma^n rho], expanded with the Leibniz rule.
pub fn rodrigues_polynomial(n: u32, solution: &NuSolution, problem: &NuProblem) -> Result<Poly> {
    let n = n as usize;
    let weight = weight_function(solution, problem)?;
    let lead = problem.sigma.c1.powu(n as u32);
    let mut coeffs = vec![ZERO; n + 1];
    let nc = Complex64::new(n as f64, 0.0);
    match weight {
        ProductForm::PowerPair { p, r, c } => {
            for k in 0..=n {
                let w = binomial(n, k)
                    * falling_factorial(nc + p, k)
                    * falling_factorial(nc + r, n - k)
                    * (-c).powu((n - k) as u32);
                // z^{n-k} (1 - c z)^k
                for (j, t) in linear_power(Complex64::new(1.0, 0.0), -c, k).into_iter().enumerate() {
                    coeffs[n - k + j] += w * t;
                }
            }
        }
        ProductForm::PowerExp { p, s } => {
            for k in 0..=n {
                coeffs[n - k] += binomial(n, k) * falling_factorial(nc + p, k) * s.powu((n - k) as u32);
            }
        }
    }
    Ok(Poly::new(coeffs.into_iter().map(|c| c * lead).collect()))
}
