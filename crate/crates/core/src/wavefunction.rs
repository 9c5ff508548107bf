//! s-wave eigenfunctions psi = phi(z) y_n(z), z = exp(-alpha x).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reduce_dimensionless, PotentialParams};
use crate::nu::{self, BranchPolicy, NuProblem, ProductForm};
use crate::polynomial::{binomial, falling_factorial, jacobi_p, Poly};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::spectrum::{EnergyLevel, Root, REALITY_TOLERANCE};

/// Default extent of the q < 0 domain in units of 1/alpha.
pub const DEFAULT_CUT_RANGE: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionSpec {
    pub n: u32,
    pub energy: f64,
    /// Power of z at the origin.
    pub eps: Complex64,
    /// Power of (1 - qz) in phi: (a+q)/2q.
    pub edge_exponent: Complex64,
    /// Power of (1 - qz) in front of the n-th derivative: (q-a)/2q.
    pub assembled_edge_exponent: Complex64,
    pub poly: Poly,
    pub q: Complex64,
    pub a: Complex64,
    pub alpha: f64,
    pub z_edge: f64,
    pub norm_constant: Option<f64>,
    pub forced: bool,
}

impl WavefunctionSpec {
    /// psi = z^eps (1 - qz)^edge_exponent poly(z), with the assembled form
    /// derived from the same exponents.
    pub fn from_parts(eps: Complex64, edge_exponent: Complex64, poly: Poly, q: Complex64, alpha: f64) -> Result<Self> {
        if q.norm() == 0.0 {
            return Err(Error::ExponentialCase);
        }
        if q.im != 0.0 || !(alpha > 0.0) {
            return Err(Error::Unsupported("eigenfunctions need real q and positive alpha".into()));
        }
        let a = q * (2.0 * edge_exponent - 1.0);
        let n = poly.degree().unwrap_or(0) as u32;
        Ok(WavefunctionSpec {
            n,
            energy: f64::NAN,
            eps,
            edge_exponent,
            assembled_edge_exponent: (q - a) / (2.0 * q),
            poly,
            q,
            a,
            alpha,
            z_edge: default_z_edge(q.re),
            norm_constant: None,
            forced: false,
        })
    }

    pub fn with_z_cut(mut self, z_cut: f64) -> Result<Self> {
        if self.q.re > 0.0 {
            return Err(Error::domain("the domain edge is fixed at 1/q for q > 0"));
        }
        if !(z_cut > 1.0) || !z_cut.is_finite() {
            return Err(Error::domain("z cutoff must be finite and above 1"));
        }
        self.z_edge = z_cut;
        Ok(self)
    }

    fn phi(&self) -> ProductForm {
        ProductForm::PowerPair { p: self.eps, r: self.edge_exponent, c: self.q }
    }

    fn scale(&self) -> f64 {
        self.norm_constant.unwrap_or(1.0)
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.z_edge)
    }

    /// x-interval matching the z-domain.
    pub fn x_domain(&self) -> (f64, f64) {
        (-self.z_edge.ln() / self.alpha, f64::INFINITY)
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        let z = Complex64::new(z, 0.0);
        self.scale() * self.phi().eval(z) * self.poly.eval(z)
    }

    /// z^eps is formed from ln z = -alpha x so weakly bound tails survive z underflow.
    pub fn eval_x(&self, x: f64) -> Complex64 {
        let ln_z = -self.alpha * x;
        let z = Complex64::new(ln_z.exp(), 0.0);
        self.scale() * (self.eps * ln_z).exp() * (1.0 - self.q * z).powc(self.edge_exponent) * self.poly.eval(z)
    }

    /// (psi, psi', psi'') in z.
    pub fn derivatives(&self, z: f64) -> (Complex64, Complex64, Complex64) {
        let zc = Complex64::new(z, 0.0);
        let phi = self.scale() * self.phi().eval(zc);
        let (l, dl) = self.phi().log_derivatives(zc);
        let (y, y1, y2) = self.poly.eval_with_derivatives(zc);
        (phi * y, phi * (l * y + y1), phi * ((l * l + dl) * y + 2.0 * l * y1 + y2))
    }

    /// z^{-eps} (1-qz)^{(q-a)/2q} d^n/dz^n [z^{n+2eps} (1-qz)^{n+a/q}]
    pub fn eval_assembled(&self, z: f64) -> Complex64 {
        let zc = Complex64::new(z, 0.0);
        let n = self.n as usize;
        let nc = Complex64::new(n as f64, 0.0);
        let zp = nc + 2.0 * self.eps;
        let wp = nc + self.a / self.q;
        let w = 1.0 - self.q * zc;
        let mut deriv = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            deriv += binomial(n, k)
                * falling_factorial(zp, k)
                * zc.powc(zp - k as f64)
                * falling_factorial(wp, n - k)
                * (-self.q).powu((n - k) as u32)
                * w.powc(wp - (n - k) as f64);
        }
        self.scale() * zc.powc(-self.eps) * w.powc(self.assembled_edge_exponent) * deriv
    }

    /// Uniform samples in x across the domain, optionally scaled to unit peak magnitude.
    pub fn sample_x(&self, points: usize, peak_scaled: bool) -> Vec<(f64, Complex64)> {
        let (x_lo, _) = self.x_domain();
        let x_hi = if self.q.re > 0.0 {
            x_lo + DEFAULT_CUT_RANGE / self.alpha
        } else {
            DEFAULT_CUT_RANGE / self.alpha
        };
        let points = points.max(2);
        let h = (x_hi - x_lo) / (points - 1) as f64;
        let mut out: Vec<(f64, Complex64)> = (0..points)
            .map(|i| {
                let x = x_lo + h * i as f64;
                let z = (-self.alpha * x).exp();
                let v = if z >= self.z_edge || z <= 0.0 { Complex64::new(0.0, 0.0) } else { self.eval(z) };
                (x, v)
            })
            .collect();
        if peak_scaled {
            let peak = out.iter().map(|p| p.1.norm()).fold(0.0, f64::max);
            if peak > 0.0 && peak.is_finite() {
                for p in &mut out {
                    p.1 /= peak;
                }
            }
        }
        out
    }
}

fn default_z_edge(q: f64) -> f64 {
    if q > 0.0 {
        1.0 / q
    } else {
        DEFAULT_CUT_RANGE.exp()
    }
}

/// Eigenfunction of level n for the chosen root. Roots that fail validation
/// are refused unless `force` is set.
pub fn build_eigenfunction(level: &EnergyLevel, root: Root, params: &PotentialParams, force: bool) -> Result<WavefunctionSpec> {
    params.require_q_nonzero()?;
    params.require_real("eigenfunction construction")?;
    let e = level.root(root);
    if e.im.abs() > REALITY_TOLERANCE * params.mass_energy {
        return Err(Error::Refused(format!("energy {e} is complex")));
    }
    let valid = level.is_valid(root);
    if !valid && !force {
        return Err(Error::Refused(format!(
            "root {root:?} of level n={} (E={}) fails the quantization identity; pass force to build it anyway",
            level.n, e.re
        )));
    }
    let d = reduce_dimensionless(params, e.re)?;
    let problem = NuProblem::generalized_hulthen(&d);
    let sol = nu::solve(&problem, BranchPolicy::BoundExponent)?;
    let poly = nu::rodrigues_polynomial(level.n, &sol, &problem)?;
    let (eps, edge) = match sol.phi {
        ProductForm::PowerPair { p, r, .. } => (p, r),
        ProductForm::PowerExp { .. } => return Err(Error::Internal("linear sigma for q != 0".into())),
    };
    let alpha = params.alpha.re;
    Ok(WavefunctionSpec {
        n: level.n,
        energy: e.re,
        eps,
        edge_exponent: edge,
        assembled_edge_exponent: (d.q - d.a) / (2.0 * d.q),
        poly,
        q: d.q,
        a: d.a,
        alpha,
        z_edge: default_z_edge(d.q.re),
        norm_constant: None,
        forced: !valid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiForm {
    pub n: u32,
    /// 2 eps
    pub alpha_idx: Complex64,
    /// b = sqrt(1 - 4 gamma^2)
    pub beta_idx: Complex64,
}

impl JacobiForm {
    /// P_n^{(2 eps, b)}(1 - 2z)
    pub fn eval(&self, z: f64) -> Complex64 {
        jacobi_p(self.n as usize, self.alpha_idx, self.beta_idx, Complex64::new(1.0 - 2.0 * z, 0.0))
    }
}

pub fn jacobi_form(level: &EnergyLevel, root: Root, params: &PotentialParams) -> Result<JacobiForm> {
    if params.q != Complex64::new(1.0, 0.0) {
        return Err(Error::domain(format!("the Jacobi form needs q = 1, got {}", params.q)));
    }
    params.require_real("Jacobi form")?;
    let e = level.root(root);
    let d = reduce_dimensionless(params, e.re)?;
    if d.gamma2.re * 4.0 > 1.0 {
        return Err(Error::domain("4 gamma^2 > 1 makes b complex"));
    }
    Ok(JacobiForm {
        n: level.n,
        alpha_idx: 2.0 * d.eps,
        beta_idx: d.b,
    })
}

/// N with the integral of |N psi(x)|^2 over the x-domain equal to one.
pub fn normalize(spec: &WavefunctionSpec, cfg: &QuadratureConfig) -> Result<f64> {
    if spec.poly.is_zero() {
        return Err(Error::TrivialSolution);
    }
    let mu = spec.eps.re;
    let nu_ = spec.edge_exponent.re;
    if mu <= 0.0 {
        return Err(Error::Divergent {
            edge: format!("z -> 0 (x -> +inf), exponent {mu}"),
        });
    }
    let q = spec.q.re;
    if q > 0.0 && 2.0 * nu_ <= -1.0 {
        return Err(Error::Divergent {
            edge: format!("z -> 1/q (x -> ln(q)/alpha), exponent {nu_}"),
        });
    }
    let growth = mu + nu_ + spec.n as f64;
    if q < 0.0 && growth >= 0.0 {
        return Err(Error::Divergent {
            edge: format!("z -> inf (x -> -inf), |psi| grows like z^{growth:.6}"),
        });
    }
    let unit = WavefunctionSpec { norm_constant: None, ..spec.clone() };
    let density = |z: f64| unit.eval(z).norm_sqr() / (spec.alpha * z);
    let edge = Complex64::new(spec.edge_exponent.re, 0.0);
    // psi without z^eps, and psi without (1 - qz)^edge
    let no_origin = |z: f64| {
        let zc = Complex64::new(z, 0.0);
        (1.0 - spec.q * zc).powc(edge) * spec.poly.eval(zc)
    };
    let no_edge = |z: f64| {
        let zc = Complex64::new(z, 0.0);
        zc.powf(mu) * spec.poly.eval(zc)
    };

    let z_edge = spec.z_edge;
    let zm = if q > 0.0 { 0.5 * z_edge } else { 1.0 };
    let left = power_endpoint(2.0 * mu - 1.0, zm, |z| no_origin(z).norm_sqr() / spec.alpha, cfg)?;
    let right = if q > 0.0 {
        // |1 - qz|^{2 nu} = (q y)^{2 nu} with y = z_edge - z
        let c = q.powf(2.0 * nu_) / spec.alpha;
        power_endpoint(2.0 * nu_, z_edge - zm, |y| c * no_edge(z_edge - y).norm_sqr() / (z_edge - y), cfg)?
    } else {
        // z = 1/u over [1, z_cut]
        integrate(|u: f64| density(1.0 / u) / (u * u), 1.0 / z_edge, 1.0, cfg)?.value
    };
    let total = left + right;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Internal(format!("normalization integral is {total}")));
    }
    Ok(1.0 / (total.sqrt() * spec.scale()))
}

/// Integral of y^s f(y) over [0, l] for s > -1 and f smooth at 0. The last
/// 40 e-folds are integrated in ln y; below that y = y_u t^{1/(s+1)} removes the
/// power exactly.
fn power_endpoint<F: Fn(f64) -> f64>(s: f64, l: f64, f: F, cfg: &QuadratureConfig) -> Result<f64> {
    const FOLDS: f64 = 40.0;
    let p = s + 1.0;
    let upper = integrate(|u: f64| l.powf(p) * (p * u).exp() * f(l * u.exp()), -FOLDS, 0.0, cfg)?;
    let y_u = l * (-FOLDS).exp();
    let c = y_u.powf(p) / p;
    let lower = integrate(
        |t: f64| {
            let y = if t > 0.0 { y_u * (t.ln() / p).exp() } else { 0.0 };
            c * f(y)
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(upper.value + lower.value)
}
