//! Independent checks: ODE residual in z, brute-force roots of the
//! quantization identity, and a shooting solver for the x-space equation
//!
//!   psi'' = [(mc^2)^2 - (E - V(x))^2] / (hbar c)^2 psi.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::polynomial::binomial;
use crate::wavefunction::WavefunctionSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub grid: Vec<f64>,
    pub worst_point: f64,
}

/// Relative residual of psi'' + psi'/z + sigma~/sigma^2 psi at interior samples.
pub fn ode_residual(spec: &WavefunctionSpec, energy: f64, params: &PotentialParams, n_samples: usize) -> Result<ResidualReport> {
    if spec.poly.is_zero() || spec.norm_constant == Some(0.0) {
        return Err(Error::TrivialSolution);
    }
    params.require_q_nonzero()?;
    let scale = params.energy_scale();
    let scale2 = scale * scale;
    let m = params.mass_energy;
    let q = params.q;
    let eps2 = Complex64::new(m * m - energy * energy, 0.0) / scale2;
    let eps = eps2.sqrt();
    let beta2 = 2.0 * params.v0 * energy / scale2;
    let gamma2 = params.v0 * params.v0 / scale2;
    let s2 = gamma2 - q * q * eps * eps - q * beta2;
    let s1 = beta2 + 2.0 * q * eps * eps;
    let s0 = -eps * eps;

    let top = if q.re > 0.0 { 1.0 / q.re } else { 10.0 };
    let n_samples = n_samples.max(1);
    let mut grid = Vec::with_capacity(n_samples);
    let mut worst = (0.0f64, f64::NAN);
    for j in 0..n_samples {
        let mut z = top * (j as f64 + 0.5) / n_samples as f64;
        let mut tries = 0;
        let res = loop {
            let zc = Complex64::new(z, 0.0);
            let sigma = zc * (1.0 - q * zc);
            let (psi, d1, d2) = spec.derivatives(z);
            let t3 = (s0 + s1 * zc + s2 * zc * zc) / (sigma * sigma) * psi;
            let t2 = d1 / zc;
            let size = d2.norm().max(t2.norm()).max(t3.norm());
            let r = (d2 + t2 + t3).norm() / size;
            if r.is_finite() && size > 0.0 {
                break Some(r);
            }
            tries += 1;
            if tries > 8 {
                break None;
            }
            z = top * (j as f64 + 0.5 + 0.1 * tries as f64 / 8.0) / n_samples as f64;
        };
        grid.push(z);
        if let Some(r) = res {
            if r > worst.0 || worst.1.is_nan() {
                worst = (r, z);
            }
        }
    }
    if worst.1.is_nan() {
        return Err(Error::TrivialSolution);
    }
    Ok(ResidualReport {
        max_residual: worst.0,
        grid,
        worst_point: worst.1,
    })
}

/// F(E) = beta^2 - kappa eps - (a+q)(2n+1)/2 - n^2 q with eps >= 0.
fn identity_function(params: &PotentialParams, n: u32, e: f64) -> Complex64 {
    let hc_alpha = params.units.hbar_c * params.alpha.re;
    let v0 = params.v0.re;
    let q = params.q.re;
    let m = params.mass_energy;
    let eps = (m * m - e * e).max(0.0).sqrt() / hc_alpha;
    let beta2 = 2.0 * v0 * e / (hc_alpha * hc_alpha);
    let g2 = (v0 / hc_alpha).powi(2);
    let a = Complex64::new(q * q - 4.0 * g2, 0.0).sqrt();
    let nn = 2.0 * n as f64 + 1.0;
    let kappa = a + q * nn;
    beta2 - kappa * eps - (a + q) * nn / 2.0 - (n * n) as f64 * q
}

/// Roots of the unsquared identity in [-mc^2, mc^2] by grid scan and bisection.
pub fn identity_roots(params: &PotentialParams, n: u32) -> Result<Vec<f64>> {
    params.require_real("identity root scan")?;
    params.require_q_nonzero()?;
    let m = params.mass_energy;
    let grid = 10_000;
    let tol_im = 1e-12;
    let f = |e: f64| identity_function(params, n, e);
    let mut roots = Vec::new();
    let mut prev_e = -m;
    let mut prev = f(prev_e);
    for i in 1..=grid {
        let e = -m + 2.0 * m * i as f64 / grid as f64;
        let cur = f(e);
        let real = prev.im.abs() <= tol_im && cur.im.abs() <= tol_im;
        if real && prev.re == 0.0 {
            roots.push(prev_e);
        } else if real && prev.re * cur.re < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_e, e, prev.re);
            // to machine precision: near E = -m or +m the identity is steep in E
            loop {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid).re;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = cur;
        prev_e = e;
    }
    if prev.re == 0.0 && prev.im.abs() <= tol_im {
        roots.push(prev_e);
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShootingDomain {
    /// From the regular edge at x = ln(q)/alpha out to the edge plus L.
    HalfLine,
    /// x in [-L, L].
    FullLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub domain: ShootingDomain,
    pub length: f64,
    pub step: f64,
    /// Absolute x of the matching point; chosen automatically when absent.
    pub match_point: Option<f64>,
    pub energy_points: usize,
}

impl ShootingConfig {
    pub fn for_params(params: &PotentialParams) -> Self {
        let alpha = params.alpha.re.abs().max(f64::MIN_POSITIVE);
        let q = params.q.re;
        let hc = params.units.hbar_c;
        let m = params.mass_energy;
        // resolve the deepest local wavenumber with at least 20 points per wavelength
        let depth = if q > 0.0 { 4.0 * params.v0.re.abs() / q } else { params.v0.re.abs() / q.abs().max(1e-300) };
        let k_max = (m + depth) / hc;
        let step = (0.005 / alpha).min(2.0 * std::f64::consts::PI / (20.0 * k_max));
        ShootingConfig {
            domain: if q > 0.0 { ShootingDomain::HalfLine } else { ShootingDomain::FullLine },
            length: 40.0 / alpha,
            step,
            match_point: None,
            energy_points: 1500,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = length;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingRoot {
    pub energy: f64,
    pub nodes: u32,
}

/// Bernoulli numbers B_0..B_k (B_1 = -1/2).
fn bernoulli(k: usize) -> Vec<f64> {
    let mut b = vec![0.0; k + 1];
    b[0] = 1.0;
    for m in 1..=k {
        let s: f64 = (0..m).map(|j| binomial(m + 1, j) * b[j]).sum();
        b[m] = -s / (m as f64 + 1.0);
    }
    b
}

struct Problem {
    v0: f64,
    q: f64,
    alpha: f64,
    m: f64,
    hc: f64,
    cfg: ShootingConfig,
    /// x of the regular edge (half line) or -L
    x_start: f64,
    x_end: f64,
    x_match: f64,
    /// exponent of the regular solution at the edge
    frob_s: f64,
    bern: Vec<f64>,
}

const SERIES_TERMS: usize = 30;

impl Problem {
    fn new(params: &PotentialParams, cfg: ShootingConfig) -> Result<Self> {
        params.require_real("shooting")?;
        params.require_q_nonzero()?;
        let v0 = params.v0.re;
        let q = params.q.re;
        let alpha = params.alpha.re;
        if !(alpha > 0.0) {
            return Err(Error::domain("shooting needs alpha > 0"));
        }
        if !(cfg.step > 0.0) || !(cfg.length > 0.0) || cfg.energy_points < 2 {
            return Err(Error::domain("shooting step, length and energy grid must be positive"));
        }
        let hc = params.units.hbar_c;
        let m = params.mass_energy;
        let (x_start, x_end, frob_s) = match cfg.domain {
            ShootingDomain::HalfLine => {
                if q <= 0.0 {
                    return Err(Error::domain("the half-line domain needs q > 0"));
                }
                let g = v0 / (q * hc * alpha);
                let disc = 1.0 - 4.0 * g * g;
                if disc < 0.0 {
                    return Err(Error::Unsupported(
                        "4 gamma^2 > q^2: the edge exponent is complex (no regular solution)".into(),
                    ));
                }
                let xp = q.ln() / alpha;
                (xp, xp + cfg.length, 0.5 * (1.0 + disc.sqrt()))
            }
            ShootingDomain::FullLine => {
                if q > 0.0 && q.ln() / alpha > -cfg.length {
                    return Err(Error::Pole {
                        location: Complex64::new(q.ln() / alpha, 0.0),
                    });
                }
                (-cfg.length, cfg.length, 0.0)
            }
        };
        let x_match = match cfg.match_point {
            Some(x) => x,
            None => match cfg.domain {
                ShootingDomain::HalfLine => {
                    let w = (v0 / q).abs();
                    let t = (1.0 + w / (0.5 * m)).ln() / alpha;
                    x_start + t.clamp(0.5 / alpha, 0.5 * cfg.length)
                }
                ShootingDomain::FullLine => 0.0,
            },
        };
        if !(x_match > x_start && x_match < x_end) {
            return Err(Error::domain(format!("match point {x_match} outside ({x_start}, {x_end})")));
        }
        Ok(Problem {
            v0,
            q,
            alpha,
            m,
            hc,
            cfg,
            x_start,
            x_end,
            x_match,
            frob_s,
            bern: bernoulli(SERIES_TERMS),
        })
    }

    fn potential(&self, x: f64) -> f64 {
        match self.cfg.domain {
            // e^{alpha x} - q = q expm1(alpha t) with t measured from the edge
            ShootingDomain::HalfLine => -self.v0 / (self.q * (self.alpha * (x - self.x_start)).exp_m1()),
            ShootingDomain::FullLine => -self.v0 / ((self.alpha * x).exp() - self.q),
        }
    }

    fn g(&self, e: f64, x: f64) -> f64 {
        let d = e - self.potential(x);
        (self.m * self.m - d * d) / (self.hc * self.hc)
    }

    /// Energies for which both asymptotic regions are classically forbidden.
    fn energy_window(&self) -> (f64, f64) {
        match self.cfg.domain {
            ShootingDomain::HalfLine => (-self.m, self.m),
            ShootingDomain::FullLine => {
                let left = self.v0 / self.q;
                ((-self.m).max(left - self.m), self.m.min(left + self.m))
            }
        }
    }

    /// Frobenius start t^s sum c_k t^k at t0 from the edge.
    fn frobenius_start(&self, e: f64, t0: f64) -> (f64, f64) {
        let w = self.v0 / self.q;
        let a = self.alpha;
        let mut u = vec![0.0; SERIES_TERMS + 1];
        u[0] = w / a;
        u[1] = e + w * self.bern[1];
        let mut fact = 1.0;
        let mut apow = 1.0;
        for k in 2..=SERIES_TERMS {
            fact *= k as f64;
            apow *= a;
            u[k] = w * self.bern[k] * apow / fact;
        }
        let hc2 = self.hc * self.hc;
        let d: Vec<f64> = (0..=SERIES_TERMS)
            .map(|j| {
                let conv: f64 = (0..=j).map(|i| u[i] * u[j - i]).sum();
                let mass = if j == 2 { self.m * self.m } else { 0.0 };
                (mass - conv) / hc2
            })
            .collect();
        let s = self.frob_s;
        let mut c = vec![0.0; SERIES_TERMS + 1];
        c[0] = 1.0;
        for k in 1..=SERIES_TERMS {
            let rhs: f64 = (1..=k).map(|j| d[j] * c[k - j]).sum();
            let ks = k as f64 + s;
            c[k] = rhs / (ks * (ks - 1.0) - d[0]);
        }
        let (mut psi, mut dpsi) = (0.0, 0.0);
        for (k, ck) in c.iter().enumerate() {
            let p = k as f64 + s;
            psi += ck * t0.powf(p);
            dpsi += ck * p * t0.powf(p - 1.0);
        }
        (psi, dpsi)
    }

    /// RK4 from x0 to x1 (either direction); returns (psi, psi', sign changes).
    fn integrate(&self, e: f64, x0: f64, x1: f64, mut psi: f64, mut dpsi: f64) -> (f64, f64, u32) {
        let span = x1 - x0;
        let steps = (span.abs() / self.cfg.step).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let mut x = x0;
        let mut nodes = 0;
        for _ in 0..steps {
            let k1p = dpsi;
            let k1d = self.g(e, x) * psi;
            let gm = self.g(e, x + 0.5 * h);
            let k2p = dpsi + 0.5 * h * k1d;
            let k2d = gm * (psi + 0.5 * h * k1p);
            let k3p = dpsi + 0.5 * h * k2d;
            let k3d = gm * (psi + 0.5 * h * k2p);
            let k4p = dpsi + h * k3d;
            let k4d = self.g(e, x + h) * (psi + h * k3p);
            let next = psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            if next * psi < 0.0 {
                nodes += 1;
            }
            psi = next;
            x += h;
            let size = psi.abs().max(dpsi.abs());
            if size > 1e100 {
                psi /= size;
                dpsi /= size;
            }
        }
        (psi, dpsi, nodes)
    }

    fn decay_rate(&self, e: f64, v_inf: f64) -> f64 {
        let d = e - v_inf;
        (self.m * self.m - d * d).max(0.0).sqrt() / self.hc
    }

    /// Normalized Wronskian mismatch at the match point and the node count.
    fn mismatch(&self, e: f64, x_match: f64) -> (f64, u32) {
        let (psi0, dpsi0, x0) = match self.cfg.domain {
            ShootingDomain::HalfLine => {
                let t0 = (0.25 / self.alpha)
                    .min(0.25 * self.hc / self.m)
                    .min(0.25 * (x_match - self.x_start));
                let (p, d) = self.frobenius_start(e, t0);
                (p, d, self.x_start + t0)
            }
            ShootingDomain::FullLine => {
                let k = self.decay_rate(e, self.v0 / self.q);
                (1e-10, 1e-10 * k, self.x_start)
            }
        };
        let (po, do_, n_out) = self.integrate(e, x0, x_match, psi0, dpsi0);
        let k = self.decay_rate(e, 0.0);
        let (pi, di, n_in) = self.integrate(e, self.x_end, x_match, 1e-10, -1e-10 * k);
        let ks = self.m / self.hc;
        let no = po.hypot(do_ / ks);
        let ni = pi.hypot(di / ks);
        ((do_ * pi - po * di) / (ks * no * ni), n_out + n_in)
    }

    fn outer_turning_point(&self, e: f64) -> Option<f64> {
        // last x where (E - V)^2 - m^2 changes sign, scanning inward from the right end
        let n = 4000;
        let h = (self.x_end - self.x_start) / n as f64;
        let mut prev = self.g(e, self.x_end);
        for i in (1..n).rev() {
            let x = self.x_start + h * i as f64;
            let cur = self.g(e, x);
            if cur < 0.0 && prev >= 0.0 {
                return Some(x);
            }
            prev = cur;
        }
        None
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, x_match: f64) -> Option<f64> {
        let mut flo = self.mismatch(lo, x_match).0;
        let fhi = self.mismatch(hi, x_match).0;
        if flo * fhi > 0.0 {
            return None;
        }
        let tol = 1e-12 * self.m.max(1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let fm = self.mismatch(mid, x_match).0;
            if fm == 0.0 {
                return Some(mid);
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    fn solve(&self) -> Vec<ShootingRoot> {
        let (e_lo, e_hi) = self.energy_window();
        if e_hi <= e_lo {
            return Vec::new();
        }
        // E = mid + half sin(theta) clusters points near both thresholds
        let mid = 0.5 * (e_hi + e_lo);
        let half = 0.5 * (e_hi - e_lo);
        let npts = self.cfg.energy_points;
        let energies: Vec<f64> = (1..npts)
            .map(|i| {
                let th = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * i as f64 / npts as f64;
                mid + half * th.sin()
            })
            .collect();
        let values: Vec<f64> = energies.par_iter().map(|&e| self.mismatch(e, self.x_match).0).collect();
        let brackets: Vec<(f64, f64)> = (1..energies.len())
            .filter(|&i| values[i - 1] * values[i] <= 0.0 && values[i - 1] != values[i])
            .map(|i| (energies[i - 1], energies[i]))
            .collect();
        brackets
            .par_iter()
            .filter_map(|&(lo, hi)| {
                let rough = self.bisect(lo, hi, self.x_match)?;
                let refined = self
                    .outer_turning_point(rough)
                    .filter(|&x| x > self.x_start + self.cfg.step * 10.0 && x < self.x_end - self.cfg.step * 10.0)
                    .and_then(|xt| {
                        let w = (hi - lo).max(1e-9 * self.m);
                        self.bisect(rough - w, rough + w, xt).map(|e| (e, xt))
                    });
                let (energy, xm) = refined.unwrap_or((rough, self.x_match));
                let nodes = self.mismatch(energy, xm).1;
                Some(ShootingRoot { energy, nodes })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Vec::new(), |mut acc: Vec<ShootingRoot>, r| {
                if !acc.iter().any(|a| (a.energy - r.energy).abs() < 1e-9 * self.m) {
                    acc.push(r);
                }
                acc
            })
    }
}

/// All eigenvalues found by the energy scan, sorted by energy.
pub fn shooting_spectrum(params: &PotentialParams, config: &ShootingConfig) -> Result<Vec<ShootingRoot>> {
    let problem = Problem::new(params, *config)?;
    let mut roots = problem.solve();
    roots.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(roots)
}

/// The eigenvalue whose eigenfunction has n interior nodes.
pub fn shooting_eigenvalue(params: &PotentialParams, n: u32, config: &ShootingConfig) -> Result<f64> {
    let problem = Problem::new(params, *config)?;
    let (lo, hi) = problem.energy_window();
    let roots = shooting_spectrum(params, config)?;
    let found: Vec<String> = roots.iter().map(|r| format!("{} ({} nodes)", r.energy, r.nodes)).collect();
    roots
        .iter()
        .find(|r| r.nodes == n)
        .map(|r| r.energy)
        .ok_or_else(|| Error::NoEigenvalueInBracket {
            lo,
            hi,
            detail: if found.is_empty() {
                String::new()
            } else {
                format!(": no state with {n} nodes among [{}]", found.join(", "))
            },
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{energy_candidates, spectrum, Mode, Root};
    use crate::wavefunction::build_eigenfunction;
    use approx::assert_relative_eq;

    fn nat(v0: f64, q: f64, alpha: f64) -> PotentialParams {
        PotentialParams::natural(v0, q, alpha)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(8);
        assert_relative_eq!(b[1], -0.5, epsilon = 1e-15);
        assert_relative_eq!(b[2], 1.0 / 6.0, epsilon = 1e-15);
        assert!(b[3].abs() < 1e-15);
        assert_relative_eq!(b[4], -1.0 / 30.0, epsilon = 1e-14);
        assert_relative_eq!(b[8], -1.0 / 30.0, epsilon = 1e-12);
    }

    #[test]
    fn frobenius_series_solves_ode() {
        let p = Problem::new(&nat(0.4, 1.0, 1.0), ShootingConfig::for_params(&nat(0.4, 1.0, 1.0))).unwrap();
        let e = 0.9;
        let h = 1e-4;
        let t = 0.2;
        let (f0, d0) = p.frobenius_start(e, t);
        let (fp, dp) = p.frobenius_start(e, t + h);
        let (fm, dm) = p.frobenius_start(e, t - h);
        assert!(((fp - fm) / (2.0 * h) - d0).abs() < 1e-6 * d0.abs());
        let second = (dp - dm) / (2.0 * h);
        assert!((second - p.g(e, p.x_start + t) * f0).abs() < 1e-5 * second.abs().max(1.0));
    }

    #[test]
    fn residual_of_exact_state() {
        let p = nat(0.5, 1.0, 1.0);
        let lvl = energy_candidates(0, &p).unwrap();
        let wf = build_eigenfunction(&lvl, Root::Plus, &p, false).unwrap();
        let r = ode_residual(&wf, lvl.e_plus.re, &p, 50).unwrap();
        assert!(r.max_residual < 1e-10, "{}", r.max_residual);
        let r = ode_residual(&wf, lvl.e_plus.re + 0.01, &p, 50).unwrap();
        assert!(r.max_residual > 1e-3);
    }

    #[test]
    fn residual_rejects_zero() {
        let p = nat(0.5, 1.0, 1.0);
        let lvl = energy_candidates(0, &p).unwrap();
        let mut wf = build_eigenfunction(&lvl, Root::Plus, &p, false).unwrap();
        wf.norm_constant = Some(0.0);
        assert_eq!(ode_residual(&wf, lvl.e_plus.re, &p, 10), Err(Error::TrivialSolution));
    }

    #[test]
    fn residual_excited_and_negative_q() {
        for &(v0, q, alpha) in &[(0.0095, 1.0, 0.02), (0.1, -1.0, 1.0), (0.3, 0.5, 0.5)] {
            let p = nat(v0, q, alpha);
            for lvl in spectrum(&p, 3, Mode::Validated).unwrap() {
                for root in [Root::Plus, Root::Minus] {
                    if !lvl.is_valid(root) {
                        continue;
                    }
                    let wf = build_eigenfunction(&lvl, root, &p, false).unwrap();
                    let r = ode_residual(&wf, lvl.root(root).re, &p, 50).unwrap();
                    assert!(r.max_residual < 1e-8, "{v0} {q} n={}: {}", lvl.n, r.max_residual);
                }
            }
        }
    }

    #[test]
    fn identity_roots_examples() {
        let r = identity_roots(&nat(0.5, 1.0, 1.0), 0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.911438).abs() < 1e-6);
        assert!(identity_roots(&nat(0.5, 1.0, 1.0), 1).unwrap().is_empty());
        let r = identity_roots(&nat(0.1, -1.0, 1.0), 0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] + 0.1504).abs() < 1e-4);
    }

    #[test]
    fn shooting_hulthen_ground_state() {
        let p = nat(0.5, 1.0, 1.0);
        let cfg = ShootingConfig::for_params(&p);
        let e = shooting_eigenvalue(&p, 0, &cfg).unwrap();
        assert!((e - (0.25 + 7f64.sqrt() / 4.0)).abs() < 1e-6, "{e}");
        assert!(matches!(shooting_eigenvalue(&p, 1, &cfg), Err(Error::NoEigenvalueInBracket { .. })));
    }

    #[test]
    fn shooting_shallow_well_has_no_state() {
        let p = nat(0.1, 1.0, 1.0);
        let cfg = ShootingConfig::for_params(&p);
        assert!(shooting_spectrum(&p, &cfg).unwrap().is_empty());
        assert!(matches!(shooting_eigenvalue(&p, 0, &cfg), Err(Error::NoEigenvalueInBracket { .. })));
    }

    #[test]
    fn shooting_step_convergence() {
        let p = nat(0.45, 1.0, 1.0);
        let cfg = ShootingConfig::for_params(&p).with_step(0.01);
        let e1 = shooting_eigenvalue(&p, 0, &cfg).unwrap();
        let e2 = shooting_eigenvalue(&p, 0, &cfg.with_step(0.005)).unwrap();
        assert!((e1 - e2).abs() < 1e-8, "{e1} {e2}");
    }

    #[test]
    fn shooting_excited_states_match_closed_form() {
        let p = nat(0.0095, 1.0, 0.02);
        let mut cfg = ShootingConfig::for_params(&p);
        cfg.length = 2000.0;
        cfg.step = 0.05;
        for lvl in spectrum(&p, 3, Mode::Validated).unwrap() {
            let e = shooting_eigenvalue(&p, lvl.n, &cfg).unwrap();
            assert!((e - lvl.e_plus.re).abs() < 1e-5, "n={}: {e} vs {}", lvl.n, lvl.e_plus.re);
        }
    }

    #[test]
    fn full_line_rejects_pole() {
        let p = nat(0.5, 1.0, 1.0);
        let mut cfg = ShootingConfig::for_params(&p);
        cfg.domain = ShootingDomain::FullLine;
        assert!(matches!(shooting_spectrum(&p, &cfg), Err(Error::Pole { .. })));
    }
}
