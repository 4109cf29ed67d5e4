//! Riemann, Hurwitz, Dirichlet, Dedekind and Epstein zeta functions, the
//! scattering coefficients built from them, and critical-line moments.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, usage, Error, Result};
use crate::lattice::{kronecker_chi, BinaryQuadraticForm, ImagQuadField};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::specfun::{log_gamma, rgamma, upper_incomplete_gamma, PrecisionPolicy};

// B_{2k} / (2k)! for k = 1..8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pow_real(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// Number of explicit terms in the Euler–Maclaurin head.
fn em_terms(s: Complex64) -> usize {
    20usize.max((2.0 * s.norm()).ceil() as usize)
}

/// Euler–Maclaurin correction at x = N + a, without the pole term:
/// x^{-s}/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}. Also returns the size
/// of the first omitted term.
fn em_correction(s: Complex64, x: f64) -> (Complex64, f64) {
    let xs = pow_real(x, -s);
    let mut acc = xs * 0.5;
    // (s)_{2k-1} x^{-s-2k+1}
    let mut rising = s / x * xs;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        acc += rising * *b;
        let kk = 2.0 * (k as f64 + 1.0);
        rising *= (s + (kk - 1.0)) * (s + kk) / (x * x);
    }
    // |B_18/18!| ≈ |B_16/16!| / (2π)²
    let bound = rising.norm() * BERNOULLI_OVER_FACTORIAL[7].abs() / (4.0 * PI * PI);
    (acc, bound)
}

/// ζ(s) by Euler–Maclaurin, with a heuristic bound on the truncation error.
pub fn riemann_zeta_em(s: Complex64) -> Result<(Complex64, f64)> {
    if s == c(1.0, 0.0) {
        return domain("riemann_zeta: pole at s = 1");
    }
    let n = em_terms(s);
    let head: Vec<Complex64> = (1..n).map(|k| pow_real(k as f64, -s)).collect();
    let mut acc = pairwise_sum_complex(&head);
    let x = n as f64;
    acc += pow_real(x, c(1.0, 0.0) - s) / (s - 1.0);
    let (corr, bound) = em_correction(s, x);
    acc += corr;
    Ok((acc, bound))
}

fn pairwise_sum_complex(v: &[Complex64]) -> Complex64 {
    crate::quad::pairwise_sum_c(v)
}

/// ζ(s) via the Borwein acceleration of the alternating η series.
pub fn riemann_zeta_eta(s: Complex64) -> Result<Complex64> {
    if s == c(1.0, 0.0) {
        return domain("riemann_zeta: pole at s = 1");
    }
    let denom = c(1.0, 0.0) - pow_real(2.0, c(1.0, 0.0) - s);
    if denom.norm() < 1e-12 {
        return Err(Error::Evaluation(format!("eta backend: 1 − 2^(1−s) vanishes at {s}")));
    }
    // error ≲ 3(1+2|t|) e^{π|t|/2} / ((3+√8)^n |Γ(s)| |1 − 2^{1−s}|)
    let t = s.im.abs();
    let lg = if s.re > 0.0 { log_gamma(s)?.re } else { 0.0 };
    let log_err = (3.0 * (1.0 + 2.0 * t)).ln() + 0.5 * PI * t - lg - denom.norm().ln();
    let n = (((log_err + 34.0) / (3.0 + 8f64.sqrt()).ln()).ceil() as usize).max(20);
    if n > 380 {
        return Err(Error::Evaluation(format!("eta backend: |Im s| = {t} too large")));
    }
    // d_k / d_n with d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let nf = n as f64;
    let mut term = 1.0 / nf;
    let mut partial = Vec::with_capacity(n + 1);
    let mut acc = term;
    partial.push(acc);
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        partial.push(acc);
    }
    let dn = partial[n];
    let terms: Vec<Complex64> = (0..n)
        .map(|k| {
            let w = (partial[k] - dn) / dn;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            pow_real((k + 1) as f64, -s) * (sign * w)
        })
        .collect();
    Ok(-pairwise_sum_complex(&terms) / denom)
}

/// θ(t) of the Riemann–Siegel formula.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    log_gamma(c(0.25, 0.5 * t)).expect("off the poles").im - 0.5 * t * PI.ln()
}

fn rs_psi(p: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    ((p * p - p - 1.0 / 16.0) * two_pi).cos() / (p * two_pi).cos()
}

/// Derivatives Ψ^{(k)}(p), k ≤ 12, by the Cauchy integral on a circle.
fn rs_psi_derivatives(p: f64) -> [f64; 13] {
    const M: usize = 96;
    let radius = 0.9;
    let mut coeffs = [Complex64::new(0.0, 0.0); 13];
    for j in 0..M {
        let theta = 2.0 * PI * (j as f64 + 0.5) / M as f64;
        let e = Complex64::from_polar(1.0, theta);
        let f = rs_psi(Complex64::new(p, 0.0) + e * radius);
        let mut ek = Complex64::new(1.0, 0.0);
        for slot in coeffs.iter_mut() {
            *slot += f / ek;
            ek *= e;
        }
    }
    let mut out = [0.0; 13];
    let mut fact = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *slot = (coeffs[k] / M as f64).re * fact / radius.powi(k as i32);
    }
    out
}

/// Hardy's Z(t) by Riemann–Siegel with the corrections C₀…C₄ (t ≥ 2π).
pub fn hardy_z_riemann_siegel(t: f64) -> Result<f64> {
    if t < 2.0 * PI {
        return usage("Riemann–Siegel needs t ≥ 2π");
    }
    let tau = (t / (2.0 * PI)).sqrt();
    let n = tau.floor() as usize;
    let p = tau - n as f64;
    let theta = riemann_siegel_theta(t);
    let mut main = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        main += (theta - t * kf.ln()).cos() / kf.sqrt();
    }
    main *= 2.0;
    let d = rs_psi_derivatives(p);
    let pi2 = PI * PI;
    let c0 = d[0];
    let c1 = -d[3] / (96.0 * pi2);
    let c2 = d[2] / (64.0 * pi2) + d[6] / (18_432.0 * pi2 * pi2);
    let c3 = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi2 * pi2) - d[9] / (5_308_416.0 * pi2 * pi2 * pi2);
    let c4 = d[0] / (128.0 * pi2)
        + 19.0 * d[4] / (24_576.0 * pi2 * pi2)
        + 11.0 * d[8] / (5_898_240.0 * pi2 * pi2 * pi2)
        + d[12] / (2_038_431_744.0 * pi2 * pi2 * pi2 * pi2);
    let inv = 1.0 / tau;
    let corr = c0 + inv * (c1 + inv * (c2 + inv * (c3 + inv * c4)));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(main + sign * corr / tau.sqrt())
}

/// ζ(1/2 + it) by Riemann–Siegel.
pub fn riemann_zeta_rs(t: f64) -> Result<Complex64> {
    let z = hardy_z_riemann_siegel(t.abs())?;
    let v = Complex64::from_polar(z, -riemann_siegel_theta(t.abs()));
    Ok(if t < 0.0 { v.conj() } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaMethod {
    EulerMaclaurin,
    /// Riemann–Siegel on the critical line for |Im s| ≥ 30, Euler–Maclaurin elsewhere.
    RiemannSiegel,
    /// Borwein-accelerated alternating series; |Im s| up to about 200.
    AlternatingEta,
}

/// ζ evaluator with an optional memo of evaluated points.
#[derive(Debug)]
pub struct ZetaBackend {
    pub method: ZetaMethod,
    pub precision: PrecisionPolicy,
    cache: Option<RwLock<HashMap<(i64, i64), Complex64>>>,
}

impl Clone for ZetaBackend {
    fn clone(&self) -> Self {
        ZetaBackend {
            method: self.method,
            precision: self.precision,
            cache: self.cache.as_ref().map(|_| RwLock::new(HashMap::new())),
        }
    }
}

impl Default for ZetaBackend {
    fn default() -> Self {
        ZetaBackend::new(ZetaMethod::EulerMaclaurin)
    }
}

impl ZetaBackend {
    pub fn new(method: ZetaMethod) -> Self {
        ZetaBackend { method, precision: PrecisionPolicy::default(), cache: None }
    }

    /// Enable or disable memoisation. Results are identical either way.
    pub fn with_cache(mut self, enabled: bool) -> Self {
        self.cache = if enabled { Some(RwLock::new(HashMap::new())) } else { None };
        self
    }

    pub fn cache_len(&self) -> usize {
        self.cache.as_ref().map_or(0, |c| c.read().unwrap().len())
    }

    pub fn zeta(&self, s: Complex64) -> Result<Complex64> {
        let key = ((s.re * 1e14).round() as i64, (s.im * 1e14).round() as i64);
        if let Some(cache) = &self.cache {
            if let Some(v) = cache.read().unwrap().get(&key) {
                return Ok(*v);
            }
        }
        let v = match self.method {
            ZetaMethod::EulerMaclaurin => riemann_zeta_em(s)?.0,
            ZetaMethod::AlternatingEta => riemann_zeta_eta(s)?,
            ZetaMethod::RiemannSiegel => {
                if s.re == 0.5 && s.im.abs() >= 30.0 {
                    riemann_zeta_rs(s.im)?
                } else {
                    riemann_zeta_em(s)?.0
                }
            }
        };
        if let Some(cache) = &self.cache {
            cache.write().unwrap().entry(key).or_insert(v);
        }
        Ok(v)
    }
}

/// ζ(s) (Euler–Maclaurin).
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    riemann_zeta_em(s).map(|r| r.0)
}

/// Hurwitz ζ(s, a) for 0 < a ≤ 1, s ≠ 1.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == c(1.0, 0.0) {
        return domain("hurwitz_zeta: pole at s = 1");
    }
    if !(a > 0.0) {
        return domain("hurwitz_zeta: need a > 0");
    }
    let n = em_terms(s);
    let head: Vec<Complex64> = (0..n).map(|k| pow_real(k as f64 + a, -s)).collect();
    let x = n as f64 + a;
    Ok(pairwise_sum_complex(&head) + pow_real(x, c(1.0, 0.0) - s) / (s - 1.0) + em_correction(s, x).0)
}

/// (e^z − 1)/z.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        c(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - 1.0) / z
    }
}

/// L(s, χ_{d_K}) for the Kronecker character of the fundamental
/// discriminant d_K < 0, via Hurwitz zeta values. Entire in s.
pub fn dirichlet_l(s: Complex64, d_k: i64) -> Result<Complex64> {
    if d_k >= 0 {
        return usage("dirichlet_l: expected a negative discriminant");
    }
    let q = d_k.unsigned_abs() as usize;
    let chars: Vec<i32> = (1..=q as i64).map(|a| kronecker_chi(d_k, a)).collect();
    let n = em_terms(s);
    // Σ_{m < qN} χ(m) m^{-s}
    let head: Vec<Complex64> = (1..q * n)
        .filter_map(|m| {
            let ch = chars[(m - 1) % q];
            (ch != 0).then(|| pow_real(m as f64, -s) * ch as f64)
        })
        .collect();
    let mut acc = pairwise_sum_complex(&head);
    let qf = q as f64;
    let one = c(1.0, 0.0);
    for (i, &ch) in chars.iter().enumerate() {
        if ch == 0 {
            continue;
        }
        let a = (i + 1) as f64;
        let x = n as f64 + a / qf;
        // q^{-s} x^{1-s}/(s-1) = (qx)^{1-s}/(q(s-1)); Σχ = 0 lets us subtract 1
        let ell = (qf * x).ln();
        let pole = -phi1(-(s - one) * ell) * ell / qf;
        let (corr, _) = em_correction(s, x);
        acc += (pole + pow_real(qf, -s) * corr) * ch as f64;
    }
    Ok(acc)
}

/// ζ_K(s) = ζ(s) L(s, χ_{d_K}).
pub fn dedekind_zeta(field: &ImagQuadField, s: Complex64) -> Result<Complex64> {
    dedekind_zeta_with(field, s, &ZetaBackend::default())
}

pub fn dedekind_zeta_with(field: &ImagQuadField, s: Complex64, backend: &ZetaBackend) -> Result<Complex64> {
    if s == c(1.0, 0.0) {
        return domain("dedekind_zeta: pole at s = 1");
    }
    Ok(backend.zeta(s)? * dirichlet_l(s, field.discriminant())?)
}

/// φ_K(s) = (2π/(s√|d_K|)) ζ_K(s)/ζ_K(1+s), the Bianchi scattering coefficient.
pub fn scattering_phi_k(field: &ImagQuadField, s: Complex64) -> Result<Complex64> {
    let one = c(1.0, 0.0);
    if s.norm() == 0.0 || s == one || s == -one {
        return domain(format!("scattering_phi_K: pole at s = {s}"));
    }
    let num = dedekind_zeta(field, s)?;
    let den = dedekind_zeta(field, s + 1.0)?;
    if den.norm() == 0.0 {
        return domain(format!("scattering_phi_K: ζ_K(1+s) vanishes at s = {s}"));
    }
    let sd = (field.discriminant().abs() as f64).sqrt();
    Ok(num / den * (2.0 * PI / sd) / s)
}

/// φ(s) = ξ(2s−1)/ξ(2s) for PSL₂(ℤ), ξ(s) = π^{-s/2}Γ(s/2)ζ(s).
pub fn scattering_phi_q(s: Complex64) -> Result<Complex64> {
    if s == c(1.0, 0.0) {
        return domain("scattering_phi_Q: pole at s = 1");
    }
    if s == c(0.5, 0.0) {
        return Ok(c(-1.0, 0.0));
    }
    let two_s = s * 2.0;
    let lg = log_gamma(s - 0.5)? - log_gamma(s)?;
    let num = riemann_zeta(two_s - 1.0)?;
    let den = riemann_zeta(two_s)?;
    if den.norm() == 0.0 {
        return domain(format!("scattering_phi_Q: ζ(2s) vanishes at s = {s}"));
    }
    Ok(lg.exp() * PI.sqrt() * num / den)
}

/// Positive definite binary form viewed as an Epstein zeta datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsteinForm {
    pub q: BinaryQuadraticForm,
    /// Δ = (4ac − b²)/4.
    pub delta: f64,
}

impl EpsteinForm {
    pub fn new(q: BinaryQuadraticForm) -> Self {
        EpsteinForm { q, delta: q.determinant() }
    }
}

/// Counts of lattice points by integer value of ax² + bxy + cy² ≤ cap.
fn value_counts(a: i64, b: i64, cc: i64, cap: f64) -> BTreeMap<i64, u64> {
    let delta = (4 * a * cc - b * b) as f64 / 4.0;
    let xm = (cap * cc as f64 / delta).sqrt().floor() as i64 + 1;
    let ym = (cap * a as f64 / delta).sqrt().floor() as i64 + 1;
    let mut out = BTreeMap::new();
    for x in -xm..=xm {
        for y in -ym..=ym {
            let v = a * x * x + b * x * y + cc * y * y;
            if v > 0 && (v as f64) <= cap {
                *out.entry(v).or_insert(0) += 1;
            }
        }
    }
    out
}

/// π^{-s}Γ(s)Z(s, Q), the completed Epstein zeta function.
pub fn epstein_completed(form: &EpsteinForm, s: Complex64) -> Result<Complex64> {
    let one = c(1.0, 0.0);
    if s.norm() == 0.0 || s == one {
        return domain(format!("epstein_Z: s = {s} is a pole of the completed function"));
    }
    if s.im < 0.0 {
        return epstein_completed(form, s.conj()).map(|v| v.conj());
    }
    let q = form.q;
    let delta = form.delta;
    let sd = delta.sqrt();
    let x0 = 1.0 / sd;
    let t = s.im;
    let phi = if t > 0.0 { (0.5 * PI - 3.0 / t).max(0.0) } else { 0.0 };
    let w0 = Complex64::from_polar(x0, phi);
    let lw0 = Complex64::new(x0.ln(), phi);
    let cos_phi = phi.cos().max(1e-300);
    let margin = 50.0 + 2.0 * (s.re - 0.5).abs() * (2.0 + s.norm()).ln();
    let cap = margin * sd / (PI * cos_phi);

    // Σ_{v≠0} (πQ(v))^{-s} Γ(s, πQ(v) w0)
    let direct: Vec<(i64, u64)> = value_counts(q.a, q.b, q.c, cap).into_iter().collect();
    let first: Vec<Complex64> = direct
        .par_iter()
        .map(|&(k, r)| {
            let x = PI * k as f64;
            Ok(pow_real(x, -s) * upper_incomplete_gamma(s, w0 * x)? * r as f64)
        })
        .collect::<Result<_>>()?;

    // dual form: Q*(w) = (c m² − b mn + a n²)/Δ
    let dual: Vec<(i64, u64)> = value_counts(q.c, -q.b, q.a, cap).into_iter().collect();
    let second: Vec<Complex64> = dual
        .par_iter()
        .map(|&(k, r)| {
            let x = PI * k as f64 / delta;
            Ok(pow_real(x, s - 1.0) * upper_incomplete_gamma(one - s, x / w0)? * r as f64)
        })
        .collect::<Result<_>>()?;

    let closed = ((s - 1.0) * lw0).exp() / ((s - 1.0) * sd) - (s * lw0).exp() / s;
    let total = closed + crate::quad::pairwise_sum_c(&first) + crate::quad::pairwise_sum_c(&second) / sd;
    crate::error::finite(total, "epstein_Z")
}

/// Z(s, Q) = Σ_{(m,n)≠0} Q(m,n)^{-s}, continued to s ∉ {0, 1}.
pub fn epstein_z(form: &EpsteinForm, s: Complex64) -> Result<Complex64> {
    let lam = epstein_completed(form, s)?;
    // Z = Λ π^s / Γ(s); zero at the negative integers
    Ok(lam * pow_real(PI, s) * rgamma(s))
}

/// ∫₀^T |ζ(1/2+it)|^{2k} dt with an error estimate from a second rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: f64,
    pub error_estimate: f64,
}

const MOMENT_PANEL: f64 = 0.25;

fn critical_line_integral<F>(t_max: f64, f: F) -> Result<MomentResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(t_max >= 0.0) {
        return domain(format!("moment: need T ≥ 0, got {t_max}"));
    }
    if t_max == 0.0 {
        return Ok(MomentResult { value: 0.0, error_estimate: 0.0 });
    }
    let panels = (t_max / MOMENT_PANEL).ceil().max(1.0) as usize;
    let h = t_max / panels as f64;
    let fine = GaussLegendre::new(8);
    let coarse = GaussLegendre::new(5);
    let pairs: Vec<(f64, f64)> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let mut vf = 0.0;
            for (x, w) in fine.mapped(a, b) {
                vf += w * f(x)?;
            }
            let mut vc = 0.0;
            for (x, w) in coarse.mapped(a, b) {
                vc += w * f(x)?;
            }
            Ok((vf, vc))
        })
        .collect::<Result<_>>()?;
    let fine_vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let diffs: Vec<f64> = pairs.iter().map(|p| (p.0 - p.1).abs()).collect();
    Ok(MomentResult { value: pairwise_sum(&fine_vals), error_estimate: pairwise_sum(&diffs) })
}

/// ∫₀^T |ζ(1/2+it)|^{2k} dt.
pub fn zeta_moment(k: u32, t_max: f64, backend: &ZetaBackend) -> Result<f64> {
    zeta_moment_with_error(k, t_max, backend).map(|m| m.value)
}

pub fn zeta_moment_with_error(k: u32, t_max: f64, backend: &ZetaBackend) -> Result<MomentResult> {
    if k == 0 {
        return usage("zeta_moment: k must be positive");
    }
    critical_line_integral(t_max, |t| Ok(backend.zeta(c(0.5, t))?.norm().powi(2 * k as i32)))
}

/// Fourth moment of ζ_K on the critical line and its Hölder bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DedekindMoment {
    /// ∫₀^T |ζ(1/2+it)|⁴ |L(1/2+it)|⁴ dt.
    pub direct: f64,
    /// ∫₀^T |ζ(1/2+it)|¹² dt.
    pub zeta_twelfth: f64,
    /// ∫₀^T |L(1/2+it)|⁶ dt.
    pub l_sixth: f64,
    /// zeta_twelfth^{1/3} · l_sixth^{2/3}.
    pub holder_bound: f64,
}

pub fn dedekind_fourth_moment(field: &ImagQuadField, t_max: f64) -> Result<DedekindMoment> {
    let d = field.discriminant();
    let direct = critical_line_integral(t_max, |t| {
        let s = c(0.5, t);
        Ok((riemann_zeta(s)?.norm() * dirichlet_l(s, d)?.norm()).powi(4))
    })?
    .value;
    let zeta_twelfth = critical_line_integral(t_max, |t| Ok(riemann_zeta(c(0.5, t))?.norm().powi(12)))?.value;
    let l_sixth = critical_line_integral(t_max, |t| Ok(dirichlet_l(c(0.5, t), d)?.norm().powi(6)))?.value;
    Ok(DedekindMoment {
        direct,
        zeta_twelfth,
        l_sixth,
        holder_bound: zeta_twelfth.cbrt() * l_sixth.powf(2.0 / 3.0),
    })
}
