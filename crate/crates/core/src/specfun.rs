//! Special functions: complex log-gamma, K-Bessel of complex order,
//! J-Bessel of half-integer and integer order, upper incomplete gamma.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8; // ln(2π)/2

/// Tolerances and node budget for quadrature-based special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { abs_tol: 1e-15, rel_tol: 1e-13, max_nodes: 1 << 18 }
    }
}

impl PrecisionPolicy {
    pub fn new(abs_tol: f64, rel_tol: f64, max_nodes: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_nodes == 0 {
            return Err(Error::Usage("tolerances must be positive".into()));
        }
        Ok(PrecisionPolicy { abs_tol, rel_tol, max_nodes })
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// log Γ(s) on the branch continuous off (−∞, 0] (the usual `loggamma`
/// branch); `exp(log_gamma(s)) = Γ(s)` everywhere off the poles.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if nonpositive_integer(s) {
        return domain(format!("log_gamma: pole at s = {}", s.re));
    }
    Ok(log_gamma_unchecked(s))
}

fn log_gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 && s.re > -60.0 {
        // lnΓ(s) = lnΓ(s + m) − Σ ln(s + k): keeps the branch continuous off (−∞, 0]
        let m = (0.5 - s.re).ceil() as i32;
        let mut shift = Complex64::new(0.0, 0.0);
        for k in 0..m {
            shift += (s + k as f64).ln();
        }
        return log_gamma_unchecked(s + m as f64) - shift;
    }
    if s.re < 0.5 {
        // Γ(s)Γ(1-s) = π / sin(πs)
        let ln_pi = Complex64::new(PI.ln(), 0.0);
        return ln_pi - ln_sin_pi(s) - log_gamma_unchecked(Complex64::new(1.0, 0.0) - s);
    }
    let z = s - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + x.ln() + LN_2PI_HALF
}

/// log sin(πz) without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i; factor out the dominant exponential.
    if z.im > 0.0 {
        let w = (i * PI * 2.0 * z).exp();
        -i * PI * z + (w - 1.0).ln() - (2.0 * i).ln()
    } else {
        let w = (-i * PI * 2.0 * z).exp();
        i * PI * z + (1.0 - w).ln() - (2.0 * i).ln()
    }
}

/// Γ(s).
pub fn gamma(s: Complex64) -> Result<Complex64> {
    log_gamma(s).map(Complex64::exp)
}

/// 1/Γ(s); entire, zero at the non-positive integers.
pub fn rgamma(s: Complex64) -> Complex64 {
    if nonpositive_integer(s) {
        return Complex64::new(0.0, 0.0);
    }
    (-log_gamma_unchecked(s)).exp()
}

/// Upper incomplete gamma Γ(a, z) for Re z > 0 (principal branch of z^a).
pub fn upper_incomplete_gamma(a: Complex64, z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 {
        return domain(format!("upper_incomplete_gamma: need Re z > 0, got {z}"));
    }
    let za = z.norm();
    if nonpositive_integer_near(a) {
        return Ok(incgamma_nonpositive_integer(a.re.round() as i64, z));
    }
    if za < 1.5 || za < 0.9 * a.norm() {
        let g = gamma(a)?;
        Ok(g - lower_incomplete_series(a, z))
    } else {
        Ok(incgamma_cf(a, z))
    }
}

fn nonpositive_integer_near(a: Complex64) -> bool {
    a.re < 0.5 && (a.re - a.re.round()).abs() < 1e-12 && a.im.abs() < 1e-12
}

fn lower_incomplete_series(a: Complex64, z: Complex64) -> Complex64 {
    let prefactor = (a * z.ln() - z).exp();
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..20_000 {
        term *= z / (a + n as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    prefactor * sum
}

fn incgamma_cf(a: Complex64, z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = z + 1.0 - a;
    let mut c = one / TINY;
    let mut d = one / b;
    let mut h = d;
    for n in 1..20_000 {
        let an = -(n as f64) * (Complex64::new(n as f64, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = one / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (a * z.ln() - z).exp() * h
}

/// Γ(-m, z) for integers -m ≤ 0 via E₁ and downward recurrence.
fn incgamma_nonpositive_integer(a: i64, z: Complex64) -> Complex64 {
    let mut g = if z.norm() < 1.5 {
        exp_integral_e1_series(z)
    } else {
        incgamma_cf(Complex64::new(0.0, 0.0), z)
    };
    let mut k = 0i64;
    while k > a {
        // Γ(k-1, z) = (Γ(k, z) - z^{k-1} e^{-z}) / (k-1)
        let km1 = (k - 1) as f64;
        g = (g - (z.ln() * km1 - z).exp()) / km1;
        k -= 1;
    }
    g
}

fn exp_integral_e1_series(z: Complex64) -> Complex64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        term *= -z / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.norm() < 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Modified Bessel function K_ν(x) = ∫₀^∞ e^{-x cosh u} cosh(νu) du.
///
/// The integrand is continued to the full line and integrated along the
/// shifted contour Im u = α, with α placed at (or near) the saddle so that
/// the oscillation of e^{iνu} no longer causes cancellation. The trapezoid
/// rule on that line converges geometrically; the step is halved until two
/// successive sums agree.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    bessel_k_with(nu, x, &PrecisionPolicy::default())
}

pub fn bessel_k_with(nu: Complex64, x: f64, policy: &PrecisionPolicy) -> Result<Complex64> {
    let (m, e) = bessel_k_scaled_with(nu, x, policy)?;
    let v = m * e.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Evaluation(format!("bessel_k overflow at ν = {nu}, x = {x}")));
    }
    Ok(v)
}

/// K_ν(x) as (m, e) with K_ν(x) = m·exp(e), |m| of order one.
pub fn bessel_k_scaled(nu: Complex64, x: f64) -> Result<(Complex64, f64)> {
    bessel_k_scaled_with(nu, x, &PrecisionPolicy::default())
}

pub fn bessel_k_scaled_with(nu: Complex64, x: f64, policy: &PrecisionPolicy) -> Result<(Complex64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k: need x > 0, got {x}"));
    }
    // Reduce to Re ν ≥ 0, Im ν ≥ 0 using K_{-ν} = K_ν and K_{ν̄} = conj K_ν.
    let (mut a, mut b) = (nu.re, nu.im);
    let mut conjugate = false;
    if a < 0.0 {
        a = -a;
        b = -b;
    }
    if b < 0.0 {
        b = -b;
        conjugate = true;
    }
    let (mut v, e) = bessel_k_first_quadrant(a, b, x, policy)?;
    if a == 0.0 || b == 0.0 {
        // real for real or purely imaginary order
        v.im = 0.0;
    }
    Ok((if conjugate { v.conj() } else { v }, e))
}

fn bessel_k_first_quadrant(a: f64, b: f64, x: f64, policy: &PrecisionPolicy) -> Result<(Complex64, f64)> {
    let alpha = if b == 0.0 {
        0.0
    } else {
        let saddle = (b / x).min(1.0).asin();
        let mut delta = (6.0 / x).cbrt().min(1.0);
        if b > x {
            delta = delta.min(1.0 / (b - x));
        }
        saddle.min(0.5 * PI - delta).max(0.0)
    };
    let (sa, ca) = alpha.sin_cos();
    let nu = Complex64::new(a, b);
    let ialpha = Complex64::new(0.0, alpha);
    // log|integrand| along the line: -x cosh u cos α + a u - b α
    let ell = |u: f64| -x * u.cosh() * ca + a * u - b * alpha;
    // peak of ell
    let peak = if ca > 0.0 { (a / (x * ca)).asinh() } else { 0.0 };
    let top = ell(peak);
    const DROP: f64 = 46.0;
    let find_edge = |dir: f64| -> f64 {
        let mut step = 0.25;
        let mut u = peak;
        while top - ell(u) < DROP {
            u += dir * step;
            step *= 1.5;
            if step > 1e3 {
                break;
            }
        }
        // bisect back for a tighter edge
        let mut lo = peak;
        let mut hi = u;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if top - ell(mid) < DROP {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let upper = find_edge(1.0);
    let lower = find_edge(-1.0);

    let integrand = |u: f64| -> Complex64 {
        let w = Complex64::new(u, 0.0) + ialpha;
        // -x cosh(u + iα) + ν (u + iα)
        let cosh_w = Complex64::new(u.cosh() * ca, u.sinh() * sa);
        (-x * cosh_w + nu * w - top).exp()
    };

    // Initial step resolves the fastest oscillation on the range.
    let max_freq = x * upper.abs().max(lower.abs()).cosh() * sa + b + 1.0;
    let mut h = (0.5f64).min(PI / (2.0 * max_freq));
    let mut n = ((upper - lower) / h).ceil().max(8.0) as usize;
    h = (upper - lower) / n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..=n {
        let f = integrand(lower + k as f64 * h);
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        sum += f * w;
        abs_sum += f.norm() * w;
    }
    let mut estimate = sum * h;
    loop {
        if 2 * n > policy.max_nodes {
            break;
        }
        // add midpoints
        let mut mids = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let f = integrand(lower + (k as f64 + 0.5) * h);
            mids += f;
            abs_sum += f.norm();
        }
        sum += mids;
        n *= 2;
        h *= 0.5;
        let refined = sum * h;
        let diff = (refined - estimate).norm();
        estimate = refined;
        let scale = abs_sum * h;
        if diff <= policy.rel_tol * 1e-2 * scale.max(f64::MIN_POSITIVE)
            || diff <= policy.rel_tol * estimate.norm()
        {
            break;
        }
    }
    // ½ ∫_{-∞}^{∞} e^{-x cosh w + ν w} dw, with the e^{iνα} shift already inside.
    let value = estimate * 0.5;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Evaluation(format!("bessel_k overflow at ν = {nu}, x = {x}")));
    }
    Ok((value, top))
}

/// Bessel function of the first kind J_ν(x) for ν ≥ 0 with 2ν an integer.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if nu < 0.0 || (2.0 * nu - (2.0 * nu).round()).abs() > 1e-12 {
        return Err(Error::Usage(format!("bessel_j: order must be a non-negative multiple of 1/2, got {nu}")));
    }
    if x < 0.0 {
        return domain(format!("bessel_j: need x ≥ 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let twice = (2.0 * nu).round() as i64;
    if twice % 2 == 1 && x >= nu {
        return Ok(bessel_j_half_integer_upward(twice, x));
    }
    if x < 15.0 + nu * nu / 4.0 || x <= nu {
        Ok(bessel_j_series(nu, x))
    } else {
        Ok(bessel_j_hankel(nu, x))
    }
}

/// Closed forms J_{±1/2} and stable upward recurrence (x ≥ ν).
fn bessel_j_half_integer_upward(twice_nu: i64, x: f64) -> f64 {
    let pref = (2.0 / (PI * x)).sqrt();
    let mut jm = pref * x.cos(); // J_{-1/2}
    let mut j = pref * x.sin(); // J_{1/2}
    let mut order: f64 = 0.5;
    while ((2.0 * order).round() as i64) < twice_nu {
        let next = (2.0 * order / x) * j - jm;
        jm = j;
        j = next;
        order += 1.0;
    }
    j
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - log_gamma_unchecked(Complex64::new(nu + 1.0, 0.0)).re).exp();
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Hankel asymptotic expansion, optimally truncated.
fn bessel_j_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
