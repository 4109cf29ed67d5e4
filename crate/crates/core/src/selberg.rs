//! Selberg transform h_{R,n}(t) of the normalised characteristic kernel of
//! a geodesic ball, by quadrature, by the ℍ³ closed form and by the small-R
//! Bessel asymptotic, and the mean-value operator it describes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::geometry::{ball_quadrature, ball_volume, GeodesicBall, Point, QuadratureOrder};
use crate::quad::{pairwise_sum_c, GaussLegendre};
use crate::specfun::{bessel_j, log_gamma};

const PANEL_NODES: usize = 24;

/// k(u) = χ_{[0,R]}(u) / vol(B_R) on ℍⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallKernel {
    pub n: usize,
    pub radius: f64,
}

impl BallKernel {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n < 2 {
            return usage(format!("BallKernel: dimension must be at least 2, got {n}"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("BallKernel: need R > 0, got {radius}"));
        }
        Ok(BallKernel { n, radius })
    }

    /// The spectral parameter i(n−1)/2 of the constant eigenfunction.
    pub fn constant_parameter(&self) -> Complex64 {
        Complex64::new(0.0, 0.5 * (self.n as f64 - 1.0))
    }
}

/// ∫₀ᴿ (cosh R − cosh u)^{(n−1)/2} cos(tu) du.
fn radial_integral(k: &BallKernel, t: Complex64) -> Complex64 {
    let r = k.radius;
    let power = 0.5 * (k.n as f64 - 1.0);
    let rule = GaussLegendre::new(PANEL_NODES);
    // cosh R − cosh u = 2 sinh((R+u)/2) sinh((R−u)/2)
    let weight = |u: f64, gap_half_sinh: f64| (2.0 * (0.5 * (r + u)).sinh() * gap_half_sinh).powf(power);
    let freq = t.norm().max(1.0);
    let panels = ((r * freq / PI).ceil() as usize).max(4);
    let h = r / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for i in 0..panels - 1 {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        parts.push(rule.integrate_c(a, b, |u| (t * u).cos() * weight(u, (0.5 * (r - u)).sinh())));
    }
    // last panel: u = R − w², smooth in w
    let wmax = h.sqrt();
    parts.push(rule.integrate_c(0.0, wmax, |w| {
        let u = r - w * w;
        (t * u).cos() * weight(u, (0.5 * w * w).sinh()) * (2.0 * w)
    }));
    pairwise_sum_c(&parts)
}

/// h_{R,n}(t), normalised so that h(i(n−1)/2) = 1.
pub fn h_char(kernel: &BallKernel, t: Complex64) -> Result<Complex64> {
    let strip = 0.5 * (kernel.n as f64 - 1.0);
    if t.im.abs() > strip + 1e-12 {
        return usage(format!("h_char: |Im t| must not exceed {strip}, got {t}"));
    }
    let num = radial_integral(kernel, t);
    let den = radial_integral(kernel, kernel.constant_parameter());
    let mut h = num / den;
    if t.im == 0.0 {
        h.im = 0.0;
    }
    Ok(h)
}

/// h_char for real t.
pub fn h_char_real(kernel: &BallKernel, t: f64) -> Result<f64> {
    h_char(kernel, Complex64::new(t, 0.0)).map(|h| h.re)
}

/// Closed form of h_{R,3}(t) from the spherical function sin(tr)/(t sinh r).
pub fn h_closed_h3(radius: f64, t: f64) -> Result<f64> {
    h_closed_h3_complex(radius, Complex64::new(t, 0.0)).map(|h| h.re)
}

pub fn h_closed_h3_complex(radius: f64, t: Complex64) -> Result<Complex64> {
    let r = radius;
    let vol = ball_volume(3, r)?;
    let (ch, sh) = (r.cosh(), r.sinh());
    let i = Complex64::i();
    if t.norm() < 1e-3 {
        // g(t)/t = (R cosh R − sinh R) + t²(R² sinh R/2 − R³ cosh R/6) + O(t⁴)
        let g0 = r * ch - sh;
        let g2 = 0.5 * r * r * sh - r * r * r * ch / 6.0;
        return Ok((t * t * g2 + g0) * 4.0 * PI / ((t * t + 1.0) * vol));
    }
    if (t - i).norm() < 1e-3 {
        // Taylor quotient of numerator and denominator around their common zero t = i
        let e = t - i;
        let g1 = Complex64::new(r - sh * ch, 0.0);
        let g2 = i * (2.0 * r * sh * sh);
        let g3 = Complex64::new(-r * r * r + 3.0 * r * r * sh * ch, 0.0);
        let d1 = Complex64::new(-2.0 * vol, 0.0);
        let d2 = i * (6.0 * vol);
        let d3 = Complex64::new(6.0 * vol, 0.0);
        let num = g1 + g2 * e / 2.0 + g3 * e * e / 6.0;
        let den = d1 + d2 * e / 2.0 + d3 * e * e / 6.0;
        return Ok(num / den * 4.0 * PI);
    }
    let g = (t * r).sin() * ch - t * sh * (t * r).cos();
    Ok(g * 4.0 * PI / ((t * t + 1.0) * t * vol))
}

/// Γ(n/2+1) (2/x)^{n/2} J_{n/2}(x) at x = Rt, the R → 0 limit of h_{R,n}.
pub fn h_bessel_asym(kernel: &BallKernel, t: f64) -> Result<f64> {
    let x = kernel.radius * t;
    if x < 5.0 || kernel.radius > 0.2 {
        return usage(format!(
            "h_bessel_asym: needs Rt ≥ 5 and R ≤ 0.2, got R = {}, t = {t}",
            kernel.radius
        ));
    }
    let nu = kernel.n as f64 / 2.0;
    let lg = log_gamma(Complex64::new(nu + 1.0, 0.0))?.re;
    Ok((lg + nu * (2.0 / x).ln()).exp() * bessel_j(nu, x)?)
}

/// Ball average of an eigenfunction against the prediction h(t)·f(center).
pub fn mean_value_apply<F>(
    ball: &GeodesicBall,
    eigenfunction: F,
    t: Complex64,
    order: QuadratureOrder,
) -> Result<(Complex64, Complex64)>
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    let kernel = BallKernel::new(ball.dimension(), ball.radius)?;
    let avg = ball_quadrature(ball, &eigenfunction, order)? / ball.volume();
    let predicted = h_char(&kernel, t)? * eigenfunction(&ball.center)?;
    Ok((avg, predicted))
}
