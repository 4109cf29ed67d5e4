//! Gamma-factor asymptotics of the triple product formulae, the regularised
//! Eisenstein triple products, and the Cauchy–Schwarz lower bound for ball
//! masses at Heegner points.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::h2::eis_h2_heegner;
use crate::error::{domain, usage, Result};
use crate::geometry::HeegnerPoint;
use crate::lattice::ImagQuadField;
use crate::selberg::{h_char, BallKernel};
use crate::specfun::log_gamma;
use crate::zeta::{dedekind_zeta, riemann_zeta, ZetaBackend};

/// Archimedean factor of a triple product together with its Stirling surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactorReport {
    /// 𝒬(t_j, t) = 4|t_j| − |2t_j+t| − |2t_j−t|
    pub q: f64,
    /// 𝒫₂ or 𝒫₃
    pub p: f64,
    pub gamma_exact: f64,
    /// exp(π𝒬/2)/𝒫
    pub gamma_asym: f64,
    pub log_exact: f64,
    pub log_asym: f64,
}

impl GammaFactorReport {
    /// gamma_exact / gamma_asym, computed from the logarithms.
    pub fn ratio(&self) -> f64 {
        (self.log_exact - self.log_asym).exp()
    }
}

fn lg(re: f64, im: f64) -> f64 {
    log_gamma(Complex64::new(re, im)).expect("no poles off the real axis").re
}

pub fn q_factor(tj: f64, t: f64) -> f64 {
    4.0 * tj.abs() - (2.0 * tj + t).abs() - (2.0 * tj - t).abs()
}

pub fn p2_factor(tj: f64, t: f64) -> f64 {
    (1.0 + t.abs()) * (1.0 + (2.0 * tj + t).abs()).sqrt() * (1.0 + (2.0 * tj - t).abs()).sqrt()
}

pub fn p3_factor(tj: f64, t: f64) -> f64 {
    (1.0 + t.abs()) * (1.0 + tj.abs()).powi(2)
}

/// γ₂ or γ₃ at (t_j, t): the exact gamma quotient and exp(π𝒬/2)/𝒫.
pub fn gamma_factors(dim: usize, tj: f64, t: f64) -> Result<GammaFactorReport> {
    let (log_exact, p) = match dim {
        2 => (
            4.0 * lg(0.25, 0.5 * t) + 2.0 * lg(0.25, tj + 0.5 * t) + 2.0 * lg(0.25, tj - 0.5 * t)
                - 4.0 * lg(0.5, tj)
                - 2.0 * lg(0.5, t),
            p2_factor(tj, t),
        ),
        3 => (
            4.0 * lg(0.5, 0.5 * t) + 2.0 * lg(0.5, tj + 0.5 * t) + 2.0 * lg(0.5, tj - 0.5 * t)
                - 4.0 * lg(1.0, tj)
                - 2.0 * lg(1.0, t),
            p3_factor(tj, t),
        ),
        _ => return usage(format!("gamma_factors: dimension must be 2 or 3, got {dim}")),
    };
    let q = q_factor(tj, t);
    let log_asym = 0.5 * PI * q - p.ln();
    Ok(GammaFactorReport { q, p, gamma_exact: log_exact.exp(), gamma_asym: log_asym.exp(), log_exact, log_asym })
}

fn ln_nonzero(z: Complex64, what: &str) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return domain(format!("reg_triple: {what} vanishes"));
    }
    Ok(z.ln())
}

/// ln Λ(s), Λ(s) = π^{−s/2}Γ(s/2)ζ(s).
fn ln_completed_zeta(s: Complex64) -> Result<Complex64> {
    Ok(-0.5 * s * PI.ln() + log_gamma(s * 0.5)? + ln_nonzero(riemann_zeta(s)?, "ζ")?)
}

fn ln_zeta_k(field: &ImagQuadField, s: Complex64) -> Result<Complex64> {
    ln_nonzero(dedekind_zeta(field, s)?, "ζ_K")
}

/// The regularised triple product ⟨|E(·, s_t)|², E(·, s_t′)⟩ with its unknown
/// constant set to 1. For dim 3 the field is ℚ(i) unless given.
pub fn reg_triple(dim: usize, t: f64, tp: f64) -> Result<Complex64> {
    reg_triple_in(dim, t, tp, &ImagQuadField::gaussian())
}

pub fn reg_triple_in(dim: usize, t: f64, tp: f64, field: &ImagQuadField) -> Result<Complex64> {
    if t == 0.0 || tp == 0.0 {
        return domain(format!("reg_triple: pole of the denominator at (t, t′) = ({t}, {tp})"));
    }
    let c = Complex64::new;
    let ln = match dim {
        2 => {
            let l = ln_completed_zeta;
            l(c(0.5, -tp))? * 2.0 + l(c(0.5, 2.0 * t - tp))? + l(c(0.5, -(2.0 * t + tp)))?
                - l(c(1.0, 2.0 * t))?
                - l(c(1.0, -2.0 * t))?
                - l(c(1.0, -2.0 * tp))?
        }
        3 => {
            let g = |s: Complex64| log_gamma(s);
            let z = |s: Complex64| ln_zeta_k(field, s);
            let h = c(0.5, 0.5 * tp);
            let gam = g(h)? * 2.0 + g(h - c(0.0, t))? + g(h + c(0.0, t))?
                - g(c(1.0, tp))?
                - g(c(1.0, t))?
                - g(c(1.0, -t))?;
            let zet = z(h)? * 2.0 + z(h - c(0.0, t))? + z(h + c(0.0, t))?
                - z(c(1.0, tp))?
                - z(c(1.0, t))?
                - z(c(1.0, -t))?;
            gam + zet
        }
        _ => return usage(format!("reg_triple: dimension must be 2 or 3, got {dim}")),
    };
    crate::error::finite(ln.exp(), "reg_triple")
}

/// Stirling surrogate of |reg_triple|²: γ(t, t′) from exp(π𝒬/2)/𝒫 times the
/// displayed product of zeta moduli.
pub fn reg_triple_surrogate(dim: usize, t: f64, tp: f64) -> Result<f64> {
    reg_triple_surrogate_in(dim, t, tp, &ImagQuadField::gaussian())
}

pub fn reg_triple_surrogate_in(dim: usize, t: f64, tp: f64, field: &ImagQuadField) -> Result<f64> {
    let gamma = gamma_factors(dim, t, tp)?;
    let c = Complex64::new;
    let ln = match dim {
        2 => {
            let z = |s: Complex64| -> Result<f64> { Ok(riemann_zeta(s)?.norm().ln()) };
            4.0 * z(c(0.5, -tp))? + 2.0 * z(c(0.5, 2.0 * t - tp))? + 2.0 * z(c(0.5, -(2.0 * t + tp)))?
                - 4.0 * z(c(1.0, 2.0 * t))?
                - 2.0 * z(c(1.0, -2.0 * tp))?
        }
        _ => {
            let z = |s: Complex64| -> Result<f64> { Ok(dedekind_zeta(field, s)?.norm().ln()) };
            4.0 * z(c(0.5, 0.5 * tp))? + 2.0 * z(c(0.5, t + 0.5 * tp))? + 2.0 * z(c(0.5, t - 0.5 * tp))?
                - 4.0 * z(c(1.0, t))?
                - 2.0 * z(c(1.0, tp))?
        }
    };
    Ok((gamma.log_asym + ln).exp())
}

/// h_R(t)·E(w, 1/2+it): the ball average of E over B_R(w) at a Heegner point.
pub fn heegner_average(w: &HeegnerPoint, radius: f64, t: f64) -> Result<Complex64> {
    let kernel = BallKernel::new(2, radius)?;
    let h = h_char(&kernel, Complex64::new(t, 0.0))?;
    Ok(h * eis_h2_heegner(w, Complex64::new(0.5, t), &ZetaBackend::default())?)
}

/// |h_R(t) E(w, 1/2+it)|² / log(1/4 + t²), the Cauchy–Schwarz lower bound
/// for the normalised mass of |E(·, 1/2+it)|² on B_R(w).
pub fn lower_bound_avg(w: &HeegnerPoint, radius: f64, t: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return domain(format!("lower_bound_avg: need R > 0, got {radius}"));
    }
    if !(t >= 2.0) {
        return usage(format!("lower_bound_avg: need t ≥ 2, got {t}"));
    }
    Ok(heegner_average(w, radius, t)?.norm_sqr() / (0.25 + t * t).ln())
}
