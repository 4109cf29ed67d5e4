//! Masses of |E|² on geodesic balls, their normalisation against the QUE
//! main terms, mean-value residuals and windowed variances.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eisenstein::EisensteinEvaluator;
use crate::error::{usage, Error, Result};
use crate::geometry::{ball_quadrature, sample_ball, GeodesicBall, Point, QuadratureOrder};
use crate::lattice::ImagQuadField;
use crate::quad::pairwise_sum;
use crate::selberg::mean_value_apply;
use crate::zeta::dedekind_zeta;

/// Smallest Monte Carlo sample accepted by [`ball_mass`].
pub const MIN_MC_COUNT: usize = 1000;

/// vol(PSL₂(ℤ)\ℍ²).
pub const MODULAR_VOLUME: f64 = PI / 3.0;

/// vol(PSL₂(𝒪_K)\ℍ³) = |d_K|^{3/2} ζ_K(2) / (4π²), from the residue of E at s = 2.
pub fn bianchi_volume(field: &ImagQuadField) -> Result<f64> {
    let d = field.discriminant().abs() as f64;
    let z2 = dedekind_zeta(field, Complex64::new(2.0, 0.0))?.re;
    Ok(d.powf(1.5) * z2 / (4.0 * PI * PI))
}

/// Residue of E(P, s) at s = 2, 2π²/(|d_K| ζ_K(2)).
pub fn bianchi_residue(field: &ImagQuadField) -> Result<f64> {
    let d = field.discriminant().abs() as f64;
    let z2 = dedekind_zeta(field, Complex64::new(2.0, 0.0))?.re;
    Ok(2.0 * PI * PI / (d * z2))
}

/// The QUE constant: 1/vol for the modular surface, |𝒪_K^*|√|d_K|/(4 vol) for Bianchi orbifolds.
pub fn main_term(ev: &EisensteinEvaluator) -> Result<f64> {
    match ev {
        EisensteinEvaluator::H2(_) => Ok(1.0 / MODULAR_VOLUME),
        EisensteinEvaluator::H3(e) => {
            let f = &e.field;
            let w = f.unit_count() as f64;
            let sd = (f.discriminant().abs() as f64).sqrt();
            Ok(w * sd / (4.0 * bianchi_volume(f)?))
        }
    }
}

/// log(1/4 + t²) on ℍ², log(1 + t²) on ℍ³.
pub fn log_factor(dim: usize, t: f64) -> f64 {
    if dim == 2 {
        (0.25 + t * t).ln()
    } else {
        (1.0 + t * t).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MassMethod {
    Quadrature,
    MonteCarlo,
}

/// How a ball integral is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    Quadrature(QuadratureOrder),
    MonteCarlo { count: usize, seed: u64 },
}

impl Integration {
    /// Tensor Gauss rule with enough nodes for the oscillation of E(·, s_t) across B_R.
    pub fn for_oscillation(radius: f64, t: f64) -> Self {
        let n = (12.0 + 1.5 * radius * t).ceil().clamp(16.0, 128.0) as usize;
        Integration::Quadrature(QuadratureOrder::uniform(n.max(32)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassResult {
    pub raw_mass: f64,
    pub normalized_mass: f64,
    pub main_term: f64,
    pub deviation: f64,
    pub method: MassMethod,
    /// Standard error of raw_mass (Monte Carlo only, 0 otherwise).
    pub stderr: f64,
}

fn check_ball(ev: &EisensteinEvaluator, ball: &GeodesicBall) -> Result<()> {
    if ball.dimension() != ev.dimension() {
        return usage(format!(
            "ball of dimension {} given to an evaluator of dimension {}",
            ball.dimension(),
            ev.dimension()
        ));
    }
    Ok(())
}

/// ∫_B |E(·, s_t)|² with its normalisation by log-factor·vol(B) and the QUE main term.
pub fn ball_mass(ev: &EisensteinEvaluator, ball: &GeodesicBall, t: f64, how: Integration) -> Result<MassResult> {
    check_ball(ev, ball)?;
    if !(t >= 2.0) {
        return usage(format!("ball_mass: need t ≥ 2, got {t}"));
    }
    let f = |p: &Point| -> Result<f64> { Ok(ev.critical(p, t)?.norm_sqr()) };
    let vol = ball.volume();
    let (raw_mass, stderr, method) = match how {
        Integration::Quadrature(order) => {
            let v = ball_quadrature(ball, |p| f(p).map(|x| Complex64::new(x, 0.0)), order)?;
            (v.re, 0.0, MassMethod::Quadrature)
        }
        Integration::MonteCarlo { count, seed } => {
            if count < MIN_MC_COUNT {
                return usage(format!("ball_mass: Monte Carlo needs at least {MIN_MC_COUNT} samples, got {count}"));
            }
            let pts = sample_ball(ball, seed, count);
            let vals: Vec<f64> = pts.par_iter().map(f).collect::<Result<_>>()?;
            let n = count as f64;
            let mean = pairwise_sum(&vals) / n;
            let sq: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
            let var = pairwise_sum(&sq) / (n - 1.0);
            (vol * mean, vol * (var / n).sqrt(), MassMethod::MonteCarlo)
        }
    };
    let normalized_mass = raw_mass / (log_factor(ev.dimension(), t) * vol);
    let main = main_term(ev)?;
    Ok(MassResult {
        raw_mass,
        normalized_mass,
        main_term: main,
        deviation: normalized_mass - main,
        method,
        stderr,
    })
}

/// |avg_B f − h_R(t) f(center)| / |h_R(t) f(center)| for an eigenfunction f with spectral parameter t.
pub fn mean_value_residual_of<F>(ball: &GeodesicBall, f: F, t: Complex64, order: QuadratureOrder) -> Result<f64>
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    let (avg, predicted) = mean_value_apply(ball, f, t, order)?;
    if predicted.norm() < 1e-12 {
        return Err(Error::Evaluation(format!(
            "mean_value_residual: h·f(center) = {predicted} is too small to be informative"
        )));
    }
    Ok((avg - predicted).norm() / predicted.norm())
}

/// Mean-value residual of E(·, s_t) on the ball.
pub fn mean_value_residual(ev: &EisensteinEvaluator, ball: &GeodesicBall, t: f64, order: QuadratureOrder) -> Result<f64> {
    check_ball(ev, ball)?;
    mean_value_residual_of(ball, |p| ev.critical(p, t), Complex64::new(t, 0.0), order)
}

/// Trapezoidal ∫_T^{2T} g(t)² dt on a grid of the given step (shortened to divide T evenly).
pub fn variance_window_of<G>(t0: f64, grid_step: f64, g: G) -> Result<f64>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return usage(format!("variance_window: grid step must lie in (0, 0.5], got {grid_step}"));
    }
    if !(t0 >= 5.0) {
        return usage(format!("variance_window: need T ≥ 5, got {t0}"));
    }
    let n = (t0 / grid_step).ceil() as usize;
    let h = t0 / n as f64;
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let d = g(t0 + k as f64 * h)?;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            Ok(w * d * d)
        })
        .collect::<Result<_>>()?;
    Ok(h * pairwise_sum(&vals))
}

/// ∫_T^{2T} (normalised mass − main term)² dt over B_R(center).
pub fn variance_window(
    ev: &EisensteinEvaluator,
    center: &Point,
    radius: f64,
    t0: f64,
    grid_step: f64,
    how: Integration,
) -> Result<f64> {
    let ball = GeodesicBall::new(*center, radius)?;
    check_ball(ev, &ball)?;
    variance_window_of(t0, grid_step, |t| Ok(ball_mass(ev, &ball, t, how)?.deviation))
}
