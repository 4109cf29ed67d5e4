//! Tables of K_ν(x) in the variable u = ln x, for the Fourier sums of the
//! Eisenstein series. Values are stored multiplied by exp(π|Im ν|/2) so that
//! large imaginary orders stay representable.
//!
//! Past the turning point x = |Im ν| the table is piecewise Chebyshev, fitted
//! to direct evaluations. Below it K oscillates and direct evaluation is
//! expensive, so the table holds Taylor expansions obtained by stepping the
//! equation y'' = (e^{2u} + ν²) y backwards from the turning point.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::specfun::bessel_k_scaled;

const DEGREE: usize = 24;
const NODES: usize = DEGREE + 1;
const MAX_DEPTH: u32 = 30;
const REL_TOL: f64 = 1e-14;
const FLOOR_TOL: f64 = 1e-16;
const TAYLOR_ORDER: usize = 32;
// below this |Im ν| direct evaluation is cheap everywhere
const TAYLOR_MIN_IM: f64 = 4.0;

struct Segment {
    lo: f64,
    hi: f64,
    coef: [Complex64; NODES],
}

/// Taylor expansions in u at centers u_top − k·h, k = 0, 1, ...
struct Oscillatory {
    u_top: f64,
    h: f64,
    centers: Vec<[Complex64; TAYLOR_ORDER + 1]>,
}

pub(crate) struct KTable {
    nu: Complex64,
    shift: f64,
    x_lo: f64,
    x_hi: f64,
    segments: Vec<Segment>,
    osc: Option<Oscillatory>,
}

/// Exponent of the decay of K_{a+ib}(x) past the turning point x = |b|,
/// relative to its size exp(−π|b|/2) below it.
pub(crate) fn decay_exponent(nu: Complex64, x: f64) -> f64 {
    let b = nu.im.abs();
    if x <= b {
        return 0.0;
    }
    (x * x - b * b).sqrt() - b * (b / x).acos()
}

/// Smallest x with decay_exponent ≥ target.
pub(crate) fn cutoff(nu: Complex64, target: f64) -> f64 {
    let b = nu.im.abs();
    let mut lo = b;
    let mut hi = b + target + 1.0;
    while decay_exponent(nu, hi) < target {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if decay_exponent(nu, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

impl KTable {
    pub(crate) fn build(nu: Complex64, x_lo: f64, x_hi: f64) -> Result<KTable> {
        if !(x_lo > 0.0 && x_hi > x_lo) {
            return domain(format!("K table: bad range [{x_lo}, {x_hi}]"));
        }
        let shift = 0.5 * PI * nu.im.abs();
        let f = |u: f64| -> Result<Complex64> {
            let (m, e) = bessel_k_scaled(nu, u.exp())?;
            Ok(m * (e + shift).exp())
        };
        let turn = nu.im.abs();
        let osc = if turn > TAYLOR_MIN_IM && x_lo < turn {
            Some(Oscillatory::build(nu, shift, x_lo.ln(), turn.min(x_hi).ln())?)
        } else {
            None
        };
        let (a, b) = (if osc.is_some() { turn.ln() } else { x_lo.ln() }, x_hi.ln());
        if b <= a {
            return Ok(KTable { nu, shift, x_lo, x_hi, segments: Vec::new(), osc });
        }
        let mut global = 0.0f64;
        for k in 0..=64 {
            global = global.max(f(a + (b - a) * k as f64 / 64.0)?.norm());
        }
        let width = (8.0 / (nu.im.abs() + 1.0)).min(1.0);
        let pieces = ((b - a) / width).ceil().max(1.0) as usize;
        let mut segments = Vec::new();
        for i in 0..pieces {
            let lo = a + (b - a) * i as f64 / pieces as f64;
            let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
            fit(&f, lo, hi, global, 0, &mut segments)?;
        }
        Ok(KTable { nu, shift, x_lo, x_hi, segments, osc })
    }

    #[cfg(test)]
    pub(crate) fn shift(&self) -> f64 {
        self.shift
    }

    /// K_ν(x)·exp(π|Im ν|/2).
    pub(crate) fn eval(&self, x: f64) -> Result<Complex64> {
        if x < self.x_lo || x > self.x_hi {
            let (m, e) = bessel_k_scaled(self.nu, x)?;
            return Ok(m * (e + self.shift).exp());
        }
        let u = x.ln();
        if let Some(o) = &self.osc {
            if u <= o.u_top || self.segments.is_empty() {
                return Ok(o.eval(u));
            }
        }
        let i = self.segments.partition_point(|s| s.hi < u).min(self.segments.len() - 1);
        let s = &self.segments[i];
        Ok(clenshaw(&s.coef, (2.0 * u - s.lo - s.hi) / (s.hi - s.lo)))
    }
}

impl Oscillatory {
    fn build(nu: Complex64, shift: f64, u_lo: f64, u_top: f64) -> Result<Oscillatory> {
        let x = u_top.exp();
        let (k0, e0) = bessel_k_scaled(nu, x)?;
        let (k1, e1) = bessel_k_scaled(nu - 1.0, x)?;
        let y = k0 * (e0 + shift).exp();
        // d/du K_ν(e^u) = −x K_{ν−1}(x) − ν K_ν(x)
        let dy = -(k1 * (e1 + shift).exp()) * x - nu * y;
        let h = (1.0 / nu.norm().max(x)).min(0.25);
        let steps = ((u_top - u_lo) / h).ceil() as usize;
        let nu2 = nu * nu;
        let mut centers = Vec::with_capacity(steps + 1);
        let (mut y, mut dy) = (y, dy);
        for k in 0..=steps {
            let c = taylor(u_top - k as f64 * h, nu2, y, dy);
            y = Complex64::new(0.0, 0.0);
            dy = Complex64::new(0.0, 0.0);
            for (j, cj) in c.iter().enumerate().rev() {
                y = y * (-h) + cj;
                if j > 0 {
                    dy = dy * (-h) + cj * j as f64;
                }
            }
            centers.push(c);
        }
        Ok(Oscillatory { u_top, h, centers })
    }

    fn eval(&self, u: f64) -> Complex64 {
        let k = (((self.u_top - u) / self.h).round().max(0.0) as usize).min(self.centers.len() - 1);
        let d = u - (self.u_top - k as f64 * self.h);
        self.centers[k].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * d + c)
    }
}

/// Taylor coefficients at u0 of the solution of y'' = (e^{2u} + ν²) y with the given data.
fn taylor(u0: f64, nu2: Complex64, y: Complex64, dy: Complex64) -> [Complex64; TAYLOR_ORDER + 1] {
    let e = (2.0 * u0).exp();
    let mut q = [0.0f64; TAYLOR_ORDER + 1];
    q[0] = e;
    for j in 1..=TAYLOR_ORDER {
        q[j] = q[j - 1] * 2.0 / j as f64;
    }
    let mut c = [Complex64::new(0.0, 0.0); TAYLOR_ORDER + 1];
    c[0] = y;
    c[1] = dy;
    for k in 0..TAYLOR_ORDER - 1 {
        let mut acc = nu2 * c[k];
        for j in 0..=k {
            acc += c[k - j] * q[j];
        }
        c[k + 2] = acc / ((k + 1) * (k + 2)) as f64;
    }
    c
}

fn fit<F>(f: &F, lo: f64, hi: f64, global: f64, depth: u32, out: &mut Vec<Segment>) -> Result<()>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut vals = [Complex64::new(0.0, 0.0); NODES];
    let mut local = 0.0f64;
    for (k, v) in vals.iter_mut().enumerate() {
        let x = (PI * (k as f64 + 0.5) / NODES as f64).cos();
        *v = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)?;
        local = local.max(v.norm());
    }
    let mut coef = [Complex64::new(0.0, 0.0); NODES];
    for (j, c) in coef.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, v) in vals.iter().enumerate() {
            acc += v * (PI * j as f64 * (k as f64 + 0.5) / NODES as f64).cos();
        }
        *c = acc * (2.0 / NODES as f64);
    }
    coef[0] *= 0.5;
    let tail = coef[NODES - 3..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if tail <= REL_TOL * local || tail <= FLOOR_TOL * global || depth >= MAX_DEPTH {
        out.push(Segment { lo, hi, coef });
        return Ok(());
    }
    let mid = 0.5 * (lo + hi);
    fit(f, lo, mid, global, depth + 1, out)?;
    fit(f, mid, hi, global, depth + 1, out)
}

fn clenshaw(c: &[Complex64; NODES], x: f64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for cj in c.iter().skip(1).rev() {
        let b0 = cj + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * x - b2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    #[test]
    fn table_matches_direct_evaluation() {
        for nu in [Complex64::new(0.0, 17.5), Complex64::new(1.5, 0.0), Complex64::new(0.3, -6.0)] {
            let hi = cutoff(nu, 45.0);
            let t = KTable::build(nu, 4.0, hi).unwrap();
            let peak = (0..200)
                .map(|k| t.eval(4.0 + (hi - 4.0) * k as f64 / 199.0).unwrap().norm())
                .fold(0.0, f64::max);
            for k in 0..97 {
                let x = 4.0 + (hi - 4.0) * (k as f64 + 0.37) / 97.0;
                let direct = bessel_k(nu, x).unwrap() * t.shift().exp();
                assert!((t.eval(x).unwrap() - direct).norm() < 1e-12 * peak, "ν = {nu}, x = {x}");
            }
        }
    }

    #[test]
    fn oscillatory_region_matches_direct_evaluation() {
        for nu in [Complex64::new(0.0, 120.0), Complex64::new(0.0, -35.0), Complex64::new(0.4, 60.0)] {
            let b = nu.im.abs();
            let t = KTable::build(nu, 3.0, b + 40.0).unwrap();
            for k in 0..41 {
                let x = 3.0 + (b + 37.0) * (k as f64 + 0.41) / 41.0;
                let direct = bessel_k(nu, x).unwrap() * t.shift().exp();
                assert!((t.eval(x).unwrap() - direct).norm() < 1e-11, "ν = {nu}, x = {x}: {} vs {direct}", t.eval(x).unwrap());
            }
        }
    }

    #[test]
    fn cutoff_solves_exponent() {
        let nu = Complex64::new(0.0, 40.0);
        let x = cutoff(nu, 45.0);
        assert!((decay_exponent(nu, x) - 45.0).abs() < 1e-9);
        assert_eq!(decay_exponent(nu, 30.0), 0.0);
    }
}
