//! Hyperbolic space in the upper-half-space model: points, distances, ball
//! volumes, Möbius transformations, and sampling and quadrature over
//! geodesic balls.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, usage, Error, Result};
use crate::quad::{pairwise_sum_c, GaussLegendre};
use crate::specfun::log_gamma;

/// Radii below this are rejected by [`GeodesicBall::new`].
pub const MIN_RADIUS: f64 = 1e-8;

/// x + iy with y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointH2 {
    pub x: f64,
    pub y: f64,
}

impl PointH2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return domain(format!("PointH2 needs finite x and y > 0, got ({x}, {y})"));
        }
        Ok(PointH2 { x, y })
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// z + rj with r > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointH3 {
    pub z: Complex64,
    pub r: f64,
}

impl PointH3 {
    pub fn new(z: Complex64, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return domain(format!("PointH3 needs finite z and r > 0, got ({z}, {r})"));
        }
        Ok(PointH3 { z, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    H2(PointH2),
    H3(PointH3),
}

impl Point {
    pub fn dimension(&self) -> usize {
        match self {
            Point::H2(_) => 2,
            Point::H3(_) => 3,
        }
    }

    /// The model origin i or j.
    pub fn origin(dimension: usize) -> Result<Point> {
        match dimension {
            2 => Ok(Point::H2(PointH2 { x: 0.0, y: 1.0 })),
            3 => Ok(Point::H3(PointH3 { z: Complex64::new(0.0, 0.0), r: 1.0 })),
            n => usage(format!("points are only modelled in dimensions 2 and 3, got {n}")),
        }
    }

    /// Height above the boundary (y or r).
    pub fn height(&self) -> f64 {
        match self {
            Point::H2(p) => p.y,
            Point::H3(p) => p.r,
        }
    }
}

impl From<PointH2> for Point {
    fn from(p: PointH2) -> Self {
        Point::H2(p)
    }
}

impl From<PointH3> for Point {
    fn from(p: PointH3) -> Self {
        Point::H3(p)
    }
}

/// Hyperbolic distance ρ(P, Q).
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    match (p, q) {
        (Point::H2(a), Point::H2(b)) => Ok(distance_h2(a, b)),
        (Point::H3(a), Point::H3(b)) => Ok(distance_h3(a, b)),
        _ => usage("distance: points of different dimensions"),
    }
}

// cosh ρ − 1 = (Euclidean distance)² / (2 r r') and cosh ρ − 1 = 2 sinh²(ρ/2)
fn rho_from_euclid(sq: f64, r1: f64, r2: f64) -> f64 {
    2.0 * (sq / (4.0 * r1 * r2)).sqrt().asinh()
}

pub fn distance_h2(a: &PointH2, b: &PointH2) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    rho_from_euclid(dx * dx + dy * dy, a.y, b.y)
}

pub fn distance_h3(a: &PointH3, b: &PointH3) -> f64 {
    let dr = a.r - b.r;
    rho_from_euclid((a.z - b.z).norm_sqr() + dr * dr, a.r, b.r)
}

/// Area of the unit sphere S^{n-1} ⊂ ℝⁿ.
pub fn sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / log_gamma(Complex64::new(half, 0.0)).unwrap().re.exp()
}

/// Hyperbolic volume of a ball of radius R in ℍⁿ.
pub fn ball_volume(n: usize, radius: f64) -> Result<f64> {
    if n < 2 {
        return usage(format!("ball_volume: dimension must be at least 2, got {n}"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("ball_volume: need R > 0, got {radius}"));
    }
    Ok(match n {
        2 => {
            let s = (radius / 2.0).sinh();
            4.0 * PI * s * s
        }
        3 => PI * sinh_minus_x(2.0 * radius),
        _ => sphere_area(n) * sinh_power_integral(n - 1, radius),
    })
}

// sinh x − x without cancellation
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() > 0.5 {
        return x.sinh() - x;
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut k = 3.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= x2 / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 2.0;
    }
    sum
}

/// ∫₀ᴿ sinh^k u du by Gauss–Legendre on panels of unit length.
fn sinh_power_integral(k: usize, radius: f64) -> f64 {
    let rule = GaussLegendre::new(40);
    let panels = radius.ceil().max(1.0) as usize;
    let h = radius / panels as f64;
    (0..panels)
        .map(|i| rule.integrate(i as f64 * h, (i + 1) as f64 * h, |u| u.sinh().powi(k as i32)))
        .sum()
}

/// PSL₂(ℂ) element acting on ℍ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius3 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius3 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).norm() > 1e-12 {
            return usage(format!("Mobius3: determinant {det} is not 1"));
        }
        Ok(Mobius3 { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mobius3 { a: one, b: zero, c: zero, d: one }
    }

    /// z ↦ z + w.
    pub fn translation(w: Complex64) -> Self {
        Mobius3 { b: w, ..Mobius3::identity() }
    }

    /// Matrix product self · other.
    pub fn compose(&self, o: &Mobius3) -> Mobius3 {
        Mobius3 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Mobius3 {
        Mobius3 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

/// (aP + b)(cP + d)^{-1} for P = z + rj.
pub fn apply_mobius(m: &Mobius3, p: &PointH3) -> Result<PointH3> {
    let czd = m.c * p.z + m.d;
    let denom = czd.norm_sqr() + m.c.norm_sqr() * p.r * p.r;
    if !(denom > 0.0) {
        return Err(Error::Evaluation("apply_mobius: degenerate denominator".into()));
    }
    let z = ((m.a * p.z + m.b) * czd.conj() + m.a * m.c.conj() * p.r * p.r) / denom;
    Ok(PointH3 { z, r: p.r / denom })
}

/// Positive definite form with its Heegner point −b/2a + i√|d|/2a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeegnerPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub z: PointH2,
}

impl HeegnerPoint {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let d = b * b - 4 * a * c;
        if a <= 0 || d >= 0 {
            return usage(format!("HeegnerPoint: ({a}, {b}, {c}) is not positive definite"));
        }
        let two_a = 2.0 * a as f64;
        let z = PointH2 { x: -(b as f64) / two_a, y: ((-d) as f64).sqrt() / two_a };
        Ok(HeegnerPoint { a, b, c, d, z })
    }
}

/// Closed geodesic ball B_R(center).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicBall {
    pub center: Point,
    pub radius: f64,
}

impl GeodesicBall {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= MIN_RADIUS) || !radius.is_finite() {
            return domain(format!("GeodesicBall: radius must be at least {MIN_RADIUS}, got {radius}"));
        }
        Ok(GeodesicBall { center, radius })
    }

    pub fn dimension(&self) -> usize {
        self.center.dimension()
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.dimension(), self.radius).expect("validated radius")
    }

    /// Lowest height reached by the ball: center height · e^{-R}.
    pub fn min_height(&self) -> f64 {
        self.center.height() * (-self.radius).exp()
    }

    /// The point at distance ρ from the center in the unit direction ξ
    /// (last coordinate vertical) of the tangent space at the center.
    pub fn point_at(&self, rho: f64, xi: &[f64]) -> Point {
        let (ch, sh) = (rho.cosh(), rho.sinh());
        match self.center {
            Point::H2(c) => {
                let den = ch - xi[1] * sh;
                Point::H2(PointH2 { x: c.x + c.y * xi[0] * sh / den, y: c.y / den })
            }
            Point::H3(c) => {
                let den = ch - xi[2] * sh;
                let w = Complex64::new(xi[0], xi[1]) * (sh / den);
                Point::H3(PointH3 { z: c.z + w * c.r, r: c.r / den })
            }
        }
    }

    /// Fraction of the ball volume within distance ρ of the center.
    pub fn radial_cdf(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        if rho >= self.radius {
            return 1.0;
        }
        let n = self.dimension();
        ball_volume(n, rho).unwrap() / self.volume()
    }

    fn inverse_radial_cdf(&self, p: f64) -> f64 {
        let n = self.dimension() as i32;
        let vol = self.volume();
        let area = sphere_area(n as usize);
        let (mut lo, mut hi) = (0.0, self.radius);
        let mut rho = self.radius * p.powf(1.0 / n as f64);
        for _ in 0..100 {
            let f = self.radial_cdf(rho) - p;
            if f > 0.0 {
                hi = rho;
            } else {
                lo = rho;
            }
            let df = area * rho.sinh().powi(n - 1) / vol;
            let mut next = rho - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - rho).abs() <= 1e-15 * self.radius {
                return next;
            }
            rho = next;
        }
        rho
    }
}

fn random_direction(dim: usize, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let phi = 2.0 * PI * rng.random::<f64>();
    if dim == 2 {
        [phi.cos(), phi.sin(), 0.0]
    } else {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let s = (1.0 - u * u).max(0.0).sqrt();
        [s * phi.cos(), s * phi.sin(), u]
    }
}

/// `count` points i.i.d. uniform in the ball for the hyperbolic volume,
/// deterministic in `seed`.
pub fn sample_ball(ball: &GeodesicBall, seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = ball.dimension();
    (0..count)
        .map(|_| {
            let rho = ball.inverse_radial_cdf(rng.random::<f64>());
            let xi = random_direction(dim, &mut rng);
            ball.point_at(rho, &xi)
        })
        .collect()
}

/// Nodes per coordinate of the polar tensor rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureOrder {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl QuadratureOrder {
    pub fn uniform(n: usize) -> Self {
        QuadratureOrder { radial: n, polar: n, azimuthal: n }
    }
}

impl Default for QuadratureOrder {
    fn default() -> Self {
        QuadratureOrder::uniform(32)
    }
}

/// Quadrature nodes (point, weight) in geodesic polar coordinates around
/// the center; weights sum to the ball volume.
pub fn ball_nodes(ball: &GeodesicBall, order: QuadratureOrder) -> Vec<(Point, f64)> {
    let radial = GaussLegendre::new(order.radial.max(1));
    let dim = ball.dimension();
    let m = order.azimuthal.max(1);
    let dphi = 2.0 * PI / m as f64;
    let mut out = Vec::new();
    for (rho, wr) in radial.mapped(0.0, ball.radius) {
        let wr = wr * rho.sinh().powi(dim as i32 - 1);
        if dim == 2 {
            for k in 0..m {
                let phi = k as f64 * dphi;
                out.push((ball.point_at(rho, &[phi.cos(), phi.sin()]), wr * dphi));
            }
        } else {
            let polar = GaussLegendre::new(order.polar.max(1));
            for (u, wu) in polar.mapped(-1.0, 1.0) {
                let s = (1.0 - u * u).sqrt();
                for k in 0..m {
                    let phi = k as f64 * dphi;
                    let xi = [s * phi.cos(), s * phi.sin(), u];
                    out.push((ball.point_at(rho, &xi), wr * wu * dphi));
                }
            }
        }
    }
    out
}

/// ∫_B f dv against the hyperbolic volume element. Evaluations run in
/// parallel; the sum is reduced in a fixed order.
pub fn ball_quadrature<F>(ball: &GeodesicBall, f: F, order: QuadratureOrder) -> Result<Complex64>
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    let nodes = ball_nodes(ball, order);
    let values: Vec<Complex64> = nodes
        .par_iter()
        .map(|(p, w)| {
            let v = f(p)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Evaluation(format!("ball_quadrature: integrand not finite at {p:?}")));
            }
            Ok(v * *w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum_c(&values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(r: f64) -> Point {
        Point::H3(PointH3::new(Complex64::new(0.0, 0.0), r).unwrap())
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&j(1.0), &j(1.0)).unwrap(), 0.0);
        assert!((distance(&j(1.0), &j(2.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let a = Point::H2(PointH2::new(0.0, 1.0).unwrap());
        let b = Point::H2(PointH2::new(1.0, 1.0).unwrap());
        // arccosh(3/2) = ln((3 + √5)/2)
        let want = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((distance(&a, &b).unwrap() - want).abs() < 1e-15);
        assert!(matches!(distance(&a, &j(1.0)), Err(Error::Usage(_))));
    }

    #[test]
    fn volumes() {
        let v = ball_volume(3, 0.1).unwrap();
        // π(sinh 0.2 − 0.2) from the Taylor series
        let x: f64 = 0.2;
        let series = PI
            * (x.powi(3) / 6.0
                + x.powi(5) / 120.0
                + x.powi(7) / 5040.0
                + x.powi(9) / 362_880.0
                + x.powi(11) / 39_916_800.0);
        assert!((v - series).abs() < 1e-17);
        assert!((v - 4.1971e-3).abs() < 1e-7);
        assert!((ball_volume(2, 1.0).unwrap() - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 1e-14);
        let r = 1e-4;
        assert!((ball_volume(3, r).unwrap() / (r * r * r) - 4.0 * PI / 3.0).abs() < 1e-7);
        assert!(matches!(ball_volume(3, 0.0), Err(Error::Domain(_))));
        // general-n route against the closed forms
        assert!((sphere_area(3) * sinh_power_integral(2, 1.3) - ball_volume(3, 1.3).unwrap()).abs() < 1e-12);
        assert!((sphere_area(2) * sinh_power_integral(1, 0.7) - ball_volume(2, 0.7).unwrap()).abs() < 1e-13);
        // H⁴: ω₃ ∫ sinh³ = 2π² (cosh³R/3 − cosh R + 2/3)
        let c = 0.9f64.cosh();
        let want = 2.0 * PI * PI * (c.powi(3) / 3.0 - c + 2.0 / 3.0);
        assert!((ball_volume(4, 0.9).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn mobius_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let t = Mobius3::new(one, one, zero, one).unwrap();
        let p = apply_mobius(&t, &PointH3::new(zero, 1.0).unwrap()).unwrap();
        assert_eq!((p.z, p.r), (one, 1.0));
        let s = Mobius3::new(zero, -one, one, zero).unwrap();
        let p = apply_mobius(&s, &PointH3::new(zero, 1.0).unwrap()).unwrap();
        assert!(p.z.norm() < 1e-15 && (p.r - 1.0).abs() < 1e-15);
        let p = apply_mobius(&s, &PointH3::new(zero, 2.0).unwrap()).unwrap();
        assert!(p.z.norm() < 1e-15 && (p.r - 0.5).abs() < 1e-15);
        assert!(Mobius3::new(one, one, one, one).is_err());
    }

    #[test]
    fn heegner_points() {
        let h = HeegnerPoint::new(1, 0, 1).unwrap();
        assert_eq!((h.z.x, h.z.y, h.d), (0.0, 1.0, -4));
        let h = HeegnerPoint::new(1, -1, 1).unwrap();
        assert!((h.z.x - 0.5).abs() < 1e-15 && (h.z.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(HeegnerPoint::new(1, 2, 1).is_err());
    }

    #[test]
    fn point_at_has_requested_distance() {
        let ball = GeodesicBall::new(Point::H3(PointH3::new(Complex64::new(0.3, -0.2), 0.7).unwrap()), 1.0).unwrap();
        let xi = [0.48, -0.6, 0.64];
        let p = ball.point_at(0.83, &xi);
        assert!((distance(&ball.center, &p).unwrap() - 0.83).abs() < 1e-13);
    }

    #[test]
    fn quadrature_of_one_is_the_volume() {
        for (center, r) in [
            (Point::H2(PointH2::new(0.2, 1.5).unwrap()), 0.8),
            (j(0.5), 1.2),
        ] {
            let ball = GeodesicBall::new(center, r).unwrap();
            let v = ball_quadrature(&ball, |_| Ok(Complex64::new(1.0, 0.0)), QuadratureOrder::default()).unwrap();
            assert!((v.re - ball.volume()).abs() < 1e-12 * ball.volume());
        }
    }

    #[test]
    fn quadrature_radial_reduction() {
        let ball = GeodesicBall::new(j(1.0), 1.0).unwrap();
        let center = ball.center;
        let q = ball_quadrature(
            &ball,
            |p| Ok(Complex64::new((-distance(&center, p).unwrap()).exp(), 0.0)),
            QuadratureOrder::default(),
        )
        .unwrap();
        let rule = GaussLegendre::new(60);
        let radial = rule.integrate(0.0, 1.0, |u| (-u).exp() * 4.0 * PI * u.sinh().powi(2));
        assert!((q.re - radial).abs() < 1e-8);
    }

    #[test]
    fn sampling_is_deterministic() {
        let ball = GeodesicBall::new(j(1.0), 1.0).unwrap();
        assert!(sample_ball(&ball, 7, 0).is_empty());
        assert_eq!(sample_ball(&ball, 7, 100), sample_ball(&ball, 7, 100));
        assert_ne!(sample_ball(&ball, 7, 10), sample_ball(&ball, 8, 10));
    }

    #[test]
    fn rejects_degenerate_balls() {
        assert!(GeodesicBall::new(j(1.0), 1e-9).is_err());
    }
}
