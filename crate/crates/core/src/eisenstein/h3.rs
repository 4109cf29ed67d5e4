//! Eisenstein series of PSL₂(𝒪_K) on ℍ³ for the nine class-number-one
//! imaginary quadratic fields.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use super::h2::REDUCTION_CAP;
use super::ktable::{cutoff, decay_exponent, KTable};
use crate::error::{domain, usage, Error, Result};
use crate::geometry::{apply_mobius, Mobius3, PointH3};
use crate::lattice::{divisor_sigma, AlgebraicInt, ImagQuadField};
use crate::quad::pairwise_sum;
use crate::specfun::{log_gamma, PrecisionPolicy};
use crate::zeta::{dedekind_zeta_with, scattering_phi_k, ZetaBackend};

/// Which of the two standard normalisations an evaluator returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// Sum over Γ'_∞\Γ; equals (|𝒪_K^*|/2)·E_∞.
    #[default]
    E,
    /// Sum over Γ_∞\Γ.
    EInfinity,
}

fn translate(field: &ImagQuadField, z: Complex64) -> Complex64 {
    let om = field.omega();
    let v = (z.im / om.im).round();
    let w = z - om * v;
    let w = w - w.re.round();
    let mut best = w;
    for m in -1..=1 {
        for n in -1..=1 {
            let c = w - om * n as f64 - m as f64;
            if c.norm_sqr() < best.norm_sqr() - 1e-15 {
                best = c;
            }
        }
    }
    best
}

/// Lattice points of 𝒪_K (as (u, v) with value u + vω) in the closed disk |x − center| ≤ radius.
fn disk_points(field: &ImagQuadField, center: Complex64, radius: f64) -> Vec<AlgebraicInt> {
    let om = field.omega();
    let mut out = Vec::new();
    let v0 = ((center.im - radius) / om.im).ceil() as i64;
    let v1 = ((center.im + radius) / om.im).floor() as i64;
    for v in v0..=v1 {
        let row = om * v as f64;
        let dy = center.im - row.im;
        let half = (radius * radius - dy * dy).max(0.0).sqrt();
        let u0 = (center.re - row.re - half).ceil() as i64;
        let u1 = (center.re - row.re + half).floor() as i64;
        for u in u0..=u1 {
            out.push(AlgebraicInt::new(u, v));
        }
    }
    out
}

/// Bottom row (c, d) maximising the height of γP among |cz+d|² + |c|²r² < 1, if any.
fn best_inversion(field: &ImagQuadField, p: &PointH3) -> Option<(AlgebraicInt, AlgebraicInt, f64)> {
    let r2 = p.r * p.r;
    let c_max = (1.0 / r2).floor() as i64;
    if c_max < 1 {
        return None;
    }
    let mut best: Option<(AlgebraicInt, AlgebraicInt, f64)> = None;
    for c in field.enumerate_by_norm(c_max).ok()? {
        let cc = field.to_complex(c);
        let room = 1.0 - cc.norm_sqr() * r2;
        if room <= 0.0 {
            continue;
        }
        for d in disk_points(field, -cc * p.z, room.sqrt()) {
            let q = (cc * p.z + field.to_complex(d)).norm_sqr() + cc.norm_sqr() * r2;
            if q < 1.0 - 1e-13 && best.map_or(true, |b| q < b.2 - 1e-15) && field.coprime(c, d) {
                best = Some((c, d, q));
            }
        }
    }
    best
}

/// A matrix of PSL₂(𝒪_K) with bottom row (c, d), c ≠ 0, gcd(c, d) = 1.
fn complete_matrix(field: &ImagQuadField, c: AlgebraicInt, d: AlgebraicInt) -> Result<Mobius3> {
    let n = field.norm(c);
    for u in 0..n {
        for v in 0..n {
            let a = AlgebraicInt::new(u, v);
            let num = field.sub(field.mul(a, d), AlgebraicInt::ONE);
            if let Some(b) = field.div_exact(num, c) {
                // ad − bc = 1 holds exactly in 𝒪_K
                let f = |x| field.to_complex(x);
                return Ok(Mobius3 { a: f(a), b: f(b), c: f(c), d: f(d) });
            }
        }
    }
    Err(Error::Evaluation(format!("reduce_h3: no inverse of {d} modulo {c}")))
}

/// Move P into the region where z is a shortest translate modulo 𝒪_K and
/// no element of PSL₂(𝒪_K) raises the height.
pub fn reduce_h3(field: &ImagQuadField, p: &PointH3) -> Result<PointH3> {
    let mut q = *p;
    for _ in 0..REDUCTION_CAP {
        q.z = translate(field, q.z);
        let n = q.z.norm_sqr() + q.r * q.r;
        if n < 1.0 - 1e-13 {
            q = PointH3 { z: -q.z.conj() / n, r: q.r / n };
            continue;
        }
        match best_inversion(field, &q) {
            None => return Ok(q),
            Some((c, d, _)) => {
                let m = complete_matrix(field, c, d)?;
                q = apply_mobius(&m, &q)?;
            }
        }
    }
    Err(Error::Evaluation(format!("reduce_h3: no convergence for {p:?}")))
}

fn floor_with_cap(field: &ImagQuadField, cap: i64) -> f64 {
    const GRID: usize = 160;
    let om = field.omega();
    let cs: Vec<Complex64> = field.enumerate_by_norm(cap).expect("cap ≥ 1").into_iter().map(|c| field.to_complex(c)).collect();
    (0..GRID * GRID)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / GRID, k % GRID);
            let z = om * (j as f64 / GRID as f64) + i as f64 / GRID as f64;
            // squared height of the floor above z
            let mut h2 = 0.0f64;
            for &c in &cs {
                let n = c.norm_sqr();
                if 1.0 / n <= h2 {
                    break;
                }
                for d in disk_points(field, -c * z, 1.0) {
                    let dd = field.to_complex(d);
                    h2 = h2.max((1.0 - (c * z + dd).norm_sqr()) / n);
                }
            }
            h2.sqrt()
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Lowest height of the reduced region: the minimum over z of the floor
/// max_{c,d} √((1 − |cz+d|²)/|c|²), sampled on a grid and lowered by 2%.
pub fn h3_height_floor(field: &ImagQuadField) -> f64 {
    static CACHE: OnceLock<RwLock<HashMap<i64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().unwrap().get(&field.d()) {
        return *v;
    }
    let mut cap = 16;
    let f = loop {
        let f = floor_with_cap(field, cap);
        if f * f * cap as f64 >= 1.0 {
            break f;
        }
        cap *= 4;
    };
    let v = 0.98 * f;
    cache.write().unwrap().insert(field.d(), v);
    v
}

struct FourierData {
    /// 2(2π)^{1+s}/(|d_K|^{(1+s)/2}Γ(1+s)ζ_K(1+s)) · exp(−π|Im s|/2)
    coef: Complex64,
    phi: Complex64,
    x_cut: f64,
    /// (ω, N(ω), |ω|^s σ_{−s}(ω)) sorted by norm
    terms: Vec<(Complex64, i64, Complex64)>,
    table: KTable,
}

/// E(P, s) on PSL₂(𝒪_K)\ℍ³ through its Fourier expansion at the cusp,
/// critical line Re s = 1.
pub struct EisensteinH3 {
    pub field: ImagQuadField,
    pub normalization: Normalization,
    norm_cap: Option<i64>,
    pub zeta: ZetaBackend,
    pub height_floor: f64,
    pub precision: PrecisionPolicy,
    cache: RwLock<HashMap<(u64, u64), Arc<FourierData>>>,
}

impl std::fmt::Debug for EisensteinH3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EisensteinH3")
            .field("field", &self.field.d())
            .field("normalization", &self.normalization)
            .field("norm_cap", &self.norm_cap)
            .field("height_floor", &self.height_floor)
            .finish()
    }
}

impl Clone for EisensteinH3 {
    fn clone(&self) -> Self {
        EisensteinH3 {
            field: self.field,
            normalization: self.normalization,
            norm_cap: self.norm_cap,
            zeta: self.zeta.clone(),
            height_floor: self.height_floor,
            precision: self.precision,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl EisensteinH3 {
    pub fn new(field: ImagQuadField) -> Result<Self> {
        Ok(EisensteinH3 {
            field,
            normalization: Normalization::E,
            norm_cap: None,
            zeta: ZetaBackend::default(),
            height_floor: h3_height_floor(&field),
            precision: PrecisionPolicy::default(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_normalization(mut self, n: Normalization) -> Self {
        self.normalization = n;
        self
    }

    /// Fixed cap on N(ω) in the Fourier sum.
    pub fn with_norm_cap(mut self, cap: i64) -> Result<Self> {
        let x = 4.0 * PI * (cap as f64).sqrt() * self.height_floor / self.sqrt_d();
        if (-x).exp() > self.precision.abs_tol {
            return usage(format!("EisensteinH3: norm cap {cap} leaves tail e^(-{x:.2}) above abs_tol at the floor"));
        }
        self.norm_cap = Some(cap);
        Ok(self)
    }

    pub fn with_height_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0) || !floor.is_finite() {
            return domain(format!("EisensteinH3: height floor must be positive, got {floor}"));
        }
        self.height_floor = floor;
        Ok(self)
    }

    pub fn with_zeta(mut self, zeta: ZetaBackend) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn with_precision(mut self, precision: PrecisionPolicy) -> Self {
        self.precision = precision;
        self
    }

    pub fn norm_cap(&self) -> Option<i64> {
        self.norm_cap
    }

    fn sqrt_d(&self) -> f64 {
        (self.field.discriminant().abs() as f64).sqrt()
    }

    fn scale(&self) -> f64 {
        match self.normalization {
            Normalization::E => 0.5 * self.field.unit_count() as f64,
            Normalization::EInfinity => 1.0,
        }
    }

    fn data(&self, sf: Complex64) -> Result<Arc<FourierData>> {
        let key = (sf.re.to_bits(), sf.im.to_bits());
        if let Some(d) = self.cache.read().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let sd = self.sqrt_d();
        let shift = 0.5 * PI * sf.im.abs();
        let s1 = sf + 1.0;
        let zk = dedekind_zeta_with(&self.field, s1, &self.zeta)?;
        if zk.norm() == 0.0 {
            return domain(format!("eis_h3: ζ_K(1+s) vanishes at s = {}", s1));
        }
        let lg = log_gamma(s1).map_err(|_| Error::Domain(format!("eis_h3: Γ pole at s = {s1}")))?;
        let coef = (s1 * (2.0 * PI).ln() - s1 * sd.ln() - lg - shift).exp() * 2.0 / zk;
        let phi = scattering_phi_k(&self.field, sf)?;
        let target = -self.precision.abs_tol.ln() + 10.0 + 3.0 * sf.re.abs();
        let x_cut = cutoff(sf, target);
        let unit = 4.0 * PI / sd;
        let mut n_max = ((x_cut / (unit * self.height_floor)).powi(2)).ceil() as i64;
        if let Some(cap) = self.norm_cap {
            n_max = n_max.min(cap);
        }
        let omegas = self.field.enumerate_by_norm(n_max.max(1))?;
        let field = self.field;
        let terms = omegas
            .par_iter()
            .map(|&w| {
                let n = field.norm(w);
                let b = ((n as f64).ln() * 0.5 * sf).exp() * divisor_sigma(&field, -sf, w)?;
                Ok((field.to_complex(w), n, b))
            })
            .collect::<Result<Vec<_>>>()?;
        let x_lo = unit * self.height_floor;
        let table = KTable::build(sf, x_lo * (1.0 - 1e-12), x_cut.max(2.0 * x_lo))?;
        let d = Arc::new(FourierData { coef, phi, x_cut, terms, table });
        self.cache.write().unwrap().entry(key).or_insert(d.clone());
        Ok(d)
    }

    fn norm_limit(&self, d: &FourierData, r: f64) -> i64 {
        let x = d.x_cut * self.sqrt_d() / (4.0 * PI * r);
        (x * x).floor() as i64
    }

    /// E(P, s), s on the critical line Re s = 1 or anywhere off the poles.
    pub fn eval(&self, p: &PointH3, s: Complex64) -> Result<Complex64> {
        let sf = s - 1.0;
        if sf == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if sf == Complex64::new(1.0, 0.0) || sf == Complex64::new(-1.0, 0.0) {
            return domain(format!("eis_h3: pole at s = {s}"));
        }
        let q = reduce_h3(&self.field, p)?;
        if q.r < self.height_floor * (1.0 - 1e-12) {
            return domain(format!("eis_h3: reduced height {} below the floor {}", q.r, self.height_floor));
        }
        let d = self.data(sf)?;
        let lr = q.r.ln();
        let constant = (s * lr).exp() + d.phi * ((1.0 - sf) * lr).exp();
        let limit = self.norm_limit(&d, q.r);
        let unit = 4.0 * PI / self.sqrt_d();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(w, n, b) in d.terms.iter().take_while(|t| t.1 <= limit) {
            let x = unit * (n as f64).sqrt() * q.r;
            acc += b * d.table.eval(x)? * (unit * (w * q.z).im).cos();
        }
        let v = constant + d.coef * acc * q.r;
        crate::error::finite(v * self.scale(), "eis_h3")
    }

    /// Estimate of the omitted Fourier tail at P.
    pub fn tail_bound(&self, p: &PointH3, s: Complex64) -> Result<f64> {
        let sf = s - 1.0;
        let q = reduce_h3(&self.field, p)?;
        let d = self.data(sf)?;
        let n0 = d.terms.iter().take_while(|t| t.1 <= self.norm_limit(&d, q.r)).map(|t| t.1).last().unwrap_or(0);
        let unit = 4.0 * PI / self.sqrt_d();
        let density = PI / self.field.covolume();
        let mut total = 0.0;
        let mut n = n0 + 1;
        loop {
            let x = unit * (n as f64).sqrt() * q.r;
            let env = 2.0
                * (0.5 * PI).sqrt()
                * (x * x - sf.im * sf.im).max(x).powf(-0.25)
                * (sf.re * sf.re / x - decay_exponent(sf, x)).exp();
            let term = density * 2.0 * (n as f64).powf(0.5 * sf.re.abs() + 0.5) * env;
            total += term;
            if term < 1e-20 * total.max(1e-300) || n > n0 + 10_000_000 {
                break;
            }
            n += 1;
        }
        Ok(total * d.coef.norm() * q.r * self.scale())
    }
}

/// E(P, s) evaluated with the given evaluator.
pub fn eis_h3(p: &PointH3, s: Complex64, ev: &EisensteinH3) -> Result<Complex64> {
    ev.eval(p, s)
}

/// E_∞(P, σ) for real σ > 2 as a direct sum over bottom rows. Uses
/// E_∞ = r^σ/(|𝒪_K^*| ζ_K(σ)) Σ_{(c,d)≠0} (|cz+d|² + |c|²r²)^{−σ}, summed over
/// |cz+d|² + |c|²r² ≤ x_max plus the asymptotic lattice-count tail.
pub fn eis_h3_coset_sum(field: &ImagQuadField, p: &PointH3, sigma: f64, x_max: f64) -> Result<f64> {
    if !(sigma > 2.0) {
        return domain(format!("coset sum: needs σ > 2, got {sigma}"));
    }
    let r2 = p.r * p.r;
    let cs = disk_points(field, Complex64::new(0.0, 0.0), (x_max / r2).sqrt());
    let parts: Vec<f64> = cs
        .par_iter()
        .map(|&c| {
            let cc = field.to_complex(c);
            let room = x_max - cc.norm_sqr() * r2;
            if room < 0.0 {
                return 0.0;
            }
            let mut v: Vec<f64> = disk_points(field, -cc * p.z, room.sqrt())
                .into_iter()
                .filter_map(|d| {
                    let q = (cc * p.z + field.to_complex(d)).norm_sqr() + cc.norm_sqr() * r2;
                    (q > 0.0 && q <= x_max).then(|| q.powf(-sigma))
                })
                .collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            pairwise_sum(&v)
        })
        .collect();
    let cov = field.covolume();
    let tail = PI * PI * x_max.powf(2.0 - sigma) / ((sigma - 2.0) * r2 * cov * cov);
    let zk = dedekind_zeta_with(field, Complex64::new(sigma, 0.0), &ZetaBackend::default())?.re;
    let w = field.unit_count() as f64;
    Ok(p.r.powf(sigma) * (pairwise_sum(&parts) + tail) / (w * zk))
}

/// E_∞(P, σ) as the literal sum Σ r(γP)^σ over coprime bottom rows modulo units,
/// truncated at |cz+d|² + |c|²r² ≤ x_max.
pub fn eis_h3_coprime_sum(field: &ImagQuadField, p: &PointH3, sigma: f64, x_max: f64) -> Result<f64> {
    let r2 = p.r * p.r;
    let mut v = Vec::new();
    for c in disk_points(field, Complex64::new(0.0, 0.0), (x_max / r2).sqrt()) {
        let cc = field.to_complex(c);
        let room = x_max - cc.norm_sqr() * r2;
        if room < 0.0 {
            continue;
        }
        for d in disk_points(field, -cc * p.z, room.sqrt()) {
            let q = (cc * p.z + field.to_complex(d)).norm_sqr() + cc.norm_sqr() * r2;
            if q > 0.0 && q <= x_max && field.coprime(c, d) {
                v.push((p.r / q).powf(sigma));
            }
        }
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pairwise_sum(&v) / field.unit_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance_h3;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_floor_is_the_corner_height() {
        let f = ImagQuadField::gaussian();
        let floor = h3_height_floor(&f);
        assert!((floor - 0.98 * 0.5f64.sqrt()).abs() < 1e-3, "{floor}");
    }

    #[test]
    fn reduction_preserves_orbit_and_reaches_floor() {
        for field in ImagQuadField::all() {
            let floor = h3_height_floor(&field);
            for (k, p) in [(0.37, -1.21, 0.031), (0.5, 0.5, 0.001), (-2.3, 0.77, 0.2)].iter().enumerate() {
                let p = PointH3::new(c(p.0, p.1), p.2).unwrap();
                let q = reduce_h3(&field, &p).unwrap();
                assert!(q.r >= floor, "{} #{k}: {} < {floor}", field.d(), q.r);
                assert!(best_inversion(&field, &q).is_none());
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let f = ImagQuadField::gaussian();
        let ev = EisensteinH3::new(f).unwrap();
        let p = PointH3::new(c(0.3, 0.2), 1.1).unwrap();
        let s = c(0.5, 3.0);
        let e = ev.eval(&p, s).unwrap();
        for shift in [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 3.0)] {
            let q = PointH3::new(p.z + shift, p.r).unwrap();
            assert!((ev.eval(&q, s).unwrap() - e).norm() < 1e-8 * e.norm().max(1.0));
        }
    }

    #[test]
    fn inversion_invariance_on_critical_line() {
        for d in [-1, -3, -19] {
            let ev = EisensteinH3::new(ImagQuadField::new(d).unwrap()).unwrap();
            let p = PointH3::new(c(0.12, 0.31), 1.3).unwrap();
            let n = p.z.norm_sqr() + p.r * p.r;
            let q = PointH3::new(-p.z.conj() / n, p.r / n).unwrap();
            let s = c(1.0, 6.5);
            let a = ev.eval(&p, s).unwrap();
            let b = ev.eval(&q, s).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm().max(1.0), "d = {d}: {a} vs {b}");
            let _ = distance_h3(&p, &q);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let ev = EisensteinH3::new(ImagQuadField::gaussian()).unwrap();
        let p = PointH3::new(c(0.1, 0.2), 0.9).unwrap();
        let a = ev.eval(&p, c(1.0, 4.0)).unwrap();
        let b = ev.eval(&p, c(1.0, -4.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn fourier_matches_coset_sum() {
        let f = ImagQuadField::gaussian();
        let ev = EisensteinH3::new(f).unwrap().with_normalization(Normalization::EInfinity);
        for p in [PointH3::new(c(0.1, 0.2), 1.0).unwrap(), PointH3::new(c(0.4, -0.1), 0.8).unwrap()] {
            let fourier = ev.eval(&p, c(2.5, 0.0)).unwrap();
            let direct = eis_h3_coset_sum(&f, &p, 2.5, 400.0).unwrap();
            assert!((fourier.re - direct).abs() < 1e-4, "{fourier} vs {direct}");
        }
    }

    #[test]
    fn full_lattice_identity_against_coprime_pairs() {
        // Σ_{(c,d)≠0, Q≤X} Q^{-σ} = (1/w) Σ_{g≠0} N(g)^{-σ} · Σ_{coprime, Q≤X/N(g)} Q^{-σ}
        let f = ImagQuadField::gaussian();
        let p = PointH3::new(c(0.2, 0.1), 0.9).unwrap();
        let sigma = 2.5;
        // irrational cap, so no Q sits on a boundary
        let x = 30.0 + 1.0 / PI;
        let cov = f.covolume();
        let tail = |y: f64| PI * PI * y.powf(2.0 - sigma) / ((sigma - 2.0) * p.r * p.r * cov * cov);
        let zk = dedekind_zeta_with(&f, c(sigma, 0.0), &ZetaBackend::default()).unwrap().re;
        let full = eis_h3_coset_sum(&f, &p, sigma, x).unwrap() * 4.0 * zk / p.r.powf(sigma) - tail(x);
        let mut conv = 0.0;
        // coprime pairs reach Q below 1, so g runs past N(g) = X
        for g in f.enumerate_by_norm((4.0 * x) as i64).unwrap() {
            let n = f.norm(g) as f64;
            let inner = eis_h3_coprime_sum(&f, &p, sigma, x / n).unwrap() * 4.0 / p.r.powf(sigma);
            conv += n.powf(-sigma) * inner;
        }
        conv /= 4.0;
        assert!((full - conv).abs() < 1e-12 * full, "{full} vs {conv}");
    }

    #[test]
    fn normalisations_differ_by_half_the_unit_count() {
        let f = ImagQuadField::new(-3).unwrap();
        let e = EisensteinH3::new(f).unwrap();
        let einf = e.clone().with_normalization(Normalization::EInfinity);
        let p = PointH3::new(c(0.1, 0.05), 1.2).unwrap();
        let s = c(1.0, 2.0);
        assert!((e.eval(&p, s).unwrap() - einf.eval(&p, s).unwrap() * 3.0).norm() < 1e-12);
    }

    #[test]
    fn doubling_norm_cap_stays_within_tail_bound() {
        let f = ImagQuadField::gaussian();
        let base = EisensteinH3::new(f).unwrap();
        let cap = 70;
        assert!(base.clone().with_norm_cap(20).is_err());
        let small = base.clone().with_norm_cap(cap).unwrap();
        let large = base.with_norm_cap(2 * cap).unwrap();
        let p = PointH3::new(c(0.5, 0.5), 0.72).unwrap();
        let s = c(1.0, 5.0);
        let diff = (small.eval(&p, s).unwrap() - large.eval(&p, s).unwrap()).norm();
        assert!(diff <= small.tail_bound(&p, s).unwrap(), "{diff}");
    }

    #[test]
    fn poles_and_centre() {
        let ev = EisensteinH3::new(ImagQuadField::gaussian()).unwrap();
        let p = PointH3::new(c(0.0, 0.0), 2.0).unwrap();
        assert!(matches!(ev.eval(&p, c(2.0, 0.0)), Err(Error::Domain(_))));
        assert_eq!(ev.eval(&p, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    }
}
