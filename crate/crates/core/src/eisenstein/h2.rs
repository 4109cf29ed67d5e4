//! Eisenstein series of PSL₂(ℤ) on ℍ².

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use super::ktable::{cutoff, decay_exponent, KTable};
use crate::error::{domain, usage, Error, Result};
use crate::geometry::{HeegnerPoint, PointH2};
use crate::lattice::BinaryQuadraticForm;
use crate::specfun::{log_gamma, PrecisionPolicy};
use crate::zeta::{epstein_z, scattering_phi_q, EpsteinForm, ZetaBackend};

/// Iteration cap of the fundamental-domain reductions.
pub const REDUCTION_CAP: usize = 1000;

/// Lowest height of the standard fundamental domain.
pub const H2_FLOOR: f64 = 0.866_025_403_784_438_6;

/// Move z into |x| ≤ 1/2, |z| ≥ 1 by translations and z → −1/z.
pub fn reduce_h2(z: &PointH2) -> Result<PointH2> {
    let (mut x, mut y) = (z.x, z.y);
    for _ in 0..REDUCTION_CAP {
        x -= x.round();
        let n = x * x + y * y;
        if n >= 1.0 - 1e-14 {
            return Ok(PointH2 { x, y });
        }
        x = -x / n;
        y /= n;
    }
    Err(Error::Evaluation(format!("reduce_h2: no convergence for ({}, {})", z.x, z.y)))
}

struct FourierData {
    /// 4/ξ(2s) · exp(−π|Im s|/2)
    coef: Complex64,
    phi: Complex64,
    x_cut: f64,
    /// n^{s−1/2} σ_{1−2s}(n), index n − 1
    a: Vec<Complex64>,
    table: KTable,
}

/// E(z, s) = y^s + φ(s)y^{1−s} + (4/ξ(2s)) Σ n^{s−1/2}σ_{1−2s}(n)√y K_{s−1/2}(2πny) cos(2πnx).
pub struct EisensteinH2 {
    truncation: Option<usize>,
    pub zeta: ZetaBackend,
    pub height_floor: f64,
    pub precision: PrecisionPolicy,
    cache: RwLock<HashMap<(u64, u64), Arc<FourierData>>>,
}

impl std::fmt::Debug for EisensteinH2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EisensteinH2")
            .field("truncation", &self.truncation)
            .field("height_floor", &self.height_floor)
            .field("zeta", &self.zeta.method)
            .finish()
    }
}

impl Default for EisensteinH2 {
    fn default() -> Self {
        EisensteinH2 {
            truncation: None,
            zeta: ZetaBackend::default(),
            height_floor: H2_FLOOR,
            precision: PrecisionPolicy::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl Clone for EisensteinH2 {
    fn clone(&self) -> Self {
        EisensteinH2 {
            truncation: self.truncation,
            zeta: self.zeta.clone(),
            height_floor: self.height_floor,
            precision: self.precision,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl EisensteinH2 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fixed cap Nmax on the number of Fourier terms.
    pub fn with_truncation(mut self, n_max: usize) -> Result<Self> {
        let tail = (-2.0 * PI * n_max as f64 * self.height_floor).exp();
        if tail > self.precision.abs_tol {
            return usage(format!(
                "EisensteinH2: Nmax = {n_max} leaves tail e^(-2πN·y) = {tail:.3e} above abs_tol at the floor"
            ));
        }
        self.truncation = Some(n_max);
        Ok(self)
    }

    pub fn with_height_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0) || !floor.is_finite() {
            return domain(format!("EisensteinH2: height floor must be positive, got {floor}"));
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

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    fn target(&self, s: Complex64) -> f64 {
        -self.precision.abs_tol.ln() + 10.0 + 3.0 * (s.re - 0.5).abs()
    }

    fn data(&self, s: Complex64) -> Result<Arc<FourierData>> {
        let key = (s.re.to_bits(), s.im.to_bits());
        if let Some(d) = self.cache.read().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let nu = s - 0.5;
        let shift = 0.5 * PI * s.im.abs();
        let z2s = self.zeta.zeta(s * 2.0)?;
        if z2s.norm() == 0.0 {
            return domain(format!("eis_h2: ζ(2s) vanishes at s = {s}"));
        }
        // 4/ξ(2s) = 4π^s / (Γ(s)ζ(2s))
        let lg = log_gamma(s).map_err(|_| Error::Domain(format!("eis_h2: Γ(s) has a pole at s = {s}")))?;
        let coef = (s * PI.ln() - lg - shift).exp() * 4.0 / z2s;
        let phi = scattering_phi_q(s)?;
        let x_cut = cutoff(nu, self.target(s));
        let mut n_max = (x_cut / (2.0 * PI * self.height_floor)).floor() as usize;
        if let Some(cap) = self.truncation {
            n_max = n_max.min(cap);
        }
        let x_lo = 2.0 * PI * self.height_floor;
        let table = KTable::build(nu, x_lo * (1.0 - 1e-12), x_cut.max(x_lo * 2.0))?;
        let a = divisor_coefficients(s, n_max);
        let d = Arc::new(FourierData { coef, phi, x_cut, a, table });
        self.cache.write().unwrap().entry(key).or_insert(d.clone());
        Ok(d)
    }

    fn terms(&self, d: &FourierData, y: f64) -> usize {
        let n = (d.x_cut / (2.0 * PI * y)).floor() as usize;
        n.min(d.a.len())
    }

    /// E(z, s) via the Fourier expansion at the reduced point.
    pub fn eval(&self, z: &PointH2, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(1.0, 0.0) {
            return domain("eis_h2: pole at s = 1");
        }
        if s == Complex64::new(0.5, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let w = reduce_h2(z)?;
        if w.y < self.height_floor * (1.0 - 1e-12) {
            return domain(format!("eis_h2: reduced height {} below the floor {}", w.y, self.height_floor));
        }
        let d = self.data(s)?;
        let constant = (s * w.y.ln()).exp() + d.phi * ((1.0 - s) * w.y.ln()).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 1..=self.terms(&d, w.y) {
            let arg = 2.0 * PI * n as f64;
            acc += d.a[n - 1] * d.table.eval(arg * w.y)? * (arg * w.x).cos();
        }
        crate::error::finite(constant + d.coef * acc * w.y.sqrt(), "eis_h2")
    }

    /// Estimate of the omitted Fourier tail at z.
    pub fn tail_bound(&self, z: &PointH2, s: Complex64) -> Result<f64> {
        let w = reduce_h2(z)?;
        let d = self.data(s)?;
        let n0 = self.terms(&d, w.y);
        let nu = s - 0.5;
        let expo = (s.re - 0.5).abs() + 0.5;
        let mut total = 0.0;
        let mut n = n0 + 1;
        loop {
            let x = 2.0 * PI * n as f64 * w.y;
            let env = 2.0
                * (0.5 * PI).sqrt()
                * (x * x - nu.im * nu.im).max(x).powf(-0.25)
                * (nu.re * nu.re / x - decay_exponent(nu, x)).exp();
            let term = 2.0 * (n as f64).powf(expo) * env;
            total += term;
            if term < 1e-20 * total.max(1e-300) || n > n0 + 100_000 {
                break;
            }
            n += 1;
        }
        Ok(total * d.coef.norm() * w.y.sqrt())
    }
}

/// n^{s−1/2} σ_{1−2s}(n) for n = 1..=n_max by a divisor sieve.
fn divisor_coefficients(s: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut sigma = vec![Complex64::new(0.0, 0.0); n_max];
    let e = 1.0 - s * 2.0;
    for d in 1..=n_max {
        let p = (e * (d as f64).ln()).exp();
        let mut m = d;
        while m <= n_max {
            sigma[m - 1] += p;
            m += d;
        }
    }
    for (i, v) in sigma.iter_mut().enumerate() {
        *v *= ((s - 0.5) * ((i + 1) as f64).ln()).exp();
    }
    sigma
}

/// E(z, s) evaluated with the given evaluator.
pub fn eis_h2(z: &PointH2, s: Complex64, ev: &EisensteinH2) -> Result<Complex64> {
    ev.eval(z, s)
}

/// E at a Heegner point through the Epstein zeta function of its form:
/// E(z_Q, s) = (√|d|/2)^s Z(s, Q) / (2ζ(2s)).
pub fn eis_h2_heegner(w: &HeegnerPoint, s: Complex64, zeta: &ZetaBackend) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return domain("eis_h2: pole at s = 1");
    }
    if s == Complex64::new(0.5, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let form = EpsteinForm::new(BinaryQuadraticForm::new(w.a, w.b, w.c)?);
    let z = epstein_z(&form, s)?;
    let z2s = zeta.zeta(s * 2.0)?;
    let scale = (s * (0.5 * ((-w.d) as f64).sqrt()).ln()).exp();
    crate::error::finite(scale * z / (z2s * 2.0), "eis_h2_heegner")
}
