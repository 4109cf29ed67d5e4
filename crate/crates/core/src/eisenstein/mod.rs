//! Eisenstein series on the modular surface and on Bianchi orbifolds of
//! class number one, gamma-factor asymptotics and regularised triple
//! products.

mod h2;
mod h3;
mod ktable;
mod products;

pub use h2::{eis_h2, eis_h2_heegner, reduce_h2, EisensteinH2, H2_FLOOR, REDUCTION_CAP};
pub use h3::{
    eis_h3, eis_h3_coprime_sum, eis_h3_coset_sum, h3_height_floor, reduce_h3, EisensteinH3, Normalization,
};
pub use products::{
    gamma_factors, heegner_average, lower_bound_avg, p2_factor, p3_factor, q_factor, reg_triple, reg_triple_in,
    reg_triple_surrogate, reg_triple_surrogate_in, GammaFactorReport,
};

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::geometry::Point;
use crate::lattice::ImagQuadField;

/// An Eisenstein evaluator for one surface, evaluated on its critical line.
#[derive(Debug, Clone)]
pub enum EisensteinEvaluator {
    H2(EisensteinH2),
    H3(EisensteinH3),
}

impl EisensteinEvaluator {
    pub fn modular() -> Self {
        EisensteinEvaluator::H2(EisensteinH2::new())
    }

    pub fn bianchi(d: i64) -> Result<Self> {
        Ok(EisensteinEvaluator::H3(EisensteinH3::new(ImagQuadField::new(d)?)?))
    }

    pub fn dimension(&self) -> usize {
        match self {
            EisensteinEvaluator::H2(_) => 2,
            EisensteinEvaluator::H3(_) => 3,
        }
    }

    /// The point s on the critical line with spectral parameter t.
    pub fn critical_s(&self, t: f64) -> Complex64 {
        match self {
            EisensteinEvaluator::H2(_) => Complex64::new(0.5, t),
            EisensteinEvaluator::H3(_) => Complex64::new(1.0, t),
        }
    }

    pub fn eval(&self, p: &Point, s: Complex64) -> Result<Complex64> {
        match (self, p) {
            (EisensteinEvaluator::H2(e), Point::H2(z)) => e.eval(z, s),
            (EisensteinEvaluator::H3(e), Point::H3(q)) => e.eval(q, s),
            _ => usage(format!(
                "Eisenstein evaluator of dimension {} given a point of dimension {}",
                self.dimension(),
                p.dimension()
            )),
        }
    }

    /// E at the critical-line point with spectral parameter t.
    pub fn critical(&self, p: &Point, t: f64) -> Result<Complex64> {
        self.eval(p, self.critical_s(t))
    }

    pub fn height_floor(&self) -> f64 {
        match self {
            EisensteinEvaluator::H2(e) => e.height_floor,
            EisensteinEvaluator::H3(e) => e.height_floor,
        }
    }
}
