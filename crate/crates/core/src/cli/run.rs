//! Row-by-row execution of a validated experiment.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Kind, MassMethodSpec, RadiusRule, Surface};
use crate::eisenstein::{lower_bound_avg, EisensteinEvaluator, EisensteinH2, EisensteinH3};
use crate::error::{Error, Result};
use crate::geometry::{GeodesicBall, QuadratureOrder};
use crate::lattice::ImagQuadField;
use crate::mass::{ball_mass, log_factor, main_term, variance_window, Integration};
use crate::selberg::{h_bessel_asym, h_char_real, h_closed_h3, BallKernel};
use crate::zeta::{dedekind_fourth_moment, zeta_moment, ZetaBackend};

/// Version of the row layout; bump on any column change.
pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 11] = [
    "t",
    "R",
    "raw_mass",
    "normalized_mass",
    "main_term",
    "deviation",
    "lower_bound",
    "h_value",
    "value",
    "wall_time_ms",
    "error",
];

/// One output row. Columns a kind does not produce stay empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResultRow {
    pub t: f64,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub raw_mass: Option<f64>,
    pub normalized_mass: Option<f64>,
    pub main_term: Option<f64>,
    pub deviation: Option<f64>,
    pub lower_bound: Option<f64>,
    pub h_value: Option<f64>,
    pub value: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub kind: Kind,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// More than half of the rows failed.
    pub fn mostly_failed(&self) -> bool {
        2 * self.failed_rows() > self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Fill `wall_time_ms`. Off by default so outputs are reproducible byte for byte.
    pub timings: bool,
}

/// Builds the evaluator described by the config.
pub fn build_evaluator(config: &ExperimentConfig) -> Result<EisensteinEvaluator> {
    match config.surface {
        Surface::H2 => {
            let mut e = EisensteinH2::new().with_precision(config.precision);
            if let Some(n) = config.truncation {
                e = e.with_truncation(n)?;
            }
            Ok(EisensteinEvaluator::H2(e))
        }
        Surface::Bianchi(d) => {
            let mut e = EisensteinH3::new(ImagQuadField::new(d)?)?.with_precision(config.precision);
            if let Some(cap) = config.norm_cap {
                e = e.with_norm_cap(cap)?;
            }
            Ok(EisensteinEvaluator::H3(e))
        }
    }
}

struct Runner<'a> {
    config: &'a ExperimentConfig,
    ev: EisensteinEvaluator,
    zeta: ZetaBackend,
}

impl Runner<'_> {
    fn dim(&self) -> usize {
        self.config.surface.dimension()
    }

    fn radius(&self, t: f64) -> Result<f64> {
        let r = self.config.radius.radius(t);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius rule gives R = {r} at t = {t}")));
        }
        Ok(r)
    }

    fn integration(&self, radius: f64, t: f64, index: usize) -> Integration {
        match self.config.method {
            MassMethodSpec::Quadrature(Some(n)) => Integration::Quadrature(QuadratureOrder::uniform(n)),
            MassMethodSpec::Quadrature(None) => Integration::for_oscillation(radius, t),
            MassMethodSpec::MonteCarlo(count) => Integration::MonteCarlo {
                count,
                seed: self.config.seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            },
        }
    }

    fn row(&self, index: usize, t: f64, row: &mut ResultRow) -> Result<()> {
        let cfg = self.config;
        match cfg.kind {
            Kind::OmegaScan | Kind::QeScan => {
                let r = self.radius(t)?;
                row.radius = Some(r);
                let ball = GeodesicBall::new(cfg.center, r)?;
                let m = ball_mass(&self.ev, &ball, t, self.integration(r, t, index))?;
                let h = h_char_real(&BallKernel::new(self.dim(), r)?, t)?;
                row.raw_mass = Some(m.raw_mass);
                row.normalized_mass = Some(m.normalized_mass);
                row.main_term = Some(m.main_term);
                row.deviation = Some(m.deviation);
                row.h_value = Some(h);
                if cfg.kind == Kind::OmegaScan {
                    row.lower_bound = Some(match &cfg.heegner {
                        Some(w) => lower_bound_avg(w, r, t)?,
                        None => (h * self.ev.critical(&cfg.center, t)?).norm_sqr() / log_factor(self.dim(), t),
                    });
                }
            }
            Kind::Variance => {
                let r = self.radius(t)?;
                row.radius = Some(r);
                row.main_term = Some(main_term(&self.ev)?);
                // the window integrand is already parallel; the integration rule is fixed per window
                row.value = Some(variance_window(&self.ev, &cfg.center, r, t, cfg.grid_step, self.integration(r, 2.0 * t, index))?);
            }
            Kind::Moments => match cfg.surface {
                Surface::H2 => {
                    let v = zeta_moment(cfg.moment, t, &self.zeta)?;
                    row.value = Some(v);
                    let main = match cfg.moment {
                        1 => Some(t * (t / (2.0 * PI)).ln()),
                        2 => Some(t * t.ln().powi(4) / (2.0 * PI * PI)),
                        _ => None,
                    };
                    if let Some(m) = main.filter(|m| *m > 0.0) {
                        row.main_term = Some(m);
                        row.normalized_mass = Some(v / m);
                    }
                }
                Surface::Bianchi(d) => {
                    if cfg.moment != 2 {
                        return Err(Error::Usage("bianchi moments are fourth moments; set numerics.moment = 2".into()));
                    }
                    let m = dedekind_fourth_moment(&ImagQuadField::new(d)?, t)?;
                    row.value = Some(m.direct);
                    row.lower_bound = Some(m.holder_bound);
                }
            },
            Kind::SelbergCheck => {
                let r = self.radius(t)?;
                row.radius = Some(r);
                let kernel = BallKernel::new(self.dim(), r)?;
                let h = h_char_real(&kernel, t)?;
                row.h_value = Some(h);
                row.value = Some(if self.dim() == 3 {
                    (h - h_closed_h3(r, t)?).abs()
                } else {
                    let a = h_bessel_asym(&kernel, t)?;
                    (h - a).abs() / a.abs()
                });
            }
            Kind::Eval => {
                let e: Complex64 = self.ev.critical(&cfg.center, t)?;
                row.value = Some(e.norm());
            }
        }
        Ok(())
    }
}

fn execute(config: &ExperimentConfig, ev: EisensteinEvaluator, timings: bool) -> ResultTable {
    let runner = Runner { config, ev, zeta: ZetaBackend::default() };
    let rows = config
        .t_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let start = Instant::now();
            let mut row = ResultRow { t, ..Default::default() };
            if let Err(e) = runner.row(i, t, &mut row) {
                let radius = row.radius;
                row = ResultRow { t, radius, error: Some(e.to_string()), ..Default::default() };
            }
            if timings {
                row.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            row
        })
        .collect();
    ResultTable { kind: config.kind, rows }
}

/// Runs every grid point. Row failures are recorded in the `error` column;
/// only evaluator construction or thread-pool setup errors abort.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable> {
    let ev = build_evaluator(config)?;
    if matches!(config.radius, RadiusRule::Fixed(r) if r.is_nan()) && !matches!(config.kind, Kind::Moments | Kind::Eval) {
        return Err(Error::Config("radius: missing".into()));
    }
    match options.threads {
        None => Ok(execute(config, ev, options.timings)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(|| execute(config, ev, options.timings)))
        }
    }
}
