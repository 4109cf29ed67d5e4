//! Experiment configuration: the raw TOML document and its validated form.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HeegnerPoint, Point, PointH2, PointH3};
use crate::lattice::{ImagQuadField, CLASS_NUMBER_ONE};
use crate::specfun::PrecisionPolicy;

/// Largest number of grid rows a single config may request.
pub const MAX_ROWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    OmegaScan,
    QeScan,
    Variance,
    Moments,
    SelbergCheck,
    Eval,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::OmegaScan, Kind::QeScan, Kind::Variance, Kind::Moments, Kind::SelbergCheck, Kind::Eval];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::OmegaScan => "omega_scan",
            Kind::QeScan => "qe_scan",
            Kind::Variance => "variance",
            Kind::Moments => "moments",
            Kind::SelbergCheck => "selberg_check",
            Kind::Eval => "eval",
        }
    }

    /// The subcommand spelling, e.g. `omega-scan`.
    pub fn command(self) -> String {
        self.as_str().replace('_', "-")
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// Raw document --------------------------------------------------------------

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: RawExperiment,
    #[serde(default)]
    pub grid: RawGrid,
    #[serde(default)]
    pub radius: RawRadius,
    #[serde(default)]
    pub center: RawCenter,
    #[serde(default)]
    pub numerics: RawNumerics,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExperiment {
    pub kind: Option<Kind>,
    pub surface: String,
    pub seed: Option<u64>,
    pub name: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRadius {
    pub rule: Option<String>,
    pub preset: Option<String>,
    pub value: Option<f64>,
    pub delta: Option<f64>,
    pub exponent: Option<f64>,
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCenter {
    pub heegner: Option<[i64; 3]>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNumerics {
    pub method: Option<String>,
    pub quadrature: Option<usize>,
    pub samples: Option<usize>,
    pub truncation: Option<usize>,
    pub norm_cap: Option<i64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub grid_step: Option<f64>,
    pub moment: Option<u32>,
}

// Validated form ------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    H2,
    Bianchi(i64),
}

impl Surface {
    pub fn dimension(self) -> usize {
        match self {
            Surface::H2 => 2,
            Surface::Bianchi(_) => 3,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::H2 => f.write_str("h2"),
            Surface::Bianchi(d) => write!(f, "bianchi({d})"),
        }
    }
}

/// Radius as a function of the spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    Fixed(f64),
    /// R = scale · t^(−δ).
    Power { delta: f64, scale: f64 },
    /// R = scale · t^(−1) (log t)^a.
    Planck { exponent: f64, scale: f64 },
}

impl RadiusRule {
    pub fn radius(&self, t: f64) -> f64 {
        match *self {
            RadiusRule::Fixed(r) => r,
            RadiusRule::Power { delta, scale } => scale * t.powf(-delta),
            RadiusRule::Planck { exponent, scale } => scale * t.ln().powf(exponent) / t,
        }
    }
}

/// Named shrinking-ball regimes: δ for R = t^(−δ).
pub const RADIUS_PRESETS: [(&str, f64); 3] = [("third", 1.0 / 3.0), ("two-fifths", 0.4), ("three-quarters", 0.75)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassMethodSpec {
    Quadrature(Option<usize>),
    MonteCarlo(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub name: Option<String>,
    pub surface: Surface,
    pub t_grid: Vec<f64>,
    pub radius: RadiusRule,
    pub center: Point,
    pub heegner: Option<HeegnerPoint>,
    pub method: MassMethodSpec,
    pub truncation: Option<usize>,
    pub norm_cap: Option<i64>,
    pub precision: PrecisionPolicy,
    pub grid_step: f64,
    pub moment: u32,
    pub seed: u64,
}

fn cfg<T>(field: &str, msg: impl fmt::Display) -> Result<T> {
    Err(Error::Config(format!("{field}: {msg}")))
}

fn parse_surface(s: &str) -> Result<Surface> {
    let t = s.trim().to_ascii_lowercase();
    if t == "h2" {
        return Ok(Surface::H2);
    }
    if let Some(inner) = t.strip_prefix("bianchi(").and_then(|r| r.strip_suffix(')')) {
        return match inner.trim().parse::<i64>() {
            Ok(d) if CLASS_NUMBER_ONE.contains(&d) => Ok(Surface::Bianchi(d)),
            Ok(d) => cfg("experiment.surface", format!("bianchi({d}) is not one of the class-number-one fields {CLASS_NUMBER_ONE:?}")),
            Err(_) => cfg("experiment.surface", format!("cannot read the field parameter in {s:?}")),
        };
    }
    cfg("experiment.surface", format!("expected \"h2\" or \"bianchi(D)\", got {s:?}"))
}

fn parse_grid(g: &RawGrid) -> Result<Vec<f64>> {
    let range = g.start.is_some() || g.stop.is_some() || g.step.is_some();
    match (&g.values, range) {
        (Some(_), true) => cfg("grid", "give either values or start/stop/step, not both"),
        (Some(v), false) => {
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return cfg("grid.values", format!("non-finite entry {x}"));
            }
            if v.len() > MAX_ROWS {
                return cfg("grid.values", format!("more than {MAX_ROWS} rows"));
            }
            Ok(v.clone())
        }
        (None, true) => {
            let (Some(start), Some(stop), Some(step)) = (g.start, g.stop, g.step) else {
                return cfg("grid", "start, stop and step are all required");
            };
            if !(step > 0.0) || !step.is_finite() {
                return cfg("grid.step", format!("must be positive, got {step}"));
            }
            if !start.is_finite() || !stop.is_finite() {
                return cfg("grid", "start and stop must be finite");
            }
            if stop < start {
                return Ok(Vec::new());
            }
            let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize + 1;
            if n > MAX_ROWS {
                return cfg("grid", format!("{n} rows exceeds the limit of {MAX_ROWS}"));
            }
            Ok((0..n).map(|k| start + k as f64 * step).collect())
        }
        (None, false) => cfg("grid", "missing: give values or start/stop/step"),
    }
}

fn parse_radius(r: &RawRadius, kind: Kind) -> Result<RadiusRule> {
    let scale = r.scale.unwrap_or(1.0);
    if !(scale > 0.0) || !scale.is_finite() {
        return cfg("radius.scale", format!("must be positive, got {scale}"));
    }
    let rule = match (&r.preset, &r.rule) {
        (Some(_), Some(_)) => return cfg("radius", "give either preset or rule, not both"),
        (Some(p), None) => {
            let Some(&(_, delta)) = RADIUS_PRESETS.iter().find(|(n, _)| n == p) else {
                let names: Vec<&str> = RADIUS_PRESETS.iter().map(|p| p.0).collect();
                return cfg("radius.preset", format!("unknown preset {p:?}; known: {names:?}"));
            };
            if r.delta.is_some() {
                return cfg("radius.delta", "a preset fixes δ");
            }
            return Ok(RadiusRule::Power { delta, scale });
        }
        (None, Some(rule)) => rule.as_str(),
        (None, None) if kind == Kind::Moments || kind == Kind::Eval => return Ok(RadiusRule::Fixed(f64::NAN)),
        (None, None) => return cfg("radius", "missing: give rule or preset"),
    };
    match rule {
        "fixed" => match r.value {
            Some(v) if v > 0.0 && v.is_finite() => Ok(RadiusRule::Fixed(v)),
            Some(v) => cfg("radius.value", format!("must be positive, got {v}")),
            None => cfg("radius.value", "required by rule = \"fixed\""),
        },
        "power" => match r.delta {
            Some(d) if d > 0.0 && d < 1.0 => Ok(RadiusRule::Power { delta: d, scale }),
            Some(d) => cfg("radius.delta", format!("must lie in (0, 1), got {d}")),
            None => cfg("radius.delta", "required by rule = \"power\""),
        },
        "planck" => {
            let a = r.exponent.unwrap_or(0.0);
            if !a.is_finite() {
                return cfg("radius.exponent", "must be finite");
            }
            Ok(RadiusRule::Planck { exponent: a, scale })
        }
        other => cfg("radius.rule", format!("expected fixed, power or planck, got {other:?}")),
    }
}

fn parse_center(c: &RawCenter, surface: Surface) -> Result<(Point, Option<HeegnerPoint>)> {
    match surface {
        Surface::H2 => {
            if c.z_re.is_some() || c.z_im.is_some() || c.r.is_some() {
                return cfg("center", "z_re, z_im and r belong to bianchi surfaces; use x, y or heegner");
            }
            match (c.heegner, c.x, c.y) {
                (Some([a, b, cc]), None, None) => {
                    let w = HeegnerPoint::new(a, b, cc).map_err(|e| Error::Config(format!("center.heegner: {e}")))?;
                    Ok((Point::H2(w.z), Some(w)))
                }
                (Some(_), _, _) => cfg("center", "give either heegner or x, y"),
                (None, x, y) => {
                    let p = PointH2::new(x.unwrap_or(0.0), y.unwrap_or(1.0))
                        .map_err(|e| Error::Config(format!("center: {e}")))?;
                    Ok((Point::H2(p), None))
                }
            }
        }
        Surface::Bianchi(_) => {
            if c.heegner.is_some() || c.x.is_some() || c.y.is_some() {
                return cfg("center", "heegner, x and y belong to h2; use z_re, z_im, r");
            }
            let z = Complex64::new(c.z_re.unwrap_or(0.0), c.z_im.unwrap_or(0.0));
            let p = PointH3::new(z, c.r.unwrap_or(1.0)).map_err(|e| Error::Config(format!("center: {e}")))?;
            Ok((Point::H3(p), None))
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let Some(kind) = raw.experiment.kind else {
            return cfg("experiment.kind", "missing");
        };
        let surface = parse_surface(&raw.experiment.surface)?;
        let t_grid = parse_grid(&raw.grid)?;
        let radius = parse_radius(&raw.radius, kind)?;
        let (center, heegner) = parse_center(&raw.center, surface)?;
        let n = &raw.numerics;
        let method = match n.method.as_deref().unwrap_or("quadrature") {
            "quadrature" => {
                if n.samples.is_some() {
                    return cfg("numerics.samples", "only used with method = \"monte_carlo\"");
                }
                if let Some(q) = n.quadrature {
                    if !(2..=256).contains(&q) {
                        return cfg("numerics.quadrature", format!("must lie in [2, 256], got {q}"));
                    }
                }
                MassMethodSpec::Quadrature(n.quadrature)
            }
            "monte_carlo" => {
                if n.quadrature.is_some() {
                    return cfg("numerics.quadrature", "only used with method = \"quadrature\"");
                }
                let s = n.samples.unwrap_or(4000);
                if s < crate::mass::MIN_MC_COUNT {
                    return cfg("numerics.samples", format!("need at least {}, got {s}", crate::mass::MIN_MC_COUNT));
                }
                MassMethodSpec::MonteCarlo(s)
            }
            other => return cfg("numerics.method", format!("expected quadrature or monte_carlo, got {other:?}")),
        };
        let base = PrecisionPolicy::default();
        let precision = PrecisionPolicy::new(n.abs_tol.unwrap_or(base.abs_tol), n.rel_tol.unwrap_or(base.rel_tol), base.max_nodes)
            .map_err(|e| Error::Config(format!("numerics: {e}")))?;
        if n.truncation.is_some() && surface != Surface::H2 {
            return cfg("numerics.truncation", "only applies to h2; use norm_cap for bianchi surfaces");
        }
        if n.norm_cap.is_some() && surface == Surface::H2 {
            return cfg("numerics.norm_cap", "only applies to bianchi surfaces; use truncation for h2");
        }
        let grid_step = n.grid_step.unwrap_or(0.5);
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return cfg("numerics.grid_step", format!("must lie in (0, 0.5], got {grid_step}"));
        }
        let moment = n.moment.unwrap_or(2);
        if moment == 0 || moment > 6 {
            return cfg("numerics.moment", format!("must lie in 1..=6, got {moment}"));
        }
        Ok(ExperimentConfig {
            kind,
            name: raw.experiment.name.clone(),
            surface,
            t_grid,
            radius,
            center,
            heegner,
            method,
            truncation: n.truncation,
            norm_cap: n.norm_cap,
            precision,
            grid_step,
            moment,
            seed: raw.experiment.seed.unwrap_or(0),
        })
    }

    pub fn field(&self) -> Option<ImagQuadField> {
        match self.surface {
            Surface::H2 => None,
            Surface::Bianchi(d) => ImagQuadField::new(d).ok(),
        }
    }
}
