//! Run configuration, the verification sweep, and its JSON report.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::connection::{
    connection_axioms, connection_closed_form, covariant_derivative_j, covariant_derivative_k, curvature_numeric,
    holomorphic_sectional_curvature, koszul_connection, ricci_and_einstein, simplified_consistency, Reading,
};
use crate::cotangent::{bracket_residual, coframe_residual, CotangentPoint};
use crate::error::GeometryError;
use crate::kaehler::{
    form_residuals, hermitian_residual, horizontal_parallelism_residual, inverse_block_residual, j_squared_residual,
    metric_g, nijenhuis_closed_form, nijenhuis_definition, tube_check, w_identity_residual, LiftParameters, VMode,
};
use crate::sampling::{sample_point_and_direction, sample_points};
use crate::space_form::SpaceFormModel;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("model {model} requires c {expected}, got c = {c}")]
    CurvatureSign {
        model: ModelKind,
        expected: &'static str,
        c: f64,
    },
    #[error("unknown model '{0}' (expected flat, sphere, or hyperbolic)")]
    UnknownModel(String),
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("check '{0}' needs v = -c/A and cannot run with --v-override")]
    NeedsIntegrable(CheckName),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Flat,
    Sphere,
    Hyperbolic,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Flat => "flat",
            ModelKind::Sphere => "sphere",
            ModelKind::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for ModelKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(ModelKind::Flat),
            "sphere" => Ok(ModelKind::Sphere),
            "hyperbolic" => Ok(ModelKind::Hyperbolic),
            other => Err(ConfigError::UnknownModel(other.to_string())),
        }
    }
}

impl ModelKind {
    pub fn check_curvature(self, c: f64) -> Result<(), ConfigError> {
        let (ok, expected) = match self {
            ModelKind::Flat => (c == 0.0, "= 0"),
            ModelKind::Sphere => (c > 0.0, "> 0"),
            ModelKind::Hyperbolic => (c < 0.0, "< 0"),
        };
        if ok {
            Ok(())
        } else {
            Err(ConfigError::CurvatureSign {
                model: self,
                expected,
                c,
            })
        }
    }
}

macro_rules! check_names {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        pub enum CheckName { $($variant),* }

        impl CheckName {
            pub const ALL: &'static [CheckName] = &[$(CheckName::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(CheckName::$variant => $name),* }
            }
        }

        impl FromStr for CheckName {
            type Err = ConfigError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim() {
                    $($name => Ok(CheckName::$variant),)*
                    other => Err(ConfigError::UnknownCheck(other.to_string())),
                }
            }
        }
    };
}

check_names! {
    Bracket => "bracket",
    Coframe => "coframe",
    Metric => "metric",
    AlmostComplex => "almost_complex",
    Hermitian => "hermitian",
    Dphi => "dphi",
    BaseParallel => "base_parallel",
    Nijenhuis => "nijenhuis",
    NijenhuisAgreement => "nijenhuis_agreement",
    Connection => "connection",
    ConnectionAxioms => "connection_axioms",
    SimplifiedFamilies => "simplified_families",
    Curvature => "curvature",
    Einstein => "einstein",
    NablaK => "nabla_k",
    NablaJ => "nabla_j",
    Holomorphic => "holomorphic",
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckName {
    /// Checks that only hold, or are only defined, when `v = −c/A`.
    /// `nabla_j` vanishes exactly when the structure is Kähler.
    pub fn needs_integrable(self) -> bool {
        matches!(
            self,
            CheckName::SimplifiedFamilies
                | CheckName::Curvature
                | CheckName::Einstein
                | CheckName::NablaK
                | CheckName::NablaJ
                | CheckName::Holomorphic
        )
    }
}

pub fn parse_check_list(s: &str) -> Result<Vec<CheckName>, ConfigError> {
    let mut out: Vec<CheckName> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelKind,
    pub c: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol_first: f64,
    pub tol_second: f64,
    pub v_override: Option<f64>,
    /// Empty selects every check applicable to the mode.
    pub checks: Vec<CheckName>,
    /// Minimum sample variance of holomorphic sectional curvature for `c ≠ 0`.
    pub holomorphic_variance_min: f64,
}

impl RunConfig {
    pub fn new(model: ModelKind, c: f64, a: f64, n: usize) -> Self {
        Self {
            model,
            c,
            a,
            n,
            samples: 25,
            seed: 42,
            tol_first: 1e-8,
            tol_second: 1e-6,
            v_override: None,
            checks: Vec::new(),
            holomorphic_variance_min: 1e-4,
        }
    }

    pub fn space_form(&self) -> Result<SpaceFormModel, ConfigError> {
        Ok(SpaceFormModel::new(self.n, self.c)?)
    }

    pub fn lift(&self) -> Result<LiftParameters, ConfigError> {
        let mode = self.v_override.map_or(VMode::Integrable, VMode::Override);
        Ok(LiftParameters::new(self.a, mode)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.model.check_curvature(self.c)?;
        let model = self.space_form()?;
        let lift = self.lift()?;
        if self.samples < 1 {
            return Err(ConfigError::Invalid("samples must be at least 1".into()));
        }
        for (name, tol) in [("tol-first", self.tol_first), ("tol-second", self.tol_second)] {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(ConfigError::Invalid(format!("{name} must be positive, got {tol}")));
            }
        }
        if !lift.is_integrable_for(&model) {
            if let Some(&bad) = self.checks.iter().find(|c| c.needs_integrable()) {
                return Err(ConfigError::NeedsIntegrable(bad));
            }
        }
        Ok(())
    }

    /// The checks that will actually run.
    pub fn selected_checks(&self) -> Result<Vec<CheckName>, ConfigError> {
        let integrable = self.lift()?.is_integrable_for(&self.space_form()?);
        if self.checks.is_empty() {
            Ok(CheckName::ALL
                .iter()
                .copied()
                .filter(|c| integrable || !c.needs_integrable())
                .collect())
        } else {
            Ok(self.checks.clone())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Pass when the residual is below the tolerance.
    Standard,
    /// Pass when the residual exceeds the threshold (non-integrable control).
    NegativeControl,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: CheckName,
    pub mode: CheckMode,
    pub points_evaluated: usize,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplifiedFamiliesRecord {
    pub s_residual: f64,
    pub q_printed_residual: f64,
    pub q_corrected_residual: f64,
    pub q_matched: Reading,
    pub p_printed_residual: f64,
    pub p_corrected_residual: f64,
    pub p_matched: Reading,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphicSample {
    pub point: CotangentPoint,
    pub direction: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphicRecord {
    pub variance: f64,
    pub scaling_residual: f64,
    pub samples: Vec<HolomorphicSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub pass: bool,
    pub failed: Vec<CheckName>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub simplified_families: Option<SimplifiedFamiliesRecord>,
    pub holomorphic: Option<HolomorphicRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn check(&self, name: CheckName) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Deterministic JSON with every float printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        to_sci_json(self)
    }
}

/// Max-reduction that propagates NaN.
fn fold_max(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

struct Sweep<'a> {
    model: SpaceFormModel,
    lift: LiftParameters,
    points: &'a [CotangentPoint],
}

impl Sweep<'_> {
    /// Max of `f` over all points; the first error becomes the detail string.
    fn max_over(
        &self,
        mut f: impl FnMut(&SpaceFormModel, &LiftParameters, &CotangentPoint) -> crate::error::Result<f64>,
    ) -> (f64, Option<String>) {
        let mut worst = 0.0;
        for (i, pt) in self.points.iter().enumerate() {
            match f(&self.model, &self.lift, pt) {
                Ok(v) => worst = fold_max(worst, v),
                Err(e) => return (f64::NAN, Some(format!("point {i}: {e}"))),
            }
        }
        (worst, None)
    }

    fn standard(
        &self,
        name: CheckName,
        tolerance: f64,
        f: impl FnMut(&SpaceFormModel, &LiftParameters, &CotangentPoint) -> crate::error::Result<f64>,
    ) -> CheckRecord {
        let (r, detail) = self.max_over(f);
        CheckRecord {
            name,
            mode: CheckMode::Standard,
            points_evaluated: self.points.len(),
            max_abs_residual: r,
            tolerance,
            pass: detail.is_none() && r < tolerance,
            detail,
        }
    }
}

pub fn run_verification(config: &RunConfig) -> Result<VerificationReport, ConfigError> {
    config.validate()?;
    let model = config.space_form()?;
    let lift = config.lift()?;
    let integrable = lift.is_integrable_for(&model);
    let points = sample_points(&model, &lift, config.samples, config.seed);
    let sweep = Sweep {
        model,
        lift,
        points: &points,
    };
    let (t1, t2) = (config.tol_first, config.tol_second);

    let mut checks = Vec::new();
    let mut simplified_families = None;
    let mut holomorphic = None;
    for name in config.selected_checks()? {
        let record = match name {
            CheckName::Bracket => sweep.standard(name, t1, |m, _, pt| bracket_residual(m, pt)),
            CheckName::Coframe => sweep.standard(name, t1, |m, _, pt| coframe_residual(m, pt)),
            CheckName::Metric => {
                let mut rec = sweep.standard(name, t1, |m, l, pt| {
                    Ok(inverse_block_residual(m, l, pt)?.max(w_identity_residual(m, l, pt)?))
                });
                let (_, non_pd) = sweep.max_over(|m, l, pt| {
                    if !tube_check(m, l, pt) && m.curvature() > 0.0 && l.is_integrable_for(m) {
                        return Err(GeometryError::DomainViolation("point outside tube".into()));
                    }
                    if metric_g(m, l, pt)?.is_positive_definite() {
                        Ok(0.0)
                    } else {
                        Err(GeometryError::DomainViolation("G not positive definite".into()))
                    }
                });
                if let Some(d) = non_pd {
                    rec.pass = false;
                    rec.detail = Some(d);
                }
                rec
            }
            CheckName::AlmostComplex => sweep.standard(name, t1, j_squared_residual),
            CheckName::Hermitian => sweep.standard(name, t1, hermitian_residual),
            CheckName::Dphi => sweep.standard(name, t1, |m, l, pt| {
                let r = form_residuals(m, l, pt)?;
                Ok(r.exterior_derivative.max(r.canonical).max(r.antisymmetry))
            }),
            CheckName::BaseParallel => sweep.standard(name, t1, horizontal_parallelism_residual),
            CheckName::Nijenhuis => {
                let (r, detail) = sweep.max_over(|m, l, pt| {
                    Ok(nijenhuis_closed_form(m, l, pt)?
                        .max_abs()
                        .max(nijenhuis_definition(m, l, pt)?.max_abs()))
                });
                if integrable {
                    CheckRecord {
                        name,
                        mode: CheckMode::Standard,
                        points_evaluated: points.len(),
                        max_abs_residual: r,
                        tolerance: t1,
                        pass: detail.is_none() && r < t1,
                        detail,
                    }
                } else {
                    let threshold = 100.0 * t1;
                    CheckRecord {
                        name,
                        mode: CheckMode::NegativeControl,
                        points_evaluated: points.len(),
                        max_abs_residual: r,
                        tolerance: threshold,
                        pass: detail.is_none() && r > threshold,
                        detail: detail.or_else(|| Some("A v + c != 0: structure expected to be non-integrable".into())),
                    }
                }
            }
            CheckName::NijenhuisAgreement => sweep.standard(name, t1, |m, l, pt| {
                nijenhuis_closed_form(m, l, pt)?.max_abs_diff(&nijenhuis_definition(m, l, pt)?)
            }),
            CheckName::Connection => sweep.standard(name, t1, |m, l, pt| {
                koszul_connection(m, l, pt)?
                    .coefficients
                    .max_abs_diff(&connection_closed_form(m, l, pt)?.coefficients)
            }),
            CheckName::ConnectionAxioms => sweep.standard(name, t1, |m, l, pt| {
                let ax = connection_axioms(m, l, pt, &koszul_connection(m, l, pt)?)?;
                Ok(ax.torsion.max(ax.metricity))
            }),
            CheckName::SimplifiedFamilies => {
                let mut rec = SimplifiedFamiliesRecord {
                    s_residual: 0.0,
                    q_printed_residual: 0.0,
                    q_corrected_residual: 0.0,
                    q_matched: Reading::Neither,
                    p_printed_residual: 0.0,
                    p_corrected_residual: 0.0,
                    p_matched: Reading::Neither,
                };
                let (_, detail) = sweep.max_over(|m, l, pt| {
                    let e = simplified_consistency(m, l, pt, t1)?;
                    rec.s_residual = fold_max(rec.s_residual, e.s_residual);
                    rec.q_printed_residual = fold_max(rec.q_printed_residual, e.q.printed_residual);
                    rec.q_corrected_residual = fold_max(rec.q_corrected_residual, e.q.corrected_residual);
                    rec.p_printed_residual = fold_max(rec.p_printed_residual, e.p.printed_residual);
                    rec.p_corrected_residual = fold_max(rec.p_corrected_residual, e.p.corrected_residual);
                    Ok(0.0)
                });
                let pick = |printed: f64, corrected: f64| {
                    if corrected < t1 && !(printed < corrected) {
                        Reading::MomentumCorrected
                    } else if printed < t1 {
                        Reading::Printed
                    } else {
                        Reading::Neither
                    }
                };
                rec.q_matched = pick(rec.q_printed_residual, rec.q_corrected_residual);
                rec.p_matched = pick(rec.p_printed_residual, rec.p_corrected_residual);
                let best = |a: f64, b: f64| if a < b { a } else { b };
                let r = fold_max(
                    rec.s_residual,
                    fold_max(
                        best(rec.q_printed_residual, rec.q_corrected_residual),
                        best(rec.p_printed_residual, rec.p_corrected_residual),
                    ),
                );
                let pass = detail.is_none()
                    && r < t1
                    && rec.q_matched != Reading::Neither
                    && rec.p_matched != Reading::Neither;
                simplified_families = Some(rec);
                CheckRecord {
                    name,
                    mode: CheckMode::Standard,
                    points_evaluated: points.len(),
                    max_abs_residual: r,
                    tolerance: t1,
                    pass,
                    detail,
                }
            }
            CheckName::Curvature => sweep.standard(name, t2, |m, l, pt| {
                curvature_numeric(m, l, pt)?.max_abs_diff(&ricci_and_einstein(m, l, pt)?.curvature)
            }),
            CheckName::Einstein => {
                sweep.standard(name, t1, |m, l, pt| Ok(ricci_and_einstein(m, l, pt)?.einstein_residual))
            }
            CheckName::NablaK => sweep.standard(name, t2, covariant_derivative_k),
            CheckName::NablaJ => sweep.standard(name, t1, covariant_derivative_j),
            CheckName::Holomorphic => {
                let (rec, check) = holomorphic_check(config, &model, &lift)?;
                holomorphic = Some(rec);
                check
            }
        };
        checks.push(record);
    }

    let failed: Vec<CheckName> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    Ok(VerificationReport {
        config: config.clone(),
        checks,
        simplified_families,
        holomorphic,
        summary: Summary {
            pass: failed.is_empty(),
            failed,
        },
    })
}

/// Holomorphic sectional curvature over `config.samples` (point, direction)
/// pairs drawn from the per-point streams.
pub fn holomorphic_samples(config: &RunConfig) -> Result<Vec<HolomorphicSample>, ConfigError> {
    config.validate()?;
    let model = config.space_form()?;
    let lift = config.lift()?;
    (0..config.samples)
        .map(|i| {
            let (pt, x) = sample_point_and_direction(&model, &lift, config.seed, i as u64);
            let value = holomorphic_sectional_curvature(&model, &lift, &pt, &x)?;
            Ok(HolomorphicSample {
                point: pt,
                direction: x,
                value,
            })
        })
        .collect()
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
}

fn holomorphic_check(
    config: &RunConfig,
    model: &SpaceFormModel,
    lift: &LiftParameters,
) -> Result<(HolomorphicRecord, CheckRecord), ConfigError> {
    let samples = holomorphic_samples(config)?;
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let variance = sample_variance(&values);
    let mut scaling_residual: f64 = 0.0;
    for s in &samples {
        let scaled: Vec<f64> = s.direction.iter().map(|v| -2.5 * v).collect();
        let h = holomorphic_sectional_curvature(model, lift, &s.point, &scaled)?;
        scaling_residual = scaling_residual.max((h - s.value).abs());
    }
    let curved = model.curvature() != 0.0;
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (pass, detail) = if curved {
        (
            variance > config.holomorphic_variance_min && scaling_residual < config.tol_first,
            format!(
                "variance {variance:.6e} must exceed {:.1e}; scaling residual {scaling_residual:.3e}",
                config.holomorphic_variance_min
            ),
        )
    } else {
        (
            max_abs < config.tol_first && scaling_residual < config.tol_first,
            format!("flat base: max |H| = {max_abs:.3e}"),
        )
    };
    let check = CheckRecord {
        name: CheckName::Holomorphic,
        mode: CheckMode::Standard,
        points_evaluated: samples.len(),
        max_abs_residual: scaling_residual,
        tolerance: config.tol_first,
        pass,
        detail: Some(detail),
    };
    Ok((
        HolomorphicRecord {
            variance,
            scaling_residual,
            samples,
        },
        check,
    ))
}

/// One row of a sweep toward the tube boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TubeRow {
    /// `2ct / A²`; the boundary is at 1.
    pub fraction: f64,
    pub t: f64,
    /// Smallest eigenvalue of `G_ij`.
    pub min_eig_horizontal: Option<f64>,
    /// Largest eigenvalue of `H^ij`.
    pub max_eig_vertical: Option<f64>,
    /// Smallest eigenvalue of the full `2n × 2n` metric.
    pub min_eig_metric: Option<f64>,
    pub positive_definite: bool,
    pub in_tube: bool,
}

/// Sweep `t` along `p ∥ e_1` at the chart centre, from 0 to
/// `max_fraction · A²/(2c)` in `steps` equal increments.
pub fn tube_sweep(
    model: &SpaceFormModel,
    lift: &LiftParameters,
    steps: usize,
    max_fraction: f64,
) -> Result<Vec<TubeRow>, ConfigError> {
    let c = model.curvature();
    if !(c > 0.0) {
        return Err(ConfigError::Invalid("the tube sweep needs c > 0".into()));
    }
    if steps < 1 || !(max_fraction > 0.0) {
        return Err(ConfigError::Invalid("need steps >= 1 and max-fraction > 0".into()));
    }
    let n = model.dim();
    let a = lift.a();
    let t_boundary = a * a / (2.0 * c);
    Ok((0..=steps)
        .map(|k| {
            let fraction = max_fraction * k as f64 / steps as f64;
            let t = fraction * t_boundary;
            // At q = 0, g = δ so ‖p‖² = p_1².
            let mut p = vec![0.0; n];
            p[0] = (2.0 * t).sqrt();
            let pt = CotangentPoint::new(vec![0.0; n], p);
            let in_tube = tube_check(model, lift, &pt);
            match crate::kaehler::lifted_metric_components(model, lift, &pt) {
                Ok(lm) => {
                    let full = metric_g(model, lift, &pt).expect("same domain as lifted_metric_components");
                    TubeRow {
                        fraction,
                        t,
                        min_eig_horizontal: lm.horizontal.symmetric_eigenvalues().first().copied(),
                        max_eig_vertical: lm.vertical.symmetric_eigenvalues().last().copied(),
                        min_eig_metric: full.symmetric_eigenvalues().first().copied(),
                        positive_definite: full.is_positive_definite(),
                        in_tube,
                    }
                }
                Err(_) => TubeRow {
                    fraction,
                    t,
                    min_eig_horizontal: None,
                    max_eig_vertical: None,
                    min_eig_metric: None,
                    positive_definite: false,
                    in_tube,
                },
            }
        })
        .collect())
}

/// `serde_json` formatter that prints floats as `{:.16e}` (17 significant
/// digits) and otherwise pretty-prints with two-space indentation.
struct SciFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($m:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $m<W: ?Sized + std::io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> std::io::Result<()> {
            self.inner.$m(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    }
}

pub fn to_sci_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        SciFormatter {
            inner: serde_json::ser::PrettyFormatter::new(),
        },
    );
    value.serialize(&mut ser).expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
