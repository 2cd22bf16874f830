//! Acceptance suite. Runs as a plain binary (`harness = false`) so every
//! criterion prints one PASS/FAIL line regardless of output capture.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kaehler_core::connection::{
    connection_axioms, connection_closed_form, covariant_derivative_k, curvature_closed_form, curvature_numeric,
    holomorphic_sectional_curvature, koszul_connection, ricci_and_einstein, simplified_consistency, Reading,
};
use kaehler_core::cotangent::{bracket_residual, energy_density};
use kaehler_core::kaehler::{
    almost_complex_j, form_residuals, hermitian_residual, j_squared_residual, metric_g, nijenhuis_closed_form,
    nijenhuis_definition,
};
use kaehler_core::report::{sample_variance, tube_sweep};
use kaehler_core::sampling::{sample_point_and_direction, sample_points};
use kaehler_core::{CotangentPoint, GeometryError, LiftParameters, SpaceFormModel, VMode};

const SEED: u64 = 20240917;
const POINTS: usize = 100;

struct Config {
    c: f64,
    a: f64,
    n: usize,
}

impl Config {
    fn label(&self) -> String {
        format!("c={:+} A={} n={}", self.c, self.a, self.n)
    }
    fn model(&self) -> SpaceFormModel {
        SpaceFormModel::new(self.n, self.c).unwrap()
    }
    fn lift(&self) -> LiftParameters {
        LiftParameters::integrable(self.a).unwrap()
    }
    /// A deliberately non-integrable `v`, chosen so `A v + c = 0.7 A`.
    fn lift_override(&self) -> LiftParameters {
        LiftParameters::new(self.a, VMode::Override(-self.c / self.a + 0.7)).unwrap()
    }
}

fn grid() -> Vec<Config> {
    let mut out = Vec::new();
    for c in [-1.0, 1.0] {
        for a in [1.0, 2.0] {
            for n in [2, 3] {
                out.push(Config { c, a, n });
            }
        }
    }
    out
}

/// Max of `f` over the points; any error is reported as a failure.
fn max_over(
    points: &[CotangentPoint],
    mut f: impl FnMut(&CotangentPoint) -> kaehler_core::Result<f64>,
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (i, pt) in points.iter().enumerate() {
        let v = f(pt).map_err(|e| format!("point {i}: {e}"))?;
        if v.is_nan() {
            return Err(format!("point {i}: NaN residual"));
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

struct Outcome {
    pass: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            summary: String::new(),
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.failures.push(what());
        }
    }

    fn below(&mut self, label: &str, r: Result<f64, String>, tol: f64) -> f64 {
        match r {
            Ok(v) => {
                self.require(v < tol, || format!("{label}: {v:.3e} >= {tol:.0e}"));
                v
            }
            Err(e) => {
                self.require(false, || format!("{label}: {e}"));
                f64::NAN
            }
        }
    }
}

fn bracket_identity() -> Outcome {
    let mut out = Outcome::new();
    let (mut worst, mut slowest) = (0.0f64, Duration::ZERO);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let start = Instant::now();
        let pts = sample_points(&m, &l, POINTS, SEED);
        let r = out.below(&cfg.label(), max_over(&pts, |pt| bracket_residual(&m, pt)), 1e-8);
        let elapsed = start.elapsed();
        out.require(elapsed < Duration::from_secs(5), || {
            format!("{}: {elapsed:?} exceeds 5 s", cfg.label())
        });
        worst = worst.max(r);
        slowest = slowest.max(elapsed);
    }
    out.summary = format!("max residual {worst:.2e} (< 1e-8), slowest config {slowest:.2?} (< 5 s)");
    out
}

fn almost_kaehler() -> Outcome {
    let mut out = Outcome::new();
    let (mut j2, mut herm, mut dphi) = (0.0f64, 0.0f64, 0.0f64);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let pts = sample_points(&m, &l, POINTS, SEED);
        let lbl = cfg.label();
        j2 = j2.max(out.below(
            &format!("{lbl} J^2"),
            max_over(&pts, |pt| j_squared_residual(&m, &l, pt)),
            1e-9,
        ));
        herm = herm.max(out.below(
            &format!("{lbl} hermitian"),
            max_over(&pts, |pt| hermitian_residual(&m, &l, pt)),
            1e-9,
        ));
        dphi = dphi.max(out.below(
            &format!("{lbl} dphi"),
            max_over(&pts, |pt| Ok(form_residuals(&m, &l, pt)?.exterior_derivative)),
            1e-9,
        ));
    }
    out.summary = format!("J^2+Id {j2:.2e}, hermitian {herm:.2e}, dphi {dphi:.2e} (each < 1e-9)");
    out
}

fn integrability_dichotomy() -> Outcome {
    let mut out = Outcome::new();
    let (mut integrable_max, mut override_max, mut agree) = (0.0f64, 0.0f64, 0.0f64);
    for cfg in grid() {
        let m = cfg.model();
        for (mode, l) in [("integrable", cfg.lift()), ("override", cfg.lift_override())] {
            let pts = sample_points(&m, &l, POINTS, SEED);
            let lbl = format!("{} {mode}", cfg.label());
            let diff = max_over(&pts, |pt| {
                nijenhuis_closed_form(&m, &l, pt)?.max_abs_diff(&nijenhuis_definition(&m, &l, pt)?)
            });
            agree = agree.max(out.below(&format!("{lbl} agreement"), diff, 1e-7));
            let size = max_over(&pts, |pt| {
                Ok(nijenhuis_closed_form(&m, &l, pt)?
                    .max_abs()
                    .max(nijenhuis_definition(&m, &l, pt)?.max_abs()))
            });
            if mode == "integrable" {
                integrable_max = integrable_max.max(out.below(&lbl, size, 1e-9));
            } else {
                match size {
                    Ok(v) => {
                        out.require(v > 1e-3, || format!("{lbl}: max component {v:.3e} not > 1e-3"));
                        override_max = if override_max == 0.0 { v } else { override_max.min(v) };
                    }
                    Err(e) => out.require(false, || format!("{lbl}: {e}")),
                }
            }
        }
    }
    out.summary = format!(
        "integrable max {integrable_max:.2e} (< 1e-9), override min-over-configs max {override_max:.2e} (> 1e-3), \
         agreement {agree:.2e} (< 1e-7)"
    );
    out
}

fn connection_oracle() -> Outcome {
    let mut out = Outcome::new();
    let (mut diff, mut torsion, mut metricity) = (0.0f64, 0.0f64, 0.0f64);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let pts = sample_points(&m, &l, POINTS, SEED);
        let lbl = cfg.label();
        diff = diff.max(out.below(
            &format!("{lbl} koszul vs closed form"),
            max_over(&pts, |pt| {
                koszul_connection(&m, &l, pt)?
                    .coefficients
                    .max_abs_diff(&connection_closed_form(&m, &l, pt)?.coefficients)
            }),
            1e-8,
        ));
        let axioms = |pick: fn(&kaehler_core::connection::ConnectionAxioms) -> f64| {
            max_over(&pts, |pt| {
                Ok(pick(&connection_axioms(
                    &m,
                    &l,
                    pt,
                    &connection_closed_form(&m, &l, pt)?,
                )?))
            })
        };
        let t = axioms(|a| a.torsion);
        let g = axioms(|a| a.metricity);
        torsion = torsion.max(out.below(&format!("{lbl} torsion"), t, 1e-8));
        metricity = metricity.max(out.below(&format!("{lbl} nabla G"), g, 1e-8));
    }
    out.summary = format!("coefficient diff {diff:.2e}, torsion {torsion:.2e}, nabla G {metricity:.2e} (each < 1e-8)");
    out
}

fn simplified_families_resolution() -> Outcome {
    let mut out = Outcome::new();
    let (mut s, mut matched_res) = (0.0f64, 0.0f64);
    let mut readings: Vec<(Reading, Reading)> = Vec::new();
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        for (i, pt) in sample_points(&m, &l, POINTS, SEED).iter().enumerate() {
            match simplified_consistency(&m, &l, pt, 1e-9) {
                Ok(e) => {
                    s = s.max(e.s_residual);
                    for fam in [e.q, e.p] {
                        let r = match fam.matched {
                            Reading::Printed => fam.printed_residual,
                            Reading::MomentumCorrected => fam.corrected_residual,
                            Reading::Neither => f64::INFINITY,
                        };
                        matched_res = matched_res.max(r);
                    }
                    if !readings.contains(&(e.q.matched, e.p.matched)) {
                        readings.push((e.q.matched, e.p.matched));
                    }
                }
                Err(e) => out.require(false, || format!("{} point {i}: {e}", cfg.label())),
            }
        }
    }
    out.require(s < 1e-9, || format!("S residual {s:.3e} >= 1e-9"));
    out.require(matched_res < 1e-9, || {
        format!("matching reading residual {matched_res:.3e} >= 1e-9")
    });
    // Points with p = 0 cannot distinguish the readings, but sampled points
    // have p != 0 almost surely, so a single consistent reading is expected.
    out.require(readings.len() == 1 && readings[0].0 != Reading::Neither, || {
        format!("readings not unique across points: {readings:?}")
    });
    let (q, p) = readings
        .first()
        .copied()
        .unwrap_or((Reading::Neither, Reading::Neither));
    out.summary = format!("S {s:.2e} (< 1e-9); Q reading {q:?}, P reading {p:?}, residual {matched_res:.2e} (< 1e-9)");
    out
}

fn curvature_einstein() -> Outcome {
    let mut out = Outcome::new();
    let (mut curv, mut ein) = (0.0f64, 0.0f64);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let pts = sample_points(&m, &l, POINTS, SEED);
        let lbl = cfg.label();
        curv = curv.max(out.below(
            &format!("{lbl} curvature"),
            max_over(&pts, |pt| {
                curvature_numeric(&m, &l, pt)?.max_abs_diff(&curvature_closed_form(&m, &l, pt)?.curvature)
            }),
            1e-6,
        ));
        ein = ein.max(out.below(
            &format!("{lbl} einstein"),
            max_over(&pts, |pt| {
                // Ricci from the numeric curvature, compared with (cn/A) G.
                let k = curvature_numeric(&m, &l, pt)?;
                let ric = kaehler_core::connection::ricci_from(&k);
                let g = metric_g(&m, &l, pt)?;
                Ok(ric
                    .sub(&g.scale(cfg.c * cfg.n as f64 / cfg.a))
                    .max_abs()
                    .max(ricci_and_einstein(&m, &l, pt)?.einstein_residual))
            }),
            1e-8,
        ));
    }
    let cfg = Config { c: -1.0, a: 1.0, n: 2 };
    let (m, l) = (cfg.model(), cfg.lift());
    let mut factor_err = 0.0f64;
    let mut factor = f64::NAN;
    for pt in sample_points(&m, &l, POINTS, SEED) {
        match ricci_and_einstein(&m, &l, &pt) {
            Ok(d) => {
                factor = d.einstein_factor;
                factor_err = factor_err.max((d.einstein_factor + 2.0).abs());
            }
            Err(e) => out.require(false, || format!("einstein factor: {e}")),
        }
    }
    out.require(factor_err < 1e-10, || {
        format!("einstein factor off by {factor_err:.3e}")
    });
    out.summary = format!(
        "closed vs numeric {curv:.2e} (< 1e-6), |Ric - (cn/A)G| {ein:.2e} (< 1e-8), factor {factor:.12} (|+2| {factor_err:.1e} < 1e-10)"
    );
    out
}

fn local_symmetry() -> Outcome {
    let mut out = Outcome::new();
    let (mut worst, mut slowest_n3) = (0.0f64, Duration::ZERO);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let start = Instant::now();
        let pts = sample_points(&m, &l, 25, SEED);
        worst = worst.max(out.below(
            &cfg.label(),
            max_over(&pts, |pt| covariant_derivative_k(&m, &l, pt)),
            1e-6,
        ));
        let elapsed = start.elapsed();
        if cfg.n == 3 {
            slowest_n3 = slowest_n3.max(elapsed);
            out.require(elapsed < Duration::from_secs(60), || {
                format!("{}: {elapsed:?} exceeds 60 s", cfg.label())
            });
        }
    }
    let mut flat_max = 0.0f64;
    for n in [2, 3] {
        let m = SpaceFormModel::new(n, 0.0).unwrap();
        for a in [1.0, 2.0] {
            let l = LiftParameters::integrable(a).unwrap();
            let pts = sample_points(&m, &l, 25, SEED);
            match max_over(&pts, |pt| covariant_derivative_k(&m, &l, pt)) {
                Ok(v) => {
                    flat_max = flat_max.max(v);
                    out.require(v == 0.0, || {
                        format!("flat n={n} A={a}: |nabla K| = {v:e}, expected exactly 0")
                    });
                }
                Err(e) => out.require(false, || format!("flat n={n}: {e}")),
            }
        }
    }
    out.summary = format!(
        "max |nabla K| {worst:.2e} (< 1e-6), flat {flat_max:e} (== 0), slowest n=3 config {slowest_n3:.2?} (< 60 s)"
    );
    out
}

fn holomorphic_curvature() -> Outcome {
    let mut out = Outcome::new();
    let (mut min_var, mut scaling) = (f64::INFINITY, 0.0f64);
    for cfg in grid() {
        let (m, l) = (cfg.model(), cfg.lift());
        let mut values = Vec::with_capacity(200);
        for i in 0..200 {
            let (pt, x) = sample_point_and_direction(&m, &l, SEED, i);
            let h = match holomorphic_sectional_curvature(&m, &l, &pt, &x) {
                Ok(h) => h,
                Err(e) => {
                    out.require(false, || format!("{} pair {i}: {e}", cfg.label()));
                    continue;
                }
            };
            for lambda in [-3.0, 0.01, 7.5] {
                let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
                match holomorphic_sectional_curvature(&m, &l, &pt, &scaled) {
                    Ok(hs) => scaling = scaling.max((hs - h).abs()),
                    Err(e) => out.require(false, || format!("{} pair {i} scaled: {e}", cfg.label())),
                }
            }
            values.push(h);
        }
        let var = sample_variance(&values);
        out.require(var > 1e-4, || format!("{}: variance {var:.3e} not > 1e-4", cfg.label()));
        min_var = min_var.min(var);
    }
    out.require(scaling < 1e-9, || format!("scaling residual {scaling:.3e} >= 1e-9"));
    out.summary = format!("min variance over configs {min_var:.3e} (> 1e-4), scaling residual {scaling:.2e} (< 1e-9)");
    out
}

fn is_domain_violation<T>(r: &kaehler_core::Result<T>) -> bool {
    matches!(r, Err(GeometryError::DomainViolation(_)))
}

fn domain_behaviour() -> Outcome {
    let mut out = Outcome::new();
    let c = 1.0;
    let mut checked = 0usize;
    for a in [1.0, 2.0] {
        for n in [2, 3] {
            let m = SpaceFormModel::new(n, c).unwrap();
            let l = LiftParameters::integrable(a).unwrap();

            // Exact boundary at the chart centre: |p| = A/sqrt(c) gives 2ct = A².
            let mut p = vec![0.0; n];
            p[0] = a / c.sqrt();
            let boundary = CotangentPoint::new(vec![0.0; n], p);
            let x: Vec<f64> = (0..2 * n).map(|i| 1.0 + i as f64).collect();
            let ops = [
                ("metric", is_domain_violation(&metric_g(&m, &l, &boundary))),
                ("J", is_domain_violation(&almost_complex_j(&m, &l, &boundary))),
                ("connection", is_domain_violation(&koszul_connection(&m, &l, &boundary))),
                (
                    "curvature",
                    is_domain_violation(&curvature_closed_form(&m, &l, &boundary)),
                ),
                (
                    "holomorphic",
                    is_domain_violation(&holomorphic_sectional_curvature(&m, &l, &boundary, &x)),
                ),
            ];
            for (name, errored) in ops {
                out.require(errored, || format!("A={a} n={n}: {name} did not fail at 2ct = A^2"));
            }

            // Random points scaled across the boundary: error iff 2ct >= A².
            for i in 0..200u64 {
                let (pt, _) = sample_point_and_direction(&m, &l, SEED, i);
                let t0 = energy_density(&m, &pt).unwrap();
                if t0 == 0.0 {
                    continue;
                }
                let target = 0.8 + 0.4 * (i as f64 / 199.0);
                let s = (target * a * a / (2.0 * c * t0)).sqrt();
                let scaled = CotangentPoint::new(pt.q.clone(), pt.p.iter().map(|v| v * s).collect());
                let t = energy_density(&m, &scaled).unwrap();
                let outside = 2.0 * c * t >= a * a;
                let res = metric_g(&m, &l, &scaled);
                let agrees = if outside {
                    is_domain_violation(&res)
                } else {
                    res.map(|g| g.is_positive_definite()).unwrap_or(false)
                };
                out.require(agrees, || {
                    format!(
                        "A={a} n={n} point {i}: 2ct/A^2 = {} misclassified",
                        2.0 * c * t / (a * a)
                    )
                });
                checked += 1;
            }

            // Sweep along the centre ray up to the boundary.
            let rows = tube_sweep(&m, &l, 1000, 1.0).unwrap();
            let inside: Vec<_> = rows.iter().filter(|r| r.fraction < 1.0).collect();
            for w in inside.windows(2) {
                let (r0, r1) = (w[0], w[1]);
                out.require(r0.positive_definite && r1.positive_definite, || {
                    format!("A={a} n={n}: not PD inside")
                });
                out.require(r1.max_eig_vertical > r0.max_eig_vertical, || {
                    format!("A={a} n={n}: vertical eigenvalue not increasing at {}", r1.fraction)
                });
                out.require(r1.min_eig_horizontal < r0.min_eig_horizontal, || {
                    format!("A={a} n={n}: horizontal eigenvalue not decreasing at {}", r1.fraction)
                });
            }
            for r in &inside {
                // Along p: H eigenvalue 1/(A(1−f)), G eigenvalue A(1−f).
                let f = r.fraction;
                let hv = r.max_eig_vertical.unwrap_or(f64::NAN) * a * (1.0 - f);
                let gh = r.min_eig_horizontal.unwrap_or(f64::NAN) / (a * (1.0 - f));
                out.require((hv - 1.0).abs() < 1e-8 && (gh - 1.0).abs() < 1e-8, || {
                    format!("A={a} n={n} f={f}: eigenvalue scaling {hv} {gh}")
                });
            }
            let last = rows.last().unwrap();
            out.require(
                !last.positive_definite && !last.in_tube && last.max_eig_vertical.is_none(),
                || format!("A={a} n={n}: boundary row not rejected"),
            );
            let near = inside.last().unwrap();
            out.require(near.max_eig_vertical.unwrap_or(0.0) > 900.0 / a, || {
                format!(
                    "A={a} n={n}: vertical eigenvalue {:?} not diverging",
                    near.max_eig_vertical
                )
            });
        }
    }
    out.summary = format!(
        "5 operations fail at 2ct = A^2; {checked} scaled points classified exactly; along p the vertical \
         eigenvalue grows as 1/(A(1 - 2ct/A^2)) and G stays PD strictly inside"
    );
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 bracket identity", bracket_identity),
        ("2 almost-Kaehler suite", almost_kaehler),
        ("3 integrability dichotomy", integrability_dichotomy),
        ("4 connection oracle equivalence", connection_oracle),
        ("5 simplified connection families", simplified_families_resolution),
        ("6 curvature and Einstein", curvature_einstein),
        ("7 local symmetry", local_symmetry),
        ("8 holomorphic sectional curvature", holomorphic_curvature),
        ("9 domain behaviour", domain_behaviour),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "[{}] criterion {name}: {} ({:.2?})",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            start.elapsed()
        );
        for f in o.failures.iter().take(10) {
            println!("       {f}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
