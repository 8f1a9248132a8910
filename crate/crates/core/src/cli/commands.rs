use log::{debug, info, warn};

use super::config::{
    config_hash, match_case, normalize_spec, FigureSpec, ResidualConfig, ResidualSource, RunConfig,
    VerifyConfig,
};
use super::csv::Table;
use crate::error::{Error, Result};
use crate::exactsol::{
    exact_buchdahl_near, exact_canonical, exact_case, fit_constants, perturbative_solution, CaseId,
    CaseKind, CaseParams, IntegrationConstants,
};
use crate::integrator::{integrate_partial, planar, second_order_residual, SecondOrderEq};
use crate::lhsystems::{self, Chart, SystemSpec};
use crate::structcheck::{run_suite, SuiteReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

/// Rendered output of a subcommand and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

/// A tabulated result, possibly cut short where the solution stops existing.
#[derive(Debug, Clone, PartialEq)]
pub struct TableOutcome {
    pub table: Table,
    pub truncated_at: Option<f64>,
}

impl TableOutcome {
    pub fn code(&self) -> i32 {
        if self.truncated_at.is_some() {
            EXIT_TRUNCATED
        } else {
            EXIT_OK
        }
    }
}

enum Solution {
    Case {
        case: CaseId,
        params: CaseParams,
        k: IntegrationConstants,
    },
    Generic(IntegrationConstants),
}

fn normalized(cfg: &RunConfig) -> Result<RunConfig> {
    cfg.validate()?;
    Ok(RunConfig {
        spec: normalize_spec(cfg.spec)?,
        ..cfg.clone()
    })
}

fn columns(spec: &SystemSpec) -> [&'static str; 3] {
    match spec.chart() {
        Chart::Buchdahl => ["t", "x", "y"],
        Chart::Canonical => ["t", "q", "p"],
    }
}

fn header(command: &str, hash: String, cfg: &RunConfig) -> Table {
    let mut table = Table::new(&columns(&cfg.spec));
    table.meta("command", command);
    table.meta("config_sha256", hash);
    table.meta("rel_tol", format!("{:e}", cfg.integrator.rel_tol));
    table.meta("abs_tol", format!("{:e}", cfg.integrator.abs_tol));
    table
}

fn resolve_solution(cfg: &RunConfig) -> Result<Solution> {
    let branch = cfg.initial.map(|s| s[0]).unwrap_or(1.0);
    if let Some(c) = cfg.constants {
        return Ok(match (c.base, match_case(&cfg.spec, branch)) {
            (None, Some((case, params))) => Solution::Case {
                case,
                params,
                k: IntegrationConstants {
                    c1: c.c1,
                    c2: c.c2,
                    t0: cfg.t0,
                },
            },
            (base, _) => Solution::Generic(IntegrationConstants {
                c1: c.c1,
                c2: c.c2,
                t0: base.unwrap_or(cfg.t0),
            }),
        });
    }
    match cfg.initial {
        Some(s) => Ok(Solution::Generic(fit_constants(&cfg.spec, s, cfg.t0)?)),
        None => Err(Error::Parse(
            "exact solutions need integration constants or an initial state".into(),
        )),
    }
}

fn evaluate(sol: &Solution, spec: &SystemSpec, t: f64, hint: &mut f64) -> Result<[f64; 2]> {
    match sol {
        Solution::Case { case, params, k } => Ok(exact_case(case, params, k, t)?.into()),
        Solution::Generic(k) => match spec.chart() {
            Chart::Canonical => Ok(exact_canonical(spec, k, t)?.into()),
            Chart::Buchdahl => {
                let s = exact_buchdahl_near(spec, k, t, *hint)?;
                *hint = s.x;
                Ok(s.into())
            }
        },
    }
}

/// Where a failed evaluation at `t` ends the sampled range, if it does.
fn truncation_point(e: &Error, t: f64) -> Option<f64> {
    match e {
        Error::DeformationBlowup { t_critical } => Some(*t_critical),
        Error::DomainViolation { .. } | Error::SingularState(_) => Some(t),
        _ => None,
    }
}

fn exact_samples(cfg: &RunConfig) -> Result<(Vec<(f64, [f64; 2])>, Option<f64>)> {
    let sol = resolve_solution(cfg)?;
    let mut hint = cfg.initial.map(|s| s[0]).unwrap_or(1.0);
    let mut out = Vec::with_capacity(cfg.samples);
    for t in cfg.grid() {
        match evaluate(&sol, &cfg.spec, t, &mut hint) {
            Ok(s) => out.push((t, s)),
            Err(e) => match truncation_point(&e, t) {
                Some(at) => {
                    warn!("exact solution stops at t = {at}: {e}");
                    return Ok((out, Some(at)));
                }
                None => return Err(e),
            },
        }
    }
    Ok((out, None))
}

/// Closed-form solution on the uniform grid of `cfg`.
pub fn cmd_exact(cfg: &RunConfig) -> Result<TableOutcome> {
    let cfg = normalized(cfg)?;
    let mut table = header("exact", config_hash(&cfg), &cfg);
    let (samples, truncated_at) = exact_samples(&cfg)?;
    if let Some(at) = truncated_at {
        table.meta("truncated_at", format!("{at:.16e}"));
    }
    for (t, s) in samples {
        table.push(vec![t, s[0], s[1]]);
    }
    Ok(TableOutcome { table, truncated_at })
}

/// Integrates the system from its initial state (or the state the exact
/// solution has at `t0`) and samples the dense output on the grid.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<TableOutcome> {
    let cfg = normalized(cfg)?;
    let mut table = header("simulate", config_hash(&cfg), &cfg);
    let s0 = match cfg.initial {
        Some(s) => s,
        None => {
            let sol = resolve_solution(&cfg)?;
            let mut hint = 1.0;
            evaluate(&sol, &cfg.spec, cfg.t0, &mut hint)?
        }
    };
    let spec = cfg.spec;
    let icfg = cfg.integrator.dense();
    let (traj, err) = integrate_partial(
        planar(|t, s| lhsystems::rhs(&spec, s, t)),
        &s0,
        cfg.t0,
        cfg.t1,
        &icfg,
    );
    info!(
        "integrated to t = {} ({} accepted, {} rejected steps)",
        traj.final_t(),
        traj.meta.steps_accepted,
        traj.meta.steps_rejected
    );
    let truncated_at = match err {
        None => None,
        Some(Error::StepUnderflow { t }) => Some(t),
        Some(e) => return Err(e),
    };
    table.meta("steps_accepted", traj.meta.steps_accepted);
    table.meta("steps_rejected", traj.meta.steps_rejected);
    if let Some(at) = truncated_at {
        table.meta("truncated_at", format!("{at:.16e}"));
    }
    let reached = traj.final_t();
    let forward = cfg.t1 >= cfg.t0;
    for t in cfg.grid() {
        let inside = if forward { t <= reached } else { t >= reached };
        if !inside {
            break;
        }
        let s = traj.interpolate(t)?;
        table.push(vec![t, s[0], s[1]]);
    }
    Ok(TableOutcome { table, truncated_at })
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<(SuiteReport, Outcome)> {
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0) {
            return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
        }
    }
    let spec = cfg.spec.map(normalize_spec).transpose()?;
    let opts = VerifyOptions {
        seed: cfg.seed,
        tol: cfg.tol,
    };
    let report = run_suite(cfg.suite, spec.as_ref(), &opts);
    debug!("suite {} passed: {}", report.suite, report.passed);
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
    Ok((report, Outcome { text, code }))
}

/// Long-format first-order solutions of the deformed classical case, one
/// series per `z`.
pub fn cmd_figure(fs: &FigureSpec) -> Result<TableOutcome> {
    fs.validate()?;
    let mut table = Table::new(&["z", "t", "x", "y"]);
    table.meta("command", "figure");
    table.meta("figure", serde_json::to_value(fs.figure).expect("serializes").as_str().unwrap_or(""));
    table.meta("config_sha256", config_hash(fs));
    let case = CaseId::new(CaseKind::ClassicalBuchdahl, true, false)?;
    let k = IntegrationConstants {
        c1: fs.c1,
        c2: fs.c2,
        t0: fs.t_range.0,
    };
    let mut truncated_at = None;
    for &z in &fs.z_values {
        for t in fs.grid() {
            match perturbative_solution(&case, z, &k, t, 1.0) {
                Ok(s) => table.push(vec![z, t, s.x, s.y]),
                Err(e) => {
                    warn!("series z = {z} stops at t = {t}: {e}");
                    table.meta("truncated_z", z);
                    table.meta("truncated_at", format!("{t:.16e}"));
                    truncated_at.get_or_insert(t);
                    break;
                }
            }
        }
    }
    Ok(TableOutcome { table, truncated_at })
}

/// The scalar second-order equation whose solutions the spec describes.
pub fn equation_for(spec: &SystemSpec) -> Result<SecondOrderEq> {
    let a = match (spec.chart(), spec.a()) {
        (Chart::Buchdahl, Some(a)) => *a,
        _ => return Err(Error::InvalidSpec("residuals need a Buchdahl-chart spec".into())),
    };
    if spec.b2().is_some() {
        return Err(Error::NoClosedForm("no scalar equation is tabulated for b2 ≠ 0".into()));
    }
    let z = spec.z();
    if z == 0.0 {
        return Ok(SecondOrderEq::General { a, b: *spec.b1() });
    }
    match match_case(spec, 1.0).map(|(c, _)| c.kind) {
        Some(CaseKind::ClassicalBuchdahl) => Ok(SecondOrderEq::DeformedClassical { z }),
        Some(CaseKind::LogCase) => Ok(SecondOrderEq::DeformedLog { z }),
        Some(CaseKind::PowerCase(alpha)) => Ok(SecondOrderEq::DeformedPower { alpha, z }),
        _ => Err(Error::NoClosedForm(
            "deformed scalar equations are only tabulated for a = α/x, b = 1/t".into(),
        )),
    }
}

/// `x'' − F(t, x, x')` along the exact or first-order solution.
pub fn cmd_residual(rc: &ResidualConfig) -> Result<TableOutcome> {
    let cfg = normalized(&rc.run)?;
    let eq = equation_for(&cfg.spec)?;
    let hashed = ResidualConfig {
        run: cfg.clone(),
        source: rc.source,
    };
    let (samples, truncated_at) = match rc.source {
        ResidualSource::Exact => exact_samples(&cfg)?,
        ResidualSource::FirstOrder => {
            let c = cfg
                .constants
                .filter(|c| c.base.is_none())
                .ok_or_else(|| Error::Parse("first-order solutions need library constants".into()))?;
            let branch = cfg.initial.map(|s| s[0]).unwrap_or(1.0);
            let (case, _) = match_case(&cfg.spec, branch)
                .ok_or_else(|| Error::NoClosedForm("no first-order solution for this spec".into()))?;
            let k = IntegrationConstants {
                c1: c.c1,
                c2: c.c2,
                t0: cfg.t0,
            };
            let mut out = Vec::new();
            let mut cut = None;
            for t in cfg.grid() {
                match perturbative_solution(&case, cfg.spec.z(), &k, t, branch) {
                    Ok(s) => out.push((t, [s.x, s.y])),
                    Err(e) => match truncation_point(&e, t) {
                        Some(at) => {
                            cut = Some(at);
                            break;
                        }
                        None => return Err(e),
                    },
                }
            }
            (out, cut)
        }
    };
    let t: Vec<f64> = samples.iter().map(|p| p.0).collect();
    let x: Vec<f64> = samples.iter().map(|p| p.1[0]).collect();
    let residual = second_order_residual(&eq, &t, &x)?;
    let max = residual.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    let mut table = Table::new(&["t", "residual"]);
    table.meta("command", "residual");
    table.meta("config_sha256", config_hash(&hashed));
    table.meta("max_abs_residual", format!("{max:.16e}"));
    if let Some(at) = truncated_at {
        table.meta("truncated_at", format!("{at:.16e}"));
    }
    for (t, r) in residual {
        table.push(vec![t, r]);
    }
    Ok(TableOutcome { table, truncated_at })
}

#[cfg(test)]
mod tests {
    use super::super::config::{ConstantsConfig, Figure};
    use super::*;
    use crate::funcspace::CoefficientFunction;

    fn classical(z: f64) -> RunConfig {
        RunConfig {
            spec: SystemSpec::b2_buchdahl(z, CoefficientFunction::reciprocal(3.0), CoefficientFunction::reciprocal(1.0)),
            ..RunConfig::default()
        }
    }

    #[test]
    fn exact_classical_column() {
        let out = cmd_exact(&classical(0.0)).unwrap();
        assert_eq!(out.code(), EXIT_OK);
        assert_eq!(out.table.rows.len(), 101);
        for row in &out.table.rows {
            let want = 1.0 / (0.5 + 0.5 * row[0] * row[0]).sqrt();
            assert!((row[1] - want).abs() <= 1e-15 * want, "{row:?}");
        }
    }

    #[test]
    fn deformed_exact_matches_simulation() {
        let cfg = classical(0.1);
        let e = cmd_exact(&cfg).unwrap();
        let s = cmd_simulate(&cfg).unwrap();
        assert_eq!(e.table.rows.len(), s.table.rows.len());
        for (a, b) in e.table.rows.iter().zip(&s.table.rows) {
            assert_eq!(a[0], b[0]);
            for i in 1..3 {
                assert!((a[i] - b[i]).abs() <= 1e-6 * a[i].abs(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn blowup_truncates() {
        // 1 - z t c1 vanishes at t = 4
        let cfg = RunConfig { t1: 6.0, ..classical(0.5) };
        let e = cmd_exact(&cfg).unwrap();
        assert_eq!(e.code(), EXIT_TRUNCATED);
        assert!(e.table.rows.iter().all(|r| r[0] < 4.0));
        assert!(e.table.to_csv().contains("# truncated_at="));
        let s = cmd_simulate(&cfg).unwrap();
        assert_eq!(s.code(), EXIT_TRUNCATED);
        let at = s.truncated_at.unwrap();
        assert!(at < 4.0 && at > 3.5, "{at}");
    }

    #[test]
    fn zero_b2_gives_identical_bytes() {
        let a = CoefficientFunction::reciprocal(3.0);
        let b = CoefficientFunction::reciprocal(1.0);
        let h4 = RunConfig {
            spec: SystemSpec::h4_buchdahl(0.1, a, b, CoefficientFunction::constant(0.0)),
            ..RunConfig::default()
        };
        let b2 = classical(0.1);
        assert_eq!(cmd_exact(&h4).unwrap().table.to_csv(), cmd_exact(&b2).unwrap().table.to_csv());
        assert_eq!(cmd_simulate(&h4).unwrap().table.to_csv(), cmd_simulate(&b2).unwrap().table.to_csv());
    }

    #[test]
    fn initial_state_drives_generic_exact() {
        let spec = SystemSpec::b2_buchdahl(0.05, CoefficientFunction::monomial(1.0, 2.0), CoefficientFunction::constant(0.6));
        let cfg = RunConfig {
            spec,
            initial: Some([0.8, 0.3]),
            constants: None,
            t0: 0.0,
            t1: 1.0,
            samples: 11,
            ..RunConfig::default()
        };
        let e = cmd_exact(&cfg).unwrap();
        let s = cmd_simulate(&cfg).unwrap();
        assert_eq!(e.table.rows[0][1..], [0.8, 0.3]);
        for (a, b) in e.table.rows.iter().zip(&s.table.rows) {
            assert!((a[1] - b[1]).abs() < 1e-7 && (a[2] - b[2]).abs() < 1e-7, "{a:?} {b:?}");
        }
    }

    #[test]
    fn exact_needs_constants_or_state() {
        let cfg = RunConfig { constants: None, ..RunConfig::default() };
        assert!(matches!(cmd_exact(&cfg), Err(Error::Parse(_))));
        let base = RunConfig {
            constants: Some(ConstantsConfig { c1: 0.5, c2: 0.5, base: Some(1.0) }),
            ..RunConfig::default()
        };
        // base-point constants describe a different curve than the library ones
        let library = cmd_exact(&RunConfig::default()).unwrap();
        let based = cmd_exact(&base).unwrap();
        assert!((library.table.rows[0][1] - based.table.rows[0][1]).abs() > 1e-3);
    }

    #[test]
    fn figure_zero_series_is_the_closed_form() {
        let out = cmd_figure(&FigureSpec::new(Figure::Fig1)).unwrap();
        assert_eq!(out.code(), EXIT_OK);
        assert_eq!(out.table.rows.len(), 400);
        for row in out.table.rows.iter().filter(|r| r[0] == 0.0) {
            let want = 1.0 / (0.5 + 0.5 * row[1] * row[1]).sqrt();
            assert!((row[2] - want).abs() <= 1e-15 * want);
        }
    }

    #[test]
    fn figure_mirrors_under_sign_flip() {
        let f1 = cmd_figure(&FigureSpec::new(Figure::Fig1)).unwrap().table.rows;
        let f2 = cmd_figure(&FigureSpec::new(Figure::Fig2)).unwrap().table.rows;
        let base: Vec<&Vec<f64>> = f1.iter().filter(|r| r[0] == 0.0).collect();
        for (p, m) in f1.iter().zip(&f2).filter(|(p, _)| p[0] != 0.0) {
            let x0 = base.iter().find(|r| r[1] == p[1]).unwrap()[2];
            assert!(((p[2] - x0) + (m[2] - x0)).abs() < 1e-14, "{p:?} {m:?}");
        }
    }

    #[test]
    fn residual_orders() {
        let exact = ResidualConfig { run: RunConfig { samples: 801, ..classical(0.0) }, source: ResidualSource::Exact };
        let r = cmd_residual(&exact).unwrap();
        assert!(r.table.rows.iter().all(|row| row[1].abs() < 1e-7));
        let first = |z: f64| {
            let rc = ResidualConfig { run: RunConfig { samples: 801, ..classical(z) }, source: ResidualSource::FirstOrder };
            cmd_residual(&rc).unwrap().table.rows.iter().map(|r| r[1].abs()).fold(0.0, f64::max)
        };
        let slope = (first(1e-2) / first(1e-3)).log10();
        assert!((slope - 2.0).abs() < 0.2, "{slope}");
    }

    #[test]
    fn verify_codes() {
        let cfg = VerifyConfig { suite: crate::structcheck::Suite::Brackets, spec: None, seed: 42, tol: Some(1e-15), out: None };
        assert_eq!(cmd_verify(&cfg).unwrap().1.code, EXIT_FAILED);
        let cfg = VerifyConfig { tol: None, suite: crate::structcheck::Suite::Lie, ..cfg };
        assert_eq!(cmd_verify(&cfg).unwrap().1.code, EXIT_OK);
    }
}
