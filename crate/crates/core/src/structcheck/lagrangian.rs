//! Euler–Lagrange residuals `d/dt(∂L/∂ẋ) − ∂L/∂x` of the known Lagrangians
//! of the Buchdahl equation.

use super::report::CheckReport;
use crate::error::{Error, Result};
use crate::exactsol::{exact_case, CaseId, CaseKind, CaseParams, IntegrationConstants};
use crate::integrator::{integrate, IntegratorConfig, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Lagrangian {
    /// `t³x⁶/ẋ²`
    L0,
    /// `t³x⁶/(ẋ² + k t² x⁶)`
    L1 { k: f64 },
    /// `1/(k ẋ² t³ x⁶ + t)`
    L2 { k: f64 },
}

impl Lagrangian {
    /// `(∂L/∂x, ∂L/∂ẋ)`.
    pub fn partials(&self, t: f64, x: f64, v: f64) -> Result<(f64, f64)> {
        if v == 0.0 {
            return Err(Error::singular("velocity vanishes"));
        }
        let t3 = t * t * t;
        let x5 = x.powi(5);
        let x6 = x5 * x;
        Ok(match *self {
            Lagrangian::L0 => (6.0 * t3 * x5 / (v * v), -2.0 * t3 * x6 / (v * v * v)),
            Lagrangian::L1 { k } => {
                let d = v * v + k * t * t * x6;
                let d2 = d * d;
                (6.0 * t3 * x5 * v * v / d2, -2.0 * v * t3 * x6 / d2)
            }
            Lagrangian::L2 { k } => {
                let d = k * v * v * t3 * x6 + t;
                let d2 = d * d;
                (-6.0 * k * v * v * t3 * x5 / d2, -2.0 * k * v * t3 * x6 / d2)
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            Lagrangian::L0 => "L0".into(),
            Lagrangian::L1 { k } => format!("L1(k={k})"),
            Lagrangian::L2 { k } => format!("L2(k={k})"),
        }
    }
}

/// Residual at every interior sample of uniformly spaced `(t, x, ẋ)`.
pub fn lagrangian_residual(l: &Lagrangian, t: &[f64], x: &[f64], v: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = t.len();
    if x.len() != n || v.len() != n {
        return Err(Error::InvalidSpec("sample arrays differ in length".into()));
    }
    if n < 5 {
        return Err(Error::InsufficientSamples { got: n, need: 5 });
    }
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-8 * h.abs()) {
        return Err(Error::domain("samples must be uniformly spaced", h));
    }
    let partials: Vec<(f64, f64)> = (0..n)
        .map(|i| l.partials(t[i], x[i], v[i]))
        .collect::<Result<_>>()?;
    Ok((2..n - 2)
        .map(|i| {
            let p = |k: usize| partials[k].1;
            let dp = (p(i - 2) - 8.0 * p(i - 1) + 8.0 * p(i + 1) - p(i + 2)) / (12.0 * h);
            (t[i], dp - partials[i].0)
        })
        .collect())
}

/// Residual along a dense-output trajectory of `(x, ẋ)`, resampled on `n` points.
pub fn lagrangian_residual_along(l: &Lagrangian, traj: &Trajectory, n: usize) -> Result<Vec<(f64, f64)>> {
    let (t0, t1) = (traj.t[0], traj.final_t());
    let times: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
    let states = traj.interpolate_many(&times)?;
    let x: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let v: Vec<f64> = states.iter().map(|s| s[1]).collect();
    lagrangian_residual(l, &times, &x, &v)
}

/// Uniform samples `(t, x, ẋ)` of the classical solution with `c1 = c2 = 1/2`.
fn classical_samples(t1: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let case = CaseId::new(CaseKind::ClassicalBuchdahl, false, false)?;
    let k = IntegrationConstants { c1: 0.5, c2: 0.5, t0: 1.0 };
    let t: Vec<f64> = (0..n).map(|i| 1.0 + (t1 - 1.0) * i as f64 / (n - 1) as f64).collect();
    let states = t
        .iter()
        .map(|&s| exact_case(&case, &CaseParams::default(), &k, s))
        .collect::<Result<Vec<_>>>()?;
    Ok((t, states.iter().map(|s| s.x).collect(), states.iter().map(|s| s.y).collect()))
}

/// `x'' = −(3ẋ²/x + ẋ/t)` from the classical solution's state at `t = 1`.
fn flipped_trajectory(t1: f64) -> Result<Trajectory> {
    let (_, x, v) = classical_samples(2.0, 2)?;
    integrate(
        |t, s: &[f64]| Ok(vec![s[1], -(3.0 * s[1] * s[1] / s[0] + s[1] / t)]),
        &[x[0], v[0]],
        1.0,
        t1,
        &IntegratorConfig::with_tolerances(1e-13, 1e-15).dense(),
    )
}

fn max_abs(r: &[(f64, f64)]) -> f64 {
    r.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
}

const SAMPLES: usize = 201;

/// EL residuals of `L0`, `L1(k)` along Buchdahl solutions and of `L2(k)` along
/// the sign-flipped equation, plus a lower bound showing `L2` does not
/// generate the Buchdahl equation.
pub fn check_lagrangians(k: f64, tol: f64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let along = |name: &str, relation: &str, l: Lagrangian, flipped: bool| {
        let mut r = CheckReport::new(name, relation, tol);
        let res = if flipped {
            flipped_trajectory(1.5).and_then(|tr| lagrangian_residual_along(&l, &tr, SAMPLES))
        } else {
            classical_samples(3.0, SAMPLES).and_then(|(t, x, v)| lagrangian_residual(&l, &t, &x, &v))
        };
        match res {
            Ok(res) => {
                for (t, v) in res {
                    r.record_scalar(&[t], v, 0.0);
                }
            }
            Err(e) => r.record_error(&[], &e),
        }
        r
    };
    out.push(along(
        "lagrangian/L0",
        "EL(t^3 x^6 / x'^2) = 0 along Buchdahl solutions",
        Lagrangian::L0,
        false,
    ));
    out.push(along(
        &format!("lagrangian/L1(k={k})"),
        "EL(t^3 x^6 / (x'^2 + k t^2 x^6)) = 0 along Buchdahl solutions",
        Lagrangian::L1 { k },
        false,
    ));
    out.push(along(
        &format!("lagrangian/L2(k={k})"),
        "EL(1/(k x'^2 t^3 x^6 + t)) = 0 along x'' = -(3x'^2/x + x'/t)",
        Lagrangian::L2 { k },
        true,
    ));
    // L2 along genuine Buchdahl solutions: the residual must stay large
    let mut r = CheckReport::new(
        format!("lagrangian/L2(k={k})-not-buchdahl"),
        "max |EL(L2)| along Buchdahl solutions >= 1e3 tol (error is the shortfall)",
        0.0,
    );
    match classical_samples(3.0, SAMPLES).and_then(|(t, x, v)| lagrangian_residual(&Lagrangian::L2 { k }, &t, &x, &v)) {
        Ok(res) => {
            let m = max_abs(&res);
            let floor = 1e3 * tol;
            r.record_measure(&[], m.min(floor), floor);
            log::debug!("max |EL(L2)| along Buchdahl solutions: {m:e}");
        }
        Err(e) => r.record_error(&[], &e),
    }
    out.push(r);
    out
}
