//! Closed-form solutions of the canonical systems and, through the change
//! of variables, of the Buchdahl-chart systems; the special-case
//! library; first-order perturbative solutions.
//!
//! Conventions: `γ(t) = ∫_{t0}^{t} b1`, `K(t) = c1 + ∫_{t0}^{t} e^{-γ} b2`,
//! and with `E = e^{γ}`
//!
//! ```text
//! q(t) = -ln(1 - z K E) / z
//! p(t) = (1/E - z K) (c2 + ∫_{t0}^{t} dτ / (e^{-γ} - z K))
//! ```
//!
//! so that `c1` and `c2` are fixed by the canonical state at `t0`.

mod cases;
mod perturbative;
pub mod time_integrals;

pub use cases::{constants_from_library, exact_case, CaseId, CaseKind, CaseParams};
pub use perturbative::perturbative_solution;

use crate::error::{Error, Result};
use crate::funcspace::{gamma_t, quad, Family, DEFAULT_QUAD_TOL};
use crate::lhsystems::{self, CanonState, Chart, PhaseState, SystemSpec};
use crate::zfactor::logrel;
use time_integrals::{drift, exp_gamma_integral};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConstants {
    pub c1: f64,
    pub c2: f64,
    /// Base point of every time integral.
    pub t0: f64,
}

/// `1 - z K(t) e^{γ(t)}`; the deformed solution exists while it is positive.
pub fn validity_margin(spec: &SystemSpec, k: &IntegrationConstants, t: f64) -> Result<f64> {
    let e = gamma_t(spec.b1(), t, k.t0)?.exp();
    let kk = drift(spec.b1(), spec.b2(), k.c1, k.t0, t)?;
    Ok(1.0 - spec.z() * kk * e)
}

fn analytic_critical_time(spec: &SystemSpec, k: &IntegrationConstants) -> Option<Option<f64>> {
    if spec.b2().map(|b| !b.is_zero()).unwrap_or(false) {
        return None;
    }
    let w = spec.z() * k.c1;
    if w <= 0.0 {
        return Some(None);
    }
    // e^{γ(t*)} = 1/w
    let target = -w.ln();
    match spec.b1().family {
        Family::Reciprocal(beta) if beta != 0.0 => Some(Some(k.t0 * (target / beta).exp())),
        Family::Constant(c) if c != 0.0 => Some(Some(k.t0 + target / c)),
        Family::Zero => Some(None),
        Family::Constant(_) | Family::Reciprocal(_) => Some(None),
        _ => None,
    }
}

/// First time between `t0` and `t_end` at which the deformed solution
/// ceases to exist, if any.
pub fn critical_time(spec: &SystemSpec, k: &IntegrationConstants, t_end: f64) -> Result<Option<f64>> {
    if spec.z() == 0.0 || t_end == k.t0 {
        return Ok(None);
    }
    let between = |s: f64| (s - k.t0) * (t_end - s) >= 0.0 && s != k.t0;
    if let Some(found) = analytic_critical_time(spec, k) {
        return Ok(found.filter(|&s| between(s) && spec.b1().window.contains(s)));
    }
    const SAMPLES: usize = 64;
    let mut prev = k.t0;
    for i in 1..=SAMPLES {
        let s = k.t0 + (t_end - k.t0) * i as f64 / SAMPLES as f64;
        if validity_margin(spec, k, s)? <= 0.0 {
            let (mut good, mut bad) = (prev, s);
            for _ in 0..200 {
                let mid = 0.5 * (good + bad);
                if mid == good || mid == bad {
                    break;
                }
                if validity_margin(spec, k, mid)? > 0.0 {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            return Ok(Some(bad));
        }
        prev = s;
    }
    Ok(None)
}

/// Canonical-chart solution at time `t`.
pub fn exact_canonical(spec: &SystemSpec, k: &IntegrationConstants, t: f64) -> Result<CanonState> {
    let z = spec.z();
    let b1 = spec.b1();
    let b2 = spec.b2();
    if let Some(t_critical) = critical_time(spec, k, t)? {
        return Err(Error::DeformationBlowup { t_critical });
    }
    let e = gamma_t(b1, t, k.t0)?.exp();
    let kk = drift(b1, b2, k.c1, k.t0, t)?;
    let zke = z * kk * e;
    if zke >= 1.0 {
        return Err(Error::DeformationBlowup { t_critical: t });
    }
    let q = kk * e * logrel(zke);
    let j = if z == 0.0 {
        exp_gamma_integral(b1, k.t0, t, 1.0)?
    } else {
        quad(
            |s| {
                let inv_e = (-gamma_t(b1, s, k.t0)?).exp();
                Ok(1.0 / (inv_e - z * drift(b1, b2, k.c1, k.t0, s)?))
            },
            k.t0,
            t,
            DEFAULT_QUAD_TOL,
        )?
    };
    let p = (1.0 / e - z * kk) * (k.c2 + j);
    Ok(CanonState { q, p })
}

/// Buchdahl-chart solution: the canonical solution mapped back by inverting
/// `Φ(x) = -q p` inside `bracket`.
pub fn exact_buchdahl(
    spec: &SystemSpec,
    k: &IntegrationConstants,
    t: f64,
    bracket: (f64, f64),
) -> Result<PhaseState> {
    let a = spec
        .a()
        .ok_or_else(|| Error::InvalidSpec("the Buchdahl chart needs a(x)".into()))?;
    let c = exact_canonical(spec, k, t)?;
    lhsystems::from_canonical(a, c, bracket)
}

/// As [`exact_buchdahl`], searching for the bracket outward from `hint`.
pub fn exact_buchdahl_near(
    spec: &SystemSpec,
    k: &IntegrationConstants,
    t: f64,
    hint: f64,
) -> Result<PhaseState> {
    let a = spec
        .a()
        .ok_or_else(|| Error::InvalidSpec("the Buchdahl chart needs a(x)".into()))?;
    let c = exact_canonical(spec, k, t)?;
    lhsystems::from_canonical_near(a, c, hint)
}

/// Constants reproducing `state0` at `t0`; Buchdahl-chart states are first
/// mapped to canonical coordinates.
pub fn fit_constants(spec: &SystemSpec, state0: [f64; 2], t0: f64) -> Result<IntegrationConstants> {
    let c = match spec.chart() {
        Chart::Canonical => CanonState::from(state0),
        Chart::Buchdahl => lhsystems::to_canonical(
            spec.a().ok_or_else(|| Error::InvalidSpec("the Buchdahl chart needs a(x)".into()))?,
            PhaseState::from(state0),
        )?,
    };
    if !(c.q.is_finite() && c.p.is_finite()) {
        return Err(Error::domain("non-finite initial state", c.q));
    }
    let z = spec.z();
    // (1 - e^{-z q0}) / z
    let c1 = c.q * crate::zfactor::exprel(-z * c.q);
    let margin = 1.0 - z * c1;
    if margin <= 0.0 {
        return Err(Error::domain("initial state outside the deformed solution family", c.q));
    }
    Ok(IntegrationConstants {
        c1,
        c2: c.p / margin,
        t0,
    })
}
