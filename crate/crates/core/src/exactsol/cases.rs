//! The special-case library: `a = α/x`, `b1 = 1/t`, optionally a constant
//! `b2`, deformed or not, evaluated from the closed forms directly (no
//! inversion). These use the library integration constants: `γ = ln t`,
//! `K = c1 + β2 ln t` and the `t`-integral of `e^{γ}` based at zero, so
//! `S = c2 + t²/2` in the undeformed case.

use super::{fit_constants, IntegrationConstants};
use crate::error::{Error, Result};
use crate::funcspace::{pow_literal, quad, CoefficientFunction, DEFAULT_QUAD_TOL};
use crate::lhsystems::{Chart, PhaseState, SystemSpec};
use crate::zfactor::{logrel, logrel2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseKind {
    /// `a = 3/x`.
    ClassicalBuchdahl,
    /// `a = 1/x`.
    LogCase,
    /// `a = α/x`, `α ≠ 1`.
    PowerCase(f64),
    /// `a = α x^r`; no closed form.
    GammaCase { alpha: f64, r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseId {
    pub kind: CaseKind,
    pub deformed: bool,
    /// Oscillator-algebra extension with a constant `b2`.
    pub extended: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    /// Ignored unless the case is deformed.
    pub z: f64,
    /// Constant `b2`; ignored unless the case is extended.
    pub b2: f64,
    /// `+1` or `-1`: branch of `x` where an even root is taken.
    pub branch: f64,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams {
            z: 0.0,
            b2: 0.0,
            branch: 1.0,
        }
    }
}

impl CaseId {
    pub fn new(kind: CaseKind, deformed: bool, extended: bool) -> Result<Self> {
        if let CaseKind::PowerCase(alpha) = kind {
            if alpha == 1.0 || !alpha.is_finite() {
                return Err(Error::InvalidSpec(format!("power case needs α ≠ 1, got {alpha}")));
            }
        }
        Ok(CaseId {
            kind,
            deformed,
            extended,
        })
    }

    pub fn alpha(&self) -> f64 {
        match self.kind {
            CaseKind::ClassicalBuchdahl => 3.0,
            CaseKind::LogCase => 1.0,
            CaseKind::PowerCase(alpha) => alpha,
            CaseKind::GammaCase { alpha, .. } => alpha,
        }
    }

    pub fn a(&self) -> CoefficientFunction {
        match self.kind {
            CaseKind::GammaCase { alpha, r } => CoefficientFunction::monomial(alpha, r),
            _ => CoefficientFunction::reciprocal(self.alpha()),
        }
    }

    /// The system the case solves, in the Buchdahl chart.
    pub fn spec(&self, params: &CaseParams) -> SystemSpec {
        let z = if self.deformed { params.z } else { 0.0 };
        let b1 = CoefficientFunction::reciprocal(1.0);
        if self.extended {
            SystemSpec::h4_buchdahl(z, self.a(), b1, CoefficientFunction::constant(params.b2))
        } else {
            SystemSpec::b2_buchdahl(z, self.a(), b1)
        }
    }
}

// x from Φ(x) = phi for Φ = x^{1-α}/(1-α), choosing `branch` for even roots.
fn power_root(alpha: f64, phi: f64, branch: f64) -> Result<f64> {
    let base = (1.0 - alpha) * phi;
    let e = 1.0 - alpha;
    let exponent = 1.0 / e;
    let even = e.fract() == 0.0 && (e as i64) % 2 == 0;
    let odd = e.fract() == 0.0 && !even;
    if base > 0.0 {
        let root = base.powf(exponent);
        Ok(if even { branch.signum() * root } else { root })
    } else if odd && base < 0.0 {
        Ok(-(-base).powf(exponent))
    } else {
        Err(Error::domain("no real x for this case at t", base))
    }
}

/// Closed-form solution of a special case at time `t`, with the
/// library constants `k.c1`, `k.c2` (`k.t0` is not used).
pub fn exact_case(
    case: &CaseId,
    params: &CaseParams,
    k: &IntegrationConstants,
    t: f64,
) -> Result<PhaseState> {
    if let CaseKind::GammaCase { .. } = case.kind {
        return Err(Error::NoClosedForm(
            "a = α x^r only admits the implicit solution; use exact_buchdahl".into(),
        ));
    }
    let z = if case.deformed { params.z } else { 0.0 };
    let beta2 = if case.extended { params.b2 } else { 0.0 };
    if t < 0.0 || (t == 0.0 && beta2 != 0.0) {
        return Err(Error::domain("case outside its time window", t));
    }
    let drift = |s: f64| if beta2 == 0.0 { k.c1 } else { k.c1 + beta2 * s.ln() };
    let kk = drift(t);
    let w = z * t * kk;
    if w >= 1.0 {
        return Err(Error::DeformationBlowup { t_critical: t });
    }
    // ln(1 - z t K)/z, finite at z = 0
    let log_over_z = -t * kk * logrel(w);
    // c2 + ∫_0^t τ / (1 - z τ K(τ)) dτ
    let s = if z == 0.0 {
        k.c2 + 0.5 * t * t
    } else if beta2 == 0.0 {
        k.c2 + t * t * logrel2(z * k.c1 * t)
    } else {
        k.c2 + quad(|u| Ok(u / (1.0 - z * u * drift(u))), 0.0, t, DEFAULT_QUAD_TOL)?
    };
    // Φ(x) = (1/t - z K) (ln(1 - z t K)/z) S, with the 1/t cancelled
    let phi = -(1.0 - w) * kk * logrel(w) * s;
    let alpha = case.alpha();
    let x = match case.kind {
        CaseKind::ClassicalBuchdahl => {
            // Φ = -1/(2x²)
            let inv_sq = -2.0 * phi;
            if inv_sq <= 0.0 {
                return Err(Error::domain("1/x² must be positive", inv_sq));
            }
            params.branch.signum() / inv_sq.sqrt()
        }
        CaseKind::LogCase => phi.exp(),
        CaseKind::PowerCase(_) => power_root(alpha, phi, params.branch)?,
        CaseKind::GammaCase { .. } => unreachable!(),
    };
    let y = pow_literal(x, alpha) * log_over_z;
    Ok(PhaseState { x, y })
}

/// Base-point constants `(c1, c2, t0)` describing the same curve as the
/// library constants `(c1, c2)`, by fitting the library state at `t0`.
pub fn constants_from_library(
    case: &CaseId,
    params: &CaseParams,
    library: (f64, f64),
    t0: f64,
) -> Result<IntegrationConstants> {
    let k = IntegrationConstants {
        c1: library.0,
        c2: library.1,
        t0,
    };
    let s = exact_case(case, params, &k, t0)?;
    let spec = case.spec(params);
    debug_assert_eq!(spec.chart(), Chart::Buchdahl);
    fit_constants(&spec, [s.x, s.y], t0)
}
