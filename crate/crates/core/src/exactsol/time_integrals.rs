//! Time integrals entering the canonical solutions, all based at `t0`
//! (so `γ(t0) = 0`).

use crate::error::Result;
use crate::funcspace::{gamma_t, quad, CoefficientFunction, Family, DEFAULT_QUAD_TOL};
use crate::zfactor::exprel;

/// `∫_{t0}^{t} (τ/t0)^k dτ`.
fn power_integral(t0: f64, t: f64, k: f64) -> f64 {
    let l = (t / t0).ln();
    if k == -1.0 {
        t0 * l
    } else {
        t0 * l * exprel((k + 1.0) * l)
    }
}

/// `∫_{t0}^{t} e^{sign·γ(τ)} dτ` with `γ = ∫_{t0} b`, `sign = ±1`.
pub fn exp_gamma_integral(b: &CoefficientFunction, t0: f64, t: f64, sign: f64) -> Result<f64> {
    b.eval(t0)?;
    b.eval(t)?;
    match b.family {
        Family::Zero => Ok(t - t0),
        Family::Constant(c) => Ok((t - t0) * exprel(sign * c * (t - t0))),
        Family::Reciprocal(beta) => Ok(power_integral(t0, t, sign * beta)),
        Family::Monomial { alpha, r } if r == -1.0 => Ok(power_integral(t0, t, sign * alpha)),
        Family::Monomial { .. } => quad(
            |s| Ok((sign * gamma_t(b, s, t0)?).exp()),
            t0,
            t,
            DEFAULT_QUAD_TOL,
        ),
    }
}

/// `K(t) = c1 + ∫_{t0}^{t} e^{-γ(τ)} b2(τ) dτ`.
pub fn drift(
    b1: &CoefficientFunction,
    b2: Option<&CoefficientFunction>,
    c1: f64,
    t0: f64,
    t: f64,
) -> Result<f64> {
    let Some(b2) = b2 else { return Ok(c1) };
    if b2.is_zero() {
        return Ok(c1);
    }
    if let Family::Constant(beta) = b2.family {
        return Ok(c1 + beta * exp_gamma_integral(b1, t0, t, -1.0)?);
    }
    let integral = quad(
        |s| Ok((-gamma_t(b1, s, t0)?).exp() * b2.eval(s)?),
        t0,
        t,
        DEFAULT_QUAD_TOL,
    )?;
    Ok(c1 + integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_quadrature() {
        let fams = [
            CoefficientFunction::reciprocal(1.0),
            CoefficientFunction::reciprocal(-1.0),
            CoefficientFunction::reciprocal(2.5),
            CoefficientFunction::constant(0.7),
            CoefficientFunction::constant(-1.3),
            CoefficientFunction::zero(),
        ];
        for b in fams {
            for sign in [1.0, -1.0] {
                for &(t0, t) in &[(1.0, 3.0), (2.0, 0.5), (1.5, 1.5)] {
                    let closed = exp_gamma_integral(&b, t0, t, sign).unwrap();
                    let numeric = quad(
                        |s| Ok((sign * gamma_t(&b, s, t0)?).exp()),
                        t0,
                        t,
                        1e-13,
                    )
                    .unwrap();
                    assert!((closed - numeric).abs() < 1e-11 * (1.0 + numeric.abs()), "{b} {sign} {t0} {t}");
                }
            }
        }
    }

    #[test]
    fn drift_cases() {
        let b1 = CoefficientFunction::reciprocal(1.0);
        assert_eq!(drift(&b1, None, 0.7, 1.0, 3.0).unwrap(), 0.7);
        assert_eq!(drift(&b1, Some(&CoefficientFunction::zero()), 0.7, 1.0, 3.0).unwrap(), 0.7);
        // b2 = 0.2: K = c1 + 0.2 ln t
        let k = drift(&b1, Some(&CoefficientFunction::constant(0.2)), 0.7, 1.0, 3.0).unwrap();
        assert!((k - (0.7 + 0.2 * 3f64.ln())).abs() < 1e-15);
        // b2 = 1/t: K = c1 + ∫ τ^{-2} = c1 + 1 - 1/t
        let k = drift(&b1, Some(&CoefficientFunction::reciprocal(1.0)), 0.7, 1.0, 2.0).unwrap();
        assert!((k - 1.2).abs() < 1e-12);
    }
}
