//! Residuals of scalar second-order equations `x'' = F(t, x, x')` along
//! sampled solutions, with derivatives from 4th-order central differences.

use crate::error::{Error, Result};
use crate::funcspace::CoefficientFunction;

#[derive(Debug, Clone, PartialEq)]
pub enum SecondOrderEq {
    /// `x'' = 3x'²/x + x'/t`
    Buchdahl,
    /// `x'' = 3x'²/x + x'/t + z x'/(4t²x²)`
    DeformedClassical { z: f64 },
    /// `x'' = x'²/x + x'/t − z ln x · x'/(2t²)`
    DeformedLog { z: f64 },
    /// `x'' = αx'²/x + x'/t + z x^{1−α} x'/(2(α−1)t²)`
    DeformedPower { alpha: f64, z: f64 },
    /// `x'' = a(x) x'² + b(t) x'`
    General {
        a: CoefficientFunction,
        b: CoefficientFunction,
    },
}

impl SecondOrderEq {
    pub fn acceleration(&self, t: f64, x: f64, dx: f64) -> Result<f64> {
        let v = match self {
            SecondOrderEq::Buchdahl => 3.0 * dx * dx / x + dx / t,
            SecondOrderEq::DeformedClassical { z } => {
                3.0 * dx * dx / x + dx / t + z * dx / (4.0 * t * t * x * x)
            }
            SecondOrderEq::DeformedLog { z } => {
                if x <= 0.0 {
                    return Err(Error::domain("ln x needs x > 0", x));
                }
                dx * dx / x + dx / t - z * x.ln() * dx / (2.0 * t * t)
            }
            SecondOrderEq::DeformedPower { alpha, z } => {
                if *alpha == 1.0 {
                    return Err(Error::domain("power form needs alpha != 1", *alpha));
                }
                alpha * dx * dx / x
                    + dx / t
                    + z * x.powf(1.0 - alpha) * dx / (2.0 * (alpha - 1.0) * t * t)
            }
            SecondOrderEq::General { a, b } => a.eval(x)? * dx * dx + b.eval(t)? * dx,
        };
        if !v.is_finite() {
            return Err(Error::domain("non-finite acceleration", t));
        }
        Ok(v)
    }
}

/// `(t, x'' − F(t, x, x'))` at every interior sample with a full 5-point stencil.
pub fn second_order_residual(eq: &SecondOrderEq, t: &[f64], x: &[f64]) -> Result<Vec<(f64, f64)>> {
    if t.len() != x.len() {
        return Err(Error::InvalidSpec(format!(
            "{} times but {} samples",
            t.len(),
            x.len()
        )));
    }
    if t.len() < 5 {
        return Err(Error::InsufficientSamples { got: t.len(), need: 5 });
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if h == 0.0 || !h.is_finite() {
        return Err(Error::domain("sample spacing must be nonzero", h));
    }
    for (i, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-8 * h.abs() {
            return Err(Error::domain("samples must be uniformly spaced", t[i + 1]));
        }
    }
    (2..t.len() - 2)
        .map(|i| {
            let (m2, m1, c, p1, p2) = (x[i - 2], x[i - 1], x[i], x[i + 1], x[i + 2]);
            let dx = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
            let ddx = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
            Ok((t[i], ddx - eq.acceleration(t[i], c, dx)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactsol::{exact_case, perturbative_solution, CaseId, CaseKind, CaseParams, IntegrationConstants};

    fn grid(t0: f64, h: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t0 + h * i as f64).collect()
    }

    fn max_abs(r: &[(f64, f64)]) -> f64 {
        r.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn closed_form_solves_buchdahl() {
        let t = grid(0.5, 1e-3, 2001);
        let x: Vec<f64> = t.iter().map(|s| 1.0 / (1.0 + s * s).sqrt()).collect();
        let r = second_order_residual(&SecondOrderEq::Buchdahl, &t, &x).unwrap();
        assert_eq!(r.len(), 1997);
        assert!(max_abs(&r) <= 1e-8, "{}", max_abs(&r));
    }

    #[test]
    fn constant_has_zero_residual() {
        let t = grid(1.0, 0.1, 7);
        let r = second_order_residual(&SecondOrderEq::Buchdahl, &t, &[2.0; 7]).unwrap();
        assert!(r.iter().all(|p| p.1 == 0.0));
    }

    #[test]
    fn general_form_reduces_to_buchdahl() {
        let eq = SecondOrderEq::General {
            a: CoefficientFunction::reciprocal(3.0),
            b: CoefficientFunction::reciprocal(1.0),
        };
        for &(t, x, v) in &[(1.0, 2.0, 0.3), (2.5, 0.7, -1.1)] {
            let a = eq.acceleration(t, x, v).unwrap();
            let b = SecondOrderEq::Buchdahl.acceleration(t, x, v).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn power_form_at_three_is_the_classical_form() {
        let a = SecondOrderEq::DeformedPower { alpha: 3.0, z: 0.2 };
        let b = SecondOrderEq::DeformedClassical { z: 0.2 };
        let (va, vb) = (a.acceleration(1.3, 0.8, -0.4).unwrap(), b.acceleration(1.3, 0.8, -0.4).unwrap());
        assert!((va - vb).abs() < 1e-14);
    }

    #[test]
    fn too_few_or_uneven_samples() {
        let r = second_order_residual(&SecondOrderEq::Buchdahl, &[1.0, 2.0, 3.0, 4.0], &[1.0; 4]);
        assert_eq!(r, Err(Error::InsufficientSamples { got: 4, need: 5 }));
        let r = second_order_residual(&SecondOrderEq::Buchdahl, &[1.0, 2.0, 3.5, 4.0, 5.0], &[1.0; 5]);
        assert!(matches!(r, Err(Error::DomainViolation { .. })));
    }

    fn first_order_residual(kind: CaseKind, eq: impl Fn(f64) -> SecondOrderEq, z: f64) -> f64 {
        let case = CaseId::new(kind, true, false).unwrap();
        let k = IntegrationConstants { c1: 0.5, c2: 0.5, t0: 1.0 };
        let t = grid(0.8, 1e-3, 1001);
        let x: Vec<f64> = t
            .iter()
            .map(|&s| perturbative_solution(&case, z, &k, s, 1.0).unwrap().x)
            .collect();
        max_abs(&second_order_residual(&eq(z), &t, &x).unwrap())
    }

    #[test]
    fn first_order_solutions_have_second_order_residuals() {
        let forms: [(CaseKind, Box<dyn Fn(f64) -> SecondOrderEq>); 3] = [
            (CaseKind::ClassicalBuchdahl, Box::new(|z| SecondOrderEq::DeformedClassical { z })),
            (CaseKind::LogCase, Box::new(|z| SecondOrderEq::DeformedLog { z })),
            (CaseKind::PowerCase(2.0), Box::new(|z| SecondOrderEq::DeformedPower { alpha: 2.0, z })),
        ];
        for (kind, eq) in forms {
            let r1 = first_order_residual(kind, &eq, 1e-2);
            let r2 = first_order_residual(kind, &eq, 1e-3);
            let slope = (r1 / r2).log10();
            assert!((slope - 2.0).abs() < 0.2, "{kind:?} {r1:e} {r2:e}");
        }
    }

    #[test]
    fn exact_deformed_solution_has_second_order_residual() {
        let case = CaseId::new(CaseKind::ClassicalBuchdahl, true, false).unwrap();
        let k = IntegrationConstants { c1: 0.5, c2: 0.5, t0: 1.0 };
        let t = grid(0.8, 1e-3, 1001);
        let res = |z: f64| {
            let p = CaseParams { z, ..CaseParams::default() };
            let x: Vec<f64> = t.iter().map(|&s| exact_case(&case, &p, &k, s).unwrap().x).collect();
            max_abs(&second_order_residual(&SecondOrderEq::DeformedClassical { z }, &t, &x).unwrap())
        };
        let slope = (res(1e-2) / res(1e-3)).log10();
        assert!((slope - 2.0).abs() < 0.2, "{slope}");
    }
}
