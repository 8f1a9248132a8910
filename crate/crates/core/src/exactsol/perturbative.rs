//! First-order-in-`z` solutions of the deformed book-algebra cases with
//! `b = 1/t`, in the library constants.

use super::cases::{exact_case, CaseId, CaseKind, CaseParams};
use super::IntegrationConstants;
use crate::error::{Error, Result};
use crate::lhsystems::PhaseState;

pub fn perturbative_solution(
    case: &CaseId,
    z: f64,
    k: &IntegrationConstants,
    t: f64,
    branch: f64,
) -> Result<PhaseState> {
    if case.extended {
        return Err(Error::NoClosedForm(
            "first-order solutions are only given for the book-algebra cases".into(),
        ));
    }
    let undeformed = CaseId {
        deformed: false,
        ..*case
    };
    let params = CaseParams {
        branch,
        ..CaseParams::default()
    };
    let base = exact_case(&undeformed, &params, k, t)?;
    let (c1, c2) = (k.c1, k.c2);
    Ok(match case.kind {
        CaseKind::ClassicalBuchdahl => {
            let d = 2.0 * c2 + t * t;
            PhaseState {
                x: base.x * (1.0 + z * c1 * t * (6.0 * c2 - t * t) / (12.0 * d)),
                y: base.y * (1.0 + z * c1 * t * (10.0 * c2 + t * t) / (4.0 * d)),
            }
        }
        CaseKind::LogCase => PhaseState {
            x: base.x * (1.0 + z * 0.5 * c1 * c1 * t * (c2 - t * t / 6.0)),
            y: base.y * (1.0 + z * 0.5 * c1 * t * (1.0 + c1 * c2 - c1 * t * t / 6.0)),
        },
        CaseKind::PowerCase(alpha) => {
            let b = (alpha - 1.0) * c1 * (c2 + 0.5 * t * t);
            let e = 1.0 - alpha;
            if b <= 0.0 {
                return Err(Error::domain("power-case base must be positive", b));
            }
            PhaseState {
                x: base.x + z / 12.0 * c1 * c1 * t * (6.0 * c2 - t * t) * b.powf(alpha / e),
                y: base.y
                    - z / 12.0
                        * c1.powi(3)
                        * t
                        * t
                        * (6.0 * c2 * (2.0 * alpha - 1.0) + t * t * (2.0 * alpha - 3.0))
                        * b.powf((2.0 * alpha - 1.0) / e),
            }
        }
        CaseKind::GammaCase { .. } => {
            return Err(Error::NoClosedForm("no first-order solution for a = α x^r".into()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(c1: f64, c2: f64) -> IntegrationConstants {
        IntegrationConstants { c1, c2, t0: 1.0 }
    }

    #[test]
    fn reference_value() {
        let case = CaseId::new(CaseKind::ClassicalBuchdahl, true, false).unwrap();
        let s = perturbative_solution(&case, 0.1, &k(0.5, 0.5), 1.0, 1.0).unwrap();
        assert!((s.x - 1.0041667).abs() < 1e-7);
        let s0 = perturbative_solution(&case, 0.0, &k(0.5, 0.5), 1.0, 1.0).unwrap();
        let undeformed = CaseId::new(CaseKind::ClassicalBuchdahl, false, false).unwrap();
        assert_eq!(s0, exact_case(&undeformed, &CaseParams::default(), &k(0.5, 0.5), 1.0).unwrap());
    }

    #[test]
    fn power_case_at_three_is_the_classical_expansion() {
        let classical = CaseId::new(CaseKind::ClassicalBuchdahl, true, false).unwrap();
        let power = CaseId::new(CaseKind::PowerCase(3.0), true, false).unwrap();
        for &t in &[0.5, 1.3, 2.4] {
            let a = perturbative_solution(&classical, 0.07, &k(0.5, 0.5), t, 1.0).unwrap();
            let b = perturbative_solution(&power, 0.07, &k(0.5, 0.5), t, 1.0).unwrap();
            assert!((a.x - b.x).abs() < 1e-14 && (a.y - b.y).abs() < 1e-14);
        }
    }

    #[test]
    fn error_against_exact_is_second_order() {
        let kinds = [CaseKind::ClassicalBuchdahl, CaseKind::LogCase, CaseKind::PowerCase(2.0)];
        for kind in kinds {
            let case = CaseId::new(kind, true, false).unwrap();
            let err = |z: f64| {
                let p = perturbative_solution(&case, z, &k(0.5, 0.5), 1.5, 1.0).unwrap();
                let params = CaseParams { z, ..CaseParams::default() };
                let e = exact_case(&case, &params, &k(0.5, 0.5), 1.5).unwrap();
                (p.x - e.x).abs().max((p.y - e.y).abs())
            };
            let slope = (err(1e-2) / err(1e-3)).log10();
            assert!((slope - 2.0).abs() < 0.2, "{kind:?} slope {slope}");
        }
    }
}
