//! The change of variables `q = -y Ξ(x)`, `p = Φ(x) / (y Ξ(x))` and its
//! inverse.

use super::spec::{CanonState, PhaseState};
use crate::error::{Error, Result};
use crate::funcspace::{self, CoefficientFunction};

pub fn to_canonical(a: &CoefficientFunction, s: PhaseState) -> Result<CanonState> {
    if s.y == 0.0 {
        return Err(Error::singular("y = 0 has no canonical image"));
    }
    let xi = funcspace::xi(a, s.x)?;
    let phi = funcspace::phi(a, s.x)?;
    let u = s.y * xi;
    Ok(CanonState { q: -u, p: phi / u })
}

pub fn from_canonical(
    a: &CoefficientFunction,
    s: CanonState,
    bracket: (f64, f64),
) -> Result<PhaseState> {
    if s.q == 0.0 {
        return Err(Error::singular("q = 0 has no Buchdahl-chart preimage"));
    }
    let x = funcspace::invert_phi(a, -s.q * s.p, bracket)?;
    let xi = funcspace::xi(a, x)?;
    Ok(PhaseState { x, y: -s.q / xi })
}

/// Like [`from_canonical`], searching for a bracket outward from `hint`.
pub fn from_canonical_near(a: &CoefficientFunction, s: CanonState, hint: f64) -> Result<PhaseState> {
    if s.q == 0.0 {
        return Err(Error::singular("q = 0 has no Buchdahl-chart preimage"));
    }
    let target = -s.q * s.p;
    let bracket = funcspace::auto_bracket(a, target, hint)?;
    if bracket.0 == bracket.1 {
        let xi = funcspace::xi(a, hint)?;
        return Ok(PhaseState { x: hint, y: -s.q / xi });
    }
    from_canonical(a, s, bracket)
}

/// `∂(q, p)/∂(x, y)` as rows `[[q_x, q_y], [p_x, p_y]]`.
pub fn jacobian(a: &CoefficientFunction, s: PhaseState) -> Result<[[f64; 2]; 2]> {
    if s.y == 0.0 {
        return Err(Error::singular("y = 0"));
    }
    let xi = funcspace::xi(a, s.x)?;
    let phi = funcspace::phi(a, s.x)?;
    let ax = a.eval(s.x)?;
    let y = s.y;
    // Ξ' = -a Ξ
    let q_x = y * ax * xi;
    let q_y = -xi;
    let p_x = (1.0 + ax * phi / xi) / y;
    let p_y = -phi / (y * y * xi);
    Ok([[q_x, q_y], [p_x, p_y]])
}

/// Symplectic density `μ = Ξ(x)/y` of the Buchdahl-chart form
/// `μ dx ∧ dy`; it is the Jacobian determinant of the map to `(q, p)`.
pub fn symplectic_factor(a: &CoefficientFunction, s: PhaseState) -> Result<f64> {
    if s.y == 0.0 {
        return Err(Error::singular("y = 0"));
    }
    Ok(funcspace::xi(a, s.x)? / s.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn recip3() -> CoefficientFunction {
        CoefficientFunction::reciprocal(3.0)
    }

    #[test]
    fn example_values() {
        let c = to_canonical(&recip3(), PhaseState { x: 1.0, y: -1.0 }).unwrap();
        assert_eq!(c, CanonState { q: 1.0, p: 0.5 });
        let back = from_canonical(&recip3(), c, (0.1, 10.0)).unwrap();
        assert!((back.x - 1.0).abs() < 1e-14 && (back.y + 1.0).abs() < 1e-14);
        assert!(matches!(
            from_canonical(&recip3(), CanonState { q: 0.0, p: 1.0 }, (0.1, 10.0)),
            Err(Error::SingularState(_))
        ));
        assert!(matches!(
            to_canonical(&recip3(), PhaseState { x: 1.0, y: 0.0 }),
            Err(Error::SingularState(_))
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let a = CoefficientFunction::monomial(0.7, 1.5);
        let s = PhaseState { x: 1.3, y: -0.8 };
        let j = jacobian(&a, s).unwrap();
        let h = 1e-6;
        let f = |x: f64, y: f64| to_canonical(&a, PhaseState { x, y }).unwrap();
        let (xp, xm) = (f(s.x + h, s.y), f(s.x - h, s.y));
        let (yp, ym) = (f(s.x, s.y + h), f(s.x, s.y - h));
        let fd = [
            [(xp.q - xm.q) / (2.0 * h), (yp.q - ym.q) / (2.0 * h)],
            [(xp.p - xm.p) / (2.0 * h), (yp.p - ym.p) / (2.0 * h)],
        ];
        for i in 0..2 {
            for k in 0..2 {
                assert!((j[i][k] - fd[i][k]).abs() < 1e-7, "{i}{k}");
            }
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        assert!((det - symplectic_factor(&a, s).unwrap()).abs() < 1e-13);
    }

    fn coefficient() -> impl Strategy<Value = CoefficientFunction> {
        prop_oneof![
            (0.5..4.0f64).prop_map(CoefficientFunction::reciprocal),
            (-1.0..1.0f64).prop_map(CoefficientFunction::constant),
            (0.2..1.0f64, 0.0..2.0f64).prop_map(|(a, r)| CoefficientFunction::monomial(a, r)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn qp_is_minus_phi(a in coefficient(), x in 0.3..3.0f64, y in prop_oneof![-2.0..-0.1f64, 0.1..2.0f64]) {
            let c = to_canonical(&a, PhaseState { x, y }).unwrap();
            let phi = funcspace::phi(&a, x).unwrap();
            prop_assert!((c.q * c.p + phi).abs() <= 1e-12 * (1.0 + phi.abs()));
        }

        #[test]
        fn round_trip(a in coefficient(), x in 0.3..3.0f64, y in prop_oneof![-2.0..-0.1f64, 0.1..2.0f64]) {
            let c = to_canonical(&a, PhaseState { x, y }).unwrap();
            let back = from_canonical(&a, c, (0.2, 4.0)).unwrap();
            prop_assert!((back.x - x).abs() <= 1e-9 * x);
            prop_assert!((back.y - y).abs() <= 1e-9 * y.abs());
            let again = to_canonical(&a, back).unwrap();
            prop_assert!((again.q - c.q).abs() <= 1e-9 * c.q.abs());
            prop_assert!((again.p - c.p).abs() <= 1e-9 * (1.0 + c.p.abs()));
        }
    }
}
