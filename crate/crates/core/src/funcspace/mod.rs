//! Coefficient families and the functions derived from them: the integrating
//! factor `Ξ(x) = exp(-∫a)`, its antiderivative `Φ`, and `γ(t) = ∫b`.

mod coefficient;
pub mod inversion;
pub mod quadrature;

pub use coefficient::{CoefficientFunction, DomainWindow, Family};
pub use quadrature::{quad, DEFAULT_QUAD_TOL};

pub(crate) use coefficient::pow_literal;

use crate::error::{Error, Result};

pub const DEFAULT_INVERT_TOL: f64 = 1e-12;

/// Evaluates the coefficient at `s`.
pub fn eval_coeff(f: &CoefficientFunction, s: f64) -> Result<f64> {
    f.eval(s)
}

pub(crate) fn xi_unchecked(a: &CoefficientFunction, x: f64) -> f64 {
    match a.family {
        Family::Reciprocal(alpha) => pow_literal(x, -alpha),
        Family::Monomial { alpha, r } if r == -1.0 => pow_literal(x, -alpha),
        Family::Zero => 1.0,
        _ => (-a.antiderivative_unchecked(x)).exp(),
    }
}

/// `Ξ(x) = exp(-A(x))` with the canonical antiderivative `A` of `a`.
pub fn xi(a: &CoefficientFunction, x: f64) -> Result<f64> {
    a.eval(x)?;
    Ok(xi_unchecked(a, x))
}

/// `∫_{t_ref}^{t} b(τ) dτ`.
pub fn gamma_t(b: &CoefficientFunction, t: f64, t_ref: f64) -> Result<f64> {
    b.integral(t_ref, t)
}

/// `true` when `Φ` has a closed form for this family.
pub fn phi_is_analytic(a: &CoefficientFunction) -> bool {
    match a.family {
        Family::Monomial { r, alpha } => r == -1.0 || r == 0.0 || alpha == 0.0,
        _ => true,
    }
}

/// Lower limit of the quadrature defining `Φ` for families without a closed
/// form.
pub fn phi_base_point(a: &CoefficientFunction) -> f64 {
    let w = a.window;
    let r_above = matches!(a.family, Family::Monomial { r, .. } if r > -1.0);
    if r_above && (w.contains(0.0) || w.lo == 0.0 || w.hi == 0.0) {
        return 0.0;
    }
    if w.contains(1.0) {
        1.0
    } else if w.contains(-1.0) {
        -1.0
    } else if w.lo.is_finite() && w.hi.is_finite() {
        0.5 * (w.lo + w.hi)
    } else if w.lo.is_finite() {
        w.lo + 1.0
    } else {
        w.hi - 1.0
    }
}

// Splits long ranges into geometrically growing pieces so that a
// concentrated integrand is never sampled only far from its mass.
fn quad_from_base(a: &CoefficientFunction, base: f64, x: f64) -> Result<f64> {
    let dir = (x - base).signum();
    let span = (x - base).abs();
    let mut total = 0.0;
    let mut from = 0.0;
    let mut width = 1.0;
    while from < span {
        let to = (from + width).min(span);
        total += quad(
            |s| Ok(xi_unchecked(a, s)),
            base + dir * from,
            base + dir * to,
            DEFAULT_QUAD_TOL,
        )?;
        from = to;
        width *= 2.0;
    }
    Ok(dir * total)
}

/// Canonical antiderivative of `Ξ`.
pub fn phi(a: &CoefficientFunction, x: f64) -> Result<f64> {
    a.eval(x)?;
    let reciprocal = |alpha: f64| {
        if alpha == 1.0 {
            x.abs().ln()
        } else {
            pow_literal(x, 1.0 - alpha) / (1.0 - alpha)
        }
    };
    match a.family {
        Family::Zero => Ok(x),
        Family::Constant(c) => Ok(x * crate::zfactor::exprel(-c * x)),
        Family::Reciprocal(alpha) => Ok(reciprocal(alpha)),
        Family::Monomial { alpha, r } if r == -1.0 => Ok(reciprocal(alpha)),
        Family::Monomial { alpha, r } if r == 0.0 || alpha == 0.0 => {
            Ok(x * crate::zfactor::exprel(-alpha * x))
        }
        Family::Monomial { .. } => quad_from_base(a, phi_base_point(a), x),
    }
}

/// Solves `Φ(x) = target` for `x` inside `bracket`.
pub fn invert_phi(a: &CoefficientFunction, target: f64, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !a.window.contains_segment(lo, hi) {
        return Err(Error::domain("bracket leaves the coefficient window", if a.window.contains(lo) { hi } else { lo }));
    }
    let x = inversion::brent(|x| Ok(phi(a, x)? - target), lo, hi)?;
    let residual = (phi(a, x)? - target).abs();
    let mut allowed = DEFAULT_INVERT_TOL * (1.0 + target.abs())
        + 8.0 * f64::EPSILON * (x * xi_unchecked(a, x)).abs();
    if !phi_is_analytic(a) {
        allowed += DEFAULT_QUAD_TOL;
    }
    if residual > allowed {
        return Err(Error::ConvergenceFailure { iterations: 0 });
    }
    Ok(x)
}

/// Finds a sign-changing bracket for `Φ(x) = target` inside the window of
/// `a`, starting from `hint`.
pub fn auto_bracket(a: &CoefficientFunction, target: f64, hint: f64) -> Result<(f64, f64)> {
    let w = a.window;
    if !w.contains(hint) {
        return Err(Error::domain("bracket hint outside window", hint));
    }
    let f = |x: f64| phi(a, x).map(|v| v - target);
    let f0 = f(hint)?;
    if f0 == 0.0 {
        return Ok((hint, hint));
    }
    let increasing = xi_unchecked(a, hint) > 0.0;
    let go_right = (f0 < 0.0) == increasing;
    let bound = if go_right { w.hi } else { w.lo };
    let mut x = hint;
    let mut step = 0.5 * hint.abs().max(1.0);
    for _ in 0..80 {
        let next = if bound.is_finite() {
            bound + 0.5 * (x - bound)
        } else if go_right {
            x + step
        } else {
            x - step
        };
        step *= 2.0;
        if next == x || !w.contains(next) {
            break;
        }
        let fx = match f(next) {
            Ok(v) if v.is_finite() => v,
            _ => break,
        };
        if fx == 0.0 || fx.signum() != f0.signum() {
            return Ok(if go_right { (x, next) } else { (next, x) });
        }
        x = next;
    }
    Err(Error::BracketFailure {
        lo: hint.min(x),
        hi: hint.max(x),
        f_lo: f0,
        f_hi: f0,
    })
}

/// Bundles `Ξ`, `Φ` and `γ` for a pair of coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFunctions {
    pub a: CoefficientFunction,
    pub b: CoefficientFunction,
    pub x_ref: f64,
    pub t_ref: f64,
}

impl DerivedFunctions {
    pub fn new(a: CoefficientFunction, b: CoefficientFunction, t_ref: f64) -> Self {
        DerivedFunctions {
            a,
            b,
            x_ref: phi_base_point(&a),
            t_ref,
        }
    }

    pub fn xi(&self, x: f64) -> Result<f64> {
        xi(&self.a, x)
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        phi(&self.a, x)
    }

    pub fn gamma(&self, t: f64) -> Result<f64> {
        gamma_t(&self.b, t, self.t_ref)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn recip(a: f64) -> CoefficientFunction {
        CoefficientFunction::reciprocal(a)
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(&recip(3.0), 2.0).unwrap(), 0.125);
        assert_eq!(xi(&CoefficientFunction::zero(), -5.0).unwrap(), 1.0);
        let m = CoefficientFunction::monomial(2.0, 1.0);
        assert_relative_eq!(xi(&m, 1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
        let c = CoefficientFunction::constant(2.0);
        assert_relative_eq!(xi(&c, 0.5).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn gamma_examples() {
        let e = std::f64::consts::E;
        assert_relative_eq!(gamma_t(&recip(1.0), e, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(gamma_t(&CoefficientFunction::constant(2.0), 3.0, 1.0).unwrap(), 4.0);
        assert_eq!(gamma_t(&CoefficientFunction::monomial(1.3, 0.7), 2.2, 2.2).unwrap(), 0.0);
        assert!(gamma_t(&recip(1.0), 1.0, -1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&recip(3.0), 2.0).unwrap(), -0.125);
        assert_eq!(phi(&recip(1.0), 1.0).unwrap(), 0.0);
        let m = CoefficientFunction::monomial(1.0, 1.0);
        // Simpson with 20000 panels on exp(-s^2/2)
        let n = 20000;
        let h = 1.0 / n as f64;
        let g = |s: f64| (-0.5 * s * s).exp();
        let mut simpson = g(0.0) + g(1.0);
        for k in 1..n {
            simpson += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * h);
        }
        simpson *= h / 3.0;
        assert!((phi(&m, 1.0).unwrap() - simpson).abs() < 1e-12);
        assert!((phi(&m, 1.0).unwrap() - 0.855624).abs() < 1e-6);
    }

    #[test]
    fn phi_far_from_base_keeps_its_mass() {
        let m = CoefficientFunction::monomial(1.0, 1.0);
        let half_gauss = (std::f64::consts::PI / 2.0).sqrt();
        assert!((phi(&m, 1e6).unwrap() - half_gauss).abs() < 1e-11);
    }

    #[test]
    fn invert_examples() {
        assert_relative_eq!(invert_phi(&recip(3.0), -0.125, (0.1, 10.0)).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(invert_phi(&recip(1.0), 0.0, (0.1, 10.0)).unwrap(), 1.0, max_relative = 1e-14);
        let m = CoefficientFunction::monomial(1.0, 1.0);
        let target = phi(&m, 1.0).unwrap();
        assert_relative_eq!(invert_phi(&m, target, (0.1, 5.0)).unwrap(), 1.0, max_relative = 1e-9);
        assert!(matches!(
            invert_phi(&recip(3.0), 1.0, (0.1, 10.0)),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn auto_bracket_expands_both_ways() {
        let a = recip(3.0);
        for &x in &[0.01, 0.3, 1.0, 40.0] {
            let target = phi(&a, x).unwrap();
            let (lo, hi) = auto_bracket(&a, target, 1.0).unwrap();
            assert!(lo <= x && x <= hi, "{lo} {x} {hi}");
        }
        // Φ = -1/(2x²) never reaches positive values
        assert!(auto_bracket(&a, 0.5, 1.0).is_err());
    }

    #[test]
    fn negative_window_is_evaluated_literally() {
        let a = recip(3.0).with_window(DomainWindow::NEGATIVE).unwrap();
        assert_eq!(xi(&a, -2.0).unwrap(), -0.125);
        assert_eq!(phi(&a, -2.0).unwrap(), -0.125);
    }

    fn family_strategy() -> impl Strategy<Value = CoefficientFunction> {
        prop_oneof![
            (-3.0..3.0f64).prop_map(CoefficientFunction::constant),
            (-3.0..4.0f64).prop_map(CoefficientFunction::reciprocal),
            (-1.5..1.5f64, -0.9..2.5f64).prop_map(|(a, r)| CoefficientFunction::monomial(a, r)),
            Just(CoefficientFunction::zero()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn xi_is_positive(a in family_strategy(), x in 0.05..4.0f64) {
            prop_assert!(xi(&a, x).unwrap() > 0.0);
        }

        #[test]
        fn phi_is_increasing(a in family_strategy(), x in 0.05..3.0f64, dx in 0.01..1.0f64) {
            prop_assert!(phi(&a, x).unwrap() < phi(&a, x + dx).unwrap());
        }

        #[test]
        fn invert_round_trip(a in family_strategy(), x in 0.1..3.0f64) {
            let target = phi(&a, x).unwrap();
            let got = invert_phi(&a, target, (0.05, 4.0)).unwrap();
            prop_assert!((got - x).abs() <= 1e-9 * x);
        }

        #[test]
        fn analytic_phi_matches_quadrature(
            a in prop_oneof![
                (-3.0..3.0f64).prop_map(CoefficientFunction::constant),
                (-3.0..4.0f64).prop_map(CoefficientFunction::reciprocal),
            ],
            x in 0.1..3.0f64,
        ) {
            let base = 1.0;
            let numeric = quad(|s| xi(&a, s), base, x, 1e-13).unwrap();
            let exact = phi(&a, x).unwrap() - phi(&a, base).unwrap();
            prop_assert!((numeric - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
        }
    }
}
