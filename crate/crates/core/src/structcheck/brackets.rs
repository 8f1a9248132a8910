//! Poisson brackets `{f, g} = (f_x g_y − f_y g_x)/μ` and the bracket tables
//! of the book and oscillator algebras.

use super::fd;
use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::{Error, Result};
use crate::lhsystems::{self, canonical, Algebra, Chart, SystemSpec};
use crate::zfactor::exprel;

/// Bracket from supplied partials.
pub fn bracket_from_gradients(mu: f64, df: [f64; 2], dg: [f64; 2]) -> Result<f64> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::singular("symplectic density vanishes"));
    }
    Ok((df[0] * dg[1] - df[1] * dg[0]) / mu)
}

/// Bracket with central-difference partials.
pub fn poisson_bracket<M, F, G>(mu: M, f: F, g: G, pt: [f64; 2]) -> Result<f64>
where
    M: Fn([f64; 2]) -> Result<f64>,
    F: Fn([f64; 2]) -> Result<f64>,
    G: Fn([f64; 2]) -> Result<f64>,
{
    let m = mu(pt)?;
    bracket_from_gradients(m, fd::gradient(f, pt)?, fd::gradient(g, pt)?)
}

/// `∇h_id`: analytic in the canonical chart, central differences otherwise.
pub fn hamiltonian_gradient(spec: &SystemSpec, id: usize, pt: [f64; 2]) -> Result<[f64; 2]> {
    match spec.chart() {
        Chart::Canonical => {
            lhsystems::hamiltonian(spec, id, pt)?;
            Ok(canonical::hamiltonian_gradient(spec.z(), id, pt[0], pt[1]).expect("id checked"))
        }
        Chart::Buchdahl => fd::gradient(|s| lhsystems::hamiltonian(spec, id, s), pt),
    }
}

/// `{h_i, h_j}` in the chart of `spec`.
pub fn hamiltonian_bracket(spec: &SystemSpec, i: usize, j: usize, pt: [f64; 2]) -> Result<f64> {
    let mu = lhsystems::symplectic_density(spec, pt)?;
    bracket_from_gradients(
        mu,
        hamiltonian_gradient(spec, i, pt)?,
        hamiltonian_gradient(spec, j, pt)?,
    )
}

fn table_relation(spec: &SystemSpec) -> &'static str {
    match spec.algebra() {
        Algebra::B2 => "{h2,h1} = (exp(-z h1) - 1)/z",
        Algebra::H4 => {
            "{h2,h1} = (exp(-z h1) - 1)/z; {h2,h3} = h3; {h3,h1} = exp(-z h1) h0; {h0,hi} = 0"
        }
    }
}

/// Lhs and rhs of every tabulated bracket relation at one point.
fn table_at(spec: &SystemSpec, pt: [f64; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let z = spec.z();
    let h = |id| lhsystems::hamiltonian(spec, id, pt);
    let br = |i, j| hamiltonian_bracket(spec, i, j, pt);
    let h1 = h(1)?;
    // (e^{-z h1} - 1)/z without cancellation
    let deformed = -h1 * exprel(-z * h1);
    let mut lhs = vec![br(2, 1)?];
    let mut rhs = vec![deformed];
    if spec.algebra() == Algebra::H4 {
        lhs.extend([br(2, 3)?, br(3, 1)?, br(0, 1)?, br(0, 2)?, br(0, 3)?]);
        rhs.extend([h(3)?, (-z * h1).exp() * h(0)?, 0.0, 0.0, 0.0]);
    }
    Ok((lhs, rhs))
}

pub fn check_bracket_table(spec: &SystemSpec, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("brackets/{}", super::variant_name(spec)),
        table_relation(spec),
        tol,
    );
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.state(spec);
        match table_at(spec, pt) {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}

/// `h± = h1 ± b0 h3` for the undeformed oscillator system with constant `b2 = b0`:
/// `{h2, h±} = −h∓`, `{h+, h−} = 2 b0 h0`.
pub fn check_poincare_brackets(spec: &SystemSpec, b0: f64, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("poincare-brackets/{}", super::variant_name(spec)),
        "{h2,h+} = -h-; {h2,h-} = -h+; {h+,h-} = 2 b0 h0",
        tol,
    );
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.state(spec);
        let eval = || -> Result<(Vec<f64>, Vec<f64>)> {
            if spec.algebra() != Algebra::H4 || spec.z() != 0.0 {
                return Err(Error::InvalidSpec(
                    "the Poincaré subcase needs the undeformed oscillator algebra".into(),
                ));
            }
            let mu = lhsystems::symplectic_density(spec, pt)?;
            let g = |id| hamiltonian_gradient(spec, id, pt);
            let (g1, g2, g3) = (g(1)?, g(2)?, g(3)?);
            let comb = |s: f64| [g1[0] + s * b0 * g3[0], g1[1] + s * b0 * g3[1]];
            let (gp, gm) = (comb(1.0), comb(-1.0));
            let h = |id| lhsystems::hamiltonian(spec, id, pt);
            let (hp, hm) = (h(1)? + b0 * h(3)?, h(1)? - b0 * h(3)?);
            Ok((
                vec![
                    bracket_from_gradients(mu, g2, gp)?,
                    bracket_from_gradients(mu, g2, gm)?,
                    bracket_from_gradients(mu, gp, gm)?,
                ],
                vec![-hm, -hp, 2.0 * b0 * h(0)?],
            ))
        };
        match eval() {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}

/// Antisymmetry and the Jacobi identity on `(h1, h2, h3)`. Inner brackets use
/// [`hamiltonian_bracket`]; the outer one differentiates them numerically.
pub fn check_jacobi(spec: &SystemSpec, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("jacobi/{}", super::variant_name(spec)),
        "{f,g} + {g,f} = 0; {h1,{h2,h3}} + {h2,{h3,h1}} + {h3,{h1,h2}} = 0",
        tol,
    );
    let mut sampler = Sampler::new(seed);
    let ids: &[usize] = if spec.algebra() == Algebra::H4 { &[1, 2, 3] } else { &[1, 2] };
    for _ in 0..n_points {
        let pt = sampler.state(spec);
        let eval = || -> Result<(Vec<f64>, Vec<f64>)> {
            let mut lhs = Vec::new();
            for &i in ids {
                for &j in ids {
                    lhs.push(hamiltonian_bracket(spec, i, j, pt)? + hamiltonian_bracket(spec, j, i, pt)?);
                }
            }
            if ids.len() == 3 {
                let mu = |s| lhsystems::symplectic_density(spec, s);
                let outer = |a: usize, b: usize, c: usize| {
                    poisson_bracket(
                        mu,
                        |s| lhsystems::hamiltonian(spec, a, s),
                        |s| hamiltonian_bracket(spec, b, c, s),
                        pt,
                    )
                };
                lhs.push(outer(1, 2, 3)? + outer(2, 3, 1)? + outer(3, 1, 2)?);
            }
            let n = lhs.len();
            Ok((lhs, vec![0.0; n]))
        };
        match eval() {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::CoefficientFunction;

    fn one(_: [f64; 2]) -> Result<f64> {
        Ok(1.0)
    }

    #[test]
    fn canonical_examples() {
        let b = poisson_bracket(one, |[q, p]| Ok(q * p), |[q, _]| Ok(-q), [2.0, 3.0]).unwrap();
        assert!((b - 2.0).abs() < 1e-8);
        let z = 0.1f64;
        let h2 = |[q, p]: [f64; 2]| Ok(((z * q).exp() - 1.0) / z * p);
        let b = poisson_bracket(one, h2, |[q, _]| Ok(-q), [1.0, 0.4]).unwrap();
        assert!((b - 1.051709).abs() < 1e-6);
        assert!((b - (0.1f64.exp() - 1.0) / 0.1).abs() < 1e-8);
        let f = |[q, p]: [f64; 2]| Ok(q.sin() * p * p);
        assert_eq!(poisson_bracket(one, f, f, [0.3, -1.2]).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_density_is_singular() {
        let r = poisson_bracket(|_| Ok(0.0), one, one, [0.0, 0.0]);
        assert!(matches!(r, Err(Error::SingularState(_))));
    }

    fn variants() -> Vec<SystemSpec> {
        let a = CoefficientFunction::reciprocal(3.0);
        let b = CoefficientFunction::reciprocal(1.0);
        let b2 = CoefficientFunction::constant(0.4);
        vec![
            SystemSpec::b2_canonical(0.0, b.clone()),
            SystemSpec::b2_canonical(0.3, b.clone()),
            SystemSpec::h4_canonical(0.0, b.clone(), b2.clone()),
            SystemSpec::h4_canonical(0.3, b.clone(), b2.clone()),
            SystemSpec::b2_buchdahl(0.0, a.clone(), b.clone()),
            SystemSpec::b2_buchdahl(0.2, a.clone(), b.clone()),
            SystemSpec::h4_buchdahl(0.0, a.clone(), b.clone(), b2.clone()),
            SystemSpec::h4_buchdahl(-0.2, a, b, b2),
        ]
    }

    #[test]
    fn tables_hold_in_every_variant() {
        for spec in variants() {
            let tol = if spec.chart() == Chart::Canonical { 1e-10 } else { 1e-4 };
            let r = check_bracket_table(&spec, 200, 1, tol);
            assert!(r.passed, "{r:?}");
            assert_eq!(r.points, 200);
        }
    }

    #[test]
    fn too_tight_tolerance_fails_without_panicking() {
        let spec = SystemSpec::h4_buchdahl(
            0.1,
            CoefficientFunction::reciprocal(3.0),
            CoefficientFunction::reciprocal(1.0),
            CoefficientFunction::constant(0.4),
        );
        let r = check_bracket_table(&spec, 20, 3, 1e-15);
        assert!(!r.passed && !r.failures.is_empty());
    }

    #[test]
    fn deformed_table_tends_to_the_undeformed_one() {
        let b = CoefficientFunction::reciprocal(1.0);
        let spec = SystemSpec::h4_canonical(0.0, b, CoefficientFunction::constant(0.2));
        for pt in [[1.0, 2.0], [-0.5, 0.3]] {
            let (lhs, rhs) = table_at(&spec, pt).unwrap();
            let h1 = -pt[0];
            assert_eq!(rhs[0], -h1);
            assert_eq!(rhs[2], 1.0);
            assert!((lhs[0] - rhs[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn poincare_subcase() {
        let b = CoefficientFunction::reciprocal(1.0);
        let c = SystemSpec::h4_canonical(0.0, b.clone(), CoefficientFunction::constant(0.7));
        assert!(check_poincare_brackets(&c, 0.7, 200, 5, 1e-10).passed);
        let d = SystemSpec::h4_buchdahl(0.0, CoefficientFunction::reciprocal(2.0), b, CoefficientFunction::constant(0.7));
        assert!(check_poincare_brackets(&d, 0.7, 200, 5, 1e-4).passed);
        let deformed = c.with_z(0.1).unwrap();
        assert!(!check_poincare_brackets(&deformed, 0.7, 5, 5, 1.0).passed);
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        for spec in variants() {
            if spec.chart() == Chart::Canonical {
                let r = check_jacobi(&spec, 50, 9, 1e-6);
                assert!(r.passed, "{r:?}");
            }
        }
    }
}
