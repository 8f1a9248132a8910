//! Right-hand sides, Hamiltonian functions and generators of the book
//! (`b2`) and oscillator (`h4`) Lie–Hamilton systems, deformed or not, in
//! the canonical or the Buchdahl chart.
//!
//! States are passed as `[f64; 2]`: `(q, p)` in the canonical chart and
//! `(x, y)` in the Buchdahl chart.

pub mod buchdahl;
pub mod canonical;
mod spec;
pub mod transform;
pub mod two_particle;

pub use spec::{Algebra, CanonState, Chart, HamiltonianSet, PhaseState, SystemSpec, TwoParticleState};
pub use transform::{from_canonical, from_canonical_near, jacobian, symplectic_factor, to_canonical};
pub use two_particle::rhs_two_particle;

use crate::error::{Error, Result};
use crate::funcspace::CoefficientFunction;
use buchdahl::ChartPoint;

fn chart_point(spec: &SystemSpec, state: [f64; 2]) -> Result<ChartPoint> {
    ChartPoint::new(spec.require_a()?, state.into())
}

fn check_id(spec: &SystemSpec, id: usize) -> Result<()> {
    if spec.generator_ids().contains(&id) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "generator {id} does not exist for the {:?} algebra",
            spec.algebra()
        )))
    }
}

pub fn rhs(spec: &SystemSpec, state: [f64; 2], t: f64) -> Result<[f64; 2]> {
    let (b1, b2) = spec.coefficients_at(t)?;
    let z = spec.z();
    match spec.chart() {
        Chart::Canonical => Ok(canonical::rhs(z, b1, b2, state[0], state[1])),
        Chart::Buchdahl => Ok(buchdahl::rhs(z, b1, b2, &chart_point(spec, state)?)),
    }
}

/// First-order truncation in `z` of [`rhs`].
pub fn rhs_first_order(spec: &SystemSpec, state: [f64; 2], t: f64) -> Result<[f64; 2]> {
    let (b1, b2) = spec.coefficients_at(t)?;
    let z = spec.z();
    match spec.chart() {
        Chart::Canonical => Ok(canonical::rhs_first_order(z, b1, b2, state[0], state[1])),
        Chart::Buchdahl => Ok(buchdahl::rhs_first_order(z, b1, b2, &chart_point(spec, state)?)),
    }
}

pub fn vector_field(spec: &SystemSpec, id: usize, state: [f64; 2]) -> Result<[f64; 2]> {
    check_id(spec, id)?;
    let z = spec.z();
    let v = match spec.chart() {
        Chart::Canonical => canonical::generator(z, id, state[0], state[1]),
        Chart::Buchdahl => buchdahl::generator(z, id, &chart_point(spec, state)?),
    };
    Ok(v.expect("id checked"))
}

pub fn hamiltonian(spec: &SystemSpec, id: usize, state: [f64; 2]) -> Result<f64> {
    check_id(spec, id)?;
    let z = spec.z();
    let h = match spec.chart() {
        Chart::Canonical => canonical::hamiltonian(z, id, state[0], state[1]),
        Chart::Buchdahl => buchdahl::hamiltonian(z, id, &chart_point(spec, state)?),
    };
    Ok(h.expect("id checked"))
}

pub fn hamiltonians(spec: &SystemSpec, state: [f64; 2], t: f64) -> Result<HamiltonianSet> {
    let (b1, b2) = spec.coefficients_at(t)?;
    let z = spec.z();
    let ids: [usize; 4] = [1, 2, 3, 0];
    let mut h = [0.0; 4];
    match spec.chart() {
        Chart::Canonical => {
            for (slot, &id) in h.iter_mut().zip(&ids) {
                *slot = canonical::hamiltonian(z, id, state[0], state[1]).expect("valid id");
            }
        }
        Chart::Buchdahl => {
            let c = chart_point(spec, state)?;
            for (slot, &id) in h.iter_mut().zip(&ids) {
                *slot = buchdahl::hamiltonian(z, id, &c).expect("valid id");
            }
        }
    }
    let oscillator = spec.algebra() == Algebra::H4;
    Ok(HamiltonianSet {
        h1: h[0],
        h2: h[1],
        h3: oscillator.then_some(h[2]),
        h0: oscillator.then_some(h[3]),
        ht: h[0] + b1 * h[1] + if oscillator { b2 * h[2] } else { 0.0 },
    })
}

/// Density `μ` of the symplectic form `μ dx ∧ dy` (1 in the canonical chart).
pub fn symplectic_density(spec: &SystemSpec, state: [f64; 2]) -> Result<f64> {
    match spec.chart() {
        Chart::Canonical => Ok(1.0),
        Chart::Buchdahl => symplectic_factor(spec.require_a()?, state.into()),
    }
}

/// `ln|y| - ∫a dx - γ(t)`, conserved along the undeformed book-algebra
/// Buchdahl-chart flow.
pub fn buchdahl_invariant(spec: &SystemSpec, state: [f64; 2], t: f64) -> Result<f64> {
    let a = spec.require_a()?;
    let [x, y] = state;
    if y == 0.0 {
        return Err(Error::singular("y = 0"));
    }
    Ok(y.abs().ln() - a.antiderivative(x)? - crate::funcspace::gamma_t(spec.b1(), t, spec.t_ref())?)
}

/// `t ↦ b2(t) + b1'(t)/b1(t)`, the single coefficient of the book-algebra
/// system equivalent to the two-coefficient system under `ỹ = b1(t) y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficient {
    pub b1: CoefficientFunction,
    pub b2: CoefficientFunction,
}

impl EffectiveCoefficient {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let b1 = self.b1.eval(t)?;
        if b1 == 0.0 {
            return Err(Error::domain("b1 vanishes", t));
        }
        Ok(self.b2.eval(t)? + self.b1.derivative(t)? / b1)
    }
}

pub fn reduce_two_coefficient(
    b1: &CoefficientFunction,
    b2: &CoefficientFunction,
) -> Result<EffectiveCoefficient> {
    if b1.is_zero() {
        return Err(Error::domain("b1 is identically zero", 0.0));
    }
    Ok(EffectiveCoefficient { b1: *b1, b2: *b2 })
}

/// `dx = b1 y`, `dy = b1 a y² + b2 y`.
pub fn rhs_two_coefficient(
    a: &CoefficientFunction,
    b1: &CoefficientFunction,
    b2: &CoefficientFunction,
    state: [f64; 2],
    t: f64,
) -> Result<[f64; 2]> {
    let [x, y] = state;
    let b1v = b1.eval(t)?;
    Ok([b1v * y, b1v * a.eval(x)? * y * y + b2.eval(t)? * y])
}

/// Book-algebra Buchdahl-chart right-hand side with an arbitrary `b(t)`.
pub fn rhs_with_coefficient<F>(a: &CoefficientFunction, b: F, state: [f64; 2], t: f64) -> Result<[f64; 2]>
where
    F: Fn(f64) -> Result<f64>,
{
    let [x, y] = state;
    Ok([y, a.eval(x)? * y * y + b(t)? * y])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recip(a: f64) -> CoefficientFunction {
        CoefficientFunction::reciprocal(a)
    }

    #[test]
    fn spec_examples() {
        let s = SystemSpec::b2_buchdahl(0.0, recip(3.0), recip(1.0));
        assert_eq!(rhs(&s, [1.0, 1.0], 1.0).unwrap(), [1.0, 4.0]);
        let s = SystemSpec::b2_canonical(0.0, recip(1.0));
        assert_eq!(rhs(&s, [2.0, 3.0], 2.0).unwrap(), [1.0, -0.5]);
        let s = SystemSpec::b2_canonical(0.1, recip(1.0));
        assert_eq!(rhs(&s, [0.0, 5.0], 1.0).unwrap(), [0.0, -4.0]);
        let s = SystemSpec::h4_canonical(0.1, recip(1.0), CoefficientFunction::constant(1.0));
        assert_eq!(rhs(&s, [0.0, 0.0], 1.0).unwrap(), [1.0, 1.0]);
    }

    #[test]
    fn hamiltonian_sets() {
        let s = SystemSpec::b2_buchdahl(0.0, recip(3.0), recip(1.0));
        let h = hamiltonians(&s, [1.0, 2.0], 1.0).unwrap();
        assert_eq!((h.h1, h.h2, h.h3, h.h0), (2.0, 0.5, None, None));
        let s = SystemSpec::b2_canonical(0.0, recip(1.0));
        let h = hamiltonians(&s, [3.0, 4.0], 2.0).unwrap();
        assert_eq!((h.h1, h.h2, h.ht), (-3.0, 12.0, -3.0 + 0.5 * 12.0));
        let s = SystemSpec::b2_canonical(1e-9, recip(1.0));
        let h = hamiltonians(&s, [3.0, 4.0], 2.0).unwrap();
        assert!((h.h2 - 12.0).abs() < 1e-7);
    }

    #[test]
    fn generator_examples() {
        let s = SystemSpec::b2_canonical(0.0, recip(1.0));
        assert_eq!(vector_field(&s, 1, [4.0, -2.0]).unwrap(), [0.0, 1.0]);
        assert_eq!(vector_field(&s, 2, [2.0, 3.0]).unwrap(), [2.0, -3.0]);
        assert!(vector_field(&s, 3, [2.0, 3.0]).is_err());
        let s = SystemSpec::h4_canonical(0.0, recip(1.0), CoefficientFunction::zero());
        assert_eq!(vector_field(&s, 3, [7.0, 1.0]).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn zero_b2_h4_equals_b2() {
        let a = recip(2.0);
        let b = recip(1.0);
        for &z in &[0.0, 0.2, -0.3] {
            let s2 = SystemSpec::b2_buchdahl(z, a, b);
            let s4 = SystemSpec::h4_buchdahl(z, a, b, CoefficientFunction::zero());
            assert_eq!(rhs(&s2, [1.3, 0.4], 1.7).unwrap(), rhs(&s4, [1.3, 0.4], 1.7).unwrap());
        }
    }

    #[test]
    fn hamilton_equations_hold_in_both_charts() {
        let specs = [
            SystemSpec::b2_canonical(0.3, recip(1.0)),
            SystemSpec::h4_canonical(-0.2, recip(1.0), CoefficientFunction::constant(0.4)),
            SystemSpec::b2_buchdahl(0.3, recip(3.0), recip(1.0)),
            SystemSpec::h4_buchdahl(-0.2, recip(2.0), recip(1.0), CoefficientFunction::constant(0.4)),
        ];
        let (state, t) = ([1.2, 0.7], 1.5);
        for spec in specs {
            let mu = symplectic_density(&spec, state).unwrap();
            let ht = |s: [f64; 2]| hamiltonians(&spec, s, t).unwrap().ht;
            let h = 1e-6;
            let d0 = (ht([state[0] + h, state[1]]) - ht([state[0] - h, state[1]])) / (2.0 * h);
            let d1 = (ht([state[0], state[1] + h]) - ht([state[0], state[1] - h])) / (2.0 * h);
            let r = rhs(&spec, state, t).unwrap();
            assert!((r[0] - d1 / mu).abs() < 1e-7, "{spec:?}");
            assert!((r[1] + d0 / mu).abs() < 1e-7, "{spec:?}");
        }
    }

    #[test]
    fn reduction_examples() {
        let e = reduce_two_coefficient(&CoefficientFunction::constant(1.0), &recip(2.0)).unwrap();
        assert_eq!(e.eval(4.0).unwrap(), 0.5);
        let e = reduce_two_coefficient(&recip(1.0), &CoefficientFunction::zero()).unwrap();
        assert!((e.eval(2.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(reduce_two_coefficient(&CoefficientFunction::zero(), &recip(1.0)).is_err());
    }
}
