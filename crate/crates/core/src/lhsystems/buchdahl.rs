//! Generators and Hamiltonians in the Buchdahl chart `(x, y)`.
//!
//! These are the canonical-chart objects pulled back through
//! `q = -y Ξ(x)`, `p = Φ(x)/(y Ξ(x))`, simplified in terms of `u = y Ξ(x)`.

use super::spec::PhaseState;
use crate::error::{Error, Result};
use crate::funcspace::{self, CoefficientFunction};
use crate::zfactor::{exprel, shifted_gap};

/// `a`, `Ξ`, `Φ` and `u = yΞ` at one point.
#[derive(Debug, Clone, Copy)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub xi: f64,
    pub phi: f64,
    pub u: f64,
}

impl ChartPoint {
    pub fn new(a: &CoefficientFunction, s: PhaseState) -> Result<Self> {
        if s.y == 0.0 {
            return Err(Error::singular("y = 0 in the Buchdahl chart"));
        }
        let av = a.eval(s.x)?;
        let xi = funcspace::xi(a, s.x)?;
        let phi = funcspace::phi(a, s.x)?;
        Ok(ChartPoint {
            x: s.x,
            y: s.y,
            a: av,
            xi,
            phi,
            u: s.y * xi,
        })
    }
}

pub fn generator(z: f64, id: usize, c: &ChartPoint) -> Option<[f64; 2]> {
    let zu = z * c.u;
    let (y, a, xi, phi) = (c.y, c.a, c.xi, c.phi);
    match id {
        0 => Some([0.0, 0.0]),
        1 => Some([y, a * y * y]),
        2 => {
            let g = shifted_gap(zu);
            Some([
                phi / xi * g,
                y * exprel(-zu) + y * a * phi / xi * g,
            ])
        }
        3 => {
            let damp = (-zu).exp();
            Some([
                -damp * phi * (1.0 + zu) / (y * xi * xi),
                -damp / (xi * xi) * (xi + (1.0 + zu) * a * phi),
            ])
        }
        _ => None,
    }
}

pub fn hamiltonian(z: f64, id: usize, c: &ChartPoint) -> Option<f64> {
    let zu = z * c.u;
    match id {
        0 => Some(1.0),
        1 => Some(c.u),
        2 => Some(-c.phi * exprel(-zu)),
        3 => Some((-zu).exp() * c.phi / c.u),
        _ => None,
    }
}

pub fn rhs(z: f64, b1: f64, b2: f64, c: &ChartPoint) -> [f64; 2] {
    let x1 = generator(z, 1, c).expect("id 1");
    let x2 = generator(z, 2, c).expect("id 2");
    let mut r = [x1[0] + b1 * x2[0], x1[1] + b1 * x2[1]];
    if b2 != 0.0 {
        let x3 = generator(z, 3, c).expect("id 3");
        r[0] += b2 * x3[0];
        r[1] += b2 * x3[1];
    }
    r
}

/// First-order truncation in `z` of [`rhs`].
pub fn rhs_first_order(z: f64, b1: f64, b2: f64, c: &ChartPoint) -> [f64; 2] {
    let (y, a, xi, phi) = (c.y, c.a, c.xi, c.phi);
    [
        y + 0.5 * z * y * b1 * phi - b2 * phi / (y * xi * xi),
        a * y * y + b1 * y * (1.0 - 0.5 * z * y * (xi - a * phi))
            + b2 * (-(xi + a * phi) / (xi * xi) + z * y),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(a: &CoefficientFunction, x: f64, y: f64) -> ChartPoint {
        ChartPoint::new(a, PhaseState { x, y }).unwrap()
    }

    /// Deformed book-algebra system in expanded form, term by term.
    fn expanded_b2(z: f64, b: f64, c: &ChartPoint) -> [f64; 2] {
        let (y, a, xi, phi) = (c.y, c.a, c.xi, c.phi);
        let zyx = z * y * xi;
        let e = zyx.exp();
        let dx = y + b * ((e - 1.0 - zyx) / (z * y * xi * xi)) * (-zyx).exp() * phi;
        let dy = a * y * y
            + b * (-zyx).exp() * ((e - 1.0) / (z * xi) + (e - 1.0 - zyx) / (z * xi * xi) * a * phi);
        [dx, dy]
    }

    /// Deformed oscillator system in expanded form, with Ξ(x) in the last factor.
    fn expanded_h4(z: f64, b1: f64, b2: f64, c: &ChartPoint) -> [f64; 2] {
        let (y, a, xi, phi) = (c.y, c.a, c.xi, c.phi);
        let zyx = z * y * xi;
        let base = expanded_b2(z, b1, c);
        let dx = base[0] - b2 * ((1.0 + zyx) / (y * xi * xi)) * (-zyx).exp() * phi;
        let dy = base[1] - b2 * (-zyx).exp() / (xi * xi) * (xi + (1.0 + zyx) * a * phi);
        [dx, dy]
    }

    #[test]
    fn undeformed_example() {
        let a = CoefficientFunction::reciprocal(3.0);
        let c = point(&a, 1.0, 1.0);
        assert_eq!(rhs(0.0, 1.0, 0.0, &c), [1.0, 4.0]);
        let c = point(&a, 1.0, 2.0);
        assert_eq!(hamiltonian(0.0, 1, &c).unwrap(), 2.0);
        assert_eq!(hamiltonian(0.0, 2, &c).unwrap(), 0.5);
    }

    #[test]
    fn matches_expanded_deformed_systems() {
        let coeffs = [
            CoefficientFunction::reciprocal(3.0),
            CoefficientFunction::reciprocal(1.0),
            CoefficientFunction::reciprocal(2.0),
            CoefficientFunction::monomial(0.5, 1.0),
        ];
        for a in coeffs {
            for &(x, y) in &[(1.0, 1.0), (0.7, -1.4), (2.2, 0.3)] {
                let c = point(&a, x, y);
                for &z in &[0.3, -0.15, 1e-3] {
                    let got = rhs(z, 0.8, 0.0, &c);
                    let want = expanded_b2(z, 0.8, &c);
                    let got4 = rhs(z, 0.8, -0.6, &c);
                    let want4 = expanded_h4(z, 0.8, -0.6, &c);
                    for i in 0..2 {
                        let tol = 1e-9 * (1.0 + want[i].abs());
                        assert!((got[i] - want[i]).abs() < tol, "{a} {x} {y} {z}");
                        assert!((got4[i] - want4[i]).abs() < tol, "{a} {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn hamiltonian_values() {
        let a = CoefficientFunction::reciprocal(3.0);
        let (z, x, y): (f64, f64, f64) = (0.2, 1.3, 0.9);
        let c = point(&a, x, y);
        let w = (-z * y / x.powi(3)).exp();
        assert!((hamiltonian(z, 1, &c).unwrap() - y / x.powi(3)).abs() < 1e-15);
        assert!((hamiltonian(z, 2, &c).unwrap() - x * (1.0 - w) / (2.0 * z * y)).abs() < 1e-14);
        assert!((hamiltonian(z, 3, &c).unwrap() + x / (2.0 * y) * w).abs() < 1e-14);
    }

    #[test]
    fn zero_deformation_reduces_to_undeformed_fields() {
        let a = CoefficientFunction::reciprocal(2.0);
        let c = point(&a, 1.4, -0.7);
        let (y, av, xi, phi) = (c.y, c.a, c.xi, c.phi);
        assert_eq!(generator(0.0, 2, &c).unwrap(), [0.0, y]);
        let x3 = generator(0.0, 3, &c).unwrap();
        assert!((x3[0] + phi / (y * xi * xi)).abs() < 1e-15);
        assert!((x3[1] + (xi + av * phi) / (xi * xi)).abs() < 1e-15);
    }

    #[test]
    fn y_zero_is_singular() {
        let a = CoefficientFunction::reciprocal(3.0);
        assert!(matches!(
            ChartPoint::new(&a, PhaseState { x: 1.0, y: 0.0 }),
            Err(Error::SingularState(_))
        ));
    }
}
