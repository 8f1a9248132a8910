//! Two-particle representation of the deformed oscillator algebra, obtained
//! from the deformed coproduct. At `z = 0` it is two uncoupled copies of the
//! one-particle system.

use super::spec::TwoParticleState;
use crate::error::Result;
use crate::funcspace::CoefficientFunction;
use crate::zfactor::deformed_linear;

/// Hamiltonians `[h0, h1, h2, h3]` of the two-particle representation.
pub fn hamiltonians(z: f64, s: &TwoParticleState) -> [f64; 4] {
    let e1 = (z * s.q1).exp();
    let e2 = (z * s.q2).exp();
    let f1 = deformed_linear(z, s.q1);
    let f2 = deformed_linear(z, s.q2);
    [
        2.0,
        -s.q1 - s.q2,
        f1 * s.p1 * e2 + f2 * s.p2,
        (2.0 * e1 - 1.0) * s.p1 * e2 + e2 * s.p2,
    ]
}

/// Gradients `(∂q1, ∂p1, ∂q2, ∂p2)` of `[h0, h1, h2, h3]`.
pub fn hamiltonian_gradients(z: f64, s: &TwoParticleState) -> [[f64; 4]; 4] {
    let e1 = (z * s.q1).exp();
    let e2 = (z * s.q2).exp();
    let f1 = deformed_linear(z, s.q1);
    let f2 = deformed_linear(z, s.q2);
    [
        [0.0; 4],
        [-1.0, 0.0, -1.0, 0.0],
        [e1 * s.p1 * e2, f1 * e2, z * f1 * s.p1 * e2 + e2 * s.p2, f2],
        [
            2.0 * z * e1 * s.p1 * e2,
            (2.0 * e1 - 1.0) * e2,
            z * ((2.0 * e1 - 1.0) * s.p1 + s.p2) * e2,
            e2,
        ],
    ]
}

/// The coupled four-dimensional Hamilton equations.
pub fn rhs_two_particle(
    b1: &CoefficientFunction,
    b2: &CoefficientFunction,
    z: f64,
    s: &TwoParticleState,
    t: f64,
) -> Result<[f64; 4]> {
    let b1v = b1.eval(t)?;
    let b2v = b2.eval(t)?;
    let e1 = (z * s.q1).exp();
    let e2 = (z * s.q2).exp();
    let f1 = deformed_linear(z, s.q1);
    let f2 = deformed_linear(z, s.q2);
    Ok([
        b1v * f1 * e2 + b2v * (2.0 * e1 - 1.0) * e2,
        1.0 - b1v * e1 * e2 * s.p1 - 2.0 * z * b2v * e1 * e2 * s.p1,
        b1v * f2 + b2v * e2,
        1.0 - b1v * e2 * ((e1 - 1.0) * s.p1 + s.p2)
            - z * b2v * e2 * ((2.0 * e1 - 1.0) * s.p1 + s.p2),
    ])
}
