//! Generators and Hamiltonians in canonical coordinates `(q, p)`.
//!
//! With `E = e^{zq}` and `f = (e^{zq} - 1)/z`:
//! `h1 = -q`, `h2 = f p`, `h3 = E p`, `h0 = 1`.

use crate::zfactor::deformed_linear;

#[derive(Debug, Clone, Copy)]
struct Factors {
    e: f64,
    f: f64,
}

#[inline]
fn factors(z: f64, q: f64) -> Factors {
    Factors {
        e: (z * q).exp(),
        f: deformed_linear(z, q),
    }
}

/// Generator `X_id` at `(q, p)`. Ids outside `{0, 1, 2, 3}` give `None`.
pub fn generator(z: f64, id: usize, q: f64, p: f64) -> Option<[f64; 2]> {
    let k = factors(z, q);
    match id {
        0 => Some([0.0, 0.0]),
        1 => Some([0.0, 1.0]),
        2 => Some([k.f, -k.e * p]),
        3 => Some([k.e, -z * k.e * p]),
        _ => None,
    }
}

pub fn hamiltonian(z: f64, id: usize, q: f64, p: f64) -> Option<f64> {
    let k = factors(z, q);
    match id {
        0 => Some(1.0),
        1 => Some(-q),
        2 => Some(k.f * p),
        3 => Some(k.e * p),
        _ => None,
    }
}

/// `(∂h/∂q, ∂h/∂p)` of `h_id`.
pub fn hamiltonian_gradient(z: f64, id: usize, q: f64, p: f64) -> Option<[f64; 2]> {
    let k = factors(z, q);
    match id {
        0 => Some([0.0, 0.0]),
        1 => Some([-1.0, 0.0]),
        2 => Some([k.e * p, k.f]),
        3 => Some([z * k.e * p, k.e]),
        _ => None,
    }
}

/// `X1 + b1 X2 + b2 X3`.
pub fn rhs(z: f64, b1: f64, b2: f64, q: f64, p: f64) -> [f64; 2] {
    let k = factors(z, q);
    [b1 * k.f + b2 * k.e, 1.0 - b1 * k.e * p - z * b2 * k.e * p]
}

/// First-order truncation in `z` of [`rhs`].
pub fn rhs_first_order(z: f64, b1: f64, b2: f64, q: f64, p: f64) -> [f64; 2] {
    [
        b2 + b1 * q + z * (b2 * q + 0.5 * b1 * q * q),
        1.0 - b1 * p - z * (b2 * p + b1 * q * p),
    ]
}
