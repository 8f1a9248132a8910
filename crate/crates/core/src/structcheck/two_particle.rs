//! Checks of the two-particle representation obtained from the deformed
//! coproduct.

use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::Result;
use crate::funcspace::CoefficientFunction;
use crate::lhsystems::{canonical, rhs_two_particle, two_particle};
use crate::zfactor::exprel;

/// `Σ (f_{q_i} g_{p_i} − f_{p_i} g_{q_i})` on gradients ordered `(q1, p1, q2, p2)`.
pub fn bracket4(df: [f64; 4], dg: [f64; 4]) -> f64 {
    df[0] * dg[1] - df[1] * dg[0] + df[2] * dg[3] - df[3] * dg[2]
}

fn table_at(z: f64, s: [f64; 4]) -> (Vec<f64>, Vec<f64>) {
    let st = s.into();
    let [h0, h1, _h2, h3] = two_particle::hamiltonians(z, &st);
    let g = two_particle::hamiltonian_gradients(z, &st);
    let lhs = vec![
        bracket4(g[2], g[1]),
        bracket4(g[2], g[3]),
        bracket4(g[3], g[1]),
        bracket4(g[0], g[1]),
        bracket4(g[0], g[2]),
        bracket4(g[0], g[3]),
    ];
    let rhs = vec![-h1 * exprel(-z * h1), h3, (-z * h1).exp() * h0, 0.0, 0.0, 0.0];
    (lhs, rhs)
}

fn hamilton_at(z: f64, b1: &CoefficientFunction, b2: &CoefficientFunction, s: [f64; 4], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let st = s.into();
    let got = rhs_two_particle(b1, b2, z, &st, t)?;
    let (c1, c2) = (b1.eval(t)?, b2.eval(t)?);
    let g = two_particle::hamiltonian_gradients(z, &st);
    let dh: Vec<f64> = (0..4).map(|k| g[1][k] + c1 * g[2][k] + c2 * g[3][k]).collect();
    Ok((got.to_vec(), vec![dh[1], -dh[0], dh[3], -dh[2]]))
}

/// (i) the deformed bracket table for the two-particle Hamiltonians;
/// (ii) at `z = 0` each equals the sum of one-particle values;
/// (iii) the four coupled equations are Hamilton's equations of `h1 + b1 h2 + b2 h3`;
/// (iv) the `(q2, p2)` equations coincide with the one-particle system:
/// `dq2/dt` everywhere, `dp2/dt` on the slice `p1 = 0`.
pub fn check_two_particle(
    z: f64,
    b1: &CoefficientFunction,
    b2: &CoefficientFunction,
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Vec<CheckReport> {
    let mut table = CheckReport::new(
        format!("two-particle/table z={z}"),
        "{h2,h1} = (exp(-z h1) - 1)/z; {h2,h3} = h3; {h3,h1} = exp(-z h1) h0; {h0,hi} = 0",
        tol,
    );
    let mut split = CheckReport::new(
        "two-particle/undeformed-split",
        "h_i(q1,p1,q2,p2) = h_i(q1,p1) + h_i(q2,p2) at z = 0",
        0.0,
    );
    let mut hamilton = CheckReport::new(
        format!("two-particle/hamilton z={z}"),
        "coupled equations = canonical Hamilton equations of h1 + b1 h2 + b2 h3",
        tol,
    );
    let mut second = CheckReport::new(
        format!("two-particle/second-particle z={z}"),
        "dq2/dt = one-particle dq/dt at (q2,p2); dp2/dt = one-particle dp/dt at (q2,p2) when p1 = 0",
        0.0,
    );
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let s = sampler.two_particle();
        let t = sampler.time();

        let (lhs, rhs) = table_at(z, s);
        table.record(&s, &lhs, &rhs);

        let undeformed = two_particle::hamiltonians(0.0, &s.into());
        let sum: Vec<f64> = (0..4)
            .map(|id| {
                canonical::hamiltonian(0.0, id, s[0], s[1]).unwrap()
                    + canonical::hamiltonian(0.0, id, s[2], s[3]).unwrap()
            })
            .collect();
        split.record(&s, &undeformed, &sum);

        let mut pt = s.to_vec();
        pt.push(t);
        match hamilton_at(z, b1, b2, s, t) {
            Ok((lhs, rhs)) => hamilton.record(&pt, &lhs, &rhs),
            Err(e) => hamilton.record_error(&pt, &e),
        }

        let sliced = [s[0], 0.0, s[2], s[3]];
        let eval = || -> Result<(Vec<f64>, Vec<f64>)> {
            let (c1, c2) = (b1.eval(t)?, b2.eval(t)?);
            let one = canonical::rhs(z, c1, c2, s[2], s[3]);
            let full = rhs_two_particle(b1, b2, z, &s.into(), t)?;
            let on_slice = rhs_two_particle(b1, b2, z, &sliced.into(), t)?;
            Ok((vec![full[2], on_slice[3]], one.to_vec()))
        };
        match eval() {
            Ok((lhs, rhs)) => second.record(&pt, &lhs, &rhs),
            Err(e) => second.record_error(&pt, &e),
        }
    }
    vec![table, split, hamilton, second]
}
