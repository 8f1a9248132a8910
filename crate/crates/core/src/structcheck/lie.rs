//! Lie brackets `[X, Y] = (DY)·X − (DX)·Y` of planar vector fields.

use super::fd;
use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::{Error, Result};
use crate::lhsystems::{self, Algebra, SystemSpec};

pub fn lie_bracket<X, Y>(x: X, y: Y, pt: [f64; 2]) -> Result<[f64; 2]>
where
    X: Fn([f64; 2]) -> Result<[f64; 2]>,
    Y: Fn([f64; 2]) -> Result<[f64; 2]>,
{
    let (xv, yv) = (x(pt)?, y(pt)?);
    let (dx, dy) = (fd::jacobian(&x, pt)?, fd::jacobian(&y, pt)?);
    let mut out = [0.0; 2];
    for i in 0..2 {
        out[i] = dy[i][0] * xv[0] + dy[i][1] * xv[1] - dx[i][0] * yv[0] - dx[i][1] * yv[1];
    }
    Ok(out)
}

fn field(spec: &SystemSpec, id: usize) -> impl Fn([f64; 2]) -> Result<[f64; 2]> + '_ {
    move |s| lhsystems::vector_field(spec, id, s)
}

fn table_at(spec: &SystemSpec, pt: [f64; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let z = spec.z();
    let weight = (-z * lhsystems::hamiltonian(spec, 1, pt)?).exp();
    let x1 = lhsystems::vector_field(spec, 1, pt)?;
    let b21 = lie_bracket(field(spec, 2), field(spec, 1), pt)?;
    let mut lhs = b21.to_vec();
    let mut rhs = vec![weight * x1[0], weight * x1[1]];
    if spec.algebra() == Algebra::H4 {
        let x3 = lhsystems::vector_field(spec, 3, pt)?;
        let h0 = lhsystems::hamiltonian(spec, 0, pt)?;
        lhs.extend(lie_bracket(field(spec, 2), field(spec, 3), pt)?);
        rhs.extend([-x3[0], -x3[1]]);
        lhs.extend(lie_bracket(field(spec, 3), field(spec, 1), pt)?);
        rhs.extend([z * weight * h0 * x1[0], z * weight * h0 * x1[1]]);
    }
    Ok((lhs, rhs))
}

pub fn check_lie_table(spec: &SystemSpec, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let relation = match spec.algebra() {
        Algebra::B2 => "[X2,X1] = exp(-z h1) X1",
        Algebra::H4 => "[X2,X1] = exp(-z h1) X1; [X2,X3] = -X3; [X3,X1] = z exp(-z h1) h0 X1",
    };
    let mut report = CheckReport::new(format!("lie/{}", super::variant_name(spec)), relation, tol);
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

/// `X± = X1 ± b0 X3`: `[X2, X±] = X∓`, `[X+, X−] = 0`.
pub fn check_poincare_lie(spec: &SystemSpec, b0: f64, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("poincare-lie/{}", super::variant_name(spec)),
        "[X2,X+] = X-; [X2,X-] = X+; [X+,X-] = 0",
        tol,
    );
    let comb = |s: f64| {
        move |pt: [f64; 2]| -> Result<[f64; 2]> {
            let x1 = lhsystems::vector_field(spec, 1, pt)?;
            let x3 = lhsystems::vector_field(spec, 3, pt)?;
            Ok([x1[0] + s * b0 * x3[0], x1[1] + s * b0 * x3[1]])
        }
    };
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.state(spec);
        let eval = || -> Result<(Vec<f64>, Vec<f64>)> {
            if spec.algebra() != Algebra::H4 || spec.z() != 0.0 {
                return Err(Error::InvalidSpec(
                    "the Poincaré subcase needs the undeformed oscillator algebra".into(),
                ));
            }
            let (xp, xm) = (comb(1.0), comb(-1.0));
            let mut lhs = lie_bracket(field(spec, 2), &xp, pt)?.to_vec();
            lhs.extend(lie_bracket(field(spec, 2), &xm, pt)?);
            lhs.extend(lie_bracket(&xp, &xm, pt)?);
            let mut rhs = xm(pt)?.to_vec();
            rhs.extend(xp(pt)?);
            rhs.extend([0.0, 0.0]);
            Ok((lhs, rhs))
        };
        match eval() {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}
