//! Compatibility `ι_X ω = dh`: `X = (h_y, −h_x)/μ` for every generator.

use super::brackets::hamiltonian_gradient;
use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::Result;
use crate::lhsystems::{self, SystemSpec};

fn compat_at(spec: &SystemSpec, pt: [f64; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mu = lhsystems::symplectic_density(spec, pt)?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &id in spec.generator_ids() {
        let x = lhsystems::vector_field(spec, id, pt)?;
        let g = hamiltonian_gradient(spec, id, pt)?;
        lhs.extend(x);
        rhs.extend([g[1] / mu, -g[0] / mu]);
    }
    Ok((lhs, rhs))
}

pub fn check_symplectic_compat(spec: &SystemSpec, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("symplectic/{}", super::variant_name(spec)),
        "X_i = (dh_i/dy, -dh_i/dx)/mu for every generator",
        tol,
    );
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.state(spec);
        match compat_at(spec, pt) {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}
