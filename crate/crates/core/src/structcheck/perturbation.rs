//! Order of the first-order-in-`z` truncations: the gap to the full
//! deformed object must shrink like `z²`.

use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::Result;
use crate::exactsol::{exact_case, perturbative_solution, CaseId, CaseKind, CaseParams, IntegrationConstants};
use crate::lhsystems::{self, SystemSpec};

#[derive(Debug, Clone)]
pub enum PerturbationVariant {
    /// Closed-form deformed case (`b = 1/t`, `c1 = c2 = 1/2`) against its
    /// first-order expansion.
    Solution(CaseKind),
    /// Full deformed right-hand side against its truncation; the spec's `z`
    /// is replaced by each entry of the z list.
    Rhs(SystemSpec),
}

impl PerturbationVariant {
    pub fn name(&self) -> String {
        match self {
            PerturbationVariant::Solution(k) => format!("solution/{k:?}"),
            PerturbationVariant::Rhs(spec) => format!("rhs/{}", super::variant_name(spec)),
        }
    }
}

fn solution_gap(kind: CaseKind, z: f64, ts: &[f64]) -> Result<f64> {
    let case = CaseId::new(kind, true, false)?;
    let k = IntegrationConstants { c1: 0.5, c2: 0.5, t0: 1.0 };
    let params = CaseParams { z, ..CaseParams::default() };
    let mut gap: f64 = 0.0;
    for &t in ts {
        let e = exact_case(&case, &params, &k, t)?;
        let p = perturbative_solution(&case, z, &k, t, 1.0)?;
        gap = gap.max((e.x - p.x).abs()).max((e.y - p.y).abs());
    }
    Ok(gap)
}

fn rhs_gap(spec: &SystemSpec, z: f64, pts: &[([f64; 2], f64)]) -> Result<f64> {
    let spec = spec.clone().with_z(z)?;
    let mut gap: f64 = 0.0;
    for &(s, t) in pts {
        let full = lhsystems::rhs(&spec, s, t)?;
        let first = lhsystems::rhs_first_order(&spec, s, t)?;
        gap = gap.max((full[0] - first[0]).abs()).max((full[1] - first[1]).abs());
    }
    Ok(gap)
}

/// Gaps `‖full − first order‖` for each `z`.
pub fn gaps(variant: &PerturbationVariant, z_list: &[f64], n_points: usize, seed: u64) -> Result<Vec<f64>> {
    let mut sampler = Sampler::new(seed);
    match variant {
        PerturbationVariant::Solution(kind) => {
            let ts: Vec<f64> = (0..n_points).map(|_| sampler.time()).collect();
            z_list.iter().map(|&z| solution_gap(*kind, z, &ts)).collect()
        }
        PerturbationVariant::Rhs(spec) => {
            let pts: Vec<_> = (0..n_points).map(|_| (sampler.state(spec), sampler.time())).collect();
            z_list.iter().map(|&z| rhs_gap(spec, z, &pts)).collect()
        }
    }
}

/// Log-log slope between consecutive z values must be `2 ± tol`.
pub fn perturbation_order_check(
    variant: &PerturbationVariant,
    z_list: &[f64],
    n_points: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let mut report = CheckReport::new(
        format!("perturbation/{}", variant.name()),
        "d log|full - first order| / d log z = 2",
        tol,
    );
    match gaps(variant, z_list, n_points, seed) {
        Ok(g) => {
            for i in 1..z_list.len() {
                let slope = (g[i - 1] / g[i]).ln() / (z_list[i - 1] / z_list[i]).ln();
                report.record_measure(&[z_list[i - 1], z_list[i]], slope, 2.0);
            }
        }
        Err(e) => report.record_error(z_list, &e),
    }
    report
}
