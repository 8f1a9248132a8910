//! Numerical verification of the algebraic structure: Poisson and Lie
//! bracket tables, symplectic compatibility, the two-particle coproduct
//! representation, Lagrangian residuals, point symmetries and the order of
//! the first-order truncations.

pub mod brackets;
pub mod fd;
pub mod lagrangian;
pub mod lie;
pub mod perturbation;
mod report;
pub mod sampling;
pub mod symmetry;
pub mod symplectic;
pub mod two_particle;

pub use brackets::{check_bracket_table, check_jacobi, check_poincare_brackets, poisson_bracket};
pub use lagrangian::{check_lagrangians, lagrangian_residual, Lagrangian};
pub use lie::{check_lie_table, check_poincare_lie, lie_bracket};
pub use perturbation::{perturbation_order_check, PerturbationVariant};
pub use report::{CheckReport, Failure, SuiteReport};
pub use symmetry::{check_delta_patterns, check_subalgebra_determinants, check_symmetry_table, symmetry_generators, SymmetryBasis};
pub use symplectic::check_symplectic_compat;
pub use two_particle::check_two_particle;

use crate::exactsol::CaseKind;
use crate::funcspace::{CoefficientFunction, Family};
use crate::lhsystems::{Algebra, Chart, SystemSpec};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Short label such as `h4-buchdahl z=0.1 a=recip:3 b1=recip:1 b2=const:0.4`.
pub fn variant_name(spec: &SystemSpec) -> String {
    let algebra = match spec.algebra() {
        Algebra::B2 => "b2",
        Algebra::H4 => "h4",
    };
    let chart = match spec.chart() {
        Chart::Canonical => "canonical",
        Chart::Buchdahl => "buchdahl",
    };
    let mut s = format!("{algebra}-{chart} z={}", spec.z());
    if let Some(a) = spec.a() {
        s.push_str(&format!(" a={a}"));
    }
    s.push_str(&format!(" b1={}", spec.b1()));
    if let Some(b2) = spec.b2() {
        s.push_str(&format!(" b2={b2}"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Brackets,
    Symplectic,
    Lie,
    TwoParticle,
    Symmetry,
    Lagrangian,
    Perturbation,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Brackets,
        Suite::Symplectic,
        Suite::Lie,
        Suite::TwoParticle,
        Suite::Symmetry,
        Suite::Lagrangian,
        Suite::Perturbation,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Brackets => "brackets",
            Suite::Symplectic => "symplectic",
            Suite::Lie => "lie",
            Suite::TwoParticle => "two_particle",
            Suite::Symmetry => "symmetry",
            Suite::Lagrangian => "lagrangian",
            Suite::Perturbation => "perturbation",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|v| v.as_str() == s || (s == "two-particle" && **v == Suite::TwoParticle))
            .copied()
            .ok_or_else(|| crate::Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// Tolerances and point counts of a verification run. A single `tol`
/// overrides every tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 42, tol: None }
    }
}

pub const TOL_ANALYTIC: f64 = 1e-8;
pub const TOL_FINITE_DIFFERENCE: f64 = 1e-4;
pub const TOL_LIE: f64 = 1e-5;
pub const TOL_SYMPLECTIC: f64 = 1e-6;
pub const TOL_TWO_PARTICLE: f64 = 1e-8;
pub const TOL_SYMMETRY: f64 = 1e-6;
pub const TOL_LAGRANGIAN: f64 = 1e-6;
pub const TOL_SLOPE: f64 = 0.2;
pub const PERTURBATION_Z: [f64; 2] = [1e-2, 1e-3];

impl VerifyOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Variants exercised when no spec is given.
pub fn default_variants() -> Vec<SystemSpec> {
    let a3 = CoefficientFunction::reciprocal(3.0);
    let a1 = CoefficientFunction::reciprocal(1.0);
    let a2 = CoefficientFunction::reciprocal(2.0);
    let b = CoefficientFunction::reciprocal(1.0);
    let b2 = CoefficientFunction::constant(0.4);
    vec![
        SystemSpec::b2_canonical(0.0, b),
        SystemSpec::b2_canonical(0.3, b),
        SystemSpec::h4_canonical(0.0, b, b2),
        SystemSpec::h4_canonical(0.3, b, b2),
        SystemSpec::b2_buchdahl(0.0, a3, b),
        SystemSpec::b2_buchdahl(0.1, a3, b),
        SystemSpec::b2_buchdahl(0.1, a1, b),
        SystemSpec::b2_buchdahl(-0.1, a2, b),
        SystemSpec::h4_buchdahl(0.0, a3, b, b2),
        SystemSpec::h4_buchdahl(0.1, a3, b, b2),
        SystemSpec::h4_buchdahl(-0.05, a1, b, b2),
    ]
}

/// Undeformed oscillator systems with constant `b2 = b0 ≠ 0`.
fn poincare_b0(spec: &SystemSpec) -> Option<f64> {
    if spec.algebra() != Algebra::H4 || spec.z() != 0.0 {
        return None;
    }
    match spec.b2()?.family {
        Family::Constant(b0) if b0 != 0.0 => Some(b0),
        _ => None,
    }
}

fn default_poincare_variants() -> Vec<SystemSpec> {
    let b = CoefficientFunction::reciprocal(1.0);
    let b0 = CoefficientFunction::constant(0.7);
    vec![
        SystemSpec::h4_canonical(0.0, b, b0),
        SystemSpec::h4_buchdahl(0.0, CoefficientFunction::reciprocal(3.0), b, b0),
    ]
}

fn bracket_tol(spec: &SystemSpec, opts: &VerifyOptions) -> f64 {
    opts.tol(match spec.chart() {
        Chart::Canonical => TOL_ANALYTIC,
        Chart::Buchdahl => TOL_FINITE_DIFFERENCE,
    })
}

fn run_one(suite: Suite, spec: Option<&SystemSpec>, opts: &VerifyOptions) -> Vec<CheckReport> {
    let seed = opts.seed;
    let specs: Vec<SystemSpec> = match spec {
        Some(s) => vec![s.clone()],
        None => default_variants(),
    };
    let poincare: Vec<SystemSpec> = match spec {
        Some(s) => poincare_b0(s).map(|_| s.clone()).into_iter().collect(),
        None => default_poincare_variants(),
    };
    let mut out = Vec::new();
    match suite {
        Suite::Brackets => {
            for s in &specs {
                out.push(check_bracket_table(s, 200, seed, bracket_tol(s, opts)));
            }
            for s in &poincare {
                let b0 = poincare_b0(s).expect("filtered");
                out.push(check_poincare_brackets(s, b0, 200, seed, bracket_tol(s, opts)));
            }
            for s in specs.iter().filter(|s| s.chart() == Chart::Canonical) {
                out.push(check_jacobi(s, 50, seed, opts.tol(1e-6)));
            }
        }
        Suite::Lie => {
            for s in &specs {
                out.push(check_lie_table(s, 100, seed, opts.tol(TOL_LIE)));
            }
            for s in &poincare {
                let b0 = poincare_b0(s).expect("filtered");
                out.push(check_poincare_lie(s, b0, 100, seed, opts.tol(TOL_LIE)));
            }
        }
        Suite::Symplectic => {
            for s in &specs {
                out.push(check_symplectic_compat(s, 100, seed, opts.tol(TOL_SYMPLECTIC)));
            }
        }
        Suite::TwoParticle => {
            let (z, b1, b2) = match spec {
                Some(s) if s.algebra() == Algebra::H4 => (s.z(), *s.b1(), *s.b2().expect("oscillator spec")),
                _ => (0.1, CoefficientFunction::reciprocal(1.0), CoefficientFunction::constant(0.4)),
            };
            let zs = if spec.is_some() { vec![z] } else { vec![0.0, z] };
            for z in zs {
                out.extend(check_two_particle(z, &b1, &b2, 100, seed, opts.tol(TOL_TWO_PARTICLE)));
            }
        }
        Suite::Symmetry => {
            let pairs = match spec.and_then(|s| s.a().map(|a| (*a, *s.b1()))) {
                Some(p) => vec![p],
                None => vec![
                    (CoefficientFunction::reciprocal(3.0), CoefficientFunction::reciprocal(1.0)),
                    (CoefficientFunction::reciprocal(2.0), CoefficientFunction::constant(0.6)),
                ],
            };
            for (a, b) in pairs {
                let basis = SymmetryBasis::new(a, b);
                out.push(check_symmetry_table(&basis, 50, seed, opts.tol(TOL_SYMMETRY)));
                out.push(check_delta_patterns(&basis, 50, seed, opts.tol(1e-12)));
            }
        }
        Suite::Lagrangian => {
            out.extend(check_lagrangians(1.0, opts.tol(TOL_LAGRANGIAN)));
        }
        Suite::Perturbation => {
            let tol = opts.tol(TOL_SLOPE);
            let mut variants: Vec<PerturbationVariant> = [
                CaseKind::ClassicalBuchdahl,
                CaseKind::LogCase,
                CaseKind::PowerCase(2.0),
            ]
            .into_iter()
            .map(PerturbationVariant::Solution)
            .collect();
            match spec {
                Some(s) => variants.push(PerturbationVariant::Rhs(s.clone())),
                None => {
                    let b = CoefficientFunction::reciprocal(1.0);
                    variants.push(PerturbationVariant::Rhs(SystemSpec::b2_canonical(0.1, b)));
                    variants.push(PerturbationVariant::Rhs(SystemSpec::b2_buchdahl(
                        0.1,
                        CoefficientFunction::reciprocal(3.0),
                        b,
                    )));
                    variants.push(PerturbationVariant::Rhs(SystemSpec::h4_buchdahl(
                        0.1,
                        CoefficientFunction::reciprocal(2.0),
                        b,
                        CoefficientFunction::constant(0.3),
                    )));
                }
            }
            for v in &variants {
                out.push(perturbation_order_check(v, &PERTURBATION_Z, 50, seed, tol));
            }
        }
        Suite::All => {
            for s in Suite::EACH {
                out.extend(run_one(s, spec, opts));
            }
        }
    }
    out
}

/// Run a suite on `spec`, or on the default variants when `spec` is `None`.
pub fn run_suite(suite: Suite, spec: Option<&SystemSpec>, opts: &VerifyOptions) -> SuiteReport {
    SuiteReport::new(suite.as_str(), opts.seed, run_one(suite, spec, opts))
}
