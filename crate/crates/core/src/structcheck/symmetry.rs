//! Point symmetries `Y1..Y8` of `x'' = a(x) x'² + b(t) x'` and their
//! commutator table. Fields are `(ξ, η)`, the `∂t` and `∂x` components at
//! `(t, x)`.
//!
//! With `F(x) = ∫e^{−A}` and `G(t) = ∫e^{B}`, where `A`, `B` are the canonical
//! antiderivatives of `a` and `b`, the generators are projective fields in
//! the flat coordinates `(G, F)`. Shifting the base points of `F` and `G`
//! moves those coordinates by constants.

use super::report::CheckReport;
use super::sampling::Sampler;
use crate::error::Result;
use crate::funcspace::{phi, CoefficientFunction};

pub type Field = [f64; 2];

#[derive(Debug, Clone)]
pub struct SymmetryBasis {
    pub a: CoefficientFunction,
    pub b: CoefficientFunction,
    x_offset: f64,
    t_offset: f64,
    /// `-b`, whose `Φ` is `∫e^{B}`.
    b_neg: CoefficientFunction,
}

impl SymmetryBasis {
    pub fn new(a: CoefficientFunction, b: CoefficientFunction) -> Self {
        Self {
            a,
            b,
            x_offset: 0.0,
            t_offset: 0.0,
            b_neg: b.negated(),
        }
    }

    /// Add constants to the inner integrals `∫e^{−A}dx` and `∫e^{B}dt`.
    pub fn with_offsets(mut self, x_offset: f64, t_offset: f64) -> Self {
        self.x_offset = x_offset;
        self.t_offset = t_offset;
        self
    }

    pub fn big_a(&self, x: f64) -> Result<f64> {
        self.a.antiderivative(x)
    }

    pub fn big_b(&self, t: f64) -> Result<f64> {
        self.b.antiderivative(t)
    }

    /// `∫e^{−A(x)} dx`
    pub fn inner_x(&self, x: f64) -> Result<f64> {
        Ok(phi(&self.a, x)? + self.x_offset)
    }

    /// `∫e^{B(t)} dt`
    pub fn inner_t(&self, t: f64) -> Result<f64> {
        Ok(phi(&self.b_neg, t)? + self.t_offset)
    }

    /// `Y1..Y8` at `(t, x)`.
    pub fn generators(&self, [t, x]: [f64; 2]) -> Result<[Field; 8]> {
        let ea = self.big_a(x)?.exp();
        let emb = (-self.big_b(t)?).exp();
        let f = self.inner_x(x)?;
        let g = self.inner_t(t)?;
        Ok([
            [0.0, ea],
            [0.0, ea * f],
            [emb, 0.0],
            [emb * g, 0.0],
            [0.0, ea * g],
            [emb * f, 0.0],
            [emb * f * g, ea * f * f],
            [emb * g * g, ea * f * g],
        ])
    }

    pub fn generator(&self, i: usize, pt: [f64; 2]) -> Result<Field> {
        Ok(self.generators(pt)?[i - 1])
    }
}

pub fn symmetry_generators(a: &CoefficientFunction, b: &CoefficientFunction, pt: [f64; 2]) -> Result<[Field; 8]> {
    SymmetryBasis::new(*a, *b).generators(pt)
}

/// `[Yi, Yj] = (DYj)·Yi − (DYi)·Yj` with numeric Jacobians.
pub fn commutator(basis: &SymmetryBasis, i: usize, j: usize, pt: [f64; 2]) -> Result<Field> {
    super::lie::lie_bracket(|s| basis.generator(i, s), |s| basis.generator(j, s), pt)
}

/// The nontrivial commutators: `[Yi, Yj] = Σ c_k Y_k`.
pub const COMMUTATORS: [(usize, usize, &[(f64, usize)]); 17] = [
    (1, 2, &[(1.0, 1)]),
    (1, 6, &[(1.0, 3)]),
    (1, 7, &[(1.0, 4), (2.0, 2)]),
    (1, 8, &[(1.0, 5)]),
    (2, 5, &[(-1.0, 5)]),
    (2, 6, &[(1.0, 6)]),
    (2, 7, &[(1.0, 7)]),
    (3, 4, &[(1.0, 3)]),
    (3, 5, &[(1.0, 1)]),
    (3, 7, &[(1.0, 6)]),
    (3, 8, &[(2.0, 4), (1.0, 2)]),
    (4, 5, &[(1.0, 5)]),
    (4, 6, &[(-1.0, 6)]),
    (4, 8, &[(1.0, 8)]),
    (5, 6, &[(1.0, 4), (-1.0, 2)]),
    (5, 7, &[(1.0, 8)]),
    (6, 8, &[(1.0, 7)]),
];

fn describe(i: usize, j: usize, rhs: &[(f64, usize)]) -> String {
    let terms: Vec<String> = rhs
        .iter()
        .map(|&(c, k)| match c {
            c if c == 1.0 => format!("Y{k}"),
            c if c == -1.0 => format!("-Y{k}"),
            c => format!("{c}Y{k}"),
        })
        .collect();
    format!("[Y{i},Y{j}] = {}", terms.join(" + "))
}

fn table_at(basis: &SymmetryBasis, pt: [f64; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let ys = basis.generators(pt)?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &(i, j, combo) in &COMMUTATORS {
        lhs.extend(commutator(basis, i, j, pt)?);
        let mut want = [0.0; 2];
        for &(c, k) in combo {
            want[0] += c * ys[k - 1][0];
            want[1] += c * ys[k - 1][1];
        }
        rhs.extend(want);
    }
    Ok((lhs, rhs))
}

fn label(basis: &SymmetryBasis) -> String {
    format!("a={},b={}", basis.a, basis.b)
}

pub fn check_symmetry_table(basis: &SymmetryBasis, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let relation: Vec<String> = COMMUTATORS.iter().map(|&(i, j, c)| describe(i, j, c)).collect();
    let mut report = CheckReport::new(format!("symmetry/{}", label(basis)), relation.join("; "), tol);
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.time_space();
        match table_at(basis, pt) {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}

/// `δ = ξ_i η_j − ξ_j η_i` for the pairs `(Y1,Y3)`, `(Y1,Y5)`, `(Y2,Y6)`, `(Y1,Y2)`.
pub fn subalgebra_determinants(basis: &SymmetryBasis, pt: [f64; 2]) -> Result<[f64; 4]> {
    let y = basis.generators(pt)?;
    let det = |i: usize, j: usize| y[i - 1][0] * y[j - 1][1] - y[j - 1][0] * y[i - 1][1];
    Ok([det(1, 3), det(1, 5), det(2, 6), det(1, 2)])
}

pub fn check_subalgebra_determinants(a: &CoefficientFunction, b: &CoefficientFunction, pt: [f64; 2]) -> Result<[f64; 4]> {
    subalgebra_determinants(&SymmetryBasis::new(*a, *b), pt)
}

/// Expected `δ` values: `−e^{A}e^{−B}`, `0`, `−e^{A}e^{−B}F²`, `0`. The
/// nonzero ones are also required to stay away from zero.
pub fn check_delta_patterns(basis: &SymmetryBasis, n_points: usize, seed: u64, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(
        format!("delta/{}", label(basis)),
        "delta(Y1,Y3) = -e^A e^-B != 0; delta(Y1,Y5) = 0; delta(Y2,Y6) = -e^A e^-B F^2 != 0; delta(Y1,Y2) = 0",
        tol,
    );
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_points {
        let pt = sampler.time_space();
        let [t, x] = pt;
        let eval = || -> Result<(Vec<f64>, Vec<f64>)> {
            let d = subalgebra_determinants(basis, pt)?;
            let base = -(basis.big_a(x)? - basis.big_b(t)?).exp();
            let f = basis.inner_x(x)?;
            let nonzero = d[0] != 0.0 && (f == 0.0 || d[2] != 0.0);
            let mut lhs = d.to_vec();
            let mut rhs = vec![base, 0.0, base * f * f, 0.0];
            // a vanishing "nonzero" determinant is flagged as a unit error
            lhs.push(if nonzero { 0.0 } else { 1.0 });
            rhs.push(0.0);
            Ok((lhs, rhs))
        };
        match eval() {
            Ok((lhs, rhs)) => report.record(&pt, &lhs, &rhs),
            Err(e) => report.record_error(&pt, &e),
        }
    }
    report
}

/// Largest deviation of the table under shifted base points, per relation.
pub fn base_point_sensitivity(
    a: &CoefficientFunction,
    b: &CoefficientFunction,
    shifts: &[(f64, f64)],
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Vec<CheckReport> {
    shifts
        .iter()
        .map(|&(dx, dt)| {
            let basis = SymmetryBasis::new(*a, *b).with_offsets(dx, dt);
            let mut r = check_symmetry_table(&basis, n_points, seed, tol);
            r.name = format!("{} shift=({dx},{dt})", r.name);
            r
        })
        .collect()
}
