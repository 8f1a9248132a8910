use serde::{Deserialize, Serialize};

/// Failures kept per report; the error maximum still covers every point.
const MAX_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub point: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub relation: String,
    pub points: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, relation: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            relation: relation.into(),
            points: 0,
            max_abs_error: 0.0,
            tolerance,
            passed: true,
            failures: Vec::new(),
        }
    }

    /// Compare `lhs` and `rhs` componentwise at `point`.
    pub fn record(&mut self, point: &[f64], lhs: &[f64], rhs: &[f64]) {
        let err = if lhs.len() != rhs.len() {
            f64::INFINITY
        } else {
            lhs.iter()
                .zip(rhs)
                .map(|(a, b)| {
                    let d = (a - b).abs();
                    if d.is_nan() { f64::INFINITY } else { d }
                })
                .fold(0.0, f64::max)
        };
        self.push(point, lhs, rhs, err);
    }

    pub fn record_scalar(&mut self, point: &[f64], lhs: f64, rhs: f64) {
        self.record(point, &[lhs], &[rhs]);
    }

    /// Record a point whose evaluation failed outright.
    pub fn record_error(&mut self, point: &[f64], what: &crate::Error) {
        log::warn!("{}: evaluation failed at {point:?}: {what}", self.name);
        self.push(point, &[], &[], f64::INFINITY);
    }

    /// Record a precomputed error measure (used for slope checks).
    pub fn record_measure(&mut self, point: &[f64], value: f64, target: f64) {
        let err = (value - target).abs();
        self.push(point, &[value], &[target], if err.is_nan() { f64::INFINITY } else { err });
    }

    fn push(&mut self, point: &[f64], lhs: &[f64], rhs: &[f64], err: f64) {
        self.points += 1;
        if err > self.max_abs_error {
            self.max_abs_error = err;
        }
        if !(err <= self.tolerance) {
            self.passed = false;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(Failure {
                    point: point.to_vec(),
                    lhs: lhs.to_vec(),
                    rhs: rhs.to_vec(),
                });
            }
        }
    }
}

/// Reports of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64, reports: Vec<CheckReport>) -> Self {
        let passed = reports.iter().all(|r| r.passed);
        Self {
            suite: suite.into(),
            seed,
            passed,
            reports,
        }
    }
}
