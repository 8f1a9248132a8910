//! Adaptive Dormand–Prince 5(4) integration, used as an independent oracle
//! for the closed-form solutions.

mod dopri5;
mod residual;

pub use residual::{second_order_residual, SecondOrderEq};

use crate::error::{Error, Result};
use dopri5::*;
use serde::{Deserialize, Serialize};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Unbounded when `None`.
    pub max_step: Option<f64>,
    pub min_step: f64,
    pub dense_output: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
            min_step: 0.0,
            dense_output: false,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn dense(mut self) -> Self {
        self.dense_output = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("rel_tol must be positive", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol must be positive", self.abs_tol));
        }
        if let Some(m) = self.max_step {
            if !(m > 0.0) {
                return Err(Error::domain("max_step must be positive", m));
            }
        }
        if !(self.min_step >= 0.0) {
            return Err(Error::domain("min_step must be non-negative", self.min_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

/// Interpolant over one accepted step.
#[derive(Debug, Clone)]
struct DenseSegment {
    t0: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.r;
        (0..r1.len())
            .map(|i| r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i]))))
            .collect()
    }
}

/// Accepted steps of one integration. Times are strictly monotone in the
/// direction of integration (increasing for forward runs).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
    dense: Vec<DenseSegment>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn final_t(&self) -> f64 {
        *self.t.last().expect("trajectory holds its initial sample")
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds its initial sample")
    }

    /// One state component along the trajectory.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    pub fn has_dense_output(&self) -> bool {
        !self.dense.is_empty() || self.t.len() == 1
    }

    /// Dense-output state at `t`, which must lie in the integrated range.
    pub fn interpolate(&self, t: f64) -> Result<Vec<f64>> {
        if self.t.len() == 1 && t == self.t[0] {
            return Ok(self.states[0].clone());
        }
        if self.dense.is_empty() {
            return Err(Error::InvalidSpec(
                "trajectory was integrated without dense output".into(),
            ));
        }
        let first = self.t[0];
        let last = self.final_t();
        let dir = (last - first).signum();
        if (t - first) * dir < 0.0 || (t - last) * dir > 0.0 || !t.is_finite() {
            return Err(Error::domain("time outside the integrated range", t));
        }
        // first segment whose right end reaches t
        let idx = self.t[1..].partition_point(|&s| (s - t) * dir < 0.0);
        let seg = &self.dense[idx.min(self.dense.len() - 1)];
        if t == self.t[idx + 1] {
            return Ok(self.states[idx + 1].clone());
        }
        Ok(seg.eval(t))
    }

    pub fn interpolate_many(&self, times: &[f64]) -> Result<Vec<Vec<f64>>> {
        times.iter().map(|&t| self.interpolate(t)).collect()
    }
}

fn weighted_rms(v: &[f64], y0: &[f64], y1: &[f64], cfg: &IntegratorConfig) -> f64 {
    let n = v.len() as f64;
    let sum: f64 = v
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(&e, (&a, &b))| {
            let sk = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            (e / sk).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for &(c, k) in terms {
        if c != 0.0 {
            for (o, &ki) in out.iter_mut().zip(k) {
                *o += h * c * ki;
            }
        }
    }
    out
}

fn checked<F>(rhs: &mut F, t: f64, y: &[f64]) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let k = rhs(t, y)?;
    if k.len() != y.len() {
        return Err(Error::InvalidSpec(format!(
            "rhs returned {} components for a {}-dimensional state",
            k.len(),
            y.len()
        )));
    }
    if !all_finite(&k) {
        return Err(Error::domain("non-finite derivative", t));
    }
    Ok(k)
}

fn initial_step<F>(rhs: &mut F, t0: f64, y0: &[f64], f0: &[f64], span: f64, cfg: &IntegratorConfig) -> f64
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let d0 = weighted_rms(y0, y0, y0, cfg);
    let d1 = weighted_rms(f0, y0, y0, cfg);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span.abs());
    let dir = span.signum();
    let y1 = axpy(y0, h0 * dir, &[(1.0, f0)]);
    let h1 = match checked(rhs, t0 + h0 * dir, &y1) {
        Ok(f1) => {
            let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
            let d2 = weighted_rms(&diff, y0, y0, cfg) / h0;
            let m = d1.max(d2);
            if m <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / m).powf(0.2)
            }
        }
        Err(_) => h0 * 1e-3,
    };
    let mut h = (100.0 * h0).min(h1).min(span.abs());
    if let Some(m) = cfg.max_step {
        h = h.min(m);
    }
    h
}

/// Integrate `rhs(t, state)` from `t0` to `t1`, returning the trajectory up to
/// the point of failure together with the error that stopped it, if any.
pub fn integrate_partial<F>(
    mut rhs: F,
    s0: &[f64],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> (Trajectory, Option<Error>)
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let mut traj = Trajectory {
        t: vec![t0],
        states: vec![s0.to_vec()],
        meta: TrajectoryMeta {
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            steps_accepted: 0,
            steps_rejected: 0,
        },
        dense: Vec::new(),
    };
    if let Err(e) = cfg.validate() {
        return (traj, Some(e));
    }
    if !t0.is_finite() || !t1.is_finite() || t0 == t1 {
        return (traj, Some(Error::domain("integration needs finite t0 != t1", t1 - t0)));
    }
    if s0.is_empty() || !all_finite(s0) {
        return (traj, Some(Error::domain("initial state must be finite", t0)));
    }
    let mut k1 = match checked(&mut rhs, t0, s0) {
        Ok(k) => k,
        Err(e) => return (traj, Some(e)),
    };

    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut y = s0.to_vec();
    let mut h = initial_step(&mut rhs, t0, s0, &k1, t1 - t0, cfg);
    let mut last_rejected = false;

    loop {
        if (t1 - t) * dir <= 0.0 {
            return (traj, None);
        }
        if traj.meta.steps_accepted + traj.meta.steps_rejected >= MAX_STEPS {
            log::warn!("step budget exhausted at t = {t}");
            return (traj, Some(Error::StepUnderflow { t }));
        }
        if let Some(m) = cfg.max_step {
            h = h.min(m);
        }
        let remaining = (t1 - t).abs();
        let last_step = h >= remaining;
        if last_step {
            h = remaining;
        }
        let floor = cfg.min_step.max(16.0 * f64::EPSILON * t.abs());
        if h < floor {
            log::debug!("step underflow at t = {t} (h = {h:e})");
            return (traj, Some(Error::StepUnderflow { t }));
        }
        let hs = h * dir;

        let stages = (|| -> Result<_> {
            let k2 = checked(&mut rhs, t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = checked(&mut rhs, t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = checked(
                &mut rhs,
                t + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = checked(
                &mut rhs,
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let t_new = if last_step { t1 } else { t + hs };
            let k6 = checked(
                &mut rhs,
                t_new,
                &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            if !all_finite(&y_new) {
                return Err(Error::domain("non-finite state", t_new));
            }
            let k7 = checked(&mut rhs, t_new, &y_new)?;
            Ok((k2, k3, k4, k5, k6, k7, y_new, t_new))
        })();

        let (_k2, k3, k4, k5, k6, k7, y_new, t_new) = match stages {
            Ok(s) => s,
            Err(e) => {
                log::trace!("rejecting step at t = {t}: {e}");
                traj.meta.steps_rejected += 1;
                last_rejected = true;
                h *= MIN_FACTOR;
                continue;
            }
        };

        let err_vec: Vec<f64> = (0..y.len())
            .map(|i| hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]))
            .collect();
        let err = weighted_rms(&err_vec, &y, &y_new, cfg);

        if err <= 1.0 {
            if cfg.dense_output {
                let r2: Vec<f64> = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
                let r3: Vec<f64> = (0..y.len()).map(|i| hs * k1[i] - r2[i]).collect();
                let r4: Vec<f64> = (0..y.len()).map(|i| r2[i] - hs * k7[i] - r3[i]).collect();
                let r5: Vec<f64> = (0..y.len())
                    .map(|i| {
                        hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    })
                    .collect();
                traj.dense.push(DenseSegment {
                    t0: t,
                    h: hs,
                    r: [y.clone(), r2, r3, r4, r5],
                });
            }
            traj.meta.steps_accepted += 1;
            t = t_new;
            y = y_new;
            k1 = k7;
            traj.t.push(t);
            traj.states.push(y.clone());

            let mut fac = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h *= fac;
        } else {
            traj.meta.steps_rejected += 1;
            last_rejected = true;
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }
}

pub fn integrate<F>(rhs: F, s0: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    match integrate_partial(rhs, s0, t0, t1, cfg) {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// Adapter for two-dimensional right-hand sides such as [`crate::lhsystems::rhs`].
pub fn planar<F>(mut f: F) -> impl FnMut(f64, &[f64]) -> Result<Vec<f64>>
where
    F: FnMut(f64, [f64; 2]) -> Result<[f64; 2]>,
{
    move |t, s| {
        let [a, b]: [f64; 2] = s
            .try_into()
            .map_err(|_| Error::InvalidSpec("planar rhs needs a two-dimensional state".into()))?;
        Ok(f(t, [a, b])?.to_vec())
    }
}
