use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Open interval `(lo, hi)` on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainWindow {
    pub lo: f64,
    pub hi: f64,
}

impl DomainWindow {
    pub const REAL_LINE: DomainWindow = DomainWindow {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const POSITIVE: DomainWindow = DomainWindow {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    pub const NEGATIVE: DomainWindow = DomainWindow {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidSpec(format!("empty window ({lo}, {hi})")));
        }
        Ok(DomainWindow { lo, hi })
    }

    pub fn contains(&self, s: f64) -> bool {
        s > self.lo && s < self.hi
    }

    /// Both endpoints inside, hence the whole closed segment.
    pub fn contains_segment(&self, a: f64, b: f64) -> bool {
        self.contains(a) && self.contains(b)
    }

    fn includes_zero(&self) -> bool {
        self.contains(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Constant(f64),
    /// `alpha / s`
    Reciprocal(f64),
    /// `alpha * s^r`
    Monomial { alpha: f64, r: f64 },
    Zero,
}

/// A coefficient `a(x)`, `b(t)`, `b1(t)` or `b2(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientFunction {
    pub family: Family,
    pub window: DomainWindow,
}

fn is_integer(v: f64) -> bool {
    v.is_finite() && v.fract() == 0.0 && v.abs() < 2f64.powi(31)
}

/// `s^e`, using integer powers where possible so that negative `s` is
/// evaluated literally.
pub(crate) fn pow_literal(s: f64, e: f64) -> f64 {
    if is_integer(e) {
        s.powi(e as i32)
    } else {
        s.powf(e)
    }
}

impl CoefficientFunction {
    pub fn constant(c: f64) -> Self {
        Self::with_default_window(Family::Constant(c))
    }

    pub fn reciprocal(alpha: f64) -> Self {
        Self::with_default_window(Family::Reciprocal(alpha))
    }

    pub fn monomial(alpha: f64, r: f64) -> Self {
        Self::with_default_window(Family::Monomial { alpha, r })
    }

    pub fn zero() -> Self {
        Self::with_default_window(Family::Zero)
    }

    /// `-f` on the same window.
    pub fn negated(&self) -> Self {
        let family = match self.family {
            Family::Constant(c) => Family::Constant(-c),
            Family::Reciprocal(alpha) => Family::Reciprocal(-alpha),
            Family::Monomial { alpha, r } => Family::Monomial { alpha: -alpha, r },
            Family::Zero => Family::Zero,
        };
        Self { family, window: self.window }
    }

    pub fn with_default_window(family: Family) -> Self {
        let window = match family {
            Family::Constant(_) | Family::Zero => DomainWindow::REAL_LINE,
            Family::Reciprocal(_) => DomainWindow::POSITIVE,
            Family::Monomial { r, .. } if is_integer(r) && r >= 0.0 => DomainWindow::REAL_LINE,
            Family::Monomial { .. } => DomainWindow::POSITIVE,
        };
        CoefficientFunction { family, window }
    }

    /// Replaces the window after checking it against the family's
    /// singularities and branch cuts.
    pub fn with_window(self, window: DomainWindow) -> Result<Self> {
        let singular_at_zero = match self.family {
            Family::Reciprocal(_) => true,
            Family::Monomial { r, .. } => r < 0.0,
            _ => false,
        };
        if singular_at_zero && window.includes_zero() {
            return Err(Error::InvalidSpec(format!(
                "window ({}, {}) contains the singular point 0 of {}",
                window.lo, window.hi, self
            )));
        }
        // Negative arguments need integer exponents in both the family and
        // its antiderivative.
        let real_on_negatives = match self.family {
            Family::Reciprocal(alpha) => is_integer(alpha),
            Family::Monomial { r, .. } => is_integer(r),
            _ => true,
        };
        if !real_on_negatives && window.lo < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "{} is only real on positive arguments",
                self
            )));
        }
        Ok(CoefficientFunction { window, ..self })
    }

    pub fn is_zero(&self) -> bool {
        match self.family {
            Family::Zero => true,
            Family::Constant(c) | Family::Reciprocal(c) => c == 0.0,
            Family::Monomial { alpha, .. } => alpha == 0.0,
        }
    }

    /// Value is independent of the argument.
    pub fn is_constant(&self) -> bool {
        matches!(self.family, Family::Constant(_) | Family::Zero)
            || self.is_zero()
            || matches!(self.family, Family::Monomial { r, .. } if r == 0.0)
    }

    fn check(&self, s: f64) -> Result<()> {
        if self.window.contains(s) {
            Ok(())
        } else {
            Err(Error::domain(
                format!("{} evaluated outside ({}, {})", self, self.window.lo, self.window.hi),
                s,
            ))
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.eval_unchecked(s))
    }

    pub(crate) fn eval_unchecked(&self, s: f64) -> f64 {
        match self.family {
            Family::Constant(c) => c,
            Family::Reciprocal(alpha) => alpha / s,
            Family::Monomial { alpha, r } => alpha * pow_literal(s, r),
            Family::Zero => 0.0,
        }
    }

    pub fn derivative(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(match self.family {
            Family::Constant(_) | Family::Zero => 0.0,
            Family::Reciprocal(alpha) => -alpha / (s * s),
            Family::Monomial { alpha, r } => {
                if r == 0.0 {
                    0.0
                } else {
                    alpha * r * pow_literal(s, r - 1.0)
                }
            }
        })
    }

    /// Canonical antiderivative (no additive constant).
    pub fn antiderivative(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.antiderivative_unchecked(s))
    }

    pub(crate) fn antiderivative_unchecked(&self, s: f64) -> f64 {
        match self.family {
            Family::Constant(c) => c * s,
            Family::Reciprocal(alpha) => alpha * s.abs().ln(),
            Family::Monomial { alpha, r } if r == -1.0 => alpha * s.abs().ln(),
            Family::Monomial { alpha, r } => alpha * pow_literal(s, r + 1.0) / (r + 1.0),
            Family::Zero => 0.0,
        }
    }

    /// `∫_{from}^{to}` of the coefficient, computed without cancellation for
    /// the logarithmic families.
    pub fn integral(&self, from: f64, to: f64) -> Result<f64> {
        self.check(from)?;
        self.check(to)?;
        Ok(match self.family {
            Family::Reciprocal(alpha) => alpha * (to / from).ln(),
            Family::Monomial { alpha, r } if r == -1.0 => alpha * (to / from).ln(),
            Family::Constant(c) => c * (to - from),
            _ => self.antiderivative_unchecked(to) - self.antiderivative_unchecked(from),
        })
    }
}

impl fmt::Display for CoefficientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Constant(c) => write!(f, "const:{c}"),
            Family::Reciprocal(alpha) => write!(f, "recip:{alpha}"),
            Family::Monomial { alpha, r } => write!(f, "mono:{alpha}:{r}"),
            Family::Zero => write!(f, "zero"),
        }
    }
}

impl FromStr for CoefficientFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| -> Result<f64> {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{p}' in coefficient '{s}'")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("non-finite parameter in coefficient '{s}'")))
            }
        };
        let family = match parts.as_slice() {
            ["zero"] => Family::Zero,
            ["const", c] => Family::Constant(num(c)?),
            ["recip", a] => Family::Reciprocal(num(a)?),
            ["mono", a, r] => Family::Monomial {
                alpha: num(a)?,
                r: num(r)?,
            },
            _ => {
                return Err(Error::Parse(format!(
                    "unknown coefficient '{s}' (expected const:<c>, recip:<alpha>, mono:<alpha>:<r> or zero)"
                )))
            }
        };
        Ok(Self::with_default_window(family))
    }
}

impl Serialize for CoefficientFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoefficientFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_families() {
        assert_eq!(CoefficientFunction::reciprocal(3.0).eval(2.0).unwrap(), 1.5);
        assert_eq!(CoefficientFunction::constant(2.0).eval(7.0).unwrap(), 2.0);
        assert_eq!(CoefficientFunction::monomial(2.0, 1.0).eval(3.0).unwrap(), 6.0);
        assert_eq!(CoefficientFunction::zero().eval(-4.0).unwrap(), 0.0);
    }

    #[test]
    fn window_is_enforced() {
        let f = CoefficientFunction::reciprocal(1.0);
        assert!(matches!(f.eval(0.0), Err(Error::DomainViolation { .. })));
        assert!(f.eval(-1.0).is_err());
        let neg = f.with_window(DomainWindow::NEGATIVE).unwrap();
        assert_eq!(neg.eval(-2.0).unwrap(), -0.5);
        assert!(f.with_window(DomainWindow::REAL_LINE).is_err());
        assert!(CoefficientFunction::reciprocal(0.5)
            .with_window(DomainWindow::NEGATIVE)
            .is_err());
        assert!(DomainWindow::new(1.0, 1.0).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["const:2", "recip:3", "mono:2:1", "mono:-0.5:-2.5", "zero", "const:0.2"] {
            let f: CoefficientFunction = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("recip".parse::<CoefficientFunction>().is_err());
        assert!("poly:1".parse::<CoefficientFunction>().is_err());
        assert!("const:nan".parse::<CoefficientFunction>().is_err());
    }

    #[test]
    fn serde_uses_compact_strings() {
        let f = CoefficientFunction::monomial(1.5, -2.0);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "\"mono:1.5:-2\"");
        let back: CoefficientFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let fs = [
            CoefficientFunction::reciprocal(2.5),
            CoefficientFunction::monomial(1.5, 2.5),
            CoefficientFunction::constant(-1.0),
        ];
        for f in fs {
            let s = 1.7;
            let h = 1e-5;
            let fd = (f.eval(s + h).unwrap() - f.eval(s - h).unwrap()) / (2.0 * h);
            assert!((f.derivative(s).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn integral_matches_antiderivative_difference() {
        let f = CoefficientFunction::monomial(2.0, 1.0);
        assert!((f.integral(1.0, 3.0).unwrap() - 8.0).abs() < 1e-15);
        let g = CoefficientFunction::reciprocal(1.0);
        assert!((g.integral(1.0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
    }
}
