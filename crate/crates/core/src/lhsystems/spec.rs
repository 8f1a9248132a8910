use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::CoefficientFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    /// Book algebra, generators 1 and 2.
    B2,
    /// Oscillator algebra, generators 1, 2, 3 and the central 0.
    H4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Canonical,
    Buchdahl,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawSpec {
    algebra: Algebra,
    #[serde(default)]
    z: f64,
    chart: Chart,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<CoefficientFunction>,
    b1: CoefficientFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b2: Option<CoefficientFunction>,
    #[serde(default = "default_t_ref")]
    t_ref: f64,
}

fn default_t_ref() -> f64 {
    1.0
}

/// One of the eight system variants: algebra × deformed/undeformed × chart.
///
/// Fields are private so that every instance has passed [`SystemSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct SystemSpec {
    algebra: Algebra,
    z: f64,
    chart: Chart,
    a: Option<CoefficientFunction>,
    b1: CoefficientFunction,
    b2: Option<CoefficientFunction>,
    t_ref: f64,
}

impl TryFrom<RawSpec> for SystemSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        SystemSpec::new(raw.algebra, raw.z, raw.chart, raw.a, raw.b1, raw.b2, raw.t_ref)
    }
}

impl From<SystemSpec> for RawSpec {
    fn from(s: SystemSpec) -> Self {
        RawSpec {
            algebra: s.algebra,
            z: s.z,
            chart: s.chart,
            a: s.a,
            b1: s.b1,
            b2: s.b2,
            t_ref: s.t_ref,
        }
    }
}

impl SystemSpec {
    pub fn new(
        algebra: Algebra,
        z: f64,
        chart: Chart,
        a: Option<CoefficientFunction>,
        b1: CoefficientFunction,
        b2: Option<CoefficientFunction>,
        t_ref: f64,
    ) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::InvalidSpec(format!("deformation z = {z} is not finite")));
        }
        if !t_ref.is_finite() {
            return Err(Error::InvalidSpec(format!("t_ref = {t_ref} is not finite")));
        }
        if algebra == Algebra::B2 && b2.is_some() {
            return Err(Error::InvalidSpec("b2 systems take no b2 coefficient".into()));
        }
        if algebra == Algebra::H4 && b2.is_none() {
            return Err(Error::InvalidSpec("h4 systems need a b2 coefficient".into()));
        }
        if chart == Chart::Buchdahl && a.is_none() {
            return Err(Error::InvalidSpec("the Buchdahl chart needs a coefficient a(x)".into()));
        }
        Ok(SystemSpec {
            algebra,
            z,
            chart,
            a,
            b1,
            b2,
            t_ref,
        })
    }

    pub fn b2_canonical(z: f64, b: CoefficientFunction) -> Self {
        Self::new(Algebra::B2, z, Chart::Canonical, None, b, None, 1.0).expect("valid by construction")
    }

    pub fn b2_buchdahl(z: f64, a: CoefficientFunction, b: CoefficientFunction) -> Self {
        Self::new(Algebra::B2, z, Chart::Buchdahl, Some(a), b, None, 1.0).expect("valid by construction")
    }

    pub fn h4_canonical(z: f64, b1: CoefficientFunction, b2: CoefficientFunction) -> Self {
        Self::new(Algebra::H4, z, Chart::Canonical, None, b1, Some(b2), 1.0).expect("valid by construction")
    }

    pub fn h4_buchdahl(
        z: f64,
        a: CoefficientFunction,
        b1: CoefficientFunction,
        b2: CoefficientFunction,
    ) -> Self {
        Self::new(Algebra::H4, z, Chart::Buchdahl, Some(a), b1, Some(b2), 1.0)
            .expect("valid by construction")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn a(&self) -> Option<&CoefficientFunction> {
        self.a.as_ref()
    }

    pub fn b1(&self) -> &CoefficientFunction {
        &self.b1
    }

    pub fn b2(&self) -> Option<&CoefficientFunction> {
        self.b2.as_ref()
    }

    pub fn t_ref(&self) -> f64 {
        self.t_ref
    }

    pub fn with_z(self, z: f64) -> Result<Self> {
        Self::new(self.algebra, z, self.chart, self.a, self.b1, self.b2, self.t_ref)
    }

    pub fn with_chart(self, chart: Chart) -> Result<Self> {
        Self::new(self.algebra, self.z, chart, self.a, self.b1, self.b2, self.t_ref)
    }

    pub fn with_t_ref(self, t_ref: f64) -> Result<Self> {
        Self::new(self.algebra, self.z, self.chart, self.a, self.b1, self.b2, t_ref)
    }

    /// The `a(x)` coefficient, required in the Buchdahl chart.
    pub(crate) fn require_a(&self) -> Result<&CoefficientFunction> {
        self.a
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("no a(x) coefficient".into()))
    }

    /// Generator ids available for this algebra.
    pub fn generator_ids(&self) -> &'static [usize] {
        match self.algebra {
            Algebra::B2 => &[1, 2],
            Algebra::H4 => &[1, 2, 3, 0],
        }
    }

    /// `(b1(t), b2(t))`, with `b2 = 0` for the book algebra.
    pub fn coefficients_at(&self, t: f64) -> Result<(f64, f64)> {
        let b1 = self.b1.eval(t)?;
        let b2 = match &self.b2 {
            Some(f) => f.eval(t)?,
            None => 0.0,
        };
        Ok((b1, b2))
    }
}

/// Point `(x, y)` of the Buchdahl chart. `y` is the velocity `dx/dt` only for
/// the undeformed book-algebra system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
}

/// Canonical coordinates `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonState {
    pub q: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleState {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl From<[f64; 2]> for PhaseState {
    fn from(v: [f64; 2]) -> Self {
        PhaseState { x: v[0], y: v[1] }
    }
}

impl From<PhaseState> for [f64; 2] {
    fn from(s: PhaseState) -> Self {
        [s.x, s.y]
    }
}

impl From<[f64; 2]> for CanonState {
    fn from(v: [f64; 2]) -> Self {
        CanonState { q: v[0], p: v[1] }
    }
}

impl From<CanonState> for [f64; 2] {
    fn from(s: CanonState) -> Self {
        [s.q, s.p]
    }
}

impl From<[f64; 4]> for TwoParticleState {
    fn from(v: [f64; 4]) -> Self {
        TwoParticleState {
            q1: v[0],
            p1: v[1],
            q2: v[2],
            p2: v[3],
        }
    }
}

impl From<TwoParticleState> for [f64; 4] {
    fn from(s: TwoParticleState) -> Self {
        [s.q1, s.p1, s.q2, s.p2]
    }
}

/// Hamiltonian functions at a point. `h3` and `h0` are `None` for the book
/// algebra; `ht = h1 + b1(t) h2 + b2(t) h3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSet {
    pub h1: f64,
    pub h2: f64,
    pub h3: Option<f64>,
    pub h0: Option<f64>,
    pub ht: f64,
}

impl HamiltonianSet {
    pub fn get(&self, id: usize) -> Option<f64> {
        match id {
            1 => Some(self.h1),
            2 => Some(self.h2),
            3 => self.h3,
            0 => self.h0,
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let json = r#"{"algebra":"h4","z":0.1,"chart":"buchdahl","a":"recip:3","b1":"recip:1","b2":"const:0.5","t_ref":1.0}"#;
        let spec = SystemSpec::from_json(json).unwrap();
        assert_eq!(spec.algebra(), Algebra::H4);
        assert_eq!(spec.chart(), Chart::Buchdahl);
        assert_eq!(spec.z(), 0.1);
        assert_eq!(spec.b2().unwrap().to_string(), "const:0.5");
        let back = SystemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn invariants_are_checked() {
        let bad_b2 = r#"{"algebra":"b2","z":0,"chart":"canonical","b1":"recip:1","b2":"zero"}"#;
        assert!(SystemSpec::from_json(bad_b2).is_err());
        let no_a = r#"{"algebra":"b2","z":0,"chart":"buchdahl","b1":"recip:1"}"#;
        assert!(SystemSpec::from_json(no_a).is_err());
        let no_b2 = r#"{"algebra":"h4","z":0,"chart":"canonical","b1":"recip:1"}"#;
        assert!(SystemSpec::from_json(no_b2).is_err());
        assert!(SystemSpec::new(
            Algebra::B2,
            f64::NAN,
            Chart::Canonical,
            None,
            CoefficientFunction::zero(),
            None,
            1.0
        )
        .is_err());
    }
}
