//! Young functions for Orlicz spaces.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Callable Young function: nondecreasing, convex, `φ(0) = 0`, `φ(s) → ∞`.
pub type YoungFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The registered Young function families.
#[derive(Clone)]
pub enum YoungKind {
    /// `φ(s) = s^p`.
    Power { p: f64 },
    /// `φ(s) = s^p · ln(1 + s)`, admissible for `p ≥ 1`.
    PowerLog { p: f64 },
    /// A user-supplied function. Not serializable.
    Custom { name: String, f: YoungFn },
}

/// A Young function composed with an inner power: `s ↦ φ(s^inner)`.
///
/// The inner power is what the `r`-th power of an Orlicz space acts on:
/// `L_φ^r = L_{φ(s^{1/r})}`.
#[derive(Clone)]
pub struct YoungFunction {
    pub kind: YoungKind,
    pub inner: f64,
}

impl YoungFunction {
    pub fn power(p: f64) -> Self {
        Self { kind: YoungKind::Power { p }, inner: 1.0 }
    }

    pub fn power_log(p: f64) -> Self {
        Self { kind: YoungKind::PowerLog { p }, inner: 1.0 }
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: YoungKind::Custom { name: name.into(), f: Arc::new(f) },
            inner: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inner.is_finite() && self.inner > 0.0) {
            return Err(Error::InvalidExponent { value: self.inner, reason: "inner power must be in (0, ∞)" });
        }
        match &self.kind {
            YoungKind::Power { p } if !(p.is_finite() && *p > 0.0) => {
                Err(Error::InvalidExponent { value: *p, reason: "power Young function needs 0 < p < ∞" })
            }
            YoungKind::PowerLog { p } if !(p.is_finite() && *p >= 1.0) => {
                Err(Error::InvalidExponent { value: *p, reason: "power-log Young function needs 1 ≤ p < ∞" })
            }
            _ => Ok(()),
        }
    }

    /// `φ(s^inner)` for `s ≥ 0`; `φ(0) = 0`.
    pub fn eval(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let s = if self.inner == 1.0 { s } else { s.powf(self.inner) };
        match &self.kind {
            YoungKind::Power { p } => s.powf(*p),
            YoungKind::PowerLog { p } => s.powf(*p) * s.ln_1p(),
            YoungKind::Custom { f, .. } => f(s),
        }
    }

    /// `s ↦ φ(s^{inner/r})`.
    pub fn with_inner_power(&self, r: f64) -> Self {
        Self { kind: self.kind.clone(), inner: self.inner / r }
    }

    /// Exponent `t` for which the Luxemburg functional satisfies the
    /// `t`-triangle inequality with constant one.
    pub fn declared_t(&self) -> f64 {
        match &self.kind {
            YoungKind::Power { p } => p * self.inner,
            _ => self.inner,
        }
    }

    /// For `φ(s) = s^p` the Luxemburg norm is the `L_{p·inner}` norm.
    pub fn as_lp_exponent(&self) -> Option<f64> {
        match &self.kind {
            YoungKind::Power { p } => Some(p * self.inner),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            YoungKind::Power { p } => format!("s^{p}"),
            YoungKind::PowerLog { p } => format!("s^{p}·ln(1+s)"),
            YoungKind::Custom { name, .. } => name.clone(),
        };
        if self.inner == 1.0 {
            base
        } else {
            format!("({base})∘s^{}", self.inner)
        }
    }
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungFunction({})", self.name())
    }
}

impl PartialEq for YoungFunction {
    fn eq(&self, other: &Self) -> bool {
        let same_kind = match (&self.kind, &other.kind) {
            (YoungKind::Power { p: a }, YoungKind::Power { p: b }) => a == b,
            (YoungKind::PowerLog { p: a }, YoungKind::PowerLog { p: b }) => a == b,
            (YoungKind::Custom { name: a, f: fa }, YoungKind::Custom { name: b, f: fb }) => {
                a == b && Arc::ptr_eq(fa, fb)
            }
            _ => false,
        };
        same_kind && self.inner == other.inner
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum YoungRepr {
    Power {
        p: f64,
        #[serde(default = "one")]
        inner: f64,
    },
    PowerLog {
        p: f64,
        #[serde(default = "one")]
        inner: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Serialize for YoungFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.kind {
            YoungKind::Power { p } => YoungRepr::Power { p: *p, inner: self.inner },
            YoungKind::PowerLog { p } => YoungRepr::PowerLog { p: *p, inner: self.inner },
            YoungKind::Custom { name, .. } => {
                return Err(serde::ser::Error::custom(format!(
                    "custom Young function `{name}` has no JSON encoding"
                )))
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for YoungFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let young = match YoungRepr::deserialize(d)? {
            YoungRepr::Power { p, inner } => YoungFunction { kind: YoungKind::Power { p }, inner },
            YoungRepr::PowerLog { p, inner } => YoungFunction { kind: YoungKind::PowerLog { p }, inner },
        };
        young.validate().map_err(serde::de::Error::custom)?;
        Ok(young)
    }
}
