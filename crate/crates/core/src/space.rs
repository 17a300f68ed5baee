//! Descriptors for quasi-Köthe function spaces on a finite measure and
//! their norm oracles.
//!
//! A [`SpaceDescriptor`] is a pure description; [`SpaceDescriptor::norm`]
//! evaluates it against a measure and a vector of atom values. Exponents may
//! be `f64::INFINITY`, which always takes the `sup` code path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{pow_abs, DiscreteMeasure, LatticeFunction};
use crate::rearrangement::rearrange;
use crate::young::YoungFunction;

/// Relative tolerance of the Luxemburg bisection.
pub const ORLICZ_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDescriptor {
    Lp {
        #[serde(with = "exponent")]
        p: f64,
    },
    /// Iterated norm on a product of two measures, atoms in row-major order
    /// (`mu1` indexes rows, `mu2` columns; `p2` is applied first).
    MixedNorm {
        #[serde(with = "exponent")]
        p1: f64,
        #[serde(with = "exponent")]
        p2: f64,
        mu1: DiscreteMeasure,
        mu2: DiscreteMeasure,
    },
    /// `‖f‖_{p,q} = (∫ (t^{1/p} f*(t))^q dt/t)^{1/q}`.
    Lorentz {
        p: f64,
        #[serde(with = "exponent")]
        q: f64,
    },
    /// Luxemburg norm `inf{λ > 0 : ∫ φ(|x|/λ) dμ ≤ 1}`.
    Orlicz { phi: YoungFunction },
    /// `‖x‖_{X^r} = ‖ |x|^{1/r} ‖_X^r`.
    Power { base: Box<SpaceDescriptor>, r: f64 },
    /// Köthe dual; only evaluable when a closed form is registered.
    Dual { base: Box<SpaceDescriptor> },
}

impl SpaceDescriptor {
    pub fn lp(p: f64) -> Self {
        Self::Lp { p }
    }

    pub fn lorentz(p: f64, q: f64) -> Self {
        Self::Lorentz { p, q }
    }

    pub fn orlicz(phi: YoungFunction) -> Self {
        Self::Orlicz { phi }
    }

    pub fn mixed(p1: f64, p2: f64, mu1: DiscreteMeasure, mu2: DiscreteMeasure) -> Self {
        Self::MixedNorm { p1, p2, mu1, mu2 }
    }

    /// The unsimplified `r`-th power; its norm is evaluated by definition.
    pub fn power(self, r: f64) -> Self {
        Self::Power { base: Box::new(self), r }
    }

    pub fn dual(self) -> Self {
        Self::Dual { base: Box::new(self) }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(v: f64, allow_inf: bool, reason: &'static str) -> Result<()> {
            let ok = v > 0.0 && (v.is_finite() || (allow_inf && v == f64::INFINITY));
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidExponent { value: v, reason })
            }
        }
        match self {
            Self::Lp { p } => positive(*p, true, "Lp needs p in (0, ∞]"),
            Self::MixedNorm { p1, p2, .. } => {
                positive(*p1, true, "mixed norm needs p1 in (0, ∞]")?;
                positive(*p2, true, "mixed norm needs p2 in (0, ∞]")
            }
            Self::Lorentz { p, q } => {
                positive(*p, false, "Lorentz needs p in (0, ∞)")?;
                positive(*q, true, "Lorentz needs q in (0, ∞]")
            }
            Self::Orlicz { phi } => phi.validate(),
            Self::Power { base, r } => {
                positive(*r, false, "power exponent must be in (0, ∞)")?;
                base.validate()
            }
            Self::Dual { base } => {
                base.validate()?;
                resolve_dual(base).map(|_| ())
            }
        }
    }

    /// Evaluates the quasi-norm of `x` on `mu`.
    pub fn norm(&self, mu: &DiscreteMeasure, x: &[f64]) -> Result<f64> {
        mu.check_len(x)?;
        self.validate()?;
        self.eval(mu, x)
    }

    pub fn norm_of(&self, x: &LatticeFunction) -> Result<f64> {
        self.norm(x.measure(), x.values())
    }

    /// Norm evaluation without re-validating the descriptor.
    pub(crate) fn eval(&self, mu: &DiscreteMeasure, x: &[f64]) -> Result<f64> {
        match self {
            Self::Lp { p } => Ok(lp_norm(mu.weights(), x, *p)),
            Self::MixedNorm { p1, p2, mu1, mu2 } => mixed_norm(mu, x, *p1, *p2, mu1, mu2),
            Self::Lorentz { p, q } => Ok(lorentz_norm(mu, x, *p, *q)),
            Self::Orlicz { phi } => luxemburg_norm(mu, x, phi),
            Self::Power { base, r } => {
                let root: Vec<f64> = x.iter().map(|v| pow_abs(*v, 1.0 / r)).collect();
                Ok(pow_abs(base.eval(mu, &root)?, *r))
            }
            Self::Dual { base } => resolve_dual(base)?.eval(mu, x),
        }
    }

    /// Recursively applies the registered simplification rules.
    pub fn simplified(&self) -> Self {
        match self {
            Self::Power { base, r } => power_space(&base.simplified(), *r).unwrap_or_else(|_| self.clone()),
            Self::Dual { base } => resolve_dual(base).unwrap_or_else(|_| self.clone()),
            other => other.clone(),
        }
    }

    /// `t` such that `‖(|x|^t+|y|^t)^{1/t}‖ ≤ (‖x‖^t+‖y‖^t)^{1/t}`, when
    /// one is known for this exact functional.
    ///
    /// Lorentz functionals with `q > p` satisfy that inequality only up to a
    /// constant, so no exponent is declared for them.
    pub fn declared_t(&self) -> Option<f64> {
        match self {
            Self::Lp { p } => Some(if p.is_finite() { *p } else { 1.0 }),
            Self::MixedNorm { p1, p2, .. } => {
                let m = p1.min(*p2);
                Some(if m.is_finite() { m } else { 1.0 })
            }
            Self::Lorentz { p, q } => (q <= p).then_some(*q),
            Self::Orlicz { phi } => Some(phi.declared_t()),
            Self::Power { base, r } => base.declared_t().map(|t| t / r),
            Self::Dual { base } => resolve_dual(base).ok().map(|_| 1.0),
        }
    }

    /// Exact best `r`-convexity constant on `n_atoms` atoms, when registered.
    pub fn registered_convexity(&self, r: f64, n_atoms: usize) -> Option<f64> {
        let n = n_atoms as f64;
        match self {
            Self::Lp { p } => Some(n.powf((1.0 / p - 1.0 / r).max(0.0))),
            Self::MixedNorm { p1, p2, .. } => (r <= p1.min(*p2)).then_some(1.0),
            Self::Lorentz { p, q } => (q <= p && r <= *q).then_some(1.0),
            Self::Orlicz { phi } => match phi.as_lp_exponent() {
                Some(p) => Self::Lp { p }.registered_convexity(r, n_atoms),
                None => (r <= phi.declared_t()).then_some(1.0),
            },
            Self::Power { base, r: t } => base.registered_convexity(r * t, n_atoms).map(|m| m.powf(*t)),
            Self::Dual { base } => {
                let resolved = resolve_dual(base).ok()?;
                resolved.registered_convexity(r, n_atoms)
            }
        }
    }

    /// Exact best `r`-concavity constant on `n_atoms` atoms, when registered.
    pub fn registered_concavity(&self, r: f64, n_atoms: usize) -> Option<f64> {
        let n = n_atoms as f64;
        match self {
            Self::Lp { p } => Some(n.powf((1.0 / r - 1.0 / p).max(0.0))),
            Self::MixedNorm { p1, p2, .. } => (r >= p1.max(*p2)).then_some(1.0),
            Self::Lorentz { .. } => None,
            Self::Orlicz { phi } => {
                let p = phi.as_lp_exponent()?;
                Self::Lp { p }.registered_concavity(r, n_atoms)
            }
            Self::Power { base, r: t } => base.registered_concavity(r * t, n_atoms).map(|m| m.powf(*t)),
            Self::Dual { base } => {
                let resolved = resolve_dual(base).ok()?;
                resolved.registered_concavity(r, n_atoms)
            }
        }
    }

    /// `Some(p)` if the descriptor evaluates exactly as `L_p`.
    pub fn as_lp(&self) -> Option<f64> {
        match self.simplified() {
            Self::Lp { p } => Some(p),
            Self::Orlicz { phi } => phi.as_lp_exponent(),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lp { p } => write!(f, "L{p}"),
            Self::MixedNorm { p1, p2, mu1, mu2 } => {
                write!(f, "L({p1},{p2})[{}x{}]", mu1.len(), mu2.len())
            }
            Self::Lorentz { p, q } => write!(f, "L{p},{q}"),
            Self::Orlicz { phi } => write!(f, "Orlicz[{}]", phi.name()),
            Self::Power { base, r } => write!(f, "({base})^{r}"),
            Self::Dual { base } => write!(f, "({base})^x"),
        }
    }
}

/// The `r`-th power of `space`, simplified for the concrete families:
/// `L_p^r = L_{p/r}`, `L_{(p1,p2)}^r = L_{(p1/r,p2/r)}`,
/// `L_{p,q}^r = L_{p/r,q/r}` and `L_φ^r = L_{φ(s^{1/r})}`.
pub fn power_space(space: &SpaceDescriptor, r: f64) -> Result<SpaceDescriptor> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidExponent { value: r, reason: "power exponent must be in (0, ∞)" });
    }
    if r == 1.0 {
        return Ok(space.clone());
    }
    Ok(match space {
        SpaceDescriptor::Lp { p } => SpaceDescriptor::Lp { p: p / r },
        SpaceDescriptor::MixedNorm { p1, p2, mu1, mu2 } => SpaceDescriptor::MixedNorm {
            p1: p1 / r,
            p2: p2 / r,
            mu1: mu1.clone(),
            mu2: mu2.clone(),
        },
        SpaceDescriptor::Lorentz { p, q } => SpaceDescriptor::Lorentz { p: p / r, q: q / r },
        SpaceDescriptor::Orlicz { phi } => SpaceDescriptor::Orlicz { phi: phi.with_inner_power(r) },
        SpaceDescriptor::Power { base, r: inner } => return power_space(base, inner * r),
        SpaceDescriptor::Dual { base } => match resolve_dual(base) {
            Ok(resolved) => return power_space(&resolved, r),
            Err(_) => space.clone().power(r),
        },
    })
}

/// Hölder conjugate `p' = p/(p-1)` on `[1, ∞]`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Closed-form Köthe duals: `L_p ↔ L_{p'}` and `L_{(p1,p2)} ↔ L_{(p1',p2')}`
/// for exponents in `[1, ∞]`.
pub fn resolve_dual(base: &SpaceDescriptor) -> Result<SpaceDescriptor> {
    let unsupported = || Error::UnsupportedDual(base.to_string());
    if let SpaceDescriptor::Dual { base: inner } = base {
        resolve_dual(inner)?;
        return Ok(inner.simplified());
    }
    match base.simplified() {
        SpaceDescriptor::Lp { p } if p >= 1.0 => Ok(SpaceDescriptor::Lp { p: conjugate(p) }),
        SpaceDescriptor::Orlicz { phi } => match phi.as_lp_exponent() {
            Some(p) if p >= 1.0 => Ok(SpaceDescriptor::Lp { p: conjugate(p) }),
            _ => Err(unsupported()),
        },
        SpaceDescriptor::MixedNorm { p1, p2, mu1, mu2 } if p1 >= 1.0 && p2 >= 1.0 => Ok(SpaceDescriptor::MixedNorm {
            p1: conjugate(p1),
            p2: conjugate(p2),
            mu1,
            mu2,
        }),
        _ => Err(unsupported()),
    }
}

pub(crate) fn lp_norm(mu: &[f64], x: &[f64], p: f64) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return scale;
    }
    let sum: f64 = mu
        .iter()
        .zip(x)
        .map(|(w, v)| w * pow_abs(v / scale, p))
        .sum();
    scale * sum.powf(1.0 / p)
}

fn mixed_norm(
    mu: &DiscreteMeasure,
    x: &[f64],
    p1: f64,
    p2: f64,
    mu1: &DiscreteMeasure,
    mu2: &DiscreteMeasure,
) -> Result<f64> {
    let (n1, n2) = (mu1.len(), mu2.len());
    if x.len() != n1 * n2 {
        return Err(Error::DimensionMismatch { expected: n1 * n2, got: x.len() });
    }
    let consistent = mu.weights().iter().enumerate().all(|(k, w)| {
        let expected = mu1.weights()[k / n2] * mu2.weights()[k % n2];
        (w - expected).abs() <= 1e-12 * expected.max(*w)
    });
    if !consistent {
        return Err(Error::InvalidMeasure("measure is not the product of the mixed-norm factors".into()));
    }
    let rows: Vec<f64> = x.chunks(n2).map(|row| lp_norm(mu2.weights(), row, p2)).collect();
    Ok(lp_norm(mu1.weights(), &rows, p1))
}

fn lorentz_norm(mu: &DiscreteMeasure, x: &[f64], p: f64, q: f64) -> f64 {
    let step = rearrange(mu, x);
    let scale = step.levels.first().copied().unwrap_or(0.0);
    if scale == 0.0 {
        return 0.0;
    }
    let mut left = 0.0f64;
    if q.is_infinite() {
        let mut best = 0.0f64;
        for (c, l) in step.levels.iter().zip(&step.lengths) {
            let right = left + l;
            best = best.max(c * right.powf(1.0 / p));
            left = right;
        }
        return best;
    }
    let ratio = q / p;
    let mut sum = 0.0;
    for (c, l) in step.levels.iter().zip(&step.lengths) {
        let right = left + l;
        if *c > 0.0 {
            sum += (c / scale).powf(q) * (right.powf(ratio) - left.powf(ratio));
        }
        left = right;
    }
    scale * (sum / ratio).powf(1.0 / q)
}

fn luxemburg_norm(mu: &DiscreteMeasure, x: &[f64], phi: &YoungFunction) -> Result<f64> {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let modular = |lambda: f64| -> f64 {
        mu.weights()
            .iter()
            .zip(x)
            .map(|(w, v)| w * phi.eval(v.abs() / lambda))
            .sum()
    };
    let broken = || Error::NonBracketing(phi.name());
    let mut hi = scale;
    let mut steps = 0;
    while !(modular(hi) <= 1.0) {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 || !hi.is_finite() {
            return Err(broken());
        }
    }
    let mut lo = hi;
    steps = 0;
    loop {
        let m = modular(lo);
        if m.is_nan() {
            return Err(broken());
        }
        if m > 1.0 {
            break;
        }
        lo *= 0.5;
        steps += 1;
        if steps > 2000 || lo == 0.0 {
            return Err(broken());
        }
    }
    while hi - lo > ORLICZ_REL_TOL * hi * 1e-2 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// JSON encoding of exponents: finite values as numbers, `∞` as `"inf"`.
pub mod exponent {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}
