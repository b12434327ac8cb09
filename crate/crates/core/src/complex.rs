//! Points of the extended complex plane and their cross-ratios.
//!
//! A point is either a finite complex number or the point at infinity.
//! Comparisons are tag-exact at infinity and tolerance-based on finite
//! coordinates; finite values never silently promote to infinity.

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for all approximate comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn new(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    pub fn zero() -> Self {
        ExtendedComplex::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    /// The finite value, or `None` at infinity.
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            ExtendedComplex::Finite(z) => Some(*z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Tag-exact at infinity, within `tol` on finite coordinates.
    pub fn approx_eq(&self, other: &ExtendedComplex, tol: f64) -> bool {
        match (self, other) {
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => true,
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }

    /// Promote to infinity when the modulus exceeds `1/tol`. This is the only
    /// place a finite value becomes infinite, and only on explicit request.
    pub fn promote_large(self, tol: f64) -> Self {
        match self {
            ExtendedComplex::Finite(z) if z.norm() > 1.0 / tol => ExtendedComplex::Infinity,
            other => other,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        ExtendedComplex::from(Complex64::new(x, 0.0))
    }
}

impl std::fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}

// Finite points serialize as [re, im]; infinity as the string "inf".
impl Serialize for ExtendedComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedComplex::Finite(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
            ExtendedComplex::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor;

        impl<'de> Visitor<'de> for ExtVisitor {
            type Value = ExtendedComplex;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a [re, im] pair or the string \"inf\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ExtendedComplex::Infinity)
                } else {
                    Err(E::custom(format!("unknown point literal: {v:?}")))
                }
            }

            fn visit_seq<A: de::SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(ExtendedComplex::new(re, im))
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

/// Cross-ratio (z1,z2;z3,z4) = (z1-z3)(z2-z4) / ((z1-z4)(z2-z3)).
///
/// At most one argument may be infinite; the two factors containing it
/// cancel in the limit. The four points must be pairwise distinct.
pub fn cross_ratio(
    z1: ExtendedComplex,
    z2: ExtendedComplex,
    z3: ExtendedComplex,
    z4: ExtendedComplex,
    tol: f64,
) -> Result<Complex64> {
    let pts = [z1, z2, z3, z4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i].approx_eq(&pts[j], tol) {
                return Err(Error::DegenerateQuadruple);
            }
        }
    }
    use ExtendedComplex::*;
    let value = match (z1, z2, z3, z4) {
        (Finite(a), Finite(b), Finite(c), Finite(d)) => ((a - c) * (b - d)) / ((a - d) * (b - c)),
        (Infinity, Finite(b), Finite(c), Finite(d)) => (b - d) / (b - c),
        (Finite(a), Infinity, Finite(c), Finite(d)) => (a - c) / (a - d),
        (Finite(a), Finite(b), Infinity, Finite(d)) => (b - d) / (a - d),
        (Finite(a), Finite(b), Finite(c), Infinity) => (a - c) / (b - c),
        // Two infinities already rejected as a coincident pair above.
        _ => unreachable!("multiple infinite points"),
    };
    Ok(value)
}

/// Four pairwise-distinct points are concyclic exactly when
/// their cross-ratio is real.
pub fn is_concyclic(
    z1: ExtendedComplex,
    z2: ExtendedComplex,
    z3: ExtendedComplex,
    z4: ExtendedComplex,
    tol: f64,
) -> Result<bool> {
    Ok(cross_ratio(z1, z2, z3, z4, tol)?.im.abs() < tol)
}
