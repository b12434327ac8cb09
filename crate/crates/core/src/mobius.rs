//! Möbius transformations as determinant-normalized 2x2 complex matrices.
//!
//! The sign ambiguity of the normalization is retained; it is never
//! observable through `apply`, and matrix comparisons account for it.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::complex::ExtendedComplex;
use crate::error::{Error, Result};

/// Conjugation-invariant classes of Möbius transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// z -> (az + b) / (cz + d) with ad - bc = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    /// Builds a transformation from matrix entries, normalizing the
    /// determinant to 1 by dividing through a square root.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm()
            < 1e-14
                * (a.norm() + b.norm() + c.norm() + d.norm())
                    .max(1e-14)
                    .powi(2)
        {
            return Err(Error::DegenerateMatrix);
        }
        let s = det.sqrt();
        Ok(Mobius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Mobius::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        Mobius {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// z -> z + t.
    pub fn translation(t: Complex64) -> Self {
        Mobius {
            a: Complex64::new(1.0, 0.0),
            b: t,
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// z -> k z for k != 0.
    pub fn scaling(k: Complex64) -> Result<Self> {
        Mobius::new(
            k,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// z -> 1/z.
    pub fn inversion() -> Self {
        // [[0, i], [i, 0]] is the normalized form of [[0, 1], [1, 0]].
        Mobius {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(0.0, 1.0),
            c: Complex64::new(0.0, 1.0),
            d: Complex64::new(0.0, 0.0),
        }
    }

    /// The transformation sending `z1 -> 0`, `z2 -> 1`, `z3 -> infinity`.
    pub fn to_zero_one_infinity(
        z1: ExtendedComplex,
        z2: ExtendedComplex,
        z3: ExtendedComplex,
        tol: f64,
    ) -> Result<Self> {
        let pts = [z1, z2, z3];
        for i in 0..3 {
            for j in (i + 1)..3 {
                if pts[i].approx_eq(&pts[j], tol) {
                    return Err(Error::DegenerateTriple);
                }
            }
        }
        use ExtendedComplex::*;
        let one = Complex64::new(1.0, 0.0);
        match (z1, z2, z3) {
            (Finite(p), Finite(q), Finite(r)) => {
                Mobius::new(q - r, -p * (q - r), q - p, -r * (q - p))
            }
            (Infinity, Finite(q), Finite(r)) => {
                Mobius::new(Complex64::new(0.0, 0.0), -(q - r), -one, r)
            }
            (Finite(p), Infinity, Finite(r)) => Mobius::new(one, -p, one, -r),
            (Finite(p), Finite(q), Infinity) => {
                Mobius::new(-one, p, Complex64::new(0.0, 0.0), -(q - p))
            }
            _ => unreachable!("coincident infinities rejected above"),
        }
    }

    /// The transformation sending the triple `src` onto the triple `dst`.
    pub fn map_triples(
        src: [ExtendedComplex; 3],
        dst: [ExtendedComplex; 3],
        tol: f64,
    ) -> Result<Self> {
        let f = Mobius::to_zero_one_infinity(src[0], src[1], src[2], tol)?;
        let g = Mobius::to_zero_one_infinity(dst[0], dst[1], dst[2], tol)?;
        Ok(g.inverse().compose(&f))
    }

    pub fn inverse(&self) -> Self {
        // For det = 1 the inverse is [[d, -b], [-c, a]].
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Matrix product: `self.compose(g)` applies `g` first, then `self`.
    pub fn compose(&self, g: &Mobius) -> Self {
        Mobius {
            a: self.a * g.a + self.b * g.c,
            b: self.a * g.b + self.b * g.d,
            c: self.c * g.a + self.d * g.c,
            d: self.c * g.b + self.d * g.d,
        }
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        match z {
            ExtendedComplex::Infinity => {
                if self.c.norm() == 0.0 {
                    ExtendedComplex::Infinity
                } else {
                    ExtendedComplex::from(self.a / self.c)
                }
            }
            ExtendedComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ExtendedComplex::Infinity
                } else {
                    // From::from maps non-finite coordinates to Infinity, so
                    // near-pole overflow cannot leak NaN.
                    ExtendedComplex::from((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Trace squared; well defined despite the sign ambiguity.
    pub fn trace_sq(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    /// Distance to the identity modulo sign.
    pub fn deviation_from_identity(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let plus = (self.a - one).norm() + self.b.norm() + self.c.norm() + (self.d - one).norm();
        let minus = (self.a + one).norm() + self.b.norm() + self.c.norm() + (self.d + one).norm();
        plus.min(minus)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.deviation_from_identity() < tol
    }

    /// Entrywise comparison up to the overall sign.
    pub fn approx_eq(&self, other: &Mobius, tol: f64) -> bool {
        let diff_plus = (self.a - other.a).norm()
            + (self.b - other.b).norm()
            + (self.c - other.c).norm()
            + (self.d - other.d).norm();
        let diff_minus = (self.a + other.a).norm()
            + (self.b + other.b).norm()
            + (self.c + other.c).norm()
            + (self.d + other.d).norm();
        diff_plus.min(diff_minus) < tol
    }

    /// Trace classification: parabolic iff tr^2 = 4 (and not the identity),
    /// elliptic iff tr^2 is real in [0, 4), loxodromic otherwise.
    pub fn classify(&self, tol: f64) -> TransformClass {
        if self.is_identity(tol) {
            return TransformClass::Identity;
        }
        let t2 = self.trace_sq();
        if (t2 - Complex64::new(4.0, 0.0)).norm() < tol {
            return TransformClass::Parabolic;
        }
        if t2.im.abs() < tol && t2.re >= 0.0 && t2.re < 4.0 {
            return TransformClass::Elliptic;
        }
        TransformClass::Loxodromic
    }

    /// Fixed points: one for a parabolic, two otherwise.
    pub fn fixed_points(&self, tol: f64) -> Result<Vec<ExtendedComplex>> {
        if self.is_identity(tol) {
            return Err(Error::IdentityInput);
        }
        let two_c = 2.0 * self.c;
        if self.classify(tol) == TransformClass::Parabolic {
            if self.c.norm() < tol {
                return Ok(vec![ExtendedComplex::Infinity]);
            }
            return Ok(vec![ExtendedComplex::from((self.a - self.d) / two_c)]);
        }
        if self.c.norm() < tol {
            // Fixes infinity and b / (d - a).
            return Ok(vec![
                ExtendedComplex::Infinity,
                ExtendedComplex::from(self.b / (self.d - self.a)),
            ]);
        }
        let disc = (self.trace_sq() - Complex64::new(4.0, 0.0)).sqrt();
        Ok(vec![
            ExtendedComplex::from((self.a - self.d + disc) / two_c),
            ExtendedComplex::from((self.a - self.d - disc) / two_c),
        ])
    }

    /// A conjugator h with h f h^-1 = z + 1 for parabolic f.
    ///
    /// If f fixes infinity, h is the affine map rescaling the translation
    /// length to 1; otherwise h first sends the fixed point p to infinity
    /// via z -> 1/(z - p) and then rescales.
    pub fn conjugate_parabolic_to_unit_translation(&self, tol: f64) -> Result<Mobius> {
        if self.classify(tol) != TransformClass::Parabolic {
            return Err(Error::NotParabolic);
        }
        let unit_scale_for = |g: &Mobius| -> Result<Mobius> {
            // g is parabolic fixing infinity: g(z) = z + t with t = b*d
            // (a = d = +-1 after normalization).
            let t = g.b * g.d;
            Mobius::new(
                Complex64::new(1.0, 0.0) / t.sqrt(),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                t.sqrt(),
            )
        };
        if self.c.norm() < tol {
            return unit_scale_for(self);
        }
        let p = (self.a - self.d) / (2.0 * self.c);
        // z -> 1/(z - p)
        let send_to_inf = Mobius::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            -p,
        )?;
        let g = send_to_inf.compose(self).compose(&send_to_inf.inverse());
        Ok(unit_scale_for(&g)?.compose(&send_to_inf))
    }
}

// A Möbius transformation serializes as the entry list [[a],[b],[c],[d]],
// each entry a [re, im] pair.
impl Serialize for Mobius {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for entry in [self.a, self.b, self.c, self.d] {
            seq.serialize_element(&[entry.re, entry.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Mobius {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = <[[f64; 2]; 4]>::deserialize(deserializer)?;
        let [a, b, c, d] = entries.map(|[re, im]| Complex64::new(re, im));
        Mobius::new(a, b, c, d).map_err(|e| de::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_TOLERANCE as TOL;

    fn translation(t: f64) -> Mobius {
        Mobius::translation(Complex64::new(t, 0.0))
    }

    #[test]
    fn determinant_is_normalized() {
        let f = Mobius::from_real(3.0, 1.0, 2.0, 5.0).unwrap();
        let det = f.a * f.d - f.b * f.c;
        assert!((det - Complex64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn compose_with_identity() {
        let f = Mobius::from_real(1.0, 2.0, 3.0, 4.0).unwrap();
        assert!(Mobius::identity().compose(&f).approx_eq(&f, TOL));
        assert!(f.compose(&Mobius::identity()).approx_eq(&f, TOL));
    }

    #[test]
    fn translations_add() {
        let f = translation(1.0).compose(&translation(2.0));
        assert!(f.approx_eq(&translation(3.0), TOL));
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        let f = Mobius::from_real(2.0, -1.0, 1.0, 3.0).unwrap();
        let g = Mobius::new(
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.5),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -2.0),
        )
        .unwrap();
        let fg = f.compose(&g);
        for z in [
            ExtendedComplex::new(0.3, 0.7),
            ExtendedComplex::new(-2.0, 1.5),
            ExtendedComplex::new(5.0, -0.1),
        ] {
            let direct = fg.apply(z);
            let stepped = f.apply(g.apply(z));
            assert!(direct.approx_eq(&stepped, 1e-12));
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let f = Mobius::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.0),
        )
        .unwrap();
        assert!(f.compose(&f.inverse()).is_identity(TOL));
    }

    #[test]
    fn apply_handles_infinity_and_poles() {
        // (z + 1)(inf) = inf
        assert!(translation(1.0)
            .apply(ExtendedComplex::Infinity)
            .is_infinity());
        // (1/z)(0) = inf
        assert!(Mobius::inversion()
            .apply(ExtendedComplex::zero())
            .is_infinity());
        // ((z-2)/(2z-3))(2) = 0
        let f = Mobius::from_real(1.0, -2.0, 2.0, -3.0).unwrap();
        assert!(f
            .apply(ExtendedComplex::new(2.0, 0.0))
            .approx_eq(&ExtendedComplex::zero(), TOL));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(translation(1.0).classify(TOL), TransformClass::Parabolic);
        assert_eq!(
            Mobius::from_real(2.0, 0.0, 0.0, 1.0).unwrap().classify(TOL),
            TransformClass::Loxodromic
        );
        // z / (-2z + 1) has matrix [[1, 0], [-2, 1]], trace 2.
        assert_eq!(
            Mobius::from_real(1.0, 0.0, -2.0, 1.0)
                .unwrap()
                .classify(TOL),
            TransformClass::Parabolic
        );
        // Rotation z -> iz is elliptic.
        assert_eq!(
            Mobius::new(
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            )
            .unwrap()
            .classify(TOL),
            TransformClass::Elliptic
        );
        assert_eq!(Mobius::identity().classify(TOL), TransformClass::Identity);
    }

    #[test]
    fn fixed_point_examples() {
        let pts = translation(1.0).fixed_points(TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].is_infinity());

        let pts = Mobius::from_real(2.0, 0.0, 0.0, 1.0)
            .unwrap()
            .fixed_points(TOL)
            .unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().any(|p| p.is_infinity()));
        assert!(pts
            .iter()
            .any(|p| p.approx_eq(&ExtendedComplex::zero(), TOL)));

        // (z-2)/(2z-3) fixes 1 (double).
        let f = Mobius::from_real(1.0, -2.0, 2.0, -3.0).unwrap();
        let pts = f.fixed_points(TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].approx_eq(&ExtendedComplex::new(1.0, 0.0), TOL));
        assert!(f.apply(pts[0]).approx_eq(&pts[0], TOL));

        assert!(matches!(
            Mobius::identity().fixed_points(TOL),
            Err(Error::IdentityInput)
        ));
    }

    #[test]
    fn parabolic_conjugation_to_unit_translation() {
        let unit = translation(1.0);

        let h = unit.conjugate_parabolic_to_unit_translation(TOL).unwrap();
        assert!(h.is_identity(TOL));

        // z / (-2z + 1) fixes 0.
        let f = Mobius::from_real(1.0, 0.0, -2.0, 1.0).unwrap();
        let h = f.conjugate_parabolic_to_unit_translation(TOL).unwrap();
        let conj = h.compose(&f).compose(&h.inverse());
        assert!(conj.approx_eq(&unit, 1e-9));
        for z in [
            ExtendedComplex::new(0.25, 0.5),
            ExtendedComplex::new(-1.0, 2.0),
            ExtendedComplex::new(3.0, -0.5),
        ] {
            let lhs = conj.apply(z);
            let rhs = unit.apply(z);
            assert!(lhs.approx_eq(&rhs, 1e-9));
        }

        assert!(matches!(
            Mobius::from_real(2.0, 0.0, 0.0, 1.0)
                .unwrap()
                .conjugate_parabolic_to_unit_translation(TOL),
            Err(Error::NotParabolic)
        ));
    }

    #[test]
    fn triple_map_hits_all_three_points() {
        let src = [
            ExtendedComplex::new(1.0, 0.0),
            ExtendedComplex::new(0.0, 1.0),
            ExtendedComplex::new(-1.0, 0.0),
        ];
        let dst = [
            ExtendedComplex::new(9.0, 0.0),
            ExtendedComplex::new(10.0, 1.0),
            ExtendedComplex::new(11.0, 0.0),
        ];
        let f = Mobius::map_triples(src, dst, TOL).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert!(f.apply(*s).approx_eq(d, 1e-9));
        }
    }

    #[test]
    fn serde_round_trip() {
        let f = Mobius::from_real(1.0, -2.0, 2.0, -3.0).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: Mobius = serde_json::from_str(&s).unwrap();
        assert!(f.approx_eq(&back, 1e-12));
    }
}
