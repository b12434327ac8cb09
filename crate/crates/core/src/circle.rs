//! Circles and lines on the Riemann sphere.
//!
//! A line is a circle through infinity; it is stored with a canonical
//! direction (nonnegative imaginary part, positive real part when the
//! imaginary part vanishes) so that equality is well defined.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::ExtendedComplex;
use crate::error::{Error, Result};
use crate::mobius::Mobius;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneralizedCircle {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Line {
        point: Complex64,
        direction: Complex64,
    },
}

/// How two generalized circles sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleRelation {
    /// Disjoint closures, mutually exterior; `gap` is the Euclidean gap
    /// (infinite for two non-tangent parallel-free configurations through
    /// infinity never arises: lines meeting only at infinity are Tangent).
    Disjoint { gap: f64 },
    /// Touching at exactly one point without crossing.
    Tangent { point: ExtendedComplex },
    /// Crossing in two points.
    Crossing,
    /// One disc contained in the other (incl. internal tangency).
    Nested,
    /// The same circle.
    Equal,
}

impl GeneralizedCircle {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "circle radius must be positive and finite, got {radius}"
            )));
        }
        Ok(GeneralizedCircle::Circle { center, radius })
    }

    /// Line through `point` with the given direction, canonicalized.
    pub fn line(point: Complex64, direction: Complex64) -> Result<Self> {
        let n = direction.norm();
        if n < 1e-14 {
            return Err(Error::InvalidArgument(
                "line direction must be nonzero".into(),
            ));
        }
        let mut dir = direction / n;
        if dir.im < 0.0 || (dir.im == 0.0 && dir.re < 0.0) {
            dir = -dir;
        }
        Ok(GeneralizedCircle::Line {
            point,
            direction: dir,
        })
    }

    /// The vertical line Re z = x.
    pub fn vertical_line(x: f64) -> Self {
        GeneralizedCircle::Line {
            point: Complex64::new(x, 0.0),
            direction: Complex64::new(0.0, 1.0),
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, GeneralizedCircle::Line { .. })
    }

    /// Euclidean diameter; infinite for a line.
    pub fn diameter(&self) -> f64 {
        match self {
            GeneralizedCircle::Circle { radius, .. } => 2.0 * radius,
            GeneralizedCircle::Line { .. } => f64::INFINITY,
        }
    }

    /// A length scale used to make tolerances scale-invariant.
    pub fn scale(&self) -> f64 {
        match self {
            GeneralizedCircle::Circle { radius, .. } => *radius,
            GeneralizedCircle::Line { point, .. } => point.norm().max(1.0),
        }
    }

    /// Signed distance data: for a finite point, the Euclidean distance to
    /// the boundary curve. Infinity lies on every line and on no circle.
    pub fn distance_to_boundary(&self, z: ExtendedComplex) -> f64 {
        match (self, z) {
            (GeneralizedCircle::Circle { center, radius }, ExtendedComplex::Finite(z)) => {
                ((z - center).norm() - radius).abs()
            }
            (GeneralizedCircle::Circle { .. }, ExtendedComplex::Infinity) => f64::INFINITY,
            (GeneralizedCircle::Line { point, direction }, ExtendedComplex::Finite(z)) => {
                ((z - point) * direction.conj()).im.abs()
            }
            (GeneralizedCircle::Line { .. }, ExtendedComplex::Infinity) => 0.0,
        }
    }

    pub fn contains(&self, z: ExtendedComplex, tol: f64) -> bool {
        self.distance_to_boundary(z) <= tol * self.scale().max(1.0)
    }

    /// Three distinct sample points on the curve.
    pub fn sample_points(&self) -> [ExtendedComplex; 3] {
        match self {
            GeneralizedCircle::Circle { center, radius } => [
                ExtendedComplex::from(center + Complex64::new(*radius, 0.0)),
                ExtendedComplex::from(center + Complex64::new(0.0, *radius)),
                ExtendedComplex::from(center - Complex64::new(*radius, 0.0)),
            ],
            GeneralizedCircle::Line { point, direction } => [
                ExtendedComplex::from(*point),
                ExtendedComplex::from(point + direction),
                ExtendedComplex::Infinity,
            ],
        }
    }

    /// Entrywise comparison as subsets of the sphere.
    pub fn approx_eq(&self, other: &GeneralizedCircle, tol: f64) -> bool {
        match (self, other) {
            (
                GeneralizedCircle::Circle {
                    center: c1,
                    radius: r1,
                },
                GeneralizedCircle::Circle {
                    center: c2,
                    radius: r2,
                },
            ) => {
                let s = (r1 + r2).max(1.0);
                (c1 - c2).norm() <= tol * s && (r1 - r2).abs() <= tol * s
            }
            (
                GeneralizedCircle::Line {
                    point: p1,
                    direction: d1,
                },
                GeneralizedCircle::Line {
                    point: p2,
                    direction: d2,
                },
            ) => {
                // Canonical directions agree and the anchors lie on a common line.
                (d1 - d2).norm() <= tol
                    && ((p2 - p1) * d1.conj()).im.abs() <= tol * p1.norm().max(p2.norm()).max(1.0)
            }
            _ => false,
        }
    }

    /// Classifies the mutual position of two generalized circles.
    ///
    /// The tangency threshold is `tol * (r1 + r2)` for two circles and
    /// `tol * r` for a circle against a line, so the test is scale invariant.
    /// Two distinct parallel lines are tangent at infinity.
    pub fn relation_to(&self, other: &GeneralizedCircle, tol: f64) -> CircleRelation {
        use GeneralizedCircle::*;
        match (self, other) {
            (
                Circle {
                    center: c1,
                    radius: r1,
                },
                Circle {
                    center: c2,
                    radius: r2,
                },
            ) => {
                let d = (c1 - c2).norm();
                let thresh = tol * (r1 + r2);
                let outer_gap = d - (r1 + r2);
                if outer_gap > thresh {
                    return CircleRelation::Disjoint { gap: outer_gap };
                }
                if outer_gap.abs() <= thresh {
                    let point = c1 + (c2 - c1) * (r1 / d);
                    return CircleRelation::Tangent {
                        point: ExtendedComplex::from(point),
                    };
                }
                // d < r1 + r2: crossing, nested, or internally tangent.
                let inner = d - (r1 - r2).abs();
                if inner > thresh {
                    CircleRelation::Crossing
                } else if d <= thresh && (r1 - r2).abs() <= thresh {
                    CircleRelation::Equal
                } else {
                    CircleRelation::Nested
                }
            }
            (Circle { center, radius }, Line { point, direction })
            | (Line { point, direction }, Circle { center, radius }) => {
                let offset = ((center - point) * direction.conj()).im;
                let dist = offset.abs();
                let thresh = tol * radius;
                let gap = dist - radius;
                if gap > thresh {
                    CircleRelation::Disjoint { gap }
                } else if gap.abs() <= thresh {
                    // Foot of the perpendicular from the center.
                    let normal = Complex64::new(0.0, 1.0) * direction;
                    let foot = center - normal * offset;
                    CircleRelation::Tangent {
                        point: ExtendedComplex::from(foot),
                    }
                } else {
                    CircleRelation::Crossing
                }
            }
            (
                Line {
                    point: p1,
                    direction: d1,
                },
                Line {
                    point: p2,
                    direction: d2,
                },
            ) => {
                // Canonical directions: parallel iff equal within tolerance.
                if (d1 - d2).norm() <= tol {
                    let offset = ((p2 - p1) * d1.conj()).im;
                    if offset.abs() <= tol * p1.norm().max(p2.norm()).max(1.0) {
                        CircleRelation::Equal
                    } else {
                        CircleRelation::Tangent {
                            point: ExtendedComplex::Infinity,
                        }
                    }
                } else {
                    CircleRelation::Crossing
                }
            }
        }
    }
}

/// The unique generalized circle through three distinct points.
///
/// Collinear points, or a triple containing infinity, yield a line.
pub fn circle_through(
    z1: ExtendedComplex,
    z2: ExtendedComplex,
    z3: ExtendedComplex,
    tol: f64,
) -> Result<GeneralizedCircle> {
    let pts = [z1, z2, z3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if pts[i].approx_eq(&pts[j], tol) {
                return Err(Error::DegenerateTriple);
            }
        }
    }
    let finite: Vec<Complex64> = pts.iter().filter_map(|p| p.finite()).collect();
    if finite.len() == 2 {
        return GeneralizedCircle::line(finite[0], finite[1] - finite[0]);
    }
    let (a, b, c) = (finite[0], finite[1], finite[2]);
    let u = b - a;
    let v = c - a;
    // Twice the signed area of the triangle, relative to its size.
    let cross = (u.conj() * v).im;
    if cross.abs() <= tol * u.norm() * v.norm() {
        return GeneralizedCircle::line(a, u);
    }
    let denom = u.conj() * v - u * v.conj(); // = 2i * cross
    let w = (v * u.norm_sqr() - u * v.norm_sqr()) / denom;
    let center = a + w;
    GeneralizedCircle::circle(center, w.norm())
}

/// Image of a generalized circle under a Möbius transformation, determined
/// through three mapped sample points.
pub fn apply_to_circle(
    f: &Mobius,
    circle: &GeneralizedCircle,
    tol: f64,
) -> Result<GeneralizedCircle> {
    // Four candidate points guard against a sample landing on the pole.
    let mut candidates: Vec<ExtendedComplex> = match circle {
        GeneralizedCircle::Circle { center, radius } => vec![
            ExtendedComplex::from(center + Complex64::new(*radius, 0.0)),
            ExtendedComplex::from(center + Complex64::new(0.0, *radius)),
            ExtendedComplex::from(center - Complex64::new(*radius, 0.0)),
            ExtendedComplex::from(center - Complex64::new(0.0, *radius)),
        ],
        GeneralizedCircle::Line { point, direction } => vec![
            ExtendedComplex::from(*point),
            ExtendedComplex::from(point + direction),
            ExtendedComplex::from(point - direction),
            ExtendedComplex::Infinity,
        ],
    };
    candidates = candidates.into_iter().map(|z| f.apply(z)).collect();
    // Keep at most one infinite image and pick three distinct points.
    let mut chosen: Vec<ExtendedComplex> = Vec::with_capacity(3);
    for z in candidates
        .iter()
        .filter(|z| !z.is_infinity())
        .chain(candidates.iter().filter(|z| z.is_infinity()))
    {
        if chosen.iter().all(|w| !w.approx_eq(z, 1e-13)) {
            chosen.push(*z);
            if chosen.len() == 3 {
                break;
            }
        }
    }
    if chosen.len() < 3 {
        return Err(Error::DegenerateTriple);
    }
    circle_through(chosen[0], chosen[1], chosen[2], tol.min(1e-12))
}

/// Closed-form image of a generalized circle under a Möbius transformation.
///
/// Writing f(z) = a/c - (1/c^2) / (z - pole) with pole = -d/c reduces the
/// image to the classical inversion formulas, which stay well conditioned
/// when the image is many orders of magnitude smaller than the input; the
/// three-point route of `apply_to_circle` loses those images to rounding.
/// Inputs passing through the pole fall back to the three-point route.
pub fn transform_circle(f: &Mobius, circle: &GeneralizedCircle) -> Result<GeneralizedCircle> {
    let eps = 1e-12;
    if f.c.norm() < eps {
        // Affine: z -> (a/d) z + b/d.
        let scale = f.a / f.d;
        let shift = f.b / f.d;
        return match circle {
            GeneralizedCircle::Circle { center, radius } => {
                GeneralizedCircle::circle(center * scale + shift, radius * scale.norm())
            }
            GeneralizedCircle::Line { point, direction } => {
                GeneralizedCircle::line(point * scale + shift, direction * scale)
            }
        };
    }
    let pole = -f.d / f.c;
    let lambda = -1.0 / (f.c * f.c);
    let shift = f.a / f.c;
    match circle {
        GeneralizedCircle::Circle { center, radius } => {
            let q = center - pole;
            let denom = q.norm_sqr() - radius * radius;
            if denom.abs() <= eps * radius * radius {
                // Circle through the pole: the image is a line.
                return apply_to_circle(f, circle, eps);
            }
            // 1/u sends |u - q| = r to the circle centered at conj(q)/denom
            // with radius r/|denom|.
            let inv_center = q.conj() / denom;
            let inv_radius = radius / denom.abs();
            GeneralizedCircle::circle(shift + lambda * inv_center, lambda.norm() * inv_radius)
        }
        GeneralizedCircle::Line { point, direction } => {
            let q = point - pole;
            let offset = (q * direction.conj()).im;
            if offset.abs() <= eps * q.norm().max(1.0) {
                // Line through the pole maps to a line through f(infinity).
                return GeneralizedCircle::line(shift, 1.0 / (f.c * f.c * direction));
            }
            // 1/u sends the line at distance |offset| from the origin to a
            // circle through the origin.
            let normal = Complex64::new(0.0, 1.0) * direction * offset.signum();
            let inv_center = normal.conj() / (2.0 * offset.abs());
            let inv_radius = 1.0 / (2.0 * offset.abs());
            GeneralizedCircle::circle(shift + lambda * inv_center, lambda.norm() * inv_radius)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_TOLERANCE as TOL;

    fn unit_circle() -> GeneralizedCircle {
        GeneralizedCircle::circle(Complex64::new(0.0, 0.0), 1.0).unwrap()
    }

    #[test]
    fn circle_through_standard_triples() {
        // (1, -1, i) -> unit circle.
        let c = circle_through(
            ExtendedComplex::new(1.0, 0.0),
            ExtendedComplex::new(-1.0, 0.0),
            ExtendedComplex::new(0.0, 1.0),
            TOL,
        )
        .unwrap();
        assert!(c.approx_eq(&unit_circle(), TOL));

        // (0, 1, inf) -> real axis.
        let c = circle_through(
            ExtendedComplex::zero(),
            ExtendedComplex::new(1.0, 0.0),
            ExtendedComplex::Infinity,
            TOL,
        )
        .unwrap();
        let real_axis =
            GeneralizedCircle::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert!(c.approx_eq(&real_axis, TOL));

        // (0, 1, 2) are collinear -> real axis.
        let c = circle_through(
            ExtendedComplex::zero(),
            ExtendedComplex::new(1.0, 0.0),
            ExtendedComplex::new(2.0, 0.0),
            TOL,
        )
        .unwrap();
        assert!(c.approx_eq(&real_axis, TOL));

        assert!(matches!(
            circle_through(
                ExtendedComplex::zero(),
                ExtendedComplex::zero(),
                ExtendedComplex::new(1.0, 0.0),
                TOL
            ),
            Err(Error::DegenerateTriple)
        ));
    }

    #[test]
    fn translate_unit_circle() {
        let f = Mobius::translation(Complex64::new(1.0, 0.0));
        let image = apply_to_circle(&f, &unit_circle(), TOL).unwrap();
        let expected = GeneralizedCircle::circle(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(image.approx_eq(&expected, TOL));
    }

    #[test]
    fn inversion_fixes_imaginary_axis() {
        let axis =
            GeneralizedCircle::line(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)).unwrap();
        let image = apply_to_circle(&Mobius::inversion(), &axis, TOL).unwrap();
        assert!(image.approx_eq(&axis, TOL));
    }

    #[test]
    fn circle_through_pole_maps_to_line() {
        // |z - 1/2| = 1/2 passes through 0, the pole of 1/z; image is Re z = 1.
        let c = GeneralizedCircle::circle(Complex64::new(0.5, 0.0), 0.5).unwrap();
        let image = apply_to_circle(&Mobius::inversion(), &c, TOL).unwrap();
        assert!(image.is_line());
        assert!(image.contains(ExtendedComplex::new(1.0, 0.0), TOL));
        assert!(image.contains(ExtendedComplex::new(1.0, 5.0), TOL));
    }

    #[test]
    fn fourth_point_lands_on_image() {
        let f = Mobius::new(
            Complex64::new(2.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
        )
        .unwrap();
        let c = GeneralizedCircle::circle(Complex64::new(0.3, -0.2), 1.7).unwrap();
        let image = apply_to_circle(&f, &c, TOL).unwrap();
        let fourth = match c {
            GeneralizedCircle::Circle { center, radius } => {
                center + radius * Complex64::new(0.6, 0.8)
            }
            _ => unreachable!(),
        };
        let mapped = f.apply(ExtendedComplex::from(fourth));
        assert!(image.distance_to_boundary(mapped) < 1e-9);
    }

    #[test]
    fn relations_between_circles() {
        let a = unit_circle();
        let far = GeneralizedCircle::circle(Complex64::new(10.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            a.relation_to(&far, TOL),
            CircleRelation::Disjoint { gap } if (gap - 8.0).abs() < 1e-12
        ));

        let overlapping = GeneralizedCircle::circle(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            a.relation_to(&overlapping, TOL),
            CircleRelation::Crossing
        ));

        let left = GeneralizedCircle::circle(Complex64::new(-0.5, 0.0), 0.5).unwrap();
        let right = GeneralizedCircle::circle(Complex64::new(0.5, 0.0), 0.5).unwrap();
        match left.relation_to(&right, TOL) {
            CircleRelation::Tangent { point } => {
                assert!(point.approx_eq(&ExtendedComplex::zero(), TOL))
            }
            other => panic!("expected tangency, got {other:?}"),
        }

        let inner = GeneralizedCircle::circle(Complex64::new(0.1, 0.0), 0.2).unwrap();
        assert!(matches!(a.relation_to(&inner, TOL), CircleRelation::Nested));
        assert!(matches!(a.relation_to(&a, TOL), CircleRelation::Equal));
    }

    #[test]
    fn relations_with_lines() {
        let line = GeneralizedCircle::vertical_line(-1.0);
        let small = GeneralizedCircle::circle(Complex64::new(-0.5, 0.0), 0.5).unwrap();
        match line.relation_to(&small, TOL) {
            CircleRelation::Tangent { point } => {
                assert!(point.approx_eq(&ExtendedComplex::new(-1.0, 0.0), TOL))
            }
            other => panic!("expected tangency, got {other:?}"),
        }

        let parallel = GeneralizedCircle::vertical_line(1.0);
        match line.relation_to(&parallel, TOL) {
            CircleRelation::Tangent { point } => assert!(point.is_infinity()),
            other => panic!("expected tangency at infinity, got {other:?}"),
        }

        let crossing =
            GeneralizedCircle::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            line.relation_to(&crossing, TOL),
            CircleRelation::Crossing
        ));

        let far_circle = GeneralizedCircle::circle(Complex64::new(3.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            line.relation_to(&far_circle, TOL),
            CircleRelation::Disjoint { gap } if (gap - 3.0).abs() < 1e-12
        ));
    }

    #[test]
    fn closed_form_image_agrees_with_three_point_route() {
        let f = Mobius::new(
            Complex64::new(2.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
        )
        .unwrap();
        let cases = [
            GeneralizedCircle::circle(Complex64::new(0.3, -0.2), 1.7).unwrap(),
            GeneralizedCircle::circle(Complex64::new(5.0, 2.0), 0.4).unwrap(),
            GeneralizedCircle::vertical_line(2.0),
            GeneralizedCircle::line(Complex64::new(1.0, 1.0), Complex64::new(1.0, -2.0)).unwrap(),
        ];
        for circle in &cases {
            let exact = transform_circle(&f, circle).unwrap();
            let sampled = apply_to_circle(&f, circle, TOL).unwrap();
            assert!(
                exact.approx_eq(&sampled, 1e-9),
                "{circle:?}: {exact:?} vs {sampled:?}"
            );
        }
        // Inversion of |z - 3| = 1 is |w - 3/8| = 1/8.
        let image = transform_circle(
            &Mobius::inversion(),
            &GeneralizedCircle::circle(Complex64::new(3.0, 0.0), 1.0).unwrap(),
        )
        .unwrap();
        let expected = GeneralizedCircle::circle(Complex64::new(0.375, 0.0), 0.125).unwrap();
        assert!(image.approx_eq(&expected, 1e-12));
        // Translations are handled by the affine branch.
        let moved = transform_circle(
            &Mobius::translation(Complex64::new(1.0, 0.0)),
            &unit_circle(),
        )
        .unwrap();
        assert!(moved.approx_eq(
            &GeneralizedCircle::circle(Complex64::new(1.0, 0.0), 1.0).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn line_canonical_direction() {
        let l1 =
            GeneralizedCircle::line(Complex64::new(0.0, 0.0), Complex64::new(0.0, -2.0)).unwrap();
        let l2 = GeneralizedCircle::vertical_line(0.0);
        assert!(l1.approx_eq(&l2, TOL));
        match l1 {
            GeneralizedCircle::Line { direction, .. } => {
                assert!(direction.im > 0.0);
                assert!((direction.norm() - 1.0).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn serde_schema() {
        let c = GeneralizedCircle::circle(Complex64::new(1.0, 2.0), 3.0).unwrap();
        let v = serde_json::to_value(c).unwrap();
        assert_eq!(v["circle"]["radius"], 3.0);
        let l = GeneralizedCircle::vertical_line(1.0);
        let v = serde_json::to_value(l).unwrap();
        assert!(v["line"]["direction"].is_array());
    }
}
