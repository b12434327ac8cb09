//! Shoebox geometry in upper half-space: the cusp-normalized box regions,
//! their truncations, slope-line crossing counts, and the vertical
//! projection of loop intersection points.
//!
//! All regions are closed (boundary points are members), and the parabolic
//! normalization is always the unit translation z -> z + 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{apply_to_circle, GeneralizedCircle};
use crate::error::{Error, Result};
use crate::mobius::Mobius;

/// A point (z, t) of upper half-space; t = 0 is the boundary plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfSpacePoint {
    pub z: Complex64,
    pub t: f64,
}

impl UpperHalfSpacePoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "height must be nonnegative, got {t}"
            )));
        }
        Ok(UpperHalfSpacePoint { z, t })
    }

    pub fn boundary(re: f64, im: f64) -> Self {
        UpperHalfSpacePoint {
            z: Complex64::new(re, im),
            t: 0.0,
        }
    }
}

/// Box sizes: the cusp region parameter `alpha`, its lower bound `alpha0`
/// from precise invariance, and the truncation width `n`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShoeboxParams {
    pub alpha0: f64,
    pub alpha: f64,
    pub n: u32,
}

impl ShoeboxParams {
    pub fn new(alpha0: f64, alpha: f64, n: u32) -> Result<Self> {
        if alpha0 <= 1.0 || alpha0.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "alpha0 must exceed 1, got {alpha0}"
            )));
        }
        if alpha <= alpha0 || alpha.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "alpha must exceed alpha0, got alpha = {alpha}, alpha0 = {alpha0}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument(
                "truncation width must be positive".into(),
            ));
        }
        Ok(ShoeboxParams { alpha0, alpha, n })
    }
}

/// Membership in the infinite shoebox {(z, t): |Im z| <= alpha, t <= alpha}.
pub fn shoebox_contains(alpha: f64, p: &UpperHalfSpacePoint) -> bool {
    p.z.im.abs() <= alpha && p.t <= alpha
}

/// Membership in the truncated box, which additionally caps |Re z| <= n.
pub fn truncated_box_contains(params: &ShoeboxParams, p: &UpperHalfSpacePoint) -> bool {
    shoebox_contains(params.alpha, p) && p.z.re.abs() <= f64::from(params.n)
}

/// Whether the sorted intersection abscissas wrap around under z -> z + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslationCase {
    /// The unit translation carries the first point onto the last.
    Wrapped,
    /// The translate of the first point lies beyond the last.
    Open,
}

/// Decides between the wrapped and open configurations for intersection
/// abscissas x_1 < ... < x_m with x_m - x_1 <= 1.
pub fn detect_translation_case(xs: &[f64], tol: f64) -> Result<TranslationCase> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("no intersection points".into()));
    }
    for w in xs.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidArgument(
                "abscissas must be strictly increasing".into(),
            ));
        }
    }
    let span = xs[xs.len() - 1] - xs[0];
    if span > 1.0 + tol {
        return Err(Error::SpanTooWide);
    }
    if (span - 1.0).abs() <= tol {
        Ok(TranslationCase::Wrapped)
    } else {
        Ok(TranslationCase::Open)
    }
}

/// The projected points on the box boundary lines Im z = +-alpha:
/// x'_k = (k-1)/(m-1) + i alpha in the wrapped case, (k-1)/m + i alpha in
/// the open case, and y'_k mirrored at -i alpha.
pub fn vertical_projection_points(
    m: usize,
    case: TranslationCase,
    alpha: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    let denom = match case {
        TranslationCase::Wrapped => {
            if m == 1 {
                return Err(Error::DegenerateWrap);
            }
            (m - 1) as f64
        }
        TranslationCase::Open => m as f64,
    };
    let upper = (0..m)
        .map(|k| Complex64::new(k as f64 / denom, alpha))
        .collect();
    let lower = (0..m)
        .map(|k| Complex64::new(k as f64 / denom, -alpha))
        .collect();
    Ok((upper, lower))
}

/// Counts the slope lines Re z = m, m integer with |m| <= n, met by the
/// normalized image h(C) inside the flat strip |Im z| <= alpha0.
pub fn count_slope_line_crossings(
    circle: &GeneralizedCircle,
    h: &Mobius,
    params: &ShoeboxParams,
) -> Result<usize> {
    let image = apply_to_circle(h, circle, 1e-12)?;
    let n = i64::from(params.n);
    let a0 = params.alpha0;
    let mut count = 0;
    for m in -n..=n {
        let x = m as f64;
        let crosses = match image {
            GeneralizedCircle::Circle { center, radius } => {
                let dx = x - center.re;
                if dx.abs() > radius {
                    false
                } else {
                    // The curve meets the slope line at ordinates
                    // center.im +- sqrt(r^2 - dx^2); at least one must lie
                    // inside the strip.
                    let dy = (radius * radius - dx * dx).max(0.0).sqrt();
                    (center.im - dy).abs() <= a0 || (center.im + dy).abs() <= a0
                }
            }
            GeneralizedCircle::Line { point, direction } => {
                if direction.re.abs() < 1e-12 {
                    // Parallel to the slope lines.
                    false
                } else {
                    let t = (x - point.re) / direction.re;
                    let y = point.im + t * direction.im;
                    y.abs() <= a0
                }
            }
        };
        if crosses {
            count += 1;
        }
    }
    Ok(count)
}

/// The normalized comparison map whose action on rays decides twisting:
/// z -> (z - 2) / (2z - 3).
pub fn slope_comparison_map() -> Mobius {
    Mobius::from_real(1.0, -2.0, 2.0, -3.0).expect("fixed matrix")
}

/// Whether the ray arg z = theta stays disjoint from its image under the
/// comparison map, computed by intersecting the image arc with the ray.
/// Disjoint rays are the simple-path candidates; the verdict flips at
/// |tan theta| = 1/sqrt(3).
pub fn slope_ray_simplicity(theta: f64) -> Result<bool> {
    if !(theta.abs() > 0.0 && theta.abs() <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::OutOfRange);
    }
    let map = slope_comparison_map();
    let dir = Complex64::new(theta.cos(), theta.sin());
    let ray_line = GeneralizedCircle::line(Complex64::new(0.0, 0.0), dir)?;
    let image = apply_to_circle(&map, &ray_line, 1e-12)?;
    let inverse = map.inverse();

    // Points of the full image circle on the full ray line, as parameters
    // t along the ray direction.
    let mut hits: Vec<f64> = Vec::new();
    match image {
        GeneralizedCircle::Circle { center, radius } => {
            // |t dir - center|^2 = r^2 with |dir| = 1.
            let b = (dir.conj() * center).re;
            let disc = b * b - center.norm_sqr() + radius * radius;
            let eps = 1e-12 * radius * radius;
            if disc > -eps {
                let root = disc.max(0.0).sqrt();
                hits.push(b - root);
                hits.push(b + root);
            }
        }
        GeneralizedCircle::Line { point, direction } => {
            let cross = (dir.conj() * direction).im;
            if cross.abs() > 1e-12 {
                // Solve point + s * direction = t * dir for t.
                hits.push((point.conj() * direction).im / cross);
            }
        }
    }

    // A hit counts only if it lies on the ray (t >= 0) and its preimage
    // does too, i.e. the contact happens on the image of the ray itself.
    let tol = 1e-9;
    let disjoint = hits.iter().all(|&t| {
        if t < -tol {
            return true;
        }
        let w = Complex64::new(t * dir.re, t * dir.im);
        match inverse.apply(crate::complex::ExtendedComplex::from(w)) {
            crate::complex::ExtendedComplex::Finite(z) => {
                let s = (dir.conj() * z).re;
                s < -tol
            }
            // The preimage of the contact point is the ray's endpoint at
            // infinity, which lies on the ray.
            crate::complex::ExtendedComplex::Infinity => false,
        }
    });
    Ok(disjoint)
}
