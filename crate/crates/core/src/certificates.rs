//! Quantitative certificates: cusp-gap lower bounds in thrice-punctured
//! sphere groups, the tangent-disc configuration behind the 1/8 bound, and
//! cross-ratio thresholds that certify four points can never be concyclic.
//!
//! Every certificate is one-directional: a failing gap certifies an
//! impossible configuration, a passing one makes no further claim.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::complex::{cross_ratio, ExtendedComplex};
use crate::error::{Error, Result};
use crate::mobius::{Mobius, TransformClass};
use crate::words::Word;

/// Exact dyadic thresholds used by the non-circularity certificates.
pub const THRESHOLD_EIGHTH: f64 = 0.125;
pub const THRESHOLD_SIXTEENTH: f64 = 0.0625;
pub const THRESHOLD_THIRTY_SECOND: f64 = 0.03125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    CuspGap,
    Slope,
    CrossRatio,
}

/// A checked inequality: `verdict` holds iff `value >= bound - tol`.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub inputs: serde_json::Value,
    pub value: f64,
    pub bound: f64,
    pub verdict: bool,
    pub tolerance: f64,
}

impl Certificate {
    fn new(
        kind: CertificateKind,
        inputs: serde_json::Value,
        value: f64,
        bound: f64,
        tol: f64,
    ) -> Self {
        Certificate {
            kind,
            inputs,
            value,
            bound,
            verdict: value >= bound - tol,
            tolerance: tol,
        }
    }
}

/// Sign choice in the second parabolic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSign {
    Plus,
    Minus,
}

/// The parabolic pair a = z + alpha, b = z / (sign * beta z + 1) with
/// beta = -4 / alpha, generating a thrice-punctured sphere group.
pub fn thrice_punctured_generators(alpha: f64, sign: GeneratorSign) -> Result<(Mobius, Mobius)> {
    if alpha < 1.0 || alpha.is_nan() {
        return Err(Error::InvalidAlpha);
    }
    let beta = -4.0 / alpha;
    let signed_beta = match sign {
        GeneratorSign::Plus => beta,
        GeneratorSign::Minus => -beta,
    };
    let a = Mobius::translation(Complex64::new(alpha, 0.0));
    let b = Mobius::from_real(1.0, 0.0, signed_beta, 1.0)?;
    Ok((a, b))
}

/// The three puncture classes, named by the peripheral elements fixing a
/// representative cusp: the translation (fixing infinity), the second
/// generator (fixing 0), and their product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspClass {
    Translation,
    Generator,
    Product,
}

/// A finite cusp: a real parabolic fixed point, reduced modulo z -> z + alpha
/// into [0, alpha), with the word that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Cusp {
    pub position: f64,
    pub class: CuspClass,
    pub word: Vec<i32>,
}

/// Finite cusp representatives found among all reduced words of length at
/// most `max_word_len`, searched shortest-first in a fixed letter order.
///
/// The list carries one representative per puncture class, the first
/// finite parabolic fixed point encountered for that class, reduced modulo
/// z -> z + alpha into [0, alpha). Deeper words only revisit the same three
/// classes through conjugates whose fixed points crowd arbitrarily close
/// together, so the class representative is the meaningful cusp datum: for
/// alpha = 2 the representatives are 0, 1/2 and 1, and the gap bound
/// alpha/4 between them is attained exactly.
pub fn enumerate_cusps(alpha: f64, max_word_len: usize, tol: f64) -> Result<Vec<Cusp>> {
    let (a, b) = thrice_punctured_generators(alpha, GeneratorSign::Minus)?;
    let gens = [a, a.inverse(), b, b.inverse()];
    let letters = [1i32, -1, 2, -2];

    let mut cusps: Vec<Cusp> = Vec::new();
    // Breadth-first over reduced words, carrying the evaluated matrices.
    let mut frontier: Vec<(Vec<i32>, Mobius)> = vec![(Vec::new(), Mobius::identity())];
    for _ in 0..max_word_len {
        let mut next_frontier = Vec::with_capacity(frontier.len() * 4);
        for (word, matrix) in &frontier {
            for (gi, g) in gens.iter().enumerate() {
                let letter = letters[gi];
                if word.last().is_some_and(|&l| l == -letter) {
                    continue;
                }
                let mut next_word = word.clone();
                next_word.push(letter);
                let next_matrix = matrix.compose(g);
                if next_matrix.classify(tol) == TransformClass::Parabolic {
                    record_cusp(&mut cusps, alpha, tol, &next_word, &next_matrix)?;
                }
                next_frontier.push((next_word, next_matrix));
            }
        }
        frontier = next_frontier;
    }
    cusps.sort_by(|x, y| x.position.total_cmp(&y.position));
    Ok(cusps)
}

fn record_cusp(
    cusps: &mut Vec<Cusp>,
    alpha: f64,
    tol: f64,
    word: &[i32],
    matrix: &Mobius,
) -> Result<()> {
    let Ok(points) = matrix.fixed_points(tol) else {
        return Ok(());
    };
    for p in points {
        let Some(z) = p.finite() else { continue };
        if z.im.abs() >= tol {
            continue;
        }
        let reduced = z.re.rem_euclid(alpha);
        let reduced = if alpha - reduced < tol { 0.0 } else { reduced };
        let class = classify_cusp_word(word)?;
        if !cusps.iter().any(|c| c.class == class) {
            cusps.push(Cusp {
                position: reduced,
                class,
                word: word.to_vec(),
            });
        }
    }
    Ok(())
}

/// Conjugacy class of the primitive root of a parabolic word: conjugate (up
/// to inversion) to the translation a, to the generator b, or to the third
/// peripheral element a b^-1 (with the Minus sign normalization, b's inverse
/// appears in the product: a b is hyperbolic while a b^-1 is parabolic).
/// Group conjugacy agrees with free-group conjugacy here because the group
/// is free on a and b.
fn classify_cusp_word(letters: &[i32]) -> Result<CuspClass> {
    let w = Word::new(2, letters)?;
    let (core, _) = w.cyclic_reduce();
    let primitive = primitive_root(&core);
    let a = Word::new(2, &[1])?;
    let b = Word::new(2, &[2])?;
    let third = Word::new(2, &[1, -2])?;
    if primitive.is_conjugate_to(&a, true)? {
        Ok(CuspClass::Translation)
    } else if primitive.is_conjugate_to(&b, true)? {
        Ok(CuspClass::Generator)
    } else if primitive.is_conjugate_to(&third, true)? {
        Ok(CuspClass::Product)
    } else {
        Err(Error::InvalidArgument(format!(
            "parabolic word {letters:?} is not peripheral"
        )))
    }
}

fn primitive_root(core: &Word) -> Word {
    let n = core.len();
    for period in 1..=n {
        if !n.is_multiple_of(period) {
            continue;
        }
        let letters = core.letters();
        if (period..n).all(|i| letters[i] == letters[i - period]) {
            return Word::new(core.rank(), &letters[..period]).expect("prefix of a valid word");
        }
    }
    core.clone()
}

/// Gap certificate: two cusps of a normalized thrice-punctured sphere group
/// that bound disjoint simple geodesics from infinity must satisfy
/// |y1 - y2| >= alpha / 4. A failing verdict certifies the configuration is
/// impossible.
pub fn cusp_gap_certificate(alpha: f64, y1: f64, y2: f64, tol: f64) -> Result<Certificate> {
    if alpha < 1.0 || alpha.is_nan() {
        return Err(Error::InvalidAlpha);
    }
    if (y1 - y2).abs() < tol {
        return Err(Error::CoincidentCusps);
    }
    Ok(Certificate::new(
        CertificateKind::CuspGap,
        json!({ "alpha": alpha, "y1": y1, "y2": y2 }),
        (y1 - y2).abs(),
        alpha / 4.0,
        tol,
    ))
}

/// Certificate for the slope threshold: the ray arg z = theta survives as a
/// simple-path candidate iff |tan theta| exceeds 1/sqrt(3). The reported
/// value/bound pair is |tan theta| against 1/sqrt(3); the verdict is the
/// geometric disjointness test.
pub fn slope_certificate(theta: f64) -> Result<Certificate> {
    let disjoint = crate::shoebox::slope_ray_simplicity(theta)?;
    Ok(Certificate {
        kind: CertificateKind::Slope,
        inputs: json!({ "theta": theta }),
        value: theta.tan().abs(),
        bound: 1.0 / 3.0_f64.sqrt(),
        verdict: disjoint,
        tolerance: 0.0,
    })
}

/// The tangent-disc configuration: a half-plane with boundary through the
/// origin at angle theta, the disc through -i tangent to it at 0 (diameter
/// csc theta), and the translation alpha = rho e^{i(theta - pi/2)} with
/// rho >= csc theta, so that Re(alpha) = rho sin(theta) >= 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuffCompConfig {
    pub theta: f64,
    pub rho: f64,
}

impl SuffCompConfig {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in (0, pi), got {theta}"
            )));
        }
        let d = 1.0 / theta.sin();
        if rho < d - 1e-12 || rho.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "rho must be at least csc(theta) = {d}, got {rho}"
            )));
        }
        Ok(SuffCompConfig { theta, rho })
    }

    /// Diameter of the tangent disc through -i.
    pub fn disc_diameter(&self) -> f64 {
        1.0 / self.theta.sin()
    }

    /// The translation fixing the two parallel boundary lines.
    pub fn translation(&self) -> Complex64 {
        let phase = Complex64::new(0.0, self.theta - std::f64::consts::FRAC_PI_2).exp();
        self.rho * phase
    }
}

/// Certifies the cross-ratio bound for two exit points z4, z4' of a pair of
/// curves traversing the normalized configuration (entry points fixed at
/// z1 = -i, z2 = 0, z3 = infinity). Reports both imaginary parts
/// Im(z2, z3; z, z1) = Re(z); their maximum must reach 1/8 whenever the exit
/// points respect the cusp-gap bound |z4 - z4'| >= |alpha| / 4.
pub fn suffcomp_certificate(
    cfg: &SuffCompConfig,
    z4: Complex64,
    z4p: Complex64,
    tol: f64,
) -> Result<Certificate> {
    let alpha_mod = cfg.rho;
    if (z4 - z4p).norm() < alpha_mod / 4.0 - tol {
        return Err(Error::GapTooSmall);
    }
    let z1 = ExtendedComplex::new(0.0, -1.0);
    let z2 = ExtendedComplex::zero();
    let z3 = ExtendedComplex::Infinity;
    let cr4 = cross_ratio(z2, z3, ExtendedComplex::from(z4), z1, tol)?;
    let cr4p = cross_ratio(z2, z3, ExtendedComplex::from(z4p), z1, tol)?;
    let value = cr4.im.abs().max(cr4p.im.abs());
    Ok(Certificate::new(
        CertificateKind::CrossRatio,
        json!({
            "theta": cfg.theta,
            "rho": cfg.rho,
            "z4": [z4.re, z4.im],
            "z4_prime": [z4p.re, z4p.im],
            "cross_ratio_z4": [cr4.re, cr4.im],
            "cross_ratio_z4_prime": [cr4p.re, cr4p.im],
            "re_gap": (z4.re - z4p.re).abs(),
        }),
        value,
        THRESHOLD_EIGHTH,
        tol,
    ))
}

/// Certifies that four points are provably not concyclic: the imaginary
/// part of their cross-ratio meets the given threshold (1/8 for the tangent
/// configuration itself; 1/16 and 1/32 survive the boundary and projection
/// perturbations).
pub fn non_concyclic_certificate(
    points: [ExtendedComplex; 4],
    threshold: f64,
    tol: f64,
) -> Result<Certificate> {
    let cr = cross_ratio(points[0], points[1], points[2], points[3], tol)?;
    Ok(Certificate::new(
        CertificateKind::CrossRatio,
        json!({
            "points": points,
            "threshold": threshold,
        }),
        cr.im.abs(),
        threshold,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_TOLERANCE as TOL;

    #[test]
    fn generator_normalizations() {
        let (a, b) = thrice_punctured_generators(2.0, GeneratorSign::Minus).unwrap();
        assert!(a.approx_eq(&Mobius::translation(Complex64::new(2.0, 0.0)), TOL));
        // b = z / (2z + 1)
        assert!(b.approx_eq(&Mobius::from_real(1.0, 0.0, 2.0, 1.0).unwrap(), TOL));
        assert_eq!(a.classify(TOL), TransformClass::Parabolic);
        assert_eq!(b.classify(TOL), TransformClass::Parabolic);

        let (_, b) = thrice_punctured_generators(4.0, GeneratorSign::Plus).unwrap();
        // beta = -4/4 = -1, so b = z / (-z + 1).
        assert!(b.approx_eq(&Mobius::from_real(1.0, 0.0, -1.0, 1.0).unwrap(), TOL));

        assert!(matches!(
            thrice_punctured_generators(0.5, GeneratorSign::Plus),
            Err(Error::InvalidAlpha)
        ));
    }

    #[test]
    fn cusp_enumeration_short_words() {
        let cusps = enumerate_cusps(2.0, 1, TOL).unwrap();
        assert_eq!(cusps.len(), 1);
        assert!((cusps[0].position - 0.0).abs() < TOL);
        assert_eq!(cusps[0].class, CuspClass::Generator);

        let cusps = enumerate_cusps(2.0, 4, TOL).unwrap();
        assert!(cusps.iter().any(|c| (c.position - 1.0).abs() < TOL));
        let at_one = cusps
            .iter()
            .find(|c| (c.position - 1.0).abs() < TOL)
            .unwrap();
        assert_eq!(at_one.class, CuspClass::Product);
        // One representative per puncture class: 0, 1/2 and 1.
        assert_eq!(cusps.len(), 3);
        assert!((cusps[1].position - 0.5).abs() < TOL);
        assert_eq!(cusps[1].class, CuspClass::Translation);
        // Translation reduction is idempotent: all positions in [0, alpha).
        for c in &cusps {
            assert!((0.0..2.0).contains(&c.position));
        }
    }

    #[test]
    fn every_enumerated_cusp_is_parabolic_fixed_point() {
        let (a, b) = thrice_punctured_generators(2.0, GeneratorSign::Minus).unwrap();
        for max_len in 1..=8 {
            for cusp in enumerate_cusps(2.0, max_len, TOL).unwrap() {
                let mut m = Mobius::identity();
                for &l in &cusp.word {
                    let g = match l {
                        1 => a,
                        -1 => a.inverse(),
                        2 => b,
                        -2 => b.inverse(),
                        _ => unreachable!(),
                    };
                    m = m.compose(&g);
                }
                assert_eq!(m.classify(TOL), TransformClass::Parabolic);
                let fixed = m.fixed_points(TOL).unwrap();
                assert_eq!(fixed.len(), 1);
                // The recorded position is the fixed point translated into
                // [0, alpha).
                let z = fixed[0].finite().unwrap();
                assert!((z.re.rem_euclid(2.0) - cusp.position).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cusp_gap_certificates() {
        let cert = cusp_gap_certificate(2.0, 0.0, 1.0, TOL).unwrap();
        assert!(cert.verdict);
        assert!((cert.value - 1.0).abs() < 1e-12);
        assert!((cert.bound - 0.5).abs() < 1e-12);

        let cert = cusp_gap_certificate(2.0, 0.0, 0.3, TOL).unwrap();
        assert!(!cert.verdict);

        assert!(matches!(
            cusp_gap_certificate(2.0, 0.7, 0.7, TOL),
            Err(Error::CoincidentCusps)
        ));
    }

    #[test]
    fn suffcomp_configuration() {
        let cfg = SuffCompConfig::new(std::f64::consts::FRAC_PI_2, 1.0).unwrap();
        assert!((cfg.disc_diameter() - 1.0).abs() < 1e-12);
        let alpha = cfg.translation();
        assert!((alpha - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(alpha.re >= 1.0 - 1e-12);

        // rho below csc(theta) is inadmissible.
        assert!(SuffCompConfig::new(0.3, 1.0).is_err());
    }

    #[test]
    fn suffcomp_certificates() {
        // Exit points 1/4 apart along the boundary direction.
        let cfg = SuffCompConfig::new(std::f64::consts::FRAC_PI_2, 1.0).unwrap();
        let z4 = Complex64::new(-0.125, -2.0);
        let z4p = Complex64::new(0.125, -2.0);
        let cert = suffcomp_certificate(&cfg, z4, z4p, TOL).unwrap();
        assert!(cert.verdict);
        assert!((cert.value - 0.125).abs() < 1e-12);

        assert!(matches!(
            suffcomp_certificate(&cfg, z4, z4, TOL),
            Err(Error::GapTooSmall)
        ));
    }

    #[test]
    fn normal_form_evaluation() {
        // Im(0, inf; 3+4i, -i) = 3.
        let cr = cross_ratio(
            ExtendedComplex::zero(),
            ExtendedComplex::Infinity,
            ExtendedComplex::new(3.0, 4.0),
            ExtendedComplex::new(0.0, -1.0),
            TOL,
        )
        .unwrap();
        assert!((cr.im - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_concyclic_certificates() {
        let points = [
            ExtendedComplex::zero(),
            ExtendedComplex::Infinity,
            ExtendedComplex::new(3.0, 4.0),
            ExtendedComplex::new(0.0, -1.0),
        ];
        let cert = non_concyclic_certificate(points, THRESHOLD_EIGHTH, TOL).unwrap();
        assert!(cert.verdict);
        assert!((cert.value - 3.0).abs() < 1e-12);

        let concyclic = [
            ExtendedComplex::new(1.0, 0.0),
            ExtendedComplex::new(-1.0, 0.0),
            ExtendedComplex::new(0.0, 1.0),
            ExtendedComplex::new(0.0, -1.0),
        ];
        let cert = non_concyclic_certificate(concyclic, THRESHOLD_EIGHTH, TOL).unwrap();
        assert!(!cert.verdict);
        assert!(cert.value < 1e-12);

        // Looser presets keep the passing verdict.
        let cert = non_concyclic_certificate(points, THRESHOLD_THIRTY_SECOND, TOL).unwrap();
        assert!(cert.verdict);
    }

    #[test]
    fn passing_certificate_rules_out_concyclicity() {
        let points = [
            ExtendedComplex::zero(),
            ExtendedComplex::Infinity,
            ExtendedComplex::new(3.0, 4.0),
            ExtendedComplex::new(0.0, -1.0),
        ];
        let cert = non_concyclic_certificate(points, THRESHOLD_EIGHTH, TOL).unwrap();
        assert!(cert.verdict);
        for tol in [1e-3, 1e-6, 1e-9] {
            assert!(
                !crate::complex::is_concyclic(points[0], points[1], points[2], points[3], tol)
                    .unwrap()
            );
        }
    }

    #[test]
    fn slope_certificates() {
        let cert = slope_certificate(std::f64::consts::FRAC_PI_4).unwrap();
        assert!(cert.verdict);
        let cert = slope_certificate(std::f64::consts::FRAC_PI_6).unwrap();
        assert!(!cert.verdict);
    }

    #[test]
    fn admissible_translation_has_unit_real_part() {
        // Re(alpha) = rho sin(theta) >= 1 across admissible configurations.
        for i in 1..40 {
            let theta = i as f64 * std::f64::consts::PI / 40.0;
            for extra in [0.0, 0.5, 2.0] {
                let rho = 1.0 / theta.sin() + extra;
                let cfg = SuffCompConfig::new(theta, rho).unwrap();
                assert!(cfg.translation().re >= 1.0 - 1e-9);
            }
        }
    }
}
