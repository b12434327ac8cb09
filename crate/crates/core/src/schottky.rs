//! Markings by paired circles: verification of the classical (disjoint) and
//! noded (tangent) conditions, tangency-word tracing, group enumeration,
//! and limit-set approximation by nested discs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{apply_to_circle, transform_circle, CircleRelation, GeneralizedCircle};
use crate::complex::ExtendedComplex;
use crate::error::{Error, Result};
use crate::mobius::{Mobius, TransformClass};
use crate::words::Word;

/// One handle: a pair of defining circles with the transformation carrying
/// the first onto the second.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirclePair {
    pub circle: GeneralizedCircle,
    pub circle_prime: GeneralizedCircle,
    pub generator: Mobius,
}

/// A genus-p marking: p circle pairs with pairing generators and the
/// tolerance used by all of its verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct SchottkyMarking {
    genus: usize,
    tolerance: f64,
    pairs: Vec<CirclePair>,
}

impl<'de> Deserialize<'de> for SchottkyMarking {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            genus: usize,
            tolerance: f64,
            pairs: Vec<CirclePair>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.genus != repr.pairs.len() {
            return Err(serde::de::Error::custom(format!(
                "genus {} does not match the {} circle pairs",
                repr.genus,
                repr.pairs.len()
            )));
        }
        SchottkyMarking::new(repr.pairs, repr.tolerance).map_err(serde::de::Error::custom)
    }
}

/// A group element carried together with the word that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct GroupElement {
    pub word: Word,
    pub matrix: Mobius,
}

/// Name of the k-th circle in the fixed ordering C1, C1p, C2, C2p, ...
pub fn circle_name(index: usize) -> String {
    let pair = index / 2 + 1;
    if index.is_multiple_of(2) {
        format!("C{pair}")
    } else {
        format!("C{pair}p")
    }
}

impl SchottkyMarking {
    pub fn new(pairs: Vec<CirclePair>, tolerance: f64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidMarking("no circle pairs".into()));
        }
        if tolerance <= 0.0 || !tolerance.is_finite() {
            return Err(Error::InvalidMarking(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(SchottkyMarking {
            genus: pairs.len(),
            tolerance,
            pairs,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn pairs(&self) -> &[CirclePair] {
        &self.pairs
    }

    /// The 2p defining circles in the order C1, C1p, C2, C2p, ...
    pub fn circle(&self, index: usize) -> &GeneralizedCircle {
        let pair = &self.pairs[index / 2];
        if index.is_multiple_of(2) {
            &pair.circle
        } else {
            &pair.circle_prime
        }
    }

    pub fn circle_count(&self) -> usize {
        2 * self.genus
    }

    /// The generator that departs from circle `index`: a_i from C_i,
    /// a_i^-1 from C_i', together with the corresponding word letter.
    fn departure(&self, index: usize) -> (Mobius, i32) {
        let pair = index / 2;
        let generator = self.pairs[pair].generator;
        if index.is_multiple_of(2) {
            (generator, (pair + 1) as i32)
        } else {
            (generator.inverse(), -((pair + 1) as i32))
        }
    }

    /// A length scale for point comparisons.
    fn extent(&self) -> f64 {
        let mut extent: f64 = 1.0;
        for k in 0..self.circle_count() {
            extent = match self.circle(k) {
                GeneralizedCircle::Circle { center, radius } => extent.max(center.norm() + radius),
                GeneralizedCircle::Line { point, .. } => extent.max(point.norm()),
            };
        }
        extent
    }

    fn point_tolerance(&self) -> f64 {
        self.tolerance * self.extent()
    }

    /// Evaluates a reduced word into the group.
    pub fn evaluate_word(&self, word: &Word) -> Result<Mobius> {
        if word.rank() != self.genus {
            return Err(Error::RankMismatch(self.genus, word.rank()));
        }
        let mut matrix = Mobius::identity();
        for &letter in word.letters() {
            let pair = (letter.unsigned_abs() as usize) - 1;
            let g = if letter > 0 {
                self.pairs[pair].generator
            } else {
                self.pairs[pair].generator.inverse()
            };
            matrix = matrix.compose(&g);
        }
        Ok(matrix)
    }

    /// For every line among the defining circles, the side (sign of the
    /// normal offset) on which its disc lies: the side holding none of the
    /// other circles. Circles use their Euclidean interior and get `None`.
    fn line_disc_sides(&self) -> Result<Vec<Option<f64>>> {
        let n = self.circle_count();
        let mut sides = vec![None; n];
        for (k, slot) in sides.iter_mut().enumerate() {
            let GeneralizedCircle::Line { point, direction } = *self.circle(k) else {
                continue;
            };
            let mut occupied = 0.0_f64;
            for j in 0..n {
                if j == k {
                    continue;
                }
                let rep = match self.circle(j) {
                    GeneralizedCircle::Circle { center, .. } => *center,
                    GeneralizedCircle::Line { point, .. } => *point,
                };
                let offset = ((rep - point) * direction.conj()).im;
                if offset.abs() <= self.point_tolerance() {
                    continue;
                }
                let side = offset.signum();
                if occupied != 0.0 && occupied != side {
                    return Err(Error::InvalidMarking(format!(
                        "circles lie on both sides of the defining line {}",
                        circle_name(k)
                    )));
                }
                occupied = side;
            }
            if occupied == 0.0 {
                return Err(Error::InvalidMarking(format!(
                    "cannot orient the disc of the defining line {}",
                    circle_name(k)
                )));
            }
            *slot = Some(-occupied);
        }
        Ok(sides)
    }

    /// Signed clearance of a finite point from the k-th closed disc:
    /// positive outside, negative inside.
    fn disc_clearance(&self, sides: &[Option<f64>], k: usize, z: Complex64) -> f64 {
        match self.circle(k) {
            GeneralizedCircle::Circle { center, radius } => (z - center).norm() - radius,
            GeneralizedCircle::Line { point, direction } => {
                let offset = ((z - point) * direction.conj()).im;
                let side = sides[k].unwrap_or(1.0);
                -side * offset
            }
        }
    }

    fn disc_contains(&self, sides: &[Option<f64>], k: usize, z: ExtendedComplex) -> bool {
        match z {
            ExtendedComplex::Finite(z) => {
                self.disc_clearance(sides, k, z) < -self.point_tolerance()
            }
            // Infinity is interior to no Euclidean disc and lies on the
            // boundary of every half-plane.
            ExtendedComplex::Infinity => false,
        }
    }

    /// A point of the common exterior, chosen as the candidate with the
    /// largest clearance from all discs.
    fn find_exterior_witness(&self, sides: &[Option<f64>]) -> Option<(Complex64, f64)> {
        let n = self.circle_count();
        let mut candidates: Vec<Complex64> = Vec::new();
        let extent = self.extent();
        for k in 0..8 {
            let phi = k as f64 * std::f64::consts::FRAC_PI_4;
            candidates.push(3.0 * extent * Complex64::new(phi.cos(), phi.sin()));
        }
        candidates.push(Complex64::new(0.0, 0.0));
        for a in 0..n {
            for b in (a + 1)..n {
                if let Some(mid) = between_point(self.circle(a), self.circle(b)) {
                    candidates.push(mid);
                }
            }
        }
        let mut best: Option<(Complex64, f64)> = None;
        for z in candidates {
            let clearance = (0..n)
                .map(|k| self.disc_clearance(sides, k, z))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(_, c)| clearance > c) {
                best = Some((z, clearance));
            }
        }
        best.filter(|&(_, c)| c > self.point_tolerance())
    }

    /// Checks the classical conditions: 2p mutually exterior circles with
    /// positive gaps, a nonempty common exterior, each generator carrying
    /// its circle onto its partner, and the exterior mapping into the discs.
    /// Failures are report entries, never errors.
    pub fn verify_classical(&self) -> ClassicalReport {
        let tol = self.tolerance;
        let mut violations = Vec::new();
        let mut relations = Vec::new();
        let mut min_gap = f64::INFINITY;
        let mut disjoint = true;
        let n = self.circle_count();
        for a in 0..n {
            for b in (a + 1)..n {
                let rel = self.circle(a).relation_to(self.circle(b), tol);
                let entry = PairRelation::describe(a, b, &rel);
                match rel {
                    CircleRelation::Disjoint { gap } => min_gap = min_gap.min(gap),
                    _ => {
                        disjoint = false;
                        violations.push(format!(
                            "{} and {} are {}",
                            circle_name(a),
                            circle_name(b),
                            entry.relation
                        ));
                    }
                }
                relations.push(entry);
            }
        }

        let generators_map_circles = self.check_circle_images(&mut violations);

        let (witness, common_exterior_nonempty, exterior_maps_in) =
            self.check_exterior(&mut violations);

        let pass =
            disjoint && common_exterior_nonempty && generators_map_circles && exterior_maps_in;
        ClassicalReport {
            pass,
            tolerance: tol,
            circles_pairwise_disjoint: disjoint,
            common_exterior_nonempty,
            generators_map_circles,
            generators_map_exterior_into_discs: exterior_maps_in,
            min_gap: if min_gap.is_finite() {
                Some(min_gap)
            } else {
                None
            },
            witness: witness.map(|w| [w.re, w.im]),
            relations,
            violations,
        }
    }

    fn check_circle_images(&self, violations: &mut Vec<String>) -> bool {
        let mut ok = true;
        for (i, pair) in self.pairs.iter().enumerate() {
            match apply_to_circle(&pair.generator, &pair.circle, self.tolerance) {
                Ok(image) => {
                    if !image.approx_eq(&pair.circle_prime, self.tolerance.max(1e-9)) {
                        ok = false;
                        violations.push(format!(
                            "generator {} does not map C{} onto C{}p",
                            i + 1,
                            i + 1,
                            i + 1
                        ));
                    }
                }
                Err(_) => {
                    ok = false;
                    violations.push(format!("generator {} degenerates C{}", i + 1, i + 1));
                }
            }
        }
        ok
    }

    fn check_exterior(&self, violations: &mut Vec<String>) -> (Option<Complex64>, bool, bool) {
        let sides = match self.line_disc_sides() {
            Ok(s) => s,
            Err(e) => {
                violations.push(e.to_string());
                return (None, false, false);
            }
        };
        let Some((witness, _)) = self.find_exterior_witness(&sides) else {
            violations.push("no point clears all closed discs".into());
            return (None, false, false);
        };
        let mut maps_in = true;
        let w = ExtendedComplex::from(witness);
        for (i, pair) in self.pairs.iter().enumerate() {
            let forward = pair.generator.apply(w);
            if !self.disc_contains(&sides, 2 * i + 1, forward) {
                maps_in = false;
                violations.push(format!(
                    "generator {} sends the exterior witness outside the disc of C{}p",
                    i + 1,
                    i + 1
                ));
            }
            let backward = pair.generator.inverse().apply(w);
            if !self.disc_contains(&sides, 2 * i, backward) {
                maps_in = false;
                violations.push(format!(
                    "inverse generator {} sends the exterior witness outside the disc of C{}",
                    i + 1,
                    i + 1
                ));
            }
        }
        (Some(witness), true, maps_in)
    }

    /// Checks the noded conditions: circles may touch without crossing, and
    /// every tangency point must be fixed by the parabolic element traced
    /// around it. Crossing circles are an error; nested circles are invalid.
    pub fn verify_noded(&self) -> Result<NodedReport> {
        let tol = self.tolerance;
        let mut violations = Vec::new();
        let mut tangency_points: Vec<ExtendedComplex> = Vec::new();
        let mut discs_disjoint = true;
        let n = self.circle_count();
        for a in 0..n {
            for b in (a + 1)..n {
                match self.circle(a).relation_to(self.circle(b), tol) {
                    CircleRelation::Disjoint { .. } => {}
                    CircleRelation::Tangent { point } => {
                        if !tangency_points
                            .iter()
                            .any(|p| p.approx_eq(&point, self.point_tolerance()))
                        {
                            tangency_points.push(point);
                        }
                    }
                    CircleRelation::Crossing => return Err(Error::CrossingCircles),
                    CircleRelation::Nested | CircleRelation::Equal => {
                        return Err(Error::NestedCircles)
                    }
                }
            }
        }

        let generators_map_circles = self.check_circle_images(&mut violations);
        let (witness, common_exterior_nonempty, exterior_maps_in) =
            self.check_exterior(&mut violations);
        if !common_exterior_nonempty {
            discs_disjoint = false;
        }

        let mut tangencies = Vec::new();
        let mut all_tangencies_ok = true;
        for point in tangency_points {
            match self.certify_tangency(point) {
                Ok(cert) => {
                    if !(cert.parabolic && cert.fixes_tangency) {
                        all_tangencies_ok = false;
                        violations.push(format!(
                            "tangency at {} is not certified by a parabolic ({})",
                            cert.point,
                            cert.classification_name()
                        ));
                    }
                    tangencies.push(cert);
                }
                Err(e) => {
                    all_tangencies_ok = false;
                    violations.push(format!("tangency at {point} failed to trace: {e}"));
                }
            }
        }

        let pass =
            discs_disjoint && generators_map_circles && exterior_maps_in && all_tangencies_ok;
        Ok(NodedReport {
            pass,
            tolerance: tol,
            discs_disjoint_away_from_tangencies: discs_disjoint,
            generators_map_circles,
            generators_map_exterior_into_discs: exterior_maps_in,
            tangencies,
            witness: witness.map(|w| [w.re, w.im]),
            violations,
        })
    }

    fn certify_tangency(&self, point: ExtendedComplex) -> Result<TangencyCertificate> {
        let word = self.trace_tangency_word(point)?;
        let element = self.evaluate_word(&word)?;
        let classification = element.classify(self.tolerance);
        let parabolic = classification == TransformClass::Parabolic;
        let fixes_tangency = element
            .apply(point)
            .approx_eq(&point, self.point_tolerance().max(1e-7));
        let circles = self.circles_through(point);
        Ok(TangencyCertificate {
            point,
            circles: circles.into_iter().map(circle_name).collect(),
            word: word.letters().to_vec(),
            element,
            classification,
            trace_sq_deviation: (element.trace_sq() - Complex64::new(4.0, 0.0)).norm(),
            parabolic,
            fixes_tangency,
        })
    }

    fn circles_through(&self, point: ExtendedComplex) -> Vec<usize> {
        (0..self.circle_count())
            .filter(|&k| self.circle(k).contains(point, self.tolerance))
            .collect()
    }

    /// Traces the word fixing a tangency point: starting on the smaller of
    /// the two circles through it (C1 < C1p < C2 < ...), repeatedly applies
    /// the departing generator and continues from the other circle through
    /// the image point, until the trace returns to the start. The letters
    /// are recorded so that the resulting word, evaluated left to right as
    /// a matrix product, fixes the tangency point.
    pub fn trace_tangency_word(&self, x: ExtendedComplex) -> Result<Word> {
        let through = self.circles_through(x);
        if through.len() < 2 {
            return Err(Error::NotATangency);
        }
        if through.len() > 2 {
            return Err(Error::InvalidMarking(format!(
                "more than two circles pass through {x}"
            )));
        }
        let max_steps = 4 * self.genus * self.genus;
        let mut applied: Vec<i32> = Vec::new();
        let mut current = x;
        let mut departure = through[0];
        for _ in 0..max_steps {
            let (transform, letter) = self.departure(departure);
            applied.push(letter);
            let next = transform.apply(current);
            if next.approx_eq(&x, self.point_tolerance()) {
                let letters: Vec<i32> = applied.iter().rev().copied().collect();
                return Word::new(self.genus, &letters);
            }
            let arrival = departure ^ 1;
            let through_next: Vec<usize> = self
                .circles_through(next)
                .into_iter()
                .filter(|&k| k != arrival)
                .collect();
            match through_next.as_slice() {
                [next_departure] => {
                    departure = *next_departure;
                    current = next;
                }
                [] => {
                    return Err(Error::InvalidMarking(format!(
                        "trace left the tangency set at {next}"
                    )))
                }
                _ => {
                    return Err(Error::InvalidMarking(format!(
                        "ambiguous tangency continuation at {next}"
                    )))
                }
            }
        }
        Err(Error::NonReturning(max_steps))
    }

    /// All reduced words of length at most `max_len`, identity first, in
    /// breadth-first order with the letter order a1, a1^-1, a2, a2^-1, ...
    pub fn enumerate_group(&self, max_len: usize) -> Vec<GroupElement> {
        let letters: Vec<i32> = (1..=self.genus as i32).flat_map(|i| [i, -i]).collect();
        let mut out = vec![GroupElement {
            word: Word::empty(self.genus),
            matrix: Mobius::identity(),
        }];
        let mut frontier: Vec<(Vec<i32>, Mobius)> = vec![(Vec::new(), Mobius::identity())];
        for _ in 0..max_len {
            let mut next_frontier = Vec::with_capacity(frontier.len() * (2 * self.genus));
            for (word, matrix) in &frontier {
                for &l in &letters {
                    if word.last().is_some_and(|&last| last == -l) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(l);
                    let (g, _) = self.departure(letter_to_index(l));
                    let m = matrix.compose(&g);
                    out.push(GroupElement {
                        word: Word::new(self.genus, &w).expect("reduced by construction"),
                        matrix: m,
                    });
                    next_frontier.push((w, m));
                }
            }
            frontier = next_frontier;
        }
        out
    }

    /// Nested-disc approximation of the limit set for a classical marking.
    ///
    /// Level d holds the 2p(2p-1)^(d-1) discs indexed by reduced words of
    /// length d; the disc of a word w g is the image under w of the disc of
    /// g, so each level nests inside the previous one.
    pub fn limit_set(&self, depth: usize) -> Result<LimitSetSample> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        if !self.verify_classical().pass {
            return Err(Error::NotClassicalMarking);
        }
        let letters: Vec<i32> = (1..=self.genus as i32).flat_map(|i| [i, -i]).collect();
        let mut levels: Vec<Vec<LimitDisc>> = Vec::with_capacity(depth);
        // (word, matrix of the whole word)
        let mut frontier: Vec<(Vec<i32>, Mobius)> = vec![(Vec::new(), Mobius::identity())];
        for _ in 0..depth {
            let mut level = Vec::with_capacity(frontier.len() * (2 * self.genus));
            let mut next_frontier = Vec::with_capacity(frontier.len() * (2 * self.genus));
            for (word, matrix) in &frontier {
                for &l in &letters {
                    if word.last().is_some_and(|&last| last == -l) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(l);
                    // The disc of w*g is w applied to the target circle of g;
                    // the closed form keeps deeply nested radii accurate.
                    let target = self.target_circle(l);
                    let circle = transform_circle(matrix, target)?;
                    let (g, _) = self.departure(letter_to_index(l));
                    level.push(LimitDisc {
                        word: w.clone(),
                        circle,
                    });
                    next_frontier.push((w, matrix.compose(&g)));
                }
            }
            levels.push(level);
            frontier = next_frontier;
        }
        let points = levels
            .last()
            .map(|level| {
                level
                    .iter()
                    .map(|disc| match disc.circle {
                        GeneralizedCircle::Circle { center, .. } => center,
                        GeneralizedCircle::Line { point, .. } => point,
                    })
                    .collect()
            })
            .unwrap_or_default();
        Ok(LimitSetSample {
            genus: self.genus,
            depth,
            levels,
            points,
        })
    }

    /// Disc boundary a single letter maps everything into: C_i' for a_i,
    /// C_i for a_i^-1.
    fn target_circle(&self, letter: i32) -> &GeneralizedCircle {
        let pair = (letter.unsigned_abs() as usize) - 1;
        if letter > 0 {
            &self.pairs[pair].circle_prime
        } else {
            &self.pairs[pair].circle
        }
    }
}

fn letter_to_index(letter: i32) -> usize {
    let pair = (letter.unsigned_abs() as usize) - 1;
    2 * pair + usize::from(letter < 0)
}

/// Midpoint of the gap between two disjoint circles, used as an exterior
/// witness candidate. Tangent or overlapping configurations yield none.
fn between_point(a: &GeneralizedCircle, b: &GeneralizedCircle) -> Option<Complex64> {
    use GeneralizedCircle::*;
    match (a, b) {
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
            let d = (c2 - c1).norm();
            let gap = d - r1 - r2;
            if gap <= 0.0 {
                return None;
            }
            Some(c1 + (c2 - c1) * ((r1 + gap / 2.0) / d))
        }
        (Circle { center, radius }, Line { point, direction })
        | (Line { point, direction }, Circle { center, radius }) => {
            let offset = ((center - point) * direction.conj()).im;
            let gap = offset.abs() - radius;
            if gap <= 0.0 {
                return None;
            }
            let normal = Complex64::new(0.0, 1.0) * direction;
            Some(center - normal * (offset.signum() * (radius + gap / 2.0)))
        }
        (
            Line {
                point: p1,
                direction: d1,
            },
            Line { point: p2, .. },
        ) => {
            let offset = ((p2 - p1) * d1.conj()).im;
            if offset == 0.0 {
                return None;
            }
            let normal = Complex64::new(0.0, 1.0) * d1;
            Some(p1 + normal * (offset / 2.0))
        }
    }
}

/// Constructs the pairing transformation sending three anchor points on C
/// to three image points on C', oriented so the exterior of C maps into the
/// disc bounded by C'.
pub fn build_pairing(
    circle: &GeneralizedCircle,
    circle_prime: &GeneralizedCircle,
    anchors: [ExtendedComplex; 3],
    images: [ExtendedComplex; 3],
    tol: f64,
) -> Result<Mobius> {
    for p in &anchors {
        if !circle.contains(*p, tol) {
            return Err(Error::PointsNotOnCircle);
        }
    }
    for p in &images {
        if !circle_prime.contains(*p, tol) {
            return Err(Error::PointsNotOnCircle);
        }
    }
    let f = Mobius::map_triples(anchors, images, tol)?;
    // A witness outside both discs must land strictly inside the disc of
    // C'. For a line, the disc is the side away from the partner circle.
    let witness = exterior_witness_for_pair(circle, circle_prime);
    let image = f.apply(ExtendedComplex::from(witness));
    if !point_in_disc(circle_prime, circle, image) {
        return Err(Error::OrientationMismatch);
    }
    Ok(f)
}

/// A point outside both discs of a two-circle configuration.
fn exterior_witness_for_pair(c: &GeneralizedCircle, cp: &GeneralizedCircle) -> Complex64 {
    if let Some(mid) = between_point(c, cp) {
        return mid;
    }
    // Same or tangent circles: walk far away from both.
    let far = |g: &GeneralizedCircle| match g {
        GeneralizedCircle::Circle { center, radius } => center.norm() + radius,
        GeneralizedCircle::Line { point, .. } => point.norm(),
    };
    let r = 3.0 * (far(c) + far(cp)).max(1.0);
    match c {
        GeneralizedCircle::Circle { center, .. } => center + Complex64::new(r, r / 2.0),
        GeneralizedCircle::Line { point, direction } => {
            point - Complex64::new(0.0, 1.0) * direction * r
        }
    }
}

/// Whether z lies strictly inside the disc bounded by `circle`, taking the
/// side away from `other` when the boundary is a line.
fn point_in_disc(
    circle: &GeneralizedCircle,
    other: &GeneralizedCircle,
    z: ExtendedComplex,
) -> bool {
    let ExtendedComplex::Finite(z) = z else {
        return false;
    };
    match circle {
        GeneralizedCircle::Circle { center, radius } => (z - center).norm() < *radius,
        GeneralizedCircle::Line { point, direction } => {
            let rep = match other {
                GeneralizedCircle::Circle { center, .. } => *center,
                GeneralizedCircle::Line { point, .. } => *point,
            };
            let rep_offset = ((rep - point) * direction.conj()).im;
            let z_offset = ((z - point) * direction.conj()).im;
            if rep_offset == 0.0 {
                return false;
            }
            // Opposite side from the partner representative.
            z_offset * rep_offset < 0.0
        }
    }
}

/// Relation summary for one unordered pair of defining circles.
#[derive(Debug, Clone, Serialize)]
pub struct PairRelation {
    pub first: String,
    pub second: String,
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangency: Option<ExtendedComplex>,
}

impl PairRelation {
    fn describe(a: usize, b: usize, rel: &CircleRelation) -> Self {
        let (relation, gap, tangency) = match rel {
            CircleRelation::Disjoint { gap } => ("disjoint".to_string(), Some(*gap), None),
            CircleRelation::Tangent { point } => ("tangent".to_string(), None, Some(*point)),
            CircleRelation::Crossing => ("crossing".to_string(), None, None),
            CircleRelation::Nested => ("nested".to_string(), None, None),
            CircleRelation::Equal => ("equal".to_string(), None, None),
        };
        PairRelation {
            first: circle_name(a),
            second: circle_name(b),
            relation,
            gap,
            tangency,
        }
    }
}

/// Condition-keyed verdicts for the classical definition.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalReport {
    pub pass: bool,
    pub tolerance: f64,
    pub circles_pairwise_disjoint: bool,
    pub common_exterior_nonempty: bool,
    pub generators_map_circles: bool,
    pub generators_map_exterior_into_discs: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
    pub relations: Vec<PairRelation>,
    pub violations: Vec<String>,
}

/// One certified tangency: the traced word, its matrix, and whether it is
/// parabolic fixing the point.
#[derive(Debug, Clone, Serialize)]
pub struct TangencyCertificate {
    pub point: ExtendedComplex,
    pub circles: Vec<String>,
    pub word: Vec<i32>,
    pub element: Mobius,
    pub classification: TransformClass,
    pub trace_sq_deviation: f64,
    pub parabolic: bool,
    pub fixes_tangency: bool,
}

impl TangencyCertificate {
    fn classification_name(&self) -> &'static str {
        match self.classification {
            TransformClass::Identity => "identity",
            TransformClass::Parabolic => "parabolic",
            TransformClass::Elliptic => "elliptic",
            TransformClass::Loxodromic => "loxodromic",
        }
    }
}

/// Condition-keyed verdicts for the noded definition.
#[derive(Debug, Clone, Serialize)]
pub struct NodedReport {
    pub pass: bool,
    pub tolerance: f64,
    pub discs_disjoint_away_from_tangencies: bool,
    pub generators_map_circles: bool,
    pub generators_map_exterior_into_discs: bool,
    pub tangencies: Vec<TangencyCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
    pub violations: Vec<String>,
}

/// Nested-disc sample of a limit set.
#[derive(Debug, Clone, Serialize)]
pub struct LimitSetSample {
    pub genus: usize,
    pub depth: usize,
    pub levels: Vec<Vec<LimitDisc>>,
    pub points: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitDisc {
    pub word: Vec<i32>,
    pub circle: GeneralizedCircle,
}

impl LimitSetSample {
    pub fn disc_count_at(&self, depth: usize) -> usize {
        self.levels.get(depth - 1).map_or(0, Vec::len)
    }

    pub fn total_disc_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn max_diameter_at(&self, depth: usize) -> f64 {
        self.levels
            .get(depth - 1)
            .map(|level| {
                level
                    .iter()
                    .map(|d| d.circle.diameter())
                    .fold(0.0, f64::max)
            })
            .unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_TOLERANCE as TOL;

    fn circle(x: f64, y: f64, r: f64) -> GeneralizedCircle {
        GeneralizedCircle::circle(Complex64::new(x, y), r).unwrap()
    }

    fn ext(x: f64, y: f64) -> ExtendedComplex {
        ExtendedComplex::new(x, y)
    }

    /// Two pairs of unit circles on the real axis, paired by the maps
    /// z -> 10 - 1/z and z -> 40 - 1/(z - 30).
    pub(crate) fn classical_genus2() -> SchottkyMarking {
        let c1 = circle(0.0, 0.0, 1.0);
        let c1p = circle(10.0, 0.0, 1.0);
        let a1 = build_pairing(
            &c1,
            &c1p,
            [ext(1.0, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            [ext(9.0, 0.0), ext(10.0, 1.0), ext(11.0, 0.0)],
            TOL,
        )
        .unwrap();
        let c2 = circle(30.0, 0.0, 1.0);
        let c2p = circle(40.0, 0.0, 1.0);
        let a2 = build_pairing(
            &c2,
            &c2p,
            [ext(31.0, 0.0), ext(30.0, 1.0), ext(29.0, 0.0)],
            [ext(39.0, 0.0), ext(40.0, 1.0), ext(41.0, 0.0)],
            TOL,
        )
        .unwrap();
        SchottkyMarking::new(
            vec![
                CirclePair {
                    circle: c1,
                    circle_prime: c1p,
                    generator: a1,
                },
                CirclePair {
                    circle: c2,
                    circle_prime: c2p,
                    generator: a2,
                },
            ],
            TOL,
        )
        .unwrap()
    }

    /// The tangent marking: lines Re z = -1, +1 paired by z -> z + 2 and
    /// circles |z + 1/2| = 1/2, |z - 1/2| = 1/2 paired by z -> z/(2z + 1).
    pub(crate) fn noded_genus2() -> SchottkyMarking {
        let line = GeneralizedCircle::vertical_line(-1.0);
        let line_p = GeneralizedCircle::vertical_line(1.0);
        let a = Mobius::translation(Complex64::new(2.0, 0.0));
        let c = circle(-0.5, 0.0, 0.5);
        let cp = circle(0.5, 0.0, 0.5);
        let b = Mobius::from_real(1.0, 0.0, 2.0, 1.0).unwrap();
        SchottkyMarking::new(
            vec![
                CirclePair {
                    circle: line,
                    circle_prime: line_p,
                    generator: a,
                },
                CirclePair {
                    circle: c,
                    circle_prime: cp,
                    generator: b,
                },
            ],
            TOL,
        )
        .unwrap()
    }

    #[test]
    fn pairing_construction() {
        let c = circle(0.0, 0.0, 1.0);
        let cp = circle(10.0, 0.0, 1.0);
        let f = build_pairing(
            &c,
            &cp,
            [ext(1.0, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            [ext(9.0, 0.0), ext(10.0, 1.0), ext(11.0, 0.0)],
            TOL,
        )
        .unwrap();
        // Exterior witness z = 5 lands inside C'.
        let w = f.apply(ext(5.0, 0.0)).finite().unwrap();
        assert!((w - Complex64::new(10.0, 0.0)).norm() < 1.0);

        // Identity-inducing anchors on identical circles map the exterior
        // onto the exterior.
        let same = build_pairing(
            &c,
            &c,
            [ext(1.0, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            [ext(1.0, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            TOL,
        );
        assert!(matches!(same, Err(Error::OrientationMismatch)));

        let off = build_pairing(
            &c,
            &cp,
            [ext(1.1, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            [ext(9.0, 0.0), ext(10.0, 1.0), ext(11.0, 0.0)],
            TOL,
        );
        assert!(matches!(off, Err(Error::PointsNotOnCircle)));
    }

    #[test]
    fn classical_marking_verifies() {
        let report = classical_genus2().verify_classical();
        assert!(report.pass, "{report:?}");
        assert!(report.min_gap.unwrap() > 0.0);
    }

    #[test]
    fn overlapping_circles_fail_classical() {
        let c1 = circle(0.0, 0.0, 1.0);
        let c1p = circle(1.0, 0.0, 1.0);
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: c1,
                circle_prime: c1p,
                generator: Mobius::translation(Complex64::new(1.0, 0.0)),
            }],
            TOL,
        )
        .unwrap();
        let report = marking.verify_classical();
        assert!(!report.pass);
        assert!(!report.circles_pairwise_disjoint);
    }

    #[test]
    fn tangent_circles_fail_classical_but_verify_noded() {
        let marking = noded_genus2();
        let classical = marking.verify_classical();
        assert!(!classical.pass);
        assert!(!classical.circles_pairwise_disjoint);

        let noded = marking.verify_noded().unwrap();
        assert!(noded.pass, "{noded:?}");
        // Tangencies at -1, 0, 1 and at infinity.
        assert_eq!(noded.tangencies.len(), 4);
        for t in &noded.tangencies {
            assert!(t.parabolic);
            assert!(t.fixes_tangency);
            assert!(t.trace_sq_deviation < 1e-9);
        }
    }

    #[test]
    fn tangency_traces_match_hand_computation() {
        let marking = noded_genus2();

        // At 1: depart along C1p, so the word is b a^-1 = (z-2)/(2z-3).
        let word = marking.trace_tangency_word(ext(1.0, 0.0)).unwrap();
        assert_eq!(word.letters(), &[2, -1]);
        let element = marking.evaluate_word(&word).unwrap();
        let expected = Mobius::from_real(1.0, -2.0, 2.0, -3.0).unwrap();
        assert!(element.approx_eq(&expected, 1e-9));

        // At 0: the single generator b.
        let word = marking.trace_tangency_word(ext(0.0, 0.0)).unwrap();
        assert_eq!(word.letters(), &[2]);

        // At infinity: the translation a.
        let word = marking
            .trace_tangency_word(ExtendedComplex::Infinity)
            .unwrap();
        assert_eq!(word.letters(), &[1]);

        assert!(matches!(
            marking.trace_tangency_word(ext(5.0, 5.0)),
            Err(Error::NotATangency)
        ));
    }

    #[test]
    fn loxodromic_pairing_fails_noded() {
        // Keep the tangent circles but pair them with z -> 2z.
        let line = GeneralizedCircle::vertical_line(-1.0);
        let line_p = GeneralizedCircle::vertical_line(1.0);
        let marking = SchottkyMarking::new(
            vec![
                CirclePair {
                    circle: line,
                    circle_prime: line_p,
                    generator: Mobius::translation(Complex64::new(2.0, 0.0)),
                },
                CirclePair {
                    circle: circle(-0.5, 0.0, 0.5),
                    circle_prime: circle(0.5, 0.0, 0.5),
                    generator: Mobius::from_real(2.0, 0.0, 0.0, 1.0).unwrap(),
                },
            ],
            TOL,
        )
        .unwrap();
        let report = marking.verify_noded().unwrap();
        assert!(!report.pass);
        // The tangency at 0 traces to the single letter b, which is now
        // loxodromic.
        let zero_cert = report
            .tangencies
            .iter()
            .find(|t| t.point.approx_eq(&ext(0.0, 0.0), 1e-6))
            .unwrap();
        assert!(!zero_cert.parabolic);
    }

    #[test]
    fn crossing_circles_error() {
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: circle(0.0, 0.0, 1.0),
                circle_prime: circle(1.0, 0.0, 1.0),
                generator: Mobius::translation(Complex64::new(1.0, 0.0)),
            }],
            TOL,
        )
        .unwrap();
        assert!(matches!(
            marking.verify_noded(),
            Err(Error::CrossingCircles)
        ));

        // Non-parallel lines meet twice on the sphere.
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: GeneralizedCircle::vertical_line(0.0),
                circle_prime: GeneralizedCircle::line(
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                )
                .unwrap(),
                generator: Mobius::identity(),
            }],
            TOL,
        )
        .unwrap();
        assert!(matches!(
            marking.verify_noded(),
            Err(Error::CrossingCircles)
        ));

        // Nested circles are rejected distinctly.
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: circle(0.0, 0.0, 2.0),
                circle_prime: circle(0.1, 0.0, 0.3),
                generator: Mobius::identity(),
            }],
            TOL,
        )
        .unwrap();
        assert!(matches!(marking.verify_noded(), Err(Error::NestedCircles)));
    }

    #[test]
    fn genus1_tangent_pair_verifies_noded() {
        // The smallest tangent marking: two circles touching at 0, paired
        // by the parabolic z / (2z + 1) fixing the tangency.
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: circle(-0.5, 0.0, 0.5),
                circle_prime: circle(0.5, 0.0, 0.5),
                generator: Mobius::from_real(1.0, 0.0, 2.0, 1.0).unwrap(),
            }],
            TOL,
        )
        .unwrap();
        let report = marking.verify_noded().unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.tangencies.len(), 1);
        assert_eq!(report.tangencies[0].word, vec![1]);
        assert!(report.tangencies[0].parabolic);
    }

    #[test]
    fn enumeration_counts() {
        let marking = classical_genus2();
        let elements = marking.enumerate_group(1);
        assert_eq!(elements.len(), 5); // identity + 4 generators
        let elements = marking.enumerate_group(2);
        assert_eq!(elements.len(), 17); // + 12 reduced words of length 2

        // Word concatenation matches matrix product.
        for a in elements.iter().take(6) {
            for b in elements.iter().take(6) {
                let product = a.word.concat(&b.word).unwrap();
                let expected = marking.evaluate_word(&product).unwrap();
                let direct = a.matrix.compose(&b.matrix);
                assert!(expected.approx_eq(&direct, 1e-9));
            }
        }
    }

    #[test]
    fn classical_elements_are_loxodromic() {
        let marking = classical_genus2();
        for el in marking.enumerate_group(4).iter().skip(1) {
            assert_eq!(
                el.matrix.classify(TOL),
                TransformClass::Loxodromic,
                "word {:?}",
                el.word.letters()
            );
        }
    }

    #[test]
    fn noded_elements_are_loxodromic_or_tangency_parabolics() {
        let marking = noded_genus2();
        let report = marking.verify_noded().unwrap();
        // Orbit of the tangency points under short group elements.
        let mut parabolic_points: Vec<ExtendedComplex> = Vec::new();
        for el in marking.enumerate_group(3) {
            for cert in &report.tangencies {
                let moved = el.matrix.apply(cert.point);
                parabolic_points.push(moved);
            }
        }
        for el in marking.enumerate_group(4).iter().skip(1) {
            match el.matrix.classify(TOL) {
                TransformClass::Loxodromic => {}
                TransformClass::Parabolic => {
                    let fixed = el.matrix.fixed_points(TOL).unwrap()[0];
                    assert!(
                        parabolic_points.iter().any(|p| p.approx_eq(&fixed, 1e-6)),
                        "parabolic fixed point {fixed} is not an orbit point of a tangency"
                    );
                }
                other => panic!(
                    "unexpected class {other:?} for word {:?}",
                    el.word.letters()
                ),
            }
        }
    }

    #[test]
    fn limit_set_structure() {
        let marking = classical_genus2();
        let sample = marking.limit_set(4).unwrap();
        assert_eq!(sample.disc_count_at(1), 4);
        assert_eq!(sample.disc_count_at(2), 12);
        assert_eq!(sample.disc_count_at(3), 36);
        assert_eq!(sample.disc_count_at(4), 108);
        assert_eq!(sample.points.len(), 108);

        // Diameters shrink level by level.
        for d in 2..=4 {
            assert!(sample.max_diameter_at(d) < sample.max_diameter_at(d - 1));
        }

        // Every disc at depth d+1 sits inside exactly one disc at depth d.
        for d in 1..4 {
            for child in &sample.levels[d] {
                let parents = sample.levels[d - 1]
                    .iter()
                    .filter(|parent| circle_inside(&child.circle, &parent.circle))
                    .count();
                assert_eq!(parents, 1, "child {:?}", child.word);
            }
        }
    }

    fn circle_inside(inner: &GeneralizedCircle, outer: &GeneralizedCircle) -> bool {
        match (inner, outer) {
            (
                GeneralizedCircle::Circle {
                    center: ci,
                    radius: ri,
                },
                GeneralizedCircle::Circle {
                    center: co,
                    radius: ro,
                },
            ) => (ci - co).norm() + ri <= ro + 1e-9,
            _ => false,
        }
    }

    #[test]
    fn limit_set_requires_classical() {
        let marking = noded_genus2();
        assert!(matches!(
            marking.limit_set(2),
            Err(Error::NotClassicalMarking)
        ));
    }

    /// Chain of 2p unit circles at spacing 10 on the real axis, each pair
    /// joined by z -> c' - 1/(z - c).
    fn chain_marking(genus: usize) -> SchottkyMarking {
        let mut pairs = Vec::new();
        for i in 0..genus {
            let c = 30.0 * i as f64;
            let cp = c + 10.0;
            let circle_ = circle(c, 0.0, 1.0);
            let circle_p = circle(cp, 0.0, 1.0);
            let gen = build_pairing(
                &circle_,
                &circle_p,
                [ext(c + 1.0, 0.0), ext(c, 1.0), ext(c - 1.0, 0.0)],
                [ext(cp - 1.0, 0.0), ext(cp, 1.0), ext(cp + 1.0, 0.0)],
                TOL,
            )
            .unwrap();
            pairs.push(CirclePair {
                circle: circle_,
                circle_prime: circle_p,
                generator: gen,
            });
        }
        SchottkyMarking::new(pairs, TOL).unwrap()
    }

    #[test]
    fn disc_count_formula_up_to_genus_three() {
        for p in 1..=3usize {
            let marking = chain_marking(p);
            assert!(marking.verify_classical().pass, "genus {p}");
            let depth = if p == 3 { 6 } else { 7 };
            let sample = marking.limit_set(depth).unwrap();
            for d in 1..=depth {
                let expected = 2 * p * (2 * p - 1).pow(d as u32 - 1);
                assert_eq!(sample.disc_count_at(d), expected, "p = {p}, d = {d}");
            }
        }
        // Genus 3 at depth 7 in one go: 6 * 5^6 discs.
        let sample = chain_marking(3).limit_set(7).unwrap();
        assert_eq!(sample.disc_count_at(7), 6 * 5usize.pow(6));
    }

    #[test]
    fn p1_limit_set() {
        let c = circle(0.0, 0.0, 1.0);
        let cp = circle(10.0, 0.0, 1.0);
        let a = build_pairing(
            &c,
            &cp,
            [ext(1.0, 0.0), ext(0.0, 1.0), ext(-1.0, 0.0)],
            [ext(9.0, 0.0), ext(10.0, 1.0), ext(11.0, 0.0)],
            TOL,
        )
        .unwrap();
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: c,
                circle_prime: cp,
                generator: a,
            }],
            TOL,
        )
        .unwrap();
        let sample = marking.limit_set(3).unwrap();
        for d in 1..=3 {
            assert_eq!(sample.disc_count_at(d), 2);
        }
    }

    #[test]
    fn classical_marking_with_a_line_boundary() {
        // Re z = -2 paired with |z - 5.5| = 0.5 by z -> 5 + 1/(z + 3); the
        // left half-plane is the disc of the line.
        let line = GeneralizedCircle::vertical_line(-2.0);
        let target = circle(5.5, 0.0, 0.5);
        let f = Mobius::from_real(5.0, 16.0, 1.0, 3.0).unwrap();
        let marking = SchottkyMarking::new(
            vec![CirclePair {
                circle: line,
                circle_prime: target,
                generator: f,
            }],
            TOL,
        )
        .unwrap();
        let report = marking.verify_classical();
        assert!(report.pass, "{report:?}");

        let sample = marking.limit_set(3).unwrap();
        assert_eq!(sample.disc_count_at(1), 2);
        assert_eq!(sample.disc_count_at(3), 2);
        assert!(sample.levels[0].iter().any(|d| d.circle.is_line()));
        // Deeper discs are genuine circles nested inside the first level.
        assert!(sample.levels[2].iter().all(|d| !d.circle.is_line()));
    }

    #[test]
    fn marking_serde_round_trip() {
        let marking = noded_genus2();
        let json = serde_json::to_string(&marking).unwrap();
        let back: SchottkyMarking = serde_json::from_str(&json).unwrap();
        assert_eq!(back.genus(), 2);
        let report = back.verify_noded().unwrap();
        assert!(report.pass);

        // A genus field inconsistent with the pair list is rejected.
        let lying = json.replace("\"genus\":2", "\"genus\":5");
        assert!(serde_json::from_str::<SchottkyMarking>(&lying).is_err());
    }
}
