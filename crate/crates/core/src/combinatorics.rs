//! Finite combinatorics of strand graphs: complexity of a marking, the
//! superstrand counting bound, the uniqueness of the 4-regular graph on six
//! vertices, and the exhaustive cube-labeling search.

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Geometric intersection counts: rows are defining loops V_1..V_p,
/// columns are pinched geodesics L_1..L_q.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl IntersectionMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntersectionMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[&[u32]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(IntersectionMatrix {
            rows: r,
            cols: c,
            entries: rows.concat(),
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn column_sum(&self, j: usize) -> u32 {
        (0..self.rows).map(|i| self.entry(i, j)).sum()
    }

    pub fn column_sums(&self) -> Vec<u32> {
        (0..self.cols).map(|j| self.column_sum(j)).collect()
    }
}

/// Complexity of a marking: the largest total crossing count of any single
/// pinched geodesic with the defining loops, i.e. the maximal column sum.
pub fn complexity_of_marking(m: &IntersectionMatrix) -> Result<u32> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(m.column_sums().into_iter().max().unwrap_or(0))
}

/// Complexity at least 11 forces a sufficiently complicated marking.
pub const SUFFICIENTLY_COMPLICATED_THRESHOLD: u32 = 11;

pub fn sufficiently_complicated_flag(complexity: u32) -> bool {
    complexity >= SUFFICIENTLY_COMPLICATED_THRESHOLD
}

/// Result of the exhaustive superstrand count enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct SuperstrandBound {
    /// Largest strand total over all admissible continuation profiles.
    pub max_total: u32,
    /// Profiles attaining the maximum.
    pub witnesses: Vec<[u8; 4]>,
    /// Every admissible profile with its strand total.
    pub admissible: Vec<([u8; 4], u32)>,
}

/// True iff the ordered continuation profile m1 >= m2 >= m3 >= m4 satisfies
/// the counting rules for superstrands emanating from one parabolic fixed
/// point: at most 4 continuations each; m3, m4 at most 2; if m1 = 4 the rest
/// at most 2; if m1 = 3 then m3, m4 at most 2.
pub fn superstrand_profile_admissible(m: [u8; 4]) -> bool {
    let [m1, m2, m3, m4] = m;
    if m1 < m2 || m2 < m3 || m3 < m4 {
        return false;
    }
    if m1 > 4 {
        return false;
    }
    if m3 > 2 || m4 > 2 {
        return false;
    }
    if m1 == 4 && m2 > 2 {
        return false;
    }
    if m1 == 3 && m2 > 3 {
        return false;
    }
    true
}

/// Exhausts all ordered profiles. Without a parallel pair of strand
/// continuations, each set of strands has at most as many members as its
/// continuation count, so the strand total of a profile is its sum.
pub fn superstrand_bound_oracle() -> SuperstrandBound {
    let mut admissible = Vec::new();
    for m1 in 0..=4u8 {
        for m2 in 0..=m1 {
            for m3 in 0..=m2 {
                for m4 in 0..=m3 {
                    let profile = [m1, m2, m3, m4];
                    if superstrand_profile_admissible(profile) {
                        let total = u32::from(m1) + u32::from(m2) + u32::from(m3) + u32::from(m4);
                        admissible.push((profile, total));
                    }
                }
            }
        }
    }
    let max_total = admissible.iter().map(|&(_, t)| t).max().unwrap_or(0);
    let witnesses = admissible
        .iter()
        .filter(|&&(_, t)| t == max_total)
        .map(|&(p, _)| p)
        .collect();
    SuperstrandBound {
        max_total,
        witnesses,
        admissible,
    }
}

/// Simple graph on six labeled vertices, stored as a 15-bit edge mask over
/// the pairs (0,1), (0,2), ..., (4,5) in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph6(pub u16);

const N6: usize = 6;
const PAIRS6: usize = 15;

fn pair_index(mut u: usize, mut v: usize) -> usize {
    if u > v {
        std::mem::swap(&mut u, &mut v);
    }
    // Offset of row u plus position of v.
    u * (2 * N6 - u - 1) / 2 + (v - u - 1)
}

impl Graph6 {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0 >> pair_index(u, v) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..N6).filter(|&v| v != u && self.has_edge(u, v)).count()
    }

    pub fn edge_count(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..N6 {
            for v in (u + 1)..N6 {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Relabels vertices by the permutation `perm` (vertex i goes to
    /// `perm[i]`).
    pub fn relabel(&self, perm: &[usize; 6]) -> Graph6 {
        let mut mask = 0u16;
        for u in 0..N6 {
            for v in (u + 1)..N6 {
                if self.has_edge(u, v) {
                    mask |= 1 << pair_index(perm[u], perm[v]);
                }
            }
        }
        Graph6(mask)
    }

    /// Minimum edge mask over all 720 relabelings.
    pub fn canonical_form(&self) -> Graph6 {
        let mut best = u16::MAX;
        let mut perm = [0usize, 1, 2, 3, 4, 5];
        permute_all(&mut perm, 0, &mut |p| {
            best = best.min(self.relabel(p).0);
        });
        Graph6(best)
    }

    pub fn is_isomorphic_to(&self, other: &Graph6) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

fn permute_all(perm: &mut [usize; 6], k: usize, visit: &mut impl FnMut(&[usize; 6])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Census of 4-regular simple graphs on six labeled vertices.
#[derive(Debug, Clone, Serialize)]
pub struct Genus3GraphCensus {
    pub labeled_count: usize,
    pub iso_classes: usize,
    /// Canonical representative (the octahedron), as an edge list.
    pub representative_edges: Vec<(usize, usize)>,
    /// Every labeled 4-regular graph is the complement of a perfect matching.
    pub all_matching_complements: bool,
}

/// Scans all 2^15 simple graphs on six labeled vertices for the 4-regular
/// ones and computes their isomorphism classes by brute force.
pub fn admissible_genus3_graphs() -> Genus3GraphCensus {
    let mut regular: Vec<Graph6> = Vec::new();
    for mask in 0..(1u32 << PAIRS6) {
        let g = Graph6(mask as u16);
        if (0..N6).all(|v| g.degree(v) == 4) {
            regular.push(g);
        }
    }
    let mut canonical: Vec<Graph6> = regular.iter().map(Graph6::canonical_form).collect();
    canonical.sort();
    canonical.dedup();

    // 4-regular on 6 vertices means every vertex misses exactly one other:
    // the non-adjacency relation must be a perfect matching.
    let all_matching_complements = regular.iter().all(|g| {
        let mut partner = [usize::MAX; N6];
        for (u, slot) in partner.iter_mut().enumerate() {
            let missed: Vec<usize> = (0..N6).filter(|&v| v != u && !g.has_edge(u, v)).collect();
            if missed.len() != 1 {
                return false;
            }
            *slot = missed[0];
        }
        (0..N6).all(|u| partner[partner[u]] == u)
    });

    Genus3GraphCensus {
        labeled_count: regular.len(),
        iso_classes: canonical.len(),
        representative_edges: canonical.first().map_or_else(Vec::new, |g| g.edges()),
        all_matching_complements,
    }
}

/// Vertex of a strand graph: the i-th defining loop or its partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrandVertex(pub usize);

impl StrandVertex {
    /// Pair index (0-based) of the loop this vertex belongs to.
    pub fn pair(&self) -> usize {
        self.0 / 2
    }

    pub fn is_primed(&self) -> bool {
        self.0 % 2 == 1
    }

    pub fn name(&self) -> String {
        if self.is_primed() {
            format!("C{}p", self.pair() + 1)
        } else {
            format!("C{}", self.pair() + 1)
        }
    }

    pub fn parse(name: &str, genus: usize) -> Result<Self> {
        let (digits, primed) = match name.strip_prefix('C') {
            Some(rest) if rest.ends_with('p') => (&rest[..rest.len() - 1], true),
            Some(rest) => (rest, false),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "vertex name must look like C1 or C1p, got {name:?}"
                )))
            }
        };
        let i: usize = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad vertex name {name:?}")))?;
        if i == 0 || i > genus {
            return Err(Error::InvalidArgument(format!(
                "vertex index {i} out of range for genus {genus}"
            )));
        }
        Ok(StrandVertex(2 * (i - 1) + usize::from(primed)))
    }
}

impl Serialize for StrandVertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

/// One strand: an edge between contracted defining loops, colored by the
/// pinched geodesic it belongs to (1-based color).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrandEdge {
    pub u: StrandVertex,
    pub v: StrandVertex,
    pub color: usize,
}

/// Planar multigraph on the 2p contracted defining loops with colored edges.
///
/// The paired degree balance N_i = N_i' is asserted on construction and
/// re-checked after every mutation.
#[derive(Debug, Clone)]
pub struct StrandGraph {
    genus: usize,
    colors: usize,
    edges: Vec<StrandEdge>,
}

impl StrandGraph {
    pub fn new(genus: usize, colors: usize, edges: Vec<StrandEdge>) -> Result<Self> {
        let g = StrandGraph {
            genus,
            colors,
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.genus == 0 || self.colors == 0 {
            return Err(Error::InvalidArgument(
                "genus and color count must be positive".into(),
            ));
        }
        for e in &self.edges {
            if e.u.0 >= 2 * self.genus || e.v.0 >= 2 * self.genus {
                return Err(Error::InvalidArgument("edge endpoint out of range".into()));
            }
            if e.color == 0 || e.color > self.colors {
                return Err(Error::InvalidArgument(format!(
                    "edge color {} out of range 1..={}",
                    e.color, self.colors
                )));
            }
        }
        for i in 0..self.genus {
            let n = self.vertex_degree(StrandVertex(2 * i));
            let np = self.vertex_degree(StrandVertex(2 * i + 1));
            if n != np {
                return Err(Error::InvalidArgument(format!(
                    "paired loops C{} and C{}p have different strand counts ({n} vs {np})",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn edges(&self) -> &[StrandEdge] {
        &self.edges
    }

    pub fn add_edge(&mut self, e: StrandEdge) -> Result<()> {
        self.edges.push(e);
        if let Err(err) = self.validate() {
            self.edges.pop();
            return Err(err);
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, index: usize) -> Result<StrandEdge> {
        if index >= self.edges.len() {
            return Err(Error::InvalidArgument("edge index out of range".into()));
        }
        let e = self.edges.remove(index);
        if let Err(err) = self.validate() {
            self.edges.insert(index, e);
            return Err(err);
        }
        Ok(e)
    }

    /// Loops count twice, as usual for multigraph degrees.
    pub fn vertex_degree(&self, v: StrandVertex) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    /// Number of strands of color j (1-based).
    pub fn color_count(&self, color: usize) -> usize {
        self.edges.iter().filter(|e| e.color == color).count()
    }
}

impl Serialize for StrandGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Edges<'a>(&'a [StrandEdge]);
        impl Serialize for Edges<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for e in self.0 {
                    seq.serialize_element(&(e.u.name(), e.v.name(), e.color))?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("StrandGraph", 3)?;
        st.serialize_field("genus", &self.genus)?;
        st.serialize_field("colors", &self.colors)?;
        st.serialize_field("edges", &Edges(&self.edges))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for StrandGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            genus: usize,
            colors: usize,
            edges: Vec<(String, String, usize)>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut edges = Vec::with_capacity(repr.edges.len());
        for (u, v, color) in &repr.edges {
            edges.push(StrandEdge {
                u: StrandVertex::parse(u, repr.genus).map_err(serde::de::Error::custom)?,
                v: StrandVertex::parse(v, repr.genus).map_err(serde::de::Error::custom)?,
                color: *color,
            });
        }
        StrandGraph::new(repr.genus, repr.colors, edges).map_err(serde::de::Error::custom)
    }
}

/// Per-constraint verdicts for a genus-3, 3-color strand graph.
#[derive(Debug, Clone, Serialize)]
pub struct Genus3ConstraintReport {
    pub no_loops: bool,
    pub no_parallel_edges: bool,
    pub color_counts: Vec<usize>,
    pub color_counts_even: bool,
    pub color_counts_over_two: bool,
    pub vertex_degrees: Vec<usize>,
    pub vertex_degrees_even: bool,
    pub total_strands: usize,
    pub total_is_twelve: bool,
    pub four_regular: bool,
    pub pass: bool,
}

/// Checks the degree and multiplicity constraints that force the strand
/// graph of a genus-3 marking with three dividing pinched loops to be the
/// octahedron with color counts (4, 4, 4).
pub fn genus3_degree_constraints_check(g: &StrandGraph) -> Result<Genus3ConstraintReport> {
    if g.genus() != 3 || g.colors() != 3 {
        return Err(Error::InvalidArgument(
            "check requires genus 3 and exactly 3 colors".into(),
        ));
    }
    let no_loops = g.edges().iter().all(|e| e.u != e.v);
    let mut seen = std::collections::HashSet::new();
    let mut no_parallel_edges = true;
    for e in g.edges() {
        let key = (e.u.0.min(e.v.0), e.u.0.max(e.v.0));
        if !seen.insert(key) {
            no_parallel_edges = false;
        }
    }
    let color_counts: Vec<usize> = (1..=3).map(|j| g.color_count(j)).collect();
    let color_counts_even = color_counts.iter().all(|&m| m % 2 == 0);
    let color_counts_over_two = color_counts.iter().all(|&m| m > 2);
    let vertex_degrees: Vec<usize> = (0..6).map(|v| g.vertex_degree(StrandVertex(v))).collect();
    let vertex_degrees_even = vertex_degrees.iter().all(|&n| n % 2 == 0);
    let total_strands = g.edges().len();
    let total_is_twelve = total_strands == 12;
    let four_regular = vertex_degrees.iter().all(|&n| n == 4);
    let pass = no_loops
        && no_parallel_edges
        && color_counts_even
        && color_counts_over_two
        && vertex_degrees_even
        && total_is_twelve
        && four_regular;
    Ok(Genus3ConstraintReport {
        no_loops,
        no_parallel_edges,
        color_counts,
        color_counts_even,
        color_counts_over_two,
        vertex_degrees,
        vertex_degrees_even,
        total_strands,
        total_is_twelve,
        four_regular,
        pass,
    })
}

/// Result of the exhaustive search over cube-vertex labelings.
#[derive(Debug, Clone, Serialize)]
pub struct CubeLabelingSearch {
    pub search_space: usize,
    /// Labelings satisfying both conditions: every edge sees a 4, and every
    /// 4-vertex sees all of 1, 2, 3 among its neighbors.
    pub valid_count: usize,
    /// Labelings satisfying only the edge condition.
    pub relaxed_count: usize,
}

/// Tries every assignment of the values 1..4 to the eight cube vertices.
pub fn cube_labeling_search() -> CubeLabelingSearch {
    // Vertices are bit triples; neighbors differ in exactly one bit.
    let neighbors: Vec<[usize; 3]> = (0..8).map(|v| [v ^ 1, v ^ 2, v ^ 4]).collect();
    let mut valid_count = 0;
    let mut relaxed_count = 0;
    let mut labels = [0u8; 8];
    for code in 0..4usize.pow(8) {
        let mut c = code;
        for slot in labels.iter_mut() {
            *slot = (c % 4) as u8 + 1;
            c /= 4;
        }
        let edge_condition = (0..8usize).all(|v| {
            neighbors[v]
                .iter()
                .all(|&w| w < v || labels[v] == 4 || labels[w] == 4)
        });
        if !edge_condition {
            continue;
        }
        relaxed_count += 1;
        let four_condition = (0..8usize).all(|v| {
            if labels[v] != 4 {
                return true;
            }
            let mut seen = [false; 3];
            for &w in &neighbors[v] {
                let l = labels[w];
                if (1..=3).contains(&l) {
                    seen[(l - 1) as usize] = true;
                }
            }
            seen.iter().all(|&s| s)
        });
        if four_condition {
            valid_count += 1;
        }
    }
    CubeLabelingSearch {
        search_space: 4usize.pow(8),
        valid_count,
        relaxed_count,
    }
}

/// Combined trace of both exhaustive searches: the unique admissible strand
/// graph admits no compatible region labeling, so no marking by circles
/// exists for the pinched genus-3 family.
#[derive(Debug, Clone, Serialize)]
pub struct ImpossibilityTrace {
    pub graph_census: Genus3GraphCensus,
    pub labeling_search: CubeLabelingSearch,
    pub impossible: bool,
}

pub fn genus3_impossibility() -> ImpossibilityTrace {
    let graph_census = admissible_genus3_graphs();
    let labeling_search = cube_labeling_search();
    let impossible = graph_census.iso_classes == 1 && labeling_search.valid_count == 0;
    ImpossibilityTrace {
        graph_census,
        labeling_search,
        impossible,
    }
}

/// Edge bound (3p - 3) n for a genus-p strand graph of complexity n.
pub fn planar_graph_bound(p: usize, n: usize) -> Result<usize> {
    if p < 2 {
        return Err(Error::InvalidGenus);
    }
    if n < 1 {
        return Err(Error::InvalidArgument("complexity must be positive".into()));
    }
    Ok((3 * p - 3) * n)
}
