//! Gradient paths, the Morse chain complex, and the critical incidence graph
//! between critical edges and critical triangles.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::hall::{BipartiteGraph, HallCertificate, Side};
use crate::homology::{betti_from_ranks, homology, relaxed_hypotheses_hold};
use crate::matrix::IntMatrix;
use crate::normalize::{nkf_of, normalize};

/// Largest number of paths [`gradient_paths`] will return.
pub const PATH_CAP: usize = 1_000_000;

/// `σ0, τ0, σ1, …, σr`: each `τi` is paired with `σi` and `σ{i+1}` is
/// another face of `τi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPath {
    pub cells: Vec<CellId>,
}

impl GradientPath {
    pub fn start(&self) -> CellId {
        self.cells[0]
    }

    pub fn end(&self) -> CellId {
        *self.cells.last().expect("paths are nonempty")
    }

    /// Number of matched pairs traversed.
    pub fn steps(&self) -> usize {
        self.cells.len() / 2
    }

    /// Product of `-[τi:σi][τi:σ{i+1}]` over the steps.
    pub fn weight(&self, k: &SimplicialComplex) -> i64 {
        self.cells
            .windows(3)
            .step_by(2)
            .map(|w| step_weight(k, w[0], w[1], w[2]))
            .product()
    }
}

fn step_weight(k: &SimplicialComplex, from: CellId, via: CellId, to: CellId) -> i64 {
    let a = k
        .incidence_sign(from, via)
        .expect("paired cells are incident");
    let b = k.incidence_sign(to, via).expect("path cells are incident");
    -(a as i64) * (b as i64)
}

/// Every gradient path from `start` to `end`, depth first with faces in
/// cell order. The trivial path is included when `start == end`.
pub fn gradient_paths(
    v: &DiscreteVectorField<'_>,
    start: CellId,
    end: CellId,
) -> Result<Vec<GradientPath>> {
    let k = v.complex();
    if k.dim_of(start) != k.dim_of(end) {
        return Err(Error::DimensionMismatch(k.dim_of(start), k.dim_of(end)));
    }
    let mut out = Vec::new();
    let mut path = vec![start];
    walk(v, end, &mut path, &mut out)?;
    Ok(out)
}

fn walk(
    v: &DiscreteVectorField<'_>,
    end: CellId,
    path: &mut Vec<CellId>,
    out: &mut Vec<GradientPath>,
) -> Result<()> {
    let x = *path.last().expect("nonempty");
    if x == end {
        if out.len() == PATH_CAP {
            return Err(Error::PathCap(PATH_CAP));
        }
        out.push(GradientPath {
            cells: path.clone(),
        });
        // an acyclic field never returns to `end`
        return Ok(());
    }
    let Some(t) = v.pair_up(x) else { return Ok(()) };
    for y in v.vpath_successors(x) {
        path.push(t);
        path.push(y);
        walk(v, end, path, out)?;
        path.truncate(path.len() - 2);
    }
    Ok(())
}

/// Topological order of the k-cells in the V-path digraph of level `d`.
fn level_order(v: &DiscreteVectorField<'_>, d: usize) -> Vec<CellId> {
    let k = v.complex();
    let range = k.dim_range(d);
    let base = range.start;
    let mut indeg = vec![0usize; range.len()];
    for x in k.cells_of_dim(d) {
        for y in v.vpath_successors(x) {
            indeg[y.index() - base] += 1;
        }
    }
    let mut queue: VecDeque<CellId> = k
        .cells_of_dim(d)
        .filter(|c| indeg[c.index() - base] == 0)
        .collect();
    let mut order = Vec::with_capacity(range.len());
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for y in v.vpath_successors(x) {
            let i = y.index() - base;
            indeg[i] -= 1;
            if indeg[i] == 0 {
                queue.push_back(y);
            }
        }
    }
    assert_eq!(
        order.len(),
        range.len(),
        "valid fields have acyclic V-path digraphs"
    );
    order
}

/// Chain complex spanned by the critical cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseChainComplex {
    /// Critical cells per dimension, in cell order.
    pub critical: Vec<Vec<CellId>>,
    /// `boundaries[d - 1]` maps critical d-cells (columns) to critical
    /// (d-1)-cells (rows).
    pub boundaries: Vec<IntMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseComplexJson {
    pub critical: Vec<Vec<String>>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
    pub rational_betti: Vec<usize>,
}

impl MorseChainComplex {
    pub fn composes_to_zero(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].checked_mul(&w[1]).is_some_and(|m| m.is_zero()))
    }

    /// Unreduced Betti numbers over the rationals.
    pub fn rational_betti(&self) -> Vec<usize> {
        let sizes: Vec<usize> = self.critical.iter().map(Vec::len).collect();
        let mut ranks = vec![0usize; sizes.len()];
        for (i, b) in self.boundaries.iter().enumerate() {
            ranks[i + 1] = b.rank();
        }
        betti_from_ranks(&sizes, &ranks)
    }

    /// Whether the rational Betti numbers agree with those of `k`.
    pub fn matches_homology_of(&self, k: &SimplicialComplex) -> bool {
        self.composes_to_zero() && self.rational_betti() == homology(k).betti
    }

    pub fn to_json(&self, k: &SimplicialComplex) -> MorseComplexJson {
        MorseComplexJson {
            critical: self
                .critical
                .iter()
                .map(|cs| cs.iter().map(|&c| k.cell_name(c)).collect())
                .collect(),
            boundaries: self.boundaries.iter().map(|b| b.data.clone()).collect(),
            rational_betti: self.rational_betti(),
        }
    }
}

/// Boundary coefficients: for a critical τ and critical σ one dimension
/// lower, the sum over faces σ' of τ and gradient paths from σ' to σ of
/// `[τ:σ']` times the path weight. Path sums are propagated along a
/// topological order of the V-path digraph instead of enumerating paths.
pub fn morse_boundary(v: &DiscreteVectorField<'_>) -> Result<MorseChainComplex> {
    let k = v.complex();
    let report = v.critical_report();
    let critical = report.critical;
    let mut boundaries = Vec::with_capacity(k.dim());
    for d in 1..=k.dim() {
        let rows = &critical[d - 1];
        let cols = &critical[d];
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        if !rows.is_empty() && !cols.is_empty() {
            let order = level_order(v, d - 1);
            let base = k.dim_range(d - 1).start;
            let mut weight = vec![0i64; k.dim_range(d - 1).len()];
            for (j, &tau) in cols.iter().enumerate() {
                weight.iter_mut().for_each(|w| *w = 0);
                for inc in k.faces(tau) {
                    weight[inc.cell.index() - base] = inc.sign as i64;
                }
                for &x in &order {
                    let w = weight[x.index() - base];
                    if w == 0 {
                        continue;
                    }
                    let Some(t) = v.pair_up(x) else { continue };
                    for y in v.vpath_successors(x) {
                        let step = w
                            .checked_mul(step_weight(k, x, t, y))
                            .ok_or(Error::Overflow("Morse boundary"))?;
                        let slot = &mut weight[y.index() - base];
                        *slot = slot
                            .checked_add(step)
                            .ok_or(Error::Overflow("Morse boundary"))?;
                    }
                }
                for (i, &sigma) in rows.iter().enumerate() {
                    m.set(i, j, weight[sigma.index() - base]);
                }
            }
        }
        boundaries.push(m);
    }
    Ok(MorseChainComplex {
        critical,
        boundaries,
    })
}

pub fn morse_homology_check(v: &DiscreteVectorField<'_>) -> Result<bool> {
    Ok(morse_boundary(v)?.matches_homology_of(v.complex()))
}

/// Bipartite graph between critical edges and critical triangles: `e` and
/// `σ` are adjacent when a gradient path runs from a face of `σ` to `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalIncidenceGraph {
    pub edges: Vec<CellId>,
    pub triangles: Vec<CellId>,
    /// Pairs of indices into `edges` and `triangles`, sorted.
    pub adjacent: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceGraphJson {
    pub edges: Vec<String>,
    pub triangles: Vec<String>,
    pub adjacent: Vec<(String, String)>,
}

impl CriticalIncidenceGraph {
    pub fn bipartite(&self) -> BipartiteGraph {
        BipartiteGraph::new(self.edges.len(), self.triangles.len(), &self.adjacent)
    }

    pub fn to_json(&self, k: &SimplicialComplex) -> IncidenceGraphJson {
        IncidenceGraphJson {
            edges: self.edges.iter().map(|&c| k.cell_name(c)).collect(),
            triangles: self.triangles.iter().map(|&c| k.cell_name(c)).collect(),
            adjacent: self
                .adjacent
                .iter()
                .map(|&(a, b)| (k.cell_name(self.edges[a]), k.cell_name(self.triangles[b])))
                .collect(),
        }
    }
}

/// Edges reachable by gradient paths from the faces of `cell`.
fn reachable_below(v: &DiscreteVectorField<'_>, cell: CellId) -> Vec<bool> {
    let k = v.complex();
    let d = k.dim_of(cell) - 1;
    let base = k.dim_range(d).start;
    let mut seen = vec![false; k.dim_range(d).len()];
    let mut stack: Vec<CellId> = k.faces(cell).iter().map(|i| i.cell).collect();
    for c in &stack {
        seen[c.index() - base] = true;
    }
    while let Some(x) = stack.pop() {
        for y in v.vpath_successors(x) {
            if !seen[y.index() - base] {
                seen[y.index() - base] = true;
                stack.push(y);
            }
        }
    }
    seen
}

pub fn critical_incidence_graph(v: &DiscreteVectorField<'_>) -> Result<CriticalIncidenceGraph> {
    let k = v.complex();
    if k.dim() > 2 {
        return Err(Error::DimensionTooLarge {
            dim: k.dim(),
            max: 2,
        });
    }
    let report = v.critical_report();
    let edges = report.critical.get(1).cloned().unwrap_or_default();
    let triangles = report.critical.get(2).cloned().unwrap_or_default();
    let mut adjacent = Vec::new();
    if !edges.is_empty() {
        let base = k.dim_range(1).start;
        for (b, &t) in triangles.iter().enumerate() {
            let seen = reachable_below(v, t);
            for (a, &e) in edges.iter().enumerate() {
                if seen[e.index() - base] {
                    adjacent.push((a, b));
                }
            }
        }
    }
    adjacent.sort_unstable();
    Ok(CriticalIncidenceGraph {
        edges,
        triangles,
        adjacent,
    })
}

/// A complete matching of the incidence graph or a set of critical cells
/// with too few neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingCertificate {
    Complete {
        pairs: Vec<(CellId, CellId)>,
    },
    Violator {
        side: Side,
        set: Vec<CellId>,
        neighbours: Vec<CellId>,
    },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatchingJson {
    Complete {
        pairs: Vec<(String, String)>,
    },
    Violator {
        side: &'static str,
        set: Vec<String>,
        neighbours: Vec<String>,
    },
}

impl MatchingCertificate {
    pub fn to_json(&self, k: &SimplicialComplex) -> MatchingJson {
        let names = |cs: &[CellId]| cs.iter().map(|&c| k.cell_name(c)).collect();
        match self {
            MatchingCertificate::Complete { pairs } => MatchingJson::Complete {
                pairs: pairs
                    .iter()
                    .map(|&(e, t)| (k.cell_name(e), k.cell_name(t)))
                    .collect(),
            },
            MatchingCertificate::Violator {
                side,
                set,
                neighbours,
            } => MatchingJson::Violator {
                side: match side {
                    Side::Left => "edges",
                    Side::Right => "triangles",
                },
                set: names(set),
                neighbours: names(neighbours),
            },
        }
    }
}

pub fn hall_matching(g: &CriticalIncidenceGraph) -> MatchingCertificate {
    match g.bipartite().hall_certificate() {
        HallCertificate::Complete { pairs } => MatchingCertificate::Complete {
            pairs: pairs
                .into_iter()
                .map(|(a, b)| (g.edges[a], g.triangles[b]))
                .collect(),
        },
        HallCertificate::Violator {
            side,
            set,
            neighbours,
        } => {
            let (s, n) = match side {
                Side::Left => (&g.edges, &g.triangles),
                Side::Right => (&g.triangles, &g.edges),
            };
            MatchingCertificate::Violator {
                side,
                set: set.into_iter().map(|i| s[i]).collect(),
                neighbours: neighbours.into_iter().map(|i| n[i]).collect(),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapEntry {
    pub edge: CellId,
    pub triangle: CellId,
    pub h_edge: u32,
    pub h_triangle: u32,
}

/// Matched critical edges and triangles with `h(edge) < h(triangle)`; the
/// gaps add up to 𝔑 of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub entries: Vec<GapEntry>,
    pub nkf: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapEntryJson {
    pub edge: String,
    pub triangle: String,
    pub h_edge: u32,
    pub h_triangle: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCertificateJson {
    pub entries: Vec<GapEntryJson>,
    pub nkf: i64,
}

impl GapCertificate {
    pub fn gap_sum(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.h_triangle as i64 - e.h_edge as i64)
            .sum()
    }

    pub fn to_json(&self, k: &SimplicialComplex) -> GapCertificateJson {
        GapCertificateJson {
            entries: self
                .entries
                .iter()
                .map(|e| GapEntryJson {
                    edge: k.cell_name(e.edge),
                    triangle: k.cell_name(e.triangle),
                    h_edge: e.h_edge,
                    h_triangle: e.h_triangle,
                })
                .collect(),
            nkf: self.nkf,
        }
    }
}

/// Certifies `𝔑(K,f) > 0` for a field with a single critical vertex on a
/// connected complex of dimension at most 2 with `χ = 1` and `H_2 = 0`.
///
/// Critical edges and triangles are matched through the incidence graph;
/// along each gradient path `h` does not increase, so every matched edge has
/// a smaller value than its triangle, and the critical vertex has value 0.
pub fn theorem_gap_certificate(v: &DiscreteVectorField<'_>) -> Result<GapCertificate> {
    let k = v.complex();
    if k.dim() > 2 {
        return Err(Error::DimensionTooLarge {
            dim: k.dim(),
            max: 2,
        });
    }
    if !k.is_connected() {
        return Err(Error::NotConnected);
    }
    if !relaxed_hypotheses_hold(k)? {
        return Err(Error::HypothesesFail(format!(
            "need χ = 1 and H_2 = 0, complex has χ = {}",
            k.euler_characteristic()
        )));
    }
    let report = v.critical_report();
    if report.counts[0] != 1 {
        return Err(Error::HypothesesFail(format!(
            "field has {} critical vertices, an optimal field has one",
            report.counts[0]
        )));
    }
    if report.total() == 1 {
        return Err(Error::NoCollapsibilityObstruction);
    }
    let graph = critical_incidence_graph(v)?;
    let pairs = match hall_matching(&graph) {
        MatchingCertificate::Complete { pairs } => pairs,
        MatchingCertificate::Violator {
            set, neighbours, ..
        } => return Err(Error::HallViolation { set, neighbours }),
    };
    let h = normalize(v);
    let entries: Vec<GapEntry> = pairs
        .into_iter()
        .map(|(edge, triangle)| GapEntry {
            edge,
            triangle,
            h_edge: h.value(edge),
            h_triangle: h.value(triangle),
        })
        .collect();
    if let Some(e) = entries.iter().find(|e| e.h_edge >= e.h_triangle) {
        return Err(Error::Internal(format!(
            "h({}) = {} is not below h({}) = {}",
            k.cell_name(e.edge),
            e.h_edge,
            k.cell_name(e.triangle),
            e.h_triangle
        )));
    }
    let nkf = nkf_of(&h)?.value;
    let cert = GapCertificate { entries, nkf };
    if cert.gap_sum() != nkf {
        return Err(Error::Internal(format!(
            "gaps add up to {}, 𝔑 is {nkf}",
            cert.gap_sum()
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::homology::boundary_matrix;

    fn cell(k: &SimplicialComplex, name: &str) -> CellId {
        k.find_cell(&name.split_whitespace().collect::<Vec<_>>())
            .unwrap()
    }

    fn field<'a>(k: &'a SimplicialComplex, pairs: &[(&str, &str)]) -> DiscreteVectorField<'a> {
        DiscreteVectorField::validate(k, pairs.iter().map(|(a, b)| (cell(k, a), cell(k, b))))
            .unwrap()
    }

    #[test]
    fn trivial_path_and_mismatch() {
        let k = catalog::path(3).unwrap();
        let v = DiscreteVectorField::empty(&k);
        let a = cell(&k, "a");
        let paths = gradient_paths(&v, a, a).unwrap();
        assert_eq!(paths, vec![GradientPath { cells: vec![a] }]);
        assert!(matches!(
            gradient_paths(&v, a, cell(&k, "a b")),
            Err(Error::DimensionMismatch(0, 1))
        ));
    }

    #[test]
    fn one_step_path_through_a_pair() {
        let k = catalog::path(3).unwrap();
        let v = field(&k, &[("b", "a b")]);
        let paths = gradient_paths(&v, cell(&k, "b"), cell(&k, "a")).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(
            paths[0].cells,
            vec![cell(&k, "b"), cell(&k, "a b"), cell(&k, "a")]
        );
        assert_eq!(paths[0].steps(), 1);
        // -[ab:b][ab:a] = -(1)(-1)
        assert_eq!(paths[0].weight(&k), 1);
        assert!(gradient_paths(&v, cell(&k, "b"), cell(&k, "c"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn empty_field_gives_simplicial_boundaries() {
        let k = catalog::catalog("rp2_6").unwrap();
        let mc = morse_boundary(&DiscreteVectorField::empty(&k)).unwrap();
        for d in 1..=2 {
            assert_eq!(mc.boundaries[d - 1], boundary_matrix(&k, d).unwrap().matrix);
        }
        assert!(mc.matches_homology_of(&k));
    }

    #[test]
    fn collapsed_triangle_has_one_cell() {
        let k = catalog::full_simplex(2).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "a c"), ("b c", "a b c")]);
        let mc = morse_boundary(&v).unwrap();
        assert_eq!(mc.rational_betti(), vec![1, 0, 0]);
        assert!(mc.boundaries.iter().all(IntMatrix::is_zero));
        assert!(morse_homology_check(&v).unwrap());
    }

    #[test]
    fn cycle_boundary_vanishes() {
        let k = catalog::cycle(3).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "b c")]);
        let mc = morse_boundary(&v).unwrap();
        assert_eq!(mc.boundaries[0].data, vec![vec![0]]);
        assert!(morse_homology_check(&v).unwrap());
    }

    #[test]
    fn corrupted_coefficient_is_detected() {
        let k = catalog::cycle(3).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "b c")]);
        let mut mc = morse_boundary(&v).unwrap();
        mc.boundaries[0].set(0, 0, 2);
        assert!(!mc.matches_homology_of(&k));
    }

    #[test]
    fn face_of_critical_triangle_is_adjacent() {
        let k = catalog::full_simplex(2).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "a c")]);
        let g = critical_incidence_graph(&v).unwrap();
        assert_eq!(g.edges, vec![cell(&k, "b c")]);
        assert_eq!(g.adjacent, vec![(0, 0)]);
        assert_eq!(
            hall_matching(&g),
            MatchingCertificate::Complete {
                pairs: vec![(cell(&k, "b c"), cell(&k, "a b c"))]
            }
        );
        let cert = theorem_gap_certificate(&v).unwrap();
        assert_eq!(cert.entries.len(), 1);
        assert!(cert.nkf > 0);
        assert_eq!(cert.gap_sum(), cert.nkf);
    }

    #[test]
    fn certificate_rejects_collapsed_and_bad_inputs() {
        let k = catalog::full_simplex(2).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "a c"), ("b c", "a b c")]);
        assert!(matches!(
            theorem_gap_certificate(&v),
            Err(Error::NoCollapsibilityObstruction)
        ));
        assert!(critical_incidence_graph(&v).unwrap().adjacent.is_empty());
        assert!(matches!(
            theorem_gap_certificate(&DiscreteVectorField::empty(&k)),
            Err(Error::HypothesesFail(_))
        ));
        let c = catalog::cycle(3).unwrap();
        assert!(matches!(
            theorem_gap_certificate(&DiscreteVectorField::empty(&c)),
            Err(Error::HypothesesFail(_))
        ));
        let t = catalog::full_simplex(3).unwrap();
        assert!(critical_incidence_graph(&DiscreteVectorField::empty(&t)).is_err());
    }
}
