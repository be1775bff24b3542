//! Discrete vector fields: acyclic matchings on the Hasse diagram.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::FieldError;

/// An acyclic matching of immediate incidences of a complex. Unmatched cells
/// are the critical cells.
#[derive(Clone, Debug)]
pub struct DiscreteVectorField<'a> {
    complex: &'a SimplicialComplex,
    partner: Vec<Option<CellId>>,
}

impl PartialEq for DiscreteVectorField<'_> {
    fn eq(&self, other: &Self) -> bool {
        (std::ptr::eq(self.complex, other.complex) || self.complex == other.complex)
            && self.partner == other.partner
    }
}

impl Eq for DiscreteVectorField<'_> {}

impl<'a> DiscreteVectorField<'a> {
    /// The field with no pairs; every cell is critical.
    pub fn empty(complex: &'a SimplicialComplex) -> Self {
        DiscreteVectorField {
            complex,
            partner: vec![None; complex.num_cells()],
        }
    }

    /// Checks that `pairs` are immediate incidences `(face, coface)`, form a
    /// matching and admit no closed V-path.
    pub fn validate<I>(complex: &'a SimplicialComplex, pairs: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (CellId, CellId)>,
    {
        let mut partner = vec![None; complex.num_cells()];
        for (lower, upper) in pairs {
            if lower.index() >= partner.len()
                || upper.index() >= partner.len()
                || !complex.is_immediate_face(lower, upper)
            {
                return Err(FieldError::NotIncidence { lower, upper });
            }
            for cell in [lower, upper] {
                if partner[cell.index()].is_some() {
                    return Err(FieldError::NotAMatching { cell });
                }
            }
            partner[lower.index()] = Some(upper);
            partner[upper.index()] = Some(lower);
        }
        if let Some(cycle) = find_closed_vpath(complex, &partner) {
            return Err(FieldError::ClosedVPath { cycle });
        }
        Ok(DiscreteVectorField { complex, partner })
    }

    /// Builds a field from a partner table that is already known to be an
    /// acyclic matching.
    pub(crate) fn from_partner_unchecked(
        complex: &'a SimplicialComplex,
        partner: Vec<Option<CellId>>,
    ) -> Self {
        debug_assert!(find_closed_vpath(complex, &partner).is_none());
        DiscreteVectorField { complex, partner }
    }

    pub fn complex(&self) -> &'a SimplicialComplex {
        self.complex
    }

    pub fn partner(&self, c: CellId) -> Option<CellId> {
        self.partner[c.index()]
    }

    pub fn partners(&self) -> &[Option<CellId>] {
        &self.partner
    }

    /// The coface `c` is paired with, if `c` is the lower cell of its pair.
    pub fn pair_up(&self, c: CellId) -> Option<CellId> {
        self.partner(c).filter(|&p| p > c)
    }

    pub fn pair_down(&self, c: CellId) -> Option<CellId> {
        self.partner(c).filter(|&p| p < c)
    }

    pub fn is_critical(&self, c: CellId) -> bool {
        self.partner(c).is_none()
    }

    pub fn is_matched_pair(&self, lower: CellId, upper: CellId) -> bool {
        self.partner(lower) == Some(upper)
    }

    /// Pairs `(face, coface)` in increasing order of the face.
    pub fn pairs(&self) -> Vec<(CellId, CellId)> {
        self.complex
            .cell_ids()
            .filter_map(|c| self.pair_up(c).map(|p| (c, p)))
            .collect()
    }

    pub fn num_pairs(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    pub fn critical_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.complex
            .cell_ids()
            .filter(move |&c| self.is_critical(c))
    }

    pub fn critical_report(&self) -> CriticalReport {
        let k = self.complex;
        let critical: Vec<Vec<CellId>> = (0..=k.dim())
            .map(|d| k.cells_of_dim(d).filter(|&c| self.is_critical(c)).collect())
            .collect();
        CriticalReport {
            counts: critical.iter().map(Vec::len).collect(),
            critical,
        }
    }

    /// Successors of a k-cell in the V-path digraph: the other faces of the
    /// coface it is paired with.
    pub fn vpath_successors(&self, x: CellId) -> impl Iterator<Item = CellId> + '_ {
        let up = self.pair_up(x);
        up.into_iter()
            .flat_map(move |t| self.complex.faces(t).iter().map(|i| i.cell))
            .filter(move |&y| y != x)
    }
}

/// Unmatched cells per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    pub critical: Vec<Vec<CellId>>,
    pub counts: Vec<usize>,
}

impl CriticalReport {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn alternating_sum(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(d, &m)| if d % 2 == 0 { m as i64 } else { -(m as i64) })
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalReportJson {
    pub counts: Vec<usize>,
    pub critical: Vec<Vec<String>>,
}

impl CriticalReport {
    pub fn to_json(&self, k: &SimplicialComplex) -> CriticalReportJson {
        CriticalReportJson {
            counts: self.counts.clone(),
            critical: self
                .critical
                .iter()
                .map(|cells| cells.iter().map(|&c| k.cell_name(c)).collect())
                .collect(),
        }
    }
}

/// Searches the V-path digraph level by level (closed paths only alternate
/// between two consecutive dimensions). Returns the shortest closed path,
/// started at its smallest k-cell, as `σ0, τ0, σ1, …, σ0`.
pub(crate) fn find_closed_vpath(
    k: &SimplicialComplex,
    partner: &[Option<CellId>],
) -> Option<Vec<CellId>> {
    let up = |x: CellId| partner[x.index()].filter(|&p| p > x);
    for level in 0..k.dim() {
        let range = k.dim_range(level);
        let base = range.start;
        let n = range.len();
        let succ = |x: CellId| {
            up(x)
                .into_iter()
                .flat_map(move |t| k.faces(t).iter().map(|i| i.cell))
                .filter(move |&y| y != x)
        };
        let mut indeg = vec![0usize; n];
        for x in k.cells_of_dim(level) {
            for y in succ(x) {
                indeg[y.index() - base] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = vec![false; n];
        let mut left = n;
        while let Some(i) = queue.pop_front() {
            removed[i] = true;
            left -= 1;
            for y in succ(CellId((base + i) as u32)) {
                let j = y.index() - base;
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        if left == 0 {
            continue;
        }
        // shortest cycle through the remaining nodes
        let mut best: Option<Vec<usize>> = None;
        for s in (0..n).filter(|&i| !removed[i]) {
            let mut parent = vec![usize::MAX; n];
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            let mut closing = None;
            'bfs: while let Some(u) = q.pop_front() {
                if let Some(b) = &best {
                    if dist[u] + 1 >= b.len() {
                        break;
                    }
                }
                for y in succ(CellId((base + u) as u32)) {
                    let j = y.index() - base;
                    if removed[j] {
                        continue;
                    }
                    if j == s {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if dist[j] == usize::MAX {
                        dist[j] = dist[u] + 1;
                        parent[j] = u;
                        q.push_back(j);
                    }
                }
            }
            if let Some(u) = closing {
                let mut nodes = vec![u];
                let mut cur = u;
                while cur != s {
                    cur = parent[cur];
                    nodes.push(cur);
                }
                nodes.reverse();
                if best.as_ref().is_none_or(|b| nodes.len() < b.len()) {
                    best = Some(nodes);
                }
            }
        }
        let nodes = best.expect("a non-empty Kahn remainder contains a cycle");
        let mut cycle = Vec::with_capacity(2 * nodes.len() + 1);
        for &i in &nodes {
            let x = CellId((base + i) as u32);
            cycle.push(x);
            cycle.push(up(x).expect("cycle nodes are matched upwards"));
        }
        cycle.push(cycle[0]);
        return Some(cycle);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cells(k: &SimplicialComplex, names: &[&str]) -> Vec<CellId> {
        names
            .iter()
            .map(|n| {
                k.find_cell(&n.split_whitespace().collect::<Vec<_>>())
                    .unwrap()
            })
            .collect()
    }

    fn pair(k: &SimplicialComplex, lo: &str, hi: &str) -> (CellId, CellId) {
        let c = cells(k, &[lo, hi]);
        (c[0], c[1])
    }

    #[test]
    fn empty_field_everything_critical() {
        let t = catalog::full_simplex(2).unwrap();
        let v = DiscreteVectorField::validate(&t, []).unwrap();
        assert_eq!(v.critical_report().counts, vec![3, 3, 1]);
    }

    #[test]
    fn collapsed_edge() {
        let e = catalog::path(2).unwrap();
        let v = DiscreteVectorField::validate(&e, [pair(&e, "a", "a b")]).unwrap();
        let r = v.critical_report();
        assert_eq!(r.counts, vec![1, 0]);
        assert_eq!(r.critical[0], cells(&e, &["b"]));
    }

    #[test]
    fn closed_vpath_on_triangle_boundary() {
        let c = catalog::cycle(3).unwrap();
        let pairs = [
            pair(&c, "a", "a b"),
            pair(&c, "b", "b c"),
            pair(&c, "c", "a c"),
        ];
        let err = DiscreteVectorField::validate(&c, pairs).unwrap_err();
        let FieldError::ClosedVPath { cycle } = err else {
            panic!("expected a closed path, got {err:?}")
        };
        assert_eq!(cycle, cells(&c, &["a", "a b", "b", "b c", "c", "a c", "a"]));
    }

    #[test]
    fn matching_and_incidence_errors() {
        let t = catalog::full_simplex(2).unwrap();
        let twice = [pair(&t, "a", "a b"), pair(&t, "a", "a c")];
        assert!(matches!(
            DiscreteVectorField::validate(&t, twice),
            Err(FieldError::NotAMatching { .. })
        ));
        let skip = [pair(&t, "a", "a b c")];
        assert!(matches!(
            DiscreteVectorField::validate(&t, skip),
            Err(FieldError::NotIncidence { .. })
        ));
    }

    #[test]
    fn euler_identity_for_a_field() {
        let t = catalog::full_simplex(2).unwrap();
        let v = DiscreteVectorField::validate(
            &t,
            [
                pair(&t, "b", "a b"),
                pair(&t, "c", "a c"),
                pair(&t, "b c", "a b c"),
            ],
        )
        .unwrap();
        let r = v.critical_report();
        assert_eq!(r.counts, vec![1, 0, 0]);
        assert_eq!(r.alternating_sum(), t.euler_characteristic());
    }
}
