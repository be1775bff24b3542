//! The normalization `h` of a gradient field and the alternating sum 𝔑(K,f).
//!
//! `h` is the least nonnegative integer solution of
//!
//! ```text
//! h(τ) >= h(σ) + 1   for every unmatched incidence σ ≺ τ
//! h(σ) == h(τ)       for every matched pair (σ, τ)
//! ```
//!
//! Contracting each matched pair to one node turns the system into longest
//! path lengths on a DAG (the contraction is acyclic exactly when the field
//! is), evaluated along a topological order with all sources at 0.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::morse_fn::MorseFunction;

/// Largest complex accepted by [`brute_force_normalize`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedFunction<'a> {
    values: Vec<u32>,
    field: DiscreteVectorField<'a>,
}

impl<'a> NormalizedFunction<'a> {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, c: CellId) -> u32 {
        self.values[c.index()]
    }

    pub fn field(&self) -> &DiscreteVectorField<'a> {
        &self.field
    }

    pub fn to_morse_function(&self) -> MorseFunction {
        MorseFunction::from_integers(self.values.iter().map(|&v| v as i64))
    }
}

pub fn normalize<'a>(field: &DiscreteVectorField<'a>) -> NormalizedFunction<'a> {
    let k = field.complex();
    let n = k.num_cells();
    // a node is named by the smaller cell of its pair
    let node = |c: CellId| field.partner(c).map_or(c, |p| p.min(c)).index();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0u32; n];
    for inc in k.oriented_incidences() {
        if field.is_matched_pair(inc.face, inc.coface) {
            continue;
        }
        let (a, b) = (node(inc.face), node(inc.coface));
        succ[a].push(b);
        indeg[b] += 1;
    }
    let mut height = vec![0u32; n];
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&i| node(CellId(i as u32)) == i && indeg[i] == 0)
        .collect();
    let mut seen = 0;
    while let Some(a) = queue.pop_front() {
        seen += 1;
        for &b in &succ[a] {
            height[b] = height[b].max(height[a] + 1);
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    let nodes = (0..n).filter(|&i| node(CellId(i as u32)) == i).count();
    assert_eq!(
        seen, nodes,
        "contracted Hasse digraph of a valid field is acyclic"
    );
    let values: Vec<u32> = k.cell_ids().map(|c| height[node(c)]).collect();
    debug_assert!(values.iter().all(|&v| (v as usize) < n.max(1)));
    NormalizedFunction {
        values,
        field: field.clone(),
    }
}

/// 𝔑(K,f) together with the contribution of every critical cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NkfValue {
    pub value: i64,
    pub contributions: Vec<(CellId, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NkfJson {
    pub value: i64,
    pub contributions: Vec<ContributionJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContributionJson {
    pub cell: String,
    pub dim: usize,
    pub h: u32,
    pub signed: i64,
}

impl NkfValue {
    pub fn to_json(&self, h: &NormalizedFunction<'_>) -> NkfJson {
        let k = h.field().complex();
        NkfJson {
            value: self.value,
            contributions: self
                .contributions
                .iter()
                .map(|&(c, signed)| ContributionJson {
                    cell: k.cell_name(c),
                    dim: k.dim_of(c),
                    h: h.value(c),
                    signed,
                })
                .collect(),
        }
    }
}

fn signed(k: &SimplicialComplex, c: CellId, h: u32) -> i64 {
    if k.dim_of(c).is_multiple_of(2) {
        h as i64
    } else {
        -(h as i64)
    }
}

/// Alternating sum of `h` over all cells, cross-checked against the sum over
/// critical cells only.
pub fn nkf_of(h: &NormalizedFunction<'_>) -> Result<NkfValue> {
    let field = h.field();
    let k = field.complex();
    let full: i64 = k.cell_ids().map(|c| signed(k, c, h.value(c))).sum();
    let contributions: Vec<(CellId, i64)> = field
        .critical_cells()
        .map(|c| (c, signed(k, c, h.value(c))))
        .collect();
    let critical: i64 = contributions.iter().map(|&(_, v)| v).sum();
    if full != critical {
        return Err(Error::Internal(format!(
            "alternating sum over all cells is {full}, over critical cells {critical}"
        )));
    }
    Ok(NkfValue {
        value: full,
        contributions,
    })
}

pub fn nkf(field: &DiscreteVectorField<'_>) -> Result<NkfValue> {
    nkf_of(&normalize(field))
}

/// Pointwise minimum of every integer function with values in `0..=bound`
/// whose strict comparison profile on immediate incidences is the one of
/// `field`. Exponential; only for complexes of at most
/// [`BRUTE_FORCE_MAX_CELLS`] cells.
pub fn brute_force_normalize<'a>(
    field: &DiscreteVectorField<'a>,
    bound: u32,
) -> Result<NormalizedFunction<'a>> {
    let k = field.complex();
    let n = k.num_cells();
    if n > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::TooLarge {
            cells: n,
            limit: BRUTE_FORCE_MAX_CELLS,
        });
    }
    if (bound as usize) < n {
        return Err(Error::BoundTooSmall { bound, cells: n });
    }
    let mut best = vec![u32::MAX; n];
    let mut current = vec![0u32; n];
    enumerate(field, bound, 0, &mut current, &mut best);
    if best.contains(&u32::MAX) {
        return Err(Error::Internal("no function realizes the field".into()));
    }
    Ok(NormalizedFunction {
        values: best,
        field: field.clone(),
    })
}

/// Cells are assigned in id order, so every face is fixed before its cofaces
/// and each constraint is checked as soon as both ends are known.
fn enumerate(
    field: &DiscreteVectorField<'_>,
    bound: u32,
    i: usize,
    current: &mut [u32],
    best: &mut [u32],
) {
    let k = field.complex();
    if i == current.len() {
        for (b, &c) in best.iter_mut().zip(current.iter()) {
            *b = (*b).min(c);
        }
        return;
    }
    let c = CellId(i as u32);
    for v in 0..=bound {
        let ok = k.faces(c).iter().all(|inc| {
            let fv = current[inc.cell.index()];
            if field.is_matched_pair(inc.cell, c) {
                fv >= v
            } else {
                fv < v
            }
        });
        if ok {
            current[i] = v;
            enumerate(field, bound, i + 1, current, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cell(k: &SimplicialComplex, name: &str) -> CellId {
        k.find_cell(&name.split_whitespace().collect::<Vec<_>>())
            .unwrap()
    }

    fn field<'a>(k: &'a SimplicialComplex, pairs: &[(&str, &str)]) -> DiscreteVectorField<'a> {
        DiscreteVectorField::validate(k, pairs.iter().map(|(a, b)| (cell(k, a), cell(k, b))))
            .unwrap()
    }

    #[test]
    fn empty_field_gives_dimension_map() {
        let k = catalog::catalog("rp2_6").unwrap();
        let h = normalize(&DiscreteVectorField::empty(&k));
        for c in k.cell_ids() {
            assert_eq!(h.value(c) as usize, k.dim_of(c));
        }
    }

    #[test]
    fn collapsed_edge_values() {
        let k = catalog::path(2).unwrap();
        let h = normalize(&field(&k, &[("a", "a b")]));
        assert_eq!(h.value(cell(&k, "b")), 0);
        assert_eq!(h.value(cell(&k, "a")), 1);
        assert_eq!(h.value(cell(&k, "a b")), 1);
    }

    #[test]
    fn triangle_boundary_values_and_nkf() {
        let k = catalog::cycle(3).unwrap();
        let v = field(&k, &[("b", "a b"), ("c", "b c")]);
        let h = normalize(&v);
        let got: Vec<(String, u32)> = k.cell_ids().map(|c| (k.cell_name(c), h.value(c))).collect();
        let want = [
            ("a", 0),
            ("b", 1),
            ("c", 2),
            ("a b", 1),
            ("a c", 3),
            ("b c", 2),
        ];
        for ((name, val), (wn, wv)) in got.iter().zip(want) {
            assert_eq!((name.as_str(), *val), (wn, wv));
        }
        assert_eq!(nkf(&v).unwrap().value, -3);
    }

    #[test]
    fn nkf_of_full_triangle_without_pairs() {
        let k = catalog::full_simplex(2).unwrap();
        let n = nkf(&DiscreteVectorField::empty(&k)).unwrap();
        assert_eq!(n.value, -1);
        assert_eq!(n.contributions.len(), 7);
    }

    #[test]
    fn brute_force_single_vertex() {
        let k = catalog::catalog("point").unwrap();
        let v = DiscreteVectorField::empty(&k);
        assert_eq!(brute_force_normalize(&v, 1).unwrap().values(), &[0]);
    }

    #[test]
    fn brute_force_agrees_on_edge_fields() {
        let k = catalog::path(2).unwrap();
        for pairs in [vec![], vec![("a", "a b")], vec![("b", "a b")]] {
            let v = field(&k, &pairs);
            assert_eq!(brute_force_normalize(&v, 6).unwrap(), normalize(&v));
        }
    }

    #[test]
    fn brute_force_limits() {
        let big = catalog::catalog("rp2_6").unwrap();
        assert!(matches!(
            brute_force_normalize(&DiscreteVectorField::empty(&big), 40),
            Err(Error::TooLarge { .. })
        ));
        let k = catalog::path(2).unwrap();
        assert!(matches!(
            brute_force_normalize(&DiscreteVectorField::empty(&k), 2),
            Err(Error::BoundTooSmall { .. })
        ));
    }
}
