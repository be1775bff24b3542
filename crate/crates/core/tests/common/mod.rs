#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nmorse::{CellId, DiscreteVectorField, SimplicialComplex};

/// Random complexes on at most six vertices with facets of up to four
/// vertices.
pub fn small_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u8..6, 1..=4), 1..6).prop_map(|facets| {
        let named: Vec<Vec<String>> = facets
            .iter()
            .map(|f| f.iter().map(|v| format!("v{v}")).collect())
            .collect();
        SimplicialComplex::build_from_maximal(&named).unwrap()
    })
}

/// Pairs kept in random order whenever they leave the Hasse digraph acyclic,
/// checked by [`has_directed_cycle`] alone.
pub fn random_field<'a>(k: &'a SimplicialComplex, seed: u64) -> DiscreteVectorField<'a> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inc: Vec<(CellId, CellId)> = k
        .oriented_incidences()
        .map(|i| (i.face, i.coface))
        .collect();
    inc.shuffle(&mut rng);
    let keep = rng.gen_range(0.3..1.0);
    let mut used = vec![false; k.num_cells()];
    let mut pairs = Vec::new();
    for (a, b) in inc {
        if used[a.index()] || used[b.index()] || !rng.gen_bool(keep) {
            continue;
        }
        pairs.push((a, b));
        if has_directed_cycle(k, &pairs) {
            pairs.pop();
        } else {
            used[a.index()] = true;
            used[b.index()] = true;
        }
    }
    DiscreteVectorField::validate(k, pairs).expect("acyclic by construction")
}

/// Depth-first cycle search on the Hasse digraph with matched edges reversed.
pub fn has_directed_cycle(k: &SimplicialComplex, pairs: &[(CellId, CellId)]) -> bool {
    let n = k.num_cells();
    let mut succ = vec![Vec::new(); n];
    for i in k.oriented_incidences() {
        if pairs.contains(&(i.face, i.coface)) {
            succ[i.coface.index()].push(i.face.index());
        } else {
            succ[i.face.index()].push(i.coface.index());
        }
    }
    fn visit(u: usize, succ: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[u] = 1;
        for &w in &succ[u] {
            if state[w] == 1 || (state[w] == 0 && visit(w, succ, state)) {
                return true;
            }
        }
        state[u] = 2;
        false
    }
    let mut state = vec![0u8; n];
    (0..n).any(|u| state[u] == 0 && visit(u, &succ, &mut state))
}
