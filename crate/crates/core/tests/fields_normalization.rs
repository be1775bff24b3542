mod common;

use proptest::prelude::*;

use nmorse::catalog::catalog;
use nmorse::io::{parse_field, parse_mf, write_field, write_mf};
use nmorse::normalize::brute_force_normalize;
use nmorse::{normalize, CellId, DiscreteVectorField, MorseFunction, SimplicialComplex};

use common::{has_directed_cycle, random_field, small_complex};

/// Every value of `h` is as small as the constraints allow: lowering one
/// value by one breaks nonnegativity, a strict inequality or a pair equality.
fn locally_minimal(v: &DiscreteVectorField<'_>, h: &[u32]) -> bool {
    let k = v.complex();
    k.cell_ids().all(|c| {
        let x = h[c.index()];
        if x == 0 {
            return true;
        }
        let lowered = x - 1;
        let below = k.faces(c).iter().any(|i| {
            let f = h[i.cell.index()];
            if v.is_matched_pair(i.cell, c) {
                f != lowered
            } else {
                f >= lowered
            }
        });
        let above = k.cofaces(c).iter().any(|i| {
            let t = h[i.cell.index()];
            if v.is_matched_pair(c, i.cell) {
                t != lowered
            } else {
                lowered >= t
            }
        });
        below || above
    })
}

fn alternating_counts(v: &DiscreteVectorField<'_>) -> i64 {
    v.critical_report().alternating_sum()
}

#[test]
fn empty_field_normalizes_to_dimension() {
    for name in ["full_simplex_2", "rp2_6", "torus_7"] {
        let k = catalog(name).unwrap();
        let h = normalize(&DiscreteVectorField::empty(&k));
        for c in k.cell_ids() {
            assert_eq!(h.value(c) as usize, k.dim_of(c));
        }
    }
}

#[test]
fn brute_force_agrees_on_random_small_fields() {
    let k = catalog("full_simplex_2").unwrap();
    for seed in 0..200 {
        let v = random_field(&k, seed);
        let h = normalize(&v);
        let oracle = brute_force_normalize(&v, k.num_cells() as u32).unwrap();
        assert_eq!(h.values(), oracle.values());
    }
}

fn field_checks(k: &SimplicialComplex, seed: u64) -> Result<(), TestCaseError> {
    let v = random_field(k, seed);
    prop_assert_eq!(alternating_counts(&v), k.euler_characteristic());

    let h = normalize(&v);
    let f = h.to_morse_function();
    prop_assert!(f.is_morse_function(k).unwrap());
    prop_assert_eq!(&f.gradient_field(k).unwrap(), &v);
    // idempotent
    let again = f.gradient_field(k).unwrap();
    let h2 = normalize(&again);
    prop_assert_eq!(h2.values(), h.values());
    prop_assert!(locally_minimal(&v, h.values()));

    // text formats
    prop_assert_eq!(&parse_field(k, &write_field(&v)).unwrap(), &v);
    let mf = write_mf(k, &f);
    prop_assert_eq!(parse_mf(k, &mf).unwrap(), f.clone());

    // equivalence: reflexive, symmetric, and shifting values keeps the class
    let shifted = MorseFunction::from_integers(h.values().iter().map(|&x| 3 * x as i64 + 1));
    prop_assert!(f.equivalent(&f, k).unwrap());
    prop_assert!(f.equivalent(&shifted, k).unwrap());
    prop_assert!(shifted.equivalent(&f, k).unwrap());
    let dims = MorseFunction::dimension_map(k);
    let a = f.equivalent(&dims, k).unwrap();
    let b = shifted.equivalent(&dims, k).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_fields_round_trip(k in small_complex(), seed in any::<u64>()) {
        field_checks(&k, seed)?;
    }

    #[test]
    fn acyclicity_matches_cycle_search(k in small_complex(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        prop_assume!(k.num_cells() <= 12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let inc: Vec<(CellId, CellId)> = k.oriented_incidences().map(|i| (i.face, i.coface)).collect();
        let mut used = vec![false; k.num_cells()];
        let mut pairs = Vec::new();
        for (a, b) in inc {
            if !used[a.index()] && !used[b.index()] && rng.gen_bool(0.6) {
                used[a.index()] = true;
                used[b.index()] = true;
                pairs.push((a, b));
            }
        }
        let verdict = DiscreteVectorField::validate(&k, pairs.iter().copied());
        prop_assert_eq!(verdict.is_ok(), !has_directed_cycle(&k, &pairs));
    }
}

#[test]
fn catalog_fields_round_trip() {
    for name in ["dunce_hat", "rp2_6", "torus_7", "bing_house"] {
        let k = catalog(name).unwrap();
        for seed in 0..10 {
            field_checks(&k, seed).unwrap();
        }
    }
}
