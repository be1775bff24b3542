mod common;

use nmorse::analysis::{
    critical_incidence_graph, hall_matching, morse_boundary, morse_homology_check,
    theorem_gap_certificate, MatchingCertificate,
};
use nmorse::catalog::{self, catalog};
use nmorse::hall::Side;
use nmorse::homology::relaxed_hypotheses_hold;
use nmorse::search::{
    collapse_witness, critical_lower_bound, for_each_field_with_vector, is_collapsible,
    min_critical_cells, nk, SearchConfig, Verdict,
};
use nmorse::{nkf, SimplicialComplex};

use common::random_field;

fn config(budget: u64, jobs: usize) -> SearchConfig {
    SearchConfig {
        budget,
        jobs,
        ..SearchConfig::default()
    }
}

fn corpus() -> Vec<(String, SimplicialComplex)> {
    let mut out: Vec<(String, SimplicialComplex)> = [
        "point",
        "path_4",
        "cycle_3",
        "cycle_5",
        "full_simplex_2",
        "full_simplex_3",
        "rp2_6",
        "torus_7",
    ]
    .iter()
    .map(|n| (n.to_string(), catalog(n).unwrap()))
    .collect();
    out.push((
        "cone_cycle_5".into(),
        catalog::cycle(5).unwrap().cone("apex").unwrap(),
    ));
    out.push((
        "cone_path_3".into(),
        catalog::path(3).unwrap().cone("apex").unwrap(),
    ));
    out.push((
        "sd_full_simplex_2".into(),
        catalog::full_simplex(2).unwrap().barycentric_subdivision(),
    ));
    out
}

#[test]
fn collapsibility_matches_one_critical_cell() {
    for (name, k) in corpus() {
        let c = is_collapsible(&k, &SearchConfig::default()).unwrap();
        let opt = min_critical_cells(&k, &SearchConfig::default()).unwrap();
        assert!(c.exact && opt.exact, "{name}");
        assert_eq!(
            c.verdict == Verdict::Collapsible,
            opt.total() == 1,
            "{name}"
        );
    }
}

#[test]
fn optimal_vectors_respect_bounds_and_euler() {
    for (name, k) in corpus() {
        let opt = min_critical_cells(&k, &SearchConfig::default()).unwrap();
        let lb = critical_lower_bound(&k);
        assert_eq!(opt.lower_bound, lb, "{name}");
        assert!(lb.iter().sum::<usize>() <= opt.total(), "{name}");
        let alt: i64 = opt
            .vector
            .iter()
            .enumerate()
            .map(|(d, &m)| if d % 2 == 0 { m as i64 } else { -(m as i64) })
            .sum();
        assert_eq!(alt, k.euler_characteristic(), "{name}");
        assert_eq!(opt.vector[0], k.num_components(), "{name}");
        for r in &opt.refuted {
            assert!(r.iter().sum::<usize>() <= opt.total(), "{name}");
        }
        for w in &opt.witnesses {
            assert_eq!(w.critical_report().counts, opt.vector, "{name}");
            let again = nmorse::DiscreteVectorField::validate(&k, w.pairs());
            assert!(again.is_ok(), "{name}");
        }
    }
}

#[test]
fn collapsible_complexes_have_zero_and_others_do_not() {
    for (name, k) in corpus() {
        if k.dim() > 2 || !relaxed_hypotheses_hold(&k).unwrap() {
            continue;
        }
        let r = nk(&k, &SearchConfig::default()).unwrap();
        assert!(r.exact, "{name}");
        let collapsible = is_collapsible(&k, &SearchConfig::default())
            .unwrap()
            .verdict;
        if collapsible == Verdict::Collapsible {
            assert_eq!(r.value, 0, "{name}");
            let w = collapse_witness(&k, &SearchConfig::default()).unwrap();
            assert_eq!(nkf(&w).unwrap().value, 0, "{name}");
        } else {
            assert!(r.value > 0, "{name}");
            let cert = theorem_gap_certificate(&r.witness).unwrap();
            assert_eq!(cert.nkf, r.nkf, "{name}");
        }
    }
}

#[test]
fn nk_agrees_with_full_enumeration_on_rp2() {
    let k = catalog("rp2_6").unwrap();
    let r = nk(&k, &SearchConfig::default()).unwrap();
    assert!(r.exact);
    let mut best = u64::MAX;
    let mut seen = 0u64;
    let e = for_each_field_with_vector(&k, &r.vector, &config(u64::MAX / 4, 1), |v| {
        let value = nkf(v).unwrap().value;
        let cert = theorem_gap_certificate(v).unwrap();
        assert_eq!(cert.nkf, value);
        assert_eq!(cert.gap_sum(), value);
        assert!(value > 0);
        best = best.min(value.unsigned_abs());
        seen += 1;
        true
    })
    .unwrap();
    assert!(e.complete);
    assert_eq!(e.fields, seen);
    assert_eq!(best, r.value);
    assert_eq!(nkf(&r.witness).unwrap().value, r.nkf);
    assert_eq!(r.nkf.unsigned_abs(), r.value);
}

#[test]
fn results_do_not_depend_on_threads() {
    let k = catalog("rp2_6").unwrap();
    for budget in [500, 5_000, 50_000, SearchConfig::default().budget] {
        let a = nk(&k, &config(budget, 1)).unwrap();
        let b = nk(&k, &config(budget, 3)).unwrap();
        assert_eq!(a, b, "budget {budget}");
        let a = min_critical_cells(&k, &config(budget, 1)).unwrap();
        let b = min_critical_cells(&k, &config(budget, 3)).unwrap();
        assert_eq!(a, b, "budget {budget}");
    }
    let k = catalog("dunce_hat").unwrap();
    let a = is_collapsible(&k, &config(20_000, 1)).unwrap();
    let b = is_collapsible(&k, &config(20_000, 3)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn truncated_searches_say_so() {
    let k = catalog("rp2_6").unwrap();
    let r = nk(&k, &config(100, 1)).unwrap();
    assert!(!r.exact);
    assert!(r.nodes <= 100);
    assert_eq!(nkf(&r.witness).unwrap().value, r.nkf);
}

#[test]
fn morse_complexes_of_random_fields() {
    for (name, k) in corpus() {
        for seed in 0..20 {
            let v = random_field(&k, seed);
            let m = morse_boundary(&v).unwrap();
            assert!(m.composes_to_zero(), "{name} seed {seed}");
            assert!(morse_homology_check(&v).unwrap(), "{name} seed {seed}");
        }
    }
}

#[test]
fn boundary_entries_need_a_gradient_path() {
    for (name, k) in corpus() {
        if k.dim() != 2 {
            continue;
        }
        for seed in 0..20 {
            let v = random_field(&k, seed);
            let m = morse_boundary(&v).unwrap();
            let g = critical_incidence_graph(&v).unwrap();
            let b = &m.boundaries[1];
            for i in 0..b.rows {
                for j in 0..b.cols {
                    if b.get(i, j) != 0 {
                        assert!(
                            g.adjacent.binary_search(&(i, j)).is_ok(),
                            "{name} seed {seed}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn hall_certificates_are_checkable() {
    for (name, k) in corpus() {
        if k.dim() != 2 {
            continue;
        }
        for seed in 0..20 {
            let v = random_field(&k, seed);
            let g = critical_incidence_graph(&v).unwrap();
            match hall_matching(&g) {
                MatchingCertificate::Complete { pairs } => {
                    assert_eq!(pairs.len(), g.edges.len(), "{name}");
                    assert_eq!(pairs.len(), g.triangles.len(), "{name}");
                    for (e, t) in pairs {
                        let a = g.edges.iter().position(|&x| x == e).unwrap();
                        let b = g.triangles.iter().position(|&x| x == t).unwrap();
                        assert!(g.adjacent.contains(&(a, b)), "{name}");
                    }
                }
                MatchingCertificate::Violator {
                    side,
                    set,
                    neighbours,
                } => {
                    assert!(neighbours.len() < set.len(), "{name}");
                    let mut around: Vec<_> = g
                        .adjacent
                        .iter()
                        .filter_map(|&(a, b)| match side {
                            Side::Left => set.contains(&g.edges[a]).then_some(g.triangles[b]),
                            Side::Right => set.contains(&g.triangles[b]).then_some(g.edges[a]),
                        })
                        .collect();
                    around.sort();
                    around.dedup();
                    let mut claimed = neighbours.clone();
                    claimed.sort();
                    assert_eq!(around, claimed, "{name}");
                }
            }
        }
    }
}
