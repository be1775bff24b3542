//! Named test complexes.
//!
//! Parametric families are generated; the 2-dimensional examples are shipped
//! as `.cplx` data files.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::io::parse_cplx;

const DUNCE_HAT: &str = include_str!("../data/dunce_hat.cplx");
const RP2_6: &str = include_str!("../data/rp2_6.cplx");
const TORUS_7: &str = include_str!("../data/torus_7.cplx");
const BING_HOUSE: &str = include_str!("../data/bing_house.cplx");

/// Names accepted by [`catalog`]; `d` and `n` stand for integers.
pub const NAMES: &[&str] = &[
    "point",
    "full_simplex_d",
    "path_n",
    "cycle_n",
    "dunce_hat",
    "rp2_6",
    "torus_7",
    "bing_house",
];

/// Letters for up to 26 vertices, zero padded numbers beyond that, so the
/// lexicographic order of the labels follows the construction order.
pub fn vertex_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        let width = n.to_string().len();
        (1..=n).map(|i| format!("{i:0width$}")).collect()
    }
}

pub fn full_simplex(d: usize) -> Result<SimplicialComplex> {
    SimplicialComplex::build_from_maximal(&[vertex_names(d + 1)])
}

pub fn path(n: usize) -> Result<SimplicialComplex> {
    let v = vertex_names(n);
    if n == 1 {
        return SimplicialComplex::build_from_maximal(&[v]);
    }
    let edges: Vec<[String; 2]> = v.windows(2).map(|w| [w[0].clone(), w[1].clone()]).collect();
    SimplicialComplex::build_from_maximal(&edges)
}

pub fn cycle(n: usize) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::UnknownCatalog(format!("cycle_{n}")));
    }
    let v = vertex_names(n);
    let edges: Vec<[String; 2]> = (0..n)
        .map(|i| [v[i].clone(), v[(i + 1) % n].clone()])
        .collect();
    SimplicialComplex::build_from_maximal(&edges)
}

fn parametric(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

pub fn catalog(name: &str) -> Result<SimplicialComplex> {
    let unknown = || Error::UnknownCatalog(name.to_string());
    match name {
        "point" => full_simplex(0),
        "dunce_hat" => parse_cplx(DUNCE_HAT),
        "rp2_6" => parse_cplx(RP2_6),
        "torus_7" => parse_cplx(TORUS_7),
        "bing_house" => parse_cplx(BING_HOUSE),
        _ => {
            if let Some(d) = parametric(name, "full_simplex_") {
                if d > 19 {
                    return Err(unknown());
                }
                full_simplex(d)
            } else if let Some(n) = parametric(name, "path_") {
                if n == 0 {
                    return Err(unknown());
                }
                path(n)
            } else if let Some(n) = parametric(name, "cycle_") {
                cycle(n)
            } else {
                Err(unknown())
            }
        }
    }
}
