//! Integer simplicial homology through Smith normal form.

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `∂_k`: rows are the (k-1)-cells, columns the k-cells, both in cell order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub rows: Vec<CellId>,
    pub cols: Vec<CellId>,
    pub matrix: IntMatrix,
}

pub fn boundary_matrix(k: &SimplicialComplex, dim: usize) -> Result<BoundaryMatrix> {
    if dim == 0 || dim > k.dim() {
        return Err(Error::DimensionOutOfRange {
            k: dim,
            max: k.dim(),
        });
    }
    let rows: Vec<CellId> = k.cells_of_dim(dim - 1).collect();
    let cols: Vec<CellId> = k.cells_of_dim(dim).collect();
    let base = k.dim_range(dim - 1).start;
    let mut matrix = IntMatrix::zeros(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for inc in k.faces(c) {
            matrix.set(inc.cell.index() - base, j, inc.sign as i64);
        }
    }
    Ok(BoundaryMatrix {
        k: dim,
        rows,
        cols,
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    /// Unreduced Betti numbers `b_0, …, b_dim`.
    pub betti: Vec<usize>,
    /// Reduced Betti numbers; only `b_0` differs.
    pub reduced_betti: Vec<usize>,
    /// Torsion coefficients of `H_k`, each greater than one.
    pub torsion: Vec<Vec<u64>>,
    pub euler: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyJson {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<u64>>,
    pub euler: i64,
    pub acyclic: bool,
}

impl HomologyProfile {
    pub fn is_acyclic(&self) -> bool {
        self.reduced_betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    pub fn betti_at(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> HomologyJson {
        HomologyJson {
            betti: self.reduced_betti.clone(),
            torsion: self.torsion.clone(),
            euler: self.euler,
            acyclic: self.is_acyclic(),
        }
    }
}

/// Betti numbers of a chain complex from the ranks of its boundary maps:
/// `b_k = n_k - rank ∂_k - rank ∂_{k+1}`.
pub(crate) fn betti_from_ranks(sizes: &[usize], ranks: &[usize]) -> Vec<usize> {
    // ranks[k] is the rank of ∂_k, ranks[0] = 0
    (0..sizes.len())
        .map(|k| sizes[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
        .collect()
}

pub fn homology(k: &SimplicialComplex) -> HomologyProfile {
    let top = k.dim();
    let mut ranks = vec![0usize; top + 1];
    let mut torsion = vec![Vec::new(); top + 1];
    for d in 1..=top {
        let b = boundary_matrix(k, d).expect("dimension in range");
        let inv = b.matrix.smith_invariants();
        ranks[d] = inv.len();
        torsion[d - 1] = inv
            .iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_u64().expect("torsion coefficient fits in 64 bits"))
            .collect();
    }
    let betti = betti_from_ranks(&k.f_vector(), &ranks);
    let mut reduced_betti = betti.clone();
    reduced_betti[0] -= 1;
    HomologyProfile {
        betti,
        reduced_betti,
        torsion,
        euler: k.euler_characteristic(),
    }
}

pub fn is_acyclic(k: &SimplicialComplex) -> bool {
    homology(k).is_acyclic()
}

/// Connected, `χ = 1` and `H_2 = 0` for a complex of dimension at most 2.
pub fn relaxed_hypotheses_hold(k: &SimplicialComplex) -> Result<bool> {
    if k.dim() > 2 {
        return Err(Error::DimensionTooLarge {
            dim: k.dim(),
            max: 2,
        });
    }
    if !k.is_connected() || k.euler_characteristic() != 1 {
        return Ok(false);
    }
    // H_2 of a 2-complex is the kernel of ∂_2, hence free
    Ok(homology(k).betti_at(2) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, catalog};

    #[test]
    fn edge_boundary() {
        let e = catalog::path(2).unwrap();
        let b = boundary_matrix(&e, 1).unwrap();
        assert_eq!(b.matrix.data, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn triangle_boundary_column() {
        let t = catalog::full_simplex(2).unwrap();
        let b = boundary_matrix(&t, 2).unwrap();
        let names: Vec<String> = b.rows.iter().map(|&c| t.cell_name(c)).collect();
        assert_eq!(names, ["a b", "a c", "b c"]);
        assert_eq!(b.matrix.data, vec![vec![1], vec![-1], vec![1]]);
    }

    #[test]
    fn boundary_out_of_range() {
        let t = catalog::full_simplex(2).unwrap();
        assert!(boundary_matrix(&t, 0).is_err());
        assert!(boundary_matrix(&t, 3).is_err());
    }

    #[test]
    fn boundary_squares_to_zero() {
        for name in ["dunce_hat", "rp2_6", "torus_7", "full_simplex_4"] {
            let k = catalog(name).unwrap();
            for d in 2..=k.dim() {
                let a = boundary_matrix(&k, d - 1).unwrap().matrix;
                let b = boundary_matrix(&k, d).unwrap().matrix;
                assert!(a.checked_mul(&b).unwrap().is_zero(), "{name} d={d}");
            }
        }
    }

    #[test]
    fn circle() {
        let h = homology(&catalog::cycle(3).unwrap());
        assert_eq!(h.reduced_betti, vec![0, 1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
        assert!(!h.is_acyclic());
    }

    #[test]
    fn dunce_hat_is_acyclic() {
        let h = homology(&catalog("dunce_hat").unwrap());
        assert_eq!(h.reduced_betti, vec![0, 0, 0]);
        assert!(h.is_acyclic());
    }

    #[test]
    fn projective_plane() {
        let k = catalog("rp2_6").unwrap();
        let h = homology(&k);
        assert_eq!(h.reduced_betti, vec![0, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec![2], vec![]]);
        assert_eq!(h.euler, 1);
        assert!(!h.is_acyclic());
        assert!(relaxed_hypotheses_hold(&k).unwrap());
    }

    #[test]
    fn torus() {
        let k = catalog("torus_7").unwrap();
        assert_eq!(homology(&k).betti, vec![1, 2, 1]);
        assert!(!relaxed_hypotheses_hold(&k).unwrap());
    }

    #[test]
    fn relaxed_hypotheses() {
        assert!(relaxed_hypotheses_hold(&catalog::full_simplex(2).unwrap()).unwrap());
        assert!(!relaxed_hypotheses_hold(&catalog::cycle(4).unwrap()).unwrap());
        assert!(matches!(
            relaxed_hypotheses_hold(&catalog::full_simplex(3).unwrap()),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(is_acyclic(&catalog::full_simplex(2).unwrap()));
        assert!(!is_acyclic(&catalog::cycle(3).unwrap()));
    }

    #[test]
    fn bing_house_is_acyclic() {
        assert!(is_acyclic(&catalog("bing_house").unwrap()));
    }
}
