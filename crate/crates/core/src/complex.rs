//! Finite abstract simplicial complexes with full face/coface incidence.
//!
//! Vertex labels are opaque strings ordered lexicographically. Cells are
//! stored sorted by `(dimension, lexicographic vertex sequence)` and are
//! addressed by [`CellId`], the position in that order, so every iteration
//! over cells is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};

/// Hard cap on the number of cells of a complex.
pub const MAX_CELLS: usize = 1 << 20;

/// Index of a cell in the `(dimension, lexicographic)` order of its complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A simplex as a strictly increasing list of vertex indices into the label
/// table of its complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The immediate face obtained by dropping the vertex at `position`.
    pub fn drop_vertex(&self, position: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(position);
        Simplex(v)
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One immediate incidence seen from one side: the other cell and the sign
/// `(-1)^i`, `i` being the position of the vertex of the coface that is
/// missing from the face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub cell: CellId,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedIncidence {
    pub face: CellId,
    pub coface: CellId,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    cells: Vec<Simplex>,
    lookup: HashMap<Simplex, CellId>,
    faces: Vec<Vec<Incidence>>,
    cofaces: Vec<Vec<Incidence>>,
    /// `dim_offsets[d]..dim_offsets[d + 1]` are the ids of the d-cells.
    dim_offsets: Vec<usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.cells == other.cells
    }
}

impl Eq for SimplicialComplex {}

pub(crate) fn validate_label(label: &str) -> Result<()> {
    let bad = label.is_empty()
        || label == "->"
        || label.starts_with('#')
        || label.contains(':')
        || label.chars().any(char::is_whitespace);
    if bad {
        Err(Error::InvalidLabel(label.to_string()))
    } else {
        Ok(())
    }
}

impl SimplicialComplex {
    /// Downward closure of a list of maximal simplices given by vertex labels.
    pub fn build_from_maximal<F, S>(facets: &[F]) -> Result<Self>
    where
        F: AsRef<[S]>,
        S: AsRef<str>,
    {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut label_set = BTreeSet::new();
        for (i, facet) in facets.iter().enumerate() {
            let facet = facet.as_ref();
            if facet.is_empty() {
                return Err(Error::EmptyFacet { facet: i });
            }
            let mut seen = BTreeSet::new();
            for label in facet {
                let label = label.as_ref();
                validate_label(label)?;
                if !seen.insert(label) {
                    return Err(Error::DuplicateVertex {
                        facet: i,
                        label: label.to_string(),
                    });
                }
                label_set.insert(label.to_string());
            }
        }
        let labels: Vec<String> = label_set.into_iter().collect();
        let index: HashMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as u32))
            .collect();

        let mut cells = BTreeSet::new();
        for facet in facets {
            let verts: Vec<u32> = facet.as_ref().iter().map(|l| index[l.as_ref()]).collect();
            let top = Simplex::new(verts);
            if top.0.len() > 20 {
                return Err(Error::TooManyCells { limit: MAX_CELLS });
            }
            if cells.contains(&top) {
                continue;
            }
            let n = top.0.len();
            for mask in 1u32..(1u32 << n) {
                let sub: Vec<u32> = (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| top.0[i])
                    .collect();
                cells.insert(Simplex(sub));
                if cells.len() > MAX_CELLS {
                    return Err(Error::TooManyCells { limit: MAX_CELLS });
                }
            }
        }
        Ok(Self::from_sorted_cells(labels, cells.into_iter().collect()))
    }

    /// `cells` must be closed under faces and sorted by `(dim, lex)`.
    fn from_sorted_cells(labels: Vec<String>, cells: Vec<Simplex>) -> Self {
        let lookup: HashMap<Simplex, CellId> = cells
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), CellId(i as u32)))
            .collect();
        let n = cells.len();
        let mut faces = vec![Vec::new(); n];
        let mut cofaces = vec![Vec::new(); n];
        for (i, s) in cells.iter().enumerate() {
            if s.0.len() < 2 {
                continue;
            }
            for pos in 0..s.0.len() {
                let face = lookup[&s.drop_vertex(pos)];
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                faces[i].push(Incidence { cell: face, sign });
                cofaces[face.index()].push(Incidence {
                    cell: CellId(i as u32),
                    sign,
                });
            }
            faces[i].sort_by_key(|inc| inc.cell);
        }
        // cofaces are pushed in increasing coface order already
        let top = cells.last().map_or(0, Simplex::dim);
        let mut dim_offsets = vec![0; top + 2];
        for s in &cells {
            dim_offsets[s.dim() + 1] += 1;
        }
        for d in 1..dim_offsets.len() {
            dim_offsets[d] += dim_offsets[d - 1];
        }
        SimplicialComplex {
            labels,
            cells,
            lookup,
            faces,
            cofaces,
            dim_offsets,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_offsets.len() - 2
    }

    pub fn cell_ids(&self) -> impl DoubleEndedIterator<Item = CellId> + ExactSizeIterator {
        (0..self.cells.len() as u32).map(CellId)
    }

    pub fn dim_range(&self, d: usize) -> Range<usize> {
        if d > self.dim() {
            return 0..0;
        }
        self.dim_offsets[d]..self.dim_offsets[d + 1]
    }

    pub fn cells_of_dim(&self, d: usize) -> impl DoubleEndedIterator<Item = CellId> {
        self.dim_range(d).map(|i| CellId(i as u32))
    }

    pub fn simplex(&self, id: CellId) -> &Simplex {
        &self.cells[id.index()]
    }

    pub fn dim_of(&self, id: CellId) -> usize {
        self.cells[id.index()].dim()
    }

    pub fn faces(&self, id: CellId) -> &[Incidence] {
        &self.faces[id.index()]
    }

    pub fn cofaces(&self, id: CellId) -> &[Incidence] {
        &self.cofaces[id.index()]
    }

    /// Sign of `face` in the boundary of `coface`, if `face ≺ coface`.
    pub fn incidence_sign(&self, face: CellId, coface: CellId) -> Option<i8> {
        self.faces(coface)
            .iter()
            .find(|inc| inc.cell == face)
            .map(|inc| inc.sign)
    }

    pub fn is_immediate_face(&self, face: CellId, coface: CellId) -> bool {
        self.incidence_sign(face, coface).is_some()
    }

    pub fn oriented_incidences(&self) -> impl Iterator<Item = OrientedIncidence> + '_ {
        self.cell_ids().flat_map(move |c| {
            self.faces(c).iter().map(move |inc| OrientedIncidence {
                face: inc.cell,
                coface: c,
                sign: inc.sign,
            })
        })
    }

    pub fn vertex_labels(&self, id: CellId) -> Vec<&str> {
        self.simplex(id)
            .vertices()
            .iter()
            .map(|&v| self.labels[v as usize].as_str())
            .collect()
    }

    /// Space separated vertex labels, the notation used by all text formats.
    pub fn cell_name(&self, id: CellId) -> String {
        self.vertex_labels(id).join(" ")
    }

    /// Looks up a cell by its vertex labels, in any order.
    pub fn find_cell<S: AsRef<str>>(&self, labels: &[S]) -> Option<CellId> {
        let mut verts = Vec::with_capacity(labels.len());
        for l in labels {
            let i = self
                .labels
                .binary_search_by(|x| x.as_str().cmp(l.as_ref()))
                .ok()?;
            verts.push(i as u32);
        }
        let n = verts.len();
        let s = Simplex::new(verts);
        if s.0.len() != n || n == 0 {
            return None;
        }
        self.lookup.get(&s).copied()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|d| self.dim_range(d).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Number of connected components of the 1-skeleton.
    pub fn num_components(&self) -> usize {
        let n = self.dim_range(0).len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in self.cells_of_dim(1) {
            let f = self.faces(e);
            let (a, b) = (
                find(&mut parent, f[0].cell.index()),
                find(&mut parent, f[1].cell.index()),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// Cells with no cofaces.
    pub fn facets(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cell_ids().filter(move |&c| self.cofaces(c).is_empty())
    }

    /// Barycentric subdivision. The barycenter of a cell `a b c` is labelled
    /// `b(a,b,c)`.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let bary: Vec<String> = self
            .cell_ids()
            .map(|c| format!("b({})", self.vertex_labels(c).join(",")))
            .collect();
        let mut flags = Vec::new();
        for top in self.facets() {
            let mut chain = vec![top];
            self.collect_flags(&mut chain, &mut flags);
        }
        let facets: Vec<Vec<&str>> = flags
            .iter()
            .map(|chain| chain.iter().map(|c| bary[c.index()].as_str()).collect())
            .collect();
        Self::build_from_maximal(&facets).expect("subdivision of a valid complex is valid")
    }

    fn collect_flags(&self, chain: &mut Vec<CellId>, out: &mut Vec<Vec<CellId>>) {
        let last = *chain.last().unwrap();
        if self.dim_of(last) == 0 {
            out.push(chain.clone());
            return;
        }
        for inc in self.faces(last) {
            chain.push(inc.cell);
            self.collect_flags(chain, out);
            chain.pop();
        }
    }

    /// Cone with the given apex label, which must not already be a vertex.
    pub fn cone(&self, apex: &str) -> Result<SimplicialComplex> {
        if self.labels.iter().any(|l| l == apex) {
            return Err(Error::InvalidLabel(apex.to_string()));
        }
        let facets: Vec<Vec<&str>> = self
            .facets()
            .map(|c| {
                let mut f = self.vertex_labels(c);
                f.push(apex);
                f
            })
            .collect();
        Self::build_from_maximal(&facets)
    }

    /// Cells grouped by dimension, each as its list of vertex labels.
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            dimension: self.dim(),
            f_vector: self.f_vector(),
            euler: self.euler_characteristic(),
            cells: (0..=self.dim())
                .map(|d| {
                    self.cells_of_dim(d)
                        .map(|c| {
                            self.vertex_labels(c)
                                .into_iter()
                                .map(String::from)
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexJson {
    pub dimension: usize,
    pub f_vector: Vec<usize>,
    pub euler: i64,
    pub cells: Vec<Vec<Vec<String>>>,
}
