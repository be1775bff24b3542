//! Optimal gradient fields and 𝔑(K).
//!
//! On a connected complex every optimal field has a single critical vertex:
//! the vertices flowing to distinct critical vertices form basins, and
//! following V-paths from an edge between two basins ends at a critical edge
//! between two basins, which cancels against one of their critical vertices.
//! Candidate vectors keep that vertex, respect the weak Morse inequalities
//! and the Euler characteristic, and are tried by increasing total. In
//! dimension 2 they are `(1, m, χ - 1 + m)` for increasing `m`.

use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::homology::homology;
use crate::normalize::nkf;

use super::engine::{search, Engine, Flow, Outcome, Reducer};
use super::SearchConfig;

/// Deepest barycentric subdivision [`pl_probe`] accepts.
pub const MAX_PROBE_DEPTH: usize = 2;

fn check_scope(k: &SimplicialComplex, max_dim: usize) -> Result<()> {
    if k.dim() > max_dim {
        return Err(Error::DimensionTooLarge {
            dim: k.dim(),
            max: max_dim,
        });
    }
    if !k.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

/// Critical vectors with `m_0 = b_0`, `b_i <= m_i <= f_i` for `i > 0` and
/// alternating sum `χ`, adding up to `total`, in lexicographic order.
fn vectors_with_total(lo: &[usize], hi: &[usize], chi: i64, total: usize) -> Vec<Vec<usize>> {
    fn fill(
        i: usize,
        lo: &[usize],
        hi: &[usize],
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        chi: i64,
    ) {
        if i == lo.len() {
            let alt: i64 = cur
                .iter()
                .enumerate()
                .map(|(d, &m)| if d % 2 == 0 { m as i64 } else { -(m as i64) })
                .sum();
            if left == 0 && alt == chi {
                out.push(cur.clone());
            }
            return;
        }
        let rest_lo: usize = lo[i + 1..].iter().sum();
        let rest_hi: usize = hi[i + 1..].iter().sum();
        for m in lo[i]..=hi[i].min(left) {
            if left - m < rest_lo || left - m > rest_hi {
                continue;
            }
            cur.push(m);
            fill(i + 1, lo, hi, left - m, cur, out, chi);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(0, lo, hi, total, &mut cur, &mut out, chi);
    out
}

/// Candidate critical vectors in the order they are tried: by total, then
/// lexicographically.
fn candidates(k: &SimplicialComplex) -> impl Iterator<Item = Vec<usize>> {
    let b = homology(k).betti;
    let chi = k.euler_characteristic();
    let f = k.f_vector();
    let mut hi = f;
    hi[0] = b[0];
    let lo = b;
    let start: usize = lo.iter().sum();
    let end: usize = hi.iter().sum();
    (start..=end).flat_map(move |t| vectors_with_total(&lo, &hi, chi, t))
}

/// The first candidate vector: fewest critical cells allowed by the weak
/// Morse inequalities, a single critical vertex and the Euler
/// characteristic. In dimension at most 2 it is componentwise smallest.
pub fn critical_lower_bound(k: &SimplicialComplex) -> Vec<usize> {
    candidates(k)
        .next()
        .expect("a spanning forest field is a candidate")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityResult<'a> {
    /// Critical cells per dimension of the best fields found.
    pub vector: Vec<usize>,
    pub lower_bound: Vec<usize>,
    /// Smaller vectors shown infeasible by complete search.
    pub refuted: Vec<Vec<usize>>,
    /// Fields attaining `vector`, first in search order, at most the
    /// configured cap.
    pub witnesses: Vec<DiscreteVectorField<'a>>,
    /// `vector` is proven minimal.
    pub exact: bool,
    pub nodes: u64,
}

impl OptimalityResult<'_> {
    pub fn total(&self) -> usize {
        self.vector.iter().sum()
    }
}

struct Collect {
    cap: usize,
    fields: Vec<Vec<Option<CellId>>>,
}

impl Reducer<Vec<Option<CellId>>> for Collect {
    fn feed(&mut self, partner: Vec<Option<CellId>>) -> bool {
        self.fields.push(partner);
        self.fields.len() >= self.cap
    }
}

/// Fewest critical cells over all gradient fields on a connected complex.
pub fn min_critical_cells<'a>(
    k: &'a SimplicialComplex,
    config: &SearchConfig,
) -> Result<OptimalityResult<'a>> {
    check_scope(k, usize::MAX)?;
    let lower_bound = critical_lower_bound(k);
    let cap = config.witness_cap.max(1);
    let mut remaining = config.budget;
    let mut refuted = Vec::new();
    for target in candidates(k) {
        let engine = Engine::new(k, &target);
        let (found, outcome) = search(
            &engine,
            remaining,
            config.jobs,
            || {
                let mut seen = 0usize;
                move |partner: &[Option<CellId>]| {
                    seen += 1;
                    (Some(partner.to_vec()), seen >= cap)
                }
            },
            Collect {
                cap,
                fields: Vec::new(),
            },
            u64::MAX,
            |_| None,
        );
        remaining -= outcome.nodes.min(remaining);
        if !found.fields.is_empty() {
            let witnesses = found
                .fields
                .into_iter()
                .map(|p| DiscreteVectorField::from_partner_unchecked(k, p))
                .collect();
            return Ok(OptimalityResult {
                vector: target,
                lower_bound,
                refuted,
                witnesses,
                exact: true,
                nodes: config.budget - remaining,
            });
        }
        if outcome.finished {
            refuted.push(target);
        } else {
            break;
        }
    }
    let fallback = greedy_field(k);
    Ok(OptimalityResult {
        vector: fallback.critical_report().counts,
        lower_bound,
        refuted,
        witnesses: vec![fallback],
        exact: false,
        nodes: config.budget - remaining,
    })
}

/// A gradient field built by collapsing greedily from the top dimension
/// down, declaring a cell critical whenever no cell has a free face. In
/// dimension 1 the critical edge is chosen on a cycle, so connected
/// complexes keep a single critical vertex.
pub fn greedy_field(k: &SimplicialComplex) -> DiscreteVectorField<'_> {
    let mut partner: Vec<Option<CellId>> = vec![None; k.num_cells()];
    for d in (1..=k.dim()).rev() {
        let mut present: Vec<bool> = k
            .cell_ids()
            .map(|c| k.dim_of(c) == d && partner[c.index()].is_none())
            .collect();
        let mut load: Vec<usize> = k
            .cell_ids()
            .map(|c| {
                k.cofaces(c)
                    .iter()
                    .filter(|i| present[i.cell.index()])
                    .count()
            })
            .collect();
        let mut left = present.iter().filter(|&&p| p).count();
        while left > 0 {
            let free = k.cells_of_dim(d - 1).find(|x| load[x.index()] == 1);
            let (cell, face) = match free {
                Some(x) => {
                    let c = k
                        .cofaces(x)
                        .iter()
                        .map(|i| i.cell)
                        .find(|c| present[c.index()])
                        .expect("one coface left");
                    (c, Some(x))
                }
                None => {
                    let c = if d == 1 {
                        k.cells_of_dim(1)
                            .find(|&e| present[e.index()] && on_cycle(k, &present, e))
                            .or_else(|| k.cells_of_dim(1).find(|e| present[e.index()]))
                    } else {
                        k.cells_of_dim(d).find(|c| present[c.index()])
                    };
                    (c.expect("cells left"), None)
                }
            };
            present[cell.index()] = false;
            left -= 1;
            for inc in k.faces(cell) {
                load[inc.cell.index()] -= 1;
            }
            if let Some(x) = face {
                partner[x.index()] = Some(cell);
                partner[cell.index()] = Some(x);
            }
        }
    }
    DiscreteVectorField::from_partner_unchecked(k, partner)
}

/// Whether the endpoints of edge `e` stay connected through other present
/// edges.
fn on_cycle(k: &SimplicialComplex, present: &[bool], e: CellId) -> bool {
    let f = k.faces(e);
    let (a, b) = (f[0].cell, f[1].cell);
    let mut seen = vec![false; k.dim_range(0).len()];
    let mut stack = vec![a];
    seen[a.index()] = true;
    while let Some(v) = stack.pop() {
        if v == b {
            return true;
        }
        for inc in k.cofaces(v) {
            let edge = inc.cell;
            if edge == e || !present[edge.index()] {
                continue;
            }
            let w = k
                .faces(edge)
                .iter()
                .map(|i| i.cell)
                .find(|&w| w != v)
                .expect("edges have two vertices");
            if !seen[w.index()] {
                seen[w.index()] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NkResult<'a> {
    /// Smallest |𝔑(K,f)| found over optimal fields.
    pub value: u64,
    /// Signed 𝔑 of the witness.
    pub nkf: i64,
    pub witness: DiscreteVectorField<'a>,
    pub vector: Vec<usize>,
    /// The vector is proven optimal and every optimal field was examined
    /// (or one with 𝔑 = 0 was found).
    pub exact: bool,
    /// Optimal fields evaluated after the first one, when the search ran to
    /// completion; branches that cannot beat the best value so far are cut
    /// without visiting their fields.
    pub fields: Option<u64>,
    pub nodes: u64,
}

struct Best {
    value: Option<(u64, i64, Vec<Option<CellId>>)>,
}

impl Reducer<(u64, i64, Vec<Option<CellId>>)> for Best {
    fn feed(&mut self, ev: (u64, i64, Vec<Option<CellId>>)) -> bool {
        if self.value.as_ref().is_none_or(|b| ev.0 < b.0) {
            self.value = Some(ev);
        }
        self.value.as_ref().is_some_and(|b| b.0 == 0)
    }
}

/// 𝔑(K): the minimum of |𝔑(K,f)| over optimal gradient fields.
///
/// The first optimal field found sets the value to beat; later fields are
/// enumerated only where they could beat it. On 2-complexes whose optimal
/// fields have one critical cell per dimension, branches are also cut once
/// every completion has 𝔑 at least the value to beat, by the gradient path
/// bound of the search engine.
pub fn nk<'a>(k: &'a SimplicialComplex, config: &SearchConfig) -> Result<NkResult<'a>> {
    let opt = min_critical_cells(
        k,
        &SearchConfig {
            witness_cap: 1,
            ..config.clone()
        },
    )?;
    let first = opt.witnesses[0].clone();
    let first_value = nkf(&first)?.value;
    let bar = first_value.unsigned_abs();
    let remaining = config.budget - opt.nodes;
    let engine = Engine::new(k, &opt.vector);
    let (best, outcome) = if bar == 0 || !opt.exact {
        let outcome = Outcome {
            nodes: 0,
            fields: 0,
            finished: bar == 0,
            stopped: bar == 0,
        };
        (Best { value: None }, outcome)
    } else {
        search(
            &engine,
            remaining,
            config.jobs,
            || {
                let mut local = bar;
                move |partner: &[Option<CellId>]| {
                    let field = DiscreteVectorField::from_partner_unchecked(k, partner.to_vec());
                    let v = nkf(&field).expect("normalization is consistent").value;
                    let abs = v.unsigned_abs();
                    if abs < local {
                        local = abs;
                        (Some((abs, v, partner.to_vec())), abs == 0)
                    } else {
                        (None, false)
                    }
                }
            },
            Best { value: None },
            bar,
            |ev: &(u64, i64, Vec<Option<CellId>>)| Some(ev.0),
        )
    };
    let nodes = opt.nodes + outcome.nodes;
    let (value, signed, witness) = match best.value {
        Some((abs, v, p)) => (abs, v, DiscreteVectorField::from_partner_unchecked(k, p)),
        None => (bar, first_value, first),
    };
    Ok(NkResult {
        value,
        nkf: signed,
        witness,
        vector: opt.vector,
        exact: opt.exact && outcome.finished,
        fields: (outcome.finished && !outcome.stopped).then_some(outcome.fields),
        nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphNk<'a> {
    pub nk: NkResult<'a>,
    pub is_tree: bool,
}

/// 𝔑 of a connected graph, with whether it is a tree. For a tree the
/// witness has a single critical vertex.
pub fn nk_graph<'a>(k: &'a SimplicialComplex, config: &SearchConfig) -> Result<GraphNk<'a>> {
    check_scope(k, 1)?;
    let f = k.f_vector();
    let is_tree = f.len() == 1 || f[1] + 1 == f[0];
    Ok(GraphNk {
        nk: nk(k, config)?,
        is_tree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlLevel {
    pub depth: usize,
    pub cells: usize,
    pub vector: Vec<usize>,
    pub value: u64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlProbe {
    pub levels: Vec<PlLevel>,
    /// Smallest value over the levels computed.
    pub bound: u64,
    pub caveat: &'static str,
}

const PL_CAVEAT: &str =
    "upper bound over iterated barycentric subdivisions only, not over all subdivisions";

/// 𝔑 of the iterated barycentric subdivisions of `k` up to `depth`,
/// stopping at the first exact zero. Each level gets the full budget.
pub fn pl_probe(k: &SimplicialComplex, depth: usize, config: &SearchConfig) -> Result<PlProbe> {
    if depth > MAX_PROBE_DEPTH {
        return Err(Error::DepthTooLarge {
            depth,
            max: MAX_PROBE_DEPTH,
        });
    }
    check_scope(k, 2)?;
    let mut levels = Vec::new();
    let mut current = k.clone();
    for j in 0..=depth {
        if j > 0 {
            current = current.barycentric_subdivision();
        }
        let r = nk(&current, config)?;
        levels.push(PlLevel {
            depth: j,
            cells: current.num_cells(),
            vector: r.vector.clone(),
            value: r.value,
            exact: r.exact,
        });
        if r.value == 0 && r.exact {
            break;
        }
    }
    let bound = levels.iter().map(|l| l.value).min().expect("one level");
    Ok(PlProbe {
        levels,
        bound,
        caveat: PL_CAVEAT,
    })
}

/// Summary of [`for_each_field_with_vector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub fields: u64,
    pub nodes: u64,
    /// Every field with the vector was visited.
    pub complete: bool,
}

/// Visits, in search order, every gradient field with the given critical
/// vector until `visit` returns `false` or the budget runs out.
pub fn for_each_field_with_vector<'a, F>(
    k: &'a SimplicialComplex,
    vector: &[usize],
    config: &SearchConfig,
    mut visit: F,
) -> Result<Enumeration>
where
    F: FnMut(&DiscreteVectorField<'a>) -> bool,
{
    check_scope(k, usize::MAX)?;
    if vector.len() != k.dim() + 1 {
        return Err(Error::DimensionMismatch(vector.len(), k.dim() + 1));
    }
    let engine = Engine::new(k, vector);
    let mut fields = 0;
    let (flow, nodes) = engine.run(config.budget, |partner| {
        fields += 1;
        let field = DiscreteVectorField::from_partner_unchecked(k, partner.to_vec());
        if visit(&field) {
            Flow::Continue
        } else {
            Flow::Stop
        }
    });
    Ok(Enumeration {
        fields,
        nodes,
        complete: flow == Flow::Continue,
    })
}
