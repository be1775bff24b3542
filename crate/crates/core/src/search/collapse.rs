//! Collapsibility by backtracking over elementary collapses.

use std::collections::HashSet;

use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::normalize::nkf;

use super::SearchConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Collapsible,
    NotCollapsible,
    Unknown,
}

/// Elementary collapses `(free face, its unique coface)` in the order
/// performed, and the cells left at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseSequence {
    pub steps: Vec<(CellId, CellId)>,
    pub remaining: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseResult {
    pub verdict: Verdict,
    /// A full collapse to one vertex when collapsible, otherwise the longest
    /// sequence met during the search.
    pub sequence: CollapseSequence,
    pub note: String,
    pub exact: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseJson {
    pub verdict: Verdict,
    pub steps: Vec<(String, String)>,
    pub remaining: Vec<String>,
    pub note: String,
}

impl CollapseResult {
    pub fn to_json(&self, k: &SimplicialComplex) -> CollapseJson {
        CollapseJson {
            verdict: self.verdict,
            steps: self
                .sequence
                .steps
                .iter()
                .map(|&(a, b)| (k.cell_name(a), k.cell_name(b)))
                .collect(),
            remaining: self
                .sequence
                .remaining
                .iter()
                .map(|&c| k.cell_name(c))
                .collect(),
            note: self.note.clone(),
        }
    }
}

struct Search<'k> {
    k: &'k SimplicialComplex,
    present: Vec<bool>,
    cofaces_left: Vec<u32>,
    alive: usize,
    steps: Vec<(CellId, CellId)>,
    best: Vec<(CellId, CellId)>,
    failed: HashSet<Vec<u64>>,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Done,
    Failed,
    Exhausted,
}

impl Search<'_> {
    fn key(&self) -> Vec<u64> {
        let mut bits = vec![0u64; self.present.len().div_ceil(64)];
        for (i, &p) in self.present.iter().enumerate() {
            if p {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits
    }

    fn free_pairs(&self) -> Vec<(CellId, CellId)> {
        self.k
            .cell_ids()
            .filter(|c| self.present[c.index()] && self.cofaces_left[c.index()] == 1)
            .map(|c| {
                let up = self
                    .k
                    .cofaces(c)
                    .iter()
                    .map(|i| i.cell)
                    .find(|t| self.present[t.index()])
                    .expect("one coface left");
                (c, up)
            })
            .collect()
    }

    fn set(&mut self, c: CellId, on: bool) {
        self.present[c.index()] = on;
        for inc in self.k.faces(c) {
            let n = &mut self.cofaces_left[inc.cell.index()];
            if on {
                *n += 1;
            } else {
                *n -= 1;
            }
        }
    }

    fn dfs(&mut self) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::Exhausted;
        }
        if self.alive == 1 {
            return Outcome::Done;
        }
        let key = self.key();
        if self.failed.contains(&key) {
            return Outcome::Failed;
        }
        for (face, coface) in self.free_pairs() {
            self.set(coface, false);
            self.set(face, false);
            self.alive -= 2;
            self.steps.push((face, coface));
            if self.steps.len() > self.best.len() {
                self.best = self.steps.clone();
            }
            let out = self.dfs();
            if !matches!(out, Outcome::Failed) {
                return out;
            }
            self.steps.pop();
            self.alive += 2;
            self.set(face, true);
            self.set(coface, true);
        }
        self.failed.insert(key);
        Outcome::Failed
    }
}

/// Decides whether `k` collapses to a vertex. Free faces are tried in cell
/// order; subcomplexes from which no full collapse exists are remembered.
pub fn is_collapsible(k: &SimplicialComplex, config: &SearchConfig) -> Result<CollapseResult> {
    if !k.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = k.num_cells();
    let mut s = Search {
        k,
        present: vec![true; n],
        cofaces_left: k.cell_ids().map(|c| k.cofaces(c).len() as u32).collect(),
        alive: n,
        steps: Vec::new(),
        best: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        budget: config.budget,
    };
    let initially_free = s.free_pairs().len();
    let outcome = s.dfs();
    let (verdict, exact, steps) = match outcome {
        Outcome::Done => (Verdict::Collapsible, true, s.steps.clone()),
        Outcome::Failed => (Verdict::NotCollapsible, true, s.best.clone()),
        Outcome::Exhausted => (Verdict::Unknown, false, s.best.clone()),
    };
    let mut removed = vec![false; n];
    for &(a, b) in &steps {
        removed[a.index()] = true;
        removed[b.index()] = true;
    }
    let remaining: Vec<CellId> = k.cell_ids().filter(|c| !removed[c.index()]).collect();
    let note = match verdict {
        Verdict::Collapsible => format!(
            "collapses to vertex {} in {} steps",
            k.cell_name(remaining[0]),
            steps.len()
        ),
        Verdict::NotCollapsible if initially_free == 0 => {
            let d = k.dim();
            if d > 0 && k.cells_of_dim(d - 1).all(|c| k.cofaces(c).len() >= 2) {
                format!("no free faces exist at the start: every {}-cell lies in at least two {d}-cells", d - 1)
            } else {
                "no free faces exist at the start: every non-maximal cell has at least two cofaces"
                    .to_string()
            }
        }
        Verdict::NotCollapsible => format!(
            "every collapse order gets stuck; longest sequence has {} steps and leaves {} cells",
            steps.len(),
            remaining.len()
        ),
        Verdict::Unknown => format!("search stopped after {} nodes", config.budget),
    };
    Ok(CollapseResult {
        verdict,
        sequence: CollapseSequence { steps, remaining },
        note,
        exact,
        nodes: s.nodes.min(config.budget),
    })
}

/// The gradient field pairing each step of a full collapse; its only
/// critical cell is the final vertex and its 𝔑 vanishes.
pub fn collapse_witness<'a>(
    k: &'a SimplicialComplex,
    config: &SearchConfig,
) -> Result<DiscreteVectorField<'a>> {
    let res = is_collapsible(k, config)?;
    match res.verdict {
        Verdict::Collapsible => {}
        Verdict::NotCollapsible => return Err(Error::NotCollapsible),
        Verdict::Unknown => return Err(Error::BudgetExceeded(config.budget)),
    }
    let field = DiscreteVectorField::validate(k, res.sequence.steps.iter().copied())?;
    let report = field.critical_report();
    if report.total() != 1 || report.counts[0] != 1 {
        return Err(Error::Internal(format!(
            "collapse field has critical counts {:?}",
            report.counts
        )));
    }
    let value = nkf(&field)?.value;
    if value != 0 {
        return Err(Error::Internal(format!("collapse field has 𝔑 = {value}")));
    }
    Ok(field)
}
