//! Depth-first enumeration of acyclic matchings with a prescribed number of
//! critical cells in every dimension.
//!
//! Cells are decided from the top dimension down and in cell order within a
//! dimension. A cell already paired with a coface is skipped; otherwise it is
//! paired with each unmatched face in turn, then declared critical. Pruning:
//!
//! * critical counts per dimension can still reach the target exactly;
//! * pairing never closes a V-path (reachability in the V-path digraph);
//! * the cells of the current dimension can still be matched downward:
//!   greedy removal of cells with a free face is confluent, so it decides
//!   this exactly, branching over which stuck cells to declare critical when
//!   few critical cells remain to be placed;
//! * in dimension 1, every component of the graph left for the vertices
//!   needs its own critical vertex, and a vertex whose edges are all decided
//!   while it is unmatched is critical;
//! * optionally, on 2-complexes searched for one critical cell in each
//!   dimension, a lower bound on 𝔑 against a bar (see [`Run::path_bound`]).
//!
//! The tree is cut at a fixed decision depth into subtrees that are searched
//! independently and merged in tree order, replaying the node budget as a
//! single sequential run would spend it. Results do not depend on the number
//! of worker threads.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::complex::{CellId, SimplicialComplex};

/// Fewest subtrees the tree is cut into, when it has that many.
const MIN_SUBTREES: usize = 64;
const MAX_SPLIT_DEPTH: usize = 24;
/// Critical cells still to place in the top dimension for which the
/// completability test branches.
const MAX_TOP_ALLOWANCE: usize = 2;
const CHECK_INTERVAL: u64 = 1024;
const WORKER_STACK: usize = 256 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Choice {
    Face(CellId),
    Critical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
    Exhausted,
}

pub(crate) struct Engine<'k> {
    k: &'k SimplicialComplex,
    target: Vec<usize>,
    top: usize,
    order: Vec<CellId>,
    level_start: Vec<usize>,
    faces: Vec<Vec<CellId>>,
    last_edge_pos: Vec<usize>,
    isolated: usize,
    /// The 𝔑 lower bound applies to this target.
    bounded: bool,
}

struct State {
    partner: Vec<Option<CellId>>,
    critical: Vec<bool>,
    counts: Vec<usize>,
    undecided: Vec<usize>,
    nodes: u64,
    mark: Vec<u32>,
    stamp: u32,
}

struct Run<'e, 'k, V, A> {
    e: &'e Engine<'k>,
    st: State,
    /// Subtrees whose fields all have |𝔑| at least this are cut.
    bar: &'e Cell<u64>,
    path: Vec<Choice>,
    guide: &'e [Choice],
    split_depth: Option<usize>,
    prefixes: Vec<Vec<Choice>>,
    deeper: bool,
    cap: u64,
    visit: V,
    abort: A,
}

impl<'k> Engine<'k> {
    pub fn new(k: &'k SimplicialComplex, target: &[usize]) -> Self {
        let top = k.dim();
        assert_eq!(target.len(), top + 1, "one target per dimension");
        let mut order = Vec::new();
        let mut level_start = vec![usize::MAX; top + 1];
        for d in (1..=top).rev() {
            level_start[d] = order.len();
            order.extend(k.cells_of_dim(d));
        }
        let faces = k
            .cell_ids()
            .map(|c| {
                let mut f: Vec<CellId> = k.faces(c).iter().map(|i| i.cell).collect();
                f.sort_unstable();
                f
            })
            .collect();
        let f0 = k.dim_range(0).len();
        let mut last_edge_pos = vec![usize::MAX; f0];
        for (p, &c) in order.iter().enumerate() {
            if k.dim_of(c) == 1 {
                for inc in k.faces(c) {
                    last_edge_pos[inc.cell.index()] = p;
                }
            }
        }
        let isolated = last_edge_pos.iter().filter(|&&p| p == usize::MAX).count();
        Engine {
            k,
            target: target.to_vec(),
            top,
            order,
            level_start,
            faces,
            last_edge_pos,
            isolated,
            bounded: top == 2 && target == [1, 1, 1],
        }
    }

    fn initial_state(&self) -> State {
        let mut counts = vec![0; self.top + 1];
        counts[0] = self.isolated;
        State {
            partner: vec![None; self.k.num_cells()],
            critical: vec![false; self.k.num_cells()],
            counts,
            undecided: vec![0; self.top + 1],
            nodes: 0,
            mark: vec![0; self.k.num_cells()],
            stamp: 0,
        }
    }

    /// Decision paths at a fixed depth (or to complete fields above it), in
    /// tree order, and the nodes spent finding them.
    pub fn split(&self, budget: u64) -> (Vec<Vec<Choice>>, u64, bool) {
        let mut last = (vec![Vec::new()], 0, true);
        let bar = Cell::new(u64::MAX);
        for depth in 1..=MAX_SPLIT_DEPTH {
            let mut run = Run {
                e: self,
                st: self.initial_state(),
                bar: &bar,
                path: Vec::new(),
                guide: &[],
                split_depth: Some(depth),
                prefixes: Vec::new(),
                deeper: false,
                cap: budget,
                visit: |_: &[Option<CellId>], _: u64| Flow::Continue,
                abort: |_: u64| false,
            };
            let flow = run.dfs(0);
            if flow == Flow::Exhausted {
                return (Vec::new(), run.st.nodes, false);
            }
            last = (run.prefixes, run.st.nodes, true);
            if last.0.len() >= MIN_SUBTREES || !run.deeper {
                break;
            }
        }
        last
    }

    /// Plain sequential search of the whole tree.
    pub fn run<V>(&self, cap: u64, mut visit: V) -> (Flow, u64)
    where
        V: FnMut(&[Option<CellId>]) -> Flow,
    {
        self.subtree(&[], cap, &Cell::new(u64::MAX), |p, _| visit(p), |_| false)
    }

    /// Searches the subtree below `prefix`. `visit` sees each complete
    /// partner table with the node count at which it was reached.
    fn subtree<V, A>(
        &self,
        prefix: &[Choice],
        cap: u64,
        bar: &Cell<u64>,
        visit: V,
        abort: A,
    ) -> (Flow, u64)
    where
        V: FnMut(&[Option<CellId>], u64) -> Flow,
        A: FnMut(u64) -> bool,
    {
        let mut run = Run {
            e: self,
            st: self.initial_state(),
            bar,
            path: Vec::new(),
            guide: prefix,
            split_depth: None,
            prefixes: Vec::new(),
            deeper: false,
            cap,
            visit,
            abort,
        };
        let flow = run.dfs(0);
        (flow, run.st.nodes)
    }
}

impl<V, A> Run<'_, '_, V, A>
where
    V: FnMut(&[Option<CellId>], u64) -> Flow,
    A: FnMut(u64) -> bool,
{
    fn counting(&self) -> bool {
        self.path.len() >= self.guide.len()
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        if self.counting() {
            self.st.nodes += 1;
            if self.st.nodes > self.cap {
                return Flow::Exhausted;
            }
            if self.st.nodes.is_multiple_of(CHECK_INTERVAL) && (self.abort)(self.st.nodes) {
                return Flow::Exhausted;
            }
        }
        let e = self.e;
        if pos == e.order.len() {
            if self.split_depth.is_some() {
                self.prefixes.push(self.path.clone());
                return Flow::Continue;
            }
            if self.st.counts != e.target {
                return Flow::Continue;
            }
            return (self.visit)(&self.st.partner, self.st.nodes);
        }
        let c = e.order[pos];
        let d = e.k.dim_of(c);
        if pos == e.level_start[d] && !self.enter_level(d) {
            return Flow::Continue;
        }
        if self.st.partner[c.index()].is_some() {
            return self.advance(pos);
        }
        if Some(self.path.len()) == self.split_depth {
            self.deeper = true;
            self.prefixes.push(self.path.clone());
            return Flow::Continue;
        }
        let guided = self.guide.get(self.path.len()).copied();
        for i in 0..=e.faces[c.index()].len() {
            let choice = match e.faces[c.index()].get(i) {
                Some(&x) => Choice::Face(x),
                None => Choice::Critical,
            };
            if guided.is_some_and(|g| g != choice) {
                continue;
            }
            let flow = match choice {
                Choice::Face(x) => {
                    if self.st.partner[x.index()].is_some() || self.creates_cycle(x, c) {
                        continue;
                    }
                    self.st.partner[x.index()] = Some(c);
                    self.st.partner[c.index()] = Some(x);
                    self.st.undecided[d] -= 1;
                    let flow = self.descend(pos, d, choice);
                    self.st.undecided[d] += 1;
                    self.st.partner[x.index()] = None;
                    self.st.partner[c.index()] = None;
                    flow
                }
                Choice::Critical => {
                    if self.st.counts[d] == e.target[d] {
                        continue;
                    }
                    self.st.critical[c.index()] = true;
                    self.st.counts[d] += 1;
                    self.st.undecided[d] -= 1;
                    let ok = d != 1 || self.components_ok();
                    let flow = if ok {
                        self.descend(pos, d, choice)
                    } else {
                        Flow::Continue
                    };
                    self.st.undecided[d] += 1;
                    self.st.counts[d] -= 1;
                    self.st.critical[c.index()] = false;
                    flow
                }
            };
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    fn descend(&mut self, pos: usize, d: usize, choice: Choice) -> Flow {
        if !self.level_feasible(d) {
            return Flow::Continue;
        }
        if self.e.bounded
            && self.bar.get() < u64::MAX
            && self.path_bound().is_some_and(|b| b >= self.bar.get())
        {
            return Flow::Continue;
        }
        self.path.push(choice);
        let flow = self.advance(pos);
        self.path.pop();
        flow
    }

    /// Moves past position `pos`, counting vertices that just became
    /// critical.
    fn advance(&mut self, pos: usize) -> Flow {
        let e = self.e;
        let c = e.order[pos];
        let mut forced = 0;
        if e.k.dim_of(c) == 1 {
            for inc in e.k.faces(c) {
                let v = inc.cell.index();
                if e.last_edge_pos[v] == pos && self.st.partner[v].is_none() {
                    forced += 1;
                }
            }
        }
        self.st.counts[0] += forced;
        let flow = if self.st.counts[0] <= e.target[0] {
            self.dfs(pos + 1)
        } else {
            Flow::Continue
        };
        self.st.counts[0] -= forced;
        flow
    }

    fn enter_level(&mut self, d: usize) -> bool {
        let e = self.e;
        self.st.undecided[d] =
            e.k.cells_of_dim(d)
                .filter(|c| self.st.partner[c.index()].is_none())
                .count();
        (d != 1 || self.components_ok()) && self.level_feasible(d)
    }

    fn level_feasible(&self, d: usize) -> bool {
        let e = self.e;
        let (have, target) = (self.st.counts[d], e.target[d]);
        if have > target || have + self.st.undecided[d] < target {
            return false;
        }
        let allowance = target - have;
        let limit = if d == e.top { MAX_TOP_ALLOWANCE } else { 0 };
        allowance > limit || self.matchable_downward(d, allowance)
    }

    /// Whether the d-cells not paired upward can all be paired with faces,
    /// except for `allowance` more critical ones, without closing a V-path.
    fn matchable_downward(&self, d: usize, allowance: usize) -> bool {
        let e = self.e;
        let k = e.k;
        let cells = k.dim_range(d);
        let below = k.dim_range(d - 1).start;
        let mut present = vec![false; cells.len()];
        let mut load = vec![0u32; k.dim_range(d - 1).len()];
        for c in k.cells_of_dim(d) {
            let p = self.st.partner[c.index()];
            let active = p.map_or(!self.st.critical[c.index()], |p| p < c);
            if active {
                present[c.index() - cells.start] = true;
                for &x in &e.faces[c.index()] {
                    load[x.index() - below] += 1;
                }
            }
        }
        self.greedy(d, present, load, allowance)
    }

    fn greedy(
        &self,
        d: usize,
        mut present: Vec<bool>,
        mut load: Vec<u32>,
        allowance: usize,
    ) -> bool {
        let e = self.e;
        let k = e.k;
        let start = k.dim_range(d).start;
        let below = k.dim_range(d - 1).start;
        let mut stack: Vec<usize> = (0..load.len()).filter(|&i| load[i] == 1).collect();
        while let Some(i) = stack.pop() {
            if load[i] != 1 {
                continue;
            }
            let x = CellId((below + i) as u32);
            let Some(c) = k
                .cofaces(x)
                .iter()
                .map(|inc| inc.cell)
                .find(|c| present[c.index() - start])
            else {
                continue;
            };
            if let Some(p) = self.st.partner[c.index()] {
                if p != x {
                    continue;
                }
            }
            present[c.index() - start] = false;
            for &y in &e.faces[c.index()] {
                let j = y.index() - below;
                load[j] -= 1;
                if load[j] == 1 {
                    stack.push(j);
                }
            }
        }
        let stuck: Vec<usize> = (0..present.len()).filter(|&i| present[i]).collect();
        if stuck.is_empty() {
            return true;
        }
        if allowance == 0 {
            return false;
        }
        stuck.iter().any(|&i| {
            let c = CellId((start + i) as u32);
            if self.st.partner[c.index()].is_some() {
                return false;
            }
            let mut p = present.clone();
            let mut l = load.clone();
            p[i] = false;
            for &y in &e.faces[c.index()] {
                l[y.index() - below] -= 1;
            }
            self.greedy(d, p, l, allowance - 1)
        })
    }

    /// Components of the vertex graph left after removing edges paired
    /// upward or declared critical; each needs a critical vertex.
    fn components_ok(&self) -> bool {
        let e = self.e;
        let k = e.k;
        let n = k.dim_range(0).len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut comps = n;
        for c in k.cells_of_dim(1) {
            if self.st.critical[c.index()] || self.st.partner[c.index()].is_some_and(|p| p > c) {
                continue;
            }
            let f = &e.faces[c.index()];
            let (a, b) = (
                find(&mut parent, f[0].index()),
                find(&mut parent, f[1].index()),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
                comps -= 1;
            }
        }
        comps <= e.target[0]
    }

    /// Lower bound on 𝔑 of every completion, once the critical triangle `σ`
    /// is placed. A completion has one critical vertex (value 0), `σ` and one
    /// critical edge `e`, so 𝔑 = h(σ) - h(e). Along a gradient path from `σ`
    /// to `e`, h drops by at least one per triangle left, so 𝔑 is at least
    /// the longest such path, and in particular positive.
    ///
    /// `e` is an edge not paired upward or downward that lies on a cycle of
    /// the graph of edges not paired upward, since the others form a
    /// spanning tree. Pairing more cells only adds gradient paths and
    /// removes candidates, so the minimum over current candidates of the
    /// longest current path bounds every completion. `None` when some
    /// candidate is not reached from `σ`.
    fn path_bound(&self) -> Option<u64> {
        let e = self.e;
        let k = e.k;
        if self.st.counts[2] != 1 {
            return None;
        }
        let sigma = k.cells_of_dim(2).find(|c| self.st.critical[c.index()])?;
        let edges = k.dim_range(1);
        let at = |c: CellId| c.index() - edges.start;
        let up = |f: CellId| self.st.partner[f.index()].filter(|&t| t > f);
        // longest path lengths from σ, by depth-first postorder over the
        // acyclic gradient path digraph on edges
        let mut order: Vec<CellId> = Vec::new();
        let mut seen = vec![false; edges.len()];
        let mut stack: Vec<(CellId, usize)> = Vec::new();
        for &f in &e.faces[sigma.index()] {
            if seen[at(f)] {
                continue;
            }
            seen[at(f)] = true;
            stack.push((f, 0));
            while let Some(&mut (g, ref mut i)) = stack.last_mut() {
                let next = up(g).and_then(|t| {
                    let fs = &e.faces[t.index()];
                    while *i < fs.len() && (fs[*i] == g || seen[at(fs[*i])]) {
                        *i += 1;
                    }
                    fs.get(*i).copied()
                });
                match next {
                    Some(y) => {
                        seen[at(y)] = true;
                        stack.push((y, 0));
                    }
                    None => {
                        order.push(g);
                        stack.pop();
                    }
                }
            }
        }
        let mut dist = vec![0u64; edges.len()];
        for &f in &e.faces[sigma.index()] {
            dist[at(f)] = 1;
        }
        for &g in order.iter().rev() {
            if let Some(t) = up(g) {
                for &y in &e.faces[t.index()] {
                    if y != g {
                        dist[at(y)] = dist[at(y)].max(dist[at(g)] + 1);
                    }
                }
            }
        }
        let on_cycle = self.cycle_edges();
        let mut best = u64::MAX;
        for f in k.cells_of_dim(1) {
            let open = self.st.counts[1] < e.target[1] && self.st.partner[f.index()].is_none();
            let candidate = self.st.critical[f.index()] || (open && on_cycle[at(f)]);
            if candidate {
                if !seen[at(f)] {
                    return None;
                }
                best = best.min(dist[at(f)]);
            }
        }
        (best < u64::MAX).then_some(best)
    }

    /// Edges not paired upward that lie on a cycle of the graph they form.
    fn cycle_edges(&self) -> Vec<bool> {
        let e = self.e;
        let k = e.k;
        let edges = k.dim_range(1);
        let n = k.dim_range(0).len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for f in k.cells_of_dim(1) {
            if self.st.partner[f.index()].is_some_and(|t| t > f) {
                continue;
            }
            let v = &e.faces[f.index()];
            let (a, b) = (v[0].index(), v[1].index());
            adj[a].push((b, f.index() - edges.start));
            adj[b].push((a, f.index() - edges.start));
        }
        // bridges by low links, iteratively
        let mut on_cycle = vec![false; edges.len()];
        let mut bridge = vec![false; edges.len()];
        let mut tin = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        for root in 0..n {
            if tin[root] != usize::MAX {
                continue;
            }
            tin[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (v, via, ref mut i)) = stack.last_mut() {
                if *i < adj[v].len() {
                    let (w, id) = adj[v][*i];
                    *i += 1;
                    if id == via {
                        continue;
                    }
                    if tin[w] == usize::MAX {
                        tin[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[v] = low[v].min(tin[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > tin[p] {
                            bridge[via] = true;
                        }
                    }
                }
            }
        }
        for list in &adj {
            for &(_, id) in list {
                on_cycle[id] = !bridge[id];
            }
        }
        on_cycle
    }

    /// Whether pairing face `x` with `c` closes a V-path: some other face of
    /// `c` already reaches `x`.
    fn creates_cycle(&mut self, x: CellId, c: CellId) -> bool {
        let e = self.e;
        self.st.stamp = self.st.stamp.wrapping_add(1);
        if self.st.stamp == 0 {
            self.st.mark.iter_mut().for_each(|m| *m = 0);
            self.st.stamp = 1;
        }
        let stamp = self.st.stamp;
        let mut stack: Vec<CellId> = Vec::new();
        for &y in &e.faces[c.index()] {
            if y != x {
                self.st.mark[y.index()] = stamp;
                stack.push(y);
            }
        }
        while let Some(z) = stack.pop() {
            if z == x {
                return true;
            }
            let Some(t) = self.st.partner[z.index()].filter(|&t| t > z) else {
                continue;
            };
            for &y in &e.faces[t.index()] {
                if y != z && self.st.mark[y.index()] != stamp {
                    self.st.mark[y.index()] = stamp;
                    stack.push(y);
                }
            }
        }
        false
    }
}

/// What one subtree saw: events with the node count at which they happened.
pub(crate) struct Subtree<E> {
    pub events: Vec<(u64, E)>,
    pub nodes: u64,
    pub fields: u64,
    pub flow: Flow,
}

/// Merges subtree results in tree order. `feed` returns `true` to end the
/// whole search.
pub(crate) trait Reducer<E> {
    fn feed(&mut self, event: E) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Outcome {
    /// Nodes a sequential run would have spent.
    pub nodes: u64,
    /// Fields visited; exact only when the search was not truncated.
    pub fields: u64,
    /// The tree was fully explored or the reducer asked to stop.
    pub finished: bool,
    pub stopped: bool,
}

struct Commit<R, E> {
    reducer: R,
    results: Vec<Option<Subtree<E>>>,
    /// Nodes spent so far by subtrees not yet folded in.
    progress: Vec<u64>,
    next: usize,
    remaining: u64,
    fields: u64,
    done: Option<(bool, bool)>,
    cancel_after: usize,
}

impl<R: Reducer<E>, E> Commit<R, E> {
    /// Budget subtree `i` may still use in the best case: what is left after
    /// folded subtrees and the progress of the unfolded ones before it.
    fn bound(&self, i: usize) -> u64 {
        let ahead: u64 = self.progress[self.next.min(i)..i].iter().sum();
        self.remaining.saturating_sub(ahead)
    }

    /// Folds finished subtrees into the reducer in tree order.
    fn advance(&mut self) {
        while self.done.is_none() && self.next < self.results.len() {
            let j = self.next;
            let Some(res) = self.results[j].take() else {
                break;
            };
            self.next += 1;
            let mut end = None;
            for (node, ev) in res.events {
                if node > self.remaining {
                    end = Some((false, false));
                    break;
                }
                if self.reducer.feed(ev) {
                    end = Some((true, true));
                    break;
                }
            }
            if end.is_none() && (res.flow != Flow::Continue || res.nodes > self.remaining) {
                end = Some((false, false));
            }
            match end {
                Some(e) => {
                    self.done = Some(e);
                    self.remaining = self.remaining.saturating_sub(res.nodes);
                    self.cancel_after = j;
                }
                None => {
                    self.fields += res.fields;
                    self.remaining -= res.nodes;
                }
            }
        }
    }
}

/// Runs the search over all subtrees with `jobs` threads.
///
/// `make_visitor` builds the per-subtree visitor; it maps a complete partner
/// table to an optional event and whether the subtree should stop. Each
/// subtree starts from `bar` and lowers it to `bar_of` of its own events, so
/// cuts never depend on other subtrees.
pub(crate) fn search<E, R, M, F, B>(
    engine: &Engine<'_>,
    budget: u64,
    jobs: usize,
    make_visitor: M,
    reducer: R,
    bar: u64,
    bar_of: B,
) -> (R, Outcome)
where
    E: Send,
    R: Reducer<E> + Send,
    M: Fn() -> F + Sync,
    F: FnMut(&[Option<CellId>]) -> (Option<E>, bool),
    B: Fn(&E) -> Option<u64> + Sync,
{
    let (prefixes, split_nodes, split_ok) = engine.split(budget);
    if !split_ok {
        let outcome = Outcome {
            nodes: budget,
            fields: 0,
            finished: false,
            stopped: false,
        };
        return (reducer, outcome);
    }
    let n = prefixes.len();
    let commit = Mutex::new(Commit {
        reducer,
        results: (0..n).map(|_| None).collect(),
        progress: vec![0; n],
        next: 0,
        remaining: budget - split_nodes,
        fields: 0,
        done: None,
        cancel_after: usize::MAX,
    });
    let next = AtomicUsize::new(0);
    let lock = || commit.lock().expect("no worker panicked");

    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        let cap = {
            let c = lock();
            if i >= n || i > c.cancel_after {
                break;
            }
            c.bound(i)
        };
        let mut visit = make_visitor();
        let mut events: Vec<(u64, E)> = Vec::new();
        let mut fields = 0u64;
        let local_bar = Cell::new(bar);
        let (flow, nodes) = engine.subtree(
            &prefixes[i],
            cap,
            &local_bar,
            |partner, node| {
                fields += 1;
                let (ev, stop) = visit(partner);
                if let Some(ev) = ev {
                    if let Some(b) = bar_of(&ev) {
                        local_bar.set(local_bar.get().min(b));
                    }
                    events.push((node, ev));
                }
                if stop {
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            },
            |nodes| {
                let mut c = lock();
                c.progress[i] = nodes;
                i > c.cancel_after || nodes > c.bound(i)
            },
        );
        let mut c = lock();
        if i > c.cancel_after {
            break;
        }
        c.progress[i] = nodes;
        c.results[i] = Some(Subtree {
            events,
            nodes,
            fields,
            flow,
        });
        c.advance();
    };
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs.max(1))
            .map(|_| {
                std::thread::Builder::new()
                    .stack_size(WORKER_STACK)
                    .spawn_scoped(s, worker)
                    .expect("spawn search worker")
            })
            .collect();
        for h in handles {
            h.join().expect("search worker panicked");
        }
    });
    let c = commit.into_inner().expect("no worker panicked");
    let (finished, stopped) = c.done.unwrap_or((true, false));
    let spent = budget - c.remaining;
    (
        c.reducer,
        Outcome {
            nodes: if finished { spent } else { budget },
            fields: c.fields,
            finished,
            stopped,
        },
    )
}
