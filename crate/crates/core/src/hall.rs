//! Maximum bipartite matching with Hall-condition certificates.

use serde::Serialize;

/// A bipartite graph with sides `0..left` and `0..right`; `adj[a]` lists the
/// right neighbours of left vertex `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub adj: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Either a matching saturating both sides, or a set `set` on `side` whose
/// neighbourhood `neighbours` is strictly smaller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HallCertificate {
    Complete {
        pairs: Vec<(usize, usize)>,
    },
    Violator {
        side: Side,
        set: Vec<usize>,
        neighbours: Vec<usize>,
    },
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); left];
        for &(a, b) in edges {
            assert!(a < left && b < right, "edge ({a}, {b}) out of range");
            adj[a].push(b);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        BipartiteGraph { left, right, adj }
    }

    fn right_adj(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.right];
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                out[b].push(a);
            }
        }
        out
    }

    /// Maximum matching as sorted `(left, right)` pairs, found by repeated
    /// augmenting-path search.
    pub fn maximum_matching(&self) -> Vec<(usize, usize)> {
        let mut mate_right: Vec<Option<usize>> = vec![None; self.right];
        for a in 0..self.left {
            let mut seen = vec![false; self.right];
            augment(&self.adj, a, &mut seen, &mut mate_right);
        }
        let mut pairs: Vec<(usize, usize)> = mate_right
            .iter()
            .enumerate()
            .filter_map(|(b, m)| m.map(|a| (a, b)))
            .collect();
        pairs.sort_unstable();
        pairs
    }

    pub fn hall_certificate(&self) -> HallCertificate {
        let pairs = self.maximum_matching();
        if pairs.len() == self.left && pairs.len() == self.right {
            return HallCertificate::Complete { pairs };
        }
        let mut mate_left = vec![None; self.left];
        let mut mate_right = vec![None; self.right];
        for &(a, b) in &pairs {
            mate_left[a] = Some(b);
            mate_right[b] = Some(a);
        }
        if pairs.len() < self.right {
            let (set, neighbours) = alternating_reach(&self.right_adj(), &mate_right, &mate_left);
            HallCertificate::Violator {
                side: Side::Right,
                set,
                neighbours,
            }
        } else {
            let (set, neighbours) = alternating_reach(&self.adj, &mate_left, &mate_right);
            HallCertificate::Violator {
                side: Side::Left,
                set,
                neighbours,
            }
        }
    }
}

fn augment(
    adj: &[Vec<usize>],
    a: usize,
    seen: &mut [bool],
    mate_right: &mut [Option<usize>],
) -> bool {
    for &b in &adj[a] {
        if seen[b] {
            continue;
        }
        seen[b] = true;
        if mate_right[b].is_none_or(|a2| augment(adj, a2, seen, mate_right)) {
            mate_right[b] = Some(a);
            return true;
        }
    }
    false
}

/// Vertices of one side reachable by alternating paths from its unmatched
/// vertices, and their neighbours. Every neighbour is matched into the set,
/// so the set exceeds its neighbourhood by the number of unmatched starts.
fn alternating_reach(
    adj: &[Vec<usize>],
    mate: &[Option<usize>],
    mate_other: &[Option<usize>],
) -> (Vec<usize>, Vec<usize>) {
    let mut in_set = vec![false; adj.len()];
    let mut in_nbr = vec![false; mate_other.len()];
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&x| mate[x].is_none()).collect();
    for &x in &stack {
        in_set[x] = true;
    }
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if in_nbr[y] {
                continue;
            }
            in_nbr[y] = true;
            let z = mate_other[y].expect("maximum matching leaves no augmenting path");
            if !in_set[z] {
                in_set[z] = true;
                stack.push(z);
            }
        }
    }
    let collect = |v: &[bool]| v.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect();
    (collect(&in_set), collect(&in_nbr))
}
