//! Deterministic graph families for corpora.
//!
//! Random families draw from [`SeedRng`](crate::rng::SeedRng), so every
//! output is a pure function of its parameters and seed.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SeedRng;

/// Largest `n` accepted by [`LabeledGraphs`].
pub const MAX_ENUMERATION_N: usize = 6;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Argument(msg()))
    }
}

/// `P_n` on `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<Graph> {
    need(n >= 2, || format!("path needs n >= 2, got {n}"))?;
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// `C_n` on `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> Result<Graph> {
    need(n >= 3, || format!("cycle needs n >= 3, got {n}"))?;
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `K_{1,n-1}` with centre 0.
pub fn star(n: usize) -> Result<Graph> {
    need(n >= 2, || format!("star needs n >= 2, got {n}"))?;
    Graph::from_edges(n, (1..n).map(|i| (0, i)))
}

pub fn complete(n: usize) -> Result<Graph> {
    need(n >= 2, || format!("complete graph needs n >= 2, got {n}"))?;
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Spine `0..spine` as a path; the pendant leaves of spine vertex `i` follow
/// in order after the spine.
pub fn caterpillar(spine: usize, legs: &[usize]) -> Result<Graph> {
    need(spine >= 1, || "caterpillar needs a spine of at least one vertex".into())?;
    need(legs.len() == spine, || {
        format!("{} leg counts for a spine of {spine}", legs.len())
    })?;
    need(spine > 1 || legs[0] > 0, || {
        "a single spine vertex without legs is isolated".into()
    })?;
    let n = spine + legs.iter().sum::<usize>();
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut next = spine;
    for (i, &k) in legs.iter().enumerate() {
        for _ in 0..k {
            edges.push((i, next));
            next += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Decodes a Prüfer sequence over `0..n` (`n = seq.len() + 2`) into a tree.
pub fn tree_from_prufer(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    need(seq.iter().all(|&x| x < n), || "Prüfer entry out of range".into())?;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // smallest current leaf, found by linear scan; n is tiny in corpora
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a tree always has a leaf");
        edges.push((leaf, x));
        degree[leaf] = 0;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges)
}

/// Uniform labelled tree: a Prüfer sequence of `n - 2` draws `below(n)`.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    need(n >= 2, || format!("tree needs n >= 2, got {n}"))?;
    let mut rng = SeedRng::new(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.below(n)).collect();
    tree_from_prufer(&seq)
}

/// `G(n, p)` over pairs `(u, v)`, `u < v` in lexicographic order (edge iff
/// `unit() < p`); then every isolated vertex, in ascending order, is joined to
/// a vertex drawn uniformly from the others.
pub fn gnp_isolate_free(n: usize, p: f64, seed: u64) -> Result<Graph> {
    need(n >= 2, || format!("gnp needs n >= 2, got {n}"))?;
    need(p > 0.0 && p <= 1.0, || format!("edge probability {p} not in (0, 1]"))?;
    let mut rng = SeedRng::new(seed);
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit() < p {
                edges.push((u, v));
                deg[u] += 1;
                deg[v] += 1;
            }
        }
    }
    for v in 0..n {
        if deg[v] == 0 {
            let mut w = rng.below(n - 1);
            if w >= v {
                w += 1;
            }
            edges.push((v.min(w), v.max(w)));
            deg[v] += 1;
            deg[w] += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Every isolate-free labelled simple graph on `n` vertices, each once.
///
/// Edge subsets are visited as bit masks over the pairs `(u, v)`, `u < v`,
/// in lexicographic order; bit `i` selects pair `i`.
pub struct LabeledGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl LabeledGraphs {
    pub fn new(n: usize) -> Result<Self> {
        need((2..=MAX_ENUMERATION_N).contains(&n), || {
            format!("enumeration supports 2 <= n <= {MAX_ENUMERATION_N}, got {n}")
        })?;
        let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let end = 1u64 << pairs.len();
        Ok(LabeledGraphs { n, pairs, next: 0, end })
    }
}

impl Iterator for LabeledGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            let mut covered = 0u64;
            for (i, &(u, v)) in self.pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    covered |= 1 << u | 1 << v;
                }
            }
            if covered.count_ones() as usize == self.n {
                let edges = self
                    .pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e);
                return Some(Graph::from_edges(self.n, edges).expect("pairs are distinct"));
            }
        }
        None
    }
}

pub fn enumerate_labeled_graphs(n: usize) -> Result<LabeledGraphs> {
    LabeledGraphs::new(n)
}
