//! Simple undirected graphs on dense vertex ids `0..n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An immutable simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge {u}-{v} has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::Argument(format!("duplicate edge {u}-{v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, edge_count })
    }

    /// Parses the `n m` header + `u v` lines edge-list format.
    ///
    /// Errors name the 1-based line that failed.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let header_err = |reason: &str| Error::Parse {
            line: 1,
            reason: format!("malformed header {header:?}: {reason}"),
        };
        let mut toks = header.split_whitespace();
        let n: usize = toks
            .next()
            .ok_or_else(|| header_err("expected \"n m\""))?
            .parse()
            .map_err(|_| header_err("vertex count is not a non-negative integer"))?;
        let m: usize = toks
            .next()
            .ok_or_else(|| header_err("expected \"n m\""))?
            .parse()
            .map_err(|_| header_err("edge count is not a non-negative integer"))?;
        if toks.next().is_some() {
            return Err(header_err("trailing tokens"));
        }

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut seen = 0;
        for (line, raw) in lines {
            if raw.trim().is_empty() {
                continue;
            }
            if seen == m {
                return Err(Error::Parse {
                    line,
                    reason: format!("more than the {m} edges announced in the header"),
                });
            }
            let err = |reason: String| Error::Parse { line, reason };
            let mut toks = raw.split_whitespace();
            let mut endpoint = || -> Result<usize> {
                let t = toks
                    .next()
                    .ok_or_else(|| err(format!("expected \"u v\", got {raw:?}")))?;
                let v: usize = t
                    .parse()
                    .map_err(|_| err(format!("vertex {t:?} is not a non-negative integer")))?;
                if v >= n {
                    return Err(err(format!("vertex {v} out of range 0..{n}")));
                }
                Ok(v)
            };
            let u = endpoint()?;
            let v = endpoint()?;
            if toks.next().is_some() {
                return Err(err(format!("trailing tokens in {raw:?}")));
            }
            if u == v {
                return Err(err(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(err(format!("duplicate edge {u} {v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                reason: format!("header announces {m} edges but {seen} were listed"),
            });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, edge_count: m })
    }

    /// Writes the edge-list format: header, then edges `u v` with `u < v` in
    /// lexicographic order, each line LF-terminated.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        self.adj.iter().position(Vec::is_empty)
    }

    pub fn is_isolate_free(&self) -> bool {
        self.isolated_vertex().is_none()
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Closed neighbourhood `N[v]` as a bit mask. Only valid for `n <= 64`.
    pub fn closed_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n() <= 64);
        self.adj[v].iter().fold(1u64 << v, |m, &w| m | (1u64 << w))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n() {
            return Err(Error::Argument("permutation length differs from n".into()));
        }
        let mut hit = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || std::mem::replace(&mut hit[p], true) {
                return Err(Error::Argument("not a permutation".into()));
            }
        }
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.n(), edges).expect("union of simple graphs is simple")
    }

    /// FNV-1a (64-bit) of the edge-list serialization.
    pub fn hash64(&self) -> u64 {
        fnv1a(self.to_edge_list().as_bytes())
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_smallest_graphs() {
        let p2 = Graph::parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!((p2.n(), p2.edge_count()), (2, 1));
        assert!(p2.has_edge(0, 1) && p2.has_edge(1, 0));

        let p3 = Graph::parse_edge_list("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(p3.degree_sequence(), vec![1, 2, 1]);

        let c4 = Graph::parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(c4.degree_sequence(), vec![2, 2, 2, 2]);
        assert_eq!(c4.neighbors(0), &[1, 3]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("x 1\n0 1", 1),
            ("2\n0 1", 1),
            ("3 2\n0 1\n1 3", 3),
            ("3 2\n0 1\n1 1", 3),
            ("3 2\n0 1\n1 0", 3),
            ("3 1\n0 1\n1 2", 3),
            ("3 2\n0 a", 2),
        ];
        for (text, want) in cases {
            match Graph::parse_edge_list(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(
            Graph::parse_edge_list("3 2\n0 1"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn writes_canonical_edge_list() {
        let g = Graph::from_edges(4, [(3, 0), (2, 1), (0, 1)]).unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n0 1\n0 3\n1 2\n");
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn isolate_checks() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.isolated_vertex(), Some(2));
        assert!(!g.is_isolate_free());
        assert_eq!(g.min_degree(), 0);
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn union_and_permutation() {
        let p2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let u = p2.disjoint_union(&p2);
        assert_eq!(u.to_edge_list(), "4 2\n0 1\n2 3\n");
        assert!(!u.is_connected());
        let q = u.permuted(&[3, 1, 0, 2]).unwrap();
        assert!(q.has_edge(3, 1) && q.has_edge(0, 2));
        assert!(u.permuted(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn closed_masks() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.closed_mask(0), 0b011);
        assert_eq!(g.closed_mask(1), 0b111);
    }
}
