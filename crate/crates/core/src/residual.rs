//! Residual graphs: the coloured state of a domination game after a set of
//! moves.
//!
//! A vertex is white while undominated, blue while dominated but still
//! playable (it has a white neighbour) and red once its whole closed
//! neighbourhood is dominated. Only edges with a white endpoint are retained.
//! Blue vertices carry a shade: light if they turned blue while the caller
//! said so (the first phase of the greedy strategy), dark otherwise.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{fnv1a, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    LightBlue,
    DarkBlue,
    Red,
}

impl Color {
    /// Vertex weight of the potential `f`.
    pub fn weight(self) -> i64 {
        match self {
            Color::White => 5,
            Color::LightBlue => 4,
            Color::DarkBlue => 3,
            Color::Red => 0,
        }
    }

    pub fn is_blue(self) -> bool {
        matches!(self, Color::LightBlue | Color::DarkBlue)
    }

    pub fn code(self) -> &'static str {
        match self {
            Color::White => "W",
            Color::LightBlue => "LB",
            Color::DarkBlue => "DB",
            Color::Red => "R",
        }
    }

    pub fn from_code(s: &str) -> Option<Color> {
        Some(match s {
            "W" => Color::White,
            "LB" => Color::LightBlue,
            "DB" => Color::DarkBlue,
            "R" => Color::Red,
            _ => return None,
        })
    }

    /// `White < blue < Red`; the two shades are incomparable.
    pub fn may_become(self, next: Color) -> bool {
        match self {
            Color::White => true,
            Color::LightBlue => matches!(next, Color::LightBlue | Color::Red),
            Color::DarkBlue => matches!(next, Color::DarkBlue | Color::Red),
            Color::Red => next == Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Shade given to vertices that turn blue during a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shade {
    Light,
    Dark,
}

impl Shade {
    fn color(self) -> Color {
        match self {
            Shade::Light => Color::LightBlue,
            Shade::Dark => Color::DarkBlue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    /// One white vertex with two blue neighbours.
    Bwb,
    /// One white and one light blue vertex.
    WbPlus,
    /// One white and one dark blue vertex.
    WbMinus,
    /// Two adjacent white vertices.
    Ww,
    IsolatedRed,
    Other {
        order: usize,
        whites: usize,
        blues: usize,
    },
}

impl ComponentKind {
    pub fn order(self) -> usize {
        match self {
            ComponentKind::Bwb => 3,
            ComponentKind::WbPlus | ComponentKind::WbMinus | ComponentKind::Ww => 2,
            ComponentKind::IsolatedRed => 1,
            ComponentKind::Other { order, .. } => order,
        }
    }

    /// Order two, or a BWB component.
    pub fn is_special(self) -> bool {
        self.order() == 2 || self == ComponentKind::Bwb
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub kind: ComponentKind,
}

/// Components of the retained graph plus a vertex → component index.
#[derive(Debug, Clone)]
pub struct Components {
    pub list: Vec<Component>,
    pub of: Vec<usize>,
}

impl Components {
    pub fn kind_of(&self, v: usize) -> ComponentKind {
        self.list[self.of[v]].kind
    }

    pub fn count(&self, kind: ComponentKind) -> usize {
        self.list.iter().filter(|c| c.kind == kind).count()
    }
}

/// The residual graph after the moves in `played`.
#[derive(Debug, Clone)]
pub struct ResidualState<'g> {
    graph: &'g Graph,
    colors: Vec<Color>,
    played: Vec<usize>,
}

impl PartialEq for ResidualState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.colors == other.colors
    }
}

impl<'g> ResidualState<'g> {
    /// The all-white start state.
    pub fn new(graph: &'g Graph) -> Result<Self> {
        if let Some(v) = graph.isolated_vertex() {
            return Err(Error::IsolatedVertex(v));
        }
        Ok(ResidualState {
            graph,
            colors: vec![Color::White; graph.n()],
            played: Vec::new(),
        })
    }

    /// A state with explicit colours. The colouring must be realisable:
    /// red vertices have no white neighbour and blue vertices have one.
    pub fn from_colors(graph: &'g Graph, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != graph.n() {
            return Err(Error::Argument(format!(
                "{} colours for {} vertices",
                colors.len(),
                graph.n()
            )));
        }
        if let Some(v) = graph.isolated_vertex() {
            return Err(Error::IsolatedVertex(v));
        }
        for v in 0..graph.n() {
            let has_white = graph.neighbors(v).iter().any(|&w| colors[w] == Color::White);
            let ok = match colors[v] {
                Color::White => true,
                Color::LightBlue | Color::DarkBlue => has_white,
                Color::Red => !has_white,
            };
            if !ok {
                return Err(Error::Argument(format!(
                    "vertex {v} cannot be {} with these neighbour colours",
                    colors[v]
                )));
            }
        }
        Ok(ResidualState { graph, colors, played: Vec::new() })
    }

    /// Parses the snapshot format written by [`ResidualState::snapshot`].
    pub fn from_snapshot(graph: &'g Graph, text: &str) -> Result<Self> {
        let mut colors = vec![None; graph.n()];
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |reason: String| Error::Parse { line: i + 1, reason };
            let mut toks = line.split_whitespace();
            let (Some(id), Some(code), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(err(format!("expected \"id color\", got {line:?}")));
            };
            let id: usize = id
                .parse()
                .ok()
                .filter(|&v| v < graph.n())
                .ok_or_else(|| err(format!("bad vertex id {id:?}")))?;
            let c = Color::from_code(code).ok_or_else(|| err(format!("bad colour {code:?}")))?;
            if colors[id].replace(c).is_some() {
                return Err(err(format!("vertex {id} listed twice")));
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(v, c)| c.ok_or_else(|| Error::Argument(format!("vertex {v} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_colors(graph, colors)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn played(&self) -> &[usize] {
        &self.played
    }

    pub fn is_white(&self, v: usize) -> bool {
        self.colors[v] == Color::White
    }

    pub fn is_blue(&self, v: usize) -> bool {
        self.colors[v].is_blue()
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.colors[v] == Color::Red
    }

    pub fn is_game_over(&self) -> bool {
        !self.colors.contains(&Color::White)
    }

    pub fn is_legal(&self, v: usize) -> bool {
        v < self.colors.len() && self.colors[v] != Color::Red
    }

    /// White and blue vertices, ascending.
    pub fn legal_moves(&self) -> Vec<usize> {
        (0..self.colors.len()).filter(|&v| self.is_legal(v)).collect()
    }

    fn check_legal(&self, v: usize) -> Result<()> {
        if v >= self.colors.len() {
            return Err(Error::IllegalMove {
                vertex: v,
                reason: format!("no such vertex (n = {})", self.colors.len()),
            });
        }
        if self.colors[v] == Color::Red {
            return Err(Error::IllegalMove {
                vertex: v,
                reason: "red vertices dominate nothing new".into(),
            });
        }
        Ok(())
    }

    /// Plays `v`; vertices leaving white for blue take `shade`.
    pub fn apply_move(&self, v: usize, shade: Shade) -> Result<Self> {
        let mut next = self.clone();
        next.play_in_place(v, shade)?;
        Ok(next)
    }

    pub(crate) fn play_in_place(&mut self, v: usize, shade: Shade) -> Result<()> {
        self.check_legal(v)?;
        let g = self.graph;
        let old: Vec<(usize, Color)> = std::iter::once(v)
            .chain(g.neighbors(v).iter().copied())
            .map(|u| (u, self.colors[u]))
            .collect();
        // provisional non-white marker for the newly dominated vertices
        for &(u, c) in &old {
            if c == Color::White {
                self.colors[u] = Color::Red;
            }
        }
        let mut touched = Vec::with_capacity(old.len() * 4);
        for &(u, _) in &old {
            touched.push(u);
            touched.extend_from_slice(g.neighbors(u));
        }
        touched.sort_unstable();
        touched.dedup();
        for &u in &touched {
            let before = match old.iter().find(|&&(w, _)| w == u) {
                Some(&(_, c)) => c,
                None => self.colors[u],
            };
            if before == Color::White && self.colors[u] == Color::White {
                continue;
            }
            let has_white = g.neighbors(u).iter().any(|&w| self.colors[w] == Color::White);
            self.colors[u] = if !has_white {
                Color::Red
            } else if before == Color::White {
                shade.color()
            } else {
                before
            };
        }
        self.played.push(v);
        Ok(())
    }

    /// The potential `f`: 5 per white, 4 per light blue, 3 per dark blue.
    pub fn f_value(&self) -> i64 {
        self.colors.iter().map(|c| c.weight()).sum()
    }

    /// `f` before the move minus `f` after it.
    pub fn f_decrease(&self, v: usize, shade: Shade) -> Result<i64> {
        Ok(self.f_value() - self.apply_move(v, shade)?.f_value())
    }

    /// Number of white neighbours of `v` in the residual graph.
    pub fn white_degree(&self, v: usize) -> usize {
        self.graph.neighbors(v).iter().filter(|&&w| self.is_white(w)).count()
    }

    /// Number of blue neighbours joined to `v` by a retained edge (only white
    /// vertices have any).
    pub fn blue_degree(&self, v: usize) -> usize {
        if !self.is_white(v) {
            return 0;
        }
        self.graph.neighbors(v).iter().filter(|&&w| self.is_blue(w)).count()
    }

    /// Blue vertex with exactly one white neighbour.
    pub fn is_blue_leaf(&self, v: usize) -> bool {
        self.is_blue(v) && self.white_degree(v) == 1
    }

    /// An edge of `G` survives in the residual graph iff it has a white end.
    pub fn is_retained(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v) && (self.is_white(u) || self.is_white(v))
    }

    /// Neighbours of `v` in the residual graph.
    pub fn retained_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let white = self.is_white(v);
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| white || self.is_white(w))
    }

    /// Components of the residual graph, ordered by their smallest vertex.
    pub fn components(&self) -> Components {
        let n = self.colors.len();
        let mut of = vec![usize::MAX; n];
        let mut list = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if of[start] != usize::MAX {
                continue;
            }
            let id = list.len();
            of[start] = id;
            stack.push(start);
            let mut vertices = Vec::new();
            while let Some(u) = stack.pop() {
                vertices.push(u);
                for w in self.retained_neighbors(u) {
                    if of[w] == usize::MAX {
                        of[w] = id;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            let kind = self.classify(&vertices);
            list.push(Component { vertices, kind });
        }
        Components { list, of }
    }

    /// Shorthand for `components()` as (vertex set, kind) pairs.
    pub fn classify_components(&self) -> Vec<(Vec<usize>, ComponentKind)> {
        self.components().list.into_iter().map(|c| (c.vertices, c.kind)).collect()
    }

    fn classify(&self, vertices: &[usize]) -> ComponentKind {
        let whites = vertices.iter().filter(|&&v| self.is_white(v)).count();
        let light = vertices.iter().filter(|&&v| self.color(v) == Color::LightBlue).count();
        let dark = vertices.iter().filter(|&&v| self.color(v) == Color::DarkBlue).count();
        let blues = light + dark;
        match (vertices.len(), whites, light, dark) {
            (1, 0, 0, 0) => ComponentKind::IsolatedRed,
            (2, 2, 0, 0) => ComponentKind::Ww,
            (2, 1, 1, 0) => ComponentKind::WbPlus,
            (2, 1, 0, 1) => ComponentKind::WbMinus,
            (3, 1, _, _) if blues == 2 => ComponentKind::Bwb,
            (order, ..) => ComponentKind::Other { order, whites, blues },
        }
    }

    /// One `id color` line per vertex.
    pub fn snapshot(&self) -> String {
        let mut out = String::with_capacity(self.colors.len() * 5);
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "{v} {c}");
        }
        out
    }

    /// FNV-1a of [`ResidualState::snapshot`].
    pub fn snapshot_hash(&self) -> u64 {
        fnv1a(self.snapshot().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path, star};
    use Color::*;

    fn state<'g>(g: &'g Graph, colors: &[Color]) -> ResidualState<'g> {
        ResidualState::from_colors(g, colors.to_vec()).unwrap()
    }

    #[test]
    fn start_state_is_all_white() {
        let p3 = path(3).unwrap();
        let s = ResidualState::new(&p3).unwrap();
        assert_eq!(s.colors(), &[White; 3]);
        assert_eq!(s.f_value(), 15);
        assert!(s.played().is_empty());
        let c4 = cycle(4).unwrap();
        assert_eq!(ResidualState::new(&c4).unwrap().f_value(), 20);
    }

    #[test]
    fn isolated_vertices_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(ResidualState::new(&g).unwrap_err(), Error::IsolatedVertex(2));
    }

    #[test]
    fn legal_moves_track_colours() {
        let p3 = path(3).unwrap();
        let s = ResidualState::new(&p3).unwrap();
        assert_eq!(s.legal_moves(), vec![0, 1, 2]);
        let s = s.apply_move(1, Shade::Light).unwrap();
        assert!(s.legal_moves().is_empty());
        assert!(s.is_game_over());

        let p4 = path(4).unwrap();
        let s = ResidualState::new(&p4).unwrap().apply_move(1, Shade::Light).unwrap();
        assert_eq!(s.legal_moves(), vec![2, 3]);
    }

    #[test]
    fn shading_follows_the_argument() {
        let p4 = path(4).unwrap();
        let s0 = ResidualState::new(&p4).unwrap();
        let s = s0.apply_move(1, Shade::Light).unwrap();
        assert_eq!(s.colors(), &[Red, Red, LightBlue, White]);
        assert_eq!(s.f_value(), 9);
        assert_eq!(s0.f_decrease(1, Shade::Light).unwrap(), 11);

        let c4 = cycle(4).unwrap();
        let s = ResidualState::new(&c4).unwrap().apply_move(0, Shade::Dark).unwrap();
        assert_eq!(s.colors(), &[Red, DarkBlue, White, DarkBlue]);
        assert_eq!(s.f_value(), 11);

        // an already light vertex keeps its shade under a dark move
        let p6 = path(6).unwrap();
        let s = ResidualState::new(&p6).unwrap().apply_move(1, Shade::Light).unwrap();
        let s = s.apply_move(5, Shade::Dark).unwrap();
        assert_eq!(s.colors(), &[Red, Red, LightBlue, White, DarkBlue, Red]);
    }

    #[test]
    fn p2_ends_in_one_move() {
        let p2 = path(2).unwrap();
        for shade in [Shade::Light, Shade::Dark] {
            let s = ResidualState::new(&p2).unwrap().apply_move(0, shade).unwrap();
            assert_eq!(s.colors(), &[Red, Red]);
            assert_eq!(s.f_value(), 0);
        }
    }

    #[test]
    fn illegal_moves_rejected() {
        let p3 = path(3).unwrap();
        let s = ResidualState::new(&p3).unwrap().apply_move(1, Shade::Dark).unwrap();
        assert!(matches!(s.apply_move(0, Shade::Dark), Err(Error::IllegalMove { .. })));
        assert!(matches!(s.f_decrease(7, Shade::Dark), Err(Error::IllegalMove { .. })));
    }

    #[test]
    fn weights() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (2, 3)]).unwrap();
        let s = state(&g, &[White, LightBlue, DarkBlue, Red]);
        assert_eq!(s.f_value(), 12);
    }

    #[test]
    fn star_centre_clears_everything() {
        let g = star(4).unwrap();
        let s = ResidualState::new(&g).unwrap();
        assert_eq!(s.f_decrease(0, Shade::Light).unwrap(), 20);
        assert_eq!(s.f_decrease(1, Shade::Light).unwrap(), 6);
    }

    #[test]
    fn blue_leaf_move_decreases_by_at_least_five() {
        // 0 (blue leaf) - 1 (white) - 2 (white), 3 red-side anchor of 0
        let g = Graph::from_edges(5, [(3, 0), (0, 1), (1, 2), (2, 4)]).unwrap();
        let s = state(&g, &[DarkBlue, White, White, Red, White]);
        assert!(s.is_blue_leaf(0));
        assert!(s.f_decrease(0, Shade::Dark).unwrap() >= 5);
        assert_eq!(s.f_decrease(0, Shade::Dark).unwrap(), 5);
    }

    #[test]
    fn component_taxonomy() {
        let p3 = path(3).unwrap();
        let s = state(&p3, &[DarkBlue, White, LightBlue]);
        assert_eq!(s.classify_components(), vec![(vec![0, 1, 2], ComponentKind::Bwb)]);

        let p2 = path(2).unwrap();
        let s = state(&p2, &[White, LightBlue]);
        assert_eq!(s.classify_components(), vec![(vec![0, 1], ComponentKind::WbPlus)]);
        let s = state(&p2, &[DarkBlue, White]);
        assert_eq!(s.components().list[0].kind, ComponentKind::WbMinus);

        let p4 = path(4).unwrap();
        let s = ResidualState::new(&p4).unwrap().apply_move(1, Shade::Light).unwrap();
        assert_eq!(
            s.classify_components(),
            vec![
                (vec![0], ComponentKind::IsolatedRed),
                (vec![1], ComponentKind::IsolatedRed),
                (vec![2, 3], ComponentKind::WbPlus),
            ]
        );
        assert!(ComponentKind::Bwb.is_special());
        assert!(ComponentKind::WbMinus.is_special());
        assert!(!ComponentKind::Other { order: 4, whites: 2, blues: 2 }.is_special());
    }

    #[test]
    fn retained_edges_need_a_white_end() {
        let c4 = cycle(4).unwrap();
        let s = ResidualState::new(&c4).unwrap().apply_move(0, Shade::Dark).unwrap();
        assert!(!s.is_retained(0, 1));
        assert!(s.is_retained(1, 2));
        assert_eq!(s.white_degree(1), 1);
        assert_eq!(s.blue_degree(2), 2);
        assert_eq!(s.blue_degree(1), 0);
        assert_eq!(s.retained_neighbors(2).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn snapshot_format() {
        let p4 = path(4).unwrap();
        let s = ResidualState::new(&p4).unwrap().apply_move(1, Shade::Light).unwrap();
        assert_eq!(s.snapshot(), "0 R\n1 R\n2 LB\n3 W\n");
        let back = ResidualState::from_snapshot(&p4, &s.snapshot()).unwrap();
        assert_eq!(back.colors(), s.colors());
        assert!(ResidualState::from_snapshot(&p4, "0 R\n1 R\n2 R\n3 W\n").is_err());
        assert!(ResidualState::from_snapshot(&p4, "0 R\n1 R\n2 XX\n3 W\n").is_err());
    }

    #[test]
    fn colour_order() {
        assert!(White.may_become(Red));
        assert!(LightBlue.may_become(LightBlue));
        assert!(!LightBlue.may_become(DarkBlue));
        assert!(!Red.may_become(White));
        assert!(!DarkBlue.may_become(White));
    }
}
