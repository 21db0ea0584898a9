//! The four-phase bookkeeping behind the greedy Dominator strategy.
//!
//! Phases 1 and 2 measure progress with the vertex-weight potential `f`.
//! When phase 2 ends the cycle components of the white subgraph are frozen
//! into an [`XCycleRegistry`], and phases 3 and 4 use the adjusted potential
//!
//! ```text
//! F = f - (open X-cycles) - (WB+ components) - 3 * (BWB components)
//! ```
//!
//! Phase predicates are only evaluated before the first Dominator move and
//! after even-indexed moves, so every phase starts with a Dominator move.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residual::{ComponentKind, Components, ResidualState, Shade};

/// Greedy Dominator moves in phases 1 and 2 decrease `f` by at least this.
pub const PHASE12_DOMINATOR_MIN: i64 = 11;
/// Phase 3 lasts while some move decreases `F` by at least this.
pub const PHASE3_ACTIVE_MIN: i64 = 10;

/// Which potential measures a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialKind {
    #[serde(rename = "f")]
    Weight,
    #[serde(rename = "F")]
    Adjusted,
}

impl PotentialKind {
    pub fn code(self) -> &'static str {
        match self {
            PotentialKind::Weight => "f",
            PotentialKind::Adjusted => "F",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "f" => Some(PotentialKind::Weight),
            "F" => Some(PotentialKind::Adjusted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleStatus {
    Closed,
    Open,
    Finished,
    Other,
}

/// Vertex sets of the white cycles frozen when phase 3 begins, each listed in
/// cyclic order starting from its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct XCycleRegistry {
    cycles: Vec<Vec<usize>>,
}

impl XCycleRegistry {
    /// Collects the cycle components of the white subgraph without checking
    /// the end-of-phase-2 structure.
    pub fn collect(s: &ResidualState<'_>) -> Self {
        let cycles = white_components(s)
            .into_iter()
            .filter(|comp| comp.len() >= 3 && comp.iter().all(|&v| s.white_degree(v) == 2))
            .map(|comp| cyclic_order(s, &comp))
            .collect();
        XCycleRegistry { cycles }
    }

    pub fn from_cycles(cycles: Vec<Vec<usize>>) -> Self {
        XCycleRegistry { cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Index of the X-cycle containing `v`.
    pub fn cycle_of(&self, v: usize) -> Option<usize> {
        self.cycles.iter().position(|c| c.contains(&v))
    }

    pub fn status(&self, i: usize, s: &ResidualState<'_>) -> Result<CycleStatus> {
        self.status_with(i, s, &s.components())
    }

    pub fn status_with(
        &self,
        i: usize,
        s: &ResidualState<'_>,
        comps: &Components,
    ) -> Result<CycleStatus> {
        let cycle = self.cycles.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.cycles.len(),
        })?;
        Ok(status_of(cycle, s, comps))
    }

    /// Number of open X-cycles.
    pub fn open_count(&self, s: &ResidualState<'_>, comps: &Components) -> usize {
        self.cycles
            .iter()
            .filter(|c| status_of(c, s, comps) == CycleStatus::Open)
            .count()
    }
}

fn status_of(cycle: &[usize], s: &ResidualState<'_>, comps: &Components) -> CycleStatus {
    let k = cycle.len();
    let closed = (0..k).all(|j| s.is_retained(cycle[j], cycle[(j + 1) % k]));
    if closed {
        return CycleStatus::Closed;
    }
    let open = cycle
        .iter()
        .any(|&v| s.is_blue_leaf(v) && comps.kind_of(v).order() >= 4);
    if open {
        return CycleStatus::Open;
    }
    let finished = cycle
        .iter()
        .all(|&v| s.is_red(v) || comps.kind_of(v) == ComponentKind::Bwb);
    if finished {
        CycleStatus::Finished
    } else {
        CycleStatus::Other
    }
}

/// Components of the subgraph induced by the white vertices, each sorted.
pub fn white_components(s: &ResidualState<'_>) -> Vec<Vec<usize>> {
    let g = s.graph();
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] || !s.is_white(start) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &w in g.neighbors(u) {
                if s.is_white(w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn cyclic_order(s: &ResidualState<'_>, comp: &[usize]) -> Vec<usize> {
    let g = s.graph();
    let white_nbrs = |v: usize| g.neighbors(v).iter().copied().filter(|&w| s.is_white(w));
    let start = comp[0];
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = white_nbrs(start).min().expect("cycle vertex has white neighbours");
    while cur != start {
        order.push(cur);
        let next = white_nbrs(cur).find(|&w| w != prev).expect("degree two");
        prev = cur;
        cur = next;
    }
    order
}

/// Structural facts that hold when phase 2 ends under greedy play:
/// white degrees of white vertices at most 2 and of blue vertices at most 3,
/// white components are `P_1`, `P_2` or cycles of length at least 4, and no
/// white vertex without white neighbours touches a blue vertex with three.
pub fn end_of_phase2_violations(s: &ResidualState<'_>) -> Vec<String> {
    let g = s.graph();
    let mut out = Vec::new();
    for v in 0..g.n() {
        let dw = s.white_degree(v);
        if s.is_white(v) && dw > 2 {
            out.push(format!("white vertex {v} has white degree {dw} > 2"));
        }
        if s.is_blue(v) && dw > 3 {
            out.push(format!("blue vertex {v} has white degree {dw} > 3"));
        }
    }
    for comp in white_components(s) {
        let k = comp.len();
        let is_cycle = comp.iter().all(|&v| s.white_degree(v) == 2);
        if !(k <= 2 || (is_cycle && k >= 4)) {
            out.push(format!("white component {comp:?} is not P1, P2 or C_k with k >= 4"));
        }
    }
    for v in 0..g.n() {
        if s.is_white(v) && s.white_degree(v) == 0 {
            for &u in g.neighbors(v) {
                if s.is_blue(u) && s.white_degree(u) == 3 {
                    out.push(format!("isolated white {v} is adjacent to blue {u} with white degree 3"));
                }
            }
        }
    }
    out
}

/// Freezes the X-cycles of a phase-2 end state, failing if the state lacks
/// the structure greedy play guarantees there.
pub fn freeze_registry(s: &ResidualState<'_>) -> Result<XCycleRegistry> {
    let violations = end_of_phase2_violations(s);
    if !violations.is_empty() {
        return Err(Error::ClaimViolation {
            claim: "END2_STRUCT".into(),
            detail: violations.join("; "),
            snapshot: s.snapshot(),
        });
    }
    Ok(XCycleRegistry::collect(s))
}

/// The terms of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjustedParts {
    pub f: i64,
    pub open_cycles: i64,
    pub wb_plus: i64,
    pub bwb: i64,
}

impl AdjustedParts {
    pub fn value(&self) -> i64 {
        self.f - self.open_cycles - self.wb_plus - 3 * self.bwb
    }
}

pub fn adjusted_parts(s: &ResidualState<'_>, reg: &XCycleRegistry) -> AdjustedParts {
    let comps = s.components();
    AdjustedParts {
        f: s.f_value(),
        open_cycles: reg.open_count(s, &comps) as i64,
        wb_plus: comps.count(ComponentKind::WbPlus) as i64,
        bwb: comps.count(ComponentKind::Bwb) as i64,
    }
}

/// The adjusted potential `F`.
pub fn adjusted_value(s: &ResidualState<'_>, reg: &XCycleRegistry) -> i64 {
    adjusted_parts(s, reg).value()
}

/// Decrease of `F` when `v` is played (new blues are dark).
pub fn adjusted_decrease(s: &ResidualState<'_>, reg: &XCycleRegistry, v: usize) -> Result<i64> {
    let after = s.apply_move(v, Shade::Dark)?;
    Ok(adjusted_value(s, reg) - adjusted_value(&after, reg))
}

/// A white path `u - v - w` whose end `u` is a leaf of the graph.
pub fn phase1_active(s: &ResidualState<'_>) -> bool {
    let g = s.graph();
    (0..g.n()).any(|v| {
        s.is_white(v)
            && s.white_degree(v) >= 2
            && g.neighbors(v).iter().any(|&u| s.is_white(u) && g.is_leaf(u))
    })
}

/// Largest decrease of `f` over legal moves with dark shading.
pub fn max_weight_decrease(s: &ResidualState<'_>) -> i64 {
    let base = s.f_value();
    s.legal_moves()
        .into_iter()
        .map(|v| base - s.apply_move(v, Shade::Dark).expect("legal").f_value())
        .max()
        .unwrap_or(0)
}

/// Some move decreases `f` by at least 11.
pub fn phase2_active(s: &ResidualState<'_>) -> bool {
    max_weight_decrease(s) >= PHASE12_DOMINATOR_MIN
}

/// Largest decrease of `F` over legal moves.
pub fn max_adjusted_decrease(s: &ResidualState<'_>, reg: &XCycleRegistry) -> i64 {
    let base = adjusted_value(s, reg);
    s.legal_moves()
        .into_iter()
        .map(|v| base - adjusted_value(&s.apply_move(v, Shade::Dark).expect("legal"), reg))
        .max()
        .unwrap_or(0)
}

/// Some move decreases `F` by at least 10.
pub fn phase3_active(s: &ResidualState<'_>, reg: &XCycleRegistry) -> bool {
    max_adjusted_decrease(s, reg) >= PHASE3_ACTIVE_MIN
}

pub fn cycle_status(reg: &XCycleRegistry, i: usize, s: &ResidualState<'_>) -> Result<CycleStatus> {
    reg.status(i, s)
}

/// Per-game phase state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseContext {
    phase: u8,
    move_index: usize,
    registry: Option<Arc<XCycleRegistry>>,
    f_at_phase2_end: Option<i64>,
    adjusted_at_phase3_start: Option<i64>,
}

impl PhaseContext {
    /// Phase 1 with the next move numbered `first_index` (1 when Dominator
    /// opens, 0 when Staller does).
    pub fn new(first_index: usize) -> Self {
        PhaseContext {
            phase: 1,
            move_index: first_index,
            registry: None,
            f_at_phase2_end: None,
            adjusted_at_phase3_start: None,
        }
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Index of the next move.
    pub fn move_index(&self) -> usize {
        self.move_index
    }

    pub fn registry(&self) -> Option<&XCycleRegistry> {
        self.registry.as_deref()
    }

    pub fn f_at_phase2_end(&self) -> Option<i64> {
        self.f_at_phase2_end
    }

    pub fn adjusted_at_phase3_start(&self) -> Option<i64> {
        self.adjusted_at_phase3_start
    }

    /// Light exactly while in phase 1.
    pub fn shade(&self) -> Shade {
        if self.phase == 1 {
            Shade::Light
        } else {
            Shade::Dark
        }
    }

    pub fn potential_kind(&self) -> PotentialKind {
        if self.phase <= 2 {
            PotentialKind::Weight
        } else {
            PotentialKind::Adjusted
        }
    }

    /// Value of the active potential.
    pub fn potential(&self, s: &ResidualState<'_>) -> i64 {
        match self.registry() {
            Some(reg) if self.phase >= 3 => adjusted_value(s, reg),
            _ => s.f_value(),
        }
    }

    /// Decrease of the active potential if `v` is played now.
    pub fn decrease(&self, s: &ResidualState<'_>, v: usize) -> Result<i64> {
        match self.registry() {
            Some(reg) if self.phase >= 3 => adjusted_decrease(s, reg, v),
            _ => s.f_decrease(v, self.shade()),
        }
    }

    pub(crate) fn advance_index(&mut self) {
        self.move_index += 1;
    }

    /// Moves to the next phase while the current one's predicate fails.
    /// Call before the first Dominator move and after every even-indexed
    /// move; does nothing once the game is over.
    pub fn maybe_advance(mut self, s: &ResidualState<'_>) -> Self {
        while !s.is_game_over() {
            match self.phase {
                1 if phase1_active(s) => break,
                1 => self.phase = 2,
                2 if phase2_active(s) => break,
                2 => {
                    let reg = XCycleRegistry::collect(s);
                    self.f_at_phase2_end = Some(s.f_value());
                    self.adjusted_at_phase3_start = Some(adjusted_value(s, &reg));
                    self.registry = Some(Arc::new(reg));
                    self.phase = 3;
                }
                3 => {
                    let reg = self.registry().expect("registry exists in phase 3");
                    if phase3_active(s, reg) {
                        break;
                    }
                    self.phase = 4;
                }
                _ => break,
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};
    use crate::graph::Graph;
    use crate::residual::Color::{self, *};

    fn state<'g>(g: &'g Graph, colors: &[Color]) -> ResidualState<'g> {
        ResidualState::from_colors(g, colors.to_vec()).unwrap()
    }

    #[test]
    fn phase1_predicate() {
        let p3 = path(3).unwrap();
        assert!(phase1_active(&ResidualState::new(&p3).unwrap()));
        let c4 = cycle(4).unwrap();
        assert!(!phase1_active(&ResidualState::new(&c4).unwrap()));
        let p4 = path(4).unwrap();
        let s = ResidualState::new(&p4).unwrap().apply_move(1, Shade::Light).unwrap();
        assert!(!phase1_active(&s));
        // a white leaf in the middle of nothing: P_2 has no white P_3
        let p2 = path(2).unwrap();
        assert!(!phase1_active(&ResidualState::new(&p2).unwrap()));
    }

    #[test]
    fn phase2_predicate() {
        // white centre with three white neighbours, each hanging off a blue
        let g = Graph::from_edges(
            7,
            [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)],
        )
        .unwrap();
        let s = state(&g, &[White, White, White, White, DarkBlue, DarkBlue, DarkBlue]);
        assert!(s.f_decrease(0, Shade::Dark).unwrap() >= 11);
        assert!(phase2_active(&s));

        let p2 = path(2).unwrap();
        let s = state(&p2, &[White, DarkBlue]);
        assert_eq!(max_weight_decrease(&s), 8);
        assert!(!phase2_active(&s));

        let c6 = cycle(6).unwrap();
        let s = ResidualState::new(&c6).unwrap();
        assert_eq!(max_weight_decrease(&s), 9);
        assert!(!phase2_active(&s));
    }

    #[test]
    fn registry_collection() {
        // P_2 + P_1 white components: no cycles
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 2), (3, 4)]).unwrap();
        let s = state(&g, &[White, White, DarkBlue, White, DarkBlue]);
        let reg = freeze_registry(&s).unwrap();
        assert!(reg.is_empty());

        let c5 = cycle(5).unwrap();
        let reg = freeze_registry(&ResidualState::new(&c5).unwrap()).unwrap();
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.cycles()[0], vec![0, 1, 2, 3, 4]);
        assert_eq!(reg.cycle_of(3), Some(0));
    }

    #[test]
    fn registry_rejects_white_p3() {
        let p3 = path(3).unwrap();
        let err = freeze_registry(&ResidualState::new(&p3).unwrap()).unwrap_err();
        match err {
            Error::ClaimViolation { claim, snapshot, .. } => {
                assert_eq!(claim, "END2_STRUCT");
                assert_eq!(snapshot, "0 W\n1 W\n2 W\n");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn registry_rejects_triangles_and_high_degree() {
        let k3 = crate::generators::complete(3).unwrap();
        assert!(freeze_registry(&ResidualState::new(&k3).unwrap()).is_err());
        // blue with four white neighbours
        let g = Graph::from_edges(
            9,
            [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 6), (3, 7), (4, 8)],
        )
        .unwrap();
        let s = state(&g, &[DarkBlue, White, White, White, White, DarkBlue, DarkBlue, DarkBlue, DarkBlue]);
        let v = end_of_phase2_violations(&s);
        assert!(v.iter().any(|m| m.contains("blue vertex 0")), "{v:?}");
    }

    #[test]
    fn cycle_statuses() {
        let c4 = cycle(4).unwrap();
        let reg = XCycleRegistry::from_cycles(vec![vec![0, 1, 2, 3]]);
        let s = ResidualState::new(&c4).unwrap();
        assert_eq!(cycle_status(&reg, 0, &s).unwrap(), CycleStatus::Closed);

        // B W B W with both blues of white degree 2: every edge keeps a white end
        let s = state(&c4, &[DarkBlue, White, DarkBlue, White]);
        assert_eq!(cycle_status(&reg, 0, &s).unwrap(), CycleStatus::Closed);

        let s = state(&c4, &[Red; 4]);
        assert_eq!(cycle_status(&reg, 0, &s).unwrap(), CycleStatus::Finished);

        let s = ResidualState::new(&c4).unwrap().apply_move(0, Shade::Dark).unwrap();
        assert_eq!(cycle_status(&reg, 0, &s).unwrap(), CycleStatus::Finished);

        assert!(matches!(
            cycle_status(&reg, 1, &s),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
    }

    #[test]
    fn open_cycle_counts_in_adjusted_potential() {
        // C_7 after playing 0: blues 1 and 6 are leaves in a component of order 6
        let c7 = cycle(7).unwrap();
        let s0 = ResidualState::new(&c7).unwrap();
        let reg = XCycleRegistry::collect(&s0);
        let s = s0.apply_move(0, Shade::Dark).unwrap();
        assert_eq!(reg.status(0, &s).unwrap(), CycleStatus::Open);
        let parts = adjusted_parts(&s, &reg);
        assert_eq!(parts.open_cycles, 1);
        assert_eq!(parts.value(), 5 * 4 + 3 * 2 - 1);
        assert_eq!(adjusted_decrease(&s0, &reg, 0).unwrap(), 35 - 25);
    }

    #[test]
    fn adjusted_values_of_small_states() {
        let reg = XCycleRegistry::default();
        let p3 = path(3).unwrap();
        assert_eq!(adjusted_value(&state(&p3, &[Red; 3]), &reg), 0);

        // BWB plus a red isolate-side vertex
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = state(&g, &[DarkBlue, White, DarkBlue, Red]);
        assert_eq!(s.f_value(), 11);
        assert_eq!(adjusted_value(&s, &reg), 8);
        for v in 0..3 {
            assert!(adjusted_decrease(&s, &reg, v).unwrap() >= 8);
        }

        let p2 = path(2).unwrap();
        assert_eq!(adjusted_value(&state(&p2, &[White, LightBlue]), &reg), 8);
        let s = state(&p2, &[White, DarkBlue]);
        assert_eq!(adjusted_decrease(&s, &reg, 0).unwrap(), 8);
        assert_eq!(adjusted_decrease(&s, &reg, 1).unwrap(), 8);
    }

    #[test]
    fn blue_leaf_next_to_degree_two_white() {
        // u=0 blue leaf, u'=1 white with white neighbours 2 and 3; 4 keeps 0 blue-side
        let g = Graph::from_edges(7, [(4, 0), (0, 1), (1, 2), (1, 3), (2, 5), (3, 6)]).unwrap();
        let s = state(&g, &[DarkBlue, White, White, White, Red, White, White]);
        let reg = XCycleRegistry::default();
        assert!(adjusted_decrease(&s, &reg, 1).unwrap() >= 11);
    }

    #[test]
    fn cascade_on_c4() {
        let c4 = cycle(4).unwrap();
        let s = ResidualState::new(&c4).unwrap();
        let ctx = PhaseContext::new(1).maybe_advance(&s);
        assert_eq!(ctx.phase(), 3);
        let reg = ctx.registry().unwrap();
        assert_eq!(reg.len(), 1);
        for v in 0..4 {
            assert_eq!(adjusted_decrease(&s, reg, v).unwrap(), 12);
        }
        assert_eq!(ctx.f_at_phase2_end(), Some(20));
        assert_eq!(ctx.adjusted_at_phase3_start(), Some(20));
        assert_eq!(ctx.shade(), Shade::Dark);
        assert_eq!(ctx.potential_kind(), PotentialKind::Adjusted);
    }

    #[test]
    fn cascade_on_paths() {
        let p2 = path(2).unwrap();
        let ctx = PhaseContext::new(1).maybe_advance(&ResidualState::new(&p2).unwrap());
        // the single move decreases F by 10, so phase 3 is still active
        assert_eq!(ctx.phase(), 3);

        let p4 = path(4).unwrap();
        let ctx = PhaseContext::new(1).maybe_advance(&ResidualState::new(&p4).unwrap());
        assert_eq!(ctx.phase(), 1);
        assert_eq!(ctx.shade(), Shade::Light);
        assert!(ctx.registry().is_none());
    }

    #[test]
    fn cascade_reaches_phase4_on_special_components() {
        // WB- plus a red vertex: nothing decreases F by 10
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let s = state(&g, &[Red, DarkBlue, White]);
        let ctx = PhaseContext::new(1).maybe_advance(&s);
        assert_eq!(ctx.phase(), 4);
    }
}
