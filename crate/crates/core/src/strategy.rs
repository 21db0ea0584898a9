//! Move policies, the game loop and transcripts.
//!
//! Moves are numbered so that Dominator always plays the odd indices: a
//! Dominator-start game runs 1, 2, 3, ... and a Staller-start game opens
//! with Staller's move 0, which is counted in phase 1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::phase::{PhaseContext, PotentialKind};
use crate::residual::ResidualState;
use crate::rng::SeedRng;

/// Default vertex cap for [`staller_worst_case`].
pub const WORST_CASE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "D")]
    Dominator,
    #[serde(rename = "S")]
    Staller,
}

impl Player {
    pub fn code(self) -> &'static str {
        match self {
            Player::Dominator => "D",
            Player::Staller => "S",
        }
    }

    pub fn from_code(s: &str) -> Option<Player> {
        match s {
            "D" | "d" => Some(Player::Dominator),
            "S" | "s" => Some(Player::Staller),
            _ => None,
        }
    }

    /// Who plays move `index`.
    pub fn at(index: usize) -> Player {
        if index % 2 == 1 {
            Player::Dominator
        } else {
            Player::Staller
        }
    }

    /// Index of the opening move of a game started by `self`.
    pub fn first_index(self) -> usize {
        match self {
            Player::Dominator => 1,
            Player::Staller => 0,
        }
    }
}

/// Chooses a vertex to play.
pub trait Policy {
    fn name(&self) -> String;
    fn choose(&mut self, ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize>;
}

/// Active-potential decrease of every legal move, ascending by vertex.
pub fn move_decreases(ctx: &PhaseContext, s: &ResidualState<'_>) -> Vec<(usize, i64)> {
    let base = ctx.potential(s);
    let shade = ctx.shade();
    s.legal_moves()
        .into_iter()
        .map(|v| {
            let after = s.apply_move(v, shade).expect("legal move");
            (v, base - ctx.potential(&after))
        })
        .collect()
}

/// The legal vertex with the largest active-potential decrease, smallest id
/// on ties.
pub fn dominator_greedy(ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize> {
    move_decreases(ctx, s)
        .into_iter()
        .fold(None, |best: Option<(usize, i64)>, (v, d)| match best {
            Some((_, bd)) if bd >= d => best,
            _ => Some((v, d)),
        })
        .map(|(v, _)| v)
        .ok_or(Error::NoMove)
}

/// The legal vertex with the smallest active-potential decrease, smallest id
/// on ties.
pub fn staller_min_decrease(ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize> {
    move_decreases(ctx, s)
        .into_iter()
        .fold(None, |best: Option<(usize, i64)>, (v, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((v, d)),
        })
        .map(|(v, _)| v)
        .ok_or(Error::NoMove)
}

/// A legal move drawn uniformly (`below(#legal)` over the ascending list).
pub fn staller_random(s: &ResidualState<'_>, rng: &mut SeedRng) -> Result<usize> {
    let moves = s.legal_moves();
    if moves.is_empty() {
        return Err(Error::NoMove);
    }
    Ok(moves[rng.below(moves.len())])
}

#[derive(Debug, Clone, Default)]
pub struct Greedy;

impl Policy for Greedy {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn choose(&mut self, ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize> {
        dominator_greedy(ctx, s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct MinDecrease;

impl Policy for MinDecrease {
    fn name(&self) -> String {
        "min".into()
    }

    fn choose(&mut self, ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize> {
        staller_min_decrease(ctx, s)
    }
}

#[derive(Debug, Clone)]
pub struct RandomMoves {
    seed: u64,
    rng: SeedRng,
}

impl RandomMoves {
    pub fn new(seed: u64) -> Self {
        RandomMoves { seed, rng: SeedRng::new(seed) }
    }
}

impl Policy for RandomMoves {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn choose(&mut self, _ctx: &PhaseContext, s: &ResidualState<'_>) -> Result<usize> {
        staller_random(s, &mut self.rng)
    }
}

/// Replays a fixed move list.
#[derive(Debug, Clone)]
pub struct Scripted {
    moves: Vec<usize>,
    next: usize,
}

impl Scripted {
    pub fn new(moves: Vec<usize>) -> Self {
        Scripted { moves, next: 0 }
    }
}

impl Policy for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn choose(&mut self, _ctx: &PhaseContext, _s: &ResidualState<'_>) -> Result<usize> {
        let v = *self.moves.get(self.next).ok_or(Error::NoMove)?;
        self.next += 1;
        Ok(v)
    }
}

mod hex_hash {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(h: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match h {
            Some(h) => s.serialize_str(&format!("{h:016x}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| u64::from_str_radix(&s, 16).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub index: usize,
    pub mover: Player,
    pub vertex: usize,
    pub phase: u8,
    pub kind: PotentialKind,
    pub decrease: i64,
    /// FNV-1a of the state snapshot after the move.
    #[serde(with = "hex_hash", default)]
    pub snapshot_hash: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub n: usize,
    pub m: usize,
    pub hash: String,
}

impl GraphInfo {
    pub fn of(g: &Graph) -> Self {
        GraphInfo {
            n: g.n(),
            m: g.edge_count(),
            hash: format!("{:016x}", g.hash64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub graph: GraphInfo,
    pub first_player: Player,
    pub dominator_policy: String,
    pub staller_policy: String,
    pub records: Vec<MoveRecord>,
    pub phase_lengths: [usize; 4],
    pub total_moves: usize,
    pub f_at_phase2_end: Option<i64>,
    #[serde(rename = "F_at_phase2_end")]
    pub adjusted_at_phase2_end: Option<i64>,
    pub final_potential: i64,
}

impl Transcript {
    /// `f - F` at the phase-3 handoff, zero if phase 3 was never reached.
    pub fn handoff_gap(&self) -> i64 {
        match (self.f_at_phase2_end, self.adjusted_at_phase2_end) {
            (Some(f), Some(big)) => f - big,
            _ => 0,
        }
    }

    pub fn moves(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.vertex).collect()
    }

    /// Line-oriented rendering: `#` header lines, one
    /// `idx mover vertex phase kind decrease` line per move, and a footer.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# graph n={} m={} hash={}",
            self.graph.n, self.graph.m, self.graph.hash
        );
        let _ = writeln!(
            out,
            "# first={} dominator={} staller={}",
            self.first_player.code(),
            self.dominator_policy,
            self.staller_policy
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{} {} {} {} {} {}",
                r.index,
                r.mover.code(),
                r.vertex,
                r.phase,
                r.kind.code(),
                r.decrease
            );
        }
        let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
        let [p1, p2, p3, p4] = self.phase_lengths;
        let _ = writeln!(
            out,
            "p1={p1} p2={p2} p3={p3} p4={p4} total={} final={} f_end2={} F_end2={}",
            self.total_moves,
            self.final_potential,
            opt(self.f_at_phase2_end),
            opt(self.adjusted_at_phase2_end)
        );
        out
    }

    /// Parses [`Transcript::to_text`]. Snapshot hashes are not part of the
    /// text form and come back empty.
    pub fn from_text(text: &str) -> Result<Transcript> {
        let mut graph = None;
        let mut first = None;
        let mut dominator_policy = String::new();
        let mut staller_policy = String::new();
        let mut records = Vec::new();
        let mut footer = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let err = |reason: String| Error::Parse { line: lineno, reason };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let kv = key_values(rest);
                if let Some(n) = kv.iter().find(|(k, _)| *k == "n") {
                    let get = |key: &str| {
                        kv.iter()
                            .find(|(k, _)| *k == key)
                            .map(|(_, v)| v.to_string())
                            .ok_or_else(|| err(format!("missing {key}")))
                    };
                    graph = Some(GraphInfo {
                        n: n.1.parse().map_err(|_| err("bad n".into()))?,
                        m: get("m")?.parse().map_err(|_| err("bad m".into()))?,
                        hash: get("hash")?,
                    });
                }
                for (k, v) in kv {
                    match k {
                        "first" => {
                            first = Some(
                                Player::from_code(v).ok_or_else(|| err(format!("bad player {v:?}")))?,
                            )
                        }
                        "dominator" => dominator_policy = v.to_string(),
                        "staller" => staller_policy = v.to_string(),
                        _ => {}
                    }
                }
                continue;
            }
            if line.starts_with("p1=") {
                footer = Some((lineno, line.to_string()));
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 6 {
                return Err(err(format!("expected 6 fields, got {line:?}")));
            }
            let num = |t: &str| t.parse::<i64>().map_err(|_| err(format!("bad number {t:?}")));
            records.push(MoveRecord {
                index: num(toks[0])? as usize,
                mover: Player::from_code(toks[1]).ok_or_else(|| err("bad mover".into()))?,
                vertex: num(toks[2])? as usize,
                phase: num(toks[3])? as u8,
                kind: PotentialKind::from_code(toks[4]).ok_or_else(|| err("bad kind".into()))?,
                decrease: num(toks[5])?,
                snapshot_hash: None,
            });
        }
        let (fl, footer) = footer.ok_or(Error::Parse {
            line: text.lines().count(),
            reason: "missing footer".into(),
        })?;
        let kv = key_values(&footer);
        let ferr = |k: &str| Error::Parse { line: fl, reason: format!("footer field {k}") };
        let get = |k: &str| -> Result<Option<i64>> {
            let v = kv.iter().find(|(key, _)| *key == k).ok_or_else(|| ferr(k))?.1;
            if v == "-" {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| ferr(k))
            }
        };
        let req = |k: &str| get(k)?.ok_or_else(|| ferr(k));
        Ok(Transcript {
            graph: graph.ok_or(Error::Parse { line: 1, reason: "missing graph header".into() })?,
            first_player: first.ok_or(Error::Parse { line: 2, reason: "missing first=".into() })?,
            dominator_policy,
            staller_policy,
            records,
            phase_lengths: [
                req("p1")? as usize,
                req("p2")? as usize,
                req("p3")? as usize,
                req("p4")? as usize,
            ],
            total_moves: req("total")? as usize,
            final_potential: req("final")?,
            f_at_phase2_end: get("f_end2")?,
            adjusted_at_phase2_end: get("F_end2")?,
        })
    }
}

fn key_values(s: &str) -> Vec<(&str, &str)> {
    s.split_whitespace().filter_map(|t| t.split_once('=')).collect()
}

/// A game in progress: the residual state, the phase context and the moves so
/// far.
#[derive(Debug, Clone)]
pub struct Game<'g> {
    state: ResidualState<'g>,
    ctx: PhaseContext,
    first: Player,
    records: Vec<MoveRecord>,
}

impl<'g> Game<'g> {
    pub fn new(g: &'g Graph, first: Player) -> Result<Self> {
        let state = ResidualState::new(g)?;
        let mut ctx = PhaseContext::new(first.first_index());
        if first == Player::Dominator {
            ctx = ctx.maybe_advance(&state);
        }
        Ok(Game { state, ctx, first, records: Vec::new() })
    }

    pub fn state(&self) -> &ResidualState<'g> {
        &self.state
    }

    pub fn ctx(&self) -> &PhaseContext {
        &self.ctx
    }

    pub fn first_player(&self) -> Player {
        self.first
    }

    pub fn records(&self) -> &[MoveRecord] {
        &self.records
    }

    pub fn is_over(&self) -> bool {
        self.state.is_game_over()
    }

    pub fn to_move(&self) -> Player {
        Player::at(self.ctx.move_index())
    }

    /// Plays `v` for whoever is to move.
    pub fn play(&mut self, v: usize) -> Result<&MoveRecord> {
        if self.is_over() {
            return Err(Error::NoMove);
        }
        let decrease = self.ctx.decrease(&self.state, v)?;
        self.state.play_in_place(v, self.ctx.shade())?;
        let index = self.ctx.move_index();
        self.records.push(MoveRecord {
            index,
            mover: Player::at(index),
            vertex: v,
            phase: self.ctx.phase(),
            kind: self.ctx.potential_kind(),
            decrease,
            snapshot_hash: Some(self.state.snapshot_hash()),
        });
        self.ctx.advance_index();
        if index.is_multiple_of(2) && !self.is_over() {
            self.ctx = std::mem::replace(&mut self.ctx, PhaseContext::new(0)).maybe_advance(&self.state);
        }
        Ok(self.records.last().expect("just pushed"))
    }

    pub fn transcript(&self, dominator: &str, staller: &str) -> Transcript {
        let mut phase_lengths = [0; 4];
        for r in &self.records {
            phase_lengths[r.phase as usize - 1] += 1;
        }
        Transcript {
            graph: GraphInfo::of(self.state.graph()),
            first_player: self.first,
            dominator_policy: dominator.into(),
            staller_policy: staller.into(),
            records: self.records.clone(),
            phase_lengths,
            total_moves: self.records.len(),
            f_at_phase2_end: self.ctx.f_at_phase2_end(),
            adjusted_at_phase2_end: self.ctx.adjusted_at_phase3_start(),
            final_potential: self.ctx.potential(&self.state),
        }
    }
}

/// Plays a full game.
pub fn play_game(
    g: &Graph,
    dominator: &mut dyn Policy,
    staller: &mut dyn Policy,
    first: Player,
) -> Result<Transcript> {
    let mut game = Game::new(g, first)?;
    while !game.is_over() {
        let policy: &mut dyn Policy = match game.to_move() {
            Player::Dominator => &mut *dominator,
            Player::Staller => &mut *staller,
        };
        let v = policy.choose(game.ctx(), game.state())?;
        if !game.state().is_legal(v) {
            return Err(Error::IllegalMove {
                vertex: v,
                reason: format!("chosen by policy {:?}", policy.name()),
            });
        }
        game.play(v)?;
    }
    Ok(game.transcript(&dominator.name(), &staller.name()))
}

/// Visits every complete game in which Dominator plays greedily, over all
/// Staller move sequences in ascending lexicographic order.
pub fn for_each_staller_line<'g>(
    g: &'g Graph,
    first: Player,
    cap: usize,
    visit: &mut dyn FnMut(&Game<'g>),
) -> Result<()> {
    if g.n() > cap {
        return Err(Error::Resource { what: "worst-case search", n: g.n(), cap });
    }
    explore(Game::new(g, first)?, visit)
}

fn explore<'g>(mut game: Game<'g>, visit: &mut dyn FnMut(&Game<'g>)) -> Result<()> {
    // Dominator's replies are forced, so follow them without branching
    while !game.is_over() && game.to_move() == Player::Dominator {
        let v = dominator_greedy(game.ctx(), game.state())?;
        game.play(v)?;
    }
    if game.is_over() {
        visit(&game);
        return Ok(());
    }
    for v in game.state().legal_moves() {
        let mut child = game.clone();
        child.play(v)?;
        explore(child, visit)?;
    }
    Ok(())
}

/// Longest game a Staller can force against the greedy Dominator, with the
/// lexicographically first Staller line reaching it.
pub fn staller_worst_case(g: &Graph, first: Player, cap: usize) -> Result<(usize, Transcript)> {
    let mut best: Option<Transcript> = None;
    for_each_staller_line(g, first, cap, &mut |game| {
        if best.as_ref().is_none_or(|b| game.records().len() > b.total_moves) {
            best = Some(game.transcript("greedy", "worst"));
        }
    })?;
    let t = best.expect("at least one line");
    Ok((t.total_moves, t))
}
