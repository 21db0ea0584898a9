//! Exact game values by memoized minimax over undominated sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::strategy::Player;

/// Largest vertex count the exact solver accepts.
pub const SOLVER_CAP: usize = 20;

/// Environment variable that may lower [`SOLVER_CAP`].
pub const CAP_ENV: &str = "DOMGAME_CAP";

const UNKNOWN: u8 = u8::MAX;

/// The solver cap after applying `DOMGAME_CAP`, which can only lower it.
pub fn effective_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Err(_) => Ok(SOLVER_CAP),
        Ok(raw) => {
            let cap: usize = raw
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{CAP_ENV}={raw:?} is not a vertex count")))?;
            Ok(cap.min(SOLVER_CAP))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameValue {
    pub gamma_g: usize,
    pub gamma_g_prime: usize,
    /// Smallest optimal opening for each starter.
    pub optimal_first_move_d: usize,
    pub optimal_first_move_s: usize,
    pub optimal_first_moves_d: Vec<usize>,
    pub optimal_first_moves_s: Vec<usize>,
}

/// Memoized game-value table for one graph.
pub struct Solver {
    masks: Vec<u32>,
    memo: [Vec<u8>; 2],
}

impl Solver {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_cap(g, effective_cap()?)
    }

    pub fn with_cap(g: &Graph, cap: usize) -> Result<Self> {
        let cap = cap.min(SOLVER_CAP);
        if g.n() > cap {
            return Err(Error::Resource { what: "solver", n: g.n(), cap });
        }
        if let Some(v) = g.isolated_vertex() {
            return Err(Error::IsolatedVertex(v));
        }
        let masks = (0..g.n()).map(|v| g.closed_mask(v) as u32).collect();
        let size = 1usize << g.n();
        Ok(Solver { masks, memo: [vec![UNKNOWN; size], vec![UNKNOWN; size]] })
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.masks.len()) - 1) as u32
    }

    /// Moves still to be played from undominated set `u` with `turn` to move.
    pub fn value(&mut self, u: u32, turn: Player) -> usize {
        if u == 0 {
            return 0;
        }
        let t = turn as usize;
        let cached = self.memo[t][u as usize];
        if cached != UNKNOWN {
            return cached as usize;
        }
        let next = opponent(turn);
        let mut best = match turn {
            Player::Dominator => usize::MAX,
            Player::Staller => 0,
        };
        for v in 0..self.masks.len() {
            let m = self.masks[v];
            if m & u == 0 {
                continue;
            }
            let r = self.value(u & !m, next);
            best = match turn {
                Player::Dominator => best.min(r),
                Player::Staller => best.max(r),
            };
        }
        let out = best + 1;
        self.memo[t][u as usize] = out as u8;
        out
    }

    /// Every legal move from `u` that attains the value.
    pub fn optimal_moves(&mut self, u: u32, turn: Player) -> Vec<usize> {
        if u == 0 {
            return Vec::new();
        }
        let target = self.value(u, turn) - 1;
        let next = opponent(turn);
        (0..self.masks.len())
            .filter(|&v| {
                let m = self.masks[v];
                m & u != 0 && self.value(u & !m, next) == target
            })
            .collect()
    }
}

fn opponent(p: Player) -> Player {
    match p {
        Player::Dominator => Player::Staller,
        Player::Staller => Player::Dominator,
    }
}

/// Undominated set as a bit mask.
pub fn mask_of(vertices: &[usize]) -> u32 {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

/// Value of the position where exactly `undominated` remain undominated.
pub fn game_value(g: &Graph, undominated: &[usize], turn: Player) -> Result<usize> {
    if let Some(&v) = undominated.iter().find(|&&v| v >= g.n()) {
        return Err(Error::IndexOutOfRange { index: v, len: g.n() });
    }
    Ok(Solver::new(g)?.value(mask_of(undominated), turn))
}

pub fn gamma_g(g: &Graph) -> Result<usize> {
    let mut s = Solver::new(g)?;
    let full = s.full();
    Ok(s.value(full, Player::Dominator))
}

pub fn gamma_g_prime(g: &Graph) -> Result<usize> {
    let mut s = Solver::new(g)?;
    let full = s.full();
    Ok(s.value(full, Player::Staller))
}

/// Both game values and their optimal openings.
pub fn solve(g: &Graph) -> Result<GameValue> {
    solve_with_cap(g, effective_cap()?)
}

pub fn solve_with_cap(g: &Graph, cap: usize) -> Result<GameValue> {
    let mut s = Solver::with_cap(g, cap)?;
    let full = s.full();
    let d = s.optimal_moves(full, Player::Dominator);
    let st = s.optimal_moves(full, Player::Staller);
    Ok(GameValue {
        gamma_g: s.value(full, Player::Dominator),
        gamma_g_prime: s.value(full, Player::Staller),
        optimal_first_move_d: d[0],
        optimal_first_move_s: st[0],
        optimal_first_moves_d: d,
        optimal_first_moves_s: st,
    })
}

/// Domination number by exhaustive subset search.
pub fn domination_number(g: &Graph) -> Result<usize> {
    let cap = effective_cap()?;
    if g.n() > cap {
        return Err(Error::Resource { what: "domination search", n: g.n(), cap });
    }
    let n = g.n();
    let full = (1u64 << n) - 1;
    let masks: Vec<u64> = (0..n).map(|v| g.closed_mask(v)).collect();
    // cover[s] = N[s], built from s without its lowest bit
    let mut cover = vec![0u64; 1 << n];
    let mut best = n;
    for s in 1usize..1 << n {
        let low = s.trailing_zeros() as usize;
        cover[s] = cover[s & (s - 1)] | masks[low];
        let k = s.count_ones() as usize;
        if k < best && cover[s] == full {
            best = k;
        }
    }
    Ok(best)
}
