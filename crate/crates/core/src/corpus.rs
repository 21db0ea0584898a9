//! Corpus specifications and the parallel corpus runner.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators;
use crate::graph::Graph;
use crate::rng::{derive_seed, SeedRng};
use crate::strategy::{
    for_each_staller_line, play_game, GraphInfo, Greedy, MinDecrease, Player, Policy, RandomMoves,
    Transcript,
};
use crate::verify::{verify_bounds, verify_transcript, BoundCaps, BoundValues, ClaimId, ClaimReport, Status};

/// A graph family with an inclusive vertex-count range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Labeled { n: [usize; 2] },
    Paths { n: [usize; 2] },
    Cycles { n: [usize; 2] },
    Stars { n: [usize; 2] },
    Complete { n: [usize; 2] },
    Caterpillars { n: [usize; 2], samples: usize, seed: u64 },
    Trees { n: [usize; 2], samples: usize, seed: u64 },
    Gnp { n: [usize; 2], p: f64, samples: usize, seed: u64 },
    /// A random tree beside a random `G(n, 1/2)` sample.
    Unions { n: [usize; 2], samples: usize, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Labeled { .. } => "labeled",
            Family::Paths { .. } => "paths",
            Family::Cycles { .. } => "cycles",
            Family::Stars { .. } => "stars",
            Family::Complete { .. } => "complete",
            Family::Caterpillars { .. } => "caterpillars",
            Family::Trees { .. } => "trees",
            Family::Gnp { .. } => "gnp",
            Family::Unions { .. } => "unions",
        }
    }

    fn range(&self) -> [usize; 2] {
        match self {
            Family::Labeled { n }
            | Family::Paths { n }
            | Family::Cycles { n }
            | Family::Stars { n }
            | Family::Complete { n }
            | Family::Caterpillars { n, .. }
            | Family::Trees { n, .. }
            | Family::Gnp { n, .. }
            | Family::Unions { n, .. } => *n,
        }
    }

    /// Every member as `(label, graph)`.
    pub fn graphs(&self) -> Result<Vec<(String, Graph)>> {
        let [lo, hi] = self.range();
        let mut out = Vec::new();
        for n in lo..=hi {
            match self {
                Family::Labeled { .. } => {
                    for (i, g) in generators::enumerate_labeled_graphs(n)?.enumerate() {
                        out.push((format!("n{n}#{i}"), g));
                    }
                }
                Family::Paths { .. } => out.push((format!("P{n}"), generators::path(n)?)),
                Family::Cycles { .. } => out.push((format!("C{n}"), generators::cycle(n)?)),
                Family::Stars { .. } => out.push((format!("K1,{}", n.saturating_sub(1)), generators::star(n)?)),
                Family::Complete { .. } => out.push((format!("K{n}"), generators::complete(n)?)),
                Family::Caterpillars { samples, seed, .. } => {
                    for i in 0..*samples {
                        let s = derive_seed(*seed, (n * 1_000_000 + i) as u64);
                        out.push((format!("n{n}s{i}"), random_caterpillar(n, s)?));
                    }
                }
                Family::Trees { samples, seed, .. } => {
                    for i in 0..*samples {
                        let s = derive_seed(*seed, (n * 1_000_000 + i) as u64);
                        out.push((format!("n{n}s{i}"), generators::random_tree(n, s)?));
                    }
                }
                Family::Gnp { p, samples, seed, .. } => {
                    for i in 0..*samples {
                        let s = derive_seed(*seed, (n * 1_000_000 + i) as u64);
                        out.push((format!("n{n}s{i}"), generators::gnp_isolate_free(n, *p, s)?));
                    }
                }
                Family::Unions { samples, seed, .. } => {
                    if n < 4 {
                        return Err(Error::Config(format!("unions need n >= 4, got {n}")));
                    }
                    for i in 0..*samples {
                        let s = derive_seed(*seed, (n * 1_000_000 + i) as u64);
                        out.push((format!("n{n}s{i}"), random_union(n, s)?));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A caterpillar on `n` vertices with a random spine length and leg split.
pub fn random_caterpillar(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Argument(format!("caterpillar needs n >= 2, got {n}")));
    }
    let mut rng = SeedRng::new(seed);
    let spine = 1 + rng.below(n - 1);
    let mut legs = vec![0; spine];
    for _ in 0..n - spine {
        legs[rng.below(spine)] += 1;
    }
    generators::caterpillar(spine, &legs)
}

/// A random tree on `a` vertices beside a `G(n - a, 1/2)` sample.
pub fn random_union(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 {
        return Err(Error::Argument(format!("union needs n >= 4, got {n}")));
    }
    let mut rng = SeedRng::new(seed);
    let a = 2 + rng.below(n - 3);
    let tree = generators::random_tree(a, rng.next_u64())?;
    let dense = generators::gnp_isolate_free(n - a, 0.5, rng.next_u64())?;
    Ok(tree.disjoint_union(&dense))
}

fn default_first() -> Vec<String> {
    vec!["D".into(), "S".into()]
}

fn default_checks() -> Vec<String> {
    vec!["all".into()]
}

fn default_solver_cap() -> usize {
    crate::solver::SOLVER_CAP
}

fn default_worst_case_cap() -> usize {
    crate::strategy::WORST_CASE_CAP
}

fn default_true() -> bool {
    true
}

/// What to run and on which graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub families: Vec<Family>,
    /// `all`, `bounds`, `claims` or individual check names.
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    /// Starting players, `D` and/or `S`.
    #[serde(default = "default_first")]
    pub first: Vec<String>,
    #[serde(default = "default_solver_cap")]
    pub solver_cap: usize,
    #[serde(default = "default_worst_case_cap")]
    pub worst_case_cap: usize,
    /// Audit every Staller line when `n` is within the worst-case cap.
    #[serde(default = "default_true")]
    pub exhaustive: bool,
    /// Fixed Staller policies to audit: `min`.
    #[serde(default)]
    pub stallers: Vec<String>,
    /// Random-Staller games per graph and starting player.
    #[serde(default)]
    pub random_games: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults parse")
    }
}

impl CorpusSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "smoke" => SMOKE,
            "acceptance" => ACCEPTANCE,
            other => return Err(Error::Config(format!("unknown builtin corpus {other:?}"))),
        };
        Self::from_json(text)
    }

    fn selected(&self) -> Result<Vec<ClaimId>> {
        let mut out = Vec::new();
        for c in &self.checks {
            match c.as_str() {
                "all" => out.extend(ClaimId::TRANSCRIPT.iter().chain(ClaimId::BOUNDS.iter())),
                "claims" => out.extend(ClaimId::TRANSCRIPT),
                "bounds" => out.extend(ClaimId::BOUNDS),
                other => out.push(
                    ClaimId::from_name(other).ok_or_else(|| Error::Config(format!("unknown check {other:?}")))?,
                ),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn starters(&self) -> Result<Vec<Player>> {
        self.first
            .iter()
            .map(|f| Player::from_code(f).ok_or_else(|| Error::Config(format!("unknown starting player {f:?}"))))
            .collect()
    }
}

const SMOKE: &str = r#"{
  "name": "smoke",
  "families": [
    {"family": "labeled", "n": [2, 4]},
    {"family": "paths", "n": [2, 12]},
    {"family": "cycles", "n": [3, 12]},
    {"family": "stars", "n": [2, 8]},
    {"family": "trees", "n": [5, 10], "samples": 4, "seed": 1}
  ],
  "stallers": ["min"],
  "random_games": 2,
  "seed": 7
}"#;

const ACCEPTANCE: &str = r#"{
  "name": "acceptance",
  "families": [
    {"family": "labeled", "n": [2, 6]},
    {"family": "trees", "n": [2, 12], "samples": 200, "seed": 1},
    {"family": "paths", "n": [2, 24]},
    {"family": "cycles", "n": [3, 24]},
    {"family": "caterpillars", "n": [4, 24], "samples": 3, "seed": 3},
    {"family": "gnp", "n": [6, 16], "p": 0.3, "samples": 3, "seed": 5},
    {"family": "unions", "n": [6, 24], "samples": 2, "seed": 9}
  ],
  "stallers": ["min"],
  "seed": 11
}"#;

/// Counts of per-graph outcomes for one check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub vacuous: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Counts {
    fn add(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Vacuous => self.vacuous += 1,
            Status::Fail => self.fail += 1,
            Status::Skipped => self.skipped += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub gamma_g: Option<f64>,
    pub gamma_g_prime: Option<f64>,
    pub worst_dominator_start: Option<f64>,
    pub worst_staller_start: Option<f64>,
    /// Longest audited Dominator-start game over `n`.
    pub audited_dominator_start: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub family: String,
    pub label: String,
    pub graph: GraphInfo,
    pub checks: Vec<ClaimReport>,
    pub ratios: Ratios,
    pub values: BoundValues,
    pub transcripts: usize,
    /// Longest audited game for each starting player.
    pub longest: BTreeMap<String, usize>,
}

/// Largest observed `length / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstRatio {
    pub ratio: f64,
    pub length: usize,
    pub n: usize,
    pub family: String,
    pub label: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub family: String,
    pub label: String,
    pub graph: GraphInfo,
    pub report: ClaimReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub name: String,
    pub graphs: usize,
    pub transcripts: usize,
    pub tallies: BTreeMap<ClaimId, Counts>,
    pub worst_ratio_dominator_start: Option<WorstRatio>,
    pub worst_ratio_staller_start: Option<WorstRatio>,
    pub failures: Vec<FailureRecord>,
    pub reports: Vec<GraphReport>,
}

impl AggregateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failures of one check.
    pub fn failures_of(&self, id: ClaimId) -> impl Iterator<Item = &FailureRecord> {
        self.failures.iter().filter(move |f| f.report.id == id)
    }

    /// One row per graph.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,label,n,m,hash,gamma_g,gamma_g_prime,domination_number,worst_d,worst_s,transcripts,failed_checks\n",
        );
        let opt = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
        for r in &self.reports {
            let failed: Vec<&str> = r.checks.iter().filter(|c| c.is_fail()).map(|c| c.id.name()).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.family,
                r.label,
                r.graph.n,
                r.graph.m,
                r.graph.hash,
                opt(r.values.gamma_g),
                opt(r.values.gamma_g_prime),
                opt(r.values.domination_number),
                opt(r.values.worst_dominator_start),
                opt(r.values.worst_staller_start),
                r.transcripts,
                failed.join(";")
            );
        }
        out
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "corpus {}: {} graphs, {} transcripts\n",
            if self.name.is_empty() { "-" } else { &self.name },
            self.graphs,
            self.transcripts
        );
        for (id, c) in &self.tallies {
            let _ = writeln!(
                out,
                "{:<20} pass={} vacuous={} fail={} skipped={}",
                id.name(),
                c.pass,
                c.vacuous,
                c.fail,
                c.skipped
            );
        }
        for (what, w) in [
            ("dominator-start", &self.worst_ratio_dominator_start),
            ("staller-start", &self.worst_ratio_staller_start),
        ] {
            if let Some(w) = w {
                let _ = writeln!(
                    out,
                    "worst {what} ratio {:.4} ({} moves on n={}, {} {} via {})",
                    w.ratio, w.length, w.n, w.family, w.label, w.source
                );
            }
        }
        let _ = writeln!(out, "failures: {}", self.failures.len());
        out
    }
}

fn merge(into: &mut BTreeMap<ClaimId, ClaimReport>, r: ClaimReport) {
    use std::collections::btree_map::Entry;
    match into.entry(r.id) {
        Entry::Vacant(e) => {
            e.insert(r);
        }
        Entry::Occupied(mut e) => {
            let cur = e.get_mut();
            let rank = |s: Status| match s {
                Status::Fail => 3,
                Status::Pass => 2,
                Status::Skipped => 1,
                Status::Vacuous => 0,
            };
            if rank(r.status) > rank(cur.status) {
                *cur = r;
            }
        }
    }
}

struct Job<'a> {
    spec: &'a CorpusSpec,
    checks: &'a [ClaimId],
    starters: &'a [Player],
    audit: bool,
    bounds: bool,
}

impl Job<'_> {
    fn run(&self, index: usize, family: &str, label: &str, g: &Graph) -> Result<GraphReport> {
        let n = g.n();
        let mut merged = BTreeMap::new();
        let mut values = BoundValues::default();
        if self.bounds {
            let caps = BoundCaps { solver: self.spec.solver_cap, worst_case: self.spec.worst_case_cap };
            let (reports, v) = verify_bounds(g, caps)?;
            values = v;
            for r in reports {
                merge(&mut merged, r);
            }
        }
        let mut transcripts = 0;
        let mut longest: BTreeMap<String, usize> = BTreeMap::new();
        if self.audit {
            let mut audit = |t: &Transcript| -> Result<()> {
                transcripts += 1;
                let e = longest.entry(t.first_player.code().to_string()).or_default();
                *e = (*e).max(t.total_moves);
                for r in verify_transcript(g, t)? {
                    merge(&mut merged, r);
                }
                Ok(())
            };
            for &first in self.starters {
                if self.spec.exhaustive && n <= self.spec.worst_case_cap {
                    let mut err = None;
                    for_each_staller_line(g, first, self.spec.worst_case_cap, &mut |game| {
                        if err.is_none() {
                            if let Err(e) = audit(&game.transcript("greedy", "exhaustive")) {
                                err = Some(e);
                            }
                        }
                    })?;
                    if let Some(e) = err {
                        return Err(e);
                    }
                }
                for name in &self.spec.stallers {
                    let mut staller: Box<dyn Policy> = match name.as_str() {
                        "min" => Box::new(MinDecrease),
                        other => return Err(Error::Config(format!("unknown staller policy {other:?}"))),
                    };
                    audit(&play_game(g, &mut Greedy, staller.as_mut(), first)?)?;
                }
                for j in 0..self.spec.random_games {
                    let seed = derive_seed(derive_seed(self.spec.seed, index as u64), (j * 2 + first as usize) as u64);
                    audit(&play_game(g, &mut Greedy, &mut RandomMoves::new(seed), first)?)?;
                }
            }
        }
        let checks: Vec<ClaimReport> = self
            .checks
            .iter()
            .filter_map(|id| merged.remove(id))
            .collect();
        let ratio = |v: Option<usize>| v.map(|v| v as f64 / n as f64);
        let ratios = Ratios {
            gamma_g: ratio(values.gamma_g),
            gamma_g_prime: ratio(values.gamma_g_prime),
            worst_dominator_start: ratio(values.worst_dominator_start),
            worst_staller_start: ratio(values.worst_staller_start),
            audited_dominator_start: ratio(longest.get("D").copied()),
        };
        Ok(GraphReport {
            family: family.to_string(),
            label: label.to_string(),
            graph: GraphInfo::of(g),
            checks,
            ratios,
            values,
            transcripts,
            longest,
        })
    }
}

/// Runs a corpus. Graphs are processed in parallel; the report does not
/// depend on scheduling. `jobs` picks the worker count (default: all cores).
pub fn run_corpus(spec: &CorpusSpec, jobs: Option<usize>) -> Result<AggregateReport> {
    let checks = spec.selected()?;
    let starters = spec.starters()?;
    let mut graphs = Vec::new();
    for fam in &spec.families {
        for (label, g) in fam.graphs()? {
            graphs.push((fam.name(), label, g));
        }
    }
    let job = Job {
        spec,
        checks: &checks,
        starters: &starters,
        audit: checks.iter().any(|c| ClaimId::TRANSCRIPT.contains(c)),
        bounds: checks.iter().any(|c| ClaimId::BOUNDS.contains(c)),
    };
    let work = || -> Result<Vec<GraphReport>> {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, (fam, label, g))| job.run(i, fam, label, g))
            .collect()
    };
    let reports = match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(aggregate(spec.name.clone(), reports))
}

fn aggregate(name: String, reports: Vec<GraphReport>) -> AggregateReport {
    let mut tallies: BTreeMap<ClaimId, Counts> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut worst_d: Option<WorstRatio> = None;
    let mut worst_s: Option<WorstRatio> = None;
    let mut transcripts = 0;
    for r in &reports {
        transcripts += r.transcripts;
        for c in &r.checks {
            tallies.entry(c.id).or_default().add(c.status);
            if c.is_fail() {
                failures.push(FailureRecord {
                    family: r.family.clone(),
                    label: r.label.clone(),
                    graph: r.graph.clone(),
                    report: c.clone(),
                });
            }
        }
        let n = r.graph.n;
        let candidates_d = [
            ("gamma_g", r.values.gamma_g),
            ("greedy worst case", r.values.worst_dominator_start),
            ("audited game", r.longest.get("D").copied()),
        ];
        let candidates_s = [
            ("gamma_g_prime", r.values.gamma_g_prime),
            ("greedy worst case", r.values.worst_staller_start),
            ("audited game", r.longest.get("S").copied()),
        ];
        for (slot, cands) in [(&mut worst_d, candidates_d), (&mut worst_s, candidates_s)] {
            for (source, len) in cands {
                let Some(length) = len else { continue };
                // compare length / n exactly; first seen wins ties
                let better = slot.as_ref().is_none_or(|w| length * w.n > w.length * n);
                if better {
                    *slot = Some(WorstRatio {
                        ratio: length as f64 / n as f64,
                        length,
                        n,
                        family: r.family.clone(),
                        label: r.label.clone(),
                        source: source.to_string(),
                    });
                }
            }
        }
    }
    AggregateReport {
        name,
        graphs: reports.len(),
        transcripts,
        tallies,
        worst_ratio_dominator_start: worst_d,
        worst_ratio_staller_start: worst_s,
        failures,
        reports,
    }
}
