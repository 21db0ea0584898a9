use std::fmt::Write as _;
use std::path::Path;

use domgame::corpus::{run_corpus, CorpusSpec};
use domgame::generators;
use domgame::solver;
use domgame::strategy::{
    play_game, staller_worst_case, Game, Greedy, MinDecrease, Player, RandomMoves, Transcript,
    WORST_CASE_CAP,
};
use domgame::verify::{verify_transcript, Status};
use domgame::{Error, Graph, Result};
use serde::Serialize;

use crate::{FirstArg, StallerArg};

/// What a command prints and the exit code it asks for.
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    let g = Graph::parse_edge_list(&read(path)?)?;
    if let Some(v) = g.isolated_vertex() {
        return Err(Error::IsolatedVertex(v));
    }
    Ok(g)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn solve(path: &Path, json: bool) -> Result<Output> {
    let g = load_graph(path)?;
    let v = solver::solve(&g)?;
    if json {
        return Ok(Output::ok(to_json(&v)));
    }
    Ok(Output::ok(format!(
        "gamma_g={} gamma_g_prime={}\noptimal_first_moves_d={}\noptimal_first_moves_s={}\n",
        v.gamma_g,
        v.gamma_g_prime,
        join(&v.optimal_first_moves_d),
        join(&v.optimal_first_moves_s)
    )))
}

#[derive(Serialize)]
struct Traced<'a> {
    transcript: &'a Transcript,
    snapshots: Vec<String>,
}

fn snapshots(g: &Graph, t: &Transcript) -> Result<Vec<String>> {
    let mut game = Game::new(g, t.first_player)?;
    let mut out = Vec::with_capacity(t.records.len());
    for r in &t.records {
        game.play(r.vertex)?;
        out.push(game.state().snapshot());
    }
    Ok(out)
}

pub fn simulate(path: &Path, staller: StallerArg, first: FirstArg, seed: u64, trace: bool, json: bool) -> Result<Output> {
    let g = load_graph(path)?;
    let first = match first {
        FirstArg::D => Player::Dominator,
        FirstArg::S => Player::Staller,
    };
    let t = match staller {
        StallerArg::Random => play_game(&g, &mut Greedy, &mut RandomMoves::new(seed), first)?,
        StallerArg::Min => play_game(&g, &mut Greedy, &mut MinDecrease, first)?,
        StallerArg::Worst => staller_worst_case(&g, first, WORST_CASE_CAP)?.1,
    };
    let snaps = if trace { snapshots(&g, &t)? } else { Vec::new() };
    if json {
        return Ok(Output::ok(if trace {
            to_json(&Traced { transcript: &t, snapshots: snaps })
        } else {
            to_json(&t)
        }));
    }
    if !trace {
        return Ok(Output::ok(t.to_text()));
    }
    // snapshots go after their move as comment lines, so the text still parses
    let mut out = String::new();
    let mut moves = 0;
    for line in t.to_text().lines() {
        let _ = writeln!(out, "{line}");
        let is_record = !line.starts_with('#') && !line.starts_with("p1=");
        if is_record {
            for s in snaps[moves].lines() {
                let _ = writeln!(out, "#   {s}");
            }
            moves += 1;
        }
    }
    Ok(Output::ok(out))
}

pub fn verify(
    spec: Option<&Path>,
    builtin: Option<&str>,
    jobs: Option<usize>,
    json: bool,
    csv: Option<&Path>,
    witness_dir: Option<&Path>,
) -> Result<Output> {
    let spec = match (spec, builtin) {
        (Some(p), _) => CorpusSpec::from_json(&read(p)?)?,
        (None, Some(name)) => CorpusSpec::builtin(name)?,
        (None, None) => return Err(Error::Argument("give a corpus spec file or --builtin NAME".into())),
    };
    let report = run_corpus(&spec, jobs)?;
    if let Some(p) = csv {
        write(p, &report.to_csv())?;
    }
    let mut witness_paths = Vec::new();
    if let Some(dir) = witness_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
        for (i, f) in report.failures.iter().enumerate() {
            let name = format!("{:05}-{}-{}-{}.json", i, f.report.id.name(), f.family, f.label.replace([',', '#'], "_"));
            let path = dir.join(name);
            write(&path, &to_json(f))?;
            witness_paths.push(path);
        }
    }
    let code = if report.passed() { 0 } else { 1 };
    if json {
        return Ok(Output { stdout: to_json(&report), code });
    }
    let mut out = report.summary();
    const SHOWN: usize = 20;
    for f in report.failures.iter().take(SHOWN) {
        let detail = f.report.witness.as_ref().map_or("", |w| w.detail.as_str());
        let _ = writeln!(out, "FAIL {} {} {}: {detail}", f.report.id.name(), f.family, f.label);
    }
    if report.failures.len() > SHOWN {
        let _ = writeln!(out, "... and {} more failures", report.failures.len() - SHOWN);
    }
    for p in &witness_paths {
        let _ = writeln!(out, "witness {}", p.display());
    }
    Ok(Output { stdout: out, code })
}

pub fn audit(graph: &Path, transcript: &Path, json: bool) -> Result<Output> {
    let g = load_graph(graph)?;
    let text = read(transcript)?;
    let t: Transcript = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", transcript.display())))?
    } else {
        Transcript::from_text(&text)?
    };
    let reports = verify_transcript(&g, &t)?;
    let code = if reports.iter().any(|r| r.is_fail()) { 1 } else { 0 };
    if json {
        return Ok(Output { stdout: to_json(&reports), code });
    }
    let mut out = String::new();
    for r in &reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        let _ = write!(out, "{:<18} {status}", r.id.name());
        if let Some(w) = &r.witness {
            let _ = write!(out, "  {} (moves: {})", w.detail, join(&w.moves));
        }
        out.push('\n');
    }
    Ok(Output { stdout: out, code })
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Argument(format!("bad number {s:?}")))
}

pub fn gen(family: &str, args: &[String]) -> Result<Output> {
    let (out, params) = args.split_last().ok_or_else(|| Error::Argument("missing output path".into()))?;
    let one = || -> Result<usize> {
        match params {
            [n] => num(n),
            _ => Err(Error::Argument(format!("{family} takes exactly one parameter N"))),
        }
    };
    let g = match family {
        "path" => generators::path(one()?)?,
        "cycle" => generators::cycle(one()?)?,
        "star" => generators::star(one()?)?,
        "complete" => generators::complete(one()?)?,
        "caterpillar" => {
            let legs = params.iter().map(|p| num(p)).collect::<Result<Vec<usize>>>()?;
            generators::caterpillar(legs.len(), &legs)?
        }
        "prufer" => {
            let seq = params.iter().map(|p| num(p)).collect::<Result<Vec<usize>>>()?;
            generators::tree_from_prufer(&seq)?
        }
        "tree" => match params {
            [n, seed] => generators::random_tree(num(n)?, num(seed)?)?,
            _ => return Err(Error::Argument("tree takes N SEED".into())),
        },
        "gnp" => match params {
            [n, p, seed] => generators::gnp_isolate_free(num(n)?, num(p)?, num(seed)?)?,
            _ => return Err(Error::Argument("gnp takes N P SEED".into())),
        },
        other => return Err(Error::Argument(format!("unknown family {other:?}"))),
    };
    write(Path::new(out), &g.to_edge_list())?;
    Ok(Output::ok(format!("wrote {} (n={}, m={})\n", out, g.n(), g.edge_count())))
}
