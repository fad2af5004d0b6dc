//! Command-line front end: argument parsing, file loading and the mapping
//! from library results to verdicts and exit codes.
//!
//! Exit codes: 0 affirmative, 1 negative, 2 error, usage error or
//! inconclusive search.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use gfg_core::format::{parse_automaton, parse_graph, parse_lasso, serialize_automaton};
use gfg_core::minimizer::{minimize, Measure, SearchResult, SearchSpec};
use gfg_core::reduction::{
    build_cover_automaton, check_core_structure, classify_states, extract_cover,
    is_vertex_cover, min_vertex_cover_bruteforce, LanguageMode, NiceGraph, VertexCover,
};
use gfg_core::report::{InputDigest, RunReport};
use gfg_core::sim::solve_verifier;
use gfg_core::{accepts_lasso, build_arena, Error, Kind, ParityAutomaton, StateRef};
use sha2::{Digest, Sha256};

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_OTHER: i32 = 2;

pub const TRUSTED_GFG_WARNING: &str =
    "results are conditional on the reference automaton being good-for-games (not checked)";

#[derive(Debug, Parser)]
#[command(name = "gfg", version, about = "Good-for-games parity automata toolkit")]
pub struct Cli {
    /// Print the report as JSON instead of the line format.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an automaton file against the well-formedness rules.
    Validate {
        #[arg(long)]
        aut: PathBuf,
    },
    /// Decide whether an automaton accepts a lasso word `u ; v`.
    Accepts {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide L(p1) ⊆ L(p2) for a good-for-games p2.
    Include {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long)]
        dump_strategy: bool,
    },
    /// Decide whether the candidate is good-for-games and equivalent to the
    /// reference.
    GfgEquiv {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        dump_strategy: bool,
    },
    /// Build the cover automaton of a graph.
    GenReduction {
        #[arg(long)]
        graph: PathBuf,
        /// `auto` (a minimum cover) or a list such as `v1,v3`.
        #[arg(long, default_value = "auto")]
        cover: String,
        #[arg(long, default_value = "buchi")]
        kind: Kind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the v-states and stop-states of an automaton over a graph.
    Classify {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Read a vertex cover off an automaton for the graph language.
    ExtractCover {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "characteristic")]
        mode: LanguageMode,
    },
    /// Check the structural properties of automata for the graph language.
    CheckStructure {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "characteristic")]
        mode: LanguageMode,
    },
    /// Minimum vertex cover by brute force.
    MinVc {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Search for a small automaton equivalent to a reference.
    MinSearch {
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Acceptance kind of the candidates; defaults to the reference's.
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long, default_value = "states")]
        measure: Measure,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        deterministic_only: bool,
        #[arg(long)]
        max_priority: Option<u32>,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        seconds: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the simulation game "p2 simulates p1".
    SolveSim {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long)]
        dump_arena: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Accepts { .. } => "accepts",
            Command::Include { .. } => "include",
            Command::GfgEquiv { .. } => "gfg-equiv",
            Command::GenReduction { .. } => "gen-reduction",
            Command::Classify { .. } => "classify",
            Command::ExtractCover { .. } => "extract-cover",
            Command::CheckStructure { .. } => "check-structure",
            Command::MinVc { .. } => "min-vc",
            Command::MinSearch { .. } => "min-search",
            Command::SolveSim { .. } => "solve-sim",
        }
    }
}

/// Everything one invocation produces.
#[derive(Debug, Clone)]
pub struct Invocation {
    /// Absent when the command line did not parse.
    pub report: Option<RunReport>,
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Context {
    report: RunReport,
    timings: bool,
}

impl Context {
    fn read(&mut self, name: &str, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        self.report.inputs.push(InputDigest {
            name: name.into(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
            path: path.display().to_string(),
        });
        String::from_utf8(bytes).map_err(|e| {
            CliError::Usage(format!("{} is not UTF-8: {e}", path.display()))
        })
    }

    fn automaton(&mut self, name: &str, path: &Path) -> CliResult<ParityAutomaton> {
        let text = self.read(name, path)?;
        parse_automaton(&text).map_err(|e| in_file(path, e))
    }

    fn graph(&mut self, name: &str, path: &Path) -> CliResult<NiceGraph> {
        let text = self.read(name, path)?;
        parse_graph(&text).map_err(|e| in_file(path, e))
    }

    fn verdict(&mut self, verdict: &str, code: i32) -> i32 {
        self.report.verdict = verdict.into();
        code
    }

    fn trust(&mut self, reference: &ParityAutomaton) {
        if !reference.is_deterministic() {
            self.report.warn(TRUSTED_GFG_WARNING);
        }
    }
}

fn in_file(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { line, message } => CliError::Usage(format!("{}:{line}: {message}", path.display())),
        other => CliError::Core(other),
    }
}

fn write_out(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn state_set(states: &BTreeSet<StateRef>) -> String {
    let items: Vec<String> = states.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn parse_cover(g: &NiceGraph, spec: &str) -> CliResult<VertexCover> {
    if spec == "auto" {
        return Ok(min_vertex_cover_bruteforce(g)?);
    }
    let mut vertices = BTreeSet::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let index = item.strip_prefix('v').unwrap_or(item);
        match index.parse::<usize>() {
            Ok(v) if v < g.vertex_count() => {
                vertices.insert(v);
            }
            _ => return Err(CliError::Usage(format!("`{item}` is not a vertex of the graph"))),
        }
    }
    Ok(VertexCover(vertices))
}

fn execute(command: &Command, cx: &mut Context) -> CliResult<i32> {
    match command {
        Command::Validate { aut } => {
            let aut = cx.automaton("aut", aut)?;
            let diagnostics = aut.validate();
            cx.report
                .detail("states", aut.state_count())
                .detail("kind", aut.kind())
                .detail("deterministic", aut.is_deterministic())
                .detail("diagnostics", diagnostics.len());
            for d in &diagnostics {
                cx.report.detail("diagnostic", d);
            }
            Ok(if diagnostics.is_empty() {
                cx.verdict("VALID", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("INVALID", EXIT_NEGATIVE)
            })
        }
        Command::Accepts { aut, word } => {
            let aut = cx.automaton("aut", aut)?;
            let word = parse_lasso(word)?;
            cx.report.detail("word", &word);
            Ok(if accepts_lasso(&aut, &word)? {
                cx.verdict("ACCEPT", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("REJECT", EXIT_NEGATIVE)
            })
        }
        Command::Include { p1, p2, dump_strategy } => {
            let p1 = cx.automaton("p1", p1)?;
            let p2 = cx.automaton("p2", p2)?;
            cx.trust(&p2);
            let holds = play(cx, "p2-simulates-p1", &p1, &p2, *dump_strategy, false)?;
            Ok(if holds {
                cx.verdict("INCLUDED", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("NOT_INCLUDED", EXIT_NEGATIVE)
            })
        }
        Command::GfgEquiv { candidate, reference, dump_strategy } => {
            let candidate = cx.automaton("candidate", candidate)?;
            let reference = cx.automaton("reference", reference)?;
            cx.trust(&reference);
            candidate.check_same_alphabet(&reference)?;
            let holds = play(cx, "reference-simulates-candidate", &candidate, &reference, *dump_strategy, false)?
                && play(cx, "candidate-simulates-reference", &reference, &candidate, *dump_strategy, false)?;
            Ok(if holds {
                cx.verdict("EQUIVALENT", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("NOT_EQUIVALENT", EXIT_NEGATIVE)
            })
        }
        Command::SolveSim { p1, p2, dump_arena } => {
            let p1 = cx.automaton("p1", p1)?;
            let p2 = cx.automaton("p2", p2)?;
            let holds = play(cx, "p2-simulates-p1", &p1, &p2, true, *dump_arena)?;
            Ok(if holds {
                cx.verdict("VERIFIER_WINS", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("SPOILER_WINS", EXIT_NEGATIVE)
            })
        }
        Command::GenReduction { graph, cover, kind, out } => {
            let g = cx.graph("graph", graph)?;
            let cover = parse_cover(&g, cover)?;
            let aut = build_cover_automaton(&g, &cover, *kind)?;
            let text = serialize_automaton(&aut);
            cx.report
                .detail("cover", format!("{{{cover}}}"))
                .detail("kind", kind)
                .detail("states", aut.state_count())
                .detail("transitions", aut.transition_table_size());
            match out {
                Some(path) => {
                    write_out(path, &text)?;
                    cx.report.detail("out", path.display());
                }
                None => {
                    cx.report.detail("automaton", text);
                }
            }
            Ok(cx.verdict("GENERATED", EXIT_AFFIRMATIVE))
        }
        Command::Classify { aut, graph } => {
            let aut = cx.automaton("aut", aut)?;
            let g = cx.graph("graph", graph)?;
            let classes = classify_states(&aut, &g)?;
            for v in 0..g.vertex_count() {
                let name = NiceGraph::vertex_name(v);
                cx.report
                    .detail(format!("{name}-states"), state_set(&classes.v_states[v]))
                    .detail(format!("stop-{name}-states"), state_set(&classes.natural_states[v]));
            }
            Ok(cx.verdict("CLASSIFIED", EXIT_AFFIRMATIVE))
        }
        Command::ExtractCover { aut, graph, mode } => {
            let aut = cx.automaton("aut", aut)?;
            let g = cx.graph("graph", graph)?;
            let cover = extract_cover(&aut, &g, *mode)?;
            cx.report
                .detail("mode", mode)
                .detail("cover", format!("{{{cover}}}"))
                .detail("size", cover.len());
            Ok(if is_vertex_cover(&g, &cover) {
                cx.verdict("COVER", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("NOT_A_COVER", EXIT_NEGATIVE)
            })
        }
        Command::CheckStructure { aut, graph, mode } => {
            let aut = cx.automaton("aut", aut)?;
            let g = cx.graph("graph", graph)?;
            let report = check_core_structure(&aut, &g, *mode)?;
            cx.report.detail("mode", mode);
            for (i, holds) in report.items.iter().enumerate() {
                cx.report.detail(format!("item-{}", i + 1), if *holds { "holds" } else { "fails" });
            }
            for v in 0..g.vertex_count() {
                let name = NiceGraph::vertex_name(v);
                cx.report
                    .detail(format!("core-{name}-states"), state_set(&report.core_vertex_states[v]))
                    .detail(format!("core-stop-{name}-states"), state_set(&report.core_natural_states[v]));
            }
            for failure in &report.failures {
                cx.report.detail("failure", failure);
            }
            for note in &report.notes {
                cx.report.detail("note", note);
            }
            Ok(if report.all_hold() {
                cx.verdict("HOLDS", EXIT_AFFIRMATIVE)
            } else {
                cx.verdict("VIOLATED", EXIT_NEGATIVE)
            })
        }
        Command::MinVc { graph } => {
            let g = cx.graph("graph", graph)?;
            let cover = min_vertex_cover_bruteforce(&g)?;
            cx.report.detail("cover", format!("{{{cover}}}")).detail("size", cover.len());
            Ok(cx.verdict("COVER", EXIT_AFFIRMATIVE))
        }
        Command::MinSearch {
            reference,
            kind,
            measure,
            k,
            deterministic_only,
            max_priority,
            max_candidates,
            seconds,
            out,
        } => {
            let reference = cx.automaton("ref", reference)?;
            let kind = kind.unwrap_or(reference.kind());
            let mut spec = SearchSpec::new(reference.alphabet().clone(), kind, *measure, *k);
            spec.deterministic_only = *deterministic_only;
            if let Some(p) = max_priority {
                spec.max_priority = *p;
            }
            spec.budget.max_candidates = *max_candidates;
            if let Some(s) = seconds {
                let d = Duration::try_from_secs_f64(*s)
                    .map_err(|e| CliError::Usage(format!("--seconds {s}: {e}")))?;
                spec.budget.max_duration = Some(d);
            }
            let outcome = minimize(&reference, &spec)?;
            if outcome.reference_trusted {
                cx.report.warn(TRUSTED_GFG_WARNING);
            }
            let stats = &outcome.stats;
            cx.report
                .detail("kind", kind)
                .detail("measure", measure)
                .detail("bound", k)
                .detail("deterministic-only", deterministic_only)
                .detail("enumerated", stats.enumerated)
                .detail("prefiltered", stats.prefiltered)
                .detail("full-checks", stats.full_checks)
                .detail("lasso-suite", stats.lasso_suite_size);
            if cx.timings {
                cx.report.detail("elapsed-ms", stats.elapsed.as_millis());
            }
            Ok(match outcome.result {
                SearchResult::Found(aut) => {
                    let text = serialize_automaton(&aut);
                    cx.report.detail("size", gfg_core::minimizer::measure_of(&aut, *measure));
                    match out {
                        Some(path) => {
                            write_out(path, &text)?;
                            cx.report.detail("out", path.display());
                        }
                        None => {
                            cx.report.detail("automaton", text);
                        }
                    }
                    cx.verdict("FOUND", EXIT_AFFIRMATIVE)
                }
                SearchResult::None => cx.verdict("NONE", EXIT_NEGATIVE),
                SearchResult::Inconclusive => cx.verdict("INCONCLUSIVE", EXIT_OTHER),
            })
        }
    }
}

/// Solves "`p2` simulates `p1`" and records its size, verdict and, when
/// asked, the arena and verifier's strategy under `label`.
fn play(
    cx: &mut Context,
    label: &str,
    p1: &ParityAutomaton,
    p2: &ParityAutomaton,
    dump_strategy: bool,
    dump_arena: bool,
) -> CliResult<bool> {
    let arena = build_arena(p1, p2)?;
    let outcome = solve_verifier(&arena);
    cx.report
        .detail(format!("{label}-positions"), arena.len())
        .detail(format!("{label}-responses"), arena.response_count())
        .detail(format!("{label}-winner"), if outcome.verifier_wins { "verifier" } else { "spoiler" });
    if dump_arena {
        cx.report.detail(format!("{label}-arena"), arena.dump());
    }
    if dump_strategy {
        if let Some(strategy) = &outcome.strategy {
            cx.report.detail(format!("{label}-strategy"), strategy);
        }
    }
    Ok(outcome.verifier_wins)
}

fn render(report: &RunReport, json: bool) -> String {
    if json {
        let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
        text.push('\n');
        text
    } else {
        report.to_text()
    }
}

/// Runs one command line (including the program name) without touching the
/// process: output is returned, not printed.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation { report: None, exit_code: EXIT_OTHER, stdout: String::new(), stderr: text }
            } else {
                Invocation { report: None, exit_code: EXIT_AFFIRMATIVE, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut cx = Context {
        report: RunReport::new(cli.command.name()),
        timings: cli.timings,
    };
    let exit_code = match execute(&cli.command, &mut cx) {
        Ok(code) => code,
        Err(e) => {
            cx.report.detail("error", e.to_string());
            cx.verdict("ERROR", EXIT_OTHER)
        }
    };
    let mut stderr = String::new();
    for w in &cx.report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    if let Some(e) = cx.report.detail_value("error") {
        let _ = writeln!(stderr, "error: {e}");
    }
    Invocation {
        stdout: render(&cx.report, cli.json),
        report: Some(cx.report),
        exit_code,
        stderr,
    }
}
