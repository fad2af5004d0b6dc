//! Plain-text formats for automata, graphs and lasso words.
//!
//! Automaton files:
//!
//! ```text
//! alphabet a b #
//! states 2
//! initial 0
//! kind buchi
//! priority 1 2
//! trans 0 a -> 0 1
//! trans 1 b -> TOP
//! ```
//!
//! `#` is also the stop symbol, so only whole lines starting with `#` are
//! comments in automaton files. Omitted transitions go to `BOT`; omitted
//! priorities take the kind's lowest legal value. `priority TOP p` and
//! `priority BOT p` override the sink priorities.
//!
//! Graph files hold `vertices n`, `initial i` and `edge i j` lines; `#`
//! starts a comment anywhere on a line. Lasso words are written `u ; v`.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::automaton::{Alphabet, Kind, ParityAutomaton, Priority, StateRef, Target};
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::reduction::{validate_nice, NiceGraph};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("{what} `{token}` is not a number")))
}

fn parse_state_ref(line: usize, token: &str, states: usize) -> Result<StateRef> {
    match token {
        "TOP" => Ok(StateRef::Top),
        "BOT" => Ok(StateRef::Bottom),
        _ => {
            let q: usize = parse_number(line, "state", token)?;
            if q >= states {
                return Err(parse_error(
                    line,
                    format!("state {q} out of range (states {states})"),
                ));
            }
            Ok(StateRef::Regular(q))
        }
    }
}

/// Parses an automaton. Structural problems the type can represent (such as
/// priorities outside the kind's range) are left to
/// [`ParityAutomaton::validate`].
pub fn parse_automaton(text: &str) -> Result<ParityAutomaton> {
    let mut alphabet: Option<(usize, Alphabet)> = None;
    let mut states: Option<usize> = None;
    let mut kind: Option<Kind> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut priorities: Vec<(usize, String, String)> = Vec::new();
    let mut transitions: Vec<(usize, String, String, Vec<String>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let once = |seen: bool, what: &str| {
            if seen {
                Err(parse_error(line, format!("duplicate `{what}` declaration")))
            } else {
                Ok(())
            }
        };
        match tokens[0] {
            "alphabet" => {
                once(alphabet.is_some(), "alphabet")?;
                let a = Alphabet::new(tokens[1..].iter().copied())
                    .map_err(|e| parse_error(line, e.to_string()))?;
                alphabet = Some((line, a));
            }
            "states" => {
                once(states.is_some(), "states")?;
                let [_, n] = tokens[..] else {
                    return Err(parse_error(line, "expected `states n`"));
                };
                states = Some(parse_number(line, "state count", n)?);
            }
            "kind" => {
                once(kind.is_some(), "kind")?;
                let [_, k] = tokens[..] else {
                    return Err(parse_error(line, "expected `kind buchi|cobuchi|parity`"));
                };
                kind = Some(k.parse().map_err(|e: String| parse_error(line, e))?);
            }
            "initial" => {
                once(initial.is_some(), "initial")?;
                let [_, q] = tokens[..] else {
                    return Err(parse_error(line, "expected `initial q|TOP|BOT`"));
                };
                initial = Some((line, q.to_string()));
            }
            "priority" => {
                let [_, q, p] = tokens[..] else {
                    return Err(parse_error(line, "expected `priority q p`"));
                };
                priorities.push((line, q.to_string(), p.to_string()));
            }
            "trans" => {
                if tokens.len() < 4 || tokens[3] != "->" {
                    return Err(parse_error(line, "expected `trans q a -> targets`"));
                }
                if tokens.len() == 4 {
                    return Err(parse_error(line, "empty target list"));
                }
                transitions.push((
                    line,
                    tokens[1].to_string(),
                    tokens[2].to_string(),
                    tokens[4..].iter().map(|s| s.to_string()).collect(),
                ));
            }
            other => return Err(parse_error(line, format!("unknown declaration `{other}`"))),
        }
    }

    let end = text.lines().count().max(1);
    let (_, alphabet) = alphabet.ok_or_else(|| parse_error(end, "missing `alphabet`"))?;
    let n = states.ok_or_else(|| parse_error(end, "missing `states`"))?;
    let kind = kind.ok_or_else(|| parse_error(end, "missing `kind`"))?;
    let mut aut = ParityAutomaton::new(alphabet.clone(), n, kind);

    match initial {
        Some((line, q)) => aut.set_initial(parse_state_ref(line, &q, n)?),
        None if n == 0 => return Err(parse_error(end, "missing `initial`")),
        None => {}
    }

    let mut seen_priority = HashSet::new();
    let (mut top, mut bottom) = kind.default_sink_priorities();
    for (line, q, p) in priorities {
        let state = parse_state_ref(line, &q, n)?;
        if !seen_priority.insert(state) {
            return Err(parse_error(line, format!("duplicate priority for {state}")));
        }
        let p: Priority = parse_number(line, "priority", &p)?;
        match state {
            StateRef::Regular(q) => aut.set_priority(q, p),
            StateRef::Top => top = p,
            StateRef::Bottom => bottom = p,
        }
    }
    aut.set_sink_priorities(top, bottom);

    let mut seen_slot = HashSet::new();
    for (line, q, a, targets) in transitions {
        let q = match parse_state_ref(line, &q, n)? {
            StateRef::Regular(q) => q,
            _ => return Err(parse_error(line, "sinks have fixed transitions")),
        };
        let a = alphabet
            .resolve(&a)
            .map_err(|e| parse_error(line, e.to_string()))?;
        if !seen_slot.insert((q, a)) {
            return Err(parse_error(
                line,
                format!("duplicate transition for ({q}, {})", alphabet.name(a)),
            ));
        }
        let refs = targets
            .iter()
            .map(|t| parse_state_ref(line, t, n))
            .collect::<Result<Vec<_>>>()?;
        let target = match refs[..] {
            [StateRef::Top] => Target::Top,
            [StateRef::Bottom] => Target::Bottom,
            _ => {
                let mut set = BTreeSet::new();
                for r in refs {
                    match r {
                        StateRef::Regular(t) => {
                            set.insert(t);
                        }
                        _ => {
                            return Err(parse_error(
                                line,
                                "TOP and BOT cannot be mixed with other targets",
                            ))
                        }
                    }
                }
                Target::states(set)
            }
        };
        aut.set_transition(q, a, target);
    }
    Ok(aut)
}

/// Canonical text of an automaton; [`parse_automaton`] inverts it.
pub fn serialize_automaton(aut: &ParityAutomaton) -> String {
    let mut out = String::new();
    let alphabet = aut.alphabet();
    let _ = writeln!(out, "alphabet {alphabet}");
    let _ = writeln!(out, "states {}", aut.state_count());
    let _ = writeln!(out, "initial {}", aut.initial());
    let _ = writeln!(out, "kind {}", aut.kind());
    if (aut.top_priority(), aut.bottom_priority()) != aut.kind().default_sink_priorities() {
        let _ = writeln!(out, "priority TOP {}", aut.top_priority());
        let _ = writeln!(out, "priority BOT {}", aut.bottom_priority());
    }
    for q in 0..aut.state_count() {
        let _ = writeln!(out, "priority {q} {}", aut.priority(q));
    }
    for q in 0..aut.state_count() {
        for a in 0..alphabet.len() {
            let targets: Vec<String> = aut.transition(q, a).iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "trans {q} {} -> {}", alphabet.name(a), targets.join(" "));
        }
    }
    out
}

/// Parses a graph file and checks that it describes a nice graph.
pub fn parse_graph(text: &str) -> Result<NiceGraph> {
    let mut vertices: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[..] {
            ["vertices", n] => {
                if vertices.is_some() {
                    return Err(parse_error(line, "duplicate `vertices` declaration"));
                }
                vertices = Some(parse_number(line, "vertex count", n)?);
            }
            ["initial", v] => {
                if initial.is_some() {
                    return Err(parse_error(line, "duplicate `initial` declaration"));
                }
                initial = Some(parse_number(line, "vertex", v)?);
            }
            ["edge", a, b] => {
                edges.push((parse_number(line, "vertex", a)?, parse_number(line, "vertex", b)?));
            }
            _ => return Err(parse_error(line, format!("cannot parse `{content}`"))),
        }
    }
    let end = text.lines().count().max(1);
    let n = vertices.ok_or_else(|| parse_error(end, "missing `vertices`"))?;
    let initial = initial.unwrap_or(0);
    let problems = validate_nice(n, &edges, initial);
    if !problems.is_empty() {
        return Err(Error::NotNice(problems.join("; ")));
    }
    NiceGraph::new(n, &edges, initial)
}

/// Canonical text of a graph; [`parse_graph`] inverts it.
pub fn serialize_graph(g: &NiceGraph) -> String {
    let mut out = format!("vertices {}\ninitial {}\n", g.vertex_count(), g.initial());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "edge {a} {b}");
    }
    out
}

/// Parses `u ; v`. The stop-symbol alias is normalised.
pub fn parse_lasso(text: &str) -> Result<LassoWord> {
    let parts: Vec<&str> = text.split(';').collect();
    let [u, v] = parts[..] else {
        return Err(parse_error(1, "expected exactly one `;` separating prefix and period"));
    };
    let norm = |s: &str| -> Vec<String> {
        s.split_whitespace()
            .map(|t| {
                if t == crate::NATURAL_ALIAS {
                    crate::NATURAL.to_string()
                } else {
                    t.to_string()
                }
            })
            .collect()
    };
    LassoWord::new(norm(u), norm(v))
}

/// Text of a lasso; [`parse_lasso`] inverts it.
pub fn serialize_lasso(w: &LassoWord) -> String {
    w.to_string()
}
