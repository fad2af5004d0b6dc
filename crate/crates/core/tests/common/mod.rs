#![allow(dead_code)]

use gfg_core::minimizer::{enumerate_candidates, Candidate, Measure, SearchSpec};
use gfg_core::reduction::{
    build_cover_automaton, cover_state_index, CoverState, NiceGraph, VertexCover,
};
use gfg_core::{Alphabet, Kind, ParityAutomaton, StateRef, Symbol, Target};

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

/// Deterministic Büchi automaton for "infinitely many a" over {a, b}.
pub fn inf_a() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 2, Kind::Buchi);
    aut.set_transition(0, 0, Target::single(1));
    aut.set_transition(0, 1, Target::single(0));
    aut.set_transition(1, 0, Target::single(1));
    aut.set_transition(1, 1, Target::single(0));
    aut.set_priority(1, 2);
    aut
}

/// Nondeterministic Büchi automaton for "finitely many b"; not GFG.
pub fn fin_b() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 2, Kind::Buchi);
    aut.set_transition(0, 0, Target::states([0, 1]));
    aut.set_transition(0, 1, Target::single(0));
    aut.set_transition(1, 0, Target::single(1));
    aut.set_priority(1, 2);
    aut
}

/// Deterministic coBüchi automaton for "finitely many b".
pub fn fin_b_det() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 2, Kind::CoBuchi);
    for q in 0..2 {
        aut.set_transition(q, 0, Target::single(0));
        aut.set_transition(q, 1, Target::single(1));
    }
    aut.set_priority(1, 3);
    aut
}

/// Büchi automaton for "infinitely many a" that guesses a copy on `a` but
/// can always recover, so it is GFG.
pub fn inf_a_two_copies() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 3, Kind::Buchi);
    aut.set_transition(0, 0, Target::states([1, 2]));
    aut.set_transition(0, 1, Target::single(0));
    for q in 1..3 {
        aut.set_transition(q, 0, Target::states([1, 2]));
        aut.set_transition(q, 1, Target::single(0));
        aut.set_priority(q, 2);
    }
    aut
}

pub fn universal() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 0, Kind::Buchi);
    aut.set_initial(StateRef::Top);
    aut
}

pub fn empty() -> ParityAutomaton {
    ParityAutomaton::new(ab(), 0, Kind::Buchi)
}

/// Parity automaton over {a, b}: max priority seen infinitely often among
/// 1 (a) and 2 (b) after an initial nondeterministic split.
pub fn parity_split() -> ParityAutomaton {
    let mut aut = ParityAutomaton::new(ab(), 3, Kind::Parity);
    aut.set_transition(0, 0, Target::states([1, 2]));
    aut.set_transition(0, 1, Target::single(2));
    aut.set_transition(1, 0, Target::single(1));
    aut.set_transition(1, 1, Target::single(2));
    aut.set_transition(2, 0, Target::single(1));
    aut.set_transition(2, 1, Target::states([0, 2]));
    aut.set_priority(0, 0);
    aut.set_priority(1, 1);
    aut.set_priority(2, 2);
    aut
}

pub fn hand_fixtures() -> Vec<(&'static str, ParityAutomaton)> {
    vec![
        ("inf_a", inf_a()),
        ("fin_b", fin_b()),
        ("fin_b_det", fin_b_det()),
        ("inf_a_two_copies", inf_a_two_copies()),
        ("universal", universal()),
        ("empty", empty()),
        ("parity_split", parity_split()),
    ]
}

/// Every `stride`-th two-state nondeterministic Büchi candidate over {a, b},
/// starting from the first two-state one.
pub fn sampled_two_state(stride: usize) -> Vec<ParityAutomaton> {
    let spec = SearchSpec::new(ab(), Kind::Buchi, Measure::States, 2);
    enumerate_candidates(&spec)
        .unwrap()
        .filter_map(|c| match c {
            Candidate::Automaton(a) if a.state_count() == 2 => Some(a),
            _ => None,
        })
        .step_by(stride)
        .collect()
}

/// Fixture graphs: paths P2..P5, the 4-cycle and the star with 4 leaves.
pub fn graphs() -> Vec<(&'static str, NiceGraph)> {
    vec![
        ("P2", NiceGraph::path(2).unwrap()),
        ("P3", NiceGraph::path(3).unwrap()),
        ("P4", NiceGraph::path(4).unwrap()),
        ("P5", NiceGraph::path(5).unwrap()),
        ("C4", NiceGraph::cycle(4).unwrap()),
        ("S4", NiceGraph::star(4).unwrap()),
    ]
}

/// The five-vertex path with cover {v1, v3}.
pub fn path5_with_cover() -> (NiceGraph, VertexCover) {
    (NiceGraph::path(5).unwrap(), VertexCover::new([1, 3]))
}

/// Same automaton with one extra nondeterministic stop-successor from
/// `(v0, n)` into `(v1, #)`; the extra branch is a trap for the verifier.
pub fn with_stray_stop_branch(g: &NiceGraph, c: &VertexCover, kind: Kind) -> ParityAutomaton {
    let mut aut = build_cover_automaton(g, c, kind).unwrap();
    let from = cover_state_index(g, c, CoverState::Vertex(g.initial())).unwrap();
    let own = cover_state_index(g, c, CoverState::Natural(g.initial())).unwrap();
    let stray = cover_state_index(g, c, CoverState::Natural(g.neighbours(g.initial())[0])).unwrap();
    aut.set_transition(from, g.natural_symbol(), Target::states([own, stray]));
    aut
}

/// All lassos `(u, v)` over `m` symbols with `|u| + |v| <= total`.
pub fn all_lassos(m: usize, total: usize) -> Vec<(Vec<Symbol>, Vec<Symbol>)> {
    let mut out = Vec::new();
    for len in 1..=total {
        let mut words: Vec<Vec<Symbol>> = vec![Vec::new()];
        for _ in 0..len {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..m).map(move |a| {
                        let mut w = w.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        for w in words {
            for period_len in 1..=len {
                let (u, v) = w.split_at(len - period_len);
                out.push((u.to_vec(), v.to_vec()));
            }
        }
    }
    out
}
