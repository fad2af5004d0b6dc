//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use gfg_core::lasso::accepts_symbols;
use gfg_core::minimizer::{measure_of, minimize, Measure, SearchResult, SearchSpec};
use gfg_core::reduction::{
    adjusted_contains, all_vertex_covers, build_cover_automaton, characteristic_contains,
    check_core_structure, cover_state_index, extract_cover, is_vertex_cover,
    min_vertex_cover_bruteforce, CoverState, LanguageMode, NiceGraph, VertexCover,
};
use gfg_core::sim::{all_strategies, build_arena, check_positional_strategy, solve_verifier};
use gfg_core::{accepts_lasso, gfg_equivalent, Error, Kind, LassoWord, ParityAutomaton};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_construction_size() -> Outcome {
    let (g, c) = common::path5_with_cover();
    let path5_aut = build_cover_automaton(&g, &c, Kind::Buchi).map_err(|e| e.to_string())?;
    ensure(path5_aut.state_count() == 12, || {
        format!("five-vertex path: {} states, expected 12", path5_aut.state_count())
    })?;
    let g2 = NiceGraph::path(2).unwrap();
    let c2 = min_vertex_cover_bruteforce(&g2).unwrap();
    let b2 = build_cover_automaton(&g2, &c2, Kind::Buchi).unwrap();
    ensure(c2.len() == 1 && b2.state_count() == 5, || {
        format!("G2: {} states, expected 5", b2.state_count())
    })?;
    Ok("12 and 5 states".into())
}

fn language_oracle(kind: Kind, mode: LanguageMode) -> Outcome {
    let mut checked = 0usize;
    for (name, g) in common::graphs() {
        let cover = min_vertex_cover_bruteforce(&g).unwrap();
        let aut = build_cover_automaton(&g, &cover, kind).unwrap();
        let alphabet = g.alphabet();
        for (u, v) in common::all_lassos(alphabet.len(), 5) {
            let word = LassoWord::from_symbols(&alphabet, &u, &v).unwrap();
            let expected = match mode {
                LanguageMode::Characteristic => characteristic_contains(&g, &word),
                LanguageMode::Adjusted => adjusted_contains(&g, &word),
            }
            .unwrap();
            ensure(accepts_symbols(&aut, &u, &v) == expected, || {
                format!("{name}: automaton and oracle disagree on `{word}` (oracle {expected})")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} lassos agree"))
}

fn c2_characteristic_oracle() -> Outcome {
    language_oracle(Kind::Buchi, LanguageMode::Characteristic)
}

fn c3_adjusted_oracle() -> Outcome {
    language_oracle(Kind::CoBuchi, LanguageMode::Adjusted)
}

fn c4_example_words() -> Outcome {
    let (g, c) = common::path5_with_cover();
    let aut = build_cover_automaton(&g, &c, Kind::Buchi).unwrap();
    // red=v0 green=v1 blue=v2 white=v3 yellow=v4
    let accepted = "v0 v0 v0 v1 v1 v0 v1 v2 v3 v3 v2 v2 # v2";
    let wrong_after_stop = "v0 v0 v0 v1 v1 v0 v1 v2 v3 v3 v2 v2 # v4";
    let non_adjacent = "v0 v0 v0 v1 v1 v0 v1 v2 v4 v3 v2 v2 # v2";
    for tail in ["v0", "v2", "#", "v4 v3"] {
        let lasso = |prefix: &str| {
            LassoWord::new(prefix.split_whitespace(), tail.split_whitespace()).unwrap()
        };
        ensure(accepts_lasso(&aut, &lasso(accepted)).unwrap(), || {
            format!("accepted example rejected with tail `{tail}`")
        })?;
        ensure(!accepts_lasso(&aut, &lasso(wrong_after_stop)).unwrap(), || {
            format!("wrong-colour example accepted with tail `{tail}`")
        })?;
        ensure(!accepts_lasso(&aut, &lasso(non_adjacent)).unwrap(), || {
            format!("non-adjacent example accepted with tail `{tail}`")
        })?;
    }
    Ok("1 accepted, 2 rejected, 4 continuations each".into())
}

fn c5_positional_determinacy() -> Outcome {
    let mut corpus: Vec<(String, ParityAutomaton)> = common::hand_fixtures()
        .into_iter()
        .map(|(n, a)| (n.to_string(), a))
        .collect();
    for (i, a) in common::sampled_two_state(13).into_iter().enumerate() {
        corpus.push((format!("sample{i}"), a));
    }
    let g2 = NiceGraph::path(2).unwrap();
    let c2 = VertexCover::new([1]);
    let graph_corpus = [
        ("B(G2)", build_cover_automaton(&g2, &c2, Kind::Buchi).unwrap()),
        ("B(G2,all)", build_cover_automaton(&g2, &VertexCover::new([0, 1]), Kind::Buchi).unwrap()),
        ("B(G2)+stray", common::with_stray_stop_branch(&g2, &c2, Kind::Buchi)),
    ];

    let (mut arenas, mut wins, mut strategies) = (0, 0, 0u64);
    let mut check_pair = |n1: &str, p1: &ParityAutomaton, n2: &str, p2: &ParityAutomaton| -> Result<(), String> {
        let arena = build_arena(p1, p2).map_err(|e| e.to_string())?;
        if arena.response_count() > 12 {
            return Ok(());
        }
        arenas += 1;
        let solved = solve_verifier(&arena);
        let mut exhaustive = false;
        for s in all_strategies(&arena) {
            strategies += 1;
            if check_positional_strategy(&arena, &s).map_err(|e| e.to_string())? {
                exhaustive = true;
                break;
            }
        }
        ensure(solved.verifier_wins == exhaustive, || {
            format!("({n1}, {n2}): solver says {}, enumeration says {exhaustive}", solved.verifier_wins)
        })?;
        if let Some(s) = &solved.strategy {
            ensure(check_positional_strategy(&arena, s).unwrap(), || {
                format!("({n1}, {n2}): extracted strategy fails the check")
            })?;
        }
        wins += usize::from(exhaustive);
        Ok(())
    };
    for (n1, p1) in &corpus {
        for (n2, p2) in &corpus {
            check_pair(n1, p1, n2, p2)?;
        }
    }
    for (n1, p1) in &graph_corpus {
        for (n2, p2) in &graph_corpus {
            check_pair(n1, p1, n2, p2)?;
        }
    }
    ensure(arenas > 0 && wins > 0 && wins < arenas, || {
        format!("degenerate corpus: {arenas} arenas, {wins} verifier wins")
    })?;
    Ok(format!("{arenas} arenas ({wins} verifier wins), {strategies} strategies checked"))
}

fn c6_certificate_check() -> Outcome {
    let graphs = common::graphs();
    let mut same = 0;
    for (name, g) in &graphs {
        let covers = all_vertex_covers(g).unwrap();
        let automata: Vec<_> = covers
            .iter()
            .map(|c| build_cover_automaton(g, c, Kind::Buchi).unwrap())
            .collect();
        for (i, a) in automata.iter().enumerate() {
            for (j, b) in automata.iter().enumerate() {
                if i != j {
                    ensure(gfg_equivalent(a, b).unwrap(), || {
                        format!("{name}: covers {} and {} not equivalent", covers[i], covers[j])
                    })?;
                    same += 1;
                }
            }
        }
    }

    // Graphs of different sizes have different alphabets; the check refuses
    // to compare them.
    let (mut cross, mut mismatched) = (0, 0);
    for (n1, g1) in &graphs {
        for (n2, g2) in &graphs {
            if n1 == n2 {
                continue;
            }
            for c1 in all_vertex_covers(g1).unwrap() {
                let a = build_cover_automaton(g1, &c1, Kind::Buchi).unwrap();
                for c2 in all_vertex_covers(g2).unwrap() {
                    let b = build_cover_automaton(g2, &c2, Kind::Buchi).unwrap();
                    match gfg_equivalent(&a, &b) {
                        Ok(equivalent) => {
                            ensure(!equivalent, || {
                                format!("{n1} cover {c1} and {n2} cover {c2} reported equivalent")
                            })?;
                            cross += 1;
                        }
                        Err(Error::AlphabetMismatch { .. }) => mismatched += 1,
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
        }
    }

    let mut readings = 0;
    for (name, g) in &graphs {
        let c = min_vertex_cover_bruteforce(g).unwrap();
        let buchi = build_cover_automaton(g, &c, Kind::Buchi).unwrap();
        let cobuchi = build_cover_automaton(g, &c, Kind::CoBuchi).unwrap();
        ensure(!gfg_equivalent(&buchi, &cobuchi).unwrap(), || {
            format!("{name}: Büchi reading equivalent to coBüchi reading")
        })?;
        ensure(!gfg_equivalent(&cobuchi, &buchi).unwrap(), || {
            format!("{name}: coBüchi reading equivalent to Büchi reading")
        })?;
        readings += 2;
    }
    Ok(format!("{same} same-graph pairs equivalent; {cross} cross-graph and {readings} reading pairs not; {mismatched} cross-graph pairs refused for alphabet mismatch"))
}

fn c7_cover_extraction() -> Outcome {
    let mut extracted = 0;
    let mut round_trips = 0;
    for (name, g) in common::graphs() {
        let reference =
            build_cover_automaton(&g, &min_vertex_cover_bruteforce(&g).unwrap(), Kind::Buchi).unwrap();
        for c in all_vertex_covers(&g).unwrap() {
            for (kind, mode) in [
                (Kind::Buchi, LanguageMode::Characteristic),
                (Kind::CoBuchi, LanguageMode::Adjusted),
            ] {
                let aut = build_cover_automaton(&g, &c, kind).unwrap();
                let got = extract_cover(&aut, &g, mode).unwrap();
                ensure(got == c, || format!("{name}: extracted {got} from cover {c} ({mode})"))?;
                round_trips += 1;
            }
        }
        let mut fixtures = vec![common::with_stray_stop_branch(&g, &VertexCover::new(0..g.vertex_count()), Kind::Buchi)];
        for c in all_vertex_covers(&g).unwrap() {
            fixtures.push(build_cover_automaton(&g, &c, Kind::Buchi).unwrap());
        }
        for aut in fixtures {
            if gfg_equivalent(&aut, &reference).unwrap() {
                let got = extract_cover(&aut, &g, LanguageMode::Characteristic).unwrap();
                ensure(is_vertex_cover(&g, &got), || format!("{name}: extracted {got} is not a cover"))?;
                extracted += 1;
            }
        }
    }
    Ok(format!("{round_trips} round trips, {extracted} equivalent fixtures yield covers"))
}

fn c8_lower_bound_slice() -> Outcome {
    let g2 = NiceGraph::path(2).unwrap();
    let reference =
        build_cover_automaton(&g2, &min_vertex_cover_bruteforce(&g2).unwrap(), Kind::Buchi).unwrap();
    let mut spec = SearchSpec::new(g2.alphabet(), Kind::Parity, Measure::States, 3);
    spec.deterministic_only = true;
    spec.max_priority = 3;
    spec.budget.max_duration = Some(Duration::from_secs(600));
    let outcome = minimize(&reference, &spec).map_err(|e| e.to_string())?;
    ensure(outcome.result == SearchResult::None, || {
        format!("deterministic <= 3 states: {:?}", outcome.result)
    })?;

    let mut smoke = SearchSpec::new(g2.alphabet(), Kind::Parity, Measure::States, 4);
    smoke.max_priority = 3;
    smoke.budget.max_candidates = Some(20_000);
    smoke.budget.max_duration = Some(Duration::from_secs(60));
    let smoke_outcome = minimize(&reference, &smoke).map_err(|e| e.to_string())?;
    ensure(smoke_outcome.result == SearchResult::Inconclusive, || {
        format!("nondeterministic <= 4 smoke test: {:?}", smoke_outcome.result)
    })?;
    Ok(format!(
        "NONE after {} candidates; bound-4 smoke test INCONCLUSIVE after {}",
        outcome.stats.enumerated, smoke_outcome.stats.enumerated
    ))
}

fn c9_minimizer_sanity() -> Outcome {
    let reference = common::inf_a();
    for deterministic_only in [true, false] {
        let spec = |k| {
            let mut s = SearchSpec::new(common::ab(), Kind::Buchi, Measure::States, k);
            s.deterministic_only = deterministic_only;
            s
        };
        let one = minimize(&reference, &spec(1)).unwrap();
        ensure(one.result == SearchResult::None, || {
            format!("k=1 (deterministic_only={deterministic_only}): {:?}", one.result)
        })?;
        let two = minimize(&reference, &spec(2)).unwrap();
        let SearchResult::Found(found) = two.result else {
            return Err(format!("k=2 (deterministic_only={deterministic_only}): {:?}", two.result));
        };
        ensure(
            gfg_equivalent(&found, &reference).unwrap() && measure_of(&found, Measure::States) <= 2,
            || "k=2 candidate fails verification".into(),
        )?;
    }
    Ok("k=1 NONE, k=2 FOUND (deterministic and nondeterministic spaces)".into())
}

fn c10_structure_reports() -> Outcome {
    let mut passing = 0;
    let mut mutants = 0;
    for (name, g) in common::graphs() {
        for c in all_vertex_covers(&g).unwrap() {
            for (kind, mode) in [
                (Kind::Buchi, LanguageMode::Characteristic),
                (Kind::CoBuchi, LanguageMode::Adjusted),
            ] {
                let aut = build_cover_automaton(&g, &c, kind).unwrap();
                let report = check_core_structure(&aut, &g, mode).unwrap();
                ensure(report.all_hold(), || {
                    format!("{name} cover {c} ({mode}): {:?}", report.failures)
                })?;
                passing += 1;

                let mut mutant = aut.clone();
                let (flipped_item, new_priority): (usize, u32) = match mode {
                    LanguageMode::Characteristic => {
                        for &v in &c.0 {
                            mutant.set_priority(index(&g, &c, CoverState::Final(v)), 1);
                        }
                        (5, 1)
                    }
                    LanguageMode::Adjusted => {
                        for v in 0..g.vertex_count() {
                            mutant.set_priority(index(&g, &c, CoverState::Vertex(v)), 3);
                        }
                        (1, 3)
                    }
                };
                let report = check_core_structure(&mutant, &g, mode).unwrap();
                ensure(!report.items[flipped_item], || {
                    format!(
                        "{name} cover {c} ({mode}): item {} holds after flipping to priority {new_priority}",
                        flipped_item + 1
                    )
                })?;
                mutants += 1;
            }
        }
    }
    Ok(format!("{passing} constructions pass all items, {mutants} mutants fail the flipped item"))
}

fn index(g: &NiceGraph, c: &VertexCover, s: CoverState) -> usize {
    cover_state_index(g, c, s).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("construction size", c1_construction_size),
        ("characteristic language oracle", c2_characteristic_oracle),
        ("adjusted language oracle", c3_adjusted_oracle),
        ("example words", c4_example_words),
        ("positional determinacy", c5_positional_determinacy),
        ("certificate check", c6_certificate_check),
        ("cover extraction", c7_cover_extraction),
        ("lower bound slice", c8_lower_bound_slice),
        ("minimizer sanity", c9_minimizer_sanity),
        ("structural reports", c10_structure_reports),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
