//! The "P2 simulates P1" game.
//!
//! Spoiler picks a letter and a P1 successor, verifier answers with a P2
//! successor for the same letter. Verifier wins a play iff the P1 run is
//! rejecting or the P2 run is accepting.
//!
//! The winning condition is a disjunction of two parity conditions. The
//! solver turns it into a single parity game by pairing every position with
//! an appearance record: for each P1 priority level `l`, the largest P2
//! priority seen since the last visit to a P1 priority `>= l`. Visiting P1
//! priority `a` then emits a parity colour ranked first by `a` and, for even
//! `a`, second by the P2 maximum of the segment that just closed.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::automaton::{Alphabet, ParityAutomaton, Priority, StateRef, Symbol};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::game::{ParityGame, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    /// Spoiler to move.
    Choice { q1: StateRef, q2: StateRef },
    /// Verifier to move.
    Response {
        q1: StateRef,
        letter: Symbol,
        q2: StateRef,
    },
}

impl Position {
    pub fn is_verifier(&self) -> bool {
        matches!(self, Position::Response { .. })
    }

    pub fn states(&self) -> (StateRef, StateRef) {
        match *self {
            Position::Choice { q1, q2 } | Position::Response { q1, q2, .. } => (q1, q2),
        }
    }
}

/// Reachable part of the game graph; position `0` is the initial position.
#[derive(Debug, Clone)]
pub struct SimulationArena {
    positions: Vec<Position>,
    edges: Vec<Vec<usize>>,
    pri1: Vec<Priority>,
    pri2: Vec<Priority>,
    alphabet: Option<Alphabet>,
}

/// Verifier's memoryless choice: Response position id -> successor id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PositionalStrategy {
    pub choice: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub verifier_wins: bool,
    pub strategy: Option<PositionalStrategy>,
}

/// Builds the reachable "`p2` simulates `p1`" arena.
pub fn build_arena(p1: &ParityAutomaton, p2: &ParityAutomaton) -> Result<SimulationArena> {
    p1.check_same_alphabet(p2)?;
    let letters = p1.alphabet().len();
    let mut ids: HashMap<Position, usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |pos: Position,
                      positions: &mut Vec<Position>,
                      edges: &mut Vec<Vec<usize>>,
                      queue: &mut VecDeque<usize>| {
        *ids.entry(pos).or_insert_with(|| {
            positions.push(pos);
            edges.push(Vec::new());
            queue.push_back(positions.len() - 1);
            positions.len() - 1
        })
    };

    let start = Position::Choice {
        q1: p1.initial(),
        q2: p2.initial(),
    };
    intern(start, &mut positions, &mut edges, &mut queue);
    while let Some(id) = queue.pop_front() {
        let mut succ = Vec::new();
        match positions[id] {
            Position::Choice { q1, q2 } => {
                for letter in 0..letters {
                    for q1n in p1.successors(q1, letter) {
                        let next = Position::Response {
                            q1: q1n,
                            letter,
                            q2,
                        };
                        succ.push(intern(next, &mut positions, &mut edges, &mut queue));
                    }
                }
            }
            Position::Response { q1, letter, q2 } => {
                for q2n in p2.successors(q2, letter) {
                    let next = Position::Choice { q1, q2: q2n };
                    succ.push(intern(next, &mut positions, &mut edges, &mut queue));
                }
            }
        }
        edges[id] = succ;
    }

    let pri1 = positions
        .iter()
        .map(|p| p1.priority_of(p.states().0))
        .collect();
    let pri2 = positions
        .iter()
        .map(|p| p2.priority_of(p.states().1))
        .collect();
    Ok(SimulationArena {
        positions,
        edges,
        pri1,
        pri2,
        alphabet: Some(p1.alphabet().clone()),
    })
}

impl SimulationArena {
    /// Assembles an arena from explicit parts; position `0` is initial.
    /// Every position needs at least one in-range successor.
    pub fn from_parts(
        positions: Vec<Position>,
        edges: Vec<Vec<usize>>,
        pri1: Vec<Priority>,
        pri2: Vec<Priority>,
    ) -> Result<Self> {
        let n = positions.len();
        if n == 0 || edges.len() != n || pri1.len() != n || pri2.len() != n {
            return Err(Error::InvalidStrategy("arena parts have inconsistent sizes".into()));
        }
        for (id, succ) in edges.iter().enumerate() {
            if succ.is_empty() || succ.iter().any(|&t| t >= n) {
                return Err(Error::InvalidStrategy(format!(
                    "position {id} has no valid successor list"
                )));
            }
        }
        Ok(SimulationArena {
            positions,
            edges,
            pri1,
            pri2,
            alphabet: None,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn position(&self, id: usize) -> Position {
        self.positions[id]
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn successors(&self, id: usize) -> &[usize] {
        &self.edges[id]
    }

    pub fn pri1(&self, id: usize) -> Priority {
        self.pri1[id]
    }

    pub fn pri2(&self, id: usize) -> Priority {
        self.pri2[id]
    }

    pub fn response_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.positions[i].is_verifier())
    }

    pub fn response_count(&self) -> usize {
        self.response_positions().count()
    }

    /// Line-oriented dump: `POS id kind q1 [letter] q2 pri1 pri2` and
    /// `EDGE from to`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, pos) in self.positions.iter().enumerate() {
            let (p1, p2) = (self.pri1[id], self.pri2[id]);
            match *pos {
                Position::Choice { q1, q2 } => {
                    let _ = writeln!(out, "POS {id} choice {q1} {q2} {p1} {p2}");
                }
                Position::Response { q1, letter, q2 } => {
                    let name = match &self.alphabet {
                        Some(a) => a.name(letter).to_string(),
                        None => letter.to_string(),
                    };
                    let _ = writeln!(out, "POS {id} response {q1} {name} {q2} {p1} {p2}");
                }
            }
        }
        for (id, succ) in self.edges.iter().enumerate() {
            for t in succ {
                let _ = writeln!(out, "EDGE {id} {t}");
            }
        }
        out
    }
}

impl fmt::Display for PositionalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (from, to) in &self.choice {
            writeln!(f, "CHOOSE {from} {to}")?;
        }
        Ok(())
    }
}

/// Parity game over (position, appearance record), optionally with some
/// verifier positions fixed to one successor.
fn product_game(arena: &SimulationArena, fixed: &[Option<usize>]) -> (ParityGame, usize) {
    let levels = arena.pri1.iter().copied().max().unwrap_or(0) as usize + 1;
    let width = arena.pri2.iter().copied().max().unwrap_or(0) + 1;

    // Record entries: 0 = nothing seen, v + 1 = P2 maximum v.
    type Key = (usize, Vec<u8>);
    let mut game = ParityGame::new();
    let mut ids: HashMap<Key, usize> = HashMap::new();

    let colour = |pos: usize, record: &[u8]| -> (u32, Vec<u8>) {
        let a = arena.pri1[pos];
        let b = arena.pri2[pos];
        let seen = match record[a as usize] {
            0 => b,
            m => (m as u32 - 1).max(b),
        };
        let (rank, losing) = if a % 2 == 1 {
            (a * width, 0)
        } else {
            (a * width + seen, seen % 2)
        };
        let mut next = record.to_vec();
        for (level, entry) in next.iter_mut().enumerate() {
            if level <= a as usize {
                *entry = 0;
            } else {
                *entry = (*entry).max(b as u8 + 1);
            }
        }
        (2 * rank + losing, next)
    };

    let mut node_of = |key: Key,
                       game: &mut ParityGame,
                       queue: &mut VecDeque<(usize, Key)>|
     -> usize {
        if let Some(&id) = ids.get(&key) {
            return id;
        }
        let owner = if arena.positions[key.0].is_verifier() {
            Player::Even
        } else {
            Player::Odd
        };
        let (prio, _) = colour(key.0, &key.1);
        let id = game.add_node(owner, prio);
        ids.insert(key.clone(), id);
        queue.push_back((id, key));
        id
    };

    let mut queue: VecDeque<(usize, Key)> = VecDeque::new();
    let start = node_of((arena.initial(), vec![0; levels]), &mut game, &mut queue);
    while let Some((from, (pos, record))) = queue.pop_front() {
        let (_, next) = colour(pos, &record);
        let succ: Vec<usize> = match fixed.get(pos).copied().flatten() {
            Some(t) => vec![t],
            None => arena.edges[pos].clone(),
        };
        for t in succ {
            let to = node_of((t, next.clone()), &mut game, &mut queue);
            game.add_edge(from, to);
        }
    }
    (game, start)
}

fn wins_with(arena: &SimulationArena, fixed: &[Option<usize>]) -> bool {
    let (game, start) = product_game(arena, fixed);
    game.solve()[start]
}

/// Verdict only: does verifier win from the initial position?
pub fn verifier_wins(arena: &SimulationArena) -> bool {
    wins_with(arena, &[])
}

/// Solves the game for verifier and, when she wins, returns a positional
/// winning strategy.
///
/// The strategy is found by fixing verifier positions one at a time (in id
/// order) to the first successor that keeps the game won.
pub fn solve_verifier(arena: &SimulationArena) -> SolveOutcome {
    if !verifier_wins(arena) {
        return SolveOutcome {
            verifier_wins: false,
            strategy: None,
        };
    }
    let mut fixed: Vec<Option<usize>> = vec![None; arena.len()];
    for id in arena.response_positions() {
        let succ = &arena.edges[id];
        if succ.len() == 1 {
            fixed[id] = Some(succ[0]);
            continue;
        }
        let mut chosen = None;
        for &t in succ {
            fixed[id] = Some(t);
            if wins_with(arena, &fixed) {
                chosen = Some(t);
                break;
            }
        }
        fixed[id] = Some(chosen.expect("verifier has a positional winning strategy"));
    }
    let choice = arena
        .response_positions()
        .map(|id| (id, fixed[id].expect("fixed above")))
        .collect();
    SolveOutcome {
        verifier_wins: true,
        strategy: Some(PositionalStrategy { choice }),
    }
}

/// Checks that `strategy` wins for verifier: after fixing it, no reachable
/// closed walk has an even P1 maximum together with an odd P2 maximum.
pub fn check_positional_strategy(
    arena: &SimulationArena,
    strategy: &PositionalStrategy,
) -> Result<bool> {
    let n = arena.len();
    let mut graph = Digraph::new(n);
    for id in 0..n {
        if arena.positions[id].is_verifier() {
            let Some(&t) = strategy.choice.get(&id) else {
                return Err(Error::InvalidStrategy(format!("no choice at position {id}")));
            };
            if !arena.edges[id].contains(&t) {
                return Err(Error::InvalidStrategy(format!(
                    "{id} -> {t} is not an arena edge"
                )));
            }
            graph.add_edge(id, t);
        } else {
            for &t in &arena.edges[id] {
                graph.add_edge(id, t);
            }
        }
    }
    let reachable = graph.reachable_from(arena.initial());
    let mut evens1: Vec<Priority> = (0..n)
        .filter(|&i| reachable[i])
        .map(|i| arena.pri1[i])
        .filter(|p| p % 2 == 0)
        .collect();
    let mut odds2: Vec<Priority> = (0..n)
        .filter(|&i| reachable[i])
        .map(|i| arena.pri2[i])
        .filter(|p| p % 2 == 1)
        .collect();
    evens1.sort_unstable();
    evens1.dedup();
    odds2.sort_unstable();
    odds2.dedup();
    for &p1 in &evens1 {
        for &p2 in &odds2 {
            let allowed: Vec<bool> = (0..n)
                .map(|i| reachable[i] && arena.pri1[i] <= p1 && arena.pri2[i] <= p2)
                .collect();
            let bad = graph.cyclic_components(&allowed).iter().any(|scc| {
                scc.iter().any(|&i| arena.pri1[i] == p1) && scc.iter().any(|&i| arena.pri2[i] == p2)
            });
            if bad {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every positional strategy of the arena, in odometer order over the
/// verifier positions. The count is the product of the out-degrees.
pub fn all_strategies(arena: &SimulationArena) -> impl Iterator<Item = PositionalStrategy> + '_ {
    let responses: Vec<usize> = arena.response_positions().collect();
    let mut digits = vec![0usize; responses.len()];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let choice = responses
            .iter()
            .zip(&digits)
            .map(|(&id, &d)| (id, arena.edges[id][d]))
            .collect();
        done = true;
        for (k, &id) in responses.iter().enumerate() {
            digits[k] += 1;
            if digits[k] < arena.edges[id].len() {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        Some(PositionalStrategy { choice })
    })
}

/// Number of positional strategies (saturating).
pub fn strategy_count(arena: &SimulationArena) -> u64 {
    arena
        .response_positions()
        .map(|id| arena.edges[id].len() as u64)
        .fold(1u64, u64::saturating_mul)
}
