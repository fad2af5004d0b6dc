//! Ultimately periodic words `u·v^ω` and their acceptance by parity
//! automata.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{Alphabet, ParityAutomaton, StateRef, Symbol};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    prefix: Vec<String>,
    period: Vec<String>,
}

impl LassoWord {
    pub fn new<P, Q, S>(prefix: P, period: Q) -> Result<Self>
    where
        P: IntoIterator<Item = S>,
        Q: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let prefix: Vec<String> = prefix.into_iter().map(Into::into).collect();
        let period: Vec<String> = period.into_iter().map(Into::into).collect();
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    /// Builds a lasso from symbol indices of `alphabet`.
    pub fn from_symbols(alphabet: &Alphabet, prefix: &[Symbol], period: &[Symbol]) -> Result<Self> {
        LassoWord::new(
            prefix.iter().map(|&a| alphabet.name(a)),
            period.iter().map(|&a| alphabet.name(a)),
        )
    }

    pub fn prefix(&self) -> &[String] {
        &self.prefix
    }

    pub fn period(&self) -> &[String] {
        &self.period
    }

    /// Prefix and period as symbol indices; fails on foreign symbols.
    pub fn resolve(&self, alphabet: &Alphabet) -> Result<(Vec<Symbol>, Vec<Symbol>)> {
        let map = |w: &[String]| -> Result<Vec<Symbol>> {
            w.iter().map(|s| alphabet.resolve(s)).collect()
        };
        Ok((map(&self.prefix)?, map(&self.period)?))
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> &str {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.prefix.join(" "), self.period.join(" "))
    }
}

/// Whether `aut` has an accepting run on `word`.
///
/// Runs are explored in the product of the automaton with the
/// `|u| + |v|`-position lasso; the word is accepted iff a reachable cycle of
/// the product has an even maximal priority.
pub fn accepts_lasso(aut: &ParityAutomaton, word: &LassoWord) -> Result<bool> {
    let (u, v) = word.resolve(aut.alphabet())?;
    Ok(accepts_symbols(aut, &u, &v))
}

/// [`accepts_lasso`] on already-resolved symbol indices. `period` must be
/// non-empty.
pub fn accepts_symbols(aut: &ParityAutomaton, prefix: &[Symbol], period: &[Symbol]) -> bool {
    assert!(!period.is_empty(), "lasso period must not be empty");
    let positions = prefix.len() + period.len();
    let letter = |i: usize| {
        if i < prefix.len() {
            prefix[i]
        } else {
            period[i - prefix.len()]
        }
    };
    let next_pos = |i: usize| if i + 1 < positions { i + 1 } else { prefix.len() };
    let nodes = aut.state_count() + 2;
    let id = |q: usize, i: usize| q * positions + i;

    let mut graph = Digraph::new(nodes * positions);
    for q in 0..nodes {
        let state = aut.node_state(q);
        for i in 0..positions {
            for succ in aut.successors(state, letter(i)) {
                graph.add_edge(id(q, i), id(aut.node_index(succ), next_pos(i)));
            }
        }
    }
    let start = id(aut.node_index(aut.initial()), 0);
    let reachable = graph.reachable_from(start);
    graph.has_cycle_with_max_parity(
        &reachable,
        |n| aut.priority_of(aut.node_state(n / positions)),
        true,
    )
}

/// For each extended state (indexed by [`ParityAutomaton::node_index`]),
/// whether the automaton started there accepts at least one word.
pub fn nonempty_states(aut: &ParityAutomaton) -> Vec<bool> {
    let nodes = aut.state_count() + 2;
    let mut graph = Digraph::new(nodes);
    let mut reverse = Digraph::new(nodes);
    for q in 0..nodes {
        let state = aut.node_state(q);
        for a in 0..aut.alphabet().len() {
            for succ in aut.successors(state, a) {
                let t = aut.node_index(succ);
                graph.add_edge(q, t);
                reverse.add_edge(t, q);
            }
        }
    }
    // Nodes lying on some even-dominated cycle.
    let mut good = vec![false; nodes];
    let prio = |n: usize| aut.priority_of(aut.node_state(n));
    let mut evens: Vec<u32> = (0..nodes).map(prio).filter(|p| p % 2 == 0).collect();
    evens.sort_unstable();
    evens.dedup();
    for p in evens {
        let allowed: Vec<bool> = (0..nodes).map(|n| prio(n) <= p).collect();
        for scc in graph.cyclic_components(&allowed) {
            if scc.iter().any(|&n| prio(n) == p) {
                for n in scc {
                    good[n] = true;
                }
            }
        }
    }
    // Backward closure.
    let mut result = good.clone();
    let mut stack: Vec<usize> = (0..nodes).filter(|&n| good[n]).collect();
    while let Some(n) = stack.pop() {
        for &m in reverse.successors(n) {
            if !result[m] {
                result[m] = true;
                stack.push(m);
            }
        }
    }
    result
}

/// Whether the language of `aut` is empty.
pub fn is_empty(aut: &ParityAutomaton) -> bool {
    !nonempty_states(aut)[aut.node_index(aut.initial())]
}

/// States reachable from `from` after reading `word` (sinks included).
pub fn post(aut: &ParityAutomaton, from: StateRef, word: &[Symbol]) -> Vec<StateRef> {
    let mut current = vec![from];
    for &a in word {
        let mut next: Vec<StateRef> = current
            .iter()
            .flat_map(|&q| aut.successors(q, a))
            .collect();
        next.sort_unstable();
        next.dedup();
        current = next;
    }
    current
}
