//! State-based parity automata over a finite alphabet, with explicit
//! accepting (`TOP`) and rejecting (`BOT`) sinks.
//!
//! Sinks are part of the extended state space but are never counted as
//! states: `state_count` only covers the regular states `0..n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol in its [`Alphabet`].
pub type Symbol = usize;
pub type Priority = u32;

/// Ordered list of distinct symbol names. The position of a symbol is its
/// canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols
            .into_iter()
            .map(Into::into)
            .map(|s| if s == crate::NATURAL_ALIAS { crate::NATURAL.to_string() } else { s })
            .collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s == ";" || s == "->" {
                return Err(Error::InvalidAlphabet(format!("bad symbol name `{s}`")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Resolves a symbol name, failing on names outside the alphabet. The
    /// stop-symbol alias resolves to the stop symbol.
    pub fn resolve(&self, name: &str) -> Result<Symbol> {
        let name = if name == crate::NATURAL_ALIAS { crate::NATURAL } else { name };
        self.index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}

/// A state of the extended state space: a regular state or one of the sinks.
///
/// The derived order puts every regular state before `Top`, and `Top`
/// before `Bottom`; this is the canonical order used for successor lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StateRef {
    Regular(usize),
    Top,
    Bottom,
}

impl fmt::Display for StateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateRef::Regular(q) => write!(f, "{q}"),
            StateRef::Top => f.write_str("TOP"),
            StateRef::Bottom => f.write_str("BOT"),
        }
    }
}

/// Value of the transition function on a (regular state, symbol) pair.
///
/// Mixed sets such as `{q, TOP}` are not representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// Sorted, duplicate-free set of regular states. Must be non-empty for
    /// the automaton to validate.
    States(Vec<usize>),
    Top,
    Bottom,
}

impl Target {
    pub fn states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        let mut v: Vec<usize> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Target::States(v)
    }

    pub fn single(q: usize) -> Self {
        Target::States(vec![q])
    }

    /// Number of transition-table entries this target contributes.
    pub fn size(&self) -> usize {
        match self {
            Target::States(s) => s.len(),
            Target::Top | Target::Bottom => 1,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = StateRef> + '_ {
        let (states, sink): (&[usize], Option<StateRef>) = match self {
            Target::States(s) => (s, None),
            Target::Top => (&[], Some(StateRef::Top)),
            Target::Bottom => (&[], Some(StateRef::Bottom)),
        };
        states
            .iter()
            .map(|&q| StateRef::Regular(q))
            .chain(sink)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Buchi,
    CoBuchi,
    Parity,
}

impl Kind {
    /// Priorities a state may carry under this acceptance kind, if bounded.
    pub fn allowed_priorities(self) -> Option<[Priority; 2]> {
        match self {
            Kind::Buchi => Some([1, 2]),
            Kind::CoBuchi => Some([2, 3]),
            Kind::Parity => None,
        }
    }

    /// Default (top, bottom) sink priorities.
    pub fn default_sink_priorities(self) -> (Priority, Priority) {
        match self {
            Kind::Buchi => (2, 1),
            Kind::CoBuchi => (2, 3),
            Kind::Parity => (0, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Buchi => "buchi",
            Kind::CoBuchi => "cobuchi",
            Kind::Parity => "parity",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "buchi" => Ok(Kind::Buchi),
            "cobuchi" => Ok(Kind::CoBuchi),
            "parity" => Ok(Kind::Parity),
            other => Err(format!("unknown kind `{other}` (expected buchi|cobuchi|parity)")),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One structural problem found by [`ParityAutomaton::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Nondeterministic parity automaton with state-based acceptance.
///
/// A run is accepting iff the highest priority seen infinitely often is even.
/// `TOP` loops on every symbol with an even priority, `BOT` with an odd one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityAutomaton {
    alphabet: Alphabet,
    state_count: usize,
    initial: StateRef,
    /// Row-major: `delta[q * |Σ| + a]`.
    delta: Vec<Target>,
    priority: Vec<Priority>,
    top_priority: Priority,
    bottom_priority: Priority,
    kind: Kind,
}

impl ParityAutomaton {
    /// An automaton with `state_count` states whose transitions all go to
    /// `BOT`, initial state `0` (or `BOT` when there are no states), and the
    /// lowest legal priority for `kind` on every state.
    pub fn new(alphabet: Alphabet, state_count: usize, kind: Kind) -> Self {
        let (top_priority, bottom_priority) = kind.default_sink_priorities();
        let base = match kind {
            Kind::Buchi => 1,
            Kind::CoBuchi => 2,
            Kind::Parity => 0,
        };
        let initial = if state_count == 0 {
            StateRef::Bottom
        } else {
            StateRef::Regular(0)
        };
        ParityAutomaton {
            delta: vec![Target::Bottom; state_count * alphabet.len()],
            alphabet,
            state_count,
            initial,
            priority: vec![base; state_count],
            top_priority,
            bottom_priority,
            kind,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn initial(&self) -> StateRef {
        self.initial
    }

    /// Number of regular states; the sinks are not counted.
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn top_priority(&self) -> Priority {
        self.top_priority
    }

    pub fn bottom_priority(&self) -> Priority {
        self.bottom_priority
    }

    pub fn transition(&self, q: usize, a: Symbol) -> &Target {
        &self.delta[q * self.alphabet.len() + a]
    }

    pub fn priority(&self, q: usize) -> Priority {
        self.priority[q]
    }

    pub fn priorities(&self) -> &[Priority] {
        &self.priority
    }

    pub fn priority_of(&self, q: StateRef) -> Priority {
        match q {
            StateRef::Regular(i) => self.priority[i],
            StateRef::Top => self.top_priority,
            StateRef::Bottom => self.bottom_priority,
        }
    }

    /// Successors of any extended state; sinks loop on themselves.
    pub fn successors(&self, q: StateRef, a: Symbol) -> Vec<StateRef> {
        match q {
            StateRef::Regular(i) => self.transition(i, a).iter().collect(),
            sink => vec![sink],
        }
    }

    /// Dense index of an extended state: regular states first, then `TOP`,
    /// then `BOT`.
    pub fn node_index(&self, q: StateRef) -> usize {
        match q {
            StateRef::Regular(i) => i,
            StateRef::Top => self.state_count,
            StateRef::Bottom => self.state_count + 1,
        }
    }

    pub fn node_state(&self, index: usize) -> StateRef {
        match index.checked_sub(self.state_count) {
            None => StateRef::Regular(index),
            Some(0) => StateRef::Top,
            Some(_) => StateRef::Bottom,
        }
    }

    /// All extended states in canonical order.
    pub fn extended_states(&self) -> impl Iterator<Item = StateRef> {
        (0..self.state_count)
            .map(StateRef::Regular)
            .chain([StateRef::Top, StateRef::Bottom])
    }

    pub fn set_initial(&mut self, q: StateRef) {
        self.initial = q;
    }

    pub fn set_transition(&mut self, q: usize, a: Symbol, target: Target) {
        let target = match target {
            Target::States(s) => Target::states(s),
            sink => sink,
        };
        let k = self.alphabet.len();
        self.delta[q * k + a] = target;
    }

    pub fn set_priority(&mut self, q: usize, p: Priority) {
        self.priority[q] = p;
    }

    pub fn set_sink_priorities(&mut self, top: Priority, bottom: Priority) {
        self.top_priority = top;
        self.bottom_priority = bottom;
    }

    pub fn set_kind(&mut self, kind: Kind) {
        self.kind = kind;
    }

    /// Every invariant violation, each with its location. Empty iff the
    /// automaton is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut diag = |location: String, message: String| {
            out.push(Diagnostic { location, message })
        };
        if let StateRef::Regular(q) = self.initial {
            if q >= self.state_count {
                diag("initial".into(), format!("state {q} does not exist"));
            }
        }
        for q in 0..self.state_count {
            for a in 0..self.alphabet.len() {
                if let Target::States(set) = self.transition(q, a) {
                    let loc = format!("({q}, {})", self.alphabet.name(a));
                    if set.is_empty() {
                        diag(loc.clone(), "empty target set".into());
                    }
                    for &t in set {
                        if t >= self.state_count {
                            diag(loc.clone(), format!("target state {t} does not exist"));
                        }
                    }
                }
            }
        }
        if !self.top_priority.is_multiple_of(2) {
            diag("TOP".into(), format!("priority {} must be even", self.top_priority));
        }
        if self.bottom_priority % 2 != 1 {
            diag("BOT".into(), format!("priority {} must be odd", self.bottom_priority));
        }
        if let Some(allowed) = self.kind.allowed_priorities() {
            let named = (0..self.state_count)
                .map(|q| (q.to_string(), self.priority[q]))
                .chain([
                    ("TOP".to_string(), self.top_priority),
                    ("BOT".to_string(), self.bottom_priority),
                ]);
            for (loc, p) in named {
                if !allowed.contains(&p) {
                    diag(
                        format!("priority of {loc}"),
                        format!("{p} outside {:?} required by kind {}", allowed, self.kind),
                    );
                }
            }
        }
        out
    }

    /// True iff every target is a singleton or a sink.
    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|t| t.size() == 1)
    }

    /// Sum of `|δ(q, a)|` over regular states and all symbols; a sink target
    /// counts as one entry.
    pub fn transition_table_size(&self) -> usize {
        self.delta.iter().map(Target::size).sum()
    }

    /// The same automaton started from `q`.
    pub fn rebase(&self, q: StateRef) -> Result<Self> {
        if let StateRef::Regular(i) = q {
            if i >= self.state_count {
                return Err(Error::UnknownState {
                    index: i,
                    count: self.state_count,
                });
            }
        }
        let mut out = self.clone();
        out.initial = q;
        Ok(out)
    }

    /// Language-equivalent automaton with compacted priorities.
    ///
    /// Sinks get the lowest legal priorities for the kind. Then, while some
    /// priority `p >= 2` below the maximum is unused, every priority above
    /// `p` drops by two.
    pub fn normalize_priorities(&self) -> Self {
        let mut out = self.clone();
        let (top, bottom) = self.kind.default_sink_priorities();
        out.top_priority = top;
        out.bottom_priority = bottom;
        loop {
            let used: BTreeSet<Priority> = out
                .priority
                .iter()
                .copied()
                .chain([out.top_priority, out.bottom_priority])
                .collect();
            let max = *used.iter().next_back().unwrap_or(&0);
            let Some(gap) = (2..max).find(|p| !used.contains(p)) else {
                break;
            };
            let shift = |p: &mut Priority| {
                if *p > gap {
                    *p -= 2
                }
            };
            out.priority.iter_mut().for_each(shift);
            shift(&mut out.top_priority);
            shift(&mut out.bottom_priority);
        }
        out
    }

    /// Returns an error unless both automata read the same alphabet.
    pub fn check_same_alphabet(&self, other: &ParityAutomaton) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }
}
