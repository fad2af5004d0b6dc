//! Bounded search for small automata equivalent to a reference.
//!
//! Candidates are enumerated in a fixed total order: by number of states,
//! then by the largest priority used, then by transition structure, then by
//! priority vector. Structures are in breadth-first canonical form: states
//! are numbered in order of discovery from state 0, scanning rows in state
//! order and symbols in alphabet order; a slot discovering several states
//! at once numbers them as one contiguous block.
//!
//! Target options per slot, in order: non-empty state sets by bitmask, then
//! `TOP`, then `BOT`.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::automaton::{Alphabet, Kind, ParityAutomaton, Priority, StateRef, Symbol, Target};
use crate::error::{Error, Result};
use crate::gfg::gfg_equivalent;
use crate::lasso::accepts_symbols;

/// Largest state count the enumerator handles.
pub const MAX_SEARCH_STATES: usize = 8;
/// Prefilter lassos are all words with `|u| + |v|` up to the largest length
/// keeping the suite at or below this many words.
pub const MAX_PREFILTER_LASSOS: usize = 4000;
const WINDOW: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    States,
    Transitions,
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "states" => Ok(Measure::States),
            "transitions" => Ok(Measure::Transitions),
            other => Err(format!("unknown measure `{other}` (expected states|transitions)")),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::States => "states",
            Measure::Transitions => "transitions",
        })
    }
}

pub fn measure_of(aut: &ParityAutomaton, measure: Measure) -> usize {
    match measure {
        Measure::States => aut.state_count(),
        Measure::Transitions => aut.transition_table_size(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub max_candidates: Option<u64>,
    pub max_duration: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub alphabet: Alphabet,
    pub target_kind: Kind,
    pub measure: Measure,
    pub bound: usize,
    /// Only read for [`Kind::Parity`]; the other kinds fix their range.
    pub max_priority: Priority,
    pub deterministic_only: bool,
    pub budget: Budget,
}

impl SearchSpec {
    /// Unbudgeted spec; parity candidates default to priorities `0..=3`.
    pub fn new(alphabet: Alphabet, target_kind: Kind, measure: Measure, bound: usize) -> Self {
        SearchSpec {
            alphabet,
            target_kind,
            measure,
            bound,
            max_priority: 3,
            deterministic_only: false,
            budget: Budget::default(),
        }
    }

    /// Inclusive range of state priorities candidates may use.
    pub fn priority_range(&self) -> (Priority, Priority) {
        match self.target_kind {
            Kind::Buchi => (1, 2),
            Kind::CoBuchi => (2, 3),
            Kind::Parity => (0, self.max_priority),
        }
    }

    /// Largest state count any candidate meeting the bound can have.
    pub fn max_states(&self) -> usize {
        match self.measure {
            Measure::States => self.bound,
            Measure::Transitions => self.bound / self.alphabet.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_states() > MAX_SEARCH_STATES {
            return Err(Error::SizeLimit(format!(
                "search limited to {MAX_SEARCH_STATES} states, bound allows {}",
                self.max_states()
            )));
        }
        Ok(())
    }
}

const fn top_code(n: usize) -> u32 {
    1 << n
}

const fn bottom_code(n: usize) -> u32 {
    (1 << n) + 1
}

/// Compact candidate: `targets[q * |Σ| + a]` is a state bitmask, or
/// [`top_code`] / [`bottom_code`].
#[derive(Debug, Clone, PartialEq, Eq)]
struct RawCandidate {
    n: usize,
    initial: StateRef,
    targets: Vec<u32>,
    priorities: Vec<Priority>,
}

impl RawCandidate {
    fn is_deterministic(&self) -> bool {
        let n = self.n;
        self.targets
            .iter()
            .all(|&c| c >= top_code(n) || c.count_ones() == 1)
    }

    fn table_size(&self) -> usize {
        let n = self.n;
        self.targets
            .iter()
            .map(|&c| if c >= top_code(n) { 1 } else { c.count_ones() as usize })
            .sum()
    }

    fn materialize(&self, spec: &SearchSpec) -> ParityAutomaton {
        let m = spec.alphabet.len();
        let mut aut = ParityAutomaton::new(spec.alphabet.clone(), self.n, spec.target_kind);
        aut.set_initial(self.initial);
        for (slot, &code) in self.targets.iter().enumerate() {
            let target = if code == top_code(self.n) {
                Target::Top
            } else if code == bottom_code(self.n) {
                Target::Bottom
            } else {
                Target::states((0..self.n).filter(|&i| code >> i & 1 == 1))
            };
            aut.set_transition(slot / m, slot % m, target);
        }
        for (q, &p) in self.priorities.iter().enumerate() {
            aut.set_priority(q, p);
        }
        aut
    }

    /// Key ordering isomorphic copies: targets in slot order, then
    /// priorities.
    fn key(&self) -> Vec<u32> {
        self.targets
            .iter()
            .copied()
            .chain(self.priorities.iter().copied())
            .collect()
    }
}

/// Number of states a target newly discovers when `discovered` states are
/// known, or `None` if the target breaks canonical numbering.
fn new_block(code: u32, n: usize, discovered: usize) -> Option<usize> {
    if code >= top_code(n) {
        return Some(0);
    }
    let high = code >> discovered;
    if high & (high + 1) != 0 {
        return None;
    }
    let j = high.count_ones() as usize;
    (discovered + j <= n).then_some(j)
}

fn is_canonical(n: usize, m: usize, targets: &[u32]) -> bool {
    let mut discovered = 1;
    for (slot, &code) in targets.iter().enumerate() {
        if slot / m >= discovered {
            return false;
        }
        match new_block(code, n, discovered) {
            Some(j) => discovered += j,
            None => return false,
        }
    }
    discovered == n
}

/// Lazily walks the canonical structures for `n` states in order.
struct StructureIter {
    n: usize,
    m: usize,
    /// Options available when `d` states are discovered, indexed by `d`.
    options: Vec<Vec<u32>>,
    choice: Vec<usize>,
    discovered: Vec<usize>,
    started: bool,
    done: bool,
}

impl StructureIter {
    fn new(n: usize, m: usize, deterministic_only: bool) -> Self {
        let options = (0..=n)
            .map(|d| {
                let mut opts: Vec<u32> = if deterministic_only {
                    (0..n.min(d + 1)).map(|i| 1u32 << i).collect()
                } else {
                    (1..top_code(n))
                        .filter(|&c| d > 0 && new_block(c, n, d).is_some())
                        .collect()
                };
                opts.extend([top_code(n), bottom_code(n)]);
                opts
            })
            .collect();
        let slots = n * m;
        StructureIter {
            n,
            m,
            options,
            choice: vec![0; slots],
            discovered: vec![1; slots + 1],
            started: false,
            done: n == 0,
        }
    }

    fn current(&self) -> Vec<u32> {
        self.choice
            .iter()
            .enumerate()
            .map(|(s, &c)| self.options[self.discovered[s]][c])
            .collect()
    }
}

impl Iterator for StructureIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let slots = self.n * self.m;
        let mut s;
        if self.started {
            s = slots - 1;
            self.choice[s] += 1;
        } else {
            self.started = true;
            s = 0;
        }
        loop {
            if s == slots {
                if self.discovered[slots] == self.n {
                    return Some(self.current());
                }
                s -= 1;
                self.choice[s] += 1;
                continue;
            }
            let d = self.discovered[s];
            let dead = s / self.m >= d || self.choice[s] >= self.options[d].len();
            if dead {
                if s == 0 {
                    self.done = true;
                    return None;
                }
                s -= 1;
                self.choice[s] += 1;
                continue;
            }
            let code = self.options[d][self.choice[s]];
            let j = new_block(code, self.n, d).expect("options are canonical");
            self.discovered[s + 1] = d + j;
            s += 1;
            if s < slots {
                self.choice[s] = 0;
            }
        }
    }
}

/// Priority vectors over `lo..=level` of length `n` whose maximum is
/// `level`, in lexicographic order.
fn priority_vectors(n: usize, lo: Priority, level: Priority) -> Vec<Vec<Priority>> {
    let mut out = Vec::new();
    let mut v = vec![lo; n];
    loop {
        if v.contains(&level) {
            out.push(v.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < level {
                v[i] += 1;
                break;
            }
            v[i] = lo;
        }
    }
}

/// Whether no relabelling fixing state 0 gives a canonical structure with a
/// smaller key.
fn is_orbit_representative(raw: &RawCandidate, m: usize) -> bool {
    let n = raw.n;
    // Deterministic structures have exactly one canonical numbering.
    if raw.is_deterministic() {
        return true;
    }
    let key = raw.key();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut perm = vec![0; n];
    let mut smaller = false;
    permutations(&mut rest, 0, &mut |tail| {
        if smaller {
            return;
        }
        perm[0] = 0;
        perm[1..].copy_from_slice(tail);
        let relabel = relabel(raw, m, &perm);
        if relabel.key() < key && is_canonical(n, m, &relabel.targets) {
            smaller = true;
        }
    });
    !smaller
}

fn permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Copy of `raw` with state `q` renamed `perm[q]`.
fn relabel(raw: &RawCandidate, m: usize, perm: &[usize]) -> RawCandidate {
    let n = raw.n;
    let mut targets = vec![0; raw.targets.len()];
    let mut priorities = vec![0; n];
    for q in 0..n {
        priorities[perm[q]] = raw.priorities[q];
        for a in 0..m {
            let code = raw.targets[q * m + a];
            targets[perm[q] * m + a] = if code >= top_code(n) {
                code
            } else {
                (0..n)
                    .filter(|&i| code >> i & 1 == 1)
                    .map(|i| 1u32 << perm[i])
                    .sum()
            };
        }
    }
    RawCandidate {
        n,
        initial: raw.initial,
        targets,
        priorities,
    }
}

/// Unbudgeted stream of canonical candidates meeting the spec.
struct RawStream {
    m: usize,
    max_n: usize,
    lo: Priority,
    hi: Priority,
    deterministic_only: bool,
    transition_bound: Option<usize>,
    n: usize,
    level: Priority,
    structures: Option<StructureIter>,
    current: Option<Vec<u32>>,
    vectors: Vec<Vec<Priority>>,
    vector_index: usize,
    sink_initials: Vec<StateRef>,
}

impl RawStream {
    fn new(spec: &SearchSpec) -> Self {
        let (lo, hi) = spec.priority_range();
        RawStream {
            m: spec.alphabet.len(),
            max_n: spec.max_states(),
            lo,
            hi,
            deterministic_only: spec.deterministic_only,
            transition_bound: (spec.measure == Measure::Transitions).then_some(spec.bound),
            n: 0,
            level: lo,
            structures: None,
            current: None,
            vectors: Vec::new(),
            vector_index: 0,
            sink_initials: vec![StateRef::Bottom, StateRef::Top],
        }
    }

    fn next_unfiltered(&mut self) -> Option<RawCandidate> {
        if let Some(initial) = self.sink_initials.pop() {
            return Some(RawCandidate {
                n: 0,
                initial,
                targets: Vec::new(),
                priorities: Vec::new(),
            });
        }
        if self.n > self.max_n {
            return None;
        }
        loop {
            if let Some(targets) = &self.current {
                if self.vector_index < self.vectors.len() {
                    let priorities = self.vectors[self.vector_index].clone();
                    self.vector_index += 1;
                    return Some(RawCandidate {
                        n: self.n,
                        initial: StateRef::Regular(0),
                        targets: targets.clone(),
                        priorities,
                    });
                }
            }
            if let Some(next) = self.structures.as_mut().and_then(Iterator::next) {
                self.current = Some(next);
                self.vector_index = 0;
                continue;
            }
            // Advance to the next (n, level) block.
            if self.structures.is_some() && self.level < self.hi {
                self.level += 1;
            } else {
                if self.structures.is_some() || self.n == 0 {
                    self.n += 1;
                }
                self.level = self.lo;
                if self.n > self.max_n {
                    return None;
                }
            }
            self.structures = Some(StructureIter::new(self.n, self.m, self.deterministic_only));
            self.vectors = priority_vectors(self.n, self.lo, self.level);
            self.current = None;
        }
    }
}

impl Iterator for RawStream {
    type Item = RawCandidate;

    fn next(&mut self) -> Option<RawCandidate> {
        loop {
            let raw = self.next_unfiltered()?;
            if let Some(k) = self.transition_bound {
                if raw.table_size() > k {
                    continue;
                }
            }
            if !self.deterministic_only && !is_orbit_representative(&raw, self.m) {
                continue;
            }
            return Some(raw);
        }
    }
}

/// One element of the candidate stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidate {
    Automaton(ParityAutomaton),
    /// The budget ran out; no further candidates follow.
    Truncated,
}

/// The canonical candidates for `spec` in order, ending with
/// [`Candidate::Truncated`] if the budget cuts the stream short.
pub fn enumerate_candidates(spec: &SearchSpec) -> Result<impl Iterator<Item = Candidate>> {
    spec.validate()?;
    let spec = spec.clone();
    let mut raw = RawStream::new(&spec).peekable();
    let start = Instant::now();
    let mut emitted = 0u64;
    let mut finished = false;
    Ok(std::iter::from_fn(move || {
        if finished {
            return None;
        }
        raw.peek()?;
        let over_count = spec.budget.max_candidates.is_some_and(|c| emitted >= c);
        let over_time = spec.budget.max_duration.is_some_and(|d| start.elapsed() >= d);
        if over_count || over_time {
            finished = true;
            return Some(Candidate::Truncated);
        }
        emitted += 1;
        raw.next().map(|r| Candidate::Automaton(r.materialize(&spec)))
    }))
}

/// Lassos with known reference verdicts, shortest first.
struct LassoSuite {
    words: Vec<(Vec<Symbol>, Vec<Symbol>, bool)>,
}

impl LassoSuite {
    fn new(reference: &ParityAutomaton) -> Self {
        let m = reference.alphabet().len();
        let mut total = 1;
        while count_lassos(m, total + 1) <= MAX_PREFILTER_LASSOS {
            total += 1;
        }
        let mut words = Vec::new();
        for len in 1..=total {
            for period_len in 1..=len {
                for word in all_words(m, len) {
                    let (u, v) = word.split_at(len - period_len);
                    let verdict = accepts_symbols(reference, u, v);
                    words.push((u.to_vec(), v.to_vec(), verdict));
                }
            }
        }
        LassoSuite { words }
    }
}

/// Number of lassos with `|u| + |v| <= total` over `m` symbols.
fn count_lassos(m: usize, total: usize) -> usize {
    (1..=total).map(|t| t * m.pow(t as u32)).sum()
}

fn all_words(m: usize, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
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
    out
}

/// Acceptance of `u·v^ω` by a deterministic raw candidate.
fn deterministic_accepts(raw: &RawCandidate, m: usize, u: &[Symbol], v: &[Symbol]) -> bool {
    let n = raw.n;
    let (top, bottom) = (n, n + 1);
    let step = |s: usize, a: Symbol| -> usize {
        if s >= n {
            return s;
        }
        let code = raw.targets[s * m + a];
        if code == top_code(n) {
            top
        } else if code == bottom_code(n) {
            bottom
        } else {
            code.trailing_zeros() as usize
        }
    };
    let mut s = match raw.initial {
        StateRef::Regular(q) => q,
        StateRef::Top => top,
        StateRef::Bottom => bottom,
    };
    for &a in u {
        s = step(s, a);
    }
    // Iterations of v, keyed by the state at their start.
    let mut first_seen = [usize::MAX; MAX_SEARCH_STATES];
    let mut iteration_max: Vec<Priority> = Vec::with_capacity(n + 1);
    loop {
        if s >= n {
            return s == top;
        }
        if first_seen[s] != usize::MAX {
            let max = iteration_max[first_seen[s]..].iter().max().copied();
            return max.expect("cycle is non-empty") % 2 == 0;
        }
        first_seen[s] = iteration_max.len();
        let mut max = 0;
        for &a in v {
            if s >= n {
                return s == top;
            }
            max = max.max(raw.priorities[s]);
            s = step(s, a);
        }
        iteration_max.push(max);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidates taken from the stream.
    pub enumerated: u64,
    /// Candidates rejected by a lasso on which they disagree with the
    /// reference.
    pub prefiltered: u64,
    /// Candidates checked with the full game-based equivalence.
    pub full_checks: u64,
    pub lasso_suite_size: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found(ParityAutomaton),
    None,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizeOutcome {
    pub result: SearchResult,
    pub stats: SearchStats,
    /// False iff the reference is deterministic, so its GFG-ness is known.
    pub reference_trusted: bool,
}

enum Check {
    Prefiltered,
    Rejected,
    Equivalent,
}

/// The first canonical candidate GFG-equivalent to `reference`.
///
/// A nondeterministic reference is trusted to be good-for-games. Candidates
/// are checked in windows in parallel; the committed answer is always the
/// earliest success in canonical order.
pub fn minimize(reference: &ParityAutomaton, spec: &SearchSpec) -> Result<MinimizeOutcome> {
    spec.validate()?;
    if reference.alphabet() != &spec.alphabet {
        return Err(Error::AlphabetMismatch {
            left: reference.alphabet().to_string(),
            right: spec.alphabet.to_string(),
        });
    }
    let start = Instant::now();
    let suite = LassoSuite::new(reference);
    let m = spec.alphabet.len();
    let mut stats = SearchStats {
        lasso_suite_size: suite.words.len(),
        ..Default::default()
    };
    let check = |raw: &RawCandidate| -> Result<Check> {
        let agrees = if raw.is_deterministic() {
            suite
                .words
                .iter()
                .all(|(u, v, want)| deterministic_accepts(raw, m, u, v) == *want)
        } else {
            let aut = raw.materialize(spec);
            suite
                .words
                .iter()
                .all(|(u, v, want)| accepts_symbols(&aut, u, v) == *want)
        };
        if !agrees {
            return Ok(Check::Prefiltered);
        }
        Ok(if gfg_equivalent(&raw.materialize(spec), reference)? {
            Check::Equivalent
        } else {
            Check::Rejected
        })
    };

    let mut stream = RawStream::new(spec).peekable();
    let result = loop {
        if stream.peek().is_none() {
            break SearchResult::None;
        }
        let over_time = spec.budget.max_duration.is_some_and(|d| start.elapsed() >= d);
        let allowance = spec
            .budget
            .max_candidates
            .map_or(WINDOW as u64, |c| c.saturating_sub(stats.enumerated).min(WINDOW as u64));
        if over_time || allowance == 0 {
            break SearchResult::Inconclusive;
        }
        let window: Vec<RawCandidate> = stream.by_ref().take(allowance as usize).collect();
        let verdicts: Vec<Check> = window.par_iter().map(check).collect::<Result<_>>()?;
        let hit = verdicts.iter().position(|c| matches!(c, Check::Equivalent));
        let counted = hit.map_or(window.len(), |i| i + 1);
        stats.enumerated += counted as u64;
        for c in &verdicts[..counted] {
            match c {
                Check::Prefiltered => stats.prefiltered += 1,
                _ => stats.full_checks += 1,
            }
        }
        if let Some(i) = hit {
            break SearchResult::Found(window[i].materialize(spec));
        }
    };
    stats.elapsed = start.elapsed();
    Ok(MinimizeOutcome {
        result,
        stats,
        reference_trusted: !reference.is_deterministic(),
    })
}
