//! Small explicit digraph used by the acceptance, emptiness and strategy
//! checks. Nodes are dense indices.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

#[derive(Debug, Clone, Default)]
pub(crate) struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(node_count: usize) -> Self {
        Digraph {
            succ: vec![Vec::new(); node_count],
        }
    }

    #[cfg(test)]
    pub fn from_successors(succ: Vec<Vec<usize>>) -> Self {
        Digraph { succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    /// Nodes reachable from `start` (inclusive).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(n) = stack.pop() {
            for &m in &self.succ[n] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen
    }

    /// Strongly connected components of the subgraph induced by `allowed`
    /// that contain at least one cycle (more than one node, or a self-loop).
    pub fn cyclic_components(&self, allowed: &[bool]) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.len(), 0);
        for _ in 0..self.len() {
            g.add_node(());
        }
        for (from, succ) in self.succ.iter().enumerate() {
            if !allowed[from] {
                continue;
            }
            for &to in succ {
                if allowed[to] {
                    g.add_edge(NodeIndex::new(from), NodeIndex::new(to), ());
                }
            }
        }
        tarjan_scc(&g)
            .into_iter()
            .filter(|scc| {
                if scc.len() > 1 {
                    return true;
                }
                let n = scc[0].index();
                allowed[n] && self.succ[n].contains(&n)
            })
            .map(|scc| scc.into_iter().map(NodeIndex::index).collect())
            .collect()
    }

    /// Whether some cycle inside `allowed ∩ reachable` has maximal priority
    /// exactly `p`, for some even (`want_even`) or odd `p`.
    ///
    /// Candidate maxima are tried top-down: restricting to nodes of priority
    /// at most `p` and asking for a cyclic component that touches `p`.
    pub fn has_cycle_with_max_parity(
        &self,
        reachable: &[bool],
        priority: impl Fn(usize) -> u32,
        want_even: bool,
    ) -> bool {
        let mut candidates: Vec<u32> = (0..self.len())
            .filter(|&n| reachable[n])
            .map(&priority)
            .filter(|p| (p % 2 == 0) == want_even)
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        for &p in candidates.iter().rev() {
            let allowed: Vec<bool> = (0..self.len())
                .map(|n| reachable[n] && priority(n) <= p)
                .collect();
            if self
                .cyclic_components(&allowed)
                .iter()
                .any(|scc| scc.iter().any(|&n| priority(n) == p))
            {
                return true;
            }
        }
        false
    }
}
