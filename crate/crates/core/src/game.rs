//! Explicit two-player max-parity games solved with Zielonka's recursive
//! algorithm. Player `Even` wins a play iff the highest priority seen
//! infinitely often is even.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }
}

/// Game graph. Every node must have at least one successor.
#[derive(Debug, Clone, Default)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, owner: Player, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
        self.pred[to].push(from);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Winning region of player `Even` (indexed by node).
    pub fn solve(&self) -> Vec<bool> {
        debug_assert!(self.succ.iter().all(|s| !s.is_empty()), "dead end in game");
        let all = vec![true; self.len()];
        let [even, _] = self.solve_rec(all);
        even
    }

    fn solve_rec(&self, region: Vec<bool>) -> [Vec<bool>; 2] {
        let n = self.len();
        let Some(top) = (0..n).filter(|&v| region[v]).map(|v| self.priority[v]).max() else {
            return [vec![false; n], vec![false; n]];
        };
        let player = Player::of_priority(top);
        let target: Vec<bool> = (0..n)
            .map(|v| region[v] && self.priority[v] == top)
            .collect();
        let attracted = self.attractor(player, &region, target);
        let rest = minus(&region, &attracted);
        let mut sub = self.solve_rec(rest);
        let opp = index(player.opponent());
        if !sub[opp].iter().any(|&b| b) {
            let mut out = [vec![false; n], vec![false; n]];
            out[index(player)] = region;
            return out;
        }
        let opp_region = std::mem::take(&mut sub[opp]);
        let b = self.attractor(player.opponent(), &region, opp_region);
        let rest = minus(&region, &b);
        let mut out = self.solve_rec(rest);
        for v in 0..n {
            if b[v] {
                out[opp][v] = true;
            }
        }
        out
    }

    /// Attractor of `player` to `target` inside the sub-arena `region`.
    fn attractor(&self, player: Player, region: &[bool], mut target: Vec<bool>) -> Vec<bool> {
        let n = self.len();
        // Remaining escape count for opponent nodes.
        let mut escapes: Vec<usize> = (0..n)
            .map(|v| self.succ[v].iter().filter(|&&w| region[w]).count())
            .collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| target[v]).collect();
        while let Some(v) = queue.pop() {
            for &u in &self.pred[v] {
                if !region[u] || target[u] {
                    continue;
                }
                let pulled = if self.owner[u] == player {
                    true
                } else {
                    escapes[u] -= 1;
                    escapes[u] == 0
                };
                if pulled {
                    target[u] = true;
                    queue.push(u);
                }
            }
        }
        target
    }
}

fn index(p: Player) -> usize {
    match p {
        Player::Even => 0,
        Player::Odd => 1,
    }
}

fn minus(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| x && !y).collect()
}
