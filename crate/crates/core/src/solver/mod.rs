//! Exhaustive minimum-space search for both games on small graphs, and the
//! named heuristic strategies.

mod crossover;
mod heuristics;

use std::collections::VecDeque;
use std::hash::Hash;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::engine::{Config, GameKind, Mode, PebblingStrategy, Rules};
use crate::graph::Dag;
use crate::par::Exec;

pub use crossover::{crossover_alpha, CrossoverReport};
pub use heuristics::{
    depth_reducing_set, genpeb, p1_constant_space, p2_linear_time, sweep, trim_dead_pebbles, wavefront_cylinder,
    GenPebReport,
};

/// Largest graph the bitset search supports.
pub const MAX_NODES: usize = 128;
const MAX_TARGETS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_pebbles: usize,
    pub max_states: usize,
    pub max_seconds: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_pebbles: 16, max_states: 20_000_000, max_seconds: 600.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph has {0} nodes; the exhaustive solver handles at most {MAX_NODES}")]
    TooLarge(usize),
    #[error("{0} targets; the exhaustive solver handles at most {MAX_TARGETS}")]
    TooManyTargets(usize),
    #[error("target {0} out of range")]
    BadTarget(usize),
    #[error("budget exceeded ({reason}); proven: no strategy with at most {proven} pebbles")]
    BudgetExceeded { reason: String, proven: usize },
    #[error("no strategy within {0} pebbles")]
    Infeasible(usize),
    #[error("bad parameter: {0}")]
    BadParam(String),
}

impl SolveError {
    pub fn is_budget(&self) -> bool {
        matches!(self, SolveError::BudgetExceeded { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Minimum peak for the standard game, minimum max(m, peak) for the magic game.
    pub space: usize,
    pub witness: PebblingStrategy,
    /// States stored over all deepening rounds.
    pub states: usize,
}

/// Bitset view of a graph for the search.
struct Board {
    n: usize,
    preds: Vec<u128>,
    target_bit: Vec<u64>,
    goal: u64,
}

impl Board {
    fn new(d: &Dag, targets: &[usize]) -> Result<Self, SolveError> {
        let n = d.node_count();
        if n > MAX_NODES {
            return Err(SolveError::TooLarge(n));
        }
        let mut targets = targets.to_vec();
        targets.sort_unstable();
        targets.dedup();
        if targets.len() > MAX_TARGETS {
            return Err(SolveError::TooManyTargets(targets.len()));
        }
        let mut target_bit = vec![0u64; n];
        for (i, &t) in targets.iter().enumerate() {
            if t >= n {
                return Err(SolveError::BadTarget(t));
            }
            target_bit[t] = 1 << i;
        }
        let preds = (0..n).map(|v| d.preds(v).iter().fold(0u128, |m, &u| m | (1 << u))).collect();
        let goal = if targets.len() == 64 { u64::MAX } else { (1u64 << targets.len()) - 1 };
        Ok(Board { n, preds, target_bit, goal })
    }

    fn visits(&self, mask: u128) -> u64 {
        bits(mask).fold(0, |acc, v| acc | self.target_bit[v])
    }

    /// Unpebbled nodes whose predecessors are all in `pebbled`.
    fn addable(&self, pebbled: u128) -> Vec<usize> {
        (0..self.n).filter(|&v| pebbled & (1 << v) == 0 && self.preds[v] & !pebbled == 0).collect()
    }

    fn preds_of(&self, nodes: u128) -> u128 {
        bits(nodes).fold(0, |acc, v| acc | self.preds[v])
    }
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

fn count(mask: u128) -> usize {
    mask.count_ones() as usize
}

/// Calls `f` with every sub-multiset of `items` of size `min..=max`, as
/// index lists into `items`.
fn combinations(len: usize, min: usize, max: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, len: usize, min: usize, max: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() >= min {
            f(cur);
        }
        if cur.len() == max {
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, min, max, cur, f);
            cur.pop();
        }
    }
    go(0, len, min, max, &mut Vec::new(), f);
}

/// Every way to drop exactly `excess` pebbles from `from`, avoiding `keep`.
fn drop_excess(from: u128, keep: u128, excess: usize, out: &mut impl FnMut(u128)) {
    let candidates: Vec<usize> = bits(from & !keep).collect();
    if excess == 0 {
        out(0);
        return;
    }
    if candidates.len() < excess {
        return;
    }
    combinations(candidates.len(), excess, excess, &mut |idx| {
        out(idx.iter().fold(0u128, |m, &i| m | (1 << candidates[i])));
    });
}

struct Limits {
    start: Instant,
    max_time: Duration,
    max_states: usize,
    used_states: usize,
}

impl Limits {
    fn new(budget: &SearchBudget) -> Self {
        Limits {
            start: Instant::now(),
            max_time: Duration::from_secs_f64(budget.max_seconds.max(0.0)),
            max_states: budget.max_states,
            used_states: 0,
        }
    }

    fn check(&self, in_round: usize) -> Result<(), String> {
        if self.used_states + in_round > self.max_states {
            return Err(format!("more than {} states", self.max_states));
        }
        if self.start.elapsed() > self.max_time {
            return Err(format!("more than {:.1} s", self.max_time.as_secs_f64()));
        }
        Ok(())
    }
}

/// Layered breadth-first search; each layer's successors are generated
/// through `exec`. Returns the path from `start` to the first goal state.
fn bfs<S, F, G>(start: S, succ: F, is_goal: G, exec: Exec, limits: &mut Limits) -> Result<Option<Vec<S>>, String>
where
    S: Copy + Eq + Hash + Send + Sync,
    F: Fn(&S) -> Vec<S> + Sync + Send,
    G: Fn(&S) -> bool,
{
    let mut parent: FxHashMap<S, S> = FxHashMap::default();
    parent.insert(start, start);
    let path_to = |parent: &FxHashMap<S, S>, mut s: S| {
        let mut path = vec![s];
        while parent[&s] != s {
            s = parent[&s];
            path.push(s);
        }
        path.reverse();
        path
    };
    if is_goal(&start) {
        limits.used_states += 1;
        return Ok(Some(vec![start]));
    }
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        if let Err(e) = limits.check(parent.len()) {
            limits.used_states += parent.len();
            return Err(e);
        }
        let expanded = exec.flat_map(&frontier, |s| succ(s).into_iter().map(|t| (t, *s)).collect());
        let mut next = Vec::new();
        for (t, p) in expanded {
            if parent.contains_key(&t) {
                continue;
            }
            parent.insert(t, p);
            if is_goal(&t) {
                limits.used_states += parent.len();
                return Ok(Some(path_to(&parent, t)));
            }
            next.push(t);
        }
        frontier = next;
    }
    limits.used_states += parent.len();
    Ok(None)
}

fn standard_successors(b: &Board, rules: Rules, k: usize, mask: u128, vis: u64) -> Vec<(u128, u64)> {
    let mut out = Vec::new();
    let addable = b.addable(mask);
    let mut push = |next: u128| out.push((next, vis | b.visits(next)));
    let max_new = if rules.mode == Mode::Sequential { 1 } else { k };
    // lazy removal: only drop pebbles when the new ones would not fit
    combinations(addable.len(), 1, max_new.min(addable.len()), &mut |idx| {
        let new = idx.iter().fold(0u128, |m, &i| m | (1 << addable[i]));
        let grown = mask | new;
        let excess = count(grown).saturating_sub(k);
        if excess > count(mask) {
            return;
        }
        let keep = if rules.slides { 0 } else { b.preds_of(new) };
        drop_excess(mask, keep, excess, &mut |drop| push(grown & !drop));
    });
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct MagicState {
    black: u128,
    magic: u128,
    used: u32,
    vis: u64,
}

fn magic_successors(b: &Board, rules: Rules, k: usize, budget: usize, s: &MagicState) -> Vec<MagicState> {
    let pebbled = s.black | s.magic;
    let mut out = Vec::new();
    // candidates: (node, is_magic)
    let mut items: Vec<(usize, bool)> = b.addable(pebbled).into_iter().map(|v| (v, false)).collect();
    let left = budget.saturating_sub(s.used as usize);
    if left > 0 {
        items.extend((0..b.n).filter(|&v| pebbled & (1 << v) == 0).map(|v| (v, true)));
    }
    let max_new = if rules.mode == Mode::Sequential { 1 } else { k };
    combinations(items.len(), 1, max_new.min(items.len()), &mut |idx| {
        let (mut nb, mut nm) = (0u128, 0u128);
        for &i in idx {
            let (v, is_magic) = items[i];
            let bit = 1u128 << v;
            if (nb | nm) & bit != 0 {
                return;
            }
            if is_magic {
                nm |= bit;
            } else {
                nb |= bit;
            }
        }
        let placed = count(nm);
        if placed > left {
            return;
        }
        let grown = pebbled | nb | nm;
        let excess = count(grown).saturating_sub(k);
        if excess > count(pebbled) {
            return;
        }
        let keep = if rules.slides { 0 } else { b.preds_of(nb) };
        drop_excess(pebbled, keep, excess, &mut |drop| {
            let black = (s.black | nb) & !drop;
            let magic = (s.magic | nm) & !drop;
            out.push(MagicState { black, magic, used: s.used + placed as u32, vis: s.vis | b.visits(black | magic) });
        });
    });
    out
}

fn mask_config(n: usize, black: u128, magic: u128) -> Config {
    let list = |m: u128| bits(m).collect::<Vec<_>>();
    Config::from_nodes(n, &list(black), &list(magic))
}

/// Minimum peak pebble count over all valid standard strategies, by
/// iterative deepening on the pebble count.
pub fn min_space_standard(
    d: &Dag,
    targets: &[usize],
    rules: Rules,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<Solution, SolveError> {
    let b = Board::new(d, targets)?;
    let mut limits = Limits::new(budget);
    let cap = budget.max_pebbles.min(b.n);
    for k in 0..=cap {
        let found = bfs(
            (0u128, 0u64),
            |&(m, v)| standard_successors(&b, rules, k, m, v),
            |&(_, v)| v == b.goal,
            exec,
            &mut limits,
        )
        .map_err(|reason| SolveError::BudgetExceeded { reason, proven: k.saturating_sub(1) })?;
        if let Some(path) = found {
            let configs = path.iter().map(|&(m, _)| mask_config(b.n, m, 0)).collect();
            let witness = PebblingStrategy { kind: GameKind::Standard, node_count: b.n, configs, magic_bound: None };
            return Ok(Solution { space: k, witness, states: limits.used_states });
        }
    }
    if cap < b.n {
        return Err(SolveError::BudgetExceeded { reason: format!("pebble cap {cap}"), proven: cap });
    }
    Err(SolveError::Infeasible(cap))
}

/// Minimum of max(magic pebbles used, peak pebbles) over black-magic
/// strategies with at most `mbound` magic pebbles.
pub fn min_space_magic(
    d: &Dag,
    targets: &[usize],
    mbound: usize,
    rules: Rules,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<Solution, SolveError> {
    let b = Board::new(d, targets)?;
    let mut limits = Limits::new(budget);
    let cap = budget.max_pebbles.min(b.n);
    let start = MagicState { black: 0, magic: 0, used: 0, vis: 0 };
    for k in 0..=cap {
        let spend = mbound.min(k);
        let found = bfs(start, |s| magic_successors(&b, rules, k, spend, s), |s| s.vis == b.goal, exec, &mut limits)
            .map_err(|reason| SolveError::BudgetExceeded { reason, proven: k.saturating_sub(1) })?;
        if let Some(path) = found {
            let configs = path.iter().map(|s| mask_config(b.n, s.black, s.magic)).collect();
            let witness =
                PebblingStrategy { kind: GameKind::Magic, node_count: b.n, configs, magic_bound: Some(mbound) };
            return Ok(Solution { space: k, witness, states: limits.used_states });
        }
    }
    if cap < b.n {
        return Err(SolveError::BudgetExceeded { reason: format!("pebble cap {cap}"), proven: cap });
    }
    Err(SolveError::Infeasible(cap))
}

#[derive(Debug, Clone)]
pub struct SustainedSolution {
    /// Fewest steps holding at least `lambda` pebbles.
    pub count: usize,
    pub witness: PebblingStrategy,
    pub states: usize,
}

/// Fewest steps with at least `lambda` pebbles over all valid standard
/// strategies that never exceed `max_pebbles` (0-1 shortest path over
/// configuration × visited-targets states).
pub fn min_sustained_standard(
    d: &Dag,
    targets: &[usize],
    rules: Rules,
    max_pebbles: usize,
    lambda: usize,
    budget: &SearchBudget,
) -> Result<SustainedSolution, SolveError> {
    let b = Board::new(d, targets)?;
    let limits = Limits::new(budget);
    let mut dist: FxHashMap<(u128, u64), (usize, (u128, u64))> = FxHashMap::default();
    let start = (0u128, 0u64);
    dist.insert(start, (0, start));
    let mut queue = VecDeque::from([(0usize, start)]);
    let max_new = if rules.mode == Mode::Sequential { 1 } else { max_pebbles };
    while let Some((cost, state)) = queue.pop_front() {
        if dist[&state].0 < cost {
            continue;
        }
        let (mask, vis) = state;
        if vis == b.goal {
            let mut path = vec![state];
            let mut s = state;
            while dist[&s].1 != s {
                s = dist[&s].1;
                path.push(s);
            }
            path.reverse();
            let configs = path.iter().map(|&(m, _)| mask_config(b.n, m, 0)).collect();
            let witness = PebblingStrategy { kind: GameKind::Standard, node_count: b.n, configs, magic_bound: None };
            return Ok(SustainedSolution { count: cost, witness, states: dist.len() });
        }
        limits
            .check(dist.len())
            .map_err(|reason| SolveError::BudgetExceeded { reason, proven: 0 })?;
        let addable = b.addable(mask);
        let kept: Vec<usize> = bits(mask).collect();
        // any subset of kept pebbles plus up to max_new new ones
        let mut nexts = Vec::new();
        combinations(addable.len(), 0, max_new.min(addable.len()), &mut |idx| {
            let new = idx.iter().fold(0u128, |m, &i| m | (1 << addable[i]));
            let keep_needed = if rules.slides { 0 } else { b.preds_of(new) };
            let room = max_pebbles.saturating_sub(idx.len());
            for drop_mask in 0u64..(1u64 << kept.len()) {
                let retained = kept
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| drop_mask & (1 << j) == 0)
                    .fold(0u128, |m, (_, &v)| m | (1 << v));
                if count(retained) > room || keep_needed & !retained & mask != 0 {
                    continue;
                }
                let next = retained | new;
                if next != mask {
                    nexts.push(next);
                }
            }
        });
        for next in nexts {
            let step = usize::from(count(next) >= lambda);
            let ns = (next, vis | b.visits(next));
            let nc = cost + step;
            if dist.get(&ns).is_none_or(|&(c, _)| nc < c) {
                dist.insert(ns, (nc, state));
                if step == 0 {
                    queue.push_front((nc, ns));
                } else {
                    queue.push_back((nc, ns));
                }
            }
        }
    }
    Err(SolveError::Infeasible(max_pebbles))
}

/// Result for one target subset of the incremental-hardness check.
#[derive(Debug, Clone)]
pub struct SubsetReport {
    pub subset: Vec<usize>,
    /// |C| − 1
    pub magic_budget: usize,
    pub magic_space: Result<usize, SolveError>,
    /// magic space ≥ |T|
    pub meets_bound: bool,
}

/// For each target subset C with |C| in `sizes` and |C| > `mbound`,
/// computes the magic space with |C| − 1 magic pebbles and compares it to
/// |T|. Subsets are solved concurrently.
pub fn incremental_hardness_check(
    d: &Dag,
    mbound: usize,
    sizes: RangeInclusive<usize>,
    rules: Rules,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<Vec<SubsetReport>, SolveError> {
    let targets = d.targets();
    if d.node_count() > MAX_NODES {
        return Err(SolveError::TooLarge(d.node_count()));
    }
    if targets.len() > 20 {
        return Err(SolveError::TooManyTargets(targets.len()));
    }
    let mut subsets = Vec::new();
    for mask in 1u32..(1 << targets.len()) {
        let c: Vec<usize> = (0..targets.len()).filter(|i| mask & (1 << i) != 0).map(|i| targets[i]).collect();
        if c.len() > mbound && sizes.contains(&c.len()) {
            subsets.push(c);
        }
    }
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(exec.map(&subsets, |c| {
        let magic_budget = c.len() - 1;
        let magic_space =
            min_space_magic(d, c, magic_budget, rules, budget, Exec::Sequential).map(|s| s.space);
        let meets_bound = matches!(magic_space, Ok(s) if s >= targets.len());
        SubsetReport { subset: c.clone(), magic_budget, magic_space, meets_bound }
    }))
}
