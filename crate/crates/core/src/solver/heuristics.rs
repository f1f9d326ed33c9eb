//! Named strategies: cylinder wavefront, keep-everything sweep, the two
//! crossover strategies and GenPeb.

use crate::constructions::Crossover;
use crate::engine::{Config, PebblingStrategy};
use crate::graph::Dag;

use super::SolveError;

/// Records configurations as a strategy is simulated.
struct Recorder {
    n: usize,
    cur: Vec<bool>,
    steps: Vec<Vec<usize>>,
}

impl Recorder {
    fn new(n: usize) -> Self {
        Recorder { n, cur: vec![false; n], steps: Vec::new() }
    }

    fn commit(&mut self) {
        let snapshot = (0..self.n).filter(|&v| self.cur[v]).collect();
        self.steps.push(snapshot);
    }

    fn place(&mut self, v: usize) -> &mut Self {
        self.cur[v] = true;
        self
    }

    fn remove(&mut self, v: usize) -> &mut Self {
        self.cur[v] = false;
        self
    }

    fn finish(self) -> PebblingStrategy {
        PebblingStrategy::standard(self.n, &self.steps)
    }
}

/// Sweeps a full level of h pebbles up the 2h levels of `cylinder(h)`:
/// place level 0, then move every pebble up one level per parallel step.
pub fn wavefront_cylinder(h: usize) -> PebblingStrategy {
    let steps: Vec<Vec<usize>> = (0..2 * h).map(|i| (i * h..(i + 1) * h).collect()).collect();
    PebblingStrategy::standard(2 * h * h, &steps)
}

/// Pebbles every node in index order, one per move, never removing.
pub fn sweep(d: &Dag) -> PebblingStrategy {
    let n = d.node_count();
    let steps: Vec<Vec<usize>> = (1..=n).map(|k| (0..k).collect()).collect();
    PebblingStrategy::standard(n, &steps)
}

/// Walks the A path parking a pebble on every junction, then slides one
/// pebble along C. Uses (number of junctions) + 1 pebbles and about n moves.
pub fn p2_linear_time(x: &Crossover) -> PebblingStrategy {
    let mut r = Recorder::new(x.dag.node_count());
    let is_junction = |v: usize| x.junctions.binary_search(&v).is_ok();
    r.place(0).commit();
    for pos in 1..x.a_len {
        if !is_junction(pos - 1) {
            r.remove(pos - 1);
        }
        r.place(pos).commit();
    }
    let last_a = x.a_len - 1;
    if !is_junction(last_a) {
        r.remove(last_a);
    }
    r.place(x.a_len).commit();
    for c in x.a_len + 1..x.a_len + x.c_len {
        r.remove(c - 1).place(c).commit();
    }
    r.finish()
}

/// Constant-space strategy with `s1` pebbles: `s1 − 2` parked junctions, one
/// walker on A and one pebble advancing along C. A junction that is not
/// parked is re-derived by the walker, continuing forward when it can and
/// restarting from the source otherwise.
pub fn p1_constant_space(x: &Crossover, s1: usize) -> Result<PebblingStrategy, SolveError> {
    if s1 < 2 {
        return Err(SolveError::BadParam("P1 needs at least 2 pebbles".into()));
    }
    let mut r = Recorder::new(x.dag.node_count());
    let last_a = x.a_len - 1;
    let parked: Vec<usize> = x.junctions.iter().copied().filter(|&j| j != last_a).take(s1 - 2).collect();
    let is_parked = |v: usize| parked.binary_search(&v).is_ok();
    // the front pebble walks A, leaving parked pebbles behind
    r.place(0).commit();
    for pos in 1..x.a_len {
        if !is_parked(pos - 1) {
            r.remove(pos - 1);
        }
        r.place(pos).commit();
    }
    let mut front = last_a;
    let mut walker: Option<usize> = None;
    for (offset, cross) in x.cross_pred.iter().enumerate() {
        let c = x.a_len + offset;
        if let Some(j) = *cross {
            if !(is_parked(j) || j == front || walker == Some(j)) {
                let mut pos = match walker {
                    Some(w) if w < j => w,
                    Some(w) => {
                        if !is_parked(w) {
                            r.remove(w);
                        }
                        r.place(0).commit();
                        0
                    }
                    None => {
                        r.place(0).commit();
                        0
                    }
                };
                while pos < j {
                    if !is_parked(pos) {
                        r.remove(pos);
                    }
                    r.place(pos + 1).commit();
                    pos += 1;
                }
                walker = Some(j);
            }
        }
        r.remove(front).place(c).commit();
        front = c;
    }
    Ok(r.finish())
}

/// Drops every pebble after its last use: the last step before a successor
/// is placed, or the step it was placed if it is never used. Steps that no
/// longer change anything are removed.
pub fn trim_dead_pebbles(d: &Dag, strat: &PebblingStrategy) -> PebblingStrategy {
    let n = strat.node_count;
    let t = strat.configs.len();
    let mut configs = strat.configs.clone();
    for v in 0..n {
        // scan maximal runs where v is pebbled, per kind
        for magic in [false, true] {
            let has = |i: usize| {
                if magic {
                    strat.configs[i].magic.contains(v)
                } else {
                    strat.configs[i].black.contains(v)
                }
            };
            let mut i = 0;
            while i < t {
                if !has(i) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < t && has(i) {
                    i += 1;
                }
                let end = i; // exclusive
                let mut last = start;
                for j in start..end {
                    if j + 1 < t {
                        let next_black = &strat.configs[j + 1].black;
                        let prev_black = &strat.configs[j].black;
                        let used = d
                            .succs(v)
                            .iter()
                            .any(|&w| next_black.contains(w) && !prev_black.contains(w));
                        if used {
                            last = j;
                        }
                    }
                }
                for cfg in configs.iter_mut().take(end).skip(last + 1) {
                    if magic {
                        cfg.magic.set(v, false);
                    } else {
                        cfg.black.set(v, false);
                    }
                }
            }
        }
    }
    let mut out: Vec<Config> = Vec::with_capacity(t);
    for c in configs {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    PebblingStrategy { kind: strat.kind, node_count: n, configs: out, magic_bound: strat.magic_bound }
}

/// Greedy depth-reducing set: repeatedly removes the node lying on the most
/// longest paths until the longest path of G − S has at most
/// `target_depth` nodes. Returns S in removal order.
pub fn depth_reducing_set(d: &Dag, target_depth: usize) -> Vec<usize> {
    let n = d.node_count();
    let mut removed = vec![false; n];
    let mut set = Vec::new();
    loop {
        let mut to = vec![0usize; n];
        let mut ways_to = vec![0f64; n];
        for v in 0..n {
            if removed[v] {
                continue;
            }
            let best = d.preds(v).iter().filter(|&&u| !removed[u]).map(|&u| to[u]).max().unwrap_or(0);
            to[v] = best + 1;
            ways_to[v] = if best == 0 {
                1.0
            } else {
                d.preds(v).iter().filter(|&&u| !removed[u] && to[u] == best).map(|&u| ways_to[u]).sum()
            };
        }
        let depth = to.iter().copied().max().unwrap_or(0);
        if depth <= target_depth {
            return set;
        }
        let mut from = vec![0usize; n];
        let mut ways_from = vec![0f64; n];
        for v in (0..n).rev() {
            if removed[v] {
                continue;
            }
            let best = d.succs(v).iter().filter(|&&w| !removed[w]).map(|&w| from[w]).max().unwrap_or(0);
            from[v] = best + 1;
            ways_from[v] = if best == 0 {
                1.0
            } else {
                d.succs(v).iter().filter(|&&w| !removed[w] && from[w] == best).map(|&w| ways_from[w]).sum()
            };
        }
        let pick = (0..n)
            .filter(|&v| !removed[v] && to[v] + from[v] - 1 == depth)
            .max_by(|&a, &b| {
                (ways_to[a] * ways_from[a])
                    .partial_cmp(&(ways_to[b] * ways_from[b]))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(b.cmp(&a))
            })
            .expect("a longest path exists");
        removed[pick] = true;
        set.push(pick);
    }
}

#[derive(Debug, Clone)]
pub struct GenPebReport {
    pub strategy: PebblingStrategy,
    pub depth_reducing_set: Vec<usize>,
    /// max(1, ⌊n / log₂(n)^α⌋)
    pub depth_target: usize,
    /// 2αn·log₂log₂n / log₂n
    pub size_target: f64,
    /// false when the greedy set had to grow beyond `size_target`
    pub within_size_target: bool,
}

/// GenPeb: choose a depth-reducing set S, then process nodes in index order
/// in intervals of `depth_target` nodes. Each interval starts with a
/// balloon phase that re-derives, in parallel by depth, the discarded
/// predecessors it needs; the light phase then places its nodes one at a
/// time keeping only S and parents still needed in the interval. Pebbles
/// are dropped after their last use.
pub fn genpeb(d: &Dag, alpha: f64) -> GenPebReport {
    let n = d.node_count();
    let logn = (n.max(2) as f64).log2();
    let depth_target = ((n as f64 / logn.powf(alpha)).floor() as usize).max(1);
    let size_target = 2.0 * alpha * n as f64 * logn.log2().max(0.0) / logn;
    let s_set = depth_reducing_set(d, depth_target);
    let mut in_s = vec![false; n];
    for &v in &s_set {
        in_s[v] = true;
    }
    let mut r = Recorder::new(n);
    let g = depth_target;
    let mut start = 0;
    while start < n {
        let end = (start + g).min(n);
        // balloon phase
        let mut need = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for v in start..end {
            for &u in d.preds(v) {
                if u < start && !r.cur[u] && !need[u] {
                    need[u] = true;
                    stack.push(u);
                }
            }
        }
        let mut closure = vec![false; n];
        while let Some(u) = stack.pop() {
            if closure[u] {
                continue;
            }
            closure[u] = true;
            for &p in d.preds(u) {
                if !r.cur[p] && !closure[p] {
                    stack.push(p);
                }
            }
        }
        let members: Vec<usize> = (0..n).filter(|&u| closure[u]).collect();
        let mut layer = vec![0usize; n];
        for &u in &members {
            layer[u] = d.preds(u).iter().filter(|&&p| closure[p]).map(|&p| layer[p] + 1).max().unwrap_or(0);
        }
        let layers = members.iter().map(|&u| layer[u] + 1).max().unwrap_or(0);
        for l in 0..layers {
            for &u in members.iter().filter(|&&u| layer[u] == l) {
                r.place(u);
            }
            r.commit();
        }
        for &u in &members {
            if !need[u] {
                r.remove(u);
            }
        }
        // light phase
        for v in start..end {
            for (u, &kept) in in_s.iter().enumerate() {
                if r.cur[u] && !kept && !(v..end).any(|w| d.preds(w).contains(&u)) {
                    r.remove(u);
                }
            }
            r.place(v).commit();
        }
        start = end;
    }
    let strategy = trim_dead_pebbles(d, &r.finish());
    GenPebReport {
        strategy,
        within_size_target: (s_set.len() as f64) <= size_target,
        depth_reducing_set: s_set,
        depth_target,
        size_target,
    }
}
