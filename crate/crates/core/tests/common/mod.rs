#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pebble_core::engine::{Config, GameKind, PebblingStrategy};
use pebble_core::graph::Dag;

/// Random DAG on `2..=max_n` nodes with in-degree at most 2 and every sink a target.
pub fn small_dag(max_n: usize) -> impl Strategy<Value = Dag> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| random_dag(n, seed))
}

pub fn random_dag(n: usize, seed: u64) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let mut pool: Vec<usize> = (0..v).collect();
        pool.shuffle(&mut rng);
        let k = rng.gen_range(0..=2.min(v));
        let mut preds = pool[..k].to_vec();
        preds.sort_unstable();
        edges.extend(preds.into_iter().map(|u| (u, v)));
    }
    let mut has_succ = vec![false; n];
    edges.iter().for_each(|&(u, _)| has_succ[u] = true);
    let targets = (0..n).filter(|&v| !has_succ[v]).collect();
    Dag::from_edges(n, &edges, targets).expect("generated DAG is valid")
}

/// Random legal standard strategy: each step drops a random subset of
/// pebbles and places up to `max_new` nodes whose predecessors were pebbled.
pub fn random_strategy(d: &Dag, steps: usize, max_new: usize, seed: u64) -> PebblingStrategy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = d.node_count();
    let mut cur = vec![false; n];
    let mut configs = vec![Config::empty(n)];
    for _ in 0..steps {
        let mut addable: Vec<usize> = (0..n).filter(|&v| !cur[v] && d.preds(v).iter().all(|&u| cur[u])).collect();
        addable.shuffle(&mut rng);
        let k = rng.gen_range(0..=max_new.min(addable.len()));
        let mut next: Vec<bool> = cur.iter().map(|&p| p && rng.gen_bool(0.7)).collect();
        for &v in &addable[..k] {
            next[v] = true;
        }
        cur = next;
        let black: Vec<usize> = (0..n).filter(|&v| cur[v]).collect();
        configs.push(Config::from_nodes(n, &black, &[]));
    }
    PebblingStrategy { kind: GameKind::Standard, node_count: n, configs, magic_bound: None }
}
