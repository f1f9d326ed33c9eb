//! Oracle-query traces and the black-magic pebblings they induce.
//!
//! A [`TracingOracle`] records every query of an evaluation in batches.
//! [`ex_post_facto`] matches each query against the pre-labels of the
//! graph: a node is black-pebbled from the batch that derived it until its
//! last use, and a label used without an earlier derivation gets a magic
//! pebble for as long as it keeps being used underived.

use std::collections::BTreeSet;
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::engine::{validate_magic, Config, GameKind, Mode, PebblingStrategy, Rules, Violation};
use crate::graph::Dag;
use crate::par::Exec;
use crate::shf::label::prelabel;
use crate::shf::{label_all, Oracle, OracleSpec, ShfError};

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("trace line {line}: {reason}")]
    TraceFormat { line: usize, reason: String },
    #[error("inconsistent oracle: query {input} answered differently")]
    Inconsistent { input: String },
    #[error(transparent)]
    Shf(#[from] ShfError),
}

pub type Query = (Vec<u8>, Vec<u8>);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub batches: Vec<Vec<Query>>,
    /// Size of the state or hint the evaluator started from.
    pub declared_input_bits: usize,
}

impl QueryTrace {
    pub fn query_count(&self) -> usize {
        self.batches.iter().map(Vec::len).sum()
    }

    /// PTRACE1 text: a header line, then one line per batch of
    /// space-separated `hex(input):hex(output)` entries.
    pub fn to_text(&self) -> String {
        let mut out = format!("PTRACE1 {}\n", self.declared_input_bits);
        for batch in &self.batches {
            let entries: Vec<String> =
                batch.iter().map(|(i, o)| format!("{}:{}", hex::encode(i), hex::encode(o))).collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, AuditError> {
        let bad = |line: usize, reason: String| AuditError::TraceFormat { line, reason };
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let bits = header
            .strip_prefix("PTRACE1 ")
            .and_then(|b| b.trim().parse().ok())
            .ok_or_else(|| bad(1, format!("bad header `{header}`")))?;
        let mut batches = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut batch = Vec::new();
            for entry in line.split_whitespace() {
                let (a, b) = entry.split_once(':').ok_or_else(|| bad(i + 2, format!("entry `{entry}` lacks `:`")))?;
                let dec = |s: &str| hex::decode(s).map_err(|e| bad(i + 2, format!("{e} in `{entry}`")));
                batch.push((dec(a)?, dec(b)?));
            }
            batches.push(batch);
        }
        Ok(QueryTrace { batches, declared_input_bits: bits })
    }
}

/// Wraps an oracle and records its queries. Each batch is sorted on close
/// so traces do not depend on thread scheduling.
pub struct TracingOracle<'a, O: Oracle + ?Sized> {
    inner: &'a O,
    current: Mutex<Vec<Query>>,
    done: Mutex<Vec<Vec<Query>>>,
}

impl<'a, O: Oracle + ?Sized> TracingOracle<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        TracingOracle { inner, current: Mutex::new(Vec::new()), done: Mutex::new(Vec::new()) }
    }

    /// Closes any open batch and returns the trace.
    pub fn finish(self, declared_input_bits: usize) -> QueryTrace {
        self.end_batch();
        QueryTrace { batches: self.done.into_inner().unwrap(), declared_input_bits }
    }
}

impl<O: Oracle + ?Sized> Oracle for TracingOracle<'_, O> {
    fn output_bytes(&self) -> usize {
        self.inner.output_bytes()
    }

    fn query(&self, input: &[u8]) -> Vec<u8> {
        let out = self.inner.query(input);
        self.current.lock().unwrap().push((input.to_vec(), out.clone()));
        out
    }

    fn end_batch(&self) {
        let mut cur = std::mem::take(&mut *self.current.lock().unwrap());
        if !cur.is_empty() {
            cur.sort();
            self.done.lock().unwrap().push(cur);
        }
    }

    fn calls(&self) -> u64 {
        self.inner.calls()
    }
}

#[derive(Debug, Clone)]
pub struct ExPostFacto {
    pub strategy: PebblingStrategy,
    /// Queries that are not the pre-label of any node.
    pub unmatched: usize,
    pub matched: usize,
}

/// Reconstructs the black-magic pebbling induced by `trace` on `d`.
///
/// Configuration 0 is empty, an optional setup configuration holds magic
/// pebbles needed by the first batch, and batch `j` then yields one
/// configuration. A node derived in batch `j` and used by a query in batch
/// `k > j` is black from `j` to `k − 1`; a used label with no earlier
/// derivation is magic on the configuration before each such use, one
/// placement per run of consecutive underived uses. Derived nodes that are
/// neither targets nor used later are dropped.
pub fn ex_post_facto(d: &Dag, spec: &OracleSpec, zeta: &[u8], trace: &QueryTrace) -> Result<ExPostFacto, AuditError> {
    let n = d.node_count();
    let labels = label_all(d, &spec.oracle(), spec, zeta, Exec::default())?;
    let by_prelabel: FxHashMap<Vec<u8>, usize> = (0..n).map(|v| (prelabel(d, v, zeta, &labels), v)).collect();

    let mut answers: FxHashMap<&[u8], &[u8]> = FxHashMap::default();
    let mut derived: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let (mut matched, mut unmatched) = (0, 0);
    for (j, batch) in trace.batches.iter().enumerate() {
        for (input, output) in batch {
            if let Some(prev) = answers.insert(input, output) {
                if prev != output.as_slice() {
                    return Err(AuditError::Inconsistent { input: hex::encode(input) });
                }
            }
            let Some(&v) = by_prelabel.get(input) else {
                unmatched += 1;
                continue;
            };
            if !output.starts_with(&labels[v]) {
                return Err(AuditError::Inconsistent { input: hex::encode(input) });
            }
            matched += 1;
            derived[v].push(j);
            for &u in d.preds(v) {
                used[u].insert(j);
            }
        }
    }

    // batch j lands on configuration j + 2; configuration 1 is the setup
    let t = trace.batches.len();
    let mut black = vec![Vec::new(); t + 2];
    let mut magic = vec![Vec::new(); t + 2];
    let is_target: Vec<bool> = {
        let mut m = vec![false; n];
        d.targets().iter().for_each(|&v| m[v] = true);
        m
    };
    for v in 0..n {
        let mut held = vec![false; t + 2];
        for &j in &used[v] {
            match derived[v].iter().rev().find(|&&dj| dj < j) {
                Some(&dj) => {
                    held[dj + 2..=j + 1].fill(true);
                }
                None => {
                    // the setup configuration j + 1 == 1 serves the first batch
                    magic[j + 1].push(v);
                }
            }
        }
        for &dj in &derived[v] {
            if is_target[v] {
                held[dj + 2] = true;
            }
        }
        for (c, &on) in held.iter().enumerate() {
            if on {
                black[c].push(v);
            }
        }
    }
    // consecutive underived uses keep one magic pebble in place
    for v in 0..n {
        let slots: Vec<usize> = (1..t + 2).filter(|&c| magic[c].contains(&v)).collect();
        for w in slots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let bridged = (a + 1..b).all(|c| !black[c].contains(&v));
            if bridged {
                for slot in &mut magic[a + 1..b] {
                    slot.push(v);
                }
            }
        }
    }
    let mut configs = vec![Config::empty(n)];
    for c in 1..t + 2 {
        configs.push(Config::from_nodes(n, &black[c], &magic[c]));
    }
    if configs[1].size() == 0 {
        configs.remove(1);
    }
    let strategy = PebblingStrategy { kind: GameKind::Magic, node_count: n, configs, magic_bound: None };
    Ok(ExPostFacto { strategy, unmatched, matched })
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    /// First rule the induced strategy breaks, ignoring the goal.
    pub violation: Option<Violation>,
    pub goal_met: bool,
    pub magic_used: usize,
    /// Magic pebbles the declared input size can pay for.
    pub chi: usize,
    pub flagged: bool,
    /// Pebbles per configuration.
    pub timeline: Vec<usize>,
}

impl AuditReport {
    pub fn legal(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks an induced strategy under the parallel rules and compares its
/// magic count with `⌊declared_input_bits / w⌋`.
pub fn audit(d: &Dag, strategy: &PebblingStrategy, declared_input_bits: usize, word_bits: usize) -> AuditReport {
    let rules = Rules::new(Mode::Parallel);
    let violation = validate_magic(d, strategy, &[], rules).err();
    let n = d.node_count();
    let mut seen = vec![false; n];
    for c in &strategy.configs {
        c.pebbled().ones().filter(|&v| v < n).for_each(|v| seen[v] = true);
    }
    let goal_met = d.targets().iter().all(|&t| seen[t]);
    let magic_used = strategy.magic_used();
    let chi = declared_input_bits / word_bits;
    AuditReport {
        violation,
        goal_met,
        magic_used,
        chi,
        flagged: magic_used > chi,
        timeline: strategy.configs.iter().map(Config::size).collect(),
    }
}

/// Labels `d` level by level like an honest evaluator, except that nodes
/// in `stored` take their label from the hint instead of querying.
pub fn evaluate_with_stored_labels<O: Oracle + ?Sized>(
    d: &Dag,
    oracle: &O,
    spec: &OracleSpec,
    zeta: &[u8],
    stored: &[(usize, Vec<u8>)],
) -> Result<Vec<Vec<u8>>, ShfError> {
    let mut labels = vec![Vec::new(); d.node_count()];
    let mut hinted = vec![false; d.node_count()];
    for (v, l) in stored {
        if *v >= d.node_count() {
            return Err(ShfError::NodeOutOfRange(*v));
        }
        labels[*v] = l.clone();
        hinted[*v] = true;
    }
    if zeta.len() != spec.word_bytes() {
        return Err(ShfError::Width { what: "seed", expected: spec.word_bytes(), found: zeta.len() });
    }
    for level in d.levels() {
        for v in level {
            if !hinted[v] {
                let mut out = oracle.query(&prelabel(d, v, zeta, &labels));
                out.truncate(spec.label_bytes());
                labels[v] = out;
            }
        }
        oracle.end_batch();
    }
    Ok(labels)
}
