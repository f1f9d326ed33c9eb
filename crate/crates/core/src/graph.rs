//! Immutable bounded-in-degree DAGs with designated sources and targets.

use std::fmt::Write as _;

use thiserror::Error;

/// A structural problem found while checking a DAG.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("dangling edge ({0}, {1}): node index out of range")]
    DanglingEdge(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("cycle detected")]
    Cycle,
    #[error("edge ({0}, {1}) does not go from a lower to a higher index")]
    NonCanonicalEdge(usize, usize),
    #[error("source list does not match the in-degree-0 nodes")]
    SourceMismatch,
    #[error("empty target set")]
    EmptyTargets,
    #[error("target {0} out of range")]
    TargetOutOfRange(usize),
    #[error("duplicate target {0}")]
    DuplicateTarget(usize),
    #[error("node {node} has in-degree {degree} above the bound {bound}")]
    InDegree { node: usize, degree: usize, bound: usize },
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed body at line {line}: {reason}")]
    MalformedBody { line: usize, reason: String },
    #[error("truncated body: expected {expected} edges, found {found}")]
    Truncated { expected: usize, found: usize },
}

/// Unchecked DAG components, as read from a file or assembled by a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagParts {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
    pub max_in_degree: usize,
}

impl DagParts {
    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count;
        let mut seen = rustc_hash::FxHashSet::default();
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                return Err(GraphError::DanglingEdge(u, v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        // Kahn's algorithm
        let mut indeg = vec![0usize; n];
        let mut succs = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            indeg[v] += 1;
            succs[u].push(v);
        }
        let mut remaining = indeg.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &w in &succs[u] {
                remaining[w] -= 1;
                if remaining[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if visited != n {
            return Err(GraphError::Cycle);
        }
        if let Some(&(u, v)) = self.edges.iter().find(|(u, v)| u > v) {
            return Err(GraphError::NonCanonicalEdge(u, v));
        }
        let expected: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut given = self.sources.clone();
        given.sort_unstable();
        if given != expected {
            return Err(GraphError::SourceMismatch);
        }
        if self.targets.is_empty() {
            return Err(GraphError::EmptyTargets);
        }
        let mut tseen = rustc_hash::FxHashSet::default();
        for &t in &self.targets {
            if t >= n {
                return Err(GraphError::TargetOutOfRange(t));
            }
            if !tseen.insert(t) {
                return Err(GraphError::DuplicateTarget(t));
            }
        }
        for (node, &degree) in indeg.iter().enumerate() {
            if degree > self.max_in_degree {
                return Err(GraphError::InDegree { node, degree, bound: self.max_in_degree });
            }
        }
        Ok(())
    }
}

/// Validated, immutable DAG. Node indices form a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    sources: Vec<usize>,
    targets: Vec<usize>,
    max_in_degree: usize,
}

impl TryFrom<DagParts> for Dag {
    type Error = GraphError;

    fn try_from(parts: DagParts) -> Result<Self, Self::Error> {
        parts.validate()?;
        let n = parts.node_count;
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for &(u, v) in &parts.edges {
            preds[v].push(u);
            succs[u].push(v);
        }
        for list in preds.iter_mut().chain(succs.iter_mut()) {
            list.sort_unstable();
        }
        let sources = (0..n).filter(|&v| preds[v].is_empty()).collect();
        Ok(Dag { preds, succs, sources, targets: parts.targets, max_in_degree: parts.max_in_degree })
    }
}

impl Dag {
    /// Builds a DAG whose degree bound is its actual maximum in-degree and
    /// whose sources are derived from the edges.
    pub fn from_edges(
        node_count: usize,
        edges: &[(usize, usize)],
        targets: Vec<usize>,
    ) -> Result<Self, GraphError> {
        let mut indeg = vec![0usize; node_count];
        for &(_, v) in edges {
            if v < node_count {
                indeg[v] += 1;
            }
        }
        let sources = (0..node_count).filter(|&v| indeg[v] == 0).collect();
        let max_in_degree = indeg.iter().copied().max().unwrap_or(0);
        Dag::try_from(DagParts { node_count, edges: edges.to_vec(), sources, targets, max_in_degree })
    }

    pub fn node_count(&self) -> usize {
        self.preds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.preds.iter().map(Vec::len).sum()
    }

    /// Edges sorted by (succ, pred), i.e. grouped by their head node.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.preds.iter().enumerate().flat_map(|(v, ps)| ps.iter().map(move |&u| (u, v))).collect()
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn max_in_degree(&self) -> usize {
        self.max_in_degree
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.preds[v].is_empty()
    }

    /// Predecessors in ascending index order.
    pub fn predecessors(&self, v: usize) -> Result<&[usize], GraphError> {
        self.preds.get(v).map(Vec::as_slice).ok_or(GraphError::IndexOutOfRange(v))
    }

    /// Unchecked variant of [`Dag::predecessors`] for hot loops.
    pub fn preds(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    pub fn succs(&self, v: usize) -> &[usize] {
        &self.succs[v]
    }

    /// Same graph with a different target list.
    pub fn with_targets(&self, targets: Vec<usize>) -> Result<Dag, GraphError> {
        let mut parts = self.to_parts();
        parts.targets = targets;
        Dag::try_from(parts)
    }

    pub fn to_parts(&self) -> DagParts {
        DagParts {
            node_count: self.node_count(),
            edges: self.edges(),
            sources: self.sources.clone(),
            targets: self.targets.clone(),
            max_in_degree: self.max_in_degree,
        }
    }

    /// Length in nodes of the longest path ending at each node (sources have depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.node_count()];
        for v in 0..self.node_count() {
            depth[v] = self.preds[v].iter().map(|&u| depth[u] + 1).max().unwrap_or(0);
        }
        depth
    }

    /// Nodes grouped by depth; every node's predecessors lie in earlier groups.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let depth = self.depths();
        let count = depth.iter().copied().max().map_or(0, |d| d + 1);
        let mut levels = vec![Vec::new(); count];
        for (v, &d) in depth.iter().enumerate() {
            levels[d].push(v);
        }
        levels
    }

    /// All ancestors of `v` (excluding `v`), ascending.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut mark = vec![false; self.node_count()];
        let mut stack = self.preds[v].clone();
        while let Some(u) = stack.pop() {
            if !mark[u] {
                mark[u] = true;
                stack.extend_from_slice(&self.preds[u]);
            }
        }
        (0..self.node_count()).filter(|&u| mark[u]).collect()
    }

    /// All descendants of the given nodes (excluding nodes only reachable as a start), ascending.
    pub fn descendants_of(&self, starts: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.node_count()];
        let mut stack: Vec<usize> = starts.iter().flat_map(|&s| self.succs[s].iter().copied()).collect();
        while let Some(u) = stack.pop() {
            if !mark[u] {
                mark[u] = true;
                stack.extend_from_slice(&self.succs[u]);
            }
        }
        (0..self.node_count()).filter(|&u| mark[u]).collect()
    }

    /// PGRAPH1 text encoding.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = String::new();
        let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "PGRAPH1 {} {} {}", self.node_count(), self.edge_count(), self.max_in_degree);
        let _ = writeln!(out, "S {}", join(&self.sources));
        let _ = writeln!(out, "T {}", join(&self.targets));
        let mut edges = self.edges();
        edges.sort_unstable();
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out.into_bytes()
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Dag, GraphError> {
        let text = std::str::from_utf8(bytes).map_err(|e| GraphError::MalformedHeader(e.to_string()))?;
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 4 || fields[0] != "PGRAPH1" {
            return Err(GraphError::MalformedHeader(header.to_string()));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| GraphError::MalformedHeader(header.to_string()));
        let (node_count, edge_count, max_in_degree) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let list = |line: Option<&str>, tag: &str, no: usize| -> Result<Vec<usize>, GraphError> {
            let line = line.filter(|l| !l.trim().is_empty()).ok_or(GraphError::Truncated { expected: edge_count, found: 0 })?;
            let mut parts = line.split(' ').filter(|s| !s.is_empty());
            if parts.next() != Some(tag) {
                return Err(GraphError::MalformedBody { line: no, reason: format!("expected `{tag}` line") });
            }
            parts
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| GraphError::MalformedBody { line: no, reason: format!("bad index `{p}`") })
                })
                .collect()
        };
        let sources = list(lines.next(), "S", 2)?;
        let targets = list(lines.next(), "T", 3)?;
        let mut edges = Vec::with_capacity(edge_count);
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let no = i + 4;
            let mut it = line.split(' ');
            let mut idx = || -> Result<usize, GraphError> {
                it.next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| GraphError::MalformedBody { line: no, reason: format!("bad edge `{line}`") })
            };
            let (u, v) = (idx()?, idx()?);
            if it.next().is_some() {
                return Err(GraphError::MalformedBody { line: no, reason: format!("bad edge `{line}`") });
            }
            edges.push((u, v));
        }
        if edges.len() != edge_count {
            if edges.len() < edge_count {
                return Err(GraphError::Truncated { expected: edge_count, found: edges.len() });
            }
            return Err(GraphError::MalformedBody { line: 4 + edge_count, reason: "too many edges".into() });
        }
        Dag::try_from(DagParts { node_count, edges, sources, targets, max_in_degree })
    }
}

/// Simple path 0 → 1 → … → n−1 with the last node as target.
pub fn path(n: usize) -> Result<Dag, GraphError> {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Dag::from_edges(n, &edges, vec![n.saturating_sub(1)])
}
