//! Deterministic generators for the graph families.
//!
//! Every generator numbers nodes in a fixed topological order, documented
//! on the function.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Pow;
use thiserror::Error;

use crate::graph::{Dag, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    Param(String),
    #[error("crossover rounding leaves the graph degenerate: {0}")]
    Degenerate(String),
    #[error("input graph must have exactly one target, found {0}")]
    TargetCount(usize),
    #[error("shortcut set rejected: {0}")]
    ShortcutSet(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// A non-negative rational exponent such as `2/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    pub fn new(num: u32, den: u32) -> Self {
        assert!(den > 0, "zero denominator");
        Exponent { num, den }
    }

    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    fn add(self, other: Exponent) -> Exponent {
        let den = u64::from(self.den) * u64::from(other.den);
        let num = u64::from(self.num) * u64::from(other.den) + u64::from(other.num) * u64::from(self.den);
        let g = gcd(num, den);
        Exponent::new((num / g) as u32, (den / g) as u32)
    }

    /// Cross-multiplied comparison.
    fn lt(self, other: Exponent) -> bool {
        u64::from(self.num) * u64::from(other.den) < u64::from(other.num) * u64::from(self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad exponent `{s}` (use p/q or a decimal)");
        if let Some((p, q)) = s.split_once('/') {
            let (p, q) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            if q == 0 {
                return Err(bad());
            }
            return Ok(Exponent::new(p, q));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 6 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int * den + frac;
        let g = gcd(num, den);
        Ok(Exponent::new((num / g) as u32, (den / g) as u32))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Exact ⌊n^e⌋: the largest m with m^den ≤ n^num.
pub fn floor_pow(n: u64, e: Exponent) -> u64 {
    let target = BigUint::from(n).pow(e.num);
    let fits = |m: u64| BigUint::from(m).pow(e.den) <= target;
    let (mut lo, mut hi) = (0u64, 1u64);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Pyramid,
    Cylinder,
    CompositeBinaryTree,
    TimeOptimal,
    LayeredTransform,
    CcAlphaCrossover,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Pyramid,
        Family::Cylinder,
        Family::CompositeBinaryTree,
        Family::TimeOptimal,
        Family::LayeredTransform,
        Family::CcAlphaCrossover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pyramid => "pyramid",
            Family::Cylinder => "cylinder",
            Family::CompositeBinaryTree => "composite-binary-tree",
            Family::TimeOptimal => "time-optimal",
            Family::LayeredTransform => "layered-transform",
            Family::CcAlphaCrossover => "cc-alpha-crossover",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Family selector plus its parameters.
///
/// `size` is the height `h` (pyramid, cylinder, composite tree), the
/// parameter `s` (time-optimal and its layered transform) or the node count
/// `n` (crossover). `trees_s` is the composite tree's target count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub family: Family,
    pub size: usize,
    pub trees_s: usize,
    pub a: Exponent,
    pub b: Exponent,
    pub c: Exponent,
    pub c1: usize,
}

impl ConstructionParams {
    pub fn new(family: Family, size: usize) -> Self {
        ConstructionParams {
            family,
            size,
            trees_s: 1,
            a: Exponent::new(1, 4),
            b: Exponent::new(2, 3),
            c: Exponent::new(2, 3),
            c1: 2,
        }
    }

    /// Stable textual description used in table digests.
    pub fn describe(&self) -> String {
        match self.family {
            Family::Pyramid | Family::Cylinder => format!("{} h={}", self.family, self.size),
            Family::CompositeBinaryTree => format!("{} h={} s={}", self.family, self.size, self.trees_s),
            Family::TimeOptimal | Family::LayeredTransform => {
                format!("{} s={} c1={}", self.family, self.size, self.c1)
            }
            Family::CcAlphaCrossover => {
                format!("{} n={} a={} b={} c={}", self.family, self.size, self.a, self.b, self.c)
            }
        }
    }

    pub fn build(&self) -> Result<Built> {
        let plain = |dag| Built { dag, degenerate: false, shortcut_set: None };
        Ok(match self.family {
            Family::Pyramid => plain(pyramid(self.size)?),
            Family::Cylinder => Built { dag: cylinder(self.size)?, degenerate: self.size == 1, shortcut_set: None },
            Family::CompositeBinaryTree => plain(composite_binary_tree(self.size, self.trees_s)?),
            Family::TimeOptimal => {
                let t = time_optimal(self.size, self.c1)?;
                Built { dag: t.dag, degenerate: false, shortcut_set: Some(t.shortcut_set) }
            }
            Family::LayeredTransform => {
                let t = time_optimal(self.size, self.c1)?;
                plain(layer_transform(&t.dag, self.size, &t.shortcut_set)?)
            }
            Family::CcAlphaCrossover => plain(cc_alpha_crossover(self.size as u64, self.a, self.b, self.c)?.dag),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Built {
    pub dag: Dag,
    /// Set when modular arithmetic collapsed distinct edges (cylinder h=1).
    pub degenerate: bool,
    pub shortcut_set: Option<Vec<usize>>,
}

/// Index of node (level `k` in 1..=h, position `p`) in a height-`h` pyramid
/// numbered level by level from the base.
pub fn pyramid_index(h: usize, k: usize, p: usize) -> usize {
    // levels 1..k-1 hold h + (h-1) + ... + (h-k+2) nodes
    let before = (k - 1) * (2 * h + 2 - k) / 2;
    before + p
}

/// Height-`h` pyramid. Level 1 (the sources) comes first, left to right;
/// node (k, p) has predecessors (k−1, p) and (k−1, p+1). The apex is the
/// last node and the only target.
pub fn pyramid(h: usize) -> Result<Dag> {
    if h == 0 {
        return Err(ConstructionError::Param("pyramid height must be at least 1".into()));
    }
    let mut edges = Vec::new();
    for k in 2..=h {
        for p in 0..=(h - k) {
            let v = pyramid_index(h, k, p);
            edges.push((pyramid_index(h, k - 1, p), v));
            edges.push((pyramid_index(h, k - 1, p + 1), v));
        }
    }
    let n = h * (h + 1) / 2;
    Ok(Dag::from_edges(n, &edges, vec![n - 1])?)
}

/// Wraparound grid of `levels` rows of `width` nodes. Node (r, j) is
/// `r * width + j`; node (r+1, j) has predecessors (r, j−k mod width) for
/// k in 0..degree. Targets are the last row.
pub fn wraparound(width: usize, levels: usize, degree: usize) -> Result<Dag> {
    if width == 0 || levels < 2 || degree == 0 {
        return Err(ConstructionError::Param("wraparound needs width ≥ 1, levels ≥ 2, degree ≥ 1".into()));
    }
    let mut edges = Vec::new();
    for r in 0..levels - 1 {
        for j in 0..width {
            let mut preds: Vec<usize> = (0..degree).map(|k| r * width + (j + width * degree - k) % width).collect();
            preds.sort_unstable();
            preds.dedup();
            edges.extend(preds.into_iter().map(|u| (u, (r + 1) * width + j)));
        }
    }
    let targets = ((levels - 1) * width..levels * width).collect();
    Ok(Dag::from_edges(width * levels, &edges, targets)?)
}

/// Cylinder of height `h`: 2h levels of h nodes, v_i^j at index i·h + j,
/// with v_{i+1}^j fed by v_i^j and v_i^{j−1 mod h}. For h = 1 the two edge
/// rules coincide and the duplicate is dropped.
pub fn cylinder(h: usize) -> Result<Dag> {
    if h == 0 {
        return Err(ConstructionError::Param("cylinder height must be at least 1".into()));
    }
    wraparound(h, 2 * h, 2)
}

/// `s + 1` binary trees of height `h` feeding `s` extra target nodes.
///
/// Each tree holds 2^{h−1} nodes: a complete binary tree of height h−1
/// topped by a single root with one child. Trees are numbered one after the
/// other, leaves first; the targets s_1..s_s follow, with s_i fed by the
/// roots of trees i and i+1.
pub fn composite_binary_tree(h: usize, s: usize) -> Result<Dag> {
    if h == 0 || s == 0 {
        return Err(ConstructionError::Param("composite tree needs h ≥ 1 and s ≥ 1".into()));
    }
    if h > 24 {
        return Err(ConstructionError::Param("composite tree height too large".into()));
    }
    let tree_size = 1usize << (h - 1);
    let mut edges = Vec::new();
    let mut roots = Vec::with_capacity(s + 1);
    for t in 0..=s {
        let base = t * tree_size;
        // complete part has height h-1, levels bottom-up, level k holds 2^{h-2-k} nodes
        let mut level_start = base;
        let mut prev: Option<(usize, usize)> = None;
        if h >= 2 {
            for k in 0..h - 1 {
                let width = 1usize << (h - 2 - k);
                if let Some((pstart, _)) = prev {
                    for p in 0..width {
                        edges.push((pstart + 2 * p, level_start + p));
                        edges.push((pstart + 2 * p + 1, level_start + p));
                    }
                }
                prev = Some((level_start, width));
                level_start += width;
            }
        }
        let root = base + tree_size - 1;
        if let Some((pstart, _)) = prev {
            edges.push((pstart, root));
        }
        roots.push(root);
    }
    let first_target = (s + 1) * tree_size;
    for i in 0..s {
        edges.push((roots[i], first_target + i));
        edges.push((roots[i + 1], first_target + i));
    }
    let targets = (first_target..first_target + s).collect();
    Ok(Dag::from_edges(first_target + s, &edges, targets)?)
}

/// Appends nodes in topological order, expanding any node with three or
/// more predecessors into a pyramid gadget so in-degree stays ≤ 2.
struct Builder {
    edges: Vec<(usize, usize)>,
    count: usize,
}

impl Builder {
    fn new() -> Self {
        Builder { edges: Vec::new(), count: 0 }
    }

    fn fresh(&mut self, preds: &[usize]) -> usize {
        let v = self.count;
        self.count += 1;
        self.edges.extend(preds.iter().map(|&u| (u, v)));
        v
    }

    /// Adds a node fed by `preds`. With d ≥ 3 distinct predecessors the node
    /// becomes the apex of a height-d pyramid whose base nodes each read one
    /// predecessor; d = 3 is the six-node gadget.
    fn add(&mut self, preds: &[usize]) -> usize {
        let mut preds = preds.to_vec();
        preds.sort_unstable();
        preds.dedup();
        if preds.len() <= 2 {
            return self.fresh(&preds);
        }
        let mut row: Vec<usize> = preds.iter().map(|&u| self.fresh(&[u])).collect();
        while row.len() > 1 {
            row = row.windows(2).map(|w| self.fresh(w)).collect();
        }
        row[0]
    }
}

/// Output of [`time_optimal`] with the node roles needed downstream.
#[derive(Debug, Clone)]
pub struct TimeOptimal {
    pub dag: Dag,
    /// r_2..r_s
    pub roots: Vec<usize>,
    /// v_1..v_{c1·s}
    pub path: Vec<usize>,
    /// w_1..w_{s−1}
    pub tail: Vec<usize>,
    /// X = {r_2..r_s, v_{c1·s}}
    pub shortcut_set: Vec<usize>,
}

/// Time-optimal shortcut-free graph with parameter `s`.
///
/// Height-s pyramid with a path threaded through each level from the
/// rightmost node to the leftmost, so r_i, the apex of the left-aligned
/// height-i subpyramid (level i, position 0), ends its level's path. Nodes
/// with three or more predecessors become pyramid gadgets. Then the path
/// v_1..v_{c1·s} with edges (r_s, v_1) and (r_i, v_{k(i−1)}) for in-range
/// indices, then the path w_1..w_{s−1} with (v_{c1·s}, w_1) and
/// (r_i, w_{i−1}). Target w_{s−1}.
pub fn time_optimal(s: usize, c1: usize) -> Result<TimeOptimal> {
    if s < 2 {
        return Err(ConstructionError::Param("time-optimal needs s ≥ 2".into()));
    }
    if c1 < 2 {
        return Err(ConstructionError::Param("time-optimal needs c1 ≥ 2".into()));
    }
    let mut b = Builder::new();
    // node[k-1][p] for level k, position p
    let mut node: Vec<Vec<usize>> = Vec::with_capacity(s);
    for k in 1..=s {
        let width = s - k + 1;
        let mut row = vec![usize::MAX; width];
        for p in (0..width).rev() {
            let mut preds = Vec::new();
            if k > 1 {
                preds.push(node[k - 2][p]);
                preds.push(node[k - 2][p + 1]);
            }
            if p + 1 < width {
                preds.push(row[p + 1]);
            }
            row[p] = b.add(&preds);
        }
        node.push(row);
    }
    let root = |i: usize| node[i - 1][0];
    let roots: Vec<usize> = (2..=s).map(root).collect();
    let len = c1 * s;
    let mut path = Vec::with_capacity(len);
    for j in 1..=len {
        let mut preds = Vec::new();
        if j == 1 {
            preds.push(root(s));
        } else {
            preds.push(path[j - 2]);
        }
        for i in 2..=s {
            if (1..=s).any(|k| k * (i - 1) == j) {
                preds.push(root(i));
            }
        }
        path.push(b.add(&preds));
    }
    let mut tail = Vec::with_capacity(s - 1);
    for l in 1..s {
        let prev = if l == 1 { path[len - 1] } else { tail[l - 2] };
        tail.push(b.add(&[prev, root(l + 1)]));
    }
    let target = tail[s - 2];
    let dag = Dag::from_edges(b.count, &b.edges, vec![target])?;
    let mut shortcut_set = roots.clone();
    shortcut_set.push(path[len - 1]);
    Ok(TimeOptimal { dag, roots, path, tail, shortcut_set })
}

/// Layering transform: the original graph plus `s − 1` copies of X ∪ D,
/// where D are the descendants of X outside X.
///
/// Copy i of node x gets index |V| + (i−1)|X ∪ D| + rank of x in X ∪ D.
/// Edges inside X ∪ D are copied within each copy; edges entering X ∪ D
/// from outside feed every copy from the original node. Targets are the
/// original target followed by its copies.
pub fn layer_transform(g: &Dag, s: usize, x_set: &[usize]) -> Result<Dag> {
    if g.targets().len() != 1 {
        return Err(ConstructionError::TargetCount(g.targets().len()));
    }
    if s == 0 {
        return Err(ConstructionError::Param("s must be at least 1".into()));
    }
    let n = g.node_count();
    if let Some(&x) = x_set.iter().find(|&&x| x >= n) {
        return Err(ConstructionError::ShortcutSet(format!("node {x} out of range")));
    }
    let mut in_copy = vec![false; n];
    for &x in x_set {
        in_copy[x] = true;
    }
    for d in g.descendants_of(x_set) {
        in_copy[d] = true;
    }
    let target = g.targets()[0];
    if !in_copy[target] {
        return Err(ConstructionError::ShortcutSet("the target is neither in X nor a descendant of X".into()));
    }
    let members: Vec<usize> = (0..n).filter(|&v| in_copy[v]).collect();
    let mut rank = vec![usize::MAX; n];
    for (r, &v) in members.iter().enumerate() {
        rank[v] = r;
    }
    let m = members.len();
    let mut edges = g.edges();
    let mut targets = vec![target];
    for i in 1..s {
        let off = n + (i - 1) * m;
        for &v in &members {
            for &u in g.preds(v) {
                let from = if in_copy[u] { off + rank[u] } else { u };
                edges.push((from, off + rank[v]));
            }
        }
        targets.push(off + rank[target]);
    }
    Ok(Dag::from_edges(n + (s - 1) * m, &edges, targets)?)
}

/// Output of [`cc_alpha_crossover`] with the derived sizes.
#[derive(Debug, Clone)]
pub struct Crossover {
    pub dag: Dag,
    /// ⌊n^a⌋
    pub na: usize,
    /// ⌊n^b⌋
    pub nb: usize,
    /// ⌊n^c⌋
    pub nc: usize,
    /// A-path length ⌊n^{a+b}⌋
    pub a_len: usize,
    /// C-path length
    pub c_len: usize,
    /// A-path nodes whose 1-based position is a multiple of n^b
    pub junctions: Vec<usize>,
    /// For each C node, the junction feeding it (if any)
    pub cross_pred: Vec<Option<usize>>,
}

/// CC^α crossover graph on `n` nodes.
///
/// Nodes 0..|A| form the A path, the next |C| form the C path, joined by
/// the bridge (last of A, first of C). With 1-based positions, A node k
/// with k ≡ 0 mod n^b feeds C position k/n^b + (q−1)n^a for
/// q in [1, ⌊n^c⌋/n^a]; positions past the end of C are dropped. The last
/// C node is the only target.
pub fn cc_alpha_crossover(n: u64, a: Exponent, b: Exponent, c: Exponent) -> Result<Crossover> {
    let one = Exponent::new(1, 1);
    if !(a.lt(one) && b.lt(one) && c.lt(one)) {
        return Err(ConstructionError::Param("exponents must lie in [0, 1)".into()));
    }
    if !(a.lt(b) && a.lt(c)) {
        return Err(ConstructionError::Param("need a < b and a < c".into()));
    }
    if !a.add(one).lt(b.add(c)) {
        return Err(ConstructionError::Param("need b + c > a + 1".into()));
    }
    let na = floor_pow(n, a) as usize;
    let nb = floor_pow(n, b) as usize;
    let nc = floor_pow(n, c) as usize;
    let a_len = floor_pow(n, a.add(b)) as usize;
    let n = n as usize;
    if na < 1 || nb < 2 || a_len < nb || a_len >= n {
        return Err(ConstructionError::Degenerate(format!(
            "n={n}: n^a={na}, n^b={nb}, |A|={a_len}"
        )));
    }
    let c_len = nc.min(n - a_len);
    let q_max = nc / na;
    if c_len == 0 || q_max == 0 {
        return Err(ConstructionError::Degenerate(format!("n={n}: |C|={c_len}, q range empty")));
    }
    let total = a_len + c_len;
    let mut edges: Vec<(usize, usize)> = (1..total).map(|v| (v - 1, v)).collect();
    let junctions: Vec<usize> = (1..=a_len).filter(|k| k % nb == 0).map(|k| k - 1).collect();
    let mut cross_pred = vec![None; c_len];
    for &j in &junctions {
        let k = j + 1;
        for q in 1..=q_max {
            let l = k / nb + (q - 1) * na; // 1-based position inside C
            if l == 0 || l > c_len {
                continue;
            }
            let target = a_len + l - 1;
            if target == a_len && j == a_len - 1 {
                continue; // already the bridge
            }
            if cross_pred[l - 1].is_some() {
                return Err(ConstructionError::Degenerate(format!("C position {l} fed by two junctions")));
            }
            cross_pred[l - 1] = Some(j);
            edges.push((j, target));
        }
    }
    if cross_pred.iter().all(Option::is_none) {
        return Err(ConstructionError::Degenerate(format!("n={n}: no cross edges")));
    }
    let dag = Dag::from_edges(total, &edges, vec![total - 1])?;
    Ok(Crossover { dag, na, nb, nc, a_len, c_len, junctions, cross_pred })
}

/// Exact node-count formulas, for cross-checking generators.
pub mod counts {
    pub fn pyramid(h: usize) -> usize {
        h * (h + 1) / 2
    }

    pub fn cylinder(h: usize) -> usize {
        2 * h * h
    }

    pub fn composite_binary_tree(h: usize, s: usize) -> usize {
        (s + 1) * (1 << (h - 1)) + s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pyramid_shapes() {
        let p1 = pyramid(1).unwrap();
        assert_eq!((p1.node_count(), p1.edge_count()), (1, 0));
        let p2 = pyramid(2).unwrap();
        assert_eq!((p2.node_count(), p2.edge_count()), (3, 2));
        assert_eq!(p2.predecessors(2).unwrap(), &[0, 1]);
        assert_eq!(p2.targets(), &[2]);
        assert!(pyramid(0).is_err());
        assert_eq!(pyramid(4).unwrap().node_count(), 10);
    }

    #[test]
    fn cylinder_shapes() {
        let c1 = cylinder(1).unwrap();
        assert_eq!((c1.node_count(), c1.edge_count()), (2, 1));
        assert!(ConstructionParams::new(Family::Cylinder, 1).build().unwrap().degenerate);
        let c2 = cylinder(2).unwrap();
        assert_eq!((c2.node_count(), c2.edge_count()), (8, 12));
        assert_eq!(c2.sources(), &[0, 1]);
        assert_eq!(c2.targets(), &[6, 7]);
        // v_1^0 = index 2, fed by v_0^0 and v_0^1
        assert_eq!(c2.predecessors(2).unwrap(), &[0, 1]);
        assert_eq!(cylinder(5).unwrap().node_count(), 50);
    }

    #[test]
    fn composite_tree_counts() {
        assert_eq!(composite_binary_tree(1, 1).unwrap().node_count(), 3);
        assert_eq!(composite_binary_tree(2, 1).unwrap().node_count(), 5);
        let t = composite_binary_tree(3, 2).unwrap();
        assert_eq!(t.node_count(), 14);
        assert_eq!(t.targets(), &[12, 13]);
        assert_eq!(t.predecessors(12).unwrap(), &[3, 7]);
        assert_eq!(t.predecessors(13).unwrap(), &[7, 11]);
    }

    #[test]
    fn exponents() {
        assert_eq!("1/4".parse::<Exponent>().unwrap(), Exponent::new(1, 4));
        assert_eq!("0.25".parse::<Exponent>().unwrap(), Exponent::new(1, 4));
        assert_eq!(floor_pow(16, Exponent::new(1, 4)), 2);
        assert_eq!(floor_pow(16, Exponent::new(2, 3)), 6);
        assert_eq!(floor_pow(16, Exponent::new(11, 12)), 12);
        assert_eq!(floor_pow(1000, Exponent::new(1, 3)), 10);
    }

    #[test]
    fn crossover_sixteen() {
        let x = cc_alpha_crossover(16, Exponent::new(1, 4), Exponent::new(2, 3), Exponent::new(2, 3)).unwrap();
        assert_eq!((x.na, x.nb, x.nc, x.a_len, x.c_len), (2, 6, 6, 12, 4));
        assert_eq!(x.junctions, vec![5, 11]);
        assert_eq!(x.dag.predecessors(12).unwrap(), &[5, 11]);
        assert_eq!(x.dag.predecessors(13).unwrap(), &[11, 12]);
        assert_eq!(x.dag.predecessors(14).unwrap(), &[5, 13]);
        assert_eq!(x.dag.predecessors(15).unwrap(), &[11, 14]);
        assert_eq!(x.dag.max_in_degree(), 2);
    }

    #[test]
    fn crossover_rejects_bad_params() {
        let e = |p, q| Exponent::new(p, q);
        assert!(matches!(
            cc_alpha_crossover(2, e(1, 4), e(2, 3), e(2, 3)),
            Err(ConstructionError::Degenerate(_))
        ));
        assert!(matches!(cc_alpha_crossover(16, e(1, 4), e(1, 2), e(1, 2)), Err(ConstructionError::Param(_))));
        assert!(matches!(cc_alpha_crossover(16, e(3, 4), e(2, 3), e(4, 5)), Err(ConstructionError::Param(_))));
    }

    #[test]
    fn time_optimal_small() {
        let t = time_optimal(2, 2).unwrap();
        assert_eq!(t.dag.targets().len(), 1);
        assert!(t.dag.max_in_degree() <= 2);
        assert_eq!(t.shortcut_set.len(), 2);
        let t5 = time_optimal(5, 6).unwrap();
        assert!(t5.dag.max_in_degree() <= 2);
        assert_eq!(t5.path.len(), 30);
        assert!(time_optimal(1, 2).is_err());
        assert!(time_optimal(3, 1).is_err());
    }

    #[test]
    fn layer_transform_counts() {
        let t = time_optimal(2, 2).unwrap();
        let same = layer_transform(&t.dag, 1, &t.shortcut_set).unwrap();
        assert_eq!(same, t.dag);
        let g = layer_transform(&t.dag, 2, &t.shortcut_set).unwrap();
        let xd = t.dag.descendants_of(&t.shortcut_set).into_iter().filter(|v| !t.shortcut_set.contains(v)).count()
            + t.shortcut_set.len();
        assert_eq!(g.node_count(), t.dag.node_count() + xd);
        assert_eq!(g.targets().len(), 2);
        assert!(layer_transform(&cylinder(2).unwrap(), 2, &[0]).is_err());
    }
}
