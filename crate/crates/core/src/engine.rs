//! Rule checking for the standard and black-magic pebble games, and the
//! complexity measures of a strategy.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seq" | "sequential" => Ok(Mode::Sequential),
            "par" | "parallel" => Ok(Mode::Parallel),
            _ => Err(format!("unknown mode `{s}` (seq|par)")),
        }
    }
}

/// Game rule switches. The defaults are the game as defined: slides
/// allowed, visiting goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rules {
    pub mode: Mode,
    /// When false, a move may not remove a predecessor of a node it places,
    /// which is what forbidding slides amounts to on configurations.
    pub slides: bool,
    /// Require every target to hold a pebble in the final configuration.
    pub persistent: bool,
}

impl Rules {
    pub fn new(mode: Mode) -> Self {
        Rules { mode, slides: true, persistent: false }
    }

    pub fn without_slides(self) -> Self {
        Rules { slides: false, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Standard,
    Magic,
}

/// One configuration. Standard strategies keep `magic` empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub black: FixedBitSet,
    pub magic: FixedBitSet,
}

impl Config {
    pub fn empty(n: usize) -> Self {
        Config { black: FixedBitSet::with_capacity(n), magic: FixedBitSet::with_capacity(n) }
    }

    pub fn from_nodes(n: usize, black: &[usize], magic: &[usize]) -> Self {
        let mut c = Config::empty(n);
        black.iter().for_each(|&v| c.black.insert(v));
        magic.iter().for_each(|&v| c.magic.insert(v));
        c
    }

    /// B ∪ M
    pub fn pebbled(&self) -> FixedBitSet {
        let mut all = self.black.clone();
        all.union_with(&self.magic);
        all
    }

    pub fn size(&self) -> usize {
        self.black.union_count(&self.magic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebblingStrategy {
    pub kind: GameKind,
    pub node_count: usize,
    pub configs: Vec<Config>,
    /// `None` means unbounded. Ignored for standard strategies.
    pub magic_bound: Option<usize>,
}

impl PebblingStrategy {
    /// Standard strategy from explicit node sets; the leading empty
    /// configuration is added.
    pub fn standard(node_count: usize, steps: &[Vec<usize>]) -> Self {
        let mut configs = vec![Config::empty(node_count)];
        configs.extend(steps.iter().map(|s| Config::from_nodes(node_count, s, &[])));
        PebblingStrategy { kind: GameKind::Standard, node_count, configs, magic_bound: None }
    }

    /// Magic strategy from (black, magic) pairs; the leading empty
    /// configuration is added.
    pub fn magic(node_count: usize, steps: &[(Vec<usize>, Vec<usize>)], magic_bound: Option<usize>) -> Self {
        let mut configs = vec![Config::empty(node_count)];
        configs.extend(steps.iter().map(|(b, m)| Config::from_nodes(node_count, b, m)));
        PebblingStrategy { kind: GameKind::Magic, node_count, configs, magic_bound }
    }

    /// Number of moves.
    pub fn time(&self) -> usize {
        self.configs.len().saturating_sub(1)
    }

    /// Distinct magic pebbles placed over the whole strategy.
    pub fn magic_used(&self) -> usize {
        self.configs.windows(2).map(|w| w[1].magic.difference_count(&w[0].magic)).sum()
    }

    /// Applies moves to the empty configuration. Only move-local sanity is
    /// checked here; game legality is the validators' job.
    pub fn from_moves(
        node_count: usize,
        kind: GameKind,
        moves: &[Move],
        magic_bound: Option<usize>,
        dag: Option<&Dag>,
    ) -> Result<Self, Violation> {
        let mut configs = vec![Config::empty(node_count)];
        for (i, mv) in moves.iter().enumerate() {
            let step = i + 1;
            let prev = &configs[i];
            let mut next = prev.clone();
            let range = |v: usize| {
                if v < node_count {
                    Ok(v)
                } else {
                    Err(Violation::NodeOutOfRange { step, node: v })
                }
            };
            for &v in &mv.remove_black {
                if !prev.black.contains(range(v)?) {
                    return Err(Violation::RemoveAbsent { step, node: v });
                }
                next.black.set(v, false);
            }
            for &v in &mv.remove_magic {
                if !prev.magic.contains(range(v)?) {
                    return Err(Violation::RemoveAbsent { step, node: v });
                }
                next.magic.set(v, false);
            }
            let mut slid = FixedBitSet::with_capacity(node_count);
            for &(from, to) in &mv.slides {
                range(from)?;
                range(to)?;
                if prev.magic.contains(from) {
                    return Err(Violation::MagicReused { step, node: from });
                }
                if !prev.black.contains(from) || mv.remove_black.contains(&from) {
                    return Err(Violation::IllegalSlide { step, from, to });
                }
                if slid.put(from) {
                    return Err(Violation::DoubleSlide { step, node: from });
                }
                if let Some(d) = dag {
                    if d.preds(to).binary_search(&from).is_err() {
                        return Err(Violation::IllegalSlide { step, from, to });
                    }
                }
                next.black.set(from, false);
            }
            for &(_, to) in &mv.slides {
                next.black.insert(to);
            }
            for &v in &mv.place_black {
                next.black.insert(range(v)?);
            }
            for &v in &mv.place_magic {
                next.magic.insert(range(v)?);
            }
            if kind == GameKind::Standard && !next.magic.is_clear() {
                return Err(Violation::WrongKind);
            }
            configs.push(next);
        }
        Ok(PebblingStrategy { kind, node_count, configs, magic_bound })
    }

    /// Configuration differences as moves (no slide tokens; a slide is a
    /// placement plus a removal in the same move).
    pub fn to_moves(&self) -> Vec<Move> {
        self.configs
            .windows(2)
            .map(|w| {
                let diff = |a: &FixedBitSet, b: &FixedBitSet| a.difference(b).collect::<Vec<_>>();
                Move {
                    place_black: diff(&w[1].black, &w[0].black),
                    remove_black: diff(&w[0].black, &w[1].black),
                    place_magic: diff(&w[1].magic, &w[0].magic),
                    remove_magic: diff(&w[0].magic, &w[1].magic),
                    slides: Vec::new(),
                }
            })
            .collect()
    }

    /// PSTRAT1 text encoding.
    pub fn to_pstrat(&self) -> String {
        let mut out = match (self.kind, self.magic_bound) {
            (GameKind::Standard, _) => "PSTRAT1 standard\n".to_string(),
            (GameKind::Magic, Some(b)) => format!("PSTRAT1 magic {b}\n"),
            (GameKind::Magic, None) => "PSTRAT1 magic inf\n".to_string(),
        };
        for mv in self.to_moves() {
            out.push_str(&mv.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses PSTRAT1. A bare `PSTRAT1` header infers the kind from the
    /// presence of magic tokens and leaves the bound open.
    pub fn parse_pstrat(text: &str, dag: &Dag) -> Result<Self, ParseError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(ParseError::Header(String::new()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.first() != Some(&"PSTRAT1") {
            return Err(ParseError::Header(header.into()));
        }
        let declared = match fields.get(1) {
            None => None,
            Some(&"standard") => Some((GameKind::Standard, None)),
            Some(&"magic") => {
                let bound = match fields.get(2) {
                    None | Some(&"inf") => None,
                    Some(b) => Some(b.parse().map_err(|_| ParseError::Header(header.into()))?),
                };
                Some((GameKind::Magic, bound))
            }
            Some(_) => return Err(ParseError::Header(header.into())),
        };
        let moves = lines
            .enumerate()
            .map(|(i, l)| l.parse::<Move>().map_err(|reason| ParseError::Line { line: i + 2, reason }))
            .collect::<Result<Vec<_>, _>>()?;
        let (kind, bound) = declared.unwrap_or_else(|| {
            let any_magic = moves.iter().any(|m| !m.place_magic.is_empty() || !m.remove_magic.is_empty());
            (if any_magic { GameKind::Magic } else { GameKind::Standard }, None)
        });
        Ok(PebblingStrategy::from_moves(dag.node_count(), kind, &moves, bound, Some(dag))?)
    }
}

/// One move as a list of actions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Move {
    pub place_black: Vec<usize>,
    pub remove_black: Vec<usize>,
    pub place_magic: Vec<usize>,
    pub remove_magic: Vec<usize>,
    pub slides: Vec<(usize, usize)>,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (tag, list) in [
            ("+b", &self.place_black),
            ("-b", &self.remove_black),
            ("+m", &self.place_magic),
            ("-m", &self.remove_magic),
        ] {
            if !list.is_empty() {
                parts.push(tag.into());
                parts.extend(list.iter().map(usize::to_string));
            }
        }
        if !self.slides.is_empty() {
            parts.push(">".into());
            parts.extend(self.slides.iter().map(|(a, b)| format!("{a}:{b}")));
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let mut mv = Move::default();
        let mut current: Option<&str> = None;
        for tok in line.split_whitespace() {
            match tok {
                "+b" | "-b" | "+m" | "-m" | ">" => current = Some(tok),
                "|" => {}
                _ => {
                    let Some(op) = current else {
                        return Err(format!("`{tok}` before any action token"));
                    };
                    if op == ">" {
                        let (a, b) = tok.split_once(':').ok_or_else(|| format!("bad slide `{tok}`"))?;
                        let a = a.parse().map_err(|_| format!("bad slide `{tok}`"))?;
                        let b = b.parse().map_err(|_| format!("bad slide `{tok}`"))?;
                        mv.slides.push((a, b));
                    } else {
                        let v = tok.parse().map_err(|_| format!("bad node index `{tok}`"))?;
                        match op {
                            "+b" => mv.place_black.push(v),
                            "-b" => mv.remove_black.push(v),
                            "+m" => mv.place_magic.push(v),
                            _ => mv.remove_magic.push(v),
                        }
                    }
                }
            }
        }
        Ok(mv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad PSTRAT1 header `{0}`")]
    Header(String),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error(transparent)]
    Move(#[from] Violation),
}

/// The first rule a strategy breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("strategy kind does not match the game")]
    WrongKind,
    #[error("configuration 0 is not empty")]
    NotEmptyStart,
    #[error("configuration {step} does not match the graph size")]
    SizeMismatch { step: usize },
    #[error("step {step}: node {node} out of range")]
    NodeOutOfRange { step: usize, node: usize },
    #[error("step {step}: illegal placement on node {node} (predecessors not pebbled at step {})", step - 1)]
    IllegalPlacement { step: usize, node: usize },
    #[error("step {step}: node {node} placed while its predecessor {pred} is removed (sliding disabled)")]
    SlideForbidden { step: usize, node: usize, pred: usize },
    #[error("step {step}: illegal slide {from} -> {to}")]
    IllegalSlide { step: usize, from: usize, to: usize },
    #[error("step {step}: pebble on {node} slides twice")]
    DoubleSlide { step: usize, node: usize },
    #[error("step {step}: removing absent pebble from {node}")]
    RemoveAbsent { step: usize, node: usize },
    #[error("step {step}: {added} pebbles placed in sequential mode")]
    Sequentiality { step: usize, added: usize },
    #[error("step {step}: node {node} holds both a black and a magic pebble")]
    Overlap { step: usize, node: usize },
    #[error("magic budget exceeded: {used} placements, bound {bound}")]
    BudgetExceeded { used: usize, bound: usize },
    #[error("step {step}: magic pebble on {node} reused")]
    MagicReused { step: usize, node: usize },
    #[error("goal not met: targets {missing:?} never pebbled")]
    GoalNotMet { missing: Vec<usize> },
}

fn check_targets(d: &Dag, targets: &[usize]) -> Result<(), Violation> {
    match targets.iter().find(|&&t| t >= d.node_count()) {
        Some(&t) => Err(Violation::NodeOutOfRange { step: 0, node: t }),
        None => Ok(()),
    }
}

fn validate_common(d: &Dag, strat: &PebblingStrategy, targets: &[usize], rules: Rules) -> Result<(), Violation> {
    let n = d.node_count();
    check_targets(d, targets)?;
    if strat.node_count != n {
        return Err(Violation::SizeMismatch { step: 0 });
    }
    for (step, c) in strat.configs.iter().enumerate() {
        if c.black.len() != n || c.magic.len() != n {
            return Err(Violation::SizeMismatch { step });
        }
    }
    let Some(first) = strat.configs.first() else {
        return Err(Violation::GoalNotMet { missing: targets.to_vec() });
    };
    if first.size() != 0 {
        return Err(Violation::NotEmptyStart);
    }
    let mut visited = FixedBitSet::with_capacity(n);
    for step in 1..strat.configs.len() {
        let prev = &strat.configs[step - 1];
        let cur = &strat.configs[step];
        if let Some(node) = cur.black.intersection(&cur.magic).next() {
            return Err(Violation::Overlap { step, node });
        }
        let before = prev.pebbled();
        let after = cur.pebbled();
        for v in cur.black.difference(&prev.black) {
            let preds = d.preds(v);
            if !preds.iter().all(|&u| before.contains(u)) {
                return Err(Violation::IllegalPlacement { step, node: v });
            }
            if !rules.slides {
                if let Some(&pred) = preds.iter().find(|&&u| !after.contains(u)) {
                    return Err(Violation::SlideForbidden { step, node: v, pred });
                }
            }
        }
        if rules.mode == Mode::Sequential {
            let added = after.difference_count(&before);
            if added > 1 {
                return Err(Violation::Sequentiality { step, added });
            }
        }
        visited.union_with(&after);
    }
    let last = strat.configs.last().map(Config::pebbled).unwrap_or_default();
    let reached = if rules.persistent { &last } else { &visited };
    let missing: Vec<usize> = targets.iter().copied().filter(|&t| !reached.contains(t)).collect();
    if !missing.is_empty() {
        return Err(Violation::GoalNotMet { missing });
    }
    Ok(())
}

/// Checks a standard strategy against the game rules and the goal.
pub fn validate_standard(d: &Dag, strat: &PebblingStrategy, targets: &[usize], rules: Rules) -> Result<(), Violation> {
    if strat.kind != GameKind::Standard || strat.configs.iter().any(|c| !c.magic.is_clear()) {
        return Err(Violation::WrongKind);
    }
    validate_common(d, strat, targets, rules)
}

/// Checks a black-magic strategy: black moves as in the standard game with
/// magic pebbles counting as pebbled, and the magic budget.
pub fn validate_magic(d: &Dag, strat: &PebblingStrategy, targets: &[usize], rules: Rules) -> Result<(), Violation> {
    if strat.kind != GameKind::Magic {
        return Err(Violation::WrongKind);
    }
    validate_common(d, strat, targets, rules)?;
    let used = strat.magic_used();
    if let Some(bound) = strat.magic_bound {
        if used > bound {
            return Err(Violation::BudgetExceeded { used, bound });
        }
    }
    Ok(())
}

/// Dispatches on the strategy kind.
pub fn validate(d: &Dag, strat: &PebblingStrategy, targets: &[usize], rules: Rules) -> Result<(), Violation> {
    match strat.kind {
        GameKind::Standard => validate_standard(d, strat, targets, rules),
        GameKind::Magic => validate_magic(d, strat, targets, rules),
    }
}

/// Exponent of a cumulative cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Int(u32),
    Real(f64),
}

impl Alpha {
    pub fn value(self) -> f64 {
        match self {
            Alpha::Int(a) => f64::from(a),
            Alpha::Real(a) => a,
        }
    }
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(a) = s.parse::<u32>() {
            return Ok(Alpha::Int(a));
        }
        match s.parse::<f64>() {
            Ok(a) if a.is_finite() && a >= 0.0 => Ok(Alpha::Real(a)),
            _ => Err(format!("bad alpha `{s}`")),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Int(a) => write!(f, "{a}"),
            Alpha::Real(a) => write!(f, "{a}"),
        }
    }
}

/// Σ|P_i|^α, exact for integer α.
#[derive(Debug, Clone, PartialEq)]
pub enum Pcc {
    Exact(BigUint),
    Approx(f64),
}

impl Pcc {
    pub fn to_f64(&self) -> f64 {
        match self {
            Pcc::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Pcc::Approx(v) => *v,
        }
    }
}

impl fmt::Display for Pcc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pcc::Exact(v) => write!(f, "{v}"),
            Pcc::Approx(v) => write!(f, "{v:.12e}"),
        }
    }
}

/// Histogram of configuration sizes over P_1..P_t: `hist[k]` counts steps
/// holding exactly k pebbles.
pub fn size_histogram(strat: &PebblingStrategy) -> Vec<usize> {
    let mut hist = Vec::new();
    for c in strat.configs.iter().skip(1) {
        let k = c.size();
        if hist.len() <= k {
            hist.resize(k + 1, 0);
        }
        hist[k] += 1;
    }
    hist
}

/// Σ_k hist[k]·k^α, floored by m^α for magic strategies.
pub fn pcc_from_histogram(hist: &[usize], alpha: Alpha, magic_used: Option<usize>) -> Pcc {
    match alpha {
        Alpha::Int(a) => {
            let mut sum = BigUint::zero();
            for (k, &count) in hist.iter().enumerate() {
                if count > 0 {
                    sum += BigUint::from(k).pow(a) * BigUint::from(count);
                }
            }
            if let Some(m) = magic_used {
                sum = sum.max(BigUint::from(m).pow(a));
            }
            Pcc::Exact(sum)
        }
        Alpha::Real(a) => {
            let mut sum = 0.0;
            for (k, &count) in hist.iter().enumerate() {
                if count > 0 && k > 0 {
                    sum += (k as f64).powf(a) * count as f64;
                } else if count > 0 && a == 0.0 {
                    sum += count as f64;
                }
            }
            if let Some(m) = magic_used {
                sum = sum.max((m as f64).powf(a));
            }
            Pcc::Approx(sum)
        }
    }
}

/// Where the graph's optimal space used for the sustained measures came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceSource {
    Solved,
    Supplied,
}

impl fmt::Display for SpaceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceSource::Solved => "solved",
            SpaceSource::Supplied => "supplied",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceSpace {
    pub value: usize,
    pub source: SpaceSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub space: usize,
    pub time: usize,
    /// Λ → #{i ≥ 1 : |P_i| ≥ Λ} for Λ in 0..=space+1
    pub sustained: BTreeMap<usize, usize>,
    pub reference_space: Option<ReferenceSpace>,
    /// sustained count at the graph's optimal space
    pub graph_opt_sustained: Option<usize>,
    /// Δ → sustained count at (optimal space − Δ)
    pub delta_subopt: BTreeMap<usize, usize>,
    pub pcc_alpha: Vec<(Alpha, Pcc)>,
    pub magic_used: usize,
    pub magic_space: usize,
}

/// Computes every measure of a strategy. The strategy is re-validated in
/// parallel mode first.
pub fn measure(
    d: &Dag,
    strat: &PebblingStrategy,
    targets: &[usize],
    alphas: &[Alpha],
    reference: Option<ReferenceSpace>,
) -> Result<CostReport, Violation> {
    validate(d, strat, targets, Rules::new(Mode::Parallel))?;
    let hist = size_histogram(strat);
    let space = hist.len().saturating_sub(1);
    let time = strat.time();
    let sustained_at = |lambda: usize| hist.iter().skip(lambda).sum::<usize>();
    let sustained = (0..=space + 1).map(|l| (l, sustained_at(l))).collect();
    let graph_opt_sustained = reference.map(|r| sustained_at(r.value));
    let delta_subopt = reference
        .map(|r| (0..=r.value).map(|delta| (delta, sustained_at(r.value - delta))).collect())
        .unwrap_or_default();
    let is_magic = strat.kind == GameKind::Magic;
    let magic_used = strat.magic_used();
    let pcc_alpha = alphas
        .iter()
        .map(|&a| (a, pcc_from_histogram(&hist, a, is_magic.then_some(magic_used))))
        .collect();
    Ok(CostReport {
        space,
        time,
        sustained,
        reference_space: reference,
        graph_opt_sustained,
        delta_subopt,
        pcc_alpha,
        magic_used,
        magic_space: space.max(magic_used),
    })
}

pub use crate::solver::{incremental_hardness_check, SubsetReport};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cylinder, pyramid};

    fn seq() -> Rules {
        Rules::new(Mode::Sequential)
    }

    #[test]
    fn pyramid_two_examples() {
        let d = pyramid(2).unwrap();
        let t = d.targets().to_vec();
        let plain = PebblingStrategy::standard(3, &[vec![0], vec![0, 1], vec![0, 1, 2]]);
        validate_standard(&d, &plain, &t, seq()).unwrap();
        let bad = PebblingStrategy::standard(3, &[vec![2]]);
        assert_eq!(validate_standard(&d, &bad, &t, seq()), Err(Violation::IllegalPlacement { step: 1, node: 2 }));
        let slide = PebblingStrategy::standard(3, &[vec![0], vec![0, 1], vec![1, 2]]);
        validate_standard(&d, &slide, &t, seq()).unwrap();
        assert_eq!(
            validate_standard(&d, &slide, &t, seq().without_slides()),
            Err(Violation::SlideForbidden { step: 3, node: 2, pred: 0 })
        );
        let r = measure(&d, &plain, &t, &[Alpha::Int(1), Alpha::Int(2)], None).unwrap();
        assert_eq!((r.space, r.time), (3, 3));
        assert_eq!(r.pcc_alpha[0].1, Pcc::Exact(6u32.into()));
        assert_eq!(r.pcc_alpha[1].1, Pcc::Exact(14u32.into()));
        assert_eq!(r.sustained[&0], 3);
        assert_eq!(measure(&d, &slide, &t, &[], None).unwrap().space, 2);
    }

    #[test]
    fn sequentiality_and_goal() {
        let d = pyramid(2).unwrap();
        let t = d.targets().to_vec();
        let par = PebblingStrategy::standard(3, &[vec![0, 1], vec![2]]);
        validate_standard(&d, &par, &t, Rules::new(Mode::Parallel)).unwrap();
        assert_eq!(validate_standard(&d, &par, &t, seq()), Err(Violation::Sequentiality { step: 1, added: 2 }));
        let short = PebblingStrategy::standard(3, &[vec![0]]);
        assert_eq!(validate_standard(&d, &short, &t, seq()), Err(Violation::GoalNotMet { missing: vec![2] }));
        let persistent = Rules { persistent: true, ..Rules::new(Mode::Parallel) };
        let gone = PebblingStrategy::standard(3, &[vec![0, 1], vec![2], vec![]]);
        validate_standard(&d, &gone, &t, Rules::new(Mode::Parallel)).unwrap();
        assert!(validate_standard(&d, &gone, &t, persistent).is_err());
    }

    #[test]
    fn magic_examples() {
        let d = cylinder(2).unwrap();
        let t = d.targets().to_vec();
        let all = PebblingStrategy::magic(8, &[(vec![], t.clone())], Some(2));
        validate_magic(&d, &all, &t, Rules::new(Mode::Parallel).without_slides()).unwrap();
        assert_eq!(validate_magic(&d, &all, &t, seq()), Err(Violation::Sequentiality { step: 1, added: 2 }));
        let tight = PebblingStrategy { magic_bound: Some(1), ..all };
        assert_eq!(
            validate_magic(&d, &tight, &t, Rules::new(Mode::Parallel)),
            Err(Violation::BudgetExceeded { used: 2, bound: 1 })
        );
        // magic on target 6, then black pebbling of 7 = v_3^1 with two pebbles
        // v_{i+1}^1 is fed by v_i^0 and v_i^1; walk up along column 1 using column 0
        let steps = vec![
            (vec![], vec![6]),
            (vec![0], vec![]),
            (vec![0, 1], vec![]),
            (vec![1, 3], vec![]),
            (vec![3], vec![]),
        ];
        let s = PebblingStrategy::magic(8, &steps, Some(1));
        let err = validate_magic(&d, &s, &t, Rules::new(Mode::Parallel));
        assert!(err.is_err(), "walking one column alone cannot reach the other target");
        let steps = vec![
            (vec![], vec![6]),
            (vec![0, 1], vec![]),
            (vec![2, 3], vec![]),
            (vec![4, 5], vec![]),
            (vec![7], vec![]),
        ];
        let s = PebblingStrategy::magic(8, &steps, Some(1));
        validate_magic(&d, &s, &t, Rules::new(Mode::Parallel)).unwrap();
        let r = measure(&d, &s, &t, &[Alpha::Int(1)], None).unwrap();
        assert_eq!((r.magic_used, r.magic_space), (1, 2));
    }

    #[test]
    fn overlap_rejected() {
        let d = pyramid(2).unwrap();
        let s = PebblingStrategy::magic(3, &[(vec![0], vec![0])], None);
        assert_eq!(validate_magic(&d, &s, &[0], seq()), Err(Violation::Overlap { step: 1, node: 0 }));
    }

    #[test]
    fn pstrat_round_trip_and_slides() {
        let d = pyramid(2).unwrap();
        let text = "PSTRAT1\n+b 0\n+b 1\n> 0:2\n";
        let s = PebblingStrategy::parse_pstrat(text, &d).unwrap();
        assert_eq!(s, PebblingStrategy::standard(3, &[vec![0], vec![0, 1], vec![1, 2]]));
        let again = PebblingStrategy::parse_pstrat(&s.to_pstrat(), &d).unwrap();
        assert_eq!(again, s);
        assert!(matches!(
            PebblingStrategy::parse_pstrat("PSTRAT1\n+b 0\n> 0:1\n", &d),
            Err(ParseError::Move(Violation::IllegalSlide { .. }))
        ));
        assert!(matches!(
            PebblingStrategy::parse_pstrat("PSTRAT1\n+m 0\n> 0:2\n", &d),
            Err(ParseError::Move(Violation::MagicReused { .. }))
        ));
        assert!(matches!(
            PebblingStrategy::parse_pstrat("PSTRAT1\n+b 0 1\n> 0:2 0:2\n", &d),
            Err(ParseError::Move(Violation::DoubleSlide { .. }))
        ));
        let m = PebblingStrategy::parse_pstrat("PSTRAT1 magic 1\n+m 2\n", &d).unwrap();
        assert_eq!((m.kind, m.magic_bound), (GameKind::Magic, Some(1)));
        assert_eq!(m.to_pstrat(), "PSTRAT1 magic 1\n+m 2\n");
    }

    #[test]
    fn real_alpha() {
        let hist = vec![0, 2, 1];
        match pcc_from_histogram(&hist, Alpha::Real(1.5), None) {
            Pcc::Approx(v) => assert!((v - (2.0 + 2f64.powf(1.5))).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(pcc_from_histogram(&hist, Alpha::Int(3), Some(5)), Pcc::Exact(125u32.into()));
    }
}
