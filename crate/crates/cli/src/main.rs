//! `pebble`: generate graphs, solve and check pebblings, build and query
//! static tables, audit oracle traces and benchmark the row evaluator.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pebble_core::audit::{audit, ex_post_facto, QueryTrace, TracingOracle};
use pebble_core::constructions::{cc_alpha_crossover, ConstructionParams, Exponent, Family};
use pebble_core::engine::{
    measure, validate, Alpha, CostReport, Mode, PebblingStrategy, ReferenceSpace, Rules, SpaceSource,
};
use pebble_core::graph::Dag;
use pebble_core::par::Exec;
use pebble_core::shf::{
    h1_graph, h1_streaming, h2, h2_q, HashId, Oracle, OracleSpec, StaticTable, StreamShape,
};
use pebble_core::solver::{
    crossover_alpha, genpeb, min_space_magic, min_space_standard, p1_constant_space, p2_linear_time, sweep,
    wavefront_cylinder, SearchBudget, SolveError,
};

use report::{Format, Table};

const FORMATS: &str = "\
Files:
  PGRAPH1  graph: `PGRAPH1 <nodes> <edges> <max_in_degree>`, `S <sources>`, `T <targets>`, then `<u> <v>` per edge
  PSTRAT1  strategy: header `PSTRAT1 standard|magic [<bound>|inf]`, then one move per line of tokens
           `+b i..`, `-b i..`, `+m i..`, `-m i..`, `> from:to ..` (`|` separators are ignored)
  SHFR1    table: `SHFR1`, u32 LE word_bits, label_bits, count, 32-byte digest, raw labels
  PTRACE1  trace: `PTRACE1 <declared_input_bits>`, then one line per batch of `hex(in):hex(out)` entries

Reports (--csv <file>, in --format csv|json; JSON objects carry the CSV columns):
  solve    game,mode,mbound,space,time,states
  pebble   metric,key,value   (space, time, magic_used, magic_space, sustained[λ],
  measure                     reference_space, graph_opt_sustained, delta_subopt[Δ], pcc_alpha[α])
  audit    step,pebbles,black,magic
  bench    h,out_bits,row_bits,in_bits,rows,hash_calls,formula_hash_calls,setup_seconds,
           eval_microseconds,h2_calls_max,table_bytes   (timing columns vary between runs)

Exit codes: 0 ok, 1 usage or input error, 2 rule violation, 3 search budget exceeded.";

#[derive(Parser)]
#[command(name = "pebble", version, about = "Pebbling games, hard graphs and a static-memory-hard hash", after_help = FORMATS)]
struct Cli {
    /// Seed of the test oracle
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for relative output paths
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Hash behind the random oracle
    #[arg(long, global = true, value_enum, default_value = "blake2b")]
    oracle: OracleKind,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleKind {
    Blake2b,
    Sha512,
    Test,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Game {
    Std,
    Magic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Named {
    Sweep,
    Genpeb,
    Wavefront,
    P1,
    P2,
}

#[derive(Args)]
struct Construction {
    /// pyramid, cylinder, composite-binary-tree, time-optimal, layered-transform, cc-alpha-crossover
    #[arg(long, default_value = "cylinder")]
    family: Family,
    /// Height h, parameter s, or node count n (crossover)
    #[arg(long = "h", visible_alias = "n", visible_alias = "s")]
    size: usize,
    /// Target count of the composite binary tree
    #[arg(long, default_value_t = 1)]
    trees: usize,
    #[arg(long, default_value = "1/4")]
    a: Exponent,
    #[arg(long, default_value = "2/3")]
    b: Exponent,
    #[arg(long, default_value = "2/3")]
    c: Exponent,
    /// Path-length factor of the time-optimal graph
    #[arg(long, default_value_t = 2)]
    c1: usize,
}

impl Construction {
    fn params(&self) -> ConstructionParams {
        ConstructionParams {
            family: self.family,
            size: self.size,
            trees_s: self.trees,
            a: self.a,
            b: self.b,
            c: self.c,
            c1: self.c1,
        }
    }
}

#[derive(Args)]
struct RuleArgs {
    #[arg(long, default_value = "par")]
    mode: Mode,
    /// Forbid removing a predecessor in the move that places its successor
    #[arg(long)]
    no_slides: bool,
    /// Require targets to be pebbled at the end instead of at some point
    #[arg(long)]
    persistent: bool,
}

impl RuleArgs {
    fn rules(&self) -> Rules {
        let r = Rules { persistent: self.persistent, ..Rules::new(self.mode) };
        if self.no_slides {
            r.without_slides()
        } else {
            r
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family instance as PGRAPH1
    Gen {
        #[command(flatten)]
        construction: Construction,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum-space search; prints the witness as PSTRAT1
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "std")]
        game: Game,
        /// Magic budget (default: number of targets)
        #[arg(long)]
        mbound: Option<usize>,
        #[command(flatten)]
        rules: RuleArgs,
        #[arg(long)]
        max_states: Option<usize>,
        #[arg(long)]
        max_pebbles: Option<usize>,
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Write the witness here instead of stdout
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Validate a PSTRAT1 strategy and measure it
    Pebble {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
        /// Comma-separated cumulative-cost exponents
        #[arg(long, default_value = "1")]
        alphas: String,
        /// Known optimal space, used for sustained-space measures
        #[arg(long)]
        reference_space: Option<usize>,
        /// Solve for the optimal space to use as reference
        #[arg(long)]
        solve_reference: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a named strategy for a family instance and measure it
    Measure {
        #[command(flatten)]
        construction: Construction,
        #[arg(long, value_enum)]
        strategy: Named,
        /// Pebbles for P1
        #[arg(long, default_value_t = 2)]
        s1: usize,
        /// Depth exponent for GenPeb
        #[arg(long, default_value_t = 1.0)]
        genpeb_alpha: f64,
        #[arg(long, default_value = "1")]
        alphas: String,
        /// Also locate the α where P1 becomes cheaper than P2 (crossover family)
        #[arg(long)]
        crossover: bool,
        #[arg(long, default_value_t = 64)]
        max_alpha: u32,
        /// Write the strategy as PSTRAT1
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Label a graph and write its target labels as an SHFR1 table
    ShfSetup {
        #[command(flatten)]
        construction: Construction,
        /// Seed input, hex, word_bits long (default all zero)
        #[arg(long)]
        zeta: Option<String>,
        #[arg(long, default_value_t = 512)]
        word_bits: usize,
        /// Keep the first N bits of each label
        #[arg(long)]
        truncate: Option<usize>,
        /// Use the row-streaming evaluator (cylinder only)
        #[arg(long)]
        streaming: bool,
        /// Record the oracle queries as PTRACE1
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate H2 on one input
    ShfEval {
        #[arg(long)]
        table: PathBuf,
        /// Input, hex, word_bits long
        #[arg(long)]
        x: String,
        /// Number of lookups; the table's labels must be word_bits / qprime wide
        #[arg(long, default_value_t = 1)]
        qprime: usize,
    },
    /// Rebuild the black-magic pebbling induced by a query trace and check it
    Audit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Seed input the trace was produced with; its length fixes the word size
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        truncate: Option<usize>,
        /// Write the induced strategy as PSTRAT1
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time table setup with the row evaluator and H2 evaluation
    Bench {
        /// Comma-separated cylinder heights
        #[arg(long, default_value = "2,4,8,16")]
        h: String,
        #[arg(long, default_value_t = 512)]
        word_bits: usize,
        #[arg(long, default_value_t = 1000)]
        evals: usize,
        /// Report zero for the timing columns
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Violation(anyhow::Error),
    Budget(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn solve_failure(e: SolveError) -> Failure {
    if e.is_budget() {
        Failure::Budget(e.into())
    } else {
        Failure::Usage(e.into())
    }
}

struct Ctx {
    seed: u64,
    out_dir: Option<PathBuf>,
    format: Format,
    oracle: OracleKind,
}

impl Ctx {
    fn hash(&self) -> HashId {
        match self.oracle {
            OracleKind::Blake2b => HashId::Blake2b,
            OracleKind::Sha512 => HashId::Sha512,
            OracleKind::Test => HashId::Test { seed: self.seed },
        }
    }

    fn out_path(&self, p: &Path) -> anyhow::Result<PathBuf> {
        match &self.out_dir {
            Some(dir) if p.is_relative() => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                Ok(dir.join(p))
            }
            _ => Ok(p.to_path_buf()),
        }
    }

    fn write(&self, p: &Path, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.out_path(p)?;
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }

    fn write_table(&self, p: &Path, t: &Table) -> anyhow::Result<()> {
        let mut buf = Vec::new();
        t.write(self.format, &mut buf)?;
        self.write(p, &buf)
    }
}

fn read(p: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(p).with_context(|| format!("reading {}", p.display()))
}

fn read_graph(p: &Path) -> anyhow::Result<Dag> {
    Dag::deserialize(&read(p)?).with_context(|| format!("parsing {}", p.display()))
}

fn parse_hex(s: &str, what: &str) -> anyhow::Result<Vec<u8>> {
    let s = s.trim_start_matches("0x").replace(['…', '.'], "");
    hex::decode(&s).map_err(|e| anyhow!("{what}: {e}"))
}

fn parse_alphas(s: &str) -> anyhow::Result<Vec<Alpha>> {
    s.split(',').filter(|a| !a.is_empty()).map(|a| a.trim().parse::<Alpha>().map_err(|e| anyhow!(e))).collect()
}

fn cost_table(r: &CostReport) -> Table {
    let mut t = Table::new(&["metric", "key", "value"]);
    t.row(["space", "", &r.space.to_string()]);
    t.row(["time", "", &r.time.to_string()]);
    t.row(["magic_used", "", &r.magic_used.to_string()]);
    t.row(["magic_space", "", &r.magic_space.to_string()]);
    for (l, c) in &r.sustained {
        t.row(["sustained".to_string(), l.to_string(), c.to_string()]);
    }
    if let Some(rs) = &r.reference_space {
        let source = match rs.source {
            SpaceSource::Solved => "solved",
            SpaceSource::Supplied => "supplied",
        };
        t.row(["reference_space", source, &rs.value.to_string()]);
    }
    if let Some(g) = r.graph_opt_sustained {
        t.row(["graph_opt_sustained", "", &g.to_string()]);
    }
    for (d, c) in &r.delta_subopt {
        t.row(["delta_subopt".to_string(), d.to_string(), c.to_string()]);
    }
    for (a, p) in &r.pcc_alpha {
        t.row(["pcc_alpha".to_string(), a.to_string(), p.to_string()]);
    }
    t
}

fn print_cost(r: &CostReport) {
    println!("space={}", r.space);
    println!("time={}", r.time);
    if r.magic_used > 0 {
        println!("magic_used={}", r.magic_used);
        println!("magic_space={}", r.magic_space);
    }
    if let Some(rs) = &r.reference_space {
        println!("reference_space={}", rs.value);
    }
    if let Some(g) = r.graph_opt_sustained {
        println!("graph_opt_sustained={g}");
    }
    for (a, p) in &r.pcc_alpha {
        println!("pcc_alpha[{a}]={p}");
    }
}

fn gen(ctx: &Ctx, construction: &Construction, out: Option<&Path>) -> Result<()> {
    let params = construction.params();
    let built = params.build()?;
    let bytes = built.dag.serialize();
    match out {
        Some(p) => {
            ctx.write(p, &bytes)?;
            println!("{}", params.describe());
            println!("nodes={}", built.dag.node_count());
            println!("edges={}", built.dag.edge_count());
            println!("targets={}", built.dag.targets().len());
            if built.degenerate {
                println!("degenerate=true");
            }
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    ctx: &Ctx,
    graph: &Path,
    game: Game,
    mbound: Option<usize>,
    rules: Rules,
    budget: SearchBudget,
    witness: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let d = read_graph(graph)?;
    let exec = Exec::default();
    let (key, bound, sol) = match game {
        Game::Std => ("space", None, min_space_standard(&d, d.targets(), rules, &budget, exec)),
        Game::Magic => {
            let m = mbound.unwrap_or(d.targets().len());
            ("magic_space", Some(m), min_space_magic(&d, d.targets(), m, rules, &budget, exec))
        }
    };
    let sol = sol.map_err(solve_failure)?;
    println!("{key}={}", sol.space);
    println!("time={}", sol.witness.time());
    println!("states={}", sol.states);
    let text = sol.witness.to_pstrat();
    match witness {
        Some(p) => ctx.write(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(p) = csv {
        let mut t = Table::new(&["game", "mode", "mbound", "space", "time", "states"]);
        let game = if bound.is_some() { "magic" } else { "std" };
        let mode = if rules.mode == Mode::Sequential { "seq" } else { "par" };
        t.row([
            game.to_string(),
            mode.to_string(),
            bound.map_or(String::new(), |b| b.to_string()),
            sol.space.to_string(),
            sol.witness.time().to_string(),
            sol.states.to_string(),
        ]);
        ctx.write_table(p, &t)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn pebble(
    ctx: &Ctx,
    graph: &Path,
    strategy: &Path,
    rules: Rules,
    alphas: &str,
    reference_space: Option<usize>,
    solve_reference: bool,
    csv: Option<&Path>,
) -> Result<()> {
    let d = read_graph(graph)?;
    let text = String::from_utf8(read(strategy)?).context("strategy is not UTF-8")?;
    let strat = PebblingStrategy::parse_pstrat(&text, &d).with_context(|| format!("parsing {}", strategy.display()))?;
    validate(&d, &strat, d.targets(), rules).map_err(|v| Failure::Violation(anyhow!("violation: {v}")))?;
    let reference = match (reference_space, solve_reference) {
        (Some(value), _) => Some(ReferenceSpace { value, source: SpaceSource::Supplied }),
        (None, true) => {
            let s = min_space_standard(&d, d.targets(), rules, &SearchBudget::default(), Exec::default())
                .map_err(solve_failure)?;
            Some(ReferenceSpace { value: s.space, source: SpaceSource::Solved })
        }
        (None, false) => None,
    };
    let r = measure(&d, &strat, d.targets(), &parse_alphas(alphas)?, reference)
        .map_err(|v| Failure::Violation(anyhow!("violation: {v}")))?;
    println!("valid=true");
    print_cost(&r);
    if let Some(p) = csv {
        ctx.write_table(p, &cost_table(&r))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn measure_named(
    ctx: &Ctx,
    construction: &Construction,
    named: Named,
    s1: usize,
    genpeb_alpha: f64,
    alphas: &str,
    crossover: bool,
    max_alpha: u32,
    emit: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let params = construction.params();
    let crossing = || -> anyhow::Result<_> {
        if params.family != Family::CcAlphaCrossover {
            bail!("P1 and P2 need --family cc-alpha-crossover");
        }
        Ok(cc_alpha_crossover(params.size as u64, params.a, params.b, params.c)?)
    };
    let d = params.build()?.dag;
    let strat = match named {
        Named::Sweep => sweep(&d),
        Named::Genpeb => {
            let g = genpeb(&d, genpeb_alpha);
            println!("depth_target={}", g.depth_target);
            println!("depth_reducing_set={}", g.depth_reducing_set.len());
            println!("size_target={:.3}", g.size_target);
            println!("within_size_target={}", g.within_size_target);
            g.strategy
        }
        Named::Wavefront => {
            if params.family != Family::Cylinder {
                return Err(anyhow!("the wavefront strategy needs --family cylinder").into());
            }
            wavefront_cylinder(params.size)
        }
        Named::P1 => p1_constant_space(&crossing()?, s1).map_err(solve_failure)?,
        Named::P2 => p2_linear_time(&crossing()?),
    };
    let r = measure(&d, &strat, d.targets(), &parse_alphas(alphas)?, None)
        .map_err(|v| Failure::Violation(anyhow!("violation: {v}")))?;
    println!("{}", params.describe());
    print_cost(&r);
    if crossover {
        let x = crossing()?;
        let p1 = p1_constant_space(&x, s1).map_err(solve_failure)?;
        let c = crossover_alpha(&p2_linear_time(&x), &p1, max_alpha);
        println!("pcc_1_p2={}", c.at_one.0);
        println!("pcc_1_p1={}", c.at_one.1);
        match c.alpha {
            Some(a) => println!("crossover_alpha={a:.9}"),
            None => println!("crossover_alpha=none"),
        }
    }
    if let Some(p) = emit {
        ctx.write(p, strat.to_pstrat().as_bytes())?;
    }
    if let Some(p) = csv {
        ctx.write_table(p, &cost_table(&r))?;
    }
    Ok(())
}

fn oracle_spec(ctx: &Ctx, word_bits: usize, truncate: Option<usize>) -> anyhow::Result<OracleSpec> {
    let spec = OracleSpec::new(word_bits, ctx.hash())?;
    Ok(match truncate {
        Some(t) => spec.truncated(t)?,
        None => spec,
    })
}

#[allow(clippy::too_many_arguments)]
fn shf_setup(
    ctx: &Ctx,
    construction: &Construction,
    zeta: Option<&str>,
    word_bits: usize,
    truncate: Option<usize>,
    streaming: bool,
    trace: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let spec = oracle_spec(ctx, word_bits, truncate)?;
    let zeta = match zeta {
        Some(z) => parse_hex(z, "--zeta")?,
        None => vec![0; spec.word_bytes()],
    };
    let params = construction.params();
    let base = spec.oracle();
    let tracer = TracingOracle::new(&base);
    let table = if streaming {
        if params.family != Family::Cylinder {
            return Err(anyhow!("--streaming evaluates cylinders only").into());
        }
        let shape = StreamShape { width: params.size, degree: 2, levels: 2 * params.size };
        let s = h1_streaming(&tracer, &spec, &zeta, &shape)?;
        println!("buffer_labels={}", s.buffer_labels);
        s.table
    } else {
        let built = params.build()?;
        h1_graph(&built.dag, &params.describe(), &tracer, &spec, &zeta, Exec::default())?
    };
    let calls = tracer.calls();
    let recorded = tracer.finish(0);
    ctx.write(out, &table.to_bytes())?;
    if let Some(p) = trace {
        ctx.write(p, recorded.to_text().as_bytes())?;
    }
    println!("{}", params.describe());
    println!("labels={}", table.count());
    println!("word_bits={}", table.word_bits);
    println!("label_bits={}", table.label_bits);
    println!("table_bytes={}", table.bits() / 8);
    println!("oracle_calls={calls}");
    println!("digest={}", hex::encode(table.digest));
    Ok(())
}

fn shf_eval(ctx: &Ctx, table: &Path, x: &str, qprime: usize) -> Result<()> {
    let table = StaticTable::from_bytes(&read(table)?)?;
    let spec = OracleSpec::new(table.word_bits, ctx.hash())?;
    let x = parse_hex(x, "--x")?;
    let e = h2_q(&table, &spec.oracle(), &x, qprime)?;
    let idx: Vec<String> = e.indices.iter().map(usize::to_string).collect();
    println!("output={}", hex::encode(&e.output));
    println!("indices={}", idx.join(","));
    println!("oracle_calls={}", e.oracle_calls);
    Ok(())
}

fn audit_cmd(
    ctx: &Ctx,
    graph: &Path,
    trace: &Path,
    zeta: &str,
    truncate: Option<usize>,
    emit: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let d = read_graph(graph)?;
    let text = String::from_utf8(read(trace)?).context("trace is not UTF-8")?;
    let trace = QueryTrace::parse(&text)?;
    let zeta = parse_hex(zeta, "--zeta")?;
    let spec = oracle_spec(ctx, zeta.len() * 8, truncate)?;
    let e = ex_post_facto(&d, &spec, &zeta, &trace)?;
    let r = audit(&d, &e.strategy, trace.declared_input_bits, spec.word_bits);
    println!("legal={}", r.legal());
    if let Some(v) = &r.violation {
        println!("violation={v}");
    }
    println!("goal_met={}", r.goal_met);
    println!("magic_used={}", r.magic_used);
    println!("chi={}", r.chi);
    println!("flagged={}", r.flagged);
    println!("matched={}", e.matched);
    println!("unmatched={}", e.unmatched);
    println!("max_pebbles={}", r.timeline.iter().max().copied().unwrap_or(0));
    if let Some(p) = emit {
        ctx.write(p, e.strategy.to_pstrat().as_bytes())?;
    }
    if let Some(p) = csv {
        let mut t = Table::new(&["step", "pebbles", "black", "magic"]);
        for (i, c) in e.strategy.configs.iter().enumerate() {
            t.row([i, c.size(), c.black.count_ones(..), c.magic.count_ones(..)]);
        }
        ctx.write_table(p, &t)?;
    }
    match r.violation {
        Some(v) => Err(Failure::Violation(anyhow!("induced pebbling is illegal: {v}"))),
        None => Ok(()),
    }
}

fn bench(ctx: &Ctx, heights: &str, word_bits: usize, evals: usize, no_timing: bool, csv: Option<&Path>) -> Result<()> {
    let spec = OracleSpec::new(word_bits, ctx.hash())?;
    let heights: Vec<usize> = heights
        .split(',')
        .map(|h| h.trim().parse::<usize>().map_err(|e| anyhow!("--h `{h}`: {e}")))
        .collect::<anyhow::Result<_>>()?;
    let mut t = Table::new(&[
        "h",
        "out_bits",
        "row_bits",
        "in_bits",
        "rows",
        "hash_calls",
        "formula_hash_calls",
        "setup_seconds",
        "eval_microseconds",
        "h2_calls_max",
        "table_bytes",
    ]);
    for h in heights {
        let (n, l, i) = (word_bits, h * word_bits, 2 * word_bits);
        let shape = StreamShape::from_bits(l, i, n, None)?;
        let start = Instant::now();
        let s = h1_streaming(&spec.oracle(), &spec, &vec![0; spec.word_bytes()], &shape)?;
        let setup = start.elapsed().as_secs_f64();
        let formula = (l as u128 * l as u128) / (n as u128 * i as u128 - n as u128 * n as u128);
        let oracle = spec.oracle();
        let mut max_calls = 0;
        let start = Instant::now();
        for k in 0..evals {
            let mut x = vec![0u8; spec.word_bytes()];
            x[..8].copy_from_slice(&(k as u64).to_be_bytes());
            max_calls = max_calls.max(h2(&s.table, &oracle, &x)?.oracle_calls);
        }
        let eval_us = start.elapsed().as_secs_f64() * 1e6 / evals.max(1) as f64;
        let (setup, eval_us) = if no_timing { (0.0, 0.0) } else { (setup, eval_us) };
        t.row([
            h.to_string(),
            n.to_string(),
            l.to_string(),
            i.to_string(),
            shape.levels.to_string(),
            s.hash_calls.to_string(),
            formula.to_string(),
            format!("{setup:.6}"),
            format!("{eval_us:.3}"),
            max_calls.to_string(),
            (s.table.bits() / 8).to_string(),
        ]);
    }
    match csv {
        Some(p) => ctx.write_table(p, &t)?,
        None => t.write(ctx.format, std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx { seed: cli.seed, out_dir: cli.out_dir, format: cli.format, oracle: cli.oracle };
    match cli.command {
        Command::Gen { construction, out } => gen(&ctx, &construction, out.as_deref()),
        Command::Solve { graph, game, mbound, rules, max_states, max_pebbles, max_seconds, witness, csv } => {
            let defaults = SearchBudget::default();
            let budget = SearchBudget {
                max_pebbles: max_pebbles.unwrap_or(defaults.max_pebbles),
                max_states: max_states.unwrap_or(defaults.max_states),
                max_seconds: max_seconds.unwrap_or(defaults.max_seconds),
            };
            solve(&ctx, &graph, game, mbound, rules.rules(), budget, witness.as_deref(), csv.as_deref())
        }
        Command::Pebble { graph, strategy, rules, alphas, reference_space, solve_reference, csv } => pebble(
            &ctx,
            &graph,
            &strategy,
            rules.rules(),
            &alphas,
            reference_space,
            solve_reference,
            csv.as_deref(),
        ),
        Command::Measure { construction, strategy, s1, genpeb_alpha, alphas, crossover, max_alpha, emit, csv } => {
            measure_named(
                &ctx,
                &construction,
                strategy,
                s1,
                genpeb_alpha,
                &alphas,
                crossover,
                max_alpha,
                emit.as_deref(),
                csv.as_deref(),
            )
        }
        Command::ShfSetup { construction, zeta, word_bits, truncate, streaming, trace, out } => shf_setup(
            &ctx,
            &construction,
            zeta.as_deref(),
            word_bits,
            truncate,
            streaming,
            trace.as_deref(),
            &out,
        ),
        Command::ShfEval { table, x, qprime } => shf_eval(&ctx, &table, &x, qprime),
        Command::Audit { graph, trace, zeta, truncate, emit, csv } => {
            audit_cmd(&ctx, &graph, &trace, &zeta, truncate, emit.as_deref(), csv.as_deref())
        }
        Command::Bench { h, word_bits, evals, no_timing, csv } => {
            bench(&ctx, &h, word_bits, evals, no_timing, csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(e)) => {
            eprintln!("{e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(e)) => {
            eprintln!("{e:#}");
            ExitCode::from(3)
        }
    }
}
