use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use resist_core::cache::{connected_codes, Cache};
use resist_core::drs::{
    check_theorems, find_collisions, index_spectra, verdict_from_index, DrsVerdict, TheoremReport,
};
use resist_core::enumerate::Guard;
use resist_core::lemmas::{run_all_checks, LemmaSummary};
use resist_core::network::{
    eliminate_block_network, parallel_reduce, series_reduce, VertexMap, WeightedNetwork,
};
use resist_core::{
    parse_graph6, resistance, resistance_spectrum, to_graph6, Error, ExactRational, Graph,
    ResistanceSpectrum,
};

/// Exact resistance distances and resistance spectra of small graphs.
#[derive(Parser, Debug)]
#[command(name = "resist", version)]
struct Cli {
    /// Cache directory [default: $RESIST_CACHE_DIR, else no cache].
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Output format [default depends on the command].
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    /// Also print 12-digit decimal approximations, marked with `~`.
    #[arg(long, global = true)]
    decimal: bool,
    /// Permit 10-vertex enumeration.
    #[arg(long, global = true)]
    allow_ten: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Tsv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective resistance between two vertices; `-` reads graph6 lines from stdin.
    Resistance { graph6: String, u: usize, v: usize },
    /// Resistance spectrum of each graph6 argument, or of each stdin line.
    Spectrum { graph6: Vec<String> },
    /// Whether a graph is determined by its spectrum; without a target,
    /// sweeps every complete bipartite graph up to --max-n.
    VerifyDrs(VerifyArgs),
    /// Connected graphs on N vertices up to isomorphism, as graph6.
    Enumerate {
        n: usize,
        /// Read and write connected-<n>.g6 in the cache directory.
        #[arg(long)]
        cache: bool,
    },
    /// Non-isomorphic pairs on N vertices with equal spectra.
    Collisions { n: usize },
    /// Runs every lemma check over all connected graphs up to --max-n.
    CheckLemmas {
        #[arg(long)]
        max_n: usize,
    },
    /// Applies reduction steps to a weighted network file.
    Reduce {
        file: PathBuf,
        /// `series:V`, `parallel:U:V` or `eliminate:W:B1,B2,...` (block
        /// vertices including W); ids refer to the network after the
        /// previous steps.
        #[arg(long = "step", required = true)]
        steps: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Target K_{M,N}.
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with = "graph")]
    kmn: Option<Vec<usize>>,
    /// Target graph in graph6, or `-` for stdin lines.
    #[arg(long)]
    graph: Option<String>,
    /// Largest vertex count to accept (sweep bound without a target).
    #[arg(long)]
    max_n: Option<usize>,
}

/// Process outcome distinct from an operational error.
enum Status {
    Ok,
    Violation,
}

struct Ctx {
    cache: Option<Cache>,
    output: Option<Output>,
    decimal: bool,
    guard: Guard,
}

impl Ctx {
    fn output(&self, default: Output) -> Output {
        self.output.unwrap_or(default)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Status, Error> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k as usize)
            .build_global()
            .map_err(|e| Error::Format(format!("cannot start worker pool: {e}")))?;
    }
    let cache = match cli.cache_dir {
        Some(dir) => Some(Cache::new(dir)?),
        None => Cache::from_env()?,
    };
    let ctx = Ctx {
        cache,
        output: cli.output,
        decimal: cli.decimal,
        guard: if cli.allow_ten {
            Guard::AllowTen
        } else {
            Guard::Default
        },
    };
    let mut out = io::BufWriter::new(io::stdout().lock());
    let status = match cli.command {
        Command::Resistance { graph6, u, v } => cmd_resistance(&ctx, &mut out, &graph6, u, v)?,
        Command::Spectrum { graph6 } => cmd_spectrum(&ctx, &mut out, graph6)?,
        Command::VerifyDrs(args) => cmd_verify_drs(&ctx, &mut out, args)?,
        Command::Enumerate { n, cache } => cmd_enumerate(&ctx, &mut out, n, cache)?,
        Command::Collisions { n } => cmd_collisions(&ctx, &mut out, n)?,
        Command::CheckLemmas { max_n } => cmd_check_lemmas(&ctx, &mut out, max_n)?,
        Command::Reduce { file, steps } => cmd_reduce(&ctx, &mut out, &file, &steps)?,
    };
    out.flush()?;
    Ok(status)
}

/// Graph6 inputs: the given strings, or stdin lines when empty or `-`.
fn graph_inputs(args: Vec<String>) -> Result<Vec<Graph>, Error> {
    let lines = if args.is_empty() || args == ["-"] {
        io::stdin().lock().lines().collect::<Result<Vec<_>, _>>()?
    } else {
        args
    };
    lines
        .iter()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_graph6(l).map_err(Error::from))
        .collect()
}

fn approx(r: &ExactRational) -> String {
    format!("~{}", r.approx_string())
}

fn cmd_resistance(
    ctx: &Ctx,
    out: &mut impl Write,
    graph6: &str,
    u: usize,
    v: usize,
) -> Result<Status, Error> {
    for g in graph_inputs(vec![graph6.to_string()])? {
        let r = resistance(&g, u, v)?;
        let g6 = to_graph6(&g);
        match ctx.output(Output::Human) {
            Output::Human if ctx.decimal => writeln!(out, "{r} {}", approx(&r))?,
            Output::Human => writeln!(out, "{r}")?,
            Output::Tsv if ctx.decimal => writeln!(out, "{g6}\t{u}\t{v}\t{r}\t{}", approx(&r))?,
            Output::Tsv => writeln!(out, "{g6}\t{u}\t{v}\t{r}")?,
            Output::Json => {
                let mut obj = json!({"graph": g6, "u": u, "v": v, "resistance": r});
                if ctx.decimal {
                    obj["approximate"] = json!(approx(&r));
                }
                writeln!(out, "{obj}")?
            }
        }
    }
    Ok(Status::Ok)
}

fn approx_spectrum(s: &ResistanceSpectrum) -> serde_json::Value {
    json!(s
        .entries()
        .iter()
        .map(|(r, m)| json!([approx(r), m]))
        .collect::<Vec<_>>())
}

fn cmd_spectrum(ctx: &Ctx, out: &mut impl Write, args: Vec<String>) -> Result<Status, Error> {
    for g in graph_inputs(args)? {
        let s = resistance_spectrum(&g)?;
        match ctx.output(Output::Json) {
            Output::Json if ctx.decimal => writeln!(
                out,
                "{}",
                json!({"spectrum": s, "approximate": approx_spectrum(&s)})
            )?,
            Output::Json => writeln!(out, "{}", s.to_json())?,
            Output::Tsv if ctx.decimal => writeln!(
                out,
                "{}\t{}\t{}",
                to_graph6(&g),
                s.to_json(),
                approx_spectrum(&s)
            )?,
            Output::Tsv => writeln!(out, "{}\t{}", to_graph6(&g), s.to_json())?,
            Output::Human if ctx.decimal => {
                let terms: Vec<String> = s
                    .entries()
                    .iter()
                    .map(|(r, m)| format!("[{r} {}]^{m}", approx(r)))
                    .collect();
                writeln!(out, "{{{}}}", terms.join(", "))?
            }
            Output::Human => writeln!(out, "{s}")?,
        }
    }
    Ok(Status::Ok)
}

fn write_verdicts(ctx: &Ctx, out: &mut impl Write, verdicts: &[DrsVerdict]) -> Result<(), Error> {
    for v in verdicts {
        match ctx.output(Output::Json) {
            Output::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(v).expect("verdict serialises")
            )?,
            Output::Tsv => {
                let impostors: Vec<String> = v.impostors.iter().map(|c| c.graph6()).collect();
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    to_graph6(&v.target),
                    v.theorem_tag.label(),
                    v.determined,
                    impostors.join(",")
                )?
            }
            Output::Human => write_verdict_human(out, v)?,
        }
    }
    Ok(())
}

fn write_verdict_human(out: &mut impl Write, v: &DrsVerdict) -> io::Result<()> {
    let name = match v.parts {
        Some((m, n)) => format!("K_{{{m},{n}}}"),
        None => to_graph6(&v.target),
    };
    let outcome = if v.determined {
        "determined"
    } else {
        "NOT determined"
    };
    writeln!(
        out,
        "{name}: {outcome} [{}], {} impostor(s) among {} connected classes on {} vertices",
        v.theorem_tag.label(),
        v.impostors.len(),
        v.classes_compared,
        v.target.order()
    )?;
    for c in &v.impostors {
        writeln!(out, "  impostor {}", c.graph6())?;
    }
    Ok(())
}

fn verdict_status(verdicts: &[DrsVerdict]) -> Status {
    if verdicts
        .iter()
        .any(|v| v.theorem_tag.is_proven() && !v.determined)
    {
        Status::Violation
    } else {
        Status::Ok
    }
}

fn cmd_verify_drs(ctx: &Ctx, out: &mut impl Write, args: VerifyArgs) -> Result<Status, Error> {
    let max_n = args.max_n.unwrap_or(ctx.guard.max_order());
    ctx.guard.check(max_n)?;
    let targets = match (args.kmn, args.graph) {
        (Some(kmn), _) => vec![Graph::complete_bipartite(kmn[0], kmn[1])?],
        (None, Some(g6)) => graph_inputs(vec![g6])?,
        (None, None) => return sweep_theorems(ctx, out, max_n),
    };
    let mut verdicts = Vec::with_capacity(targets.len());
    for g in &targets {
        if g.order() > max_n {
            return Err(Error::OrderTooLarge {
                order: g.order(),
                max: max_n,
            });
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let index = index_spectra(g.order(), ctx.guard, ctx.cache.as_ref())?;
        verdicts.push(verdict_from_index(g, &index)?);
    }
    write_verdicts(ctx, out, &verdicts)?;
    Ok(verdict_status(&verdicts))
}

fn sweep_theorems(ctx: &Ctx, out: &mut impl Write, max_n: usize) -> Result<Status, Error> {
    let report: TheoremReport = check_theorems(max_n, ctx.guard, ctx.cache.as_ref())?;
    match ctx.output(Output::Json) {
        Output::Json => writeln!(out, "{}", report.to_json())?,
        _ => {
            write_verdicts(ctx, out, &report.verdicts)?;
            if ctx.output(Output::Json) == Output::Human {
                writeln!(out, "{} violation(s)", report.violations)?;
            }
        }
    }
    Ok(verdict_status(&report.verdicts))
}

fn cmd_enumerate(
    ctx: &Ctx,
    out: &mut impl Write,
    n: usize,
    use_cache: bool,
) -> Result<Status, Error> {
    let cache =
        if use_cache {
            Some(ctx.cache.as_ref().ok_or_else(|| {
                Error::Cache("--cache needs --cache-dir or RESIST_CACHE_DIR".into())
            })?)
        } else {
            None
        };
    let codes = connected_codes(n, ctx.guard, cache)?;
    match ctx.output(Output::Human) {
        Output::Json => {
            let list: Vec<String> = codes.iter().map(|c| c.graph6()).collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string(&list).expect("strings serialise")
            )?
        }
        _ => {
            for c in &codes {
                writeln!(out, "{}", c.graph6())?;
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_collisions(ctx: &Ctx, out: &mut impl Write, n: usize) -> Result<Status, Error> {
    let report = find_collisions(n, ctx.guard, ctx.cache.as_ref())?;
    match ctx.output(Output::Json) {
        Output::Json => writeln!(out, "{}", report.to_json())?,
        Output::Tsv => {
            for p in &report.pairs {
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    p.a.graph6(),
                    p.b.graph6(),
                    p.spectrum.to_json()
                )?;
            }
        }
        Output::Human => {
            writeln!(
                out,
                "order {}: {} connected classes, {} distinct spectra, {} colliding pair(s)",
                report.order,
                report.classes,
                report.distinct_spectra,
                report.pairs.len()
            )?;
            for p in &report.pairs {
                writeln!(out, "  {} {} {}", p.a.graph6(), p.b.graph6(), p.spectrum)?;
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_check_lemmas(ctx: &Ctx, out: &mut impl Write, max_n: usize) -> Result<Status, Error> {
    let summary: LemmaSummary = run_all_checks(max_n, ctx.guard)?;
    match ctx.output(Output::Human) {
        Output::Json => writeln!(out, "{}", summary.to_json())?,
        Output::Tsv => {
            for (name, t) in &summary.lemmas {
                writeln!(out, "{name}\t{}\t{}\t{}", t.graphs, t.instances, t.failures)?;
            }
        }
        Output::Human => {
            writeln!(
                out,
                "{} connected graphs on at most {max_n} vertices",
                summary.graphs
            )?;
            for (name, t) in &summary.lemmas {
                writeln!(
                    out,
                    "{name}: {} instances, {} failures",
                    t.instances, t.failures
                )?;
            }
            for w in &summary.witnesses {
                writeln!(
                    out,
                    "witness {:?}: {} {:?} lhs={} rhs={}",
                    w.lemma,
                    to_graph6(&w.witness.graph),
                    w.witness.vertices,
                    w.witness.lhs,
                    w.witness.rhs
                )?;
            }
            writeln!(out, "{} failures", summary.failures)?;
        }
    }
    Ok(if summary.failures == 0 {
        Status::Ok
    } else {
        Status::Violation
    })
}

fn parse_ids(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("bad vertex id {x:?}")))
        })
        .collect()
}

fn apply_step(net: &WeightedNetwork, step: &str) -> Result<(WeightedNetwork, VertexMap), Error> {
    let parts: Vec<&str> = step.split(':').collect();
    let bad = || {
        Error::Format(format!(
            "bad step {step:?}; expected series:V, parallel:U:V or eliminate:W:B1,B2,..."
        ))
    };
    let one = |s: &str| -> Result<usize, Error> {
        match parse_ids(s)?.as_slice() {
            [x] => Ok(*x),
            _ => Err(bad()),
        }
    };
    match parts.as_slice() {
        ["series", v] => series_reduce(net, one(v)?),
        ["parallel", u, v] => {
            let r = parallel_reduce(net, one(u)?, one(v)?)?;
            Ok((r, (0..net.order()).map(Some).collect()))
        }
        ["eliminate", w, block] => eliminate_block_network(net, &parse_ids(block)?, one(w)?),
        _ => Err(bad()),
    }
}

fn cmd_reduce(
    ctx: &Ctx,
    out: &mut impl Write,
    file: &PathBuf,
    steps: &[String],
) -> Result<Status, Error> {
    let text =
        std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    let original: WeightedNetwork = text.parse()?;
    let mut net = original.clone();
    let mut map: VertexMap = (0..net.order()).map(Some).collect();
    for step in steps {
        let (next, step_map) = apply_step(&net, step)?;
        map = map.iter().map(|m| m.and_then(|x| step_map[x])).collect();
        net = next;
    }
    // Re-derive every surviving resistance on both sides.
    let before = original.resistance_matrix()?;
    let after = net.resistance_matrix()?;
    let mut preserved = true;
    for u in 0..original.order() {
        for v in 0..original.order() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                preserved &= before[u][v] == after[a][b];
            }
        }
    }
    match ctx.output(Output::Human) {
        Output::Json => writeln!(
            out,
            "{}",
            json!({"network": net.to_text(), "map": map, "preserved": preserved})
        )?,
        _ => write!(out, "{}", net.to_text())?,
    }
    Ok(if preserved {
        Status::Ok
    } else {
        Status::Violation
    })
}
