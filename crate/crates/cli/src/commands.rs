use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graphkit::centrality::{self, BetweennessOptions, PageRankOptions};
use graphkit::community::{self, LeidenOptions, LouvainOptions, Objective, Partition};
use graphkit::layout::{self, FrOptions, UmapOptions};
use graphkit::paths;
use graphkit::patterns::{self, Connectedness};
use graphkit::svg::{render_svg, SvgStyle};
use graphkit::{generators, io as gio, Graph, Mode};

use crate::bench::{self, Family};

#[derive(Debug, Parser)]
#[command(
    name = "graphkit",
    version,
    about = "Graph generation, analysis and layout"
)]
pub struct Cli {
    /// Worker threads for algorithms that parallelize.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph from a generator family.
    Generate(GenerateArgs),
    /// Run a single-graph algorithm and write CSV.
    Analyze(AnalyzeArgs),
    /// Detect communities and write a membership CSV.
    Communities(CommunityArgs),
    /// Compute vertex coordinates, optionally rendering SVG.
    Layout(LayoutArgs),
    /// Time graph construction across sizes.
    Bench(BenchArgs),
    /// Convert between edge-list and graph-document files.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edges,
    Gdoc,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Input format; inferred from the extension (.edges, .gdoc) by default.
    #[arg(long = "format")]
    pub format: Option<Format>,
    /// Read an edge list as directed (graph documents record this).
    #[arg(long)]
    pub directed: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GenFamily {
    Ring,
    Tree,
    Full,
    Gnm,
    Gnp,
    Ba,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub family: GenFamily,
    #[arg(long)]
    pub n: u64,
    /// Children per vertex (tree) or edges per new vertex (ba).
    #[arg(long, default_value_t = 2)]
    pub k: u64,
    /// Edge count (gnm).
    #[arg(long)]
    pub m: Option<u64>,
    /// Edge probability (gnp).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub directed: bool,
    /// Ring without the closing edge.
    #[arg(long)]
    pub open: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long = "format")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Degree,
    Bfs,
    Dfs,
    Toposort,
    ShortestPath,
    #[value(alias = "ksp")]
    Kpaths,
    Betweenness,
    Pagerank,
    Closeness,
    Components,
    Motifs,
    Cliques,
    Maxclique,
    Cyclebasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Out,
    In,
    All,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Out => Mode::Out,
            ModeArg::In => Mode::In,
            ModeArg::All => Mode::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub op: Op,
    #[command(flatten)]
    pub input: InputArgs,
    /// CSV destination; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Numeric edge attribute used as weights.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub source: u64,
    #[arg(long)]
    pub target: Option<u64>,
    /// Number of paths (kpaths).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Motif size.
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    pub mode: ModeArg,
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    /// Strong components instead of weak ones.
    #[arg(long)]
    pub strong: bool,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    #[arg(long)]
    pub max_size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Louvain,
    Leiden,
    Fluid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Modularity,
    Cpm,
}

#[derive(Debug, Args)]
pub struct CommunityArgs {
    #[arg(long, value_enum, default_value_t = Method::Leiden)]
    pub method: Method,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Modularity)]
    pub objective: ObjectiveArg,
    #[arg(long, visible_alias = "gamma", default_value_t = 1.0)]
    pub resolution: f64,
    /// Leiden passes; 0 runs until stable.
    #[arg(long, default_value_t = 2)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.01)]
    pub theta: f64,
    /// Number of communities (fluid).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Circle,
    Fr,
    Kk,
    Umap,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[command(flatten)]
    pub input: InputArgs,
    /// Coordinate CSV destination; stdout when absent and no SVG is asked for.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub min_dist: f64,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub labels: bool,
    #[arg(long, default_value_t = 400.0)]
    pub width: f64,
    #[arg(long, default_value_t = 400.0)]
    pub height: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// `ring`, `tree`, or both when repeated.
    #[arg(long = "family", default_values_t = vec![Family::Ring, Family::Tree])]
    pub families: Vec<Family>,
    /// Edge-count targets, ascending.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100_000, 1_000_000, 10_000_000])]
    pub sizes: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long = "to")]
    pub to: Option<Format>,
}

fn infer_format(path: &Path, explicit: Option<Format>) -> Result<Format> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("edges") => Ok(Format::Edges),
        Some("gdoc") => Ok(Format::Gdoc),
        _ => bail!(
            "cannot infer format of '{}'; use .edges or .gdoc or pass --format",
            path.display()
        ),
    }
}

pub fn read_graph(args: &InputArgs) -> Result<Graph> {
    let format = infer_format(&args.input, args.format)?;
    let file = File::open(&args.input)
        .with_context(|| format!("cannot open '{}'", args.input.display()))?;
    let reader = BufReader::new(file);
    let g = match format {
        Format::Edges => gio::read_edgelist(reader, args.directed),
        Format::Gdoc => gio::read_graphdoc(reader),
    }
    .with_context(|| format!("reading '{}'", args.input.display()))?;
    Ok(g)
}

pub fn write_graph(g: &Graph, path: &Path, format: Option<Format>) -> Result<()> {
    let format = infer_format(path, format)?;
    let file = File::create(path).with_context(|| format!("cannot create '{}'", path.display()))?;
    let sink = BufWriter::new(file);
    match format {
        Format::Edges => gio::write_edgelist(g, sink)?,
        Format::Gdoc => gio::write_graphdoc(g, sink)?,
    }
    Ok(())
}

fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create '{}'", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Explicit seed, or a fresh one announced on stderr.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        let seed = nanos ^ (u64::from(std::process::id()) << 32);
        eprintln!("seed: {seed}");
        seed
    })
}

fn weights<'g>(g: &'g Graph, name: &Option<String>) -> Result<Option<&'g [f64]>> {
    match name {
        Some(n) => Ok(Some(g.edge_weights(n)?)),
        None => Ok(None),
    }
}

/// Shortest decimal that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a, cli.threads),
        Command::Communities(a) => communities(a),
        Command::Layout(a) => layout_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Convert(a) => {
            let g = read_graph(&a.input)?;
            write_graph(&g, &a.output, a.to)
        }
    }
}

fn generate(a: GenerateArgs) -> Result<()> {
    let g = match a.family {
        GenFamily::Ring => generators::try_ring(a.n, a.directed, !a.open)?,
        GenFamily::Tree => generators::regular_tree(a.n, a.k, a.directed)?,
        GenFamily::Full => generators::full_graph(a.n, a.directed)?,
        GenFamily::Gnm => {
            let m = a.m.context("gnm needs --m")?;
            generators::erdos_renyi_gnm(a.n, m, a.directed, resolve_seed(a.seed))?
        }
        GenFamily::Gnp => {
            let p = a.p.context("gnp needs --p")?;
            generators::erdos_renyi_gnp(a.n, p, a.directed, resolve_seed(a.seed))?
        }
        GenFamily::Ba => {
            if a.directed {
                bail!("ba graphs are undirected");
            }
            generators::barabasi_albert(a.n, a.k, resolve_seed(a.seed))?
        }
    };
    write_graph(&g, &a.output, a.format)
}

fn write_scores(out: &mut dyn Write, scores: &[f64]) -> io::Result<()> {
    writeln!(out, "vertex,score")?;
    for (v, s) in scores.iter().enumerate() {
        writeln!(out, "{v},{}", fmt_f64(*s))?;
    }
    Ok(())
}

fn write_paths(out: &mut dyn Write, list: &[paths::PathResult]) -> io::Result<()> {
    writeln!(out, "path,weight,vertices")?;
    for (i, p) in list.iter().enumerate() {
        writeln!(out, "{i},{},{}", fmt_f64(p.total_weight), join(&p.vertices))?;
    }
    Ok(())
}

fn analyze(a: AnalyzeArgs, threads: usize) -> Result<()> {
    let g = read_graph(&a.input)?;
    let w = weights(&g, &a.weights)?;
    let mut out = open_sink(a.output.as_deref())?;
    let out = out.as_mut();
    match a.op {
        Op::Degree => {
            writeln!(out, "vertex,degree")?;
            for (v, d) in g.degrees(a.mode.into(), true).iter().enumerate() {
                writeln!(out, "{v},{d}")?;
            }
        }
        Op::Bfs => {
            let (order, dist) = paths::bfs(&g, a.source)?;
            writeln!(out, "rank,vertex,distance")?;
            for (i, v) in order.iter().enumerate() {
                writeln!(out, "{i},{v},{}", dist.distances[*v as usize])?;
            }
        }
        Op::Dfs | Op::Toposort => {
            let order = if a.op == Op::Dfs {
                paths::dfs(&g, a.source)?
            } else {
                paths::topological_sort(&g)?
            };
            writeln!(out, "rank,vertex")?;
            for (i, v) in order.iter().enumerate() {
                writeln!(out, "{i},{v}")?;
            }
        }
        Op::ShortestPath | Op::Kpaths => {
            let t = a.target.context("--target is required")?;
            let list = if a.op == Op::ShortestPath {
                paths::shortest_path(&g, a.source, t, w)?
                    .into_iter()
                    .collect()
            } else {
                paths::k_shortest_paths(&g, a.source, t, a.k, w)?
            };
            write_paths(out, &list)?;
        }
        Op::Betweenness => {
            let opts = BetweennessOptions {
                weights: w,
                normalized: a.normalized,
                threads,
            };
            write_scores(out, &centrality::betweenness_with(&g, &opts)?.scores)?;
        }
        Op::Pagerank => {
            let opts = PageRankOptions {
                damping: a.damping,
                weights: w,
                ..Default::default()
            };
            write_scores(out, &centrality::pagerank(&g, &opts)?.scores)?;
        }
        Op::Closeness => {
            write_scores(
                out,
                &centrality::closeness(&g, a.mode.into(), a.normalized).scores,
            )?;
        }
        Op::Components => {
            let mode = if a.strong {
                Connectedness::Strong
            } else {
                Connectedness::Weak
            };
            let c = patterns::connected_components(&g, mode)?;
            writeln!(out, "vertex,component")?;
            for (v, id) in c.membership.iter().enumerate() {
                writeln!(out, "{v},{id}")?;
            }
        }
        Op::Motifs => {
            let census = patterns::motif_census(&g, a.size)?;
            writeln!(out, "class,count")?;
            for (c, n) in census.classes.iter().zip(&census.counts) {
                writeln!(out, "{c},{n}")?;
            }
        }
        Op::Cliques => {
            writeln!(out, "clique,vertices")?;
            for (i, c) in patterns::maximal_cliques(&g, a.min_size, a.max_size)?
                .iter()
                .enumerate()
            {
                writeln!(out, "{i},{}", join(c))?;
            }
        }
        Op::Maxclique => {
            writeln!(out, "vertex")?;
            for v in patterns::max_clique(&g)? {
                writeln!(out, "{v}")?;
            }
        }
        Op::Cyclebasis => {
            let basis = patterns::minimum_cycle_basis(&g, w)?;
            writeln!(out, "cycle,weight,edges")?;
            for (i, (c, wt)) in basis.cycles.iter().zip(&basis.weights).enumerate() {
                writeln!(out, "{i},{},{}", fmt_f64(*wt), join(c))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// `# key=value ...` provenance line followed by `vertex,community` rows.
pub fn write_partition(out: &mut dyn Write, p: &Partition) -> io::Result<()> {
    write!(
        out,
        "# method={} objective={} resolution={} quality={}",
        p.method,
        p.objective.name(),
        fmt_f64(p.resolution),
        fmt_f64(p.quality)
    )?;
    if let Some(seed) = p.seed {
        write!(out, " seed={seed}")?;
    }
    if let Some(theta) = p.theta {
        write!(out, " theta={}", fmt_f64(theta))?;
    }
    writeln!(out)?;
    writeln!(out, "vertex,community")?;
    for (v, c) in p.membership.iter().enumerate() {
        writeln!(out, "{v},{c}")?;
    }
    Ok(())
}

fn communities(a: CommunityArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let w = weights(&g, &a.weights)?;
    let seed = resolve_seed(a.seed);
    let objective = match a.objective {
        ObjectiveArg::Modularity => Objective::Modularity,
        ObjectiveArg::Cpm => Objective::Cpm,
    };
    let p = match a.method {
        Method::Louvain => {
            if objective != Objective::Modularity {
                bail!("louvain optimizes modularity only");
            }
            community::louvain(
                &g,
                &LouvainOptions {
                    resolution: a.resolution,
                    seed,
                    weights: w,
                },
            )?
        }
        Method::Leiden => community::leiden(
            &g,
            &LeidenOptions {
                objective,
                resolution: a.resolution,
                seed,
                iterations: a.iterations,
                theta: a.theta,
                weights: w,
            },
        )?,
        Method::Fluid => community::fluid_communities(&g, a.k, seed, a.max_iter)?,
    };
    let mut out = open_sink(a.output.as_deref())?;
    write_partition(out.as_mut(), &p)?;
    out.flush()?;
    Ok(())
}

fn layout_cmd(a: LayoutArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let coords = match a.algo {
        Algo::Circle => layout::circle(&g),
        Algo::Kk => layout::kamada_kawai(&g)?,
        Algo::Fr => layout::fruchterman_reingold(
            &g,
            &FrOptions {
                iterations: a.iterations,
                seed: resolve_seed(a.seed),
                start: None,
            },
        )?,
        Algo::Umap => layout::umap(
            &g,
            &UmapOptions {
                min_dist: a.min_dist,
                epochs: a.epochs,
                seed: resolve_seed(a.seed),
                weights: weights(&g, &a.weights)?,
                start: None,
            },
        )?,
    };
    if let Some(path) = &a.svg {
        let style = SvgStyle {
            width: a.width,
            height: a.height,
            labels: a.labels,
            ..Default::default()
        };
        let doc = render_svg(&g, &coords.coords, &style)?;
        std::fs::write(path, doc).with_context(|| format!("cannot write '{}'", path.display()))?;
    }
    if a.output.is_some() || a.svg.is_none() {
        let mut out = open_sink(a.output.as_deref())?;
        writeln!(out, "vertex,x,y")?;
        for (v, p) in coords.coords.iter().enumerate() {
            writeln!(out, "{v},{},{}", fmt_f64(p[0]), fmt_f64(p[1]))?;
        }
        out.flush()?;
    }
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<()> {
    let mut records = Vec::new();
    for &family in &a.families {
        let recs = bench::bench_scaling(family, &a.sizes, a.reps)?;
        match bench::loglog_slope(&recs) {
            Some(s) => eprintln!("{family}: log-log slope {s:.3}"),
            None => eprintln!("{family}: not enough successful sizes for a slope"),
        }
        records.extend(recs);
    }
    let mut out = open_sink(a.output.as_deref())?;
    bench::write_csv(&records, &mut out)?;
    out.flush()?;
    Ok(())
}
