//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime errors (I/O, parsing, budgets),
//! 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::eval::{completeness_ratio, dedup_isomorphic, normalize_gram, DEFAULT_ISOMORPHISM_BUDGET};
use crate::graph::GraphCollection;
use crate::graph_kernel::{gram_matrix, GraphKernelSpec, GramOptions, KernelKind};
use crate::node_kernel::{walk_node_kernels, Alpha, NodeKernelParams};
use crate::refine::{morgan_ec, walk_partition, wl_shared_colors, Labeling};
use crate::tudataset::parse_tudataset;

#[derive(Parser, Debug)]
#[command(name = "ncwalk", version, about = "Walk-based graph kernels and node refinement")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a Gram matrix over a dataset.
    Gram(GramArgs),
    /// Print node labelings of a refinement method.
    Refine(RefineArgs),
    /// Print the node-pair kernel of one graph.
    NodeKernel(NodeKernelArgs),
    /// Completeness ratios per kernel and walk length.
    Completeness(CompletenessArgs),
    /// Print the indices of one representative per isomorphism class.
    Dedup(DedupArgs),
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Dataset directory in TUDataset format.
    #[arg(long)]
    dataset: PathBuf,
    /// File prefix; defaults to the directory name.
    #[arg(long)]
    name: Option<String>,
}

impl DatasetArgs {
    fn load(&self) -> Result<GraphCollection> {
        let name = match &self.name {
            Some(n) => n.clone(),
            None => self
                .dataset
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::contract("cannot infer the dataset name; pass --name"))?
                .to_string(),
        };
        let c = parse_tudataset(&self.dataset, &name)?;
        log::info!("loaded {} graphs from {}", c.len(), self.dataset.display());
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Precomputed,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long)]
    kernel: KernelKind,
    /// Walk length / WL iterations.
    #[arg(long = "l", default_value_t = 3)]
    len: usize,
    /// Gaussian bandwidth, or `inf`.
    #[arg(long, default_value = "1")]
    alpha: Alpha,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Comma-separated RW weights; defaults to all ones.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Cosine-normalize the matrix.
    #[arg(long)]
    normalize: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Drop isomorphic duplicates first.
    #[arg(long)]
    dedup: bool,
    #[arg(long, default_value_t = GramOptions::default().max_product_nodes)]
    max_product_nodes: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Wl,
    Morgan,
    Walkp,
}

#[derive(Args, Debug)]
struct RefineArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_enum, default_value_t = Method::Wl)]
    method: Method,
    /// WL iterations or walk length (ignored by morgan).
    #[arg(long, default_value_t = 3)]
    iters: usize,
    /// Only this graph (0-based).
    #[arg(long)]
    graph: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NodeKernelArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Graph index (0-based).
    #[arg(long, default_value_t = 0)]
    graph: usize,
    #[arg(long = "l", default_value_t = 3)]
    len: usize,
    #[arg(long, default_value = "1")]
    alpha: Alpha,
    /// Enable WL re-encoding.
    #[arg(long)]
    wl: bool,
    /// Iteration to print (default: the last).
    #[arg(long)]
    iteration: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompletenessArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_delimiter = ',', default_value = "wl,ncw,rw")]
    kernels: Vec<KernelKind>,
    #[arg(long, default_value_t = 5)]
    max_l: usize,
    #[arg(long, default_value = "1000")]
    alpha: Alpha,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Skip isomorphism deduplication.
    #[arg(long)]
    no_dedup: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DedupArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value_t = DEFAULT_ISOMORPHISM_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Contract(msg) => Failure::Usage(msg),
            other => Failure::Runtime(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn spec_for(kind: KernelKind, len: usize, alpha: Alpha, beta: f64, lambda: Option<Vec<f64>>) -> GraphKernelSpec {
    match kind {
        KernelKind::Ncw => GraphKernelSpec::ncw(len, alpha, beta),
        KernelKind::NcwWl => GraphKernelSpec::ncw_wl(len, alpha, beta),
        KernelKind::Rw => match lambda {
            Some(l) => GraphKernelSpec {
                len,
                ..GraphKernelSpec::rw_weighted(l)
            },
            None => GraphKernelSpec::rw(len),
        },
        KernelKind::Wl => GraphKernelSpec::wl(len),
        KernelKind::Vl => GraphKernelSpec::vl(),
        KernelKind::El => GraphKernelSpec::el(),
    }
}

fn gram(args: &GramArgs) -> std::result::Result<(), Failure> {
    let spec = spec_for(args.kernel, args.len, args.alpha, args.beta, args.lambda.clone());
    spec.validate()?;
    let mut c = args.data.load()?;
    if args.dedup {
        c = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET).collection;
        log::info!("{} graphs after deduplication", c.len());
    }
    let opts = GramOptions {
        max_product_nodes: args.max_product_nodes,
        ..GramOptions::default()
    };
    let mut gm = gram_matrix(&c, &spec, &opts).map_err(Failure::Runtime)?;
    if args.normalize {
        gm = normalize_gram(&gm).map_err(Failure::Runtime)?;
    }
    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        Format::Csv => gm.write_csv(&mut out)?,
        Format::Precomputed => gm.write_precomputed(&mut out, c.class_labels.as_deref())?,
    }
    out.flush()?;
    Ok(())
}

fn write_labeling(out: &mut dyn Write, graph: usize, step: usize, ids: &[u32]) -> io::Result<()> {
    writeln!(out, "# graph {graph} step {step}")?;
    for id in ids {
        writeln!(out, "{id}")?;
    }
    Ok(())
}

fn refine(args: &RefineArgs) -> std::result::Result<(), Failure> {
    let c = args.data.load()?;
    let selected: Vec<usize> = match args.graph {
        Some(g) if g >= c.len() => {
            return Err(Failure::Usage(format!("graph {g} out of range 0..{}", c.len())))
        }
        Some(g) => vec![g],
        None => (0..c.len()).collect(),
    };
    let mut out = open_output(args.out.as_deref())?;
    match args.method {
        Method::Wl => {
            // one dictionary for the whole dataset, so ids compare across graphs
            let colors = wl_shared_colors(&c.graphs, args.iters);
            for &g in &selected {
                for (step, level) in colors.iter().enumerate() {
                    write_labeling(&mut out, g, step, &level[g])?;
                }
            }
        }
        Method::Morgan => {
            for &g in &selected {
                let ec = morgan_ec(&c.graphs[g]).map_err(Failure::Runtime)?;
                for (i, values) in ec.history.iter().enumerate() {
                    let lab = Labeling::from_values(values.iter().copied());
                    write_labeling(&mut out, g, i + 1, lab.as_slice())?;
                }
            }
        }
        Method::Walkp => {
            for &g in &selected {
                let wp = walk_partition(&c.graphs[g], args.iters).map_err(Failure::Runtime)?;
                for step in 0..=args.iters {
                    write_labeling(&mut out, g, step, wp.truncated_labeling(step + 1).as_slice())?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn node_kernel(args: &NodeKernelArgs) -> std::result::Result<(), Failure> {
    let params = NodeKernelParams {
        len: args.len,
        alpha: args.alpha,
        wl_mode: args.wl,
    };
    params.validate()?;
    let iteration = args.iteration.unwrap_or(args.len);
    if iteration > args.len {
        return Err(Failure::Usage(format!(
            "iteration {iteration} exceeds the walk length {}",
            args.len
        )));
    }
    let c = args.data.load()?;
    let g = c
        .graphs
        .get(args.graph)
        .ok_or_else(|| Failure::Usage(format!("graph {} out of range 0..{}", args.graph, c.len())))?;
    let k = walk_node_kernels(g, &params)?;
    let mut out = open_output(args.out.as_deref())?;
    let n = k.node_count();
    for u in 0..n {
        for v in 0..n {
            if k.is_pair(u, v) {
                writeln!(out, "{u} {v} {}", k.k_hat(iteration, u, v))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn completeness(args: &CompletenessArgs) -> std::result::Result<(), Failure> {
    let mut c = args.data.load()?;
    if !args.no_dedup {
        c = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET).collection;
        log::info!("{} graphs after deduplication", c.len());
    }
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "kernel\tl\tratio")?;
    for &kind in &args.kernels {
        for len in 0..=args.max_l {
            let spec = spec_for(kind, len, args.alpha, args.beta, None);
            if spec.validate().is_err() {
                // e.g. NCWWL at length 0
                continue;
            }
            let gm = gram_matrix(&c, &spec, &GramOptions::default()).map_err(Failure::Runtime)?;
            writeln!(out, "{kind}\t{len}\t{}", completeness_ratio(&gm, None))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn dedup(args: &DedupArgs) -> std::result::Result<(), Failure> {
    let c = args.data.load()?;
    let d = dedup_isomorphic(&c, args.budget);
    eprintln!(
        "kept {} of {} graphs ({} undecided pairs)",
        d.kept.len(),
        c.len(),
        d.undecided.len()
    );
    let mut out = open_output(args.out.as_deref())?;
    for i in d.kept {
        writeln!(out, "{i}")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Gram(a) => gram(a),
        Command::Refine(a) => refine(a),
        Command::NodeKernel(a) => node_kernel(a),
        Command::Completeness(a) => completeness(a),
        Command::Dedup(a) => dedup(a),
    });
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}
