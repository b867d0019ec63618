use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mapls_core::analysis::{nbhd_size_combined, nbhd_size_dv, nbhd_size_kopt, optimum_probability_bound, BoundInput};
use mapls_core::experiment::{
    csv_aggregate, csv_row, run_experiment, suite, ExperimentSpec, OutputFormat, ResultRow, CSV_HEADER,
};
use mapls_core::io::{load_instance, parse_assignment, parse_matrix, read_file, write_assignment, write_file, write_instance};
use mapls_core::local_search::neighborhood::{enumerate_neighborhood, NeighborhoodSpec};
use mapls_core::meta::run_meta;
use mapls_core::{
    generate, parse_instance_name, solve_ap2, Assignment, Budget, Constructor, Instance, LocalSearch, MapError,
    MetaConfig, MetaKind, VOptVariant, Vectorwise,
};

#[derive(Parser)]
#[command(name = "mapls", version, about = "Heuristics for the axial multidimensional assignment problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance in the text format.
    Generate {
        #[command(flatten)]
        source: NamedInstance,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one construction heuristic.
    Construct {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value = "greedy")]
        heuristic: Constructor,
        /// Also write the assignment here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct, then improve with a local search or a metaheuristic.
    Solve {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value = "greedy")]
        construct: Constructor,
        #[arg(long, default_value = "sdv")]
        ls: LocalSearch,
        /// `natural` or `improved`, for searches containing v-opt.
        #[arg(long)]
        ls_variant: Option<VOptVariant>,
        #[command(flatten)]
        meta: MetaArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark table.
    Bench(BenchArgs),
    /// Neighbourhood size of a local search.
    Nbhd {
        /// e.g. `1dv`, `sdv`, `3opt`, `2dv+2opt`.
        #[arg(long)]
        variant: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        n: usize,
        /// Vector count for k-opt; overrides the one in `--variant`.
        #[arg(long)]
        k: Option<usize>,
        /// Also count by explicit enumeration (small s and n only).
        #[arg(long)]
        enumerate: bool,
    },
    /// Lower bound on the chance that a Random instance has weight `a n`.
    Bound {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        c: u64,
    },
    /// Solve a square linear assignment problem read from a file.
    Ap2 { matrix: PathBuf },
    /// Check an assignment file against an instance and print its weight.
    Verify {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long)]
        assignment: PathBuf,
    },
}

#[derive(Args)]
struct NamedInstance {
    /// Instance name such as `3r150` or `5gp15`.
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 1)]
    index: u32,
}

#[derive(Args)]
struct InstanceSource {
    #[arg(long, required_unless_present = "instance", conflicts_with = "instance")]
    name: Option<String>,
    #[arg(long, default_value_t = 1)]
    index: u32,
    /// Instance file instead of a generated name.
    #[arg(long)]
    instance: Option<PathBuf>,
}

impl InstanceSource {
    fn label(&self) -> String {
        match (&self.name, &self.instance) {
            (Some(n), _) => n.clone(),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        }
    }

    fn load(&self) -> mapls_core::Result<Instance> {
        match (&self.name, &self.instance) {
            (Some(name), _) => generate(&parse_instance_name(name)?.with_index(self.index)),
            (None, Some(path)) => load_instance(path),
            (None, None) => Err(MapError::Config("give --name or --instance".into())),
        }
    }
}

#[derive(Args)]
struct MetaArgs {
    #[arg(long)]
    meta: Option<MetaKind>,
    /// Time budget, e.g. `10s` or `500ms`.
    #[arg(long, value_parser = humantime::parse_duration, conflicts_with = "iters")]
    time: Option<Duration>,
    /// Iteration budget; implies `--meta chain` when no kind is given.
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long, default_value_t = 0)]
    meta_seed: u64,
    /// Multichain width.
    #[arg(long, default_value_t = 5)]
    c: usize,
}

impl MetaArgs {
    fn config(&self) -> anyhow::Result<Option<MetaConfig>> {
        let budget = match (self.time, self.iters) {
            (Some(t), _) => Some(Budget::Time(t)),
            (None, Some(k)) => Some(Budget::Iterations(k)),
            (None, None) => None,
        };
        let cfg = match (self.meta, budget) {
            (None, None) => return Ok(None),
            (Some(_), None) => bail!(usage("--meta needs --time or --iters")),
            (kind, Some(budget)) => MetaConfig {
                kind: kind.unwrap_or(MetaKind::Chain),
                c: self.c,
                budget,
                rng_seed: self.meta_seed,
            },
        };
        cfg.validate().map_err(usage)?;
        Ok(Some(cfg))
    }
}

#[derive(Args)]
struct BenchArgs {
    /// `paper-full` or `desk`.
    #[arg(long, conflicts_with = "names")]
    suite: Option<String>,
    /// Comma-separated instance names.
    #[arg(long, value_delimiter = ',')]
    names: Vec<String>,
    /// Index range such as `1..10` or a single index.
    #[arg(long, value_parser = parse_indices)]
    indices: Option<RangeInclusive<u32>>,
    #[arg(long, default_value = "greedy")]
    construct: Constructor,
    #[arg(long, default_value = "sdv")]
    ls: LocalSearch,
    #[arg(long)]
    ls_variant: Option<VOptVariant>,
    #[command(flatten)]
    meta: MetaArgs,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Best-known registry; defaults to `$MAPLS_REGISTRY` or `best_known.txt`.
    #[arg(long)]
    registry: Option<PathBuf>,
}

fn parse_indices(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad index `{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let i = parse(s)?;
            (i, i)
        }
    };
    if lo < 1 || lo > hi {
        return Err(format!("empty or invalid index range `{s}`"));
    }
    Ok(lo..=hi)
}

/// Marks an error as a usage problem.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn usage(e: impl std::fmt::Display) -> Usage {
    Usage(e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => write_file(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_variant(ls: LocalSearch, variant: Option<VOptVariant>) -> LocalSearch {
    variant.map_or(ls, |v| ls.with_vopt_variant(v))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { source, out } => {
            let inst = generate(&parse_instance_name(&source.name)?.with_index(source.index))?;
            emit(out.as_deref(), &write_instance(&inst))
        }
        Command::Construct { source, heuristic, out } => {
            let inst = source.load()?;
            let started = Instant::now();
            let a = heuristic.build(&inst);
            let ms = started.elapsed().as_secs_f64() * 1e3;
            println!("name,index,heuristic,weight,time_ms");
            println!("{},{},{heuristic},{},{ms:.1}", source.label(), source.index, inst.assignment_weight(&a));
            if let Some(p) = out {
                write_file(&p, &write_assignment(&a))?;
            }
            Ok(())
        }
        Command::Solve { source, construct, ls, ls_variant, meta, out } => {
            let inst = source.load()?;
            let ls = with_variant(ls, ls_variant);
            let cfg = meta.config()?;
            let started = Instant::now();
            let start = construct.build(&inst);
            let initial = inst.assignment_weight(&start);
            let meta_label = cfg.map_or_else(|| "none".to_string(), |m| m.to_string());
            let (best, line) = match cfg {
                None => {
                    let r = ls.run(&inst, &start)?;
                    let line = format!(
                        "{},{},{},{},{}",
                        r.final_weight, r.passes, r.ap2_calls, r.candidate_evals, 1
                    );
                    (r.result, line)
                }
                Some(cfg) => {
                    let o = run_meta(&inst, &start, ls, &cfg)?;
                    let line = format!("{},{},,,{}", o.best_weight, o.iterations, o.local_searches);
                    (o.best, line)
                }
            };
            let ms = started.elapsed().as_secs_f64() * 1e3;
            println!("name,index,construct,ls,meta,initial_weight,final_weight,passes,ap2_calls,candidate_evals,local_searches,time_ms");
            println!(
                "{},{},{construct},{ls},{meta_label},{initial},{line},{ms:.1}",
                source.label(),
                source.index
            );
            if let Some(p) = out {
                write_file(&p, &write_assignment(&best))?;
            }
            Ok(())
        }
        Command::Bench(args) => bench(args),
        Command::Nbhd { variant, s, n, k, enumerate } => {
            let spec = neighborhood_spec(&variant, k)?;
            if s < 3 || n < 1 {
                bail!(usage("need s >= 3 and n >= 1"));
            }
            let size = match spec {
                NeighborhoodSpec::Dv(v) => nbhd_size_dv(v, s, n),
                NeighborhoodSpec::KOpt(k) => nbhd_size_kopt(k, s, n),
                NeighborhoodSpec::Combined(v, k) => nbhd_size_combined(v, k, s, n),
            };
            println!("{size}");
            if enumerate {
                let count = enumerate_neighborhood(&Assignment::identity(s, n), spec)?.len();
                println!("enumerated {count}");
            }
            Ok(())
        }
        Command::Bound { s, n, c } => {
            let r = optimum_probability_bound(BoundInput { s, n, c }).map_err(usage)?;
            println!("s={s} n={n} c={c} sigma={:e} pr_lower={:.3} applicable={}", r.sigma, r.pr_lower, r.applicable);
            Ok(())
        }
        Command::Ap2 { matrix } => {
            let m = parse_matrix(&read_file(&matrix)?)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let sol = solve_ap2(&m);
            let perm: Vec<String> = sol.perm.iter().map(|j| (j + 1).to_string()).collect();
            println!("cost {}", sol.cost);
            println!("{}", perm.join(" "));
            Ok(())
        }
        Command::Verify { source, assignment } => {
            let inst = source.load()?;
            let a = parse_assignment(&read_file(&assignment)?, inst.s(), inst.n())
                .with_context(|| format!("reading {}", assignment.display()))?;
            let w = inst.checked_assignment_weight(&a)?;
            println!("feasible weight {w}");
            Ok(())
        }
    }
}

fn neighborhood_spec(variant: &str, k: Option<usize>) -> anyhow::Result<NeighborhoodSpec> {
    let ls: LocalSearch = variant.parse().map_err(usage)?;
    let kopt = |vw: Vectorwise| match vw {
        Vectorwise::TwoOpt => Ok(2),
        Vectorwise::ThreeOpt => Ok(3),
        Vectorwise::VOpt(_) => Err(usage("v-opt has no closed-form neighbourhood")),
    };
    let spec = match ls {
        LocalSearch::None => bail!(usage("`none` has no neighbourhood")),
        LocalSearch::Dv(v) => NeighborhoodSpec::Dv(v),
        LocalSearch::Vectorwise(vw) => NeighborhoodSpec::KOpt(k.map_or_else(|| kopt(vw), Ok)?),
        LocalSearch::Combined(v, vw) => NeighborhoodSpec::Combined(v, k.map_or_else(|| kopt(vw), Ok)?),
    };
    Ok(spec)
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let (names, default_indices) = match &args.suite {
        Some(s) => suite(s).map_err(usage)?,
        None => (args.names.clone(), 1..=10),
    };
    let cfg = args.meta.config()?;
    let mut spec = ExperimentSpec::new(
        names,
        args.indices.clone().unwrap_or(default_indices),
        args.construct,
        with_variant(args.ls, args.ls_variant),
    );
    spec.meta = cfg;
    spec.registry = args.registry.clone();
    spec.jobs = args.jobs.max(1);
    spec.instances().map_err(usage)?;

    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        OutputFormat::Csv => {
            // Rows are written as they finish so a failing instance leaves
            // the earlier ones behind.
            writeln!(sink, "{CSV_HEADER}")?;
            let mut write_row = |r: &ResultRow| -> mapls_core::Result<()> {
                writeln!(sink, "{}", csv_row(r))
                    .and_then(|_| sink.flush())
                    .map_err(|e| MapError::Io { path: "output".into(), source: e })
            };
            let result = run_experiment(&spec, &mut write_row)?;
            let meta = cfg.map_or_else(|| "none".to_string(), |m| m.to_string());
            let (c, l) = (spec.construct.to_string(), spec.ls.to_string());
            for a in &result.aggregates {
                writeln!(sink, "{}", csv_aggregate(a, &c, &l, &meta))?;
            }
        }
        OutputFormat::Markdown => {
            let result = run_experiment(&spec, |_| Ok(()))?;
            sink.write_all(result.to_markdown(&spec).as_bytes())?;
        }
    }
    sink.flush()?;
    Ok(())
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
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<Usage>().is_some()
                || matches!(e.downcast_ref::<MapError>(), Some(MapError::Config(_)));
            ExitCode::from(if is_usage { 1 } else { 2 })
        }
    }
}
