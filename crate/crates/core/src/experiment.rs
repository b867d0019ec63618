//! Benchmark runs: instance suites, the best-known registry, and result
//! tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::construction::Constructor;
use crate::error::{MapError, Result};
use crate::generate::{generate, parse_instance_name, FamilySpec};
use crate::instance::{Family, Weight};
use crate::local_search::LocalSearch;
use crate::meta::{run_meta, MetaConfig};
use crate::rng::mix64;

/// Environment variable overriding the registry location.
pub const REGISTRY_ENV: &str = "MAPLS_REGISTRY";
pub const DEFAULT_REGISTRY: &str = "best_known.txt";

/// Flat text file of `name index weight` lines holding the best weight seen
/// per instance. Updates take an exclusive lock on a sidecar `.lock` file
/// and replace the registry atomically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    path: PathBuf,
}

impl Registry {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Registry { path: path.into() }
    }

    /// `$MAPLS_REGISTRY`, or `best_known.txt` in the working directory.
    pub fn from_env() -> Self {
        Registry::new(std::env::var_os(REGISTRY_ENV).map_or_else(|| PathBuf::from(DEFAULT_REGISTRY), PathBuf::from))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> Result<BTreeMap<(String, u32), Weight>> {
        let text = match std::fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(MapError::io(&self.path, e)),
        };
        let mut out = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let corrupt = || {
                MapError::parse(format!(
                    "{}: line {}: expected `name index weight`, found `{line}`",
                    self.path.display(),
                    i + 1
                ))
            };
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(corrupt());
            }
            let index: u32 = t[1].parse().map_err(|_| corrupt())?;
            let weight: Weight = t[2].parse().map_err(|_| corrupt())?;
            if !weight.is_finite() {
                return Err(corrupt());
            }
            let slot = out.entry((t[0].to_string(), index)).or_insert(weight);
            *slot = slot.min(weight);
        }
        Ok(out)
    }

    pub fn lookup(&self, name: &str, index: u32) -> Result<Option<Weight>> {
        Ok(self.load()?.get(&(name.to_string(), index)).copied())
    }

    /// Records `weight` if it beats the stored value; returns whether it did.
    ///
    /// For Random and Planted names, weights below `n * a` (default `a`)
    /// are impossible and rejected.
    pub fn update_best_known(&self, name: &str, index: u32, weight: Weight) -> Result<bool> {
        if !weight.is_finite() {
            return Err(MapError::input(format!("weight {weight} is not finite")));
        }
        if let Ok(spec) = parse_instance_name(name) {
            if spec.family.has_independent_weights() {
                let bound = spec.n as f64 * spec.lo as f64;
                if weight < bound {
                    return Err(MapError::BelowLowerBound {
                        name: name.to_string(),
                        index,
                        weight,
                        bound,
                    });
                }
            }
        }
        let _guard = self.lock()?;
        let mut entries = self.load()?;
        let key = (name.to_string(), index);
        if entries.get(&key).is_some_and(|&old| old <= weight) {
            return Ok(false);
        }
        entries.insert(key, weight);
        self.store(&entries)?;
        Ok(true)
    }

    fn lock(&self) -> Result<File> {
        let mut lock_path = self.path.clone().into_os_string();
        lock_path.push(".lock");
        let lock_path = PathBuf::from(lock_path);
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| MapError::io(&lock_path, e))?;
        file.lock().map_err(|e| MapError::io(&lock_path, e))?;
        Ok(file)
    }

    fn store(&self, entries: &BTreeMap<(String, u32), Weight>) -> Result<()> {
        let mut text = String::new();
        for ((name, index), w) in entries {
            let _ = writeln!(text, "{name} {index} {w}");
        }
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(format!(".tmp{}", std::process::id()));
        let tmp = PathBuf::from(tmp);
        let write = || -> std::io::Result<()> {
            let mut f = File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()
        };
        write().map_err(|e| MapError::io(&tmp, e))?;
        std::fs::rename(&tmp, &self.path).map_err(|e| MapError::io(&self.path, e))
    }
}

fn roster_sizes(family: Family) -> [usize; 6] {
    match family {
        Family::Planted => [100, 30, 12, 8, 5, 4],
        Family::Random => [150, 80, 40, 22, 14, 9],
        _ => [150, 50, 30, 18, 12, 8],
    }
}

const SUITE_FAMILIES: [Family; 6] = [
    Family::Planted,
    Family::Random,
    Family::Clique,
    Family::Geometric,
    Family::Product,
    Family::SquareRoot,
];

/// Named instance sets: `paper-full` (the full roster, indices 1..10)
/// and `desk` (sizes halved, indices 1..3).
pub fn suite(name: &str) -> Result<(Vec<String>, RangeInclusive<u32>)> {
    let scale: fn(usize) -> usize = match name {
        "paper-full" => |n| n,
        "desk" => |n| (n / 2).max(2),
        _ => {
            return Err(MapError::Config(format!(
                "unknown suite `{name}` (expected paper-full or desk)"
            )))
        }
    };
    let mut names = Vec::new();
    for family in SUITE_FAMILIES {
        for (s, &n) in (3..).zip(roster_sizes(family).iter()) {
            names.push(format!("{s}{}{}", family.name_tag(), scale(n)));
        }
    }
    let indices = if name == "desk" { 1..=3 } else { 1..=10 };
    Ok((names, indices))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(MapError::parse(format!("unknown output format `{s}`"))),
        }
    }
}

/// A declarative benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub names: Vec<String>,
    pub indices: RangeInclusive<u32>,
    pub construct: Constructor,
    pub ls: LocalSearch,
    pub meta: Option<MetaConfig>,
    /// Registry location; `None` uses [`Registry::from_env`].
    pub registry: Option<PathBuf>,
    /// Worker threads for independent rows.
    pub jobs: usize,
}

impl ExperimentSpec {
    pub fn new(names: Vec<String>, indices: RangeInclusive<u32>, construct: Constructor, ls: LocalSearch) -> Self {
        ExperimentSpec {
            names,
            indices,
            construct,
            ls,
            meta: None,
            registry: None,
            jobs: 1,
        }
    }

    /// Every (name, index) pair, validated.
    pub fn instances(&self) -> Result<Vec<FamilySpec>> {
        self.ls.check()?;
        if let Some(m) = &self.meta {
            m.validate()?;
        }
        if *self.indices.start() < 1 {
            return Err(MapError::Config("instance indices start at 1".into()));
        }
        let mut out = Vec::new();
        for name in &self.names {
            let base = parse_instance_name(name)?;
            for i in self.indices.clone() {
                out.push(base.clone().with_index(i));
            }
        }
        Ok(out)
    }

    fn registry(&self) -> Registry {
        self.registry.clone().map_or_else(Registry::from_env, Registry::new)
    }
}

/// One benchmarked instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub name: String,
    pub index: u32,
    pub seed: u64,
    pub family: Family,
    pub s: usize,
    pub construct: String,
    pub ls: String,
    pub meta: String,
    pub best_known: Weight,
    pub achieved: Weight,
    pub error_pct: f64,
    pub time_ms: f64,
}

/// Mean error and time over a group of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    /// An instance name, `family:<Family>` or `s:<s>`.
    pub label: String,
    pub count: usize,
    pub error_pct: f64,
    pub time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<AggregateRow>,
}

/// `(achieved / best_known - 1) * 100`.
pub fn error_pct(achieved: Weight, best_known: Weight) -> f64 {
    if best_known == 0.0 {
        return if achieved == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (achieved / best_known - 1.0) * 100.0
}

fn run_row(spec: &ExperimentSpec, fs: &FamilySpec, registry: &Registry) -> Result<ResultRow> {
    let inst = generate(fs)?;
    let name = fs.name();
    let started = Instant::now();
    let start = spec.construct.build(&inst);
    let achieved = match &spec.meta {
        None => spec.ls.run(&inst, &start)?.final_weight,
        Some(cfg) => {
            let cfg = MetaConfig {
                rng_seed: mix64(cfg.rng_seed) ^ inst.seed(),
                ..*cfg
            };
            run_meta(&inst, &start, spec.ls, &cfg)?.best_weight
        }
    };
    let time_ms = started.elapsed().as_secs_f64() * 1e3;
    let best_known = match inst.independent_optimum_estimate() {
        Some(bound) => bound,
        None => {
            registry.update_best_known(&name, fs.index, achieved)?;
            registry.lookup(&name, fs.index)?.map_or(achieved, |b| b.min(achieved))
        }
    };
    Ok(ResultRow {
        name,
        index: fs.index,
        seed: inst.seed(),
        family: fs.family,
        s: fs.s,
        construct: spec.construct.to_string(),
        ls: spec.ls.to_string(),
        meta: spec.meta.map_or_else(|| "none".to_string(), |m| m.to_string()),
        best_known,
        achieved,
        error_pct: error_pct(achieved, best_known),
        time_ms,
    })
}

/// Runs every instance of `spec`, passing each finished row to `sink` in
/// order. On failure the rows completed before the failing one have been
/// passed on and the error is returned.
pub fn run_experiment(spec: &ExperimentSpec, mut sink: impl FnMut(&ResultRow) -> Result<()>) -> Result<ExperimentResult> {
    let work = spec.instances()?;
    let registry = spec.registry();
    let mut rows = Vec::with_capacity(work.len());
    if spec.jobs <= 1 {
        for fs in &work {
            let row = run_row(spec, fs, &registry)?;
            sink(&row)?;
            rows.push(row);
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let mut results: Vec<Option<Result<ResultRow>>> = (0..work.len()).map(|_| None).collect();
        let slots = std::sync::Mutex::new(&mut results);
        std::thread::scope(|scope| {
            for _ in 0..spec.jobs.min(work.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= work.len() {
                        break;
                    }
                    let r = run_row(spec, &work[i], &registry);
                    slots.lock().expect("worker panicked")[i] = Some(r);
                });
            }
        });
        for r in results.into_iter().flatten() {
            let row = r?;
            sink(&row)?;
            rows.push(row);
        }
    }
    let aggregates = aggregate(&rows);
    Ok(ExperimentResult { rows, aggregates })
}

/// Per-name, per-family and per-`s` means, each group in first-seen order.
pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    let keys: [fn(&ResultRow) -> String; 3] = [
        |r| r.name.clone(),
        |r| format!("family:{}", r.family),
        |r| format!("s:{}", r.s),
    ];
    for key in keys {
        let mut groups: Vec<(String, Vec<&ResultRow>)> = Vec::new();
        for r in rows {
            let k = key(r);
            match groups.iter_mut().find(|(g, _)| *g == k) {
                Some((_, members)) => members.push(r),
                None => groups.push((k, vec![r])),
            }
        }
        for (label, members) in groups {
            let count = members.len();
            out.push(AggregateRow {
                label,
                count,
                error_pct: members.iter().map(|r| r.error_pct).sum::<f64>() / count as f64,
                time_ms: members.iter().map(|r| r.time_ms).sum::<f64>() / count as f64,
            });
        }
    }
    out
}

pub const CSV_HEADER: &str = "name,index,seed,construct,ls,meta,best_known,achieved,error_pct,time_ms";

pub fn csv_row(r: &ResultRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{:.3},{:.1}",
        r.name, r.index, r.seed, r.construct, r.ls, r.meta, r.best_known, r.achieved, r.error_pct, r.time_ms
    )
}

pub fn csv_aggregate(a: &AggregateRow, construct: &str, ls: &str, meta: &str) -> String {
    format!(
        "{},avg,,{construct},{ls},{meta},,,{:.3},{:.1}",
        a.label, a.error_pct, a.time_ms
    )
}

impl ExperimentResult {
    pub fn to_csv(&self, spec: &ExperimentSpec) -> String {
        let (c, l, m) = labels(spec);
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&csv_row(r));
            out.push('\n');
        }
        for a in &self.aggregates {
            out.push_str(&csv_aggregate(a, &c, &l, &m));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self, spec: &ExperimentSpec) -> String {
        let (c, l, m) = labels(spec);
        let mut out = String::from("| ");
        out.push_str(&CSV_HEADER.replace(',', " | "));
        out.push_str(" |\n|");
        out.push_str(&"---|".repeat(CSV_HEADER.split(',').count()));
        out.push('\n');
        let rows = self
            .rows
            .iter()
            .map(csv_row)
            .chain(self.aggregates.iter().map(|a| csv_aggregate(a, &c, &l, &m)));
        for line in rows {
            let _ = writeln!(out, "| {} |", line.replace(',', " | "));
        }
        out
    }
}

fn labels(spec: &ExperimentSpec) -> (String, String, String) {
    (
        spec.construct.to_string(),
        spec.ls.to_string(),
        spec.meta.map_or_else(|| "none".to_string(), |m| m.to_string()),
    )
}
