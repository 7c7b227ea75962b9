use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use coremax::maxsat::{solve, Algorithm, CardMode, MaxSatConfig, MaxSatStats};
use coremax::{evaluate, parse_dimacs, MaxSatError, SolverConfig, Strategy};

/// Conflicts per effort-clock time unit.
pub const CONFLICTS_PER_EFFORT_UNIT: u64 = 1000;

/// What the `time` columns measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clock {
    /// Wall-clock seconds.
    Wall,
    /// Thousands of SAT conflicts; reproducible across machines and runs.
    Effort,
}

impl FromStr for Clock {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(Clock::Wall),
            "effort" => Ok(Clock::Effort),
            _ => Err(format!("unknown clock `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    /// Per-run limit in clock units.
    pub timeout: f64,
    pub mem_mb: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
    pub clock: Clock,
    pub encoding: Option<Strategy>,
    pub card_mode: Option<CardMode>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: vec![Algorithm::Msu1, Algorithm::Msu2, Algorithm::Msu3, Algorithm::Linear],
            timeout: 1000.0,
            mem_mb: Some(2048),
            seed: 0,
            jobs: 1,
            clock: Clock::Wall,
            encoding: None,
            card_mode: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimum,
    Timeout,
    Memout,
    HardUnsat,
    Error,
}

impl Status {
    /// Runs that ended with a definite answer.
    pub fn solved(self) -> bool {
        matches!(self, Status::Optimum | Status::HardUnsat)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimum => "optimum",
            Status::Timeout => "timeout",
            Status::Memout => "memout",
            Status::HardUnsat => "hard-unsat",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub status: Status,
    pub optimum: Option<usize>,
    pub cost: Option<usize>,
    /// Clock units; the timeout value for unsolved runs.
    pub time: f64,
    pub stats: MaxSatStats,
}

/// `*.cnf` and `*.wcnf` files in `dir`, sorted by name.
pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str());
        if path.is_file() && matches!(ext, Some("cnf" | "wcnf")) {
            found.push(path);
        }
    }
    if found.is_empty() {
        bail!("no .cnf or .wcnf instances in {}", dir.display());
    }
    found.sort();
    Ok(found)
}

fn max_config(config: &BenchConfig) -> MaxSatConfig {
    let mut max = MaxSatConfig {
        encoding: config.encoding,
        card_mode: config.card_mode,
        sat: SolverConfig::with_seed(config.seed),
        mem_limit_bytes: config.mem_mb.map(|mb| mb << 20),
        ..MaxSatConfig::default()
    };
    match config.clock {
        Clock::Wall => max.timeout = Some(Duration::from_secs_f64(config.timeout)),
        Clock::Effort => max.conflict_limit = Some((config.timeout * CONFLICTS_PER_EFFORT_UNIT as f64) as u64),
    }
    max
}

/// Runs one algorithm on one instance file.
pub fn run_one(path: &Path, algorithm: Algorithm, config: &BenchConfig) -> RunRecord {
    let instance = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let start = Instant::now();
    let mut record = RunRecord {
        instance,
        algorithm,
        status: Status::Error,
        optimum: None,
        cost: None,
        time: config.timeout,
        stats: MaxSatStats::default(),
    };
    let formula = match fs::File::open(path).map_err(anyhow::Error::from).and_then(|file| {
        parse_dimacs(std::io::BufReader::new(file)).map_err(anyhow::Error::from)
    }) {
        Ok(f) => f,
        Err(e) => {
            log::warn!("{}: {e}", path.display());
            return record;
        }
    };
    let outcome = solve(&formula, algorithm, &max_config(config));
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(result) => {
            let verified = evaluate(&formula, &result.model)
                .is_ok_and(|e| e.hard_falsified == 0 && e.soft_falsified == result.cost);
            if !verified {
                log::warn!("{}: {algorithm} witness failed verification", path.display());
                return record;
            }
            record.status = Status::Optimum;
            record.optimum = Some(result.optimum);
            record.cost = Some(result.cost);
            record.time = match config.clock {
                Clock::Wall => elapsed,
                Clock::Effort => result.stats.conflicts as f64 / CONFLICTS_PER_EFFORT_UNIT as f64,
            };
            record.stats = result.stats;
        }
        Err(MaxSatError::HardClausesUnsat) => {
            record.status = Status::HardUnsat;
            // effort spent is not reported on this path
            record.time = match config.clock {
                Clock::Wall => elapsed,
                Clock::Effort => 0.0,
            };
        }
        Err(MaxSatError::Timeout) => record.status = Status::Timeout,
        Err(MaxSatError::MemoryBudget { .. }) => record.status = Status::Memout,
        Err(e) => log::warn!("{}: {algorithm}: {e}", path.display()),
    }
    record
}

/// Runs every algorithm on every instance; records come back instance-major
/// in the order of `instances` and `config.algorithms`.
pub fn run_bench(instances: &[PathBuf], config: &BenchConfig) -> Vec<RunRecord> {
    let tasks: Vec<(&PathBuf, Algorithm)> = instances
        .iter()
        .flat_map(|p| config.algorithms.iter().map(move |&a| (p, a)))
        .collect();
    if config.jobs <= 1 {
        return tasks.iter().map(|&(p, a)| run_one(p, a, config)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<RunRecord>>> = Mutex::new(vec![None; tasks.len()]);
    std::thread::scope(|scope| {
        for _ in 0..config.jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(p, a)) = tasks.get(i) else { break };
                let record = run_one(p, a, config);
                slots.lock().expect("results lock")[i] = Some(record);
            });
        }
    });
    slots.into_inner().expect("results lock").into_iter().flatten().collect()
}

fn time_field(t: f64) -> String {
    format!("{t:.3}")
}

fn plot_time(record: &RunRecord, timeout: f64) -> f64 {
    if record.status.solved() {
        record.time
    } else {
        timeout
    }
}

/// Writes `PREFIX-runs.csv`, `PREFIX-cactus.csv` and one
/// `PREFIX-scatter-A-vs-B.csv` per algorithm pair. Returns the paths written.
pub fn write_outputs(records: &[RunRecord], config: &BenchConfig, prefix: &str) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();

    let path = PathBuf::from(format!("{prefix}-runs.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record([
        "instance",
        "algorithm",
        "status",
        "optimum",
        "cost",
        "time",
        "iterations",
        "cores",
        "blockers",
        "encoded_clauses",
        "sat_calls",
        "conflicts",
    ])?;
    let opt = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.algorithm.to_string(),
            r.status.to_string(),
            opt(r.optimum),
            opt(r.cost),
            time_field(r.time),
            r.stats.iterations.to_string(),
            r.stats.cores_found.to_string(),
            r.stats.total_blockers.to_string(),
            r.stats.encoded_clauses.to_string(),
            r.stats.sat_calls.to_string(),
            r.stats.conflicts.to_string(),
        ])?;
    }
    w.flush()?;
    written.push(path);

    let path = PathBuf::from(format!("{prefix}-cactus.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["algorithm", "rank", "time", "flag"])?;
    for &algo in &config.algorithms {
        let mut points: Vec<(f64, &str)> = records
            .iter()
            .filter(|r| r.algorithm == algo)
            .map(|r| (plot_time(r, config.timeout), if r.status.solved() { "s" } else { "t" }))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
        for (rank, (time, flag)) in points.into_iter().enumerate() {
            w.write_record([algo.to_string(), (rank + 1).to_string(), time_field(time), flag.to_string()])?;
        }
    }
    w.flush()?;
    written.push(path);

    for (i, &a) in config.algorithms.iter().enumerate() {
        for &b in &config.algorithms[i + 1..] {
            let path = PathBuf::from(format!("{prefix}-scatter-{a}-vs-{b}.csv"));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["instance", a.name(), b.name()])?;
            for ra in records.iter().filter(|r| r.algorithm == a) {
                if let Some(rb) = records.iter().find(|r| r.algorithm == b && r.instance == ra.instance) {
                    w.write_record([
                        ra.instance.clone(),
                        time_field(plot_time(ra, config.timeout)),
                        time_field(plot_time(rb, config.timeout)),
                    ])?;
                }
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}
