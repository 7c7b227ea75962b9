//! Library side of the `coremax` command: instance generators, the solve
//! report and the benchmark harness.

pub mod bench;
pub mod generate;
pub mod report;

/// Exit status of `solve`.
pub mod exit {
    pub const OPTIMUM: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const SAT: i32 = 10;
    pub const HARD_UNSAT: i32 = 20;
    pub const TIMEOUT: i32 = 124;
}

/// Peak resident set size of this process in KiB (Linux only).
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}
