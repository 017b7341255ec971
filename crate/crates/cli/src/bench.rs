//! Construction-time scaling benchmark.
//!
//! Each repetition builds a fresh graph (edge arrays plus incidence index)
//! on the calling thread and times it with a monotonic clock.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Result};
use graphkit::generators::{regular_tree, try_ring};
use graphkit::Graph;

/// Children per vertex in the tree family.
pub const TREE_CHILDREN: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Directed circular ring: `m` vertices, `m` edges.
    Ring,
    /// Undirected binary tree: `m + 1` vertices, `m` edges.
    Tree,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ring => "ring",
            Family::Tree => "tree",
        }
    }

    /// `(n, k)` producing exactly `m` edges.
    pub fn params(self, m: u64) -> (u64, u64) {
        match self {
            Family::Ring => (m, 0),
            Family::Tree => (m + 1, TREE_CHILDREN),
        }
    }

    fn build(self, m: u64) -> graphkit::Result<Graph> {
        let (n, k) = self.params(m);
        let g = match self {
            Family::Ring => try_ring(n, true, true)?,
            Family::Tree => regular_tree(n, k, false)?,
        };
        g.try_build_index()?;
        Ok(g)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ring" => Ok(Family::Ring),
            "tree" => Ok(Family::Tree),
            _ => Err(format!("unknown family '{s}' (expected ring or tree)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub family: Family,
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub seconds: f64,
    /// Process peak resident set size after the run, when the OS reports it.
    pub peak_bytes: Option<u64>,
    pub rep: usize,
    /// `ok`, or a short failure reason such as `alloc_failed`.
    pub status: String,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Peak resident set size from `/proc/self/status`, if available.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Times `reps` fresh constructions at every edge-count target in `sizes`.
/// Allocation failures become records with status `alloc_failed`.
pub fn bench_scaling(family: Family, sizes: &[u64], reps: usize) -> Result<Vec<BenchRecord>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sizes must be strictly ascending");
    }
    if reps == 0 {
        bail!("reps must be at least 1");
    }
    let mut out = Vec::with_capacity(sizes.len() * reps);
    for &m in sizes {
        let (n, k) = family.params(m);
        for rep in 0..reps {
            let start = Instant::now();
            let built = family.build(m);
            let seconds = start.elapsed().as_secs_f64();
            let status = match &built {
                Ok(g) => {
                    debug_assert_eq!(g.edge_count(), m);
                    "ok".to_owned()
                }
                Err(graphkit::Error::Allocation { .. }) => "alloc_failed".to_owned(),
                Err(e) => format!("error: {e}"),
            };
            drop(built);
            log::info!("{family} m={m} rep={rep} {seconds:.4}s {status}");
            out.push(BenchRecord {
                family,
                n,
                k,
                m,
                seconds,
                peak_bytes: peak_rss_bytes(),
                rep,
                status,
            });
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "family,n,k,m,seconds,peak_bytes,rep,status";

pub fn write_csv(records: &[BenchRecord], mut sink: impl Write) -> std::io::Result<()> {
    writeln!(sink, "{CSV_HEADER}")?;
    for r in records {
        let peak = r.peak_bytes.map(|b| b.to_string()).unwrap_or_default();
        writeln!(
            sink,
            "{},{},{},{},{:?},{},{},{}",
            r.family, r.n, r.k, r.m, r.seconds, peak, r.rep, r.status
        )?;
    }
    Ok(())
}

/// Mean seconds per edge-count target over successful records, ascending.
pub fn mean_times(records: &[BenchRecord]) -> Vec<(u64, f64)> {
    let mut sizes: Vec<u64> = records.iter().filter(|r| r.ok()).map(|r| r.m).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|m| {
            let ts: Vec<f64> = records
                .iter()
                .filter(|r| r.ok() && r.m == m)
                .map(|r| r.seconds)
                .collect();
            (m, ts.iter().sum::<f64>() / ts.len() as f64)
        })
        .collect()
}

/// Least-squares slope of `ln(mean seconds)` against `ln(m)`.
pub fn loglog_slope(records: &[BenchRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = mean_times(records)
        .into_iter()
        .filter(|&(_, t)| t > 0.0)
        .map(|(m, t)| ((m as f64).ln(), t.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
