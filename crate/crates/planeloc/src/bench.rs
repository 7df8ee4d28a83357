//! Doubling benchmarks over generated workloads, one CSV row per size.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;

use crate::gen::{generate, rng};
use crate::geom::{Coord, Point};
use crate::locator::{Locator, LocatorConfig};
use crate::workload::{Op, Style, WorkloadError};

/// Queries timed per size.
pub const BENCH_QUERIES: usize = 10_000;

pub const CSV_HEADER: &str = "n,update_ns_amortized,query_ns_mean,query_ns_p95,trapezoids_total,merges_max_per_edge,\
backbone_nodes,trapezoids_per_n,update_ratio,query_ratio";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub update_ns_amortized: f64,
    pub query_ns_mean: f64,
    pub query_ns_p95: f64,
    pub trapezoids_total: u64,
    pub merges_max_per_edge: u32,
    pub backbone_nodes: u64,
}

impl BenchRecord {
    pub fn trapezoids_per_n(&self) -> f64 {
        self.trapezoids_total as f64 / self.n as f64
    }
}

/// Replays `n` generated insertions, then times random queries over the
/// bounding box of the vertices.
pub fn run(n: usize, style: Style, seed: u64, cfg: LocatorConfig) -> Result<(BenchRecord, Locator), WorkloadError> {
    let w = generate(seed, n, style)?;
    let mut loc = Locator::new(LocatorConfig { n_cap: cfg.n_cap.max(n), ..cfg });
    let start = Instant::now();
    for op in &w.ops {
        let r = match op {
            Op::Edge(s) => loc.insert_edge(s).map(|_| ()),
            Op::Vertex(p) => loc.insert_vertex(p).map(|_| ()),
            Op::Query(_) => Ok(()),
        };
        r.expect("generated workloads are valid");
    }
    let update = start.elapsed().as_nanos() as f64 / n as f64;
    let (mut x1, mut y1) = (1i64, 1i64);
    for p in loc.subdivision().vertex_points() {
        x1 = x1.max(p.x.to_f64().ceil() as i64);
        y1 = y1.max(p.y.to_f64().ceil() as i64);
    }
    let mut r = rng(seed ^ 0x5eed);
    let qs: Vec<Point> = (0..BENCH_QUERIES)
        .map(|_| Point {
            x: Coord::from_ratio(r.gen_range(-2..=2 * x1 + 2), 2),
            y: Coord::from_ratio(r.gen_range(-2..=2 * y1 + 2), 2),
        })
        .collect();
    let mut times: Vec<u128> = Vec::with_capacity(qs.len());
    for q in &qs {
        let t = Instant::now();
        std::hint::black_box(loc.locate(q));
        times.push(t.elapsed().as_nanos());
    }
    times.sort_unstable();
    let mean = times.iter().sum::<u128>() as f64 / times.len() as f64;
    let p95 = times[(times.len() * 95 / 100).min(times.len() - 1)] as f64;
    let s = loc.stats();
    let rec = BenchRecord {
        n,
        update_ns_amortized: update,
        query_ns_mean: mean,
        query_ns_p95: p95,
        trapezoids_total: s.find_cc.trapezoids,
        merges_max_per_edge: s.locate_cc.merges_max_per_edge,
        backbone_nodes: s.locate_cc.backbone_nodes,
    };
    Ok((rec, loc))
}

/// Rows in the given order; ratios compare each row with the previous one.
pub fn to_csv(rows: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let ratio = |f: fn(&BenchRecord) -> f64| match i {
            0 => String::new(),
            _ => format!("{:.3}", f(r) / f(&rows[i - 1])),
        };
        writeln!(
            out,
            "{},{:.1},{:.1},{:.1},{},{},{},{:.3},{},{}",
            r.n,
            r.update_ns_amortized,
            r.query_ns_mean,
            r.query_ns_p95,
            r.trapezoids_total,
            r.merges_max_per_edge,
            r.backbone_nodes,
            r.trapezoids_per_n(),
            ratio(|r| r.update_ns_amortized),
            ratio(|r| r.query_ns_mean),
        )
        .expect("writing to a String");
    }
    out
}
