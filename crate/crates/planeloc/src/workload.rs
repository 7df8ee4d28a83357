//! Text workloads: one operation per line, `v x y`, `e x1 y1 x2 y2` or
//! `q x y`, with integer, decimal or `a/b` coordinates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::geom::{Coord, Point, Segment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Vertex(Point),
    Edge(Segment),
    Query(Point),
}

impl Op {
    pub fn is_insertion(&self) -> bool {
        !matches!(self, Op::Query(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workload {
    pub ops: Vec<Op>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkloadError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("a workload needs at least one insertion")]
    Empty,
    #[error("unknown style `{0}`")]
    UnknownStyle(String),
}

/// Exact decimal when the denominator allows it, `a/b` otherwise.
pub fn fmt_coord(c: &Coord) -> String {
    let (n, d) = (c.numer(), c.denom());
    if d.is_one() {
        return n.to_string();
    }
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, d.clone());
    while (&rest % 2u32).is_zero() {
        rest /= 2u32;
        twos += 1;
    }
    while (&rest % 5u32).is_zero() {
        rest /= 5u32;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{n}/{d}");
    }
    let k = twos.max(fives);
    let scaled: BigInt = &n * num_traits::pow(BigInt::from(10), k as usize) / &d;
    let neg = scaled < BigInt::zero();
    let digits = if neg { (-&scaled).to_string() } else { scaled.to_string() };
    let digits = format!("{:0>width$}", digits, width = k as usize + 1);
    let (ip, fp) = digits.split_at(digits.len() - k as usize);
    format!("{}{ip}.{fp}", if neg { "-" } else { "" })
}

fn fmt_point(p: &Point) -> String {
    format!("{} {}", fmt_coord(&p.x), fmt_coord(&p.y))
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Vertex(p) => write!(f, "v {}", fmt_point(p)),
            Op::Edge(s) => write!(f, "e {} {}", fmt_point(&s.a), fmt_point(&s.b)),
            Op::Query(p) => write!(f, "q {}", fmt_point(p)),
        }
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for Workload {
    type Err = WorkloadError;

    /// Blank lines and lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Workload, WorkloadError> {
        let mut ops = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| WorkloadError::Parse { line: i + 1, msg };
            let mut it = line.split_whitespace();
            let tag = it.next().unwrap_or_default();
            let nums: Vec<Coord> = it.map(|t| t.parse::<Coord>().map_err(|e| err(e.to_string()))).collect::<Result<_, _>>()?;
            let want = match tag {
                "v" | "q" => 2,
                "e" => 4,
                _ => return Err(err(format!("unknown operation `{tag}`"))),
            };
            if nums.len() != want {
                return Err(err(format!("`{tag}` takes {want} coordinates, got {}", nums.len())));
            }
            let mut n = nums.into_iter();
            let mut pt = || Point { x: n.next().unwrap(), y: n.next().unwrap() };
            ops.push(match tag {
                "v" => Op::Vertex(pt()),
                "q" => Op::Query(pt()),
                _ => {
                    let (a, b) = (pt(), pt());
                    Op::Edge(Segment::new(a, b).map_err(|e| err(e.to_string()))?)
                }
            });
        }
        Ok(Workload { ops })
    }
}

impl Workload {
    pub fn insertions(&self) -> usize {
        self.ops.iter().filter(|o| o.is_insertion()).count()
    }

    /// The first `k` operations.
    pub fn prefix(&self, k: usize) -> Workload {
        Workload { ops: self.ops[..k.min(self.ops.len())].to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    Nested,
    GridWithIslands,
    RandomValid,
}

impl FromStr for Style {
    type Err = WorkloadError;
    fn from_str(s: &str) -> Result<Style, WorkloadError> {
        match s {
            "nested" => Ok(Style::Nested),
            "grid-with-islands" => Ok(Style::GridWithIslands),
            "random-valid" => Ok(Style::RandomValid),
            _ => Err(WorkloadError::UnknownStyle(s.to_string())),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Nested => "nested",
            Style::GridWithIslands => "grid-with-islands",
            Style::RandomValid => "random-valid",
        })
    }
}
