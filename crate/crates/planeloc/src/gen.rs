//! Seeded generators for trapezoid sets and subdivision workloads.
//!
//! Workload generators are valid by construction: every edge meets the
//! others only at shared endpoints and every vertex lies on no edge
//! except the one it is inserted on.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Coord, Point, Segment, Trapezoid};
use crate::oracle::validate_insertion;
use crate::workload::{Op, Style, Workload, WorkloadError};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stacked polylines over a shared x-grid. Lines never cross; adjacent
/// lines touch at some even grid columns.
#[derive(Debug, Clone)]
pub struct Strata {
    pub grid: Vec<i64>,
    /// `ys[level][column]`.
    pub ys: Vec<Vec<i64>>,
}

impl Strata {
    pub fn new(r: &mut impl Rng, levels: usize, columns: usize) -> Strata {
        let grid: Vec<i64> = (0..=columns as i64).map(|j| j * 64).collect();
        let mut ys: Vec<Vec<i64>> = Vec::with_capacity(levels);
        for l in 0..levels {
            let row: Vec<i64> = (0..grid.len())
                .map(|j| if l > 0 && j % 2 == 0 && r.gen_bool(0.2) { ys[l - 1][j] } else { 100 * l as i64 + r.gen_range(0..50) })
                .collect();
            ys.push(row);
        }
        Strata { grid, ys }
    }

    pub fn edge(&self, level: usize, col: usize) -> Segment {
        Segment::from_ints(self.grid[col], self.ys[level][col], self.grid[col + 1], self.ys[level][col + 1])
    }

    /// A trapezoid between two lines inside one grid column.
    pub fn trapezoid(&self, r: &mut impl Rng, owners: u32) -> Trapezoid {
        let levels = self.ys.len();
        let lb = r.gen_range(0..levels - 1);
        let lt = r.gen_range(lb + 1..levels);
        let col = r.gen_range(0..self.grid.len() - 1);
        let (g0, g1) = (self.grid[col], self.grid[col + 1]);
        let (xl, xr) = loop {
            let a = if r.gen_bool(0.3) { g0 } else { r.gen_range(g0..=g1) };
            let b = if r.gen_bool(0.3) { g1 } else { r.gen_range(g0..=g1) };
            if a < b {
                break (a, b);
            }
        };
        Trapezoid {
            top: self.edge(lt, col),
            bottom: self.edge(lb, col),
            xl: xl.into(),
            xr: xr.into(),
            owner_edge: r.gen_range(0..owners),
            owner_component: 0,
        }
    }

    /// A query point, often on a grid column, a line or a corner.
    pub fn query(&self, r: &mut impl Rng) -> Point {
        let xmax = *self.grid.last().unwrap();
        let x: i64 = if r.gen_bool(0.3) { self.grid[r.gen_range(0..self.grid.len())] } else { r.gen_range(-4..=xmax + 4) };
        let levels = self.ys.len() as i64;
        if r.gen_bool(0.3) && (0..xmax).contains(&x) {
            let col = (x / 64) as usize;
            let s = self.edge(r.gen_range(0..self.ys.len()), col);
            return Point { x: Coord::from_int(x), y: s.y_at(&Coord::from_int(x)) };
        }
        Point::new(x, r.gen_range(-10..100 * levels + 10))
    }
}

/// Insertions between two queries in generated workloads.
pub const QUERY_EVERY: usize = 4;

/// Cuts `ops` to `n` insertions and adds a query after every
/// `QUERY_EVERY`-th one, sometimes snapped onto a vertex or an edge.
fn finish(ops: Vec<Op>, n: usize, r: &mut impl Rng) -> Workload {
    let (mut lo, mut hi) = (Point::new(0, 0), Point::new(1, 1));
    let grow = |p: &Point, lo: &mut Point, hi: &mut Point| {
        lo.x = lo.x.clone().min(p.x.clone());
        lo.y = lo.y.clone().min(p.y.clone());
        hi.x = hi.x.clone().max(p.x.clone());
        hi.y = hi.y.clone().max(p.y.clone());
    };
    let mut out = Vec::with_capacity(n + n / QUERY_EVERY);
    let mut pts: Vec<Point> = Vec::new();
    let mut count = 0;
    for op in ops.into_iter() {
        if count == n {
            break;
        }
        match &op {
            Op::Vertex(p) => pts.push(p.clone()),
            Op::Edge(s) => {
                pts.push(s.a.clone());
                pts.push(s.b.clone());
            }
            Op::Query(_) => continue,
        }
        for p in &pts[pts.len().saturating_sub(2)..] {
            grow(p, &mut lo, &mut hi);
        }
        out.push(op);
        count += 1;
        if count % QUERY_EVERY == 0 {
            let q = if r.gen_bool(0.05) {
                pts[r.gen_range(0..pts.len())].clone()
            } else {
                let (x0, x1) = (lo.x.to_f64() as i64 - 4, hi.x.to_f64() as i64 + 4);
                let (y0, y1) = (lo.y.to_f64() as i64 - 4, hi.y.to_f64() as i64 + 4);
                Point {
                    x: Coord::from_ratio(r.gen_range(2 * x0..=2 * x1), 2),
                    y: Coord::from_ratio(r.gen_range(2 * y0..=2 * y1), 2),
                }
            };
            out.push(Op::Query(q));
        }
    }
    Workload { ops: out }
}

/// A deterministic valid workload of exactly `n` insertions.
pub fn generate(seed: u64, n: usize, style: Style) -> Result<Workload, WorkloadError> {
    if n == 0 {
        return Err(WorkloadError::Empty);
    }
    let mut r = rng(seed);
    let ops = match style {
        Style::Nested => nested(&mut r, n),
        Style::GridWithIslands => grid_with_islands(&mut r, n),
        Style::RandomValid => random_valid(&mut r, n),
    };
    debug_assert!(ops.iter().filter(|o| o.is_insertion()).count() >= n);
    Ok(finish(ops, n, &mut r))
}

fn seg(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
    Segment::from_ints(x1, y1, x2, y2)
}

fn square_edges(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<Op> {
    vec![
        Op::Edge(seg(x0, y0, x1, y0)),
        Op::Edge(seg(x1, y0, x1, y1)),
        Op::Edge(seg(x0, y1, x1, y1)),
        Op::Edge(seg(x0, y0, x0, y1)),
    ]
}

/// Units in random order, each kept contiguous; a unit with a dependency
/// goes somewhere after the unit it depends on.
fn order_units(r: &mut impl Rng, units: Vec<(Vec<Op>, Option<usize>)>, first: Option<usize>) -> Vec<Op> {
    let mut key: Vec<f64> = vec![0.0; units.len()];
    for (i, (_, dep)) in units.iter().enumerate() {
        if dep.is_none() {
            key[i] = if Some(i) == first { -1.0 } else { r.gen_range(0.0..1.0) };
        }
    }
    for (i, (_, dep)) in units.iter().enumerate() {
        if let Some(d) = *dep {
            let k = key[d].max(0.0);
            key[i] = k + r.gen_range(0.0..1.0) * (1.0 - k);
        }
    }
    let mut idx: Vec<usize> = (0..units.len()).collect();
    idx.sort_by(|&a, &b| key[a].partial_cmp(&key[b]).unwrap().then(a.cmp(&b)));
    let mut units: Vec<Option<Vec<Op>>> = units.into_iter().map(|(u, _)| Some(u)).collect();
    idx.into_iter().flat_map(|i| units[i].take().unwrap()).collect()
}

/// Towers of concentric squares inside one enclosing square, with bridges
/// between rings, links between towers, diagonals and extra vertices.
fn nested(r: &mut impl Rng, n: usize) -> Vec<Op> {
    const COLS: i64 = 16;
    let mut units: Vec<(Vec<Op>, Option<usize>)> = Vec::new();
    let mut squares = Vec::new();
    let mut total = 4;
    let mut k = 0i64;
    let mut prev: Option<(i64, i64, i64)> = None;
    while total < n + 8 {
        let (cx, cy) = (64 * (k % COLS) + 40, 64 * (k / COLS) + 40);
        let d = r.gen_range(1..=6i64);
        let h = |j: i64| 4 * (d - j);
        for j in 0..d {
            let sq = units.len();
            squares.push(sq);
            let mut edges = square_edges(cx - h(j), cy - h(j), cx + h(j), cy + h(j));
            edges.shuffle(r);
            units.push((edges, None));
            total += 4;
            if r.gen_bool(0.3) {
                units.push((vec![Op::Vertex(Point::new(cx, cy + h(j)))], Some(sq)));
                total += 1;
            }
            if r.gen_bool(0.3) {
                units.push((vec![Op::Vertex(Point::new(cx + h(j) - 2, cy + 1))], None));
                total += 1;
            }
            if j + 1 < d && r.gen_bool(0.5) {
                units.push((vec![Op::Edge(seg(cx - h(j), cy - h(j), cx - h(j + 1), cy - h(j + 1)))], None));
                total += 1;
            }
        }
        if r.gen_bool(0.5) {
            let hi = h(d - 1);
            units.push((vec![Op::Edge(seg(cx - hi, cy - hi, cx + hi, cy + hi))], None));
            total += 1;
        }
        if let Some((px, py, ph)) = prev {
            if py == cy && r.gen_bool(0.3) {
                units.push((vec![Op::Edge(seg(px + ph, py - ph, cx - h(0), cy - h(0)))], None));
                total += 1;
            }
        }
        prev = Some((cx, cy, h(0)));
        k += 1;
    }
    let rows = (k + COLS - 1) / COLS;
    let big = units.len();
    squares.push(big);
    units.push((square_edges(0, 0, 64 * COLS.min(k) + 16, 64 * rows + 16), None));
    let first = squares[r.gen_range(0..squares.len())];
    order_units(r, units, Some(first))
}

/// One island strictly inside the lattice cell with lower-left `(x0, y0)`.
fn island(r: &mut impl Rng, x0: i64, y0: i64) -> Vec<Op> {
    match r.gen_range(0..6) {
        0 => {
            let s = r.gen_range(12..=28);
            let (ax, ay) = (x0 + r.gen_range(8..=56 - s), y0 + r.gen_range(8..=56 - s));
            let mut ops = square_edges(ax, ay, ax + s, ay + s);
            if r.gen_bool(0.5) {
                let (bx, by, t) = (ax + 4, ay + 4, s - 8);
                ops.extend(square_edges(bx, by, bx + t, by + t));
                if r.gen_bool(0.5) {
                    ops.push(Op::Edge(seg(bx, by, bx + t, by + t)));
                }
            }
            ops
        }
        1 => {
            let a = (x0 + r.gen_range(8..20), y0 + r.gen_range(8..20));
            let b = (x0 + r.gen_range(44..56), y0 + r.gen_range(8..20));
            let c = (x0 + r.gen_range(24..40), y0 + r.gen_range(40..56));
            let mut ops =
                vec![Op::Edge(seg(a.0, a.1, b.0, b.1)), Op::Edge(seg(b.0, b.1, c.0, c.1)), Op::Edge(seg(a.0, a.1, c.0, c.1))];
            ops.shuffle(r);
            ops
        }
        2 => {
            let (ax, ay) = (x0 + r.gen_range(8..28), y0 + r.gen_range(8..56));
            vec![Op::Edge(seg(ax, ay, x0 + r.gen_range(36..56), y0 + r.gen_range(8..56)))]
        }
        3 => vec![Op::Vertex(Point::new(x0 + r.gen_range(8..56), y0 + r.gen_range(8..56)))],
        4 => {
            let xs = [x0 + 8, x0 + 24, x0 + 40, x0 + 56];
            let ys: Vec<i64> = xs.iter().map(|_| y0 + r.gen_range(8..56)).collect();
            (0..3).map(|i| Op::Edge(seg(xs[i], ys[i], xs[i + 1], ys[i + 1]))).collect()
        }
        _ => Vec::new(),
    }
}

/// A square lattice with an island in most cells and vertices dropped
/// onto some lattice edges.
fn grid_with_islands(r: &mut impl Rng, n: usize) -> Vec<Op> {
    const S: i64 = 64;
    let g = ((n as f64 / 4.0).sqrt().ceil() as i64).max(1);
    let mut units: Vec<(Vec<Op>, Option<usize>)> = Vec::new();
    for i in 0..=g {
        for j in 0..=g {
            let (x, y) = (i * S, j * S);
            let mut lattice = |x1: i64, y1: i64, mid: Point, units: &mut Vec<(Vec<Op>, Option<usize>)>| {
                let u = units.len();
                units.push((vec![Op::Edge(seg(x, y, x1, y1))], None));
                if r.gen_bool(0.1) {
                    units.push((vec![Op::Vertex(mid)], Some(u)));
                }
            };
            if i < g {
                lattice(x + S, y, Point::new(x + S / 2, y), &mut units);
            }
            if j < g {
                lattice(x, y + S, Point::new(x, y + S / 2), &mut units);
            }
            if i < g && j < g {
                let ops = island(r, x, y);
                if !ops.is_empty() {
                    units.push((ops, None));
                }
            }
        }
    }
    let ops = order_units(r, units, None);
    if ops.len() >= n {
        ops
    } else {
        let mut ops = ops;
        ops.extend(grid_with_islands(r, n - ops.len()).into_iter().map(|op| shift(op, (g + 2) * S)));
        ops
    }
}

fn shift(op: Op, dx: i64) -> Op {
    let d = Coord::from_int(dx);
    let mv = |p: Point| Point { x: &p.x + &d, y: p.y };
    match op {
        Op::Vertex(p) => Op::Vertex(mv(p)),
        Op::Query(p) => Op::Query(mv(p)),
        Op::Edge(s) => Op::Edge(Segment::new(mv(s.a), mv(s.b)).expect("shift keeps segments valid")),
    }
}

const BUCKET: i64 = 32;

/// Short segments and points hashed into square buckets.
#[derive(Default)]
struct Buckets {
    segs: Vec<Segment>,
    seg_cells: HashMap<(i64, i64), Vec<usize>>,
    pts: Vec<Point>,
    pt_cells: HashMap<(i64, i64), Vec<usize>>,
    taken: HashSet<Point>,
}

fn cell_range(a: &Point, b: &Point) -> impl Iterator<Item = (i64, i64)> {
    let c = |v: &Coord| (v.to_f64() / BUCKET as f64).floor() as i64;
    let (x0, x1) = (c(&a.x).min(c(&b.x)), c(&a.x).max(c(&b.x)));
    let (y0, y1) = (c(&a.y).min(c(&b.y)), c(&a.y).max(c(&b.y)));
    (x0..=x1).flat_map(move |x| (y0..=y1).map(move |y| (x, y)))
}

impl Buckets {
    fn add_seg(&mut self, s: Segment) {
        let i = self.segs.len();
        for c in cell_range(&s.a, &s.b) {
            self.seg_cells.entry(c).or_default().push(i);
        }
        for p in [&s.a, &s.b] {
            self.add_pt(p.clone());
        }
        self.segs.push(s);
    }

    fn add_pt(&mut self, p: Point) {
        if self.taken.insert(p.clone()) {
            let i = self.pts.len();
            self.pt_cells.entry(cell_range(&p, &p).next().unwrap()).or_default().push(i);
            self.pts.push(p);
        }
    }

    /// Segments and points near the box spanned by `a` and `b`.
    fn near(&self, a: &Point, b: &Point) -> (Vec<Segment>, Vec<Point>) {
        let (mut ss, mut ps) = (Vec::new(), Vec::new());
        let mut seen = HashSet::new();
        for c in cell_range(a, b) {
            for &i in self.seg_cells.get(&c).into_iter().flatten() {
                if seen.insert(i) {
                    ss.push(self.segs[i].clone());
                }
            }
            ps.extend(self.pt_cells.get(&c).into_iter().flatten().map(|&i| self.pts[i].clone()));
        }
        (ss, ps)
    }

    fn fits(&self, s: &Segment) -> bool {
        let (ss, ps) = self.near(&s.a, &s.b);
        validate_insertion(&ss, &ps, s).is_ok()
    }

    fn on_a_segment(&self, p: &Point) -> bool {
        self.near(p, p).0.iter().any(|s| s.contains(p))
    }

    /// Splits segment `i` at `p`; the old slot keeps the lower half.
    fn split(&mut self, i: usize, p: &Point) {
        let s = self.segs[i].clone();
        self.segs[i] = Segment::new(s.a.clone(), p.clone()).expect("split point is interior");
        self.add_seg(Segment::new(p.clone(), s.b).expect("split point is interior"));
    }
}

/// Short random segments accepted only when they meet the rest at shared
/// endpoints, mixed with isolated vertices and vertices on edges.
fn random_valid(r: &mut impl Rng, n: usize) -> Vec<Op> {
    let side = 10 * ((n as f64).sqrt().ceil() as i64) + 32;
    let mut b = Buckets::default();
    let mut ops = Vec::with_capacity(n);
    let rand_pt = |r: &mut dyn rand::RngCore| Point::new(r.gen_range(0..side), r.gen_range(0..side));
    while ops.len() < n {
        let roll: f64 = r.gen_range(0.0..1.0);
        if roll < 0.05 {
            let p = rand_pt(r);
            if !b.taken.contains(&p) && !b.on_a_segment(&p) {
                b.add_pt(p.clone());
                ops.push(Op::Vertex(p));
            }
        } else if roll < 0.10 && !b.segs.is_empty() {
            let i = r.gen_range(0..b.segs.len());
            let s = &b.segs[i];
            let two = Coord::from_int(2);
            let m = Point { x: &(&s.a.x + &s.b.x) / &two, y: &(&s.a.y + &s.b.y) / &two };
            b.split(i, &m);
            ops.push(Op::Vertex(m));
        } else {
            let a = if !b.pts.is_empty() && r.gen_bool(0.7) { b.pts[r.gen_range(0..b.pts.len())].clone() } else { rand_pt(r) };
            let near = b.near(&a, &a).1;
            let end = if !near.is_empty() && r.gen_bool(0.7) {
                near[r.gen_range(0..near.len())].clone()
            } else {
                let d = Coord::from_int;
                Point { x: &a.x + &d(r.gen_range(-24..=24)), y: &a.y + &d(r.gen_range(-24..=24)) }
            };
            let Ok(s) = Segment::new(a, end) else { continue };
            if b.fits(&s) {
                b.add_seg(s.clone());
                ops.push(Op::Edge(s));
            }
        }
    }
    ops
}
