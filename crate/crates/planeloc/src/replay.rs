//! Workload replay through a `Locator` side by side with the brute-force
//! oracle, with face names matched to oracle tokens up to a bijection.

use std::collections::HashMap;
use std::fmt;

use crate::geom::{Point, Segment};
use crate::locator::{Boundary, LocateResult, Locator, LocatorConfig};
use crate::oracle::{validate_insertion, FaceToken, NaiveResult, NaiveSubdivision, Violation};
use crate::subdivision::{FaceName, SubdivisionError};
use crate::workload::{Op, Workload};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("op {index}: invalid edge: {violation}")]
    Invalid { index: usize, violation: Violation },
    #[error("op {index}: {source}")]
    Rejected { index: usize, source: SubdivisionError },
}

/// A query answer in oracle terms, with the face as an oracle token.
pub fn canonical(r: &NaiveResult) -> String {
    match r {
        NaiveResult::Outer => "outer".to_string(),
        NaiveResult::OnVertex => "vertex".to_string(),
        NaiveResult::OnEdge(e) => format!("edge {e}"),
        NaiveResult::Face(t) => format!("face {t}"),
    }
}

/// Face names paired with oracle tokens, one to one.
#[derive(Debug, Clone, Default)]
pub struct Bijection {
    fwd: HashMap<FaceName, FaceToken>,
    back: HashMap<FaceToken, FaceName>,
}

impl Bijection {
    /// Records the pair and reports whether it is consistent with the
    /// pairs seen so far.
    pub fn pair(&mut self, f: FaceName, t: FaceToken) -> bool {
        let a = *self.fwd.entry(f).or_insert(t);
        let b = *self.back.entry(t).or_insert(f);
        a == t && b == f
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    /// Forgets all pairs; names may be reused once the faces change.
    pub fn clear(&mut self) {
        self.fwd.clear();
        self.back.clear();
    }
}

/// A locator plus a lazily rebuilt oracle over the same edges.
#[derive(Debug, Clone)]
pub struct Replay {
    pub locator: Locator,
    /// Whether each edge is checked against all earlier ones first.
    pub validate: bool,
    oracle: Option<NaiveSubdivision>,
}

impl Replay {
    pub fn new(cfg: LocatorConfig) -> Replay {
        Replay { locator: Locator::new(cfg), validate: true, oracle: None }
    }

    /// Applies one insertion; queries are ignored.
    pub fn insert(&mut self, index: usize, op: &Op) -> Result<(), ReplayError> {
        match op {
            Op::Query(_) => return Ok(()),
            Op::Edge(s) => {
                if self.validate {
                    let segs: Vec<Segment> = self.locator.subdivision().segments().cloned().collect();
                    let pts: Vec<Point> = self.locator.subdivision().vertex_points().cloned().collect();
                    validate_insertion(&segs, &pts, s).map_err(|violation| ReplayError::Invalid { index, violation })?;
                }
                self.locator.insert_edge(s).map_err(|source| ReplayError::Rejected { index, source })?;
            }
            Op::Vertex(p) => {
                self.locator.insert_vertex(p).map_err(|source| ReplayError::Rejected { index, source })?;
            }
        }
        self.oracle = None;
        Ok(())
    }

    pub fn oracle(&mut self) -> &NaiveSubdivision {
        let sub = self.locator.subdivision();
        self.oracle.get_or_insert_with(|| {
            let segs: Vec<Segment> = sub.segments().cloned().collect();
            let pts: Vec<Point> = sub.vertex_points().cloned().collect();
            NaiveSubdivision::build(&segs, &pts)
        })
    }

    /// Locates `q` both ways; both answers when they disagree.
    pub fn check(&mut self, q: &Point, names: &mut Bijection) -> Result<NaiveResult, (LocateResult, NaiveResult)> {
        let got = self.locator.locate(q);
        let want = self.oracle().locate(q);
        let ok = match (&got, &want) {
            (LocateResult::OuterFace, NaiveResult::Outer) => true,
            (LocateResult::OnBoundary(Boundary::Vertex(v)), NaiveResult::OnVertex) => {
                self.locator.subdivision().vertex_pos(*v) == q
            }
            (LocateResult::OnBoundary(Boundary::Edge(e)), NaiveResult::OnEdge(i)) => *e as usize == *i,
            (LocateResult::Face(f), NaiveResult::Face(t)) => names.pair(*f, *t),
            _ => false,
        };
        if ok {
            Ok(want)
        } else {
            Err((got, want))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Index of the offending op in the workload.
    pub index: usize,
    pub query: Point,
    pub got: String,
    pub want: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}: got {}, want {}", self.index, Op::Query(self.query.clone()), self.got, self.want)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub insertions: usize,
    pub queries: usize,
    /// Most distinct faces paired within one state.
    pub faces_matched: usize,
    pub mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Replays `w`, checking every query against the oracle, or against
/// `expected` (one canonical answer per query) when given.
pub fn verify(w: &Workload, cfg: LocatorConfig, expected: Option<&[String]>) -> Result<VerifyReport, ReplayError> {
    let mut rp = Replay::new(cfg);
    let mut names = Bijection::default();
    let mut rep = VerifyReport::default();
    for (i, op) in w.ops.iter().enumerate() {
        let Op::Query(q) = op else {
            rp.insert(i, op)?;
            rep.insertions += 1;
            rep.faces_matched = rep.faces_matched.max(names.len());
            names.clear();
            continue;
        };
        let k = rep.queries;
        rep.queries += 1;
        let bad = match rp.check(q, &mut names) {
            Err((got, want)) => Some((format!("{got:?}"), canonical(&want))),
            Ok(want) => match expected {
                Some(exp) => {
                    let want = canonical(&want);
                    let listed = exp.get(k).map(String::as_str).unwrap_or("<missing>");
                    (listed != want).then(|| (want, listed.to_string()))
                }
                None => None,
            },
        };
        if let Some((got, want)) = bad {
            rep.mismatch = Some(Mismatch { index: i, query: q.clone(), got, want });
            break;
        }
    }
    rep.faces_matched = rep.faces_matched.max(names.len());
    Ok(rep)
}

/// The oracle's canonical answer for every query of `w`.
pub fn expected_answers(w: &Workload) -> Result<Vec<String>, ReplayError> {
    let mut rp = Replay::new(LocatorConfig::default());
    let mut out = Vec::new();
    for (i, op) in w.ops.iter().enumerate() {
        match op {
            Op::Query(q) => out.push(canonical(&rp.oracle().locate(q))),
            _ => rp.insert(i, op)?,
        }
    }
    Ok(out)
}

/// Shortest failing prefix of `w` by bisection, then queries before the
/// last op dropped while the failure persists.
pub fn minimize(w: &Workload, fails: impl Fn(&Workload) -> bool) -> Workload {
    let (mut lo, mut hi) = (0, w.ops.len());
    if !fails(w) {
        return w.clone();
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if fails(&w.prefix(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut cur = w.prefix(hi);
    let mut i = 0;
    while i + 1 < cur.ops.len() {
        if matches!(cur.ops[i], Op::Query(_)) {
            let mut t = cur.clone();
            t.ops.remove(i);
            if fails(&t) {
                cur = t;
                continue;
            }
        }
        i += 1;
    }
    cur
}
