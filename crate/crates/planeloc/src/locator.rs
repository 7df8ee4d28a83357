//! Point location in a growing planar subdivision: the component whose
//! outer boundary encloses the query face comes from the lowest stabbed
//! trapezoid, and a ray shot inside that component names the face.

use crate::blocks::cascade::Strategy;
use crate::find_cc::{FindCc, FindCcStats};
use crate::geom::{EdgeId, Point, Segment};
use crate::locate_cc::{LocateCc, LocateCcStats};
use crate::stab_lowest::DEFAULT_FANOUT;
use crate::subdivision::{FaceName, Subdivision, SubdivisionError, SubdivisionStats, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Edge(EdgeId),
    Vertex(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocateResult {
    Face(FaceName),
    OuterFace,
    OnBoundary(Boundary),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocatorConfig {
    /// Expected number of edges; sizes the backbone fan-out and blocks.
    pub n_cap: usize,
    pub stab_fanout: usize,
    pub strategy: Strategy,
}

impl Default for LocatorConfig {
    fn default() -> Self {
        LocatorConfig { n_cap: 1 << 16, stab_fanout: DEFAULT_FANOUT, strategy: Strategy::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocatorStats {
    pub vertices: u64,
    pub edges: u64,
    pub subdivision: SubdivisionStats,
    pub find_cc: FindCcStats,
    pub locate_cc: LocateCcStats,
}

#[derive(Debug, Clone)]
pub struct Locator {
    sub: Subdivision,
    find_cc: FindCc,
    locate_cc: LocateCc,
}

impl Default for Locator {
    fn default() -> Self {
        Locator::new(LocatorConfig::default())
    }
}

impl Locator {
    pub fn new(cfg: LocatorConfig) -> Locator {
        Locator {
            sub: Subdivision::new(),
            find_cc: FindCc::new(cfg.stab_fanout, cfg.strategy),
            locate_cc: LocateCc::new(cfg.n_cap, cfg.strategy),
        }
    }

    pub fn subdivision(&self) -> &Subdivision {
        &self.sub
    }

    pub fn find_cc(&self) -> &FindCc {
        &self.find_cc
    }

    pub fn locate_cc(&self) -> &LocateCc {
        &self.locate_cc
    }

    /// Inserts an edge meeting the subdivision only at its endpoints.
    pub fn insert_edge(&mut self, seg: &Segment) -> Result<EdgeId, SubdivisionError> {
        let (e, class, ev) = self.sub.insert_edge(seg)?;
        self.find_cc.on_face_event(&self.sub, &ev, class);
        self.locate_cc.insert_edge_component(&self.sub, e);
        Ok(e)
    }

    /// Inserts a vertex inside a face or on an edge, splitting that edge.
    pub fn insert_vertex(&mut self, p: &Point) -> Result<VertexId, SubdivisionError> {
        if self.sub.vertex_at(p).is_some() {
            return Err(SubdivisionError::DuplicateVertex(p.clone()));
        }
        let on = self.locate_cc.edge_through(p);
        let v = self.sub.insert_vertex(p, on)?;
        if let Some(e) = on {
            let tail = (self.sub.edge_count() - 1) as EdgeId;
            self.locate_cc.split_edge(e, p, tail);
        }
        Ok(v)
    }

    pub fn locate(&self, q: &Point) -> LocateResult {
        if let Some(v) = self.sub.vertex_at(q) {
            return LocateResult::OnBoundary(Boundary::Vertex(v));
        }
        if let Some(e) = self.locate_cc.edge_through(q) {
            return LocateResult::OnBoundary(Boundary::Edge(e));
        }
        let Some(gamma) = self.find_cc.query_component(&self.sub, q) else {
            return LocateResult::OuterFace;
        };
        let hit = self.locate_cc.ray_shoot(gamma, q).expect("component is live");
        let Some((e, _)) = hit else {
            debug_assert!(false, "enclosing component has no edge above {q:?}");
            return LocateResult::OuterFace;
        };
        // the directed copy running right to left has the face below on its left
        match self.sub.face_name_of_directed_edge(2 * e + 1) {
            Some(f) => LocateResult::Face(f),
            None => {
                debug_assert!(false, "face below edge {e} is unbounded");
                LocateResult::OuterFace
            }
        }
    }

    pub fn stats(&self) -> LocatorStats {
        LocatorStats {
            vertices: self.sub.vertex_count() as u64,
            edges: self.sub.edge_count() as u64,
            subdivision: self.sub.stats(),
            find_cc: self.find_cc.stats(),
            locate_cc: self.locate_cc.stats(),
        }
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        self.sub.check_invariants()?;
        self.find_cc.check_invariants()?;
        self.locate_cc.check_invariants()
    }
}
