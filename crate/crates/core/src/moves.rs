//! Elementary moves, simultaneous batches and move schedules.
//!
//! A [`Move`] acts on an interior non-loop edge `e = (u, v)`: one half-edge
//! at `u` other than `e`'s end is exchanged with one half-edge at `v` other
//! than `e`'s end. This is the nearest-neighbour interchange across `e`,
//! expressed on half-edges so loops and parallel edges migrate correctly.
//! A move is its own inverse on labeled graphs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::canonical::canonicalize;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, HalfEdgeId, PantsGraph, RawGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub edge: EdgeId,
    pub swap: [HalfEdgeId; 2],
}

/// How simultaneous moves are allowed to overlap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjointness {
    /// Support edges form a matching (no shared vertex).
    #[default]
    Vertex,
    /// Support edges are distinct; moves replay in ascending edge order.
    Edge,
}

impl std::str::FromStr for Disjointness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Disjointness::Vertex),
            "edge" => Ok(Disjointness::Edge),
            other => Err(Error::Domain(format!("unknown disjointness `{other}`"))),
        }
    }
}

impl Move {
    /// Checks the move is well formed on `graph`.
    pub fn check(&self, graph: &PantsGraph) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::MalformedMove {
                mv: *self,
                reason: reason.to_string(),
            })
        };
        if self.edge >= graph.edge_count() {
            return bad("edge out of range");
        }
        if self.swap.iter().any(|&h| h >= graph.half_edge_count()) {
            return bad("half-edge out of range");
        }
        let [a, b] = graph.edge(self.edge);
        let (u, v) = (graph.owner(a), graph.owner(b));
        if u == v {
            return bad("edge is a loop");
        }
        if !graph.is_interior(u) || !graph.is_interior(v) {
            return bad("edge is a leaf edge");
        }
        let [x, y] = self.swap;
        if x == a || x == b || y == a || y == b {
            return bad("swap uses an end of the support edge");
        }
        let (ox, oy) = (graph.owner(x), graph.owner(y));
        if !((ox == u && oy == v) || (ox == v && oy == u)) {
            return bad("swapped half-edges must sit at opposite ends of the edge");
        }
        Ok(())
    }

    pub fn apply(&self, graph: &PantsGraph) -> Result<PantsGraph> {
        self.check(graph)?;
        let mut out = graph.clone();
        out.exchange(self.swap[0], self.swap[1]);
        Ok(out)
    }

    /// Support vertices of the move on `graph`.
    pub fn support(&self, graph: &PantsGraph) -> (usize, usize) {
        graph.endpoints(self.edge)
    }
}

/// Two moves on `e` that give non-isomorphic results (the other two half-edge
/// choices reproduce these up to relabeling). `None` for loops and leaf edges.
pub fn move_variants(graph: &PantsGraph, e: EdgeId) -> Option<[Move; 2]> {
    if graph.is_loop(e) || !graph.is_interior_edge(e) {
        return None;
    }
    let [a, b] = graph.edge(e);
    let xs = graph.others_at(a);
    let ys = graph.others_at(b);
    Some([
        Move {
            edge: e,
            swap: [xs[0], ys[0]],
        },
        Move {
            edge: e,
            swap: [xs[0], ys[1]],
        },
    ])
}

/// Every well-formed move on `graph` (four per movable edge).
pub fn all_moves(graph: &PantsGraph) -> Vec<Move> {
    let mut out = Vec::new();
    for e in 0..graph.edge_count() {
        if graph.is_loop(e) || !graph.is_interior_edge(e) {
            continue;
        }
        let [a, b] = graph.edge(e);
        for x in graph.others_at(a) {
            for y in graph.others_at(b) {
                out.push(Move { edge: e, swap: [x, y] });
            }
        }
    }
    out
}

/// Graphs one move away. In quotient mode results are deduplicated up to
/// isomorphism, otherwise up to exact labeled equality.
pub fn neighbors(graph: &PantsGraph, quotient: bool) -> Vec<PantsGraph> {
    let mut seen_keys = HashSet::new();
    let mut seen_owners = HashSet::new();
    let mut out = Vec::new();
    for mv in all_moves(graph) {
        let next = mv.apply(graph).expect("enumerated moves are well formed");
        let fresh = if quotient {
            seen_keys.insert(canonicalize(&next))
        } else {
            seen_owners.insert(next.owners().to_vec())
        };
        if fresh {
            out.push(next);
        }
    }
    out
}

/// A set of simultaneous moves; costs `sqrt(k)` for `k` moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveBatch {
    pub moves: Vec<Move>,
}

impl MoveBatch {
    pub fn new(mut moves: Vec<Move>) -> Self {
        moves.sort();
        MoveBatch { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn cost(&self) -> f64 {
        (self.moves.len() as f64).sqrt()
    }

    /// Validates disjointness on `graph` and returns the result of applying
    /// every move.
    pub fn apply(&self, graph: &PantsGraph, mode: Disjointness) -> Result<PantsGraph> {
        let mut order = self.moves.clone();
        order.sort();
        for w in order.windows(2) {
            if w[0].edge == w[1].edge {
                return Err(Error::OverlappingBatch {
                    first: w[0].edge,
                    second: w[1].edge,
                });
            }
        }
        let mut out = graph.clone();
        match mode {
            Disjointness::Vertex => {
                for mv in &order {
                    mv.check(graph)?;
                }
                let mut used: Vec<Option<EdgeId>> = vec![None; graph.vertex_count()];
                for mv in &order {
                    let (u, v) = mv.support(graph);
                    for w in [u, v] {
                        if let Some(prev) = used[w] {
                            return Err(Error::OverlappingBatch {
                                first: prev,
                                second: mv.edge,
                            });
                        }
                        used[w] = Some(mv.edge);
                    }
                }
                for mv in &order {
                    out.exchange(mv.swap[0], mv.swap[1]);
                }
            }
            Disjointness::Edge => {
                for mv in &order {
                    mv.check(&out)?;
                    out.exchange(mv.swap[0], mv.swap[1]);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleCost {
    /// `sum sqrt(k_i)`.
    pub cubical: f64,
    /// `sum k_i`, the plain pants-graph length of the path.
    pub unit_moves: usize,
    pub max_batch: usize,
}

/// A path in the cubical pants graph.
#[derive(Clone, Debug, PartialEq)]
pub struct MoveSchedule {
    pub start: PantsGraph,
    pub batches: Vec<MoveBatch>,
    pub end: PantsGraph,
    pub disjoint: Disjointness,
}

impl MoveSchedule {
    pub fn empty(start: PantsGraph) -> Self {
        MoveSchedule {
            end: start.clone(),
            start,
            batches: Vec::new(),
            disjoint: Disjointness::Vertex,
        }
    }

    /// Replays `batches` from `start`.
    pub fn replay(
        start: PantsGraph,
        batches: Vec<MoveBatch>,
        disjoint: Disjointness,
    ) -> Result<Self> {
        let mut current = start.clone();
        for batch in &batches {
            current = batch.apply(&current, disjoint)?;
        }
        Ok(MoveSchedule {
            start,
            batches,
            end: current,
            disjoint,
        })
    }

    /// Re-applies every batch and checks the stored end graph.
    pub fn verify(&self) -> Result<()> {
        let replayed = Self::replay(self.start.clone(), self.batches.clone(), self.disjoint)?;
        if replayed.end != self.end {
            return Err(Error::ReplayMismatch(
                "replayed end graph differs from recorded end".into(),
            ));
        }
        Ok(())
    }

    pub fn cost(&self) -> ScheduleCost {
        ScheduleCost {
            cubical: self.total_cost(),
            unit_moves: self.batches.iter().map(MoveBatch::len).sum(),
            max_batch: self.batches.iter().map(MoveBatch::len).max().unwrap_or(0),
        }
    }

    pub fn total_cost(&self) -> f64 {
        self.batches.iter().map(MoveBatch::cost).fold(0.0, |a, c| a + c)
    }

    pub fn batch_sizes(&self) -> Vec<usize> {
        self.batches.iter().map(MoveBatch::len).collect()
    }

    /// Concatenates `other`, whose start must equal this schedule's end.
    pub fn then(mut self, other: MoveSchedule) -> Result<Self> {
        if other.start != self.end {
            return Err(Error::ReplayMismatch(
                "schedules do not meet: end and start differ".into(),
            ));
        }
        self.batches.extend(other.batches);
        self.end = other.end;
        Ok(self)
    }

    /// Applies a batch and appends it; empty batches are skipped.
    pub fn push(&mut self, moves: Vec<Move>) -> Result<()> {
        if moves.is_empty() {
            return Ok(());
        }
        let batch = MoveBatch::new(moves);
        self.end = batch.apply(&self.end, self.disjoint)?;
        self.batches.push(batch);
        Ok(())
    }

    pub fn to_log(&self) -> ScheduleLog {
        ScheduleLog {
            format: SCHEDULE_FORMAT.to_string(),
            disjoint: self.disjoint,
            start: self.start.to_raw(),
            batches: self
                .batches
                .iter()
                .map(|b| BatchLog {
                    moves: b.moves.clone(),
                    cost: b.cost(),
                })
                .collect(),
            total_cost: self.total_cost(),
            end: Some(self.end.to_raw()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_log()).expect("schedule serialization is infallible")
    }

    /// Parses a schedule log and replays it; the recorded end graph, when
    /// present, must match the replay exactly.
    pub fn from_json(text: &str) -> Result<Self> {
        let log: ScheduleLog = serde_json::from_str(text)?;
        log.replay()
    }
}

pub const SCHEDULE_FORMAT: &str = "pantslab-schedule/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchLog {
    pub moves: Vec<Move>,
    pub cost: f64,
}

/// JSON log of a schedule as consumed by the `replay` subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScheduleLog {
    pub format: String,
    #[serde(default)]
    pub disjoint: Disjointness,
    pub start: RawGraph,
    pub batches: Vec<BatchLog>,
    pub total_cost: f64,
    #[serde(default)]
    pub end: Option<RawGraph>,
}

impl ScheduleLog {
    pub fn replay(&self) -> Result<MoveSchedule> {
        if self.format != SCHEDULE_FORMAT {
            return Err(Error::ReplayMismatch(format!(
                "unknown schedule format `{}`",
                self.format
            )));
        }
        let start = PantsGraph::try_from(self.start.clone())?;
        let batches: Vec<MoveBatch> = self
            .batches
            .iter()
            .map(|b| MoveBatch::new(b.moves.clone()))
            .collect();
        for (i, (b, log)) in batches.iter().zip(&self.batches).enumerate() {
            if (b.cost() - log.cost).abs() > 1e-9 {
                return Err(Error::ReplayMismatch(format!(
                    "batch {i} records cost {} but has {} moves",
                    log.cost,
                    b.len()
                )));
            }
        }
        let schedule = MoveSchedule::replay(start, batches, self.disjoint)?;
        if (schedule.total_cost() - self.total_cost).abs() > 1e-9 {
            return Err(Error::ReplayMismatch(format!(
                "recorded total {} differs from replayed {}",
                self.total_cost,
                schedule.total_cost()
            )));
        }
        if let Some(end) = &self.end {
            if end != &schedule.end.to_raw() {
                return Err(Error::ReplayMismatch(
                    "replayed end graph differs from recorded end".into(),
                ));
            }
        }
        Ok(schedule)
    }
}
