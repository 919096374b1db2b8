//! Constructive reductions producing replayable move schedules: trees to the
//! linear tree, cycles to loops, loops sorted into a treelike tail, and the
//! iteration that makes any graph treelike.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::canonical::is_isomorphic;
use crate::cycles::{cycle_vertices, greedy_disjoint_cycles, CycleSet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, HalfEdgeId, PantsGraph, VertexId};
use crate::moves::{Move, MoveBatch, MoveSchedule};
use crate::treeview::{linearize, Line, TreeView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Trim,
    Melt,
    GenusReduce,
    LoopSort,
    Tail,
    Align,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Trim => "trim",
            Phase::Melt => "melt",
            Phase::GenusReduce => "genus_reduce",
            Phase::LoopSort => "loop_sort",
            Phase::Tail => "tail",
            Phase::Align => "align",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseRecord {
    pub phase: Phase,
    pub batch_sizes: Vec<usize>,
    pub cost: f64,
    pub effective_genus: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReductionTrace {
    pub phases: Vec<PhaseRecord>,
    /// Effective genus at the start of each iteration.
    pub effective_genus: Vec<usize>,
}

impl ReductionTrace {
    /// Records the batches of `schedule` from index `from` as one phase.
    pub fn record(&mut self, phase: Phase, schedule: &MoveSchedule, from: usize, genus: Option<usize>) {
        let batch_sizes: Vec<usize> = schedule.batches[from..].iter().map(MoveBatch::len).collect();
        let cost = schedule.batches[from..].iter().map(MoveBatch::cost).fold(0.0, |a, c| a + c);
        self.phases.push(PhaseRecord {
            phase,
            batch_sizes,
            cost,
            effective_genus: genus,
        });
    }

    pub fn total_cost(&self) -> f64 {
        self.phases.iter().fold(0.0, |a, p| a + p.cost)
    }

    /// One row per phase: phase, batch sizes, cost, effective genus.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase,batch_sizes,cost,effective_genus\n");
        for p in &self.phases {
            let sizes: Vec<String> = p.batch_sizes.iter().map(|k| k.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.phase.name(),
                sizes.join(" "),
                p.cost,
                p.effective_genus.map_or(String::new(), |g| g.to_string())
            ));
        }
        out
    }
}

fn half_at(graph: &PantsGraph, e: EdgeId, v: VertexId) -> HalfEdgeId {
    let [a, b] = graph.edge(e);
    if graph.owner(a) == v {
        a
    } else {
        b
    }
}

/// Trim and melt a tree into the linear tree.
pub fn to_linear(tree: &PantsGraph) -> Result<(MoveSchedule, ReductionTrace)> {
    let view = TreeView::whole_tree(tree)?;
    let mut schedule = MoveSchedule::empty(tree.clone());
    let mut trace = ReductionTrace::default();
    if view.is_path(tree) {
        return Ok((schedule, trace));
    }
    let state = crate::treeview::trim_view(&mut schedule, &view)?;
    trace.record(Phase::Trim, &schedule, 0, None);
    let mark = schedule.batches.len();
    crate::treeview::melt_view(&mut schedule, &state)?;
    trace.record(Phase::Melt, &schedule, mark, None);
    Ok((schedule, trace))
}

/// Cycle lengths at the start of each shortening stage.
pub type ShorteningLog = Vec<Vec<usize>>;

/// Shortens every cycle to a loop; each stage moves on alternate cycle edges
/// so a cycle of length `l` becomes one of length `l - floor(l / 2)`.
pub fn genus_reduce_in(schedule: &mut MoveSchedule, cycles: &CycleSet) -> Result<(CycleSet, ShorteningLog)> {
    if !cycles.is_edge_disjoint() {
        return Err(Error::Invariant("cycles share an edge".into()));
    }
    let mut current = cycles.cycles.clone();
    let mut log = Vec::new();
    loop {
        let graph = &schedule.end;
        let lengths: Vec<usize> = current.iter().map(Vec::len).collect();
        if lengths.iter().all(|&l| l <= 1) {
            for c in &current {
                cycle_vertices(graph, c).ok_or_else(|| Error::Invariant("cycle is not a loop".into()))?;
            }
            break;
        }
        log.push(lengths);
        let mut moves = Vec::new();
        let mut next = Vec::with_capacity(current.len());
        for cycle in &current {
            let l = cycle.len();
            let verts = cycle_vertices(graph, cycle)
                .ok_or_else(|| Error::Invariant("cycle is not embedded".into()))?;
            if l == 1 {
                next.push(cycle.clone());
                continue;
            }
            let mut keep = Vec::with_capacity(l - l / 2);
            for (i, &e) in cycle.iter().enumerate() {
                if i % 2 == 0 && i < 2 * (l / 2) {
                    let c_i = verts[i];
                    let c_next = verts[(i + 1) % l];
                    let prev_edge = cycle[(i + l - 1) % l];
                    let next_edge = cycle[(i + 1) % l];
                    let inward = half_at(graph, prev_edge, c_i);
                    let off = graph
                        .incident(c_next)
                        .iter()
                        .copied()
                        .find(|&h| graph.edge_of(h) != e && graph.edge_of(h) != next_edge)
                        .expect("cycle vertex has an off-cycle half-edge");
                    moves.push(Move {
                        edge: e,
                        swap: [inward, off],
                    });
                } else {
                    keep.push(e);
                }
            }
            next.push(keep);
        }
        schedule.push(moves)?;
        for (c, &l) in next.iter().zip(&log[log.len() - 1]) {
            if c.len() != l - l / 2 || cycle_vertices(&schedule.end, c).is_none() {
                return Err(Error::Invariant("cycle shortening broke a cycle".into()));
            }
        }
        current = next;
    }
    Ok((CycleSet { cycles: current }, log))
}

/// Genus reduction on a fresh schedule from `graph`.
pub fn genus_reduce(graph: &PantsGraph, cycles: &CycleSet) -> Result<(MoveSchedule, ShorteningLog)> {
    let mut schedule = MoveSchedule::empty(graph.clone());
    let (_, log) = genus_reduce_in(&mut schedule, cycles)?;
    Ok((schedule, log))
}

/// A treelike part holding every loop, hanging from the rest of the graph
/// by one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    /// Vertices on the treelike side.
    pub side: Vec<bool>,
    pub edge: EdgeId,
}

/// If removing `e` leaves a treelike side with all loops and a loop-free
/// other side, returns that split.
pub fn tail_split(graph: &PantsGraph, e: EdgeId) -> Option<Tail> {
    if graph.is_loop(e) || !graph.is_interior_edge(e) {
        return None;
    }
    let (a, b) = graph.endpoints(e);
    let n = graph.vertex_count();
    let mut side = vec![false; n];
    side[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        for &h in graph.incident(u) {
            let f = graph.edge_of(h);
            if f == e || !graph.is_interior_edge(f) {
                continue;
            }
            let w = graph.across(h);
            if !side[w] {
                side[w] = true;
                queue.push_back(w);
            }
        }
    }
    if side[b] {
        return None;
    }
    let stats = |mask: bool| {
        let verts = (0..n).filter(|&v| graph.is_interior(v) && side[v] == mask).count();
        let edges = (0..graph.edge_count())
            .filter(|&f| f != e && graph.is_interior_edge(f) && side[graph.endpoints(f).0] == mask)
            .count();
        let loops: usize = (0..n).filter(|&v| side[v] == mask).map(|v| graph.loops_at(v)).sum();
        (edges + 1 - verts, loops)
    };
    let (rank_a, loops_a) = stats(true);
    let (rank_b, loops_b) = stats(false);
    if loops_b == 0 && loops_a > 0 && rank_a == loops_a {
        Some(Tail { side, edge: e })
    } else if loops_a == 0 && loops_b > 0 && rank_b == loops_b {
        let side = side.iter().map(|s| !s).collect();
        Some(Tail { side, edge: e })
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
enum Kind {
    Loop,
    Plain,
}

#[derive(Clone, Debug, Serialize)]
pub struct SortRound {
    pub line_len: usize,
    pub fixes: usize,
    pub splits: usize,
}

#[derive(Clone, Debug)]
pub struct SortOutcome {
    pub tail: Option<Tail>,
    pub rounds: Vec<SortRound>,
    pub line_len: usize,
}

fn bfs_members(graph: &PantsGraph, member: &[bool], root: VertexId) -> (Vec<usize>, Vec<Option<EdgeId>>) {
    let n = graph.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![None; n];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &h in graph.incident(u) {
            let w = graph.across(h);
            if w != u && member[w] && dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                via[w] = Some(graph.edge_of(h));
                queue.push_back(w);
            }
        }
    }
    (dist, via)
}

fn farthest(dist: &[usize]) -> VertexId {
    let mut best = 0;
    for (v, &d) in dist.iter().enumerate() {
        if d != usize::MAX && (dist[best] == usize::MAX || d > dist[best]) {
            best = v;
        }
    }
    best
}

/// Moves every loop into one branch: afterwards some edge splits the graph
/// into a treelike part holding all loops (and the old tail, if any) and a
/// loop-free remainder.
pub fn sort_loops_in(schedule: &mut MoveSchedule, tail: Option<&Tail>) -> Result<SortOutcome> {
    let graph = schedule.end.clone();
    let n = graph.vertex_count();
    let in_tail = |v: VertexId| tail.is_some_and(|t| t.side[v]);
    let is_loop_vertex: Vec<bool> = (0..n).map(|v| !in_tail(v) && graph.loops_at(v) > 0).collect();
    if tail.is_none() && !is_loop_vertex.iter().any(|&x| x) {
        return Err(Error::Domain("no loops present".into()));
    }
    let member: Vec<bool> = (0..n)
        .map(|v| graph.is_interior(v) && !in_tail(v) && !is_loop_vertex[v])
        .collect();
    let Some(first) = (0..n).find(|&v| member[v]) else {
        let tail = (0..graph.edge_count()).find_map(|e| tail_split(&graph, e));
        return Ok(SortOutcome {
            tail,
            rounds: Vec::new(),
            line_len: 0,
        });
    };
    // spanning tree by BFS from a peripheral member (double sweep)
    let (d0, _) = bfs_members(&graph, &member, first);
    let root = farthest(&d0);
    let (_, via) = bfs_members(&graph, &member, root);
    let mut tree_edge = vec![false; graph.edge_count()];
    for e in via.into_iter().flatten() {
        tree_edge[e] = true;
    }
    let view = TreeView {
        member: member.clone(),
        tree_edge,
    };
    let mut kinds: HashMap<HalfEdgeId, Kind> = HashMap::new();
    for v in (0..n).filter(|&v| member[v]) {
        for h in view.terminals(&graph, v) {
            let w = graph.across(h);
            let kind = if in_tail(w) || is_loop_vertex[w] || w == v {
                Kind::Loop
            } else {
                Kind::Plain
            };
            kinds.insert(h, kind);
        }
    }
    let (mut line, _) = linearize(schedule, &view)?;
    let line_len = line.len();
    let mut rounds = Vec::new();
    let guard = 4 * line_len + 8;
    loop {
        collapse_ends(&schedule.end, &mut line, &mut kinds);
        let (loops, plain) = count_kinds(&schedule.end, &line, &kinds);
        if loops <= 1 || plain <= 1 {
            break;
        }
        if rounds.len() > guard {
            return Err(Error::Invariant("loop sorting does not terminate".into()));
        }
        let len_before = line.len();
        let fixes = fix_alternations(schedule, &line, &kinds)?;
        let splits = split_pairs(schedule, &mut line, &mut kinds)?;
        rounds.push(SortRound {
            line_len: len_before,
            fixes,
            splits,
        });
    }
    let graph = &schedule.end;
    let (loops, plain) = count_kinds(graph, &line, &kinds);
    let terminals: Vec<HalfEdgeId> = (0..line.len()).flat_map(|i| line.terminals(graph, i)).collect();
    let pick = if loops == 1 {
        terminals.iter().find(|h| kinds[h] == Kind::Loop)
    } else if plain == 1 {
        terminals.iter().find(|h| kinds[h] == Kind::Plain)
    } else {
        None
    };
    let tail = match pick {
        Some(&h) => Some(tail_split(graph, graph.edge_of(h)).ok_or_else(|| {
            Error::Invariant("sorted loops do not split off a treelike tail".into())
        })?),
        None => None,
    };
    Ok(SortOutcome {
        tail,
        rounds,
        line_len,
    })
}

/// Loop sorting on a fresh schedule from `graph`.
pub fn sort_loops(graph: &PantsGraph) -> Result<(MoveSchedule, SortOutcome)> {
    let mut schedule = MoveSchedule::empty(graph.clone());
    let outcome = sort_loops_in(&mut schedule, None)?;
    Ok((schedule, outcome))
}

fn merged_kind(graph: &PantsGraph, kinds: &HashMap<HalfEdgeId, Kind>, x: HalfEdgeId, y: HalfEdgeId) -> Option<Kind> {
    if graph.partner(x) == y {
        Some(Kind::Loop)
    } else if kinds[&x] == kinds[&y] {
        Some(kinds[&x])
    } else {
        None
    }
}

fn collapse_ends(graph: &PantsGraph, line: &mut Line, kinds: &mut HashMap<HalfEdgeId, Kind>) {
    while line.len() >= 2 {
        let t = line.terminals(graph, 0);
        if let Some(k) = merged_kind(graph, kinds, t[0], t[1]) {
            let h = line.link_half(graph, 0, 1);
            kinds.insert(h, k);
            line.verts.remove(0);
            line.links.remove(0);
            continue;
        }
        let last = line.len() - 1;
        let t = line.terminals(graph, last);
        if let Some(k) = merged_kind(graph, kinds, t[0], t[1]) {
            let h = line.link_half(graph, last - 1, last - 1);
            kinds.insert(h, k);
            line.verts.pop();
            line.links.pop();
            continue;
        }
        break;
    }
}

fn count_kinds(graph: &PantsGraph, line: &Line, kinds: &HashMap<HalfEdgeId, Kind>) -> (usize, usize) {
    let mut loops = 0;
    let mut plain = 0;
    for i in 0..line.len() {
        for h in line.terminals(graph, i) {
            match kinds[&h] {
                Kind::Loop => loops += 1,
                Kind::Plain => plain += 1,
            }
        }
    }
    (loops, plain)
}

fn single_terminal(graph: &PantsGraph, line: &Line, i: usize) -> HalfEdgeId {
    line.terminals(graph, i)[0]
}

fn interior_kinds(graph: &PantsGraph, line: &Line, kinds: &HashMap<HalfEdgeId, Kind>) -> Vec<Option<Kind>> {
    (0..line.len())
        .map(|i| (i > 0 && i + 1 < line.len()).then(|| kinds[&single_terminal(graph, line, i)]))
        .collect()
}

/// Scans windows of four interior vertices with alternating kinds and swaps
/// the two middle terminals of each, windows taken greedily left to right.
fn fix_alternations(schedule: &mut MoveSchedule, line: &Line, kinds: &HashMap<HalfEdgeId, Kind>) -> Result<usize> {
    let graph = &schedule.end;
    let k = interior_kinds(graph, line, kinds);
    let mut moves = Vec::new();
    let mut p = 1;
    while p + 4 < line.len() {
        let alternating = (p..p + 3).all(|i| k[i] != k[i + 1]);
        if alternating {
            moves.push(Move {
                edge: line.links[p + 1],
                swap: [single_terminal(graph, line, p + 1), single_terminal(graph, line, p + 2)],
            });
            p += 4;
        } else {
            p += 1;
        }
    }
    let count = moves.len();
    schedule.push(moves)?;
    Ok(count)
}

/// Splits a greedy maximal set of disjoint adjacent same-kind interior pairs
/// off the line (or one pair at an end when there is none).
fn split_pairs(schedule: &mut MoveSchedule, line: &mut Line, kinds: &mut HashMap<HalfEdgeId, Kind>) -> Result<usize> {
    let graph = schedule.end.clone();
    let k = interior_kinds(&graph, line, kinds);
    // (position j, terminal x at j, terminal y at j + 1)
    let mut picks: Vec<(usize, HalfEdgeId, HalfEdgeId)> = Vec::new();
    let mut j = 1;
    while j + 2 < line.len() {
        if k[j] == k[j + 1] {
            picks.push((j, single_terminal(&graph, line, j), single_terminal(&graph, line, j + 1)));
            j += 2;
        } else {
            j += 1;
        }
    }
    if picks.is_empty() {
        if line.len() >= 3 {
            let y = single_terminal(&graph, line, 1);
            let x = *line
                .terminals(&graph, 0)
                .iter()
                .find(|h| kinds[*h] == kinds[&y])
                .expect("an unsorted end carries both kinds");
            picks.push((0, x, y));
        } else if line.len() == 2 {
            // exchange kinds so that both ends become collapsible
            let t0 = line.terminals(&graph, 0);
            let t1 = line.terminals(&graph, 1);
            let x = *t0.iter().find(|h| kinds[*h] == Kind::Loop).unwrap();
            let y = *t1.iter().find(|h| kinds[*h] == Kind::Plain).unwrap();
            schedule.push(vec![Move {
                edge: line.links[0],
                swap: [x, y],
            }])?;
            return Ok(1);
        }
    }
    let moves: Vec<Move> = picks
        .iter()
        .map(|&(j, x, _)| Move {
            edge: line.links[j],
            swap: [x, line.link_half(&graph, j + 1, j + 1)],
        })
        .collect();
    let count = moves.len();
    schedule.push(moves)?;
    let graph = &schedule.end;
    for &(j, x, y) in picks.iter().rev() {
        let kind = merged_kind(graph, kinds, x, y).expect("split pairs share a kind");
        let h = line.link_half(graph, j, j);
        kinds.insert(h, kind);
        line.verts.remove(j + 1);
        line.links.remove(j);
    }
    line.check(graph)?;
    Ok(count)
}

fn effective_genus(graph: &PantsGraph, tail: Option<&Tail>) -> usize {
    let Some(t) = tail else {
        return graph.cycle_rank();
    };
    let verts = graph.interior_vertices().filter(|&v| !t.side[v]).count();
    let edges = graph
        .interior_edges()
        .filter(|&e| e != t.edge && !t.side[graph.endpoints(e).0])
        .count();
    edges + 1 - verts + 1
}

/// Repeats genus reduction and loop sorting, growing a treelike tail, until
/// the graph is treelike.
pub fn to_treelike(graph: &PantsGraph) -> Result<(MoveSchedule, ReductionTrace)> {
    let mut schedule = MoveSchedule::empty(graph.clone());
    let mut trace = ReductionTrace::default();
    let mut tail: Option<Tail> = None;
    let guard = graph.genus() + 2;
    while !schedule.end.is_treelike() {
        if trace.effective_genus.len() > guard {
            return Err(Error::Invariant("treelike reduction does not terminate".into()));
        }
        let g_eff = effective_genus(&schedule.end, tail.as_ref());
        trace.effective_genus.push(g_eff);
        let current = &schedule.end;
        let allowed: Vec<bool> = (0..current.edge_count())
            .map(|e| match &tail {
                Some(t) => e != t.edge && !t.side[current.endpoints(e).0],
                None => true,
            })
            .collect();
        let cycles = greedy_disjoint_cycles(current, &allowed);
        if cycles.is_empty() {
            return Err(Error::Invariant("no cycle outside the tail".into()));
        }
        let mark = schedule.batches.len();
        genus_reduce_in(&mut schedule, &cycles)?;
        trace.record(Phase::GenusReduce, &schedule, mark, Some(g_eff));
        let mark = schedule.batches.len();
        let outcome = sort_loops_in(&mut schedule, tail.as_ref())?;
        trace.record(Phase::LoopSort, &schedule, mark, Some(g_eff));
        tail = outcome.tail;
    }
    Ok((schedule, trace))
}

/// Straightens the non-loop part of a treelike graph into a line; with both
/// loops and leaves present the terminals are then sorted so that leaves
/// come first.
fn line_form(graph: &PantsGraph) -> Result<(MoveSchedule, Line)> {
    let n = graph.vertex_count();
    let member: Vec<bool> = (0..n).map(|v| graph.is_interior(v) && graph.loops_at(v) == 0).collect();
    let tree_edge: Vec<bool> = (0..graph.edge_count())
        .map(|e| {
            let (a, b) = graph.endpoints(e);
            a != b && member[a] && member[b]
        })
        .collect();
    let view = TreeView { member, tree_edge };
    let mut schedule = MoveSchedule::empty(graph.clone());
    if view.member_count() == 0 {
        return Ok((schedule, Line { verts: Vec::new(), links: Vec::new() }));
    }
    let (line, _) = linearize(&mut schedule, &view)?;
    if graph.genus() > 0 && graph.punctures() > 0 {
        sort_terminal_kinds(&mut schedule, &line)?;
    }
    Ok((schedule, line))
}

fn is_loop_terminal(graph: &PantsGraph, h: HalfEdgeId) -> bool {
    graph.loops_at(graph.across(h)) > 0
}

/// Odd-even transposition: swap a loop terminal with a leaf terminal on the
/// next line vertex until leaves precede loops.
fn sort_terminal_kinds(schedule: &mut MoveSchedule, line: &Line) -> Result<()> {
    let guard = 2 * line.len() + 4;
    let mut quiet = 0;
    let mut round = 0;
    while quiet < 2 {
        if round > guard {
            return Err(Error::Invariant("terminal sorting does not terminate".into()));
        }
        let graph = &schedule.end;
        let mut moves = Vec::new();
        let mut j = round % 2;
        while j + 1 < line.len() {
            let x = line.terminals(graph, j).into_iter().find(|&h| is_loop_terminal(graph, h));
            let y = line
                .terminals(graph, j + 1)
                .into_iter()
                .find(|&h| !is_loop_terminal(graph, h));
            if let (Some(x), Some(y)) = (x, y) {
                moves.push(Move {
                    edge: line.links[j],
                    swap: [x, y],
                });
            }
            j += 2;
        }
        quiet = if moves.is_empty() { quiet + 1 } else { 0 };
        schedule.push(moves)?;
        round += 1;
    }
    Ok(())
}

/// Vertex and half-edge maps from `from` onto `to`, both in line form.
fn line_isomorphism(
    from: &PantsGraph,
    lf: &Line,
    to: &PantsGraph,
    lt: &Line,
) -> Result<(Vec<VertexId>, Vec<HalfEdgeId>)> {
    if lf.len() != lt.len() {
        return Err(Error::Invariant("line forms differ in length".into()));
    }
    let mut vmap = vec![usize::MAX; from.vertex_count()];
    let mut hmap = vec![usize::MAX; from.half_edge_count()];
    let map_half = |a: HalfEdgeId, b: HalfEdgeId, hmap: &mut Vec<usize>| {
        hmap[a] = b;
        hmap[from.partner(a)] = to.partner(b);
    };
    for i in 0..lf.len() {
        vmap[lf.verts[i]] = lt.verts[i];
        if i + 1 < lf.len() {
            map_half(lf.link_half(from, i, i), lt.link_half(to, i, i), &mut hmap);
        }
        let mut tf = lf.terminals(from, i);
        let mut tt = lt.terminals(to, i);
        tf.sort_by_key(|&h| is_loop_terminal(from, h));
        tt.sort_by_key(|&h| is_loop_terminal(to, h));
        for (&a, &b) in tf.iter().zip(&tt) {
            if is_loop_terminal(from, a) != is_loop_terminal(to, b) {
                return Err(Error::Invariant("line forms disagree on terminal kinds".into()));
            }
            map_half(a, b, &mut hmap);
            let (wa, wb) = (from.across(a), to.across(b));
            vmap[wa] = wb;
            if from.loops_at(wa) > 0 {
                let la: Vec<_> = from.incident(wa).iter().copied().filter(|&h| h != from.partner(a)).collect();
                let lb: Vec<_> = to.incident(wb).iter().copied().filter(|&h| h != to.partner(b)).collect();
                hmap[la[0]] = lb[0];
                hmap[la[1]] = lb[1];
            }
        }
    }
    if vmap.contains(&usize::MAX) || hmap.contains(&usize::MAX) {
        return Err(Error::Invariant("line isomorphism is incomplete".into()));
    }
    Ok((vmap, hmap))
}

/// A schedule from `a` to a graph isomorphic to `b`, through the common
/// line form.
pub fn treelike_to_treelike(a: &PantsGraph, b: &PantsGraph) -> Result<MoveSchedule> {
    if !a.is_treelike() || !b.is_treelike() {
        return Err(Error::NotTreelike);
    }
    if (a.genus(), a.punctures()) != (b.genus(), b.punctures()) {
        return Err(Error::Mismatch(format!(
            "({}, {}) versus ({}, {})",
            a.genus(),
            a.punctures(),
            b.genus(),
            b.punctures()
        )));
    }
    let (mut schedule, la) = line_form(a)?;
    let (sb, lb) = line_form(b)?;
    if !la.is_empty() {
        let (_, hmap) = line_isomorphism(&sb.end, &lb, &schedule.end, &la)?;
        for batch in sb.batches.iter().rev() {
            let moves = batch
                .moves
                .iter()
                .map(|mv| Move {
                    edge: schedule.end.edge_of(hmap[sb.end.edge(mv.edge)[0]]),
                    swap: [hmap[mv.swap[0]], hmap[mv.swap[1]]],
                })
                .collect();
            schedule.push(moves)?;
        }
    }
    if !is_isomorphic(&schedule.end, b) {
        return Err(Error::Invariant("treelike alignment missed the target".into()));
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::find_disjoint_cycles;
    use crate::graph::examples::*;
    use crate::random::{random_cubic, random_tree, random_treelike, rng};
    use crate::treeview::is_linear_tree;

    #[test]
    fn random_trees_reach_linear() {
        let mut r = rng(1);
        for n in [5, 9, 17, 64, 200] {
            let t = random_tree(n, &mut r);
            let (s, trace) = to_linear(&t).unwrap();
            s.verify().unwrap();
            assert!(is_linear_tree(&s.end));
            assert!((trace.total_cost() - s.total_cost()).abs() < 1e-9);
        }
    }

    #[test]
    fn four_cycle_shortens_in_two_stages() {
        // a square with a leaf on every corner
        let g = PantsGraph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
        .unwrap();
        let cycles = CycleSet { cycles: vec![vec![0, 1, 2, 3]] };
        let (s, log) = genus_reduce(&g, &cycles).unwrap();
        assert_eq!(log, vec![vec![4], vec![2]]);
        assert_eq!(s.batch_sizes(), vec![2, 1]);
        assert_eq!(s.end.loop_count(), 1);
    }

    #[test]
    fn loops_are_left_alone() {
        let (s, log) = genus_reduce(&dumbbell(), &find_disjoint_cycles(&dumbbell()).unwrap()).unwrap();
        assert!(log.is_empty());
        assert_eq!(s.total_cost(), 0.0);
    }

    #[test]
    fn theta_becomes_treelike() {
        let (s, _) = to_treelike(&theta()).unwrap();
        s.verify().unwrap();
        assert!(s.end.is_treelike());
        assert!(is_isomorphic(&s.end, &dumbbell()));
    }

    #[test]
    fn random_cubic_graphs_become_treelike() {
        let mut r = rng(5);
        for g in [3, 4, 8, 20, 50] {
            let c = random_cubic(g, &mut r);
            let (s, trace) = to_treelike(&c).unwrap();
            s.verify().unwrap();
            assert!(s.end.is_treelike(), "g = {g}");
            assert_eq!(trace.effective_genus[0], g);
        }
    }

    #[test]
    fn punctured_graphs_become_treelike() {
        let mut r = rng(9);
        for _ in 0..5 {
            let t = random_tree(12, &mut r);
            // close two leaves into a cycle
            let leaves: Vec<_> = (0..t.vertex_count()).filter(|&v| !t.is_interior(v)).collect();
            let g = crate::enumerate::join_leaves(&t, leaves[0], leaves[5]);
            let (s, _) = to_treelike(&g).unwrap();
            assert!(s.end.is_treelike());
        }
    }

    #[test]
    fn treelike_pairs_align() {
        let mut r = rng(11);
        for (g, n) in [(3, 0), (5, 0), (2, 3), (4, 4), (0, 9), (1, 1), (2, 0)] {
            let a = random_treelike(g, n, &mut r);
            let b = random_treelike(g, n, &mut r);
            let s = treelike_to_treelike(&a, &b).unwrap();
            s.verify().unwrap();
            assert!(is_isomorphic(&s.end, &b));
            assert_eq!(treelike_to_treelike(&a, &a).unwrap().end.genus(), g);
        }
    }

    #[test]
    fn sorted_loops_split_off() {
        let mut r = rng(13);
        for g in [6, 12, 30] {
            let c = random_cubic(g, &mut r);
            let cycles = find_disjoint_cycles(&c).unwrap();
            let (mut s, _) = genus_reduce(&c, &cycles).unwrap();
            let outcome = sort_loops_in(&mut s, None).unwrap();
            s.verify().unwrap();
            if !s.end.is_treelike() {
                assert!(outcome.tail.is_some(), "g = {g}");
            }
        }
    }
}
