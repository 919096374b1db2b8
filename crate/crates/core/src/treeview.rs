//! Trees embedded in pants graphs, trimming into Y-branch levels, and
//! melting into a line.
//!
//! A [`TreeView`] picks a set of interior member vertices and a spanning tree
//! on them. Every member half-edge off the tree is a terminal: it leads to a
//! leaf, a loop vertex, or some other part of the graph that moves rigidly
//! with it. Moves on tree edges keep the view a spanning tree, so one view
//! stays valid through a whole schedule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, HalfEdgeId, PantsGraph, VertexId};
use crate::moves::{Move, MoveSchedule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeView {
    pub member: Vec<bool>,
    pub tree_edge: Vec<bool>,
}

impl TreeView {
    /// The whole interior of a genus-0 graph.
    pub fn whole_tree(graph: &PantsGraph) -> Result<Self> {
        if graph.genus() != 0 {
            return Err(Error::NotTree);
        }
        let member = (0..graph.vertex_count()).map(|v| graph.is_interior(v)).collect();
        let tree_edge = (0..graph.edge_count()).map(|e| graph.is_interior_edge(e)).collect();
        Ok(TreeView { member, tree_edge })
    }

    /// Checks that tree edges join members and span them without cycles.
    pub fn check(&self, graph: &PantsGraph) -> Result<()> {
        let members: Vec<VertexId> = self.members().collect();
        let mut count = 0;
        let mut parent: Vec<usize> = (0..graph.vertex_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in (0..graph.edge_count()).filter(|&e| self.tree_edge[e]) {
            let (a, b) = graph.endpoints(e);
            if a == b || !self.member[a] || !self.member[b] {
                return Err(Error::Invariant(format!("tree edge {e} leaves the member set")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::Invariant(format!("tree edge {e} closes a cycle")));
            }
            parent[ra] = rb;
            count += 1;
        }
        if !members.is_empty() && count + 1 != members.len() {
            return Err(Error::Invariant("tree edges do not span the members".into()));
        }
        Ok(())
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.member.iter().enumerate().filter(|(_, &m)| m).map(|(v, _)| v)
    }

    pub fn member_count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    /// Half-edges at `v` on tree edges.
    pub fn tree_halves(&self, graph: &PantsGraph, v: VertexId) -> Vec<HalfEdgeId> {
        graph
            .incident(v)
            .iter()
            .copied()
            .filter(|&h| self.tree_edge[graph.edge_of(h)])
            .collect()
    }

    /// Half-edges at `v` off the tree.
    pub fn terminals(&self, graph: &PantsGraph, v: VertexId) -> Vec<HalfEdgeId> {
        graph
            .incident(v)
            .iter()
            .copied()
            .filter(|&h| !self.tree_edge[graph.edge_of(h)])
            .collect()
    }

    pub fn is_path(&self, graph: &PantsGraph) -> bool {
        self.members().all(|v| self.tree_halves(graph, v).len() <= 2)
    }

    /// The member path from its smaller-id end, if the tree is a path.
    pub fn path_order(&self, graph: &PantsGraph) -> Option<Line> {
        let start = self.members().find(|&v| self.tree_halves(graph, v).len() <= 1)?;
        let mut verts = vec![start];
        let mut links = Vec::new();
        let mut came: Option<EdgeId> = None;
        let mut at = start;
        loop {
            let halves = self.tree_halves(graph, at);
            if halves.len() > 2 {
                return None;
            }
            let Some(&h) = halves.iter().find(|&&h| Some(graph.edge_of(h)) != came) else {
                break;
            };
            let e = graph.edge_of(h);
            links.push(e);
            came = Some(e);
            at = graph.across(h);
            verts.push(at);
        }
        (verts.len() == self.member_count()).then_some(Line { verts, links })
    }
}

/// A path of members; `links[i]` joins `verts[i]` and `verts[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub verts: Vec<VertexId>,
    pub links: Vec<EdgeId>,
}

impl Line {
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Half-edges at `verts[i]` not on the neighbouring links.
    pub fn terminals(&self, graph: &PantsGraph, i: usize) -> Vec<HalfEdgeId> {
        let mut skip = Vec::with_capacity(2);
        if i > 0 {
            skip.push(self.links[i - 1]);
        }
        if i + 1 < self.verts.len() {
            skip.push(self.links[i]);
        }
        graph
            .incident(self.verts[i])
            .iter()
            .copied()
            .filter(|&h| !skip.contains(&graph.edge_of(h)))
            .collect()
    }

    /// Half-edge of `links[i]` sitting at `verts[at]`.
    pub fn link_half(&self, graph: &PantsGraph, i: usize, at: usize) -> HalfEdgeId {
        let [a, b] = graph.edge(self.links[i]);
        if graph.owner(a) == self.verts[at] {
            a
        } else {
            b
        }
    }

    /// Checks the line against the current graph.
    pub fn check(&self, graph: &PantsGraph) -> Result<()> {
        for (i, &e) in self.links.iter().enumerate() {
            let (a, b) = graph.endpoints(e);
            let (x, y) = (self.verts[i], self.verts[i + 1]);
            if !((a == x && b == y) || (a == y && b == x)) {
                return Err(Error::Invariant(format!("line link {i} is broken")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrimStage {
    pub active: usize,
    /// Leaves of the active tree, `m_i`.
    pub leaves: usize,
    pub pairs: usize,
    pub isolated_after: usize,
    /// `floor(m_i / 2) - 1`.
    pub isolated_bound: i64,
    pub y_centers: usize,
    pub leaves_next: usize,
}

impl TrimStage {
    pub fn isolated_ok(&self) -> bool {
        (self.isolated_after as i64) <= self.isolated_bound
    }

    /// `m_{i+1} <= 3/4 m_i`.
    pub fn shrink_ok(&self) -> bool {
        4 * self.leaves_next <= 3 * self.leaves
    }
}

#[derive(Clone, Debug)]
pub struct TrimState {
    /// The trimmed tree `S`.
    pub tree: PantsGraph,
    pub view: TreeView,
    /// `V_0, V_1, ...` in trimming order.
    pub levels: Vec<Vec<VertexId>>,
    pub root: Option<VertexId>,
    pub stages: Vec<TrimStage>,
}

impl TrimState {
    pub fn isolated_violations(&self) -> usize {
        self.stages.iter().filter(|s| !s.isolated_ok()).count()
    }

    pub fn shrink_violations(&self) -> usize {
        self.stages.iter().filter(|s| !s.shrink_ok()).count()
    }
}

fn active_degree(graph: &PantsGraph, view: &TreeView, active: &[bool], v: VertexId) -> usize {
    view.tree_halves(graph, v)
        .into_iter()
        .filter(|&h| active[graph.across(h)])
        .count()
}

/// Pairs adjacent isolated bases into Y-branches, then strips Y-branch
/// centres level by level until one or two active vertices remain.
pub fn trim_view(schedule: &mut MoveSchedule, view: &TreeView) -> Result<TrimState> {
    view.check(&schedule.end)?;
    let mut active = view.member.clone();
    let mut levels = Vec::new();
    let mut stages = Vec::new();
    let root;
    loop {
        let graph = &schedule.end;
        let act: Vec<VertexId> = (0..active.len()).filter(|&v| active[v]).collect();
        if act.len() <= 2 {
            if act.len() == 2 {
                levels.push(vec![act[0]]);
                root = Some(act[1]);
            } else {
                root = act.first().copied();
            }
            break;
        }
        let deg: Vec<usize> = (0..active.len())
            .map(|v| if active[v] { active_degree(graph, view, &active, v) } else { 0 })
            .collect();
        let leaves = act.len() + 2;
        let isolated: Vec<VertexId> = act.iter().copied().filter(|&v| deg[v] == 2).collect();
        let is_iso = |v: VertexId| active[v] && deg[v] == 2;
        let iso_neighbours = |v: VertexId| -> Vec<(HalfEdgeId, VertexId)> {
            view.tree_halves(graph, v)
                .into_iter()
                .map(|h| (h, graph.across(h)))
                .filter(|&(_, w)| is_iso(w))
                .collect()
        };
        // the isolated bases induce disjoint paths; match greedily from an end
        let mut seen = vec![false; active.len()];
        let mut moves = Vec::new();
        for &start in &isolated {
            if seen[start] || iso_neighbours(start).len() > 1 {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let mut at = start;
            while let Some(&(_, w)) = iso_neighbours(at).iter().find(|(_, w)| !seen[*w]) {
                seen[w] = true;
                path.push(w);
                at = w;
            }
            for pair in path.chunks_exact(2) {
                let (a, b) = (pair[0], pair[1]);
                let e_ab = view
                    .tree_halves(graph, a)
                    .into_iter()
                    .find(|&h| graph.across(h) == b)
                    .map(|h| graph.edge_of(h))
                    .expect("path neighbours share a tree edge");
                let t_a = graph
                    .incident(a)
                    .iter()
                    .copied()
                    .find(|&h| !view.tree_edge[graph.edge_of(h)] || !active[graph.across(h)])
                    .expect("isolated base has a terminal");
                let y_b = view
                    .tree_halves(graph, b)
                    .into_iter()
                    .find(|&h| graph.edge_of(h) != e_ab && active[graph.across(h)])
                    .expect("isolated base has a second active neighbour");
                moves.push(Move {
                    edge: e_ab,
                    swap: [t_a, y_b],
                });
            }
        }
        let pairs = moves.len();
        schedule.push(moves)?;
        let graph = &schedule.end;
        let deg: Vec<usize> = (0..active.len())
            .map(|v| if active[v] { active_degree(graph, view, &active, v) } else { 0 })
            .collect();
        let isolated_after = act.iter().filter(|&&v| deg[v] == 2).count();
        let ys: Vec<VertexId> = act.iter().copied().filter(|&v| deg[v] == 1).collect();
        if ys.is_empty() {
            return Err(Error::Invariant("trim stage without Y-branches".into()));
        }
        for &v in &ys {
            active[v] = false;
        }
        stages.push(TrimStage {
            active: act.len(),
            leaves,
            pairs,
            isolated_after,
            isolated_bound: (leaves / 2) as i64 - 1,
            y_centers: ys.len(),
            leaves_next: act.len() - ys.len() + 2,
        });
        levels.push(ys);
    }
    Ok(TrimState {
        tree: schedule.end.clone(),
        view: view.clone(),
        levels,
        root,
        stages,
    })
}

/// Inserts the trimmed levels into a line growing from the root, last level
/// first. A parent at a free end takes its child for free; otherwise one
/// move on the child's edge splices it in next to the parent.
pub fn melt_view(schedule: &mut MoveSchedule, state: &TrimState) -> Result<Line> {
    let view = &state.view;
    let Some(root) = state.root else {
        return Ok(Line {
            verts: Vec::new(),
            links: Vec::new(),
        });
    };
    if schedule.end != state.tree {
        return Err(Error::Invariant("melt must start from the trimmed tree".into()));
    }
    let n = schedule.end.vertex_count();
    let mut in_line = vec![false; n];
    let mut next: Vec<Option<VertexId>> = vec![None; n];
    let mut prev: Vec<Option<VertexId>> = vec![None; n];
    // half-edge toward prev / next
    let mut lh: Vec<Option<HalfEdgeId>> = vec![None; n];
    let mut rh: Vec<Option<HalfEdgeId>> = vec![None; n];
    in_line[root] = true;
    for level in state.levels.iter().rev() {
        let graph = &schedule.end;
        let mut moves = Vec::new();
        let mut splices = Vec::new();
        let mut used = Vec::new();
        for &v in level {
            let mut up = view
                .tree_halves(graph, v)
                .into_iter()
                .filter(|&h| in_line[graph.across(h)]);
            let (Some(h_v), None) = (up.next(), up.next()) else {
                return Err(Error::Invariant(format!(
                    "vertex {v} does not hang from the line by exactly one edge"
                )));
            };
            let p = graph.across(h_v);
            let h_p = graph.partner(h_v);
            if rh[p].is_none() {
                next[p] = Some(v);
                prev[v] = Some(p);
                rh[p] = Some(h_p);
                lh[v] = Some(h_v);
            } else if lh[p].is_none() {
                prev[p] = Some(v);
                next[v] = Some(p);
                lh[p] = Some(h_p);
                rh[v] = Some(h_v);
            } else {
                if used.contains(&p) {
                    return Err(Error::Invariant(format!("vertex {p} needs two splices")));
                }
                used.push(p);
                let h_pr = rh[p].unwrap();
                let c1 = graph
                    .incident(v)
                    .iter()
                    .copied()
                    .find(|&h| h != h_v)
                    .unwrap();
                moves.push(Move {
                    edge: graph.edge_of(h_v),
                    swap: [h_pr, c1],
                });
                splices.push((v, h_v, p, h_p, h_pr));
            }
            in_line[v] = true;
        }
        schedule.push(moves)?;
        for (v, h_v, p, h_p, h_pr) in splices {
            let r = next[p].unwrap();
            rh[p] = Some(h_p);
            lh[v] = Some(h_v);
            rh[v] = Some(h_pr);
            next[p] = Some(v);
            prev[v] = Some(p);
            next[v] = Some(r);
            prev[r] = Some(v);
        }
    }
    let mut left = root;
    while let Some(p) = prev[left] {
        left = p;
    }
    let mut verts = vec![left];
    let mut links = Vec::new();
    let mut at = left;
    while let Some(w) = next[at] {
        links.push(schedule.end.edge_of(rh[at].unwrap()));
        verts.push(w);
        at = w;
    }
    let line = Line { verts, links };
    line.check(&schedule.end)?;
    if line.len() != view.member_count() {
        return Err(Error::Invariant("melt left members off the line".into()));
    }
    Ok(line)
}

/// Straightens the view's tree into a line, skipping work when it already
/// is one.
pub fn linearize(schedule: &mut MoveSchedule, view: &TreeView) -> Result<(Line, Option<TrimState>)> {
    if let Some(line) = view.path_order(&schedule.end) {
        return Ok((line, None));
    }
    let state = trim_view(schedule, view)?;
    let line = melt_view(schedule, &state)?;
    Ok((line, Some(state)))
}

/// Trimming of a genus-0 graph: the trimmed tree, the levels and the moves.
pub fn trim(tree: &PantsGraph) -> Result<(PantsGraph, TrimState, MoveSchedule)> {
    let view = TreeView::whole_tree(tree)?;
    let mut schedule = MoveSchedule::empty(tree.clone());
    let state = trim_view(&mut schedule, &view)?;
    Ok((state.tree.clone(), state, schedule))
}

/// Melting of a trimmed tree to the linear tree.
pub fn melt(state: &TrimState) -> Result<MoveSchedule> {
    let mut schedule = MoveSchedule::empty(state.tree.clone());
    melt_view(&mut schedule, state)?;
    Ok(schedule)
}

/// Every interior vertex of a tree lies on one path.
pub fn is_linear_tree(graph: &PantsGraph) -> bool {
    TreeView::whole_tree(graph).is_ok_and(|v| v.is_path(graph))
}
