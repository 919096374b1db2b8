//! Independent brute-force enumeration of pants graphs: leaf counts per
//! interior vertex in non-increasing order, every symmetric multigraph
//! matrix matching the remaining valences, deduplicated by the smallest
//! upper-triangle string over leaf-preserving vertex permutations.

#![allow(dead_code)]

use std::collections::BTreeMap;

use pantslab::PantsGraph;

type Matrix = Vec<Vec<u8>>;

fn leaf_vectors(v: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(v: usize, left: usize, cap: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == v {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for l in (0..=cap.min(left as u8)).rev() {
            cur.push(l);
            go(v, left - l as usize, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(v, n, 3, &mut Vec::new(), &mut out);
    out
}

fn matrices(deg: &[u8]) -> Vec<Matrix> {
    let v = deg.len();
    let mut out = Vec::new();
    let mut m = vec![vec![0u8; v]; v];
    let mut rem: Vec<i32> = deg.iter().map(|&d| d as i32).collect();
    fn fill(i: usize, j: usize, m: &mut Matrix, rem: &mut Vec<i32>, out: &mut Vec<Matrix>) {
        let v = m.len();
        if i == v {
            out.push(m.clone());
            return;
        }
        if j == v {
            if rem[i] == 0 {
                fill(i + 1, i + 1, m, rem, out);
            }
            return;
        }
        if i == j {
            for loops in 0..=rem[i] / 2 {
                m[i][i] = loops as u8;
                rem[i] -= 2 * loops;
                fill(i, j + 1, m, rem, out);
                rem[i] += 2 * loops;
            }
            m[i][i] = 0;
        } else {
            for k in 0..=rem[i].min(rem[j]) {
                m[i][j] = k as u8;
                m[j][i] = k as u8;
                rem[i] -= k;
                rem[j] -= k;
                fill(i, j + 1, m, rem, out);
                rem[i] += k;
                rem[j] += k;
            }
            m[i][j] = 0;
            m[j][i] = 0;
        }
    }
    fill(0, 0, &mut m, &mut rem, &mut out);
    out
}

fn connected(m: &Matrix) -> bool {
    let v = m.len();
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for w in 0..v {
            if m[u][w] > 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn block_perms(leaves: &[u8]) -> Vec<Vec<usize>> {
    let v = leaves.len();
    let mut perms = vec![Vec::new()];
    let mut start = 0;
    while start < v {
        let mut end = start;
        while end < v && leaves[end] == leaves[start] {
            end += 1;
        }
        let block: Vec<usize> = (start..end).collect();
        let mut block_orders = Vec::new();
        permute(&block, &mut Vec::new(), &mut vec![false; block.len()], &mut block_orders);
        perms = perms
            .into_iter()
            .flat_map(|p| {
                block_orders.iter().map(move |b| {
                    let mut q = p.clone();
                    q.extend_from_slice(b);
                    q
                })
            })
            .collect();
        start = end;
    }
    perms
}

fn permute(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permute(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

fn form(m: &Matrix, p: &[usize]) -> Vec<u8> {
    let v = m.len();
    let mut s = Vec::with_capacity(v * (v + 1) / 2);
    for i in 0..v {
        for j in i..v {
            s.push(m[p[i]][p[j]]);
        }
    }
    s
}

fn to_graph(leaves: &[u8], m: &Matrix) -> PantsGraph {
    let v = m.len();
    let mut edges = Vec::new();
    for i in 0..v {
        for _ in 0..m[i][i] {
            edges.push((i, i));
        }
        for j in i + 1..v {
            for _ in 0..m[i][j] {
                edges.push((i, j));
            }
        }
    }
    let mut next = v;
    for (i, &l) in leaves.iter().enumerate() {
        for _ in 0..l {
            edges.push((i, next));
            next += 1;
        }
    }
    PantsGraph::from_edges(next, &edges).expect("brute-force graphs are valid")
}

/// One representative per isomorphism class of `(g, n)`, keyed by the
/// brute-force canonical form.
pub fn brute_force_classes(g: usize, n: usize) -> BTreeMap<(Vec<u8>, Vec<u8>), PantsGraph> {
    let v = 2 * g + n - 2;
    let mut out = BTreeMap::new();
    for leaves in leaf_vectors(v, n) {
        if v > 1 && leaves.contains(&3) {
            continue;
        }
        let deg: Vec<u8> = leaves.iter().map(|l| 3 - l).collect();
        let perms = block_perms(&leaves);
        for m in matrices(&deg) {
            if !connected(&m) {
                continue;
            }
            let key = perms.iter().map(|p| form(&m, p)).min().unwrap();
            out.entry((leaves.clone(), key)).or_insert_with(|| to_graph(&leaves, &m));
        }
    }
    out
}

/// Girth by removing each interior edge and searching for another path
/// between its ends.
pub fn brute_force_girth(graph: &PantsGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for e in graph.interior_edges() {
        let (a, b) = graph.endpoints(e);
        let len = if a == b {
            Some(1)
        } else {
            let mut dist = vec![usize::MAX; graph.vertex_count()];
            dist[a] = 0;
            let mut queue = std::collections::VecDeque::from([a]);
            while let Some(u) = queue.pop_front() {
                for &h in graph.incident(u) {
                    let f = graph.edge_of(h);
                    if f == e || !graph.is_interior_edge(f) {
                        continue;
                    }
                    let w = graph.across(h);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            (dist[b] != usize::MAX).then(|| dist[b] + 1)
        };
        if let Some(l) = len {
            best = Some(best.map_or(l, |x| x.min(l)));
        }
    }
    best
}
