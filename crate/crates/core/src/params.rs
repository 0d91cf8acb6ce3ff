//! Exact premise parameters (maximum average degree, odd girth) and the
//! structural probes behind the four-way classification.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::Graph;
use crate::rational::Rational;

/// Maximum over nonempty subgraphs of `2|E(H)|/|V(H)|`, exactly.
///
/// The densest subgraph density `|E(H)|/|V(H)|` is one of the finitely many
/// fractions `e/v` with `v <= n`, `e <= min(m, v(v-1)/2)`; a binary search over
/// that sorted set asks a parametric min-cut whether some subgraph is strictly
/// denser than the probe.
pub fn mad(g: &Graph) -> Result<Rational> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = g.m();
    if m == 0 {
        return Ok(Rational::zero());
    }
    let floor = (m as i64, n as i64);
    let mut cands: Vec<(i64, i64)> = Vec::new();
    for v in 1..=n as i64 {
        let emax = (m as i64).min(v * (v - 1) / 2);
        for e in 0..=emax {
            if e * floor.1 >= floor.0 * v {
                cands.push((e, v));
            }
        }
    }
    cands.sort_by(|a, b| cmp_frac(*a, *b));
    cands.dedup_by(|a, b| cmp_frac(*a, *b) == Ordering::Equal);
    // denser_than is true below the optimum and false from it on.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if denser_than(g, cands[mid].0, cands[mid].1) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let (e, v) = cands[lo];
    Ok(Rational::new(2 * e, v))
}

fn cmp_frac(a: (i64, i64), b: (i64, i64)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

/// Is there a vertex set `S` with `|E(S)| / |S| > a / b`?
///
/// Goldberg's network: the cut with source side `{s} ∪ S` costs
/// `b·m·n + 2(a|S| - b|E(S)|)`, so the answer is yes iff the min cut is
/// below `b·m·n`.
fn denser_than(g: &Graph, a: i64, b: i64) -> bool {
    let n = g.n();
    let m = g.m() as i64;
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for v in 0..n {
        net.add_edge(s, v, b * m);
        net.add_edge(v, t, b * m + 2 * a - b * g.degree(v) as i64);
    }
    for (u, v) in g.edges() {
        net.add_undirected(u, v, b);
    }
    net.max_flow(s, t) < b * m * n as i64
}

/// Length of a shortest odd cycle, or infinite for bipartite graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddGirth {
    Finite(usize),
    Infinite,
}

impl OddGirth {
    pub fn is_at_least(&self, bound: usize) -> bool {
        match self {
            OddGirth::Finite(g) => *g >= bound,
            OddGirth::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            OddGirth::Finite(g) => Some(*g),
            OddGirth::Infinite => None,
        }
    }
}

impl fmt::Display for OddGirth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddGirth::Finite(g) => write!(f, "{g}"),
            OddGirth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for OddGirth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OddGirth::Finite(g) => s.serialize_u64(*g as u64),
            OddGirth::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for OddGirth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<OddGirth, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|g| OddGirth::Finite(g as usize))
                .ok_or_else(|| serde::de::Error::custom("odd girth must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(OddGirth::Infinite),
            other => Err(serde::de::Error::custom(format!("bad odd girth {other}"))),
        }
    }
}

pub fn odd_girth(g: &Graph) -> OddGirth {
    match shortest_odd_cycle(g) {
        Some(c) => OddGirth::Finite(c.len()),
        None => OddGirth::Infinite,
    }
}

/// A shortest odd cycle as a vertex sequence, via BFS in the bipartite double
/// cover: the shortest `(v,0) -> (v,1)` path over all `v` is a closed odd walk
/// of globally minimum length, hence a simple cycle.
pub fn shortest_odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut dist = vec![usize::MAX; 2 * n];
    let mut parent = vec![usize::MAX; 2 * n];
    let mut best: Option<(usize, usize)> = None; // (length, start)
    let mut queue = VecDeque::new();
    for v in 0..n {
        let cutoff = best.map_or(usize::MAX, |b| b.0);
        if let Some(d) = double_cover_bfs(g, v, cutoff, &mut dist, &mut parent, &mut queue) {
            if d < cutoff {
                best = Some((d, v));
            }
        }
    }
    let (_, v) = best?;
    double_cover_bfs(g, v, usize::MAX, &mut dist, &mut parent, &mut queue);
    let mut cycle = Vec::new();
    let mut node = 2 * v + 1;
    while node != 2 * v {
        cycle.push(node / 2);
        node = parent[node];
    }
    cycle.reverse();
    cycle.rotate_right(1);
    Some(cycle)
}

/// Distance from `(s,0)` to `(s,1)`, abandoning once the frontier reaches
/// `cutoff`. Node `2u + p` is `(u, p)`.
fn double_cover_bfs(
    g: &Graph,
    s: usize,
    cutoff: usize,
    dist: &mut [usize],
    parent: &mut [usize],
    queue: &mut VecDeque<usize>,
) -> Option<usize> {
    dist.iter_mut().for_each(|d| *d = usize::MAX);
    queue.clear();
    dist[2 * s] = 0;
    queue.push_back(2 * s);
    while let Some(x) = queue.pop_front() {
        let d = dist[x];
        if d + 1 >= cutoff {
            return None;
        }
        let p = x & 1;
        for &w in g.neighbors(x / 2) {
            let y = 2 * w + (p ^ 1);
            if dist[y] == usize::MAX {
                dist[y] = d + 1;
                parent[y] = x;
                if y == 2 * s + 1 {
                    return Some(d + 1);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

struct PathSearch<'a> {
    g: &'a Graph,
    stop_at: usize,
    path: Vec<usize>,
    best: Vec<usize>,
}

impl PathSearch<'_> {
    fn best_len(&self) -> usize {
        self.best.len().saturating_sub(1)
    }

    fn done(&self) -> bool {
        !self.best.is_empty() && self.best_len() >= self.stop_at
    }

    /// `blocked`: path vertices plus closed neighborhoods of every path vertex
    /// except the last; a vertex outside it adjacent to the last one extends
    /// the path and keeps it induced.
    fn extend(&mut self, blocked: &[u64]) {
        if self.path.len() > self.best.len() {
            self.best = self.path.clone();
        }
        if self.done() {
            return;
        }
        let n = self.g.n();
        let free = n - bits::count(blocked);
        if self.path.len() - 1 + free <= self.best_len() {
            return;
        }
        let last = *self.path.last().unwrap();
        let mut next_blocked = blocked.to_vec();
        for (w, r) in next_blocked.iter_mut().zip(self.g.row(last)) {
            *w |= r;
        }
        for &w in self.g.neighbors(last) {
            if bits::get(blocked, w) {
                continue;
            }
            self.path.push(w);
            self.extend(&next_blocked);
            self.path.pop();
            if self.done() {
                return;
            }
        }
    }
}

fn induced_path_search(g: &Graph, stop_at: usize) -> Vec<usize> {
    let mut search = PathSearch { g, stop_at, path: Vec::new(), best: Vec::new() };
    for s in 0..g.n() {
        let mut blocked = vec![0u64; g.words()];
        bits::set(&mut blocked, s);
        search.path.push(s);
        search.extend(&blocked);
        search.path.pop();
        if search.done() {
            break;
        }
    }
    search.best
}

/// `min(bound + 1, longest induced path length in edges)`.
pub fn longest_induced_path_upto(g: &Graph, bound: usize) -> usize {
    let best = induced_path_search(g, bound + 1);
    best.len().saturating_sub(1).min(bound + 1)
}

/// An induced path with exactly `bound + 1` edges, if any induced path is
/// longer than `bound`.
pub fn induced_path_longer_than(g: &Graph, bound: usize) -> Option<Vec<usize>> {
    let best = induced_path_search(g, bound + 1);
    (best.len() >= bound + 2).then_some(best)
}

/// A longest induced path (vertex sequence; empty for the empty graph).
pub fn longest_induced_path(g: &Graph) -> Vec<usize> {
    induced_path_search(g, usize::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLabel {
    A,
    B,
    C,
    D,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphClass {
    pub label: ClassLabel,
    pub max_degree: usize,
    pub long_thread_witness: Option<Vec<usize>>,
}

/// Degree split at 4, thread split at induced paths longer than `l`.
pub fn classify(g: &Graph, l: usize) -> GraphClass {
    let max_degree = g.max_degree();
    let witness = induced_path_longer_than(g, l);
    let label = match (max_degree >= 4, witness.is_some()) {
        (false, false) => ClassLabel::A,
        (true, false) => ClassLabel::B,
        (false, true) => ClassLabel::C,
        (true, true) => ClassLabel::D,
    };
    GraphClass { label, max_degree, long_thread_witness: witness }
}

pub fn is_induced_path(g: &Graph, path: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            if g.has_edge(path[i], path[j]) != (j == i + 1) {
                return false;
            }
        }
    }
    true
}
