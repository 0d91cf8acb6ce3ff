//! Kneser graphs `K(n,k)`: vertices are the k-subsets of a ground set of size
//! n (0-indexed internally, printed 1-indexed), adjacent when disjoint.

mod embedding;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use embedding::{attempt_embedding, EmbeddingAttempt, EmbeddingStatus, PatternScope};

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{odd_girth, shortest_odd_cycle, OddGirth};

pub const DEFAULT_VERTEX_CAP: usize = 10_000;

/// A subset of `{0, .., ground-1}` stored as a bit mask; `ground <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSubset {
    ground: u8,
    bits: u64,
}

impl KSubset {
    pub fn from_bits(ground: usize, bits: u64) -> Result<KSubset> {
        if ground > 64 || (ground < 64 && bits >> ground != 0) {
            return Err(Error::InvalidArgument(format!("subset {bits:#b} outside ground set of size {ground}")));
        }
        Ok(KSubset { ground: ground as u8, bits })
    }

    /// From 0-indexed elements.
    pub fn new(ground: usize, elements: &[usize]) -> Result<KSubset> {
        let mut bits = 0u64;
        for &e in elements {
            if e >= ground || e >= 64 {
                return Err(Error::InvalidArgument(format!("element {e} outside ground set of size {ground}")));
            }
            bits |= 1 << e;
        }
        KSubset::from_bits(ground, bits)
    }

    /// From 1-indexed elements, as printed.
    pub fn one_indexed(ground: usize, elements: &[usize]) -> Result<KSubset> {
        if elements.contains(&0) {
            return Err(Error::InvalidArgument("1-indexed element 0".into()));
        }
        KSubset::new(ground, &elements.iter().map(|e| e - 1).collect::<Vec<_>>())
    }

    /// Parses the printed form `{1,2,4}`.
    pub fn parse(ground: usize, text: &str) -> Result<KSubset> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidArgument(format!("subset {text:?} must be braced")))?;
        let elems = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad element {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        KSubset::one_indexed(ground, &elems)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ground(&self) -> usize {
        self.ground as usize
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_disjoint(&self, other: &KSubset) -> bool {
        self.bits & other.bits == 0
    }

    /// 0-indexed elements in increasing order.
    pub fn elements(&self) -> Vec<usize> {
        bits::iter(std::slice::from_ref(&self.bits)).collect()
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(|e| (e + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for KSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All `k`-subsets of `{0..n}` as masks, in lexicographic order of their
/// sorted element lists.
pub fn combinations(n: usize, k: usize) -> Vec<u64> {
    combinations_of(&(0..n).collect::<Vec<_>>(), k)
}

/// All `k`-subsets of `pool` (sorted elements), lexicographic.
pub fn combinations_of(pool: &[usize], k: usize) -> Vec<u64> {
    let n = pool.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | 1 << pool[i]));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KneserParams {
    pub n: usize,
    pub k: usize,
}

impl KneserParams {
    pub fn new(n: usize, k: usize) -> Result<KneserParams> {
        if k < 1 || 2 * k + 1 > n || n > 64 {
            return Err(Error::InvalidArgument(format!("K({n},{k}) needs 1 <= k, 2k+1 <= n <= 64")));
        }
        Ok(KneserParams { n, k })
    }

    /// The target `K(2k+1, k)` of the conjecture at level `k`.
    pub fn conjecture_target(k: usize) -> Result<KneserParams> {
        KneserParams::new(2 * k + 1, k)
    }
}

impl fmt::Display for KneserParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kneser:{},{}", self.n, self.k)
    }
}

/// A built Kneser graph with its label <-> subset table.
#[derive(Clone, Debug)]
pub struct Kneser {
    pub params: KneserParams,
    pub graph: Graph,
    subsets: Vec<KSubset>,
    index: HashMap<u64, usize>,
}

impl Kneser {
    pub fn subsets(&self) -> &[KSubset] {
        &self.subsets
    }

    pub fn subset(&self, label: usize) -> KSubset {
        self.subsets[label]
    }

    pub fn label(&self, s: &KSubset) -> Option<usize> {
        if s.ground() != self.params.n {
            return None;
        }
        self.index.get(&s.bits()).copied()
    }
}

/// Builds `K(n,k)` with vertices labeled in lexicographic subset order.
pub fn kneser_graph(p: KneserParams, cap: usize) -> Result<Kneser> {
    let count = binomial(p.n, p.k);
    if count > cap as u128 {
        return Err(Error::TooLarge { n: p.n, k: p.k, vertices: count, cap });
    }
    let masks = combinations(p.n, p.k);
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut graph = Graph::new(masks.len());
    for (i, &b) in masks.iter().enumerate() {
        let free: Vec<usize> = (0..p.n).filter(|e| b >> e & 1 == 0).collect();
        for c in combinations_of(&free, p.k) {
            let j = index[&c];
            if j > i {
                graph.add_edge(i, j)?;
            }
        }
    }
    let subsets = masks.iter().map(|&b| KSubset { ground: p.n as u8, bits: b }).collect();
    Ok(Kneser { params: p, graph, subsets, index })
}

/// A walk `a = c0, c1, .., c_len = b` of pairwise-consecutive disjoint
/// subsets, lexicographically first at every step, or `None` if no walk of
/// exactly that length exists.
pub fn find_walk(kn: &Kneser, a: &KSubset, b: &KSubset, length: usize) -> Option<Vec<KSubset>> {
    let (sa, sb) = (kn.label(a)?, kn.label(b)?);
    if length == 0 {
        return (sa == sb).then(|| vec![*a]);
    }
    let g = &kn.graph;
    // dist[2v + p]: shortest walk from b to v with parity p
    let mut dist = vec![usize::MAX; 2 * g.n()];
    let mut queue = VecDeque::from([2 * sb]);
    dist[2 * sb] = 0;
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x / 2) {
            let y = 2 * w + (x & 1 ^ 1);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let reachable = |v: usize, rem: usize| {
        let d = dist[2 * v + rem % 2];
        // padding by back-and-forth steps needs a neighbor, which every
        // vertex of K(n,k) with n >= 2k+1 has
        d <= rem && (d == rem || g.degree(v) > 0)
    };
    if !reachable(sa, length) {
        return None;
    }
    let mut walk = vec![sa];
    let mut cur = sa;
    for step in 1..=length {
        let rem = length - step;
        cur = *g.neighbors(cur).iter().find(|&&x| reachable(x, rem))?;
        walk.push(cur);
    }
    debug_assert_eq!(cur, sb);
    Some(walk.into_iter().map(|v| kn.subset(v)).collect())
}

/// Like [`find_walk`] on labels, but the internal vertex at position `i`
/// (1-based, `1 <= i < length`) must lie in `allowed[i - 1]`.
pub fn find_walk_within(kn: &Kneser, a: usize, b: usize, length: usize, allowed: &[Vec<u64>]) -> Option<Vec<usize>> {
    assert_eq!(allowed.len(), length.saturating_sub(1));
    let g = &kn.graph;
    let words = g.words();
    if length == 0 {
        return (a == b).then(|| vec![a]);
    }
    // back[i]: vertices allowed at position i that can still reach b
    let mut back: Vec<Vec<u64>> = vec![vec![0; words]; length + 1];
    bits::set(&mut back[length], b);
    for i in (1..length).rev() {
        let mut reach = vec![0u64; words];
        for x in bits::iter(&back[i + 1]) {
            for (r, w) in reach.iter_mut().zip(g.row(x)) {
                *r |= w;
            }
        }
        for ((r, &al), out) in reach.iter().zip(&allowed[i - 1]).zip(back[i].iter_mut()) {
            *out = r & al;
        }
        if bits::is_empty(&back[i]) {
            return None;
        }
    }
    let mut walk = vec![a];
    let mut cur = a;
    for layer in back.iter().skip(1) {
        cur = g.neighbors(cur).iter().copied().find(|&x| bits::get(layer, x))?;
        walk.push(cur);
    }
    Some(walk)
}

/// Lexicographically first `k`-subset disjoint from every color: the `k`
/// smallest uncovered ground elements, if at least `k` remain.
pub fn find_common_neighbor(p: &KneserParams, colors: &[KSubset]) -> Option<KSubset> {
    let used = colors.iter().fold(0u64, |acc, c| acc | c.bits());
    let free: Vec<usize> = (0..p.n).filter(|e| used >> e & 1 == 0).take(p.k).collect();
    if free.len() < p.k {
        return None;
    }
    KSubset::new(p.n, &free).ok()
}

/// Proof that no homomorphism exists: a homomorphism sends an odd cycle to a
/// closed odd walk of the same length, which contains an odd cycle at most
/// that long, so a source odd cycle shorter than the target's odd girth
/// cannot map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionCertificate {
    pub source_odd_girth: usize,
    pub target_odd_girth: OddGirth,
    pub witness_cycle: Vec<usize>,
}

impl ObstructionCertificate {
    /// Re-checks the witness cycle on `source` and the recorded target girth.
    pub fn recheck(&self, source: &Graph, target: &Graph) -> bool {
        let c = &self.witness_cycle;
        let len = c.len();
        let mut sorted = c.clone();
        sorted.sort_unstable();
        sorted.dedup();
        len % 2 == 1
            && len == self.source_odd_girth
            && sorted.len() == len
            && (0..len).all(|i| c[i] < source.n() && source.has_edge(c[i], c[(i + 1) % len]))
            && odd_girth(target) == self.target_odd_girth
            && OddGirth::Finite(len) < self.target_odd_girth
    }
}

pub fn refute_hom_by_odd_girth(source: &Graph, target: &Graph) -> Option<ObstructionCertificate> {
    refute_with_target_girth(source, odd_girth(target))
}

pub fn refute_with_target_girth(source: &Graph, target_girth: OddGirth) -> Option<ObstructionCertificate> {
    let cycle = shortest_odd_cycle(source)?;
    (OddGirth::Finite(cycle.len()) < target_girth).then_some(ObstructionCertificate {
        source_odd_girth: cycle.len(),
        target_odd_girth: target_girth,
        witness_cycle: cycle,
    })
}
