//! Brute-force oracles shared by the integration tests. None of them call
//! into the library algorithms they check.

#![allow(dead_code)]

use crlab::{Graph, OddGirth, Rational};
use rand::Rng;

/// Max over nonempty vertex subsets of `2 e(S) / |S|`.
pub fn brute_mad(g: &Graph) -> Rational {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best = Rational::zero();
    for mask in 1u32..(1 << n) {
        let e = edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
        let d = Rational::new(2 * e as i64, mask.count_ones() as i64);
        if d > best {
            best = d;
        }
    }
    best
}

/// Shortest odd cycle by enumerating every simple cycle.
pub fn brute_odd_girth(g: &Graph) -> OddGirth {
    fn dfs(g: &Graph, s: usize, path: &mut Vec<usize>, on: &mut [bool], best: &mut usize) {
        let cur = *path.last().unwrap();
        for &w in g.neighbors(cur) {
            if w == s && path.len() >= 3 && path.len() % 2 == 1 {
                *best = (*best).min(path.len());
            } else if w > s && !on[w] {
                on[w] = true;
                path.push(w);
                dfs(g, s, path, on, best);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut best = usize::MAX;
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        dfs(g, s, &mut vec![s], &mut on, &mut best);
        on[s] = false;
    }
    if best == usize::MAX {
        OddGirth::Infinite
    } else {
        OddGirth::Finite(best)
    }
}

pub fn is_bipartite(g: &Graph) -> bool {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Every labeled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

/// `k`-subsets of `0..n` as sorted vectors, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..n {
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Checks a Kneser coloring from the subset definition: labels index the
/// lexicographic list of `k`-subsets, adjacent vertices get disjoint sets.
pub fn is_kneser_coloring(g: &Graph, n: usize, k: usize, map: &[usize]) -> bool {
    let sets = subsets(n, k);
    map.len() == g.n()
        && map.iter().all(|&c| c < sets.len())
        && g.edges().all(|(u, v)| disjoint(&sets[map[u]], &sets[map[v]]))
}

/// Whether any vertex map `g -> t` preserves adjacency, by plain enumeration.
pub fn brute_hom_exists(g: &Graph, t: &Graph) -> bool {
    fn rec(g: &Graph, t: &Graph, map: &mut Vec<usize>) -> bool {
        let v = map.len();
        if v == g.n() {
            return true;
        }
        for c in 0..t.n() {
            if g.neighbors(v).iter().filter(|&&w| w < v).all(|&w| t.has_edge(map[w], c)) {
                map.push(c);
                if rec(g, t, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    rec(g, t, &mut Vec::new())
}
