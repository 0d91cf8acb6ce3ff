use std::fmt;

use crate::bits;
use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept twice: as a flat bit matrix (one row of `words` u64 per
/// vertex) for constant-time queries and set algebra, and as sorted neighbor
/// lists for iteration. Equality is labeled equality.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        let words = bits::words_for(n);
        Graph { n, words, rows: vec![0; n * words], adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Adds `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v || u >= self.n || v >= self.n {
            return Err(Error::InvalidEdge(u, v));
        }
        if self.has_edge(u, v) {
            return Ok(false);
        }
        bits::set(&mut self.rows[u * self.words..(u + 1) * self.words], v);
        bits::set(&mut self.rows[v * self.words..(v + 1) * self.words], u);
        insert_sorted(&mut self.adj[u], v);
        insert_sorted(&mut self.adj[v], u);
        self.m += 1;
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || !self.has_edge(u, v) {
            return false;
        }
        bits::clear(&mut self.rows[u * self.words..(u + 1) * self.words], v);
        bits::clear(&mut self.rows[v * self.words..(v + 1) * self.words], u);
        if let Ok(i) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(i);
        }
        if let Ok(i) = self.adj[v].binary_search(&u) {
            self.adj[v].remove(i);
        }
        self.m -= 1;
        true
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::get(self.row(u), v)
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced on `vertices`, relabeled by position in the slice.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut h = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = pos[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j).expect("induced edge in range");
                }
            }
        }
        h
    }

    /// Deletes the listed vertices. Returns the smaller graph and, for each of
    /// its vertices, the label it had here.
    pub fn remove_vertices(&self, removed: &[usize]) -> (Graph, Vec<usize>) {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        (self.induced(&kept), kept)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Path on `n` vertices `0 - 1 - ... - n-1`.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    /// Cycle on `n >= 3` vertices in label order.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0).unwrap();
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g
    }
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    if let Err(i) = list.binary_search(&v) {
        list.insert(i, v);
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(Error::InvalidEdge(1, 1)));
        assert_eq!(g.add_edge(0, 3), Err(Error::InvalidEdge(0, 3)));
        assert_eq!(g.add_edge(0, 2), Ok(true));
        assert_eq!(g.add_edge(2, 0), Ok(false));
        assert_eq!(g.m(), 1);
        assert!(g.has_edge(2, 0) && g.has_edge(0, 2));
    }

    #[test]
    fn remove_vertices_relabels() {
        let g = Graph::cycle(5);
        let (h, kept) = g.remove_vertices(&[2]);
        assert_eq!(kept, vec![0, 1, 3, 4]);
        assert_eq!(h, Graph::from_edges(4, &[(0, 1), (2, 3), (0, 3)]).unwrap());
        assert!(g.clone().remove_edge(0, 1));
    }

    #[test]
    fn components_sorted() {
        let g = Graph::from_edges(6, &[(4, 5), (0, 2)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 2], vec![1], vec![3], vec![4, 5]]);
    }

    #[test]
    fn wide_graph_uses_general_path() {
        let g = Graph::cycle(130);
        assert_eq!(g.words(), 3);
        assert!(g.has_edge(129, 0));
        assert_eq!(g.edges().count(), 130);
    }
}
