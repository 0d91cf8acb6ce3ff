//! Seeded random graphs under a mad ceiling and an odd-girth floor.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{mad, odd_girth};
use crate::rational::Rational;

const ATTEMPTS: usize = 16;

/// Inserts edges in a seeded random order, rejecting any edge that would
/// push mad to `mad_bound` or create an odd cycle shorter than
/// `odd_girth_min`. The result is edge-maximal for that order and is
/// re-verified with [`mad`] and [`odd_girth`] before it is returned.
pub fn gen_constrained(n: usize, mad_bound: Rational, odd_girth_min: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if odd_girth_min < 3 || odd_girth_min.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("odd girth floor {odd_girth_min} must be odd and >= 3")));
    }
    for attempt in 0..ATTEMPTS {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        let mut g = Graph::new(n);
        for (u, v) in pairs {
            if let Some(len) = shortest_even_walk(&g, u, v) {
                if len + 1 < odd_girth_min {
                    continue;
                }
            }
            g.add_edge(u, v)?;
            if mad(&g)? >= mad_bound {
                g.remove_edge(u, v);
            }
        }
        if mad(&g)? < mad_bound && odd_girth(&g).is_at_least(odd_girth_min) {
            return Ok(g);
        }
    }
    Err(Error::GenerationExhausted { attempts: ATTEMPTS })
}

/// Length of a shortest even-length walk from `u` to `v`. Adding `uv` closes
/// an odd walk of that length plus one, which contains an odd cycle no longer
/// than it; every new odd cycle uses `uv`.
fn shortest_even_walk(g: &Graph, u: usize, v: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; 2 * g.n()];
    let mut queue = VecDeque::from([2 * u]);
    dist[2 * u] = 0;
    while let Some(x) = queue.pop_front() {
        if x == 2 * v {
            return Some(dist[x]);
        }
        for &w in g.neighbors(x / 2) {
            let y = 2 * w + (x & 1 ^ 1);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    None
}
