//! Graph homomorphism decision `G -> H` by backtracking with maintained arc
//! consistency.
//!
//! Domains are bitsets over target vertices. Revising the domain of `u`
//! against a neighbor `v` intersects it with the union of the target
//! neighborhoods of `D(v)`, which is exactly the set of supported values.
//! Variables are chosen by minimum remaining domain (ties by smallest label),
//! values in increasing target label, so transcripts are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{parse_graph6, write_graph6};
use crate::kneser::{kneser_graph, refute_with_target_girth, KneserParams, ObstructionCertificate, DEFAULT_VERTEX_CAP};
use crate::params::{mad, odd_girth, OddGirth};
use crate::rational::Rational;

pub const DEFAULT_BUDGET: u64 = 100_000_000;
const PROGRESS_EVERY: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum SearchOutcome {
    Found { map: Vec<usize>, nodes: u64 },
    NoneExhaustive { nodes: u64 },
    Refuted { certificate: ObstructionCertificate },
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn hom(&self) -> Option<Homomorphism> {
        match self {
            SearchOutcome::Found { map, .. } => Some(Homomorphism { map: map.clone() }),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::NoneExhaustive { nodes }
            | SearchOutcome::BudgetExceeded { nodes } => *nodes,
            SearchOutcome::Refuted { .. } => 0,
        }
    }
}

/// Outcome of the raw list search, before any refutation shortcut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ListOutcome {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

/// List-homomorphism search: each source vertex starts from its own domain.
/// With `injective`, assigned values are removed from every other domain.
pub(crate) struct ListSearch<'a> {
    source: &'a Graph,
    target: &'a Graph,
    injective: bool,
    budget: u64,
    pub nodes: u64,
    tw: usize,
}

impl<'a> ListSearch<'a> {
    pub fn new(source: &'a Graph, target: &'a Graph, injective: bool, budget: u64) -> ListSearch<'a> {
        ListSearch { source, target, injective, budget, nodes: 0, tw: target.words() }
    }

    /// `domains` is `source.n()` rows of `target.words()` words, flat.
    pub fn run(&mut self, mut domains: Vec<u64>) -> ListOutcome {
        let n = self.source.n();
        assert_eq!(domains.len(), n * self.tw);
        let all: Vec<usize> = (0..n).collect();
        if !self.propagate(&mut domains, all) {
            return ListOutcome::Exhausted;
        }
        let mut assigned = vec![usize::MAX; n];
        match self.solve(&domains, &mut assigned) {
            Ok(true) => ListOutcome::Found(assigned),
            Ok(false) => ListOutcome::Exhausted,
            Err(()) => ListOutcome::OutOfBudget,
        }
    }

    fn dom<'d>(&self, doms: &'d [u64], v: usize) -> &'d [u64] {
        &doms[v * self.tw..(v + 1) * self.tw]
    }

    fn solve(&mut self, doms: &[u64], assigned: &mut [usize]) -> std::result::Result<bool, ()> {
        let mut pick: Option<(usize, usize)> = None;
        for (v, _) in assigned.iter().enumerate().filter(|(_, &a)| a == usize::MAX) {
            let c = bits::count(self.dom(doms, v));
            if pick.is_none_or(|(_, best)| c < best) {
                pick = Some((v, c));
            }
        }
        let Some((u, _)) = pick else {
            return Ok(true);
        };
        let values: Vec<usize> = bits::iter(self.dom(doms, u)).collect();
        for a in values {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            if self.nodes.is_multiple_of(PROGRESS_EVERY) {
                log::info!("hom search: {} nodes", self.nodes);
            }
            let mut next = doms.to_vec();
            let row = &mut next[u * self.tw..(u + 1) * self.tw];
            row.iter_mut().for_each(|w| *w = 0);
            bits::set(row, a);
            let mut queue = vec![u];
            if self.injective && !self.exclude_value(&mut next, u, a, assigned, &mut queue) {
                continue;
            }
            assigned[u] = a;
            if self.propagate(&mut next, queue) && self.solve(&next, assigned)? {
                return Ok(true);
            }
            assigned[u] = usize::MAX;
        }
        Ok(false)
    }

    fn exclude_value(&self, doms: &mut [u64], u: usize, a: usize, assigned: &[usize], queue: &mut Vec<usize>) -> bool {
        for v in 0..self.source.n() {
            if v == u || assigned[v] != usize::MAX {
                continue;
            }
            let row = &mut doms[v * self.tw..(v + 1) * self.tw];
            if bits::get(row, a) {
                bits::clear(row, a);
                if bits::is_empty(row) {
                    return false;
                }
                queue.push(v);
            }
        }
        true
    }

    fn propagate(&self, doms: &mut [u64], mut queue: Vec<usize>) -> bool {
        let tw = self.tw;
        let mut queued = vec![false; self.source.n()];
        for &v in &queue {
            queued[v] = true;
        }
        let mut support = vec![0u64; tw];
        while let Some(v) = queue.pop() {
            queued[v] = false;
            support.iter_mut().for_each(|w| *w = 0);
            for b in bits::iter(&doms[v * tw..(v + 1) * tw]) {
                for (s, r) in support.iter_mut().zip(self.target.row(b)) {
                    *s |= r;
                }
            }
            for &u in self.source.neighbors(v) {
                let row = &mut doms[u * tw..(u + 1) * tw];
                let mut changed = false;
                for (d, s) in row.iter_mut().zip(&support) {
                    let nd = *d & s;
                    changed |= nd != *d;
                    *d = nd;
                }
                if changed {
                    if bits::is_empty(row) {
                        return false;
                    }
                    if !queued[u] {
                        queued[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        true
    }
}

/// Target graph with its odd girth computed once, for repeated searches.
#[derive(Clone, Debug)]
pub struct PreparedTarget {
    pub graph: Graph,
    pub odd_girth: OddGirth,
}

impl PreparedTarget {
    pub fn new(graph: Graph) -> PreparedTarget {
        let og = odd_girth(&graph);
        PreparedTarget { graph, odd_girth: og }
    }
}

pub fn find_hom(source: &Graph, target: &Graph, budget: u64) -> SearchOutcome {
    find_hom_prepared(source, &PreparedTarget::new(target.clone()), budget)
}

/// Refutes by odd girth when possible, then searches each connected
/// component of the source separately under a shared node budget.
pub fn find_hom_prepared(source: &Graph, target: &PreparedTarget, budget: u64) -> SearchOutcome {
    let t = &target.graph;
    if source.n() == 0 {
        return SearchOutcome::Found { map: Vec::new(), nodes: 0 };
    }
    if t.n() == 0 {
        return SearchOutcome::NoneExhaustive { nodes: 0 };
    }
    if let Some(certificate) = refute_with_target_girth(source, target.odd_girth) {
        return SearchOutcome::Refuted { certificate };
    }
    let full = bits::full(t.n());
    let mut map = vec![0usize; source.n()];
    let mut nodes = 0u64;
    for comp in source.components() {
        if comp.len() == 1 {
            map[comp[0]] = 0;
            continue;
        }
        let sub = source.induced(&comp);
        let domains: Vec<u64> = full.iter().copied().cycle().take(full.len() * comp.len()).collect();
        let mut search = ListSearch::new(&sub, t, false, budget - nodes);
        let outcome = search.run(domains);
        nodes += search.nodes;
        match outcome {
            ListOutcome::Found(m) => {
                for (i, &v) in comp.iter().enumerate() {
                    map[v] = m[i];
                }
            }
            ListOutcome::Exhausted => return SearchOutcome::NoneExhaustive { nodes },
            ListOutcome::OutOfBudget => return SearchOutcome::BudgetExceeded { nodes: nodes.min(budget) },
        }
    }
    SearchOutcome::Found { map, nodes }
}

/// Source edges whose images are not target edges. Empty iff `h` is a
/// homomorphism.
pub fn verify_hom(source: &Graph, target: &Graph, h: &Homomorphism) -> Result<Vec<(usize, usize)>> {
    if h.map.len() != source.n() {
        return Err(Error::ShapeMismatch(format!("map has {} entries for {} vertices", h.map.len(), source.n())));
    }
    if let Some(&bad) = h.map.iter().find(|&&x| x >= target.n()) {
        return Err(Error::ShapeMismatch(format!("value {bad} outside target of size {}", target.n())));
    }
    Ok(source.edges().filter(|&(u, v)| !target.has_edge(h.map[u], h.map[v])).collect())
}

/// A named target: `kneser:n,k` or `graph6:<string>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    Kneser(KneserParams),
    Graph6(String),
}

impl TargetSpec {
    pub fn parse(text: &str) -> Result<TargetSpec> {
        if let Some(rest) = text.strip_prefix("kneser:") {
            let (n, k) = rest.split_once(',').ok_or_else(|| Error::InvalidArgument(format!("bad target {text:?}")))?;
            let n = n.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad n in {text:?}")))?;
            let k = k.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad k in {text:?}")))?;
            Ok(TargetSpec::Kneser(KneserParams::new(n, k)?))
        } else if let Some(rest) = text.strip_prefix("graph6:") {
            parse_graph6(rest)?;
            Ok(TargetSpec::Graph6(rest.to_string()))
        } else {
            Err(Error::InvalidArgument(format!("target {text:?} must start with kneser: or graph6:")))
        }
    }

    pub fn build(&self) -> Result<Graph> {
        match self {
            TargetSpec::Kneser(p) => Ok(kneser_graph(*p, DEFAULT_VERTEX_CAP)?.graph),
            TargetSpec::Graph6(s) => parse_graph6(s),
        }
    }

    pub fn of_graph(g: &Graph) -> TargetSpec {
        TargetSpec::Graph6(write_graph6(g))
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Kneser(p) => write!(f, "{p}"),
            TargetSpec::Graph6(s) => write!(f, "graph6:{s}"),
        }
    }
}

/// Certificate record `{"map": [...], "target": "kneser:n,k" | "graph6:..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCertificate {
    pub map: Vec<usize>,
    pub target: String,
}

impl HomCertificate {
    pub fn new(h: &Homomorphism, target: &TargetSpec) -> HomCertificate {
        HomCertificate { map: h.map.clone(), target: target.to_string() }
    }

    /// Rebuilds the target and re-verifies the map on `source`.
    pub fn check(&self, source: &Graph) -> Result<bool> {
        let target = TargetSpec::parse(&self.target)?.build()?;
        Ok(verify_hom(source, &target, &Homomorphism { map: self.map.clone() })?.is_empty())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureReport {
    pub k: usize,
    pub mad: Rational,
    pub mad_bound: Rational,
    pub odd_girth: OddGirth,
    pub odd_girth_bound: usize,
    pub mad_ok: bool,
    pub odd_girth_ok: bool,
    pub target: String,
    pub outcome: Option<SearchOutcome>,
}

impl ConjectureReport {
    pub fn premises_hold(&self) -> bool {
        self.mad_ok && self.odd_girth_ok
    }
}

/// Checks `mad < (2k+1)/k` and odd girth `>= 2k+1`, then searches for a
/// homomorphism into `K(2k+1, k)` when both hold.
pub fn conjecture_instance(g: &Graph, k: usize, budget: u64) -> Result<ConjectureReport> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("level k = {k} must be >= 2")));
    }
    let params = KneserParams::conjecture_target(k)?;
    let mad_bound = Rational::new(2 * k as i64 + 1, k as i64);
    let mad_value = mad(g)?;
    let og = odd_girth(g);
    let mad_ok = mad_value < mad_bound;
    let odd_girth_ok = og.is_at_least(2 * k + 1);
    let outcome = if mad_ok && odd_girth_ok {
        let target = kneser_graph(params, DEFAULT_VERTEX_CAP)?.graph;
        Some(find_hom(g, &target, budget))
    } else {
        None
    };
    Ok(ConjectureReport {
        k,
        mad: mad_value,
        mad_bound,
        odd_girth: og,
        odd_girth_bound: 2 * k + 1,
        mad_ok,
        odd_girth_ok,
        target: params.to_string(),
        outcome,
    })
}
