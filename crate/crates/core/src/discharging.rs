//! Charge `deg(v)` on every vertex, redistributed by rules R1-R3 in
//! synchronous rounds with exact rational arithmetic.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::induced_path_longer_than;
use crate::rational::Rational;
use crate::reductions::chorded_odd_cycles;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum R1Targets {
    DegreeOneOrTwo,
    DegreeTwoOnly,
}

/// How often a rule may fire along the same ordered pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Firing {
    OncePerRun,
    /// Fires again every round; the rules are structural, so any firing
    /// rule fires forever and the run hits the round cap.
    OncePerRound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleVariant {
    pub r1_targets: R1Targets,
    pub r1_amount: Rational,
    pub r2_amount: Rational,
    pub r3_amount: Rational,
    pub firing: Firing,
}

impl Default for RuleVariant {
    fn default() -> RuleVariant {
        RuleVariant {
            r1_targets: R1Targets::DegreeOneOrTwo,
            r1_amount: Rational::new(1, 2),
            r2_amount: Rational::new(1, 4),
            r3_amount: Rational::new(1, 2),
            firing: Firing::OncePerRun,
        }
    }
}

impl RuleVariant {
    /// R1 restricted to degree-2 receivers.
    pub fn degree_two_only() -> RuleVariant {
        RuleVariant { r1_targets: R1Targets::DegreeTwoOnly, ..RuleVariant::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub round: usize,
    pub rule: Rule,
    pub from: usize,
    pub to: usize,
    pub amount: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeState {
    pub charges: Vec<Rational>,
    pub log: Vec<Transfer>,
}

impl ChargeState {
    pub fn total(&self) -> Rational {
        self.charges.iter().copied().sum()
    }

    pub fn rounds(&self) -> usize {
        self.log.last().map_or(0, |t| t.round)
    }

    /// Transfer log as CSV with header `round,rule,from,to,amount`.
    pub fn log_csv(&self) -> String {
        let mut out = String::from("round,rule,from,to,amount\n");
        for t in &self.log {
            writeln!(out, "{},{:?},{},{},{}", t.round, t.rule, t.from, t.to, t.amount).expect("write to string");
        }
        out
    }
}

pub fn init_charges(g: &Graph) -> ChargeState {
    ChargeState { charges: (0..g.n()).map(|v| Rational::from_int(g.degree(v) as i64)).collect(), log: Vec::new() }
}

/// Eligible `(rule, from, to, amount)` transfers, by rule then label pair.
/// They depend on the graph only, so they are computed once per run.
pub fn eligible_transfers(g: &Graph, k: usize, l: usize, variant: &RuleVariant) -> Vec<(Rule, usize, usize, Rational)> {
    let mut r1 = Vec::new();
    for v in (0..g.n()).filter(|&v| g.degree(v) >= 4) {
        for &w in g.neighbors(v) {
            let receives = match variant.r1_targets {
                R1Targets::DegreeOneOrTwo => matches!(g.degree(w), 1 | 2),
                R1Targets::DegreeTwoOnly => g.degree(w) == 2,
            };
            if receives {
                r1.push((v, w));
            }
        }
    }
    let mut r2 = Vec::new();
    for (cycle, _, _) in chorded_odd_cycles(g, 2 * k + 3) {
        for i in 0..cycle.len() {
            r2.push((cycle[i], cycle[(i + 1) % cycle.len()]));
        }
    }
    let mut r3 = Vec::new();
    for path in maximal_induced_paths_longer_than(g, l) {
        let e = path.len() - 1;
        r3.push((path[0], path[1]));
        r3.push((path[e], path[e - 1]));
    }
    let mut out = Vec::new();
    for (rule, mut pairs, amount) in
        [(Rule::R1, r1, variant.r1_amount), (Rule::R2, r2, variant.r2_amount), (Rule::R3, r3, variant.r3_amount)]
    {
        pairs.sort_unstable();
        pairs.dedup();
        out.extend(pairs.into_iter().map(|(a, b)| (rule, a, b, amount)));
    }
    out
}

/// Runs rounds until one fires nothing. More than `|V|·|E|` firing rounds is
/// [`Error::NonTermination`].
pub fn run_discharging(g: &Graph, k: usize, l: usize, s: ChargeState, variant: &RuleVariant) -> Result<ChargeState> {
    let cap = g.n() * g.m();
    let eligible = eligible_transfers(g, k, l, variant);
    let mut fired: HashSet<(Rule, usize, usize)> = HashSet::new();
    let mut state = s;
    let mut round = 0;
    loop {
        let batch: Vec<_> = eligible
            .iter()
            .filter(|&&(rule, a, b, _)| variant.firing == Firing::OncePerRound || !fired.contains(&(rule, a, b)))
            .copied()
            .collect();
        if batch.is_empty() {
            return Ok(state);
        }
        round += 1;
        if round > cap {
            return Err(Error::NonTermination { cap });
        }
        for (rule, from, to, amount) in batch {
            state.charges[from] -= amount;
            state.charges[to] += amount;
            fired.insert((rule, from, to));
            state.log.push(Transfer { round, rule, from, to, amount });
        }
    }
}

/// Maximal induced paths with more than `l` edges, each once with the smaller
/// endpoint first. Exhaustive, so only cheap when such paths are rare.
pub fn maximal_induced_paths_longer_than(g: &Graph, l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if induced_path_longer_than(g, l).is_none() {
        return out;
    }
    // some outside neighbor of `end` sees no other path vertex
    fn extendable(g: &Graph, end: usize, on: &[bool]) -> bool {
        g.neighbors(end).iter().any(|&w| !on[w] && g.neighbors(w).iter().filter(|&&x| on[x]).count() == 1)
    }
    fn dfs(g: &Graph, l: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        let mut extended = false;
        for &w in g.neighbors(last) {
            if on[w] || g.neighbors(w).iter().any(|&x| on[x] && x != last) {
                continue;
            }
            extended = true;
            on[w] = true;
            path.push(w);
            dfs(g, l, path, on, out);
            path.pop();
            on[w] = false;
        }
        let first = path[0];
        if !extended && path.len() > l + 1 && first < last && !extendable(g, first, on) {
            out.push(path.clone());
        }
    }
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        let mut path = vec![s];
        dfs(g, l, &mut path, &mut on, &mut out);
        on[s] = false;
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeAudit {
    pub total: Rational,
    pub expected: Rational,
    pub balanced: bool,
    pub charges: Vec<Rational>,
    /// Vertices ending with negative charge.
    pub deficits: Vec<usize>,
}

pub fn audit_charges(g: &Graph, s: &ChargeState) -> ChargeAudit {
    let total = s.total();
    let expected = Rational::from_int(2 * g.m() as i64);
    ChargeAudit {
        total,
        expected,
        balanced: total == expected,
        charges: s.charges.clone(),
        deficits: (0..s.charges.len()).filter(|&v| s.charges[v].is_negative()).collect(),
    }
}
