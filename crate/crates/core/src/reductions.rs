//! Forbidden configurations F1-F5, their reductions, path collapsing, and
//! lifting colorings of a reduced graph back to the original.

use serde::{Serialize, Serializer};

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::write_graph6;
use crate::hom::{verify_hom, Homomorphism};
use crate::kneser::{find_common_neighbor, find_walk, find_walk_within, Kneser};
use crate::params::{is_induced_path, mad, odd_girth, OddGirth};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConfigKind {
    F1,
    F2,
    F3,
    F4,
    F5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Witness {
    /// Degree-1 vertex and its neighbor of degree at most 3.
    Leaf { leaf: usize, neighbor: usize },
    /// Odd cycle of length at most `2k+3` (canonical orientation), its
    /// lexicographically smallest chord, and the lengths `(odd, even)` of the
    /// two cycles the chord splits it into.
    ChordedCycle { cycle: Vec<usize>, chord: (usize, usize), split: (usize, usize) },
    /// Vertex of degree at least 4 whose neighbors all have degree 2 or 3.
    Fan { center: usize, neighbors: Vec<usize> },
    /// Induced path whose internal vertices all have degree 2.
    Thread { path: Vec<usize> },
    /// Two F1-F4 matches sharing vertices.
    Overlap { first: Box<ConfigMatch>, second: Box<ConfigMatch>, shared: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigMatch {
    pub kind: ConfigKind,
    pub vertices: Vec<usize>,
    pub witness: Witness,
}

impl ConfigMatch {
    /// Re-checks the witness against the definition of its kind on `g`.
    /// F2 uses the cycle bound `2k+3`; F4 accepts the path's own length.
    pub fn revalidate(&self, g: &Graph, k: usize) -> bool {
        let in_range = |v: usize| v < g.n();
        match &self.witness {
            Witness::Leaf { leaf, neighbor } => {
                in_range(*leaf)
                    && in_range(*neighbor)
                    && g.degree(*leaf) == 1
                    && g.has_edge(*leaf, *neighbor)
                    && g.degree(*neighbor) <= 3
            }
            Witness::ChordedCycle { cycle, chord, .. } => {
                let len = cycle.len();
                if len % 2 == 0 || len < 3 || len > 2 * k + 3 || !cycle.iter().all(|&v| in_range(v)) {
                    return false;
                }
                let mut seen = vec![false; g.n()];
                for &v in cycle {
                    if std::mem::replace(&mut seen[v], true) {
                        return false;
                    }
                }
                let closed = (0..len).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % len]));
                let pos = |v: usize| cycle.iter().position(|&x| x == v);
                let is_chord = match (pos(chord.0), pos(chord.1)) {
                    (Some(i), Some(j)) => {
                        let d = i.abs_diff(j);
                        d > 1 && d < len - 1 && g.has_edge(chord.0, chord.1)
                    }
                    _ => false,
                };
                closed && is_chord
            }
            Witness::Fan { center, neighbors } => {
                in_range(*center)
                    && g.degree(*center) >= 4
                    && g.neighbors(*center) == neighbors.as_slice()
                    && neighbors.iter().all(|&w| matches!(g.degree(w), 2 | 3))
            }
            Witness::Thread { path } => {
                path.len() >= 3 && is_induced_path(g, path) && path[1..path.len() - 1].iter().all(|&v| g.degree(v) == 2)
            }
            Witness::Overlap { first, second, shared } => {
                first.kind != ConfigKind::F5
                    && second.kind != ConfigKind::F5
                    && !shared.is_empty()
                    && shared.iter().all(|v| first.vertices.contains(v) && second.vertices.contains(v))
                    && first.revalidate(g, k)
                    && second.revalidate(g, k)
            }
        }
    }
}

/// All matches of every kind. F4 uses paths of length exactly `l + 1`.
pub fn detect_forbidden(g: &Graph, k: usize, l: usize) -> Vec<ConfigMatch> {
    detect_kinds(g, k, l, &[ConfigKind::F1, ConfigKind::F2, ConfigKind::F3, ConfigKind::F4, ConfigKind::F5])
}

/// Matches of the listed kinds only, grouped by kind in `F1..F5` order.
/// F5 is built from whichever of F1-F4 are listed.
pub fn detect_kinds(g: &Graph, k: usize, l: usize, kinds: &[ConfigKind]) -> Vec<ConfigMatch> {
    let mut out = Vec::new();
    if kinds.contains(&ConfigKind::F1) {
        out.extend(detect_f1(g));
    }
    if kinds.contains(&ConfigKind::F2) {
        out.extend(detect_f2(g, k));
    }
    if kinds.contains(&ConfigKind::F3) {
        out.extend(detect_f3(g));
    }
    if kinds.contains(&ConfigKind::F4) {
        out.extend(threads(g, l + 1).into_iter().map(|path| ConfigMatch {
            kind: ConfigKind::F4,
            vertices: path.clone(),
            witness: Witness::Thread { path },
        }));
    }
    if kinds.contains(&ConfigKind::F5) {
        let base = out.len();
        for i in 0..base {
            for j in i + 1..base {
                let shared: Vec<usize> =
                    out[i].vertices.iter().copied().filter(|v| out[j].vertices.contains(v)).collect();
                if shared.is_empty() {
                    continue;
                }
                let mut vertices: Vec<usize> = out[i].vertices.iter().chain(&out[j].vertices).copied().collect();
                vertices.sort_unstable();
                vertices.dedup();
                let witness =
                    Witness::Overlap { first: Box::new(out[i].clone()), second: Box::new(out[j].clone()), shared };
                out.push(ConfigMatch { kind: ConfigKind::F5, vertices, witness });
            }
        }
    }
    out
}

fn detect_f1(g: &Graph) -> Vec<ConfigMatch> {
    (0..g.n())
        .filter(|&v| g.degree(v) == 1 && g.degree(g.neighbors(v)[0]) <= 3)
        .map(|leaf| {
            let neighbor = g.neighbors(leaf)[0];
            ConfigMatch {
                kind: ConfigKind::F1,
                vertices: vec![leaf, neighbor],
                witness: Witness::Leaf { leaf, neighbor },
            }
        })
        .collect()
}

fn detect_f2(g: &Graph, k: usize) -> Vec<ConfigMatch> {
    chorded_odd_cycles(g, 2 * k + 3)
        .into_iter()
        .map(|(cycle, chord, split)| {
            let mut vertices = cycle.clone();
            vertices.sort_unstable();
            ConfigMatch { kind: ConfigKind::F2, vertices, witness: Witness::ChordedCycle { cycle, chord, split } }
        })
        .collect()
}

fn detect_f3(g: &Graph) -> Vec<ConfigMatch> {
    (0..g.n())
        .filter(|&v| g.degree(v) >= 4 && g.neighbors(v).iter().all(|&w| matches!(g.degree(w), 2 | 3)))
        .map(|center| {
            let neighbors = g.neighbors(center).to_vec();
            let mut vertices = neighbors.clone();
            vertices.push(center);
            vertices.sort_unstable();
            ConfigMatch { kind: ConfigKind::F3, vertices, witness: Witness::Fan { center, neighbors } }
        })
        .collect()
}

/// Calls `f` on every cycle with at most `max_len` vertices, once each, in
/// canonical orientation: starting at its smallest vertex, second vertex
/// smaller than the last.
pub fn for_each_cycle(g: &Graph, max_len: usize, mut f: impl FnMut(&[usize])) {
    fn dfs(g: &Graph, s: usize, max_len: usize, path: &mut Vec<usize>, on: &mut [bool], f: &mut impl FnMut(&[usize])) {
        let cur = *path.last().expect("nonempty path");
        for &w in g.neighbors(cur) {
            if w == s {
                if path.len() >= 3 && path[1] < cur {
                    f(path);
                }
            } else if w > s && !on[w] && path.len() < max_len {
                on[w] = true;
                path.push(w);
                dfs(g, s, max_len, path, on, f);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        let mut path = vec![s];
        on[s] = true;
        dfs(g, s, max_len, &mut path, &mut on, &mut f);
        on[s] = false;
    }
}

/// Chorded odd cycles of length at most `max_len` with the smallest chord
/// and the `(odd, even)` split lengths it induces.
#[allow(clippy::type_complexity)]
pub fn chorded_odd_cycles(g: &Graph, max_len: usize) -> Vec<(Vec<usize>, (usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for_each_cycle(g, max_len, |cycle| {
        let len = cycle.len();
        if len % 2 == 0 {
            return;
        }
        let mut best: Option<((usize, usize), usize)> = None;
        for i in 0..len {
            for j in i + 2..len {
                if i == 0 && j == len - 1 {
                    continue;
                }
                let (a, b) = (cycle[i], cycle[j]);
                if g.has_edge(a, b) {
                    let chord = (a.min(b), a.max(b));
                    if best.is_none_or(|(c, _)| chord < c) {
                        best = Some((chord, j - i));
                    }
                }
            }
        }
        if let Some((chord, gap)) = best {
            let (x, y) = (gap + 1, len - gap + 1);
            let split = if x % 2 == 1 { (x, y) } else { (y, x) };
            out.push((cycle.to_vec(), chord, split));
        }
    });
    out
}

/// Induced paths with exactly `length` edges whose internal vertices have
/// degree 2, each once with the smaller endpoint first.
pub fn threads(g: &Graph, length: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if length < 2 {
        return out;
    }
    for v in 0..g.n() {
        for &w in g.neighbors(v) {
            let mut path = vec![v, w];
            while path.len() < length + 1 {
                let last = path[path.len() - 1];
                if g.degree(last) != 2 {
                    break;
                }
                let prev = path[path.len() - 2];
                let next = g.neighbors(last).iter().copied().find(|&x| x != prev).expect("degree 2");
                if path.contains(&next) {
                    break;
                }
                path.push(next);
            }
            if path.len() == length + 1 && path[0] < path[length] && is_induced_path(g, &path) {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    F1,
    F2,
    F3,
    F4,
    F5,
    PathCollapse,
    VertexDeletion,
}

impl From<ConfigKind> for StepKind {
    fn from(k: ConfigKind) -> StepKind {
        match k {
            ConfigKind::F1 => StepKind::F1,
            ConfigKind::F2 => StepKind::F2,
            ConfigKind::F3 => StepKind::F3,
            ConfigKind::F4 => StepKind::F4,
            ConfigKind::F5 => StepKind::F5,
        }
    }
}

/// How to undo a step. Labels in `action` refer to the graph before the step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum LiftAction {
    ReinsertVertex { v: usize },
    RestoreEdge { u: usize, v: usize },
    ReexpandPath { path: Vec<usize>, added_edge: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftRecipe {
    /// `kept[i]` is the label before the step of vertex `i` after it.
    pub kept: Vec<usize>,
    pub action: LiftAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepAudit {
    pub mad_before: Rational,
    pub mad_after: Rational,
    pub odd_girth_before: OddGirth,
    pub odd_girth_after: OddGirth,
    pub mad_non_increasing: bool,
    pub odd_girth_non_decreasing: bool,
    pub odd_girth_at_least_2k_plus_1: bool,
    pub odd_girth_at_least_2k_plus_3: bool,
    pub claim_violated: bool,
}

impl StepAudit {
    fn compute(before: &Graph, after: &Graph, k: usize, collapse: bool) -> StepAudit {
        let (mb, ma) = (mad_or_zero(before), mad_or_zero(after));
        let (ob, oa) = (odd_girth(before), odd_girth(after));
        let mad_ok = ma <= mb;
        let og_ok = oa >= ob;
        let at_2k3 = oa.is_at_least(2 * k + 3);
        let claim_violated = !mad_ok || !og_ok || (collapse && !at_2k3);
        StepAudit {
            mad_before: mb,
            mad_after: ma,
            odd_girth_before: ob,
            odd_girth_after: oa,
            mad_non_increasing: mad_ok,
            odd_girth_non_decreasing: og_ok,
            odd_girth_at_least_2k_plus_1: oa.is_at_least(2 * k + 1),
            odd_girth_at_least_2k_plus_3: at_2k3,
            claim_violated,
        }
    }
}

fn mad_or_zero(g: &Graph) -> Rational {
    mad(g).unwrap_or_else(|_| Rational::zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub before: Graph,
    pub after: Graph,
    pub lift: LiftRecipe,
    pub audit: StepAudit,
}

impl ReductionStep {
    /// Removed vertices, in labels before the step.
    pub fn removed_vertices(&self) -> Vec<usize> {
        let mut kept = vec![false; self.before.n()];
        for &v in &self.lift.kept {
            kept[v] = true;
        }
        (0..self.before.n()).filter(|&v| !kept[v]).collect()
    }

    pub fn added_edges(&self) -> Vec<(usize, usize)> {
        match &self.lift.action {
            LiftAction::ReexpandPath { path, added_edge: true } => vec![(path[0], path[path.len() - 1])],
            _ => Vec::new(),
        }
    }

    pub fn removed_edges(&self) -> Vec<(usize, usize)> {
        match self.lift.action {
            LiftAction::RestoreEdge { u, v } => vec![(u, v)],
            _ => Vec::new(),
        }
    }
}

impl Serialize for ReductionStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct View<'a> {
            kind: StepKind,
            before: String,
            after: String,
            removed_vertices: Vec<usize>,
            added_edges: Vec<(usize, usize)>,
            removed_edges: Vec<(usize, usize)>,
            lift: &'a LiftRecipe,
            audit: &'a StepAudit,
        }
        View {
            kind: self.kind,
            before: write_graph6(&self.before),
            after: write_graph6(&self.after),
            removed_vertices: self.removed_vertices(),
            added_edges: self.added_edges(),
            removed_edges: self.removed_edges(),
            lift: &self.lift,
            audit: &self.audit,
        }
        .serialize(s)
    }
}

/// Applies the reduction of `m`. `k` sets the odd-girth threshold `2k+3`
/// audited on collapses.
pub fn apply_reduction(g: &Graph, m: &ConfigMatch, k: usize) -> Result<ReductionStep> {
    if !m.revalidate(g, k) {
        return Err(Error::StaleMatch);
    }
    let mut step = match &m.witness {
        Witness::Leaf { leaf, .. } => delete_vertex(g, *leaf, k)?,
        Witness::ChordedCycle { chord, .. } => {
            let mut after = g.clone();
            after.remove_edge(chord.0, chord.1);
            let audit = StepAudit::compute(g, &after, k, false);
            debug_assert!(audit.mad_non_increasing);
            ReductionStep {
                kind: StepKind::F2,
                before: g.clone(),
                after,
                lift: LiftRecipe {
                    kept: (0..g.n()).collect(),
                    action: LiftAction::RestoreEdge { u: chord.0, v: chord.1 },
                },
                audit,
            }
        }
        Witness::Fan { neighbors, .. } => {
            let victim = neighbors
                .iter()
                .copied()
                .find(|&w| g.degree(w) == 2)
                .or_else(|| neighbors.iter().copied().find(|&w| g.degree(w) == 3))
                .expect("fan neighbors have degree 2 or 3");
            delete_vertex(g, victim, k)?
        }
        Witness::Thread { path } => collapse_path(g, path, k)?,
        Witness::Overlap { first, second, .. } => {
            let pick = if second.kind < first.kind { second } else { first };
            apply_reduction(g, pick, k)?
        }
    };
    step.kind = m.kind.into();
    Ok(step)
}

/// Deletes `v`. Recorded as a plain vertex deletion.
pub fn delete_vertex(g: &Graph, v: usize, k: usize) -> Result<ReductionStep> {
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    let (after, kept) = g.remove_vertices(&[v]);
    let audit = StepAudit::compute(g, &after, k, false);
    debug_assert!(audit.mad_non_increasing && audit.odd_girth_non_decreasing);
    Ok(ReductionStep {
        kind: StepKind::VertexDeletion,
        before: g.clone(),
        after,
        lift: LiftRecipe { kept, action: LiftAction::ReinsertVertex { v } },
        audit,
    })
}

/// Removes the internal vertices of an induced path of length at least 2
/// and joins its endpoints. The audit flags a drop in odd girth, odd girth
/// below `2k+3`, or a rise in mad.
pub fn collapse_path(g: &Graph, path: &[usize], k: usize) -> Result<ReductionStep> {
    if path.len() < 3 || !is_induced_path(g, path) {
        return Err(Error::NotInducedPath);
    }
    let (mut after, kept) = g.remove_vertices(&path[1..path.len() - 1]);
    let pos = |v: usize| kept.binary_search(&v).expect("endpoint kept");
    let added_edge = after.add_edge(pos(path[0]), pos(path[path.len() - 1]))?;
    let audit = StepAudit::compute(g, &after, k, true);
    Ok(ReductionStep {
        kind: StepKind::PathCollapse,
        before: g.clone(),
        after,
        lift: LiftRecipe { kept, action: LiftAction::ReexpandPath { path: path.to_vec(), added_edge } },
        audit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LiftFailure {
    NoWalk,
    NoCommonNeighbor,
    /// A deleted edge's endpoints received intersecting colors.
    EdgeConflict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum LiftOutcome {
    Lifted { map: Vec<usize> },
    LiftFailed { reason: LiftFailure },
}

impl LiftOutcome {
    pub fn hom(&self) -> Option<Homomorphism> {
        match self {
            LiftOutcome::Lifted { map } => Some(Homomorphism { map: map.clone() }),
            LiftOutcome::LiftFailed { .. } => None,
        }
    }
}

/// Extends a coloring of `step.after` into `kn` to `step.before`, choosing
/// lexicographically first colors and walks. The edge added by a collapse is
/// not required of `h_after`; the walk replaces it.
pub fn lift_coloring(step: &ReductionStep, h_after: &Homomorphism, kn: &Kneser) -> Result<LiftOutcome> {
    let mut check = step.after.clone();
    if let LiftAction::ReexpandPath { path, added_edge: true } = &step.lift.action {
        let pos = |v: usize| step.lift.kept.binary_search(&v).expect("endpoint kept");
        check.remove_edge(pos(path[0]), pos(path[path.len() - 1]));
    }
    match verify_hom(&check, &kn.graph, h_after) {
        Ok(bad) if bad.is_empty() => {}
        _ => return Err(Error::TargetMismatch),
    }
    let before = &step.before;
    let mut map = vec![usize::MAX; before.n()];
    for (i, &v) in step.lift.kept.iter().enumerate() {
        map[v] = h_after.map[i];
    }
    match &step.lift.action {
        LiftAction::ReinsertVertex { v } => {
            let colors: Vec<_> = before.neighbors(*v).iter().map(|&w| kn.subset(map[w])).collect();
            match find_common_neighbor(&kn.params, &colors) {
                Some(c) => map[*v] = kn.label(&c).expect("subset of the target"),
                None => return Ok(LiftOutcome::LiftFailed { reason: LiftFailure::NoCommonNeighbor }),
            }
        }
        LiftAction::RestoreEdge { u, v } => {
            if !kn.graph.has_edge(map[*u], map[*v]) {
                return Ok(LiftOutcome::LiftFailed { reason: LiftFailure::EdgeConflict });
            }
        }
        LiftAction::ReexpandPath { path, .. } => {
            let len = path.len() - 1;
            let (a, b) = (map[path[0]], map[path[len]]);
            let internal = &path[1..len];
            let constrained = internal.iter().any(|&x| before.degree(x) > 2);
            let walk = if constrained {
                let allowed: Vec<Vec<u64>> = internal
                    .iter()
                    .map(|&x| {
                        let mut set = bits::full(kn.graph.n());
                        for &w in before.neighbors(x) {
                            if !path.contains(&w) {
                                for (s, r) in set.iter_mut().zip(kn.graph.row(map[w])) {
                                    *s &= r;
                                }
                            }
                        }
                        set
                    })
                    .collect();
                find_walk_within(kn, a, b, len, &allowed)
            } else {
                find_walk(kn, &kn.subset(a), &kn.subset(b), len)
                    .map(|w| w.iter().map(|s| kn.label(s).expect("subset of the target")).collect())
            };
            match walk {
                Some(w) => {
                    for (&x, &c) in internal.iter().zip(&w[1..len]) {
                        map[x] = c;
                    }
                }
                None => return Ok(LiftOutcome::LiftFailed { reason: LiftFailure::NoWalk }),
            }
        }
    }
    let h = Homomorphism { map };
    let bad = verify_hom(before, &kn.graph, &h)?;
    assert!(bad.is_empty(), "lifted coloring fails on edges {bad:?}");
    Ok(LiftOutcome::Lifted { map: h.map })
}
