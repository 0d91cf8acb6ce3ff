//! Search for pattern maps `X -> X ∪ P_X` from `K(2j+1, j)` into
//! `K(2k+3, k+1)`: every j-subset `X` of `T = {0..2j}` is extended by a
//! `(k+1-j)`-subset `P_X` so that disjoint sources get disjoint images and
//! the map is injective.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::json;

use super::{combinations_of, kneser_graph, refute_hom_by_odd_girth, KSubset, KneserParams, ObstructionCertificate};
use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{ListOutcome, ListSearch};

/// Where the extra elements `P_X` may come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PatternScope {
    /// `P_X ⊆ U = S \ T`.
    Complement,
    /// `P_X ⊆ S \ X`, a superset of the complement scheme.
    OutsideSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum EmbeddingStatus {
    Verified,
    FailedExhaustive,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingAttempt {
    pub j: usize,
    pub k: usize,
    pub scope: PatternScope,
    pub ground_t: KSubset,
    pub ground_u: KSubset,
    /// `(X, P_X)` for every source vertex in label order, when verified.
    pub patterns: Option<Vec<(KSubset, KSubset)>>,
    pub status: EmbeddingStatus,
    pub search_nodes: u64,
    /// Odd-girth obstruction between the source and the graph of all
    /// admissible images, computed independently of the search.
    pub obstruction: Option<ObstructionCertificate>,
}

impl EmbeddingAttempt {
    /// Images `X ∪ P_X` in source label order.
    pub fn images(&self) -> Option<Vec<KSubset>> {
        let s = 2 * self.k + 3;
        self.patterns.as_ref().map(|ps| {
            ps.iter().map(|(x, p)| KSubset::from_bits(s, x.bits() | p.bits()).expect("in ground set")).collect()
        })
    }

    /// JSON certificate record: kind, parameters, witness, searchNodes.
    pub fn certificate(&self) -> serde_json::Value {
        let kind = match self.status {
            EmbeddingStatus::Verified => "embeddingVerified",
            EmbeddingStatus::FailedExhaustive => "embeddingFailedExhaustive",
            EmbeddingStatus::BudgetExceeded => "embeddingBudgetExceeded",
        };
        let witness = match &self.patterns {
            Some(ps) => json!({
                "patterns": ps.iter().map(|(x, p)| json!({"x": x, "p": p})).collect::<Vec<_>>(),
            }),
            None => json!({ "obstruction": self.obstruction }),
        };
        json!({
            "kind": kind,
            "parameters": {
                "j": self.j,
                "k": self.k,
                "source": format!("kneser:{},{}", 2 * self.j + 1, self.j),
                "target": format!("kneser:{},{}", 2 * self.k + 3, self.k + 1),
                "groundT": self.ground_t,
                "groundU": self.ground_u,
                "scope": self.scope,
            },
            "witness": witness,
            "searchNodes": self.search_nodes,
        })
    }
}

/// Exhaustive backtracking (with propagation) over all pattern assignments,
/// so a failure within budget is a proof that none exists.
pub fn attempt_embedding(j: usize, k: usize, budget: u64, scope: PatternScope) -> Result<EmbeddingAttempt> {
    if j < 2 || j > k {
        return Err(Error::InvalidArgument(format!("need 2 <= j <= k, got j={j}, k={k}")));
    }
    let s = 2 * k + 3;
    if s > 64 {
        return Err(Error::InvalidArgument(format!("ground set of size {s} exceeds 64")));
    }
    let t = 2 * j + 1;
    let extra = k + 1 - j;
    let source = kneser_graph(KneserParams::new(t, j)?, usize::MAX)?;
    let u_elems: Vec<usize> = (t..s).collect();
    let ground_t = KSubset::new(s, &(0..t).collect::<Vec<_>>())?;
    let ground_u = KSubset::new(s, &u_elems)?;

    // admissible images per source vertex
    let per_source: Vec<Vec<u64>> = source
        .subsets()
        .iter()
        .map(|x| {
            let pool: Vec<usize> = match scope {
                PatternScope::Complement => u_elems.clone(),
                PatternScope::OutsideSource => (0..s).filter(|e| x.bits() >> e & 1 == 0).collect(),
            };
            combinations_of(&pool, extra).into_iter().map(|p| x.bits() | p).collect()
        })
        .collect();
    let mut images: Vec<u64> = per_source.iter().flatten().copied().collect();
    images.sort_by_key(|&b| KSubset::from_bits(s, b).unwrap().elements());
    images.dedup();
    let mut image_graph = Graph::new(images.len());
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] & images[b] == 0 {
                image_graph.add_edge(a, b)?;
            }
        }
    }
    let position: HashMap<u64, usize> = images.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let tw = image_graph.words();
    let mut domains = vec![0u64; source.graph.n() * tw];
    for (v, imgs) in per_source.iter().enumerate() {
        for img in imgs {
            bits::set(&mut domains[v * tw..(v + 1) * tw], position[img]);
        }
    }

    let mut search = ListSearch::new(&source.graph, &image_graph, true, budget);
    let outcome = search.run(domains);
    let obstruction = refute_hom_by_odd_girth(&source.graph, &image_graph);
    let (status, patterns) = match outcome {
        ListOutcome::Found(map) => {
            let ps = source
                .subsets()
                .iter()
                .zip(&map)
                .map(|(x, &img)| (*x, KSubset::from_bits(s, images[img] & !x.bits()).unwrap()))
                .collect();
            (EmbeddingStatus::Verified, Some(ps))
        }
        ListOutcome::Exhausted => (EmbeddingStatus::FailedExhaustive, None),
        ListOutcome::OutOfBudget => (EmbeddingStatus::BudgetExceeded, None),
    };
    Ok(EmbeddingAttempt {
        j,
        k,
        scope,
        ground_t,
        ground_u,
        patterns,
        status,
        search_nodes: search.nodes.min(budget),
        obstruction,
    })
}
