//! Class-driven reduction pipeline: reduce to a small base graph, color it by
//! search, lift the coloring back step by step, and fall back to a direct
//! search whenever an audited claim fails.

use std::fmt::Write as _;
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::discharging::{audit_charges, init_charges, run_discharging, RuleVariant};
use crate::error::{Error, Result};
use crate::generate::gen_constrained;
use crate::graph::Graph;
use crate::graph6::write_graph6;
use crate::hom::{find_hom_prepared, verify_hom, Homomorphism, PreparedTarget, SearchOutcome, DEFAULT_BUDGET};
use crate::kneser::{kneser_graph, KneserParams, DEFAULT_VERTEX_CAP};
use crate::params::{classify, mad, odd_girth, ClassLabel, GraphClass, OddGirth};
use crate::rational::Rational;
use crate::reductions::{
    apply_reduction, collapse_path, delete_vertex, detect_kinds, lift_coloring, threads, ConfigKind, LiftOutcome,
    ReductionStep, StepKind,
};

pub const DEFAULT_BASE_SIZE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineConfig {
    pub k: usize,
    pub l: usize,
    pub node_budget: u64,
    pub rule_variant: RuleVariant,
    pub max_reduction_steps: usize,
    pub base_size: usize,
}

impl PipelineConfig {
    /// Level `k` with thread threshold `3(2k+3)` and default limits.
    pub fn new(k: usize) -> PipelineConfig {
        PipelineConfig {
            k,
            l: 3 * (2 * k + 3),
            node_budget: DEFAULT_BUDGET,
            rule_variant: RuleVariant::default(),
            max_reduction_steps: usize::MAX,
            base_size: DEFAULT_BASE_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!("level k = {} must be >= 2", self.k)));
        }
        if self.l < 2 {
            return Err(Error::InvalidArgument(format!("thread threshold L = {} must be >= 2", self.l)));
        }
        Ok(())
    }

    pub fn mad_bound(&self) -> Rational {
        Rational::new(2 * self.k as i64 + 1, self.k as i64)
    }

    pub fn odd_girth_bound(&self) -> usize {
        2 * self.k + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PremiseCheck {
    pub mad: Rational,
    pub mad_bound: Rational,
    pub odd_girth: OddGirth,
    pub odd_girth_bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimViolation {
    /// Index into the report's steps, when the claim belongs to one.
    pub step: Option<usize>,
    pub claim: String,
    pub witness: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum HomSource {
    Lifted,
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DischargeSummary {
    pub rounds: usize,
    pub transfers: usize,
    pub total: Rational,
    pub balanced: bool,
    pub deficits: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineReport {
    pub premise_check: PremiseCheck,
    /// True when the premises fail and nothing else was run.
    pub skipped: bool,
    pub classification: Option<GraphClass>,
    pub steps: Vec<ReductionStep>,
    pub base_outcome: Option<SearchOutcome>,
    pub lifts: Vec<LiftOutcome>,
    pub fallback_outcome: Option<SearchOutcome>,
    pub final_hom: Option<Homomorphism>,
    pub hom_source: Option<HomSource>,
    pub discharging: Option<DischargeSummary>,
    pub claim_violations: Vec<ClaimViolation>,
}

impl PipelineReport {
    /// Search nodes spent on the base and the fallback together.
    pub fn nodes(&self) -> u64 {
        self.base_outcome.iter().chain(&self.fallback_outcome).map(SearchOutcome::nodes).sum()
    }
}

pub fn run_pipeline(g: &Graph, cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let mad_value = mad(g)?;
    let og = odd_girth(g);
    let premise_check = PremiseCheck {
        mad: mad_value,
        mad_bound: cfg.mad_bound(),
        odd_girth: og,
        odd_girth_bound: cfg.odd_girth_bound(),
        holds: mad_value < cfg.mad_bound() && og.is_at_least(cfg.odd_girth_bound()),
    };
    let mut report = PipelineReport {
        premise_check,
        skipped: true,
        classification: None,
        steps: Vec::new(),
        base_outcome: None,
        lifts: Vec::new(),
        fallback_outcome: None,
        final_hom: None,
        hom_source: None,
        discharging: None,
        claim_violations: Vec::new(),
    };
    if !report.premise_check.holds {
        return Ok(report);
    }
    report.skipped = false;
    report.classification = Some(classify(g, cfg.l));

    let kn = kneser_graph(KneserParams::conjecture_target(cfg.k)?, DEFAULT_VERTEX_CAP)?;
    let target = PreparedTarget::new(kn.graph.clone());

    report.steps = reduce(g, cfg)?;
    for (i, step) in report.steps.iter().enumerate() {
        let a = &step.audit;
        let mut failed = Vec::new();
        if !a.mad_non_increasing {
            failed.push("madNonIncreasing");
        }
        if !a.odd_girth_non_decreasing {
            failed.push("oddGirthNonDecreasing");
        }
        if (step.kind == StepKind::PathCollapse || step.kind == StepKind::F4) && !a.odd_girth_at_least_2k_plus_3 {
            failed.push("oddGirthAtLeastPremise");
        }
        for claim in failed {
            report.claim_violations.push(ClaimViolation {
                step: Some(i),
                claim: claim.into(),
                witness: serde_json::to_value(a).expect("audit serializes"),
            });
        }
    }

    let base = report.steps.last().map_or(g, |s| &s.after);
    let base_outcome = find_hom_prepared(base, &target, cfg.node_budget);
    debug!("base on {} vertices: {:?}", base.n(), base_outcome);
    let mut lifted = base_outcome.hom();
    if matches!(base_outcome, SearchOutcome::NoneExhaustive { .. } | SearchOutcome::Refuted { .. }) {
        report.claim_violations.push(ClaimViolation {
            step: None,
            claim: "baseColorable".into(),
            witness: json!({ "graph6": write_graph6(base), "outcome": base_outcome }),
        });
    }
    report.base_outcome = Some(base_outcome);
    for (i, step) in report.steps.iter().enumerate().rev() {
        let Some(h) = lifted.take() else { break };
        let out = lift_coloring(step, &h, &kn)?;
        lifted = out.hom();
        if let LiftOutcome::LiftFailed { reason } = &out {
            report.claim_violations.push(ClaimViolation {
                step: Some(i),
                claim: "liftSucceeds".into(),
                witness: json!({ "reason": reason }),
            });
        }
        report.lifts.push(out);
    }

    match lifted {
        Some(h) => {
            assert!(verify_hom(g, &kn.graph, &h)?.is_empty(), "lifted coloring fails on the input");
            report.final_hom = Some(h);
            report.hom_source = Some(HomSource::Lifted);
        }
        None => {
            let fallback = find_hom_prepared(g, &target, cfg.node_budget);
            if let Some(h) = fallback.hom() {
                assert!(verify_hom(g, &kn.graph, &h)?.is_empty(), "fallback coloring fails on the input");
                report.final_hom = Some(h);
                report.hom_source = Some(HomSource::Fallback);
            }
            report.fallback_outcome = Some(fallback);
        }
    }

    match run_discharging(g, cfg.k, cfg.l, init_charges(g), &cfg.rule_variant) {
        Ok(state) => {
            let audit = audit_charges(g, &state);
            if !audit.balanced {
                report.claim_violations.push(ClaimViolation {
                    step: None,
                    claim: "chargeConserved".into(),
                    witness: json!({ "total": audit.total, "expected": audit.expected }),
                });
            }
            report.discharging = Some(DischargeSummary {
                rounds: state.rounds(),
                transfers: state.log.len(),
                total: audit.total,
                balanced: audit.balanced,
                deficits: audit.deficits,
            });
        }
        Err(Error::NonTermination { cap }) => report.claim_violations.push(ClaimViolation {
            step: None,
            claim: "dischargingTerminates".into(),
            witness: json!({ "cap": cap }),
        }),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Reduction steps per class until the graph has at most `base_size`
/// vertices, no reduction applies, or the step limit is reached.
fn reduce(g: &Graph, cfg: &PipelineConfig) -> Result<Vec<ReductionStep>> {
    // reductions audit collapses against 2k+3 in their own index, which is
    // the premise 2(k-1)+3 = 2k+1 at this level
    let kr = cfg.k - 1;
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut cur = g.clone();
    while cur.n() > cfg.base_size && steps.len() < cfg.max_reduction_steps {
        let class = classify(&cur, cfg.l);
        let mut round = Vec::new();
        match class.label {
            ClassLabel::A => {
                let found = detect_kinds(&cur, kr, cfg.l, &[ConfigKind::F1, ConfigKind::F4]);
                if let Some(m) = found.first() {
                    round.push(apply_reduction(&cur, m, kr)?);
                }
            }
            ClassLabel::B => round.push(delete_vertex(&cur, max_degree_vertex(&cur), kr)?),
            ClassLabel::C => round.push(collapse_long_path(&cur, &class, cfg, kr)?),
            ClassLabel::D => {
                let first = collapse_long_path(&cur, &class, cfg, kr)?;
                let after = first.after.clone();
                round.push(first);
                if after.max_degree() >= 4 && steps.len() + 1 < cfg.max_reduction_steps {
                    round.push(delete_vertex(&after, max_degree_vertex(&after), kr)?);
                }
            }
        }
        let Some(last) = round.last() else { break };
        cur = last.after.clone();
        steps.extend(round);
    }
    Ok(steps)
}

/// Smallest label among vertices of maximum degree.
fn max_degree_vertex(g: &Graph) -> usize {
    let d = g.max_degree();
    (0..g.n()).find(|&v| g.degree(v) == d).expect("nonempty graph")
}

/// Collapses an F4 thread if one exists, otherwise the class witness path.
fn collapse_long_path(g: &Graph, class: &GraphClass, cfg: &PipelineConfig, kr: usize) -> Result<ReductionStep> {
    let ms = detect_kinds(g, kr, cfg.l, &[ConfigKind::F4]);
    if let Some(m) = ms.first() {
        return apply_reduction(g, m, kr);
    }
    let path = threads(g, cfg.l + 1).into_iter().next().or_else(|| class.long_thread_witness.clone());
    collapse_path(g, &path.expect("class C/D has a long induced path"), kr)
}

#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub graph: Graph,
    pub report: PipelineReport,
    pub millis: u128,
}

/// Worker count from `CRLAB_THREADS`, default 1.
pub fn worker_count() -> usize {
    std::env::var("CRLAB_THREADS").ok().and_then(|s| s.trim().parse().ok()).filter(|&n| n >= 1).unwrap_or(1)
}

/// Generates `count` graphs under the level-`cfg.k` premises (seeds
/// `seed, seed+1, ..`) and runs the pipeline on each. Records are in
/// generation order whatever the worker count.
pub fn experiment_records(count: usize, n: usize, cfg: &PipelineConfig, seed: u64) -> Result<Vec<ExperimentRecord>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let graph = gen_constrained(n, cfg.mad_bound(), cfg.odd_girth_bound(), seed.wrapping_add(i as u64))?;
                let start = Instant::now();
                let report = run_pipeline(&graph, cfg)?;
                let millis = start.elapsed().as_millis();
                info!("row {i}: {} found={}", write_graph6(&graph), report.final_hom.is_some());
                Ok(ExperimentRecord { graph, report, millis })
            })
            .collect()
    })
}

pub const EXPERIMENT_HEADER: &str = "graph6,mad,oddGirth,class,steps,homFound,claimViolations,nodes,millis";

/// CSV summary, one row per record. With `timing` off the millis column is 0
/// so the output is byte-reproducible.
pub fn experiment_csv(records: &[ExperimentRecord], timing: bool) -> String {
    let mut out = format!("{EXPERIMENT_HEADER}\n");
    for r in records {
        let class = r.report.classification.as_ref().map_or("-".to_string(), |c| c.label.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            write_graph6(&r.graph),
            r.report.premise_check.mad,
            r.report.premise_check.odd_girth,
            class,
            r.report.steps.len(),
            r.report.final_hom.is_some(),
            r.report.claim_violations.len(),
            r.report.nodes(),
            if timing { r.millis } else { 0 },
        )
        .expect("write to string");
    }
    out
}

pub fn run_experiment(count: usize, n: usize, cfg: &PipelineConfig, seed: u64, timing: bool) -> Result<String> {
    Ok(experiment_csv(&experiment_records(count, n, cfg, seed)?, timing))
}
