//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use crlab::discharging::{audit_charges, init_charges, run_discharging, RuleVariant};
use crlab::generate::gen_constrained;
use crlab::graph6::{parse_graph6, write_graph6};
use crlab::hom::{find_hom_prepared, PreparedTarget, SearchOutcome, DEFAULT_BUDGET};
use crlab::kneser::{
    attempt_embedding, kneser_graph, refute_hom_by_odd_girth, EmbeddingStatus, KneserParams, PatternScope,
    DEFAULT_VERTEX_CAP,
};
use crlab::pipeline::{experiment_csv, experiment_records, run_pipeline, PipelineConfig};
use crlab::reductions::collapse_path;
use crlab::{mad, odd_girth, Graph, OddGirth, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Graph6 round trips checked across all criteria, reported by criterion 9.
#[derive(Default)]
struct RoundTrips {
    checked: usize,
    failed: Vec<String>,
}

impl RoundTrips {
    fn check(&mut self, g: &Graph) {
        self.checked += 1;
        let s = write_graph6(g);
        if parse_graph6(&s).as_ref() != Ok(g) {
            self.failed.push(s);
        }
    }
}

/// Homomorphisms reported anywhere, re-checked by criterion 9.
#[derive(Default)]
struct Reported {
    checked: usize,
    failed: usize,
}

impl Reported {
    fn check(&mut self, oracle: &SubsetOracle, g: &Graph, map: &[usize]) -> bool {
        self.checked += 1;
        let ok = oracle.is_coloring(g, map);
        if !ok {
            self.failed += 1;
        }
        ok
    }
}

/// Subset lists for a target `K(n, k)`, built by the test oracle.
struct SubsetOracle {
    sets: Vec<Vec<usize>>,
}

impl SubsetOracle {
    fn new(n: usize, k: usize) -> SubsetOracle {
        SubsetOracle { sets: subsets(n, k) }
    }

    fn is_coloring(&self, g: &Graph, map: &[usize]) -> bool {
        map.len() == g.n()
            && map.iter().all(|&c| c < self.sets.len())
            && g.edges().all(|(u, v)| disjoint(&self.sets[map[u]], &self.sets[map[v]]))
    }
}

fn timed(limit: Duration, start: Instant, detail: String) -> Outcome {
    let el = start.elapsed();
    if el < limit {
        Ok(format!("{detail}, {:.1}s", el.as_secs_f64()))
    } else {
        Err(format!("{detail}, took {:.1}s over the {}s limit", el.as_secs_f64(), limit.as_secs()))
    }
}

fn mixed_corpus(rt: &mut RoundTrips) -> Vec<Graph> {
    let mut corpus = Vec::new();
    for n in 1..=6 {
        corpus.extend(all_graphs(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let n = rng.gen_range(7..=9);
        let p = rng.gen_range(0.1..0.9);
        corpus.push(random_graph(n, p, &mut rng));
    }
    for g in &corpus {
        rt.check(g);
    }
    corpus
}

fn criterion_1(corpus: &[Graph]) -> Outcome {
    let start = Instant::now();
    for g in corpus {
        let got = mad(g).map_err(|e| e.to_string())?;
        let want = brute_mad(g);
        if got != want {
            return Err(format!("mad {got} vs oracle {want} on {}", write_graph6(g)));
        }
    }
    timed(Duration::from_secs(120), start, format!("{} graphs", corpus.len()))
}

fn criterion_2(corpus: &[Graph]) -> Outcome {
    let start = Instant::now();
    for g in corpus {
        let got = odd_girth(g);
        let want = brute_odd_girth(g);
        if got != want || (got == OddGirth::Infinite) != is_bipartite(g) {
            return Err(format!("odd girth {got} vs oracle {want} on {}", write_graph6(g)));
        }
    }
    timed(Duration::from_secs(60), start, format!("{} graphs", corpus.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for (n, k, v, e, d, og) in [(5, 2, 10, 15, 3, 5), (7, 3, 35, 70, 4, 7), (9, 4, 126, 315, 5, 9)] {
        let kn = kneser_graph(KneserParams::new(n, k).map_err(|e| e.to_string())?, DEFAULT_VERTEX_CAP)
            .map_err(|e| e.to_string())?;
        let g = &kn.graph;
        let sets = subsets(n, k);
        let oracle_edges = (0..sets.len())
            .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| disjoint(&sets[i], &sets[j]))
            .count();
        let regular = (0..g.n()).all(|x| g.degree(x) == d);
        if g.n() != v || g.m() != e || oracle_edges != e || !regular || odd_girth(g) != OddGirth::Finite(og) {
            return Err(format!("K({n},{k}): {} vertices, {} edges, odd girth {}", g.n(), g.m(), odd_girth(g)));
        }
    }
    timed(Duration::from_secs(10), start, "K(5,2), K(7,3), K(9,4)".into())
}

/// Naive search for patterns `P_X ⊆ U`, |P_X| = k+1-j, making `X -> X ∪ P_X`
/// injective and disjointness-preserving.
fn naive_complement_embedding_exists(j: usize, k: usize) -> bool {
    let t = 2 * j + 1;
    let s = 2 * k + 3;
    let sources = subsets(t, j);
    let patterns: Vec<Vec<usize>> =
        subsets(s - t, k + 1 - j).into_iter().map(|p| p.into_iter().map(|e| e + t).collect()).collect();
    fn rec(i: usize, sources: &[Vec<usize>], patterns: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        if i == sources.len() {
            return true;
        }
        for p in 0..patterns.len() {
            let ok = (0..i).all(|x| {
                let image = |a: usize, pa: usize| {
                    let mut v = sources[a].clone();
                    v.extend(&patterns[pa]);
                    v
                };
                let (ix, ii) = (image(x, chosen[x]), image(i, p));
                let injective = {
                    let (mut a, mut b) = (ix.clone(), ii.clone());
                    a.sort_unstable();
                    b.sort_unstable();
                    a != b
                };
                let preserves = !disjoint(&sources[x], &sources[i]) || disjoint(&ix, &ii);
                injective && preserves
            });
            if ok {
                chosen.push(p);
                if rec(i + 1, sources, patterns, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(0, &sources, &patterns, &mut Vec::new())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let k52 = kneser_graph(KneserParams::new(5, 2).unwrap(), DEFAULT_VERTEX_CAP).unwrap().graph;
    let k94 = kneser_graph(KneserParams::new(9, 4).unwrap(), DEFAULT_VERTEX_CAP).unwrap().graph;
    let cert = refute_hom_by_odd_girth(&k52, &k94).ok_or("no obstruction for K(5,2) -> K(9,4)")?;
    if cert.source_odd_girth != 5 || cert.target_odd_girth != OddGirth::Finite(9) || !cert.recheck(&k52, &k94) {
        return Err(format!("certificate {cert:?}"));
    }
    let attempt = attempt_embedding(2, 3, DEFAULT_BUDGET, PatternScope::Complement).map_err(|e| e.to_string())?;
    if attempt.status != EmbeddingStatus::FailedExhaustive {
        return Err(format!("embedding status {:?}", attempt.status));
    }
    if naive_complement_embedding_exists(2, 3) {
        return Err("naive search found a pattern map".into());
    }
    timed(
        Duration::from_secs(60),
        start,
        format!("obstruction (5, 9); embedding (2,3) failed exhaustively after {} nodes", attempt.search_nodes),
    )
}

/// Labeled triangle-free graphs on up to `max_n` vertices with mad < 5/2,
/// grown one vertex at a time. Each new vertex attaches to an independent
/// set; both properties are hereditary, so failing branches are cut.
fn visit_base_graphs(max_n: usize, f: &mut impl FnMut(&[u32])) {
    fn dense(adj: &[u32], v: usize) -> bool {
        // only subsets through the new vertex can newly reach 4e >= 5|S|
        let others = (1u32 << v) - 1;
        let mut sub = others;
        loop {
            let s = sub | 1 << v;
            let size = s.count_ones() as i64;
            let twice_e: i64 = (0..=v).filter(|&x| s >> x & 1 == 1).map(|x| (adj[x] & s).count_ones() as i64).sum();
            // 2e/|S| >= 5/2  <=>  2·(2e) >= 5|S|
            if 2 * twice_e >= 5 * size {
                return true;
            }
            if sub == 0 {
                return false;
            }
            sub = (sub - 1) & others;
        }
    }
    fn rec(adj: &mut Vec<u32>, max_n: usize, f: &mut impl FnMut(&[u32])) {
        f(adj);
        let v = adj.len();
        if v == max_n {
            return;
        }
        for nb in 0u32..1 << v {
            if (0..v).any(|x| nb >> x & 1 == 1 && adj[x] & nb != 0) {
                continue;
            }
            adj.push(nb);
            for (x, row) in adj.iter_mut().enumerate().take(v) {
                if nb >> x & 1 == 1 {
                    *row |= 1 << v;
                }
            }
            if !dense(adj, v) {
                rec(adj, max_n, f);
            }
            for row in adj.iter_mut().take(v) {
                *row &= !(1 << v);
            }
            adj.pop();
        }
    }
    rec(&mut Vec::new(), max_n, f);
}

fn from_masks(adj: &[u32]) -> Graph {
    let mut g = Graph::new(adj.len());
    for (u, &row) in adj.iter().enumerate() {
        for v in u + 1..adj.len() {
            if row >> v & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn criterion_5(rt: &mut RoundTrips, reported: &mut Reported) -> Outcome {
    let start = Instant::now();
    let target = PreparedTarget::new(kneser_graph(KneserParams::new(5, 2).unwrap(), DEFAULT_VERTEX_CAP).unwrap().graph);
    let oracle = SubsetOracle::new(5, 2);
    // the enumeration must agree with a plain filter where that is cheap
    let mut per_size = [0usize; 9];
    visit_base_graphs(6, &mut |adj| per_size[adj.len()] += 1);
    for (n, &have) in per_size.iter().enumerate().take(7).skip(1) {
        let want =
            all_graphs(n).filter(|g| brute_mad(g) < Rational::new(5, 2) && brute_odd_girth(g).is_at_least(5)).count();
        if have != want {
            return Err(format!("enumeration has {have} graphs on {n} vertices, filter has {want}"));
        }
    }
    let mut count = 0usize;
    let mut failures = Vec::new();
    visit_base_graphs(8, &mut |adj| {
        if adj.is_empty() {
            return;
        }
        let g = from_masks(adj);
        count += 1;
        match find_hom_prepared(&g, &target, DEFAULT_BUDGET) {
            SearchOutcome::Found { map, .. } if reported.check(&oracle, &g, &map) => {}
            _ => failures.push(write_graph6(&g)),
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..500 {
        let n = rng.gen_range(1..=14);
        let g = gen_constrained(n, Rational::new(5, 2), 5, 5_000 + i).map_err(|e| e.to_string())?;
        rt.check(&g);
        match find_hom_prepared(&g, &target, DEFAULT_BUDGET) {
            SearchOutcome::Found { map, .. } if reported.check(&oracle, &g, &map) => {}
            _ => failures.push(write_graph6(&g)),
        }
    }
    if !failures.is_empty() {
        return Err(format!("{} failures, first {}", failures.len(), failures[0]));
    }
    timed(Duration::from_secs(600), start, format!("{count} exhaustive + 500 random graphs, all Found"))
}

fn criterion_6(rt: &mut RoundTrips, reported: &mut Reported) -> Outcome {
    let start = Instant::now();
    let target = PreparedTarget::new(kneser_graph(KneserParams::new(7, 3).unwrap(), DEFAULT_VERTEX_CAP).unwrap().graph);
    let oracle = SubsetOracle::new(7, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..100 {
        let n = rng.gen_range(1..=14);
        let g = gen_constrained(n, Rational::new(7, 3), 7, 6_000 + i).map_err(|e| e.to_string())?;
        rt.check(&g);
        if mad(&g).unwrap() >= Rational::new(7, 3) || !brute_odd_girth(&g).is_at_least(7) {
            return Err(format!("generator broke the premises on {}", write_graph6(&g)));
        }
        match find_hom_prepared(&g, &target, DEFAULT_BUDGET) {
            SearchOutcome::Found { map, .. } if reported.check(&oracle, &g, &map) => {}
            other => return Err(format!("{}: {other:?}", write_graph6(&g))),
        }
    }
    timed(Duration::from_secs(600), start, "100 random graphs, all Found".into())
}

fn criterion_7(rt: &mut RoundTrips) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut transfers = 0;
    for i in 0..1000 {
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(1..=14);
        let l = if i % 2 == 0 { 3 * (2 * k + 3) } else { rng.gen_range(2..=5) };
        let g = gen_constrained(n, Rational::new(2 * k as i64 + 1, k as i64), 2 * k + 1, 7_000 + i)
            .map_err(|e| e.to_string())?;
        rt.check(&g);
        let s = run_discharging(&g, k, l, init_charges(&g), &RuleVariant::default()).map_err(|e| e.to_string())?;
        transfers += s.log.len();
        let total: Rational = s.charges.iter().copied().sum();
        if total != Rational::from_int(2 * g.m() as i64) {
            return Err(format!("total {total} != 2|E| on {}", write_graph6(&g)));
        }
    }
    let star = Graph::star(4);
    let s = run_discharging(&star, 2, 21, init_charges(&star), &RuleVariant::default()).map_err(|e| e.to_string())?;
    let audit = audit_charges(&star, &s);
    let leaves_ok = s.charges[1..].iter().all(|&c| c == Rational::new(3, 2));
    if s.charges[0] != Rational::from_int(2) || !leaves_ok || !audit.balanced {
        return Err(format!("K1,4 charges {:?}", s.charges));
    }
    timed(Duration::from_secs(600), start, format!("1000 graphs, {transfers} transfers; K1,4 center 2, leaves 3/2"))
}

fn criterion_8() -> Outcome {
    let c9 = Graph::cycle(9);
    let s3 = collapse_path(&c9, &[0, 1, 2, 3], 3).map_err(|e| e.to_string())?;
    let s4 = collapse_path(&c9, &[0, 1, 2, 3, 4], 3).map_err(|e| e.to_string())?;
    let c7 = s3.after == Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (0, 6)]).unwrap();
    let c6 = s4.after == Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
    let ok3 = c7
        && s3.audit.odd_girth_before == OddGirth::Finite(9)
        && s3.audit.odd_girth_after == OddGirth::Finite(7)
        && s3.audit.claim_violated;
    let ok4 = c6 && s4.audit.odd_girth_after == OddGirth::Infinite && !s4.audit.claim_violated;
    if ok3 && ok4 {
        Ok("length 3 -> C7, odd girth 9 -> 7, violated; length 4 -> C6, holds".into())
    } else {
        Err(format!("length 3 audit {:?}; length 4 audit {:?}", s3.audit, s4.audit))
    }
}

fn criterion_9(rt: &mut RoundTrips, reported: &mut Reported) -> Outcome {
    let start = Instant::now();
    let runs: [(usize, usize, usize, u64); 5] =
        [(10, 8, 2, 1), (1, 1, 2, 3), (5, 12, 3, 7), (100, 14, 2, 9), (50, 14, 3, 11)];
    let mut rows = 0;
    for (count, n, k, seed) in runs {
        let cfg = PipelineConfig::new(k);
        let oracle = SubsetOracle::new(2 * k + 1, k);
        let records = experiment_records(count, n, &cfg, seed).map_err(|e| e.to_string())?;
        for r in &records {
            rt.check(&r.graph);
            rows += 1;
            if let Some(h) = &r.report.final_hom {
                reported.check(&oracle, &r.graph, &h.map);
            }
        }
        let again = experiment_records(count, n, &cfg, seed).map_err(|e| e.to_string())?;
        if experiment_csv(&records, false) != experiment_csv(&again, false) {
            return Err(format!("CSV differs between runs for seed {seed}"));
        }
    }
    let c9_cfg = PipelineConfig { l: 4, ..PipelineConfig::new(3) };
    let report = run_pipeline(&Graph::cycle(9), &c9_cfg).map_err(|e| e.to_string())?;
    match &report.final_hom {
        Some(h) => {
            reported.check(&SubsetOracle::new(7, 3), &Graph::cycle(9), &h.map);
        }
        None => return Err("C9 pipeline found no homomorphism".into()),
    }
    if reported.failed > 0 {
        return Err(format!("{} of {} reported homomorphisms fail the verifier", reported.failed, reported.checked));
    }
    if !rt.failed.is_empty() {
        return Err(format!("{} graph6 round trips failed, first {}", rt.failed.len(), rt.failed[0]));
    }
    timed(
        Duration::from_secs(600),
        start,
        format!("{rows} pipeline rows; {} homomorphisms verified; {} graph6 round trips", reported.checked, rt.checked),
    )
}

fn main() -> ExitCode {
    let mut rt = RoundTrips::default();
    let mut reported = Reported::default();
    let corpus = mixed_corpus(&mut rt);
    let results: Vec<(&str, Outcome)> = vec![
        ("1 mad oracle equivalence", criterion_1(&corpus)),
        ("2 odd-girth oracle equivalence", criterion_2(&corpus)),
        ("3 Kneser structure regression", criterion_3()),
        ("4 embedding audit", criterion_4()),
        ("5 base case k=2", criterion_5(&mut rt, &mut reported)),
        ("6 base case k=3 spot check", criterion_6(&mut rt, &mut reported)),
        ("7 discharging conservation", criterion_7(&mut rt)),
        ("8 collapse parity audit", criterion_8()),
        ("9 end-to-end soundness", criterion_9(&mut rt, &mut reported)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
