use hamdecomp::harness::{
    generate, verify_decomposition, verify_decomposition_undirected, verify_one_factorisation, AnyGraph, Family,
    GeneratorSpec,
};
use hamdecomp::pipeline::{
    decompose_min_degree_digraph, decompose_min_degree_graph, decompose_multidigraph, decompose_multigraph,
    one_factorise, random_split, split_balance_check, Fallback, Outcome, PipelineConfig,
};
use hamdecomp::{DigraphBuilder, Error, MultiDigraph, Multigraph};
use proptest::prelude::*;

fn directed(spec: GeneratorSpec) -> MultiDigraph {
    match generate(&spec).unwrap() {
        AnyGraph::Directed(d) => d,
        AnyGraph::Undirected(_) => unreachable!(),
    }
}

fn undirected(spec: GeneratorSpec) -> Multigraph {
    match generate(&spec).unwrap() {
        AnyGraph::Undirected(g) => g,
        AnyGraph::Directed(_) => unreachable!(),
    }
}

// Every directed Hamilton cycle through vertex 0 as an arc bitmask, then a
// plain exact-cover search over arcs. Simple digraphs on at most 8 vertices.
fn exact_cover_exists(d: &MultiDigraph) -> bool {
    let n = d.n();
    let arc = |u: usize, v: usize| 1u64 << (u * n + v);
    let mut cycles = Vec::new();
    let mut perm: Vec<usize> = (1..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let order: Vec<usize> = std::iter::once(0).chain(p.iter().copied()).collect();
        if (0..n).all(|i| d.has_edge(order[i], order[(i + 1) % n])) {
            cycles.push((0..n).fold(0u64, |m, i| m | arc(order[i], order[(i + 1) % n])));
        }
    });
    let all = d.pairs().fold(0u64, |m, (u, v, _)| m | arc(u, v));
    fn cover(left: u64, cycles: &[u64]) -> bool {
        if left == 0 {
            return true;
        }
        let low = left & left.wrapping_neg();
        cycles.iter().any(|&c| c & low != 0 && c & !left == 0 && cover(left & !c, cycles))
    }
    cover(all, &cycles)
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[test]
fn doubled_complete_digraph_on_five() {
    let d = MultiDigraph::complete(5, 2);
    let run = decompose_multidigraph(&d, &PipelineConfig::default().with_r(2)).unwrap();
    assert!(run.report.outcome.is_success());
    let dec = run.decomposition.unwrap();
    assert_eq!(dec.len(), 8);
    let used: usize = dec.cycles.iter().map(|c| c.vertices.len()).sum();
    assert_eq!(used, 40);
    assert!(verify_decomposition(&d, &dec.vertex_lists()).accepted);
}

#[test]
fn undirected_complete_families() {
    let cfg = PipelineConfig::default();
    let k5 = Multigraph::complete(5, 1);
    let dec = decompose_multigraph(&k5, &cfg).unwrap().decomposition.unwrap();
    assert_eq!(dec.len(), 2);
    assert!(verify_decomposition_undirected(&k5, &dec.vertex_lists()).accepted);

    let l5 = Multigraph::complete(5, 2);
    let dec = decompose_multigraph(&l5, &cfg.clone().with_r(2)).unwrap().decomposition.unwrap();
    assert_eq!(dec.len(), 4);
    assert!(verify_decomposition_undirected(&l5, &dec.vertex_lists()).accepted);
}

#[test]
fn min_degree_digraph_cases() {
    let cfg = PipelineConfig::default();
    // the complete digraph on six vertices meets the degree bound but has no
    // Hamilton decomposition at all
    let k6 = MultiDigraph::complete(6, 1);
    let run = decompose_min_degree_digraph(&k6, 0.3, &cfg).unwrap();
    assert_eq!(run.report.outcome, Outcome::ProvenNonexistent);
    assert!(run.decomposition.is_none());
    assert!(!exact_cover_exists(&k6));
    let k7 = MultiDigraph::complete(7, 1);
    let dec = decompose_min_degree_digraph(&k7, 0.3, &cfg).unwrap().decomposition.unwrap();
    assert_eq!(dec.len(), 6);
    assert!(verify_decomposition(&k7, &dec.vertex_lists()).accepted);

    let k6x2 = MultiDigraph::complete(6, 2);
    let run = decompose_min_degree_digraph(&k6x2, 0.1, &cfg.clone().with_r(2)).unwrap();
    let dec = run.decomposition.unwrap();
    assert_eq!(dec.len(), 10);
    assert!(verify_decomposition(&k6x2, &dec.vertex_lists()).accepted);

    let c10 = MultiDigraph::cycle(10);
    assert!(matches!(
        decompose_min_degree_digraph(&c10, 0.1, &cfg),
        Err(Error::DegreeTooLow { .. })
    ));
}

#[test]
fn min_degree_graph_cases() {
    let cfg = PipelineConfig::default();
    let k5 = Multigraph::complete(5, 1);
    assert_eq!(decompose_min_degree_graph(&k5, 0.2, &cfg).unwrap().decomposition.unwrap().len(), 2);
    let l5 = Multigraph::complete(5, 2);
    let run = decompose_min_degree_graph(&l5, 0.2, &cfg.clone().with_r(2)).unwrap();
    assert_eq!(run.decomposition.unwrap().len(), 4);
    let k6 = Multigraph::complete(6, 1);
    assert!(decompose_min_degree_graph(&k6, 0.1, &cfg).is_err());
}

#[test]
fn one_factorisation_examples() {
    let cfg = PipelineConfig::default();
    for (g, count, size) in [
        (Multigraph::complete(4, 1), 3, 2),
        (Multigraph::complete(6, 1), 5, 3),
        (Multigraph::cycle(6), 2, 3),
    ] {
        let f = one_factorise(&g, None, &cfg).unwrap();
        let m = f.matchings.unwrap();
        assert_eq!(m.len(), count);
        assert!(m.iter().all(|c| c.len() == size));
        assert!(verify_one_factorisation(&g, &m).accepted);
    }
    assert!(one_factorise(&Multigraph::complete(5, 1), None, &cfg).is_err());
}

#[test]
fn split_then_union_is_identity() {
    let d = directed(GeneratorSpec::new(Family::RandomRegularMultidigraph, 12).degree(9).cap(3).seed(4));
    for seed in 0..100 {
        let parts = random_split(&d, 3, seed).unwrap();
        assert!(parts.iter().all(MultiDigraph::is_simple));
        let mut b = DigraphBuilder::new(d.n());
        for p in &parts {
            for (u, v, m) in p.pairs() {
                b.add_copies(u, v, m).unwrap();
            }
        }
        assert_eq!(b.build(), d);
    }
}

#[test]
fn balance_gate_pass_rates() {
    let d = directed(GeneratorSpec::new(Family::RandomRegularMultidigraph, 20).degree(12).cap(2).seed(7));
    let rate = |xi: f64| {
        (0..100)
            .filter(|&seed| split_balance_check(&random_split(&d, 2, seed).unwrap(), 12, 2, xi).passed)
            .count()
    };
    // at xi = 0.3 the window is 5..=7, narrower than the spread of 40 vertex
    // degrees, so almost every split is rejected
    assert!(rate(0.3) < 20);
    assert!(rate(0.5) > 50, "balance gate passed on {}/100 seeds", rate(0.5));
}

#[test]
fn reports_are_replayable_from_json() {
    let d = MultiDigraph::complete(6, 2);
    let cfg = PipelineConfig::default().with_r(2).with_seed(5);
    let run = decompose_multidigraph(&d, &cfg).unwrap();
    let json = serde_json::to_string(&run.report).unwrap();
    let back: hamdecomp::pipeline::PipelineReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, run.report);
    let again = decompose_multidigraph(&d, &back.config).unwrap();
    assert_eq!(again.decomposition, run.decomposition);
}

#[test]
fn no_fallback_never_emits_unverified_output() {
    let cfg = PipelineConfig::default().with_r(2).with_fallback(Fallback::None);
    for seed in 0..6 {
        let d = directed(GeneratorSpec::new(Family::RandomRegularMultidigraph, 8).degree(9).cap(2).seed(seed));
        let run = decompose_multidigraph(&d, &cfg.clone().with_seed(seed)).unwrap();
        match run.report.outcome {
            Outcome::Decomposed => {
                let dec = run.decomposition.unwrap();
                assert!(verify_decomposition(&d, &dec.vertex_lists()).accepted);
            }
            Outcome::Failed => assert!(run.decomposition.is_none()),
            other => panic!("unexpected outcome {other:?} without fallback"),
        }
    }
}

#[test]
fn stage_graphs_are_captured_on_request() {
    let d = MultiDigraph::complete(5, 2);
    let mut cfg = PipelineConfig::default().with_r(2);
    cfg.capture_stages = true;
    let run = decompose_multidigraph(&d, &cfg).unwrap();
    assert!(!run.stages.is_empty());
    assert!(run.stages.iter().any(|(name, _)| name.contains("part1")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn returned_decompositions_always_verify(n in 5usize..10, extra in 0usize..3, r in 1u32..3, seed in 0u64..1000) {
        let s = ((r as usize * n).div_ceil(2) + extra).min(r as usize * (n - 1));
        let spec = GeneratorSpec::new(Family::RandomRegularMultidigraph, n).degree(s).cap(r).seed(seed);
        let d = directed(spec);
        let run = decompose_multidigraph(&d, &PipelineConfig::default().with_r(r).with_seed(seed)).unwrap();
        prop_assert_eq!(run.report.verified, run.decomposition.is_some());
        if let Some(dec) = run.decomposition {
            prop_assert_eq!(dec.len(), s);
            prop_assert!(verify_decomposition(&d, &dec.vertex_lists()).accepted);
        } else {
            prop_assert!(matches!(run.report.outcome, Outcome::ProvenNonexistent | Outcome::Indeterminate));
        }
    }

    #[test]
    fn undirected_decompositions_always_verify(n in 5usize..10, half in 1usize..4, seed in 0u64..1000) {
        let s = (2 * half).min(n - 1 - (n - 1) % 2).max(2);
        let g = undirected(GeneratorSpec::new(Family::RandomRegularMultigraph, n).degree(s).seed(seed));
        let run = decompose_multigraph(&g, &PipelineConfig::default().with_seed(seed)).unwrap();
        if let Some(dec) = run.decomposition {
            prop_assert_eq!(dec.len(), s / 2);
            prop_assert!(verify_decomposition_undirected(&g, &dec.vertex_lists()).accepted);
        } else {
            prop_assert!(!run.report.outcome.is_success());
        }
    }
}
