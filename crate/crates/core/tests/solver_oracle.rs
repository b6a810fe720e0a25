use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wordrep::orientation::{brute_force_semitransitive, is_semitransitive, Arc, EdgeState};
use wordrep::solver::{solve, Propagator, ResumeOrder, SolverConfig, SourceRule, Verdict};
use wordrep::trace::verify_trace;
use wordrep::{LabeledGraph, OracleVerdict, Orientation, PartialOrientation, VertexId};

fn graph_from_mask(n: usize, mask: u64) -> LabeledGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    LabeledGraph::numbered(n, &edges).unwrap()
}

fn oracle(g: &LabeledGraph) -> bool {
    matches!(
        brute_force_semitransitive(g, u64::MAX).unwrap(),
        OracleVerdict::Exists(_)
    )
}

fn check_verdict(g: &LabeledGraph, cfg: &SolverConfig, expected: bool) {
    match solve(g, cfg).unwrap() {
        Verdict::SemiTransitive(o) => {
            assert!(expected, "solver found an orientation the oracle rules out");
            assert!(is_semitransitive(&o));
        }
        Verdict::NonSemiTransitive(t) => {
            assert!(
                !expected,
                "solver refuted a semi-transitive graph: {:?}",
                g.edges()
            );
            if let Some(t) = t {
                assert!(verify_trace(g, &t).verdict);
            }
        }
        Verdict::BudgetExceeded { .. } => panic!("budget exceeded on a small graph"),
    }
}

#[test]
fn every_config_agrees_with_oracle_up_to_five_vertices() {
    for n in 1..=5 {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let g = graph_from_mask(n, mask);
            let expected = oracle(&g);
            for wlog in [true, false] {
                for resume in [ResumeOrder::Newest, ResumeOrder::Oldest] {
                    let cfg = SolverConfig {
                        wlog,
                        resume,
                        ..SolverConfig::default()
                    };
                    check_verdict(&g, &cfg, expected);
                }
                let cfg = SolverConfig {
                    wlog,
                    source: SourceRule::None,
                    ..SolverConfig::default()
                };
                check_verdict(&g, &cfg, expected);
            }
        }
    }
}

#[test]
fn every_source_choice_agrees_on_five_vertices() {
    for mask in (0..1u64 << 10).step_by(3) {
        let g = graph_from_mask(5, mask);
        let expected = oracle(&g);
        for v in g.vertices() {
            let cfg = SolverConfig {
                source: SourceRule::Vertex(g.label(v).to_owned()),
                trace: false,
                ..SolverConfig::default()
            };
            check_verdict(&g, &cfg, expected);
        }
    }
}

/// Every semi-transitive orientation of the subgraph induced on `vs` that
/// agrees with `po` on the edges it has set.
fn local_completions(po: &PartialOrientation<'_>, vs: &[VertexId]) -> Vec<Vec<Arc>> {
    let g = po.graph();
    let mut keep = vs.to_vec();
    keep.sort();
    keep.dedup();
    let h = g.induced_subgraph(&keep).unwrap();
    let lift = |x: VertexId| g.vertex(h.label(x)).unwrap();
    let m = h.edge_count();
    let mut out = Vec::new();
    for bits in 0..1u64 << m {
        let o = Orientation::from_fn(&h, |e| bits >> e & 1 == 0);
        let arcs: Vec<Arc> = o
            .arcs()
            .map(|a| Arc::new(lift(a.tail), lift(a.head)))
            .collect();
        let agrees = arcs.iter().all(|a| {
            let e = g.edge_index(a.tail, a.head).unwrap();
            po.state(e) == EdgeState::Unset || po.arc_of(e) == Some(*a)
        });
        if agrees && is_semitransitive(&o) {
            out.push(arcs);
        }
    }
    out
}

/// Replays every forced step and checks it against all local completions.
fn assert_forcing_sound(g: &LabeledGraph, seed: u64, presets: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut po = PartialOrientation::new(g);
    for _ in 0..presets {
        if g.edge_count() == 0 {
            break;
        }
        let (u, v) = g.edge(rng.gen_range(0..g.edge_count()));
        let arc = if rng.gen() {
            Arc::new(u, v)
        } else {
            Arc::new(v, u)
        };
        let _ = po.set(arc);
    }
    let prop = Propagator::new(g, 6);
    let mut run = po.clone();
    let result = prop.propagate(&mut run);
    let mut state = po;
    for f in result.forced() {
        for arcs in local_completions(&state, &f.justification.cycle) {
            for a in &f.arcs {
                assert!(
                    arcs.contains(a),
                    "{:?} forced by {:?} fails in a completion of {:?}",
                    a,
                    f.justification,
                    g.edges()
                );
            }
        }
        for a in &f.arcs {
            state.set(*a).unwrap();
        }
    }
    result.forced().len()
}

#[test]
fn forcing_sound_on_wheels_and_debruijn() {
    let graphs = [
        LabeledGraph::wheel(5).unwrap(),
        LabeledGraph::wheel(6).unwrap(),
        wordrep::SimplifiedDeBruijnGraph::new(2, 3)
            .unwrap()
            .graph()
            .clone(),
    ];
    for g in &graphs {
        let steps: usize = (0..40)
            .map(|seed| assert_forcing_sound(g, seed, 1 + seed as usize % 4))
            .sum();
        assert!(steps > 40);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_matches_oracle(n in 4usize..=6, mask in any::<u64>()) {
        let g = graph_from_mask(n, mask & ((1 << (n * (n - 1) / 2)) - 1));
        let expected = oracle(&g);
        check_verdict(&g, &SolverConfig::default(), expected);
        check_verdict(&g, &SolverConfig { wlog: false, ..SolverConfig::default() }, expected);
    }

    #[test]
    fn forcing_sound_on_random_graphs(n in 5usize..=7, mask in any::<u64>(), seed in any::<u64>(), presets in 0usize..5) {
        let g = graph_from_mask(n, mask & ((1 << (n * (n - 1) / 2)) - 1));
        assert_forcing_sound(&g, seed, presets);
    }

    #[test]
    fn relabeling_preserves_verdict(n in 4usize..=6, mask in any::<u64>(), seed in any::<u64>()) {
        let g = graph_from_mask(n, mask & ((1 << (n * (n - 1) / 2)) - 1));
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabeled(&perm).unwrap();
        let cfg = SolverConfig { trace: false, ..SolverConfig::default() };
        prop_assert_eq!(
            solve(&g, &cfg).unwrap().is_semitransitive(),
            solve(&h, &cfg).unwrap().is_semitransitive()
        );
    }
}
