use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rand::Rng;

use covgraph::covering::{is_covering, Covering, Endpoint};
use covgraph::fixtures;
use covgraph::freegroup::{CosetSpace, FreeGroup, FreeWord, Group, GroupElement, Index, Letter, SubgroupGraph};
use covgraph::fundamental::FundamentalGroup;
use covgraph::graph::{concat, concat_reduce, inverse_walk, reduce_walk, Direction, Graph, Step, Walk};
use covgraph::io::{self, GraphDoc, LabellingDoc};
use covgraph::random::{self, Bounds, Rng64};
use covgraph::reconstruct::{random_covering, reconstruct, relabelling_is_stable};
use covgraph::skewprod::{coboundary_isomorphism, cohomologous, relative_skew_product, tree_change};

const SMALL: Bounds = Bounds { max_vertices: 6, max_edges: 10, max_index: 6 };

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| FreeWord::from_letters(ls.into_iter().map(|(g, i)| Letter::new(g, i))))
}

fn raw_letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..=max_len)
}

/// A random walk of at most `len` steps starting at `from`.
fn walk_from(rng: &mut Rng64, g: &Graph, from: usize, len: usize) -> Walk {
    let mut at = from;
    let mut steps = Vec::new();
    for _ in 0..len {
        let incident = g.incident_edges(at);
        if incident.is_empty() {
            break;
        }
        let e = incident[rng.gen_range(0..incident.len())];
        let step = if g.source(e) == at && (g.range(e) != at || rng.gen_bool(0.5)) {
            Step::forward(e)
        } else {
            Step::reverse(e)
        };
        at = g.step_range(step);
        steps.push(step);
    }
    Walk::new(g, from, steps).unwrap()
}

/// A reduced loop at `root`: a random walk closed up through the tree.
fn loop_at(rng: &mut Rng64, g: &Graph, pi1: &FundamentalGroup, len: usize) -> Walk {
    let w = walk_from(rng, g, pi1.root(), len);
    let back = pi1.tree().tree_walk(g, w.range(g), pi1.root()).unwrap();
    concat_reduce(g, &w, &back).unwrap()
}

fn brute_normal_forms(steps: &[Step], memo: &mut HashMap<Vec<Step>, BTreeSet<Vec<Step>>>) -> BTreeSet<Vec<Step>> {
    if let Some(f) = memo.get(steps) {
        return f.clone();
    }
    let mut out = BTreeSet::new();
    for i in 0..steps.len().saturating_sub(1) {
        if steps[i].edge == steps[i + 1].edge && steps[i].dir != steps[i + 1].dir {
            let mut t = steps.to_vec();
            t.drain(i..i + 2);
            out.extend(brute_normal_forms(&t, memo));
        }
    }
    if out.is_empty() {
        out.insert(steps.to_vec());
    }
    memo.insert(steps.to_vec(), out.clone());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_idempotent_and_keeps_endpoints(seed in any::<u64>(), len in 0usize..=16) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, SMALL);
        let w = random::walk(&mut rng, &g, len);
        let r = reduce_walk(&w);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(reduce_walk(&r), r.clone());
        prop_assert_eq!(r.source(), w.source());
        prop_assert_eq!(r.range(&g), w.range(&g));
    }

    #[test]
    fn reduction_matches_every_deletion_order(seed in any::<u64>(), which in 0usize..4) {
        let mut rng = random::rng(seed);
        let g = [fixtures::l1(), fixtures::b2(), fixtures::cycle(3), fixtures::d2()][which].clone();
        let w = random::walk(&mut rng, &g, 12);
        let forms = brute_normal_forms(w.steps(), &mut HashMap::new());
        prop_assert_eq!(forms.len(), 1);
        prop_assert!(forms.contains(reduce_walk(&w).steps()));
    }

    #[test]
    fn reduced_loops_form_a_group(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, SMALL);
        let pi1 = FundamentalGroup::at(&g, rng.gen_range(0..g.vertex_count())).unwrap();
        let (a, b, c) = (loop_at(&mut rng, &g, &pi1, 8), loop_at(&mut rng, &g, &pi1, 8), loop_at(&mut rng, &g, &pi1, 8));
        let ab_c = concat_reduce(&g, &concat_reduce(&g, &a, &b).unwrap(), &c).unwrap();
        let a_bc = concat_reduce(&g, &a, &concat_reduce(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let e = Walk::empty(pi1.root());
        prop_assert_eq!(concat_reduce(&g, &e, &a).unwrap(), a.clone());
        prop_assert_eq!(concat_reduce(&g, &a, &e).unwrap(), a.clone());
        prop_assert_eq!(concat_reduce(&g, &a, &inverse_walk(&g, &a)).unwrap(), e);
    }

    #[test]
    fn free_words_obey_group_laws(a in word_strategy(3, 8), b in word_strategy(3, 8), c in word_strategy(3, 8)) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        prop_assert_eq!(a.multiply(&FreeWord::identity()), a.clone());
        prop_assert!(a.multiply(&a.inverse()).is_identity());
        prop_assert_eq!(a.multiply(&b).inverse(), b.inverse().multiply(&a.inverse()));
    }

    #[test]
    fn word_construction_reduces(letters in raw_letters(2, 12)) {
        let w = FreeWord::from_letters(letters.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inv()));
        let forms = covgraph::oracle::word_normal_forms(&letters);
        prop_assert_eq!(forms.len(), 1);
        prop_assert!(forms.contains(w.letters()));
    }

    #[test]
    fn folding_ignores_generator_order(gens in prop::collection::vec(word_strategy(2, 4), 1..=3), probes in prop::collection::vec(word_strategy(2, 6), 20)) {
        let f = FreeGroup::new(["x", "y"]).unwrap();
        let forward = SubgroupGraph::from_generators(&f, &gens).unwrap();
        let mut reversed = gens.clone();
        reversed.reverse();
        let backward = SubgroupGraph::from_generators(&f, &reversed).unwrap();
        prop_assert_eq!(forward.state_count(), backward.state_count());
        prop_assert_eq!(forward.index(), backward.index());
        for p in &probes {
            prop_assert_eq!(forward.contains(p).unwrap(), backward.contains(p).unwrap());
        }
        for g in &gens {
            prop_assert!(forward.contains(g).unwrap());
        }
    }

    #[test]
    fn members_fix_the_identity_coset(seed in any::<u64>(), probes in prop::collection::vec(word_strategy(2, 8), 30)) {
        let f = FreeGroup::new(["x", "y"]).unwrap();
        let h = random::finite_index_subgroup(&mut random::rng(seed), &f, 8).unwrap();
        let q = CosetSpace::from_subgroup_graph(&h).unwrap();
        prop_assert_eq!(h.index(), Index::Finite(q.len()));
        for p in &probes {
            let moved = q.act(&GroupElement::Word(p.clone()), q.identity()).unwrap();
            prop_assert_eq!(moved == q.identity(), h.contains(p).unwrap());
        }
    }

    #[test]
    fn coset_action_is_an_action(seed in any::<u64>(), a in word_strategy(2, 6), b in word_strategy(2, 6)) {
        let f = FreeGroup::new(["x", "y"]).unwrap();
        let h = random::finite_index_subgroup(&mut random::rng(seed), &f, 8).unwrap();
        let q = CosetSpace::from_subgroup_graph(&h).unwrap();
        let ab = GroupElement::Word(a.multiply(&b));
        for x in 0..q.len() {
            let stepwise = q.act(&GroupElement::Word(a.clone()), q.act(&GroupElement::Word(b.clone()), x).unwrap()).unwrap();
            prop_assert_eq!(q.act(&ab, x).unwrap(), stepwise);
        }
    }

    #[test]
    fn loops_and_words_are_inverse(seed in any::<u64>(), len in 0usize..=8) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, SMALL);
        let pi1 = FundamentalGroup::at(&g, rng.gen_range(0..g.vertex_count())).unwrap();
        let w = random::word(&mut rng, pi1.free_group(), len);
        let lp = pi1.loop_of_word(&g, &w).unwrap();
        prop_assert!(lp.is_reduced());
        prop_assert_eq!(pi1.walk_to_word(&lp), w);
        let a = loop_at(&mut rng, &g, &pi1, 16);
        prop_assert_eq!(pi1.loop_of_word(&g, &pi1.walk_to_word(&a)).unwrap(), a);
    }

    #[test]
    fn walk_to_word_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, SMALL);
        let pi1 = FundamentalGroup::at(&g, rng.gen_range(0..g.vertex_count())).unwrap();
        let a = random::walk(&mut rng, &g, 10);
        let b = walk_from(&mut rng, &g, a.range(&g), 10);
        let ab = concat(&g, &a, &b).unwrap();
        prop_assert_eq!(pi1.walk_to_word(&ab), pi1.walk_to_word(&a).multiply(&pi1.walk_to_word(&b)));
        prop_assert_eq!(pi1.walk_to_word(&reduce_walk(&ab)), pi1.walk_to_word(&ab));
    }

    #[test]
    fn canonical_values_read_the_edge_loops(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, Bounds::default());
        let pi1 = FundamentalGroup::at(&g, rng.gen_range(0..g.vertex_count())).unwrap();
        let c = pi1.canonical_labelling(&g);
        for e in 0..g.edge_count() {
            prop_assert_eq!(c.value(e), &GroupElement::Word(pi1.walk_to_word(&pi1.edge_loop(&g, e))));
            prop_assert_eq!(pi1.tree().contains(e), pi1.walk_to_word(&pi1.edge_loop(&g, e)).is_identity());
        }
    }
}

fn covering(seed: u64) -> (Covering, usize) {
    random_covering(seed, Bounds { max_vertices: 6, max_edges: 10, max_index: 6 }).unwrap()
}

/// Number of lifts of `a` at `anchor` found by trying every matching edge.
fn count_lifts(p: &Covering, steps: &[Step], at: usize) -> usize {
    let Some((&first, rest)) = steps.split_first() else { return 1 };
    let (f, m) = (p.domain(), p.morphism());
    (0..f.edge_count())
        .filter(|&x| m.edge(x) == first.edge)
        .filter_map(|x| match first.dir {
            Direction::Forward if f.source(x) == at => Some(f.range(x)),
            Direction::Reverse if f.range(x) == at => Some(f.source(x)),
            _ => None,
        })
        .map(|next| count_lifts(p, rest, next))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coverings_map_reduced_walks_to_reduced_walks(seed in any::<u64>()) {
        let (p, _) = covering(seed);
        let mut rng = random::rng(seed ^ 1);
        let w = reduce_walk(&random::walk(&mut rng, p.domain(), 12));
        prop_assert!(p.morphism().map_walk(&w).is_reduced());
    }

    #[test]
    fn lifts_exist_are_unique_and_project_back(seed in any::<u64>()) {
        let (p, _) = covering(seed);
        let mut rng = random::rng(seed ^ 2);
        let a = reduce_walk(&random::walk(&mut rng, p.codomain(), 8));
        for anchor in p.fiber(a.source()) {
            let lift = p.lift_walk(&a, anchor, Endpoint::Source).unwrap();
            prop_assert_eq!(lift.source(), anchor);
            prop_assert_eq!(p.morphism().map_walk(&lift), a.clone());
            prop_assert_eq!(count_lifts(&p, a.steps(), anchor), 1);
        }
        for anchor in p.fiber(a.range(p.codomain())) {
            let lift = p.lift_walk(&a, anchor, Endpoint::Range).unwrap();
            prop_assert_eq!(lift.range(p.domain()), anchor);
            prop_assert_eq!(p.morphism().map_walk(&lift), a.clone());
        }
    }

    #[test]
    fn lifting_commutes_with_reduction(seed in any::<u64>()) {
        let (p, _) = covering(seed);
        let mut rng = random::rng(seed ^ 3);
        let a = random::walk(&mut rng, p.codomain(), 10);
        for anchor in p.fiber(a.source()) {
            let lifted = p.lift_walk(&a, anchor, Endpoint::Source).unwrap();
            prop_assert_eq!(reduce_walk(&lifted), p.lift_walk(&reduce_walk(&a), anchor, Endpoint::Source).unwrap());
        }
    }

    #[test]
    fn sheets_equal_index_and_rank_counts(seed in any::<u64>()) {
        let (p, v) = covering(seed);
        let pi1 = FundamentalGroup::at(p.codomain(), p.morphism().vertex(v)).unwrap();
        let h = p.induced_subgroup(v, &pi1).unwrap();
        let f = p.domain();
        prop_assert_eq!(h.index(), Index::Finite(p.fiber(pi1.root()).len()));
        prop_assert_eq!(h.rank(), f.edge_count() + 1 - f.vertex_count());
    }

    #[test]
    fn theta_ignores_the_choice_of_walk(seed in any::<u64>()) {
        let (p, v) = covering(seed);
        let e = p.codomain();
        let pi1 = FundamentalGroup::at(e, p.morphism().vertex(v)).unwrap();
        let cosets = CosetSpace::from_subgroup_graph(&p.induced_subgroup(v, &pi1).unwrap()).unwrap();
        let mut rng = random::rng(seed ^ 4);
        let fiber = p.fiber(pi1.root());
        let w = fiber[rng.gen_range(0..fiber.len())];
        // two walks from w to v: a tree path upstairs, and the same followed by a loop at v
        let upstairs = FundamentalGroup::at(p.domain(), v).unwrap();
        let a = inverse_walk(p.domain(), &upstairs.tree().path_from_root(p.domain(), w));
        let detour = loop_at(&mut rng, p.domain(), &upstairs, 8);
        let b = concat_reduce(p.domain(), &a, &detour).unwrap();
        prop_assert_eq!(p.theta_along(&a, v, &pi1, &cosets).unwrap(), p.theta_along(&b, v, &pi1, &cosets).unwrap());
    }

    #[test]
    fn reconstruction_sends_the_base_to_the_base_coset(seed in any::<u64>()) {
        let (p, v) = covering(seed);
        let r = reconstruct(&p, v).unwrap();
        let proj = r.product.projection().morphism();
        let composite = r.phi.then(proj).unwrap();
        prop_assert_eq!(composite.vertex_map(), p.morphism().vertex_map());
        prop_assert_eq!(r.product.vertex_pair(r.phi.vertex(v)), (p.morphism().vertex(v), r.cosets.identity()));
        prop_assert_eq!(r.tau[v], v);
    }

    #[test]
    fn reconstruction_survives_renaming(seed in any::<u64>()) {
        let (p, v) = covering(seed);
        let stable = relabelling_is_stable(&p, v, |n| format!("z{}_{n}", n.len() * 31 % 7)).unwrap();
        prop_assert!(stable);
    }

    #[test]
    fn skew_projections_are_coverings(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::connected_graph(&mut rng, SMALL);
        let (_, g) = random::finite_group(&mut rng, 12);
        let c = random::labelling(&mut rng, &e, &Group::Finite(g.clone()));
        let q = CosetSpace::from_finite(&g, &random::subgroup(&mut rng, &g));
        let sp = relative_skew_product(&e, &c, &q).unwrap();
        let p = is_covering(sp.projection().morphism()).unwrap();
        for v in 0..e.vertex_count() {
            prop_assert_eq!(p.fiber(v).len(), q.len());
        }
    }

    #[test]
    fn cohomologous_labellings_give_isomorphic_products(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::connected_graph(&mut rng, SMALL);
        let root = rng.gen_range(0..e.vertex_count());
        let pi1 = FundamentalGroup::new(&e, random::spanning_tree(&mut rng, &e, root).unwrap()).unwrap();
        let other_root = rng.gen_range(0..e.vertex_count());
        let other = random::spanning_tree(&mut rng, &e, other_root).unwrap();
        let c = pi1.canonical_labelling(&e);
        let (c2, b) = tree_change(&e, &pi1, &other).unwrap();
        prop_assert!(cohomologous(&e, &c, &c2, &b).unwrap());
        let h = random::finite_index_subgroup(&mut rng, pi1.free_group(), 6).unwrap();
        let q = CosetSpace::from_subgroup_graph(&h).unwrap();
        prop_assert!(coboundary_isomorphism(&e, &c, &c2, &b, &q).unwrap().is_isomorphism);
    }

    #[test]
    fn graph_and_labelling_documents_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::connected_graph(&mut rng, Bounds::default());
        let text = io::to_json(&GraphDoc::from_graph(&g));
        let back = io::parse::<GraphDoc>(&text, "graph").unwrap().to_graph().unwrap();
        prop_assert_eq!(&back, &g);
        let pi1 = FundamentalGroup::at(&g, 0).unwrap();
        let c = pi1.canonical_labelling(&g);
        let text = io::to_json(&LabellingDoc::from_labelling(&g, &c));
        let again = io::parse::<LabellingDoc>(&text, "labelling").unwrap().to_labelling(&g).unwrap();
        prop_assert_eq!(again.values(), c.values());
    }
}
