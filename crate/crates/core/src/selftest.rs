//! The property suite behind `covgraph selftest`: eight criteria, each run
//! on fixtures and on seeded random instances.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::covering::{is_covering, GraphMorphism, Theta};
use crate::error::Result;
use crate::fixtures;
use crate::freegroup::{CosetSpace, FiniteSubgroup, FreeGroup, Group, Index, SubgroupGraph};
use crate::fundamental::{FundamentalGroup, Labelling};
use crate::graph::{reduce_walk, Graph};
use crate::oracle;
use crate::random::{self, Bounds};
use crate::reconstruct::{random_covering, reconstruct};
use crate::skewprod::{
    ck_skeleton_check, coboundary_isomorphism, cohomologous, full_skew_product, gross_tucker, quotient_identity,
    relative_skew_product, tree_change, verify_isomorphism,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Config {
    pub seed: u64,
    /// Overrides every suite's case count. Walk checks use 20 walks per case.
    pub cases: Option<usize>,
}

impl Config {
    fn count(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }

    fn seeds(&self, default: usize) -> impl Iterator<Item = u64> {
        let seed = self.seed;
        (0..self.count(default) as u64).map(move |i| seed.wrapping_add(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub slowest: Duration,
    /// Per-case time limit, when the criterion has one.
    pub limit: Option<Duration>,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str, limit: Option<Duration>) -> CriterionResult {
        CriterionResult { id, name, cases: 0, failures: Vec::new(), slowest: Duration::ZERO, limit }
    }

    fn record(&mut self, label: impl std::fmt::Display, started: Instant, outcome: Result<Option<String>>) {
        let took = started.elapsed();
        self.cases += 1;
        self.slowest = self.slowest.max(took);
        match outcome {
            Ok(None) => {}
            Ok(Some(why)) => self.failures.push(format!("{label}: {why}")),
            Err(err) => self.failures.push(format!("{label}: error: {err}")),
        }
        if let Some(limit) = self.limit {
            if took > limit {
                self.failures.push(format!("{label}: took {took:?}, limit {limit:?}"));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One summary line, e.g. `PASS  3 skew projection ... (100 cases, 0 failures)`.
    /// Timings are left out so that repeated runs print the same text.
    pub fn line(&self) -> String {
        format!(
            "{}  {} {} ({} cases, {} failures)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.failures.len()
        )
    }
}

fn check(ok: bool, why: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(why)
}

/// Fixtures followed by generated coverings, each with a base vertex upstairs.
fn covering_corpus(config: &Config) -> Vec<(String, Result<(GraphMorphism, usize)>)> {
    let mut out: Vec<_> = fixtures::coverings()
        .into_iter()
        .map(|(name, m, v)| (name.to_string(), Ok((m, v))))
        .collect();
    for seed in config.seeds(100) {
        let generated = random_covering(seed, Bounds::default()).map(|(c, v)| (c.morphism().clone(), v));
        out.push((format!("seed {seed}"), generated));
    }
    out
}

pub fn sheets_and_theta(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(1, "sheets equal index and the fiber matches the cosets", Some(Duration::from_secs(1)));
    for (label, instance) in covering_corpus(config) {
        let started = Instant::now();
        let outcome = instance.and_then(|(m, v)| {
            let p = is_covering(&m)?;
            let pi1 = FundamentalGroup::at(p.codomain(), m.vertex(v))?;
            let h = p.induced_subgroup(v, &pi1)?;
            let sheets = p.sheets()?;
            if h.index() != Index::Finite(sheets) {
                return Ok(Some(format!("sheets {sheets} but index {}", h.index())));
            }
            let cosets = CosetSpace::from_subgroup_graph(&h)?;
            let theta = Theta::new(&p, v, &pi1, &cosets)?;
            Ok(check(theta.is_bijective()?, || "fiber-to-coset map is not a bijection".into()))
        });
        result.record(label, started, outcome);
    }
    result
}

pub fn reconstruction(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(2, "reconstruction is an isomorphism over the covering", Some(Duration::from_secs(2)));
    for (label, instance) in covering_corpus(config) {
        let started = Instant::now();
        let outcome = instance.and_then(|(m, v)| {
            let p = is_covering(&m)?;
            let r = reconstruct(&p, v)?;
            let back = r.phi.then(r.product.projection().morphism())?;
            Ok(check(verify_isomorphism(&r.phi), || "φ is not bijective".into()).or_else(|| {
                check(back.vertex_map() == m.vertex_map() && back.edge_map() == m.edge_map(), || {
                    "projection ∘ φ differs from p".into()
                })
            }))
        });
        result.record(label, started, outcome);
    }
    result
}

/// A random graph, labelling and coset space: free groups of rank 1 to 3 with
/// a random finite-index subgroup for even seeds, catalog groups with a
/// random subgroup for odd ones.
pub fn skew_instance(seed: u64) -> Result<(Graph, Labelling, CosetSpace)> {
    let mut rng = random::rng(seed ^ 0x5eed_0003);
    let e = random::connected_graph(&mut rng, Bounds::default());
    if seed.is_multiple_of(2) {
        let rank = rng.gen_range(1..=3);
        let f = FreeGroup::new(["x", "y", "z"].into_iter().take(rank))?;
        let c = random::labelling(&mut rng, &e, &Group::Free(f.clone()));
        let h = random::finite_index_subgroup(&mut rng, &f, 12)?;
        Ok((e, c, CosetSpace::from_subgroup_graph(&h)?))
    } else {
        let (_, g) = random::finite_group(&mut rng, 12);
        let c = random::labelling(&mut rng, &e, &Group::Finite(g.clone()));
        let h = random::subgroup(&mut rng, &g);
        Ok((e, c, CosetSpace::from_finite(&g, &h)))
    }
}

pub fn skew_projection(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(3, "skew projection is a covering with one point per coset in each fiber", None);
    for seed in config.seeds(100) {
        let started = Instant::now();
        let outcome = skew_instance(seed).and_then(|(e, c, q)| {
            let sp = relative_skew_product(&e, &c, &q)?;
            let p = is_covering(sp.projection().morphism())?;
            let bad = (0..e.vertex_count()).find(|&v| p.fiber(v).len() != q.len());
            Ok(bad.map(|v| format!("fiber over {} has {} points, {} cosets", e.vertex_name(v), p.fiber(v).len(), q.len())))
        });
        result.record(format!("seed {seed}"), started, outcome);
    }
    result
}

/// A random graph with a catalog-group labelling and a random subgroup.
pub fn quotient_instance(seed: u64) -> (Graph, Labelling, FiniteSubgroup) {
    let mut rng = random::rng(seed ^ 0x5eed_0004);
    let e = random::connected_graph(&mut rng, Bounds { max_vertices: 8, max_edges: 14, max_index: 12 });
    let (_, g) = random::finite_group(&mut rng, 12);
    let c = random::labelling(&mut rng, &e, &Group::Finite(g.clone()));
    let h = random::subgroup(&mut rng, &g);
    (e, c, h)
}

pub fn quotient_identities(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(4, "(E ×_c G)/H ≅ E ×_c (G/H)", None);
    for seed in config.seeds(50) {
        let started = Instant::now();
        let (e, c, h) = quotient_instance(seed);
        let outcome = quotient_identity(&e, &c, &h)
            .map(|qi| check(qi.is_isomorphism, || "the comparison map is not bijective".into()));
        result.record(format!("seed {seed}"), started, outcome);
    }
    result
}

pub fn gross_tucker_suite(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(5, "Gross–Tucker Φ is an equivariant isomorphism", None);
    for seed in config.seeds(50) {
        let started = Instant::now();
        let mut rng = random::rng(seed ^ 0x5eed_0005);
        let e = random::connected_graph(&mut rng, Bounds { max_vertices: 8, max_edges: 14, max_index: 12 });
        let (_, g) = random::finite_group(&mut rng, 12);
        let c = random::labelling(&mut rng, &e, &Group::Finite(g.clone()));
        let small: Vec<FiniteSubgroup> = g.all_subgroups().into_iter().filter(|h| h.order() <= 8).collect();
        let h = small[rng.gen_range(0..small.len())].clone();
        let outcome = full_skew_product(&e, &c).and_then(|(_, action)| {
            let gt = gross_tucker(&action.restrict(&h)?)?;
            Ok(check(gt.is_isomorphism, || "Φ is not bijective".into())
                .or_else(|| check(gt.is_equivariant, || "Φ is not equivariant".into())))
        });
        result.record(format!("seed {seed} (|H| = {})", h.order()), started, outcome);
    }
    result
}

pub fn skeleton(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(6, "fiber bijections and unique path lifts up to length 4", None);
    let report = |e: &Graph, c: &Labelling, q: &CosetSpace| -> Result<Option<String>> {
        let r = ck_skeleton_check(e, c, q, 4)?;
        Ok(check(r.passed(), || r.violations.join("; ")))
    };
    for seed in config.seeds(100) {
        let started = Instant::now();
        let outcome = skew_instance(seed).and_then(|(e, c, q)| report(&e, &c, &q));
        result.record(format!("skew seed {seed}"), started, outcome);
    }
    for seed in config.seeds(50) {
        let started = Instant::now();
        let (e, c, h) = quotient_instance(seed);
        let Group::Finite(g) = c.group() else { unreachable!() };
        let q = CosetSpace::from_finite(g, &h);
        result.record(format!("quotient seed {seed}"), started, report(&e, &c, &q));
    }
    result
}

pub fn word_engine(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(7, "walk reduction and subgroup membership match brute force", None);
    let walks = config.cases.map_or(1000, |k| 20 * k);
    let mut rng = random::rng(config.seed ^ 0x5eed_0007);
    let mut graph = random::connected_graph(&mut rng, Bounds::default());
    for i in 0..walks {
        if i % 20 == 0 {
            graph = random::connected_graph(&mut rng, Bounds { max_vertices: 6, max_edges: 10, max_index: 1 });
        }
        let started = Instant::now();
        let w = random::walk(&mut rng, &graph, 12);
        let forms = oracle::normal_forms(w.steps());
        let fast = reduce_walk(&w);
        let outcome = check(forms.len() == 1 && forms.contains(fast.steps()), || {
            format!("{} normal forms; fast path gives {}", forms.len(), fast.display(&graph))
        });
        result.record(format!("walk {i}"), started, Ok(outcome));
    }
    let f = FreeGroup::new(["x", "y"]).expect("valid names");
    let probes = oracle::reduced_words(&f, 4);
    for i in 0..config.count(50) {
        let started = Instant::now();
        let n = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..n)
            .map(|_| loop {
                let w = random::word(&mut rng, &f, 4);
                if !w.is_identity() {
                    break w;
                }
            })
            .collect();
        let outcome = SubgroupGraph::from_generators(&f, &gens).map(|h| {
            let bad = oracle::membership_disagreements(&h, &gens, &probes, 6);
            check(bad.is_empty(), || bad.join("; "))
        });
        let names: Vec<String> = gens.iter().map(|w| f.format_word(w)).collect();
        result.record(format!("subgroup {i} ⟨{}⟩", names.join(", ")), started, outcome);
    }
    result
}

pub fn tree_changes(config: &Config) -> CriterionResult {
    let mut result = CriterionResult::new(8, "tree-change labellings are cohomologous", None);
    for seed in config.seeds(20) {
        let started = Instant::now();
        let mut rng = random::rng(seed ^ 0x5eed_0008);
        let e = random::connected_graph(&mut rng, Bounds::default());
        let outcome = (|| {
            let u = rng.gen_range(0..e.vertex_count());
            let u2 = rng.gen_range(0..e.vertex_count());
            let pi1 = FundamentalGroup::new(&e, random::spanning_tree(&mut rng, &e, u)?)?;
            let other = random::spanning_tree(&mut rng, &e, u2)?;
            let c = pi1.canonical_labelling(&e);
            let (c2, b) = tree_change(&e, &pi1, &other)?;
            if !cohomologous(&e, &c, &c2, &b)? {
                return Ok(Some("b(s(e))·c2(e) ≠ c(e)·b(r(e))".to_string()));
            }
            let h = random::finite_index_subgroup(&mut rng, pi1.free_group(), 12)?;
            let q = CosetSpace::from_subgroup_graph(&h)?;
            let iso = coboundary_isomorphism(&e, &c, &c2, &b, &q)?;
            Ok(check(iso.is_isomorphism, || "coboundary map is not bijective".into()))
        })();
        result.record(format!("seed {seed}"), started, outcome);
    }
    result
}

/// Runs every criterion in order.
pub fn run(config: &Config) -> Vec<CriterionResult> {
    vec![
        sheets_and_theta(config),
        reconstruction(config),
        skew_projection(config),
        quotient_identities(config),
        gross_tucker_suite(config),
        skeleton(config),
        word_engine(config),
        tree_changes(config),
    ]
}
