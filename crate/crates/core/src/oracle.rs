//! Brute-force reference computations used to cross-check the fast paths.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::freegroup::{FreeGroup, FreeWord, Letter, SubgroupGraph};
use crate::graph::{Direction, Step};

fn opposite(a: Step, b: Step) -> bool {
    a.edge == b.edge && a.dir != b.dir
}

/// Every irreducible step sequence reachable by deleting adjacent `e e⁻¹` or
/// `e⁻¹ e` pairs, in every possible order.
pub fn normal_forms(steps: &[Step]) -> BTreeSet<Vec<Step>> {
    let mut seen = HashSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![steps.to_vec()];
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let mut terminal = true;
        for i in 0..s.len().saturating_sub(1) {
            if opposite(s[i], s[i + 1]) {
                terminal = false;
                let mut t = s.clone();
                t.drain(i..i + 2);
                stack.push(t);
            }
        }
        if terminal {
            out.insert(s);
        }
    }
    out
}

/// The same exhaustive deletion on raw letter sequences.
pub fn word_normal_forms(letters: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let as_steps: Vec<Step> = letters
        .iter()
        .map(|l| Step { edge: l.generator, dir: if l.inverse { Direction::Reverse } else { Direction::Forward } })
        .collect();
    normal_forms(&as_steps)
        .into_iter()
        .map(|s| s.into_iter().map(|st| Letter::new(st.edge, st.dir == Direction::Reverse)).collect())
        .collect()
}

/// All reduced words of length at most `max_len`.
pub fn reduced_words(group: &FreeGroup, max_len: usize) -> Vec<FreeWord> {
    let letters: Vec<Letter> = (0..2 * group.rank()).map(Letter::from_code).collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last().is_some_and(|&last| last == l.inv()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().map(FreeWord::from_letters).collect()
}

/// Products of at most `max_factors` generators and inverses, reduced.
#[derive(Debug, Clone)]
pub struct ProductBall {
    elements: HashSet<FreeWord>,
}

impl ProductBall {
    pub fn new(generators: &[FreeWord], max_factors: usize) -> ProductBall {
        let mut factors: Vec<FreeWord> = Vec::new();
        for g in generators {
            factors.push(g.clone());
            factors.push(g.inverse());
        }
        let mut elements: HashSet<FreeWord> = HashSet::from([FreeWord::identity()]);
        let mut frontier: Vec<FreeWord> = vec![FreeWord::identity()];
        for _ in 0..max_factors {
            let mut next = Vec::new();
            for w in &frontier {
                for f in &factors {
                    let p = w.multiply(f);
                    if elements.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        ProductBall { elements }
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        self.elements.contains(w)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FreeWord> {
        self.elements.iter()
    }

    /// `w = a·b` for some `a, b` in the ball.
    pub fn square_contains(&self, w: &FreeWord) -> bool {
        self.elements.iter().any(|a| self.elements.contains(&a.inverse().multiply(w)))
    }
}

/// Subgroup elements reachable from the identity by right multiplication by
/// generators and inverses, never exceeding `max_len` letters. Returns early
/// once every word in `wanted` has been reached.
pub fn bounded_closure(generators: &[FreeWord], max_len: usize, wanted: &HashSet<FreeWord>) -> HashSet<FreeWord> {
    let factors: Vec<FreeWord> = generators.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut seen = HashSet::from([FreeWord::identity()]);
    let mut queue = VecDeque::from([FreeWord::identity()]);
    let mut missing = wanted.len();
    while let Some(w) = queue.pop_front() {
        for f in &factors {
            let p = w.multiply(f);
            if p.len() <= max_len && seen.insert(p.clone()) {
                if wanted.contains(&p) {
                    missing -= 1;
                    if missing == 0 {
                        return seen;
                    }
                }
                queue.push_back(p);
            }
        }
    }
    seen
}

/// Compares `SubgroupGraph::contains` with enumeration. Every product of at
/// most `max_factors` factors must be accepted, and every probe accepted by
/// the automaton must be a product of generators, found either in the ball
/// or by a closure search through words of at most 12 letters. Returns a
/// description of each disagreement.
pub fn membership_disagreements(
    h: &SubgroupGraph,
    generators: &[FreeWord],
    probes: &[FreeWord],
    max_factors: usize,
) -> Vec<String> {
    let group = h.group();
    let ball = ProductBall::new(generators, max_factors);
    let mut out = Vec::new();
    for w in ball.iter() {
        if !h.contains(w).unwrap_or(false) {
            out.push(format!("product {} rejected", group.format_word(w)));
        }
    }
    let unexplained: HashSet<FreeWord> = probes
        .iter()
        .filter(|w| !ball.contains(w) && h.contains(w).unwrap_or(false) && !ball.square_contains(w))
        .cloned()
        .collect();
    if unexplained.is_empty() {
        return out;
    }
    let reached = bounded_closure(generators, 12, &unexplained);
    let mut missing: Vec<String> =
        unexplained.iter().filter(|w| !reached.contains(*w)).map(|w| group.format_word(w)).collect();
    missing.sort();
    out.extend(missing.into_iter().map(|w| format!("{w} accepted without a product witness")));
    out
}
