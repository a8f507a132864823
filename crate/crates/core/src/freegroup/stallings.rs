//! Folded core automata (Stallings graphs) for finitely generated subgroups
//! of free groups.
//!
//! States are numbered canonically: breadth-first from the base state `0`,
//! trying letters in code order `x, x', y, y', ...`. Two automata for the same
//! subgroup are therefore equal as values.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::{FreeGroup, FreeWord, Letter};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// A folded, core, connected automaton over the letters of a free group.
/// `next[q][code]` is the state reached from `q` by reading the letter with
/// that code; an `x`-transition `p → q` is stored as both `next[p][x] = q`
/// and `next[q][x'] = p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    group: FreeGroup,
    next: Vec<Vec<Option<usize>>>,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<usize, usize>>,
    pending: Vec<(usize, usize, usize)>,
}

impl Folder {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn new_state(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep;
        for (code, target) in std::mem::take(&mut self.adj[drop]) {
            if code % 2 == 0 {
                self.pending.push((keep, code, target));
            } else {
                self.pending.push((target, code ^ 1, keep));
            }
        }
    }

    /// Inserts the transition `p --code--> q` (code even), folding on conflict.
    fn run(&mut self) {
        while let Some((p, code, q)) = self.pending.pop() {
            let (p, q) = (self.find(p), self.find(q));
            let fwd = self.adj[p].get(&code).copied().map(|t| self.find(t));
            let bwd = self.adj[q].get(&(code ^ 1)).copied().map(|t| self.find(t));
            match (fwd, bwd) {
                (Some(t), _) if t != q => self.merge(t, q),
                (_, Some(t)) if t != p => self.merge(t, p),
                _ => {
                    self.adj[p].insert(code, q);
                    self.adj[q].insert(code ^ 1, p);
                }
            }
        }
    }
}

impl SubgroupGraph {
    /// Folds the bouquet of generator loops into the Stallings graph of the
    /// subgroup they generate.
    pub fn from_generators(group: &FreeGroup, generators: &[FreeWord]) -> Result<SubgroupGraph> {
        for w in generators {
            group.check(w)?;
        }
        let mut folder = Folder { parent: vec![0], adj: vec![BTreeMap::new()], pending: Vec::new() };
        for w in generators.iter().filter(|w| !w.is_identity()) {
            let mut at = 0;
            for (i, letter) in w.letters().iter().enumerate() {
                let to = if i + 1 == w.len() { 0 } else { folder.new_state() };
                if letter.inverse {
                    folder.pending.push((to, letter.inv().code(), at));
                } else {
                    folder.pending.push((at, letter.code(), to));
                }
                at = to;
            }
        }
        folder.run();

        let states = folder.parent.len();
        let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); states];
        let mut alive = vec![false; states];
        for s in 0..states {
            if folder.find(s) == s {
                alive[s] = true;
                let entries: Vec<(usize, usize)> = folder.adj[s].iter().map(|(&c, &t)| (c, t)).collect();
                for (c, t) in entries {
                    adj[s].insert(c, folder.find(t));
                }
            }
        }

        // Trim hanging trees: repeatedly drop non-base states of degree <= 1.
        let mut queue: VecDeque<usize> =
            (1..states).filter(|&s| alive[s] && adj[s].len() <= 1).collect();
        while let Some(s) = queue.pop_front() {
            if !alive[s] || adj[s].len() > 1 {
                continue;
            }
            alive[s] = false;
            if let Some((&c, &t)) = adj[s].iter().next() {
                adj[t].remove(&(c ^ 1));
                if t != 0 && adj[t].len() <= 1 {
                    queue.push_back(t);
                }
            }
            adj[s].clear();
        }

        let letters = 2 * group.rank();
        let raw: Vec<Vec<Option<usize>>> = adj
            .iter()
            .map(|m| (0..letters).map(|c| m.get(&c).copied()).collect())
            .collect();
        Ok(SubgroupGraph::canonical(group.clone(), &raw, 0))
    }

    /// Builds the automaton from explicit transitions. Verifies that it is
    /// folded (each letter acts as a partial injection consistent with its
    /// inverse), connected from `base` and core.
    pub fn from_transitions(
        group: &FreeGroup,
        transitions: &[Vec<Option<usize>>],
        base: usize,
    ) -> Result<SubgroupGraph> {
        let n = transitions.len();
        let letters = 2 * group.rank();
        if base >= n {
            return Err(Error::Input(format!("base state {base} out of range")));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != letters {
                return Err(Error::Input(format!("state {q} needs {letters} letter slots")));
            }
            for (c, t) in row.iter().enumerate() {
                if let Some(t) = *t {
                    if t >= n || transitions[t][c ^ 1] != Some(q) {
                        return Err(Error::Input(format!(
                            "transition {q} --{}--> {t} is not matched by its inverse (not folded)",
                            group.format_letter(Letter::from_code(c))
                        )));
                    }
                }
            }
        }
        let h = SubgroupGraph::canonical(group.clone(), transitions, base);
        if h.state_count() != n {
            return Err(Error::Input("automaton is not connected".into()));
        }
        for q in 1..n {
            if h.next[q].iter().flatten().count() <= 1 {
                return Err(Error::Input(format!("automaton is not core: state {q} hangs")));
            }
        }
        Ok(h)
    }

    /// The complete automaton given by one permutation of the states per
    /// generator, restricted to the orbit of `base`. Always finite index.
    pub fn from_permutations(group: &FreeGroup, perms: &[Vec<usize>], base: usize) -> Result<SubgroupGraph> {
        if perms.len() != group.rank() {
            return Err(Error::GeneratorMismatch(format!(
                "{} permutations for rank {}",
                perms.len(),
                group.rank()
            )));
        }
        let n = perms.first().map_or(1, Vec::len);
        let mut table = vec![vec![None; 2 * group.rank()]; n];
        for (g, perm) in perms.iter().enumerate() {
            let mut hit = vec![false; n];
            for (q, &t) in perm.iter().enumerate() {
                if perm.len() != n || t >= n || hit[t] {
                    return Err(Error::Input(format!("generator {g} is not a permutation")));
                }
                hit[t] = true;
                table[q][2 * g] = Some(t);
                table[t][2 * g + 1] = Some(q);
            }
        }
        Ok(SubgroupGraph::canonical(group.clone(), &table, base))
    }

    /// Renumbers the component of `base` breadth-first.
    fn canonical(group: FreeGroup, raw: &[Vec<Option<usize>>], base: usize) -> SubgroupGraph {
        let mut number = vec![usize::MAX; raw.len()];
        let mut order = vec![base];
        number[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for t in raw[q].iter().flatten() {
                if number[*t] == usize::MAX {
                    number[*t] = order.len();
                    order.push(*t);
                }
            }
            i += 1;
        }
        let next = order
            .iter()
            .map(|&q| raw[q].iter().map(|t| t.map(|t| number[t])).collect())
            .collect();
        SubgroupGraph { group, next }
    }

    pub fn group(&self) -> &FreeGroup {
        &self.group
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn transitions(&self) -> &[Vec<Option<usize>>] {
        &self.next
    }

    /// Reads `letter` from `state` along the automaton, if defined.
    pub fn step(&self, state: usize, letter: Letter) -> Option<usize> {
        self.next[state][letter.code()]
    }

    /// Follows `w` from `state`.
    pub fn read(&self, state: usize, w: &FreeWord) -> Option<usize> {
        w.letters().iter().try_fold(state, |q, l| self.step(q, *l))
    }

    /// Membership: `w` labels a path from the base state back to itself.
    pub fn contains(&self, w: &FreeWord) -> Result<bool> {
        self.group.check(w)?;
        Ok(self.read(0, w) == Some(0))
    }

    /// Finite exactly when every state has a transition for every letter.
    pub fn index(&self) -> Index {
        if self.next.iter().all(|row| row.iter().all(Option::is_some)) {
            Index::Finite(self.state_count())
        } else {
            Index::Infinite
        }
    }

    /// Number of `x`-transitions (counted once, not with their inverses).
    pub fn transition_count(&self) -> usize {
        self.next
            .iter()
            .map(|row| row.iter().step_by(2).flatten().count())
            .sum()
    }

    /// Rank of the subgroup: `edges − states + 1`.
    pub fn rank(&self) -> usize {
        self.transition_count() + 1 - self.state_count()
    }

    /// A free basis read off a breadth-first spanning tree of the automaton:
    /// one generator `t(p) x t(q)⁻¹` per non-tree transition `p --x--> q`.
    pub fn basis(&self) -> Vec<FreeWord> {
        let n = self.state_count();
        let mut prefix: Vec<Option<FreeWord>> = vec![None; n];
        let mut tree_edge: Vec<(usize, usize)> = Vec::new();
        prefix[0] = Some(FreeWord::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for (c, t) in self.next[q].iter().enumerate() {
                if let Some(t) = *t {
                    if prefix[t].is_none() {
                        let w = prefix[q].as_ref().unwrap().multiply(&FreeWord::from_letters([Letter::from_code(c)]));
                        prefix[t] = Some(w);
                        tree_edge.push((q, c));
                        tree_edge.push((t, c ^ 1));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for q in 0..n {
            for c in (0..self.next[q].len()).step_by(2) {
                if let Some(t) = self.next[q][c] {
                    if !tree_edge.contains(&(q, c)) {
                        let p = prefix[q].as_ref().unwrap();
                        let s = prefix[t].as_ref().unwrap();
                        basis.push(
                            p.multiply(&FreeWord::from_letters([Letter::from_code(c)]))
                                .multiply(&s.inverse()),
                        );
                    }
                }
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx() -> FreeGroup {
        FreeGroup::new(["x"]).unwrap()
    }

    fn fxy() -> FreeGroup {
        FreeGroup::new(["x", "y"]).unwrap()
    }

    fn words(f: &FreeGroup, ws: &[&str]) -> Vec<FreeWord> {
        ws.iter().map(|w| f.parse_word(w).unwrap()).collect()
    }

    #[test]
    fn trivial_subgroup() {
        let f = fx();
        let h = SubgroupGraph::from_generators(&f, &[]).unwrap();
        assert_eq!(h.state_count(), 1);
        assert!(h.contains(&FreeWord::identity()).unwrap());
        assert!(!h.contains(&f.parse_word("x").unwrap()).unwrap());
        assert_eq!(h.index(), Index::Infinite);
        assert_eq!(h.rank(), 0);
    }

    #[test]
    fn square_subgroup_is_a_two_cycle() {
        let f = fx();
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["x x"])).unwrap();
        assert_eq!(h.state_count(), 2);
        assert_eq!(h.index(), Index::Finite(2));
        assert!(h.contains(&f.parse_word("x x").unwrap()).unwrap());
        assert!(h.contains(&f.parse_word("x x x x").unwrap()).unwrap());
        assert!(!h.contains(&f.parse_word("x").unwrap()).unwrap());
    }

    #[test]
    fn full_generating_set() {
        let f = fxy();
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["x", "y"])).unwrap();
        assert_eq!(h.index(), Index::Finite(1));
        for w in ["x y x'", "y y y'", "1"] {
            assert!(h.contains(&f.parse_word(w).unwrap()).unwrap());
        }
    }

    #[test]
    fn infinite_index_when_a_letter_is_missing() {
        let f = fxy();
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["x"])).unwrap();
        assert_eq!(h.index(), Index::Infinite);
    }

    #[test]
    fn folding_identifies_redundant_generators() {
        let f = fxy();
        // <x y, x y x' , x> = <x, y>
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["x y", "x y x'", "x"])).unwrap();
        assert_eq!(h.index(), Index::Finite(1));
        // <x y x'> has a hanging x-edge trimmed off before the y loop folds back.
        let conj = SubgroupGraph::from_generators(&f, &words(&f, &["x y x'"])).unwrap();
        assert_eq!(conj.state_count(), 2);
        assert!(conj.contains(&f.parse_word("x y y x'").unwrap()).unwrap());
        assert!(!conj.contains(&f.parse_word("y").unwrap()).unwrap());
    }

    #[test]
    fn non_cyclically_reduced_generator_is_trimmed() {
        let f = fxy();
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["y x y'"])).unwrap();
        assert_eq!(h.state_count(), 2);
        assert_eq!(h.rank(), 1);
    }

    #[test]
    fn generator_order_does_not_matter() {
        let f = fxy();
        let a = SubgroupGraph::from_generators(&f, &words(&f, &["x x", "y x y'", "x y x y"])).unwrap();
        let b = SubgroupGraph::from_generators(&f, &words(&f, &["x y x y", "x x", "y x y'"])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn basis_refolds_to_the_same_graph() {
        let f = fxy();
        let h = SubgroupGraph::from_generators(&f, &words(&f, &["x x y", "y' x y", "x y x' y'"])).unwrap();
        let again = SubgroupGraph::from_generators(&f, &h.basis()).unwrap();
        assert_eq!(h, again);
        assert_eq!(h.basis().len(), h.rank());
    }

    #[test]
    fn transitions_must_be_folded_and_core() {
        let f = fx();
        let two_cycle = vec![vec![Some(1), Some(1)], vec![Some(0), Some(0)]];
        assert!(SubgroupGraph::from_transitions(&f, &two_cycle, 0).is_ok());
        let unmatched = vec![vec![Some(1), None], vec![None, None]];
        assert!(SubgroupGraph::from_transitions(&f, &unmatched, 0).is_err());
        let hanging = vec![vec![Some(1), None], vec![None, Some(0)]];
        assert!(SubgroupGraph::from_transitions(&f, &hanging, 0).is_err());
    }

    #[test]
    fn permutation_automata_are_complete() {
        let f = fxy();
        let h = SubgroupGraph::from_permutations(&f, &[vec![1, 2, 0], vec![0, 2, 1]], 0).unwrap();
        assert_eq!(h.index(), Index::Finite(3));
        // base orbit only
        let h = SubgroupGraph::from_permutations(&f, &[vec![1, 0, 2], vec![0, 1, 2]], 2).unwrap();
        assert_eq!(h.index(), Index::Finite(1));
    }
}
