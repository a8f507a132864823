//! Left coset spaces `G/H` with the left multiplication action `g·(kH) = (gk)H`.
//!
//! For a subgroup of a free group the cosets are the states of its complete
//! Stallings graph. Reading a word along the automaton is the right action on
//! right cosets `Hk`; the left action on left cosets goes through
//! `kH ↔ Hk⁻¹`, so `act(w, q)` reads `w⁻¹` from `q`.

use std::collections::VecDeque;

use super::{FiniteGroup, FiniteSubgroup, FreeWord, Group, GroupElement, Index, Letter, SubgroupGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backend {
    Free(SubgroupGraph),
    Finite {
        group: FiniteGroup,
        subgroup: FiniteSubgroup,
        coset_of: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    ambient: Group,
    backend: Backend,
    names: Vec<String>,
    representatives: Vec<GroupElement>,
}

impl CosetSpace {
    /// Cosets of a finite-index subgroup of a free group. Coset `0` is `H`.
    pub fn from_subgroup_graph(h: &SubgroupGraph) -> Result<CosetSpace> {
        let Index::Finite(n) = h.index() else {
            return Err(Error::InfiniteIndex);
        };
        let letters = 2 * h.group().rank();
        let mut space = CosetSpace {
            ambient: Group::Free(h.group().clone()),
            backend: Backend::Free(h.clone()),
            names: Vec::new(),
            representatives: Vec::new(),
        };
        // Shortest representatives, found by prepending letters: l·(kH) = (lk)H.
        let mut rep: Vec<Option<FreeWord>> = vec![None; n];
        rep[0] = Some(FreeWord::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for code in 0..letters {
                let l = Letter::from_code(code);
                let t = space.act_word(&FreeWord::from_letters([l]), q);
                if rep[t].is_none() {
                    rep[t] = Some(FreeWord::from_letters([l]).multiply(rep[q].as_ref().unwrap()));
                    queue.push_back(t);
                }
            }
        }
        let free = match &space.ambient {
            Group::Free(f) => f.clone(),
            Group::Finite(_) => unreachable!(),
        };
        for r in rep {
            let r = r.expect("complete connected automaton");
            let name = if r.is_identity() {
                "H".to_string()
            } else {
                let tokens: Vec<String> = r.letters().iter().map(|l| free.format_letter(*l)).collect();
                format!("{}H", tokens.join("."))
            };
            space.names.push(name);
            space.representatives.push(GroupElement::Word(r));
        }
        Ok(space)
    }

    /// Left cosets `gH` of a subgroup of a finite group. Coset `0` is `H`; the
    /// rest follow the order of their least element. Cosets of the trivial
    /// subgroup are named after their single element.
    pub fn from_finite(group: &FiniteGroup, subgroup: &FiniteSubgroup) -> CosetSpace {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut order: Vec<usize> = vec![group.identity()];
        order.extend((0..n).filter(|&a| a != group.identity()));
        for g in order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            for &h in subgroup.elements() {
                coset_of[group.multiply(g, h)] = id;
            }
            reps.push(g);
        }
        let trivial = subgroup.order() == 1;
        let names = reps
            .iter()
            .enumerate()
            .map(|(i, &g)| match (trivial, i) {
                (true, _) => group.name(g).to_string(),
                (false, 0) => "H".to_string(),
                (false, _) => format!("{}H", group.name(g)),
            })
            .collect();
        CosetSpace {
            ambient: Group::Finite(group.clone()),
            backend: Backend::Finite {
                group: group.clone(),
                subgroup: subgroup.clone(),
                coset_of,
            },
            names,
            representatives: reps.into_iter().map(GroupElement::Element).collect(),
        }
    }

    /// The one-coset space `G/G`.
    pub fn trivial(group: &Group) -> Result<CosetSpace> {
        match group {
            Group::Free(f) => {
                let gens: Vec<FreeWord> = (0..f.rank()).map(|i| f.generator_word(i)).collect();
                CosetSpace::from_subgroup_graph(&SubgroupGraph::from_generators(f, &gens)?)
            }
            Group::Finite(g) => {
                let all: Vec<usize> = (0..g.order()).collect();
                Ok(CosetSpace::from_finite(g, &g.subgroup(&all)?))
            }
        }
    }

    pub fn group(&self) -> &Group {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The identity coset `H`.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coset_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn representative(&self, q: usize) -> &GroupElement {
        &self.representatives[q]
    }

    pub fn subgroup_graph(&self) -> Option<&SubgroupGraph> {
        match &self.backend {
            Backend::Free(h) => Some(h),
            Backend::Finite { .. } => None,
        }
    }

    pub fn finite_subgroup(&self) -> Option<&FiniteSubgroup> {
        match &self.backend {
            Backend::Finite { subgroup, .. } => Some(subgroup),
            Backend::Free(_) => None,
        }
    }

    /// The coset containing the element `g` of a finite ambient group.
    pub fn coset_of_element(&self, g: usize) -> Option<usize> {
        match &self.backend {
            Backend::Finite { coset_of, .. } => coset_of.get(g).copied(),
            Backend::Free(_) => None,
        }
    }

    /// `g·q`.
    pub fn act(&self, g: &GroupElement, q: usize) -> Result<usize> {
        self.ambient.check(g)?;
        Ok(match g {
            GroupElement::Word(w) => self.act_word(w, q),
            GroupElement::Element(a) => self.act_element(*a, q),
        })
    }

    fn act_word(&self, w: &FreeWord, q: usize) -> usize {
        let Backend::Free(h) = &self.backend else {
            unreachable!("word acting on finite cosets")
        };
        w.letters()
            .iter()
            .rev()
            .fold(q, |at, l| h.step(at, l.inv()).expect("complete automaton"))
    }

    fn act_element(&self, a: usize, q: usize) -> usize {
        let Backend::Finite { group, coset_of, .. } = &self.backend else {
            unreachable!("finite element acting on free cosets")
        };
        let GroupElement::Element(rep) = self.representatives[q] else {
            unreachable!()
        };
        coset_of[group.multiply(a, rep)]
    }
}
