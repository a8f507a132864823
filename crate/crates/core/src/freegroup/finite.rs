use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// A finite group presented by its multiplication table; `table[a][b]` is `ab`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<FiniteGroup> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotAGroup("no elements".into()));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::NotAGroup(format!("bad element name {name:?}")));
            }
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::NotAGroup(format!("duplicate element name {name:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::NotAGroup(format!("table must be {n}x{n}")));
        }
        if let Some(v) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::NotAGroup(format!("table entry {v} out of range")));
        }
        if identity >= n {
            return Err(Error::NotAGroup(format!("identity index {identity} out of range")));
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::NotAGroup(format!(
                    "{:?} is not a two-sided identity for {:?}",
                    names[identity], names[a]
                )));
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses.push(b),
                None => return Err(Error::NotAGroup(format!("{:?} has no inverse", names[a]))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails for ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table, identity, inverses })
    }

    /// The cyclic group `Z/n` with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup {
            names: (0..n).map(|i| i.to_string()).collect(),
            table,
            identity: 0,
            inverses,
        }
    }

    /// The permutation group generated by `generators`, all acting on the same
    /// point set. Elements are named `g0, g1, ...` in breadth-first order from
    /// the identity `g0`. Products compose right to left: `(ab)(i) = a(b(i))`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> FiniteGroup {
        let degree = generators.first().map_or(0, Vec::len);
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(g, &elements[i]);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elements[a], &elements[b])]).collect())
            .collect();
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
        FiniteGroup {
            names: (0..n).map(|i| format!("g{i}")).collect(),
            table,
            identity: 0,
            inverses,
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::GroupMismatch(format!("unknown group element {name:?}")))
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// The subgroup generated by `generators`.
    pub fn generated_subgroup(&self, generators: &[usize]) -> FiniteSubgroup {
        let mut member = vec![false; self.order()];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in generators {
                let next = self.multiply(a, g);
                if !member[next] {
                    member[next] = true;
                    queue.push_back(next);
                }
            }
        }
        FiniteSubgroup::from_membership(member)
    }

    /// Validates that `subset` is a subgroup: nonempty, holds the identity and
    /// is closed under products and inverses.
    pub fn subgroup(&self, subset: &[usize]) -> Result<FiniteSubgroup> {
        let mut member = vec![false; self.order()];
        for &a in subset {
            if a >= self.order() {
                return Err(Error::NotASubgroup(format!("element index {a} out of range")));
            }
            member[a] = true;
        }
        if !member[self.identity] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for a in (0..self.order()).filter(|&a| member[a]) {
            if !member[self.inverse(a)] {
                return Err(Error::NotASubgroup(format!("not closed under inverse of {:?}", self.names[a])));
            }
            for b in (0..self.order()).filter(|&b| member[b]) {
                if !member[self.multiply(a, b)] {
                    return Err(Error::NotASubgroup(format!(
                        "not closed: {} * {} = {}",
                        self.names[a],
                        self.names[b],
                        self.names[self.multiply(a, b)]
                    )));
                }
            }
        }
        Ok(FiniteSubgroup::from_membership(member))
    }

    /// Every subgroup, found by closing the cyclic subgroups under joins.
    pub fn all_subgroups(&self) -> Vec<FiniteSubgroup> {
        let mut out: Vec<FiniteSubgroup> = Vec::new();
        for a in 0..self.order() {
            let h = self.generated_subgroup(&[a]);
            if !out.contains(&h) {
                out.push(h);
            }
        }
        let mut i = 0;
        while i < out.len() {
            for j in 0..i {
                let gens: Vec<usize> = out[i].elements().iter().chain(out[j].elements()).copied().collect();
                let h = self.generated_subgroup(&gens);
                if !out.contains(&h) {
                    out.push(h);
                }
            }
            i += 1;
        }
        out.sort_by(|x, y| (x.order(), x.elements()).cmp(&(y.order(), y.elements())));
        out
    }
}

/// A validated subgroup of a [`FiniteGroup`], stored as its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubgroup {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl FiniteSubgroup {
    fn from_membership(member: Vec<bool>) -> FiniteSubgroup {
        let elements = (0..member.len()).filter(|&i| member[i]).collect();
        FiniteSubgroup { elements, member }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.member.get(a).copied().unwrap_or(false)
    }

    /// The subgroup as a group in its own right, with the ambient element
    /// names kept. Returns the group and the embedding into the ambient group.
    pub fn as_group(&self, ambient: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let local: HashMap<usize, usize> =
            self.elements.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| local[&ambient.multiply(a, b)]).collect())
            .collect();
        let names = self.elements.iter().map(|&a| ambient.name(a).to_string()).collect();
        let group = FiniteGroup::from_table(names, table, local[&ambient.identity()])
            .expect("a validated subgroup is a group");
        (group, self.elements.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_and_its_trivial_subgroup() {
        let g = FiniteGroup::from_table(
            vec!["e".into(), "a".into()],
            vec![vec![0, 1], vec![1, 0]],
            0,
        )
        .unwrap();
        let h = g.subgroup(&[0]).unwrap();
        assert_eq!(h.order(), 1);
        assert_eq!(g.order() / h.order(), 2);
    }

    #[test]
    fn z4_subgroups() {
        let z4 = FiniteGroup::cyclic(4);
        // {0, 2}: 2 + 2 = 0, closed.
        assert_eq!(z4.subgroup(&[0, 2]).unwrap().order(), 2);
        // {0, 1}: 1 + 1 = 2 escapes.
        assert!(matches!(z4.subgroup(&[0, 1]), Err(Error::NotASubgroup(_))));
        assert!(matches!(z4.subgroup(&[2]), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn rejects_non_groups() {
        let names = vec!["a".to_string(), "b".to_string()];
        // no identity row
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![1, 0], vec![0, 1]], 0).is_err());
        // not square
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 1]], 0).is_err());
        // {e,a,b} with a*a = a: identity ok but a has no inverse
        let names3 = vec!["e".to_string(), "a".to_string(), "b".to_string()];
        let t = vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 0]];
        assert!(matches!(FiniteGroup::from_table(names3, t, 0), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // A Latin square with identity that is not associative (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| format!("e{i}")).collect();
        let err = FiniteGroup::from_table(names, t, 0).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn permutation_groups() {
        // S3 from a 3-cycle and a transposition.
        let s3 = FiniteGroup::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]);
        assert_eq!(s3.order(), 6);
        let check = FiniteGroup::from_table(s3.names().to_vec(), s3.table().to_vec(), 0);
        assert!(check.is_ok());
        assert_eq!(s3.all_subgroups().len(), 6);
        let z2 = vec![1, 0, 2, 3, 4, 5];
        let z2b = vec![0, 1, 3, 2, 4, 5];
        let z2c = vec![0, 1, 2, 3, 5, 4];
        let klein3 = FiniteGroup::from_permutations(&[z2, z2b, z2c]);
        assert_eq!(klein3.order(), 8);
        // 1 trivial, 7 of order 2, 7 of order 4, the whole group.
        assert_eq!(klein3.all_subgroups().len(), 16);
    }

    #[test]
    fn subgroup_as_group_keeps_names() {
        let z6 = FiniteGroup::cyclic(6);
        let h = z6.generated_subgroup(&[2]);
        let (g, embed) = h.as_group(&z6);
        assert_eq!(g.order(), 3);
        assert_eq!(embed, vec![0, 2, 4]);
        assert_eq!(g.names(), &["0", "2", "4"]);
    }
}
