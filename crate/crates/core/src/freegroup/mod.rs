//! Groups used as labelling values: free groups on named generators and
//! finite groups given by multiplication tables, together with subgroups and
//! coset spaces.

mod cosets;
mod element;
mod finite;
mod stallings;

pub use cosets::CosetSpace;
pub use element::{Group, GroupElement};
pub use finite::{FiniteGroup, FiniteSubgroup};
pub use stallings::{Index, SubgroupGraph};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A free group on an ordered list of distinct generator names.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeGroup {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for FreeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{:?}", self.names)
    }
}

impl FreeGroup {
    pub fn new<I, S>(names: I) -> Result<FreeGroup>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            // "1" is reserved for the identity word.
            if name.is_empty()
                || name == "1"
                || name.contains('\'')
                || name.chars().any(char::is_whitespace)
            {
                return Err(Error::InvalidGeneratorName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGeneratorName(format!("{name} (duplicate)")));
            }
        }
        Ok(FreeGroup { names, index })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn generator(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::GeneratorMismatch(format!("unknown generator {name:?}")))
    }

    /// The word consisting of the single generator `i`.
    pub fn generator_word(&self, i: usize) -> FreeWord {
        FreeWord(vec![Letter::new(i, false)])
    }

    /// Verifies that every letter of `w` names a generator of this group.
    pub fn check(&self, w: &FreeWord) -> Result<()> {
        match w.0.iter().find(|l| l.generator >= self.rank()) {
            Some(l) => Err(Error::GeneratorMismatch(format!(
                "generator #{} outside a group of rank {}",
                l.generator,
                self.rank()
            ))),
            None => Ok(()),
        }
    }

    pub fn multiply(&self, a: &FreeWord, b: &FreeWord) -> Result<FreeWord> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.multiply(b))
    }

    /// Parses `x y' x`; `1` (or blank) is the identity.
    pub fn parse_word(&self, text: &str) -> Result<FreeWord> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(FreeWord::identity());
        }
        let letters = text
            .split_whitespace()
            .map(|tok| match tok.strip_suffix('\'') {
                Some(name) => self.generator(name).map(|g| Letter::new(g, true)),
                None => self.generator(tok).map(|g| Letter::new(g, false)),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::MalformedWord(format!("{text:?}: {e}")))?;
        Ok(FreeWord::from_letters(letters))
    }

    pub fn format_word(&self, w: &FreeWord) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|l| self.format_letter(*l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.inverse {
            format!("{}'", self.names[l.generator])
        } else {
            self.names[l.generator].clone()
        }
    }
}

/// `generator^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Dense code used to index transition tables: `2g` or `2g + 1`.
    pub fn code(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter::new(code / 2, code % 2 == 1)
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word. Construction always reduces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(FreeWord::identity(), |acc, _| acc.multiply(&base))
    }
}
