use super::{FiniteGroup, FreeGroup, FreeWord};
use crate::error::{Error, Result};

/// The two group backends labellings can take values in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Free(FreeGroup),
    Finite(FiniteGroup),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Word(FreeWord),
    Element(usize),
}

impl Group {
    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Free(_) => GroupElement::Word(FreeWord::identity()),
            Group::Finite(g) => GroupElement::Element(g.identity()),
        }
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        match (self, a) {
            (Group::Free(f), GroupElement::Word(w)) => f.check(w),
            (Group::Finite(g), GroupElement::Element(i)) if *i < g.order() => Ok(()),
            _ => Err(Error::GroupMismatch("element does not belong to the group".into())),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (Group::Free(_), GroupElement::Word(a), GroupElement::Word(b)) => GroupElement::Word(a.multiply(b)),
            (Group::Finite(g), GroupElement::Element(a), GroupElement::Element(b)) => {
                GroupElement::Element(g.multiply(*a, *b))
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match (self, a) {
            (Group::Free(_), GroupElement::Word(w)) => GroupElement::Word(w.inverse()),
            (Group::Finite(g), GroupElement::Element(i)) => GroupElement::Element(g.inverse(*i)),
            _ => unreachable!("checked above"),
        })
    }

    /// Words use the free-group syntax; finite elements use their names.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        match self {
            Group::Free(f) => f.parse_word(text).map(GroupElement::Word),
            Group::Finite(g) => g.element(text.trim()).map(GroupElement::Element),
        }
    }

    pub fn format_element(&self, a: &GroupElement) -> String {
        match (self, a) {
            (Group::Free(f), GroupElement::Word(w)) => f.format_word(w),
            (Group::Finite(g), GroupElement::Element(i)) => g.name(*i).to_string(),
            _ => "<foreign element>".to_string(),
        }
    }
}
