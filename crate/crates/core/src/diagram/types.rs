use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DiagramError;

/// A basic pregroup type such as `n` or `s`, together with its adjoint degree.
///
/// Degree `0` is the plain type, `-1` the left adjoint `nˡ` and `+1` the right
/// adjoint `nʳ`. Higher degrees compose (`nˡˡ` has degree `-2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BasicType {
    name: String,
    adjoint: i32,
}

impl BasicType {
    /// Panics on an empty name; use [`BasicType::from_str`] for untrusted input.
    pub fn new(name: &str) -> Self {
        Self::with_adjoint(name, 0)
    }

    pub fn with_adjoint(name: &str, adjoint: i32) -> Self {
        assert!(valid_name(name), "invalid basic type name {name:?}");
        Self {
            name: name.to_string(),
            adjoint,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn adjoint(&self) -> i32 {
        self.adjoint
    }

    /// Left adjoint: `t ↦ tˡ`.
    pub fn l(&self) -> Self {
        Self {
            name: self.name.clone(),
            adjoint: self.adjoint - 1,
        }
    }

    /// Right adjoint: `t ↦ tʳ`.
    pub fn r(&self) -> Self {
        Self {
            name: self.name.clone(),
            adjoint: self.adjoint + 1,
        }
    }

    /// Plain type with the same name.
    pub fn base(&self) -> Self {
        Self {
            name: self.name.clone(),
            adjoint: 0,
        }
    }

    /// Whether `self · next` contracts to the unit, i.e. `next = selfʳ`.
    pub fn cancels_with(&self, next: &BasicType) -> bool {
        self.name == next.name && next.adjoint == self.adjoint + 1
    }

    /// ASCII form used in files: `n`, `n^r`, `n^ll`.
    pub fn ascii(&self) -> String {
        let marks = match self.adjoint {
            0 => return self.name.clone(),
            d if d > 0 => "r".repeat(d as usize),
            d => "l".repeat((-d) as usize),
        };
        format!("{}^{}", self.name, marks)
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.adjoint > 0 { "ʳ" } else { "ˡ" };
        write!(f, "{}{}", self.name, mark.repeat(self.adjoint.unsigned_abs() as usize))
    }
}

impl FromStr for BasicType {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DiagramError::BadType(s.to_string());
        let (name, marks) = match s.split_once('^') {
            Some((name, marks)) => (name, marks),
            None => (s, ""),
        };
        if !valid_name(name) {
            return Err(bad());
        }
        let adjoint = if marks.is_empty() {
            0
        } else if marks.chars().all(|c| c == 'r') {
            marks.len() as i32
        } else if marks.chars().all(|c| c == 'l') {
            -(marks.len() as i32)
        } else {
            return Err(bad());
        };
        Ok(Self {
            name: name.to_string(),
            adjoint,
        })
    }
}

impl TryFrom<String> for BasicType {
    type Error = DiagramError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<BasicType> for String {
    fn from(t: BasicType) -> Self {
        t.ascii()
    }
}

/// An ordered product of basic types; the empty list is the monoidal unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeList(Vec<BasicType>);

impl TypeList {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn new(items: Vec<BasicType>) -> Self {
        Self(items)
    }

    pub fn concat(&self, other: &TypeList) -> TypeList {
        let mut items = self.0.clone();
        items.extend(other.0.iter().cloned());
        Self(items)
    }

    /// Sub-list `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> TypeList {
        Self(self.0[start..end].to_vec())
    }

    pub fn into_vec(self) -> Vec<BasicType> {
        self.0
    }
}

impl Deref for TypeList {
    type Target = [BasicType];

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl From<Vec<BasicType>> for TypeList {
    fn from(items: Vec<BasicType>) -> Self {
        Self(items)
    }
}

impl FromIterator<BasicType> for TypeList {
    fn from_iter<I: IntoIterator<Item = BasicType>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for TypeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " · ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Shorthand used throughout tests and the grammar: `types("n^r s n^l")`.
pub fn types(text: &str) -> TypeList {
    text.split_whitespace().map(|t| t.parse().expect("valid type literal")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoints_round_trip() {
        let n = BasicType::new("n");
        assert_eq!(n.l().r(), n);
        assert_eq!(n.r().l(), n);
        assert_eq!(n.l().l().adjoint(), -2);
        assert!(n.cancels_with(&n.r()));
        assert!(n.l().cancels_with(&n));
        assert!(!n.r().cancels_with(&n));
    }

    #[test]
    fn ascii_parse_round_trip() {
        for s in ["n", "s^l", "n^rr", "n^lll"] {
            let t: BasicType = s.parse().unwrap();
            assert_eq!(t.ascii(), s);
        }
        assert!("".parse::<BasicType>().is_err());
        assert!("n^rl".parse::<BasicType>().is_err());
        assert!("^r".parse::<BasicType>().is_err());
    }

    #[test]
    fn display_uses_superscripts() {
        assert_eq!(types("n^r s n^l").to_string(), "nʳ · s · nˡ");
        assert_eq!(TypeList::unit().to_string(), "1");
    }

    #[test]
    fn concat_is_associative_with_unit() {
        let a = types("n");
        let b = types("n^r s");
        let c = types("n^l");
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(a.concat(&TypeList::unit()), a);
        assert_eq!(TypeList::unit().concat(&a), a);
    }
}
