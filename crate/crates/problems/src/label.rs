//! Labels and their canonical text tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A color of the problem family, written `level.index` in problem files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorId {
    pub level: u32,
    pub index: u32,
}

impl ColorId {
    pub fn new(level: u32, index: u32) -> Self {
        ColorId { level, index }
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.level, self.index)
    }
}

/// A label of a problem.
///
/// Structured payloads carry the meaning of family labels (color sets and
/// pointers) and of the set-labels produced by the round-elimination
/// operators. `Colors` with an empty set is the wildcard `X`, which is also
/// how `U<0>` is normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// An opaque identifier such as `M` or `B`.
    Plain(String),
    /// `L{...}`: a set of colors; the empty set prints as `X`.
    Colors(BTreeSet<ColorId>),
    /// `P<i>` with `i >= 1`.
    Pointer(u32),
    /// `U<i>` with `i >= 1`.
    Unpointed(u32),
    /// `{a,b,...}`: a nonempty set of labels.
    Set(BTreeSet<Label>),
}

impl Label {
    pub fn plain(name: impl Into<String>) -> Self {
        Label::Plain(name.into())
    }

    /// The wildcard label `X`.
    pub fn x() -> Self {
        Label::Colors(BTreeSet::new())
    }

    pub fn colors(colors: impl IntoIterator<Item = ColorId>) -> Self {
        Label::Colors(colors.into_iter().collect())
    }

    pub fn pointer(i: u32) -> Self {
        Label::Pointer(i)
    }

    /// `U<i>`; index zero is the wildcard.
    pub fn unpointed(i: u32) -> Self {
        if i == 0 {
            Label::x()
        } else {
            Label::Unpointed(i)
        }
    }

    /// A set-label; panics on an empty member set, which the formalism excludes.
    pub fn set(members: impl IntoIterator<Item = Label>) -> Self {
        let members: BTreeSet<Label> = members.into_iter().collect();
        assert!(!members.is_empty(), "set-labels are nonempty");
        Label::Set(members)
    }

    pub fn is_wildcard(&self) -> bool {
        matches!(self, Label::Colors(c) if c.is_empty())
    }

    /// Color payload, if this is a color-set label.
    pub fn color_set(&self) -> Option<&BTreeSet<ColorId>> {
        match self {
            Label::Colors(c) => Some(c),
            _ => None,
        }
    }

    /// Member payload, if this is a set-label.
    pub fn members(&self) -> Option<&BTreeSet<Label>> {
        match self {
            Label::Set(m) => Some(m),
            _ => None,
        }
    }

    /// Parses a single label token.
    pub fn parse(text: &str) -> Result<Label, Error> {
        crate::parse::parse_label_token(text)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Plain(s) => f.write_str(s),
            Label::Colors(c) if c.is_empty() => f.write_str("X"),
            Label::Colors(c) => {
                f.write_str("L{")?;
                for (k, color) in c.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{color}")?;
                }
                f.write_str("}")
            }
            Label::Pointer(i) => write!(f, "P<{i}>"),
            Label::Unpointed(i) => write!(f, "U<{i}>"),
            Label::Set(m) => {
                f.write_str("{")?;
                for (k, l) in m.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::parse(s)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Label::parse(&s).map_err(serde::de::Error::custom)
    }
}
