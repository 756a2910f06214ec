//! Words in named mapping classes, e.g. `D_omega'^-1 D_theta^-1 D_omega' D_theta^-1`.
//!
//! Factors are whitespace-separated names with an optional `^<int>`
//! exponent. How a word is turned into a composite depends on the
//! [`CompositionOrder`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::MappingClassModel;
use crate::words::{split_exponent, tokens, ParseError};

/// Which end of a written product acts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CompositionOrder {
    RightmostFirst,
    LeftmostFirst,
}

impl CompositionOrder {
    pub const ALL: [CompositionOrder; 2] = [CompositionOrder::RightmostFirst, CompositionOrder::LeftmostFirst];

    /// Composite of `factors` as written.
    pub fn product<'a, I>(self, factors: I) -> MappingClassModel
    where
        I: IntoIterator<Item = &'a MappingClassModel>,
        I::IntoIter: DoubleEndedIterator,
    {
        let it = factors.into_iter();
        let fold = |acc: MappingClassModel, f: &MappingClassModel| acc.compose(f);
        match self {
            CompositionOrder::RightmostFirst => it.fold(MappingClassModel::identity(), fold),
            CompositionOrder::LeftmostFirst => it.rev().fold(MappingClassModel::identity(), fold),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub name: String,
    pub exponent: i64,
}

impl Factor {
    pub fn new(name: impl Into<String>, exponent: i64) -> Factor {
        Factor {
            name: name.into(),
            exponent,
        }
    }
}

/// A word in generator names with integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassWord(pub Vec<Factor>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown mapping class `{name}`")]
    Unknown { name: String },
}

impl ClassWord {
    pub fn new() -> ClassWord {
        ClassWord(Vec::new())
    }

    pub fn factor(name: &str, exponent: i64) -> ClassWord {
        ClassWord(vec![Factor::new(name, exponent)])
    }

    pub fn then(mut self, name: &str, exponent: i64) -> ClassWord {
        self.0.push(Factor::new(name, exponent));
        self
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &ClassWord) -> ClassWord {
        let mut out = self.0.clone();
        out.extend(other.0.iter().cloned());
        ClassWord(out).reduced()
    }

    pub fn inverse(&self) -> ClassWord {
        ClassWord(
            self.0
                .iter()
                .rev()
                .map(|f| Factor::new(f.name.clone(), -f.exponent))
                .collect(),
        )
    }

    /// `self^k` as a word.
    pub fn pow(&self, k: i64) -> ClassWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = ClassWord::new();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Merge adjacent equal names and drop zero exponents.
    pub fn reduced(&self) -> ClassWord {
        let mut out: Vec<Factor> = Vec::new();
        for f in &self.0 {
            if f.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.name == f.name => {
                    last.exponent += f.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(f.clone()),
            }
        }
        ClassWord(out)
    }

    /// Replace every occurrence of `name` by `body` (exponents expand to powers).
    pub fn substitute(&self, name: &str, body: &ClassWord) -> ClassWord {
        let mut out = ClassWord::new();
        for f in &self.0 {
            if f.name == name {
                out = out.concat(&body.pow(f.exponent));
            } else {
                out = out.concat(&ClassWord(vec![f.clone()]));
            }
        }
        out
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|f| f.name.as_str())
    }

    /// The word with factor `i` deleted.
    pub fn without(&self, i: usize) -> ClassWord {
        let mut v = self.0.clone();
        v.remove(i);
        ClassWord(v)
    }

    pub fn evaluate<F>(&self, order: CompositionOrder, mut resolve: F) -> Result<MappingClassModel, ExprError>
    where
        F: FnMut(&str) -> Option<MappingClassModel>,
    {
        let mut parts = Vec::with_capacity(self.0.len());
        for f in &self.0 {
            let m = resolve(&f.name).ok_or_else(|| ExprError::Unknown { name: f.name.clone() })?;
            parts.push(m.pow(f.exponent));
        }
        Ok(order.product(parts.iter()))
    }
}

impl fmt::Display for ClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| {
                if x.exponent == 1 {
                    x.name.clone()
                } else {
                    format!("{}^{}", x.name, x.exponent)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for ClassWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<ClassWord, ParseError> {
        let mut out = Vec::new();
        for (pos, tok) in tokens(s) {
            let (name, exp) = split_exponent(tok, pos)?;
            if name.is_empty() {
                return Err(ParseError::UnknownToken {
                    token: tok.to_string(),
                    position: pos,
                });
            }
            out.push(Factor::new(name, exp));
        }
        Ok(ClassWord(out))
    }
}

impl Serialize for ClassWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<ClassWord, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
