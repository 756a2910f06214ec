//! Free group of rank four on `a1 b1 a2 b2`: letters, freely reduced words,
//! cyclic words in canonical rotation, and conjugacy with explicit witnesses.
//!
//! Words are always stored freely reduced. The textual grammar is
//! whitespace-separated generator tokens with an optional `^<int>` exponent;
//! the empty string is the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the four free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    A1,
    B1,
    A2,
    B2,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A1, Generator::B1, Generator::A2, Generator::B2];

    /// Position in the homology basis `([a1],[b1],[a2],[b2])`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Generator {
        Self::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::A1 => "a1",
            Generator::B1 => "b1",
            Generator::A2 => "a2",
            Generator::B2 => "b2",
        }
    }

    pub fn letter(self) -> Letter {
        Letter::new(self, false)
    }
}

/// A generator or its inverse.
///
/// The derived ordering is the canonical letter order
/// `a1 < a1^-1 < b1 < b1^-1 < a2 < a2^-1 < b2 < b2^-1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const A1: Letter = Letter(0);
    pub const B1: Letter = Letter(2);
    pub const A2: Letter = Letter(4);
    pub const B2: Letter = Letter(6);

    pub fn new(generator: Generator, inverse: bool) -> Letter {
        Letter(((generator as u8) << 1) | inverse as u8)
    }

    /// All eight letters in canonical order.
    pub fn all() -> impl Iterator<Item = Letter> {
        (0..8).map(Letter)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn generator(self) -> Generator {
        Generator::from_index((self.0 >> 1) as usize)
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generator().name())?;
        if self.is_inverse() {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for x in raw {
            push_reduced(&mut out, x);
        }
        Word(out)
    }

    pub fn letter(x: Letter) -> Word {
        Word(vec![x])
    }

    pub fn generator(g: Generator) -> Word {
        Word(vec![g.letter()])
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

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.reserve(other.len());
        for &x in &other.0 {
            push_reduced(&mut out, x);
        }
        Word(out)
    }

    /// Product of several words, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut out = Vec::new();
        for w in words {
            for &x in &w.0 {
                push_reduced(&mut out, x);
            }
        }
        Word(out)
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &x in &base.0 {
                push_reduced(&mut out, x);
            }
        }
        Word(out)
    }

    /// `w · self · w⁻¹`
    pub fn conjugate_by(&self, w: &Word) -> Word {
        Word::product([w, self, &w.invert()])
    }

    /// Commutator `[x, y] = x·y·x⁻¹·y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        Word::product([x, y, &x.invert(), &y.invert()])
    }

    /// Exponent-sum vector in the basis `(a1, b1, a2, b2)`.
    pub fn exponent_sums(&self) -> [i64; 4] {
        let mut v = [0i64; 4];
        for x in &self.0 {
            v[x.generator().index()] += x.sign();
        }
        v
    }

    /// Split as `u = w · c · w⁻¹` with `c` cyclically reduced and in
    /// canonical rotation.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let n = self.0.len();
        let mut p = 0;
        while 2 * p + 1 < n && self.0[p] == self.0[n - 1 - p].inverse() {
            p += 1;
        }
        if 2 * p == n {
            return (CyclicWord(Vec::new()), Word::identity());
        }
        let core = &self.0[p..n - p];
        let k = least_rotation(core);
        let mut rotated = core[k..].to_vec();
        rotated.extend_from_slice(&core[..k]);
        // core = t⁻¹ · rotated · t with t = core[k..]
        let prefix = Word(self.0[..p].to_vec());
        let tail = if k == 0 {
            Word::identity()
        } else {
            Word(core[k..].to_vec())
        };
        (CyclicWord(rotated), prefix.multiply(&tail.invert()))
    }

    /// The unique `r` that is not a proper power with `self = r^m`, `m ≥ 1`.
    /// The identity is its own root.
    pub fn primitive_root(&self) -> Word {
        let (c, w) = self.cyclic_reduce();
        let n = c.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (d..n).all(|i| c.0[i] == c.0[i - d]))
            .unwrap_or(0);
        Word(c.0[..period].to_vec()).conjugate_by(&w)
    }

    pub fn cyclic_class(&self) -> CyclicWord {
        self.cyclic_reduce().0
    }

    /// Returns `w` with `self = w · other · w⁻¹` when the two words are
    /// conjugate.
    pub fn are_conjugate(&self, other: &Word) -> Option<Word> {
        let (cu, wu) = self.cyclic_reduce();
        let (cv, wv) = other.cyclic_reduce();
        if cu != cv {
            return None;
        }
        Some(wu.multiply(&wv.invert()))
    }
}

fn push_reduced(out: &mut Vec<Letter>, x: Letter) {
    if out.last() == Some(&x.inverse()) {
        out.pop();
    } else {
        out.push(x);
    }
}

/// Index of the lexicographically least rotation (smallest index on ties).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let mut best = 0;
    for k in 1..n {
        let cand = s[k..].iter().chain(&s[..k]);
        let cur = s[best..].iter().chain(&s[..best]);
        if cand.lt(cur) {
            best = k;
        }
    }
    best
}

impl From<Letter> for Word {
    fn from(x: Letter) -> Word {
        Word::letter(x)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word::reduce(iter)
    }
}

/// A cyclically reduced word stored in its least rotation: a conjugacy
/// class of the free group, i.e. a free homotopy class of loops.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The canonical representative as an ordinary word.
    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }
}

impl From<&Word> for CyclicWord {
    fn from(w: &Word) -> CyclicWord {
        w.cyclic_class()
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let g = letters[i].generator();
        let inv = letters[i].is_inverse();
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let run = (j - i) as i64;
        let exp = if inv { -run } else { run };
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        if exp == 1 {
            write!(f, "{}", g.name())?;
        } else {
            write!(f, "{}^{}", g.name(), exp)?;
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token `{token}` at byte {position}")]
    UnknownToken { token: String, position: usize },
    #[error("bad exponent `{exponent}` at byte {position}")]
    BadExponent { exponent: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownToken { position, .. } | ParseError::BadExponent { position, .. } => *position,
        }
    }
}

/// Whitespace-separated tokens with their byte offsets.
pub(crate) fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - s.as_ptr() as usize, t))
}

/// Split `name^exp` into name and exponent (default 1).
pub(crate) fn split_exponent(token: &str, position: usize) -> Result<(&str, i64), ParseError> {
    match token.split_once('^') {
        None => Ok((token, 1)),
        Some((name, exp)) => exp
            .parse::<i64>()
            .map(|e| (name, e))
            .map_err(|_| ParseError::BadExponent {
                exponent: exp.to_string(),
                position: position + name.len() + 1,
            }),
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Word, ParseError> {
        let mut out = Vec::new();
        for (pos, tok) in tokens(s) {
            let (name, exp) = split_exponent(tok, pos)?;
            let g = Generator::ALL
                .into_iter()
                .find(|g| g.name() == name)
                .ok_or_else(|| ParseError::UnknownToken {
                    token: name.to_string(),
                    position: pos,
                })?;
            let x = Letter::new(g, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                push_reduced(&mut out, x);
            }
        }
        Ok(Word(out))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<CyclicWord, D::Error> {
        let w = Word::deserialize(d)?;
        Ok(w.cyclic_class())
    }
}

/// Shorthand for tests and examples: parse a word that is known to be valid.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}
