//! Endomorphisms of the free group given by the images of the four
//! generators, and mapping-class models that carry a stored inverse.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Generator, Letter, ParseError, Word};

/// An endomorphism, determined by the images of `a1 b1 a2 b2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endo {
    images: [Word; 4],
}

impl Endo {
    pub fn identity() -> Endo {
        Endo {
            images: Generator::ALL.map(Word::generator),
        }
    }

    pub fn new(images: [Word; 4]) -> Endo {
        Endo { images }
    }

    /// Inner automorphism `x ↦ c·x·c⁻¹`.
    pub fn inner(c: &Word) -> Endo {
        Endo {
            images: Generator::ALL.map(|g| Word::generator(g).conjugate_by(c)),
        }
    }

    pub fn images(&self) -> &[Word; 4] {
        &self.images
    }

    pub fn image(&self, g: Generator) -> &Word {
        &self.images[g.index()]
    }

    pub fn with_image(mut self, g: Generator, image: Word) -> Endo {
        self.images[g.index()] = image;
        self
    }

    pub fn is_identity(&self) -> bool {
        *self == Endo::identity()
    }

    pub fn apply(&self, u: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(u.len() * 2);
        for &x in u.letters() {
            let img = &self.images[x.generator().index()];
            if x.is_inverse() {
                for &y in img.letters().iter().rev() {
                    push(&mut out, y.inverse());
                }
            } else {
                for &y in img.letters() {
                    push(&mut out, y);
                }
            }
        }
        Word::reduce(out)
    }

    /// `self ∘ g`: `g` acts first.
    pub fn compose(&self, g: &Endo) -> Endo {
        Endo {
            images: g.images.clone().map(|img| self.apply(&img)),
        }
    }

    /// Non-negative power by repeated composition.
    pub fn pow(&self, k: u32) -> Endo {
        (0..k).fold(Endo::identity(), |acc, _| self.compose(&acc))
    }

    /// Returns `w` with `f(x) = w·x·w⁻¹` for every generator, if `self` is
    /// inner. Candidates are `w₀·a1^k` for `|k| ≤ |f(a1)|`, where `w₀`
    /// conjugates `a1` onto `f(a1)`.
    pub fn is_inner(&self) -> Option<Word> {
        let fa = self.image(Generator::A1);
        let a1 = Word::generator(Generator::A1);
        let w0 = fa.are_conjugate(&a1)?;
        let bound = fa.len() as i64;
        let mut ks: Vec<i64> = (-bound..=bound).collect();
        ks.sort_by_key(|k| (k.abs(), *k));
        ks.into_iter()
            .map(|k| w0.multiply(&a1.pow(k)))
            .find(|c| Endo::inner(c) == *self)
    }

    /// Maximal image length.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }
}

fn push(out: &mut Vec<Letter>, x: Letter) {
    if out.last() == Some(&x.inverse()) {
        out.pop();
    } else {
        out.push(x);
    }
}

impl fmt::Display for Endo {
    /// Four `letter = word` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in Generator::ALL {
            writeln!(f, "{} = {}", g.name(), self.image(g))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Generator::ALL
            .iter()
            .map(|g| format!("{}↦{}", g.name(), self.image(*g)))
            .collect();
        write!(f, "Endo[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoParseError {
    #[error("line {line}: expected `<letter> = <word>`")]
    Malformed { line: usize },
    #[error("line {line}: {source}")]
    Word { line: usize, source: ParseError },
    #[error("generator {0} assigned twice")]
    Duplicate(&'static str),
    #[error("generator {0} has no image")]
    Missing(&'static str),
}

impl FromStr for Endo {
    type Err = EndoParseError;

    fn from_str(s: &str) -> Result<Endo, EndoParseError> {
        let mut images: [Option<Word>; 4] = Default::default();
        for (i, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (lhs, rhs) = line.split_once('=').ok_or(EndoParseError::Malformed { line: i + 1 })?;
            let g = Generator::ALL
                .into_iter()
                .find(|g| g.name() == lhs.trim())
                .ok_or(EndoParseError::Malformed { line: i + 1 })?;
            let word = rhs
                .parse::<Word>()
                .map_err(|source| EndoParseError::Word { line: i + 1, source })?;
            if images[g.index()].replace(word).is_some() {
                return Err(EndoParseError::Duplicate(g.name()));
            }
        }
        let mut out = Endo::identity();
        for g in Generator::ALL {
            let img = images[g.index()].take().ok_or(EndoParseError::Missing(g.name()))?;
            out.images[g.index()] = img;
        }
        Ok(out)
    }
}

impl Serialize for Endo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(4))?;
        for g in Generator::ALL {
            m.serialize_entry(g.name(), self.image(g))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Endo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Endo, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Images {
            a1: Word,
            b1: Word,
            a2: Word,
            b2: Word,
        }
        let i = Images::deserialize(d)?;
        Ok(Endo::new([i.a1, i.b1, i.a2, i.b2]))
    }
}

/// An automorphism with its inverse stored alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClassModel {
    pub name: String,
    pub forward: Endo,
    pub backward: Endo,
}

impl MappingClassModel {
    pub fn new(name: impl Into<String>, forward: Endo, backward: Endo) -> MappingClassModel {
        MappingClassModel {
            name: name.into(),
            forward,
            backward,
        }
    }

    pub fn identity() -> MappingClassModel {
        MappingClassModel::new("id", Endo::identity(), Endo::identity())
    }

    pub fn inverse(&self) -> MappingClassModel {
        MappingClassModel {
            name: format!("{}^-1", self.name),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> MappingClassModel {
        self.name = name.into();
        self
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MappingClassModel) -> MappingClassModel {
        MappingClassModel {
            name: format!("{} {}", self.name, other.name),
            forward: self.forward.compose(&other.forward),
            backward: other.backward.compose(&self.backward),
        }
    }

    /// Signed power; negative exponents use the stored inverse.
    pub fn pow(&self, k: i64) -> MappingClassModel {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as u32;
        MappingClassModel {
            name: format!("{}^{}", self.name, k),
            forward: base.forward.pow(n),
            backward: base.backward.pow(n),
        }
    }

    /// `c · self · c⁻¹` (with `c⁻¹` acting first).
    pub fn conjugate_by(&self, c: &MappingClassModel) -> MappingClassModel {
        MappingClassModel {
            name: format!("({} {} {}^-1)", c.name, self.name, c.name),
            forward: c.forward.compose(&self.forward).compose(&c.backward),
            backward: c.forward.compose(&self.backward).compose(&c.backward),
        }
    }

    pub fn apply(&self, u: &Word) -> Word {
        self.forward.apply(u)
    }

    pub fn verify(&self, boundary: &Word) -> MappingClassReport {
        verify_mapping_class(self, boundary)
    }
}

/// Outcome of [`verify_mapping_class`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClassReport {
    pub name: String,
    pub inverse_round_trip: bool,
    pub fixes_boundary: bool,
}

impl MappingClassReport {
    pub fn passed(&self) -> bool {
        self.inverse_round_trip && self.fixes_boundary
    }
}

/// Checks the stored inverse on all four generators (both orders) and that
/// the forward map fixes `boundary` exactly.
pub fn verify_mapping_class(m: &MappingClassModel, boundary: &Word) -> MappingClassReport {
    let id = Endo::identity();
    MappingClassReport {
        name: m.name.clone(),
        inverse_round_trip: m.forward.compose(&m.backward) == id && m.backward.compose(&m.forward) == id,
        fixes_boundary: m.forward.apply(boundary) == *boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    fn twist_a1() -> Endo {
        Endo::identity().with_image(Generator::B1, w("b1 a1"))
    }

    fn twist_a1_inv() -> Endo {
        Endo::identity().with_image(Generator::B1, w("b1 a1^-1"))
    }

    #[test]
    fn apply_examples() {
        let u = w("b1 a2^-1 a1");
        assert_eq!(Endo::identity().apply(&u), u);
        assert_eq!(twist_a1().apply(&w("b1 b1")), w("b1 a1 b1 a1"));
        assert_eq!(twist_a1().apply(&Word::identity()), Word::identity());
        assert_eq!(twist_a1().apply(&w("b1^-1")), w("a1^-1 b1^-1"));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(twist_a1().compose(&Endo::identity()), twist_a1());
        assert!(twist_a1().compose(&twist_a1_inv()).is_identity());
        // rightmost acts first
        let f = Endo::identity().with_image(Generator::A1, w("a2"));
        let g = Endo::identity().with_image(Generator::B1, w("a1"));
        assert_eq!(f.compose(&g).image(Generator::B1), &w("a2"));
        assert_eq!(g.compose(&f).image(Generator::B1), &w("a1"));
    }

    #[test]
    fn verify_reports() {
        let bd = w("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1");
        assert!(MappingClassModel::identity().verify(&bd).passed());
        let t = MappingClassModel::new("T_a1", twist_a1(), twist_a1_inv());
        assert!(t.verify(&bd).passed());
        let bad = Endo::identity().with_image(Generator::A1, w("a2"));
        let m = MappingClassModel::new("bad", bad.clone(), bad);
        let r = m.verify(&bd);
        assert!(!r.inverse_round_trip);
    }

    #[test]
    fn inner_detection() {
        let c = w("a2 b2");
        let f = Endo::inner(&c);
        let found = f.is_inner().unwrap();
        assert_eq!(Endo::inner(&found), f);
        assert_eq!(found, c);
        assert_eq!(Endo::identity().is_inner(), Some(Word::identity()));
        assert_eq!(twist_a1().is_inner(), None);
    }

    #[test]
    fn inner_detection_with_letter_commuting_witness() {
        let c = w("b2 a1^2");
        let found = Endo::inner(&c).is_inner().unwrap();
        assert_eq!(Endo::inner(&found), Endo::inner(&c));
    }

    #[test]
    fn text_round_trip() {
        let f = twist_a1().compose(&Endo::inner(&w("a2")));
        let s = f.to_string();
        assert_eq!(s.lines().count(), 4);
        assert_eq!(s.parse::<Endo>().unwrap(), f);
        assert!(matches!(
            "a1 = a1\nb1 = b1\na2 = a2".parse::<Endo>(),
            Err(EndoParseError::Missing("b2"))
        ));
    }

    #[test]
    fn model_power_and_conjugate() {
        let t = MappingClassModel::new("T", twist_a1(), twist_a1_inv());
        let t3 = t.pow(-3);
        assert_eq!(t3.forward.image(Generator::B1), &w("b1 a1^-3"));
        let s = Endo::identity()
            .with_image(Generator::A1, w("a2"))
            .with_image(Generator::A2, w("a1"))
            .with_image(Generator::B1, w("b2"))
            .with_image(Generator::B2, w("b1"));
        let sw = MappingClassModel::new("S", s.clone(), s);
        let c = t.conjugate_by(&sw);
        assert_eq!(c.forward.image(Generator::B2), &w("b2 a2"));
        assert!(c.forward.compose(&c.backward).is_identity());
    }
}
