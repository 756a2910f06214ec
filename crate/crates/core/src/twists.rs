//! The genus-two surface with one boundary circle, its Dehn twists, and the
//! relation suite that certifies the twist formulas.
//!
//! `π₁` is free on `a1 b1 a2 b2` with boundary word `∂ = [a1,b1]·[a2,b2]`.
//! Meridians are `μ_i = a_i`, longitudes `λ_i = b_i`. The curves
//! `δ1 = [a1,b1]`, `δ2 = [a2,b2]` and `∂` bound the pair of pants left
//! after cutting out the two handles.

use serde::{Deserialize, Serialize};

use crate::aut::{Endo, MappingClassModel};
use crate::homology::{abelianize, exponent_matrix, transvection, HClass, SymplecticMatrix};
use crate::words::{CyclicWord, Generator, Word};

/// Orientation convention for boundary twists and transvections.
///
/// With `Left`, `T_δ` conjugates by `δ⁻¹` and a twist acts on homology by
/// `x ↦ x − ⟨x,c⟩c`; `Right` is the mirror choice. The elementary twist
/// formulas are fixed, so only one of the two is consistent with them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub const ALL: [Handedness; 2] = [Handedness::Left, Handedness::Right];

    /// Exponent `ε` of the conjugating boundary word and the transvection sign.
    pub fn epsilon(self) -> i64 {
        match self {
            Handedness::Left => -1,
            Handedness::Right => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Mu1,
    Lambda1,
    Mu2,
    Lambda2,
    Delta1,
    Delta2,
    Boundary,
}

impl Curve {
    pub const ALL: [Curve; 7] = [
        Curve::Mu1,
        Curve::Lambda1,
        Curve::Mu2,
        Curve::Lambda2,
        Curve::Delta1,
        Curve::Delta2,
        Curve::Boundary,
    ];

    /// The meridians and longitudes of the two handles.
    pub const HANDLE_CURVES: [Curve; 4] = [Curve::Mu1, Curve::Lambda1, Curve::Mu2, Curve::Lambda2];

    pub fn name(self) -> &'static str {
        match self {
            Curve::Mu1 => "mu1",
            Curve::Lambda1 => "lambda1",
            Curve::Mu2 => "mu2",
            Curve::Lambda2 => "lambda2",
            Curve::Delta1 => "delta1",
            Curve::Delta2 => "delta2",
            Curve::Boundary => "boundary",
        }
    }

    pub fn word(self) -> Word {
        let g = |g| Word::generator(g);
        match self {
            Curve::Mu1 => g(Generator::A1),
            Curve::Lambda1 => g(Generator::B1),
            Curve::Mu2 => g(Generator::A2),
            Curve::Lambda2 => g(Generator::B2),
            Curve::Delta1 => delta1(),
            Curve::Delta2 => delta2(),
            Curve::Boundary => boundary(),
        }
    }

    pub fn cyclic(self) -> CyclicWord {
        self.word().cyclic_class()
    }
}

pub fn delta1() -> Word {
    Word::commutator(&Word::generator(Generator::A1), &Word::generator(Generator::B1))
}

pub fn delta2() -> Word {
    Word::commutator(&Word::generator(Generator::A2), &Word::generator(Generator::B2))
}

/// `∂ = [a1,b1]·[a2,b2]`.
pub fn boundary() -> Word {
    delta1().multiply(&delta2())
}

/// The fixed surface model: boundary word and named curve table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub rank: usize,
    pub boundary: Word,
    pub curves: Vec<(String, CyclicWord)>,
}

impl Default for SurfaceModel {
    fn default() -> Self {
        SurfaceModel {
            rank: 4,
            boundary: boundary(),
            curves: Curve::ALL.iter().map(|c| (c.name().to_string(), c.cyclic())).collect(),
        }
    }
}

/// A Dehn twist: its core curve, the automorphism, and its homology shadow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistGenerator {
    pub name: String,
    pub curve: Word,
    pub model: MappingClassModel,
    pub shadow: SymplecticMatrix,
}

impl TwistGenerator {
    fn new(name: &str, curve: Word, forward: Endo, backward: Endo) -> TwistGenerator {
        let shadow = exponent_matrix(&forward);
        TwistGenerator {
            name: name.to_string(),
            curve,
            model: MappingClassModel::new(name, forward, backward),
            shadow,
        }
    }
}

fn handle_twist(name: &str, curve: Generator, moved: Generator, image: &str, inverse: &str) -> TwistGenerator {
    let fwd = Endo::identity().with_image(moved, image.parse().expect("twist literal"));
    let bwd = Endo::identity().with_image(moved, inverse.parse().expect("twist literal"));
    TwistGenerator::new(name, Word::generator(curve), fwd, bwd)
}

/// `T_a1, T_b1, T_a2, T_b2` in right-multiplication form.
pub fn elementary_twists() -> [TwistGenerator; 4] {
    use Generator::*;
    [
        handle_twist("T_a1", A1, B1, "b1 a1", "b1 a1^-1"),
        handle_twist("T_b1", B1, A1, "a1 b1^-1", "a1 b1"),
        handle_twist("T_a2", A2, B2, "b2 a2", "b2 a2^-1"),
        handle_twist("T_b2", B2, A2, "a2 b2^-1", "a2 b2"),
    ]
}

fn conjugating_twist(name: &str, curve: Word, moved: &[Generator], eps: i64) -> TwistGenerator {
    let endo = |k: i64| {
        let c = curve.pow(k);
        moved.iter().fold(Endo::identity(), |f, &g| {
            f.with_image(g, Word::generator(g).conjugate_by(&c))
        })
    };
    TwistGenerator::new(name, curve.clone(), endo(eps), endo(-eps))
}

/// `T_δ1, T_δ2, T_∂`: conjugation by `δ^ε` on the letters the curve encloses.
pub fn boundary_twists(hand: Handedness) -> [TwistGenerator; 3] {
    use Generator::*;
    let e = hand.epsilon();
    [
        conjugating_twist("T_d1", delta1(), &[A1, B1], e),
        conjugating_twist("T_d2", delta2(), &[A2, B2], e),
        conjugating_twist("T_bd", boundary(), &Generator::ALL, e),
    ]
}

/// The seven twists in the order `T_a1 T_b1 T_a2 T_b2 T_d1 T_d2 T_bd`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLibrary {
    pub handedness: Handedness,
    pub elementary: [TwistGenerator; 4],
    pub boundary: [TwistGenerator; 3],
}

impl TwistLibrary {
    pub fn new(hand: Handedness) -> TwistLibrary {
        TwistLibrary {
            handedness: hand,
            elementary: elementary_twists(),
            boundary: boundary_twists(hand),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &TwistGenerator> {
        self.elementary.iter().chain(self.boundary.iter())
    }

    pub fn t_a1(&self) -> &MappingClassModel {
        &self.elementary[0].model
    }
    pub fn t_b1(&self) -> &MappingClassModel {
        &self.elementary[1].model
    }
    pub fn t_a2(&self) -> &MappingClassModel {
        &self.elementary[2].model
    }
    pub fn t_b2(&self) -> &MappingClassModel {
        &self.elementary[3].model
    }
    pub fn t_d1(&self) -> &MappingClassModel {
        &self.boundary[0].model
    }
    pub fn t_d2(&self) -> &MappingClassModel {
        &self.boundary[1].model
    }
    pub fn t_bd(&self) -> &MappingClassModel {
        &self.boundary[2].model
    }

    pub fn by_name(&self, name: &str) -> Option<&TwistGenerator> {
        self.all().find(|t| t.name == name)
    }
}

/// One named check of the relation suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LibraryReport {
    pub handedness: Handedness,
    pub checks: Vec<RelationCheck>,
}

impl LibraryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs the relation suite on a twist library. All comparisons are exact
/// equalities of endomorphisms.
pub fn validate_library(lib: &TwistLibrary) -> LibraryReport {
    let mut checks = Vec::new();
    let mut check = |relation: String, passed: bool| checks.push(RelationCheck { relation, passed });
    let bd = boundary();

    for t in lib.all() {
        check(format!("{} fixes boundary", t.name), t.model.apply(&bd) == bd);
        let id = Endo::identity();
        check(
            format!("{} stored inverse", t.name),
            t.model.forward.compose(&t.model.backward) == id && t.model.backward.compose(&t.model.forward) == id,
        );
        let core = &t.curve;
        check(
            format!("{} fixes its core curve", t.name),
            t.model.apply(core).are_conjugate(core).is_some(),
        );
    }

    let [ta1, tb1, ta2, tb2] = &lib.elementary;
    for (x, y) in [(ta1, tb1), (ta2, tb2)] {
        let (f, g) = (&x.model.forward, &y.model.forward);
        check(
            format!("braid {0} {1} {0} = {1} {0} {1}", x.name, y.name),
            f.compose(g).compose(f) == g.compose(f).compose(g),
        );
    }
    for x in [ta1, tb1] {
        for y in [ta2, tb2] {
            let (f, g) = (&x.model.forward, &y.model.forward);
            check(format!("commute {} {}", x.name, y.name), f.compose(g) == g.compose(f));
        }
    }
    for (x, y, d) in [(ta1, tb1, &lib.boundary[0]), (ta2, tb2, &lib.boundary[1])] {
        let six = x.model.forward.compose(&y.model.forward).pow(6);
        check(
            format!("chain ({} {})^6 = {}", x.name, y.name, d.name),
            six == d.model.forward,
        );
    }
    let sign = lib.handedness.epsilon();
    for t in lib.all() {
        let expected = transvection(&HClass::of_word(&t.curve), sign);
        let symplectic = abelianize(&t.model.forward).is_ok();
        check(
            format!("{} shadow is the transvection", t.name),
            symplectic && t.shadow == expected,
        );
    }
    LibraryReport {
        handedness: lib.handedness,
        checks,
    }
}

/// Validates both handedness values and returns the one that passes, if
/// exactly one does.
pub fn accepted_handedness() -> Option<Handedness> {
    let passing: Vec<Handedness> = Handedness::ALL
        .into_iter()
        .filter(|&h| validate_library(&TwistLibrary::new(h)).passed())
        .collect();
    match passing.as_slice() {
        [h] => Some(*h),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn boundary_word_shape() {
        let bd = boundary();
        assert_eq!(bd.len(), 8);
        assert_eq!(bd.cyclic_class().len(), 8);
        assert_eq!(bd, w("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1"));
    }

    #[test]
    fn elementary_twist_examples() {
        let lib = TwistLibrary::new(Handedness::Left);
        assert_eq!(lib.t_a1().apply(&boundary()), boundary());
        assert_eq!(lib.t_a1().apply(&w("b1")), w("b1 a1"));
        assert_eq!(lib.t_a1().apply(&w("a2")), w("a2"));
    }

    #[test]
    fn boundary_twist_examples() {
        let lib = TwistLibrary::new(Handedness::Left);
        assert_eq!(lib.t_d1().apply(&boundary()), boundary());
        assert_eq!(abelianize(&lib.t_d1().forward).unwrap(), SymplecticMatrix::identity());
        let u = w("a1 b2^-1 a2 b1");
        assert!(lib.t_bd().apply(&u).are_conjugate(&u).is_some());
    }

    #[test]
    fn exactly_one_handedness_passes() {
        assert!(validate_library(&TwistLibrary::new(Handedness::Left)).passed());
        let right = validate_library(&TwistLibrary::new(Handedness::Right));
        assert!(!right.passed());
        assert!(right.failures().any(|c| c.relation.starts_with("chain")));
        assert_eq!(accepted_handedness(), Some(Handedness::Left));
    }

    #[test]
    fn broken_twist_fails_braid() {
        let mut lib = TwistLibrary::new(Handedness::Left);
        let fwd = Endo::identity().with_image(Generator::B1, w("b1 a1 a1"));
        let bwd = Endo::identity().with_image(Generator::B1, w("b1 a1^-2"));
        lib.elementary[0].model = MappingClassModel::new("T_a1", fwd, bwd);
        let report = validate_library(&lib);
        let failed: Vec<_> = report.failures().map(|c| c.relation.clone()).collect();
        assert!(failed.iter().any(|r| r.starts_with("braid T_a1")), "{failed:?}");
    }

    #[test]
    fn disjoint_twists_commute() {
        let lib = TwistLibrary::new(Handedness::Left);
        let f = lib.t_a1().forward.compose(&lib.t_b2().forward);
        let g = lib.t_b2().forward.compose(&lib.t_a1().forward);
        assert_eq!(f, g);
    }

    #[test]
    fn half_twist_shadow_signature() {
        let lib = TwistLibrary::new(Handedness::Left);
        let x = lib.t_a1().forward.compose(&lib.t_b1().forward);
        let m = exponent_matrix(&x);
        assert_eq!(m.pow(6), SymplecticMatrix::identity());
        assert_ne!(m.pow(2), SymplecticMatrix::identity());
        assert_ne!(m.pow(3), SymplecticMatrix::identity());
        assert_eq!(m.pow(3), SymplecticMatrix::diagonal([-1, -1, 1, 1]));
    }
}
