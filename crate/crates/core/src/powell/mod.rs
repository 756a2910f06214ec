//! Models of the genus-two Goeritz generators `D_omega`, `D_eta12`,
//! `D_theta`, `D_nu` and the primed conjugates `D_omega'`, `D_nu'`.
//!
//! `D_omega` and `D_eta12` are given by formulas. `D_theta` and `D_nu` are
//! found by [`discover`] from constraint profiles: a prescribed homology
//! shadow, curves that must be preserved, and per-letter image templates.

pub mod discover;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use discover::{
    discover, search, ConstraintProfile, DiscoverError, Discovery, ImageTemplate, LetterTemplates, MAX_IMAGE_LEN_BOUND,
};

use crate::aut::{Endo, MappingClassModel};
use crate::homology::{abelianize, exponent_matrix, SymplecticMatrix};
use crate::twists::{boundary, delta1, delta2, Curve, TwistLibrary};
use crate::words::{Generator, Word};

/// Default image-length bound for the `D_theta` search.
pub const THETA_MAX_IMAGE_LEN: usize = 8;
/// Default image-length bound for the `D_nu` search.
pub const NU_MAX_IMAGE_LEN: usize = 13;
/// Conjugator bound for the shared slot of the `D_nu` handle-1 images.
pub const NU_SHARED_CONJUGATOR: usize = 5;
/// Conjugator bound for the `D_nu` image of `a2`.
pub const NU_A2_CONJUGATOR: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorName {
    #[serde(rename = "D_omega")]
    Omega,
    #[serde(rename = "D_eta12")]
    Eta12,
    #[serde(rename = "D_theta")]
    Theta,
    #[serde(rename = "D_nu")]
    Nu,
    #[serde(rename = "D_omega'")]
    OmegaPrime,
    #[serde(rename = "D_nu'")]
    NuPrime,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 6] = [
        GeneratorName::Omega,
        GeneratorName::Eta12,
        GeneratorName::Theta,
        GeneratorName::Nu,
        GeneratorName::OmegaPrime,
        GeneratorName::NuPrime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorName::Omega => "D_omega",
            GeneratorName::Eta12 => "D_eta12",
            GeneratorName::Theta => "D_theta",
            GeneratorName::Nu => "D_nu",
            GeneratorName::OmegaPrime => "D_omega'",
            GeneratorName::NuPrime => "D_nu'",
        }
    }

    pub fn parse(s: &str) -> Option<GeneratorName> {
        GeneratorName::ALL.into_iter().find(|g| g.as_str() == s)
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a generator model came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Formula {
        formula: String,
    },
    Discovered {
        profile: String,
        max_image_len: usize,
        /// Position in the sorted candidate list and its length.
        index: usize,
        of: usize,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Formula { formula } => write!(f, "formula({formula})"),
            Provenance::Discovered {
                profile,
                max_image_len,
                index,
                of,
            } => write!(f, "discovered({profile}, len<={max_image_len}, {index}/{of})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorModel {
    pub name: GeneratorName,
    pub model: MappingClassModel,
    pub shadow: SymplecticMatrix,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{name}: stored inverse does not invert the map")]
    Inverse { name: String },
    #[error("{name}: boundary word is not fixed")]
    Boundary { name: String },
    #[error("{name}: recorded shadow {recorded} differs from computed {computed}")]
    Shadow {
        name: String,
        recorded: String,
        computed: String,
    },
    #[error(transparent)]
    Homology(#[from] crate::homology::HomologyError),
}

impl GeneratorModel {
    pub fn new(name: GeneratorName, model: MappingClassModel, provenance: Provenance) -> GeneratorModel {
        let model = model.renamed(name.as_str());
        let shadow = exponent_matrix(&model.forward);
        GeneratorModel {
            name,
            model,
            shadow,
            provenance,
        }
    }

    /// Inverse round trip, `∂` fixed, and a symplectic shadow matching the record.
    pub fn validate(&self) -> Result<(), ModelError> {
        let name = self.name.to_string();
        let report = self.model.verify(&boundary());
        if !report.inverse_round_trip {
            return Err(ModelError::Inverse { name });
        }
        if !report.fixes_boundary {
            return Err(ModelError::Boundary { name });
        }
        let computed = abelianize(&self.model.forward)?;
        if computed != self.shadow {
            return Err(ModelError::Shadow {
                name,
                recorded: self.shadow.to_string(),
                computed: computed.to_string(),
            });
        }
        Ok(())
    }

    /// `c · self · c⁻¹`, renamed.
    pub fn conjugate_by(&self, c: &GeneratorModel, name: GeneratorName) -> GeneratorModel {
        let m = self.model.conjugate_by(&c.model);
        GeneratorModel::new(
            name,
            m,
            Provenance::Formula {
                formula: format!("{} {} {}^-1", c.name, self.name, c.name),
            },
        )
    }

    pub fn inverse(&self) -> GeneratorModel {
        GeneratorModel {
            name: self.name,
            model: self.model.inverse().renamed(self.name.as_str()),
            shadow: self.shadow.symplectic_inverse(),
            provenance: self.provenance.clone(),
        }
    }
}

/// `D_omega = (T_a1 T_b1)^3`, the half twist of the first handle.
pub fn half_twist(lib: &TwistLibrary) -> GeneratorModel {
    let m = lib.t_a1().compose(lib.t_b1()).pow(3);
    GeneratorModel::new(
        GeneratorName::Omega,
        m,
        Provenance::Formula {
            formula: "(T_a1 T_b1)^3".into(),
        },
    )
}

/// Which map plays the role of the handle exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SwapVariant {
    /// `a1↦a2, b1↦b2, a2↦K⁻¹a1K, b2↦K⁻¹b1K` with `K = [a2,b2]`.
    Standard,
    /// The inverse of `Standard`.
    Inverse,
    /// `Standard` followed by the boundary twist `T_bd`.
    BoundaryTwisted,
}

impl SwapVariant {
    pub const ALL: [SwapVariant; 3] = [
        SwapVariant::Standard,
        SwapVariant::Inverse,
        SwapVariant::BoundaryTwisted,
    ];
}

fn standard_swap() -> MappingClassModel {
    let k = delta2();
    let k_inv = k.invert();
    let g = |x: Generator| Word::generator(x);
    let forward = Endo::new([
        g(Generator::A2),
        g(Generator::B2),
        g(Generator::A1).conjugate_by(&k_inv),
        g(Generator::B1).conjugate_by(&k_inv),
    ]);
    let d1 = delta1();
    let backward = Endo::new([
        g(Generator::A2).conjugate_by(&d1),
        g(Generator::B2).conjugate_by(&d1),
        g(Generator::A1),
        g(Generator::B1),
    ]);
    MappingClassModel::new("D_eta12", forward, backward)
}

/// `D_eta12` in the requested variant.
pub fn swap(variant: SwapVariant, lib: &TwistLibrary) -> GeneratorModel {
    let base = standard_swap();
    let (m, formula) = match variant {
        SwapVariant::Standard => (base, "a1>a2 b1>b2 a2>K^-1 a1 K b2>K^-1 b1 K"),
        SwapVariant::Inverse => (base.inverse(), "(standard swap)^-1"),
        SwapVariant::BoundaryTwisted => (lib.t_bd().compose(&base), "T_bd (standard swap)"),
    };
    GeneratorModel::new(
        GeneratorName::Eta12,
        m,
        Provenance::Formula {
            formula: formula.into(),
        },
    )
}

/// A boundary twist expressed as a word in `D_omega`, `D_eta12`, `D_omega'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRealization {
    pub twist: String,
    pub word: crate::expr::ClassWord,
    pub exact: bool,
}

/// Expresses `T_d1`, `T_d2`, `T_bd` through the half twists and the swap:
/// `T_d1 = D_omega^2`, `T_d2 = D_omega'^2`, and `T_bd` from the swap square.
///
/// Each word is tried with both signs of its exponent; `exact` records
/// whether one of them matches the library twist as an endomorphism.
pub fn boundary_realizations(
    lib: &TwistLibrary,
    omega: &GeneratorModel,
    eta: &GeneratorModel,
    order: crate::expr::CompositionOrder,
) -> Vec<BoundaryRealization> {
    use crate::expr::ClassWord;
    let omega_p = omega.conjugate_by(eta, GeneratorName::OmegaPrime);
    let resolve = |n: &str| match n {
        "D_omega" => Some(omega.model.clone()),
        "D_eta12" => Some(eta.model.clone()),
        "D_omega'" => Some(omega_p.model.clone()),
        _ => None,
    };
    let bases = [
        (lib.t_d1(), ClassWord::factor("D_omega", 2)),
        (lib.t_d2(), ClassWord::factor("D_omega'", 2)),
        (
            lib.t_bd(),
            ClassWord::factor("D_eta12", 2).then("D_omega", 2).then("D_omega'", 2),
        ),
    ];
    bases
        .into_iter()
        .map(|(twist, base)| {
            let hit = [base.clone(), base.inverse()].into_iter().find(|cand| {
                cand.evaluate(order, resolve)
                    .map(|m| m.forward == twist.forward)
                    .unwrap_or(false)
            });
            BoundaryRealization {
                twist: twist.name.clone(),
                exact: hit.is_some(),
                word: hit.unwrap_or(base),
            }
        })
        .collect()
}

/// Direction of the handle slide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThetaDirection {
    /// `b1 ↦ b1 + b2`, `a2 ↦ a2 − a1`.
    Forward,
    /// The opposite slide.
    Reverse,
}

impl ThetaDirection {
    pub const ALL: [ThetaDirection; 2] = [ThetaDirection::Forward, ThetaDirection::Reverse];

    pub fn shadow(self) -> SymplecticMatrix {
        let m = SymplecticMatrix::from_columns([[1, 0, 0, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, 0, 0, 1]]);
        match self {
            ThetaDirection::Forward => m,
            ThetaDirection::Reverse => m.symplectic_inverse(),
        }
    }
}

/// `D_theta`: slide shadow, fixes `μ1` and `λ2`, those two letters map to
/// conjugates and the other two are free.
pub fn theta_profile(direction: ThetaDirection, max_image_len: usize) -> ConstraintProfile {
    let conj = ImageTemplate::Conjugate {
        max_conjugator: max_image_len.saturating_sub(1) / 2,
    };
    ConstraintProfile {
        name: match direction {
            ThetaDirection::Forward => "D_theta".into(),
            ThetaDirection::Reverse => "D_theta(reverse)".into(),
        },
        boundary: boundary(),
        shadow: direction.shadow(),
        fixed_curves: vec![Curve::Mu1, Curve::Lambda2],
        templates: LetterTemplates {
            a1: conj,
            b1: ImageTemplate::Free,
            a2: ImageTemplate::Free,
            b2: conj,
        },
        max_image_len,
        boundary_slot: 1,
    }
}

/// `D_nu`: trivial shadow; `a1, b1` conjugated by one shared word, `a2`
/// conjugated, `b2` solved from the boundary relation (which is where a
/// `δ1` insertion shows up). Fixes `μ2`.
pub fn nu_profile(max_image_len: usize) -> ConstraintProfile {
    let cap = max_image_len.saturating_sub(1) / 2;
    ConstraintProfile {
        name: "D_nu".into(),
        boundary: boundary(),
        shadow: SymplecticMatrix::identity(),
        fixed_curves: vec![Curve::Mu2],
        templates: LetterTemplates {
            a1: ImageTemplate::SharedConjugate {
                max_conjugator: cap.min(NU_SHARED_CONJUGATOR),
            },
            b1: ImageTemplate::SharedConjugate {
                max_conjugator: cap.min(NU_SHARED_CONJUGATOR),
            },
            a2: ImageTemplate::Conjugate {
                max_conjugator: cap.min(NU_A2_CONJUGATOR),
            },
            b2: ImageTemplate::Solved,
        },
        max_image_len,
        boundary_slot: 1,
    }
}

/// Wraps discovered models as generator models with provenance.
pub fn discovered_models(name: GeneratorName, d: &Discovery) -> Vec<GeneratorModel> {
    let of = d.models.len();
    d.models
        .iter()
        .enumerate()
        .map(|(index, m)| {
            GeneratorModel::new(
                name,
                m.clone(),
                Provenance::Discovered {
                    profile: d.profile.name.clone(),
                    max_image_len: d.profile.max_image_len,
                    index,
                    of,
                },
            )
        })
        .collect()
}
