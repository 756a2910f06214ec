//! Executable form of the two identities: the curve-image comparison of
//! `C = D_omega'^-1 D_theta^-1 D_omega' D_theta^-1` with `D_nu'`, and the
//! exact factorization of `D_nu` through `D_omega`, `D_eta12`, `D_theta`.
//!
//! Every orientation choice that cannot be read off from the surface model
//! is a [`Toggles`] field. [`theorem_verify`] walks the toggle space and the
//! discovered candidates in a fixed order and certifies the first
//! configuration that works; [`certificate_check`] re-evaluates a
//! certificate with no search at all.

mod certificate;
mod theorem;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use certificate::{certificate_check, digest, Certificate, CheckReport, Conventions, EPISTEMICS};
pub use theorem::{
    discover_candidates, lemma_search, theorem_verify, theorem_verify_with, Candidates, ConfigFailure, LemmaOutcome,
    Stage, TheoremFailure,
};

use crate::aut::{Endo, MappingClassModel};
use crate::expr::{ClassWord, CompositionOrder};
use crate::powell::{
    half_twist, swap, GeneratorModel, GeneratorName, Provenance, SwapVariant, ThetaDirection, NU_MAX_IMAGE_LEN,
    THETA_MAX_IMAGE_LEN,
};
use crate::twists::{boundary, Curve, Handedness, TwistLibrary};
use crate::words::{CyclicWord, Generator, Word};

/// Whether the discovered `D_nu` candidate is used as is or inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NuDirection {
    Forward,
    Inverse,
}

impl NuDirection {
    pub const ALL: [NuDirection; 2] = [NuDirection::Forward, NuDirection::Inverse];
}

/// One assignment of the convention toggles `t1 t3 t4 t5 t6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Toggles {
    pub t1: CompositionOrder,
    pub t3: Handedness,
    pub t4: ThetaDirection,
    pub t5: NuDirection,
    pub t6: SwapVariant,
}

impl Default for Toggles {
    fn default() -> Toggles {
        Toggles {
            t1: CompositionOrder::RightmostFirst,
            t3: Handedness::Left,
            t4: ThetaDirection::Forward,
            t5: NuDirection::Forward,
            t6: SwapVariant::Standard,
        }
    }
}

impl Toggles {
    /// Every assignment, `t1` outermost and `t6` innermost, each in declaration order.
    pub fn all() -> Vec<Toggles> {
        let mut out = Vec::new();
        for t1 in CompositionOrder::ALL {
            for t3 in Handedness::ALL {
                for t4 in ThetaDirection::ALL {
                    for t5 in NuDirection::ALL {
                        for t6 in SwapVariant::ALL {
                            out.push(Toggles { t1, t3, t4, t5, t6 });
                        }
                    }
                }
            }
        }
        out
    }
}

fn code_t1(v: CompositionOrder) -> &'static str {
    match v {
        CompositionOrder::RightmostFirst => "R",
        CompositionOrder::LeftmostFirst => "L",
    }
}
fn code_t3(v: Handedness) -> &'static str {
    match v {
        Handedness::Left => "L",
        Handedness::Right => "R",
    }
}
fn code_t4(v: ThetaDirection) -> &'static str {
    match v {
        ThetaDirection::Forward => "F",
        ThetaDirection::Reverse => "R",
    }
}
fn code_t5(v: NuDirection) -> &'static str {
    match v {
        NuDirection::Forward => "F",
        NuDirection::Inverse => "I",
    }
}
fn code_t6(v: SwapVariant) -> &'static str {
    match v {
        SwapVariant::Standard => "S",
        SwapVariant::Inverse => "I",
        SwapVariant::BoundaryTwisted => "B",
    }
}

impl fmt::Display for Toggles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t1={},t3={},t4={},t5={},t6={}",
            code_t1(self.t1),
            code_t3(self.t3),
            code_t4(self.t4),
            code_t5(self.t5),
            code_t6(self.t6)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToggleError {
    #[error("toggle restriction `{0}`: expected `tN=V`")]
    Malformed(String),
    #[error("unknown toggle `{0}` (known: t1 t3 t4 t5 t6)")]
    UnknownToggle(String),
    #[error("toggle {toggle}: unknown value `{value}`")]
    UnknownValue { toggle: String, value: String },
}

/// A subset of the toggle space: each toggle either free or pinned.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToggleRestriction {
    pub t1: Option<CompositionOrder>,
    pub t3: Option<Handedness>,
    pub t4: Option<ThetaDirection>,
    pub t5: Option<NuDirection>,
    pub t6: Option<SwapVariant>,
}

impl ToggleRestriction {
    pub fn pinned(t: Toggles) -> ToggleRestriction {
        ToggleRestriction {
            t1: Some(t.t1),
            t3: Some(t.t3),
            t4: Some(t.t4),
            t5: Some(t.t5),
            t6: Some(t.t6),
        }
    }

    pub fn allows(&self, t: &Toggles) -> bool {
        self.t1.is_none_or(|v| v == t.t1)
            && self.t3.is_none_or(|v| v == t.t3)
            && self.t4.is_none_or(|v| v == t.t4)
            && self.t5.is_none_or(|v| v == t.t5)
            && self.t6.is_none_or(|v| v == t.t6)
    }

    pub fn assignments(&self) -> Vec<Toggles> {
        Toggles::all().into_iter().filter(|t| self.allows(t)).collect()
    }
}

impl FromStr for ToggleRestriction {
    type Err = ToggleError;

    /// `t1=R,t3=L` style; an empty string leaves everything free.
    fn from_str(s: &str) -> Result<ToggleRestriction, ToggleError> {
        let mut r = ToggleRestriction::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| ToggleError::Malformed(part.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || ToggleError::UnknownValue {
                toggle: k.to_string(),
                value: v.to_string(),
            };
            match k {
                "t1" => {
                    r.t1 = Some(
                        CompositionOrder::ALL
                            .into_iter()
                            .find(|x| code_t1(*x) == v)
                            .ok_or_else(bad)?,
                    )
                }
                "t3" => r.t3 = Some(Handedness::ALL.into_iter().find(|x| code_t3(*x) == v).ok_or_else(bad)?),
                "t4" => {
                    r.t4 = Some(
                        ThetaDirection::ALL
                            .into_iter()
                            .find(|x| code_t4(*x) == v)
                            .ok_or_else(bad)?,
                    )
                }
                "t5" => {
                    r.t5 = Some(
                        NuDirection::ALL
                            .into_iter()
                            .find(|x| code_t5(*x) == v)
                            .ok_or_else(bad)?,
                    )
                }
                "t6" => {
                    r.t6 = Some(
                        SwapVariant::ALL
                            .into_iter()
                            .find(|x| code_t6(*x) == v)
                            .ok_or_else(bad)?,
                    )
                }
                _ => return Err(ToggleError::UnknownToggle(k.to_string())),
            }
        }
        Ok(r)
    }
}

/// Search bounds used by discovery and the pants search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub theta_max_image_len: usize,
    pub nu_max_image_len: usize,
    pub max_exp: u32,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            theta_max_image_len: THETA_MAX_IMAGE_LEN,
            nu_max_image_len: NU_MAX_IMAGE_LEN,
            max_exp: 4,
        }
    }
}

/// The written word `C`.
pub fn word_c_expr() -> ClassWord {
    "D_omega'^-1 D_theta^-1 D_omega' D_theta^-1"
        .parse()
        .expect("literal word")
}

/// All generator models for one configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSet {
    pub toggles: Toggles,
    pub library: TwistLibrary,
    pub omega: GeneratorModel,
    pub eta: GeneratorModel,
    pub theta: GeneratorModel,
    /// The discovered `D_nu` candidate before `t5` is applied.
    pub nu_base: GeneratorModel,
    pub nu: GeneratorModel,
    pub omega_prime: GeneratorModel,
    pub nu_prime: GeneratorModel,
}

/// `c x c^-1` as a written word under the configured order.
fn primed(x: &GeneratorModel, c: &GeneratorModel, name: GeneratorName, order: CompositionOrder) -> GeneratorModel {
    let m = order.product([c.model.clone(), x.model.clone(), c.model.inverse()].iter());
    GeneratorModel::new(
        name,
        m,
        Provenance::Formula {
            formula: format!("{} {} {}^-1", c.name, x.name, c.name),
        },
    )
}

impl ModelSet {
    pub fn new(toggles: Toggles, theta: GeneratorModel, nu_base: GeneratorModel) -> ModelSet {
        let library = TwistLibrary::new(toggles.t3);
        let omega = half_twist(&library);
        let eta = swap(toggles.t6, &library);
        let nu = match toggles.t5 {
            NuDirection::Forward => nu_base.clone(),
            NuDirection::Inverse => nu_base.inverse(),
        };
        let omega_prime = primed(&omega, &eta, GeneratorName::OmegaPrime, toggles.t1);
        let nu_prime = primed(&nu, &eta, GeneratorName::NuPrime, toggles.t1);
        ModelSet {
            toggles,
            library,
            omega,
            eta,
            theta,
            nu_base,
            nu,
            omega_prime,
            nu_prime,
        }
    }

    /// Copy with `D_nu` (and so `D_nu'`) replaced.
    pub fn with_nu(&self, nu_base: GeneratorModel) -> ModelSet {
        ModelSet::new(self.toggles, self.theta.clone(), nu_base)
    }

    /// Named mapping classes available to words: generators, primes, twists.
    pub fn resolve(&self, name: &str) -> Option<MappingClassModel> {
        if let Some(g) = GeneratorName::parse(name) {
            let m = match g {
                GeneratorName::Omega => &self.omega,
                GeneratorName::Eta12 => &self.eta,
                GeneratorName::Theta => &self.theta,
                GeneratorName::Nu => &self.nu,
                GeneratorName::OmegaPrime => &self.omega_prime,
                GeneratorName::NuPrime => &self.nu_prime,
            };
            return Some(m.model.clone());
        }
        self.library.by_name(name).map(|t| t.model.clone())
    }

    pub fn evaluate(&self, w: &ClassWord) -> Result<MappingClassModel, crate::expr::ExprError> {
        w.evaluate(self.toggles.t1, |n| self.resolve(n))
    }

    pub fn generators(&self) -> [&GeneratorModel; 6] {
        [
            &self.omega,
            &self.eta,
            &self.theta,
            &self.nu,
            &self.omega_prime,
            &self.nu_prime,
        ]
    }
}

/// `C` under the configured composition order.
pub fn word_c(models: &ModelSet) -> MappingClassModel {
    models
        .evaluate(&word_c_expr())
        .expect("word C uses known names")
        .renamed("C")
}

/// Images of one curve under `C` and `D_nu'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub curve: Curve,
    pub c_image: Word,
    pub nu_prime_image: Word,
    pub c_class: CyclicWord,
    pub nu_prime_class: CyclicWord,
    /// `w` with `C(c) = w · D_nu'(c) · w⁻¹`, when the classes agree.
    pub witness: Option<Word>,
}

impl CurveTrace {
    pub fn equal(&self) -> bool {
        self.c_class == self.nu_prime_class
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub curves: Vec<CurveTrace>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.curves.iter().all(CurveTrace::equal)
    }

    pub fn first_mismatch(&self) -> Option<&CurveTrace> {
        self.curves.iter().find(|c| !c.equal())
    }
}

/// Compares the images of `μ1 λ1 μ2 λ2` under `c` and `nu_prime` up to conjugacy.
pub fn compare_curves(c: &Endo, nu_prime: &Endo) -> LemmaReport {
    let curves = Curve::HANDLE_CURVES
        .iter()
        .map(|&curve| {
            let x = curve.word();
            let c_image = c.apply(&x);
            let nu_prime_image = nu_prime.apply(&x);
            let witness = c_image.are_conjugate(&nu_prime_image);
            CurveTrace {
                curve,
                c_class: c_image.cyclic_class(),
                nu_prime_class: nu_prime_image.cyclic_class(),
                c_image,
                nu_prime_image,
                witness,
            }
        })
        .collect();
    LemmaReport { curves }
}

pub fn lemma_check(models: &ModelSet) -> LemmaReport {
    compare_curves(&word_c(models).forward, &models.nu_prime.model.forward)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidualError {
    #[error("residual moves {curve} off its conjugacy class")]
    MovesCurve { curve: &'static str },
    #[error("residual does not fix the boundary word")]
    Boundary,
}

/// `Δ = D_nu'^-1 C` as a written word.
pub fn residual_expr() -> ClassWord {
    ClassWord::factor("D_nu'", -1).concat(&word_c_expr())
}

/// `Δ`, checked to fix the four handle curves up to conjugacy and `∂` exactly.
pub fn residual(models: &ModelSet) -> Result<MappingClassModel, ResidualError> {
    let delta = models
        .evaluate(&residual_expr())
        .expect("residual word uses known names")
        .renamed("Delta");
    check_residual(&delta.forward)?;
    Ok(delta)
}

pub fn check_residual(delta: &Endo) -> Result<(), ResidualError> {
    for c in Curve::HANDLE_CURVES {
        if delta.apply(&c.word()).cyclic_class() != c.cyclic() {
            return Err(ResidualError::MovesCurve { curve: c.name() });
        }
    }
    let bd = boundary();
    if delta.apply(&bd) != bd {
        return Err(ResidualError::Boundary);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PantsExponents {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl PantsExponents {
    /// `T_d1^p T_d2^q T_bd^r` as a written word.
    pub fn word(&self) -> ClassWord {
        ClassWord::factor("T_d1", self.p)
            .then("T_d2", self.q)
            .then("T_bd", self.r)
            .reduced()
    }
}

/// Closest candidate when the pants search fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsMiss {
    pub bound: u32,
    pub nearest: PantsExponents,
    /// Letters whose images differ under the nearest candidate.
    pub differing: Vec<String>,
    /// If `Δ·(nearest)⁻¹` is inner, the conjugating word (diagnostic only).
    pub inner_remainder: Option<Word>,
}

impl fmt::Display for PantsMiss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no (p,q,r) with |.| <= {}; nearest ({},{},{}) differs on {}",
            self.bound,
            self.nearest.p,
            self.nearest.q,
            self.nearest.r,
            self.differing.join(" ")
        )?;
        if let Some(w) = &self.inner_remainder {
            write!(f, "; remainder is inner by `{w}`")?;
        }
        Ok(())
    }
}

fn power_table(t: &MappingClassModel, k: i64) -> Vec<Endo> {
    (-k..=k).map(|e| t.pow(e).forward).collect()
}

/// Exhaustive search for `Δ = T_d1^p T_d2^q T_bd^r`, `|p|,|q|,|r| ≤ k`,
/// as exact equality; the first hit in lexicographic order of `(p,q,r)`.
pub fn pants_search(delta: &Endo, lib: &TwistLibrary, k: u32) -> Result<PantsExponents, PantsMiss> {
    let kk = k as i64;
    let d1 = power_table(lib.t_d1(), kk);
    let d2 = power_table(lib.t_d2(), kk);
    let bd = power_table(lib.t_bd(), kk);
    let mut best: Option<(usize, PantsExponents, Vec<String>)> = None;
    for (i, x) in d1.iter().enumerate() {
        for (j, y) in d2.iter().enumerate() {
            let xy = x.compose(y);
            for (l, z) in bd.iter().enumerate() {
                let cand = xy.compose(z);
                let e = PantsExponents {
                    p: i as i64 - kk,
                    q: j as i64 - kk,
                    r: l as i64 - kk,
                };
                if cand == *delta {
                    return Ok(e);
                }
                let differing: Vec<String> = Generator::ALL
                    .into_iter()
                    .filter(|&g| cand.image(g) != delta.image(g))
                    .map(|g| g.name().to_string())
                    .collect();
                if best.as_ref().is_none_or(|b| differing.len() < b.0) {
                    best = Some((differing.len(), e, differing));
                }
            }
        }
    }
    let (_, nearest, differing) = best.expect("at least one candidate");
    let inv = pants_endo(lib, nearest).1;
    let inner_remainder = delta.compose(&inv).is_inner();
    Err(PantsMiss {
        bound: k,
        nearest,
        differing,
        inner_remainder,
    })
}

/// `T_d1^p T_d2^q T_bd^r` and its inverse.
pub fn pants_endo(lib: &TwistLibrary, e: PantsExponents) -> (Endo, Endo) {
    let m = lib
        .t_d1()
        .pow(e.p)
        .compose(&lib.t_d2().pow(e.q))
        .compose(&lib.t_bd().pow(e.r));
    (m.forward, m.backward)
}
