use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::certificate::{assemble, Certificate};
use super::{
    lemma_check, pants_search, residual, word_c_expr, Bounds, ModelSet, PantsExponents, ToggleRestriction, Toggles,
};
use crate::expr::ClassWord;
use crate::powell::{
    boundary_realizations, discover, discovered_models, nu_profile, theta_profile, BoundaryRealization, DiscoverError,
    Discovery, GeneratorModel, GeneratorName, ThetaDirection,
};
use crate::twists::{validate_library, TwistLibrary};

/// Discovered candidates for every `D_theta` direction in play and for `D_nu`.
#[derive(Clone, Debug)]
pub struct Candidates {
    pub theta: Vec<(ThetaDirection, Result<Discovery, DiscoverError>)>,
    pub nu: Result<Discovery, DiscoverError>,
}

impl Candidates {
    pub fn theta(&self, dir: ThetaDirection) -> Option<&Result<Discovery, DiscoverError>> {
        self.theta.iter().find(|(d, _)| *d == dir).map(|(_, r)| r)
    }
}

/// Runs discovery for the `D_theta` directions allowed by `restriction` and for `D_nu`.
pub fn discover_candidates(bounds: &Bounds, restriction: &ToggleRestriction) -> Candidates {
    let theta = ThetaDirection::ALL
        .into_iter()
        .filter(|d| restriction.t4.is_none_or(|x| x == *d))
        .map(|d| (d, discover(&theta_profile(d, bounds.theta_max_image_len))))
        .collect();
    Candidates {
        theta,
        nu: discover(&nu_profile(bounds.nu_max_image_len)),
    }
}

/// The check at which a configuration was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Discovery,
    Library,
    Lemma,
    Residual,
    Pants,
    Realization,
    FinalWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFailure {
    pub toggles: Toggles,
    pub theta_index: Option<usize>,
    pub nu_index: Option<usize>,
    pub stage: Stage,
    pub detail: String,
}

impl fmt::Display for ConfigFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = |i: Option<usize>| i.map_or("-".to_string(), |i| i.to_string());
        write!(
            f,
            "{} theta#{} nu#{} {:?}: {}",
            self.toggles,
            idx(self.theta_index),
            idx(self.nu_index),
            self.stage,
            self.detail
        )
    }
}

/// Exhaustion without success: one entry per configuration tried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Error)]
pub struct TheoremFailure {
    pub bounds: Bounds,
    pub trace: Vec<ConfigFailure>,
}

impl fmt::Display for TheoremFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "no configuration verified within bounds theta<={} nu<={} |exp|<={}; raise the bounds",
            self.bounds.theta_max_image_len, self.bounds.nu_max_image_len, self.bounds.max_exp
        )?;
        for c in &self.trace {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// `D_nu = D_eta12^-1 · C · P^-1 · D_eta12` where `P` is the pants word.
pub(crate) fn derivation_word(pants: &PantsExponents) -> ClassWord {
    ClassWord::factor("D_eta12", -1)
        .concat(&word_c_expr())
        .concat(&pants.word().inverse())
        .concat(&ClassWord::factor("D_eta12", 1))
}

/// Replaces the boundary twists by their realizations and `D_omega'` by its definition.
pub(crate) fn expand(derivation: &ClassWord, realizations: &[BoundaryRealization]) -> ClassWord {
    let mut w = derivation.clone();
    for r in realizations {
        w = w.substitute(&r.twist, &r.word);
    }
    let omega_prime: ClassWord = "D_eta12 D_omega D_eta12^-1".parse().expect("literal word");
    w.substitute("D_omega'", &omega_prime)
}

/// For each factor, whether deleting it breaks equality with `D_nu`.
pub(crate) fn deletion_controls(models: &ModelSet, word: &ClassWord) -> Vec<bool> {
    (0..word.len())
        .map(|i| {
            models
                .evaluate(&word.without(i))
                .map(|m| m.forward != models.nu.model.forward)
                .unwrap_or(true)
        })
        .collect()
}

pub(crate) const FINAL_ALPHABET: [&str; 3] = ["D_omega", "D_eta12", "D_theta"];

fn attempt(
    toggles: Toggles,
    bounds: &Bounds,
    theta: &GeneratorModel,
    nu_base: &GeneratorModel,
    indices: (usize, usize),
    profiles: (&Discovery, &Discovery),
) -> Result<Certificate, ConfigFailure> {
    let fail = |stage: Stage, detail: String| ConfigFailure {
        toggles,
        theta_index: Some(indices.0),
        nu_index: Some(indices.1),
        stage,
        detail,
    };
    let models = ModelSet::new(toggles, theta.clone(), nu_base.clone());
    let lemma = lemma_check(&models);
    if let Some(bad) = lemma.first_mismatch() {
        return Err(fail(Stage::Lemma, format!("{} differs", bad.curve.name())));
    }
    let delta = residual(&models).map_err(|e| fail(Stage::Residual, e.to_string()))?;
    let pants = pants_search(&delta.forward, &models.library, bounds.max_exp)
        .map_err(|miss| fail(Stage::Pants, miss.to_string()))?;
    let realizations = boundary_realizations(&models.library, &models.omega, &models.eta, toggles.t1);
    if let Some(r) = realizations.iter().find(|r| !r.exact) {
        return Err(fail(Stage::Realization, format!("{} is not realized", r.twist)));
    }
    let derivation = derivation_word(&pants);
    let final_word = expand(&derivation, &realizations);
    if let Some(n) = final_word.names().find(|n| !FINAL_ALPHABET.contains(n)) {
        return Err(fail(Stage::FinalWord, format!("unexpected name {n}")));
    }
    let value = models
        .evaluate(&final_word)
        .map_err(|e| fail(Stage::FinalWord, e.to_string()))?;
    if value.forward != models.nu.model.forward || value.backward != models.nu.model.backward {
        return Err(fail(Stage::FinalWord, "final word does not evaluate to D_nu".into()));
    }
    let controls = deletion_controls(&models, &final_word);
    Ok(assemble(
        &models,
        bounds,
        [&profiles.0.profile, &profiles.1.profile],
        lemma,
        delta.forward,
        pants,
        realizations,
        derivation,
        final_word,
        value.forward,
        controls,
    ))
}

/// Discovers candidates and certifies the first working configuration.
pub fn theorem_verify(bounds: &Bounds, restriction: &ToggleRestriction) -> Result<Certificate, TheoremFailure> {
    let candidates = discover_candidates(bounds, restriction);
    theorem_verify_with(bounds, restriction, &candidates)
}

/// [`theorem_verify`] over precomputed candidates.
///
/// Configurations are toggle assignments in [`Toggles::all`] order, then
/// `D_theta` candidates, then `D_nu` candidates. Within one assignment the
/// candidate pairs are checked concurrently; the earliest success wins.
pub fn theorem_verify_with(
    bounds: &Bounds,
    restriction: &ToggleRestriction,
    candidates: &Candidates,
) -> Result<Certificate, TheoremFailure> {
    let mut trace = Vec::new();
    let whole = |toggles: Toggles, stage: Stage, detail: String| ConfigFailure {
        toggles,
        theta_index: None,
        nu_index: None,
        stage,
        detail,
    };
    for toggles in restriction.assignments() {
        let report = validate_library(&TwistLibrary::new(toggles.t3));
        if let Some(bad) = report.failures().next() {
            trace.push(whole(toggles, Stage::Library, format!("{} fails", bad.relation)));
            continue;
        }
        let theta_d = match candidates.theta(toggles.t4) {
            Some(Ok(d)) => d,
            Some(Err(e)) => {
                trace.push(whole(toggles, Stage::Discovery, e.to_string()));
                continue;
            }
            None => {
                trace.push(whole(toggles, Stage::Discovery, "direction not discovered".into()));
                continue;
            }
        };
        let nu_d = match &candidates.nu {
            Ok(d) => d,
            Err(e) => {
                trace.push(whole(toggles, Stage::Discovery, e.to_string()));
                continue;
            }
        };
        let thetas = discovered_models(GeneratorName::Theta, theta_d);
        let nus = discovered_models(GeneratorName::Nu, nu_d);
        let pairs: Vec<(usize, usize)> = (0..thetas.len())
            .flat_map(|i| (0..nus.len()).map(move |j| (i, j)))
            .collect();
        let results: Vec<Result<Certificate, ConfigFailure>> = pairs
            .par_iter()
            .map(|&(i, j)| attempt(toggles, bounds, &thetas[i], &nus[j], (i, j), (theta_d, nu_d)))
            .collect();
        for r in results {
            match r {
                Ok(cert) => return Ok(cert),
                Err(f) => trace.push(f),
            }
        }
    }
    Err(TheoremFailure { bounds: *bounds, trace })
}

/// A configuration whose curve images agree, with the identity negative control.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    pub toggles: Toggles,
    pub theta: GeneratorModel,
    pub nu: GeneratorModel,
    pub report: super::LemmaReport,
    /// The same comparison with `D_nu` replaced by the identity.
    pub negative_control: super::LemmaReport,
}

/// First configuration, in [`theorem_verify_with`] order, passing [`lemma_check`].
pub fn lemma_search(
    restriction: &ToggleRestriction,
    candidates: &Candidates,
) -> Result<LemmaOutcome, Vec<ConfigFailure>> {
    let mut trace = Vec::new();
    for toggles in restriction.assignments() {
        let (Some(Ok(theta_d)), Ok(nu_d)) = (candidates.theta(toggles.t4), &candidates.nu) else {
            trace.push(ConfigFailure {
                toggles,
                theta_index: None,
                nu_index: None,
                stage: Stage::Discovery,
                detail: "no candidates".into(),
            });
            continue;
        };
        let thetas = discovered_models(GeneratorName::Theta, theta_d);
        let nus = discovered_models(GeneratorName::Nu, nu_d);
        for (i, theta) in thetas.iter().enumerate() {
            for (j, nu) in nus.iter().enumerate() {
                let models = ModelSet::new(toggles, theta.clone(), nu.clone());
                let report = lemma_check(&models);
                if let Some(bad) = report.first_mismatch() {
                    trace.push(ConfigFailure {
                        toggles,
                        theta_index: Some(i),
                        nu_index: Some(j),
                        stage: Stage::Lemma,
                        detail: format!("{} differs", bad.curve.name()),
                    });
                    continue;
                }
                let identity = GeneratorModel::new(
                    GeneratorName::Nu,
                    crate::aut::MappingClassModel::identity(),
                    crate::powell::Provenance::Formula {
                        formula: "identity".into(),
                    },
                );
                let negative_control = lemma_check(&models.with_nu(identity));
                return Ok(LemmaOutcome {
                    toggles,
                    theta: theta.clone(),
                    nu: models.nu.clone(),
                    report,
                    negative_control,
                });
            }
        }
    }
    Err(trace)
}
