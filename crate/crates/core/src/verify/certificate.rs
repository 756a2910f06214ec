use std::fmt;

use serde::{Deserialize, Serialize};

use super::theorem::{deletion_controls, derivation_word, expand, FINAL_ALPHABET};
use super::{
    check_residual, lemma_check, pants_endo, residual, word_c, word_c_expr, Bounds, CurveTrace, LemmaReport, ModelSet,
    NuDirection, PantsExponents, Toggles,
};
use crate::aut::{Endo, MappingClassModel};
use crate::expr::ClassWord;
use crate::powell::{
    boundary_realizations, half_twist, nu_profile, swap, theta_profile, BoundaryRealization, ConstraintProfile,
    GeneratorModel, GeneratorName, Provenance,
};
use crate::twists::{boundary, validate_library, Curve, TwistLibrary};
use crate::words::{CyclicWord, Letter, Word};

pub const FORMAT: &str = "goeritz-certificate/1";

/// What a certificate proves, and what it does not.
pub const EPISTEMICS: &str = "There exist models of D_omega, D_eta12, D_theta and D_nu on the genus-two \
surface with one boundary circle that satisfy every homological, fixed-curve, boundary-word and \
template constraint recorded here, and for these models the curve images of mu1, lambda1, mu2, lambda2 \
under C and D_nu' agree and D_nu equals final_word exactly as automorphisms of the free group. The \
constraints determine each discovered generator only up to twists along the pants curves delta1, \
delta2 and the boundary; the factorization absorbs exactly that ambiguity. No statement is made \
about the figures themselves.";

/// Fixed conventions, recorded so a certificate can be read without this crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub letter_order: Vec<String>,
    pub boundary: Word,
    pub commutator: String,
    pub composition: String,
    pub twist_images: String,
    pub curves: Vec<(String, CyclicWord)>,
}

impl Conventions {
    pub fn current() -> Conventions {
        Conventions {
            letter_order: Letter::all().map(|x| Word::letter(x).to_string()).collect(),
            boundary: boundary(),
            commutator: "[x,y] = x y x^-1 y^-1".into(),
            composition: "f g means apply g first when t1 = R, f first when t1 = L".into(),
            twist_images: "T_a1: b1 -> b1 a1; T_b1: a1 -> a1 b1^-1; T_a2: b2 -> b2 a2; T_b2: a2 -> a2 b2^-1".into(),
            curves: Curve::ALL.iter().map(|c| (c.name().to_string(), c.cyclic())).collect(),
        }
    }
}

/// Self-contained record of a verified factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub conventions: Conventions,
    pub toggles: Toggles,
    pub bounds: Bounds,
    pub twists: Vec<MappingClassModel>,
    /// `D_omega D_eta12 D_theta D_nu D_omega' D_nu'`, in that order.
    pub generators: Vec<GeneratorModel>,
    /// The discovered `D_nu` candidate before `t5` is applied.
    pub nu_base: GeneratorModel,
    /// The `D_theta` and `D_nu` search profiles.
    pub profiles: Vec<ConstraintProfile>,
    pub word_c: ClassWord,
    pub c_images: Endo,
    pub lemma: Vec<CurveTrace>,
    pub residual: Endo,
    pub pants: PantsExponents,
    /// Exponent bound the pants search ran with.
    pub pants_searched_to: u32,
    pub boundary_realizations: Vec<BoundaryRealization>,
    /// `D_nu` before the boundary twists and `D_omega'` are expanded.
    pub derivation: ClassWord,
    pub final_word: ClassWord,
    pub final_images: Endo,
    /// Entry `i` is true when deleting factor `i` of `final_word` breaks equality.
    pub deletion_controls: Vec<bool>,
    /// Uses of equality up to inner automorphism; exact equality was used if empty.
    pub inner_fallback: Vec<String>,
    pub epistemics: String,
    pub digest: String,
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble(
    models: &ModelSet,
    bounds: &Bounds,
    profiles: [&ConstraintProfile; 2],
    lemma: LemmaReport,
    residual: Endo,
    pants: PantsExponents,
    realizations: Vec<BoundaryRealization>,
    derivation: ClassWord,
    final_word: ClassWord,
    final_images: Endo,
    deletion_controls: Vec<bool>,
) -> Certificate {
    let mut cert = Certificate {
        format: FORMAT.into(),
        conventions: Conventions::current(),
        toggles: models.toggles,
        bounds: *bounds,
        twists: models.library.all().map(|t| t.model.clone()).collect(),
        generators: models.generators().into_iter().cloned().collect(),
        nu_base: models.nu_base.clone(),
        profiles: profiles.into_iter().cloned().collect(),
        word_c: word_c_expr(),
        c_images: word_c(models).forward,
        lemma: lemma.curves,
        residual,
        pants,
        pants_searched_to: bounds.max_exp,
        boundary_realizations: realizations,
        derivation,
        final_word,
        final_images,
        deletion_controls,
        inner_fallback: Vec::new(),
        epistemics: EPISTEMICS.into(),
        digest: String::new(),
    };
    cert.digest = digest(&cert);
    cert
}

/// FNV-1a over the JSON form with the digest field blanked, as 16 hex digits.
pub fn digest(cert: &Certificate) -> String {
    let blank = Certificate {
        digest: String::new(),
        ..cert.clone()
    };
    let text = serde_json::to_string(&blank).expect("certificates serialize");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Outcome of [`certificate_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    /// Location of the first check that failed.
    pub divergence: Option<String>,
    pub checks_passed: usize,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.divergence {
            None => write!(f, "certificate verified ({} checks)", self.checks_passed),
            Some(d) => write!(f, "certificate rejected after {} checks: {d}", self.checks_passed),
        }
    }
}

struct Checker {
    passed: usize,
}

impl Checker {
    fn ensure(&mut self, ok: bool, location: impl FnOnce() -> String) -> Result<(), String> {
        if ok {
            self.passed += 1;
            Ok(())
        } else {
            Err(location())
        }
    }
}

fn model_eq(a: &MappingClassModel, b: &MappingClassModel) -> bool {
    a.forward == b.forward && a.backward == b.backward
}

fn first_image_diff(a: &Endo, b: &Endo) -> String {
    crate::words::Generator::ALL
        .into_iter()
        .find(|&g| a.image(g) != b.image(g))
        .map(|g| g.name().to_string())
        .unwrap_or_else(|| "-".into())
}

/// Re-evaluates every claim of `cert` from scratch using word and
/// automorphism operations only.
pub fn certificate_check(cert: &Certificate) -> CheckReport {
    let mut ck = Checker { passed: 0 };
    let result = run_checks(cert, &mut ck);
    CheckReport {
        ok: result.is_ok(),
        divergence: result.err(),
        checks_passed: ck.passed,
    }
}

fn run_checks(cert: &Certificate, ck: &mut Checker) -> Result<(), String> {
    let t = cert.toggles;
    ck.ensure(cert.format == FORMAT, || "format".into())?;
    ck.ensure(cert.conventions == Conventions::current(), || "conventions".into())?;

    let lib = TwistLibrary::new(t.t3);
    let report = validate_library(&lib);
    ck.ensure(report.passed(), || {
        format!(
            "twists: relation `{}` fails for toggles {t}",
            report.failures().next().map(|r| r.relation.as_str()).unwrap_or("")
        )
    })?;
    ck.ensure(cert.twists.len() == 7, || "twists: expected seven".into())?;
    for (i, (rec, tw)) in cert.twists.iter().zip(lib.all()).enumerate() {
        ck.ensure(rec.name == tw.name && model_eq(rec, &tw.model), || {
            format!("twists[{i}] ({})", tw.name)
        })?;
    }

    ck.ensure(cert.generators.len() == 6, || "generators: expected six".into())?;
    let names = [
        GeneratorName::Omega,
        GeneratorName::Eta12,
        GeneratorName::Theta,
        GeneratorName::Nu,
        GeneratorName::OmegaPrime,
        GeneratorName::NuPrime,
    ];
    for (g, n) in cert.generators.iter().zip(names) {
        ck.ensure(g.name == n, || format!("generators: expected {n}, found {}", g.name))?;
        ck.ensure(g.model.name == n.as_str(), || format!("generators.{n}.model.name"))?;
        ck.ensure(g.validate().is_ok(), || {
            format!("generators.{n}: {}", g.validate().unwrap_err())
        })?;
    }
    let rec = |n: GeneratorName| &cert.generators[names.iter().position(|x| *x == n).expect("known name")];

    let theta_p = theta_profile(t.t4, cert.bounds.theta_max_image_len);
    let nu_p = nu_profile(cert.bounds.nu_max_image_len);
    ck.ensure(cert.profiles.len() == 2 && cert.profiles[0] == theta_p, || {
        "profiles[0] (D_theta, t4)".into()
    })?;
    ck.ensure(cert.profiles[1] == nu_p, || "profiles[1] (D_nu)".into())?;
    let theta = rec(GeneratorName::Theta);
    ck.ensure(theta_p.admits(&theta.model.forward), || {
        "generators.D_theta: violates its profile".into()
    })?;
    ck.ensure(
        cert.nu_base.name == GeneratorName::Nu && cert.nu_base.model.name == GeneratorName::Nu.as_str(),
        || "nu_base: name".into(),
    )?;
    ck.ensure(
        cert.nu_base.validate().is_ok() && nu_p.admits(&cert.nu_base.model.forward),
        || "nu_base: violates the D_nu profile".into(),
    )?;
    for (g, p) in [(theta, &theta_p), (&cert.nu_base, &nu_p)] {
        let ok = match &g.provenance {
            Provenance::Discovered {
                profile,
                max_image_len,
                index,
                of,
            } => *profile == p.name && *max_image_len == p.max_image_len && index < of,
            Provenance::Formula { .. } => false,
        };
        ck.ensure(ok, || format!("generators.{}: provenance", g.name))?;
    }

    let models = ModelSet::new(t, theta.clone(), cert.nu_base.clone());
    ck.ensure(model_eq(&models.omega.model, &half_twist(&lib).model), || {
        "internal".into()
    })?;
    ck.ensure(model_eq(&models.eta.model, &swap(t.t6, &lib).model), || {
        "internal".into()
    })?;
    let expected_nu = match t.t5 {
        NuDirection::Forward => cert.nu_base.model.clone(),
        NuDirection::Inverse => cert.nu_base.model.inverse(),
    };
    ck.ensure(model_eq(&rec(GeneratorName::Nu).model, &expected_nu), || {
        format!("generators.D_nu: not nu_base under t5={:?}", t.t5)
    })?;
    for (g, n) in models.generators().into_iter().zip(names) {
        let r = rec(n);
        ck.ensure(*g == *r, || {
            let side = if g.model.forward != r.model.forward {
                format!("forward.{}", first_image_diff(&g.model.forward, &r.model.forward))
            } else if g.model.backward != r.model.backward {
                format!("backward.{}", first_image_diff(&g.model.backward, &r.model.backward))
            } else {
                "shadow or provenance".into()
            };
            format!("generators.{n}.{side}")
        })?;
    }

    ck.ensure(cert.word_c == word_c_expr(), || "word_c".into())?;
    let c = word_c(&models);
    ck.ensure(c.forward == cert.c_images, || {
        format!("c_images.{}", first_image_diff(&c.forward, &cert.c_images))
    })?;
    let lemma = lemma_check(&models);
    for (i, curve) in lemma.curves.iter().enumerate() {
        ck.ensure(cert.lemma.get(i) == Some(curve), || {
            format!("lemma[{i}] ({})", curve.curve.name())
        })?;
        ck.ensure(curve.equal(), || format!("lemma[{i}]: classes differ"))?;
        let w = curve.witness.as_ref();
        ck.ensure(
            w.is_some_and(|w| curve.nu_prime_image.conjugate_by(w) == curve.c_image),
            || format!("lemma[{i}]: witness"),
        )?;
    }
    ck.ensure(cert.lemma.len() == lemma.curves.len(), || "lemma: length".into())?;

    let delta = residual(&models).map_err(|e| format!("residual: {e}"))?;
    ck.ensure(delta.forward == cert.residual, || {
        format!("residual.{}", first_image_diff(&delta.forward, &cert.residual))
    })?;
    ck.ensure(check_residual(&cert.residual).is_ok(), || {
        "residual: postconditions".into()
    })?;
    ck.ensure(cert.pants_searched_to == cert.bounds.max_exp, || {
        "pants_searched_to: differs from bounds.max_exp".into()
    })?;
    let k = cert.bounds.max_exp as i64;
    let p = cert.pants;
    ck.ensure(p.p.abs() <= k && p.q.abs() <= k && p.r.abs() <= k, || {
        "pants: out of bounds".into()
    })?;
    ck.ensure(pants_endo(&lib, p).0 == cert.residual, || {
        "pants: exponents do not produce the residual".into()
    })?;

    let realizations = boundary_realizations(&lib, &models.omega, &models.eta, t.t1);
    ck.ensure(realizations == cert.boundary_realizations, || {
        "boundary_realizations".into()
    })?;
    ck.ensure(realizations.iter().all(|r| r.exact), || {
        "boundary_realizations: not exact".into()
    })?;

    let derivation = derivation_word(&p);
    ck.ensure(derivation == cert.derivation, || "derivation".into())?;
    let final_word = expand(&derivation, &realizations);
    ck.ensure(final_word == cert.final_word, || "final_word".into())?;
    ck.ensure(final_word.names().all(|n| FINAL_ALPHABET.contains(&n)), || {
        "final_word: uses names outside D_omega D_eta12 D_theta".into()
    })?;
    let value = models.evaluate(&final_word).map_err(|e| format!("final_word: {e}"))?;
    ck.ensure(value.forward == cert.final_images, || "final_images".into())?;
    ck.ensure(value.forward == expected_nu.forward, || {
        format!(
            "final_word: differs from D_nu on {}",
            first_image_diff(&value.forward, &expected_nu.forward)
        )
    })?;
    ck.ensure(value.backward == expected_nu.backward, || {
        "final_word: inverse differs from D_nu^-1".into()
    })?;
    let controls = deletion_controls(&models, &final_word);
    ck.ensure(controls == cert.deletion_controls, || "deletion_controls".into())?;
    ck.ensure(controls.iter().all(|&b| b), || {
        "deletion_controls: a factor is redundant".into()
    })?;

    ck.ensure(cert.inner_fallback.is_empty(), || "inner_fallback".into())?;
    ck.ensure(cert.epistemics == EPISTEMICS, || "epistemics".into())?;
    ck.ensure(cert.digest == digest(cert), || "digest".into())?;
    Ok(())
}
