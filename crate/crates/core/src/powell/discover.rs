//! Exhaustive search for automorphisms satisfying a [`ConstraintProfile`].
//!
//! Each letter image comes from a template. The boundary relation
//! `[A1,B1]·[A2,B2] = ∂` ties the two handles together and is used either
//! as a meet-in-the-middle join or, when one letter is marked
//! [`ImageTemplate::Solved`], to solve for that letter by conjugacy.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{Endo, MappingClassModel};
use crate::homology::{exponent_matrix, HClass, SymplecticMatrix};
use crate::twists::{boundary, Curve};
use crate::words::{Generator, Letter, Word};

/// Hard ceiling on `max_image_len` accepted by [`discover`].
pub const MAX_IMAGE_LEN_BOUND: usize = 24;

/// How the image of one letter is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImageTemplate {
    /// Every reduced word with the prescribed homology class.
    Free,
    /// `g·x·g⁻¹` for `|g| ≤ max_conjugator`.
    Conjugate { max_conjugator: usize },
    /// Like `Conjugate`, but one `g` is shared by every letter with this template.
    SharedConjugate { max_conjugator: usize },
    /// Determined by the boundary relation once the other three are chosen.
    Solved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LetterTemplates {
    pub a1: ImageTemplate,
    pub b1: ImageTemplate,
    pub a2: ImageTemplate,
    pub b2: ImageTemplate,
}

impl LetterTemplates {
    pub fn uniform(t: ImageTemplate) -> LetterTemplates {
        LetterTemplates {
            a1: t,
            b1: t,
            a2: t,
            b2: t,
        }
    }

    pub fn get(&self, g: Generator) -> ImageTemplate {
        match g {
            Generator::A1 => self.a1,
            Generator::B1 => self.b1,
            Generator::A2 => self.a2,
            Generator::B2 => self.b2,
        }
    }
}

/// Search constraints for one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintProfile {
    pub name: String,
    /// Must equal the surface boundary word; stored so the file is self-describing.
    pub boundary: Word,
    pub shadow: SymplecticMatrix,
    /// Curves that must map to conjugates of themselves.
    pub fixed_curves: Vec<Curve>,
    pub templates: LetterTemplates,
    pub max_image_len: usize,
    /// Inverse candidates may differ from a true inverse by `inner(∂^j)`, `|j| ≤ boundary_slot`.
    pub boundary_slot: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoverError {
    #[error("profile {name}: max image length {len} exceeds the bound {MAX_IMAGE_LEN_BOUND}")]
    TooLong { name: String, len: usize },
    #[error("profile {name}: boundary word `{found}` is not the surface boundary")]
    Boundary { name: String, found: String },
    #[error("profile {name}: prescribed shadow is not symplectic")]
    NotSymplectic { name: String },
    #[error("profile {name}: {reason}")]
    Template { name: String, reason: String },
    #[error("profile {name}: no candidate with image length <= {len}; raise the bounds")]
    Empty { name: String, len: usize },
}

/// Result of a discovery run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    pub profile: ConstraintProfile,
    /// Number of endomorphisms passing every forward filter.
    pub forward_candidates: usize,
    /// Same count for the inverse profile.
    pub inverse_candidates: usize,
    /// Candidates that admit an inverse, in lexicographic order of forward images.
    pub models: Vec<MappingClassModel>,
}

impl ConstraintProfile {
    /// Only the identity satisfies this at length 1.
    pub fn identity() -> ConstraintProfile {
        ConstraintProfile {
            name: "identity".into(),
            boundary: boundary(),
            shadow: SymplecticMatrix::identity(),
            fixed_curves: Curve::HANDLE_CURVES.to_vec(),
            templates: LetterTemplates::uniform(ImageTemplate::Free),
            max_image_len: 1,
            boundary_slot: 0,
        }
    }

    /// Profile the inverse of a solution must satisfy.
    pub fn inverse_profile(&self) -> ConstraintProfile {
        ConstraintProfile {
            name: format!("{}^-1", self.name),
            shadow: self.shadow.symplectic_inverse(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), DiscoverError> {
        let name = self.name.clone();
        if self.max_image_len > MAX_IMAGE_LEN_BOUND {
            return Err(DiscoverError::TooLong {
                name,
                len: self.max_image_len,
            });
        }
        if self.boundary != boundary() {
            return Err(DiscoverError::Boundary {
                name,
                found: self.boundary.to_string(),
            });
        }
        if !self.shadow.is_symplectic() {
            return Err(DiscoverError::NotSymplectic { name });
        }
        let solved: Vec<Generator> = Generator::ALL
            .into_iter()
            .filter(|&g| self.templates.get(g) == ImageTemplate::Solved)
            .collect();
        if solved.len() > 1 {
            return Err(DiscoverError::Template {
                name,
                reason: "at most one letter may be solved".into(),
            });
        }
        let shared: Vec<usize> = Generator::ALL
            .into_iter()
            .filter_map(|g| match self.templates.get(g) {
                ImageTemplate::SharedConjugate { max_conjugator } => Some(max_conjugator),
                _ => None,
            })
            .collect();
        if shared.windows(2).any(|w| w[0] != w[1]) {
            return Err(DiscoverError::Template {
                name,
                reason: "shared conjugator bounds disagree".into(),
            });
        }
        Ok(())
    }

    fn shared_bound(&self) -> Option<usize> {
        Generator::ALL.into_iter().find_map(|g| match self.templates.get(g) {
            ImageTemplate::SharedConjugate { max_conjugator } => Some(max_conjugator),
            _ => None,
        })
    }

    fn solved(&self) -> Option<Generator> {
        Generator::ALL
            .into_iter()
            .find(|&g| self.templates.get(g) == ImageTemplate::Solved)
    }

    /// Checks a complete candidate against every filter.
    pub fn admits(&self, f: &Endo) -> bool {
        let bd = boundary();
        f.max_image_len() <= self.max_image_len
            && exponent_matrix(f) == self.shadow
            && f.apply(&bd) == bd
            && self
                .fixed_curves
                .iter()
                .all(|c| f.apply(&c.word()).cyclic_class() == c.cyclic())
    }
}

/// All reduced words of length `≤ max_len`, shortest first.
pub fn words_up_to(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 7);
        for u in &frontier {
            for x in Letter::all() {
                if u.letters().last() != Some(&x.inverse()) {
                    next.push(u.multiply(&Word::letter(x)));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All reduced words of length `≤ max_len` whose exponent sums equal `class`.
pub fn words_with_class(class: HClass, max_len: usize) -> Vec<Word> {
    fn go(cur: &mut Vec<Letter>, rest: &mut [i64; 4], budget: usize, out: &mut Vec<Word>) {
        if rest.iter().all(|&x| x == 0) {
            out.push(Word::reduce(cur.iter().copied()));
        }
        if budget == 0 {
            return;
        }
        for x in Letter::all() {
            if cur.last() == Some(&x.inverse()) {
                continue;
            }
            let i = x.generator().index();
            rest[i] -= x.sign();
            let dist: i64 = rest.iter().map(|v| v.abs()).sum();
            if (dist as usize) < budget {
                cur.push(x);
                go(cur, rest, budget - 1, out);
                cur.pop();
            }
            rest[i] += x.sign();
        }
    }
    let mut out = Vec::new();
    let mut rest = class.0;
    go(&mut Vec::new(), &mut rest, max_len, &mut out);
    out
}

fn conjugates(g: Generator, max_conjugator: usize, max_len: usize) -> Vec<Word> {
    let x = Word::generator(g);
    let mut out: Vec<Word> = words_up_to(max_conjugator)
        .iter()
        .map(|c| x.conjugate_by(c))
        .filter(|u| u.len() <= max_len)
        .collect();
    out.sort();
    out.dedup();
    out
}

fn word_hash(u: &Word) -> u64 {
    let mut h = DefaultHasher::new();
    u.hash(&mut h);
    h.finish()
}

/// Solves `[X, Y] = r` for the unknown letter given its partner.
///
/// With `x_known`, returns all `Y` with `[x, Y] = r`; otherwise all `X`
/// with `[X, y] = r`. Solutions differ by powers of the partner's root.
fn solve_commutator(known: &Word, r: &Word, known_is_first: bool, max_len: usize) -> Vec<Word> {
    let (lhs, base) = if known_is_first {
        // x Y x⁻¹ Y⁻¹ = r  ⇔  Y x⁻¹ Y⁻¹ = x⁻¹ r
        let xi = known.invert();
        (xi.multiply(r), xi)
    } else {
        // X y X⁻¹ = r y
        (r.multiply(known), known.clone())
    };
    let Some(w0) = lhs.are_conjugate(&base) else {
        return Vec::new();
    };
    let root = base.primitive_root();
    let span = (2 * max_len + 2) as i64;
    (-span..=span)
        .map(|k| w0.multiply(&root.pow(k)))
        .filter(|u| {
            let c = if known_is_first {
                Word::commutator(known, u)
            } else {
                Word::commutator(u, known)
            };
            u.len() <= max_len && c == *r
        })
        .collect()
}

/// Pools for every letter whose template does not depend on the shared conjugator.
fn base_pools(p: &ConstraintProfile) -> [Vec<Word>; 4] {
    Generator::ALL.map(|g| {
        let col = p.shadow.column(g.index());
        let pool = match p.templates.get(g) {
            ImageTemplate::Free => words_with_class(col, p.max_image_len),
            ImageTemplate::Conjugate { max_conjugator } => conjugates(g, max_conjugator, p.max_image_len),
            ImageTemplate::SharedConjugate { .. } | ImageTemplate::Solved => Vec::new(),
        };
        pool.into_iter()
            .filter(|u| u.len() <= p.max_image_len && HClass::of_word(u) == col)
            .collect()
    })
}

fn assemble(p: &ConstraintProfile, images: [&Word; 4], out: &mut Vec<Endo>) {
    let f = Endo::new(images.map(Word::clone));
    if p.admits(&f) {
        out.push(f);
    }
}

/// Cyclically reduced length of the reduced product `a·b`, without building it.
fn product_cyclic_len(a: &[Letter], b: &[Letter]) -> usize {
    let mut k = 0;
    while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
        k += 1;
    }
    let head = a.len() - k;
    let n = head + b.len() - k;
    let at = |i: usize| if i < head { a[i] } else { b[k + i - head] };
    let mut q = 0;
    while 2 * q + 1 < n && at(q) == at(n - 1 - q).inverse() {
        q += 1;
    }
    if 2 * q == n {
        0
    } else {
        n - 2 * q
    }
}

fn search_with_shared(p: &ConstraintProfile, base: &[Vec<Word>; 4], shared: &Word) -> Vec<Endo> {
    let local: [Vec<Word>; 4] = Generator::ALL.map(|g| match p.templates.get(g) {
        ImageTemplate::SharedConjugate { .. } => {
            let u = Word::generator(g).conjugate_by(shared);
            if u.len() <= p.max_image_len && HClass::of_word(&u) == p.shadow.column(g.index()) {
                vec![u]
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    });
    let pools: [&[Word]; 4] = std::array::from_fn(|i| match p.templates.get(Generator::from_index(i)) {
        ImageTemplate::SharedConjugate { .. } => local[i].as_slice(),
        _ => base[i].as_slice(),
    });
    let bd = boundary();
    match p.solved() {
        Some(s) => {
            let handle = s.index() / 2;
            let other = 1 - handle;
            let (o1, o2) = (pools[2 * other], pools[2 * other + 1]);
            let partner_idx = if s.index() % 2 == 0 {
                s.index() + 1
            } else {
                s.index() - 1
            };
            let partner_pool = pools[partner_idx];
            let known_is_first = partner_idx % 2 == 0;
            // For `[x, Y] = r` the word `x⁻¹r` must be conjugate to `x⁻¹`;
            // for `[X, y] = r`, `r·y` must be conjugate to `y`.
            let inverted: Vec<Word> = partner_pool.iter().map(Word::invert).collect();
            let cyc: Vec<usize> = partner_pool.iter().map(|u| u.cyclic_class().len()).collect();
            let pairs: Vec<(usize, usize)> = (0..o1.len()).flat_map(|i| (0..o2.len()).map(move |j| (i, j))).collect();
            pairs
                .par_iter()
                .flat_map_iter(|&(i, j)| {
                    let c = Word::commutator(&o1[i], &o2[j]);
                    // r is the commutator the solved handle must produce
                    let r = if handle == 0 {
                        bd.multiply(&c.invert())
                    } else {
                        c.invert().multiply(&bd)
                    };
                    let mut out = Vec::new();
                    for (t, known) in partner_pool.iter().enumerate() {
                        let len = if known_is_first {
                            product_cyclic_len(inverted[t].letters(), r.letters())
                        } else {
                            product_cyclic_len(r.letters(), known.letters())
                        };
                        if len != cyc[t] {
                            continue;
                        }
                        for sol in solve_commutator(known, &r, known_is_first, p.max_image_len) {
                            let mut images: [&Word; 4] = [&o1[i]; 4];
                            images[2 * other + 1] = &o2[j];
                            images[partner_idx] = known;
                            images[s.index()] = &sol;
                            assemble(p, images, &mut out);
                        }
                    }
                    out
                })
                .collect()
        }
        None => {
            let [a1, b1, a2, b2] = pools;
            let mut table: Vec<(u64, u32, u32)> = (0..a1.len())
                .into_par_iter()
                .flat_map_iter(|i| {
                    (0..b1.len()).map(move |j| (word_hash(&Word::commutator(&a1[i], &b1[j])), i as u32, j as u32))
                })
                .collect();
            table.par_sort_unstable();
            (0..a2.len())
                .into_par_iter()
                .flat_map_iter(|k| {
                    let mut out = Vec::new();
                    for y2 in b2.iter() {
                        let target = bd.multiply(&Word::commutator(&a2[k], y2).invert());
                        let h = word_hash(&target);
                        let start = table.partition_point(|e| e.0 < h);
                        for &(_, i, j) in table[start..].iter().take_while(|e| e.0 == h) {
                            let (x, y) = (&a1[i as usize], &b1[j as usize]);
                            if Word::commutator(x, y) == target {
                                assemble(p, [x, y, &a2[k], y2], &mut out);
                            }
                        }
                    }
                    out
                })
                .collect()
        }
    }
}

/// Every endomorphism admitted by `p`, sorted and without duplicates. No
/// inverse is required.
///
/// Results are memoized for the life of the process, keyed by every field
/// except the profile name.
pub fn search(p: &ConstraintProfile) -> Result<Vec<Endo>, DiscoverError> {
    p.validate()?;
    type Slot = Arc<OnceLock<Vec<Endo>>>;
    static MEMO: OnceLock<Mutex<HashMap<String, Slot>>> = OnceLock::new();
    let key = serde_json::to_string(&ConstraintProfile {
        name: String::new(),
        ..p.clone()
    })
    .expect("profiles serialize");
    let slot = {
        let mut memo = MEMO
            .get_or_init(Default::default)
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        memo.entry(key).or_default().clone()
    };
    Ok(slot.get_or_init(|| search_uncached(p)).clone())
}

fn search_uncached(p: &ConstraintProfile) -> Vec<Endo> {
    let shared = match p.shared_bound() {
        Some(m) => words_up_to(m),
        None => vec![Word::identity()],
    };
    let base = base_pools(p);
    let mut found: Vec<Endo> = shared
        .par_iter()
        .flat_map_iter(|g| search_with_shared(p, &base, g))
        .collect();
    found.par_sort();
    found.dedup();
    found
}

/// Finds `backward` with `forward ∘ backward = id` among `inverses`, allowing
/// a correction by `inner(∂^j)`.
pub fn pair_inverse(forward: &Endo, inverses: &[Endo], boundary_slot: u32) -> Option<Endo> {
    let bd = boundary();
    let slot = boundary_slot as i64;
    let mut js: Vec<i64> = (-slot..=slot).collect();
    js.sort_by_key(|j| (j.abs(), *j));
    for g in inverses {
        let h = forward.compose(g);
        for &j in &js {
            if h == Endo::inner(&bd.pow(j)) {
                let backward = Endo::inner(&bd.pow(-j)).compose(g);
                let id = Endo::identity();
                if forward.compose(&backward) == id && backward.compose(forward) == id {
                    return Some(backward);
                }
            }
        }
    }
    None
}

/// Exhaustive discovery: forward search, inverse search, and pairing.
pub fn discover(p: &ConstraintProfile) -> Result<Discovery, DiscoverError> {
    let forward = search(p)?;
    let inverses = search(&p.inverse_profile())?;
    let models: Vec<MappingClassModel> = forward
        .par_iter()
        .filter_map(|f| pair_inverse(f, &inverses, p.boundary_slot).map(|b| (f.clone(), b)))
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, (f, b))| MappingClassModel::new(format!("{}#{i}", p.name), f, b))
        .collect();
    if models.is_empty() {
        return Err(DiscoverError::Empty {
            name: p.name.clone(),
            len: p.max_image_len,
        });
    }
    Ok(Discovery {
        profile: p.clone(),
        forward_candidates: forward.len(),
        inverse_candidates: inverses.len(),
        models,
    })
}
