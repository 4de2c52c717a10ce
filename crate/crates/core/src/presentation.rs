//! Finite presentations, the `G_{r,w}(l,k)` family, homomorphisms between
//! presentations and relator equivalence up to cyclic permutation and inversion.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::word::{commutator, Generator, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("r and w commute in the free group")]
    CommutingPair,
    #[error("exponents l and k must be nonzero")]
    ZeroExponent,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("generator {0} has no image")]
    MissingImage(String),
    #[error("homomorphism signatures do not compose")]
    SignatureMismatch,
}

/// `⟨generators | relators⟩`, each relator read as `R = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Identity relators are dropped.
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.to_string()));
            }
        }
        for r in &relators {
            if let Some(l) = r.letters().iter().find(|l| !generators.contains(&l.gen)) {
                return Err(PresentationError::UnknownGenerator(l.gen.to_string()));
            }
        }
        Ok(Presentation {
            generators,
            relators: relators.into_iter().filter(|r| !r.is_identity()).collect(),
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn has_generator(&self, g: &Generator) -> bool {
        self.generators.contains(g)
    }

    pub fn uses_only_generators(&self, w: &Word) -> Result<(), PresentationError> {
        match w.letters().iter().find(|l| !self.has_generator(&l.gen)) {
            Some(l) => Err(PresentationError::UnknownGenerator(l.gen.to_string())),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {r}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({self})")
    }
}

pub fn gen_a() -> Generator {
    Generator::new("a").expect("valid name")
}

pub fn gen_b() -> Generator {
    Generator::new("b").expect("valid name")
}

/// The relator `(r^w)⁻¹ · r^l · r^w · r^(-k)` of `G_{r,w}(l,k)`, reduced.
pub fn family_relator(r: &Word, w: &Word, l: i64, k: i64) -> Word {
    let c = r.conjugate(w);
    c.inverse().mul(&r.pow(l)).mul(&c).mul(&r.pow(-k))
}

/// `G_{r,w}(l,k) = ⟨a, b | (r^l)^(r^w) = r^k⟩`.
pub fn make_g(r: &Word, w: &Word, l: i64, k: i64) -> Result<Presentation, PresentationError> {
    if l == 0 || k == 0 {
        return Err(PresentationError::ZeroExponent);
    }
    if !check_noncommuting(r, w) {
        return Err(PresentationError::CommutingPair);
    }
    Presentation::new(vec![gen_a(), gen_b()], vec![family_relator(r, w, l, k)])
}

/// In a free group two elements commute iff their commutator reduces to 1.
pub fn check_noncommuting(r: &Word, w: &Word) -> bool {
    !commutator(r, w).is_identity()
}

/// Least rotation of the cyclic reduction of `w` or of its inverse, in
/// letter order (generator name, then `+` before `-`).
pub fn canonical_relator(w: &Word) -> Word {
    let (core, _) = w.cyclically_reduce();
    if core.is_identity() {
        return core;
    }
    let inv = core.inverse();
    let n = core.len();
    fn cyclic(w: &Word, i: usize) -> impl Iterator<Item = &Letter> {
        let (head, tail) = w.letters().split_at(i);
        tail.iter().chain(head.iter())
    }
    let mut best = (&core, 0);
    for i in 0..n {
        for cand in [&core, &inv] {
            if cyclic(cand, i).cmp(cyclic(best.0, best.1)).is_lt() {
                best = (cand, i);
            }
        }
    }
    best.0.rotation(best.1)
}

pub fn cyclic_equivalent(u: &Word, v: &Word) -> bool {
    canonical_relator(u) == canonical_relator(v)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: Presentation,
    target: Presentation,
    images: BTreeMap<Generator, Word>,
}

impl Homomorphism {
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: BTreeMap<Generator, Word>,
    ) -> Result<Self, PresentationError> {
        for g in source.generators() {
            let img = images
                .get(g)
                .ok_or_else(|| PresentationError::MissingImage(g.to_string()))?;
            target.uses_only_generators(img)?;
        }
        if let Some(extra) = images.keys().find(|g| !source.has_generator(g)) {
            return Err(PresentationError::UnknownGenerator(extra.to_string()));
        }
        Ok(Homomorphism { source, target, images })
    }

    pub fn identity(p: &Presentation) -> Self {
        let images = p.generators().iter().map(|g| (g.clone(), Word::gen(g))).collect();
        Homomorphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// Same generator images as the identity, between two presentations on
    /// the same alphabet.
    pub fn identity_on_generators(source: &Presentation, target: &Presentation) -> Result<Self, PresentationError> {
        let images = source.generators().iter().map(|g| (g.clone(), Word::gen(g))).collect();
        Homomorphism::new(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn image(&self, g: &Generator) -> Option<&Word> {
        self.images.get(g)
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("images", &self.images)
            .finish()
    }
}

pub fn apply_hom(h: &Homomorphism, w: &Word) -> Result<Word, PresentationError> {
    h.source.uses_only_generators(w)?;
    Ok(w.substitute(|g| h.images[g].clone()))
}

/// Checks `h2 ∘ h1` and `h1 ∘ h2` fix every generator.
pub fn verify_hom_pair_inverse(h1: &Homomorphism, h2: &Homomorphism) -> Result<bool, PresentationError> {
    if h1.target != h2.source || h2.target != h1.source {
        return Err(PresentationError::SignatureMismatch);
    }
    let round_trip = |first: &Homomorphism, second: &Homomorphism| -> Result<bool, PresentationError> {
        for g in first.source.generators() {
            let back = apply_hom(second, &apply_hom(first, &Word::gen(g))?)?;
            if back != Word::gen(g) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(round_trip(h1, h2)? && round_trip(h2, h1)?)
}

/// Sufficient condition for `h` to be well defined: every source relator maps
/// to 1 in the free group or to a cyclic permutation of a target relator or
/// its inverse. `false` means "not verified", never "not a homomorphism".
pub fn hom_respects_relators(h: &Homomorphism) -> bool {
    let targets: Vec<Word> = h.target.relators().iter().map(canonical_relator).collect();
    h.source.relators().iter().all(|r| {
        let img = apply_hom(h, r).expect("relators use source generators");
        img.is_identity() || targets.contains(&canonical_relator(&img))
    })
}
