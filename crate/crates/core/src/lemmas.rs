//! Symbolic checks of the structural facts about `G_{r,w}(l,k)`:
//!
//! * commutator identity: for `k = l + 1` the relator makes `r = [r^l, r^w]`;
//! * sign and inversion symmetry: `G_{r,w}(l,k) ≅ G_{r,w}(-l,-k) ≅ G_{r⁻¹,w}(k,l)`
//!   via the identity on `a, b`;
//! * absorption: `G_{a,a^n w}(l,k) ≅ G_{a,w}(l,k) ≅ G_{a,w a^n}(l,k)` when `w`
//!   starts and ends with a power of `b`.

use crate::obstruct::identity_transcript;
use crate::presentation::{
    cyclic_equivalent, gen_a, gen_b, hom_respects_relators, make_g, verify_hom_pair_inverse, Homomorphism,
};
use crate::word::{Sign, Word};

/// Both free identities behind `r = [r^l, r^w]` reduce to 1 for `k = l + 1`.
pub fn commutator_identity_holds(r: &Word, w: &Word, l: i64) -> bool {
    identity_transcript(r, w, l, l + 1).holds()
}

/// The identity map on `a, b` is an isomorphism between the two presentations,
/// and their relators agree up to cyclic permutation and inversion.
fn identity_iso(r1: (&Word, &Word, i64, i64), r2: (&Word, &Word, i64, i64)) -> bool {
    let (Ok(g1), Ok(g2)) = (make_g(r1.0, r1.1, r1.2, r1.3), make_g(r2.0, r2.1, r2.2, r2.3)) else {
        return false;
    };
    let (Ok(eta), Ok(xi)) = (
        Homomorphism::identity_on_generators(&g1, &g2),
        Homomorphism::identity_on_generators(&g2, &g1),
    ) else {
        return false;
    };
    verify_hom_pair_inverse(&eta, &xi).unwrap_or(false)
        && hom_respects_relators(&eta)
        && hom_respects_relators(&xi)
        && cyclic_equivalent(&g1.relators()[0], &g2.relators()[0])
}

/// `G_{r,w}(l,k) ≅ G_{r,w}(-l,-k)`.
pub fn negation_iso_holds(r: &Word, w: &Word, l: i64, k: i64) -> bool {
    identity_iso((r, w, l, k), (r, w, -l, -k))
}

/// `G_{r,w}(l,k) ≅ G_{r⁻¹,w}(k,l)`.
pub fn inversion_iso_holds(r: &Word, w: &Word, l: i64, k: i64) -> bool {
    identity_iso((r, w, l, k), (&r.inverse(), w, k, l))
}

/// Whether `w` is nontrivial, cyclically reduced and begins and ends with `b^±1`.
pub fn absorption_applies(w: &Word) -> bool {
    let b = gen_b();
    w.is_cyclically_reduced()
        && w.letters().first().is_some_and(|x| x.gen == b)
        && w.letters().last().is_some_and(|x| x.gen == b)
}

/// Relators of `G_{a,a^n w}` and `G_{a,w a^n}` are cyclically equivalent to
/// that of `G_{a,w}`.
pub fn absorption_holds(w: &Word, n: i64, l: i64, k: i64) -> bool {
    let a = Word::gen(&gen_a());
    let an = a.pow(n);
    let rel = |c: &Word| make_g(&a, c, l, k).map(|p| p.relators()[0].clone());
    match (rel(w), rel(&an.mul(w)), rel(&w.mul(&an))) {
        (Ok(base), Ok(left), Ok(right)) => cyclic_equivalent(&base, &left) && cyclic_equivalent(&base, &right),
        _ => false,
    }
}

/// Every reduced word over `a, b` of length at most `max_len`, shortest first.
pub fn all_words(max_len: usize) -> Vec<Word> {
    let letters: Vec<Word> = [
        (gen_a(), Sign::Pos),
        (gen_a(), Sign::Neg),
        (gen_b(), Sign::Pos),
        (gen_b(), Sign::Neg),
    ]
    .iter()
    .map(|(g, s)| Word::letter(g, *s))
    .collect();
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let x = w.mul(l);
                if x.len() == w.len() + 1 {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

impl LemmaResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// The deterministic suite run by the `lemmas` command: exhaustive over short
/// words rather than random.
pub fn run_suite() -> Vec<LemmaResult> {
    let words = all_words(3);
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .flat_map(|r| words.iter().map(move |w| (r, w)))
        .filter(|(r, w)| crate::presentation::check_noncommuting(r, w))
        .collect();
    let grid = [(1, 2), (2, 3), (2, 1), (-1, -2)];

    let mut commutator = LemmaResult {
        name: "commutator identity: r = [r^l, r^w] when k = l + 1".into(),
        cases: 0,
        failures: 0,
    };
    for (r, w) in &pairs {
        for l in 1..=4 {
            commutator.cases += 1;
            if !commutator_identity_holds(r, w, l) {
                commutator.failures += 1;
            }
        }
    }

    let mut negate = LemmaResult {
        name: "sign symmetry: G_{r,w}(l,k) = G_{r,w}(-l,-k)".into(),
        cases: 0,
        failures: 0,
    };
    let mut invert = LemmaResult {
        name: "inversion symmetry: G_{r,w}(l,k) = G_{r^-1,w}(k,l)".into(),
        cases: 0,
        failures: 0,
    };
    for (r, w) in pairs.iter().step_by(7) {
        for &(l, k) in &grid {
            negate.cases += 1;
            invert.cases += 1;
            if !negation_iso_holds(r, w, l, k) {
                negate.failures += 1;
            }
            if !inversion_iso_holds(r, w, l, k) {
                invert.failures += 1;
            }
        }
    }

    let mut absorption = LemmaResult {
        name: "absorption: G_{a,a^n w} = G_{a,w} = G_{a,w a^n}".into(),
        cases: 0,
        failures: 0,
    };
    for w in words.iter().filter(|w| absorption_applies(w)) {
        for n in (-3..=3).filter(|&n| n != 0) {
            for &(l, k) in &grid {
                absorption.cases += 1;
                if !absorption_holds(w, n, l, k) {
                    absorption.failures += 1;
                }
            }
        }
    }
    vec![commutator, negate, invert, absorption]
}
