//! Free group words: free reduction, inversion, conjugation, commutators,
//! powers, cyclic reduction and exponent sums.
//!
//! A [`Word`] is always stored freely reduced, so structural equality of
//! `Word` values coincides with equality in the free group.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid generator name {0:?} (expected [a-z][a-z0-9_]*)")]
    InvalidGenerator(String),
}

/// A named free generator. Comparison is by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Self, WordError> {
        if is_identifier(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(WordError::InvalidGenerator(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `Pos` sorts before `Neg`, which fixes the letter order used by canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn of(exponent: i64) -> Sign {
        if exponent < 0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: Generator, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            sign: self.sign.flip(),
        }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces an arbitrary letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for letter in raw {
        if stack.last().is_some_and(|top| top.is_inverse_of(&letter)) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    Word { letters: stack }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn letter(gen: &Generator, sign: Sign) -> Word {
        Word {
            letters: vec![Letter::new(gen.clone(), sign)],
        }
    }

    pub fn gen(gen: &Generator) -> Word {
        Word::letter(gen, Sign::Pos)
    }

    /// `gen^exponent`.
    pub fn gen_pow(gen: &Generator, exponent: i64) -> Word {
        let sign = Sign::of(exponent);
        Word {
            letters: (0..exponent.unsigned_abs())
                .map(|_| Letter::new(gen.clone(), sign))
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same as [`Word::is_identity`].
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product `self · other`, reduced.
    pub fn mul(&self, other: &Word) -> Word {
        // Only the seam can cancel.
        let mut left = self.letters.clone();
        let mut skip = 0;
        for letter in &other.letters {
            if left.last().is_some_and(|top| top.is_inverse_of(letter)) {
                left.pop();
                skip += 1;
            } else {
                break;
            }
        }
        left.extend(other.letters[skip..].iter().cloned());
        Word { letters: left }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `self^by = by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    /// `self^n`; negative exponents power the inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Splits `self = conjugator⁻¹ · core · conjugator` with `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut peel = 0;
        while n >= 2 * peel + 2 && self.letters[peel].is_inverse_of(&self.letters[n - 1 - peel]) {
            peel += 1;
        }
        let core = Word {
            letters: self.letters[peel..n - peel].to_vec(),
        };
        let conjugator = Word {
            letters: self.letters[n - peel..].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) => self.letters.len() == 1 || !first.is_inverse_of(last),
            _ => true,
        }
    }

    /// Cyclic rotation starting at letter `start`. Only meaningful for
    /// cyclically reduced words, where every rotation is again reduced.
    pub fn rotation(&self, start: usize) -> Word {
        let mut letters = self.letters[start..].to_vec();
        letters.extend_from_slice(&self.letters[..start]);
        reduce(letters)
    }

    pub fn exponent_sum(&self, gen: &Generator) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.gen == gen)
            .map(|l| l.sign.value())
            .sum()
    }

    pub fn abelianize(&self) -> ExponentVector {
        let mut sums = BTreeMap::new();
        for letter in &self.letters {
            *sums.entry(letter.gen.clone()).or_insert(0) += letter.sign.value();
        }
        ExponentVector(sums)
    }

    /// Generators occurring in the word, sorted by name.
    pub fn support(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.letters.iter().map(|l| l.gen.clone()).collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Maximal runs `(gen, exponent)` of the word.
    pub fn syllables(&self) -> Vec<(Generator, i64)> {
        let mut out: Vec<(Generator, i64)> = Vec::new();
        for letter in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == letter.gen => *e += letter.sign.value(),
                _ => out.push((letter.gen.clone(), letter.sign.value())),
            }
        }
        out
    }

    /// Replaces every generator by its image and reduces.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(&Generator) -> Word,
    {
        let mut out = Word::identity();
        for letter in &self.letters {
            let w = image(&letter.gen);
            out = match letter.sign {
                Sign::Pos => out.mul(&w),
                Sign::Neg => out.mul(&w.inverse()),
            };
        }
        out
    }
}

pub fn invert(w: &Word) -> Word {
    w.inverse()
}

pub fn conjugate(x: &Word, y: &Word) -> Word {
    x.conjugate(y)
}

/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.inverse().mul(&y.inverse()).mul(x).mul(y)
}

pub fn power(w: &Word, n: i64) -> Word {
    w.pow(n)
}

pub fn cyclically_reduce(w: &Word) -> (Word, Word) {
    w.cyclically_reduce()
}

pub fn exponent_sum(w: &Word, g: &Generator) -> i64 {
    w.exponent_sum(g)
}

pub fn abelianize(w: &Word) -> ExponentVector {
    w.abelianize()
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        reduce(iter)
    }
}

impl fmt::Display for Word {
    /// Runs are compressed: `a^2 b^-1 a`; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.syllables().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Exponent sums per generator. Absent generators have exponent 0, and
/// equality ignores explicit zero entries.
#[derive(Clone, Debug, Default)]
pub struct ExponentVector(BTreeMap<Generator, i64>);

impl ExponentVector {
    pub fn get(&self, g: &Generator) -> i64 {
        self.0.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&e| e == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, i64)> {
        self.0.iter().map(|(g, &e)| (g, e))
    }

    pub fn from_pairs<I: IntoIterator<Item = (Generator, i64)>>(pairs: I) -> Self {
        let mut map = BTreeMap::new();
        for (g, e) in pairs {
            *map.entry(g).or_insert(0) += e;
        }
        ExponentVector(map)
    }

    fn nonzero(&self) -> impl Iterator<Item = (&Generator, &i64)> {
        self.0.iter().filter(|(_, &e)| e != 0)
    }
}

impl PartialEq for ExponentVector {
    fn eq(&self, other: &Self) -> bool {
        self.nonzero().eq(other.nonzero())
    }
}

impl Eq for ExponentVector {}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}: {e}")?;
        }
        f.write_str("}")
    }
}
