//! Kernels of the exponent-sum map `⟨a, b⟩ → Z`, `a ↦ 0`, `b ↦ 1`.
//!
//! The kernel is the normal closure of `a`, generated by the conjugates
//! `a_i = b^-i a b^i`. Relators with zero `b`-exponent-sum are rewritten
//! over the `a_i`, and every relator schema stands for the whole family of
//! its integer shifts (conjugation by powers of `b`).

use std::fmt;

use thiserror::Error;

use crate::presentation::{gen_a, gen_b, Presentation};
use crate::word::{Generator, Letter, Sign, Word};

pub const DEFAULT_WINDOW: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("relator {0} has nonzero exponent sum in b")]
    NonzeroExponentSum(Word),
    #[error("generator {0} is neither a nor b")]
    UnknownGenerator(String),
    #[error("schema {schema} mixes residue classes modulo {modulus}")]
    SplitFailure { schema: IndexedWord, modulus: u32 },
    #[error("no shift of any schema fits in the window [-{0}, {0}]")]
    WindowTooSmall(u32),
    #[error("modulus and window must be positive")]
    NonPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedLetter {
    pub index: i64,
    pub sign: Sign,
}

impl IndexedLetter {
    fn cancels(&self, other: &IndexedLetter) -> bool {
        self.index == other.index && self.sign != other.sign
    }
}

/// A reduced word in the generators `a_i`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedWord {
    letters: Vec<IndexedLetter>,
}

impl IndexedWord {
    pub fn reduce<I: IntoIterator<Item = IndexedLetter>>(raw: I) -> Self {
        let mut stack: Vec<IndexedLetter> = Vec::new();
        for letter in raw {
            if stack.last().is_some_and(|top| top.cancels(&letter)) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        IndexedWord { letters: stack }
    }

    /// Builds from `(index, exponent)` syllables.
    pub fn from_syllables(syllables: &[(i64, i64)]) -> Self {
        IndexedWord::reduce(syllables.iter().flat_map(|&(index, e)| {
            (0..e.unsigned_abs()).map(move |_| IndexedLetter {
                index,
                sign: Sign::of(e),
            })
        }))
    }

    pub fn letters(&self) -> &[IndexedLetter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.letters.iter().map(|l| l.index).min()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.letters.iter().map(|l| l.index).max()
    }

    /// Distinct indices occurring, ascending.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.letters.iter().map(|l| l.index).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn shift(&self, d: i64) -> IndexedWord {
        IndexedWord {
            letters: self
                .letters
                .iter()
                .map(|l| IndexedLetter {
                    index: l.index + d,
                    sign: l.sign,
                })
                .collect(),
        }
    }

    /// Translates so the least occurring index is 0.
    pub fn normalized(&self) -> IndexedWord {
        match self.min_index() {
            Some(m) => self.shift(-m),
            None => self.clone(),
        }
    }

    fn map_indices(&self, f: impl Fn(i64) -> i64) -> IndexedWord {
        IndexedWord::reduce(self.letters.iter().map(|l| IndexedLetter {
            index: f(l.index),
            sign: l.sign,
        }))
    }

    /// Writes the word over named generators, `a_i ↦ name(i)`.
    pub fn to_word(&self, name: impl Fn(i64) -> Generator) -> Word {
        self.letters
            .iter()
            .map(|l| Letter::new(name(l.index), l.sign))
            .collect()
    }
}

impl fmt::Display for IndexedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut runs: Vec<(i64, i64)> = Vec::new();
        for l in &self.letters {
            match runs.last_mut() {
                Some((i, e)) if *i == l.index => *e += l.sign.value(),
                _ => runs.push((l.index, l.sign.value())),
            }
        }
        for (n, (i, e)) in runs.into_iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "a_{i}")?;
            } else {
                write!(f, "a_{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IndexedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexedWord({self})")
    }
}

/// A Z-family of relators given by representative schemas, plus the default
/// truncation window used when instantiating.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexedPresentation {
    relator_schemas: Vec<IndexedWord>,
    window: u32,
}

impl IndexedPresentation {
    /// Empty schemas are dropped; the rest are index-normalized.
    pub fn new(schemas: Vec<IndexedWord>, window: u32) -> Result<Self, KernelError> {
        if window == 0 {
            return Err(KernelError::NonPositive);
        }
        Ok(IndexedPresentation {
            relator_schemas: schemas
                .into_iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.normalized())
                .collect(),
            window,
        })
    }

    pub fn schemas(&self) -> &[IndexedWord] {
        &self.relator_schemas
    }

    pub fn window(&self) -> u32 {
        self.window
    }
}

impl fmt::Display for IndexedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.relator_schemas.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IndexedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexedPresentation[{self}; N={}]", self.window)
    }
}

/// Rewrites a zero-`b`-sum word over the conjugates `a_i = b^-i a b^i`.
///
/// The height starts at 0 and a letter `b^e` moves it by `-e`, so that
/// `b^-1 a b` becomes `a_1`.
pub fn height_rewrite(w: &Word) -> Result<IndexedWord, KernelError> {
    let (a, b) = (gen_a(), gen_b());
    let mut height = 0i64;
    let mut out = Vec::new();
    for letter in w.letters() {
        if letter.gen == b {
            height -= letter.sign.value();
        } else if letter.gen == a {
            out.push(IndexedLetter {
                index: height,
                sign: letter.sign,
            });
        } else {
            return Err(KernelError::UnknownGenerator(letter.gen.to_string()));
        }
    }
    if height != 0 {
        return Err(KernelError::NonzeroExponentSum(w.clone()));
    }
    Ok(IndexedWord::reduce(out))
}

/// Substitutes `a_i ↦ b^-i a b^i` and reduces.
pub fn unrewrite(iw: &IndexedWord) -> Word {
    let (a, b) = (gen_a(), gen_b());
    let mut raw = Vec::new();
    for l in iw.letters() {
        let to = Sign::of(l.index);
        raw.extend(std::iter::repeat_n(
            Letter::new(b.clone(), to.flip()),
            l.index.unsigned_abs() as usize,
        ));
        raw.push(Letter::new(a.clone(), l.sign));
        raw.extend(std::iter::repeat_n(
            Letter::new(b.clone(), to),
            l.index.unsigned_abs() as usize,
        ));
    }
    crate::word::reduce(raw)
}

pub fn shift(iw: &IndexedWord, d: i64) -> IndexedWord {
    iw.shift(d)
}

/// Kernel of `a ↦ 0, b ↦ 1` for a presentation on `{a, b}`.
pub fn z_kernel(p: &Presentation) -> Result<IndexedPresentation, KernelError> {
    z_kernel_with_window(p, DEFAULT_WINDOW)
}

pub fn z_kernel_with_window(p: &Presentation, window: u32) -> Result<IndexedPresentation, KernelError> {
    let (a, b) = (gen_a(), gen_b());
    if let Some(extra) = p.generators().iter().find(|g| **g != a && **g != b) {
        return Err(KernelError::UnknownGenerator(extra.to_string()));
    }
    let schemas = p.relators().iter().map(height_rewrite).collect::<Result<Vec<_>, _>>()?;
    IndexedPresentation::new(schemas, window)
}

/// Splits the shift family modulo `n`.
///
/// Succeeds when every schema lives in a single residue class modulo `n`.
/// Component `j` holds the shifts landing in class `j`, reindexed by
/// `i ↦ (i - j) / n`; since schemas are normalized to start at 0, all
/// components carry the same schemas.
pub fn split_mod(ip: &IndexedPresentation, n: u32) -> Result<Vec<IndexedPresentation>, KernelError> {
    if n == 0 {
        return Err(KernelError::NonPositive);
    }
    let m = i64::from(n);
    let mut reindexed = Vec::with_capacity(ip.schemas().len());
    for schema in ip.schemas() {
        if schema.support().iter().any(|i| i.rem_euclid(m) != 0) {
            return Err(KernelError::SplitFailure {
                schema: schema.clone(),
                modulus: n,
            });
        }
        reindexed.push(schema.map_indices(|i| i / m));
    }
    let component = IndexedPresentation::new(reindexed, ip.window())?;
    Ok(vec![component; n as usize])
}

/// Inverse of the reindexing done by [`split_mod`] for component `residue`.
pub fn unreindex(iw: &IndexedWord, modulus: u32, residue: u32) -> IndexedWord {
    let (m, j) = (i64::from(modulus), i64::from(residue));
    iw.map_indices(|i| m * i + j)
}

/// Name of `a_i` as a generator: `a_3`, and `a_m3` for `a_{-3}`.
pub fn indexed_generator(prefix: &str, i: i64) -> Generator {
    let name = if i < 0 {
        format!("{prefix}_m{}", -i)
    } else {
        format!("{prefix}_{i}")
    };
    Generator::new(&name).expect("valid generator name")
}

/// All shifts of all schemas whose support fits in `[-window, window]`,
/// schema by schema with shifts ascending.
pub fn window_relators(ip: &IndexedPresentation, window: u32) -> Vec<IndexedWord> {
    let n = i64::from(window);
    let mut out = Vec::new();
    for schema in ip.schemas() {
        let (lo, hi) = (schema.min_index().unwrap_or(0), schema.max_index().unwrap_or(0));
        for d in (-n - lo)..=(n - hi) {
            out.push(schema.shift(d));
        }
    }
    out
}

/// Finite truncation on generators `a_{-N}, …, a_N`.
pub fn instantiate(ip: &IndexedPresentation, window: u32) -> Result<Presentation, KernelError> {
    instantiate_named(ip, window, "a")
}

pub fn instantiate_named(ip: &IndexedPresentation, window: u32, prefix: &str) -> Result<Presentation, KernelError> {
    let relators = window_relators(ip, window);
    if relators.is_empty() {
        return Err(KernelError::WindowTooSmall(window));
    }
    let n = i64::from(window);
    let generators = (-n..=n).map(|i| indexed_generator(prefix, i)).collect();
    let words = relators
        .iter()
        .map(|r| r.to_word(|i| indexed_generator(prefix, i)))
        .collect();
    Ok(Presentation::new(generators, words).expect("window relators use window generators"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::make_g;
    use crate::word::tests::w;

    fn a() -> Word {
        Word::gen(&gen_a())
    }
    fn b() -> Word {
        Word::gen(&gen_b())
    }

    fn eq4(l: i64, k: i64) -> IndexedWord {
        IndexedWord::from_syllables(&[(1, -1), (0, l), (1, 1), (0, -k)])
    }

    #[test]
    fn height_rewrite_family_relators() {
        let rel = |w: &Word, l, k| make_g(&a(), w, l, k).unwrap().relators()[0].clone();
        assert_eq!(height_rewrite(&rel(&b(), 2, 3)).unwrap(), eq4(2, 3));
        assert_eq!(
            height_rewrite(&rel(&b().pow(2), 2, 3)).unwrap(),
            IndexedWord::from_syllables(&[(2, -1), (0, 2), (2, 1), (0, -3)])
        );
        let conj = a().conjugate(&b());
        let got = height_rewrite(&rel(&conj, 2, 3)).unwrap();
        let c = IndexedWord::from_syllables(&[(1, -1), (0, 1), (1, 1)]);
        let expect = IndexedWord::reduce(
            c.letters()
                .iter()
                .rev()
                .map(|l| IndexedLetter {
                    index: l.index,
                    sign: l.sign.flip(),
                })
                .chain(IndexedWord::from_syllables(&[(0, 2)]).letters().iter().copied())
                .chain(c.letters().iter().copied())
                .chain(IndexedWord::from_syllables(&[(0, -3)]).letters().iter().copied()),
        );
        assert_eq!(got, expect);
        assert_eq!(height_rewrite(&Word::identity()).unwrap(), IndexedWord::default());
    }

    #[test]
    fn height_rewrite_rejects_nonzero_b_sum() {
        assert!(matches!(
            height_rewrite(&w(&[("a", 1), ("b", 1)])),
            Err(KernelError::NonzeroExponentSum(_))
        ));
        assert!(matches!(
            height_rewrite(&w(&[("c", 1)])),
            Err(KernelError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn unrewrite_examples() {
        assert_eq!(unrewrite(&IndexedWord::from_syllables(&[(0, 1)])), a());
        assert_eq!(
            unrewrite(&IndexedWord::from_syllables(&[(1, -1), (0, 1), (1, 1)])),
            w(&[("b", -1), ("a", -1), ("b", 1), ("a", 1), ("b", -1), ("a", 1), ("b", 1)])
        );
        let r = make_g(&a(), &b(), 2, 3).unwrap().relators()[0].clone();
        assert_eq!(unrewrite(&height_rewrite(&r).unwrap()), r);
    }

    #[test]
    fn z_kernel_schemas() {
        let k = z_kernel(&make_g(&a(), &b(), 1, 2).unwrap()).unwrap();
        assert_eq!(k.schemas(), &[eq4(1, 2)]);
        assert_eq!(k.window(), DEFAULT_WINDOW);
        let k3 = z_kernel(&make_g(&a(), &b().pow(3), 2, 3).unwrap()).unwrap();
        assert_eq!(
            k3.schemas(),
            &[IndexedWord::from_syllables(&[(3, -1), (0, 2), (3, 1), (0, -3)])]
        );
        // b^-1 conjugator on the other side: normalized to start at 0
        let km = z_kernel(&make_g(&a(), &b().pow(-2), 1, 2).unwrap()).unwrap();
        assert_eq!(km.schemas()[0].min_index(), Some(0));
        assert_eq!(km.schemas()[0].max_index(), Some(2));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            shift(&IndexedWord::from_syllables(&[(0, 1)]), 5),
            IndexedWord::from_syllables(&[(5, 1)])
        );
        assert_eq!(
            shift(&eq4(2, 3), 1),
            IndexedWord::from_syllables(&[(2, -1), (1, 2), (2, 1), (1, -3)])
        );
        let x = eq4(2, 3);
        assert_eq!(shift(&shift(&x, 7), -7), x);
    }

    #[test]
    fn split_mod_examples() {
        let k1 = z_kernel(&make_g(&a(), &b(), 2, 3).unwrap()).unwrap();
        let k2 = z_kernel(&make_g(&a(), &b().pow(2), 2, 3).unwrap()).unwrap();
        let parts = split_mod(&k2, 2).unwrap();
        assert_eq!(parts, vec![k1.clone(), k1.clone()]);
        assert_eq!(split_mod(&k1, 1).unwrap(), vec![k1.clone()]);
        match split_mod(&k1, 2) {
            Err(KernelError::SplitFailure { schema, modulus }) => {
                assert_eq!(schema, eq4(2, 3));
                assert_eq!(modulus, 2);
            }
            other => panic!("expected SplitFailure, got {other:?}"),
        }
        assert_eq!(split_mod(&k1, 0), Err(KernelError::NonPositive));
    }

    #[test]
    fn instantiate_examples() {
        let k = z_kernel(&make_g(&a(), &b(), 2, 3).unwrap()).unwrap();
        let p = instantiate(&k, 1).unwrap();
        let names: Vec<String> = p.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["a_m1", "a_0", "a_1"]);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0].to_string(), "a_0^-1 a_m1^2 a_0 a_m1^-3");
        assert_eq!(p.relators()[1].to_string(), "a_1^-1 a_0^2 a_1 a_0^-3");
        assert_eq!(instantiate(&k, 0), Err(KernelError::WindowTooSmall(0)));

        let kc = z_kernel(&make_g(&a(), &a().conjugate(&b()), 1, 2).unwrap()).unwrap();
        let pc = instantiate(&kc, 1).unwrap();
        assert_eq!(pc.generators().len(), 3);
        assert_eq!(pc.relators().len(), 2);
    }

    #[test]
    fn display_indices() {
        assert_eq!(eq4(1, 2).to_string(), "a_1^-1 a_0 a_1 a_0^-2");
        assert_eq!(IndexedWord::from_syllables(&[(-2, 3)]).to_string(), "a_-2^3");
        assert_eq!(IndexedWord::default().to_string(), "1");
    }
}
