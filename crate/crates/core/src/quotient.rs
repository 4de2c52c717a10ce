//! Brute-force homomorphisms from two-generator presentations into `S_m`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::presentation::{gen_a, gen_b, Presentation};
use crate::word::{Generator, Sign, Word};

pub const DEFAULT_MAX_DEGREE: usize = 6;
/// Degrees above this are refused outright; `(8!)²` pairs is not desk scale.
pub const HARD_MAX_DEGREE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("generator {0} has no assigned permutation")]
    UnknownGenerator(String),
    #[error("presentation must have exactly the generators a, b")]
    NotTwoGenerator,
    #[error("degree {0} is outside 1..={HARD_MAX_DEGREE}")]
    BadDegree(usize),
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
}

/// A permutation of `{0, …, m-1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, QuotientError> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || seen[i] || m > u8::MAX as usize {
                return Err(QuotientError::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation(images.into_iter().map(|i| i as u8).collect()))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((0..m as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// `self` followed by `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// All of `S_m` in lexicographic order of one-line notation.
    pub fn all(m: usize) -> Vec<Permutation> {
        (0..m as u8).permutations(m).map(Permutation).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Images of `a` and `b` satisfying every relator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HomSolution {
    pub degree: usize,
    pub a: Permutation,
    pub b: Permutation,
}

impl HomSolution {
    pub fn assignment(&self) -> BTreeMap<Generator, Permutation> {
        [(gen_a(), self.a.clone()), (gen_b(), self.b.clone())]
            .into_iter()
            .collect()
    }
}

/// Letters are applied left to right, so `eval(u·v) = eval(u).then(eval(v))`.
pub fn eval_word(
    w: &Word,
    degree: usize,
    assignment: &BTreeMap<Generator, Permutation>,
) -> Result<Permutation, QuotientError> {
    let mut acc = Permutation::identity(degree);
    for l in w.letters() {
        let p = assignment
            .get(&l.gen)
            .ok_or_else(|| QuotientError::UnknownGenerator(l.gen.to_string()))?;
        acc = match l.sign {
            Sign::Pos => acc.then(p),
            Sign::Neg => acc.then(&p.inverse()),
        };
    }
    Ok(acc)
}

/// A relator compiled to `(generator slot, sign)` with slot 0 = a, 1 = b.
struct Compiled(Vec<(usize, bool)>);

impl Compiled {
    fn new(w: &Word) -> Result<Self, QuotientError> {
        let (a, b) = (gen_a(), gen_b());
        w.letters()
            .iter()
            .map(|l| {
                let slot = if l.gen == a {
                    0
                } else if l.gen == b {
                    1
                } else {
                    return Err(QuotientError::UnknownGenerator(l.gen.to_string()));
                };
                Ok((slot, l.sign == Sign::Pos))
            })
            .collect::<Result<_, _>>()
            .map(Compiled)
    }

    /// Follows every point through the word, stopping at the first moved one.
    fn fixes_all(&self, table: &[[&[u8]; 2]; 2], m: usize) -> bool {
        (0..m).all(|start| {
            let mut p = start;
            for &(slot, pos) in &self.0 {
                p = table[slot][usize::from(!pos)][p] as usize;
            }
            p == start
        })
    }
}

fn check_two_generator(p: &Presentation) -> Result<(), QuotientError> {
    let mut gens = p.generators().to_vec();
    gens.sort();
    if gens == [gen_a(), gen_b()] {
        Ok(())
    } else {
        Err(QuotientError::NotTwoGenerator)
    }
}

fn check_degree(m: usize) -> Result<(), QuotientError> {
    if (1..=HARD_MAX_DEGREE).contains(&m) {
        Ok(())
    } else {
        Err(QuotientError::BadDegree(m))
    }
}

/// Every `(σ_a, σ_b) ∈ S_m × S_m` killing all relators, ordered
/// lexicographically by `(σ_a, σ_b)`. The search is split over `σ_a` in
/// parallel and merged back in order.
pub fn enumerate_homs(p: &Presentation, m: usize) -> Result<Vec<HomSolution>, QuotientError> {
    check_two_generator(p)?;
    check_degree(m)?;
    let relators = p.relators().iter().map(Compiled::new).collect::<Result<Vec<_>, _>>()?;
    let perms = Permutation::all(m);
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let chunks: Vec<Vec<HomSolution>> = (0..perms.len())
        .into_par_iter()
        .map(|ia| {
            let mut found = Vec::new();
            for ib in 0..perms.len() {
                let table = [
                    [&perms[ia].0[..], &inverses[ia].0[..]],
                    [&perms[ib].0[..], &inverses[ib].0[..]],
                ];
                if relators.iter().all(|r| r.fixes_all(&table, m)) {
                    found.push(HomSolution {
                        degree: m,
                        a: perms[ia].clone(),
                        b: perms[ib].clone(),
                    });
                }
            }
            found
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Whether `e` maps to the identity under every solution of degree `m`.
pub fn element_always_trivial(p: &Presentation, e: &Word, m: usize) -> Result<bool, QuotientError> {
    let solutions = enumerate_homs(p, m)?;
    for s in &solutions {
        if !eval_word(e, m, &s.assignment())?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn same_quotient_solutions(p1: &Presentation, p2: &Presentation, m: usize) -> Result<bool, QuotientError> {
    Ok(enumerate_homs(p1, m)? == enumerate_homs(p2, m)?)
}
