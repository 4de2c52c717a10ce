//! Symbolic toolkit for the one-relator groups
//! `G_{r,w}(l,k) = ⟨a, b | (r^l)^(r^w) = r^k⟩`.
//!
//! * [`word`]: free group words.
//! * [`presentation`]: presentations, the family constructor, homomorphisms.
//! * [`kernel`]: kernels of the exponent-sum map onto `Z` and their splittings.
//! * [`certify`]: soficity certificates and their checker.
//! * [`obstruct`]: non-residual-finiteness and non-residual-solvability verdicts.
//! * [`quotient`]: brute-force homomorphisms into symmetric groups.
//! * [`lemmas`]: exhaustive checks of the family's identities on short words.
//! * [`dsl`] and [`cli`]: the text front end.
//!
//! ```
//! use relator_forge::certify::{certify_theorem_a, verify};
//! use relator_forge::kernel::z_kernel;
//! use relator_forge::presentation::{gen_a, gen_b, make_g};
//! use relator_forge::word::Word;
//!
//! let (a, b) = (Word::gen(&gen_a()), Word::gen(&gen_b()));
//! let g = make_g(&a, &b.pow(2), 1, 2).unwrap();
//! assert_eq!(z_kernel(&g).unwrap().to_string(), "a_2^-1 a_0 a_2 a_0^-2");
//! assert!(verify(&certify_theorem_a(2, 1, 2).unwrap()));
//! ```

pub mod certify;
pub mod cli;
pub mod dsl;
pub mod kernel;
pub mod lemmas;
pub mod obstruct;
pub mod presentation;
pub mod quotient;
pub mod word;
