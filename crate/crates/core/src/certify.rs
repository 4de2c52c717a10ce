//! Soficity certificates: derivation trees over a fixed set of closure rules.
//!
//! Axioms are amenable groups (trivial, infinite cyclic) and Baumslag-Solitar
//! groups. Rules close soficity under subgroups, free products, extensions
//! by `Z`, HNN extensions and amalgams over amenable edge groups, and direct
//! limits. Every structural claim a node makes (a kernel presentation, a
//! splitting, an HNN decomposition, an amalgam step) is carried as a side
//! condition that [`check`] recomputes from scratch.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::kernel::{self, IndexedPresentation, IndexedWord};
use crate::presentation::{canonical_relator, cyclic_equivalent, family_relator, gen_a, gen_b, make_g, Presentation};
use crate::word::{Generator, Word};

/// Default number of finite amalgam stages carried by a direct-limit node.
pub const DEFAULT_STAGES: u32 = 3;

const PIECE_NOTE: &str = "pieces are the two-generator groups G(g_i, g_i+1; l, k), each isomorphic to G(a, b; l, k); \
an iterated amalgam of G(a, b^n; l, k) is not what the kernel relators display";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("parameters n, l, k must be nonzero")]
    ZeroParameter,
    #[error("no certificate rule applies")]
    NoCertificate,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GroupDescriptor {
    Trivial,
    CyclicZ,
    FinitePresentation(Presentation),
    IndexedKernel(IndexedPresentation),
    BS(i64, i64),
    FreeProduct(Vec<GroupDescriptor>),
    ExtensionByZ(Box<GroupDescriptor>),
    HNN {
        base: Box<GroupDescriptor>,
        edge: Box<GroupDescriptor>,
    },
    Amalgam {
        left: Box<GroupDescriptor>,
        right: Box<GroupDescriptor>,
        edge: Box<GroupDescriptor>,
    },
    DirectLimit(Box<GroupDescriptor>),
    FamilyG {
        r: Word,
        w: Word,
        l: i64,
        k: i64,
    },
}

impl GroupDescriptor {
    pub fn family(r: Word, w: Word, l: i64, k: i64) -> Self {
        GroupDescriptor::FamilyG { r, w, l, k }
    }

    fn is_amenable(&self) -> bool {
        matches!(self, GroupDescriptor::Trivial | GroupDescriptor::CyclicZ)
    }

    /// The kernel presentation named by this descriptor, looking through a
    /// direct-limit wrapper.
    fn indexed_kernel(&self) -> Option<&IndexedPresentation> {
        match self {
            GroupDescriptor::IndexedKernel(ip) => Some(ip),
            GroupDescriptor::DirectLimit(inner) => inner.indexed_kernel(),
            _ => None,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Trivial => f.write_str("1"),
            GroupDescriptor::CyclicZ => f.write_str("Z"),
            GroupDescriptor::FinitePresentation(p) => write!(f, "{p}"),
            GroupDescriptor::IndexedKernel(ip) => write!(f, "Kernel[{ip}]"),
            GroupDescriptor::BS(l, k) => write!(f, "BS({l},{k})"),
            GroupDescriptor::FreeProduct(parts) => {
                f.write_str("FreeProduct(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            GroupDescriptor::ExtensionByZ(k) => write!(f, "ExtByZ({k})"),
            GroupDescriptor::HNN { base, edge } => write!(f, "HNN({base}; edge={edge})"),
            GroupDescriptor::Amalgam { left, right, edge } => {
                write!(f, "Amalgam({left}, {right}; edge={edge})")
            }
            GroupDescriptor::DirectLimit(stage) => write!(f, "DirectLimit({stage})"),
            GroupDescriptor::FamilyG { r, w, l, k } => write!(f, "G({r}, {w}; {l}, {k})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    AxAmenable,
    AxBsResSolv,
    RSubgroup,
    RFreeProduct,
    RExtByAmenable,
    RHnnAmenableEdge,
    RAmalgamAmenableEdge,
    RLocallySofic,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::AxAmenable,
        Rule::AxBsResSolv,
        Rule::RSubgroup,
        Rule::RFreeProduct,
        Rule::RExtByAmenable,
        Rule::RHnnAmenableEdge,
        Rule::RAmalgamAmenableEdge,
        Rule::RLocallySofic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AxAmenable => "AX_AMENABLE",
            Rule::AxBsResSolv => "AX_BS_RES_SOLV",
            Rule::RSubgroup => "R_SUBGROUP",
            Rule::RFreeProduct => "R_FREE_PRODUCT",
            Rule::RExtByAmenable => "R_EXT_BY_AMENABLE",
            Rule::RHnnAmenableEdge => "R_HNN_AMENABLE_EDGE",
            Rule::RAmalgamAmenableEdge => "R_AMALGAM_AMENABLE_EDGE",
            Rule::RLocallySofic => "R_LOCALLY_SOFIC",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, Rule::AxAmenable | Rule::AxBsResSolv)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SideCondition {
    /// The automorphism `a ↦ a, b ↦ b⁻¹` carries the conclusion onto `normalized`.
    Normalize { normalized: GroupDescriptor },
    /// `G(a, b; l, k) = ⟨a_0, a_1, b | a_1⁻¹ a_0^l a_1 = a_0^k, b⁻¹ a_0 b = a_1⟩`,
    /// an HNN extension of `BS(l,k)` with stable letter `b` and edge `⟨a_0⟩`.
    TietzeHnn { witness: Presentation },
    /// The kernel premise is the `Z`-kernel of the conclusion family.
    ZKernel,
    /// The conclusion kernel is the `Z`-kernel of the premise family.
    KernelOf,
    /// The conclusion kernel splits modulo `modulus` into the premises.
    SplitMod { modulus: u32 },
    /// Stage `stage + 1` is stage `stage` amalgamated over `⟨g_stage⟩` with
    /// the piece `shift(schema, stage)` on `{g_stage, g_stage+1}`.
    AmalgamStep { stage: u32, schema: IndexedWord },
    /// The premise is the top of a chain of `stages` amalgam stages.
    LimitStages { stages: u32 },
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Normalize { normalized } => write!(f, "normalize(b->b^-1: {normalized})"),
            SideCondition::TietzeHnn { witness } => write!(f, "tietze-hnn({witness})"),
            SideCondition::ZKernel => f.write_str("z-kernel"),
            SideCondition::KernelOf => f.write_str("kernel-of"),
            SideCondition::SplitMod { modulus } => write!(f, "split-mod({modulus})"),
            SideCondition::AmalgamStep { stage, schema } => {
                write!(f, "amalgam-step({stage}; piece={schema}; edge=g_{stage})")
            }
            SideCondition::LimitStages { stages } => write!(f, "limit-stages({stages})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Certificate {
    pub rule: Rule,
    pub conclusion: GroupDescriptor,
    pub premises: Vec<Certificate>,
    pub side_conditions: Vec<SideCondition>,
    /// Free text, ignored by the checker.
    pub comment: Option<String>,
}

impl Certificate {
    fn axiom(rule: Rule, conclusion: GroupDescriptor) -> Self {
        Certificate {
            rule,
            conclusion,
            premises: Vec::new(),
            side_conditions: Vec::new(),
            comment: None,
        }
    }

    fn node(
        rule: Rule,
        conclusion: GroupDescriptor,
        premises: Vec<Certificate>,
        side_conditions: Vec<SideCondition>,
    ) -> Self {
        Certificate {
            rule,
            conclusion,
            premises,
            side_conditions,
            comment: None,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Certificate::node_count).sum::<usize>()
    }

    /// Pre-order paths to every node; the root is the empty path.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, p) in self.premises.iter().enumerate() {
            for mut sub in p.paths() {
                sub.insert(0, i);
                out.push(sub);
            }
        }
        out
    }

    pub fn at(&self, path: &[usize]) -> Option<&Certificate> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Certificate> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.at_mut(rest),
        }
    }

    /// Line-oriented rendering, two spaces of indentation per level:
    /// `RULE | descriptor | side; conditions` with `-` for none.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let sides = if self.side_conditions.is_empty() {
            "-".to_string()
        } else {
            self.side_conditions
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        };
        let _ = write!(
            out,
            "{}{} | {} | {}",
            "  ".repeat(depth),
            self.rule,
            self.conclusion,
            sides
        );
        if let Some(c) = &self.comment {
            let _ = write!(out, " | note: {c}");
        }
        out.push('\n');
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Structural recognizers

fn a() -> Word {
    Word::gen(&gen_a())
}

fn b() -> Word {
    Word::gen(&gen_b())
}

fn flip_b(w: &Word) -> Word {
    let b = gen_b();
    w.substitute(|g| if *g == b { Word::gen(g).inverse() } else { Word::gen(g) })
}

/// Matches a two-generator one-relator presentation against
/// `t⁻¹ x^l t x^-k` up to cyclic permutation and inversion.
///
/// `t` is the generator that occurs only as the two single letters
/// `t⁻¹ … t`. Rotations of the relator are tried before rotations of its
/// inverse, and `x` = first listed generator before the other way round.
pub fn detect_bs(p: &Presentation) -> Option<(i64, i64)> {
    let [g0, g1] = p.generators() else {
        return None;
    };
    let [rel] = p.relators() else {
        return None;
    };
    let (core, _) = rel.cyclically_reduce();
    let inv = core.inverse();
    let candidates: Vec<Word> = (0..core.len())
        .map(|i| core.rotation(i))
        .chain((0..inv.len()).map(|i| inv.rotation(i)))
        .collect();
    for (x, t) in [(g0, g1), (g1, g0)] {
        for c in &candidates {
            if let Some(params) = match_bs(c, x, t) {
                return Some(params);
            }
        }
    }
    None
}

fn match_bs(w: &Word, x: &Generator, t: &Generator) -> Option<(i64, i64)> {
    match w.syllables().as_slice() {
        [(t1, -1), (x1, l), (t2, 1), (x2, m)] if t1 == t && t2 == t && x1 == x && x2 == x => Some((*l, -*m)),
        _ => None,
    }
}

/// HNN decomposition `G(a, b; l, k) = BS(l,k) *_Z` together with its Tietze witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnnRecognition {
    pub descriptor: GroupDescriptor,
    pub witness: Presentation,
}

pub fn recognize_hnn_over_bs(l: i64, k: i64) -> Result<HnnRecognition, CertifyError> {
    if l == 0 || k == 0 {
        return Err(CertifyError::ZeroParameter);
    }
    let (a0, a1) = (kernel::indexed_generator("a", 0), kernel::indexed_generator("a", 1));
    let x = Word::gen(&a0);
    let t = Word::gen(&a1);
    let bs = t.inverse().mul(&x.pow(l)).mul(&t).mul(&x.pow(-k));
    let stable = x.conjugate(&b()).mul(&t.inverse());
    let witness = Presentation::new(vec![a0, a1, gen_b()], vec![bs, stable]).expect("generators listed");
    Ok(HnnRecognition {
        descriptor: GroupDescriptor::HNN {
            base: Box::new(GroupDescriptor::BS(l, k)),
            edge: Box::new(GroupDescriptor::CyclicZ),
        },
        witness,
    })
}

/// Rechecks a Tietze witness against `G(a, b; l, k)`.
fn check_tietze_witness(witness: &Presentation, l: i64, k: i64) -> Result<(), String> {
    let (a0, a1) = (kernel::indexed_generator("a", 0), kernel::indexed_generator("a", 1));
    if witness.generators() != [a0.clone(), a1.clone(), gen_b()] {
        return Err("witness must be on generators a_0, a_1, b".into());
    }
    let [bs_rel, stable_rel] = witness.relators() else {
        return Err("witness must have exactly two relators".into());
    };
    let base = Presentation::new(vec![a0.clone(), a1.clone()], vec![bs_rel.clone()])
        .map_err(|e| format!("base relator: {e}"))?;
    match detect_bs(&base) {
        Some(found) if found == (l, k) => {}
        Some(found) => return Err(format!("base relator is BS{found:?}, expected BS({l},{k})")),
        None => return Err("base relator is not a Baumslag-Solitar relator".into()),
    }
    let expected_stable = Word::gen(&a0).conjugate(&b()).mul(&Word::gen(&a1).inverse());
    if !cyclic_equivalent(stable_rel, &expected_stable) {
        return Err("second relator must identify b^-1 a_0 b with a_1".into());
    }
    // Eliminate a_1 = b^-1 a_0 b and rename a_0 to a.
    let eliminated = bs_rel.substitute(|g| {
        if *g == a0 {
            a()
        } else if *g == a1 {
            a().conjugate(&b())
        } else {
            Word::gen(g)
        }
    });
    if !cyclic_equivalent(&eliminated, &family_relator(&a(), &b(), l, k)) {
        return Err("eliminating a_1 does not recover the relator of G(a, b; l, k)".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Builders

fn family_descriptor(w: Word, l: i64, k: i64) -> GroupDescriptor {
    GroupDescriptor::family(a(), w, l, k)
}

fn hnn_certificate(l: i64, k: i64) -> Certificate {
    let rec = recognize_hnn_over_bs(l, k).expect("nonzero parameters");
    Certificate::node(
        Rule::RHnnAmenableEdge,
        family_descriptor(b(), l, k),
        vec![
            Certificate::axiom(Rule::AxBsResSolv, GroupDescriptor::BS(l, k)),
            Certificate::axiom(Rule::AxAmenable, GroupDescriptor::CyclicZ),
        ],
        vec![SideCondition::TietzeHnn { witness: rec.witness }],
    )
}

fn kernel_of(w: &Word, l: i64, k: i64) -> IndexedPresentation {
    let p = make_g(&a(), w, l, k).expect("valid family");
    kernel::z_kernel(&p).expect("b has exponent sum zero")
}

/// Re-targets a certificate built for `n > 0` at `-n` via `b ↦ b⁻¹`.
fn denormalize(mut cert: Certificate, flipped: GroupDescriptor) -> Certificate {
    let normalized = std::mem::replace(&mut cert.conclusion, flipped);
    cert.side_conditions.insert(0, SideCondition::Normalize { normalized });
    cert
}

fn flipped_family(desc: &GroupDescriptor) -> GroupDescriptor {
    match desc {
        GroupDescriptor::FamilyG { r, w, l, k } => GroupDescriptor::family(flip_b(r), flip_b(w), *l, *k),
        other => other.clone(),
    }
}

/// Soficity of `G(a, b^n; l, k)`.
///
/// `|n| = 1` is the HNN extension of `BS(l,k)` over `Z`. For `|n| ≥ 2` the
/// `Z`-kernel is a free product of `|n|` copies of the kernel of
/// `G(a, b; l, k)`, a subgroup of a sofic group, and the group is
/// kernel-by-`Z`. Negative `n` is reduced to `|n|` by `b ↦ b⁻¹`.
pub fn certify_theorem_a(n: i64, l: i64, k: i64) -> Result<Certificate, CertifyError> {
    if n == 0 || l == 0 || k == 0 {
        return Err(CertifyError::ZeroParameter);
    }
    let m = n.unsigned_abs() as u32;
    let positive = if m == 1 {
        hnn_certificate(l, k)
    } else {
        let base_kernel = kernel_of(&b(), l, k);
        let copies = (0..m)
            .map(|_| {
                Certificate::node(
                    Rule::RSubgroup,
                    GroupDescriptor::IndexedKernel(base_kernel.clone()),
                    vec![hnn_certificate(l, k)],
                    vec![SideCondition::KernelOf],
                )
            })
            .collect();
        let wn = b().pow(i64::from(m));
        let free = Certificate::node(
            Rule::RFreeProduct,
            GroupDescriptor::IndexedKernel(kernel_of(&wn, l, k)),
            copies,
            vec![SideCondition::SplitMod { modulus: m }],
        );
        Certificate::node(
            Rule::RExtByAmenable,
            family_descriptor(wn, l, k),
            vec![free, Certificate::axiom(Rule::AxAmenable, GroupDescriptor::CyclicZ)],
            vec![SideCondition::ZKernel],
        )
    };
    if n > 0 {
        Ok(positive)
    } else {
        let flipped = flipped_family(&positive.conclusion);
        Ok(denormalize(positive, flipped))
    }
}

/// Soficity of `G(a, b^-n a b^n; l, k)`.
///
/// The `Z`-kernel splits modulo `|n|` into copies of `H`, the direct limit
/// of iterated amalgams of two-generator pieces `≅ G(a, b; l, k)` over
/// cyclic edges. `stages` finite stages are carried explicitly.
pub fn certify_theorem_c(n: i64, l: i64, k: i64) -> Result<Certificate, CertifyError> {
    certify_theorem_c_with_stages(n, l, k, DEFAULT_STAGES)
}

pub fn certify_theorem_c_with_stages(n: i64, l: i64, k: i64, stages: u32) -> Result<Certificate, CertifyError> {
    if n == 0 || l == 0 || k == 0 {
        return Err(CertifyError::ZeroParameter);
    }
    let stages = stages.max(2);
    let m = n.unsigned_abs() as u32;
    let bm = b().pow(i64::from(m));
    let w = a().conjugate(&bm);
    let k_full = kernel_of(&w, l, k);
    let h = kernel::split_mod(&k_full, m).expect("kernel schema lives in one residue class")[0].clone();
    let schema = h.schemas()[0].clone();

    let piece = certify_theorem_a(1, l, k)?;
    let mut stage = piece.clone();
    for s in 1..stages {
        let conclusion = GroupDescriptor::Amalgam {
            left: Box::new(stage.conclusion.clone()),
            right: Box::new(piece.conclusion.clone()),
            edge: Box::new(GroupDescriptor::CyclicZ),
        };
        stage = Certificate::node(
            Rule::RAmalgamAmenableEdge,
            conclusion,
            vec![
                stage,
                piece.clone(),
                Certificate::axiom(Rule::AxAmenable, GroupDescriptor::CyclicZ),
            ],
            vec![SideCondition::AmalgamStep {
                stage: s,
                schema: schema.clone(),
            }],
        );
    }
    let mut limit = Certificate::node(
        Rule::RLocallySofic,
        GroupDescriptor::DirectLimit(Box::new(GroupDescriptor::IndexedKernel(h))),
        vec![stage],
        vec![SideCondition::LimitStages { stages }],
    );
    limit.comment = Some(PIECE_NOTE.to_string());

    let free = Certificate::node(
        Rule::RFreeProduct,
        GroupDescriptor::IndexedKernel(k_full),
        vec![limit; m as usize],
        vec![SideCondition::SplitMod { modulus: m }],
    );
    let positive = Certificate::node(
        Rule::RExtByAmenable,
        family_descriptor(w, l, k),
        vec![free, Certificate::axiom(Rule::AxAmenable, GroupDescriptor::CyclicZ)],
        vec![SideCondition::ZKernel],
    );
    if n > 0 {
        Ok(positive)
    } else {
        let flipped = flipped_family(&positive.conclusion);
        Ok(denormalize(positive, flipped))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `G(a, b^n; l, k)`
    A,
    /// `G(a, b^-n a b^n; l, k)`
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyMatch {
    pub theorem: Theorem,
    pub n: i64,
    pub l: i64,
    pub k: i64,
    /// The input relator equals the family relator letter for letter.
    pub exact: bool,
}

impl FamilyMatch {
    pub fn conjugator(&self) -> Word {
        match self.theorem {
            Theorem::A => b().pow(self.n),
            Theorem::C => a().conjugate(&b().pow(self.n)),
        }
    }

    pub fn certificate(&self) -> Result<Certificate, CertifyError> {
        match self.theorem {
            Theorem::A => certify_theorem_a(self.n, self.l, self.k),
            Theorem::C => certify_theorem_c(self.n, self.l, self.k),
        }
    }
}

impl fmt::Display for FamilyMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(a, {}; {}, {})", self.conjugator(), self.l, self.k)
    }
}

/// Finds a member of the two certified families whose relator agrees with
/// the single relator of `p` up to cyclic permutation and inversion.
///
/// Family relators are cyclically reduced of length `2c + |l| + |k|` where
/// `c` is the conjugator length, which bounds the search. An exact
/// letter-for-letter match is preferred; otherwise the first match in the
/// order theorem, `|n|`, sign of `n`, sign of `l`, `|l|`, sign of `k`, with
/// positive before negative.
pub fn recognize_family(p: &Presentation) -> Option<FamilyMatch> {
    let mut gens = p.generators().to_vec();
    gens.sort();
    if gens != [gen_a(), gen_b()] {
        return None;
    }
    let [rel] = p.relators() else {
        return None;
    };
    let target = canonical_relator(rel);
    let len = target.len() as i64;
    let mut first: Option<FamilyMatch> = None;
    for theorem in [Theorem::A, Theorem::C] {
        for abs_n in 1..=len {
            let conj_len = match theorem {
                Theorem::A => 2 * abs_n + 1,
                Theorem::C => 4 * abs_n + 3,
            };
            let rest = len - 2 * conj_len;
            if rest < 2 {
                break;
            }
            for n in [abs_n, -abs_n] {
                for l in (1..=rest).chain((-rest..=-1).rev()) {
                    let k_abs = rest - l.abs();
                    if k_abs == 0 {
                        continue;
                    }
                    for k in [k_abs, -k_abs] {
                        let mut cand = FamilyMatch {
                            theorem,
                            n,
                            l,
                            k,
                            exact: false,
                        };
                        let relator = family_relator(&a(), &cand.conjugator(), l, k);
                        if canonical_relator(&relator) != target {
                            continue;
                        }
                        if relator == *rel {
                            cand.exact = true;
                            return Some(cand);
                        }
                        first.get_or_insert(cand);
                    }
                }
            }
        }
    }
    first
}

/// Certificate for a presentation recognized as a member of a certified family.
pub fn certify_presentation(p: &Presentation) -> Result<(FamilyMatch, Certificate), CertifyError> {
    let m = recognize_family(p).ok_or(CertifyError::NoCertificate)?;
    Ok((m, m.certificate()?))
}

// ---------------------------------------------------------------------------
// Checker

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(ToString::to_string).collect();
        write!(f, "node /{} ({}): {}", path.join("/"), self.rule, self.reason)
    }
}

pub fn verify(c: &Certificate) -> bool {
    check(c).is_ok()
}

/// Checks every node in depth-first pre-order and reports the first failure.
pub fn check(c: &Certificate) -> Result<(), VerifyFailure> {
    let mut path = Vec::new();
    check_rec(c, &mut path)
}

fn check_rec(c: &Certificate, path: &mut Vec<usize>) -> Result<(), VerifyFailure> {
    check_node(c).map_err(|reason| VerifyFailure {
        path: path.clone(),
        rule: c.rule,
        reason,
    })?;
    for (i, p) in c.premises.iter().enumerate() {
        path.push(i);
        check_rec(p, path)?;
        path.pop();
    }
    Ok(())
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arity(c: &Certificate, n: usize) -> Check {
    ensure(c.premises.len() == n, || {
        format!("{} expects {n} premises, found {}", c.rule, c.premises.len())
    })
}

/// Side conditions other than `Normalize`, which is handled by [`effective_family`].
fn structural_sides(c: &Certificate) -> Vec<&SideCondition> {
    c.side_conditions
        .iter()
        .filter(|s| !matches!(s, SideCondition::Normalize { .. }))
        .collect()
}

fn no_sides(c: &Certificate) -> Check {
    ensure(c.side_conditions.is_empty(), || "unexpected side conditions".into())
}

/// `(r, w, l, k)` of a family conclusion after applying any `Normalize`
/// side condition, which is rechecked here.
fn effective_family(c: &Certificate) -> Result<(Word, Word, i64, i64), String> {
    let GroupDescriptor::FamilyG { r, w, l, k } = &c.conclusion else {
        return Err("conclusion is not a G(r, w; l, k) family".into());
    };
    if *l == 0 || *k == 0 {
        return Err("family parameters must be nonzero".into());
    }
    let normalizations: Vec<&GroupDescriptor> = c
        .side_conditions
        .iter()
        .filter_map(|s| match s {
            SideCondition::Normalize { normalized } => Some(normalized),
            _ => None,
        })
        .collect();
    match normalizations.as_slice() {
        [] => Ok((r.clone(), w.clone(), *l, *k)),
        [GroupDescriptor::FamilyG {
            r: r2,
            w: w2,
            l: l2,
            k: k2,
        }] => {
            ensure((l2, k2) == (l, k) && *r2 == flip_b(r) && *w2 == flip_b(w), || {
                "normalized family is not the image under b -> b^-1".into()
            })?;
            let image = flip_b(&family_relator(r, w, *l, *k));
            ensure(cyclic_equivalent(&image, &family_relator(r2, w2, *l2, *k2)), || {
                "b -> b^-1 does not carry the relator onto the normalized relator".into()
            })?;
            Ok((r2.clone(), w2.clone(), *l2, *k2))
        }
        _ => Err("malformed normalization".into()),
    }
}

fn expect_family_ab(c: &Certificate) -> Result<(i64, i64), String> {
    let (r, w, l, k) = effective_family(c)?;
    ensure(r == a() && w == b(), || "expected the family G(a, b; l, k)".into())?;
    Ok((l, k))
}

fn z_kernel_of_family(c: &Certificate) -> Result<IndexedPresentation, String> {
    let (r, w, l, k) = effective_family(c)?;
    let p = make_g(&r, &w, l, k).map_err(|e| e.to_string())?;
    kernel::z_kernel(&p).map_err(|e| e.to_string())
}

fn check_node(c: &Certificate) -> Check {
    match c.rule {
        Rule::AxAmenable => {
            arity(c, 0)?;
            no_sides(c)?;
            ensure(c.conclusion.is_amenable(), || {
                format!("{} is not an amenable descriptor", c.conclusion)
            })
        }
        Rule::AxBsResSolv => {
            arity(c, 0)?;
            no_sides(c)?;
            match c.conclusion {
                GroupDescriptor::BS(l, k) if l != 0 && k != 0 => Ok(()),
                _ => Err(format!(
                    "{} is not a Baumslag-Solitar group BS(l,k), l,k != 0",
                    c.conclusion
                )),
            }
        }
        Rule::RHnnAmenableEdge => check_hnn(c),
        Rule::RSubgroup => {
            arity(c, 1)?;
            ensure(
                structural_sides(c) == [&SideCondition::KernelOf] && c.side_conditions.len() == 1,
                || "R_SUBGROUP needs exactly the kernel-of side condition".into(),
            )?;
            let GroupDescriptor::IndexedKernel(ip) = &c.conclusion else {
                return Err("R_SUBGROUP concludes only kernel subgroups".into());
            };
            let computed = z_kernel_of_family(&c.premises[0])?;
            ensure(&computed == ip, || {
                format!("kernel of the premise family is {computed:?}, not {ip:?}")
            })
        }
        Rule::RFreeProduct => check_free_product(c),
        Rule::RExtByAmenable => check_extension(c),
        Rule::RAmalgamAmenableEdge => check_amalgam(c),
        Rule::RLocallySofic => check_limit(c),
    }
}

fn check_hnn(c: &Certificate) -> Check {
    arity(c, 2)?;
    let (base, edge) = (&c.premises[0].conclusion, &c.premises[1].conclusion);
    ensure(edge.is_amenable(), || format!("edge group {edge} is not amenable"))?;
    match &c.conclusion {
        GroupDescriptor::HNN { base: b0, edge: e0 } => {
            no_sides(c)?;
            ensure(**b0 == *base && **e0 == *edge, || {
                "HNN descriptor does not match the premises".into()
            })
        }
        GroupDescriptor::FamilyG { .. } => {
            let (l, k) = expect_family_ab(c)?;
            ensure(*base == GroupDescriptor::BS(l, k), || {
                format!("base premise must be BS({l},{k})")
            })?;
            ensure(*edge == GroupDescriptor::CyclicZ, || "edge premise must be Z".into())?;
            match structural_sides(c).as_slice() {
                [SideCondition::TietzeHnn { witness }] => check_tietze_witness(witness, l, k),
                _ => Err("HNN recognition needs exactly one tietze-hnn witness".into()),
            }
        }
        other => Err(format!("R_HNN_AMENABLE_EDGE cannot conclude {other}")),
    }
}

fn check_free_product(c: &Certificate) -> Check {
    ensure(!c.premises.is_empty(), || "free product of no factors".into())?;
    let factors: Vec<&GroupDescriptor> = c.premises.iter().map(|p| &p.conclusion).collect();
    match &c.conclusion {
        GroupDescriptor::FreeProduct(parts) => {
            no_sides(c)?;
            ensure(parts.iter().eq(factors.iter().copied()), || {
                "free product factors do not match the premises".into()
            })
        }
        GroupDescriptor::IndexedKernel(ip) => {
            let modulus = match c.side_conditions.as_slice() {
                [SideCondition::SplitMod { modulus }] => *modulus,
                _ => return Err("kernel free product needs exactly one split-mod witness".into()),
            };
            ensure(modulus as usize == c.premises.len(), || {
                format!("split modulo {modulus} must have {modulus} premises")
            })?;
            let components = kernel::split_mod(ip, modulus).map_err(|e| e.to_string())?;
            for (j, (comp, factor)) in components.iter().zip(&factors).enumerate() {
                ensure(factor.indexed_kernel() == Some(comp), || {
                    format!("component {j} of the splitting does not match premise {j}")
                })?;
            }
            Ok(())
        }
        other => Err(format!("R_FREE_PRODUCT cannot conclude {other}")),
    }
}

fn check_extension(c: &Certificate) -> Check {
    arity(c, 2)?;
    let (kernel_desc, quotient) = (&c.premises[0].conclusion, &c.premises[1].conclusion);
    ensure(*quotient == GroupDescriptor::CyclicZ, || {
        "quotient premise must be Z".into()
    })?;
    match &c.conclusion {
        GroupDescriptor::ExtensionByZ(k) => {
            no_sides(c)?;
            ensure(**k == *kernel_desc, || {
                "extension kernel does not match the premise".into()
            })
        }
        GroupDescriptor::FamilyG { .. } => {
            ensure(structural_sides(c) == [&SideCondition::ZKernel], || {
                "family extension needs exactly the z-kernel side condition".into()
            })?;
            let computed = z_kernel_of_family(c)?;
            ensure(kernel_desc.indexed_kernel() == Some(&computed), || {
                format!("Z-kernel of the conclusion is {computed:?}, premise states {kernel_desc}")
            })
        }
        other => Err(format!("R_EXT_BY_AMENABLE cannot conclude {other}")),
    }
}

fn amalgam_step(c: &Certificate) -> Option<(u32, &IndexedWord)> {
    match c.side_conditions.as_slice() {
        [SideCondition::AmalgamStep { stage, schema }] if c.rule == Rule::RAmalgamAmenableEdge => {
            Some((*stage, schema))
        }
        _ => None,
    }
}

/// The piece `shift(schema, s)` written over `a, b` via `g_s ↦ a, g_s+1 ↦ b`.
fn renamed_piece(schema: &IndexedWord, s: i64) -> Result<Word, String> {
    ensure(schema.support() == [0, 1], || {
        "piece schema must involve exactly g_0 and g_1".into()
    })?;
    Ok(schema.shift(s).to_word(|i| if i == s { gen_a() } else { gen_b() }))
}

fn check_amalgam(c: &Certificate) -> Check {
    arity(c, 3)?;
    let (left, right, edge) = (&c.premises[0], &c.premises[1], &c.premises[2]);
    ensure(edge.conclusion.is_amenable(), || {
        format!("edge group {} is not amenable", edge.conclusion)
    })?;
    let GroupDescriptor::Amalgam {
        left: l0,
        right: r0,
        edge: e0,
    } = &c.conclusion
    else {
        return Err(format!("R_AMALGAM_AMENABLE_EDGE cannot conclude {}", c.conclusion));
    };
    ensure(
        **l0 == left.conclusion && **r0 == right.conclusion && **e0 == edge.conclusion,
        || "amalgam descriptor does not match the premises".into(),
    )?;
    let Some((stage, schema)) = amalgam_step(c) else {
        return Err("amalgam needs exactly one amalgam-step witness".into());
    };
    ensure(stage >= 1, || "stages are numbered from 1".into())?;
    ensure(edge.conclusion == GroupDescriptor::CyclicZ, || {
        "edge ⟨g_s⟩ is infinite cyclic".into()
    })?;
    let (l, k) = expect_family_ab(right)?;
    let target = family_relator(&a(), &b(), l, k);
    let s = i64::from(stage);
    ensure(cyclic_equivalent(&renamed_piece(schema, s)?, &target), || {
        format!(
            "piece {stage} is not G(a, b; {l}, {k}) under g_{stage} -> a, g_{} -> b",
            stage + 1
        )
    })?;
    // Stage s uses g_0..g_s, the new piece uses g_s, g_s+1: they share only g_s.
    let stage_gens: Vec<i64> = (0..=s).collect();
    let piece_gens: Vec<i64> = schema.shift(s).support();
    let shared: Vec<i64> = piece_gens.iter().copied().filter(|i| stage_gens.contains(i)).collect();
    ensure(shared == [s], || {
        format!("stage and piece share {shared:?}, expected only g_{s}")
    })?;
    if stage == 1 {
        // Stage 1 is the piece on g_0, g_1 itself.
        let (l1, k1) = expect_family_ab(left)?;
        ensure(
            cyclic_equivalent(&renamed_piece(schema, 0)?, &family_relator(&a(), &b(), l1, k1)),
            || "stage 1 is not the first piece".into(),
        )
    } else {
        match amalgam_step(left) {
            Some((prev, prev_schema)) if prev + 1 == stage && prev_schema == schema => Ok(()),
            _ => Err(format!(
                "left premise must be amalgam stage {} with the same piece",
                stage - 1
            )),
        }
    }
}

fn check_limit(c: &Certificate) -> Check {
    arity(c, 1)?;
    let stages = match c.side_conditions.as_slice() {
        [SideCondition::LimitStages { stages }] => *stages,
        _ => return Err("direct limit needs exactly one limit-stages witness".into()),
    };
    ensure(stages >= 2, || "at least one inductive amalgam step is required".into())?;
    let GroupDescriptor::DirectLimit(inner) = &c.conclusion else {
        return Err(format!("R_LOCALLY_SOFIC cannot conclude {}", c.conclusion));
    };
    let GroupDescriptor::IndexedKernel(h) = inner.as_ref() else {
        return Err("direct limit must be of an indexed kernel".into());
    };
    let [schema] = h.schemas() else {
        return Err("limit kernel must have a single relator schema".into());
    };
    match amalgam_step(&c.premises[0]) {
        Some((top, s)) if top + 1 == stages && s == schema => Ok(()),
        _ => Err(format!(
            "premise must be amalgam stage {stages} built from the kernel schema"
        )),
    }
}
