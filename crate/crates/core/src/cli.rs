//! Command dispatch and report formatting for the `relator-forge` binary.
//!
//! [`run`] never prints; it returns the exit status and both output streams
//! so reports can be compared byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::certify::{self, CertifyError, FamilyMatch};
use crate::dsl::{parse_presentation, parse_word};
use crate::kernel::{self, KernelError};
use crate::lemmas;
use crate::obstruct::{abelianized_image_of_r, check_not_rf, check_not_rs, Status};
use crate::presentation::{canonical_relator, check_noncommuting, gen_a, gen_b, make_g, Presentation};
use crate::quotient::{self, eval_word, DEFAULT_MAX_DEGREE};
use crate::word::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

pub const MAX_DEGREE_ENV: &str = "RELATOR_FORGE_MAX_DEGREE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Analyze,
    Kernel,
    Split,
    Certify,
    Obstruct,
    Quotients,
    Lemmas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Inline(String),
    File(PathBuf),
    /// `r,w,l,k` with `r`, `w` words over `a, b`.
    Family(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub window: Option<u32>,
    pub modulus: Option<u32>,
    pub degree: usize,
    pub element: Option<String>,
    pub list: bool,
    pub stages: u32,
    pub max_degree: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            window: None,
            modulus: None,
            degree: 3,
            element: None,
            list: false,
            stages: certify::DEFAULT_STAGES,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub target: Option<Target>,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            status: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn unknown(stdout: String) -> Self {
        Report {
            status: EXIT_UNKNOWN,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(message: impl std::fmt::Display) -> Self {
        Report {
            status: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parameters of `G_{r,w}(l,k)` as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub r: Word,
    pub w: Word,
    pub l: i64,
    pub k: i64,
}

/// Splits on commas outside brackets and parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub fn parse_family(spec: &str) -> Result<FamilySpec, String> {
    let parts = split_top_level(spec);
    let [r, w, l, k] = parts.as_slice() else {
        return Err(format!("family must be r,w,l,k, got {spec:?}"));
    };
    let alphabet = [gen_a(), gen_b()];
    let r = parse_word(r, Some(&alphabet)).map_err(|e| e.to_string())?;
    let w = parse_word(w, Some(&alphabet)).map_err(|e| e.to_string())?;
    let l = l
        .trim()
        .parse::<i64>()
        .map_err(|_| format!("l must be an integer, got {l:?}"))?;
    let k = k
        .trim()
        .parse::<i64>()
        .map_err(|_| format!("k must be an integer, got {k:?}"))?;
    Ok(FamilySpec { r, w, l, k })
}

struct Resolved {
    presentation: Presentation,
    family: Option<FamilySpec>,
}

fn resolve(target: &Option<Target>) -> Result<Resolved, String> {
    match target {
        None => Err("a target presentation, --file or --family is required".into()),
        Some(Target::Inline(text)) => Ok(Resolved {
            presentation: parse_presentation(text).map_err(|e| e.to_string())?,
            family: None,
        }),
        Some(Target::File(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(Resolved {
                presentation: parse_presentation(&text).map_err(|e| e.to_string())?,
                family: None,
            })
        }
        Some(Target::Family(spec)) => {
            let f = parse_family(spec)?;
            let presentation = make_g(&f.r, &f.w, f.l, f.k).map_err(|e| e.to_string())?;
            Ok(Resolved {
                presentation,
                family: Some(f),
            })
        }
    }
}

fn family_label(f: &FamilySpec) -> String {
    format!("G({}, {}; {}, {})", f.r, f.w, f.l, f.k)
}

fn match_label(m: &FamilyMatch) -> String {
    let how = if m.exact {
        "exact"
    } else {
        "up to cyclic permutation and inversion"
    };
    format!("{m} ({how})")
}

pub fn run(cmd: &Command) -> Report {
    if cmd.verb == Verb::Lemmas {
        return run_lemmas();
    }
    let resolved = match resolve(&cmd.target) {
        Ok(r) => r,
        Err(e) => return Report::error(e),
    };
    match cmd.verb {
        Verb::Analyze => analyze(&resolved),
        Verb::Kernel => kernel_report(&resolved, &cmd.options),
        Verb::Split => split_report(&resolved, &cmd.options),
        Verb::Certify => certify_report(&resolved, &cmd.options),
        Verb::Obstruct => obstruct_report(&resolved),
        Verb::Quotients => quotients_report(&resolved, &cmd.options),
        Verb::Lemmas => unreachable!(),
    }
}

fn analyze(res: &Resolved) -> Report {
    let p = &res.presentation;
    let mut out = String::new();
    let _ = writeln!(out, "presentation: {p}");
    for (i, r) in p.relators().iter().enumerate() {
        let _ = writeln!(out, "relator {}: {r}", i + 1);
        let _ = writeln!(out, "  length: {}", r.len());
        let _ = writeln!(out, "  exponent sums: {}", r.abelianize());
        let _ = writeln!(out, "  canonical form: {}", canonical_relator(r));
    }
    if let Some(f) = &res.family {
        let _ = writeln!(out, "family: {}", family_label(f));
        let _ = writeln!(
            out,
            "r, w noncommuting: {}",
            if check_noncommuting(&f.r, &f.w) { "yes" } else { "no" }
        );
    }
    match certify::recognize_family(p) {
        Some(m) => {
            let _ = writeln!(out, "recognized: {}", match_label(&m));
        }
        None => {
            let _ = writeln!(out, "recognized: none");
        }
    }
    Report::ok(out)
}

fn kernel_report(res: &Resolved, opts: &Options) -> Report {
    let ip = match kernel::z_kernel(&res.presentation) {
        Ok(ip) => ip,
        Err(e) => return Report::error(e),
    };
    let mut out = String::new();
    let _ = writeln!(out, "kernel of a -> 1, b -> z (generators a_i = b^-i a b^i)");
    for (i, s) in ip.schemas().iter().enumerate() {
        let _ = writeln!(out, "schema {}: {s}", i + 1);
    }
    if let Some(n) = opts.window {
        match kernel::instantiate(&ip, n) {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "window {n}: {} generators, {} relators",
                    p.generators().len(),
                    p.relators().len()
                );
                for r in p.relators() {
                    let _ = writeln!(out, "  {r}");
                }
            }
            Err(e) => return Report::error(e),
        }
    }
    Report::ok(out)
}

fn split_report(res: &Resolved, opts: &Options) -> Report {
    let Some(n) = opts.modulus else {
        return Report::error("split needs --modulus");
    };
    let ip = match kernel::z_kernel(&res.presentation) {
        Ok(ip) => ip,
        Err(e) => return Report::error(e),
    };
    let mut out = String::new();
    let _ = writeln!(out, "kernel: {ip}");
    match kernel::split_mod(&ip, n) {
        Ok(parts) => {
            let _ = writeln!(out, "free product of {} components modulo {n}", parts.len());
            for (j, c) in parts.iter().enumerate() {
                let _ = writeln!(out, "component {j}: {c}");
            }
            Report::ok(out)
        }
        Err(KernelError::SplitFailure { schema, modulus }) => {
            let _ = writeln!(
                out,
                "NO SPLITTING: schema {schema} mixes residue classes modulo {modulus}"
            );
            Report::unknown(out)
        }
        Err(e) => Report::error(e),
    }
}

fn certify_report(res: &Resolved, opts: &Options) -> Report {
    let Some(m) = certify::recognize_family(&res.presentation) else {
        return Report::unknown("UNKNOWN: no certificate rule applies\n".to_string());
    };
    let cert = match m.theorem {
        certify::Theorem::A => certify::certify_theorem_a(m.n, m.l, m.k),
        certify::Theorem::C => certify::certify_theorem_c_with_stages(m.n, m.l, m.k, opts.stages),
    };
    let cert = match cert {
        Ok(c) => c,
        Err(CertifyError::NoCertificate) => {
            return Report::unknown("UNKNOWN: no certificate rule applies\n".to_string())
        }
        Err(e) => return Report::error(e),
    };
    let mut out = String::new();
    let _ = writeln!(out, "family: {}", match_label(&m));
    let _ = writeln!(out, "certificate ({} nodes):", cert.node_count());
    out.push_str(&cert.render());
    match certify::check(&cert) {
        Ok(()) => {
            let _ = writeln!(out, "verified: yes");
            Report::ok(out)
        }
        Err(f) => Report {
            status: EXIT_ERROR,
            stdout: out,
            stderr: format!("error: certificate failed to verify: {f}\n"),
        },
    }
}

fn obstruct_report(res: &Resolved) -> Report {
    let f = match &res.family {
        Some(f) => f.clone(),
        None => match certify::recognize_family(&res.presentation) {
            Some(m) => FamilySpec {
                r: Word::gen(&gen_a()),
                w: m.conjugator(),
                l: m.l,
                k: m.k,
            },
            None => return Report::unknown("UNKNOWN: presentation is not recognized as G(r, w; l, k)\n".to_string()),
        },
    };
    let (rf, rs, ab) = match (
        check_not_rf(f.l, f.k),
        check_not_rs(&f.r, &f.w, f.l, f.k),
        abelianized_image_of_r(&f.r, f.l, f.k),
    ) {
        (Ok(rf), Ok(rs), Ok(ab)) => (rf, rs, ab),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Report::error(e),
    };
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", family_label(&f));
    let _ = writeln!(out, "not residually finite: {rf}");
    let _ = writeln!(out, "not residually solvable: {rs}");
    if let Some(t) = &rs.witness {
        let _ = writeln!(out, "  [r^l, r^w] = {}", t.commutator);
        let _ = writeln!(out, "  [r^l, r^w]^-1 r^-l (r^l)^(r^w) reduces to {}", t.free_identity);
        let _ = writeln!(out, "  relator identity reduces to {}", t.relator_identity);
    }
    let _ = writeln!(out, "order of r in the abelianization: {ab}");
    if rf.status == Status::Proved || rs.status == Status::Proved {
        Report::ok(out)
    } else {
        Report::unknown(out)
    }
}

fn quotients_report(res: &Resolved, opts: &Options) -> Report {
    let m = opts.degree;
    if m > opts.max_degree {
        return Report::error(format!(
            "degree {m} exceeds the cap {} set by {MAX_DEGREE_ENV}",
            opts.max_degree
        ));
    }
    let mut stderr = String::new();
    if m >= 7 {
        let _ = writeln!(
            stderr,
            "warning: degree {m} searches {} pairs",
            (1..=m).product::<usize>().pow(2)
        );
    }
    let solutions = match quotient::enumerate_homs(&res.presentation, m) {
        Ok(s) => s,
        Err(e) => return Report::error(e),
    };
    let element = match &opts.element {
        Some(text) => match parse_word(text, Some(res.presentation.generators())) {
            Ok(w) => Some(w),
            Err(e) => return Report::error(e),
        },
        None => res.family.as_ref().map(|f| f.r.clone()),
    };
    let mut out = String::new();
    let _ = writeln!(out, "presentation: {}", res.presentation);
    let _ = writeln!(out, "degree: {m}");
    let _ = writeln!(out, "solutions: {}", solutions.len());
    if opts.list {
        for s in &solutions {
            let _ = writeln!(out, "  a={} b={}", s.a, s.b);
        }
    }
    if let Some(e) = element {
        let mut nontrivial = 0;
        for s in &solutions {
            match eval_word(&e, m, &s.assignment()) {
                Ok(p) if !p.is_identity() => nontrivial += 1,
                Ok(_) => {}
                Err(err) => return Report::error(err),
            }
        }
        if nontrivial == 0 {
            let _ = writeln!(out, "element {e}: trivial in all {} solutions", solutions.len());
        } else {
            let _ = writeln!(
                out,
                "element {e}: nontrivial in {nontrivial} of {} solutions",
                solutions.len()
            );
        }
    }
    Report {
        status: EXIT_OK,
        stdout: out,
        stderr,
    }
}

fn run_lemmas() -> Report {
    let results = lemmas::run_suite();
    let mut out = String::new();
    for r in &results {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict} {} ({} cases, {} failures)", r.name, r.cases, r.failures);
    }
    if results.iter().all(lemmas::LemmaResult::passed) {
        Report::ok(out)
    } else {
        Report {
            status: EXIT_ERROR,
            stdout: out,
            stderr: "error: lemma suite failed\n".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmd(verb: Verb, target: Target) -> Command {
        Command {
            verb,
            target: Some(target),
            options: Options::default(),
        }
    }

    #[test]
    fn family_spec_with_commutator() {
        let f = parse_family("[a,b], b, 1, 2").unwrap();
        assert_eq!(f.r.to_string(), "a^-1 b^-1 a b");
        assert_eq!((f.l, f.k), (1, 2));
        assert!(parse_family("a,b,1").is_err());
        assert!(parse_family("a,c,1,2").is_err());
        assert!(parse_family("a,b,x,2").is_err());
    }

    #[test]
    fn certify_exit_codes() {
        let r = run(&cmd(Verb::Certify, Target::Family("a,b^2,1,2".into())));
        assert_eq!(r.status, EXIT_OK, "{}", r.stderr);
        assert!(r.stdout.ends_with("verified: yes\n"));
        let r = run(&cmd(
            Verb::Certify,
            Target::Inline("<a,b | (a^1)^(a^(b^-1 a b^2)) = a^2>".into()),
        ));
        assert_eq!(r.status, EXIT_UNKNOWN);
        assert_eq!(r.stdout, "UNKNOWN: no certificate rule applies\n");
    }

    #[test]
    fn errors_go_to_stderr() {
        let r = run(&cmd(Verb::Analyze, Target::Inline("<a,b | a^b = b^a".into())));
        assert_eq!(r.status, EXIT_ERROR);
        assert!(r.stdout.is_empty());
        assert!(r.stderr.starts_with("error: parse error"));
        let r = run(&Command {
            verb: Verb::Kernel,
            target: None,
            options: Options::default(),
        });
        assert_eq!(r.status, EXIT_ERROR);
        let r = run(&cmd(Verb::Kernel, Target::Inline("<a,b | a b>".into())));
        assert_eq!(r.status, EXIT_ERROR);
    }

    #[test]
    fn quotient_degree_cap() {
        let mut c = cmd(Verb::Quotients, Target::Inline("<a,b | a>".into()));
        c.options.degree = 7;
        let r = run(&c);
        assert_eq!(r.status, EXIT_ERROR);
        assert!(r.stderr.contains(MAX_DEGREE_ENV));
    }

    #[test]
    fn obstruct_unknown_when_nothing_fires() {
        let r = run(&cmd(Verb::Obstruct, Target::Family("a,b,1,1".into())));
        assert_eq!(r.status, EXIT_UNKNOWN);
        let r = run(&cmd(Verb::Obstruct, Target::Inline("<a,b | [a,b]>".into())));
        assert_eq!(r.status, EXIT_UNKNOWN);
    }

    #[test]
    fn split_failure_is_reported() {
        let mut c = cmd(Verb::Split, Target::Family("a,b,1,2".into()));
        c.options.modulus = Some(2);
        let r = run(&c);
        assert_eq!(r.status, EXIT_UNKNOWN);
        assert!(r.stdout.contains("NO SPLITTING"));
    }
}
