//! Text syntax for presentations.
//!
//! ```text
//! presentation := '<' ident (',' ident)* '|' relation (',' relation)* '>'
//! relation     := word ('=' word)?
//! word         := '1' | factor+            juxtaposition or '*' is product
//! factor       := atom ('^' (integer | atom))?
//! atom         := ident | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `x^n` with an integer exponent is a power and `x^y` with an atom exponent
//! is the conjugate `y⁻¹ x y`. A relation `u = v` is stored as `u v⁻¹`.
//! An empty relation list is accepted for free groups.

use thiserror::Error;

use crate::presentation::{Presentation, PresentationError};
use crate::word::{commutator, Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator {name} at line {line}, column {column}")]
    UnknownGenerator { name: String, line: usize, column: usize },
    #[error("{0}")]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_lowercase() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                    s.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: tl,
                column: tc,
            });
        } else if c.is_ascii_digit() || c == '-' {
            let mut s = String::new();
            if c == '-' {
                s.push('-');
                bump(&mut chars);
                while chars.peek().is_some_and(|c| *c == ' ' || *c == '\t') {
                    bump(&mut chars);
                }
            }
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            let value = s.parse::<i64>().map_err(|_| ParseError::Syntax {
                line: tl,
                column: tc,
                message: format!("malformed integer {s:?}"),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                line: tl,
                column: tc,
            });
        } else if "<>|,=^*()[]".contains(c) {
            bump(&mut chars);
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                column: tc,
            });
        } else {
            return Err(ParseError::Syntax {
                line: tl,
                column: tc,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'g> {
    toks: Vec<Token>,
    pos: usize,
    /// `None` accepts any identifier as a generator.
    alphabet: Option<&'g [Generator]>,
}

impl<'g> Parser<'g> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            let found = Self::describe(&self.peek().tok);
            self.error(format!("expected {c:?}, found {found}"))
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Sym('(') | Tok::Sym('['))
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        if self.peek().tok == Tok::Int(1) {
            self.next();
            return Ok(Word::identity());
        }
        if !self.starts_atom() {
            let found = Self::describe(&self.peek().tok);
            return self.error(format!("expected a word, found {found}"));
        }
        let mut w = self.factor()?;
        loop {
            if self.at_sym('*') {
                self.next();
                if !self.starts_atom() {
                    return self.error("expected a factor after '*'");
                }
            } else if !self.starts_atom() {
                break;
            }
            w = w.mul(&self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        if !self.at_sym('^') {
            return Ok(base);
        }
        self.next();
        match self.peek().tok {
            Tok::Int(n) => {
                self.next();
                Ok(base.pow(n))
            }
            _ if self.starts_atom() => {
                let by = self.atom()?;
                Ok(base.conjugate(&by))
            }
            ref other => {
                let found = Self::describe(other);
                self.error(format!("expected an integer or atom after '^', found {found}"))
            }
        }
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(name) => {
                let g = Generator::new(&name).expect("lexer yields identifiers");
                if let Some(alpha) = self.alphabet {
                    if !alpha.contains(&g) {
                        return Err(ParseError::UnknownGenerator {
                            name,
                            line: t.line,
                            column: t.column,
                        });
                    }
                }
                Ok(Word::gen(&g))
            }
            Tok::Sym('(') => {
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Tok::Sym('[') => {
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(']')?;
                Ok(commutator(&x, &y))
            }
            other => {
                self.pos -= 1;
                let found = Self::describe(&other);
                self.error(format!("expected a generator, '(' or '[', found {found}"))
            }
        }
    }

    fn relation(&mut self) -> Result<Word, ParseError> {
        let lhs = self.word()?;
        if self.at_sym('=') {
            self.next();
            let rhs = self.word()?;
            Ok(lhs.mul(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::End => Ok(()),
            ref other => {
                let found = Self::describe(other);
                self.error(format!("unexpected trailing {found}"))
            }
        }
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let toks = lex(text)?;
    let mut header = Parser {
        toks,
        pos: 0,
        alphabet: None,
    };
    header.expect('<')?;
    let mut gens = Vec::new();
    loop {
        let t = header.next();
        match t.tok {
            Tok::Ident(name) => gens.push(Generator::new(&name).expect("lexer yields identifiers")),
            other => {
                header.pos -= 1;
                let found = Parser::describe(&other);
                return header.error(format!("expected a generator name, found {found}"));
            }
        }
        if header.at_sym(',') {
            header.next();
        } else {
            break;
        }
    }
    header.expect('|')?;
    let mut p = Parser {
        toks: std::mem::take(&mut header.toks),
        pos: header.pos,
        alphabet: Some(&gens),
    };
    let mut relators = Vec::new();
    if !p.at_sym('>') {
        relators.push(p.relation()?);
        while p.at_sym(',') {
            p.next();
            relators.push(p.relation()?);
        }
    }
    p.expect('>')?;
    p.finish()?;
    Ok(Presentation::new(gens, relators)?)
}

/// Parses a bare word; with `alphabet` set, other generators are rejected.
pub fn parse_word(text: &str, alphabet: Option<&[Generator]>) -> Result<Word, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, alphabet };
    let w = p.word()?;
    p.finish()?;
    Ok(w)
}
