//! The `.dlkb` knowledge-base format and the `.dlq` query format.
//!
//! ```text
//! [tbox]
//! A <= !B
//! exists R- <= C
//! role R <= P
//! [stratum 1]
//! A(a)
//! R(a, z)
//! ```
//!
//! Queries read `q(?x) :- R(?x, z), A(?x)`.

mod lexer;

use std::fmt;

use lite_repair_core::{
    Assertion, AssertionSet, Atom, BasicConcept, ConjunctiveQuery, KbError, PrioritizedKb,
    QueryError, Role, TBox, TBoxAxiom, Term, Variable,
};
use thiserror::Error;

use lexer::{tokenize, Spanned, Tok};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kb(#[from] KbError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QueryParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Query(#[from] QueryError),
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|s| &s.tok)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => ParseError::new(s.line, s.column, message),
            None => ParseError::new(1, 1, message),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn skip_newlines(&mut self) {
        while self.eat(&Tok::Newline) {}
    }

    fn end_of_line(&mut self) -> Result<(), ParseError> {
        if self.peek().is_none() || self.eat(&Tok::Newline) {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// `NAME` or `NAME-`; a second `-` is rejected.
    fn role(&mut self) -> Result<Role, ParseError> {
        let name = self.ident("a role name")?;
        let inverted = self.eat(&Tok::Minus);
        if inverted && self.peek() == Some(&Tok::Minus) {
            return Err(self.error(format!("nested inverse `{name}--` is not allowed")));
        }
        Ok(Role::new(name.as_str(), inverted))
    }

    fn basic_concept(&mut self) -> Result<BasicConcept, ParseError> {
        if self.peek() == Some(&Tok::Ident("exists".into())) {
            self.pos += 1;
            return Ok(BasicConcept::exists(self.role()?));
        }
        Ok(BasicConcept::atomic(self.ident("a concept name or `exists`")?.as_str()))
    }

    fn axiom(&mut self) -> Result<TBoxAxiom, ParseError> {
        let role_axiom = self.peek() == Some(&Tok::Ident("role".into()))
            && matches!(self.peek_at(1), Some(Tok::Ident(_)));
        if role_axiom {
            self.pos += 1;
            let lhs = self.role()?;
            self.expect(Tok::Subsumed)?;
            let negated = self.eat(&Tok::Not);
            let rhs = self.role()?;
            return Ok(if negated {
                TBoxAxiom::role_disjoint(lhs, rhs)
            } else {
                TBoxAxiom::role(lhs, rhs)
            });
        }
        let lhs = self.basic_concept()?;
        self.expect(Tok::Subsumed)?;
        let negated = self.eat(&Tok::Not);
        let rhs = self.basic_concept()?;
        Ok(if negated {
            TBoxAxiom::concept_disjoint(lhs, rhs)
        } else {
            TBoxAxiom::concept(lhs, rhs)
        })
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let pred = self.ident("a concept or role name")?;
        self.expect(Tok::LParen)?;
        let first = self.ident("an individual name")?;
        let a = if self.eat(&Tok::Comma) {
            let second = self.ident("an individual name")?;
            Assertion::role(pred.as_str(), first.as_str(), second.as_str())
        } else {
            Assertion::concept(pred.as_str(), first.as_str())
        };
        self.expect(Tok::RParen)?;
        Ok(a)
    }

    /// `[tbox]` or `[stratum N]`; returns the stratum index, or 0 for the TBox.
    fn header(&mut self) -> Result<usize, ParseError> {
        self.expect(Tok::LBracket)?;
        let kind = self.ident("`tbox` or `stratum`")?;
        let index = match kind.as_str() {
            "tbox" => 0,
            "stratum" => match self.next() {
                Some(Tok::Number(n)) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a stratum number"));
                }
            },
            other => {
                self.pos -= 1;
                return Err(self.error(format!("unknown section `{other}`")));
            }
        };
        self.expect(Tok::RBracket)?;
        self.end_of_line()?;
        Ok(index)
    }
}

/// Parses a knowledge base and checks its load-time invariants.
pub fn parse_kb(text: &str) -> Result<PrioritizedKb, LoadError> {
    let (tbox, strata) = parse_kb_document(text)?;
    Ok(PrioritizedKb::new(tbox, strata)?)
}

/// Syntax only: the TBox and the strata, without namespace or consistency
/// checks.
pub fn parse_kb_document(text: &str) -> Result<(TBox, Vec<AssertionSet>), ParseError> {
    let mut c = Cursor::new(tokenize(text)?);
    c.skip_newlines();
    if c.peek() != Some(&Tok::LBracket) {
        return Err(c.unexpected("`[tbox]`"));
    }
    if c.header()? != 0 {
        c.pos -= 1;
        return Err(c.error("the file must start with `[tbox]`"));
    }
    let mut tbox = TBox::new();
    let mut strata: Vec<AssertionSet> = Vec::new();
    loop {
        c.skip_newlines();
        match c.peek() {
            None => break,
            Some(Tok::LBracket) => {
                let start = c.pos;
                let index = c.header()?;
                if index != strata.len() + 1 {
                    c.pos = start;
                    return Err(c.error(format!(
                        "expected `[stratum {}]`; stratum sections are numbered 1, 2, … in order",
                        strata.len() + 1
                    )));
                }
                strata.push(AssertionSet::new());
            }
            Some(_) => match strata.last_mut() {
                None => {
                    tbox.push(c.axiom()?);
                    c.end_of_line()?;
                }
                Some(stratum) => {
                    stratum.insert(c.assertion()?);
                    c.end_of_line()?;
                }
            },
        }
    }
    Ok((tbox, strata))
}

pub fn emit_kb(kb: &PrioritizedKb) -> String {
    let mut out = String::from("[tbox]\n");
    for axiom in kb.tbox().axioms() {
        out.push_str(&format!("{axiom}\n"));
    }
    for stratum in kb.strata() {
        out.push_str(&format!("[stratum {}]\n", stratum.index));
        for a in &stratum.assertions {
            out.push_str(&format!("{a}\n"));
        }
    }
    out
}

fn term(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek() {
        Some(Tok::Var(v)) => {
            let t = Term::var(v);
            c.pos += 1;
            Ok(t)
        }
        Some(Tok::Ident(i)) => {
            let t = Term::individual(i);
            c.pos += 1;
            Ok(t)
        }
        _ => Err(c.unexpected("a variable or an individual")),
    }
}

fn atom(c: &mut Cursor) -> Result<Atom, ParseError> {
    let pred = c.ident("a concept or role name")?;
    c.expect(Tok::LParen)?;
    let first = term(c)?;
    let a = if c.eat(&Tok::Comma) {
        Atom::role(&pred, first, term(c)?)
    } else {
        Atom::concept(&pred, first)
    };
    c.expect(Tok::RParen)?;
    Ok(a)
}

/// Parses one query; line breaks are insignificant.
pub fn parse_query(text: &str) -> Result<ConjunctiveQuery, QueryParseError> {
    let toks = tokenize(text)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
    let mut c = Cursor::new(toks);
    let name = c.ident("a query name")?;
    c.expect(Tok::LParen)?;
    let mut head = Vec::new();
    if !c.eat(&Tok::RParen) {
        loop {
            match c.next() {
                Some(Tok::Var(v)) => head.push(Variable::new(&v)),
                _ => {
                    c.pos -= 1;
                    return Err(c.unexpected("an answer variable `?name`").into());
                }
            }
            if c.eat(&Tok::RParen) {
                break;
            }
            c.expect(Tok::Comma)?;
        }
    }
    c.expect(Tok::Implied)?;
    let mut body = vec![atom(&mut c)?];
    while c.eat(&Tok::Comma) {
        body.push(atom(&mut c)?);
    }
    if c.peek().is_some() {
        return Err(c.unexpected("`,` or end of query").into());
    }
    Ok(ConjunctiveQuery::new(&name, head, body)?)
}

/// Renders a query in the syntax accepted by [`parse_query`].
pub fn emit_query(query: &ConjunctiveQuery) -> String {
    format!("{query}\n")
}

/// Display adapter rendering a set as `{x, y}`.
pub struct SetDisplay<'a, T>(pub &'a [T]);

impl<T: fmt::Display> fmt::Display for SetDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
