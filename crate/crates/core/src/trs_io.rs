//! Reader and printer for the plain-text TPDB rule format.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::term::{RelativeTrs, Rule, RuleError, Symbol, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("symbol {symbol} used with inconsistent arities at {line}:{col}")]
    ArityMismatch { symbol: String, line: usize, col: usize },
    #[error("rule at line {line} has a variable left-hand side: {rule}")]
    VariableLhs { rule: String, line: usize },
    #[error("rule at line {line} introduces variables on the right: {rule}")]
    ExtraVariableRhs { rule: String, line: usize },
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '#' | '.' | '-')
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _text: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Comma,
    Arrow,
    WeakArrow,
    Ident(String),
    Eof,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line: 1, col: 1, _text: text }
    }

    fn peek_char(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek_char(0).is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn here(&self) -> (usize, usize) {
        (self.line, self.col)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    fn at_arrow(&self) -> bool {
        self.peek_char(0) == Some('-') && self.peek_char(1) == Some('>')
    }

    /// Next token with its start position.
    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_ws();
        let (line, col) = self.here();
        let tok = match self.peek_char(0) {
            None => Tok::Eof,
            Some('(') => {
                self.bump();
                Tok::Open
            }
            Some(')') => {
                self.bump();
                Tok::Close
            }
            Some(',') => {
                self.bump();
                Tok::Comma
            }
            Some(_) if self.at_arrow() => {
                self.bump();
                self.bump();
                if self.peek_char(0) == Some('=') {
                    self.bump();
                    Tok::WeakArrow
                } else {
                    Tok::Arrow
                }
            }
            Some(c) if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(c) = self.peek_char(0) {
                    if !is_ident_char(c) || self.at_arrow() {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Tok::Ident(s)
            }
            Some(c) => return Err(self.error(format!("unexpected character '{c}'"))),
        };
        Ok((tok, line, col))
    }

    fn peek(&mut self) -> Result<Tok, ParseError> {
        let save = (self.pos, self.line, self.col);
        let t = self.next().map(|(t, _, _)| t);
        (self.pos, self.line, self.col) = save;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, line, col) = self.next()?;
        if tok == want {
            Ok(())
        } else {
            Err(ParseError::Syntax { line, col, message: format!("expected {want:?}, found {tok:?}") })
        }
    }

    /// Skips a balanced parenthesised block whose opening parenthesis and
    /// keyword were already consumed.
    fn skip_block(&mut self) -> Result<(), ParseError> {
        let mut depth = 1usize;
        while depth > 0 {
            match self.bump() {
                None => return Err(self.error("unterminated COMMENT section")),
                Some('(') => depth += 1,
                Some(')') => depth -= 1,
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// Untyped term before variables and arities are resolved.
struct Raw {
    name: String,
    args: Vec<Raw>,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    cur: Cursor<'a>,
    vars: BTreeSet<String>,
    arities: BTreeMap<String, usize>,
}

impl<'a> Parser<'a> {
    fn raw_term(&mut self) -> Result<Raw, ParseError> {
        let (tok, line, col) = self.cur.next()?;
        let name = match tok {
            Tok::Ident(s) => s,
            other => {
                return Err(ParseError::Syntax { line, col, message: format!("expected a term, found {other:?}") })
            }
        };
        let mut args = Vec::new();
        if self.cur.peek()? == Tok::Open {
            self.cur.next()?;
            if self.cur.peek()? == Tok::Close {
                self.cur.next()?;
            } else {
                loop {
                    args.push(self.raw_term()?);
                    match self.cur.next()? {
                        (Tok::Comma, _, _) => continue,
                        (Tok::Close, _, _) => break,
                        (other, l, c) => {
                            return Err(ParseError::Syntax {
                                line: l,
                                col: c,
                                message: format!("expected ',' or ')', found {other:?}"),
                            })
                        }
                    }
                }
            }
        }
        Ok(Raw { name, args, line, col })
    }

    fn resolve(&mut self, raw: &Raw) -> Result<Term, ParseError> {
        let Raw { name, args, line, col } = raw;
        if self.vars.contains(name) {
            if !args.is_empty() {
                return Err(ParseError::ArityMismatch { symbol: name.clone(), line: *line, col: *col });
            }
            return Ok(Term::Var(Var::new(name)));
        }
        match self.arities.get(name) {
            Some(&a) if a != args.len() => {
                return Err(ParseError::ArityMismatch { symbol: name.clone(), line: *line, col: *col })
            }
            _ => {
                self.arities.insert(name.clone(), args.len());
            }
        }
        let children = args.iter().map(|a| self.resolve(a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Term::app(Symbol::new(name, args.len()), children))
    }
}

/// Parses the plain-text format: `(VAR ..)`, `(RULES ..)`, `(COMMENT ..)`.
pub fn parse_trs(text: &str) -> Result<RelativeTrs, ParseError> {
    let mut p = Parser { cur: Cursor::new(text), vars: BTreeSet::new(), arities: BTreeMap::new() };
    let mut raw_rules: Vec<(Raw, Raw, bool, usize)> = Vec::new();
    loop {
        let (tok, line, col) = p.cur.next()?;
        match tok {
            Tok::Eof => break,
            Tok::Open => {}
            other => return Err(ParseError::Syntax { line, col, message: format!("expected '(', found {other:?}") }),
        }
        let (kw, line, col) = p.cur.next()?;
        match kw {
            Tok::Ident(k) if k == "VAR" => loop {
                match p.cur.next()? {
                    (Tok::Ident(v), _, _) => {
                        p.vars.insert(v);
                    }
                    (Tok::Close, _, _) => break,
                    (other, l, c) => {
                        return Err(ParseError::Syntax { line: l, col: c, message: format!("unexpected {other:?} in VAR") })
                    }
                }
            },
            Tok::Ident(k) if k == "COMMENT" => p.cur.skip_block()?,
            Tok::Ident(k) if k == "RULES" => loop {
                if p.cur.peek()? == Tok::Close {
                    p.cur.next()?;
                    break;
                }
                let line = p.cur.line;
                let lhs = p.raw_term()?;
                let weak = match p.cur.next()? {
                    (Tok::Arrow, _, _) => false,
                    (Tok::WeakArrow, _, _) => true,
                    (other, l, c) => {
                        return Err(ParseError::Syntax { line: l, col: c, message: format!("expected '->' or '->=', found {other:?}") })
                    }
                };
                let rhs = p.raw_term()?;
                raw_rules.push((lhs, rhs, weak, line));
            },
            Tok::Ident(k) => {
                return Err(ParseError::Syntax { line, col, message: format!("unsupported section {k}") })
            }
            other => return Err(ParseError::Syntax { line, col, message: format!("expected a section keyword, found {other:?}") }),
        }
    }
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    for (l, r, is_weak, line) in &raw_rules {
        let lhs = p.resolve(l)?;
        let rhs = p.resolve(r)?;
        let rule = Rule::new(lhs, rhs).map_err(|e| match e {
            RuleError::VariableLhs(rule) => ParseError::VariableLhs { rule, line: *line },
            RuleError::ExtraVariableRhs(rule) => ParseError::ExtraVariableRhs { rule, line: *line },
        })?;
        if *is_weak {
            weak.push(rule);
        } else {
            strict.push(rule);
        }
    }
    Ok(RelativeTrs::new(strict, weak))
}

/// Prints a system so that `parse_trs` reads it back to the same value.
pub fn print_trs(rel: &RelativeTrs) -> String {
    let vars: BTreeSet<Var> = rel.all_rules().flat_map(|r| r.lhs().vars()).collect();
    let mut out = String::new();
    if !vars.is_empty() {
        out.push_str("(VAR");
        for v in &vars {
            out.push(' ');
            out.push_str(v.name());
        }
        out.push_str(")\n");
    }
    out.push_str("(RULES\n");
    for r in &rel.strict {
        out.push_str(&format!("  {} -> {}\n", r.lhs(), r.rhs()));
    }
    for r in &rel.weak {
        out.push_str(&format!("  {} ->= {}\n", r.lhs(), r.rhs()));
    }
    out.push_str(")\n");
    out
}

/// Parses a single term; `vars` lists the names read as variables.
pub fn parse_term(text: &str, vars: &BTreeSet<String>) -> Result<Term, ParseError> {
    let mut p = Parser { cur: Cursor::new(text), vars: vars.clone(), arities: BTreeMap::new() };
    let raw = p.raw_term()?;
    p.cur.expect(Tok::Eof)?;
    p.resolve(&raw)
}

/// Parses `l -> r`; the arrow kind is returned as `true` for `->=`.
pub fn parse_rule(text: &str, vars: &BTreeSet<String>) -> Result<(Rule, bool), ParseError> {
    let mut p = Parser { cur: Cursor::new(text), vars: vars.clone(), arities: BTreeMap::new() };
    let l = p.raw_term()?;
    let weak = match p.cur.next()? {
        (Tok::Arrow, _, _) => false,
        (Tok::WeakArrow, _, _) => true,
        (other, line, col) => return Err(ParseError::Syntax { line, col, message: format!("expected an arrow, found {other:?}") }),
    };
    let r = p.raw_term()?;
    p.cur.expect(Tok::Eof)?;
    let lhs = p.resolve(&l)?;
    let rhs = p.resolve(&r)?;
    let rule = Rule::new(lhs, rhs).map_err(|e| match e {
        RuleError::VariableLhs(rule) => ParseError::VariableLhs { rule, line: 1 },
        RuleError::ExtraVariableRhs(rule) => ParseError::ExtraVariableRhs { rule, line: 1 },
    })?;
    Ok((rule, weak))
}
