//! Line-oriented text format for [`AlgebraSpec`].
//!
//! ```text
//! spec      := "p" "=" INT NEWLINE line*
//! line      := "gen" kind "deg" "=" expr ["mult" "=" expr] ["for" ranges] NEWLINE
//! kind      := "poly" | "ext" | "trunc(" INT ")"
//! ranges    := range ("," range)*
//! range     := IDENT "=" INT ".." (INT | "inf")
//! expr      := term (("+"|"-") term)* ; term := pow ("*" pow)* ; pow := atom ["^" atom]
//! atom      := INT | "p" | IDENT | "(" expr ")" | "min(" expr "," expr ")"
//! ```
//!
//! Spaces and tabs are insignificant; blank lines are skipped. [`print_spec`]
//! produces the canonical form, and `parse_spec(print_spec(s)) == s`.

use std::fmt::{self, Write as _};

use super::{AlgebraSpec, DegreeExpr, GeneratorFamily, GeneratorKind, IndexRange};
use crate::error::ParseError;
use crate::number::is_prime;

const KEYWORDS: &[&str] = &["p", "gen", "deg", "mult", "for", "inf", "min", "poly", "ext", "trunc"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    DotDot,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::DotDot => f.write_str("`..`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let start_len = out.len();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Spanned>, tok: Tok| out.push(Spanned { tok, line, column });
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '0'..='9' => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[i..j].iter().collect();
                    let v = digits
                        .parse::<i64>()
                        .map_err(|_| err(line, column, format!("integer `{digits}` is too large")))?;
                    push(&mut out, Tok::Int(v));
                    i = j;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    push(&mut out, Tok::Ident(chars[i..j].iter().collect()));
                    i = j;
                }
                '.' if chars.get(i + 1) == Some(&'.') => {
                    push(&mut out, Tok::DotDot);
                    i += 2;
                }
                '=' | '+' | '-' | '*' | '^' | '(' | ')' | ',' => {
                    let tok = match c {
                        '=' => Tok::Eq,
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        _ => Tok::Comma,
                    };
                    push(&mut out, tok);
                    i += 1;
                }
                other => return Err(err(line, column, format!("unexpected character `{other}`"))),
            }
        }
        if out.len() > start_len {
            out.push(Spanned {
                tok: Tok::Newline,
                line,
                column: chars.len() + 1,
            });
        }
    }
    let line = text.lines().count().max(1);
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: 1,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Index variables in scope for the line being parsed, with positions of
    /// identifier uses to validate once the `for` clause is known.
    pending_idents: Vec<(String, usize, usize)>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        err(t.line, t.column, format!("expected {what}, found {}", t.tok))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Spanned, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_int(&mut self) -> Result<(i64, Spanned), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(v) => {
                self.bump();
                Ok((v, t))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn spec(&mut self) -> Result<AlgebraSpec, ParseError> {
        self.expect_keyword("p")?;
        self.expect(Tok::Eq, "`=`")?;
        let (p, pt) = self.expect_int()?;
        if p < 2 || !is_prime(p as u64) {
            return Err(err(pt.line, pt.column, format!("p = {p} is not prime")));
        }
        self.expect(Tok::Newline, "end of line after the prime")?;
        let mut families = Vec::new();
        while self.peek().tok != Tok::Eof {
            families.push(self.family()?);
        }
        Ok(AlgebraSpec {
            p: p as u64,
            families,
            label: String::new(),
        })
    }

    fn family(&mut self) -> Result<GeneratorFamily, ParseError> {
        self.expect_keyword("gen")?;
        let kind = self.kind()?;
        self.expect_keyword("deg")?;
        self.expect(Tok::Eq, "`=`")?;
        self.pending_idents.clear();
        let degree = self.expr()?;
        let multiplicity = if self.at_keyword("mult") {
            self.bump();
            self.expect(Tok::Eq, "`=`")?;
            self.expr()?
        } else {
            DegreeExpr::Int(1)
        };
        let mut ranges: Vec<IndexRange> = Vec::new();
        if self.at_keyword("for") {
            self.bump();
            loop {
                let r = self.range()?;
                if ranges.iter().any(|q| q.name == r.0.name) {
                    return Err(err(
                        r.1.line,
                        r.1.column,
                        format!("index `{}` declared twice", r.0.name),
                    ));
                }
                ranges.push(r.0);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Newline, "end of line")?;
        for (name, line, column) in &self.pending_idents {
            if !ranges.iter().any(|r| &r.name == name) {
                return Err(err(*line, *column, format!("unknown identifier `{name}`")));
            }
        }
        Ok(GeneratorFamily {
            kind,
            degree,
            multiplicity,
            ranges,
        })
    }

    fn kind(&mut self) -> Result<GeneratorKind, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == "poly" => {
                self.bump();
                Ok(GeneratorKind::Polynomial)
            }
            Tok::Ident(s) if s == "ext" => {
                self.bump();
                Ok(GeneratorKind::Exterior)
            }
            Tok::Ident(s) if s == "trunc" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let (k, kt) = self.expect_int()?;
                if k < 2 {
                    return Err(err(
                        kt.line,
                        kt.column,
                        format!("truncation order {k} must be at least 2"),
                    ));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(GeneratorKind::Truncated(k as u32))
            }
            _ => Err(self.unexpected("a generator kind (`poly`, `ext` or `trunc(k)`)")),
        }
    }

    fn range(&mut self) -> Result<(IndexRange, Spanned), ParseError> {
        let t = self.peek().clone();
        let name = match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            Tok::Ident(s) => return Err(err(t.line, t.column, format!("`{s}` is reserved"))),
            _ => return Err(self.unexpected("an index name")),
        };
        self.bump();
        self.expect(Tok::Eq, "`=`")?;
        let (lower, _) = self.expect_int()?;
        self.expect(Tok::DotDot, "`..`")?;
        let upper = if self.at_keyword("inf") {
            self.bump();
            None
        } else {
            Some(self.expect_int()?.0)
        };
        Ok((IndexRange { name, lower, upper }, t))
    }

    fn expr(&mut self) -> Result<DegreeExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = DegreeExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = DegreeExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<DegreeExpr, ParseError> {
        let mut lhs = self.pow()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = DegreeExpr::Mul(Box::new(lhs), Box::new(self.pow()?));
        }
        Ok(lhs)
    }

    fn pow(&mut self) -> Result<DegreeExpr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exp = self.atom()?;
            return Ok(DegreeExpr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DegreeExpr, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(v) => {
                self.bump();
                Ok(DegreeExpr::Int(*v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "p" => {
                self.bump();
                Ok(DegreeExpr::Prime)
            }
            Tok::Ident(s) if s == "min" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after `min`")?;
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(DegreeExpr::Min(Box::new(a), Box::new(b)))
            }
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                Err(err(t.line, t.column, format!("unexpected keyword `{s}` in expression")))
            }
            Tok::Ident(s) => {
                self.bump();
                self.pending_idents.push((s.clone(), t.line, t.column));
                Ok(DegreeExpr::Var(s.clone()))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parses algebra-spec source text.
pub fn parse_spec(text: &str) -> Result<AlgebraSpec, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        pending_idents: Vec::new(),
    };
    parser.spec()
}

/// Canonical text form of a spec; the label is not part of the format.
pub fn print_spec(spec: &AlgebraSpec) -> String {
    let mut out = format!("p = {}\n", spec.p);
    for fam in &spec.families {
        out.push_str(&print_family(fam));
        out.push('\n');
    }
    out
}

pub(crate) fn print_family(fam: &GeneratorFamily) -> String {
    let mut out = String::from("gen ");
    match fam.kind {
        GeneratorKind::Polynomial => out.push_str("poly"),
        GeneratorKind::Exterior => out.push_str("ext"),
        GeneratorKind::Truncated(k) => {
            let _ = write!(out, "trunc({k})");
        }
    }
    let _ = write!(out, " deg = {}", fam.degree);
    if fam.multiplicity != DegreeExpr::Int(1) {
        let _ = write!(out, " mult = {}", fam.multiplicity);
    }
    if !fam.ranges.is_empty() {
        out.push_str(" for ");
        let parts: Vec<String> = fam
            .ranges
            .iter()
            .map(|r| match r.upper {
                Some(u) => format!("{} = {}..{}", r.name, r.lower, u),
                None => format!("{} = {}..inf", r.name, r.lower),
            })
            .collect();
        out.push_str(&parts.join(", "));
    }
    out
}

// Precedence levels: 1 = sum, 2 = product, 3 = atom.
fn level(e: &DegreeExpr) -> u8 {
    match e {
        DegreeExpr::Add(..) | DegreeExpr::Sub(..) => 1,
        DegreeExpr::Mul(..) => 2,
        DegreeExpr::Pow(..) => 2,
        _ => 3,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &DegreeExpr, min_level: u8) -> fmt::Result {
    if level(e) < min_level {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for DegreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeExpr::Int(v) => write!(f, "{v}"),
            DegreeExpr::Prime => f.write_str("p"),
            DegreeExpr::Var(s) => f.write_str(s),
            DegreeExpr::Add(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" + ")?;
                write_at(f, b, 2)
            }
            DegreeExpr::Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" - ")?;
                write_at(f, b, 2)
            }
            DegreeExpr::Mul(a, b) => {
                write_at(f, a, 2)?;
                f.write_str("*")?;
                // A product on the right needs parentheses to keep the tree shape.
                if matches!(**b, DegreeExpr::Mul(..)) {
                    write!(f, "({b})")
                } else {
                    write_at(f, b, 2)
                }
            }
            DegreeExpr::Pow(a, b) => {
                write_at(f, a, 3)?;
                f.write_str("^")?;
                write_at(f, b, 3)
            }
            DegreeExpr::Min(a, b) => write!(f, "min({a}, {b})"),
        }
    }
}
