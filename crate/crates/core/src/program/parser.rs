use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Guard, Program, ProgramError};
use crate::poly::{PolyMap, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Assign,
    EqEq,
    Arrow,
    Bar2,
    Or,
    And,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ProgramError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ProgramError::SyntaxError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut adv = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok2 = match two.as_str() {
            ":=" => Some(Tok::Assign),
            "==" => Some(Tok::EqEq),
            "->" => Some(Tok::Arrow),
            "||" => Some(Tok::Bar2),
            "\\/" => Some(Tok::Or),
            "/\\" => Some(Tok::And),
            _ => None,
        };
        if let Some(t) = tok2 {
            adv(2, &mut i);
            out.push(Token {
                tok: t,
                line: tl,
                col: tc,
            });
            continue;
        }
        let tok1 = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = tok1 {
            adv(1, &mut i);
            out.push(Token {
                tok: t,
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Int(text.parse().expect("digits")),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(text),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: [&str; 4] = ["vars", "while", "do", "od"];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, at: &Token, msg: impl Into<String>) -> Result<T, ProgramError> {
        Err(ProgramError::SyntaxError {
            line: at.line,
            col: at.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, ProgramError> {
        let t = self.peek().clone();
        if t.tok == want {
            Ok(self.bump())
        } else {
            self.syntax(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if &self.peek().tok == want {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<(String, Token), ProgramError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) => {
                self.bump();
                Ok((s.clone(), t))
            }
            other => self.syntax(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    // poly := term (('+'|'-') term)*
    fn poly(&mut self) -> Result<Polynomial, ProgramError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<Polynomial, ProgramError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if self.peek().tok == Tok::Slash {
                let at = self.bump();
                let rhs = self.unary()?;
                if !rhs.is_constant() || rhs.is_zero() {
                    return self.syntax(&at, "division is only allowed by a nonzero constant");
                }
                acc = acc.scale(&rhs.constant_term().recip());
            } else {
                return Ok(acc);
            }
        }
    }

    // unary := '-' unary | '+' unary | power
    fn unary(&mut self) -> Result<Polynomial, ProgramError> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.unary()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    // power := atom ('^' integer)?
    fn power(&mut self) -> Result<Polynomial, ProgramError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            let e = match &t.tok {
                Tok::Int(n) => n.to_u32().filter(|&e| e <= 4096),
                _ => None,
            };
            return match e {
                Some(e) => Ok(base.pow(e)),
                None => self.syntax(&t, "exponent must be a small nonnegative integer"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ProgramError> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => Ok(Polynomial::constant(self.nvars(), Rational::from_integer(n.clone()))),
            Tok::Ident(s) => match self.names.iter().position(|v| v == s) {
                Some(i) => Ok(Polynomial::var(self.nvars(), i)),
                None => Err(ProgramError::UnknownVariable {
                    name: s.clone(),
                    line: t.line,
                    col: t.col,
                }),
            },
            Tok::LParen => {
                let p = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            other => self.syntax(&t, format!("expected a polynomial, found {}", describe(other))),
        }
    }

    // eq := poly '==' poly
    fn equation(&mut self) -> Result<Polynomial, ProgramError> {
        let lhs = self.poly()?;
        self.expect(Tok::EqEq, "`==`")?;
        let rhs = self.poly()?;
        Ok(&lhs - &rhs)
    }

    // guard := conj ('\/' conj)* ; conj := eq ('/\' eq)*
    fn guard(&mut self) -> Result<Guard, ProgramError> {
        let mut clauses = Vec::new();
        loop {
            let mut conj = vec![self.equation()?];
            while self.eat(&Tok::And) {
                conj.push(self.equation()?);
            }
            clauses.push(conj);
            if !self.eat(&Tok::Or) {
                break;
            }
        }
        Ok(Guard::new(clauses)?)
    }

    // branch := '(' ident, … ')' ':=' '(' poly, … ')' ';' | ident ':=' poly ';'
    fn branch(&mut self) -> Result<PolyMap, ProgramError> {
        let start = self.peek().clone();
        let d = self.nvars();
        let (targets, values) = if self.eat(&Tok::LParen) {
            let mut targets = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                targets.push(self.ident()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            self.expect(Tok::Assign, "`:=`")?;
            let open = self.expect(Tok::LParen, "`(`")?;
            let mut values = vec![self.poly()?];
            while self.eat(&Tok::Comma) {
                values.push(self.poly()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            if targets.len() != values.len() {
                return Err(ProgramError::ArityError {
                    line: open.line,
                    col: open.col,
                    msg: format!("{} targets but {} values", targets.len(), values.len()),
                });
            }
            (targets, values)
        } else {
            let target = self.ident()?;
            self.expect(Tok::Assign, "`:=`")?;
            (vec![target], vec![self.poly()?])
        };
        self.expect(Tok::Semi, "`;`")?;
        if targets.len() != d {
            return Err(ProgramError::ArityError {
                line: start.line,
                col: start.col,
                msg: format!("assignment has {} components, program has {d} variables", targets.len()),
            });
        }
        let mut comps: Vec<Option<Polynomial>> = vec![None; d];
        for ((name, at), value) in targets.into_iter().zip(values) {
            let Some(i) = self.names.iter().position(|v| *v == name) else {
                return Err(ProgramError::UnknownVariable {
                    name,
                    line: at.line,
                    col: at.col,
                });
            };
            if comps[i].is_some() {
                return self.syntax(&at, format!("variable `{name}` assigned twice"));
            }
            comps[i] = Some(value);
        }
        Ok(PolyMap::new(
            comps.into_iter().map(|c| c.expect("all assigned")).collect(),
        )?)
    }
}

fn header(toks: &[Token]) -> Result<(Vec<String>, usize), ProgramError> {
    let mut p = Parser {
        toks: toks.to_vec(),
        pos: 0,
        names: &[],
    };
    let t = p.peek().clone();
    if !p.is_keyword("vars") {
        return p.syntax(&t, "expected `vars:` header");
    }
    p.bump();
    p.expect(Tok::Colon, "`:`")?;
    let mut names: Vec<String> = Vec::new();
    loop {
        let (name, at) = p.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return p.syntax(&at, format!("`{name}` is reserved"));
        }
        if names.contains(&name) {
            return p.syntax(&at, format!("variable `{name}` declared twice"));
        }
        names.push(name);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.expect(Tok::Semi, "`;`")?;
    Ok((names, p.pos))
}

/// Parses a program in the `.mpp` language.
pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let toks = lex(text)?;
    let (names, pos) = header(&toks)?;
    let mut p = Parser {
        toks,
        pos,
        names: &names,
    };
    let program = if p.is_keyword("while") {
        p.bump();
        p.expect(Tok::LParen, "`(`")?;
        let guard = p.guard()?;
        p.expect(Tok::RParen, "`)`")?;
        p.expect(Tok::LBrace, "`{`")?;
        let mut branches = vec![p.branch()?];
        while p.eat(&Tok::Bar2) {
            branches.push(p.branch()?);
        }
        p.expect(Tok::RBrace, "`}`")?;
        Program::mpp(names.clone(), guard, branches)?
    } else if p.is_keyword("do") {
        p.bump();
        let mut commands = Vec::new();
        loop {
            let g = p.guard()?;
            p.expect(Tok::Arrow, "`->`")?;
            let a = p.branch()?;
            commands.push((g, a));
            if !p.eat(&Tok::Bar2) {
                break;
            }
        }
        let t = p.peek().clone();
        if !p.is_keyword("od") {
            return p.syntax(&t, format!("expected `od`, found {}", describe(&t.tok)));
        }
        p.bump();
        Program::pgc(names.clone(), commands)?
    } else {
        let t = p.peek().clone();
        return p.syntax(&t, "expected `while` or `do`");
    };
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return p.syntax(&t, format!("unexpected {} after program", describe(&t.tok)));
    }
    Ok(program)
}

/// Parses a polynomial over the given variable names.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial, ProgramError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, names };
    let poly = p.poly()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return p.syntax(&t, format!("unexpected {}", describe(&t.tok)));
    }
    Ok(poly)
}

/// Parses a comma-separated list of exact rationals such as `1,-1/2,3`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, ProgramError> {
    text.split(',')
        .enumerate()
        .map(|(k, part)| {
            let p = parse_polynomial(part.trim(), &[])?;
            if !p.is_constant() {
                return Err(ProgramError::SyntaxError {
                    line: 1,
                    col: k + 1,
                    msg: format!("`{part}` is not a rational constant"),
                });
            }
            Ok(p.constant_term())
        })
        .collect()
}
