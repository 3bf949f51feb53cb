//! Text grammar for terms and formulas.
//!
//! ```text
//! formula := iff ('->' formula)?
//! iff     := or ('<->' or)*
//! or      := and ('\/' and)*
//! and     := unary ('/\' unary)*
//! unary   := '~' unary | '(A' var ')' unary | '(E' var ')' unary | primary
//! primary := term ('=' | '<') term | '(' formula ')' | name
//! term    := prod ('+' prod)*
//! prod    := base ('*' base)*
//! base    := 'x'digits | '0' | '1' | 'S(' term ')' | '(' term ')'
//! ```
//!
//! `#` starts a comment running to the end of the line. Bare names are only
//! accepted when the caller supplies a resolver.

use thiserror::Error;

use crate::formula::{Formula, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(Var),
    Zero,
    One,
    Succ,
    Plus,
    Star,
    Eq,
    Lt,
    Not,
    Arrow,
    And,
    Or,
    Iff,
    LParen,
    RParen,
    Comma,
    Forall(Var),
    Exists(Var),
    Name(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let simple = [
            ("<->", Tok::Iff),
            ("->", Tok::Arrow),
            ("/\\", Tok::And),
            ("\\/", Tok::Or),
            ("~", Tok::Not),
            ("+", Tok::Plus),
            ("*", Tok::Star),
            ("=", Tok::Eq),
            ("<", Tok::Lt),
            (")", Tok::RParen),
            (",", Tok::Comma),
        ];
        if let Some((lit, tok)) = simple.iter().find(|(lit, _)| rest.starts_with(lit)) {
            out.push((tok.clone(), start));
            i += lit.len();
            continue;
        }
        if c == b'(' {
            if let Some((tok, len)) = quantifier_prefix(rest) {
                out.push((tok, start));
                i += len;
            } else {
                out.push((Tok::LParen, start));
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            match &text[i..j] {
                "0" => out.push((Tok::Zero, start)),
                "1" => out.push((Tok::One, start)),
                other => return err(start, format!("numeral `{other}` is not a constant; only 0 and 1 exist")),
            }
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'') {
                j += 1;
            }
            let word = &text[i..j];
            let tok = if word == "S" {
                Tok::Succ
            } else if let Some(v) = parse_var_word(word) {
                Tok::Var(v?)
            } else {
                Tok::Name(word.to_string())
            };
            out.push((tok, start));
            i = j;
            continue;
        }
        let ch = rest.chars().next().unwrap_or('?');
        return err(start, format!("unexpected character `{ch}`"));
    }
    Ok(out)
}

/// `Some(Ok(var))` for `x<digits>`, `Some(Err)` for `x0`, `None` for other words.
fn parse_var_word(word: &str) -> Option<Result<Var, ParseError>> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let id: u32 = match digits.parse() {
        Ok(id) => id,
        Err(_) => return Some(err(0, format!("variable `{word}` out of range"))),
    };
    Some(Var::new(id).ok_or(ParseError {
        pos: 0,
        message: "variable ids start at 1".into(),
    }))
}

// Recognizes `(Ax<k>)` / `(Ex<k>)` with optional inner whitespace.
fn quantifier_prefix(s: &str) -> Option<(Tok, usize)> {
    let b = s.as_bytes();
    let mut i = 1;
    let skip = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip(&mut i);
    let kind = *b.get(i)?;
    if kind != b'A' && kind != b'E' {
        return None;
    }
    i += 1;
    skip(&mut i);
    if b.get(i) != Some(&b'x') {
        return None;
    }
    i += 1;
    let d0 = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i == d0 {
        return None;
    }
    let var = Var::new(s[d0..i].parse().ok()?)?;
    skip(&mut i);
    if b.get(i) != Some(&b')') {
        return None;
    }
    let tok = if kind == b'A' { Tok::Forall(var) } else { Tok::Exists(var) };
    Some((tok, i + 1))
}

type Resolver<'r> = &'r dyn Fn(&str) -> Option<Formula>;

struct Parser<'r> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
    resolver: Option<Resolver<'r>>,
}

impl<'r> Parser<'r> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.iff()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.eat(&Tok::Iff) {
            lhs = Formula::iff(lhs, self.or()?);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.idx += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall(x)) => {
                self.idx += 1;
                Ok(Formula::forall(x, self.unary()?))
            }
            Some(Tok::Exists(x)) => {
                self.idx += 1;
                Ok(Formula::exists(x, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Name(name)) => {
                let pos = self.pos();
                let Some(resolve) = self.resolver else {
                    return err(pos, format!("unknown symbol `{name}`"));
                };
                match resolve(&name) {
                    Some(f) => {
                        self.idx += 1;
                        Ok(f)
                    }
                    None => err(pos, format!("unknown formula name `{name}`")),
                }
            }
            Some(Tok::LParen) => {
                let save = self.idx;
                if let Ok(atom) = self.atom() {
                    return Ok(atom);
                }
                self.idx = save + 1;
                let inner = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        let pos = self.pos();
        let make: fn(Term, Term) -> Formula = match self.peek() {
            Some(Tok::Eq) => Formula::eq,
            Some(Tok::Lt) => Formula::lt,
            _ => return err(pos, "expected `=` or `<`"),
        };
        self.idx += 1;
        let rhs = self.term()?;
        Ok(make(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        while self.eat(&Tok::Plus) {
            lhs = Term::add(lhs, self.product()?);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.base()?;
        while self.eat(&Tok::Star) {
            lhs = Term::mul(lhs, self.base()?);
        }
        Ok(lhs)
    }

    fn base(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.idx += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Zero) => {
                self.idx += 1;
                Ok(Term::zero())
            }
            Some(Tok::One) => {
                self.idx += 1;
                Ok(Term::one())
            }
            Some(Tok::Succ) => {
                self.idx += 1;
                self.expect(&Tok::LParen, "`(` after S")?;
                let arg = self.term()?;
                if self.peek() == Some(&Tok::Comma) {
                    return err(self.pos(), "arity mismatch: S takes exactly 1 argument");
                }
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Term::succ(arg))
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let inner = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => err(pos, "expected a term"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.idx < self.toks.len() {
            err(self.pos(), "unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

fn parser<'r>(text: &str, resolver: Option<Resolver<'r>>) -> Result<Parser<'r>, ParseError> {
    Ok(Parser {
        toks: tokenize(text)?,
        idx: 0,
        end: text.len(),
        resolver,
    })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = parser(text, None)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser(text, None)?;
    if p.toks.is_empty() {
        return err(0, "empty formula");
    }
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Like [`parse_formula`], but bare names (e.g. `psi7`) are expanded through `resolver`.
pub fn parse_formula_with(text: &str, resolver: &dyn Fn(&str) -> Option<Formula>) -> Result<Formula, ParseError> {
    let mut p = parser(text, Some(resolver))?;
    if p.toks.is_empty() {
        return err(0, "empty formula");
    }
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Pred;

    #[test]
    fn terms() {
        assert_eq!(parse_term("x1 + 1").unwrap(), Term::add(Term::var(1), Term::one()));
        assert_eq!(
            parse_term("S(x1) + x2").unwrap(),
            Term::add(Term::succ(Term::var(1)), Term::var(2))
        );
        assert_eq!(
            parse_term("x1 * (x2 + 1)").unwrap(),
            Term::mul(Term::var(1), Term::add(Term::var(2), Term::one()))
        );
        // left associative, * binds tighter
        assert_eq!(
            parse_term("x1 + x2 * x3 + 1").unwrap(),
            Term::add(
                Term::add(Term::var(1), Term::mul(Term::var(2), Term::var(3))),
                Term::one()
            )
        );
    }

    #[test]
    fn formulas() {
        let psi1 = parse_formula("(Ax1)(x1 = x1)").unwrap();
        assert_eq!(psi1, Formula::forall(Var::x(1), Formula::eq(Term::var(1), Term::var(1))));
        let u27 = parse_formula("~(1 < 1)").unwrap();
        assert_eq!(u27, Formula::not(Formula::Atom(Pred::Lt, Term::one(), Term::one())));
        let ex = parse_formula("(Ex3)(x1 + x3 = x2)").unwrap();
        assert_eq!(
            ex,
            Formula::exists(
                Var::x(3),
                Formula::eq(Term::add(Term::var(1), Term::var(3)), Term::var(2))
            )
        );
    }

    #[test]
    fn connective_precedence() {
        let f = parse_formula("1 = 1 -> 0 = 0 -> 1 < 1").unwrap();
        let (a, rest) = f.as_implication().unwrap();
        assert_eq!(a.to_string(), "1 = 1");
        assert!(rest.as_implication().is_some());
        let g = parse_formula("1 = 1 /\\ 0 = 0 -> 1 = 1").unwrap();
        assert!(matches!(g, Formula::Implies(..)));
        let h = parse_formula("(1 = 1) \\/ 0 = 0 /\\ 1 < 1 <-> 0 < 1").unwrap();
        assert!(matches!(h, Formula::Iff(..)));
        let nested = parse_formula("((x1 + 1) = x2)").unwrap();
        assert_eq!(nested.to_string(), "x1 + 1 = x2");
    }

    #[test]
    fn comments_and_spacing() {
        let f = parse_formula("( A x1 ) ( x1 = x1 ) # reflexivity").unwrap();
        assert_eq!(f.to_string(), "(Ax1)(x1 = x1)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("x1 = ").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(parse_term("S(x1, x2)").unwrap_err().message.contains("arity"));
        assert!(parse_formula("x0 = 1").is_err());
        assert!(parse_formula("2 = 1").is_err());
        assert!(parse_formula("psi7").is_err());
        assert!(parse_formula("x1 = x1 x1").is_err());
    }

    #[test]
    fn named_references() {
        let one = Formula::eq(Term::one(), Term::one());
        let resolve = |n: &str| (n == "top").then(|| one.clone());
        let f = parse_formula_with("top -> ~top", &resolve).unwrap();
        assert_eq!(f, Formula::implies(one.clone(), Formula::not(one.clone())));
        assert!(parse_formula_with("bottom", &resolve).is_err());
    }
}
