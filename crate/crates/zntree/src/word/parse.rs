//! Text grammar for words and word expressions, and the matching printer.
//!
//! ```text
//! expr     := concat ( "*" concat )*      (expressions only)
//! concat   := term*
//! term     := atom ( "^" exponent )?
//! atom     := identifier | "ε" | "(" expr ")"
//! exponent := integer | "(" integer ( "," integer )* ")"
//! ```
//!
//! Juxtaposition concatenates and must not cancel; `*` is the group
//! product. An integer exponent repeats the base (negative: of its
//! inverse). A tuple exponent is an extent: it requires a nonempty finite
//! cyclically reduced base and one component per coordinate.

use std::fmt;

use super::{Letter, Word, MAX_MATERIALIZED};
use crate::error::{Error, Result};
use crate::lattice::{Int, ZnVec};

/// Names of the symbols `x_1, ..., x_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::Workspace(format!("invalid symbol name {n:?}")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::Workspace(format!("duplicate symbol {n:?}")));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|m| m == name).map(Letter::new)
    }

    /// All letters of `X^±`, each symbol followed by its inverse.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.len())
            .flat_map(|i| [Letter::new(i), Letter::new(i).inv()])
            .collect()
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let base = &self.names[l.index()];
        if l.is_positive() {
            base.clone()
        } else {
            format!("{base}^-1")
        }
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> WordDisplay<'a> {
        WordDisplay { alphabet: self, w }
    }

    pub fn format(&self, w: &Word) -> String {
        self.display(w).to_string()
    }

    /// Parses a word over this alphabet.
    pub fn parse(&self, n: usize, text: &str) -> Result<Word> {
        parse_word(self, n, text)
    }
}

/// Printer in the grammar accepted by [`parse_word`].
pub struct WordDisplay<'a> {
    alphabet: &'a Alphabet,
    w: &'a Word,
}

fn write_letters(f: &mut fmt::Formatter<'_>, a: &Alphabet, ls: &[Letter]) -> fmt::Result {
    let mut i = 0;
    let mut first = true;
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        let run = j - i;
        let name = &a.names[ls[i].index()];
        match (run, ls[i].is_positive()) {
            (1, _) => write!(f, "{}", a.letter_name(ls[i]))?,
            (r, true) => write!(f, "{name}^{r}")?,
            (r, false) => write!(f, "{name}^-{r}")?,
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_empty() {
            return write!(f, "ε");
        }
        for (i, b) in self.w.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match b {
                super::Block::Finite(ls) => write_letters(f, self.alphabet, ls)?,
                super::Block::Periodic { period, extent } => {
                    write!(f, "(")?;
                    write_letters(f, self.alphabet, period)?;
                    write!(f, ")^(")?;
                    for (j, c) in extent.coords().iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Epsilon,
    Int(Int),
    Caret,
    LParen,
    RParen,
    Comma,
    Star,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            'ε' => Some(Tok::Epsilon),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(cs[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() || c == '-' {
            let start = i;
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = cs[start..i].iter().collect();
            let v = s.parse::<Int>().map_err(|_| Error::Syntax {
                column: col,
                message: format!("bad integer {s:?}"),
            })?;
            out.push((Tok::Int(v), col));
            continue;
        }
        return Err(Error::Syntax {
            column: col,
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push((Tok::End, cs.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
    allow_star: bool,
    resolve: &'a dyn Fn(&str) -> Option<Word>,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

fn at_column(column: usize, e: Error) -> Error {
    match e {
        Error::NotReduced(m) => Error::NotReduced(format!("at column {column}: {m}")),
        Error::NotCyclicallyReduced(m) => {
            Error::NotCyclicallyReduced(format!("at column {column}: {m}"))
        }
        Error::TooLong(m) => Error::TooLong(format!("{m} (column {column})")),
        Error::ProductUndefined { left, right } => Error::ProductUndefined {
            left: format!("{left} (column {column})"),
            right,
        },
        other => other,
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Word> {
        let mut acc = self.concat(false)?;
        while *self.peek() == Tok::Star {
            let col = self.col();
            if !self.allow_star {
                return Err(syntax(col, "'*' is only allowed in expressions"));
            }
            self.bump();
            let rhs = self.concat(true)?;
            acc = acc.mult(&rhs).map_err(|e| at_column(col, e))?;
        }
        Ok(acc)
    }

    fn starts_term(t: &Tok) -> bool {
        matches!(t, Tok::Ident(_) | Tok::Epsilon | Tok::LParen)
    }

    fn concat(&mut self, required: bool) -> Result<Word> {
        if required && !Self::starts_term(self.peek()) {
            return Err(syntax(self.col(), "expected a term"));
        }
        let mut acc = Word::empty(self.n);
        while Self::starts_term(self.peek()) {
            let col = self.col();
            let t = self.term()?;
            acc = acc.concat(&t).map_err(|e| at_column(col, e))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let col = self.col();
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Int(k), _) => power(&base, &k).map_err(|e| at_column(col, e)),
            (Tok::LParen, ecol) => {
                let mut coords = Vec::new();
                loop {
                    match self.bump() {
                        (Tok::Int(v), _) => coords.push(v),
                        (_, c) => return Err(syntax(c, "expected an integer")),
                    }
                    match self.bump() {
                        (Tok::Comma, _) => continue,
                        (Tok::RParen, _) => break,
                        (_, c) => return Err(syntax(c, "expected ',' or ')'")),
                    }
                }
                if coords.len() != self.n {
                    return Err(syntax(
                        ecol,
                        format!("extent needs {} components, got {}", self.n, coords.len()),
                    ));
                }
                let extent = ZnVec::from_ints(coords);
                extent_power(self.n, &base, &extent).map_err(|e| match e {
                    Error::Syntax { message, .. } => syntax(ecol, message),
                    other => at_column(col, other),
                })
            }
            (_, c) => Err(syntax(c, "expected an exponent")),
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.bump() {
            (Tok::Ident(name), col) => {
                (self.resolve)(&name).ok_or(Error::UnknownIdentifier { name, column: col })
            }
            (Tok::Epsilon, _) => Ok(Word::empty(self.n)),
            (Tok::LParen, _) => {
                let w = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(w),
                    (_, c) => Err(syntax(c, "expected ')'")),
                }
            }
            (Tok::End, c) => Err(syntax(c, "unexpected end of input")),
            (_, c) => Err(syntax(c, "expected a letter or '('")),
        }
    }
}

/// `w^k` by concatenation; negative `k` uses the inverse.
fn power(w: &Word, k: &Int) -> Result<Word> {
    let base = if k.signum() < 0 { w.invert() } else { w.clone() };
    let m = match k.abs().to_i64() {
        Some(m) if (m as u64) <= MAX_MATERIALIZED as u64 => m as u64,
        _ => return Err(Error::TooLong(k.to_string())),
    };
    if m == 0 || base.is_empty() {
        return Ok(Word::empty(w.dim()));
    }
    if m > 1 {
        // One self-junction decides every junction of the power.
        base.concat(&base)?;
    }
    if let Some(ls) = base.as_letters() {
        if ls.len() as u64 * m > MAX_MATERIALIZED as u64 {
            return Err(Error::TooLong(format!("{} letters", ls.len() as u64 * m)));
        }
    }
    let mut result = Word::empty(w.dim());
    let mut sq = base;
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = result.concat_unchecked(&sq);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = sq.concat_unchecked(&sq);
    }
    Ok(result)
}

/// The periodic run of a finite cyclically reduced base over `extent`.
fn extent_power(n: usize, base: &Word, extent: &ZnVec) -> Result<Word> {
    let ls = match base.as_letters() {
        Some(ls) if !ls.is_empty() => ls,
        Some(_) => return Err(syntax(0, "extent exponent needs a nonempty base")),
        None => return Err(syntax(0, "extent exponent needs a finite base")),
    };
    if !base.is_cyclically_reduced()? {
        return Err(Error::NotCyclicallyReduced(format!("{ls:?}")));
    }
    if extent.is_negative() {
        return Err(syntax(0, format!("negative extent {extent}")));
    }
    Word::periodic(n, ls, extent)
}

/// Parses a word over `alphabet` in dimension `n`. Never reduces silently.
pub fn parse_word(alphabet: &Alphabet, n: usize, text: &str) -> Result<Word> {
    let resolve = |name: &str| alphabet.lookup(name).map(|l| Word::letter(n, l));
    run(text, n, false, &resolve)
}

/// Parses an expression with `*`; identifiers go through `resolve`.
pub fn parse_expression(
    text: &str,
    n: usize,
    resolve: &dyn Fn(&str) -> Option<Word>,
) -> Result<Word> {
    run(text, n, true, resolve)
}

fn run(text: &str, n: usize, allow_star: bool, resolve: &dyn Fn(&str) -> Option<Word>) -> Result<Word> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        n,
        allow_star,
        resolve,
    };
    let w = p.expr()?;
    match p.peek() {
        Tok::End => Ok(w),
        _ => Err(syntax(p.col(), "unexpected token")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn parses_examples() {
        let a = ab();
        let w = a.parse(2, "a b^-1").unwrap();
        assert_eq!(w.len(), &ZnVec::from_i64s(&[2, 0]));
        let u = a.parse(2, "(a)^(0,5)").unwrap();
        assert_eq!(u.len(), &ZnVec::from_i64s(&[0, 5]));
        assert!(matches!(a.parse(2, "a a^-1"), Err(Error::NotReduced(_))));
    }

    #[test]
    fn print_parse_fixed_point() {
        let a = ab();
        for text in [
            "ε",
            "a b^-1",
            "(a)^(0,5) b",
            "(a b)^(0,1) b",
            "b^-1 (a b)^(3,2) a^3",
            "a^-2 b (b a^-1)^(-4,1)",
        ] {
            let w = a.parse(2, text).unwrap();
            let printed = a.format(&w);
            let again = a.parse(2, &printed).unwrap();
            assert_eq!(w, again, "{text} -> {printed}");
            assert_eq!(printed, a.format(&again));
        }
        assert_eq!(a.format(&a.parse(2, "(a)^(0,5) b").unwrap()), "(a)^(0,5) b");
    }

    #[test]
    fn exponents() {
        let a = ab();
        assert_eq!(a.parse(1, "(a b)^2").unwrap(), a.parse(1, "a b a b").unwrap());
        assert_eq!(a.parse(1, "(a b)^-1").unwrap(), a.parse(1, "b^-1 a^-1").unwrap());
        assert_eq!(a.parse(1, "a^0").unwrap(), Word::empty(1));
        // Extent exponents count letters, not repetitions.
        assert_eq!(a.parse(2, "(a b)^(3,0)").unwrap(), a.parse(2, "a b a").unwrap());
        assert_eq!(a.parse(2, "(a a)^(0,1)").unwrap(), a.parse(2, "(a)^(0,1)").unwrap());
        assert_eq!(a.parse(2, "(a b)^(0,0)").unwrap(), Word::empty(2));
    }

    #[test]
    fn errors_carry_positions() {
        let a = ab();
        assert!(matches!(a.parse(2, "a ? b"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(
            a.parse(2, "a c"),
            Err(Error::UnknownIdentifier { column: 3, .. })
        ));
        assert!(matches!(a.parse(2, "(a b a^-1)^(0,1)"), Err(Error::NotCyclicallyReduced(_))));
        assert!(matches!(a.parse(2, "(a)^(0,-1)"), Err(Error::Syntax { .. })));
        assert!(matches!(a.parse(2, "(a)^(1,2,3)"), Err(Error::Syntax { .. })));
        assert!(matches!(a.parse(2, "((a)^(0,1))^(0,1)"), Err(Error::Syntax { .. })));
        assert!(matches!(a.parse(2, "a * b"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(a.parse(2, "(a b"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn expressions_multiply() {
        let a = ab();
        let resolve = |s: &str| {
            if s == "u5" {
                a.parse(2, "(a)^(0,5)").ok()
            } else {
                a.lookup(s).map(|l| Word::letter(2, l))
            }
        };
        let w = parse_expression("u5 * b", 2, &resolve).unwrap();
        assert_eq!(a.format(&w), "(a)^(0,5) b");
        let w = parse_expression("a * a^-1", 2, &resolve).unwrap();
        assert!(w.is_empty());
        assert!(matches!(
            parse_expression("a * * b", 2, &resolve),
            Err(Error::Syntax { column: 5, .. })
        ));
    }
}
