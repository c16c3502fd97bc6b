//! Text syntax for words.
//!
//! ```text
//! word := term+
//! term := atom ('^' (integer | atom))*
//! atom := NAME | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `a^n` is a power and `a^b` is the conjugate `b a b^-1`. Whitespace is
//! ignored. `1` denotes the empty word.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::word::{product, Letter, Word};

/// Binds display names to generator indices.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    by_name: HashMap<String, u32>,
    by_index: BTreeMap<u32, String>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Alphabet binding the given names to indices 1, 2, ...
    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut a = Alphabet::new();
        for (i, n) in names.iter().enumerate() {
            a.bind(n.as_ref(), i as u32 + 1);
        }
        a
    }

    pub fn bind(&mut self, name: &str, index: u32) {
        if let Some(old) = self.by_index.insert(index, name.to_string()) {
            self.by_name.remove(&old);
        }
        if let Some(old) = self.by_name.insert(name.to_string(), index) {
            if old != index {
                self.by_index.remove(&old);
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.by_name.get(name).copied()
    }

    /// Index for `name`, allocating the next free index if unbound.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(i) = self.lookup(name) {
            return i;
        }
        let next = self.by_index.keys().next_back().copied().unwrap_or(0) + 1;
        self.bind(name, next);
        next
    }

    pub fn name(&self, index: u32) -> String {
        if let Some(n) = self.by_index.get(&index) {
            return n.clone();
        }
        let mut candidate = format!("x{index}");
        while self.by_name.contains_key(&candidate) {
            candidate.push('_');
        }
        candidate
    }

    pub fn names(&self) -> impl Iterator<Item = (u32, &str)> {
        self.by_index.iter().map(|(&i, n)| (i, n.as_str()))
    }

    /// Print a word, collapsing runs of one letter into powers.
    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            let name = self.name(l.generator());
            if run == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i = j;
        }
        parts.join(" ")
    }

    pub fn parse(&mut self, s: &str) -> Result<Word> {
        Ok(parse_expr(s)?.eval(self))
    }
}

/// Parse tree of a word expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Identity,
    Seq(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, i64),
    Conjugate(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, alphabet: &mut Alphabet) -> Word {
        match self {
            Expr::Name(n) => Word::generator(alphabet.intern(n)),
            Expr::Identity => Word::identity(),
            Expr::Seq(items) => {
                let ws: Vec<Word> = items.iter().map(|e| e.eval(alphabet)).collect();
                product(ws.iter())
            }
            Expr::Bracket(a, b) => a.eval(alphabet).commutator(&b.eval(alphabet)),
            Expr::Power(a, n) => a.eval(alphabet).pow(*n),
            Expr::Conjugate(a, b) => a.eval(alphabet).conjugate(&b.eval(alphabet)),
        }
    }

    /// Strip redundant single-element sequences.
    pub fn simplified(&self) -> &Expr {
        match self {
            Expr::Seq(items) if items.len() == 1 => items[0].simplified(),
            e => e,
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: s.char_indices().collect(),
        pos: 0,
        len: s.len(),
    };
    let e = p.word()?;
    p.skip_ws();
    if let Some(&(off, c)) = p.chars.get(p.pos) {
        return Err(Error::parse(off, format!("unexpected '{c}'")));
    }
    Ok(e)
}

pub fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(o, _)| o).unwrap_or(self.len)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::parse(self.offset(), format!("expected '{want}', found '{c}'"))),
            None => Err(Error::parse(self.offset(), format!("expected '{want}', found end of input"))),
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' || c == ']' || c == ',' {
                break;
            }
            terms.push(self.term()?);
        }
        if terms.is_empty() {
            return Err(Error::parse(self.offset(), "expected a word"));
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Seq(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == '-' || c.is_ascii_digit() => {
                    let n = self.integer()?;
                    e = Expr::Power(Box::new(e), n);
                }
                _ => {
                    let by = self.atom()?;
                    e = Expr::Conjugate(Box::new(e), Box::new(by));
                }
            }
        }
        Ok(e)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.offset();
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.pos += 1;
        }
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                text.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        text.parse()
            .map_err(|_| Error::parse(start, format!("bad exponent '{text}'")))
    }

    fn atom(&mut self) -> Result<Expr> {
        let off = self.offset();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.word()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(',')?;
                let b = self.word()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some('1') => {
                self.pos += 1;
                if matches!(self.chars.get(self.pos), Some((_, c)) if c.is_ascii_digit()) {
                    return Err(Error::parse(off, "bad atom"));
                }
                Ok(Expr::Identity)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, c)) = self.chars.get(self.pos) {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(Expr::Name(name))
            }
            Some(c) => Err(Error::parse(off, format!("unexpected '{c}'"))),
            None => Err(Error::parse(off, "unexpected end of input")),
        }
    }
}

/// Letter-by-letter form used when a word must survive a line-oriented
/// format unchanged: `x1 x2 x1^-1`.
pub fn format_letters(alphabet: &Alphabet, w: &Word) -> String {
    if w.is_identity() {
        return "1".into();
    }
    w.letters()
        .iter()
        .map(|l: &Letter| {
            let n = alphabet.name(l.generator());
            if l.is_inverse() {
                format!("{n}^-1")
            } else {
                n
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commutator_power() {
        let mut a = Alphabet::new();
        let w = a.parse("[x,y]^3").unwrap();
        let c = Word::from_signed(&[1, 2, -1, -2]);
        assert_eq!(w, c.pow(3));
    }

    #[test]
    fn conjugation_by_atom() {
        let mut a = Alphabet::new();
        let w = a.parse("x^(y^-1)").unwrap();
        assert_eq!(w, Word::from_signed(&[-2, 1, 2]));
        let w = a.parse("y^x").unwrap();
        assert_eq!(w, Word::from_signed(&[1, 2, -1]));
    }

    #[test]
    fn nested_and_whitespace() {
        let mut a = Alphabet::new();
        let w = a.parse(" [ z , [x1,y1] [x2,y2] ] ").unwrap();
        assert_eq!(a.lookup("z"), Some(1));
        assert_eq!(w.len(), 2 + 2 * 8);
    }

    #[test]
    fn identity_atom_and_reduction() {
        let mut a = Alphabet::new();
        assert!(a.parse("x y y^-1 x^-1").unwrap().is_identity());
        assert!(a.parse("1").unwrap().is_identity());
        assert_eq!(a.parse("x y y^-1").unwrap(), Word::generator(1));
    }

    #[test]
    fn errors_carry_offsets() {
        let mut a = Alphabet::new();
        assert!(matches!(a.parse("[x,y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(a.parse(""), Err(Error::Parse { .. })));
        assert!(matches!(a.parse("x ^"), Err(Error::Parse { .. })));
        assert!(matches!(a.parse("x)"), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn format_collapses_runs() {
        let mut a = Alphabet::new();
        let w = a.parse("x^3 y^-2 x").unwrap();
        assert_eq!(a.format(&w), "x^3 y^-2 x");
        assert_eq!(format_letters(&a, &w), "x x x y^-1 y^-1 x");
    }

    #[test]
    fn unbound_names_do_not_collide() {
        let a = Alphabet::with_names(&["x2"]);
        assert_eq!(a.name(1), "x2");
        assert_eq!(a.name(2), "x2_");
    }
}
