//! A small language for writing operators on the command line.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := [number ['*']] atom | number
//! atom   := product | label | 'I' | 'diag(' number (',' number)* ')' | preset
//! product:= pauli index (['*'] pauli index)*      e.g. Z1, Z1Z2, X1*Y3, Z1 Z2
//! label  := [IXYZ]+ with one letter per spin      e.g. ZIZ
//! preset := 'thermal' | 'pps' | 'lpps'
//! ```
//!
//! Spin indices are 1-based. A bare number is a multiple of the identity.

use std::fmt;

use crate::error::{Error, Result};
use crate::spinops::{lpps_target, pauli_product, pauli_string, pps_target, thermal_deviation, HermitianOperator, Pauli, SpinSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Thermal,
    Pps,
    Lpps,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::Thermal => "thermal",
            Preset::Pps => "pps",
            Preset::Lpps => "lpps",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Identity,
    /// Pauli factors with 1-based spin indices.
    Product(Vec<(Pauli, usize)>),
    Label(String),
    Diag(Vec<f64>),
    Preset(Preset),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub atom: Atom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr {
    pub terms: Vec<Term>,
}

impl OperatorExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Parser { src: text.as_bytes(), pos: 0 }.expr()
    }

    /// Spin count implied by the expression itself, if any.
    pub fn implied_spins(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|t| match &t.atom {
                Atom::Product(f) => f.iter().map(|&(_, k)| k).max(),
                Atom::Label(s) => Some(s.len()),
                Atom::Diag(d) if d.len().is_power_of_two() => Some(d.len().trailing_zeros() as usize),
                _ => None,
            })
            .max()
    }

    pub fn uses_preset(&self, preset: Preset) -> bool {
        self.terms.iter().any(|t| t.atom == Atom::Preset(preset))
    }

    /// Builds the operator on `n` spins; `thermal` needs a system.
    pub fn evaluate(&self, n: usize, system: Option<&SpinSystem>) -> Result<HermitianOperator> {
        let dim = 1usize << n;
        let mut total = HermitianOperator::zeros(dim);
        for term in &self.terms {
            let op = match &term.atom {
                Atom::Identity => HermitianOperator::identity(dim),
                Atom::Product(factors) => {
                    let mut ps = vec![Pauli::I; n];
                    for &(p, k) in factors {
                        if k == 0 || k > n {
                            return Err(Error::InvalidSpec(format!("spin index {k} outside 1..={n}")));
                        }
                        if ps[k - 1] != Pauli::I {
                            return Err(Error::InvalidSpec(format!("spin {k} appears twice in one product")));
                        }
                        ps[k - 1] = p;
                    }
                    pauli_product(n, &ps)?
                }
                Atom::Label(s) => pauli_string(n, s)?,
                Atom::Diag(d) => {
                    if d.len() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
                    }
                    HermitianOperator::from_diagonal(d)
                }
                Atom::Preset(Preset::Thermal) => {
                    let s = system.ok_or_else(|| Error::InvalidSpec("'thermal' needs a spin system".into()))?;
                    if s.n != n {
                        return Err(Error::DimensionMismatch { expected: n, got: s.n });
                    }
                    thermal_deviation(s)
                }
                Atom::Preset(Preset::Pps) => pps_target(n),
                Atom::Preset(Preset::Lpps) => lpps_target(n)?,
            };
            total = &total + &op.scale(term.coeff);
        }
        Ok(total)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Identity => write!(f, "I"),
            Atom::Product(factors) => factors.iter().try_for_each(|(p, k)| write!(f, "{p}{k}")),
            Atom::Label(s) => write!(f, "{s}"),
            Atom::Diag(d) => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "diag({})", parts.join(", "))
            }
            Atom::Preset(p) => write!(f, "{}", p.name()),
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_sign_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}*{}", t.coeff.abs(), t.atom)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(mut self) -> Result<OperatorExpr> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') { -1.0 } else { 1.0 };
        loop {
            let mut term = self.term()?;
            term.coeff *= sign;
            terms.push(term);
            sign = match self.peek() {
                None => break,
                Some(b'+') => 1.0,
                Some(b'-') => -1.0,
                Some(c) => return self.fail(format!("expected '+' or '-', found '{}'", c as char)),
            };
            self.pos += 1;
        }
        Ok(OperatorExpr { terms })
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            None => self.fail("expected a term"),
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let coeff = self.number()?;
                let star = self.eat(b'*');
                match self.peek() {
                    Some(c) if c.is_ascii_alphabetic() => Ok(Term { coeff, atom: self.atom()? }),
                    _ if star => self.fail("expected an operator after '*'"),
                    _ => Ok(Term { coeff, atom: Atom::Identity }),
                }
            }
            Some(_) => Ok(Term { coeff: 1.0, atom: self.atom()? }),
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if self.pos == exp_start {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().or_else(|_| {
            self.pos = start;
            self.fail("malformed number")
        })
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<Atom> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let word = self.word().to_string();
        let preset = match word.as_str() {
            "thermal" => Some(Preset::Thermal),
            "pps" => Some(Preset::Pps),
            "lpps" => Some(Preset::Lpps),
            _ => None,
        };
        if let Some(p) = preset {
            return Ok(Atom::Preset(p));
        }
        if word == "diag" {
            return self.diag();
        }
        if word.is_empty() || !word.bytes().all(|b| b"IXYZ".contains(&b)) {
            self.pos = start;
            return self.fail(format!("unknown operator '{word}'"));
        }
        let followed_by_digit = self.src.get(self.pos).is_some_and(u8::is_ascii_digit);
        if !followed_by_digit {
            return Ok(if word == "I" { Atom::Identity } else { Atom::Label(word) });
        }
        if word.len() != 1 {
            self.pos = start;
            return self.fail("a spin index follows a single Pauli letter");
        }
        self.pos = start;
        let mut factors = Vec::new();
        loop {
            let at = self.pos;
            let letter = self.src[self.pos] as char;
            self.pos += 1;
            let digits_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits_start {
                self.pos = at;
                return self.fail("expected a spin index");
            }
            let index: usize = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap().parse().map_err(|_| {
                Error::Parse { position: digits_start, message: "spin index too large".into() }
            })?;
            let pauli = Pauli::from_char(letter).ok_or(Error::Parse { position: at, message: "expected I, X, Y or Z".into() })?;
            factors.push((pauli, index));
            let save = self.pos;
            let starred = self.eat(b'*');
            match self.src.get(self.pos) {
                Some(b'I' | b'X' | b'Y' | b'Z') if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {}
                _ if starred => return self.fail("expected a Pauli factor after '*'"),
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(Atom::Product(factors))
    }

    fn diag(&mut self) -> Result<Atom> {
        if !self.eat(b'(') {
            return self.fail("expected '(' after diag");
        }
        let mut values = Vec::new();
        loop {
            let neg = self.eat(b'-');
            let v = self.number()?;
            values.push(if neg { -v } else { v });
            if self.eat(b')') {
                break;
            }
            if !self.eat(b',') {
                return self.fail("expected ',' or ')'");
            }
        }
        Ok(Atom::Diag(values))
    }
}
