use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::symbols::SymbolTable;
use super::Scalar;
use crate::error::{Error, Result};

/// Parses the scalar grammar
///
/// ```text
/// scalar   := ['+'|'-'] term (('+'|'-') term)*
/// term     := rational | rational '*' ident | ident
/// rational := int | int '/' posint
/// ```
///
/// Symbols are resolved against `table`; columns in errors are 1-based.
pub fn parse_scalar(text: &str, table: &SymbolTable) -> Result<Scalar> {
    Parser::new(text).scalar(table)
}

/// Parses `int` or `int/posint`, with an optional sign.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let negative = p.eat('-');
    if !negative {
        p.eat('+');
    }
    p.skip_ws();
    let q = p.rational()?;
    p.skip_ws();
    if let Some((col, c)) = p.peek() {
        return Err(Error::parse(col, format!("unexpected `{c}` after rational")));
    }
    Ok(if negative { -q } else { q })
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.peek()
            .map(|(c, _)| c)
            .unwrap_or_else(|| self.text.chars().count() + 1)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if matches!(self.peek(), Some((_, c)) if c == want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some((_, c)) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        s.parse().ok()
    }

    fn rational(&mut self) -> Result<BigRational> {
        let col = self.column();
        let numer = self
            .digits()
            .ok_or_else(|| Error::parse(col, "expected a number"))?;
        self.skip_ws();
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            let dcol = self.column();
            match self.digits() {
                Some(d) if !d.is_zero() => return Ok(BigRational::new(numer, d)),
                Some(_) => return Err(Error::parse(dcol, "zero denominator")),
                None => return Err(Error::parse(dcol, "expected a positive denominator")),
            }
        }
        self.pos = save;
        Ok(BigRational::from_integer(numer))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some((_, c)) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|(_, c)| c).collect()
    }

    fn term(&mut self, table: &SymbolTable) -> Result<(BigRational, Option<usize>)> {
        self.skip_ws();
        let col = self.column();
        match self.peek() {
            Some((_, c)) if c.is_ascii_digit() => {
                let q = self.rational()?;
                self.skip_ws();
                if self.eat('*') {
                    self.skip_ws();
                    let (index, _) = self.symbol(table)?;
                    Ok((q, Some(index)))
                } else {
                    Ok((q, None))
                }
            }
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {
                let (index, _) = self.symbol(table)?;
                Ok((BigRational::one(), Some(index)))
            }
            Some((_, c)) => Err(Error::parse(col, format!("unexpected `{c}`"))),
            None => Err(Error::parse(col, "unexpected end of input")),
        }
    }

    fn symbol(&mut self, table: &SymbolTable) -> Result<(usize, String)> {
        let col = self.column();
        let name = self.ident();
        if name.is_empty() {
            return Err(Error::parse(col, "expected a symbol name"));
        }
        match table.index_of(&name) {
            Some(i) => Ok((i, name)),
            None => Err(Error::parse(col, format!("unknown symbol `{name}`"))),
        }
    }

    fn scalar(&mut self, table: &SymbolTable) -> Result<Scalar> {
        let mut constant = BigRational::zero();
        let mut coeffs: Vec<(usize, BigRational)> = Vec::new();
        self.skip_ws();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (q, sym) = self.term(table)?;
            let q = if negative { -q } else { q };
            match sym {
                Some(i) => coeffs.push((i, q)),
                None => constant += q,
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some((_, '+')) => negative = false,
                Some((_, '-')) => negative = true,
                Some((col, c)) => {
                    return Err(Error::parse(col, format!("unexpected `{c}`")));
                }
            }
            self.pos += 1;
        }
        let used_table = (!coeffs.is_empty()).then_some(table);
        Ok(Scalar::from_parts(used_table, constant, coeffs))
    }
}
