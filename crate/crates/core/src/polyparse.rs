//! Parser and formatter for one-variable polynomials with complex
//! coefficients, e.g. `7z^5 - 2z + i` or `(1.5-2i)*z^2 + 3`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr  := sign? term (('+' | '-') term)*
//! term  := coeff | coeff '*'? var power? | var power?
//! power := '^' uint
//! coeff := real | 'i' | real 'i' | '(' complex ')'
//! ```
//!
//! Inside parentheses a signed real, a signed imaginary literal, or
//! `real (+|-) real i` is accepted. Exponents above [`MAX_EXPONENT`] are
//! rejected.

use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::poly::ComplexPoly;

pub const MAX_EXPONENT: u32 = 64;

/// A polynomial in textual form together with its variable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySource {
    pub text: String,
    pub variable: char,
}

impl PolySource {
    pub fn new(text: impl Into<String>) -> Self {
        PolySource { text: text.into(), variable: 'z' }
    }

    pub fn with_variable(text: impl Into<String>, variable: char) -> Self {
        PolySource { text: text.into(), variable }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

fn err<T>(offset: usize, expected: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, expected: expected.into() })
}

/// Parses `src` into a polynomial in `src.variable`.
pub fn parse_poly(src: &PolySource) -> Result<ComplexPoly, ParseError> {
    let var = src.variable;
    if !var.is_ascii_alphabetic() || var == 'i' {
        return err(0, "an ASCII letter other than 'i' as the variable");
    }
    if src.text.trim().is_empty() {
        return err(0, "a polynomial expression");
    }
    let mut p = Parser { s: src.text.as_bytes(), pos: 0, var: var as u8, coeffs: Vec::new() };
    p.expr()?;
    Ok(ComplexPoly::new(p.coeffs))
}

/// Shorthand for [`parse_poly`] with variable `z`.
pub fn parse(text: &str) -> Result<ComplexPoly, ParseError> {
    parse_poly(&PolySource::new(text))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    var: u8,
    coeffs: Vec<C64>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<(), ParseError> {
        let mut sign = 1.0;
        if self.eat(b'-') {
            sign = -1.0;
        } else {
            self.eat(b'+');
        }
        self.term(sign)?;
        loop {
            match self.peek() {
                None => return Ok(()),
                Some(b'+') => {
                    self.pos += 1;
                    self.term(1.0)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.term(-1.0)?;
                }
                Some(_) => return err(self.pos, "'+', '-' or end of input"),
            }
        }
    }

    fn term(&mut self, sign: f64) -> Result<(), ParseError> {
        let start = self.pos;
        let coeff = self.coeff()?;
        let has_coeff = coeff.is_some();
        if has_coeff {
            self.eat(b'*');
        }
        let power = if self.peek() == Some(self.var) {
            self.pos += 1;
            if self.eat(b'^') {
                self.uint()?
            } else {
                1
            }
        } else if has_coeff {
            0
        } else {
            self.skip_ws();
            return err(self.pos.max(start), "a coefficient or the variable");
        };
        let c = coeff.unwrap_or(C64::new(1.0, 0.0)) * sign;
        let idx = power as usize;
        if self.coeffs.len() <= idx {
            self.coeffs.resize(idx + 1, C64::new(0.0, 0.0));
        }
        self.coeffs[idx] += c;
        Ok(())
    }

    fn coeff(&mut self) -> Result<Option<C64>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let c = self.paren_complex()?;
                if !self.eat(b')') {
                    return err(self.pos, "')'");
                }
                Ok(Some(c))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Some(C64::new(0.0, 1.0)))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let x = self.real()?;
                if self.eat(b'i') {
                    Ok(Some(C64::new(0.0, x)))
                } else {
                    Ok(Some(C64::new(x, 0.0)))
                }
            }
            _ => Ok(None),
        }
    }

    fn paren_complex(&mut self) -> Result<C64, ParseError> {
        let first_sign = if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        };
        if self.eat(b'i') {
            return Ok(C64::new(0.0, first_sign));
        }
        let a = first_sign * self.real()?;
        if self.eat(b'i') {
            return Ok(C64::new(0.0, a));
        }
        let second_sign = match self.peek() {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => return Ok(C64::new(a, 0.0)),
        };
        self.pos += 1;
        let b = if self.peek() == Some(b'i') { 1.0 } else { self.real()? };
        if !self.eat(b'i') {
            return err(self.pos, "'i' closing the imaginary part");
        }
        Ok(C64::new(a, second_sign * b))
    }

    fn real(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.s;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        // Scientific exponent, unless the variable itself is `e`.
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') && !self.var.eq_ignore_ascii_case(&b'e') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(x) if !text.is_empty() => {
                self.pos = i;
                Ok(x)
            }
            _ => err(start, "a real number"),
        }
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            Ok(_) => err(start, format!("an exponent no larger than {MAX_EXPONENT}")),
            Err(_) => err(start, "an unsigned integer exponent"),
        }
    }
}

struct Lit(f64, bool);

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug gives the shortest round-trip form; Display never uses an
        // exponent, which is needed when the variable is `e`.
        if self.1 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// Formats `p` so that [`parse_poly`] reproduces its coefficients exactly.
pub fn format_poly(p: &ComplexPoly, var: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let plain = var.eq_ignore_ascii_case(&'e');
    let mut out = String::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let (negative, lit) = if c.im == 0.0 {
            (c.re < 0.0, Lit(c.re.abs(), plain).to_string())
        } else if c.re == 0.0 {
            (c.im < 0.0, format!("{}i", Lit(c.im.abs(), plain)))
        } else {
            let op = if c.im < 0.0 { '-' } else { '+' };
            (false, format!("({}{}{}i)", Lit(c.re, plain), op, Lit(c.im.abs(), plain)))
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let unit = c.im == 0.0 && c.re.abs() == 1.0;
        match d {
            0 => out.push_str(&lit),
            _ => {
                if !unit {
                    out.push_str(&lit);
                }
                out.push(var);
                if d > 1 {
                    out.push('^');
                    out.push_str(&d.to_string());
                }
            }
        }
    }
    out
}
