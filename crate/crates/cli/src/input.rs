//! Setup files and the small command-line syntaxes for polynomials,
//! elements and characters.

use std::path::Path;

use metab_core::exactalg::{BlockData, IntPolynomial, LocalizedElement, Setup, SetupData};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFile {
    /// Ascending coefficient lists, e.g. `x + 2` is `[2, 1]`.
    pub polys: Vec<Vec<i64>>,
    #[serde(default)]
    pub assert_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    pub k: u64,
    pub blocks: Vec<BlockFile>,
    #[serde(default = "one")]
    pub free_rank: usize,
}

fn one() -> usize {
    1
}

impl SetupFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {}", path.display(), e)))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
    }

    /// Builds a single-block file from `k` and comma-separated polynomials.
    pub fn from_flags(k: u64, polys: &str) -> Result<Self, CliError> {
        let polys = polys
            .split(',')
            .map(|p| parse_poly(p).map(|p| p.coeffs().iter().map(big_to_i64).collect::<Result<Vec<_>, _>>()))
            .collect::<Result<Result<Vec<_>, _>, _>>()??;
        Ok(SetupFile { k, blocks: vec![BlockFile { polys, assert_irreducible: false }], free_rank: 1 })
    }

    pub fn to_data(&self) -> SetupData {
        SetupData {
            k: self.k,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockData {
                    polys: b.polys.iter().map(|c| IntPolynomial::from_i64s(c)).collect(),
                    assert_irreducible: b.assert_irreducible,
                })
                .collect(),
            free_rank: self.free_rank,
        }
    }

    /// The file with default fields written out and trailing zero coefficients
    /// dropped, so equal setups serialize identically.
    pub fn canonical(&self) -> SetupFile {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for p in &mut b.polys {
                while p.last() == Some(&0) {
                    p.pop();
                }
            }
        }
        out
    }
}

fn big_to_i64(c: &BigInt) -> Result<i64, CliError> {
    i64::try_from(c).map_err(|_| CliError::Input(format!("coefficient {} out of range", c)))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, CliError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            'x' | 'X' => {
                out.push(Tok::X);
                i += 1;
            }
            '+' | '-' | '*' | '^' | '(' | ')' | '/' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().unwrap()));
            }
            _ => return Err(CliError::Input(format!("unexpected '{}' in \"{}\"", c, s))),
        }
    }
    Ok(out)
}

/// Recursive descent over `+ - * ^ ( )` with implicit products such as `2x`.
struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> CliError {
        CliError::Input(format!("{} in \"{}\"", what, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<IntPolynomial, CliError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut acc = self.product()?;
        if neg {
            acc = acc.scale(&BigInt::from(-1));
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<IntPolynomial, CliError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if matches!(self.peek(), Some(Tok::X) | Some(Tok::Num(_)) | Some(Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<IntPolynomial, CliError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = u32::try_from(&n).map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<IntPolynomial, CliError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(IntPolynomial::constant(n))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(IntPolynomial::x())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

fn parse_tokens(toks: &[Tok], src: &str) -> Result<IntPolynomial, CliError> {
    let mut p = Parser { toks, pos: 0, src };
    let out = p.sum()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses an integer polynomial such as `x^2+x+2` or `(x+1)^2 - 3x`.
pub fn parse_poly(s: &str) -> Result<IntPolynomial, CliError> {
    let toks = tokenize(s)?;
    if toks.contains(&Tok::Op('/')) {
        return Err(CliError::Input(format!("unexpected '/' in \"{}\"", s)));
    }
    parse_tokens(&toks, s)
}

/// Parses `P` or `P / D` into the localized ring; `D` must be a unit there.
pub fn parse_element(setup: &Setup, s: &str) -> Result<LocalizedElement, CliError> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (parse_poly(n)?, parse_poly(d)?),
        None => (parse_poly(s)?, IntPolynomial::one()),
    };
    if den.is_zero() {
        return Err(CliError::Input(format!("zero denominator in \"{}\"", s)));
    }
    let inv = LocalizedElement::from_poly(setup, den)
        .inverse()
        .map_err(|_| CliError::Input(format!("denominator of \"{}\" is not invertible", s)))?;
    Ok(&LocalizedElement::from_poly(setup, num) * &inv)
}

/// Parses a rational such as `-3`, `5/2`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let bad = || CliError::Input(format!("\"{}\" is not a rational number", s));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_rationals(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("\"{}\" is not an integer", x.trim()))))
        .collect()
}
