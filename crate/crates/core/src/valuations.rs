//! Discrete valuations on the localized ring and on ℚ.
//!
//! `vᵢ` is the `fᵢ`-adic valuation, `w(g/h) = deg h − deg g` the degree
//! valuation, and `padic(p)` the usual `p`-adic order on rational constants.
//! Restricted to the image of `Q` they give the characters used throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::charspace::Character;
use crate::error::{Error, Result};
use crate::exactalg::{is_prime_u64, monomial_image, LocalizedElement, QMonomial, Setup};

/// An integer or `+∞`; `∞` compares above every integer and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            ExtInt::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtInt::Infinity
    }

    /// `self − c`, saturating at infinity.
    pub fn shift(self, c: i64) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v - c),
            ExtInt::Infinity => ExtInt::Infinity,
        }
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => a.cmp(b),
            (ExtInt::Finite(_), ExtInt::Infinity) => Ordering::Less,
            (ExtInt::Infinity, ExtInt::Finite(_)) => Ordering::Greater,
            (ExtInt::Infinity, ExtInt::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq<i64> for ExtInt {
    fn eq(&self, other: &i64) -> bool {
        *self == ExtInt::Finite(*other)
    }
}

impl PartialOrd<i64> for ExtInt {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&ExtInt::Finite(*other)))
    }
}

impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{}", v),
            ExtInt::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValuationId {
    /// `f_i`-adic valuation for the designated block (`i = 0` is `x`).
    FAdic(usize),
    /// Degree valuation `w`.
    Degree,
    PAdic(u64),
}

impl ValuationId {
    pub fn check(&self, setup: &Setup) -> Result<()> {
        match *self {
            ValuationId::FAdic(i) if i >= setup.polys().len() => {
                Err(Error::ValuationIndex { index: i, len: setup.polys().len() })
            }
            ValuationId::PAdic(p) if !is_prime_u64(p) => Err(Error::NotPrime(p)),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ValuationId::FAdic(i) => format!("v{}", i),
            ValuationId::Degree => "w".to_string(),
            ValuationId::PAdic(p) => format!("p{}", p),
        }
    }
}

impl fmt::Display for ValuationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// `p`-adic order of an integer; infinite at 0.
pub fn padic_int(n: &BigInt, p: u64) -> ExtInt {
    if n.is_zero() {
        return ExtInt::Infinity;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while n.is_multiple_of(&p) {
        n /= &p;
        e += 1;
    }
    ExtInt::Finite(e)
}

pub fn padic_rational(r: &BigRational, p: u64) -> Result<ExtInt> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if r.is_zero() {
        return Ok(ExtInt::Infinity);
    }
    let num = padic_int(r.numer(), p).finite().unwrap();
    let den = padic_int(r.denom(), p).finite().unwrap();
    Ok(ExtInt::Finite(num - den))
}

/// Evaluates a valuation on a canonical element.
///
/// The `fᵢ`-adic value is the stored exponent because the canonical
/// numerator is prime to every `fᵢ`.
pub fn val_eval(v: ValuationId, e: &LocalizedElement) -> Result<ExtInt> {
    v.check(e.setup())?;
    if e.is_zero() {
        return Ok(ExtInt::Infinity);
    }
    match v {
        ValuationId::FAdic(i) => Ok(ExtInt::Finite(e.exps()[i])),
        ValuationId::Degree => {
            let degs = e.setup().degrees();
            let deg_num = e.numer().degree().unwrap() as i64
                + e.exps().iter().zip(&degs).map(|(x, d)| x * *d as i64).sum::<i64>();
            Ok(ExtInt::Finite(-deg_num))
        }
        ValuationId::PAdic(p) => {
            let r = e.as_rational().ok_or(Error::NonConstantPadic)?;
            padic_rational(&r, p)
        }
    }
}

/// Finite value of a valuation on a unit; monomial images are never zero.
pub(crate) fn val_finite(v: ValuationId, e: &LocalizedElement) -> Result<i64> {
    Ok(val_eval(v, e)?.finite().expect("nonzero element has finite valuation"))
}

/// The character `q ↦ v(monomial_image(q))`, extended by zero on later blocks.
pub fn char_of_valuation(v: ValuationId, setup: &Setup) -> Result<Character> {
    if let ValuationId::PAdic(_) = v {
        return Err(Error::PadicCharacter);
    }
    v.check(setup)?;
    let rank = setup.q_rank();
    let coords = (0..rank)
        .map(|idx| {
            let img = monomial_image(&QMonomial::generator(rank, idx, 1), setup)?;
            Ok(BigRational::from_integer(BigInt::from(val_finite(v, &img)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    Character::new(coords)
}
