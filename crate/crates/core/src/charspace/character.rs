use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::QMonomial;

/// A nonzero homomorphism `Q → ℚ`, given by its values on the basis of `Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    coords: Vec<BigRational>,
}

impl Character {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroCharacter);
        }
        Ok(Character { coords })
    }

    /// Panics on the zero vector; meant for literal data.
    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .expect("nonzero character")
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval(&self, q: &QMonomial) -> BigRational {
        self.coords
            .iter()
            .zip(q.exps())
            .fold(BigRational::zero(), |acc, (c, &e)| acc + c * BigRational::from_integer(BigInt::from(e)))
    }

    pub fn dot(&self, u: &[BigRational]) -> BigRational {
        self.coords.iter().zip(u).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Discrete: integer values whose gcd is 1, so the image is exactly ℤ.
    pub fn is_discrete(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
            && self.coords.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.to_integer())).is_one()
    }

    /// The primitive integer vector on the same ray.
    pub fn primitive(&self) -> Character {
        primitive_vectors(std::slice::from_ref(self)).pop().unwrap()
    }

    /// Whether `self` and `other` define the same class (positive multiples).
    pub fn same_class(&self, other: &Character) -> bool {
        self.primitive() == other.primitive()
    }

    pub fn scale(&self, s: &BigRational) -> Result<Character> {
        Character::new(self.coords.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> Character {
        Character { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// Sum of vectors of equal length (may be zero, so returned as raw coordinates).
pub fn vector_sum(chars: &[Character]) -> Vec<BigRational> {
    let dim = chars.first().map_or(0, |c| c.dim());
    let mut out = vec![BigRational::zero(); dim];
    for c in chars {
        for (o, x) in out.iter_mut().zip(&c.coords) {
            *o += x;
        }
    }
    out
}

/// Scales a list of characters by one common positive factor so that all
/// coordinates are integers with overall gcd 1.
pub fn primitive_vectors(chars: &[Character]) -> Vec<Character> {
    let den = chars
        .iter()
        .flat_map(|c| c.coords.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let num_gcd = chars
        .iter()
        .flat_map(|c| c.coords.iter())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&(x * BigRational::from_integer(den.clone())).to_integer()));
    let factor = BigRational::new(den, num_gcd);
    chars
        .iter()
        .map(|c| Character { coords: c.coords.iter().map(|x| x * &factor).collect() })
        .collect()
}

impl AsRef<[BigRational]> for Character {
    fn as_ref(&self) -> &[BigRational] {
        &self.coords
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_rejected() {
        assert_eq!(Character::new(vec![BigRational::zero(); 3]), Err(Error::ZeroCharacter));
    }

    #[test]
    fn discreteness_and_classes() {
        assert!(Character::from_ints(&[0, -1, -1, -1]).is_discrete());
        assert!(!Character::from_ints(&[0, 2, 2]).is_discrete());
        let a = Character::from_ints(&[0, 2, -4]);
        assert_eq!(a.primitive(), Character::from_ints(&[0, 1, -2]));
        assert!(a.same_class(&Character::from_ints(&[0, 1, -2])));
        assert!(!a.same_class(&Character::from_ints(&[0, -1, 2])));
        let half = Character::new(vec![BigRational::new(1.into(), 2.into()), BigRational::one()]).unwrap();
        assert_eq!(half.to_string(), "(1/2, 1)");
        assert_eq!(half.primitive(), Character::from_ints(&[1, 2]));
    }
}
