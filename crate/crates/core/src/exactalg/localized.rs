use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{IntPolynomial, RatPolynomial};
use super::setup::{strip_k_primes, Setup};
use crate::error::{Error, Result};

/// Element `numer · Π fᵢ^expᵢ · Π p^kexp_p` of `ℤ[x, x⁻¹, f₁⁻¹, …, fₙ⁻¹, 1/k]`.
///
/// `exps` is indexed by the designated block (`f_0 = x` first) and `kexps` by
/// the distinct primes of `k`. The canonical form has no `fᵢ` dividing `numer`
/// and no prime of `k` dividing its content, so equality is structural.
#[derive(Clone)]
pub struct LocalizedElement {
    setup: Setup,
    numer: IntPolynomial,
    exps: Vec<i64>,
    kexps: Vec<i64>,
}

/// Brings raw data into canonical form.
pub fn loc_normalize(
    numer: IntPolynomial,
    exps: Vec<i64>,
    kexps: Vec<i64>,
    setup: &Setup,
) -> LocalizedElement {
    LocalizedElement::from_parts(setup, numer, exps, kexps)
}

impl LocalizedElement {
    pub fn from_parts(
        setup: &Setup,
        mut numer: IntPolynomial,
        mut exps: Vec<i64>,
        mut kexps: Vec<i64>,
    ) -> Self {
        let nf = setup.polys().len();
        let np = setup.k_factors().len();
        exps.resize(nf, 0);
        kexps.resize(np, 0);
        if numer.is_zero() {
            return Self::zero(setup);
        }
        for (i, f) in setup.polys().iter().enumerate() {
            loop {
                let (q, r) = numer.div_rem_monic(f).expect("setup polynomials are monic");
                if !r.is_zero() {
                    break;
                }
                numer = q;
                exps[i] += 1;
            }
        }
        let mut content = numer.content();
        for (idx, &(p, _)) in setup.k_factors().iter().enumerate() {
            let p = BigInt::from(p);
            while content.is_multiple_of(&p) {
                content /= &p;
                numer = numer.div_scalar_exact(&p);
                kexps[idx] += 1;
            }
        }
        LocalizedElement { setup: setup.clone(), numer, exps, kexps }
    }

    /// Builds from a numerator and a power of `k` (rather than per-prime exponents).
    pub fn from_k_power(setup: &Setup, numer: IntPolynomial, exps: Vec<i64>, kexp: i64) -> Self {
        let kexps = setup.k_factors().iter().map(|&(_, e)| e as i64 * kexp).collect();
        Self::from_parts(setup, numer, exps, kexps)
    }

    pub fn zero(setup: &Setup) -> Self {
        LocalizedElement {
            setup: setup.clone(),
            numer: IntPolynomial::zero(),
            exps: vec![0; setup.polys().len()],
            kexps: vec![0; setup.k_factors().len()],
        }
    }

    pub fn one(setup: &Setup) -> Self {
        Self::from_poly(setup, IntPolynomial::one())
    }

    pub fn from_int(setup: &Setup, n: i64) -> Self {
        Self::from_poly(setup, IntPolynomial::constant(BigInt::from(n)))
    }

    pub fn from_poly(setup: &Setup, p: IntPolynomial) -> Self {
        Self::from_parts(setup, p, Vec::new(), Vec::new())
    }

    /// `f_i^e` for the designated block.
    pub fn f_power(setup: &Setup, i: usize, e: i64) -> Self {
        let mut exps = vec![0; setup.polys().len()];
        exps[i] = e;
        LocalizedElement {
            setup: setup.clone(),
            numer: IntPolynomial::one(),
            exps,
            kexps: vec![0; setup.k_factors().len()],
        }
    }

    /// `k^e`.
    pub fn k_power(setup: &Setup, e: i64) -> Self {
        Self::from_k_power(setup, IntPolynomial::one(), Vec::new(), e)
    }

    /// Converts a polynomial over ℚ whose denominators are units in ℤ[1/k].
    pub fn from_rational_poly(setup: &Setup, p: &RatPolynomial) -> Result<Self> {
        let (num, den) = p.to_integer_parts();
        let rest = strip_k_primes(&den, setup.k_factors());
        if !rest.is_one() {
            return Err(Error::NotKSmooth(den.to_string()));
        }
        let mut kexps = vec![0i64; setup.k_factors().len()];
        let mut d = den;
        for (idx, &(p, _)) in setup.k_factors().iter().enumerate() {
            let p = BigInt::from(p);
            while d.is_multiple_of(&p) && !d.is_one() {
                d /= &p;
                kexps[idx] -= 1;
            }
        }
        Ok(Self::from_parts(setup, num, Vec::new(), kexps))
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn numer(&self) -> &IntPolynomial {
        &self.numer
    }

    /// Exponents of `f_0 = x, f_1, …, f_n`.
    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    /// Exponents of the distinct primes of `k`, in the order of [`Setup::k_factors`].
    pub fn kexps(&self) -> &[i64] {
        &self.kexps
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numer.is_one() && self.exps.iter().all(|&e| e == 0) && self.kexps.iter().all(|&e| e == 0)
    }

    /// Units are exactly `±Π fᵢ^eᵢ Π p^e_p`.
    pub fn is_unit(&self) -> bool {
        self.numer.is_constant() && !self.numer.is_zero() && self.numer.coeff(0).abs().is_one()
    }

    /// A rational constant: numerator of degree 0 and no `fᵢ` powers.
    pub fn is_constant(&self) -> bool {
        self.numer.is_constant() && self.exps.iter().all(|&e| e == 0)
    }

    /// The value as a rational number when [`is_constant`](Self::is_constant).
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        let mut r = BigRational::from_integer(self.numer.coeff(0));
        for (&(p, _), &e) in self.setup.k_factors().iter().zip(&self.kexps) {
            let pp = BigRational::from_integer(BigInt::from(p));
            r *= num_traits::pow::Pow::pow(&pp, e as i32);
        }
        Some(r)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.setup == other.setup {
            Ok(())
        } else {
            Err(Error::SetupMismatch)
        }
    }

    /// `numer · Π fᵢ^{eᵢ-baseᵢ} · Π p^{kₚ-baseₚ}` as an integer polynomial; all shifts ≥ 0.
    fn lift(&self, base_f: &[i64], base_k: &[i64]) -> IntPolynomial {
        let mut out = self.numer.clone();
        for (i, f) in self.setup.polys().iter().enumerate() {
            let e = self.exps[i] - base_f[i];
            debug_assert!(e >= 0);
            out = &out * &f.pow(e as u32);
        }
        for (idx, &(p, _)) in self.setup.k_factors().iter().enumerate() {
            let e = self.kexps[idx] - base_k[idx];
            out = out.scale(&num_traits::pow(BigInt::from(p), e as usize));
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let base_f: Vec<i64> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        let base_k: Vec<i64> = self.kexps.iter().zip(&other.kexps).map(|(a, b)| *a.min(b)).collect();
        let sum = &self.lift(&base_f, &base_k) + &other.lift(&base_f, &base_k);
        Ok(Self::from_parts(&self.setup, sum, base_f, base_k))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.setup));
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        let kexps = self.kexps.iter().zip(&other.kexps).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(&self.setup, &self.numer * &other.numer, exps, kexps))
    }

    fn neg_ref(&self) -> Self {
        LocalizedElement {
            setup: self.setup.clone(),
            numer: -&self.numer,
            exps: self.exps.clone(),
            kexps: self.kexps.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(LocalizedElement {
            setup: self.setup.clone(),
            numer: self.numer.clone(),
            exps: self.exps.iter().map(|e| -e).collect(),
            kexps: self.kexps.iter().map(|e| -e).collect(),
        })
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.setup);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        Self::from_parts(&self.setup, self.numer.scale(c), self.exps.clone(), self.kexps.clone())
    }

    /// Writes the element as `P / D` with `P ∈ ℤ[x]` and `D` a product of
    /// the `fᵢ` and primes of `k`.
    pub fn as_fraction(&self) -> (IntPolynomial, IntPolynomial) {
        let mut num = self.numer.clone();
        let mut den = IntPolynomial::one();
        for (i, f) in self.setup.polys().iter().enumerate() {
            let e = self.exps[i];
            let fp = f.pow(e.unsigned_abs() as u32);
            if e >= 0 {
                num = &num * &fp;
            } else {
                den = &den * &fp;
            }
        }
        for (idx, &(p, _)) in self.setup.k_factors().iter().enumerate() {
            let e = self.kexps[idx];
            let pp = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e >= 0 {
                num = num.scale(&pp);
            } else {
                den = den.scale(&pp);
            }
        }
        (num, den)
    }
}

impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        self.setup == other.setup
            && self.numer == other.numer
            && self.exps == other.exps
            && self.kexps == other.kexps
    }
}

impl Eq for LocalizedElement {}

impl Hash for LocalizedElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.numer.hash(state);
        self.exps.hash(state);
        self.kexps.hash(state);
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut factors = Vec::new();
        let trivial_numer = self.numer.is_constant();
        if !trivial_numer || self.is_one() || !self.numer.coeff(0).abs().is_one() {
            if self.numer.is_constant() && !self.numer.coeff(0).is_negative() {
                factors.push(self.numer.to_string());
            } else {
                factors.push(format!("({})", self.numer));
            }
        } else if self.numer.coeff(0).is_negative() {
            factors.push("-1".to_string());
        }
        for (i, fp) in self.setup.polys().iter().enumerate() {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            let base = if i == 0 { "x".to_string() } else { format!("({})", fp) };
            factors.push(if e == 1 { base } else { format!("{}^{}", base, e) });
        }
        for (idx, &(p, _)) in self.setup.k_factors().iter().enumerate() {
            let e = self.kexps[idx];
            if e != 0 {
                factors.push(if e == 1 { p.to_string() } else { format!("{}^{}", p, e) });
            }
        }
        write!(f, "{}", factors.join(" * "))
    }
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalizedElement({})", self)
    }
}

// The operator forms panic on mixed setups; use the `checked_*` methods
// when the operands may come from different instances.
impl Add for &LocalizedElement {
    type Output = LocalizedElement;
    fn add(self, rhs: &LocalizedElement) -> LocalizedElement {
        self.checked_add(rhs).expect("setup mismatch")
    }
}

impl Sub for &LocalizedElement {
    type Output = LocalizedElement;
    fn sub(self, rhs: &LocalizedElement) -> LocalizedElement {
        self.checked_sub(rhs).expect("setup mismatch")
    }
}

impl Mul for &LocalizedElement {
    type Output = LocalizedElement;
    fn mul(self, rhs: &LocalizedElement) -> LocalizedElement {
        self.checked_mul(rhs).expect("setup mismatch")
    }
}

impl Neg for &LocalizedElement {
    type Output = LocalizedElement;
    fn neg(self) -> LocalizedElement {
        self.neg_ref()
    }
}
