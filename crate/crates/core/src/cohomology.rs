//! Second cohomology of `Q` with coefficients in `A`, in the single-block case.
//!
//! Two answers are offered: the branch formula (`k − 1` when every
//! `f_j(1) ≡ 1 mod (k − 1)`, trivial otherwise) and the order of the fixed
//! points of multiplication by the `f_j(1)` on the localization of
//! `ℤ/(k − 1)` at their product. [`h2_report`] gives both and whether they agree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactalg::{LocalizedElement, Setup};

/// A finite cyclic group, by its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicGroupOrder {
    pub order: u64,
}

impl CyclicGroupOrder {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

impl fmt::Display for CyclicGroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order)
    }
}

fn single_block(setup: &Setup) -> Result<()> {
    if setup.block_count() != 1 {
        return Err(Error::Unsupported(format!(
            "cohomology formulas need a single block, setup has {}",
            setup.block_count()
        )));
    }
    Ok(())
}

fn residue(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n)).to_u64().unwrap()
}

/// Order `k − 1` when `f_j(1) ≡ 1 mod (k − 1)` for every `j ≥ 1`, else 1.
#[allow(non_snake_case)]
pub fn h2_theoremC(setup: &Setup) -> Result<CyclicGroupOrder> {
    single_block(setup)?;
    let n = setup.k() - 1;
    let all_one = setup.values_at_one().iter().all(|v| residue(v, n) == 1 % n);
    Ok(CyclicGroupOrder { order: if all_one { n } else { 1 } })
}

/// `{x ∈ ℤ/N : P^e x = 0 for some e}` for `N = k − 1` and `P` the product of the values.
fn localization_kernel(n: u64, values: &[i64]) -> Vec<bool> {
    let p = values.iter().fold(1 % n, |acc, &v| (acc as u128 * v.rem_euclid(n as i64) as u128 % n as u128) as u64);
    // P^e with e ≥ log2 N annihilates every element killed by some power of P
    let mut pe = 1 % n;
    for _ in 0..64 {
        pe = (pe as u128 * p as u128 % n as u128) as u64;
    }
    (0..n).map(|x| (x as u128 * pe as u128 % n as u128) == 0).collect()
}

/// Brute force over `ℤ/(k − 1)`: the fixed points of `x ↦ f_j(1)·x` in the
/// localization are the `x` with every `(f_j(1) − 1)·x` in the kernel of
/// the localization map, counted modulo that kernel.
pub fn fixed_point_order_brute(k: u64, values: &[i64]) -> Result<CyclicGroupOrder> {
    if k < 2 {
        return Err(Error::Precondition("k must be at least 2".into()));
    }
    let n = k - 1;
    let ker = localization_kernel(n, values);
    let ker_size = ker.iter().filter(|&&b| b).count() as u64;
    let fixed = (0..n)
        .filter(|&x| {
            values.iter().all(|&v| {
                let m = (v - 1).rem_euclid(n as i64) as u128;
                ker[(m * x as u128 % n as u128) as usize]
            })
        })
        .count() as u64;
    Ok(CyclicGroupOrder { order: fixed / ker_size })
}

/// The closed form `gcd(N', f_1(1) − 1, …)`, with `N'` the part of `k − 1`
/// prime to every value. Checked against [`fixed_point_order_brute`] in the tests.
pub fn fixed_point_order_closed(k: u64, values: &[i64]) -> Result<CyclicGroupOrder> {
    if k < 2 {
        return Err(Error::Precondition("k must be at least 2".into()));
    }
    let mut n = k - 1;
    for &v in values {
        let a = v.unsigned_abs();
        if a == 0 {
            n = 1;
            continue;
        }
        loop {
            let g = n.gcd(&a);
            if g == 1 {
                break;
            }
            n /= g;
        }
    }
    let order = values.iter().fold(n, |acc, &v| acc.gcd(&(v - 1).unsigned_abs()));
    Ok(CyclicGroupOrder { order })
}

/// Above this modulus the closed form replaces enumeration.
const BRUTE_FORCE_LIMIT: u64 = 1 << 20;

pub fn fixed_point_order(k: u64, values: &[i64]) -> Result<CyclicGroupOrder> {
    if k.saturating_sub(1) <= BRUTE_FORCE_LIMIT {
        fixed_point_order_brute(k, values)
    } else {
        fixed_point_order_closed(k, values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H2Report {
    pub theorem_c: CyclicGroupOrder,
    pub fixed_point: CyclicGroupOrder,
}

impl H2Report {
    pub fn agree(&self) -> bool {
        self.theorem_c == self.fixed_point
    }
}

pub fn h2_report(setup: &Setup) -> Result<H2Report> {
    let theorem_c = h2_theoremC(setup)?;
    let values = setup
        .values_at_one()
        .iter()
        .map(|v| v.to_i64().ok_or_else(|| Error::Unsupported("f_j(1) exceeds 64 bits".into())))
        .collect::<Result<Vec<_>>>()?;
    let fixed_point = fixed_point_order(setup.k(), &values)?;
    Ok(H2Report { theorem_c, fixed_point })
}

/// An element of `(ℤ/N)[x, f₁⁻¹, …, fₙ⁻¹]` written `numer · Π fᵢ^{expᵢ}`.
#[derive(Clone, Debug)]
pub struct ModLocalized {
    setup: Setup,
    modulus: u64,
    numer: Vec<u64>,
    exps: Vec<i64>,
}

fn strip(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mul_mod(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + *x as u128 * *y as u128) % n as u128) as u64;
        }
    }
    strip(out)
}

fn add_mod(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    strip(
        (0..len)
            .map(|i| ((*a.get(i).unwrap_or(&0) as u128 + *b.get(i).unwrap_or(&0) as u128) % n as u128) as u64)
            .collect(),
    )
}

fn pow_mod_scalar(base: u64, e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    let mut b = base % n;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % n as u128) as u64;
        }
        b = (b as u128 * b as u128 % n as u128) as u64;
        e >>= 1;
    }
    acc
}

impl ModLocalized {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_empty()
    }

    fn f_poly(&self, i: usize) -> Vec<u64> {
        strip(self.setup.polys()[i].coeffs().iter().map(|c| residue(c, self.modulus)).collect())
    }

    /// Numerator after shifting every exponent down to `base`.
    fn lift(&self, base: &[i64]) -> Vec<u64> {
        let mut out = self.numer.clone();
        for (i, (&e, &b)) in self.exps.iter().zip(base).enumerate() {
            let f = self.f_poly(i);
            for _ in 0..e - b {
                out = mul_mod(&out, &f, self.modulus);
            }
        }
        out
    }

    fn base(&self, other: &Self) -> Vec<i64> {
        self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        ModLocalized {
            setup: self.setup.clone(),
            modulus: self.modulus,
            numer: mul_mod(&self.numer, &other.numer, self.modulus),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let base = self.base(other);
        ModLocalized {
            setup: self.setup.clone(),
            modulus: self.modulus,
            numer: add_mod(&self.lift(&base), &other.lift(&base), self.modulus),
            exps: base,
        }
    }

    /// Multiplication by the integer `c`.
    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.modulus as i64) as u64;
        ModLocalized {
            setup: self.setup.clone(),
            modulus: self.modulus,
            numer: mul_mod(&self.numer, &[c], self.modulus),
            exps: self.exps.clone(),
        }
    }

    /// Numerator coefficients in ascending degree.
    pub fn numer(&self) -> &[u64] {
        &self.numer
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }
}

// The fᵢ are monic, hence non-zero-divisors, so comparing after clearing
// to common exponents decides equality.
impl PartialEq for ModLocalized {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus != other.modulus || self.setup != other.setup {
            return false;
        }
        let base = self.base(other);
        self.lift(&base) == other.lift(&base)
    }
}

impl Eq for ModLocalized {}

impl fmt::Display for ModLocalized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 mod {}", self.modulus);
        }
        let poly = crate::exactalg::IntPolynomial::new(self.numer.iter().map(|&c| BigInt::from(c)).collect());
        let mut parts = vec![format!("({})", poly)];
        for (i, &e) in self.exps.iter().enumerate() {
            if e != 0 {
                let base = if i == 0 { "x".to_string() } else { format!("({})", self.setup.polys()[i]) };
                parts.push(format!("{}^{}", base, e));
            }
        }
        write!(f, "{} mod {}", parts.join(" * "), self.modulus)
    }
}

/// Image of `e` in `A/(k − 1)A`: coefficients reduced mod `k − 1`, and each
/// prime of `k` replaced by its (invertible) residue.
pub fn coinvariants_reduce(setup: &Setup, e: &LocalizedElement) -> Result<ModLocalized> {
    if e.setup() != setup {
        return Err(Error::SetupMismatch);
    }
    let n = setup.k() - 1;
    let mut scalar = 1 % n;
    for (&(p, _), &x) in setup.k_factors().iter().zip(e.kexps()) {
        let base = if x >= 0 {
            p % n
        } else {
            let inv = BigInt::from(p).extended_gcd(&BigInt::from(n)).x;
            residue(&inv, n.max(1))
        };
        scalar = (scalar as u128 * pow_mod_scalar(base, x.unsigned_abs(), n) as u128 % n as u128) as u64;
    }
    let numer: Vec<u64> = e.numer().coeffs().iter().map(|c| residue(c, n)).collect();
    Ok(ModLocalized {
        setup: setup.clone(),
        modulus: n,
        numer: mul_mod(&strip(numer), &[scalar], n),
        exps: if e.is_zero() { vec![0; setup.polys().len()] } else { e.exps().to_vec() },
    })
}
