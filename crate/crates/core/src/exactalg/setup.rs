use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{poly_resultant, IntPolynomial};
use crate::error::{Error, Result};

/// One block `f_{i,0}, …, f_{i,z_i}` of pairwise coprime monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockData {
    pub polys: Vec<IntPolynomial>,
    /// Accept polynomials of degree > 3 as irreducible without checking.
    pub assert_irreducible: bool,
}

/// Unvalidated setup input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetupData {
    pub k: u64,
    pub blocks: Vec<BlockData>,
    pub free_rank: usize,
}

/// A single reason a [`SetupData`] was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    KTooSmall { k: u64 },
    NoBlocks,
    FreeRankZero,
    EmptyBlock { block: usize },
    NotMonic { block: usize, index: usize },
    Constant { block: usize, index: usize },
    FirstNotX { block: usize },
    Reducible { block: usize, index: usize, root: BigInt },
    IrreducibilityUnchecked { block: usize, index: usize, degree: usize },
    NotCoprime {
        block: usize,
        i: usize,
        j: usize,
        resultant: BigInt,
        /// Part of the resultant prime to `k`.
        cofactor: BigInt,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::KTooSmall { k } => write!(f, "k = {} but k >= 2 is required", k),
            Violation::NoBlocks => write!(f, "at least one polynomial block is required"),
            Violation::FreeRankZero => write!(f, "free rank must be at least 1"),
            Violation::EmptyBlock { block } => write!(f, "block {} is empty", block + 1),
            Violation::NotMonic { block, index } => {
                write!(f, "f[{}][{}] is not monic", block + 1, index)
            }
            Violation::Constant { block, index } => {
                write!(f, "f[{}][{}] is constant", block + 1, index)
            }
            Violation::FirstNotX { block } => write!(f, "f[{}][0] must be x", block + 1),
            Violation::Reducible { block, index, root } => {
                write!(f, "f[{}][{}] is reducible (root {})", block + 1, index, root)
            }
            Violation::IrreducibilityUnchecked { block, index, degree } => write!(
                f,
                "f[{}][{}] has degree {} > 3; irreducibility must be asserted explicitly",
                block + 1,
                index,
                degree
            ),
            Violation::NotCoprime { block, i, j, resultant, cofactor } => write!(
                f,
                "f[{b}][{i}], f[{b}][{j}] not coprime over Z[1/k]: resultant {r} has factor {c} prime to k",
                b = block + 1,
                i = i,
                j = j,
                r = resultant,
                c = cofactor
            ),
        }
    }
}

#[derive(Debug)]
struct SetupInner {
    k: u64,
    k_factors: Vec<(u64, u32)>,
    blocks: Vec<Vec<IntPolynomial>>,
    asserted_irreducible: Vec<(usize, usize)>,
    free_rank: usize,
    digest: u64,
}

/// A validated instance: `k`, the polynomial blocks and the rank of `A` over `M`.
///
/// Cloning is cheap; elements of the localized ring keep a handle to their setup.
#[derive(Clone)]
pub struct Setup {
    inner: Arc<SetupInner>,
}

impl PartialEq for Setup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.digest == other.inner.digest
                && self.inner.k == other.inner.k
                && self.inner.blocks == other.inner.blocks
                && self.inner.free_rank == other.inner.free_rank)
    }
}

impl Eq for Setup {}

impl fmt::Debug for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Setup")
            .field("k", &self.inner.k)
            .field("blocks", &self.inner.blocks)
            .field("free_rank", &self.inner.free_rank)
            .finish()
    }
}

pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && factorize_u64(n) == vec![(n, 1)]
}

/// Integer root of a monic polynomial of degree 2 or 3, if any.
///
/// A monic cubic or quadratic is reducible over ℤ exactly when it has a
/// linear factor, i.e. an integer root dividing the constant term.
fn integer_root(f: &IntPolynomial) -> Option<BigInt> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Some(BigInt::zero());
    }
    let n = c0.abs();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            for cand in [d.clone(), &n / &d] {
                for r in [cand.clone(), -cand] {
                    if f.eval(&r).is_zero() {
                        return Some(r);
                    }
                }
            }
        }
        d += 1;
    }
    None
}

/// Removes every prime factor of `k` from `n`.
pub(crate) fn strip_k_primes(n: &BigInt, k_factors: &[(u64, u32)]) -> BigInt {
    let mut n = n.abs();
    for &(p, _) in k_factors {
        let p = BigInt::from(p);
        while !n.is_zero() && n.is_multiple_of(&p) {
            n /= &p;
        }
    }
    n
}

impl Setup {
    /// Checks every hypothesis on the raw data and collects all violations.
    pub fn validate(data: SetupData) -> Result<Setup> {
        let mut v = Vec::new();
        if data.k < 2 {
            v.push(Violation::KTooSmall { k: data.k });
        }
        if data.free_rank == 0 {
            v.push(Violation::FreeRankZero);
        }
        if data.blocks.is_empty() {
            v.push(Violation::NoBlocks);
        }
        let k_factors = factorize_u64(data.k.max(1));
        let mut asserted = Vec::new();
        for (b, block) in data.blocks.iter().enumerate() {
            if block.polys.is_empty() {
                v.push(Violation::EmptyBlock { block: b });
                continue;
            }
            if block.polys[0] != IntPolynomial::x() {
                v.push(Violation::FirstNotX { block: b });
            }
            let mut shape_ok = vec![true; block.polys.len()];
            for (i, f) in block.polys.iter().enumerate() {
                if f.is_constant() {
                    v.push(Violation::Constant { block: b, index: i });
                    shape_ok[i] = false;
                    continue;
                }
                if !f.is_monic() {
                    v.push(Violation::NotMonic { block: b, index: i });
                    shape_ok[i] = false;
                }
                let deg = f.degree().unwrap();
                if deg >= 2 && deg <= 3 {
                    if let Some(root) = integer_root(f) {
                        v.push(Violation::Reducible { block: b, index: i, root });
                    }
                } else if deg > 3 {
                    if block.assert_irreducible {
                        asserted.push((b, i));
                    } else {
                        v.push(Violation::IrreducibilityUnchecked { block: b, index: i, degree: deg });
                    }
                }
            }
            for i in 0..block.polys.len() {
                for j in i + 1..block.polys.len() {
                    if !shape_ok[i] || !shape_ok[j] {
                        continue;
                    }
                    let res = poly_resultant(&block.polys[i], &block.polys[j])?;
                    let cofactor = strip_k_primes(&res, &k_factors);
                    if !cofactor.is_one() {
                        v.push(Violation::NotCoprime {
                            block: b,
                            i,
                            j,
                            resultant: res,
                            cofactor,
                        });
                    }
                }
            }
        }
        if !v.is_empty() {
            return Err(Error::InvalidSetup(v));
        }
        let blocks: Vec<Vec<IntPolynomial>> = data.blocks.into_iter().map(|b| b.polys).collect();
        let mut h = DefaultHasher::new();
        data.k.hash(&mut h);
        blocks.hash(&mut h);
        data.free_rank.hash(&mut h);
        Ok(Setup {
            inner: Arc::new(SetupInner {
                k: data.k,
                k_factors,
                blocks,
                asserted_irreducible: asserted,
                free_rank: data.free_rank,
                digest: h.finish(),
            }),
        })
    }

    /// The instance `G_n`: `k = n!`, one block `x, x+1, …, x+n`.
    pub fn g_n(n: u32) -> Result<Setup> {
        let k: u64 = (1..=n as u64).product();
        Self::linear(k, &(0..=n as i64).collect::<Vec<_>>())
    }

    /// One block of linear polynomials `x + c` for the given shifts.
    pub fn linear(k: u64, shifts: &[i64]) -> Result<Setup> {
        Self::single_block(k, shifts.iter().map(|&c| IntPolynomial::linear(c)).collect())
    }

    pub fn single_block(k: u64, polys: Vec<IntPolynomial>) -> Result<Setup> {
        Self::validate(SetupData {
            k,
            blocks: vec![BlockData { polys, assert_irreducible: false }],
            free_rank: 1,
        })
    }

    pub fn k(&self) -> u64 {
        self.inner.k
    }

    pub fn k_big(&self) -> BigInt {
        BigInt::from(self.inner.k)
    }

    /// Prime factorization of `k`.
    pub fn k_factors(&self) -> &[(u64, u32)] {
        &self.inner.k_factors
    }

    pub fn blocks(&self) -> &[Vec<IntPolynomial>] {
        &self.inner.blocks
    }

    /// Number of blocks `l`.
    pub fn block_count(&self) -> usize {
        self.inner.blocks.len()
    }

    /// The designated block `f_0 = x, f_1, …, f_n`.
    pub fn polys(&self) -> &[IntPolynomial] {
        &self.inner.blocks[0]
    }

    /// `n`, so that the designated block holds `n + 1` polynomials.
    pub fn n(&self) -> usize {
        self.polys().len() - 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys().iter().map(|f| f.degree().unwrap()).collect()
    }

    pub fn degree_sum(&self) -> i64 {
        self.degrees().iter().sum::<usize>() as i64
    }

    /// `β = -(2 + Σ dᵢ)` over the designated block.
    pub fn beta(&self) -> i64 {
        -(2 + self.degree_sum())
    }

    /// Ranks of `Q_1, …, Q_l`.
    pub fn block_ranks(&self) -> Vec<usize> {
        self.inner.blocks.iter().map(|b| b.len()).collect()
    }

    /// `m = min rk(Q_i)`.
    pub fn m(&self) -> usize {
        self.block_ranks().into_iter().min().unwrap_or(0)
    }

    /// Rank of `Q`: `q_{-1}` plus every block generator.
    pub fn q_rank(&self) -> usize {
        1 + self.block_ranks().iter().sum::<usize>()
    }

    /// Basis index of `q_{i,j}` (block `i` counted from 0).
    pub fn q_index(&self, block: usize, j: usize) -> usize {
        1 + self.block_ranks()[..block].iter().sum::<usize>() + j
    }

    pub fn free_rank(&self) -> usize {
        self.inner.free_rank
    }

    /// Polynomials accepted as irreducible on the caller's word.
    pub fn asserted_irreducible(&self) -> &[(usize, usize)] {
        &self.inner.asserted_irreducible
    }

    pub fn digest(&self) -> u64 {
        self.inner.digest
    }

    /// Basis names in coordinate order: `q-1, q0, …, qn`, then `q{i}_{j}` for later blocks.
    pub fn basis_names(&self) -> Vec<String> {
        let mut names = vec!["q-1".to_string()];
        for (b, block) in self.blocks().iter().enumerate() {
            for j in 0..block.len() {
                if b == 0 {
                    names.push(format!("q{}", j));
                } else {
                    names.push(format!("q{}_{}", b + 1, j));
                }
            }
        }
        names
    }

    /// Values `f_j(1)` for `1 ≤ j ≤ n` of the designated block.
    pub fn values_at_one(&self) -> Vec<BigInt> {
        self.polys()[1..].iter().map(|f| f.eval(&BigInt::one())).collect()
    }

    pub fn k_as_i64(&self) -> i64 {
        self.k_big().to_i64().expect("k fits in i64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(r: Result<Setup>) -> Vec<Violation> {
        match r {
            Err(Error::InvalidSetup(v)) => v,
            other => panic!("expected violations, got {:?}", other),
        }
    }

    #[test]
    fn g2_is_valid() {
        let s = Setup::g_n(2).unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.degrees(), vec![1, 1, 1]);
        assert_eq!(s.beta(), -5);
        assert_eq!(s.q_rank(), 4);
        assert_eq!(s.m(), 3);
    }

    #[test]
    fn resultant_prime_to_k_is_rejected() {
        let v = violations(Setup::linear(3, &[0, 2]));
        assert_eq!(
            v,
            vec![Violation::NotCoprime {
                block: 0,
                i: 0,
                j: 1,
                resultant: BigInt::from(2),
                cofactor: BigInt::from(2)
            }]
        );
    }

    #[test]
    fn first_polynomial_must_be_x() {
        let v = violations(Setup::single_block(
            2,
            vec![IntPolynomial::linear(1), IntPolynomial::from_i64s(&[1, 0, 1])],
        ));
        assert!(v.contains(&Violation::FirstNotX { block: 0 }));
    }

    #[test]
    fn shape_violations() {
        let v = violations(Setup::single_block(
            1,
            vec![
                IntPolynomial::x(),
                IntPolynomial::from_i64s(&[1, 2]),
                IntPolynomial::from_i64s(&[5]),
                IntPolynomial::from_i64s(&[-1, 0, 1]),
                IntPolynomial::from_i64s(&[1, 0, 0, 0, 1]),
            ],
        ));
        assert!(v.contains(&Violation::KTooSmall { k: 1 }));
        assert!(v.contains(&Violation::NotMonic { block: 0, index: 1 }));
        assert!(v.contains(&Violation::Constant { block: 0, index: 2 }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::Reducible { block: 0, index: 3, .. })));
        assert!(v.contains(&Violation::IrreducibilityUnchecked { block: 0, index: 4, degree: 4 }));
    }

    #[test]
    fn asserted_irreducible_high_degree() {
        let s = Setup::validate(SetupData {
            k: 2,
            blocks: vec![BlockData {
                polys: vec![IntPolynomial::x(), IntPolynomial::from_i64s(&[1, 0, 0, 0, 1])],
                assert_irreducible: true,
            }],
            free_rank: 1,
        })
        .unwrap();
        assert_eq!(s.asserted_irreducible(), &[(0, 1)]);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize_u64(24), vec![(2, 3), (3, 1)]);
        assert_eq!(factorize_u64(720), vec![(2, 4), (3, 2), (5, 1)]);
        assert!(is_prime_u64(7));
        assert!(!is_prime_u64(1));
    }
}
