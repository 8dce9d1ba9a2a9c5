//! Σ-membership evidence through the centralizer criterion.
//!
//! A witness is an integer combination `λ = Σ cⱼ qⱼ` of elements of `Q`
//! whose images sum to 1 in the localized ring and whose support lies in
//! `{q : v(q) > 0}`; it shows `[v] ∈ Σ_A`. Not finding one proves nothing.
//!
//! The search does not enumerate supports blindly. It precomputes a catalog
//! of *circuits*: minimal integer relations `Σ cⱼ Pⱼ = 0` among products
//! `Pⱼ = Π fᵢ^{eᵢ}` of bounded degree. Dividing a circuit by the term `P_t`
//! of smallest `v`-value and solving for it gives
//! `1 = Σ_{j≠t} (−cⱼ/c_t)·Pⱼ/P_t`, whose monomials all have positive value.
//! Powers of `q_{-1}` (image `k`) absorb the denominators of the coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use itertools::Itertools;
use rayon::prelude::*;

use crate::charspace::{CoeffConstraint, Character, ConeFamily, ConeSpec};
use crate::error::{Error, Result};
use crate::exactalg::{monomial_image, IntPolynomial, LocalizedElement, QMonomial, Setup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    /// Maximal number of monomials in `λ`.
    pub support: usize,
    /// Bound on the absolute value of every exponent in the support.
    pub exp_box: i64,
    /// Degree bound on the products used to build relations.
    pub degree: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { support: 4, exp_box: 6, degree: 3 }
    }
}

/// `λ` as a list of `(coefficient, monomial)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub terms: Vec<(BigInt, QMonomial)>,
}

impl Witness {
    /// `Σ cⱼ · monomial_image(qⱼ)`.
    pub fn image_sum(&self, setup: &Setup) -> Result<LocalizedElement> {
        let mut acc = LocalizedElement::zero(setup);
        for (c, q) in &self.terms {
            acc = acc.checked_add(&monomial_image(q, setup)?.scale_int(c))?;
        }
        Ok(acc)
    }

    /// Checks the centralizer and positivity conditions, and the search box.
    pub fn validate(&self, setup: &Setup, v: &Character, exp_box: i64) -> bool {
        !self.terms.is_empty()
            && self.terms.iter().all(|(c, q)| {
                !c.is_zero() && v.eval(q).is_positive() && q.max_abs_exp() <= exp_box
            })
            && self.image_sum(setup).map(|s| s.is_one()).unwrap_or(false)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, (c, q)) in self.terms.iter().enumerate() {
            let mono = q.render(names);
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(&mono);
            } else if q.is_identity() {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{}*{}", mag, mono));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaVerdict {
    InSigma(Witness),
    NoWitnessWithinBounds(SearchBounds),
}

impl SigmaVerdict {
    pub fn is_in_sigma(&self) -> bool {
        matches!(self, SigmaVerdict::InSigma(_))
    }
}

/// A minimal relation `Σ cⱼ Pⱼ = 0`; `exps[j]` are the exponents of `Pⱼ`
/// over the designated block.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Circuit {
    exps: Vec<Vec<i64>>,
    coeffs: Vec<BigInt>,
}

/// Exponent vectors of `Π fᵢ^{eᵢ}` with `Σ eᵢ deg fᵢ ≤ max_deg`, graded then lexicographic.
fn bounded_exponents(degrees: &[usize], max_deg: usize) -> Vec<Vec<i64>> {
    fn rec(degrees: &[usize], left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == degrees.len() {
            out.push(cur.clone());
            return;
        }
        let d = degrees[cur.len()];
        for e in 0..=left / d {
            cur.push(e as i64);
            rec(degrees, left - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, max_deg, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().zip(degrees).map(|(x, d)| *x as usize * d).sum::<usize>(), e.clone()));
    out
}

/// One-dimensional kernel of the matrix with the given columns, scaled to a
/// primitive integer vector with positive first entry; `None` otherwise.
fn unique_kernel(cols: &[Vec<BigRational>]) -> Option<Vec<BigInt>> {
    let ncols = cols.len();
    let nrows = cols[0].len();
    let mut m: Vec<Vec<BigRational>> = (0..nrows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let sub = &f * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if pivots.len() + 1 != ncols {
        return None;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c)).unwrap();
    let mut kernel = vec![BigRational::zero(); ncols];
    kernel[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        kernel[pc] = -m[r][free].clone();
    }
    if kernel.iter().any(|x| x.is_zero()) {
        return None;
    }
    let den = kernel.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<BigInt> = kernel.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    let sign = if ints[0].is_negative() { -BigInt::one() } else { BigInt::one() };
    Some(ints.iter().map(|x| x / &g * &sign).collect())
}

fn build_catalog(setup: &Setup, bounds: &SearchBounds) -> Vec<Circuit> {
    let degrees = setup.degrees();
    let exps = bounded_exponents(&degrees, bounds.degree);
    let polys: Vec<Vec<BigRational>> = exps
        .iter()
        .map(|e| {
            let p = e
                .iter()
                .zip(setup.polys())
                .fold(IntPolynomial::one(), |acc, (&x, f)| &acc * &f.pow(x as u32));
            (0..=bounds.degree)
                .map(|i| BigRational::from_integer(p.coeff(i)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for size in 2..=bounds.support + 1 {
        let found: Vec<Circuit> = (0..exps.len())
            .combinations(size)
            .collect::<Vec<_>>()
            .par_iter()
            .filter_map(|idx| {
                let shares_factor = (0..degrees.len()).any(|i| idx.iter().all(|&j| exps[j][i] > 0));
                if shares_factor {
                    return None;
                }
                let cols: Vec<Vec<BigRational>> = idx.iter().map(|&j| polys[j].clone()).collect();
                let coeffs = unique_kernel(&cols)?;
                Some(Circuit { exps: idx.iter().map(|&j| exps[j].clone()).collect(), coeffs })
            })
            .collect();
        out.extend(found);
    }
    out
}

/// Largest `e` with `r / k^e` an integer, or `None` when `r ∉ ℤ[1/k]`.
fn k_adic_room(r: &BigRational, k: &BigInt) -> Option<i64> {
    if r.denom().is_one() {
        let mut num = r.numer().clone();
        let mut e = 0;
        while num.is_multiple_of(k) {
            num /= k;
            e += 1;
        }
        return Some(e);
    }
    let mut den = r.denom().clone();
    loop {
        let g = den.gcd(k);
        if g.is_one() {
            break;
        }
        den /= g;
    }
    if !den.is_one() {
        return None;
    }
    let mut a = 0;
    let mut pow = BigInt::one();
    while !pow.is_multiple_of(r.denom()) {
        pow *= k;
        a += 1;
    }
    Some(-a)
}

/// Caches the circuit catalog of a setup for repeated searches.
pub struct WitnessSearcher {
    setup: Setup,
    bounds: SearchBounds,
    catalog: Vec<Circuit>,
}

impl WitnessSearcher {
    pub fn new(setup: &Setup, bounds: SearchBounds) -> Self {
        let catalog = build_catalog(setup, &bounds);
        WitnessSearcher { setup: setup.clone(), bounds, catalog }
    }

    pub fn bounds(&self) -> SearchBounds {
        self.bounds
    }

    pub fn catalog_len(&self) -> usize {
        self.catalog.len()
    }

    fn q(&self, kexp: i64, block: &[i64]) -> QMonomial {
        let mut exps = vec![0; self.setup.q_rank()];
        exps[0] = kexp;
        exps[1..1 + block.len()].copy_from_slice(block);
        QMonomial::new(exps)
    }

    /// `k^e q_{-1}^{-e}` for the smallest `e ≥ 1` that works.
    fn k_witness(&self, v: &[i64]) -> Option<Witness> {
        if v[0] >= 0 || self.bounds.support == 0 {
            return None;
        }
        let k = self.setup.k_big();
        (1..=self.bounds.exp_box)
            .map(|e| Witness {
                terms: vec![(num_traits::pow(k.clone(), e as usize), self.q(-e, &vec![0; self.setup.polys().len()]))],
            })
            .next()
    }

    /// Solves the circuit for one term and divides by it; pivots are tried
    /// in order of increasing `v`-value.
    fn from_circuit(&self, c: &Circuit, v: &[i64]) -> Option<Witness> {
        let n1 = c.exps[0].len();
        let vals: Vec<i64> = c
            .exps
            .iter()
            .map(|e| e.iter().zip(&v[1..1 + n1]).map(|(a, b)| a * b).sum())
            .collect();
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by_key(|&j| (vals[j], j));
        order.into_iter().find_map(|t| self.with_pivot(c, v, &vals, t))
    }

    fn with_pivot(&self, c: &Circuit, v: &[i64], vals: &[i64], t: usize) -> Option<Witness> {
        let k = self.setup.k_big();
        let b = self.bounds.exp_box;
        let mut terms = Vec::with_capacity(c.exps.len() - 1);
        for j in (0..c.exps.len()).filter(|&j| j != t) {
            let r = BigRational::new(-c.coeffs[j].clone(), c.coeffs[t].clone());
            let hi = k_adic_room(&r, &k)?.min(b);
            let lo = -b;
            if lo > hi {
                return None;
            }
            let e = match v[0].signum() {
                1 => hi,
                -1 => lo,
                _ => 0i64.clamp(lo, hi),
            };
            if e * v[0] + vals[j] - vals[t] <= 0 {
                return None;
            }
            let diff: Vec<i64> = c.exps[j].iter().zip(&c.exps[t]).map(|(a, b)| a - b).collect();
            let ke = BigRational::from_integer(num_traits::pow(k.clone(), e.unsigned_abs() as usize));
            let coeff = if e >= 0 { r / ke } else { r * ke };
            let q = self.q(e, &diff);
            if q.max_abs_exp() > b {
                return None;
            }
            terms.push((coeff.to_integer(), q));
        }
        Some(Witness { terms })
    }

    /// The first witness in catalog order, re-validated before it is returned.
    pub fn search(&self, v: &Character) -> Result<SigmaVerdict> {
        if v.dim() != self.setup.q_rank() {
            return Err(Error::Dimension { expected: self.setup.q_rank(), got: v.dim() });
        }
        let p = v.primitive();
        let iv: Vec<i64> = p
            .coords()
            .iter()
            .map(|x| x.to_integer().to_i64())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Unsupported("character coordinates exceed 64 bits".into()))?;
        let found = self.k_witness(&iv).or_else(|| {
            self.catalog
                .par_iter()
                .filter(|c| c.exps.len() - 1 <= self.bounds.support)
                .find_map_first(|c| self.from_circuit(c, &iv))
        });
        match found {
            Some(w) if w.validate(&self.setup, v, self.bounds.exp_box) => Ok(SigmaVerdict::InSigma(w)),
            Some(w) => Err(Error::Consistency(format!(
                "witness {} failed re-validation",
                w.render(&self.setup.basis_names())
            ))),
            None => Ok(SigmaVerdict::NoWitnessWithinBounds(self.bounds)),
        }
    }
}

/// Searches for a centralizer witness for `[v]` with the default degree bound.
pub fn centralizer_witness_search(setup: &Setup, v: &Character, support_bound: usize, exp_box: i64) -> Result<SigmaVerdict> {
    let bounds = SearchBounds { support: support_bound, exp_box, ..SearchBounds::default() };
    WitnessSearcher::new(setup, bounds).search(v)
}

/// The complement `Σ^c` for `n = 2` as cones over `(q_{-1}, q₀, q₁, q₂)`.
///
/// `v_{-1}` is the `2`-adic character, `1` on `q_{-1}` and `0` elsewhere.
#[allow(non_snake_case)]
pub fn sigma_c_theoremB_data(n: usize) -> Result<ConeFamily> {
    if n != 2 {
        return Err(Error::Unsupported(format!("complement data is available for n = 2 only, got n = {}", n)));
    }
    let vm1 = Character::from_ints(&[1, 0, 0, 0]);
    let v0 = Character::from_ints(&[0, 1, 0, 0]);
    let v1 = Character::from_ints(&[0, 0, 1, 0]);
    let v2 = Character::from_ints(&[0, 0, 0, 1]);
    let w = Character::from_ints(&[0, -1, -1, -1]);
    let plus = |a: &Character, b: &Character| {
        Character::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect()).unwrap()
    };
    let pos = |c: &[i64]| CoeffConstraint::from_ints(c, true);
    let nonneg = |c: &[i64]| CoeffConstraint::from_ints(c, false);
    let pair = |label: &str, a: Character, b: Character, cs: Vec<CoeffConstraint>| ConeSpec {
        label: label.to_string(),
        generators: vec![a, b],
        constraints: cs,
    };
    Ok(ConeFamily::new(vec![
        ConeSpec::ray("v-1", vm1.clone()),
        ConeSpec::ray("v0", v0.clone()),
        ConeSpec::ray("v1", v1.clone()),
        ConeSpec::ray("v2", v2.clone()),
        ConeSpec::ray("w", w.clone()),
        pair("a*v-1 + b*v1, a,b > 0", vm1.clone(), v1, vec![pos(&[1, 0]), pos(&[0, 1])]),
        pair(
            "a*(v-1 + v0) + b*v2, b >= a > 0",
            plus(&vm1, &v0),
            v2.clone(),
            vec![pos(&[1, 0]), nonneg(&[-1, 1])],
        ),
        pair(
            "a*(v-1 + v2) + b*v0, b >= a > 0",
            plus(&vm1, &v2),
            v0.clone(),
            vec![pos(&[1, 0]), nonneg(&[-1, 1])],
        ),
        pair(
            "a*v-1 + b*(v0 + v2), a >= b > 0",
            vm1.clone(),
            plus(&v0, &v2),
            vec![pos(&[0, 1]), nonneg(&[1, -1])],
        ),
        pair("a*v-1 + b*w, a,b > 0", vm1, w, vec![pos(&[1, 0]), pos(&[0, 1])]),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    /// Coordinates range over `-radius..=radius`.
    pub radius: i64,
    /// Cap on the number of classes examined.
    pub max_classes: Option<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { radius: 2, max_classes: Some(200) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridEntry {
    pub class: Character,
    /// Index of the first cone of the family containing the class.
    pub family_cone: Option<usize>,
    pub verdict: SigmaVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anomaly {
    /// Hard failure: a witness was found for a class of the complement.
    WitnessInsideFamily { class: Character, cone: usize },
    NoWitnessOutsideFamily { class: Character },
}

impl fmt::Display for Anomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anomaly::WitnessInsideFamily { class, cone } => {
                write!(f, "witness found for {} inside complement cone {}", class, cone)
            }
            Anomaly::NoWitnessOutsideFamily { class } => write!(f, "no witness for {} outside the complement", class),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBReport {
    pub entries: Vec<GridEntry>,
    pub anomalies: Vec<Anomaly>,
}

impl TheoremBReport {
    pub fn consistent(&self) -> bool {
        !self.anomalies.iter().any(|a| matches!(a, Anomaly::WitnessInsideFamily { .. }))
    }
}

/// Primitive integer classes with coordinates in `-r..=r`, in a fixed order:
/// classes of the family first, then those inside `{-1,0,1}^4`, then the
/// rest. A cap keeps the first two groups and thins the third evenly.
pub fn theorem_b_grid(family: &ConeFamily, grid: GridSpec) -> Vec<(Character, Option<usize>)> {
    let r = grid.radius;
    let side = (2 * r + 1) as usize;
    let mut classes = Vec::new();
    for idx in 0..side.pow(4) {
        let mut rest = idx;
        let mut v = [0i64; 4];
        for c in v.iter_mut() {
            *c = (rest % side) as i64 - r;
            rest /= side;
        }
        v.reverse();
        if v.iter().all(|&x| x == 0) || v.iter().fold(0, |g, &x| g.gcd(&x)) != 1 {
            continue;
        }
        classes.push(Character::from_ints(&v));
    }
    let tagged: Vec<(Character, Option<usize>)> = classes
        .par_iter()
        .map(|c| (c.clone(), family.find_class(c)))
        .collect();
    let small = |c: &Character| c.coords().iter().all(|x| x.abs() <= BigRational::one());
    let mut first: Vec<_> = tagged.iter().filter(|(_, f)| f.is_some()).cloned().collect();
    first.extend(tagged.iter().filter(|(c, f)| f.is_none() && small(c)).cloned());
    let rest: Vec<_> = tagged.iter().filter(|(c, f)| f.is_none() && !small(c)).cloned().collect();
    match grid.max_classes {
        None => {
            first.extend(rest);
            first
        }
        Some(cap) => {
            first.truncate(cap);
            let room = cap - first.len();
            if room > 0 && !rest.is_empty() {
                let take = room.min(rest.len());
                first.extend((0..take).map(|i| rest[i * rest.len() / take].clone()));
            }
            first
        }
    }
}

/// Runs the witness search on a grid of classes for the `G₂` setup and
/// compares the outcomes with the complement data.
#[allow(non_snake_case)]
pub fn verify_theoremB(setup: &Setup, grid: GridSpec, bounds: SearchBounds) -> Result<TheoremBReport> {
    if *setup != Setup::g_n(2)? {
        return Err(Error::Precondition("the verifier runs on the G_2 setup only".into()));
    }
    let family = sigma_c_theoremB_data(2)?;
    let searcher = WitnessSearcher::new(setup, bounds);
    let grid = theorem_b_grid(&family, grid);
    let entries = grid
        .par_iter()
        .map(|(c, f)| Ok(GridEntry { class: c.clone(), family_cone: *f, verdict: searcher.search(c)? }))
        .collect::<Result<Vec<_>>>()?;
    let anomalies = entries
        .iter()
        .filter_map(|e| match (e.family_cone, e.verdict.is_in_sigma()) {
            (Some(cone), true) => Some(Anomaly::WitnessInsideFamily { class: e.class.clone(), cone }),
            (None, false) => Some(Anomaly::NoWitnessOutsideFamily { class: e.class.clone() }),
            _ => None,
        })
        .collect();
    Ok(TheoremBReport { entries, anomalies })
}
