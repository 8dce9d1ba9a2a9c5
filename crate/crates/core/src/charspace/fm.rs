//! Exact rational feasibility by Fourier–Motzkin elimination.
//!
//! Equalities are removed first by substitution; inequalities (strict or
//! not) are then eliminated one variable at a time. A feasible point is
//! rebuilt by back-substitution, preferring the integer closest to zero in
//! each admissible interval so that certificates stay small.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rel {
    /// `a·x > b`
    Gt,
    /// `a·x ≥ b`
    Ge,
    /// `a·x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<BigRational>, rel: Rel, rhs: BigRational) -> Self {
        LinearConstraint { coeffs, rel, rhs }
    }

    /// Homogeneous constraint `a·x rel 0`.
    pub fn homogeneous(coeffs: Vec<BigRational>, rel: Rel) -> Self {
        Self::new(coeffs, rel, BigRational::zero())
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// For a trivial constraint, whether `0 rel rhs` holds.
    fn trivially_holds(&self) -> bool {
        match self.rel {
            Rel::Gt => self.rhs.is_negative(),
            Rel::Ge => !self.rhs.is_positive(),
            Rel::Eq => self.rhs.is_zero(),
        }
    }

    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(c) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = c.abs().recip();
            for a in self.coeffs.iter_mut() {
                *a *= &s;
            }
            self.rhs *= &s;
        }
        self
    }

    fn eval(&self, x: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        let lhs = self.eval(x);
        match self.rel {
            Rel::Gt => lhs > self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

/// `x_var = Σ coeffs·x + constant`.
struct Substitution {
    var: usize,
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    nvars: usize,
    constraints: Vec<LinearConstraint>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, constraints: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn push(&mut self, c: LinearConstraint) {
        assert_eq!(c.coeffs.len(), self.nvars, "constraint width");
        self.constraints.push(c);
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// A rational point satisfying every constraint, or `None` if infeasible.
    pub fn feasible_point(&self) -> Option<Vec<BigRational>> {
        let n = self.nvars;
        let mut subs: Vec<Substitution> = Vec::new();
        let mut ineqs: Vec<LinearConstraint> = Vec::new();
        let mut eqs: Vec<LinearConstraint> = Vec::new();
        for c in &self.constraints {
            if c.rel == Rel::Eq {
                eqs.push(c.clone());
            } else {
                ineqs.push(c.clone());
            }
        }

        // equality substitution
        while let Some(eq) = eqs.pop() {
            let pivot = match eq.coeffs.iter().position(|c| !c.is_zero()) {
                Some(p) => p,
                None => {
                    if eq.trivially_holds() {
                        continue;
                    }
                    return None;
                }
            };
            let a = eq.coeffs[pivot].clone();
            let coeffs: Vec<BigRational> = eq
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i == pivot { BigRational::zero() } else { -c / &a })
                .collect();
            let sub = Substitution { var: pivot, coeffs, constant: &eq.rhs / &a };
            for c in eqs.iter_mut().chain(ineqs.iter_mut()) {
                apply_substitution(c, &sub);
            }
            subs.push(sub);
        }

        // inequality elimination
        let substituted: BTreeSet<usize> = subs.iter().map(|s| s.var).collect();
        let mut remaining: Vec<usize> = (0..n).filter(|v| !substituted.contains(v)).collect();
        let mut current = dedup(ineqs)?;
        let mut stages: Vec<(usize, Vec<LinearConstraint>)> = Vec::new();
        while !remaining.is_empty() {
            // eliminate the variable producing the fewest new constraints
            let (pos_idx, &var) = remaining
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| {
                    let p = current.iter().filter(|c| c.coeffs[v].is_positive()).count();
                    let q = current.iter().filter(|c| c.coeffs[v].is_negative()).count();
                    (p * q, v)
                })
                .unwrap();
            remaining.remove(pos_idx);
            let (involved, mut rest): (Vec<_>, Vec<_>) =
                current.into_iter().partition(|c| !c.coeffs[var].is_zero());
            let pos: Vec<&LinearConstraint> = involved.iter().filter(|c| c.coeffs[var].is_positive()).collect();
            let neg: Vec<&LinearConstraint> = involved.iter().filter(|c| c.coeffs[var].is_negative()).collect();
            for p in &pos {
                for q in &neg {
                    let ap = p.coeffs[var].clone();
                    let an = -q.coeffs[var].clone();
                    let coeffs = p
                        .coeffs
                        .iter()
                        .zip(&q.coeffs)
                        .map(|(x, y)| x * &an + y * &ap)
                        .collect();
                    let rel = if p.rel == Rel::Gt || q.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
                    rest.push(LinearConstraint::new(coeffs, rel, &p.rhs * &an + &q.rhs * &ap));
                }
            }
            stages.push((var, involved));
            current = dedup(rest)?;
        }
        if current.iter().any(|c| !c.trivially_holds()) {
            return None;
        }

        // back-substitution
        let mut x = vec![BigRational::zero(); n];
        for (var, cons) in stages.iter().rev() {
            x[*var] = pick_value(*var, cons, &x)?;
        }
        for s in subs.iter().rev() {
            let v = s
                .coeffs
                .iter()
                .zip(&x)
                .fold(s.constant.clone(), |acc, (a, b)| acc + a * b);
            x[s.var] = v;
        }
        debug_assert!(self.constraints.iter().all(|c| c.satisfied_by(&x)));
        Some(x)
    }
}

fn apply_substitution(c: &mut LinearConstraint, s: &Substitution) {
    let a = std::mem::replace(&mut c.coeffs[s.var], BigRational::zero());
    if a.is_zero() {
        return;
    }
    for (ci, si) in c.coeffs.iter_mut().zip(&s.coeffs) {
        *ci += &a * si;
    }
    c.rhs -= &a * &s.constant;
}

/// Drops duplicate and trivially true constraints; `None` on a trivially false one.
fn dedup(cs: Vec<LinearConstraint>) -> Option<Vec<LinearConstraint>> {
    let mut seen = BTreeSet::new();
    for c in cs {
        if c.is_trivial() {
            if !c.trivially_holds() {
                return None;
            }
            continue;
        }
        seen.insert(c.normalized());
    }
    Some(seen.into_iter().collect())
}

fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

/// Chooses a value for `var` given values of the later-eliminated variables.
fn pick_value(var: usize, cons: &[LinearConstraint], x: &[BigRational]) -> Option<BigRational> {
    let mut lower: Option<(BigRational, bool)> = None;
    let mut upper: Option<(BigRational, bool)> = None;
    for c in cons {
        let a = &c.coeffs[var];
        let others = c
            .coeffs
            .iter()
            .zip(x)
            .enumerate()
            .filter(|(i, _)| *i != var)
            .fold(BigRational::zero(), |acc, (_, (ci, xi))| acc + ci * xi);
        let bound = (&c.rhs - others) / a;
        let strict = c.rel == Rel::Gt;
        if a.is_positive() {
            let tighter = match &lower {
                None => true,
                Some((l, ls)) => bound > *l || (bound == *l && strict && !ls),
            };
            if tighter {
                lower = Some((bound, strict));
            }
        } else {
            let tighter = match &upper {
                None => true,
                Some((u, us)) => bound < *u || (bound == *u && strict && !us),
            };
            if tighter {
                upper = Some((bound, strict));
            }
        }
    }
    let lo_int = lower.as_ref().map(|(l, s)| if *s { floor(l) + 1 } else { ceil(l) });
    let hi_int = upper.as_ref().map(|(u, s)| if *s { ceil(u) - 1 } else { floor(u) });
    let zero = BigInt::zero();
    let choice = match (&lo_int, &hi_int) {
        (None, None) => Some(zero),
        (Some(l), None) => Some(if *l > zero { l.clone() } else { zero }),
        (None, Some(h)) => Some(if *h < zero { h.clone() } else { zero }),
        (Some(l), Some(h)) if l <= h => Some(zero.clamp(l.clone(), h.clone())),
        _ => None,
    };
    if let Some(c) = choice {
        return Some(BigRational::from_integer(c));
    }
    let (l, ls) = lower.unwrap();
    let (u, us) = upper.unwrap();
    if l < u {
        Some((l + u) / BigRational::from_integer(BigInt::from(2)))
    } else if l == u && !ls && !us {
        Some(l)
    } else {
        None
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
