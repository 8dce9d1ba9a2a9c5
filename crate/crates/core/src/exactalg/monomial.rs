use std::fmt;

use super::localized::LocalizedElement;
use super::setup::Setup;
use crate::error::{Error, Result};

/// Element `q_{-1}^{e_{-1}} q_0^{e_0} ⋯` of the free abelian group `Q`,
/// stored as its exponent vector on the basis of [`Setup::basis_names`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    exps: Vec<i64>,
}

impl QMonomial {
    pub fn new(exps: Vec<i64>) -> Self {
        QMonomial { exps }
    }

    pub fn identity(rank: usize) -> Self {
        QMonomial { exps: vec![0; rank] }
    }

    /// The basis element with index `idx`, raised to `e`.
    pub fn generator(rank: usize, idx: usize, e: i64) -> Self {
        let mut exps = vec![0; rank];
        exps[idx] = e;
        QMonomial { exps }
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> QMonomial {
        QMonomial { exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn pow(&self, e: i64) -> QMonomial {
        QMonomial { exps: self.exps.iter().map(|x| x * e).collect() }
    }

    /// Largest absolute exponent.
    pub fn max_abs_exp(&self) -> i64 {
        self.exps.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// Human-readable product over the given basis names.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{}^{}", n, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMonomial{:?}", self.exps)
    }
}

fn check_rank(q: &QMonomial, setup: &Setup) -> Result<()> {
    if q.rank() != setup.q_rank() {
        return Err(Error::Dimension { expected: setup.q_rank(), got: q.rank() });
    }
    Ok(())
}

/// The unit `k^{e_{-1}} Π fᵢ^{eᵢ}` of the localized ring; generators of
/// blocks beyond the designated one map to 1.
pub fn monomial_image(q: &QMonomial, setup: &Setup) -> Result<LocalizedElement> {
    check_rank(q, setup)?;
    let n1 = setup.polys().len();
    let exps = q.exps[1..1 + n1].to_vec();
    Ok(LocalizedElement::from_k_power(
        setup,
        super::poly::IntPolynomial::one(),
        exps,
        q.exps[0],
    ))
}

/// `a ∘ q = monomial_image(q) · a`.
pub fn module_action(a: &LocalizedElement, q: &QMonomial) -> Result<LocalizedElement> {
    let img = monomial_image(q, a.setup())?;
    a.checked_mul(&img)
}

/// Element `q·a` of the split extension `G = A ⋊ Q`, written `(a, q)`.
///
/// Multiplication follows `(a, q)(b, p) = (a∘p + b, qp)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    pub a: LocalizedElement,
    pub q: QMonomial,
}

impl GroupElement {
    pub fn new(a: LocalizedElement, q: QMonomial) -> Self {
        GroupElement { a, q }
    }

    pub fn identity(setup: &Setup) -> Self {
        GroupElement {
            a: LocalizedElement::zero(setup),
            q: QMonomial::identity(setup.q_rank()),
        }
    }

    pub fn from_module(a: LocalizedElement) -> Self {
        let rank = a.setup().q_rank();
        GroupElement { a, q: QMonomial::identity(rank) }
    }

    pub fn from_q(setup: &Setup, q: QMonomial) -> Self {
        GroupElement { a: LocalizedElement::zero(setup), q }
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let moved = module_action(&self.a, &other.q)?;
        Ok(GroupElement {
            a: moved.checked_add(&other.a)?,
            q: self.q.mul(&other.q),
        })
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let qi = self.q.inv();
        Ok(GroupElement { a: -&module_action(&self.a, &qi)?, q: qi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::IntPolynomial;

    #[test]
    fn images() {
        let s = Setup::g_n(2).unwrap();
        let qk = QMonomial::generator(4, 0, 1);
        assert_eq!(monomial_image(&qk, &s).unwrap(), LocalizedElement::from_int(&s, 2));
        let q = QMonomial::new(vec![0, -1, 1, 0]);
        let expected = &LocalizedElement::f_power(&s, 1, 1) * &LocalizedElement::f_power(&s, 0, -1);
        assert_eq!(monomial_image(&q, &s).unwrap(), expected);
        assert!(monomial_image(&QMonomial::identity(4), &s).unwrap().is_one());
        assert!(monomial_image(&QMonomial::identity(3), &s).is_err());
    }

    #[test]
    fn action_examples() {
        let s = Setup::g_n(2).unwrap();
        let a = LocalizedElement::from_poly(&s, IntPolynomial::from_i64s(&[3, 0, 1]));
        let x = LocalizedElement::from_poly(&s, IntPolynomial::x());
        assert_eq!(module_action(&a, &QMonomial::generator(4, 1, 1)).unwrap(), &x * &a);
        assert_eq!(
            module_action(&a, &QMonomial::generator(4, 0, 1)).unwrap(),
            a.scale_int(&2.into())
        );
        let one = LocalizedElement::one(&s);
        assert_eq!(
            module_action(&one, &QMonomial::generator(4, 2, -1)).unwrap(),
            LocalizedElement::f_power(&s, 1, -1)
        );
    }

    #[test]
    fn group_law() {
        let s = Setup::g_n(2).unwrap();
        let g = GroupElement::new(
            LocalizedElement::from_poly(&s, IntPolynomial::linear(3)),
            QMonomial::new(vec![1, -1, 0, 2]),
        );
        let h = GroupElement::new(LocalizedElement::f_power(&s, 2, -1), QMonomial::new(vec![0, 2, 1, 0]));
        let e = GroupElement::identity(&s);
        assert_eq!(g.compose(&e).unwrap(), g);
        assert_eq!(g.compose(&g.inverse().unwrap()).unwrap(), e);
        // associativity on one triple
        let l = g.compose(&h).unwrap().compose(&g).unwrap();
        let r = g.compose(&h.compose(&g).unwrap()).unwrap();
        assert_eq!(l, r);
    }
}
