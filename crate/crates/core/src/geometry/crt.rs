use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::lattice::{bound_form, translate, LatticePoint};
use crate::error::{Error, Result};
use crate::exactalg::{monomial_image, IntPolynomial, LocalizedElement, QMonomial, RatPolynomial, Setup};
use crate::valuations::{val_eval, ValuationId};

/// Output of [`crt_normalize`], with the intermediate data of the reduced frame.
#[derive(Clone, Debug)]
pub struct CrtResult {
    /// The common label, in the caller's frame.
    pub a: LocalizedElement,
    /// `a'` with `a = a' F^{-t}` in the reduced frame.
    pub a_prime: RatPolynomial,
    pub t: u32,
    /// Heights after translation: `(s_w', 0, …, 0)`.
    pub reduced_heights: Vec<i64>,
    /// Labels after translation, with `a_w = 0`.
    pub reduced_labels: Vec<LocalizedElement>,
    /// The label solving the reduced problem.
    pub reduced_a: LocalizedElement,
}

/// `V` in the order used for labels and heights.
pub(crate) fn v_ids(setup: &Setup) -> Vec<ValuationId> {
    std::iter::once(ValuationId::Degree)
        .chain((0..setup.polys().len()).map(ValuationId::FAdic))
        .collect()
}

/// An element with no negative `fᵢ` powers as a polynomial over `ℤ[1/k]`.
fn as_poly(e: &LocalizedElement) -> RatPolynomial {
    let (num, den) = e.as_fraction();
    debug_assert!(den.is_constant());
    num.to_rational().scale(&BigRational::new(BigInt::one(), den.coeff(0)))
}

/// Finds `a` with `v(a − a_v) ≥ s_v + β` for every `v ∈ V`, so that the
/// vertices `(s_v, a_v)` of the trees `Γ_v` all have the common label `a`.
///
/// Labels and heights are indexed by `V` (`w` first). The data is first
/// translated so that `s_{vᵢ} = 0` and `a_w = 0`, then solved by the Chinese
/// remainder theorem modulo `fᵢ^t`, and finally translated back.
pub fn crt_normalize(setup: &Setup, labels: &[LocalizedElement], heights: &[i64]) -> Result<CrtResult> {
    let n1 = setup.polys().len();
    for len in [labels.len(), heights.len()] {
        if len != n1 + 1 {
            return Err(Error::Dimension { expected: n1 + 1, got: len });
        }
    }
    if labels.iter().any(|l| l.setup() != setup) {
        return Err(Error::SetupMismatch);
    }
    let beta = setup.beta();

    let mut qe = vec![0; setup.q_rank()];
    for i in 0..n1 {
        qe[1 + i] = -heights[1 + i];
    }
    let q = QMonomial::new(qe);
    let img = monomial_image(&q, setup)?;
    let reduced_heights = translate(setup, &LatticePoint::new(heights.to_vec()), &q)?.coords;
    let s_w = bound_form(setup, heights);
    debug_assert_eq!(s_w, reduced_heights[0]);
    if s_w + beta >= 0 {
        return Err(Error::Precondition(format!(
            "reduced height s_w = {} must be below {}",
            s_w, -beta
        )));
    }
    let moved: Vec<LocalizedElement> = labels.iter().map(|l| l.checked_mul(&img)).collect::<Result<_>>()?;
    let shift = moved[0].clone();
    let reduced_labels: Vec<LocalizedElement> =
        moved.iter().map(|l| l.checked_sub(&shift)).collect::<Result<_>>()?;

    let t = reduced_labels[1..]
        .iter()
        .filter(|l| !l.is_zero())
        .flat_map(|l| l.exps().iter().map(|e| -e))
        .max()
        .unwrap_or(0)
        .max(0) as u32;

    let f = setup.polys().iter().fold(IntPolynomial::one(), |acc, p| &acc * p);
    let ft = f.pow(t);
    let mut a_prime = RatPolynomial::zero();
    if t > 0 {
        let ftr = ft.to_rational();
        for (i, fi) in setup.polys().iter().enumerate() {
            let fit = fi.pow(t);
            let (ni, rem) = ft.div_rem_monic(&fit)?;
            debug_assert!(rem.is_zero());
            let (g, u, _) = ni.to_rational().ext_gcd(&fit.to_rational());
            if g.degree() != Some(0) {
                return Err(Error::Consistency(format!("f_{} is not coprime to the other factors", i)));
            }
            let scaled = reduced_labels[1 + i].checked_mul(&LocalizedElement::from_poly(setup, ft.clone()))?;
            let ri = as_poly(&scaled).rem(&fit.to_rational());
            let term = &(&ri * &ni.to_rational()) * &u;
            a_prime = &a_prime + &term;
        }
        a_prime = a_prime.rem(&ftr);
    }
    let f_inv_t = (0..n1).fold(LocalizedElement::one(setup), |acc, i| &acc * &LocalizedElement::f_power(setup, i, -(t as i64)));
    let reduced_a = LocalizedElement::from_rational_poly(setup, &a_prime)?.checked_mul(&f_inv_t)?;
    let a = reduced_a.checked_add(&shift)?.checked_mul(&img.inverse()?)?;

    if t > 0 && a_prime.degree().is_some_and(|d| d >= ft.degree().unwrap()) {
        return Err(Error::Consistency("deg a' is not below deg F^t".into()));
    }
    for (idx, v) in v_ids(setup).into_iter().enumerate() {
        let val = val_eval(v, &a.checked_sub(&labels[idx])?)?;
        if val < heights[idx] + beta {
            return Err(Error::Consistency(format!("{}(a - a_{}) = {} below {}", v, v, val, heights[idx] + beta)));
        }
    }
    Ok(CrtResult { a, a_prime, t, reduced_heights, reduced_labels, reduced_a })
}
