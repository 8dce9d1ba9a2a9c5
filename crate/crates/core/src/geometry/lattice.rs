use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{QMonomial, Setup};

/// Integer point indexed by `V` (`w` first, then `v₀ … vₙ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }
}

/// `s_w + Σ dᵢ s_{vᵢ}`, the form bounding ceilings of points of `W`.
pub fn bound_form(setup: &Setup, coords: &[i64]) -> i64 {
    coords[0]
        + coords[1..]
            .iter()
            .zip(setup.degrees())
            .map(|(s, d)| s * d as i64)
            .sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WProjection {
    pub in_w: bool,
    pub ceil: LatticePoint,
    pub bound_value: i64,
}

fn check_len(setup: &Setup, len: usize) -> Result<()> {
    let expected = setup.polys().len() + 1;
    if len != expected {
        return Err(Error::Dimension { expected, got: len });
    }
    Ok(())
}

/// Membership in `W: y_w + Σ dᵢ yᵢ = 0`, the coordinatewise ceiling, and the
/// bound form at the ceiling.
pub fn w_project_ceil(setup: &Setup, point: &[BigRational]) -> Result<WProjection> {
    check_len(setup, point.len())?;
    let degs = setup.degrees();
    let form = point[1..]
        .iter()
        .zip(&degs)
        .fold(point[0].clone(), |acc, (y, &d)| acc + y * BigRational::from_integer(BigInt::from(d)));
    let ceil = point
        .iter()
        .map(|y| y.ceil().to_integer().to_i64())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Precondition("coordinate out of range".into()))?;
    let bound_value = bound_form(setup, &ceil);
    Ok(WProjection { in_w: form.is_zero(), ceil: LatticePoint::new(ceil), bound_value })
}

/// `{(s, 0, …, 0) : 0 ≤ s < 1 + Σ dᵢ}`.
pub fn orbit_reps(setup: &Setup) -> Vec<LatticePoint> {
    let n1 = setup.polys().len();
    (0..1 + setup.degree_sum())
        .map(|s| {
            let mut c = vec![0; n1 + 1];
            c[0] = s;
            LatticePoint::new(c)
        })
        .collect()
}

/// `Π qᵢ^{eᵢ}` translates a point by `(w(q), v₀(q), …, vₙ(q)) = (−Σ dᵢeᵢ, e₀, …, eₙ)`.
pub fn translate(setup: &Setup, p: &LatticePoint, q: &QMonomial) -> Result<LatticePoint> {
    check_len(setup, p.coords.len())?;
    let n1 = setup.polys().len();
    let e = &q.exps()[1..1 + n1];
    let mut c = p.coords.clone();
    c[0] -= e.iter().zip(setup.degrees()).map(|(x, d)| x * d as i64).sum::<i64>();
    for i in 0..n1 {
        c[i + 1] += e[i];
    }
    Ok(LatticePoint::new(c))
}

/// Moves a point of `[[W]]` to its orbit representative; returns the
/// representative and the translating element.
pub fn reduce(setup: &Setup, p: &LatticePoint) -> Result<(LatticePoint, QMonomial)> {
    check_len(setup, p.coords.len())?;
    let mut exps = vec![0; setup.q_rank()];
    for (i, s) in p.coords[1..].iter().enumerate() {
        exps[1 + i] = -s;
    }
    let q = QMonomial::new(exps);
    let rep = translate(setup, p, &q)?;
    if rep.coords[0] < 0 || rep.coords[0] >= 1 + setup.degree_sum() {
        return Err(Error::Precondition(format!("{:?} is not the ceiling of a point of W", p.coords)));
    }
    Ok((rep, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn projection_examples() {
        let s = Setup::g_n(2).unwrap();
        let p = w_project_ceil(&s, &[r(-3, 1), r(1, 1), r(1, 1), r(1, 1)]).unwrap();
        assert!(p.in_w);
        let p = w_project_ceil(&s, &[r(-5, 2), r(1, 2), r(1, 1), r(1, 1)]).unwrap();
        assert!(p.in_w);
        assert_eq!(p.ceil.coords, vec![-2, 1, 1, 1]);
        assert_eq!(p.bound_value, 1);
        let p = w_project_ceil(&s, &vec![r(0, 1); 4]).unwrap();
        assert_eq!((p.in_w, p.bound_value), (true, 0));
        assert!(w_project_ceil(&s, &vec![r(0, 1); 3]).is_err());
    }

    #[test]
    fn orbits() {
        let s = Setup::g_n(2).unwrap();
        let reps = orbit_reps(&s);
        assert_eq!(reps.len(), 4);
        assert_eq!(reps[3].coords, vec![3, 0, 0, 0]);
        assert_eq!(orbit_reps(&Setup::linear(2, &[0, 1]).unwrap()).len(), 3);
        let (rep, q) = reduce(&s, &LatticePoint::new(vec![-3, 1, 1, 1])).unwrap();
        assert_eq!(rep.coords, vec![0, 0, 0, 0]);
        assert_eq!(q, QMonomial::new(vec![0, -1, -1, -1]));
        assert!(reduce(&s, &LatticePoint::new(vec![4, 0, 0, 0])).is_err());
    }
}
