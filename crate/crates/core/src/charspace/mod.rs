//! Characters of `Q`, open-halfspace tests, cone families and tameness.

mod character;
mod cone;
mod fm;

pub use character::{fmt_rational, primitive_vectors, vector_sum, Character};
pub use cone::{m_tame_check, plain_sum_check, CoeffConstraint, ConeFamily, ConeSpec, TameResult};
pub use fm::{LinearConstraint, LinearSystem, Rel};


use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{QMonomial, Setup};
use crate::valuations::{char_of_valuation, ValuationId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceResult {
    pub separated: bool,
    /// `u` with `u·v > 0` for every input vector, when one exists.
    pub witness: Option<Vec<BigRational>>,
}

/// Decides whether the vectors lie in a common open halfspace.
pub fn halfspace_test<C: AsRef<[BigRational]>>(chars: &[C]) -> Result<HalfspaceResult> {
    let Some(first) = chars.first() else {
        return Ok(HalfspaceResult { separated: true, witness: None });
    };
    let dim = first.as_ref().len();
    let mut sys = LinearSystem::new(dim);
    for c in chars {
        let c = c.as_ref();
        if c.len() != dim {
            return Err(Error::Dimension { expected: dim, got: c.len() });
        }
        if c.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroCharacter);
        }
        sys.push(LinearConstraint::homogeneous(c.to_vec(), Rel::Gt));
    }
    let witness = sys.feasible_point();
    Ok(HalfspaceResult { separated: witness.is_some(), witness })
}

/// A member of `V` with its chosen `q_v` (so that `v(q_v) = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VEntry {
    pub id: ValuationId,
    pub character: Character,
    pub q_v: QMonomial,
}

/// `[w, v₀, …, vₙ]` for the designated block.
#[allow(non_snake_case)]
pub fn build_V(setup: &Setup) -> Result<Vec<VEntry>> {
    let rank = setup.q_rank();
    let mut out = Vec::with_capacity(setup.n() + 2);
    out.push(VEntry {
        id: ValuationId::Degree,
        character: char_of_valuation(ValuationId::Degree, setup)?,
        q_v: QMonomial::generator(rank, setup.q_index(0, 0), -1),
    });
    for i in 0..setup.polys().len() {
        let id = ValuationId::FAdic(i);
        out.push(VEntry {
            id,
            character: char_of_valuation(id, setup)?,
            q_v: QMonomial::generator(rank, setup.q_index(0, i), 1),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn halfspace_examples() {
        let s = Setup::g_n(2).unwrap();
        let v = build_V(&s).unwrap();
        let chars: Vec<Character> = v.iter().map(|e| e.character.clone()).collect();
        let r = halfspace_test(&chars[1..]).unwrap();
        assert!(r.separated);
        let u = r.witness.unwrap();
        for c in &chars[1..] {
            assert!(c.dot(&u) > BigRational::zero());
        }
        assert!(!halfspace_test(&chars).unwrap().separated);
        let a = Character::from_ints(&[1, 2, -3]);
        assert!(!halfspace_test(&[a.clone(), a.neg()]).unwrap().separated);
        let zero = vec![BigRational::zero(); 3];
        assert_eq!(halfspace_test(&[zero]), Err(Error::ZeroCharacter));
    }

    #[test]
    fn v_of_g2() {
        let s = Setup::g_n(2).unwrap();
        let v = build_V(&s).unwrap();
        assert_eq!(v.len(), 4);
        assert!(vector_sum(&v.iter().map(|e| e.character.clone()).collect::<Vec<_>>())
            .iter()
            .all(|x| x.is_zero()));
        for e in &v {
            assert!(e.character.eval(&e.q_v).is_one());
            assert!(e.character.is_discrete());
        }
    }
}
