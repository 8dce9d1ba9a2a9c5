use crate::error::{Error, Result};
use crate::exactalg::{LocalizedElement, Setup};
use crate::valuations::{val_eval, ValuationId};

/// `⟨x₀, …, x_d, t | t⁻¹ xᵢ t = xᵢ^k, [xᵢ, xⱼ] = 1⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnnPresentation {
    pub generators: usize,
    pub relation_exponent: u64,
}

impl HnnPresentation {
    pub fn render(&self) -> String {
        let last = self.generators - 1;
        format!(
            "<x0, ..., x{}, t | t^-1 xi t = xi^{}, [xi, xj] = 1>",
            last, self.relation_exponent
        )
    }
}

/// The stabilizer of the vertex with `g_v = 1` for `v ≠ w` and `g_w = q_w^{s_w}`,
/// through its intersection with the localized ring.
#[derive(Clone, Debug)]
pub struct StabilizerData {
    pub s_w: i64,
    pub d: i64,
    pub rank: i64,
    /// `x^{j+β} (f₁⋯fₙ)^β` for `0 ≤ j ≤ d`, a basis over `ℤ[1/k]`.
    pub basis: Vec<LocalizedElement>,
    /// Only for a single block.
    pub hnn: Option<HnnPresentation>,
}

impl StabilizerData {
    /// Whether every basis element satisfies `vᵢ(e) ≥ β` and `w(e) ≥ s_w + β`.
    pub fn membership_ok(&self) -> Result<bool> {
        let Some(first) = self.basis.first() else { return Ok(true) };
        let setup = first.setup();
        let beta = setup.beta();
        for e in &self.basis {
            for i in 0..setup.polys().len() {
                if val_eval(ValuationId::FAdic(i), e)? < beta {
                    return Ok(false);
                }
            }
            if val_eval(ValuationId::Degree, e)? < self.s_w + beta {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn stabilizer_data(setup: &Setup, s_w: i64) -> Result<StabilizerData> {
    let beta = setup.beta();
    if s_w < 0 || s_w >= -beta {
        return Err(Error::Precondition(format!("s_w = {} outside [0, {})", s_w, -beta)));
    }
    let d = -(s_w + beta * setup.degree_sum());
    let n1 = setup.polys().len();
    let basis = (0..=d)
        .map(|j| {
            let mut e = LocalizedElement::f_power(setup, 0, j + beta);
            for i in 1..n1 {
                e = &e * &LocalizedElement::f_power(setup, i, beta);
            }
            e
        })
        .collect();
    let hnn = (setup.block_count() == 1).then(|| HnnPresentation { generators: (d + 1) as usize, relation_exponent: setup.k() });
    Ok(StabilizerData { s_w, d, rank: d + 1, basis, hnn })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_ranks() {
        let s = Setup::g_n(2).unwrap();
        let st = stabilizer_data(&s, 0).unwrap();
        assert_eq!((st.d, st.rank, st.basis.len()), (15, 16, 16));
        assert!(st.membership_ok().unwrap());
        assert_eq!(st.hnn.as_ref().unwrap().relation_exponent, 2);
        assert_eq!(st.hnn.unwrap().render(), "<x0, ..., x15, t | t^-1 xi t = xi^2, [xi, xj] = 1>");
        assert_eq!(stabilizer_data(&s, 3).unwrap().d, 12);
        assert!(stabilizer_data(&s, 5).is_err());
        assert!(stabilizer_data(&s, -1).is_err());
    }
}
