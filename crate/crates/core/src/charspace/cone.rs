use num_rational::BigRational;
use num_traits::Zero;
use itertools::Itertools;
use rayon::prelude::*;

use super::character::{primitive_vectors, vector_sum, Character};
use super::fm::{rat, LinearConstraint, LinearSystem, Rel};
use crate::error::{Error, Result};

/// `coeffs · c > 0` (strict) or `≥ 0` over the generator coefficients `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffConstraint {
    pub coeffs: Vec<BigRational>,
    pub strict: bool,
}

impl CoeffConstraint {
    pub fn from_ints(coeffs: &[i64], strict: bool) -> Self {
        CoeffConstraint { coeffs: coeffs.iter().map(|&c| rat(c)).collect(), strict }
    }
}

/// The set of classes `[Σ cⱼ gⱼ]` with `c` satisfying the constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub label: String,
    pub generators: Vec<Character>,
    pub constraints: Vec<CoeffConstraint>,
}

impl ConeSpec {
    /// The single class `[v]`.
    pub fn ray(label: impl Into<String>, v: Character) -> Self {
        ConeSpec {
            label: label.into(),
            generators: vec![v],
            constraints: vec![CoeffConstraint::from_ints(&[1], true)],
        }
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    fn push_constraints(&self, sys: &mut LinearSystem, offset: usize) {
        let n = sys.nvars();
        for c in &self.constraints {
            let mut row = vec![BigRational::zero(); n];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[offset + j] = a.clone();
            }
            sys.push(LinearConstraint::homogeneous(row, if c.strict { Rel::Gt } else { Rel::Ge }));
        }
    }

    fn combine(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (g, c) in self.generators.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(g.coords()) {
                *o += x * c;
            }
        }
        out
    }

    /// Whether `[chi]` belongs to this family of classes.
    pub fn contains_class(&self, chi: &Character) -> bool {
        let r = self.generators.len();
        let mut sys = LinearSystem::new(r + 1);
        self.push_constraints(&mut sys, 0);
        let mut t = vec![BigRational::zero(); r + 1];
        t[r] = rat(1);
        sys.push(LinearConstraint::homogeneous(t, Rel::Gt));
        for d in 0..self.dim() {
            let mut row: Vec<BigRational> = self.generators.iter().map(|g| g.coords()[d].clone()).collect();
            row.push(-chi.coords()[d].clone());
            sys.push(LinearConstraint::homogeneous(row, Rel::Eq));
        }
        sys.is_feasible()
    }

    /// A deterministic member of the family, as a primitive integer vector.
    pub fn representative(&self) -> Result<Character> {
        let mut sys = LinearSystem::new(self.generators.len());
        self.push_constraints(&mut sys, 0);
        let c = sys
            .feasible_point()
            .ok_or_else(|| Error::Precondition(format!("cone {} is empty", self.label)))?;
        Ok(Character::new(self.combine(&c))?.primitive())
    }
}

/// A finite union of cones of classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFamily {
    pub cones: Vec<ConeSpec>,
}

impl ConeFamily {
    pub fn new(cones: Vec<ConeSpec>) -> Self {
        ConeFamily { cones }
    }

    /// Index of the first cone containing `[chi]`.
    pub fn find_class(&self, chi: &Character) -> Option<usize> {
        self.cones.iter().position(|c| c.contains_class(chi))
    }

    pub fn contains_class(&self, chi: &Character) -> bool {
        self.find_class(chi).is_some()
    }
}

/// Outcome of a tameness check; the certificate lists `m` characters summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameResult {
    pub m: usize,
    pub tame: bool,
    pub cone_indices: Option<Vec<usize>>,
    pub certificate: Option<Vec<Character>>,
}

/// Whether characters drawn from the given cones can sum to zero.
fn zero_sum_point(family: &ConeFamily, idx: &[usize]) -> Option<Vec<Character>> {
    let cones: Vec<&ConeSpec> = idx.iter().map(|&i| &family.cones[i]).collect();
    let dim = cones[0].dim();
    let offsets: Vec<usize> = cones
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.generators.len();
            Some(o)
        })
        .collect();
    let nvars: usize = cones.iter().map(|c| c.generators.len()).sum();
    let mut sys = LinearSystem::new(nvars);
    for (c, &o) in cones.iter().zip(&offsets) {
        c.push_constraints(&mut sys, o);
    }
    for d in 0..dim {
        let mut row = vec![BigRational::zero(); nvars];
        for (c, &o) in cones.iter().zip(&offsets) {
            for (j, g) in c.generators.iter().enumerate() {
                row[o + j] = g.coords()[d].clone();
            }
        }
        sys.push(LinearConstraint::homogeneous(row, Rel::Eq));
    }
    let x = sys.feasible_point()?;
    let chars: Vec<Character> = cones
        .iter()
        .zip(&offsets)
        .map(|(c, &o)| Character::new(c.combine(&x[o..o + c.generators.len()])))
        .collect::<Result<_>>()
        .ok()?;
    Some(primitive_vectors(&chars))
}

/// `m`-tameness of a family: no `m` classes from it (repetition allowed)
/// have representatives summing to zero. Decided exactly per multiset of
/// cones; the reported certificate is the lexicographically first one.
pub fn m_tame_check(family: &ConeFamily, m: usize) -> TameResult {
    let combos = multisets(family.cones.len(), m);
    let hit = combos
        .par_iter()
        .find_map_first(|idx| zero_sum_point(family, idx).map(|c| (idx.clone(), c)));
    match hit {
        Some((idx, cert)) => TameResult { m, tame: false, cone_indices: Some(idx), certificate: Some(cert) },
        None => TameResult { m, tame: true, cone_indices: None, certificate: None },
    }
}

/// The literal-sum variant: each cone contributes its fixed
/// [`ConeSpec::representative`], and a multiset fails when the plain sum is zero.
pub fn plain_sum_check(family: &ConeFamily, m: usize) -> Result<TameResult> {
    let reps = family
        .cones
        .iter()
        .map(|c| c.representative())
        .collect::<Result<Vec<_>>>()?;
    for idx in multisets(family.cones.len(), m) {
        let chars: Vec<Character> = idx.iter().map(|&i| reps[i].clone()).collect();
        if vector_sum(&chars).iter().all(|x| x.is_zero()) {
            return Ok(TameResult { m, tame: false, cone_indices: Some(idx), certificate: Some(chars) });
        }
    }
    Ok(TameResult { m, tame: true, cone_indices: None, certificate: None })
}

/// Non-decreasing index tuples of length `m` over `0..n`, in lexicographic order.
pub(crate) fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n == 0 || m == 0 {
        return Vec::new();
    }
    (0..n).combinations_with_replacement(m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_enumeration() {
        let m = multisets(3, 2);
        assert_eq!(m, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
        assert_eq!(multisets(10, 4).len(), 715);
    }

    #[test]
    fn single_ray_is_always_tame() {
        let fam = ConeFamily::new(vec![ConeSpec::ray("v", Character::from_ints(&[1, -2, 0]))]);
        for m in 1..5 {
            assert!(m_tame_check(&fam, m).tame);
        }
    }

    #[test]
    fn antipodal_rays_are_not_two_tame() {
        let fam = ConeFamily::new(vec![
            ConeSpec::ray("a", Character::from_ints(&[1, 1])),
            ConeSpec::ray("b", Character::from_ints(&[-2, -2])),
        ]);
        assert!(m_tame_check(&fam, 1).tame);
        let r = m_tame_check(&fam, 2);
        assert!(!r.tame);
        assert_eq!(r.cone_indices, Some(vec![0, 1]));
        assert_eq!(
            r.certificate.unwrap(),
            vec![Character::from_ints(&[1, 1]), Character::from_ints(&[-1, -1])]
        );
    }

    #[test]
    fn cone_membership() {
        // k1 e1 + k2 e2 with k2 >= k1 > 0
        let cone = ConeSpec {
            label: "c".into(),
            generators: vec![Character::from_ints(&[1, 0]), Character::from_ints(&[0, 1])],
            constraints: vec![CoeffConstraint::from_ints(&[1, 0], true), CoeffConstraint::from_ints(&[-1, 1], false)],
        };
        assert!(cone.contains_class(&Character::from_ints(&[1, 1])));
        assert!(cone.contains_class(&Character::from_ints(&[2, 5])));
        assert!(!cone.contains_class(&Character::from_ints(&[2, 1])));
        assert!(!cone.contains_class(&Character::from_ints(&[0, 1])));
        assert_eq!(cone.representative().unwrap(), Character::from_ints(&[1, 1]));
    }
}
