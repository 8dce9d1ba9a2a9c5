use std::sync::OnceLock;

use metab_core::charspace::{halfspace_test, m_tame_check, Character, ConeFamily, ConeSpec};
use metab_core::cohomology::{coinvariants_reduce, fixed_point_order, fixed_point_order_brute, fixed_point_order_closed};
use metab_core::exactalg::{
    module_action, monomial_image, multiplicity, poly_resultant, GroupElement, IntPolynomial, LocalizedElement, QMonomial, Setup,
};
use metab_core::geometry::{act_on_vertex, crt_normalize, w_project_ceil, TreeContext, TreeVertex};
use metab_core::valuations::{val_eval, ExtInt, ValuationId};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn g2() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| Setup::g_n(2).unwrap())
}

fn poly_strategy(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-bound..=bound, 1..=max_deg + 1).prop_map(|c| IntPolynomial::from_i64s(&c))
}

fn elem() -> impl Strategy<Value = LocalizedElement> {
    (poly_strategy(3, 6), prop::collection::vec(-2i64..=2, 3), -2i64..=2)
        .prop_map(|(p, e, k)| LocalizedElement::from_parts(g2(), p, e, vec![k]))
}

fn monomial(bound: i64) -> impl Strategy<Value = QMonomial> {
    prop::collection::vec(-bound..=bound, 4).prop_map(QMonomial::new)
}

fn v_ids() -> Vec<ValuationId> {
    vec![ValuationId::Degree, ValuationId::FAdic(0), ValuationId::FAdic(1), ValuationId::FAdic(2)]
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(e in elem()) {
        let again = LocalizedElement::from_parts(g2(), e.numer().clone(), e.exps().to_vec(), e.kexps().to_vec());
        prop_assert_eq!(again, e);
    }

    #[test]
    fn ring_axioms(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LocalizedElement::one(g2()), a.clone());
    }

    #[test]
    fn units_invert(e in prop::collection::vec(-3i64..=3, 3), k in -3i64..=3, sign in prop::bool::ANY) {
        let c = if sign { 1 } else { -1 };
        let u = LocalizedElement::from_parts(g2(), IntPolynomial::from_i64s(&[c]), e, vec![k]);
        prop_assert!(u.is_unit());
        prop_assert!((&u * &u.inverse().unwrap()).is_one());
    }

    #[test]
    fn multiplicity_is_additive(g in poly_strategy(3, 5), h in poly_strategy(3, 5), i in 0usize..3) {
        prop_assume!(!g.is_zero() && !h.is_zero());
        let f = &g2().polys()[i];
        let m = |p: &IntPolynomial| multiplicity(f, p).unwrap().finite().unwrap();
        prop_assert_eq!(m(&(&g * &h)), m(&g) + m(&h));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in poly_strategy(3, 4), g in poly_strategy(3, 4)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assume!(!f.is_constant() || !g.is_constant());
        let res = poly_resultant(&f, &g).unwrap();
        prop_assert_eq!(res.is_zero(), !f.gcd(&g).is_constant());
    }

    #[test]
    fn tau_is_injective(p in monomial(3), q in monomial(3)) {
        let (a, b) = (monomial_image(&p, g2()).unwrap(), monomial_image(&q, g2()).unwrap());
        prop_assert_eq!(a == b, p == q);
    }

    #[test]
    fn valuation_axioms(a in elem(), b in elem()) {
        for v in v_ids() {
            let (va, vb) = (val_eval(v, &a).unwrap(), val_eval(v, &b).unwrap());
            let prod = val_eval(v, &(&a * &b)).unwrap();
            let expected = match (va, vb) {
                (ExtInt::Finite(x), ExtInt::Finite(y)) => ExtInt::Finite(x + y),
                _ => ExtInt::Infinity,
            };
            prop_assert_eq!(prod, expected);
            prop_assert!(val_eval(v, &(&a + &b)).unwrap() >= va.min(vb));
        }
        prop_assert_eq!(val_eval(ValuationId::Degree, &LocalizedElement::one(g2())).unwrap(), ExtInt::Finite(0));
    }

    #[test]
    fn halfspace_is_scale_invariant(
        vs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..5),
        scales in prop::collection::vec(1i64..=7, 5),
    ) {
        prop_assume!(vs.iter().all(|v| v.iter().any(|&x| x != 0)));
        let chars: Vec<Character> = vs.iter().map(|v| Character::from_ints(v)).collect();
        let scaled: Vec<Character> = chars
            .iter()
            .zip(&scales)
            .map(|(c, &s)| c.scale(&r(s, 3)).unwrap())
            .collect();
        let a = halfspace_test(&chars.iter().map(|c| c.coords().to_vec()).collect::<Vec<_>>()).unwrap();
        let b = halfspace_test(&scaled.iter().map(|c| c.coords().to_vec()).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(a.separated, b.separated);
        if let Some(u) = a.witness {
            for c in &chars {
                prop_assert!(c.dot(&u) > BigRational::zero());
            }
        }
    }

    #[test]
    fn tameness_is_monotone(rays in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 1..5)) {
        prop_assume!(rays.iter().all(|v| v.iter().any(|&x| x != 0)));
        let fam = ConeFamily::new(
            rays.iter().map(|v| ConeSpec::ray("r", Character::from_ints(v))).collect(),
        );
        let tame: Vec<bool> = (1..=4).map(|m| m_tame_check(&fam, m).tame).collect();
        for w in tame.windows(2) {
            prop_assert!(w[0] || !w[1]);
        }
    }

    #[test]
    fn vertex_equality_is_an_equivalence(
        a in elem(), b in elem(), c in elem(), z in -2i64..=6, i in 0usize..4,
    ) {
        let ctx = TreeContext::new(g2(), v_ids()[i]).unwrap();
        let (x, y, w) = (
            TreeVertex { z, label: a },
            TreeVertex { z, label: b },
            TreeVertex { z, label: c },
        );
        prop_assert!(ctx.same_vertex(&x, &x).unwrap());
        prop_assert_eq!(ctx.same_vertex(&x, &y).unwrap(), ctx.same_vertex(&y, &x).unwrap());
        if ctx.same_vertex(&x, &y).unwrap() && ctx.same_vertex(&y, &w).unwrap() {
            prop_assert!(ctx.same_vertex(&x, &w).unwrap());
        }
    }

    #[test]
    fn action_respects_equality_and_heights(
        a in elem(), d in elem(), b in elem(), q in monomial(2), z in 0i64..=6, i in 0usize..4,
    ) {
        let ctx = TreeContext::new(g2(), v_ids()[i]).unwrap();
        let x = TreeVertex { z, label: a };
        // `d` scaled deep enough into `A_v` gives a second label for the same vertex
        let shift = monomial_image(&ctx.q_v.pow(z - ctx.beta + 12), g2()).unwrap();
        let y = TreeVertex { z, label: &x.label + &(&d * &shift) };
        prop_assume!(ctx.same_vertex(&x, &y).unwrap());
        let g = GroupElement::new(b, q.clone());
        let (xg, yg) = (act_on_vertex(&ctx, &x, &g).unwrap(), act_on_vertex(&ctx, &y, &g).unwrap());
        prop_assert_eq!(xg.z, z + ctx.height_of(&q).unwrap());
        prop_assert!(ctx.same_vertex(&xg, &yg).unwrap());
    }

    #[test]
    fn w_ceilings_are_bounded(nums in prop::collection::vec(-40i64..=40, 3), dens in prop::collection::vec(1i64..=9, 3)) {
        let ys: Vec<BigRational> = nums.iter().zip(&dens).map(|(&n, &d)| r(n, d)).collect();
        let yw = -ys.iter().fold(BigRational::zero(), |acc, y| acc + y);
        let mut point = vec![yw];
        point.extend(ys);
        let p = w_project_ceil(g2(), &point).unwrap();
        prop_assert!(p.in_w);
        prop_assert!(0 <= p.bound_value && p.bound_value < 1 + g2().degree_sum());
    }

    #[test]
    fn crt_postconditions(
        labels in prop::collection::vec(elem(), 4),
        sv in prop::collection::vec(-3i64..=3, 3),
        offset in -3i64..=4,
    ) {
        let s = g2();
        let mut heights = vec![offset - sv.iter().sum::<i64>()];
        heights.extend(&sv);
        let res = crt_normalize(s, &labels, &heights).unwrap();
        for (j, v) in v_ids().into_iter().enumerate() {
            let d = val_eval(v, &(&res.a - &labels[j])).unwrap();
            prop_assert!(d >= ExtInt::Finite(heights[j] + s.beta()));
        }
        let ft = s.degree_sum() * res.t as i64;
        prop_assert!(res.a_prime.degree().map_or(true, |d| (d as i64) < ft));
    }

    #[test]
    fn fixed_point_order_divides(k in 2u64..=60, values in prop::collection::vec(-30i64..=30, 0..=3)) {
        let o = fixed_point_order(k, &values).unwrap();
        prop_assert_eq!((k - 1) % o.order, 0);
        prop_assert_eq!(fixed_point_order_closed(k, &values).unwrap(), fixed_point_order_brute(k, &values).unwrap());
    }

    #[test]
    fn coinvariants_are_a_ring_map(a in elem(), b in elem()) {
        let red = |e: &LocalizedElement| coinvariants_reduce(g2(), e).unwrap();
        prop_assert_eq!(red(&(&a + &b)), red(&a).add(&red(&b)));
        prop_assert_eq!(red(&(&a * &b)), red(&a).mul(&red(&b)));
    }

    #[test]
    fn no_invariants_under_k(
        p in poly_strategy(3, 6), e in prop::collection::vec(-2i64..=2, 4), k in prop::collection::vec(-2i64..=2, 2),
    ) {
        static G3: OnceLock<Setup> = OnceLock::new();
        let s = G3.get_or_init(|| Setup::g_n(3).unwrap());
        let a = LocalizedElement::from_parts(s, p, e, k);
        prop_assume!(!a.is_zero());
        let moved = &module_action(&a, &QMonomial::generator(s.q_rank(), 0, 1)).unwrap() - &a;
        prop_assert_eq!(&moved, &a.scale_int(&BigInt::from(s.k() - 1)));
        prop_assert!(!moved.is_zero());
    }
}
