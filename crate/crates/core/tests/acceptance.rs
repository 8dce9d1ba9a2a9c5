//! Acceptance run: one line per criterion, each checked against an oracle
//! computed independently of the library where one exists, and timed
//! against its budget.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use metab_core::charspace::{build_V, halfspace_test, m_tame_check, vector_sum, Character};
use metab_core::cohomology::{fixed_point_order, h2_theoremC};
use metab_core::exactalg::{
    monomial_image, BlockData, IntPolynomial, LocalizedElement, QMonomial, Setup, SetupData, Violation,
};
use metab_core::geometry::{
    crt_normalize, line_intersection_sup, orbit_reps, stabilizer_data, tree_ball, w_project_ceil, TreeContext,
    TreeVertex,
};
use metab_core::sigma::{sigma_c_theoremB_data, verify_theoremB, GridSpec, SearchBounds, SigmaVerdict};
use metab_core::valuations::{val_eval, ExtInt, ValuationId};
use metab_core::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn g2() -> Setup {
    Setup::g_n(2).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn v_ids(n: usize) -> Vec<ValuationId> {
    std::iter::once(ValuationId::Degree).chain((0..=n).map(ValuationId::FAdic)).collect()
}

/// Order of vanishing of `p` at `root`, by repeated synthetic division.
fn root_order(p: &IntPolynomial, root: &BigInt) -> Option<i64> {
    let mut c: Vec<BigInt> = p.coeffs().to_vec();
    if c.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut m = 0;
    loop {
        let mut q = vec![BigInt::zero(); c.len() - 1];
        let mut acc = BigInt::zero();
        for i in (0..c.len()).rev() {
            acc = &acc * root + &c[i];
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        if !acc.is_zero() {
            return Some(m);
        }
        c = q;
        m += 1;
    }
}

fn degree(p: &IntPolynomial) -> i64 {
    p.coeffs().iter().rposition(|c| !c.is_zero()).map_or(-1, |d| d as i64)
}

/// Valuations of `G_n` elements (all `fᵢ = x + i`) from the fraction `P / D`.
fn oracle_val(v: ValuationId, e: &LocalizedElement) -> ExtInt {
    if e.is_zero() {
        return ExtInt::Infinity;
    }
    let (num, den) = e.as_fraction();
    match v {
        ValuationId::Degree => ExtInt::Finite(degree(&den) - degree(&num)),
        ValuationId::FAdic(i) => {
            let root = BigInt::from(-(i as i64));
            ExtInt::Finite(root_order(&num, &root).unwrap() - root_order(&den, &root).unwrap())
        }
        ValuationId::PAdic(_) => unreachable!(),
    }
}

/// `τ(q)` evaluated at a rational point, for `G_n`.
fn eval_image(q: &QMonomial, k: u64, x: &BigRational) -> BigRational {
    let e = q.exps();
    let pw = |b: BigRational, n: i64| {
        let p = num_traits::pow(b.clone(), n.unsigned_abs() as usize);
        if n >= 0 {
            p
        } else {
            p.recip()
        }
    };
    let mut acc = pw(BigRational::from_integer(k.into()), e[0]);
    for (i, &ei) in e[1..].iter().enumerate() {
        acc *= pw(x + BigRational::from_integer(BigInt::from(i)), ei);
    }
    acc
}

fn random_elem(rng: &mut ChaCha8Rng, s: &Setup) -> LocalizedElement {
    let deg = rng.gen_range(0..=3);
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-6..=6)).collect();
    let exps: Vec<i64> = (0..s.polys().len()).map(|_| rng.gen_range(-2..=2)).collect();
    let kexps: Vec<i64> = s.k_factors().iter().map(|_| rng.gen_range(-2..=2)).collect();
    LocalizedElement::from_parts(s, IntPolynomial::from_i64s(&coeffs), exps, kexps)
}

fn violations(data: SetupData) -> Vec<Violation> {
    match Setup::validate(data) {
        Err(Error::InvalidSetup(v)) => v,
        _ => Vec::new(),
    }
}

fn block(polys: Vec<IntPolynomial>) -> Vec<BlockData> {
    vec![BlockData { polys, assert_irreducible: false }]
}

fn setup_validation() -> Outcome {
    for n in 2..=4u32 {
        let s = Setup::g_n(n).map_err(|e| format!("G_{} rejected: {}", n, e))?;
        let fact: u64 = (1..=n as u64).product();
        ensure!(s.k() == fact && s.polys().len() == n as usize + 1, "G_{} has wrong data", n);
    }
    let lin = IntPolynomial::linear;
    let v = violations(SetupData { k: 3, blocks: block(vec![lin(0), lin(2)]), free_rank: 1 });
    // Sylvester matrix of x and x + 2: [[1, 0], [1, 2]]
    let sylvester = BigInt::from(1 * 2 - 0 * 1);
    ensure!(
        matches!(&v[..], [Violation::NotCoprime { resultant, cofactor, .. }]
            if resultant.abs() == sylvester && cofactor.abs() == sylvester),
        "k=3, {{x, x+2}}: {:?}",
        v
    );
    let v = violations(SetupData {
        k: 2,
        blocks: block(vec![lin(0), IntPolynomial::from_i64s(&[1, 2])]),
        free_rank: 1,
    });
    ensure!(matches!(&v[..], [Violation::NotMonic { index: 1, .. }]), "non-monic: {:?}", v);
    let v = violations(SetupData { k: 2, blocks: block(vec![lin(1), lin(2)]), free_rank: 1 });
    ensure!(v.iter().any(|x| matches!(x, Violation::FirstNotX { .. })), "f0 != x: {:?}", v);
    Ok(())
}

fn valuation_axioms() -> Outcome {
    let s = g2();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (a, b) = (random_elem(&mut rng, &s), random_elem(&mut rng, &s));
        for v in v_ids(2) {
            let (va, vb) = (val_eval(v, &a).unwrap(), val_eval(v, &b).unwrap());
            ensure!(va == oracle_val(v, &a), "{} of {} disagrees with oracle", v, a);
            let prod = val_eval(v, &(&a * &b)).unwrap();
            let sum = val_eval(v, &(&a + &b)).unwrap();
            let expected = match (va, vb) {
                (ExtInt::Finite(x), ExtInt::Finite(y)) => ExtInt::Finite(x + y),
                _ => ExtInt::Infinity,
            };
            ensure!(prod == expected, "{}(ab) for {}, {}", v, a, b);
            ensure!(sum >= va.min(vb), "{}(a+b) for {}, {}", v, a, b);
        }
    }
    Ok(())
}

fn tau_injective() -> Outcome {
    let s = g2();
    // at x = 1/11 the image is 2^{e+2c} 3^c 13^d 11^{-(b+c+d)}, injective in (e, b, c, d)
    let pt = rat(1, 11);
    let mut images = HashSet::new();
    let mut values = HashSet::new();
    let mut count = 0;
    for idx in 0..7i64.pow(4) {
        let exps: Vec<i64> = (0..4).map(|j| (idx / 7i64.pow(j)) % 7 - 3).collect();
        let q = QMonomial::new(exps);
        images.insert(monomial_image(&q, &s).unwrap());
        values.insert(eval_image(&q, s.k(), &pt));
        count += 1;
    }
    ensure!(count == 2401, "box has {} monomials", count);
    ensure!(images.len() == count, "{} distinct images", images.len());
    ensure!(values.len() == count, "{} distinct evaluations", values.len());
    Ok(())
}

fn character_identities() -> Outcome {
    let v = build_V(&g2()).map_err(|e| e.to_string())?;
    ensure!(v.len() == 4, "|V| = {}", v.len());
    let chars: Vec<Character> = v.iter().map(|e| e.character.clone()).collect();
    ensure!(vector_sum(&chars).iter().all(|x| x.is_zero()), "w + v0 + v1 + v2 != 0");
    for skip in 0..4 {
        let sub: Vec<Vec<BigRational>> =
            (0..4).filter(|&i| i != skip).map(|i| chars[i].coords().to_vec()).collect();
        let r = halfspace_test(&sub).map_err(|e| e.to_string())?;
        let u = r.witness.ok_or("3-subset not separated")?;
        for c in &sub {
            let dot: BigRational = c.iter().zip(&u).map(|(a, b)| a * b).sum();
            ensure!(dot.is_positive(), "witness fails on a 3-subset");
        }
    }
    let all: Vec<Vec<BigRational>> = chars.iter().map(|c| c.coords().to_vec()).collect();
    ensure!(!halfspace_test(&all).map_err(|e| e.to_string())?.separated, "full V separated");
    Ok(())
}

fn tameness() -> Outcome {
    let fam = sigma_c_theoremB_data(2).map_err(|e| e.to_string())?;
    ensure!(m_tame_check(&fam, 3).tame, "family is not 3-tame");
    let r = m_tame_check(&fam, 4);
    ensure!(!r.tame, "family is 4-tame");
    let cert = r.certificate.ok_or("no certificate")?;
    ensure!(vector_sum(&cert).iter().all(|x| x.is_zero()), "certificate does not sum to zero");
    let v: Vec<Character> = build_V(&g2()).unwrap().into_iter().map(|e| e.character).collect();
    ensure!(
        cert.len() == 4 && v.iter().all(|c| cert.iter().any(|d| d.same_class(c))),
        "certificate {:?} is not V",
        cert
    );
    Ok(())
}

fn sigma_witnesses() -> Outcome {
    let s = g2();
    let bounds = SearchBounds::default();
    let report = verify_theoremB(&s, GridSpec::default(), bounds).map_err(|e| e.to_string())?;
    ensure!(report.entries.len() <= 200, "{} classes", report.entries.len());
    ensure!(report.anomalies.is_empty(), "anomalies: {:?}", report.anomalies);
    let points = [rat(1, 11), rat(3, 13), rat(-5, 7)];
    let mut inside = 0;
    for e in &report.entries {
        let class: Vec<i64> = e.class.coords().iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
        ensure!(class.iter().all(|c| c.abs() <= 2), "class {:?} outside the grid", class);
        match (&e.verdict, e.family_cone) {
            (SigmaVerdict::InSigma(w), None) => {
                for (c, q) in &w.terms {
                    let val: i64 = q.exps().iter().zip(&class).map(|(a, b)| a * b).sum();
                    ensure!(val > 0 && !c.is_zero(), "term of nonpositive value for {:?}", class);
                    ensure!(q.max_abs_exp() <= bounds.exp_box, "term outside the box");
                }
                ensure!(w.terms.len() <= bounds.support, "support too large");
                for x in &points {
                    let sum: BigRational = w
                        .terms
                        .iter()
                        .map(|(c, q)| eval_image(q, s.k(), x) * BigRational::from_integer(c.clone()))
                        .sum();
                    ensure!(sum.is_one(), "witness for {:?} does not act trivially", class);
                }
                if class == [-1, 0, 0, 0] {
                    let expected = vec![(BigInt::from(2), QMonomial::new(vec![-1, 0, 0, 0]))];
                    ensure!(w.terms == expected, "witness for k_-1 < 0 is {:?}", w.terms);
                }
            }
            (SigmaVerdict::NoWitnessWithinBounds(_), Some(_)) => inside += 1,
            _ => return Err(format!("verdict for {:?} contradicts the family", class)),
        }
    }
    ensure!(inside > 0, "no family classes in the grid");
    Ok(())
}

fn tree_structure() -> Outcome {
    let s = g2();
    let ctx = TreeContext::new(&s, ValuationId::FAdic(0)).map_err(|e| e.to_string())?;
    let (a, b) = (LocalizedElement::zero(&s), LocalizedElement::one(&s));
    let ball = tree_ball(&ctx, &[a.clone(), b.clone()], 0, 6).map_err(|e| e.to_string())?;
    ensure!(ball.vertices.len() == 8 && ball.edges.len() == 7, "{} vertices, {} edges", ball.vertices.len(), ball.edges.len());
    ensure!(ball.is_tree(), "ball is not a tree");
    let z0 = line_intersection_sup(&ctx, &a, &b).map_err(|e| e.to_string())?;
    ensure!(z0 == ExtInt::Finite(5), "z0 = {}", z0);
    for z in 0..=6 {
        // q_v^z a ~ q_v^z b iff (a − b)∘q_v^{-(β+z)} has no pole at x = 0
        let shifted = monomial_image(&ctx.q_v.pow(-(ctx.beta + z)), &s).unwrap();
        let (_, den) = (&(&a - &b) * &shifted).as_fraction();
        let brute = !den.coeff(0).is_zero();
        let rule = ExtInt::Finite(z) <= z0;
        let pred = ctx
            .same_vertex(&TreeVertex { z, label: a.clone() }, &TreeVertex { z, label: b.clone() })
            .unwrap();
        ensure!(brute == rule && rule == pred, "height {}: brute {}, rule {}, predicate {}", z, brute, rule, pred);
    }
    Ok(())
}

fn lattice_orbits() -> Outcome {
    let s = g2();
    let reps = orbit_reps(&s);
    let sw: Vec<i64> = reps.iter().map(|p| p.coords[0]).collect();
    ensure!(sw == [0, 1, 2, 3], "orbit reps {:?}", reps);
    ensure!(reps.iter().all(|p| p.coords[1..].iter().all(|&c| c == 0)), "reps off the w axis");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let ys: Vec<(i64, i64)> = (0..3).map(|_| (rng.gen_range(-60..=60), rng.gen_range(1..=12))).collect();
        let mut point = vec![-ys.iter().map(|&(n, d)| rat(n, d)).sum::<BigRational>()];
        point.extend(ys.iter().map(|&(n, d)| rat(n, d)));
        let p = w_project_ceil(&s, &point).map_err(|e| e.to_string())?;
        ensure!(p.in_w, "point not in W");
        let ceil = |r: &BigRational| -((-r.numer()).div_floor(r.denom()));
        let c: Vec<BigInt> = point.iter().map(ceil).collect();
        ensure!(c.iter().zip(&p.ceil.coords).all(|(a, &b)| *a == BigInt::from(b)), "ceiling mismatch");
        let bound: BigInt = c.iter().sum();
        ensure!(bound >= BigInt::zero() && bound < BigInt::from(4), "bound form {} at {:?}", bound, c);
    }
    Ok(())
}

fn crt_normalization() -> Outcome {
    let s = g2();
    let z = LocalizedElement::zero(&s);
    let inv_x = LocalizedElement::f_power(&s, 0, -1);
    let inv_x1 = LocalizedElement::f_power(&s, 1, -1);
    let r = crt_normalize(&s, &[z.clone(), inv_x.clone(), z.clone(), z.clone()], &[0; 4]).map_err(|e| e.to_string())?;
    ensure!(r.a == inv_x, "first instance gives {}", r.a);
    let r = crt_normalize(&s, &[z.clone(), inv_x.clone(), inv_x1.clone(), z.clone()], &[0; 4]).map_err(|e| e.to_string())?;
    // (2x + 1) / (x (x + 1))
    let expected = LocalizedElement::from_parts(&s, IntPolynomial::from_i64s(&[1, 2]), vec![-1, -1, 0], vec![0]);
    ensure!(r.a == expected, "second instance gives {}", r.a);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let labels: Vec<LocalizedElement> = (0..4).map(|_| random_elem(&mut rng, &s)).collect();
        let sv: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        let mut heights = vec![rng.gen_range(-3..=4) - sv.iter().sum::<i64>()];
        heights.extend(&sv);
        let r = crt_normalize(&s, &labels, &heights).map_err(|e| e.to_string())?;
        for (j, v) in v_ids(2).into_iter().enumerate() {
            let d = oracle_val(v, &(&r.reduced_a - &r.reduced_labels[j]));
            let ok = match v {
                ValuationId::Degree => d > ExtInt::Finite(0),
                _ => d >= ExtInt::Finite(0),
            };
            ensure!(ok, "{}(a - a_v) = {} for {:?}", v, d, heights);
            let orig = oracle_val(v, &(&r.a - &labels[j]));
            ensure!(orig >= ExtInt::Finite(heights[j] + s.beta()), "original frame fails at {}", v);
        }
        let ft = s.degree_sum() * r.t as i64;
        ensure!(r.a_prime.degree().map_or(true, |d| (d as i64) < ft), "deg a' >= deg F^t");
    }
    Ok(())
}

fn stabilizers() -> Outcome {
    let s = g2();
    let st = stabilizer_data(&s, 0).map_err(|e| e.to_string())?;
    ensure!(st.d == 15 && st.rank == 16 && st.basis.len() == 16, "d = {}, rank = {}", st.d, st.rank);
    for e in &st.basis {
        for v in v_ids(2) {
            let bound = if v == ValuationId::Degree { st.s_w + s.beta() } else { s.beta() };
            ensure!(oracle_val(v, e) >= ExtInt::Finite(bound), "{} fails {}", e, v);
        }
    }
    ensure!(st.membership_ok().unwrap(), "library membership check fails");
    let hnn = st.hnn.ok_or("no HNN data")?;
    ensure!(hnn.relation_exponent == s.k(), "relation exponent {}", hnn.relation_exponent);
    Ok(())
}

/// Order of the fixed points in `ℤ/N'`, `N'` the part of `k − 1` prime to
/// every value: the elements annihilated by every `vⱼ − 1`.
fn annihilator_oracle(k: u64, values: &[i64]) -> u64 {
    let mut n = k - 1;
    for &v in values {
        let a = v.unsigned_abs();
        while n.gcd(&a) > 1 {
            n /= n.gcd(&a);
        }
    }
    (0..n).filter(|&x| values.iter().all(|&v| ((v - 1) as i128 * x as i128).rem_euclid(n as i128) == 0)).count() as u64
}

fn cohomology() -> Outcome {
    for n in 2..=6 {
        let s = Setup::g_n(n).map_err(|e| e.to_string())?;
        let o = h2_theoremC(&s).map_err(|e| e.to_string())?;
        ensure!(o.is_trivial(), "H2 of G_{} has order {}", n, o);
    }
    let s = Setup::single_block(4, vec![IntPolynomial::x(), IntPolynomial::from_i64s(&[2, 1, 1])])
        .map_err(|e| e.to_string())?;
    let o = h2_theoremC(&s).map_err(|e| e.to_string())?;
    ensure!(o.order == 3, "k=4 example has order {}", o);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let k = rng.gen_range(2..=50u64);
        let values: Vec<i64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(-60..=60)).collect();
        let o = fixed_point_order(k, &values).map_err(|e| e.to_string())?;
        ensure!(o.order == annihilator_oracle(k, &values), "k = {}, values {:?}: {}", k, values, o);
        ensure!((k - 1) % o.order == 0, "order {} does not divide {}", o, k - 1);
    }
    Ok(())
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "setup validation", budget: secs(1), run: setup_validation },
        Criterion { name: "valuation axioms", budget: secs(10), run: valuation_axioms },
        Criterion { name: "monomial injectivity", budget: secs(30), run: tau_injective },
        Criterion { name: "character identities", budget: secs(1), run: character_identities },
        Criterion { name: "tameness", budget: secs(30), run: tameness },
        Criterion { name: "sigma witnesses", budget: secs(300), run: sigma_witnesses },
        Criterion { name: "tree structure", budget: secs(1), run: tree_structure },
        Criterion { name: "lattice orbits", budget: secs(5), run: lattice_orbits },
        Criterion { name: "label normalization", budget: secs(60), run: crt_normalization },
        Criterion { name: "stabilizers", budget: secs(1), run: stabilizers },
        Criterion { name: "cohomology", budget: secs(30), run: cohomology },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let res = res.and_then(|()| {
            if elapsed <= c.budget {
                Ok(())
            } else {
                Err(format!("over budget of {:?}", c.budget))
            }
        });
        match res {
            Ok(()) => println!("PASS {:>2} {} ({:.2?})", i + 1, c.name, elapsed),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {} ({:.2?}): {}", i + 1, c.name, elapsed, msg);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
