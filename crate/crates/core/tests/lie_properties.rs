mod common;

use common::{expm, rng, CMat};
use diracsplit::lie::{
    expand_in, multi_start, order_conditions, symmetric_bch, table_constants, table_constants_exact, Algebra, Gen,
    LieElement, LieTree, OrderSystem, NVARS,
};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn eval_tree(tree: &LieTree, t: &CMat, w: &CMat) -> CMat {
    match tree {
        LieTree::Gen(Gen::T) => t.clone(),
        LieTree::Gen(Gen::W) => w.clone(),
        LieTree::Br(a, b) => {
            let (x, y) = (eval_tree(a, t, w), eval_tree(b, t, w));
            &x * &y - &y * &x
        }
    }
}

/// Evaluates an element with constant coefficients on matrices.
fn eval_element(alg: &Algebra, x: &LieElement, t: &CMat, w: &CMat, c: &[f64; NVARS]) -> CMat {
    let n = t.nrows();
    let mut out = CMat::zeros(n, n);
    for (&i, p) in x.coeffs() {
        let m = eval_tree(&alg.basis()[i].tree, t, w);
        out += m * Complex64::new(p.eval_at_doubles(c), 0.0);
    }
    out
}

fn random_matrix(n: usize, r: &mut impl Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

fn random_element(alg: &Algebra, grade: usize, picks: &[(usize, i64)]) -> LieElement {
    let of_grade: Vec<usize> = (0..alg.basis().len()).filter(|&i| alg.basis()[i].grade == grade).collect();
    picks.iter().fold(LieElement::zero(), |acc, &(k, c)| {
        let e = alg.basis_element(of_grade[k % of_grade.len()]);
        acc.add(&e.scale_rational(&BigRational::from_integer(c.into())))
    })
}

fn grades() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=3, 1usize..=3, 1usize..=3).prop_filter("total grade at most 5", |(a, b, c)| a + b + c <= 5)
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..8, -5i64..=5), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        (ga, gb, gc) in grades(), pa in picks(), pb in picks(), pc in picks(), quotient in any::<bool>()
    ) {
        let alg = if quotient { Algebra::quotient() } else { Algebra::free() };
        let x = random_element(alg, ga, &pa);
        let y = random_element(alg, gb, &pb);
        let z = random_element(alg, gc, &pc);
        prop_assert!(alg.bracket(&x, &y).add(&alg.bracket(&y, &x)).is_zero());
        let jacobi = alg.nest(&[&x, &y, &z]).add(&alg.nest(&[&y, &z, &x])).add(&alg.nest(&[&z, &x, &y]));
        prop_assert!(jacobi.is_zero());
        prop_assert!(!jacobi.truncated());
    }
}

#[test]
fn symmetric_bch_matches_matrix_exponentials() {
    let alg = Algebra::free();
    let u = symmetric_bch(alg, &alg.generator(Gen::T), &alg.generator(Gen::W));
    let mut r = rng(11);
    for _ in 0..5 {
        let (a, b) = (random_matrix(4, &mut r), random_matrix(4, &mut r));
        let err = |s: f64| {
            let (t, w) = (&a * Complex64::new(s, 0.0), &b * Complex64::new(s, 0.0));
            let lhs = expm(&eval_element(alg, &u, &t, &w, &[0.0; NVARS]));
            let rhs = expm(&t) * expm(&w) * expm(&t);
            (lhs - rhs).norm()
        };
        let (e1, e2) = (err(0.08), err(0.04));
        // the truncation starts at grade 7
        assert!(e1 / e2 > 100.0, "ratio {}", e1 / e2);
    }
}

#[test]
fn template_expansion_matches_matrix_product() {
    let alg = Algebra::free();
    let v4 = expand_in(alg).v4;
    let c = [0.3, -0.7, 0.45, 0.2, -0.15];
    let mut r = rng(12);
    let (a, b) = (random_matrix(3, &mut r), random_matrix(3, &mut r));
    let err = |s: f64| {
        let (t, w) = (&a * Complex64::new(s, 0.0), &b * Complex64::new(s, 0.0));
        let e = |m: &CMat, k: usize| expm(&(m * Complex64::new(c[k], 0.0)));
        let prod = e(&w, 4) * e(&t, 3) * e(&w, 2) * e(&t, 1) * e(&w, 0) * e(&t, 1) * e(&w, 2) * e(&t, 3) * e(&w, 4);
        (expm(&eval_element(alg, &v4, &t, &w, &c)) - prod).norm()
    };
    let (e1, e2) = (err(0.1), err(0.05));
    assert!(e1 / e2 > 100.0, "ratio {}", e1 / e2);
}

#[test]
fn stored_constants_solve_the_order_conditions() {
    let exact = table_constants_exact();
    for (k, p) in order_conditions().iter().enumerate() {
        let r = p.eval_exact(&exact);
        let v = num_traits::ToPrimitive::to_f64(&r).unwrap();
        assert!(v.abs() <= 1e-15, "condition {k}: {v:e}");
    }
}

#[test]
fn newton_starts_converge_to_roots() {
    let sys = OrderSystem::new();
    let reports = multi_start(&sys, 40, 3, 1e-14, 60);
    let roots: Vec<_> = reports.into_iter().filter_map(Result::ok).collect();
    assert!(!roots.is_empty());
    for rep in &roots {
        assert!(rep.residual_norm() <= 1e-14, "{:e}", rep.residual_norm());
    }
    let table = table_constants();
    let hits = roots
        .iter()
        .filter(|rep| rep.root.iter().zip(&table).all(|(a, b)| (a - b).abs() <= 1e-12))
        .count();
    assert!(hits > 0, "no start reached the stored root");
}
