//! Symmetric BCH composition and the expansion of the nine-exponential template
//! `e^{c4 W} e^{c3 T} e^{c2 W} e^{c1 T} e^{c0 W} e^{c1 T} e^{c2 W} e^{c3 T} e^{c4 W}`.

use super::algebra::{int, Algebra, Gen, LieElement};
use super::poly::{rat, CoeffPolynomial};

/// `U` with `e^X e^Y e^X = e^U` through grade 5.
pub fn symmetric_bch(alg: &Algebra, x: &LieElement, y: &LieElement) -> LieElement {
    let n = |xs: &[&LieElement]| alg.nest(xs);
    let terms = [
        (rat(1, 6), n(&[y, y, x])),
        (rat(-1, 6), n(&[x, x, y])),
        (rat(7, 360), n(&[x, x, x, x, y])),
        (rat(-1, 360), n(&[y, y, y, y, x])),
        (rat(1, 90), n(&[x, y, y, y, x])),
        (rat(1, 45), n(&[y, x, x, x, y])),
        (rat(-1, 60), n(&[x, x, y, y, x])),
        (rat(1, 30), n(&[y, y, x, x, y])),
    ];
    terms
        .iter()
        .fold(x.scale_rational(&int(2)).add(y), |acc, (c, t)| acc.add(&t.scale_rational(c)))
}

/// The nested exponents `V1..V4` of the template.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub v1: LieElement,
    pub v2: LieElement,
    pub v3: LieElement,
    pub v4: LieElement,
}

/// Expands the template in the given algebra.
pub fn expand_in(alg: &Algebra) -> Expansion {
    let c = CoeffPolynomial::var;
    let t = alg.generator(Gen::T);
    let w = alg.generator(Gen::W);
    let v1 = symmetric_bch(alg, &t.scale(&c(1)), &w.scale(&c(0)));
    let v2 = symmetric_bch(alg, &w.scale(&c(2)), &v1);
    let v3 = symmetric_bch(alg, &t.scale(&c(3)), &v2);
    let v4 = symmetric_bch(alg, &w.scale(&c(4)), &v3);
    Expansion { v1, v2, v3, v4 }
}

/// Expansion in the quotient algebra.
pub fn expand_scheme() -> Expansion {
    expand_in(Algebra::quotient())
}

/// Labels of the coefficients `a1..a5`.
pub const CONDITION_LABELS: [&str; 5] = ["T", "W", "[T,W,T]", "[T,T,T,T,W]", "[W,T,T,T,W]"];

/// The polynomials `a1..a5` of `V4`.
pub fn condition_polynomials() -> [CoeffPolynomial; 5] {
    let alg = Algebra::quotient();
    let v4 = expand_scheme().v4;
    CONDITION_LABELS.map(|l| alg.coefficient(&v4, l))
}

/// `a1 - 1, a2 - 1, a3, a4, a5`: the sixth-order conditions, each `= 0`.
pub fn order_conditions() -> [CoeffPolynomial; 5] {
    let [a1, a2, a3, a4, a5] = condition_polynomials();
    let one = CoeffPolynomial::one();
    [&a1 - &one, &a2 - &one, a3, a4, a5]
}
