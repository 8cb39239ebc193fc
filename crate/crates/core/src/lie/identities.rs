//! Commutator identities used when simplifying the expansion.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{Algebra, Gen, LieTree};

/// `[[T,T,W],[T,W]] - [W,T,T,T,W]` reduced in `alg`.
pub fn identity_a4_difference(alg: &Algebra) -> super::LieElement {
    let lhs = LieTree::bracket(LieTree::from_letters("TTW"), LieTree::from_letters("TW"));
    let rhs = LieTree::from_letters("WTTTW");
    alg.reduce(&lhs).sub(&alg.reduce(&rhs))
}

/// Whether `[[T,T,W],[T,W]] = [W,T,T,T,W]` holds in `alg`.
pub fn verify_identity_a4(alg: &Algebra) -> bool {
    identity_a4_difference(alg).is_zero()
}

/// The commutators that vanish once `[W,[T,W]] = 0`, as right-nested letters.
pub const VANISHING: [&str; 7] = ["WWT", "TWWT", "WWWWT", "TWWWT", "TTWWT", "WWTTW", "TWTTW"];

/// `(label, reduces to zero)` for each entry of [`VANISHING`].
pub fn vanishing_suite(alg: &Algebra) -> Vec<(String, bool)> {
    let t = alg.generator(Gen::T);
    let w = alg.generator(Gen::W);
    VANISHING
        .iter()
        .map(|letters| {
            let xs: Vec<_> = letters.chars().map(|c| if c == 'T' { &t } else { &w }).collect();
            (LieTree::from_letters(letters).to_string(), alg.nest(&xs).is_zero())
        })
        .collect()
}

fn comm(a: &Matrix3<i64>, b: &Matrix3<i64>) -> Matrix3<i64> {
    a * b - b * a
}

fn nested4(a: &Matrix3<i64>, b: &Matrix3<i64>, c: &Matrix3<i64>, d: &Matrix3<i64>) -> Matrix3<i64> {
    comm(a, &comm(b, &comm(c, d)))
}

/// Both sides of the cyclic quadruple-commutator identity.
pub fn quadruple_sides(x: &Matrix3<i64>, y: &Matrix3<i64>, z: &Matrix3<i64>, w: &Matrix3<i64>) -> (Matrix3<i64>, Matrix3<i64>) {
    let lhs = nested4(x, y, z, w) + nested4(y, z, w, x) + nested4(z, w, x, y) + nested4(w, x, y, z);
    (lhs, comm(&comm(x, z), &comm(y, w)))
}

/// Checks the identity on `n_trials` random integer matrices with entries in `-9..=9`.
pub fn quadruple_identity_check(n_trials: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Matrix3::from_fn(|_, _| rng.gen_range(-9i64..=9));
    (0..n_trials.max(1)).all(|_| {
        let (x, y, z, w) = (draw(), draw(), draw(), draw());
        let (l, r) = quadruple_sides(&x, &y, &z, &w);
        l == r
    })
}
