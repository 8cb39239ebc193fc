//! Damped Newton iteration on the five order conditions.

use nalgebra::{Matrix5, Vector5};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bch::order_conditions;
use super::poly::{CoeffPolynomial, FloatPoly, NVARS};
use crate::error::{Error, Result};
use crate::schemes::constant_text;

pub struct OrderSystem {
    exact: [CoeffPolynomial; 5],
    float: [FloatPoly; 5],
    jacobian: Vec<Vec<FloatPoly>>,
}

impl Default for OrderSystem {
    fn default() -> Self {
        Self::new()
    }
}

impl OrderSystem {
    pub fn new() -> Self {
        let exact = order_conditions();
        let float = exact.clone().map(|p| p.to_float());
        let jacobian = exact
            .iter()
            .map(|p| (0..NVARS).map(|k| p.derivative(k).to_float()).collect())
            .collect();
        Self { exact, float, jacobian }
    }

    pub fn polynomials(&self) -> &[CoeffPolynomial; 5] {
        &self.exact
    }

    pub fn residual(&self, x: &[f64; NVARS]) -> [f64; 5] {
        std::array::from_fn(|i| self.float[i].eval(x))
    }

    pub fn jacobian(&self, x: &[f64; NVARS]) -> Matrix5<f64> {
        Matrix5::from_fn(|i, j| self.jacobian[i][j].eval(x))
    }

    /// Residuals evaluated exactly at the given doubles, then rounded.
    pub fn exact_residual(&self, x: &[f64; NVARS]) -> [f64; 5] {
        std::array::from_fn(|i| self.exact[i].eval_at_doubles(x))
    }

    /// Residuals evaluated exactly at exact rational inputs.
    pub fn exact_residual_at(&self, x: &[BigRational; NVARS]) -> [f64; 5] {
        std::array::from_fn(|i| self.exact[i].eval_exact(x).to_f64().unwrap_or(f64::NAN))
    }
}

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub root: [f64; NVARS],
    pub iterations: usize,
    /// Exactly evaluated residuals at `root`.
    pub residuals: [f64; 5],
}

impl NewtonReport {
    pub fn residual_norm(&self) -> f64 {
        max_abs(&self.residuals)
    }
}

/// Damped Newton from `initial` until the max-norm residual is at most `tol`.
///
/// Once the tolerance is met a few undamped steps polish the root while the
/// residual keeps decreasing.
pub fn newton_solve(
    system: &OrderSystem,
    initial: [f64; NVARS],
    tol: f64,
    max_iter: usize,
) -> Result<NewtonReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    let mut x = initial;
    let mut r = system.residual(&x);
    let mut it = 0;
    loop {
        if max_abs(&r) <= tol {
            let exact = system.exact_residual(&x);
            if max_abs(&exact) <= tol {
                let (x, exact) = polish(system, x, exact);
                return Ok(NewtonReport { root: x, iterations: it, residuals: exact });
            }
        }
        if it == max_iter {
            return Err(Error::NoConvergence { iterations: it, residual: max_abs(&r) });
        }
        let dx = newton_direction(system, &x, &r).ok_or(Error::SingularJacobian { iteration: it })?;
        let norm0 = max_abs(&r);
        let mut lambda = 1.0;
        loop {
            let trial: [f64; NVARS] = std::array::from_fn(|k| x[k] + lambda * dx[k]);
            let rt = system.residual(&trial);
            if max_abs(&rt) < (1.0 - 1e-4 * lambda) * norm0 || lambda < 1.0 / 1024.0 {
                x = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence { iterations: it + 1, residual: f64::INFINITY });
        }
        it += 1;
    }
}

fn newton_direction(system: &OrderSystem, x: &[f64; NVARS], r: &[f64; 5]) -> Option<Vector5<f64>> {
    let j = system.jacobian(x);
    let dx = j.lu().solve(&-Vector5::from_column_slice(r))?;
    dx.iter().all(|v| v.is_finite()).then_some(dx)
}

fn polish(system: &OrderSystem, mut x: [f64; NVARS], mut exact: [f64; 5]) -> ([f64; NVARS], [f64; 5]) {
    for _ in 0..3 {
        let r = system.residual(&x);
        let Some(dx) = newton_direction(system, &x, &r) else { break };
        let trial: [f64; NVARS] = std::array::from_fn(|k| x[k] + dx[k]);
        let et = system.exact_residual(&trial);
        if max_abs(&et) >= max_abs(&exact) {
            break;
        }
        x = trial;
        exact = et;
    }
    (x, exact)
}

/// Newton from `n` seeded uniform starts in `[-3, 3]^5`.
pub fn multi_start(system: &OrderSystem, n: usize, seed: u64, tol: f64, max_iter: usize) -> Vec<Result<NewtonReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let init: [f64; NVARS] = std::array::from_fn(|_| rng.gen_range(-3.0..=3.0));
            newton_solve(system, init, tol, max_iter)
        })
        .collect()
}

/// Parses a plain decimal (`-0.125`, `1.5e-3`) into the exact rational it denotes.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut n: BigInt = digits.parse().ok()?;
    if neg {
        n = -n;
    }
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(n * Pow::pow(&ten, shift as u32))
    } else {
        BigRational::new(n, Pow::pow(&ten, (-shift) as u32))
    })
}

/// The stored compact-scheme constants `c0..c4` as exact rationals.
pub fn table_constants_exact() -> [BigRational; NVARS] {
    std::array::from_fn(|k| {
        let name = format!("s6c.c{k}");
        parse_decimal(constant_text(&name).expect("stored constant")).expect("decimal constant")
    })
}

/// The stored constants rounded to the nearest doubles.
pub fn table_constants() -> [f64; NVARS] {
    std::array::from_fn(|k| crate::schemes::constant(&format!("s6c.c{k}")))
}

/// Rounds each entry to `digits` significant digits.
pub fn round_significant(x: [f64; NVARS], digits: usize) -> [f64; NVARS] {
    x.map(|v| format!("{v:.*e}", digits.saturating_sub(1)).parse().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("-0.125").unwrap(), BigRational::new((-1).into(), 8.into()));
        assert_eq!(parse_decimal("1.5e2").unwrap(), BigRational::from_integer(150.into()));
        assert_eq!(parse_decimal("25e-2").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_decimal("0").unwrap(), BigRational::zero());
        assert_eq!(parse_decimal("1.").unwrap(), BigRational::one());
        for bad in ["", "abc", "1.2.3", "e5", "-"] {
            assert!(parse_decimal(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn rounding_to_three_digits() {
        let r = round_significant([0.567527, -0.579852, -0.1437147, 1.0798524, 0.35995], 3);
        assert_eq!(r, [0.568, -0.58, -0.144, 1.08, 0.36]);
    }

    #[test]
    fn fixed_point_needs_no_iterations() {
        let sys = OrderSystem::new();
        let rep = newton_solve(&sys, table_constants(), 1e-13, 20).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.residual_norm() <= 1e-13);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let sys = OrderSystem::new();
        assert!(newton_solve(&sys, table_constants(), 0.0, 5).is_err());
    }

    #[test]
    fn singular_start_is_reported() {
        let sys = OrderSystem::new();
        // at the origin every derivative of the higher conditions vanishes
        match newton_solve(&sys, [0.0; 5], 1e-13, 20) {
            Err(Error::SingularJacobian { iteration: 0 }) => {}
            other => panic!("{other:?}"),
        }
    }
}
