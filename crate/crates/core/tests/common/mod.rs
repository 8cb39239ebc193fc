//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diracsplit::harness::{InitialCondition, Metrics, Problem};
use diracsplit::model::{Grid, PhysParams, Potential, SpinorField};

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(grid: Grid, rng: &mut impl Rng) -> SpinorField {
    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let n = grid.len();
    let p = (0..n).map(|_| c()).collect();
    let q = (0..n).map(|_| c()).collect();
    SpinorField::from_components(grid, p, q).unwrap()
}

/// Spectral derivative matrix on `m` periodic nodes of an interval of length `len`,
/// summed directly over modes `-m/2..m/2-1`.
pub fn fourier_derivative(m: usize, len: f64) -> CMat {
    let h = len / m as f64;
    CMat::from_fn(m, m, |j, l| {
        let mut s = Complex64::new(0.0, 0.0);
        for k in -(m as i64 / 2)..(m as i64 / 2) {
            let mu = 2.0 * PI * k as f64 / len;
            s += Complex64::new(0.0, mu) * Complex64::from_polar(1.0, mu * (j as f64 - l as f64) * h);
        }
        s / m as f64
    })
}

/// Dense 1D generator `-(1/eps) sigma_1 d/dx - i nu/(delta eps^2) sigma_3` on `(phi1; phi2)`.
pub fn dense_t_operator(m: usize, len: f64, p: &PhysParams) -> CMat {
    let d = fourier_derivative(m, len) * Complex64::new(-1.0 / p.epsilon(), 0.0);
    let mass = Complex64::new(0.0, -p.nu() / (p.delta() * p.epsilon() * p.epsilon()));
    let mut a = CMat::zeros(2 * m, 2 * m);
    for j in 0..m {
        a[(j, j)] = mass;
        a[(m + j, m + j)] = -mass;
    }
    a.view_mut((0, m), (m, m)).copy_from(&d);
    a.view_mut((m, 0), (m, m)).copy_from(&d);
    a
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols()).map(|c| a.column(c).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by Taylor series with scaling and squaring.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn stack(f: &SpinorField) -> Vec<Complex64> {
    f.component(0).iter().chain(f.component(1)).copied().collect()
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// The three metrics by exact rational summation; only the final square root is rounded.
pub fn exact_metrics(a: &SpinorField, b: &SpinorField) -> Metrics {
    let grid = *a.grid();
    let (mut s_phi, mut s_rho, mut s_j) = (BigRational::zero(), BigRational::zero(), BigRational::zero());
    let two = exact(2.0);
    for i in 0..grid.len() {
        let [ap, aq] = a.get(i);
        let [bp, bq] = b.get(i);
        let parts = |z: Complex64| (exact(z.re), exact(z.im));
        let ((apr, api), (aqr, aqi)) = (parts(ap), parts(aq));
        let ((bpr, bpi), (bqr, bqi)) = (parts(bp), parts(bq));
        for (x, y) in [(&apr, &bpr), (&api, &bpi), (&aqr, &bqr), (&aqi, &bqi)] {
            let d = x - y;
            s_phi += &d * &d;
        }
        let rho = |pr: &BigRational, pi: &BigRational, qr: &BigRational, qi: &BigRational| {
            pr * pr + pi * pi + qr * qr + qi * qi
        };
        let dr = rho(&apr, &api, &aqr, &aqi) - rho(&bpr, &bpi, &bqr, &bqi);
        s_rho += &dr * &dr;
        let j1 = |pr: &BigRational, pi: &BigRational, qr: &BigRational, qi: &BigRational| &two * (pr * qr + pi * qi);
        let j2 = |pr: &BigRational, pi: &BigRational, qr: &BigRational, qi: &BigRational| &two * (pr * qi - pi * qr);
        let d1 = j1(&apr, &api, &aqr, &aqi) - j1(&bpr, &bpi, &bqr, &bqi);
        s_j += &d1 * &d1;
        if grid.dim() == 2 {
            let d2 = j2(&apr, &api, &aqr, &aqi) - j2(&bpr, &bpi, &bqr, &bqi);
            s_j += &d2 * &d2;
        }
    }
    let w = exact(grid.cell_volume());
    let root = |s: BigRational| (w.clone() * s).to_f64().unwrap().sqrt();
    Metrics { e_phi: root(s_phi), e_rho: root(s_rho), e_j: root(s_j) }
}

/// The 1D nonrelativistic-regime testbed: `V = (1 - x)/(1 + x^2)`, Gaussians at 0 and 1.
pub fn testbed_1d(m: usize, t_final: f64) -> Problem {
    Problem {
        params: PhysParams::classical(),
        grid: Grid::new(1, -16.0, 16.0, m).unwrap(),
        potential: Potential::Rational,
        initial: InitialCondition::Gaussian { centers: [vec![0.0], vec![1.0]] },
        t_final,
    }
}

/// The desk-scale 2D honeycomb problem on `(-8, 8)^2` with `m` nodes per axis.
pub fn honeycomb_2d(mode: &str, m: usize, t_final: f64) -> Problem {
    Problem {
        params: PhysParams::classical(),
        grid: Grid::new(2, -8.0, 8.0, m).unwrap(),
        potential: Potential::honeycomb(mode).unwrap(),
        initial: InitialCondition::Gaussian { centers: [vec![0.0, 0.0], vec![1.0, 0.0]] },
        t_final,
    }
}
