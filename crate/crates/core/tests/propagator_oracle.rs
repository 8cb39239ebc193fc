mod common;

use common::{dense_t_operator, expm, random_field, rng, stack};
use diracsplit::model::{Grid, PhysParams, SpinorField};
use diracsplit::spectral::{apply_t_flow, SpectralCache};
use num_complex::Complex64;
use rand::Rng;

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn check_against_dense(params: PhysParams, a: f64, b: f64, seed: u64) {
    let mut r = rng(seed);
    for m in [4, 8, 16] {
        let grid = Grid::new(1, a, b, m).unwrap();
        let cache = SpectralCache::build(&params, &grid);
        let gen = dense_t_operator(m, b - a, &params);
        for _ in 0..10 {
            let s: f64 = r.gen_range(-2.0..2.0);
            let u = expm(&(&gen * Complex64::new(s, 0.0)));
            for _ in 0..50 {
                let f = random_field(grid, &mut r);
                let mut g = f.clone();
                apply_t_flow(&mut g, s, &cache).unwrap();
                let want = &u * nalgebra::DVector::from_vec(stack(&f));
                let err = max_diff(&stack(&g), want.as_slice());
                assert!(err <= 1e-12, "M = {m}, s = {s}: deviation {err:e}");
            }
        }
    }
}

#[test]
fn classical_regime_matches_dense_exponential() {
    check_against_dense(PhysParams::classical(), -4.0, 4.0, 1);
}

#[test]
fn scaled_parameters_match_dense_exponential() {
    check_against_dense(PhysParams::new(0.5, 0.75, 0.5).unwrap(), -3.0, 5.0, 2);
    check_against_dense(PhysParams::new(1.0, 1.0, 0.25).unwrap(), -8.0, 8.0, 3);
}

#[test]
fn two_dimensional_flow_reduces_to_one_dimensional() {
    let params = PhysParams::classical();
    let g1 = Grid::new(1, -4.0, 4.0, 32).unwrap();
    let g2 = Grid::new(2, -4.0, 4.0, 32).unwrap();
    let f1 = random_field(g1, &mut rng(7));
    let f2 = SpinorField::from_fn(g2, |x| {
        let j = ((x[0] + 4.0) / g1.axis(0).h()).round() as usize;
        f1.get(j)
    });
    let (mut a, mut b) = (f1.clone(), f2.clone());
    apply_t_flow(&mut a, 0.83, &SpectralCache::build(&params, &g1)).unwrap();
    apply_t_flow(&mut b, 0.83, &SpectralCache::build(&params, &g2)).unwrap();
    for idx in 0..g2.len() {
        let (j, _) = g2.unravel(idx);
        let (x, y) = (b.get(idx), a.get(j));
        assert!((x[0] - y[0]).norm() <= 1e-12 && (x[1] - y[1]).norm() <= 1e-12);
    }
}
