//! Exact split flows for the Fourier pseudospectral discretization.
//!
//! The kinetic generator `T = -(1/eps) sum_j sigma_j d_j - i nu/(delta eps^2) sigma_3`
//! is diagonal in Fourier space up to a 2x2 block per mode,
//! `Gamma = -(i/eps) sum_j mu_j sigma_j - (i nu/(delta eps^2)) sigma_3 = -i Q D Q^*`,
//! so `exp(c tau T)` is applied mode by mode. The potential generator
//! `W = -(i/delta) V(t, x) I_2` is a pointwise phase.
//!
//! Forward transforms carry the `1/M` factor per axis:
//! `U~_l = (1/M) sum_j U_j exp(-2 i j l pi / M)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{mode_index, Grid, PhysParams, Potential, SpinorField};

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Eigendata of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    /// Frequencies `(mu_x, mu_y)`; `mu_y = 0` in 1D.
    pub mu: [f64; 2],
    /// `sqrt(nu^2 + delta^2 eps^2 |mu|^2)`
    pub eta: f64,
    /// Diagonal of `D`: `(eta, -eta) / (delta eps^2)`.
    pub eigvals: [f64; 2],
    /// Unitary eigenvector matrix `Q` (columns are eigenvectors).
    pub q: Mat2,
}

impl ModeData {
    fn new(params: &PhysParams, mu: [f64; 2]) -> Self {
        let (delta, nu, eps) = (params.delta(), params.nu(), params.epsilon());
        let de = delta * eps;
        let mu2 = mu[0] * mu[0] + mu[1] * mu[1];
        let eta = (nu * nu + de * de * mu2).sqrt();
        // eta + nu >= 2 nu > 0, so the normalisation never degenerates.
        let norm = 1.0 / (2.0 * eta * (eta + nu)).sqrt();
        let diag = Complex64::new((eta + nu) * norm, 0.0);
        let off = Complex64::new(de * mu[0], de * mu[1]) * norm;
        let q = [[diag, -off.conj()], [off, diag]];
        let scale = 1.0 / (delta * eps * eps);
        Self { mu, eta, eigvals: [eta * scale, -eta * scale], q }
    }

    /// `Q exp(-i s D) Q^*`, the mode's flow over time `s`.
    pub fn flow(&self, s: f64) -> Mat2 {
        let e = [
            Complex64::from_polar(1.0, -s * self.eigvals[0]),
            Complex64::from_polar(1.0, -s * self.eigvals[1]),
        ];
        let q = &self.q;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, val) in row.iter_mut().enumerate() {
                *val = q[r][0] * e[0] * q[c][0].conj() + q[r][1] * e[1] * q[c][1].conj();
            }
        }
        out
    }
}

/// Per-mode eigendata for a fixed `(params, grid)` pair.
///
/// Modes are stored in FFT-bin order with the same row-major layout as
/// [`SpinorField`]; use [`SpectralCache::mode`] for signed indices.
#[derive(Debug, Clone)]
pub struct SpectralCache {
    params: PhysParams,
    grid: Grid,
    modes: Vec<ModeData>,
}

impl SpectralCache {
    pub fn build(params: &PhysParams, grid: &Grid) -> Self {
        let modes = (0..grid.len())
            .map(|idx| {
                let (kx, ky) = grid.unravel(idx);
                let mu = if grid.dim() == 1 {
                    [grid.axis(0).frequency(kx), 0.0]
                } else {
                    [grid.axis(0).frequency(kx), grid.axis(1).frequency(ky)]
                };
                ModeData::new(params, mu)
            })
            .collect();
        Self { params: *params, grid: *grid, modes }
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn modes(&self) -> &[ModeData] {
        &self.modes
    }

    /// Mode with signed index `l` (x) and `m` (y, ignored in 1D), each in `-M/2..M/2-1`.
    pub fn mode(&self, l: i64, m: i64) -> &ModeData {
        let bin = |l: i64, n: usize| l.rem_euclid(n as i64) as usize;
        let kx = bin(l, self.grid.axis(0).m);
        let ky = if self.grid.dim() == 2 { bin(m, self.grid.axis(1).m) } else { 0 };
        &self.modes[self.grid.index(kx, ky)]
    }

    /// Signed mode indices of the bin at flat offset `idx`.
    pub fn signed_index(&self, idx: usize) -> (i64, i64) {
        let (kx, ky) = self.grid.unravel(idx);
        let l = mode_index(kx, self.grid.axis(0).m);
        let m = if self.grid.dim() == 2 { mode_index(ky, self.grid.axis(1).m) } else { 0 };
        (l, m)
    }

    /// The symbol `Gamma` of `T` at the given mode, built directly from the Pauli matrices.
    pub fn gamma(&self, mode: &ModeData) -> Mat2 {
        let (delta, nu, eps) = (self.params.delta(), self.params.nu(), self.params.epsilon());
        let a = -I / eps;
        let m = nu / (delta * eps * eps);
        // -(i/eps)(mu_x sigma_1 + mu_y sigma_2) - i m sigma_3
        [
            [-I * m, a * Complex64::new(mode.mu[0], -mode.mu[1])],
            [a * Complex64::new(mode.mu[0], mode.mu[1]), I * m],
        ]
    }
}

/// Batched FFTs over a 1D or 2D grid with the library's normalisation.
pub struct FourierTransform {
    grid: Grid,
    fwd: Vec<Arc<dyn Fft<f64>>>,
    inv: Vec<Arc<dyn Fft<f64>>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl FourierTransform {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let fwd: Vec<_> = grid.axes().iter().map(|a| planner.plan_fft_forward(a.m)).collect();
        let inv: Vec<_> = grid.axes().iter().map(|a| planner.plan_fft_inverse(a.m)).collect();
        let scratch_len = fwd
            .iter()
            .chain(&inv)
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let transposed = if grid.dim() == 2 { vec![ZERO; grid.len()] } else { Vec::new() };
        Self { grid: *grid, fwd, inv, scratch: vec![ZERO; scratch_len], transposed }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Unnormalised forward DFT in place.
    pub fn forward_raw(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    /// Unnormalised inverse DFT in place.
    pub fn inverse_raw(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// Forward transform with the `1/M` factor per axis.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
        let s = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    fn run(&mut self, data: &mut [Complex64], forward: bool) {
        assert_eq!(data.len(), self.grid.len(), "transform length mismatch");
        let plans = if forward { &self.fwd } else { &self.inv };
        if self.grid.dim() == 1 {
            plans[0].process_with_scratch(data, &mut self.scratch);
            return;
        }
        let (mx, my) = (self.grid.axis(0).m, self.grid.axis(1).m);
        // rows are contiguous along y
        plans[1].process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.transposed, mx, my);
        plans[0].process_with_scratch(&mut self.transposed, &mut self.scratch);
        transpose(&self.transposed, data, my, mx);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 16;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Fourier coefficients `U~_l` of both components, in FFT-bin order.
pub fn forward_transform(field: &SpinorField) -> SpinorField {
    let mut ft = FourierTransform::new(field.grid());
    let mut out = field.clone();
    let (a, b) = out.components_mut();
    ft.forward(a);
    ft.forward(b);
    out
}

/// Nodal values from Fourier coefficients; inverse of [`forward_transform`].
pub fn inverse_transform(coeffs: &SpinorField) -> SpinorField {
    let mut ft = FourierTransform::new(coeffs.grid());
    let mut out = coeffs.clone();
    let (a, b) = out.components_mut();
    ft.inverse(a);
    ft.inverse(b);
    out
}

/// Applies `exp(s T)` for arbitrary real `s = c tau`.
///
/// Holds per-worker FFT buffers and memoises the per-mode 2x2 flow matrices
/// for every distinct `s` it has seen.
pub struct Propagator<'a> {
    cache: &'a SpectralCache,
    fft: FourierTransform,
    flows: HashMap<u64, Vec<[Complex64; 4]>>,
}

impl<'a> Propagator<'a> {
    pub fn new(cache: &'a SpectralCache) -> Self {
        Self { cache, fft: FourierTransform::new(cache.grid()), flows: HashMap::new() }
    }

    pub fn cache(&self) -> &'a SpectralCache {
        self.cache
    }

    pub fn apply_t_flow(&mut self, field: &mut SpinorField, s: f64) -> Result<()> {
        self.cache.grid().ensure_same(field.grid())?;
        if s == 0.0 {
            return Ok(());
        }
        let cache = self.cache;
        let norm = 1.0 / cache.grid().len() as f64;
        let mats = self.flows.entry(s.to_bits()).or_insert_with(|| {
            cache
                .modes()
                .iter()
                .map(|m| {
                    let u = m.flow(s);
                    [u[0][0], u[0][1], u[1][0], u[1][1]]
                })
                .collect()
        });
        let (p, q) = field.components_mut();
        self.fft.forward_raw(p);
        self.fft.forward_raw(q);
        for ((a, b), u) in p.iter_mut().zip(q.iter_mut()).zip(mats.iter()) {
            let (x, y) = (*a, *b);
            let (na, nb) = (u[0] * x + u[1] * y, u[2] * x + u[3] * y);
            // each mode's flow is unitary; rescale away the rounding so the
            // mass does not drift systematically over many steps
            let r = norm * ((x.norm_sqr() + y.norm_sqr()) / (na.norm_sqr() + nb.norm_sqr())).sqrt();
            let r = if r.is_finite() { r } else { norm };
            *a = na * r;
            *b = nb * r;
        }
        self.fft.inverse_raw(p);
        self.fft.inverse_raw(q);
        Ok(())
    }
}

/// Applies `exp(c tau T)` with a fresh propagator.
pub fn apply_t_flow(field: &mut SpinorField, s: f64, cache: &SpectralCache) -> Result<()> {
    Propagator::new(cache).apply_t_flow(field, s)
}

/// Multiplies each node by `exp(-i s V(t_eval, x_j) / delta)`.
pub fn apply_w_flow(field: &mut SpinorField, s: f64, t_eval: f64, potential: &Potential, delta: f64) {
    if potential.is_zero() || s == 0.0 {
        return;
    }
    let grid = *field.grid();
    let mut v = Vec::with_capacity(grid.len());
    potential.sample_into(t_eval, &grid, &mut v);
    let (p, q) = field.components_mut();
    for ((a, b), v) in p.iter_mut().zip(q.iter_mut()).zip(v) {
        let z = Complex64::from_polar(1.0, -s * v / delta);
        *a *= z;
        *b *= z;
    }
}

/// Memoised W-flow phase factors for a time-independent potential.
///
/// One unit-modulus factor per node and per distinct `s = c tau`.
#[derive(Debug, Default)]
pub struct WFlowCache {
    samples: Option<Vec<f64>>,
    phases: HashMap<u64, Vec<Complex64>>,
}

impl WFlowCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Phase factors `exp(-i s V(x_j) / delta)` for every node.
    pub fn phases(&mut self, grid: &Grid, potential: &Potential, s: f64, delta: f64) -> &[Complex64] {
        let samples = self.samples.get_or_insert_with(|| {
            let mut v = Vec::with_capacity(grid.len());
            potential.sample_into(0.0, grid, &mut v);
            v
        });
        self.phases
            .entry(s.to_bits())
            .or_insert_with(|| samples.iter().map(|v| Complex64::from_polar(1.0, -s * v / delta)).collect())
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

pub(crate) fn ensure_matching(cache: &SpectralCache, field: &SpinorField) -> Result<()> {
    cache.grid().ensure_same(field.grid()).map_err(|_| {
        Error::GridMismatch(format!("field on {} but cache built for {}", field.grid(), cache.grid()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mass;
    use std::f64::consts::PI;

    fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    fn adjoint(a: &Mat2) -> Mat2 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }

    fn max_entry(a: &Mat2) -> f64 {
        a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_field(grid: Grid, seed: u64) -> SpinorField {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        SpinorField::from_fn(grid, |_| [Complex64::new(next(), next()), Complex64::new(next(), next())])
    }

    #[test]
    fn zero_mode_closed_form() {
        let grid = Grid::new(1, 0.0, 2.0 * PI, 8).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let m0 = cache.mode(0, 0);
        assert_eq!(m0.mu[0], 0.0);
        assert_eq!(m0.eta, 1.0);
        assert_eq!(m0.eigvals, [1.0, -1.0]);
        let id = [[Complex64::new(1.0, 0.0), ZERO], [ZERO, Complex64::new(1.0, 0.0)]];
        assert!(max_entry(&[[m0.q[0][0] - id[0][0], m0.q[0][1]], [m0.q[1][0], m0.q[1][1] - id[1][1]]]) < 1e-16);

        let m1 = cache.mode(1, 0);
        assert!((m1.mu[0] - 1.0).abs() < 1e-15);
        assert!((m1.eta - 2f64.sqrt()).abs() < 1e-15);
        assert!((m1.eigvals[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((m1.eigvals[1] + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_q_matches_closed_form() {
        let params = PhysParams::new(0.7, 0.4, 0.9).unwrap();
        let grid = Grid::new(1, -3.0, 5.0, 16).unwrap();
        let cache = SpectralCache::build(&params, &grid);
        let de = 0.7 * 0.9;
        for l in -8..8 {
            let m = cache.mode(l, 0);
            let mu = 2.0 * PI * l as f64 / 8.0;
            let eta = (0.16 + de * de * mu * mu).sqrt();
            let n = 1.0 / (2.0 * eta * (eta + 0.4)).sqrt();
            assert!((m.q[0][0].re - (eta + 0.4) * n).abs() < 1e-15);
            assert!((m.q[0][1].re + de * mu * n).abs() < 1e-15);
            assert!((m.q[1][0].re - de * mu * n).abs() < 1e-15);
            assert!(m.q.iter().flatten().all(|z| z.im.abs() < 1e-16));
        }
    }

    #[test]
    fn eigendata_reconstructs_gamma() {
        for params in [PhysParams::classical(), PhysParams::new(0.3, 0.8, 0.05).unwrap()] {
            let grid = Grid::new(2, -4.0, 4.0, 16).unwrap();
            let cache = SpectralCache::build(&params, &grid);
            for mode in cache.modes() {
                let qq = mat_mul(&adjoint(&mode.q), &mode.q);
                let unit = [[qq[0][0] - 1.0, qq[0][1]], [qq[1][0], qq[1][1] - 1.0]];
                assert!(max_entry(&unit) <= 1e-14);
                let d = [[Complex64::new(mode.eigvals[0], 0.0), ZERO], [ZERO, Complex64::new(mode.eigvals[1], 0.0)]];
                let qdq = mat_mul(&mat_mul(&mode.q, &d), &adjoint(&mode.q));
                let g = cache.gamma(mode);
                let scale = mode.eigvals[0].abs().max(1.0);
                let mut worst: f64 = 0.0;
                for r in 0..2 {
                    for c in 0..2 {
                        worst = worst.max((g[r][c] + I * qdq[r][c]).norm());
                    }
                }
                assert!(worst <= 1e-13 * scale, "{worst}");
                assert!(mode.eta >= params.nu());
            }
        }
    }

    #[test]
    fn two_dimensional_mode_eigenvalues() {
        // (b - a) = 2 pi so that l = m = 1 gives mu = (1, 1)
        let grid = Grid::new(2, 0.0, 2.0 * PI, 8).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let m = cache.mode(1, 1);
        assert!((m.mu[0] - 1.0).abs() < 1e-15 && (m.mu[1] - 1.0).abs() < 1e-15);
        assert!((m.eigvals[0] - 3f64.sqrt()).abs() < 1e-15);
        assert!((m.eigvals[1] + 3f64.sqrt()).abs() < 1e-15);
        // eigenvalues of i Gamma from the characteristic polynomial:
        // i Gamma is Hermitian and traceless, so lambda^2 = -det(i Gamma)
        let g = cache.gamma(m);
        let ig = [[I * g[0][0], I * g[0][1]], [I * g[1][0], I * g[1][1]]];
        let det = ig[0][0] * ig[1][1] - ig[0][1] * ig[1][0];
        assert!(((-det).re.sqrt() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn transform_conventions() {
        let grid = Grid::new(1, 0.0, 1.0, 8).unwrap();
        let c = Complex64::new(0.3, -1.2);
        let f = SpinorField::from_fn(grid, |_| [c, c]);
        let ft = forward_transform(&f);
        assert!((ft.component(0)[0] - c).norm() < 1e-15);
        assert!(ft.component(0)[1..].iter().all(|z| z.norm() < 1e-15));

        let mut k = 0;
        let wave = SpinorField::from_fn(grid, |_| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0);
            k += 1;
            [z, ZERO]
        });
        let ft = forward_transform(&wave);
        assert!((ft.component(0)[1] - 1.0).norm() < 1e-14);
        for (i, z) in ft.component(0).iter().enumerate() {
            if i != 1 {
                assert!(z.norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn two_dimensional_transform_matches_direct_sum() {
        let grid = Grid::from_axes(&[
            crate::model::Axis::new(0.0, 1.0, 4).unwrap(),
            crate::model::Axis::new(0.0, 1.0, 6).unwrap(),
        ])
        .unwrap();
        let f = random_field(grid, 3);
        let ft = forward_transform(&f);
        for idx in 0..grid.len() {
            let (kx, ky) = grid.unravel(idx);
            let mut sum = ZERO;
            for src in 0..grid.len() {
                let (j, l) = grid.unravel(src);
                let phase = -2.0 * PI * ((j * kx) as f64 / 4.0 + (l * ky) as f64 / 6.0);
                sum += f.component(1)[src] * Complex64::from_polar(1.0, phase);
            }
            assert!((sum / 24.0 - ft.component(1)[idx]).norm() < 1e-14);
        }
    }

    #[test]
    fn t_flow_zero_time_is_identity() {
        let grid = Grid::new(1, -2.0, 2.0, 16).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let f = random_field(grid, 9);
        let mut g = f.clone();
        apply_t_flow(&mut g, 0.0, &cache).unwrap();
        assert!(g.max_abs_diff(&f) <= 1e-15);
    }

    #[test]
    fn t_flow_constant_field() {
        let grid = Grid::new(1, -2.0, 2.0, 16).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let mut f = SpinorField::from_fn(grid, |_| [Complex64::new(1.0, 0.0), ZERO]);
        apply_t_flow(&mut f, PI, &cache).unwrap();
        for idx in 0..grid.len() {
            let v = f.get(idx);
            assert!((v[0] + 1.0).norm() < 1e-14 && v[1].norm() < 1e-14);
        }
    }

    #[test]
    fn t_flow_grid_mismatch() {
        let grid = Grid::new(1, -2.0, 2.0, 16).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let mut f = SpinorField::zeros(Grid::new(1, -2.0, 2.0, 8).unwrap());
        assert!(matches!(apply_t_flow(&mut f, 0.1, &cache), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn w_flow_examples() {
        let grid = Grid::new(1, -2.0, 2.0, 16).unwrap();
        let f = random_field(grid, 5);
        let mut g = f.clone();
        apply_w_flow(&mut g, 0.7, 0.0, &Potential::Constant(0.0), 1.0);
        assert_eq!(g, f);

        let delta = 0.6;
        let mut g = f.clone();
        apply_w_flow(&mut g, 2.0 * PI, 0.0, &Potential::Constant(delta), delta);
        assert!(g.max_abs_diff(&f) < 1e-14);

        let grid = Grid::new(1, -1.0, 1.0, 2).unwrap();
        let mut g = SpinorField::from_fn(grid, |_| [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        apply_w_flow(&mut g, 1.0, 0.0, &Potential::Rational, 1.0);
        // node 1 sits at x = 0 where V = 1
        let expected = Complex64::from_polar(1.0, -1.0);
        assert!((g.get(1)[0] - expected).norm() < 1e-15);
        assert!((g.get(1)[1] - expected).norm() < 1e-15);
    }

    #[test]
    fn w_cache_factors_are_unimodular() {
        let grid = Grid::new(2, -3.0, 3.0, 16).unwrap();
        let mut wc = WFlowCache::new();
        let v = Potential::honeycomb("constant").unwrap();
        let phases = wc.phases(&grid, &v, 0.37, 0.8).to_vec();
        assert!(phases.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-15));
        let mut a = random_field(grid, 1);
        let mut b = a.clone();
        apply_w_flow(&mut a, 0.37, 0.0, &v, 0.8);
        let (p, q) = b.components_mut();
        for (i, z) in phases.iter().enumerate() {
            p[i] *= z;
            q[i] *= z;
        }
        assert!(a.max_abs_diff(&b) < 1e-15);
        wc.phases(&grid, &v, 0.37, 0.8);
        assert_eq!(wc.len(), 1);
    }

    #[test]
    fn flows_are_unitary() {
        let grid = Grid::new(2, -3.0, 3.0, 16).unwrap();
        let params = PhysParams::new(1.0, 0.5, 0.3).unwrap();
        let cache = SpectralCache::build(&params, &grid);
        let f = random_field(grid, 17);
        let m0 = mass(&f);
        let mut g = f.clone();
        apply_t_flow(&mut g, 0.731, &cache).unwrap();
        assert!((mass(&g) - m0).abs() <= 1e-13 * m0);
        apply_w_flow(&mut g, -1.3, 0.2, &Potential::honeycomb("linear").unwrap(), 1.0);
        assert!((mass(&g) - m0).abs() <= 1e-13 * m0);
    }
}
