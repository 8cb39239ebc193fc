//! Physical parameters, periodic grids, potentials and the two-component
//! spinor field for the Dirac equation with an electric potential only.
//!
//! Storage convention: a 2D field is stored row-major over `(j, l)` where `j`
//! indexes the x-axis and `l` the y-axis, i.e. flat index `j * M_y + l`. The
//! periodic image node `x_M` is never stored. Use [`Grid::index`] and
//! [`Grid::unravel`] rather than computing offsets by hand.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The dimensionless parameters `delta`, `nu` and `epsilon`, each in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    delta: f64,
    nu: f64,
    epsilon: f64,
}

impl PhysParams {
    pub fn new(delta: f64, nu: f64, epsilon: f64) -> Result<Self> {
        for (name, value) in [("delta", delta), ("nu", nu), ("epsilon", epsilon)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self { delta, nu, epsilon })
    }

    /// `delta = nu = epsilon = 1`, the classical regime.
    pub fn classical() -> Self {
        Self { delta: 1.0, nu: 1.0, epsilon: 1.0 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// One periodic axis `(a, b)` with `m` stored nodes `x_j = a + j h`, `j = 0..m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub a: f64,
    pub b: f64,
    pub m: usize,
}

impl Axis {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidGrid(format!("need a < b, got a = {a}, b = {b}")));
        }
        if m < 2 || m % 2 != 0 {
            return Err(Error::InvalidGrid(format!("M must be even and >= 2, got {m}")));
        }
        Ok(Self { a, b, m })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.h()
    }

    /// Fourier frequency of FFT bin `k`, using the mode set `l = -M/2..M/2-1`.
    pub fn frequency(&self, k: usize) -> f64 {
        2.0 * PI * mode_index(k, self.m) as f64 / self.length()
    }
}

/// Maps an FFT bin `k` in `0..m` to the signed mode index `l` in `-m/2..m/2-1`.
pub fn mode_index(k: usize, m: usize) -> i64 {
    if k < m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// A uniform periodic grid in one or two dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    axes: [Axis; 2],
}

impl Grid {
    /// Same interval and mode count on every axis.
    pub fn new(dim: usize, a: f64, b: f64, m: usize) -> Result<Self> {
        let axis = Axis::new(a, b, m)?;
        match dim {
            1 => Ok(Self { dim, axes: [axis, axis] }),
            2 => Ok(Self { dim, axes: [axis, axis] }),
            _ => Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}"))),
        }
    }

    pub fn from_axes(axes: &[Axis]) -> Result<Self> {
        match axes {
            [x] => Ok(Self { dim: 1, axes: [Axis::new(x.a, x.b, x.m)?; 2] }),
            [x, y] => Ok(Self {
                dim: 2,
                axes: [Axis::new(x.a, x.b, x.m)?, Axis::new(y.a, y.b, y.m)?],
            }),
            _ => Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {}", axes.len()))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes[..self.dim]
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes()[k]
    }

    /// Number of stored nodes, `prod M`.
    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.m).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.axes().iter().map(Axis::h).product()
    }

    /// Flat offset of node `(j, l)`; `l` is ignored in 1D.
    pub fn index(&self, j: usize, l: usize) -> usize {
        if self.dim == 1 {
            j
        } else {
            j * self.axes[1].m + l
        }
    }

    /// Inverse of [`Grid::index`].
    pub fn unravel(&self, idx: usize) -> (usize, usize) {
        if self.dim == 1 {
            (idx, 0)
        } else {
            (idx / self.axes[1].m, idx % self.axes[1].m)
        }
    }

    /// Physical coordinates of the node at flat offset `idx`; unused entries are 0.
    pub fn coords(&self, idx: usize) -> [f64; 2] {
        let (j, l) = self.unravel(idx);
        if self.dim == 1 {
            [self.axes[0].node(j), 0.0]
        } else {
            [self.axes[0].node(j), self.axes[1].node(l)]
        }
    }

    /// Compatible grids share dimension, intervals and mode counts.
    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}D", self.dim)?;
        for ax in self.axes() {
            write!(f, " ({}, {})/{}", ax.a, ax.b, ax.m)?;
        }
        Ok(())
    }
}

/// Nodal values of the two-component wave function on a [`Grid`].
///
/// Components are stored as two separate planes so transforms operate on
/// contiguous memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: Grid,
    comps: [Vec<Complex64>; 2],
}

impl SpinorField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self { grid, comps: [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]] }
    }

    /// Samples `f(x)` at every node.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 2]) -> [Complex64; 2]) -> Self {
        let mut field = Self::zeros(grid);
        for idx in 0..grid.len() {
            let [p, q] = f(grid.coords(idx));
            field.comps[0][idx] = p;
            field.comps[1][idx] = q;
        }
        field
    }

    pub fn from_components(grid: Grid, phi1: Vec<Complex64>, phi2: Vec<Complex64>) -> Result<Self> {
        if phi1.len() != grid.len() || phi2.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} values per component, got {} and {}",
                grid.len(),
                phi1.len(),
                phi2.len()
            )));
        }
        Ok(Self { grid, comps: [phi1, phi2] })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, k: usize) -> &[Complex64] {
        &self.comps[k]
    }

    pub fn component_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.comps[k]
    }

    pub fn components_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        let [a, b] = &mut self.comps;
        (a, b)
    }

    pub fn get(&self, idx: usize) -> [Complex64; 2] {
        [self.comps[0][idx], self.comps[1][idx]]
    }

    pub fn set(&mut self, idx: usize, value: [Complex64; 2]) {
        self.comps[0][idx] = value[0];
        self.comps[1][idx] = value[1];
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Multiplies every entry by `z`.
    pub fn scale(&mut self, z: Complex64) {
        for v in self.comps.iter_mut().flatten() {
            *v *= z;
        }
    }

    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.comps
            .iter()
            .flatten()
            .zip(other.comps.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Subsamples onto a coarser grid over the same domain whose mode counts
    /// divide this grid's.
    pub fn restrict(&self, coarse: &Grid) -> Result<SpinorField> {
        if coarse.dim() != self.grid.dim() {
            return Err(Error::GridMismatch("restriction across dimensions".into()));
        }
        let mut stride = [1usize; 2];
        for (k, (fine, c)) in self.grid.axes().iter().zip(coarse.axes()).enumerate() {
            if fine.a != c.a || fine.b != c.b || fine.m % c.m != 0 {
                return Err(Error::GridMismatch(format!(
                    "cannot restrict {} onto {coarse}",
                    self.grid
                )));
            }
            stride[k] = fine.m / c.m;
        }
        let mut out = SpinorField::zeros(*coarse);
        for idx in 0..coarse.len() {
            let (j, l) = coarse.unravel(idx);
            let src = self.grid.index(j * stride[0], l * stride[1]);
            out.set(idx, self.get(src));
        }
        Ok(out)
    }
}

/// Initial datum with a unit-width Gaussian per component:
/// component `k` at node `x` is `exp(-|x - c_k|^2 / 2)`.
pub fn gaussian_ic(grid: &Grid, centers: [&[f64]; 2]) -> Result<SpinorField> {
    for c in centers {
        if c.len() != grid.dim() {
            return Err(Error::InvalidGrid(format!(
                "center {c:?} has {} coordinates on a {}D grid",
                c.len(),
                grid.dim()
            )));
        }
    }
    let dim = grid.dim();
    Ok(SpinorField::from_fn(*grid, |x| {
        let gauss = |c: &[f64]| {
            let r2: f64 = (0..dim).map(|k| (x[k] - c[k]).powi(2)).sum();
            Complex64::new((-0.5 * r2).exp(), 0.0)
        };
        [gauss(centers[0]), gauss(centers[1])]
    }))
}

/// Discrete mass `h^dim * sum_j |Phi_j|^2`.
pub fn mass(field: &SpinorField) -> f64 {
    let sum: f64 = field.comps.iter().flatten().map(|z| z.norm_sqr()).sum();
    field.grid.cell_volume() * sum
}

/// Rotation law of the honeycomb lattice vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaMode {
    /// theta(t) = pi
    Constant,
    /// theta(t) = pi + pi t
    Linear,
    /// theta(t) = pi + pi cos(pi t)
    Cosine,
}

impl ThetaMode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "constant" => Ok(Self::Constant),
            "linear" => Ok(Self::Linear),
            "cosine" => Ok(Self::Cosine),
            other => Err(Error::UnknownThetaMode(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Linear => "linear",
            Self::Cosine => "cosine",
        }
    }

    pub fn theta(&self, t: f64) -> f64 {
        match self {
            Self::Constant => PI,
            Self::Linear => PI + PI * t,
            Self::Cosine => PI + PI * (PI * t).cos(),
        }
    }
}

/// Tabulated potential with nearest-node lookup and no interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledPotential {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite potential sample".into()));
        }
        Ok(Self { grid, values })
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut idx = [0usize; 2];
        for (k, ax) in self.grid.axes().iter().enumerate() {
            let r = ((x[k] - ax.a) / ax.h()).round() as i64;
            idx[k] = r.rem_euclid(ax.m as i64) as usize;
        }
        self.values[self.grid.index(idx[0], idx[1])]
    }
}

type PotentialFn = dyn Fn(f64, &[f64]) -> f64 + Send + Sync;

/// User-supplied analytic potential.
#[derive(Clone)]
pub struct CustomPotential {
    f: Arc<PotentialFn>,
    time_independent: bool,
}

impl CustomPotential {
    pub fn new(time_independent: bool, f: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), time_independent }
    }
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("time_independent", &self.time_independent)
            .finish_non_exhaustive()
    }
}

/// Real electric potential `V(t, x)`.
#[derive(Debug, Clone)]
pub enum Potential {
    /// V = v everywhere.
    Constant(f64),
    /// The 1D potential `(1 - x) / (1 + x^2)`.
    Rational,
    /// Sum of three plane-wave cosines along rotating lattice directions.
    Honeycomb(ThetaMode),
    Sampled(SampledPotential),
    Custom(CustomPotential),
}

impl Potential {
    pub fn honeycomb(mode: &str) -> Result<Self> {
        Ok(Self::Honeycomb(ThetaMode::parse(mode)?))
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Rational => (1.0 - x[0]) / (1.0 + x[0] * x[0]),
            Self::Honeycomb(mode) => honeycomb_value(mode.theta(t), x[0], x[1]),
            Self::Sampled(s) => s.eval(x),
            Self::Custom(c) => (c.f)(t, x),
        }
    }

    /// Writes `V(t, x_j)` for every node of `grid` into `out`.
    pub fn sample_into(&self, t: f64, grid: &Grid, out: &mut Vec<f64>) {
        out.clear();
        match self {
            // cos(a x + b y) = cos(a x) cos(b y) - sin(a x) sin(b y), tabulated per axis
            Self::Honeycomb(mode) if grid.dim() == 2 => {
                let (ax, ay) = (grid.axis(0), grid.axis(1));
                out.resize(grid.len(), 0.0);
                let k = 4.0 * PI / 3f64.sqrt();
                let theta = mode.theta(t);
                for n in 0..3 {
                    let angle = theta + 2.0 * PI * n as f64 / 3.0;
                    let (a, b) = (k * angle.cos(), k * angle.sin());
                    let ys: Vec<(f64, f64)> = (0..ay.m).map(|l| (b * ay.node(l)).sin_cos()).collect();
                    for j in 0..ax.m {
                        let (sx, cx) = (a * ax.node(j)).sin_cos();
                        let row = &mut out[j * ay.m..(j + 1) * ay.m];
                        for (v, &(sy, cy)) in row.iter_mut().zip(&ys) {
                            *v += cx * cy - sx * sy;
                        }
                    }
                }
            }
            _ => out.extend((0..grid.len()).map(|i| self.eval(t, &grid.coords(i)))),
        }
    }

    /// Time-independent potentials allow W-flow phase caching.
    pub fn is_time_independent(&self) -> bool {
        match self {
            Self::Constant(_) | Self::Rational | Self::Sampled(_) => true,
            Self::Honeycomb(mode) => *mode == ThetaMode::Constant,
            Self::Custom(c) => c.time_independent,
        }
    }

    /// Whether `V` is identically zero (the exact-split case).
    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Constant(v) if *v == 0.0)
    }
}

fn honeycomb_value(theta: f64, x: f64, y: f64) -> f64 {
    let k = 4.0 * PI / 3f64.sqrt();
    (0..3)
        .map(|n| {
            let angle = theta + 2.0 * PI * n as f64 / 3.0;
            (k * (angle.cos() * x + angle.sin() * y)).cos()
        })
        .sum()
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn honeycomb_cosine_period_two(t in -5.0f64..5.0, x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let v = Potential::Honeycomb(ThetaMode::Cosine);
            prop_assert!((v.eval(t + 2.0, &[x, y]) - v.eval(t, &[x, y])).abs() <= 1e-12);
        }

        #[test]
        fn mass_is_phase_invariant(theta in 0.0f64..std::f64::consts::TAU, seed in any::<u64>()) {
            let g = Grid::new(1, -2.0, 2.0, 16).unwrap();
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5 };
            let f = SpinorField::from_fn(g, |_| [Complex64::new(next(), next()), Complex64::new(next(), next())]);
            let mut rotated = f.clone();
            rotated.scale(Complex64::from_polar(1.0, theta));
            prop_assert!((mass(&rotated) - mass(&f)).abs() <= 1e-15 * mass(&f).max(1.0));
        }

        #[test]
        fn potentials_are_finite_reals(t in -10.0f64..10.0, x in -30.0f64..30.0, y in -30.0f64..30.0) {
            for v in [Potential::Rational, Potential::Constant(0.5), Potential::Honeycomb(ThetaMode::Linear)] {
                prop_assert!(v.eval(t, &[x, y]).is_finite());
            }
        }
    }
}
