use super::{OpKind, SchemeSpec};
use crate::error::{Error, Result};
use crate::model::{Potential, SpinorField};
use crate::spectral::{apply_w_flow, ensure_matching, Propagator, SpectralCache, WFlowCache};

/// Runs one scheme on one trajectory, reusing FFT plans and flow caches.
pub struct Evolver<'a> {
    spec: &'a SchemeSpec,
    potential: &'a Potential,
    propagator: Propagator<'a>,
    wcache: Option<WFlowCache>,
}

impl<'a> Evolver<'a> {
    pub fn new(spec: &'a SchemeSpec, potential: &'a Potential, cache: &'a SpectralCache) -> Self {
        let wcache = potential.is_time_independent().then(WFlowCache::new);
        Self { spec, potential, propagator: Propagator::new(cache), wcache }
    }

    pub fn spec(&self) -> &SchemeSpec {
        self.spec
    }

    /// One step `Phi^n -> Phi^{n+1}` over `[t_n, t_n + tau]`.
    pub fn step(&mut self, field: &mut SpinorField, tau: f64, t_n: f64) -> Result<()> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidStep(format!("tau must be positive and finite, got {tau}")));
        }
        self.apply(field, tau, t_n)
    }

    /// Runs the program with a signed step; `tau < 0` gives the adjoint direction.
    pub fn apply(&mut self, field: &mut SpinorField, tau: f64, t_n: f64) -> Result<()> {
        let cache = self.propagator.cache();
        ensure_matching(cache, field)?;
        let delta = cache.params().delta();
        for st in self.spec.steps().iter().rev() {
            let s = st.coeff * tau;
            match st.kind {
                OpKind::T => self.propagator.apply_t_flow(field, s)?,
                OpKind::W => match self.wcache.as_mut() {
                    Some(wc) => {
                        if self.potential.is_zero() {
                            continue;
                        }
                        let grid = *field.grid();
                        let phases = wc.phases(&grid, self.potential, s, delta);
                        let (p, q) = field.components_mut();
                        for ((a, b), z) in p.iter_mut().zip(q.iter_mut()).zip(phases) {
                            *a *= z;
                            *b *= z;
                        }
                    }
                    None => apply_w_flow(field, s, t_n + st.time_offset * tau, self.potential, delta),
                },
            }
        }
        Ok(())
    }

    /// `n_steps` steps from `t0`; step `n` starts at `t0 + n tau`.
    pub fn evolve(&mut self, field: &mut SpinorField, tau: f64, t0: f64, n_steps: usize) -> Result<()> {
        for n in 0..n_steps {
            self.step(field, tau, t0 + n as f64 * tau)?;
        }
        Ok(())
    }
}

/// One step of `spec`; see [`Evolver::step`].
pub fn step(
    field: &mut SpinorField,
    tau: f64,
    t_n: f64,
    spec: &SchemeSpec,
    potential: &Potential,
    cache: &SpectralCache,
) -> Result<()> {
    Evolver::new(spec, potential, cache).step(field, tau, t_n)
}

pub fn evolve(
    field: &mut SpinorField,
    tau: f64,
    t0: f64,
    n_steps: usize,
    spec: &SchemeSpec,
    potential: &Potential,
    cache: &SpectralCache,
) -> Result<()> {
    Evolver::new(spec, potential, cache).evolve(field, tau, t0, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gaussian_ic, mass, Grid, PhysParams};
    use crate::schemes::{catalog, CATALOG_NAMES};
    use crate::spectral::apply_t_flow;
    use num_complex::Complex64;

    fn setup() -> (Grid, SpectralCache, SpinorField) {
        let grid = Grid::new(1, -8.0, 8.0, 64).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let f = gaussian_ic(&grid, [&[0.0], &[1.0]]).unwrap();
        (grid, cache, f)
    }

    #[test]
    fn zero_potential_is_exact_split() {
        let (_, cache, f) = setup();
        let mut exact = f.clone();
        apply_t_flow(&mut exact, 0.3, &cache).unwrap();
        for name in CATALOG_NAMES {
            let spec = catalog(name).unwrap();
            let mut g = f.clone();
            step(&mut g, 0.3, 0.0, &spec, &Potential::Constant(0.0), &cache).unwrap();
            assert!(g.max_abs_diff(&exact) <= 1e-13, "{name}");
        }
    }

    #[test]
    fn constant_potential_gives_global_phase() {
        let (_, cache, f) = setup();
        let v = 0.8;
        let mut exact = f.clone();
        apply_t_flow(&mut exact, 0.3, &cache).unwrap();
        exact.scale(Complex64::from_polar(1.0, -0.3 * v));
        for name in CATALOG_NAMES {
            let spec = catalog(name).unwrap();
            let mut g = f.clone();
            step(&mut g, 0.3, 0.0, &spec, &Potential::Constant(v), &cache).unwrap();
            assert!(g.max_abs_diff(&exact) <= 1e-13, "{name}");
        }
    }

    #[test]
    fn rejects_bad_tau() {
        let (_, cache, mut f) = setup();
        let spec = catalog("S2").unwrap();
        for tau in [0.0, -0.1, f64::NAN] {
            assert!(matches!(
                step(&mut f, tau, 0.0, &spec, &Potential::Rational, &cache),
                Err(Error::InvalidStep(_))
            ));
        }
        let mut other = SpinorField::zeros(Grid::new(1, -8.0, 8.0, 32).unwrap());
        assert!(step(&mut other, 0.1, 0.0, &spec, &Potential::Rational, &cache).is_err());
    }

    #[test]
    fn evolve_matches_repeated_step() {
        let (_, cache, f) = setup();
        let spec = catalog("S6c").unwrap();
        let v = Potential::Rational;
        let mut a = f.clone();
        evolve(&mut a, 0.1, 0.0, 0, &spec, &v, &cache).unwrap();
        assert_eq!(a, f);
        evolve(&mut a, 0.1, 0.0, 2, &spec, &v, &cache).unwrap();
        let mut b = f.clone();
        step(&mut b, 0.1, 0.0, &spec, &v, &cache).unwrap();
        step(&mut b, 0.1, 0.1, &spec, &v, &cache).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cached_and_uncached_w_agree() {
        let (grid, cache, f) = setup();
        let spec = catalog("S4RK").unwrap();
        let cached = Potential::Rational;
        let uncached = Potential::Custom(crate::model::CustomPotential::new(false, |_, x| {
            (1.0 - x[0]) / (1.0 + x[0] * x[0])
        }));
        let mut a = f.clone();
        let mut b = f.clone();
        evolve(&mut a, 0.05, 0.0, 10, &spec, &cached, &cache).unwrap();
        evolve(&mut b, 0.05, 0.0, 10, &spec, &uncached, &cache).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-14);
        assert_eq!(*a.grid(), grid);
    }

    #[test]
    fn s6c_local_order() {
        // the discrete [W,[T,W]] only vanishes once V and the data are resolved
        let grid = Grid::new(1, -16.0, 16.0, 256).unwrap();
        let cache = SpectralCache::build(&PhysParams::classical(), &grid);
        let f = gaussian_ic(&grid, [&[0.0], &[1.0]]).unwrap();
        let spec = catalog("S6c").unwrap();
        let v = Potential::Rational;
        let local = |tau: f64| {
            let mut one = f.clone();
            step(&mut one, tau, 0.0, &spec, &v, &cache).unwrap();
            let mut two = f.clone();
            evolve(&mut two, tau / 2.0, 0.0, 2, &spec, &v, &cache).unwrap();
            one.max_abs_diff(&two)
        };
        let ratio = local(0.1) / local(0.05);
        assert!(ratio > 100.0 && ratio < 160.0, "ratio {ratio}");
    }

    #[test]
    fn mass_is_conserved() {
        let (_, cache, f) = setup();
        let m0 = mass(&f);
        for name in CATALOG_NAMES {
            let spec = catalog(name).unwrap();
            let mut g = f.clone();
            evolve(&mut g, 0.05, 0.0, 20, &spec, &Potential::Rational, &cache).unwrap();
            assert!((mass(&g) - m0).abs() / m0 <= 1e-13, "{name}");
        }
    }
}
