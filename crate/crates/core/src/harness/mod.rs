//! Experiment drivers: references, error metrics, convergence studies,
//! super-resolution sweeps and mass monitoring.

mod convergence;
mod mass;
mod metrics;
mod reference;
mod superres;

pub use convergence::{
    fit_order, rates, spatial_convergence, temporal_convergence, time_per_step, SpatialStudy,
    TemporalStudy, ROUNDOFF_FACTOR,
};
pub use mass::mass_series;
pub use metrics::{error_metrics, field_norms, Metrics, METRIC_NAMES};
pub use reference::{
    evolve_problem, prepare_reference, reference_solution, steps_for, Reference, ReferenceCache, ReferenceProtocol,
    CACHE_ENV, CACHE_VERSION,
};
pub use superres::{superres_sweep, Resonance, SuperresTable, SweepSpec};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{gaussian_ic, Grid, PhysParams, Potential, SpinorField};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Unit Gaussians `exp(-|x - c_k|^2 / 2)` per component.
    Gaussian { centers: [Vec<f64>; 2] },
    /// The same pair of values at every node.
    Uniform([f64; 2]),
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid) -> Result<SpinorField> {
        match self {
            InitialCondition::Gaussian { centers } => gaussian_ic(grid, [&centers[0], &centers[1]]),
            InitialCondition::Uniform(v) => {
                Ok(SpinorField::from_fn(*grid, |_| [Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0)]))
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            InitialCondition::Gaussian { centers } => format!("gaussian:{:?}:{:?}", centers[0], centers[1]),
            InitialCondition::Uniform(v) => format!("uniform:{:?}:{:?}", v[0], v[1]),
        }
    }
}

/// Everything needed to evolve one initial-value problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub params: PhysParams,
    pub grid: Grid,
    pub potential: Potential,
    pub initial: InitialCondition,
    pub t_final: f64,
}

impl Problem {
    pub fn initial_field(&self) -> Result<SpinorField> {
        self.initial.sample(&self.grid)
    }

    pub fn with_grid(&self, grid: Grid) -> Self {
        Self { grid, ..self.clone() }
    }

    /// Canonical text for hashing; `None` for potentials without a stable description.
    pub fn describe(&self) -> Option<String> {
        let pot = match &self.potential {
            Potential::Constant(v) => format!("constant:{v:?}"),
            Potential::Rational => "rational".into(),
            Potential::Honeycomb(mode) => format!("honeycomb:{}", mode.name()),
            Potential::Sampled(_) | Potential::Custom(_) => return None,
        };
        let axes: Vec<String> =
            self.grid.axes().iter().map(|a| format!("({:?},{:?},{})", a.a, a.b, a.m)).collect();
        Some(format!(
            "dim={};axes={};delta={:?};nu={:?};epsilon={:?};potential={pot};ic={};t_final={:?}",
            self.grid.dim(),
            axes.join(""),
            self.params.delta(),
            self.params.nu(),
            self.params.epsilon(),
            self.initial.describe(),
            self.t_final
        ))
    }
}

/// One experiment row.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub scheme: String,
    pub h: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub t_final: f64,
    pub e_phi: f64,
    pub e_rho: f64,
    pub e_j: f64,
    pub mass_drift: f64,
    pub wall_time: f64,
    /// Rate against the previous row; `NaN` for the first.
    pub rate: f64,
}

impl ErrorRecord {
    pub fn metrics(&self) -> Metrics {
        Metrics { e_phi: self.e_phi, e_rho: self.e_rho, e_j: self.e_j }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.e_phi, self.e_rho, self.e_j, self.mass_drift].iter().all(|v| v.is_finite() && *v >= 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Sweep(format!("non-finite or negative error in {} at tau {}", self.scheme, self.tau)))
        }
    }
}

/// Runs `f` on a rayon pool of `workers` threads; results keep input order.
pub(crate) fn run_pool<T: Send, R: Send>(
    workers: usize,
    items: Vec<T>,
    f: impl Fn(T) -> R + Sync + Send,
) -> Result<Vec<R>> {
    use rayon::prelude::*;
    if workers <= 1 {
        return Ok(items.into_iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Sweep(format!("worker pool: {e}")))?;
    Ok(pool.install(|| items.into_par_iter().map(f).collect()))
}
