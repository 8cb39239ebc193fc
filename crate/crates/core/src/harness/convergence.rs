//! Temporal and spatial convergence studies.

use std::time::Instant;

use super::metrics::{error_metrics, field_norms, Metrics, METRIC_NAMES};
use super::reference::{evolve_problem, steps_for, Reference};
use super::{run_pool, ErrorRecord, Problem};
use crate::error::{Error, Result};
use crate::model::Grid;
use crate::schemes::{catalog, Evolver, SchemeSpec};
use crate::spectral::SpectralCache;

/// Multiple of machine epsilon times the solution norm below which errors are roundoff.
pub const ROUNDOFF_FACTOR: f64 = 1e3;

/// `log(e[k-1]/e[k]) / log(x[k-1]/x[k])`, with `NaN` in the first slot.
pub fn rates(x: &[f64], e: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NAN; e.len().min(x.len())];
    for k in 1..out.len() {
        out[k] = (e[k - 1] / e[k]).ln() / (x[k - 1] / x[k]).ln();
    }
    out
}

/// Least-squares slope of `log e` against `log tau` over the points above `floor`.
///
/// Fewer than three such points is reported as saturated.
pub fn fit_order(taus: &[f64], errors: &[f64], floor: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = taus
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > floor && e.is_finite())
        .map(|(&t, &e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Saturated { floor });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Result of a temporal convergence run.
#[derive(Debug, Clone)]
pub struct TemporalStudy {
    pub scheme: String,
    pub records: Vec<ErrorRecord>,
    /// Per-metric floor: the larger of 10x the reference self-error and roundoff.
    pub floor: Metrics,
}

impl TemporalStudy {
    pub fn taus(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.tau).collect()
    }

    /// Fitted order for metric `k` (see [`METRIC_NAMES`]).
    pub fn order_for(&self, k: usize) -> Result<f64> {
        let errs: Vec<f64> = self.records.iter().map(|r| r.metrics().get(k)).collect();
        fit_order(&self.taus(), &errs, self.floor.get(k))
    }

    /// Fitted order of `e_phi`.
    pub fn order(&self) -> Result<f64> {
        self.order_for(0)
    }

    /// Number of points above the `e_phi` floor.
    pub fn points_above_floor(&self) -> usize {
        self.records.iter().filter(|r| r.e_phi > self.floor.e_phi).count()
    }

    pub fn summary(&self) -> String {
        let fits: Vec<String> = (0..3)
            .map(|k| match self.order_for(k) {
                Ok(p) => format!("{}: order {p:.2}", METRIC_NAMES[k]),
                Err(_) => format!("{}: saturated", METRIC_NAMES[k]),
            })
            .collect();
        format!("{} {}", self.scheme, fits.join(", "))
    }
}

pub(crate) fn floor_of(reference: &Reference) -> Metrics {
    reference
        .self_error
        .zip(reference.norms, |s, n| (10.0 * s).max(ROUNDOFF_FACTOR * f64::EPSILON * n))
}

/// Runs `scheme` at every step in `taus` and compares against `reference`.
pub fn temporal_convergence(
    scheme: &str,
    taus: &[f64],
    problem: &Problem,
    reference: &Reference,
    workers: usize,
) -> Result<TemporalStudy> {
    let spec = catalog(scheme)?;
    problem.grid.ensure_same(reference.field.grid())?;
    for &tau in taus {
        steps_for(problem.t_final, tau)?;
    }
    let runs = run_pool(workers, taus.to_vec(), |tau| -> Result<ErrorRecord> {
        let (field, wall, drift) = evolve_problem(problem, &spec, tau)?;
        let m = error_metrics(&field, &reference.field)?;
        Ok(ErrorRecord {
            scheme: spec.name().to_string(),
            h: problem.grid.axis(0).h(),
            tau,
            epsilon: problem.params.epsilon(),
            t_final: problem.t_final,
            e_phi: m.e_phi,
            e_rho: m.e_rho,
            e_j: m.e_j,
            mass_drift: drift,
            wall_time: wall,
            rate: f64::NAN,
        })
    })?;
    let mut records = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let errs: Vec<f64> = records.iter().map(|r| r.e_phi).collect();
    for (r, rate) in records.iter_mut().zip(rates(taus, &errs)) {
        r.rate = rate;
        r.validate()?;
    }
    Ok(TemporalStudy { scheme: spec.name().to_string(), records, floor: floor_of(reference) })
}

/// Result of a spatial convergence run.
#[derive(Debug, Clone)]
pub struct SpatialStudy {
    pub scheme: String,
    /// One record per grid; `rate` holds the ratio `e[k-1]/e[k]`.
    pub records: Vec<ErrorRecord>,
    /// Roundoff level of the reference field.
    pub floor: Metrics,
}

impl SpatialStudy {
    /// Successive `e_phi` ratios; `NaN` in the first slot.
    pub fn ratios(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.rate).collect()
    }
}

/// Runs `scheme` at fixed `tau` on grids with `sizes[k]` nodes per axis.
///
/// The reference is the same scheme and step on `problem.grid`, whose node
/// count must be a multiple of every entry in `sizes`; it is restricted to
/// each coarse grid for comparison.
pub fn spatial_convergence(
    scheme: &str,
    sizes: &[usize],
    tau: f64,
    problem: &Problem,
    workers: usize,
) -> Result<SpatialStudy> {
    let spec = catalog(scheme)?;
    let fine = problem.grid;
    let mut grids = Vec::with_capacity(sizes.len());
    for &m in sizes {
        let axes: Vec<_> = fine.axes().iter().map(|a| crate::model::Axis::new(a.a, a.b, m)).collect::<Result<_>>()?;
        let g = Grid::from_axes(&axes)?;
        if fine.axes().iter().any(|a| a.m % m != 0 || a.m == m) {
            return Err(Error::GridMismatch(format!(
                "reference grid with {} nodes per axis does not strictly refine {m}",
                fine.axis(0).m
            )));
        }
        grids.push(g);
    }
    let (reference, _, _) = evolve_problem(problem, &spec, tau)?;
    let norms = field_norms(&reference);
    let runs = run_pool(workers, grids, |g: Grid| -> Result<ErrorRecord> {
        let sub = problem.with_grid(g);
        let (field, wall, drift) = evolve_problem(&sub, &spec, tau)?;
        let m = error_metrics(&field, &reference.restrict(&g)?)?;
        Ok(ErrorRecord {
            scheme: spec.name().to_string(),
            h: g.axis(0).h(),
            tau,
            epsilon: problem.params.epsilon(),
            t_final: problem.t_final,
            e_phi: m.e_phi,
            e_rho: m.e_rho,
            e_j: m.e_j,
            mass_drift: drift,
            wall_time: wall,
            rate: f64::NAN,
        })
    })?;
    let mut records = runs.into_iter().collect::<Result<Vec<_>>>()?;
    for k in 1..records.len() {
        records[k].rate = records[k - 1].e_phi / records[k].e_phi;
    }
    for r in &records {
        r.validate()?;
    }
    Ok(SpatialStudy {
        scheme: spec.name().to_string(),
        records,
        floor: norms.map(|n| ROUNDOFF_FACTOR * f64::EPSILON * n),
    })
}

/// Per-step wall time of each scheme, in seconds.
///
/// Runs are interleaved and the minimum over `repeats` rounds of `steps`
/// steps is kept, which suppresses scheduler noise.
pub fn time_per_step(
    schemes: &[&SchemeSpec],
    problem: &Problem,
    tau: f64,
    steps: usize,
    repeats: usize,
) -> Result<Vec<f64>> {
    if steps == 0 || repeats == 0 {
        return Err(Error::Sweep("timing needs at least one step and one repeat".into()));
    }
    let cache = SpectralCache::build(&problem.params, &problem.grid);
    let mut evolvers: Vec<Evolver> = schemes.iter().map(|s| Evolver::new(s, &problem.potential, &cache)).collect();
    let mut best = vec![f64::INFINITY; schemes.len()];
    let init = problem.initial_field()?;
    for round in 0..=repeats {
        for (k, ev) in evolvers.iter_mut().enumerate() {
            let mut field = init.clone();
            let start = Instant::now();
            ev.evolve(&mut field, tau, 0.0, steps)?;
            let dt = start.elapsed().as_secs_f64() / steps as f64;
            // round 0 warms the caches
            if round > 0 {
                best[k] = best[k].min(dt);
            }
        }
    }
    Ok(best)
}
