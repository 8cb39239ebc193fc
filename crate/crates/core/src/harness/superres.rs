//! Uniform-in-epsilon error sweeps in the nonrelativistic regime.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::convergence::rates;
use super::metrics::error_metrics;
use super::reference::{evolve_problem, reference_solution, ReferenceCache, ReferenceProtocol};
use super::{run_pool, ErrorRecord, InitialCondition, Problem};
use crate::error::{Error, Result};
use crate::model::{Grid, PhysParams, Potential};
use crate::schemes::catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    /// Every step is an integer multiple of `eps^2 pi` for some listed `eps`.
    Resonant,
    Nonresonant,
}

impl Resonance {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "resonant" => Ok(Resonance::Resonant),
            "nonresonant" => Ok(Resonance::Nonresonant),
            _ => Err(Error::Sweep(format!("unknown resonance mode `{s}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Resonance::Resonant => "resonant",
            Resonance::Nonresonant => "nonresonant",
        }
    }
}

/// Sweep over `epsilons` x `tau0 / factor^k`, k = 0..=refinements.
///
/// Steps and epsilons are kept as exact rationals; when `tau0_pi` is set the
/// base step is `tau0 * pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: String,
    pub epsilons: Vec<Ratio<i64>>,
    pub tau0: Ratio<i64>,
    pub tau0_pi: bool,
    pub factor: i64,
    pub refinements: usize,
    pub resonance: Resonance,
    pub t_final: f64,
    pub domain: (f64, f64),
    pub m: usize,
    pub reference_scheme: String,
    /// Fixed reference step; by default `min(tau_min / 8, eps^2 / 32)` rounded to divide `t_final`.
    pub reference_tau: Option<f64>,
}

impl SweepSpec {
    /// The desk-scale resonant sweep: `tau0 = pi / 2`, `t = 2 pi`.
    pub fn resonant_default() -> Self {
        Self {
            scheme: "S6c".into(),
            epsilons: (0..6).map(|k| Ratio::new(1, 1 << k)).collect(),
            tau0: Ratio::new(1, 2),
            tau0_pi: true,
            factor: 4,
            refinements: 4,
            resonance: Resonance::Resonant,
            t_final: 2.0 * std::f64::consts::PI,
            domain: (-32.0, 32.0),
            m: 1024,
            reference_scheme: "S6c".into(),
            reference_tau: None,
        }
    }

    /// The desk-scale nonresonant sweep: `tau0 = 1`, `t = 4`.
    pub fn nonresonant_default() -> Self {
        Self {
            tau0: Ratio::from_integer(1),
            tau0_pi: false,
            resonance: Resonance::Nonresonant,
            t_final: 4.0,
            domain: (-16.0, 16.0),
            m: 512,
            ..Self::resonant_default()
        }
    }

    /// Exact step sizes, as rational multiples of pi when `tau0_pi` is set.
    pub fn rational_taus(&self) -> Vec<Ratio<i64>> {
        (0..=self.refinements as u32).map(|k| self.tau0 / self.factor.pow(k)).collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        let scale = if self.tau0_pi { std::f64::consts::PI } else { 1.0 };
        self.rational_taus().iter().map(|r| r.to_f64().unwrap() * scale).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.refinements < 3 {
            return Err(Error::Sweep(format!("need at least 3 refinements, got {}", self.refinements)));
        }
        if self.factor < 2 {
            return Err(Error::Sweep(format!("refinement factor must be at least 2, got {}", self.factor)));
        }
        if self.tau0 <= Ratio::zero() {
            return Err(Error::Sweep("tau0 must be positive".into()));
        }
        if self.epsilons.is_empty() {
            return Err(Error::Sweep("empty epsilon list".into()));
        }
        for e in &self.epsilons {
            if *e <= Ratio::zero() || *e > Ratio::from_integer(1) {
                return Err(Error::InvalidParameter { name: "epsilon", value: e.to_f64().unwrap_or(f64::NAN) });
            }
        }
        self.factor
            .checked_pow(self.refinements as u32)
            .and_then(|f| f.checked_mul(*self.tau0.denom()))
            .ok_or_else(|| Error::Sweep("refinement depth overflows exact bookkeeping".into()))?;
        if self.resonance == Resonance::Resonant {
            if !self.tau0_pi {
                return Err(Error::Sweep("resonant steps must be rational multiples of pi".into()));
            }
            for tau in self.rational_taus() {
                let hit = self.epsilons.iter().any(|e| (tau / (e * e)).is_integer());
                if !hit {
                    return Err(Error::Sweep(format!(
                        "step {tau}*pi is not an integer multiple of eps^2*pi for any listed eps"
                    )));
                }
            }
        }
        for tau in self.taus() {
            super::reference::steps_for(self.t_final, tau)?;
        }
        Ok(())
    }

    fn problem(&self, eps: f64) -> Result<Problem> {
        Ok(Problem {
            params: PhysParams::new(1.0, 1.0, eps)?,
            grid: Grid::new(1, self.domain.0, self.domain.1, self.m)?,
            potential: Potential::Rational,
            initial: InitialCondition::Gaussian { centers: [vec![0.0], vec![1.0]] },
            t_final: self.t_final,
        })
    }

    fn reference_tau_for(&self, eps: f64) -> f64 {
        if let Some(t) = self.reference_tau {
            return t;
        }
        let tau_min = self.taus().into_iter().fold(f64::INFINITY, f64::min);
        let target = (tau_min / 8.0).min(eps * eps / 32.0);
        self.t_final / (self.t_final / target).ceil()
    }
}

/// Errors `e[eps][tau]` with per-column maxima and rates.
#[derive(Debug, Clone)]
pub struct SuperresTable {
    pub epsilons: Vec<f64>,
    pub taus: Vec<f64>,
    pub errors: Vec<Vec<f64>>,
    /// Rates along each row.
    pub row_rates: Vec<Vec<f64>>,
    pub column_max: Vec<f64>,
    pub max_rates: Vec<f64>,
    /// Every cell, rows in `epsilons` order.
    pub records: Vec<ErrorRecord>,
}

pub fn superres_sweep(spec: &SweepSpec, cache: Option<&ReferenceCache>, workers: usize) -> Result<SuperresTable> {
    spec.validate()?;
    let scheme = catalog(&spec.scheme)?;
    let taus = spec.taus();
    let epsilons: Vec<f64> = spec.epsilons.iter().map(|e| e.to_f64().unwrap()).collect();
    let rows = run_pool(workers, epsilons.clone(), |eps| -> Result<Vec<ErrorRecord>> {
        let problem = spec.problem(eps)?;
        let protocol = ReferenceProtocol::new(&spec.reference_scheme, spec.reference_tau_for(eps));
        let reference = reference_solution(&problem, &protocol, &taus, cache)?;
        taus.iter()
            .map(|&tau| {
                let (field, wall, drift) = evolve_problem(&problem, &scheme, tau)?;
                let m = error_metrics(&field, &reference)?;
                let rec = ErrorRecord {
                    scheme: scheme.name().to_string(),
                    h: problem.grid.axis(0).h(),
                    tau,
                    epsilon: eps,
                    t_final: spec.t_final,
                    e_phi: m.e_phi,
                    e_rho: m.e_rho,
                    e_j: m.e_j,
                    mass_drift: drift,
                    wall_time: wall,
                    rate: f64::NAN,
                };
                rec.validate()?;
                Ok(rec)
            })
            .collect()
    })?;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut row_rates = Vec::new();
    for row in rows {
        let mut row = row?;
        let e: Vec<f64> = row.iter().map(|r| r.e_phi).collect();
        let rr = rates(&taus, &e);
        for (r, rate) in row.iter_mut().zip(&rr) {
            r.rate = *rate;
        }
        records.extend(row);
        errors.push(e);
        row_rates.push(rr);
    }
    let column_max: Vec<f64> =
        (0..taus.len()).map(|k| errors.iter().map(|row| row[k]).fold(0.0, f64::max)).collect();
    let max_rates = rates(&taus, &column_max);
    Ok(SuperresTable { epsilons, taus, errors, row_rates, column_max, max_rates, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_steps_are_exact_multiples() {
        let s = SweepSpec::resonant_default();
        s.validate().unwrap();
        for tau in s.rational_taus() {
            assert!(s.epsilons.iter().any(|e| (tau / (e * e)).is_integer()));
        }
        let taus = s.taus();
        assert!((taus[4] - std::f64::consts::PI / 512.0).abs() < 1e-16);
    }

    #[test]
    fn resonant_rejects_off_grid_steps() {
        let mut s = SweepSpec::resonant_default();
        s.epsilons = vec![Ratio::new(1, 1), Ratio::new(1, 2)];
        assert!(matches!(s.validate(), Err(Error::Sweep(_))));
        let mut s = SweepSpec::resonant_default();
        s.tau0_pi = false;
        assert!(s.validate().is_err());
    }

    #[test]
    fn needs_three_refinements() {
        let mut s = SweepSpec::nonresonant_default();
        s.refinements = 2;
        assert!(s.validate().is_err());
    }

    #[test]
    fn reference_step_divides_t_final() {
        let s = SweepSpec::nonresonant_default();
        for eps in [1.0, 0.25, 1.0 / 32.0] {
            let t = s.reference_tau_for(eps);
            assert!(t <= eps * eps / 32.0 && t * 8.0 <= 1.0 / 256.0);
            super::super::reference::steps_for(s.t_final, t).unwrap();
        }
    }

    #[test]
    fn small_sweep_runs() {
        let s = SweepSpec {
            epsilons: vec![Ratio::new(1, 1), Ratio::new(1, 2)],
            refinements: 3,
            factor: 2,
            tau0: Ratio::new(1, 2),
            t_final: 1.0,
            domain: (-8.0, 8.0),
            m: 64,
            ..SweepSpec::nonresonant_default()
        };
        let t = superres_sweep(&s, None, 1).unwrap();
        assert_eq!(t.errors.len(), 2);
        assert_eq!(t.column_max.len(), 4);
        assert!(t.max_rates[0].is_nan());
        assert!(t.column_max.windows(2).all(|w| w[1] < w[0]));
    }
}
