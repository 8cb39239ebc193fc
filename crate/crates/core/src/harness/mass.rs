use super::Problem;
use crate::error::Result;
use crate::model::mass;
use crate::schemes::{Evolver, SchemeSpec};
use crate::spectral::SpectralCache;

/// Relative mass deviation `|m_n - m_0| / m_0` after each of `n_steps` steps.
///
/// A zero initial field gives all zeros.
pub fn mass_series(spec: &SchemeSpec, problem: &Problem, tau: f64, n_steps: usize) -> Result<Vec<f64>> {
    let cache = SpectralCache::build(&problem.params, &problem.grid);
    let mut field = problem.initial_field()?;
    let m0 = mass(&field);
    let mut evolver = Evolver::new(spec, &problem.potential, &cache);
    let mut out = Vec::with_capacity(n_steps);
    for n in 0..n_steps {
        evolver.step(&mut field, tau, n as f64 * tau)?;
        out.push(if m0 == 0.0 { 0.0 } else { (mass(&field) - m0).abs() / m0 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::InitialCondition;
    use crate::model::{Grid, PhysParams, Potential};
    use crate::schemes::catalog;

    fn problem(initial: InitialCondition) -> Problem {
        Problem {
            params: PhysParams::classical(),
            grid: Grid::new(1, -8.0, 8.0, 64).unwrap(),
            potential: Potential::Rational,
            initial,
            t_final: 1.0,
        }
    }

    #[test]
    fn zero_field_is_zero_drift() {
        let p = problem(InitialCondition::Uniform([0.0, 0.0]));
        let s = mass_series(&catalog("S6c").unwrap(), &p, 0.1, 20).unwrap();
        assert!(s.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn drift_stays_at_roundoff() {
        let p = problem(InitialCondition::Gaussian { centers: [vec![0.0], vec![1.0]] });
        let s = mass_series(&catalog("S4c").unwrap(), &p, 0.05, 200).unwrap();
        assert_eq!(s.len(), 200);
        assert!(s.iter().all(|&d| d <= 1e-13), "{:?}", s.iter().cloned().fold(0.0, f64::max));
    }
}
